"""Exception hierarchy shared by all modules."""


class PlasmaFilmError(Exception):
    """Base class for every error raised by this package."""


class ConvergenceError(PlasmaFilmError):
    """An iterative kernel exhausted its budget.

    ``estimate`` and ``error`` carry the best value reached so far, when one
    exists.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class NonFiniteError(PlasmaFilmError):
    """An integrand or series term produced NaN or infinity."""


class PhaseStepError(PlasmaFilmError):
    """A sampled phase jumps too far between neighbours, or the function vanishes."""


class NewtonError(ConvergenceError):
    """Newton iteration diverged or hit a vanishing derivative."""


class DispersionZeroError(PlasmaFilmError):
    """The discrete zero of the dispersion function could not be located.

    ``unpolished`` holds the factorization estimate when it was computed.
    """

    def __init__(self, message, unpolished=None):
        super().__init__(message)
        self.unpolished = unpolished


class DegenerateModeError(PlasmaFilmError):
    """A pole of the mode ladder coincides with the Drude pole."""


class ImpedancePoleError(PlasmaFilmError):
    """An impedance or P-factor denominator vanishes."""


class NoResonanceError(PlasmaFilmError):
    """No extremum was found in a spectrum."""
