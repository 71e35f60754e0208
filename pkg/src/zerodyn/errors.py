"""Exception and warning types raised by zerodyn."""


class ZerodynError(Exception):
    """Base class for all zerodyn errors."""


class SingularityError(ZerodynError, ArithmeticError):
    """Two zeros coincide, so a formula dividing by their difference is undefined."""


class CollisionError(SingularityError):
    """Zeros collide along a trajectory.

    Attributes
    ----------
    time : float or None
        Time at which the collision was detected.
    """

    def __init__(self, message, time=None):
        if time is not None:
            message = f"{message} (t = {time:.17g})"
        super().__init__(message)
        self.time = time


class DegenerateModesError(ZerodynError):
    """The characteristic quartic has (numerically) repeated roots."""


class NumericalError(ZerodynError):
    """An iterative numerical procedure failed."""


class ConvergenceError(NumericalError):
    """Root finding did not converge.

    Attributes
    ----------
    residuals : numpy.ndarray
        ``|p(x_i)|`` at the last iterate.
    """

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class TrackingError(NumericalError):
    """Continuity tracking could not resolve the motion of the zeros."""

    def __init__(self, message, time=None):
        if time is not None:
            message = f"{message} (t = {time:.17g})"
        super().__init__(message)
        self.time = time


class IntegrationError(NumericalError):
    """The ODE integrator failed for a reason other than a collision."""


class ScenarioError(ValueError):
    """A scenario description is malformed or inconsistent."""


class ConditioningWarning(UserWarning):
    """A linear system was solved but is badly conditioned."""
