"""Exception and warning types shared across the package."""


class QuasipotError(Exception):
    """Base class for all errors raised by this package."""


class AmbiguousNearRelation(QuasipotError):
    """An integer relation residual fell in the gray band (tol, 10*tol)."""


class DegenerateDirection(UserWarning):
    """Embedding direction parallel to a coordinate axis: the potential
    loses a quasiperiod.  The degenerate potential is still returned."""


class NoOpenLines(QuasipotError):
    """No window-spanning level component was found at any probed scale."""


class WindowTooSmall(QuasipotError):
    """Spanning verdicts at the full and half window disagree too often."""


class IsotropicComponent(QuasipotError):
    """Principal variances of a component are too close to define a
    mean direction."""


class NoFit(QuasipotError):
    """No integer vector within the search bound annihilates the measured
    direction to tolerance."""


class AmbiguousFit(QuasipotError):
    """The best integer-direction fit does not beat the runner-up by the
    required uniqueness margin."""


class TrackingLost(QuasipotError):
    """Nearest-neighbour tracking of a marked level line jumped by more
    than half the inter-line spacing in one phase step."""


class NotRegular(QuasipotError):
    """An operation requiring open level lines was called at a level
    without spanning components."""


class BudgetExhausted(QuasipotError):
    """A classification ran out of its grid/window budget.

    Carries the partial evidence gathered so far in ``self.evidence``.
    """

    def __init__(self, message, evidence=None):
        super().__init__(message)
        self.evidence = evidence


class Instability(QuasipotError):
    """Energy drift exceeded the abort threshold during integration.

    The partial trajectory is attached as ``self.trajectory``.
    """

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class EmptySublevel(QuasipotError):
    """Rejection sampling found (almost) no admissible positions."""


class FitUnstable(QuasipotError):
    """The two half-window MSD exponent fits disagree by more than 0.3."""


class TooFewCrossings(QuasipotError):
    """The trajectory crosses the section fewer than the required
    number of times."""


class Unclassified(QuasipotError):
    """No branch of the regime decision tree matched.

    Diagnostics are attached as ``self.diagnostics``.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics


class ConfigInvalid(QuasipotError):
    """A run configuration failed schema validation.

    ``self.field`` holds the dotted path of the offending field.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class StageFailed(QuasipotError):
    """A pipeline stage failed; the run manifest records partial state."""


class MissingData(QuasipotError):
    """A plot was requested from data files that do not exist."""
