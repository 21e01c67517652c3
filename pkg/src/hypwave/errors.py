"""Exception hierarchy shared by all stages of the pipeline."""


class HypwaveError(Exception):
    """Base class for every error raised by the package."""


class UnknownModel(HypwaveError):
    pass


class EvaluationError(HypwaveError):
    """A model function returned a non-finite value."""


class HypothesisViolation(HypwaveError):
    """The source term is not of logistic type."""

    def __init__(self, condition, detail=""):
        self.condition = condition
        msg = f"hypothesis violated: {condition}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class TauOutOfRange(HypwaveError):
    def __init__(self, tau, tau_bar):
        self.tau = tau
        self.tau_bar = tau_bar
        super().__init__(
            f"relaxation time tau={tau!r} outside the admissible range (0, tau_bar={tau_bar!r})"
        )


class CharacteristicSpeed(HypwaveError):
    """c**2 * tau >= 1: the traveling-wave system is singular."""

    def __init__(self, c, tau):
        self.c = c
        self.tau = tau
        super().__init__(f"speed c={c!r} is not subcharacteristic for tau={tau!r} (c^2 tau >= 1)")


class DegenerateHopf(HypwaveError):
    """The first Lyapunov coefficient vanishes."""


class StepSizeUnderflow(HypwaveError):
    pass


class NonFiniteState(HypwaveError):
    pass


class NoOrbitFound(HypwaveError):
    pass


class SubcharacteristicViolated(HypwaveError):
    pass


class ContourTooClose(HypwaveError):
    """|D| is too small somewhere on the counting contour."""


class NoConvergence(HypwaveError):
    pass


class BranchLost(HypwaveError):
    pass


class OracleDisagreement(HypwaveError):
    """Evans-function root and collocation eigenvalue disagree."""
