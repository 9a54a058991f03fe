"""Exception hierarchy shared by every module."""


class NKLabError(Exception):
    pass


class DegenerateInputError(NKLabError, ValueError):
    """Rank-deficient vectors, failed immersions, zero-length frames."""


class DomainError(NKLabError, ValueError):
    """Vector not tangent at the stated base point, r <= 0 on the cone, ..."""


class PreconditionError(NKLabError, ValueError):
    pass


class JetEvaluationError(NKLabError):
    """A map could not be pushed through jet arithmetic."""


class ModelViolationError(NKLabError):
    """Input contradicts the geometric model (e.g. inconsistent Hopf read-offs)."""


class AccuracyError(NKLabError):
    """Quadrature or finite-difference refinement did not settle."""


class SamplingError(NKLabError):
    """Loop samples too coarse for a continuous frame path."""


class FrameError(NKLabError):
    pass


class ConfigError(NKLabError, ValueError):
    pass
