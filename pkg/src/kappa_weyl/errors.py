"""Exception hierarchy shared by all modules."""


class KappaWeylError(Exception):
    """Base class for every error raised by the package."""


class EdgeLeak(KappaWeylError):
    """A state (or its Fourier transform) carries mass near the grid edges."""


class NonNormalizable(KappaWeylError):
    """The sampled state has zero or underflowing norm."""


class GridMismatch(KappaWeylError):
    """Two objects live on different grids."""


class ShiftTooLarge(KappaWeylError):
    """A translation exceeds the allowed fraction of the grid length."""


class BadShape(KappaWeylError):
    """An array has an unsupported shape (e.g. non power-of-two axis)."""


class QuadratureDiverged(KappaWeylError):
    """A quadrature did not settle under refinement."""


class QuadratureBoxTooSmall(KappaWeylError):
    """The integrand has non-negligible mass at the edge of its box."""


class SymbolNotEvaluable(KappaWeylError):
    """The symbol does not provide the evaluation route that was requested."""


class UnsupportedDimension(KappaWeylError):
    """Only spatial dimensions 1, 2 and 3 are supported."""


class DivergentAtOrigin(KappaWeylError):
    """An r-integral with weight 1/r is not controlled near r = 0."""


class GridTooSmall(KappaWeylError):
    """A construction does not fit inside the grid."""
