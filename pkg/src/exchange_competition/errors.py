"""Exception types shared across the package."""


class DegenerateCouplingsError(ValueError):
    """Both couplings are zero: no superposition state is defined."""


class SgPointError(ValueError):
    """a1 == |a2|: the state has no pure FM/AFM component to split off."""


class InvalidExtentError(ValueError):
    """Lattice extent incompatible with the requested kind/boundary."""


class NonUniformCoordinationError(ValueError):
    """Graph has site-dependent coordination; Nz formulas do not apply."""


class NotBipartiteError(ValueError):
    """Graph admits no two-coloring; Neel construction impossible."""


class SizeLimitError(ValueError):
    """Requested cluster exceeds the configured solver limit."""


class DimensionMismatchError(ValueError):
    """Operands act on different Hilbert-space dimensions."""


class NonConvergenceError(RuntimeError):
    """Iterative eigensolver failed to reach the residual target."""

    def __init__(self, message, iterations=None):
        super().__init__(message)
        self.iterations = iterations


class QuadratureDivergenceError(RuntimeError):
    """Quadrature error estimate exceeds the allowed bound."""

    def __init__(self, message, error_estimate=None):
        super().__init__(message)
        self.error_estimate = error_estimate
