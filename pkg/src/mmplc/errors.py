"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Operand shapes do not agree."""


class RankDeficientError(ValueError):
    """A matrix that must be full rank is (numerically) singular."""


class SvdConvergenceError(RuntimeError):
    """Jacobi sweeps hit the iteration cap before the columns became orthogonal."""

    def __init__(self, sweeps: int, residual: float):
        self.sweeps = sweeps
        self.residual = residual
        super().__init__(
            f"SVD did not converge after {sweeps} sweeps "
            f"(max relative off-diagonal residual {residual:.3e})"
        )
