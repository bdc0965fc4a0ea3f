"""The wiretap system: legitimate channel H, eavesdropper channel G, noisy observations.

Symbols come from the unnormalised constellation ``{0, ..., m-1}``. Receiver
noise has variance ``(m*alpha)^2`` at B and ``(m*beta)^2`` at E.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError
from .linalg import SvdFactors, as_matrix, svd
from .rng import Role, RngStream, gaussian_matrix, gaussian_vector


@dataclass(frozen=True)
class SystemParams:
    n_t: int
    n_r: int
    n_r_prime: int
    m: int
    alpha: float
    beta: float | None = None

    def __post_init__(self):
        if self.beta is None:
            object.__setattr__(self, "beta", self.alpha)
        if min(self.n_t, self.n_r, self.n_r_prime) < 1:
            raise ValueError("antenna counts must be positive")
        if self.n_r < self.n_t or self.n_r_prime < self.n_t:
            raise ValueError(
                f"need n_r >= n_t and n_r' >= n_t, got n_t={self.n_t}, "
                f"n_r={self.n_r}, n_r'={self.n_r_prime}"
            )
        if self.m < 2:
            raise ValueError(f"constellation size must be at least 2, got {self.m}")
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError("noise parameters alpha and beta must be positive")

    @property
    def y(self) -> float:
        return self.n_r / self.n_t

    @property
    def y_prime(self) -> float:
        return self.n_r_prime / self.n_t

    @property
    def noise_power_b(self) -> float:
        return (self.m * self.alpha) ** 2

    @property
    def noise_power_e(self) -> float:
        return (self.m * self.beta) ** 2


@dataclass(frozen=True, eq=False)
class WiretapSystem:
    params: SystemParams
    h: np.ndarray
    g: np.ndarray
    h_svd: SvdFactors = field(repr=False)

    def __post_init__(self):
        p = self.params
        if self.h.shape != (p.n_r, p.n_t):
            raise DimensionError(f"h has shape {self.h.shape}, expected {(p.n_r, p.n_t)}")
        if self.g.shape != (p.n_r_prime, p.n_t):
            raise DimensionError(f"g has shape {self.g.shape}, expected {(p.n_r_prime, p.n_t)}")


@dataclass(frozen=True, eq=False)
class Observation:
    y_b: np.ndarray
    y_e: np.ndarray
    x_true: np.ndarray
    e_b_norm: float
    e_e_norm: float


def sample_system(params: SystemParams, master_seed: int, trial_id: int) -> WiretapSystem:
    """Draw fresh i.i.d. N(0, 1) channels for one trial and factor H."""
    h = gaussian_matrix(params.n_r, params.n_t, 1.0, RngStream(master_seed, trial_id, Role.CHANNEL_H))
    g = gaussian_matrix(
        params.n_r_prime, params.n_t, 1.0, RngStream(master_seed, trial_id, Role.CHANNEL_G)
    )
    return WiretapSystem(params=params, h=h, g=g, h_svd=svd(h))


def transmit(
    sys: WiretapSystem,
    p,
    x,
    master_seed: int,
    trial_id: int,
    *,
    noiseless: bool = False,
) -> Observation:
    """Send ``P x`` over both channels.

    ``y_b = H P x + e`` and ``y_e = G P x + e'``. ``noiseless`` zeroes both
    noise vectors (the alpha, beta -> 0 limit) without touching the streams.
    """
    params = sys.params
    p = as_matrix(p, name="precoder")
    if p.shape != (params.n_t, params.n_t):
        raise DimensionError(f"precoder has shape {p.shape}, expected {(params.n_t,) * 2}")
    x = np.asarray(x)
    if x.shape != (params.n_t,):
        raise DimensionError(f"message has shape {x.shape}, expected {(params.n_t,)}")
    if np.any(x < 0) or np.any(x >= params.m):
        raise ValueError(f"message entries must lie in [0, {params.m - 1}]")

    sent = p @ x.astype(np.float64)
    if noiseless:
        e = np.zeros(params.n_r)
        e_prime = np.zeros(params.n_r_prime)
    else:
        e = gaussian_vector(
            params.n_r, params.noise_power_b, RngStream(master_seed, trial_id, Role.NOISE_B)
        )
        e_prime = gaussian_vector(
            params.n_r_prime, params.noise_power_e, RngStream(master_seed, trial_id, Role.NOISE_E)
        )
    return Observation(
        y_b=sys.h @ sent + e,
        y_e=sys.g @ sent + e_prime,
        x_true=x.copy(),
        e_b_norm=float(np.max(np.abs(e))),
        e_e_norm=float(np.max(np.abs(e_prime))),
    )


def transmit_power_ratio(p, x) -> float:
    """``|P x|^2 / |x|^2``, defined as 1 for the zero message."""
    p = as_matrix(p, name="precoder")
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (p.shape[1],):
        raise DimensionError(f"cannot apply {p.shape} precoder to message of shape {x.shape}")
    xx = float(x @ x)
    if xx == 0.0:
        return 1.0
    px = p @ x
    return float(px @ px) / xx

