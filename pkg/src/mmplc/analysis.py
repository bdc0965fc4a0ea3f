"""Closed-form quantities: error bounds, regime conditions, advantage ratios, limit laws.

All logarithms are natural. The Gaussian tail bound used throughout is
``P(|w| >= t) <= exp(-t^2 / 2)`` for standard normal ``w``, so the error bounds
here are deliberately loose.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .channel import SystemParams
from .errors import RankDeficientError
from .linalg import RANK_TOL, as_matrix, sigma_extreme

ADV_SLACK = 1e-9


class DegenerateRegimeError(ValueError):
    """The ZF break threshold is non-positive for the requested slack."""


def _union_bound(n_t: int, m: float, alpha: float, sigma_min: float) -> float:
    if n_t <= 0 or m <= 0 or alpha <= 0:
        raise ValueError("n_t, m and alpha must be positive")
    if sigma_min < 0:
        raise ValueError("singular values are non-negative")
    return min(1.0, n_t * math.exp(-(sigma_min**2) / (8.0 * (m * alpha) ** 2)))


def legit_error_bound(n_t: int, m: float, alpha: float, sigma_min_h: float) -> float:
    """Union bound on B's block error probability given ``sigma_min(H)``."""
    return _union_bound(n_t, m, alpha, sigma_min_h)


def eve_error_bound(n_t: int, m: float, alpha: float, sigma_min_g: float) -> float:
    """Union bound on the ZF eavesdropper's block error given ``sigma_min(G)``."""
    return _union_bound(n_t, m, alpha, sigma_min_g)


def correctness_noise_cap(n_t: int, epsilon: float, sigma_min_h: float) -> float:
    """Largest ``m^2 alpha^2`` for which B's bound stays at or below ``epsilon``."""
    if not 0 < epsilon < n_t:
        raise ValueError(f"epsilon must lie in (0, n_t), got {epsilon}")
    return sigma_min_h**2 / (8.0 * math.log(n_t / epsilon))


def hardness_condition(m: float, alpha: float, n_t: int) -> bool:
    """The noise floor ``m * alpha > sqrt(n_t)`` claimed to give lattice hardness."""
    if m <= 0 or alpha <= 0 or n_t <= 0:
        raise ValueError("m, alpha and n_t must be positive")
    return m * alpha > math.sqrt(n_t)


def zf_break_threshold(n_t: int, n_r_prime: int, epsilon: float, epsilon_prime: float) -> float:
    """Largest ``m^2 alpha^2`` at which ZF decoding provably succeeds w.p. >= 1 - epsilon.

    ``n_r' ((1 - sqrt(n_t / n_r'))^2 - epsilon') / (8 log(2 n_t / epsilon))``.
    """
    if n_r_prime < n_t:
        raise ValueError(f"need n_r' >= n_t, got n_r'={n_r_prime}, n_t={n_t}")
    if not 0 < epsilon < 2 * n_t:
        raise ValueError(f"epsilon must lie in (0, 2 n_t), got {epsilon}")
    if epsilon_prime <= 0:
        raise ValueError(f"epsilon' must be positive, got {epsilon_prime}")
    factor = (1.0 - math.sqrt(n_t / n_r_prime)) ** 2 - epsilon_prime
    if factor <= 0:
        raise DegenerateRegimeError(
            f"(1 - sqrt(1/y'))^2 - epsilon' = {factor:.4g} <= 0 at y' = {n_r_prime / n_t:.4g}"
        )
    return n_r_prime * factor / (8.0 * math.log(2.0 * n_t / epsilon))


@dataclass(frozen=True)
class RegimeReport:
    hardness_holds: bool
    zf_threshold: float | None
    zf_breaks: bool
    contradiction: bool
    epsilon: float
    epsilon_prime: float

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    def to_text(self) -> str:
        thr = "undefined" if self.zf_threshold is None else f"{self.zf_threshold:.6g}"
        return "\n".join(
            [
                f"hardness_holds: {self.hardness_holds}",
                f"zf_threshold:   {thr}",
                f"zf_breaks:      {self.zf_breaks}",
                f"contradiction:  {self.contradiction}",
                f"epsilon:        {self.epsilon:g}",
                f"epsilon_prime:  {self.epsilon_prime:g}",
            ]
        )


def regime_report(params: SystemParams, epsilon: float, epsilon_prime: float) -> RegimeReport:
    """Evaluate the hardness floor and the ZF break condition at E's noise level.

    When ``y'`` is too small for the break threshold to be positive the
    threshold is reported as ``None`` and ZF is not counted as breaking.
    """
    hard = hardness_condition(params.m, params.beta, params.n_t)
    try:
        thr = zf_break_threshold(params.n_t, params.n_r_prime, epsilon, epsilon_prime)
    except DegenerateRegimeError:
        thr = None
    breaks = thr is not None and params.noise_power_e <= thr
    return RegimeReport(
        hardness_holds=hard,
        zf_threshold=thr,
        zf_breaks=breaks,
        contradiction=hard and breaks,
        epsilon=epsilon,
        epsilon_prime=epsilon_prime,
    )


@dataclass(frozen=True)
class AdvantageStats:
    adv: float
    advup: float
    sigma_min_hp: float
    sigma_min_gp: float
    sigma_max_h: float
    sigma_min_g: float


def advantage(h, g, p) -> AdvantageStats:
    """B's advantage over E under precoder ``p`` and its precoder-free upper bound."""
    h = as_matrix(h, name="h")
    g = as_matrix(g, name="g")
    p = as_matrix(p, name="precoder")
    n_t = h.shape[1]
    if p.shape != (n_t, n_t) or g.shape[1] != n_t:
        raise ValueError(f"incompatible shapes h={h.shape}, g={g.shape}, p={p.shape}")
    p_max, p_min = sigma_extreme(p)
    if p_min <= RANK_TOL * p_max:
        raise RankDeficientError(f"precoder is rank deficient (sigma_min={p_min:.3e})")
    _, hp_min = sigma_extreme(h @ p)
    _, gp_min = sigma_extreme(g @ p)
    h_max, _ = sigma_extreme(h)
    _, g_min = sigma_extreme(g)
    return advantage_from_sigmas(hp_min, gp_min, h_max, g_min)


def advantage_from_sigmas(
    sigma_min_hp: float, sigma_min_gp: float, sigma_max_h: float, sigma_min_g: float
) -> AdvantageStats:
    """Assemble :class:`AdvantageStats` from already computed singular values."""
    if min(sigma_min_hp, sigma_min_gp, sigma_min_g) <= 0.0:
        raise RankDeficientError("equivalent channel has a zero singular value")
    stats = AdvantageStats(
        adv=sigma_min_hp**2 / sigma_min_gp**2,
        advup=sigma_max_h**2 / sigma_min_g**2,
        sigma_min_hp=sigma_min_hp,
        sigma_min_gp=sigma_min_gp,
        sigma_max_h=sigma_max_h,
        sigma_min_g=sigma_min_g,
    )
    # relative slack: adv reaches ~1e5 for inverse precoding
    if stats.adv > stats.advup * (1.0 + ADV_SLACK):
        raise RuntimeError(f"adv={stats.adv!r} exceeds advup={stats.advup!r}")
    return stats


def asymptotic_edge(y: float, which: str = "min") -> float:
    """Limit of ``sigma^2 / rows`` at the lower or upper spectral edge for aspect ratio ``y``."""
    if y < 1:
        raise ValueError(f"aspect ratio must be >= 1, got {y}")
    r = 0.0 if math.isinf(y) else math.sqrt(1.0 / y)
    if which == "min":
        return (1.0 - r) ** 2
    if which == "max":
        return (1.0 + r) ** 2
    raise ValueError(f"which must be 'min' or 'max', got {which!r}")


def _check_ratios(y: float, y_prime: float):
    if y < 1 or y_prime < 1:
        raise ValueError(f"aspect ratios must be >= 1, got y={y}, y'={y_prime}")
    if y_prime == 1:
        raise ValueError("the limit is undefined at y' = 1 (zero denominator)")


def asymptotic_adv_svd(y: float, y_prime: float) -> float:
    """Almost-sure limit of adv under SVD precoding: ``(sqrt(y)-1)^2 / (sqrt(y')-1)^2``."""
    _check_ratios(y, y_prime)
    if math.isinf(y) and math.isinf(y_prime):
        return 1.0
    if math.isinf(y_prime):
        return 0.0
    if math.isinf(y):
        return math.inf
    return (math.sqrt(y) - 1.0) ** 2 / (math.sqrt(y_prime) - 1.0) ** 2


def asymptotic_advup(y: float, y_prime: float) -> float:
    """Almost-sure limit of advup: ``((sqrt(y)+1) / (sqrt(y')-1))^2``."""
    _check_ratios(y, y_prime)
    if math.isinf(y) and math.isinf(y_prime):
        return 1.0
    if math.isinf(y_prime):
        return 0.0
    if math.isinf(y):
        return math.inf
    return ((math.sqrt(y) + 1.0) / (math.sqrt(y_prime) - 1.0)) ** 2


def square_lsv_survival(x):
    """Limiting ``P[sqrt(t) * sigma_t >= x]`` for a square Gaussian matrix."""
    x = np.asarray(x, dtype=np.float64)
    if np.any(x < 0):
        raise ValueError("x must be non-negative")
    out = np.exp(-(x**2) / 2.0 - x)
    return float(out) if out.ndim == 0 else out
