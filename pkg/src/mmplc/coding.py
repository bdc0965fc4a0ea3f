"""Precoders and decoders.

B decodes an SVD-precoded transmission layer by layer (``U^T y``, divide by the
singular value, round). Any other precoder is decoded by zero-forcing against
the equivalent channel, which is also the eavesdropper's attack. ``ml_decode``
is an exhaustive search kept as an oracle for small instances.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, RankDeficientError
from .linalg import RANK_TOL, SvdFactors, as_matrix, pseudo_inverse, svd

PRECODERS = ("svd", "inverse", "identity")
ML_SEARCH_CAP = 10**6


@dataclass(frozen=True, eq=False)
class DecodeResult:
    """Decoder output.

    The success flags and ``per_layer_noise`` are only filled in when the true
    message was supplied. ``success_paper`` applies the per-layer noise
    criterion; ``success_symbol`` compares the (optionally clamped) estimate.
    """

    x_hat: np.ndarray
    success_paper: bool | None = None
    success_symbol: bool | None = None
    per_layer_noise: np.ndarray | None = None


def _check_full_rank(sigma: np.ndarray, what: str):
    if sigma[-1] <= RANK_TOL * sigma[0] or sigma[0] == 0.0:
        raise RankDeficientError(
            f"{what} is rank deficient (sigma_min={sigma[-1]:.3e}, sigma_max={sigma[0]:.3e})"
        )


def make_precoder(kind, h_svd: SvdFactors, h) -> np.ndarray:
    """Precoding matrix ``P(H)``.

    ``kind`` is ``"svd"`` (V from the SVD of H), ``"inverse"`` (pseudo-inverse
    of a square H), ``"identity"``, or an explicit full-rank ``n_t x n_t`` matrix.
    """
    h = as_matrix(h, name="h")
    n_r, n_t = h.shape
    if not isinstance(kind, str):
        p = as_matrix(kind, name="custom precoder")
        if p.shape != (n_t, n_t):
            raise DimensionError(f"custom precoder must be {n_t}x{n_t}, got {p.shape}")
        _check_full_rank(svd(p).sigma, "custom precoder")
        return p
    if kind == "svd":
        return np.array(h_svd.v[:, :n_t])
    if kind == "identity":
        return np.eye(n_t)
    if kind == "inverse":
        if n_r != n_t:
            raise DimensionError(f"inverse precoder needs a square channel, got {h.shape}")
        _check_full_rank(h_svd.sigma, "channel H")
        return pseudo_inverse(h, factors=h_svd)
    raise ValueError(f"unknown precoder kind {kind!r}; expected one of {PRECODERS} or a matrix")


def _finish(x_hat, x_true, noise, bound, m, clamp) -> DecodeResult:
    if x_true is None:
        return DecodeResult(x_hat=x_hat)
    x_true = np.asarray(x_true)
    decided = x_hat
    if clamp:
        if m is None:
            raise ValueError("clamping needs the constellation size m")
        decided = np.clip(x_hat, 0, m - 1)
    return DecodeResult(
        x_hat=decided,
        success_paper=bool(np.all(np.abs(noise) < bound)),
        success_symbol=bool(np.array_equal(decided, x_true)),
        per_layer_noise=noise,
    )


def legit_decode_svd(
    y_b,
    h_svd: SvdFactors,
    x_true=None,
    *,
    m: int | None = None,
    clamp: bool = False,
) -> DecodeResult:
    """Divide-and-round decoding of an SVD-precoded block.

    Layer ``i`` is estimated as ``round((U^T y)_i / sigma_i)``; only the top
    ``n_t`` layers exist, so extra receive antennas just add rows to ``U``.
    ``success_paper`` requires ``|(U^T e)_i| < sigma_i / 2`` on
    every layer.
    """
    sigma = h_svd.sigma
    _check_full_rank(sigma, "channel H")
    u = h_svd.u[:, : sigma.size]
    y_b = np.asarray(y_b, dtype=np.float64)
    if y_b.shape != (u.shape[0],):
        raise DimensionError(f"y_b has shape {y_b.shape}, expected {(u.shape[0],)}")
    y_tilde = u.T @ y_b
    x_hat = np.rint(y_tilde / sigma).astype(np.int64)
    noise = None if x_true is None else y_tilde - sigma * np.asarray(x_true, dtype=np.float64)
    return _finish(x_hat, x_true, noise, sigma / 2.0, m, clamp)


def zf_decode(
    y,
    channel_eq,
    x_true=None,
    *,
    factors: SvdFactors | None = None,
    m: int | None = None,
    clamp: bool = False,
) -> DecodeResult:
    """Zero-forcing: ``x_hat = round(pinv(channel_eq) @ y)``.

    Success in the per-layer sense means every component of the filtered
    noise ``pinv(channel_eq) @ e`` is below 1/2 in magnitude.
    """
    channel_eq = as_matrix(channel_eq, name="channel_eq")
    f = factors if factors is not None else svd(channel_eq)
    if f.sigma.size < channel_eq.shape[1]:
        raise RankDeficientError(
            f"equivalent channel {channel_eq.shape} cannot have full column rank"
        )
    _check_full_rank(f.sigma, "equivalent channel")
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (channel_eq.shape[0],):
        raise DimensionError(f"y has shape {y.shape}, expected {(channel_eq.shape[0],)}")
    y_tilde = pseudo_inverse(channel_eq, factors=f) @ y
    x_hat = np.rint(y_tilde).astype(np.int64)
    noise = None if x_true is None else y_tilde - np.asarray(x_true, dtype=np.float64)
    return _finish(x_hat, x_true, noise, 0.5, m, clamp)


def ml_decode(y, channel_eq, m: int, n_t: int, *, chunk: int = 65536) -> np.ndarray:
    """Exhaustive maximum-likelihood search over ``{0, ..., m-1}^n_t``.

    Candidates are scanned in lexicographic order and the first minimiser
    wins, so ties resolve to the lexicographically smallest vector.
    """
    if m**n_t > ML_SEARCH_CAP:
        raise ValueError(f"search space m^n_t = {m}^{n_t} exceeds the cap of {ML_SEARCH_CAP}")
    channel_eq = as_matrix(channel_eq, name="channel_eq")
    if channel_eq.shape[1] != n_t:
        raise DimensionError(f"channel_eq has {channel_eq.shape[1]} columns, expected {n_t}")
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (channel_eq.shape[0],):
        raise DimensionError(f"y has shape {y.shape}, expected {(channel_eq.shape[0],)}")

    best, best_cost = None, np.inf
    candidates = itertools.product(range(m), repeat=n_t)
    while True:
        block = np.array(list(itertools.islice(candidates, chunk)), dtype=np.int64)
        if block.size == 0:
            break
        resid = y[None, :] - block.astype(np.float64) @ channel_eq.T
        cost = np.einsum("ij,ij->i", resid, resid)
        i = int(np.argmin(cost))
        if cost[i] < best_cost:
            best, best_cost = block[i], cost[i]
    return best.copy()
