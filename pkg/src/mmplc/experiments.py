"""Monte-Carlo harness and the individual experiments built on it.

A trial is a pure function of ``(config, trial_id)``: it samples a fresh
``(H, G)``, precodes one random message, and decodes it at B and at E. Results
are gathered in trial order, so any number of worker processes gives identical
output.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np
import scipy.stats

from . import analysis
from .analysis import RegimeReport
from .channel import SystemParams, sample_system, transmit, transmit_power_ratio
from .coding import legit_decode_svd, make_precoder, ml_decode, zf_decode
from .errors import RankDeficientError, SvdConvergenceError
from .linalg import singular_values, svd
from .rng import Role, RngStream, gaussian_matrix, sample_message

NOISE_MODES = ("fixed", "cap")
MAX_FAILED_FRACTION = 0.01
WILSON_Z = 1.959963984540054

DEFAULT_Y_PRIME_GRID = (1, 2, 4, 8, 16, 32, 64, 96, 128, 192, 256, 384, 512, 768, 1024)


@dataclass(frozen=True, eq=False)
class SimConfig:
    """One Monte-Carlo experiment.

    ``noise_mode="cap"`` ignores ``params.alpha``/``params.beta`` and sets, per
    trial, ``m^2 alpha^2 = m^2 beta^2 = correctness_noise_cap(n_t, epsilon, sigma_min(H))``.
    """

    params: SystemParams
    precoder: object = "svd"
    trials: int = 1000
    master_seed: int = 0
    epsilon: float = 0.05
    epsilon_prime: float = 0.01
    clamp_mode: bool = False
    noise_mode: str = "fixed"
    noiseless: bool = False
    output_path: str | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be positive, got {self.trials}")
        if not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.noise_mode not in NOISE_MODES:
            raise ValueError(f"noise_mode must be one of {NOISE_MODES}, got {self.noise_mode!r}")

    def trial_noise(self, sigma_min_h: float) -> tuple[float, float]:
        """``(alpha, beta)`` in force for a trial whose H has the given sigma_min."""
        p = self.params
        if self.noise_mode == "cap":
            a = math.sqrt(analysis.correctness_noise_cap(p.n_t, self.epsilon, sigma_min_h)) / p.m
            return a, a
        return p.alpha, p.beta


@dataclass(frozen=True)
class TrialRecord:
    trial_id: int
    sigma_min_h: float
    sigma_max_h: float
    sigma_min_g: float
    sigma_min_hp: float
    sigma_min_gp: float
    adv: float
    advup: float
    log10_adv: float
    b_success_paper: bool
    b_success_symbol: bool
    e_success_paper: bool
    e_success_symbol: bool
    power_ratio: float
    failed: bool = False

    @classmethod
    def failure(cls, trial_id: int) -> TrialRecord:
        nan = math.nan
        return cls(trial_id, nan, nan, nan, nan, nan, nan, nan, nan,
                   False, False, False, False, nan, failed=True)


CSV_FIELDS = tuple(f.name for f in dataclasses.fields(TrialRecord))


def run_trial(config: SimConfig, trial_id: int) -> TrialRecord:
    seed = config.master_seed
    params = config.params
    try:
        system = sample_system(params, seed, trial_id)
        h_sigma = system.h_svd.sigma
        g_sigma = singular_values(system.g)
        p = make_precoder(config.precoder, system.h_svd, system.h)
        hp = system.h @ p
        gp = system.g @ p
        gp_svd = svd(gp)
        stats = analysis.advantage_from_sigmas(
            float(singular_values(hp)[-1]), gp_svd.sigma_min, float(h_sigma[0]), float(g_sigma[-1])
        )

        alpha, beta = config.trial_noise(float(h_sigma[-1]))
        if (alpha, beta) != (params.alpha, params.beta):
            system = dataclasses.replace(
                system, params=dataclasses.replace(params, alpha=alpha, beta=beta)
            )
        x = sample_message(params.m, params.n_t, RngStream(seed, trial_id, Role.MESSAGE))
        obs = transmit(system, p, x, seed, trial_id, noiseless=config.noiseless)

        opts = dict(m=params.m, clamp=config.clamp_mode)
        if isinstance(config.precoder, str) and config.precoder == "svd":
            b = legit_decode_svd(obs.y_b, system.h_svd, x, **opts)
        elif isinstance(config.precoder, str) and config.precoder == "inverse":
            b = zf_decode(obs.y_b, np.eye(params.n_t), x, **opts)
        else:
            b = zf_decode(obs.y_b, hp, x, **opts)
        e = zf_decode(obs.y_e, gp, x, factors=gp_svd, **opts)
    except (RankDeficientError, SvdConvergenceError):
        return TrialRecord.failure(trial_id)

    return TrialRecord(
        trial_id=trial_id,
        sigma_min_h=float(h_sigma[-1]),
        sigma_max_h=float(h_sigma[0]),
        sigma_min_g=float(g_sigma[-1]),
        sigma_min_hp=stats.sigma_min_hp,
        sigma_min_gp=stats.sigma_min_gp,
        adv=stats.adv,
        advup=stats.advup,
        log10_adv=math.log10(stats.adv),
        b_success_paper=b.success_paper,
        b_success_symbol=b.success_symbol,
        e_success_paper=e.success_paper,
        e_success_symbol=e.success_symbol,
        power_ratio=transmit_power_ratio(p, x),
    )


@dataclass(frozen=True)
class RateEstimate:
    successes: int
    n: int
    rate: float
    low: float
    high: float

    @property
    def stderr(self) -> float:
        if self.n == 0:
            return math.nan
        return math.sqrt(self.rate * (1.0 - self.rate) / self.n)


def wilson_interval(successes: int, n: int, z: float = WILSON_Z) -> RateEstimate:
    if n == 0:
        return RateEstimate(0, 0, math.nan, math.nan, math.nan)
    p = successes / n
    denom = 1.0 + z * z / n
    centre = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    # the limits are exactly 0 and 1 at the boundaries; the formula can miss by an ulp
    low = 0.0 if successes == 0 else max(0.0, centre - half)
    high = 1.0 if successes == n else min(1.0, centre + half)
    return RateEstimate(successes, n, p, low, high)


@dataclass(frozen=True)
class Summary:
    mean: float
    median: float
    q05: float
    q25: float
    q75: float
    q95: float
    min: float
    max: float

    @classmethod
    def of(cls, values) -> Summary:
        v = np.asarray(values, dtype=np.float64)
        if v.size == 0:
            return cls(*([math.nan] * 8))
        q = np.quantile(v, [0.05, 0.25, 0.5, 0.75, 0.95])
        return cls(float(v.mean()), float(q[2]), float(q[0]), float(q[1]),
                   float(q[3]), float(q[4]), float(v.min()), float(v.max()))


@dataclass(frozen=True)
class AggregateReport:
    trials: int
    failed_trials: int
    b_success_paper: RateEstimate
    b_success_symbol: RateEstimate
    e_success_paper: RateEstimate
    e_success_symbol: RateEstimate
    adv: Summary
    advup: Summary
    log10_adv: Summary
    power_ratio: Summary
    b_error_bound_mean: float
    e_error_bound_mean: float
    zf_regime: RegimeReport | None = None
    reference_log10_adv: float | None = None

    def to_dict(self) -> dict:
        return _jsonable(dataclasses.asdict(self))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def aggregate(config: SimConfig, records) -> AggregateReport:
    """Summarise trial records. Failed trials are excluded from every rate."""
    records = sorted(records, key=lambda r: r.trial_id)
    ok = [r for r in records if not r.failed]
    n = len(ok)

    def rate(name):
        return wilson_interval(sum(bool(getattr(r, name)) for r in ok), n)

    params = config.params
    b_bounds, e_bounds = [], []
    for r in ok:
        alpha, beta = config.trial_noise(r.sigma_min_h)
        b_bounds.append(analysis.legit_error_bound(params.n_t, params.m, alpha, r.sigma_min_hp))
        e_bounds.append(analysis.eve_error_bound(params.n_t, params.m, beta, r.sigma_min_gp))

    zf_regime = None
    if config.noise_mode == "fixed" and params.n_r_prime > params.n_t:
        zf_regime = analysis.regime_report(params, config.epsilon, config.epsilon_prime)

    return AggregateReport(
        trials=len(records),
        failed_trials=len(records) - n,
        b_success_paper=rate("b_success_paper"),
        b_success_symbol=rate("b_success_symbol"),
        e_success_paper=rate("e_success_paper"),
        e_success_symbol=rate("e_success_symbol"),
        adv=Summary.of([r.adv for r in ok]),
        advup=Summary.of([r.advup for r in ok]),
        log10_adv=Summary.of([r.log10_adv for r in ok]),
        power_ratio=Summary.of([r.power_ratio for r in ok]),
        b_error_bound_mean=float(np.mean(b_bounds)) if n else math.nan,
        e_error_bound_mean=float(np.mean(e_bounds)) if n else math.nan,
        zf_regime=zf_regime,
    )


@dataclass(frozen=True, eq=False)
class MonteCarloResult:
    report: AggregateReport
    records: list[TrialRecord] = field(repr=False)


def run_trials(config: SimConfig, workers: int = 1) -> list[TrialRecord]:
    ids = range(config.trials)
    if workers <= 1:
        return [run_trial(config, i) for i in ids]
    chunk = max(1, config.trials // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        records = list(pool.map(partial(run_trial, config), ids, chunksize=chunk))
    return sorted(records, key=lambda r: r.trial_id)


def run_monte_carlo(config: SimConfig, workers: int = 1) -> MonteCarloResult:
    """Run every trial, aggregate, and write the CSV if ``config.output_path`` is set.

    Raises ``RuntimeError`` when more than 1% of trials hit a degenerate channel.
    """
    records = run_trials(config, workers)
    failed = sum(r.failed for r in records)
    if failed > MAX_FAILED_FRACTION * len(records):
        raise RuntimeError(f"{failed} of {len(records)} trials failed (rank-deficient channels)")
    report = aggregate(config, records)
    if config.output_path:
        from .io import emit_csv

        emit_csv(records, config.output_path)
    return MonteCarloResult(report=report, records=records)


def fig1_experiment(
    n: int = 200,
    trials: int = 1000,
    master_seed: int = 0,
    *,
    workers: int = 1,
    m: int = 2,
    alpha: float = 0.01,
    output_path: str | None = None,
) -> MonteCarloResult:
    """Inverse-precoded square systems; the advantage should sit near ``n^2``.

    The advantage does not depend on the noise, so ``alpha`` only affects the
    decoding columns of the records.
    """
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    config = SimConfig(
        params=SystemParams(n, n, n, m, alpha),
        precoder="inverse",
        trials=trials,
        master_seed=master_seed,
        output_path=output_path,
    )
    result = run_monte_carlo(config, workers)
    report = dataclasses.replace(result.report, reference_log10_adv=math.log10(n * n))
    return MonteCarloResult(report=report, records=result.records)


@dataclass(frozen=True)
class EdgeLawReport:
    n_t: int
    n_r_prime: int
    y_prime: float
    trials: int
    mean_min_edge: float
    mean_max_edge: float
    predicted_min: float
    predicted_max: float
    min_rel_dev: float | None
    max_rel_dev: float


def edge_law_experiment(n_t: int, y_prime: float, trials: int, master_seed: int = 0) -> EdgeLawReport:
    """Mean ``sigma_min^2 / n_r'`` and ``sigma_max^2 / n_r'`` of Gaussian ``n_r' x n_t`` matrices.

    At ``y' = 1`` the lower edge is 0, so no relative deviation is reported for it.
    """
    if y_prime < 1:
        raise ValueError(f"y_prime must be >= 1, got {y_prime}")
    n_r_prime = int(round(y_prime * n_t))
    lo, hi = [], []
    for t in range(trials):
        g = gaussian_matrix(n_r_prime, n_t, 1.0, RngStream(master_seed, t, Role.CHANNEL_G))
        s = singular_values(g)
        lo.append(s[-1] ** 2 / n_r_prime)
        hi.append(s[0] ** 2 / n_r_prime)
    y_eff = n_r_prime / n_t
    pred_min = analysis.asymptotic_edge(y_eff, "min")
    pred_max = analysis.asymptotic_edge(y_eff, "max")
    mean_lo, mean_hi = float(np.mean(lo)), float(np.mean(hi))
    return EdgeLawReport(
        n_t=n_t,
        n_r_prime=n_r_prime,
        y_prime=y_eff,
        trials=trials,
        mean_min_edge=mean_lo,
        mean_max_edge=mean_hi,
        predicted_min=pred_min,
        predicted_max=pred_max,
        min_rel_dev=None if pred_min == 0 else abs(mean_lo - pred_min) / pred_min,
        max_rel_dev=abs(mean_hi - pred_max) / pred_max,
    )


@dataclass(frozen=True, eq=False)
class LsvLawReport:
    n: int
    trials: int
    ks_statistic: float
    ks_pvalue: float
    survival_at_1: float
    predicted_survival_at_1: float
    samples: np.ndarray = field(repr=False)

    def to_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in dataclasses.fields(self)}
        d.pop("samples")
        return d


def empirical_survival(samples, x: float) -> float:
    return float(np.mean(np.asarray(samples) >= x))


def lsv_law_experiment(n: int, trials: int, master_seed: int = 0) -> LsvLawReport:
    """Compare ``sqrt(n) * sigma_min`` of square Gaussian matrices with its limit law."""
    if n < 50:
        raise ValueError(f"the limit law needs n >= 50, got {n}")
    samples = np.empty(trials)
    for t in range(trials):
        h = gaussian_matrix(n, n, 1.0, RngStream(master_seed, t, Role.CHANNEL_H))
        samples[t] = math.sqrt(n) * singular_values(h)[-1]
    ks = scipy.stats.kstest(samples, lambda x: 1.0 - analysis.square_lsv_survival(np.maximum(x, 0)))
    return LsvLawReport(
        n=n,
        trials=trials,
        ks_statistic=float(ks.statistic),
        ks_pvalue=float(ks.pvalue),
        survival_at_1=empirical_survival(samples, 1.0),
        predicted_survival_at_1=analysis.square_lsv_survival(1.0),
        samples=samples,
    )


@dataclass(frozen=True)
class RegimeScanRow:
    n_t: int
    y_prime: float
    n_r_prime: int
    m_alpha: float
    report: RegimeReport


def regime_scan(
    n_t_list,
    y_prime_list=DEFAULT_Y_PRIME_GRID,
    epsilon: float = 0.05,
    epsilon_prime: float = 0.01,
    *,
    margin: float = 1.0125,
    m: int = 2,
) -> list[RegimeScanRow]:
    """Evaluate both regime conditions with ``m alpha = margin * sqrt(n_t)``.

    The default margin puts ``m alpha`` at 8.1 for ``n_t = 64``.
    """
    rows = []
    for n_t in n_t_list:
        m_alpha = margin * math.sqrt(n_t)
        for yp in sorted(y_prime_list):
            n_r_prime = int(round(yp * n_t))
            params = SystemParams(n_t, n_t, n_r_prime, m, m_alpha / m)
            rows.append(
                RegimeScanRow(n_t, n_r_prime / n_t, n_r_prime, m_alpha,
                              analysis.regime_report(params, epsilon, epsilon_prime))
            )
    return rows


def minimal_contradicting_y_prime(rows) -> dict[int, float | None]:
    """Smallest scanned ``y'`` at which hardness holds yet ZF provably breaks, per ``n_t``."""
    out: dict[int, float | None] = {}
    for row in rows:
        out.setdefault(row.n_t, None)
        if row.report.contradiction and out[row.n_t] is None:
            out[row.n_t] = row.y_prime
    return out


def fit_log_scaling(min_y_prime: dict[int, float]) -> float:
    """Least-squares ``c`` in ``y'_min ~ c * log(n_t)``."""
    n = np.array([k for k, v in min_y_prime.items() if v is not None], dtype=np.float64)
    y = np.array([v for v in min_y_prime.values() if v is not None], dtype=np.float64)
    ln = np.log(n)
    return float(ln @ y / (ln @ ln))


@dataclass(frozen=True)
class MlZfReport:
    trials: int
    ml_symbol_errors: int
    zf_symbol_errors: int

    @property
    def ml_rate(self) -> float:
        return self.ml_symbol_errors / self.trials

    @property
    def zf_rate(self) -> float:
        return self.zf_symbol_errors / self.trials


def ml_vs_zf_experiment(
    n_t: int = 4, m: int = 2, alpha: float = 0.15, trials: int = 10_000, master_seed: int = 0
) -> MlZfReport:
    """Exhaustive ML against ZF on the same ``(G, x, e')`` per trial, identity precoder."""
    params = SystemParams(n_t, n_t, n_t, m, alpha)
    eye = np.eye(n_t)
    ml_err = zf_err = 0
    for t in range(trials):
        system = sample_system(params, master_seed, t)
        x = sample_message(m, n_t, RngStream(master_seed, t, Role.MESSAGE))
        obs = transmit(system, eye, x, master_seed, t)
        zf = zf_decode(obs.y_e, system.g, x)
        ml = ml_decode(obs.y_e, system.g, m, n_t)
        zf_err += not zf.success_symbol
        ml_err += not np.array_equal(ml, x)
    return MlZfReport(trials, ml_err, zf_err)
