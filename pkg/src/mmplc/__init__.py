"""Simulation of the SVD-precoded massive-MIMO wiretap cryptosystem and its zero-forcing attack."""

from .analysis import (
    AdvantageStats,
    RegimeReport,
    advantage,
    asymptotic_adv_svd,
    asymptotic_advup,
    asymptotic_edge,
    correctness_noise_cap,
    eve_error_bound,
    hardness_condition,
    legit_error_bound,
    regime_report,
    square_lsv_survival,
    zf_break_threshold,
)
from .channel import Observation, SystemParams, WiretapSystem, sample_system, transmit, transmit_power_ratio
from .coding import DecodeResult, legit_decode_svd, make_precoder, ml_decode, zf_decode
from .experiments import SimConfig, TrialRecord, fig1_experiment, run_monte_carlo
from .linalg import SvdFactors, matmul, matvec, pseudo_inverse, sigma_extreme, singular_values, svd
from .rng import Role, RngStream, gaussian_matrix, sample_message

__version__ = "0.1.0"
