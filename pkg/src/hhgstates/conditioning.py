"""Conditioned states obtained by measuring part of the post-HHG field.

Each constructor is the generic pipeline build -> project (-> displace) with
the measured modes projected onto their "signal present" amplitudes
(delta_alpha for a drive mode, chi_q for a harmonic). Closed-form
coefficients are computed alongside and any disagreement with the pipeline
is recorded in the report instead of being silently resolved.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from . import hhg
from .hhg import HHGConfig
from .states import TwoBranchState, amplitude, displace_mode, norm_squared, project_modes

__all__ = [
    "ParamsReport",
    "amplified_harmonic_cat",
    "fundamental_cat",
    "harmonic_bundle",
    "harmonic_cat",
    "pair_state",
    "two_color_ecs",
]

DISCREPANCY_TOL = 1e-12


@dataclass(frozen=True)
class ParamsReport:
    """Parameters of a conditioned state.

    omega        sum of |chi_q|^2 over all harmonics (Omega, or Omega-bar for two colors)
    omega_prime  sum of |amplitude|^2 over the measured modes other than the
                 fundamental (Omega' for a single harmonic cat, Omega_ij for a pair)
    gamma        -ln|c2/c1| of the produced state
    delta_cap    |delta_alpha_1|^2 + |delta_alpha_2|^2 (two colors, else 0)
    frame_phase  phase to apply to coeff_ratio as exp(-i frame_phase) in the
                 frame of the physical drive amplitude
    phi_prime    Im(chi' conj(chi_q)) for an amplified harmonic cat
    closed_form  closed-form values for the quantities above
    discrepancies  name -> (pipeline, closed form) where they differ
    """

    omega: float
    omega_prime: float
    gamma: float
    delta_cap: float
    norm_sq: float
    coeff_ratio: complex
    frame_phase: float = 0.0
    phi_prime: float = 0.0
    closed_form: dict = field(default_factory=dict)
    discrepancies: dict = field(default_factory=dict)


def _report(state: TwoBranchState, *, omega, omega_prime, delta_cap=0.0, frame_phase=0.0,
            phi_prime=0.0, closed_form) -> ParamsReport:
    ratio = state.coeff_ratio
    pipeline = {
        "coeff_ratio": ratio,
        "gamma": -math.log(abs(ratio)),
        "norm_sq": norm_squared(state),
        "omega": omega,
        "omega_prime": omega_prime,
    }
    discrepancies = {}
    for key, expected in closed_form.items():
        value = pipeline[key]
        if abs(value - expected) > DISCREPANCY_TOL * max(1.0, abs(expected)):
            discrepancies[key] = (value, expected)
    return ParamsReport(
        omega=omega,
        omega_prime=omega_prime,
        gamma=pipeline["gamma"],
        delta_cap=delta_cap,
        norm_sq=pipeline["norm_sq"],
        coeff_ratio=ratio,
        frame_phase=frame_phase,
        phi_prime=phi_prime,
        closed_form=dict(closed_form),
        discrepancies=discrepancies,
    )


def _single(cfg: HHGConfig, name: str) -> None:
    if cfg.is_two_color:
        raise ValueError(f"{name} needs the single-color scheme")


def fundamental_cat(cfg: HHGConfig) -> tuple[TwoBranchState, ParamsReport]:
    """Fundamental mode after projecting every harmonic onto chi_q.

    |delta_alpha> - <0|delta_alpha> exp(-Omega) |0>.
    """
    _single(cfg, "fundamental_cat")
    full = hhg.build_post_hhg_state(cfg)
    harmonics = hhg.plateau_amplitude(cfg).amplitudes
    state = project_modes(full, harmonics)
    omega = hhg.omega_total(cfg)
    d2 = abs(cfg.delta_alpha) ** 2
    closed = {"coeff_ratio": -math.exp(-d2 / 2 - omega), "omega": sum(abs(a) ** 2 for a in harmonics.values())}
    report = _report(state, omega=omega, omega_prime=omega,
                     frame_phase=hhg.frame_phase(cfg), closed_form=closed)
    return state, report


def pair_state(cfg: HHGConfig, qi: int, qj: int) -> tuple[TwoBranchState, ParamsReport]:
    """Two-mode entangled state left after measuring every mode except qi, qj.

    The vacuum branch is suppressed by exp(-Omega_ij), Omega_ij being the
    summed |amplitude|^2 of the measured modes (the fundamental contributes
    |delta_alpha|^2 when it is measured).
    """
    if qi == qj:
        raise ValueError("pair_state needs two distinct modes")
    hhg.check_modes(cfg, (qi, qj))
    full = hhg.build_state(cfg)
    signal = full.branch1
    measured = {m: a for m, a in signal.items() if m not in (qi, qj)}
    state = project_modes(full, measured)
    omega_ij = sum(abs(a) ** 2 for a in measured.values())
    kept = abs(signal[qi]) ** 2 + abs(signal[qj]) ** 2
    closed = {"coeff_ratio": -math.exp(-omega_ij - kept / 2)}
    delta_cap = (abs(cfg.delta_alpha_1) ** 2 + abs(cfg.delta_alpha_2) ** 2) if cfg.is_two_color else 0.0
    report = _report(state, omega=hhg.omega_total(cfg), omega_prime=omega_ij,
                     delta_cap=delta_cap, frame_phase=hhg.frame_phase(cfg), closed_form=closed)
    return state, report


def harmonic_bundle(cfg: HHGConfig) -> tuple[TwoBranchState, ParamsReport]:
    """All harmonics after projecting the fundamental onto alpha + delta_alpha."""
    _single(cfg, "harmonic_bundle")
    full = hhg.build_post_hhg_state(cfg)
    state = project_modes(full, {1: cfg.delta_alpha})
    omega = hhg.omega_total(cfg)
    d2 = abs(cfg.delta_alpha) ** 2
    closed = {"coeff_ratio": -math.exp(-d2 - omega / 2)}
    return state, _report(state, omega=omega, omega_prime=0.0, closed_form=closed)


def _sm_harmonic_norm_sq(d2: float, omega: float, omega_p: float) -> float:
    # closed-form N_q^-2 = 1 + e^-Omega (e^{-2|da|^2} e^-Omega' - 2 e^{-|da|^2})
    return 1 + math.exp(-omega) * (math.exp(-2 * d2 - omega_p) - 2 * math.exp(-d2))


def harmonic_cat(cfg: HHGConfig, q: int) -> tuple[TwoBranchState, ParamsReport]:
    """Harmonic q after measuring the fundamental and every other harmonic.

    |chi_q> - exp(-gamma) |0>, gamma = |delta_alpha|^2 + Omega' + |chi_q|^2 / 2.
    """
    _single(cfg, "harmonic_cat")
    if q not in hhg.harmonic_modes(cfg):
        raise ValueError(f"q={q} is not a harmonic mode for N={cfg.cutoff_N}")
    full = hhg.build_post_hhg_state(cfg)
    measured = {m: a for m, a in full.branch1.items() if m != q}
    state = project_modes(full, measured)
    omega = hhg.omega_total(cfg)
    omega_p = hhg.omega_excluding(cfg, {q})
    d2 = abs(cfg.delta_alpha) ** 2
    chi2 = abs(full.branch1[q]) ** 2
    gamma = d2 + omega_p + chi2 / 2
    n_cut = cfg.cutoff_N
    omega_p_linear = omega * (n_cut - 3) / (n_cut - 1)
    closed = {
        "coeff_ratio": -math.exp(-gamma),
        "gamma": gamma,
        "omega_prime": omega_p_linear,
        "norm_sq": _sm_harmonic_norm_sq(d2, omega, omega_p_linear),
    }
    return state, _report(state, omega=omega, omega_prime=omega_p, closed_form=closed)


def amplified_harmonic_cat(cfg: HHGConfig, q: int, chi_prime) -> tuple[TwoBranchState, ParamsReport]:
    """Harmonic cat displaced by an independent coherent field chi'.

    The displacement gives |chi' + chi_q> - exp(-i phi') exp(-gamma) |chi'>
    with phi' = Im(chi' conj(chi_q)). `closed_form` records the opposite sign
    convention, exp(+i phi'), which disagrees with the displacement operator
    and therefore shows up in `discrepancies` whenever phi' is nonzero.
    """
    chi_prime = amplitude(chi_prime)
    base, base_report = harmonic_cat(cfg, q)
    state = displace_mode(base, q, chi_prime)
    chi_q = base.branch1[q]
    phi_p = (chi_prime * chi_q.conjugate()).imag
    closed = {
        "coeff_ratio": -cmath.exp(1j * phi_p) * math.exp(-base_report.gamma),
        "gamma": base_report.closed_form["gamma"],
        "norm_sq": base_report.norm_sq,
    }
    report = _report(state, omega=base_report.omega, omega_prime=base_report.omega_prime,
                     phi_prime=phi_p, closed_form=closed)
    return state, report


def two_color_ecs(cfg: HHGConfig) -> tuple[TwoBranchState, ParamsReport]:
    """Entangled coherent state of the two drives after projecting all harmonics.

    |delta_alpha_1, delta_alpha_2> - exp(-Delta/2) exp(-Omega_bar) |0, 0>.
    """
    if not cfg.is_two_color:
        raise ValueError("two_color_ecs needs the two-color scheme")
    full = hhg.build_two_color_state(cfg)
    harmonics = hhg.plateau_amplitude(cfg).amplitudes
    state = project_modes(full, harmonics)
    omega_bar = hhg.omega_total(cfg)
    delta_cap = abs(cfg.delta_alpha_1) ** 2 + abs(cfg.delta_alpha_2) ** 2
    closed = {
        "coeff_ratio": -math.exp(-delta_cap / 2 - omega_bar),
        "omega": sum(abs(a) ** 2 for a in harmonics.values()),
    }
    report = _report(state, omega=omega_bar, omega_prime=omega_bar, delta_cap=delta_cap,
                     frame_phase=hhg.frame_phase(cfg), closed_form=closed)
    return state, report
