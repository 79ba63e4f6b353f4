"""Closed form vs. Fock oracle agreement checks on small canonical instances."""
from __future__ import annotations

import cmath
import math
from collections.abc import Callable, Iterator
from dataclasses import dataclass

import numpy as np

from . import conditioning, entanglement, hhg, oracle
from .hhg import HHGConfig
from .states import norm_squared
from .wigner import wigner_point

__all__ = ["CheckResult", "GROUPS", "merged_harmonic_purity", "run_checks"]

GRAM_TOL = 1e-10
ORACLE_TOL = 1e-8
PIPELINE_TOL = 1e-13

DEPLETIONS = (0.1, 0.5, 1.0, 2.0)
RATIOS = (0.5, 1.0, 2.0)


@dataclass(frozen=True)
class CheckResult:
    group: str
    name: str
    value: complex
    reference: complex
    tol: float

    @property
    def error(self) -> float:
        return abs(self.value - self.reference)

    @property
    def passed(self) -> bool:
        return self.error <= self.tol

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.group}/{self.name}: value={_fmt(self.value)} "
                f"reference={_fmt(self.reference)} |diff|={self.error:.3e} tol={self.tol:.1e}")


def _fmt(z: complex) -> str:
    z = complex(z)
    return f"{z.real:.12g}" if z.imag == 0 else f"{z.real:.12g}{z.imag:+.12g}j"


def _single(x: float, n: int = 5) -> HHGConfig:
    return HHGConfig.single(n, -x)


def _two_color(x: float, r: float, n: int = 4) -> HHGConfig:
    return HHGConfig.two_color(n, -x, -math.sqrt(r) * x)


def _oracle_post_hhg(cfg: HHGConfig, extra_vacuum=()) -> oracle.FockState:
    signal = dict(hhg.build_state(cfg).branch1)
    signal.update({m: 0j for m in extra_vacuum})
    return oracle.wavepacket_state(signal)


def _oracle_purity(state: oracle.FockState, keep) -> float:
    return oracle.pure_state_purity(state, keep)


def merged_harmonic_purity(cfg: HHGConfig) -> float:
    """Oracle purity of the fundamental for a single-color config of any cutoff.

    A passive linear-optics network maps the product of equal-phase harmonic
    coherent states to one mode of amplitude sqrt(Omega) and leaves the vacuum
    invariant; unitaries on the traced side do not change the fundamental's
    reduced state, so two modes suffice.
    """
    omega = hhg.omega_excluding(cfg, ())
    state = oracle.wavepacket_state({1: cfg.delta_alpha, 3: math.sqrt(omega)})
    return _oracle_purity(state, [1])


def _norm_checks(tol: float | None) -> Iterator[CheckResult]:
    for x in DEPLETIONS:
        cfg = _single(x)
        yield CheckResult("states", f"norm_sq(N=5,|da|={x})", norm_squared(hhg.build_post_hhg_state(cfg)),
                          _oracle_post_hhg(cfg).norm_squared(), tol or ORACLE_TOL)
    for r in RATIOS:
        cfg = _two_color(0.5, r)
        yield CheckResult("states", f"norm_sq(two-color N=4,r={r})",
                          norm_squared(hhg.build_two_color_state(cfg)),
                          _oracle_post_hhg(cfg).norm_squared(), tol or ORACLE_TOL)


def _entropy_checks(tol: float | None) -> Iterator[CheckResult]:
    for x in DEPLETIONS:
        cfg = _single(x)
        full = hhg.build_post_hhg_state(cfg)
        fock = _oracle_post_hhg(cfg)
        closed = entanglement.s_lin_fundamental(cfg)
        yield CheckResult("entropy", f"S1 gram(|da|={x})", closed,
                          entanglement.s_lin_generic(full, [1]), tol or GRAM_TOL)
        yield CheckResult("entropy", f"S1 oracle(|da|={x})", closed,
                          1 - _oracle_purity(fock, [1]), tol or ORACLE_TOL)
        for n in range(1, cfg.cutoff_N):
            closed = entanglement.s_lin_nq(cfg, n)
            state, keep = entanglement.nq_partition(cfg, n)
            yield CheckResult("entropy", f"Snq gram(n={n},|da|={x})", closed,
                              entanglement.s_lin_generic(state, keep), tol or GRAM_TOL)
            vacuum = [m for m in state.modes if m not in full.modes]
            oracle_s = 1 - _oracle_purity(_oracle_post_hhg(cfg, extra_vacuum=vacuum), keep)
            yield CheckResult("entropy", f"Snq oracle(n={n},|da|={x})", closed, oracle_s, tol or ORACLE_TOL)
        for r in RATIOS:
            cfg2 = _two_color(x, r)
            closed = entanglement.s_lin_two_color(cfg2)
            ecs, _ = conditioning.two_color_ecs(cfg2)
            yield CheckResult("entropy", f"S' gram(r={r},|da1|={x})", closed,
                              entanglement.s_lin_generic(ecs, [1]), tol or GRAM_TOL)
            fock2 = oracle.project_onto_coherent(_oracle_post_hhg(cfg2), hhg.plateau_amplitude(cfg2).amplitudes)
            yield CheckResult("entropy", f"S' oracle(r={r},|da1|={x})", closed,
                              1 - _oracle_purity(fock2, [1]), tol or ORACLE_TOL)
    small = _single(0.01, 11)
    yield CheckResult("entropy", "S1 small-depletion oracle(|da|=0.01,N=11)",
                      entanglement.s_lin_fundamental(small), 1 - merged_harmonic_purity(small), tol or ORACLE_TOL)


def wigner_sample_points(count: int = 25, seed: int = 20221) -> np.ndarray:
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-2, 2, size=(count, 2))
    return pts[:, 0] + 1j * pts[:, 1]


def _wigner_checks(tol: float | None) -> Iterator[CheckResult]:
    cases = {
        "harmonic_cat(N=11,da=-0.2)": conditioning.harmonic_cat(_single(0.2, 11), 11)[0],
        "fundamental_cat(N=11,da=-1)": conditioning.fundamental_cat(_single(1.0, 11))[0],
    }
    betas = wigner_sample_points()
    reach = max(abs(betas))
    for label, state in cases.items():
        rho = oracle.assemble_state(state, reach=reach).density()
        for k, beta in enumerate(betas):
            yield CheckResult("wigner", f"{label}[{k}]", wigner_point(state, beta),
                              oracle.wigner_parity(rho, beta), tol or ORACLE_TOL)


def _max_elementwise(a: oracle.FockState, b: oracle.FockState) -> float:
    return float(np.max(np.abs(a.amplitudes - b.amplitudes)))


def _conditioning_checks(tol: float | None) -> Iterator[CheckResult]:
    cfg = _single(0.5)
    fock = _oracle_post_hhg(cfg)
    signal = dict(hhg.build_post_hhg_state(cfg).branch1)
    cases: dict[str, tuple[Callable, dict]] = {
        "fundamental_cat": (lambda: conditioning.fundamental_cat(cfg), {3: signal[3], 5: signal[5]}),
        "harmonic_cat(q=3)": (lambda: conditioning.harmonic_cat(cfg, 3), {1: signal[1], 5: signal[5]}),
        "harmonic_bundle": (lambda: conditioning.harmonic_bundle(cfg), {1: signal[1]}),
        "pair_state(1,3)": (lambda: conditioning.pair_state(cfg, 1, 3), {5: signal[5]}),
        "pair_state(3,5)": (lambda: conditioning.pair_state(cfg, 3, 5), {1: signal[1]}),
    }
    for label, (build, assignments) in cases.items():
        state, _ = build()
        projected = oracle.project_onto_coherent(fock, assignments)
        mine = oracle.assemble_state(state, n_max=dict(zip(projected.modes, projected.n_max)))
        yield CheckResult("conditioning", label, _max_elementwise(mine, projected), 0.0, tol or ORACLE_TOL)
    cfg2 = _two_color(0.5, 1.0)
    ecs, _ = conditioning.two_color_ecs(cfg2)
    projected = oracle.project_onto_coherent(_oracle_post_hhg(cfg2), hhg.plateau_amplitude(cfg2).amplitudes)
    mine = oracle.assemble_state(ecs, n_max=dict(zip(projected.modes, projected.n_max)))
    yield CheckResult("conditioning", "two_color_ecs", _max_elementwise(mine, projected), 0.0, tol or ORACLE_TOL)


def _displacement_checks(tol: float | None) -> Iterator[CheckResult]:
    n = 60
    trusted = n - oracle.UNTRUSTED_ROWS
    b1, b2 = 0.7 - 0.4j, -0.3 + 1.1j
    lhs = oracle.displacement_matrix(b1, n) @ oracle.displacement_matrix(b2, n)
    rhs = cmath.exp(1j * (b1 * b2.conjugate()).imag) * oracle.displacement_matrix(b1 + b2, n)
    yield CheckResult("displacement", "composition law",
                      float(np.max(np.abs(lhs - rhs)[: trusted // 2, : trusted // 2])), 0.0, tol or ORACLE_TOL)
    cfg = _single(0.2, 11)
    base, _ = conditioning.harmonic_cat(cfg, 11)
    amplified, _ = conditioning.amplified_harmonic_cat(cfg, 11, 2j)
    disp = oracle.displacement_matrix(2j, n + 30)[: n + 1, : n + 1]
    moved = disp @ oracle.assemble_state(base, n).amplitudes
    direct = oracle.assemble_state(amplified, n).amplitudes
    yield CheckResult("displacement", "amplified_harmonic_cat(chi'=2i)",
                      float(np.max(np.abs(moved - direct)[:trusted])), 0.0, tol or ORACLE_TOL)


def _pipeline_checks(tol: float | None) -> Iterator[CheckResult]:
    cfg = _single(0.2, 11)
    pairs = {
        "fundamental_cat": (conditioning.fundamental_cat(cfg)[1]),
        "harmonic_bundle": (conditioning.harmonic_bundle(cfg)[1]),
        "harmonic_cat": (conditioning.harmonic_cat(cfg, 11)[1]),
        "pair_state(1,11)": (conditioning.pair_state(cfg, 1, 11)[1]),
        "two_color_ecs": (conditioning.two_color_ecs(HHGConfig.two_color(11, -0.5, -0.5))[1]),
    }
    for label, report in pairs.items():
        yield CheckResult("pipeline", f"{label} coeff_ratio", report.coeff_ratio,
                          report.closed_form["coeff_ratio"], tol or PIPELINE_TOL)


GROUPS: dict[str, Callable[[float | None], Iterator[CheckResult]]] = {
    "states": _norm_checks,
    "entropy": _entropy_checks,
    "wigner": _wigner_checks,
    "conditioning": _conditioning_checks,
    "displacement": _displacement_checks,
    "pipeline": _pipeline_checks,
}


def run_checks(only=None, tol: float | None = None) -> list[CheckResult]:
    """Run the selected groups; `tol` replaces every per-check tolerance."""
    names = list(GROUPS) if not only else list(only)
    unknown = [g for g in names if g not in GROUPS]
    if unknown:
        raise ValueError(f"unknown check groups {unknown}; available: {list(GROUPS)}")
    results = []
    for name in names:
        results.extend(GROUPS[name](tol))
    return results
