"""Linear entropies of the HHG field states and sweeps over the depletion.

For a pure state c1 |a1>|b1> + c2 |a2>|b2> cut between the a and b factors,

    1 - Tr(rho_a^2) = 2 |c1 c2|^2 (1 - |<a1|a2>|^2)(1 - |<b1|b2>|^2) / <psi|psi>^2.

The expanded closed forms (sums of exponentials) for the three standard
partitions are algebraically equal to this expression; we evaluate it with
expm1 so small depletions do not lose every significant digit. The expanded
expressions are kept as `expanded_*` for cross-checking.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import hhg
from .errors import DegenerateDepletion, InconsistencyError
from .hhg import HHGConfig
from .states import TwoBranchState, purity, reduce_to_modes, with_vacuum_modes

__all__ = [
    "EntropyCurve",
    "entropy_sweep",
    "nq_partition",
    "expanded_s_lin_fundamental",
    "expanded_s_lin_nq",
    "expanded_s_lin_two_color",
    "s_lin_fundamental",
    "s_lin_generic",
    "s_lin_nq",
    "s_lin_two_color",
]

PARTITIONS = ("fundamental", "nq", "two_color")


def _gap(x: float) -> float:
    """1 - exp(-x) without cancellation."""
    return -math.expm1(-x)


def _checked(s: float) -> float:
    if not -1e-12 <= s <= 0.5 + 1e-9:
        raise InconsistencyError(f"rank-2 linear entropy {s} outside [0, 1/2]")
    return max(s, 0.0)


def _single_depletion(cfg: HHGConfig) -> float:
    if cfg.is_two_color:
        raise ValueError("this entropy is defined for the single-color scheme")
    d2 = abs(cfg.delta_alpha) ** 2
    if d2 == 0:
        raise DegenerateDepletion("delta_alpha = 0")
    return d2


def _post_hhg_entropy(kept: float, traced: float) -> float:
    """Entropy of |signal> - <0|signal>|0> cut into parts of mean photon
    numbers `kept` and `traced`; symmetric in its arguments."""
    # vacuum-branch weight u^2 = e^-(kept+traced), norm^2 = 1 - u^2
    total = kept + traced
    u2 = math.exp(-total)
    return _checked(2 * u2 * (_gap(kept) * _gap(traced)) / _gap(total) ** 2)


def s_lin_fundamental(cfg: HHGConfig) -> float:
    """Linear entropy of the fundamental against all harmonics."""
    d2 = _single_depletion(cfg)
    return _post_hhg_entropy(d2, hhg.omega_total(cfg))


def s_lin_nq(cfg: HHGConfig, n: int) -> float:
    """Linear entropy of the harmonic labels 2..n+1 against all other modes."""
    d2 = _single_depletion(cfg)
    rest, kept = hhg.omega_partition(cfg, n)
    return _post_hhg_entropy(kept, d2 + rest)


def s_lin_two_color(cfg: HHGConfig) -> float:
    """Linear entropy of the omega drive against the 2-omega drive in the ECS."""
    if not cfg.is_two_color:
        raise ValueError("s_lin_two_color needs the two-color scheme")
    d1 = abs(cfg.delta_alpha_1) ** 2
    d2 = abs(cfg.delta_alpha_2) ** 2
    omega_bar = hhg.omega_total(cfg)
    delta = d1 + d2
    v2 = math.exp(-delta - 2 * omega_bar)
    # norm^2 = 1 + v^2 - 2 v w with w = e^{-delta/2}, rewritten as a sum of squares
    norm_sq = _gap(delta + omega_bar) ** 2 + v2 * _gap(delta)
    return _checked(2 * v2 * _gap(d1) * _gap(d2) / norm_sq ** 2)


def expanded_s_lin_fundamental(cfg: HHGConfig) -> float:
    """Literal closed form 1 - N^4 [1 - (e^{-2d} - 2e^{-d})(e^{-2W} - 2e^{-W})].

    The normalization is 1/(1 - e^{-(d + W)}), with d = |delta_alpha|^2 and
    W = Omega both squared moduli.
    """
    d = _single_depletion(cfg)
    w = hhg.omega_total(cfg)
    n4 = 1 / (1 - math.exp(-(d + w))) ** 2
    return 1 - n4 * (1 - (math.exp(-2 * d) - 2 * math.exp(-d)) * (math.exp(-2 * w) - 2 * math.exp(-w)))


def expanded_s_lin_nq(cfg: HHGConfig, n: int, linear: bool = False) -> float:
    """Literal closed form for n harmonic labels.

    With `linear=True` the partition uses the linear interpolation of Omega
    in n instead of the direct mode sums.
    """
    d = _single_depletion(cfg)
    w = hhg.omega_total(cfg)
    split = hhg.omega_partition_linear if linear else hhg.omega_partition
    rest, kept = split(cfg, n)
    n4 = 1 / (1 - math.exp(-(d + w))) ** 2
    inner = math.exp(-d - w) * (2 - math.exp(-d - rest)) * (2 - math.exp(-kept))
    return 1 - n4 * (1 - inner)


def expanded_s_lin_two_color(cfg: HHGConfig) -> float:
    d1 = abs(cfg.delta_alpha_1) ** 2
    d2 = abs(cfg.delta_alpha_2) ** 2
    delta = d1 + d2
    ob = hhg.omega_total(cfg)
    e = math.exp
    n4 = 1 / (1 + e(-delta) * (e(-2 * ob) - 2 * e(-ob))) ** 2
    inner = (
        1
        - 2 * e(-delta - ob) * (2 - e(-ob) * (e(-d1) + e(-d2)))
        + e(-2 * delta - 2 * ob) * (2 - 4 * e(-ob) + e(-2 * ob))
    )
    return 1 - n4 * inner


def s_lin_generic(state: TwoBranchState, keep) -> float:
    """1 - Tr(rho^2) of the modes in `keep`, from the 2x2 Gram algebra."""
    return 1 - purity(reduce_to_modes(state, keep))


def nq_partition(cfg: HHGConfig, n: int) -> tuple[TwoBranchState, tuple[int, ...]]:
    """Post-HHG state and kept modes for the harmonic labels 2..n+1.

    Even labels carry vacuum in single-color HHG and are not part of the
    built state; they are tensored back in so that the kept set is never
    empty (n = 1 keeps only the vacuum mode 2).
    """
    populated = hhg.nq_modes(cfg, n)
    vacuum = [q for q in range(2, n + 2) if q not in populated]
    state = with_vacuum_modes(hhg.build_post_hhg_state(cfg), vacuum)
    return state, tuple(sorted(populated + tuple(vacuum)))


@dataclass(frozen=True)
class EntropyCurve:
    parameter_name: str
    samples: tuple[tuple[float, float], ...]
    config_snapshot: HHGConfig
    partition: str

    @property
    def x(self) -> np.ndarray:
        return np.array([p[0] for p in self.samples])

    @property
    def s(self) -> np.ndarray:
        return np.array([p[1] for p in self.samples])


def _sweep_config(template: HHGConfig, partition: str, x: float, r: float | None) -> HHGConfig:
    if partition != "two_color":
        return template.with_depletion(x)
    d1 = template.delta_alpha_1
    unit1 = d1 / abs(d1) if d1 != 0 else -1.0
    d2 = template.delta_alpha_2
    unit2 = d2 / abs(d2) if d2 != 0 else unit1
    ratio = template.depletion_ratio if r is None else r
    return replace(template, delta_alpha_1=x * unit1, delta_alpha_2=math.sqrt(ratio) * x * unit2)


def entropy_sweep(template: HHGConfig, partition: str, x_values, *, n: int | None = None,
                  r: float | None = None, workers: int = 1) -> EntropyCurve:
    """Evaluate one entropy partition over |delta_alpha| (|delta_alpha_1| for two colors).

    partition is "fundamental", "nq" (requires `n`) or "two_color"
    (`r` overrides the template's depletion ratio).
    """
    xs = [float(x) for x in x_values]
    if not xs:
        raise ValueError("x_values is empty")
    if xs[0] <= 0 or any(b <= a for a, b in zip(xs, xs[1:])):
        raise ValueError("x_values must be positive and strictly increasing")
    if partition not in PARTITIONS:
        raise ValueError(f"unknown partition {partition!r}; choose from {PARTITIONS}")
    if partition == "nq" and n is None:
        raise ValueError("partition 'nq' needs n")
    if partition == "two_color":
        if not template.is_two_color:
            raise ValueError("partition 'two_color' needs a two-color template")
        if r is not None and r < 0:
            raise ValueError("r must be nonnegative")
        label = f"two_color:r={r if r is not None else template.depletion_ratio:g}"
    else:
        label = "fundamental" if partition == "fundamental" else f"nq:n={n}"

    def evaluate(x: float) -> float:
        cfg = _sweep_config(template, partition, x, r)
        if partition == "fundamental":
            return s_lin_fundamental(cfg)
        if partition == "nq":
            return s_lin_nq(cfg, n)
        return s_lin_two_color(cfg)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(evaluate, xs))
    else:
        values = [evaluate(x) for x in xs]
    snapshot = _sweep_config(template, partition, xs[-1], r) if partition == "two_color" else template
    return EntropyCurve("abs_delta_alpha", tuple(zip(xs, values)), snapshot, label)
