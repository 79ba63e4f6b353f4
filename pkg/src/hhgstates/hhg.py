"""Plateau model of single- and two-color HHG and the post-interaction states.

Amplitudes are stored in the frame displaced by the drive amplitude alpha:
the fundamental (and, for two colors, the 2-omega mode) carries delta_alpha
on the "harmonics emitted" branch and 0 on the vacuum branch. Every
observable depends only on delta_alpha and the harmonic shifts chi_q, so the
macroscopic alpha (~1e6) never has to be represented.
"""
from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass, replace

from .errors import DegenerateDepletion, ModeError
from .states import CoherentProduct, TwoBranchState, amplitude, product_overlap

__all__ = [
    "HHGConfig",
    "PlateauSpec",
    "Scheme",
    "build_post_hhg_state",
    "build_state",
    "build_two_color_state",
    "check_modes",
    "driving_modes",
    "frame_phase",
    "harmonic_modes",
    "nq_modes",
    "omega_excluding",
    "omega_partition",
    "omega_partition_linear",
    "omega_total",
    "plateau_amplitude",
]


class Scheme(str, enum.Enum):
    SINGLE_COLOR = "single_color"
    TWO_COLOR = "two_color"


@dataclass(frozen=True)
class HHGConfig:
    """Physical scenario.

    `delta_alpha` is used by the single-color scheme, `delta_alpha_1` and
    `delta_alpha_2` by the two-color one. `alpha_frame` (and `alpha_frame_2`
    for the 2-omega drive) only enter the display-frame phase bookkeeping.
    """

    scheme: Scheme = Scheme.SINGLE_COLOR
    cutoff_N: int = 11
    delta_alpha: complex = -0.2
    delta_alpha_1: complex = 0j
    delta_alpha_2: complex = 0j
    harmonic_phase: float = 0.0
    alpha_frame: complex = 0j
    alpha_frame_2: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        for name in ("delta_alpha", "delta_alpha_1", "delta_alpha_2", "alpha_frame", "alpha_frame_2"):
            object.__setattr__(self, name, amplitude(getattr(self, name)))
        object.__setattr__(self, "harmonic_phase", float(self.harmonic_phase))
        n = self.cutoff_N
        if int(n) != n or n < 3:
            raise ValueError(f"cutoff_N must be an integer >= 3, got {n!r}")
        object.__setattr__(self, "cutoff_N", int(n))
        if self.scheme is Scheme.SINGLE_COLOR and n % 2 == 0:
            raise ValueError(f"single-color cutoff must be odd (odd harmonics only), got {n}")

    @classmethod
    def single(cls, cutoff_N: int, delta_alpha, **kw) -> HHGConfig:
        return cls(Scheme.SINGLE_COLOR, cutoff_N, delta_alpha=delta_alpha, **kw)

    @classmethod
    def two_color(cls, cutoff_N: int, delta_alpha_1, delta_alpha_2, **kw) -> HHGConfig:
        return cls(
            Scheme.TWO_COLOR, cutoff_N, delta_alpha=0j,
            delta_alpha_1=delta_alpha_1, delta_alpha_2=delta_alpha_2, **kw,
        )

    @property
    def is_two_color(self) -> bool:
        return self.scheme is Scheme.TWO_COLOR

    @property
    def depletion_ratio(self) -> float:
        """r = |delta_alpha_2|^2 / |delta_alpha_1|^2 (two-color)."""
        d1 = abs(self.delta_alpha_1) ** 2
        if d1 == 0:
            raise DegenerateDepletion("r is undefined for delta_alpha_1 = 0")
        return abs(self.delta_alpha_2) ** 2 / d1

    @property
    def depletion_energy(self) -> float:
        """Energy drained from the drive(s) in units of the fundamental photon."""
        if self.is_two_color:
            return abs(self.delta_alpha_1) ** 2 + 2 * abs(self.delta_alpha_2) ** 2
        return abs(self.delta_alpha) ** 2

    def with_depletion(self, x: float) -> HHGConfig:
        """Copy with |delta_alpha| (or |delta_alpha_1|) rescaled to `x`.

        The phase of the depletion is kept (negative real if it was zero);
        for two colors the ratio r is preserved.
        """
        if self.is_two_color:
            d1, d2 = self.delta_alpha_1, self.delta_alpha_2
            if d1 == 0:
                raise DegenerateDepletion("cannot rescale with delta_alpha_1 = 0")
            scale = x / abs(d1)
            return replace(self, delta_alpha_1=d1 * scale, delta_alpha_2=d2 * scale)
        d = self.delta_alpha
        unit = d / abs(d) if d != 0 else -1.0
        return replace(self, delta_alpha=x * unit)


def driving_modes(cfg: HHGConfig) -> tuple[int, ...]:
    return (1, 2) if cfg.is_two_color else (1,)


def harmonic_modes(cfg: HHGConfig) -> tuple[int, ...]:
    """Odd orders 3..N for one color, every order 3..N for two colors."""
    step = 1 if cfg.is_two_color else 2
    return tuple(range(3, cfg.cutoff_N + 1, step))


@dataclass(frozen=True)
class PlateauSpec:
    chi_abs: float
    phase: float
    modes: tuple[int, ...]
    energy: float

    @property
    def chi(self) -> complex:
        return self.chi_abs * cmath.exp(1j * self.phase)

    @property
    def amplitudes(self) -> dict[int, complex]:
        return {q: self.chi for q in self.modes}

    def energy_balance_error(self) -> float:
        """Relative mismatch between sum_q q |chi_q|^2 and the drained energy."""
        emitted = sum(q * abs(a) ** 2 for q, a in self.amplitudes.items())
        return abs(emitted - self.energy) / self.energy


def _require_depletion(cfg: HHGConfig) -> None:
    if cfg.depletion_energy == 0:
        raise DegenerateDepletion("zero depletion: no harmonics, the conditioned state vanishes")


def _chi_squared(cfg: HHGConfig) -> float:
    """Common |chi|^2 fixed by energy conservation.

    Single color: sum over odd q = 3..N of q equals (N^2 + 2N - 3)/4.
    Two colors: sum over q = 3..N of q equals (N^2 + N)/2 - 3.
    """
    _require_depletion(cfg)
    n = cfg.cutoff_N
    if cfg.is_two_color:
        order_sum = (n * n + n) / 2 - 3
    else:
        order_sum = (n * n + 2 * n - 3) / 4
    return cfg.depletion_energy / order_sum


def plateau_amplitude(cfg: HHGConfig) -> PlateauSpec:
    """Plateau harmonics sharing the modulus fixed by energy conservation."""
    chi2 = _chi_squared(cfg)
    return PlateauSpec(chi2 ** 0.5, cfg.harmonic_phase, harmonic_modes(cfg), cfg.depletion_energy)


def omega_total(cfg: HHGConfig) -> float:
    """Decoherence factor: sum of |chi_q|^2 over all harmonics.

    Evaluated as (number of plateau modes) * |chi|^2, which equals
    2(N-1)/(N^2+2N-3) |delta_alpha|^2 for one color and
    (2N-4)/(N^2+N-6) (|delta_alpha_1|^2 + 2|delta_alpha_2|^2) for two.
    Every partial sum below uses the same product form, so complementary
    partitions give bit-identical totals.
    """
    return len(harmonic_modes(cfg)) * _chi_squared(cfg)


def omega_excluding(cfg: HHGConfig, excluded) -> float:
    """Sum of |chi_q|^2 over the harmonics not in `excluded`."""
    excluded = set(excluded)
    return sum(q not in excluded for q in harmonic_modes(cfg)) * _chi_squared(cfg)


def _check_n(cfg: HHGConfig, n: int) -> None:
    if cfg.is_two_color:
        raise ValueError("harmonic partitions are defined for the single-color scheme")
    if int(n) != n or not 1 <= n <= cfg.cutoff_N - 1:
        raise ValueError(f"n must be in [1, {cfg.cutoff_N - 1}], got {n!r}")


def nq_modes(cfg: HHGConfig, n: int) -> tuple[int, ...]:
    """Harmonic modes among the n harmonic labels 2..n+1.

    Labels count every order above the fundamental; even orders carry no
    light in single-color HHG, so n = 1 selects no populated mode.
    """
    _check_n(cfg, n)
    return tuple(q for q in harmonic_modes(cfg) if q <= n + 1)


def omega_partition(cfg: HHGConfig, n: int) -> tuple[float, float]:
    """Split Omega between labels above n+1 and labels 2..n+1 by mode counts.

    Returns (rest, kept); rest + kept equals omega_total.
    """
    kept_count = len(nq_modes(cfg, n))
    chi2 = _chi_squared(cfg)
    return (len(harmonic_modes(cfg)) - kept_count) * chi2, kept_count * chi2


def omega_partition_linear(cfg: HHGConfig, n: int) -> tuple[float, float]:
    """Linear interpolation Omega (N-n)/(N-1), Omega (n-1)/(N-1).

    Agrees with `omega_partition` for odd n only; kept for comparison.
    """
    _check_n(cfg, n)
    omega = omega_total(cfg)
    n_cut = cfg.cutoff_N
    return omega * (n_cut - n) / (n_cut - 1), omega * (n - 1) / (n_cut - 1)


def frame_phase(cfg: HHGConfig) -> float:
    """Phase phi = Im(alpha conj(delta_alpha)) summed over the drives.

    In the frame of the drive amplitude the vacuum-branch coefficient picks
    up exp(-i phi) relative to the displaced-frame value.
    """
    if cfg.is_two_color:
        return (cfg.alpha_frame * cfg.delta_alpha_1.conjugate()).imag + (
            cfg.alpha_frame_2 * cfg.delta_alpha_2.conjugate()
        ).imag
    return (cfg.alpha_frame * cfg.delta_alpha.conjugate()).imag


def _wavepacket_state(drives: dict[int, complex], harmonics: dict[int, complex]) -> TwoBranchState:
    emitted = CoherentProduct({**drives, **harmonics})
    vacuum = CoherentProduct({m: 0j for m in emitted})
    # removing the wavepacket vacuum component: |e> - |0><0|e>
    return TwoBranchState(1.0, emitted, -product_overlap(vacuum, emitted), vacuum)


def build_post_hhg_state(cfg: HHGConfig) -> TwoBranchState:
    """Entangled field state of all modes after single-color HHG."""
    if cfg.is_two_color:
        raise ValueError("use build_two_color_state for the two-color scheme")
    plateau = plateau_amplitude(cfg)
    return _wavepacket_state({1: cfg.delta_alpha}, plateau.amplitudes)


def build_two_color_state(cfg: HHGConfig) -> TwoBranchState:
    """Entangled field state after omega/2-omega HHG (modes 1, 2 and 3..N)."""
    if not cfg.is_two_color:
        raise ValueError("build_two_color_state needs the two-color scheme")
    plateau = plateau_amplitude(cfg)
    return _wavepacket_state({1: cfg.delta_alpha_1, 2: cfg.delta_alpha_2}, plateau.amplitudes)


def build_state(cfg: HHGConfig) -> TwoBranchState:
    return build_two_color_state(cfg) if cfg.is_two_color else build_post_hhg_state(cfg)


def check_modes(cfg: HHGConfig, modes) -> None:
    known = set(driving_modes(cfg)) | set(harmonic_modes(cfg))
    unknown = sorted(set(modes) - known)
    if unknown:
        raise ModeError(f"modes {unknown} do not exist for this configuration")
