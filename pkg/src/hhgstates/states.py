"""Exact algebra of multimode coherent products and two-branch superpositions.

Every state handled by the package has the form

    c1 |xi_1> (x) |xi_2> (x) ... + c2 |eta_1> (x) |eta_2> (x) ...

with coherent states on each mode. Overlaps of coherent states are known in
closed form, so norms, projections, displacements and reduced density
operators all reduce to 2x2 complex algebra. States are kept unnormalized;
normalization is recomputed whenever it is needed.
"""
from __future__ import annotations

import cmath
import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field

import numpy as np

from .errors import InconsistencyError, ModeError

__all__ = [
    "CoherentProduct",
    "Rank2Density",
    "TwoBranchState",
    "amplitude",
    "coherent_overlap",
    "displace_mode",
    "norm_squared",
    "product_overlap",
    "project_modes",
    "purity",
    "reduce_to_modes",
    "with_vacuum_modes",
]

# rounding slack for quantities that must lie in a closed interval
RANGE_TOL = 1e-12


def amplitude(value) -> complex:
    """Coerce `value` to a finite complex amplitude."""
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"amplitude must be finite, got {value!r}")
    return z


def _log_overlap(a: complex, b: complex) -> complex:
    # log<a|b> = -|a-b|^2/2 + i Im(conj(a) b); this split keeps the modulus exact
    d = a - b
    return complex(-0.5 * (d.real * d.real + d.imag * d.imag), (a.conjugate() * b).imag)


def coherent_overlap(a, b) -> complex:
    """Inner product <a|b> of two single-mode coherent states.

    Equal to exp(-|a|^2/2 - |b|^2/2 + conj(a) b); the modulus is
    exp(-|a - b|^2 / 2), which is 1 only for a == b.
    """
    return cmath.exp(_log_overlap(amplitude(a), amplitude(b)))


class CoherentProduct(Mapping):
    """Immutable tensor product of coherent states, keyed by mode label.

    Labels are harmonic orders (1 is the fundamental). Iteration follows
    ascending label order so that two products with the same mode set line
    up factor by factor.
    """

    __slots__ = ("_amps",)

    def __init__(self, amplitudes: Mapping[int, complex] | Iterable[tuple[int, complex]] = ()):
        items = amplitudes.items() if isinstance(amplitudes, Mapping) else amplitudes
        amps: dict[int, complex] = {}
        for mode, amp in items:
            mode = int(mode)
            if mode < 1:
                raise ModeError(f"mode labels start at 1, got {mode}")
            if mode in amps:
                raise ModeError(f"duplicate mode label {mode}")
            amps[mode] = amplitude(amp)
        self._amps = dict(sorted(amps.items()))

    def __getitem__(self, mode: int) -> complex:
        try:
            return self._amps[mode]
        except KeyError:
            raise ModeError(f"mode {mode} not present (modes: {list(self._amps)})") from None

    def __iter__(self) -> Iterator[int]:
        return iter(self._amps)

    def __len__(self) -> int:
        return len(self._amps)

    def __hash__(self) -> int:
        return hash(tuple(self._amps.items()))

    def __eq__(self, other) -> bool:
        if isinstance(other, CoherentProduct):
            return self._amps == other._amps
        return NotImplemented

    def __repr__(self) -> str:
        body = ", ".join(f"{m}: {a:.6g}" for m, a in self._amps.items())
        return f"CoherentProduct({{{body}}})"

    @property
    def modes(self) -> tuple[int, ...]:
        return tuple(self._amps)

    def restrict(self, modes: Iterable[int]) -> CoherentProduct:
        """Sub-product on `modes` (all must be present)."""
        return CoherentProduct((m, self[m]) for m in modes)

    def without(self, modes: Iterable[int]) -> CoherentProduct:
        drop = set(modes)
        return CoherentProduct((m, a) for m, a in self._amps.items() if m not in drop)

    def updated(self, changes: Mapping[int, complex]) -> CoherentProduct:
        amps = dict(self._amps)
        amps.update(changes)
        return CoherentProduct(amps)


def _check_same_modes(p1: CoherentProduct, p2: CoherentProduct) -> None:
    if p1.modes != p2.modes:
        raise ModeError(f"mode sets differ: {p1.modes} vs {p2.modes}")


def product_overlap(p1: CoherentProduct, p2: CoherentProduct) -> complex:
    """<p1|p2> as the product of single-mode overlaps."""
    _check_same_modes(p1, p2)
    return cmath.exp(sum((_log_overlap(p1[m], p2[m]) for m in p1), 0j))


def _distance_squared(p1: CoherentProduct, p2: CoherentProduct) -> float:
    return sum(abs(p1[m] - p2[m]) ** 2 for m in p1)


@dataclass(frozen=True)
class TwoBranchState:
    """Unnormalized superposition c1 |branch1> + c2 |branch2>."""

    c1: complex
    branch1: CoherentProduct
    c2: complex
    branch2: CoherentProduct

    def __post_init__(self):
        object.__setattr__(self, "c1", amplitude(self.c1))
        object.__setattr__(self, "c2", amplitude(self.c2))
        for name in ("branch1", "branch2"):
            value = getattr(self, name)
            if not isinstance(value, CoherentProduct):
                object.__setattr__(self, name, CoherentProduct(value))
        _check_same_modes(self.branch1, self.branch2)
        if not self.branch1:
            raise ModeError("a state needs at least one mode")

    @property
    def modes(self) -> tuple[int, ...]:
        return self.branch1.modes

    @property
    def coeff_ratio(self) -> complex:
        return self.c2 / self.c1

    def with_phase(self, theta: float) -> TwoBranchState:
        """Same ray with both coefficients multiplied by exp(i theta)."""
        ph = cmath.exp(1j * theta)
        return TwoBranchState(self.c1 * ph, self.branch1, self.c2 * ph, self.branch2)


def norm_squared(s: TwoBranchState) -> float:
    """<s|s> = |c1|^2 + |c2|^2 + 2 Re(conj(c1) c2 <b1|b2>).

    Evaluated as |c1 + c2 O|^2 + |c2|^2 (1 - |O|^2) with O = <b1|b2>, which
    is a sum of nonnegative terms; 1 - |O|^2 goes through expm1 so nearly
    coincident branches do not cancel catastrophically.
    """
    overlap = product_overlap(s.branch1, s.branch2)
    gap = -math.expm1(-_distance_squared(s.branch1, s.branch2))
    value = abs(s.c1 + s.c2 * overlap) ** 2 + abs(s.c2) ** 2 * gap
    if value < -RANGE_TOL:
        raise InconsistencyError(f"negative norm squared {value}")
    return max(value, 0.0)


def project_modes(s: TwoBranchState, assignments: Mapping[int, complex]) -> TwoBranchState:
    """Project the modes in `assignments` onto the given coherent amplitudes.

    Returns the (unnormalized) state of the remaining modes; each branch
    coefficient picks up the overlap <assigned|branch> on the projected modes.
    """
    if not assignments:
        return s
    unknown = sorted(set(assignments) - set(s.modes))
    if unknown:
        raise ModeError(f"cannot project unknown modes {unknown}")
    if len(assignments) == len(s.modes):
        raise ModeError("projection would remove every mode; use product_overlap instead")
    target = CoherentProduct(assignments)
    measured = target.modes
    f1 = product_overlap(target, s.branch1.restrict(measured))
    f2 = product_overlap(target, s.branch2.restrict(measured))
    return TwoBranchState(
        s.c1 * f1, s.branch1.without(measured), s.c2 * f2, s.branch2.without(measured)
    )


def displace_mode(s: TwoBranchState, mode: int, shift) -> TwoBranchState:
    """Apply the displacement D(shift) to one mode.

    Uses D(b)|a> = exp(i Im(b conj(a))) |a + b>, so each branch coefficient
    absorbs its own phase.
    """
    shift = amplitude(shift)
    a1, a2 = s.branch1[mode], s.branch2[mode]
    ph1 = cmath.exp(1j * (shift * a1.conjugate()).imag)
    ph2 = cmath.exp(1j * (shift * a2.conjugate()).imag)
    return TwoBranchState(
        s.c1 * ph1,
        s.branch1.updated({mode: a1 + shift}),
        s.c2 * ph2,
        s.branch2.updated({mode: a2 + shift}),
    )


def with_vacuum_modes(s: TwoBranchState, modes: Iterable[int]) -> TwoBranchState:
    """Tensor the state with vacuum on extra, currently absent, modes."""
    extra = {int(m): 0j for m in modes}
    clash = sorted(set(extra) & set(s.modes))
    if clash:
        raise ModeError(f"modes already present: {clash}")
    return TwoBranchState(s.c1, s.branch1.updated(extra), s.c2, s.branch2.updated(extra))


@dataclass(frozen=True, eq=False)
class Rank2Density:
    """Density operator sum_ij M_ij |b_i><b_j| on the span of two coherent products."""

    basis: tuple[CoherentProduct, CoherentProduct]
    coeff: np.ndarray = field(repr=False)

    def __post_init__(self):
        coeff = np.array(self.coeff, dtype=complex)
        if coeff.shape != (2, 2):
            raise ValueError("coefficient matrix must be 2x2")
        coeff.setflags(write=False)
        object.__setattr__(self, "coeff", coeff)
        _check_same_modes(*self.basis)

    @property
    def modes(self) -> tuple[int, ...]:
        return self.basis[0].modes

    def gram(self) -> np.ndarray:
        b1, b2 = self.basis
        g12 = product_overlap(b1, b2)
        return np.array([[1.0, g12], [g12.conjugate(), 1.0]], dtype=complex)

    def operator(self) -> np.ndarray:
        """The 2x2 matrix M G whose spectrum is the nonzero spectrum of rho."""
        return self.coeff @ self.gram()

    def gram_determinant(self) -> float:
        """det G = 1 - |<b1|b2>|^2, evaluated without cancellation."""
        return -math.expm1(-_distance_squared(*self.basis))

    def trace(self) -> float:
        return float(np.trace(self.operator()).real)

    def eigenvalues(self) -> np.ndarray:
        """Spectrum of M G; real and within [0, 1] for a valid density."""
        ev = np.linalg.eigvals(self.operator())
        if np.max(np.abs(ev.imag)) > RANGE_TOL or np.any(ev.real < -RANGE_TOL) or np.any(ev.real > 1 + RANGE_TOL):
            raise InconsistencyError(f"eigenvalues {ev} are not a probability spectrum")
        return np.sort(ev.real)


def reduce_to_modes(s: TwoBranchState, keep: Iterable[int]) -> Rank2Density:
    """Normalized reduced density operator of the modes in `keep`.

    Tracing out the complement T gives
    M_ij = c_i conj(c_j) <t_j|t_i> / <s|s>, where t_i is branch i on T.
    """
    keep = sorted(set(int(m) for m in keep))
    modes = set(s.modes)
    if not keep or not set(keep) < modes:
        raise ModeError(f"keep={keep} must be a nonempty proper subset of {sorted(modes)}")
    traced = sorted(modes - set(keep))
    t1, t2 = s.branch1.restrict(traced), s.branch2.restrict(traced)
    t21 = product_overlap(t2, t1)
    c = (s.c1, s.c2)
    coeff = np.array(
        [
            [abs(s.c1) ** 2, c[0] * c[1].conjugate() * t21],
            [c[1] * c[0].conjugate() * t21.conjugate(), abs(s.c2) ** 2],
        ],
        dtype=complex,
    )
    coeff /= norm_squared(s)
    return Rank2Density((s.branch1.restrict(keep), s.branch2.restrict(keep)), coeff)


def purity(rho: Rank2Density) -> float:
    """Tr(rho^2) = tr(M G M G).

    Uses tr(X^2) = tr(X)^2 - 2 det(X) for the 2x2 X = M G, with det G from
    expm1, so nearly parallel branches do not cancel catastrophically.
    """
    m = rho.coeff
    t = rho.trace()
    det_m = float((m[0, 0] * m[1, 1]).real - abs(m[0, 1]) ** 2)
    value = 1.0 - 2.0 * det_m * rho.gram_determinant() / (t * t)
    if not -RANGE_TOL <= value <= 1 + RANGE_TOL:
        raise InconsistencyError(f"purity {value} outside [0, 1]")
    return min(max(value, 0.0), 1.0)
