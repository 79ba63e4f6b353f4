"""Brute-force truncated number-basis oracle.

Nothing here uses the closed-form coherent-state algebra of `states`: states
are explicit coefficient tensors, overlaps are dot products, reduced states
come from reshaping and contracting, and the Wigner function comes from the
displaced-parity formula with a matrix-exponential displacement. It exists
to check the closed forms and is deliberately slow.
"""
from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import reduce

import numpy as np
from scipy.linalg import expm

from .errors import InconsistencyError, ModeError, TruncationTooSmall
from .states import TwoBranchState

__all__ = [
    "MAX_DIM",
    "FockDensity",
    "FockState",
    "assemble_state",
    "coherent_vector",
    "displacement_matrix",
    "n_max_rule",
    "partial_trace",
    "project_onto_coherent",
    "purity_fock",
    "pure_state_purity",
    "reduced_density",
    "wavepacket_state",
    "wigner_parity",
]

MAX_DIM = 2 ** 22
MIN_N_MAX = 12
# rows at the top of a truncated ladder that the matrix exponential corrupts
UNTRUSTED_ROWS = 10


def n_max_rule(abs_amplitude: float) -> int:
    """Cutoff with Poisson tail mass below 1e-12: |a|^2 + 10 sqrt(|a|^2 + 1)."""
    a2 = float(abs_amplitude) ** 2
    return max(MIN_N_MAX, math.ceil(a2 + 10 * math.sqrt(a2 + 1)))


@dataclass(frozen=True, eq=False)
class FockState:
    """Coefficient tensor over modes, axis k spanning 0..dims[k]-1 photons."""

    modes: tuple[int, ...]
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != len(self.modes):
            raise ValueError("one tensor axis per mode required")
        if amps.size > MAX_DIM:
            raise ValueError(f"dimension {amps.size} exceeds cap {MAX_DIM}")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "modes", tuple(int(m) for m in self.modes))

    @property
    def dims(self) -> tuple[int, ...]:
        return self.amplitudes.shape

    @property
    def n_max(self) -> tuple[int, ...]:
        return tuple(d - 1 for d in self.dims)

    def norm_squared(self) -> float:
        v = self.amplitudes.ravel()
        return float(np.vdot(v, v).real)

    def inner(self, other: FockState) -> complex:
        if self.modes != other.modes or self.dims != other.dims:
            raise ModeError("inner product needs identical mode layouts")
        return complex(np.vdot(self.amplitudes.ravel(), other.amplitudes.ravel()))

    def density(self) -> FockDensity:
        """Full normalized density matrix; only sensible for small dimensions."""
        v = self.amplitudes.ravel()
        return FockDensity(self.modes, self.dims, np.outer(v, v.conj()) / self.norm_squared())


@dataclass(frozen=True, eq=False)
class FockDensity:
    modes: tuple[int, ...]
    dims: tuple[int, ...]
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        total = int(np.prod(self.dims))
        if mat.shape != (total, total):
            raise ValueError(f"matrix shape {mat.shape} does not match dims {self.dims}")
        if not np.allclose(mat, mat.conj().T, rtol=0, atol=1e-12):
            raise InconsistencyError("density matrix is not Hermitian")
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "modes", tuple(int(m) for m in self.modes))
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


def coherent_vector(a: complex, n_max: int, strict: bool = True) -> np.ndarray:
    """Coefficients e^{-|a|^2/2} a^n / sqrt(n!) for n = 0..n_max."""
    a = complex(a)
    if strict and n_max < n_max_rule(abs(a)):
        raise TruncationTooSmall(f"n_max={n_max} below rule {n_max_rule(abs(a))} for |a|={abs(a):.3g}")
    c = np.empty(n_max + 1, dtype=complex)
    c[0] = math.exp(-abs(a) ** 2 / 2)
    for n in range(1, n_max + 1):
        c[n] = c[n - 1] * a / math.sqrt(n)
    return c


def _annihilation(n_max: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), 1).astype(complex)


def displacement_matrix(b: complex, n_max: int) -> np.ndarray:
    """exp(b a^dagger - conj(b) a) on the truncated ladder.

    Only the leading (n_max - 10) rows and columns are accurate.
    """
    a = _annihilation(n_max)
    b = complex(b)
    return expm(b * a.conj().T - b.conjugate() * a)


def _cutoffs(s: TwoBranchState, n_max, reach: float) -> dict[int, int]:
    if n_max is None:
        return {m: n_max_rule(max(abs(s.branch1[m]), abs(s.branch2[m])) + reach) for m in s.modes}
    if isinstance(n_max, Mapping):
        return {m: int(n_max[m]) for m in s.modes}
    return {m: int(n_max) for m in s.modes}


def _product_tensor(vectors: list[np.ndarray]) -> np.ndarray:
    return reduce(np.multiply.outer, vectors)


def _check_dim(cutoffs) -> None:
    total = math.prod(n + 1 for n in cutoffs)
    if total > MAX_DIM:
        raise ValueError(f"dimension {total} exceeds cap {MAX_DIM}")


def assemble_state(s: TwoBranchState, n_max=None, reach: float = 0.0) -> FockState:
    """c1 (x) coherent(branch1) + c2 (x) coherent(branch2), unnormalized.

    `n_max` is an int, a per-mode mapping, or None for the tail-mass rule
    applied to the largest branch amplitude plus `reach` (set `reach` to the
    largest |beta| when the result feeds `wigner_parity`).
    """
    cut = _cutoffs(s, n_max, reach)
    _check_dim(cut.values())
    t1 = _product_tensor([coherent_vector(s.branch1[m], cut[m]) for m in s.modes])
    t2 = _product_tensor([coherent_vector(s.branch2[m], cut[m]) for m in s.modes])
    return FockState(s.modes, s.c1 * t1 + s.c2 * t2)


def wavepacket_state(amplitudes: Mapping[int, complex], n_max=None) -> FockState:
    """(1 - |vac><vac|) applied to the product of coherent states `amplitudes`.

    Builds the post-HHG entangled state directly from its defining
    projection, without any overlap formula.
    """
    modes = tuple(sorted(amplitudes))
    if n_max is None:
        cut = {m: n_max_rule(abs(amplitudes[m])) for m in modes}
    elif isinstance(n_max, Mapping):
        cut = {m: int(n_max[m]) for m in modes}
    else:
        cut = {m: int(n_max) for m in modes}
    _check_dim(cut.values())
    phi = _product_tensor([coherent_vector(amplitudes[m], cut[m]) for m in modes])
    psi = phi.copy()
    psi[(0,) * len(modes)] = 0.0
    return FockState(modes, psi)


def project_onto_coherent(state: FockState, assignments: Mapping[int, complex]) -> FockState:
    """Contract the modes in `assignments` with <amplitude| (unnormalized result)."""
    unknown = set(assignments) - set(state.modes)
    if unknown:
        raise ModeError(f"unknown modes {sorted(unknown)}")
    tensor = state.amplitudes
    modes = list(state.modes)
    for m, amp in sorted(assignments.items(), reverse=True):
        axis = modes.index(m)
        bra = coherent_vector(amp, tensor.shape[axis] - 1).conj()
        tensor = np.tensordot(tensor, bra, axes=([axis], [0]))
        modes.pop(axis)
    if not modes:
        raise ModeError("projection removed every mode")
    return FockState(tuple(modes), tensor)


def reduced_density(state: FockState, keep) -> FockDensity:
    """Normalized reduced density matrix of the pure `state` on `keep`.

    Reshapes the state into a (kept x traced) matrix A and returns A A^dagger,
    which avoids forming the full density matrix.
    """
    keep = sorted(set(keep))
    if not keep or not set(keep) < set(state.modes):
        raise ModeError(f"keep={keep} must be a nonempty proper subset of {state.modes}")
    axes = [state.modes.index(m) for m in keep]
    rest = [i for i in range(len(state.modes)) if i not in axes]
    tensor = np.transpose(state.amplitudes, axes + rest)
    dk = int(np.prod([state.dims[i] for i in axes]))
    mat = tensor.reshape(dk, -1)
    rho = mat @ mat.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return FockDensity(tuple(keep), tuple(state.dims[i] for i in axes), rho / np.trace(rho).real)


def pure_state_purity(state: FockState, keep) -> float:
    """Tr(rho_keep^2) of the pure `state`, contracted over the smaller side.

    Both sides of a bipartition of a pure state have the same purity, so the
    Gram matrix of whichever factor is smaller is used.
    """
    keep = sorted(set(keep))
    if not keep or not set(keep) < set(state.modes):
        raise ModeError(f"keep={keep} must be a nonempty proper subset of {state.modes}")
    axes = [state.modes.index(m) for m in keep]
    rest = [i for i in range(len(state.modes)) if i not in axes]
    dk = int(np.prod([state.dims[i] for i in axes]))
    mat = np.transpose(state.amplitudes, axes + rest).reshape(dk, -1)
    gram = mat @ mat.conj().T if mat.shape[0] <= mat.shape[1] else mat.conj().T @ mat
    return float(np.sum(np.abs(gram) ** 2) / np.trace(gram).real ** 2)


def partial_trace(rho: FockDensity, keep) -> FockDensity:
    """Trace out every mode of `rho` not in `keep`."""
    keep = sorted(set(keep))
    if not keep or not set(keep) < set(rho.modes):
        raise ModeError(f"keep={keep} must be a nonempty proper subset of {rho.modes}")
    k = len(rho.modes)
    tensor = rho.matrix.reshape(rho.dims + rho.dims)
    modes = list(rho.modes)
    for m in sorted(set(rho.modes) - set(keep), key=rho.modes.index, reverse=True):
        i = modes.index(m)
        tensor = np.trace(tensor, axis1=i, axis2=i + k)
        modes.pop(i)
        k -= 1
    dims = tuple(rho.dims[rho.modes.index(m)] for m in modes)
    total = int(np.prod(dims))
    return FockDensity(tuple(modes), dims, tensor.reshape(total, total))


def purity_fock(rho: FockDensity) -> float:
    """Tr(rho^2) as the squared Frobenius norm of a Hermitian rho."""
    return float(np.sum(np.abs(rho.matrix) ** 2))


def wigner_parity(rho: FockDensity, beta: complex, strict: bool = True) -> float:
    """W(beta) = (2/pi) Tr[Parity D(-beta) rho D(-beta)^dagger].

    The state is embedded in a ladder long enough to hold its displaced
    image; parity is summed over the trusted block only. Size `rho` with
    assemble_state(..., reach=|beta|); strict mode rejects cutoffs below the
    tail rule for |beta| alone.
    """
    if len(rho.modes) != 1:
        raise ModeError("wigner_parity needs a single-mode density")
    beta = complex(beta)
    d = rho.dims[0]
    if strict:
        need = n_max_rule(abs(beta))
        if d - 1 < need:
            raise TruncationTooSmall(f"cutoff {d - 1} below {need} needed at |beta|={abs(beta):.3g}")
    reach = math.sqrt(d) + abs(beta)
    size = max(d, n_max_rule(reach)) + UNTRUSTED_ROWS + 1
    big = np.zeros((size, size), dtype=complex)
    big[:d, :d] = rho.matrix
    disp = displacement_matrix(-beta, size - 1)
    shifted = disp @ big @ disp.conj().T
    diag = np.diag(shifted)[: size - UNTRUSTED_ROWS]
    parity = np.where(np.arange(diag.size) % 2 == 0, 1.0, -1.0)
    value = np.sum(parity * diag)
    if abs(value.imag) > 1e-10:
        raise InconsistencyError(f"Wigner value has imaginary residue {value.imag}")
    return float(2 / np.pi * value.real)
