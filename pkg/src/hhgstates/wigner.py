"""Closed-form Wigner functions of single-mode two-branch states.

For a normalized |psi> = a|mu> + b|nu> the Wigner function is

    W(beta) = 2/pi [ |a|^2 e^{-2|beta-mu|^2} + |b|^2 e^{-2|beta-nu|^2}
                     + 2 Re( a conj(b) <nu|mu> e^{-2 (beta-mu) conj(beta-nu)} ) ]

the last term being the Wigner transform of |mu><nu|. Grids are evaluated row by
row; every row has the same length, so results do not depend on how rows are
distributed over workers.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import InconsistencyError, ModeError
from .states import TwoBranchState, amplitude, norm_squared

__all__ = [
    "GridSpec",
    "WignerGrid",
    "grid_integral",
    "negativity_volume",
    "wigner_grid",
    "wigner_point",
    "wigner_values",
]

W_MAX = 2 / np.pi


@dataclass(frozen=True)
class GridSpec:
    """Inclusive rectangular lattice in the complex beta plane."""

    re_min: float = -2.0
    re_max: float = 2.0
    im_min: float = -2.0
    im_max: float = 2.0
    n_re: int = 201
    n_im: int = 201

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("grid bounds must satisfy min < max")
        if int(self.n_re) != self.n_re or int(self.n_im) != self.n_im or min(self.n_re, self.n_im) < 2:
            raise ValueError("grid needs at least 2 points per axis")

    @classmethod
    def centered(cls, center: complex = 0j, half_width: float = 2.0, n: int = 201) -> GridSpec:
        c = complex(center)
        return cls(c.real - half_width, c.real + half_width, c.imag - half_width, c.imag + half_width, n, n)

    def shifted(self, offset: complex) -> GridSpec:
        d = complex(offset)
        return GridSpec(self.re_min + d.real, self.re_max + d.real, self.im_min + d.imag,
                        self.im_max + d.imag, self.n_re, self.n_im)

    @property
    def re_axis(self) -> np.ndarray:
        return np.linspace(self.re_min, self.re_max, int(self.n_re))

    @property
    def im_axis(self) -> np.ndarray:
        return np.linspace(self.im_min, self.im_max, int(self.n_im))

    @property
    def cell(self) -> tuple[float, float]:
        return ((self.re_max - self.re_min) / (self.n_re - 1), (self.im_max - self.im_min) / (self.n_im - 1))


@dataclass(frozen=True, eq=False)
class WignerGrid:
    """Wigner values on `spec`; values[i, j] sits at re_axis[j] + 1j * im_axis[i]."""

    spec: GridSpec
    values: np.ndarray = field(repr=False)
    frame_offset: complex = 0j

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.spec.n_im, self.spec.n_re):
            raise ValueError(f"values shape {values.shape} does not match grid")
        if not np.all(np.isfinite(values)):
            raise InconsistencyError("non-finite Wigner values")
        worst = float(np.max(np.abs(values)))
        if worst > W_MAX + 1e-9:
            raise InconsistencyError(f"|W| = {worst} exceeds 2/pi")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def argmax(self) -> complex:
        i, j = np.unravel_index(np.argmax(self.values), self.values.shape)
        return complex(self.spec.re_axis[j], self.spec.im_axis[i])

    def argmin(self) -> complex:
        i, j = np.unravel_index(np.argmin(self.values), self.values.shape)
        return complex(self.spec.re_axis[j], self.spec.im_axis[i])


def _single_mode_terms(state: TwoBranchState):
    if len(state.modes) != 1:
        raise ModeError(f"Wigner function needs a single-mode state, got modes {state.modes}")
    n2 = norm_squared(state)
    if n2 == 0:
        raise InconsistencyError("zero-norm state has no Wigner function")
    (mode,) = state.modes
    scale = 1 / np.sqrt(n2)
    return state.c1 * scale, state.branch1[mode], state.c2 * scale, state.branch2[mode]


def wigner_values(state: TwoBranchState, beta) -> np.ndarray:
    """Vectorized closed-form Wigner function at the points `beta`."""
    a, mu, b, nu = _single_mode_terms(state)
    beta = np.asarray(beta, dtype=complex)
    dm = beta - mu
    dn = beta - nu
    w = abs(a) ** 2 * np.exp(-2 * (dm.real ** 2 + dm.imag ** 2))
    w = w + abs(b) ** 2 * np.exp(-2 * (dn.real ** 2 + dn.imag ** 2))
    # log <nu|mu> = -|mu - nu|^2/2 + i Im(conj(nu) mu)
    log_overlap = complex(-0.5 * abs(mu - nu) ** 2, (nu.conjugate() * mu).imag)
    cross = np.exp(log_overlap - 2 * dm * np.conj(dn))
    w = w + 2 * (a * np.conj(b) * cross).real
    return W_MAX * w


def wigner_point(state: TwoBranchState, beta) -> float:
    return float(wigner_values(state, amplitude(beta)))


def wigner_grid(state: TwoBranchState, spec: GridSpec, frame_offset=0j, workers: int = 1) -> WignerGrid:
    """Evaluate W on the lattice of `spec`.

    Grid coordinates live in the display frame; the state is expressed
    relative to `frame_offset`, so the point beta is evaluated at
    beta - frame_offset.
    """
    frame_offset = amplitude(frame_offset)
    re = spec.re_axis
    im = spec.im_axis
    values = np.empty((spec.n_im, spec.n_re))
    _single_mode_terms(state)

    def fill(i: int) -> None:
        values[i] = wigner_values(state, re + 1j * im[i] - frame_offset)

    if workers <= 1:
        for i in range(spec.n_im):
            fill(i)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, range(spec.n_im)))
    return WignerGrid(spec, values, frame_offset)


def _trapezoid_2d(g: WignerGrid, values: np.ndarray) -> float:
    inner = np.trapezoid(values, g.spec.re_axis, axis=1)
    return float(np.trapezoid(inner, g.spec.im_axis))


def grid_integral(g: WignerGrid) -> float:
    """Trapezoidal integral of W over the grid; 1 when the window covers the state."""
    return _trapezoid_2d(g, g.values)


def negativity_volume(g: WignerGrid) -> float:
    """Trapezoidal integral of max(0, -W)."""
    return _trapezoid_2d(g, np.maximum(0.0, -g.values))
