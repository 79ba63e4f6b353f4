import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hhgstates import oracle
from hhgstates.errors import InconsistencyError, ModeError
from hhgstates.hhg import HHGConfig, build_post_hhg_state, plateau_amplitude
from hhgstates.states import (
    CoherentProduct,
    Rank2Density,
    TwoBranchState,
    amplitude,
    coherent_overlap,
    displace_mode,
    norm_squared,
    product_overlap,
    project_modes,
    purity,
    reduce_to_modes,
)

coords = st.floats(-2.5, 2.5, allow_nan=False)
amps = st.builds(complex, coords, coords)
small_amps = st.builds(complex, st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
coeffs = st.builds(complex, st.floats(-2, 2), st.floats(-2, 2)).filter(lambda c: abs(c) > 1e-3)


def fock_overlap(a, b, n_max=20):
    return np.vdot(oracle.coherent_vector(a, n_max, strict=False), oracle.coherent_vector(b, n_max, strict=False))


def test_amplitude_rejects_nonfinite():
    with pytest.raises(ValueError):
        amplitude(complex(math.nan, 0))
    with pytest.raises(ValueError):
        amplitude(math.inf)


def test_coherent_overlap_examples():
    assert coherent_overlap(0, 0) == pytest.approx(1)
    assert coherent_overlap(1.3 + 0.7j, 1.3 + 0.7j) == pytest.approx(1, abs=1e-15)
    assert coherent_overlap(0, 0.2) == pytest.approx(0.980198673306755, abs=1e-14)
    assert coherent_overlap(0, 0.2) == pytest.approx(fock_overlap(0, 0.2), abs=1e-14)


@given(amps, amps)
def test_overlap_hermitian_symmetry_and_bound(a, b):
    ab = coherent_overlap(a, b)
    assert ab == pytest.approx(coherent_overlap(b, a).conjugate(), abs=1e-14)
    assert abs(ab) <= 1 + 1e-15
    assert abs(ab) == pytest.approx(math.exp(-abs(a - b) ** 2 / 2), rel=1e-12, abs=1e-300)


@given(small_amps, small_amps)
def test_overlap_matches_fock_inner_product(a, b):
    assert coherent_overlap(a, b) == pytest.approx(fock_overlap(a, b, 40), abs=1e-12)


def test_product_overlap_examples():
    p = CoherentProduct({1: 0.3, 3: -0.1j})
    assert product_overlap(p, p) == pytest.approx(1)
    p1 = CoherentProduct({1: 0, 3: 0})
    p2 = CoherentProduct({1: 0.2, 3: 0.2})
    assert product_overlap(p1, p2) == pytest.approx(math.exp(-0.04), abs=1e-14)
    assert product_overlap(p1, p2) == pytest.approx(fock_overlap(0, 0.2) ** 2, abs=1e-14)
    assert product_overlap(CoherentProduct({5: 0.4}), CoherentProduct({5: 1j})) == coherent_overlap(0.4, 1j)


def test_product_overlap_mode_mismatch():
    with pytest.raises(ModeError):
        product_overlap(CoherentProduct({1: 0}), CoherentProduct({3: 0}))


def test_coherent_product_is_sorted_immutable_mapping():
    p = CoherentProduct({5: 1, 1: 2})
    assert p.modes == (1, 5)
    assert p.restrict([5]) == CoherentProduct({5: 1})
    assert p.without([5]) == CoherentProduct({1: 2})
    assert p.updated({5: 3})[5] == 3
    with pytest.raises(TypeError):
        p[1] = 0


def test_two_branch_requires_matching_modes():
    with pytest.raises(ModeError):
        TwoBranchState(1, CoherentProduct({1: 0}), 1, CoherentProduct({1: 0, 3: 0}))


def test_norm_squared_examples():
    p = CoherentProduct({1: 0.5})
    assert norm_squared(TwoBranchState(1, p, 0, p)) == pytest.approx(1)
    assert norm_squared(TwoBranchState(1, p, -1, p)) == 0
    cfg = HHGConfig.single(11, -0.2)
    expected = -math.expm1(-(0.04 + 0.04 * 20 / 140))
    assert norm_squared(build_post_hhg_state(cfg)) == pytest.approx(expected, rel=1e-13)
    assert expected == pytest.approx(0.0446851296922, abs=1e-12)


@given(coeffs, small_amps, coeffs, small_amps, small_amps, small_amps)
@settings(max_examples=30, deadline=None)
def test_norm_matches_textbook_formula_and_oracle(c1, a1, c2, a2, b1, b2):
    s = TwoBranchState(c1, CoherentProduct({1: a1, 3: b1}), c2, CoherentProduct({1: a2, 3: b2}))
    textbook = abs(c1) ** 2 + abs(c2) ** 2 + 2 * (c1.conjugate() * c2 * product_overlap(s.branch1, s.branch2)).real
    assert norm_squared(s) == pytest.approx(max(textbook, 0), abs=1e-12)
    assert norm_squared(s) == pytest.approx(oracle.assemble_state(s).norm_squared(), abs=1e-8)


def test_norm_is_accurate_for_tiny_depletion():
    cfg = HHGConfig.single(11, -1e-7)
    omega = 1e-14 * 20 / 140
    assert norm_squared(build_post_hhg_state(cfg)) == pytest.approx(-math.expm1(-(1e-14 + omega)), rel=1e-12)


def test_norm_rejects_inconsistent_negative_result():
    # an artificially negative norm can only arise from corrupted inputs
    p = CoherentProduct({1: 0})
    s = TwoBranchState(1, p, -1, p)
    assert norm_squared(s) == 0
    with pytest.raises(InconsistencyError):
        Rank2Density((p, p), np.array([[1, 0], [0, -5]], dtype=complex)).eigenvalues()


def test_projection_reproduces_fundamental_cat_ratio():
    cfg = HHGConfig.single(11, -0.2)
    full = build_post_hhg_state(cfg)
    cat = project_modes(full, plateau_amplitude(cfg).amplitudes)
    omega = 0.04 * 20 / 140
    assert cat.modes == (1,)
    assert cat.coeff_ratio == pytest.approx(-coherent_overlap(0, -0.2) * math.exp(-omega), abs=1e-15)


def test_projection_reproduces_harmonic_cat_ratio():
    cfg = HHGConfig.single(11, -0.2)
    full = build_post_hhg_state(cfg)
    chi = plateau_amplitude(cfg).amplitudes
    cat = project_modes(full, {1: -0.2, **{q: a for q, a in chi.items() if q != 11}})
    omega_p = 4 * abs(chi[3]) ** 2
    gamma = 0.04 + omega_p + abs(chi[11]) ** 2 / 2
    assert cat.coeff_ratio == pytest.approx(-math.exp(-gamma), abs=1e-15)


def test_projection_errors():
    s = build_post_hhg_state(HHGConfig.single(5, -0.5))
    with pytest.raises(ModeError):
        project_modes(s, {7: 0})
    with pytest.raises(ModeError):
        project_modes(s, {1: 0, 3: 0, 5: 0})


@given(st.lists(small_amps, min_size=4, max_size=4), st.integers(0, 3))
@settings(max_examples=30)
def test_projection_order_independence(targets, split):
    s = build_post_hhg_state(HHGConfig.single(9, -0.7 + 0.3j))
    modes = [1, 3, 5, 7]
    assign = dict(zip(modes, targets))
    first = {m: assign[m] for m in modes[:split]}
    second = {m: assign[m] for m in modes[split:]}
    together = project_modes(s, assign)
    staged = project_modes(project_modes(s, first), second) if first else project_modes(s, second)
    assert staged.c1 == pytest.approx(together.c1, abs=1e-14)
    assert staged.c2 == pytest.approx(together.c2, abs=1e-14)


def test_displacement_examples():
    p = CoherentProduct({3: 0.4})
    s = TwoBranchState(1, p, -0.5, CoherentProduct({3: 0}))
    assert displace_mode(s, 3, 0) == s
    vac = TwoBranchState(1, CoherentProduct({3: 0}), 0, CoherentProduct({3: 0}))
    moved = displace_mode(vac, 3, 0.3 - 0.8j)
    assert moved.branch1[3] == 0.3 - 0.8j and moved.c1 == 1
    real_moved = displace_mode(s, 3, 1.0)
    assert real_moved.coeff_ratio == pytest.approx(-0.5)
    with pytest.raises(ModeError):
        displace_mode(s, 1, 1.0)


@given(small_amps, small_amps)
@settings(max_examples=20, deadline=None)
def test_displacement_matches_fock_operator(a, shift):
    s = TwoBranchState(1, CoherentProduct({1: a}), 0.3j, CoherentProduct({1: -a}))
    n = 50
    moved = oracle.displacement_matrix(shift, n + 20)[: n + 1, : n + 1] @ oracle.assemble_state(s, n).amplitudes
    direct = oracle.assemble_state(displace_mode(s, 1, shift), n).amplitudes
    assert np.max(np.abs(moved - direct)[:30]) < 1e-10


def test_displacement_composition_phase():
    s = TwoBranchState(1, CoherentProduct({1: 0.2}), 1, CoherentProduct({1: -0.5j}))
    b1, b2 = 0.3 + 0.4j, -0.7 + 0.1j
    twice = displace_mode(displace_mode(s, 1, b2), 1, b1)
    once = displace_mode(s, 1, b1 + b2).with_phase((b1 * b2.conjugate()).imag)
    assert twice.c1 == pytest.approx(once.c1, abs=1e-14)
    assert twice.c2 == pytest.approx(once.c2, abs=1e-14)


@given(st.floats(0, 2 * math.pi))
def test_global_phase_invariance(theta):
    s = build_post_hhg_state(HHGConfig.single(5, -0.8 + 0.2j))
    t = s.with_phase(theta)
    assert norm_squared(t) == pytest.approx(norm_squared(s), rel=1e-14)
    assert purity(reduce_to_modes(t, [1])) == pytest.approx(purity(reduce_to_modes(s, [1])), abs=1e-14)
    assert t.coeff_ratio == pytest.approx(s.coeff_ratio, abs=1e-14)


def test_reduce_product_state_is_pure():
    p = CoherentProduct({1: 0.3, 3: 1j})
    rho = reduce_to_modes(TwoBranchState(2, p, 0, p), [1])
    assert purity(rho) == pytest.approx(1, abs=1e-14)


def test_reduce_maximally_mixed_orthogonal_branches():
    s = TwoBranchState(1, CoherentProduct({1: 20, 3: 20}), 1, CoherentProduct({1: -20, 3: -20}))
    assert purity(reduce_to_modes(s, [1])) == pytest.approx(0.5, abs=1e-12)


def test_reduced_fundamental_matches_closed_coefficients():
    cfg = HHGConfig.single(11, -0.2)
    rho = reduce_to_modes(build_post_hhg_state(cfg), [1])
    d2, omega = 0.04, 0.04 * 20 / 140
    n2 = -math.expm1(-(d2 + omega))
    u = coherent_overlap(0, -0.2) * math.exp(-omega / 2)
    # rho_1 = N^2 [ |da><da| - e^-W u (|da><0| + |0><da|) + u^2 |0><0| ] in the (|da>, |0>) basis
    expected = np.array([[1, -u * math.exp(-omega / 2)], [-u * math.exp(-omega / 2), u * u]]) / n2
    assert np.allclose(rho.coeff, expected, atol=1e-12)
    assert rho.trace() == pytest.approx(1, abs=1e-12)


def test_reduced_harmonic_matches_oracle_partial_trace():
    s = build_post_hhg_state(HHGConfig.single(5, -0.6))
    rho = reduce_to_modes(s, [3])
    fock = oracle.assemble_state(s, 14)
    rho_fock = oracle.partial_trace(fock.density(), [3])
    b1 = oracle.coherent_vector(rho.basis[0][3], 14)
    b2 = oracle.coherent_vector(rho.basis[1][3], 14)
    basis = np.stack([b1, b2], axis=1)
    assert np.max(np.abs(basis @ rho.coeff @ basis.conj().T - rho_fock.matrix)) < 1e-10


def test_rank2_density_eigenvalues():
    s = build_post_hhg_state(HHGConfig.single(11, -1.0))
    rho = reduce_to_modes(s, [1])
    ev = rho.eigenvalues()
    assert np.all(ev >= -1e-12) and np.all(ev <= 1 + 1e-12)
    assert ev.sum() == pytest.approx(1, abs=1e-12)
    assert np.allclose(rho.coeff, rho.coeff.conj().T, atol=1e-14)


def test_reduce_errors():
    s = build_post_hhg_state(HHGConfig.single(5, -0.5))
    with pytest.raises(ModeError):
        reduce_to_modes(s, [1, 3, 5])
    with pytest.raises(ModeError):
        reduce_to_modes(s, [])


@given(coeffs, amps, coeffs, amps, amps, amps)
@settings(max_examples=40, deadline=None)
def test_purity_in_range_and_matches_oracle(c1, a1, c2, a2, b1, b2):
    s = TwoBranchState(c1, CoherentProduct({1: a1, 3: b1}), c2, CoherentProduct({1: a2, 3: b2}))
    if norm_squared(s) < 1e-6:
        return
    p = purity(reduce_to_modes(s, [1]))
    assert 0.5 - 1e-12 <= p <= 1 + 1e-12
    assert p == pytest.approx(oracle.pure_state_purity(oracle.assemble_state(s), [1]), abs=1e-8)


def test_overlap_phase_convention():
    a, b = 0.3 + 0.1j, -0.4 + 0.5j
    expected = cmath.exp(-abs(a) ** 2 / 2 - abs(b) ** 2 / 2 + a.conjugate() * b)
    assert coherent_overlap(a, b) == pytest.approx(expected, abs=1e-15)
