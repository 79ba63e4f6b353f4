import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hhgstates import oracle
from hhgstates.conditioning import two_color_ecs
from hhgstates.entanglement import (
    entropy_sweep,
    nq_partition,
    expanded_s_lin_fundamental,
    expanded_s_lin_nq,
    expanded_s_lin_two_color,
    s_lin_fundamental,
    s_lin_generic,
    s_lin_nq,
    s_lin_two_color,
)
from hhgstates.errors import DegenerateDepletion
from hhgstates.hhg import HHGConfig, build_post_hhg_state
from hhgstates.states import CoherentProduct, TwoBranchState
from hhgstates.verify import merged_harmonic_purity

XS = np.linspace(0.01, 4, 200)


def two_color(x, r, n=4):
    return HHGConfig.two_color(n, -x, -math.sqrt(r) * x)


def test_large_depletion_gives_product_state():
    assert s_lin_fundamental(HHGConfig.single(11, -4.0)) < 1e-6
    assert s_lin_fundamental(HHGConfig.single(11, -6.0)) < 1e-9


def test_small_depletion_limit():
    c = 1 / 7
    limit = 2 * c / (1 + c) ** 2
    assert limit == pytest.approx(0.21875)
    cfg = HHGConfig.single(11, -0.01)
    assert s_lin_fundamental(cfg) == pytest.approx(limit, abs=1e-3)
    assert s_lin_fundamental(HHGConfig.single(11, -1e-6)) == pytest.approx(limit, abs=1e-6)
    assert 1 - merged_harmonic_purity(cfg) == pytest.approx(limit, abs=1e-3)


def test_expanded_forms_cancel_at_small_depletion():
    # the literal closed form loses every digit; the expm1 form keeps them
    cfg = HHGConfig.single(11, -1e-6)
    assert abs(expanded_s_lin_fundamental(cfg) - 0.21875) > 1e-3
    assert s_lin_fundamental(cfg) == pytest.approx(0.21875, abs=1e-6)


@pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 2.0, 3.0])
def test_stable_forms_equal_expanded_forms(x):
    cfg = HHGConfig.single(11, -x)
    assert s_lin_fundamental(cfg) == pytest.approx(expanded_s_lin_fundamental(cfg), abs=1e-12)
    for n in range(1, 11, 2):
        assert s_lin_nq(cfg, n) == pytest.approx(expanded_s_lin_nq(cfg, n), abs=1e-12)
        assert s_lin_nq(cfg, n) == pytest.approx(expanded_s_lin_nq(cfg, n, linear=True), abs=1e-12)
    for r in (0.5, 1.0, 2.0):
        cfg2 = two_color(x, r, 11)
        assert s_lin_two_color(cfg2) == pytest.approx(expanded_s_lin_two_color(cfg2), abs=1e-12)


def test_linear_partition_differs_for_even_n():
    cfg = HHGConfig.single(11, -0.5)
    assert abs(s_lin_nq(cfg, 2) - expanded_s_lin_nq(cfg, 2, linear=True)) > 1e-4


def test_fundamental_is_monotone_decreasing():
    s = np.array([s_lin_fundamental(HHGConfig.single(11, -x)) for x in XS])
    assert np.all(np.diff(s) < 0)


def test_nq_edge_cases():
    cfg = HHGConfig.single(11, -0.5)
    assert s_lin_nq(cfg, 1) == 0.0
    assert s_lin_nq(cfg, 10) == pytest.approx(s_lin_fundamental(cfg), abs=1e-15)
    with pytest.raises(ValueError):
        s_lin_nq(cfg, 11)
    with pytest.raises(ValueError):
        s_lin_nq(cfg, 0)


def test_nq_bounded_by_fundamental():
    for x in XS[::10]:
        cfg = HHGConfig.single(11, -x)
        s1 = s_lin_fundamental(cfg)
        for n in range(1, 11):
            assert s_lin_nq(cfg, n) <= s1 + 1e-15


def test_two_color_orderings():
    def s(x, r):
        return s_lin_two_color(two_color(x, r, 11))

    for x in (0.05, 0.1, 0.2):
        assert s(x, 1.0) > s(x, 0.5) and s(x, 1.0) > s(x, 2.0)
    for x in (2.0, 3.0, 4.0):
        assert s(x, 0.5) > s(x, 2.0)


def test_degenerate_inputs():
    with pytest.raises(DegenerateDepletion):
        s_lin_fundamental(HHGConfig.single(11, 0))
    with pytest.raises(DegenerateDepletion):
        s_lin_two_color(HHGConfig.two_color(4, 0, 0))
    with pytest.raises(ValueError):
        s_lin_two_color(HHGConfig.single(5, -1))


@given(st.floats(0.01, 4), st.floats(0, 2 * math.pi))
def test_entropy_depends_only_on_modulus(x, theta):
    base = HHGConfig.single(11, -x)
    rotated = HHGConfig.single(11, x * cmath.exp(1j * theta), harmonic_phase=theta)
    assert s_lin_fundamental(rotated) == pytest.approx(s_lin_fundamental(base), abs=1e-14)
    assert s_lin_generic(build_post_hhg_state(rotated), [1]) == pytest.approx(s_lin_fundamental(base), abs=1e-10)


@given(st.floats(0.01, 3), st.sampled_from([5, 7, 11]))
@settings(max_examples=30)
def test_range_and_gram_agreement(x, n_cut):
    cfg = HHGConfig.single(n_cut, -x)
    s1 = s_lin_fundamental(cfg)
    assert 0 <= s1 <= 0.5 + 1e-9
    assert s1 == pytest.approx(s_lin_generic(build_post_hhg_state(cfg), [1]), abs=1e-10)
    for n in range(1, n_cut):
        state, keep = nq_partition(cfg, n)
        assert s_lin_nq(cfg, n) == pytest.approx(s_lin_generic(state, keep), abs=1e-10)


@pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 2.0])
def test_three_way_agreement(x):
    cfg = HHGConfig.single(5, -x)
    full = build_post_hhg_state(cfg)
    fock = oracle.wavepacket_state(dict(full.branch1))
    closed = s_lin_fundamental(cfg)
    assert closed == pytest.approx(s_lin_generic(full, [1]), abs=1e-10)
    assert closed == pytest.approx(1 - oracle.pure_state_purity(fock, [1]), abs=1e-8)
    for r in (0.5, 1.0, 2.0):
        cfg2 = two_color(x, r)
        ecs, _ = two_color_ecs(cfg2)
        assert s_lin_two_color(cfg2) == pytest.approx(s_lin_generic(ecs, [1]), abs=1e-10)


def test_bipartition_symmetry():
    full = build_post_hhg_state(HHGConfig.single(5, -0.8))
    assert s_lin_generic(full, [1]) == pytest.approx(s_lin_generic(full, [3, 5]), abs=1e-14)
    assert s_lin_generic(full, [3]) == pytest.approx(s_lin_generic(full, [1, 5]), abs=1e-14)


def test_symmetric_ecs_exchange():
    ecs, _ = two_color_ecs(two_color(0.7, 1.0))
    assert s_lin_generic(ecs, [1]) == pytest.approx(s_lin_generic(ecs, [2]), abs=1e-14)


def test_product_state_has_zero_entropy():
    p = CoherentProduct({1: 0.3, 3: 0.2})
    assert s_lin_generic(TwoBranchState(1, p, 0, p), [1]) == pytest.approx(0, abs=1e-15)


def test_sweeps():
    template = HHGConfig.single(11, -0.2)
    curve = entropy_sweep(template, "fundamental", XS)
    assert curve.parameter_name == "abs_delta_alpha"
    assert len(curve.samples) == 200
    assert np.all(np.diff(curve.x) > 0)
    assert np.all((curve.s >= 0) & (curve.s < 1))
    assert curve.s[0] == s_lin_fundamental(template.with_depletion(0.01))
    assert entropy_sweep(template, "fundamental", XS, workers=3) == curve
    nq = entropy_sweep(template, "nq", XS, n=10)
    assert nq.partition == "nq:n=10"
    two = entropy_sweep(HHGConfig.two_color(11, -1, -1), "two_color", XS, r=0.5)
    assert two.partition == "two_color:r=0.5"
    assert two.config_snapshot.depletion_ratio == pytest.approx(0.5)
    single_point = entropy_sweep(template, "fundamental", [1.0])
    assert len(single_point.samples) == 1


def test_sweep_errors():
    template = HHGConfig.single(11, -0.2)
    with pytest.raises(ValueError):
        entropy_sweep(template, "fundamental", [1.0, 0.5])
    with pytest.raises(ValueError):
        entropy_sweep(template, "fundamental", [0.0, 1.0])
    with pytest.raises(ValueError):
        entropy_sweep(template, "nq", [1.0])
    with pytest.raises(ValueError):
        entropy_sweep(template, "two_color", [1.0])
    with pytest.raises(ValueError):
        entropy_sweep(template, "bogus", [1.0])
