import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hartogs.quadrature import (
    QuadSpec,
    gauss_legendre,
    graded_rule,
    integrate_disk,
    integrate_full,
    integrate_radial,
    lp_norm,
    periodic_graded_rule,
    trapezoid_rule,
)
from hartogs.toeplitz import inv_z2_norm_q

FAST = QuadSpec(radial_nodes=6, angular_nodes=8, depth=14)


@given(st.integers(1, 15))
def test_gauss_legendre_exact_for_polynomials(d):
    x, w = gauss_legendre(8, 0.5, 2.0)
    assert np.sum(w * x**d) == pytest.approx((2.0 ** (d + 1) - 0.5 ** (d + 1)) / (d + 1), rel=1e-13)


def test_graded_rule_weights_sum_to_interval():
    r = graded_rule(6, 10, 2.0, breaks=(0.3, 0.7))
    # the innermost cores are left to tail extrapolation
    assert r.w.sum() < 1.0
    assert r.w.sum() > 1.0 - 6 * 0.5 * 0.5**10 - 1e-12
    assert r.nlabels == 3 * 2 * 10
    assert np.all((r.x > 0) & (r.x < 1))


def test_periodic_rules_integrate_trig_polynomials():
    for th, w in (trapezoid_rule(16), periodic_graded_rule(8, 0.01, 2.0, copies=3)):
        assert w.sum() == pytest.approx(2 * math.pi, rel=1e-13)
        assert np.sum(w * np.cos(3 * th)) == pytest.approx(0.0, abs=1e-12)


def test_radial_examples():
    r = integrate_radial(1, lambda r1, r2: r1 * r2)
    assert r.real == pytest.approx(1 / 8, rel=1e-10)
    assert r.converged and not r.divergent
    z = integrate_radial(2, lambda r1, r2: 0 * r1)
    assert z.value == 0 and z.error_estimate == 0 and z.converged


@pytest.mark.parametrize("k", [1, 2, 3])
def test_radial_divergence_flag(k):
    q = 2 + 2 / k
    r = integrate_radial(k, lambda r1, r2: r1 * r2 ** (1 - q))
    assert r.divergent and not r.converged


def test_radial_vector_valued():
    r = integrate_radial(1, lambda r1, r2: np.stack([r1 * r2, 2 * r1 * r2], axis=-1))
    assert np.allclose(r.value, [1 / 8, 1 / 4], rtol=1e-10)


def test_full_volume_and_orthogonality():
    v = integrate_full(2, lambda w1, w2: np.ones_like(w1), FAST)
    assert v.real == pytest.approx(2 * math.pi**2 / 3, rel=1e-6)
    o = integrate_full(2, lambda w1, w2: w2**2 * np.conj(w2), FAST)
    assert abs(o.value) < 1e-10


@pytest.mark.parametrize("k", [1, 2])
def test_full_inverse_power(k):
    q = 2 + 2 / k - 0.1
    r = integrate_full(k, lambda w1, w2: np.abs(w2) ** -q, FAST)
    assert r.real == pytest.approx(2 * math.pi**2 * k / (2 * k + 2 - k * q), rel=1e-4)


def test_lp_norm_examples():
    r = lp_norm(1, lambda w1, w2: 1 / w2, 2, FAST)
    assert r.real == pytest.approx(math.pi, rel=1e-6)
    assert lp_norm(1, lambda w1, w2: 1 / w2, 4.0, FAST).divergent
    for p in (0.5, 3.0, 7.0):
        c = lp_norm(2, lambda w1, w2: np.conj(w2), p, FAST)
        assert c.converged and math.isfinite(c.real)


@settings(max_examples=6, deadline=None)
@given(st.integers(1, 3), st.floats(0.5, 3.5))
def test_lp_norm_of_inverse_z2(k, q):
    if q >= 2 + 2 / k - 0.1:
        return
    r = lp_norm(k, lambda w1, w2: 1 / w2, q, FAST)
    assert r.real == pytest.approx(inv_z2_norm_q(k, q), rel=1e-5)


def test_disk_beta_integrals():
    r = integrate_disk(lambda u: (1 - np.abs(u) ** 2) ** -0.5)
    assert r.real == pytest.approx(2 * math.pi, rel=1e-8)
    r = integrate_disk(lambda u: (1 - np.abs(u) ** 2) ** -0.5 * np.abs(u) ** -1)
    assert r.real == pytest.approx(math.pi**2, rel=1e-8)


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadSpec(radial_nodes=2)
    with pytest.raises(ValueError):
        QuadSpec(grading=1.0)
    s = QuadSpec().level(2)
    assert s.radial_nodes == 16 and s.depth == 40


def test_result_as_dict_is_plain():
    d = integrate_radial(1, lambda r1, r2: r1 * r2).as_dict()
    assert set(d) == {"value", "error_estimate", "converged", "divergent", "refinements", "nodes"}
    assert isinstance(d["value"], float)
