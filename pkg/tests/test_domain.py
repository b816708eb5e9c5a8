import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hartogs.domain import (
    DomainError,
    basis_exponents,
    contains,
    defect_r,
    in_basis_set,
    min_beta2,
    monomial_norm_sq,
    monomial_norm_sq_coeff,
    sample_points,
    volume,
)


def test_contains_examples():
    assert contains(1, (0, 0.5))
    assert not contains(1, (0.8, 0.5))
    assert contains(2, (0.7, 0.5))


def test_contains_vectorised():
    z1 = np.array([0, 0.8, 0.1])
    z2 = np.array([0.5, 0.5, 1.0])
    assert contains(1, (z1, z2)).tolist() == [True, False, False]


def test_defect_examples():
    assert defect_r(1, (0, 1 / math.sqrt(2))) == pytest.approx(-0.25)
    assert defect_r(3, (0.2, 1j)) == pytest.approx(0.0)
    r = 0.6
    assert defect_r(2, (r, r * r)) == pytest.approx(0.0, abs=1e-15)


def test_bad_k():
    for k in (0, -1, 1.5, True):
        with pytest.raises(DomainError):
            contains(k, (0, 0.5))


def test_basis_set():
    assert in_basis_set(1, (0, -1))
    assert in_basis_set(4, (0, 0))
    assert not in_basis_set(1, (-1, 0))
    # (0, -2) has b1 + k(b2 + 1) = -k
    assert not in_basis_set(1, (0, -2))


@given(st.integers(1, 6), st.integers(0, 20))
def test_min_beta2_is_least(k, b1):
    b2 = min_beta2(k, b1)
    assert in_basis_set(k, (b1, b2))
    assert not in_basis_set(k, (b1, b2 - 1))


def test_basis_exponents_cover():
    ex = basis_exponents(2, 3, 2)
    assert all(in_basis_set(2, b) for b in ex)
    assert (0, -1) in ex and (3, -2) in ex
    assert len(set(ex)) == len(ex)


def test_norm_examples():
    assert monomial_norm_sq(1, (0, 0)) == pytest.approx(math.pi**2 / 2, rel=1e-15)
    assert monomial_norm_sq(2, (0, 0)) == pytest.approx(2 * math.pi**2 / 3, rel=1e-15)
    for k in range(1, 6):
        assert monomial_norm_sq_coeff(k, (0, -1)) == k
        assert volume(k) == pytest.approx(math.pi**2 * k / (k + 1), rel=1e-15)


def test_norm_rejects_outside_basis():
    with pytest.raises(DomainError):
        monomial_norm_sq(1, (0, -2))


def test_norm_is_exact_rational():
    assert monomial_norm_sq_coeff(3, (2, 1)) == Fraction(12, 6 * 18)


def test_sample_points_deterministic():
    a = sample_points(2, 50, 7, 0.1)
    b = sample_points(2, 50, 7, 0.1)
    assert a == b
    assert a != sample_points(2, 50, 8, 0.1)
    assert len(sample_points(1, 1, 0)) == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2**31), st.floats(0.0, 0.45))
def test_sample_points_margin(k, seed, margin):
    pts = sample_points(k, 200, seed, margin)
    z1 = np.array([p.z1 for p in pts])
    z2 = np.array([p.z2 for p in pts])
    assert np.all(contains(k, (z1, z2)))
    a1, a2 = np.abs(z1), np.abs(z2)
    assert np.all(1 - a2 >= margin * a2 - 1e-12)
    assert np.all(a2 - a1**k >= margin * a2 - 1e-12)


def test_sample_points_bad_args():
    with pytest.raises(ValueError):
        sample_points(1, 0, 0)
    with pytest.raises(ValueError):
        sample_points(1, 5, 0, 0.5)
