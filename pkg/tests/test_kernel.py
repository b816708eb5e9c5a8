import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hartogs.domain import DomainError, Point2C, sample_points
from hartogs.kernel import (
    SingularKernelError,
    coefficient_polys,
    diagonal_bound_constants,
    diagonal_bounds,
    envelope,
    kernel,
    kernel_diagonal,
    kernel_series,
    offdiagonal_envelope,
)


def test_coefficient_polys_examples():
    for s in (0.0, 0.3, 0.9 + 0.1j):
        p, q = coefficient_polys(1, s)
        assert p == 0 and q == 1
    assert coefficient_polys(2, 0.0) == (1, 1)
    assert coefficient_polys(2, 1.0) == (1, 6)


@given(st.floats(-1, 1), st.floats(-1, 1))
def test_q2_closed_form(x, y):
    s = complex(x, y)
    p, q = coefficient_polys(2, s)
    assert p == pytest.approx(1)
    assert q == pytest.approx(1 + 4 * s + s * s, abs=1e-12)


def test_kernel_examples():
    z = (0, 0.5)
    assert kernel(1, z, z) == pytest.approx(64 / (9 * math.pi**2), rel=1e-14)
    assert kernel_diagonal(1, z) == pytest.approx(64 / (9 * math.pi**2), rel=1e-14)
    expect = 1.25 / (2 * math.pi**2 * 0.5625 * 0.25)
    assert kernel(2, z, z).real == pytest.approx(expect, rel=1e-14)
    assert expect == pytest.approx(0.45031, abs=1e-5)


def test_kernel_series_example():
    z = (0, 0.5)
    assert kernel_series(1, z, z, 40, 40) == pytest.approx(complex(kernel(1, z, z)), rel=1e-8)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_kernel_matches_series(k):
    zs = sample_points(k, 10, 11, 0.25)
    ws = sample_points(k, 10, 12, 0.25)
    for z, w in zip(zs, ws):
        a = complex(kernel(k, z, w))
        b = kernel_series(k, z, w, 70, 70)
        assert abs(a - b) <= 1e-9 * abs(a)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**20))
def test_kernel_hermitian(k, seed):
    z, w = sample_points(k, 2, seed, 0.05)
    assert complex(kernel(k, z, w)) == pytest.approx(complex(np.conj(kernel(k, w, z))), rel=1e-12)


def test_diagonal_increases_toward_boundary():
    vals = [kernel_diagonal(2, (0, 1 - 2.0**-m)) for m in range(1, 12)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_constants():
    c = diagonal_bound_constants(1)
    assert c.c_lo == c.c_hi == pytest.approx(1 / math.pi**2)
    c = diagonal_bound_constants(3)
    # p_3(1) = 1*2 + 2*1 = 4, q_3(1) = (1+4) + (4+1) + (9+0) = 19
    assert c.c_hi == pytest.approx(27 / (3 * math.pi**2))


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**20))
def test_envelope_two_sided(k, seed):
    pts = sample_points(k, 500, seed)
    z = (np.array([p.z1 for p in pts]), np.array([p.z2 for p in pts]))
    lo, hi = diagonal_bounds(k, z)
    kd = kernel_diagonal(k, z)
    assert np.all(lo <= kd * (1 + 1e-12))
    assert np.all(kd <= hi * (1 + 1e-12))


def test_offdiagonal_envelope_bounds_kernel():
    k = 2
    zs = sample_points(k, 200, 1)
    ws = sample_points(k, 200, 2)
    for z, w in zip(zs, ws):
        assert abs(kernel(k, z, w)) <= offdiagonal_envelope(k, z, w) * (1 + 1e-12)


def test_envelope_formula():
    z = Point2C(0.2, 0.5)
    t = 0.25
    assert envelope(1, z) == pytest.approx(t / ((1 - t) ** 2 * (t - 0.04) ** 2))


def test_rejects_outside_and_singular():
    with pytest.raises(DomainError):
        kernel(1, (0.8, 0.5), (0, 0.5))
    with pytest.raises(SingularKernelError):
        kernel_diagonal(1, (0, 1 - 1e-14))
