"""Acceptance suite: one test per criterion, each at its stated tolerance.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""
import math
import time
from fractions import Fraction

import numpy as np
import pytest
from scipy.special import zeta

from hartogs.classify import Case, classify, projection_self_bounded
from hartogs.domain import Point2C, sample_points
from hartogs.green import (
    HER_LEVELS,
    HER_POLES,
    HER_POLYNOMIALS,
    herbort_blocki_battery,
    herbort_blocki_check_bidisk,
    mobius_comparability_check,
    sublevel_comparability_check,
)
from hartogs.kernel import diagonal_bounds, kernel, kernel_diagonal, kernel_series
from hartogs.necessity import trend_flip
from hartogs.quadrature import QuadSpec, integrate_full
from hartogs.schur import SchurParams, empirical_ratio, estimate_I, estimate_I_rhs, schur_certify
from hartogs.toeplitz import LaurentPoly, Monomial, apply_toeplitz, counterexample_growth, monomial, random_polynomial


def criterion(num):
    def mark(fn):
        fn.criterion = num
        return fn

    return mark


def fmt(x):
    return f"{x:.3g}"


@criterion(1)
def test_kernel_dual_oracle(criterion_detail):
    t0 = time.perf_counter()
    worst = 0.0
    for k in (1, 2, 3):
        zs = sample_points(k, 100, 1000 + k, margin=0.2)
        ws = sample_points(k, 100, 2000 + k, margin=0.2)
        for z, w in zip(zs, ws):
            a = complex(kernel(k, z, w))
            worst = max(worst, abs(a - kernel_series(k, z, w, 60, 60)) / abs(a))
    elapsed = time.perf_counter() - t0
    criterion_detail.update(max_rel_err=fmt(worst), seconds=fmt(elapsed))
    assert worst < 1e-8
    assert elapsed < 30


ANCHOR_SPEC = QuadSpec(radial_nodes=6, angular_nodes=8, depth=14)


@criterion(2)
def test_closed_form_anchors(criterion_detail):
    vol_err = inv_err = lq_err = 0.0
    flagged = True
    ones = lambda w1, w2: np.ones(np.broadcast(w1, w2).shape)
    for k in (1, 2, 3, 4):
        v = integrate_full(k, ones, ANCHOR_SPEC).real
        vol_err = max(vol_err, abs(v / (math.pi**2 * k / (k + 1)) - 1))
        n = integrate_full(k, lambda w1, w2: np.abs(w2) ** -2.0, ANCHOR_SPEC).real
        inv_err = max(inv_err, abs(n / (k * math.pi**2) - 1))
        q = 2 + 2 / k - 0.1
        lq = integrate_full(k, lambda w1, w2: np.abs(w2) ** -q, ANCHOR_SPEC).real
        lq_err = max(lq_err, abs(lq / (2 * math.pi**2 * k / (2 * k + 2 - k * q)) - 1))
        qc = 2 + 2 / k
        flagged &= integrate_full(k, lambda w1, w2: np.abs(w2) ** -qc, ANCHOR_SPEC).divergent
    criterion_detail.update(volume=fmt(vol_err), inv_z2_sq=fmt(inv_err), inv_z2_q=fmt(lq_err), divergence_flagged=flagged)
    assert vol_err < 1e-6 and inv_err < 1e-6
    assert lq_err < 1e-4
    assert flagged


BETAS = [(0, 0), (1, 0), (0, 1), (0, -1), (2, -1), (1, 2)]
CONJ_Z2 = LaurentPoly((Monomial(1.0, (0, 0), (0, 1)),))


@criterion(3)
def test_reproducing_and_projection(criterion_detail):
    inputs = [monomial(b) for b in BETAS] + [CONJ_Z2]
    worst_basis = worst_conj = 0.0
    for k in (1, 2):
        for z in sample_points(k, 5, 30 + k, margin=0.2):
            r = apply_toeplitz(k, 0.0, inputs, z)
            got = np.asarray(r.value)
            want = np.array([z.z1**b1 * z.z2**b2 for b1, b2 in BETAS])
            worst_basis = max(worst_basis, float(np.max(np.abs(got[:-1] - want) / np.abs(want))))
            target = 1 / ((k + 1) * z.z2)
            worst_conj = max(worst_conj, abs(got[-1] - target) / abs(target))
    criterion_detail.update(basis_rel=fmt(worst_basis), conj_z2_rel=fmt(worst_conj))
    assert worst_basis < 1e-4
    assert worst_conj < 1e-4


@criterion(4)
def test_diagonal_envelope(criterion_detail):
    violations = 0
    k1_dev = 0.0
    for k in (1, 2, 3):
        pts = sample_points(k, 10_000, 40 + k)
        z = (np.array([p.z1 for p in pts]), np.array([p.z2 for p in pts]))
        lo, hi = diagonal_bounds(k, z)
        kd = kernel_diagonal(k, z)
        if k == 1:
            # lo = K = hi here, so the check is the 1e-12 ratio band
            k1_dev = float(max(np.max(np.abs(kd / lo - 1)), np.max(np.abs(kd / hi - 1))))
            violations += int(np.count_nonzero(np.abs(kd / lo - 1) > 1e-12))
        else:
            violations += int(np.count_nonzero((kd < lo) | (kd > hi)))
    criterion_detail.update(violations=violations, k1_ratio_dev=fmt(k1_dev))
    assert violations == 0
    assert k1_dev < 1e-12


@criterion(5)
def test_classifier_golden_table(criterion_detail):
    t0 = time.perf_counter()
    F = Fraction
    # the three cases
    assert classify(1, 2, 2).as_dict() == {"case": "II", "alpha_threshold": "0", "strict": False}
    assert classify(2, 2, 3).case is Case.I
    v = classify(1, F(4, 3), F(4, 3))
    assert (v.case, v.alpha_threshold, v.strict) == (Case.III, 0, True)
    v = classify(1, F(3, 2), 3)
    assert (v.case, v.alpha_threshold, v.strict) == (Case.II, F(1, 3), False)
    # k = 2, p = q = 6/5: edge 1 - (5/6)/2 = 7/12 <= 5/6, threshold 5/6 - 7/12
    v = classify(2, F(6, 5), F(6, 5))
    assert (v.case, v.alpha_threshold, v.strict) == (Case.III, F(1, 4), True)
    # self-boundedness intervals, endpoints excluded
    for k, lo, hi in ((1, F(4, 3), F(4)), (2, F(3, 2), F(3))):
        assert not projection_self_bounded(k, lo) and not projection_self_bounded(k, hi)
        for p in (lo + F(1, 1000), (lo + hi) / 2, hi - F(1, 1000)):
            assert projection_self_bounded(k, p)
        assert not projection_self_bounded(k, lo - F(1, 1000)) and not projection_self_bounded(k, hi + F(1, 1000))
    # exhaustive grid: 1/p, 1/q in (0, 1) with denominators <= 40
    inv = sorted({F(a, b) for b in range(2, 41) for a in range(1, b)})
    ps = [F(x.denominator, x.numerator) for x in inv]  # decreasing in p
    checked = 0
    for k in range(1, 6):
        for i, p in enumerate(ps):
            # self-boundedness consistency
            assert classify(k, p, p).admits(0) == projection_self_bounded(k, p)
            # no gain: alpha = 0 never admissible for q > p
            for q in ps[:i]:
                assert not classify(k, p, q).admits(0)
            checked += i + 1
    elapsed = time.perf_counter() - t0
    criterion_detail.update(grid_cases=checked, seconds=fmt(elapsed))
    assert elapsed < 5


@criterion(6)
def test_schur_certificate(criterion_detail):
    t0 = time.perf_counter()
    k, p, q, alpha = 1, 2.0, 2.0, 0.0
    sp = SchurParams.default(k, p, q, alpha)
    assert sp.gamma == pytest.approx(2 / q - 1 / p)
    cert = schur_certify(k, alpha, sp, samples=10, seed=0)
    ratios = [empirical_ratio(k, alpha, p, q, random_polynomial(s)) for s in range(10)]
    elapsed = time.perf_counter() - t0
    criterion_detail.update(normBound=fmt(cert.normBound), supA=fmt(cert.supA), max_ratio=fmt(max(ratios)), stable=cert.refinementStable, seconds=fmt(elapsed))
    assert cert.refinementStable and not cert.divergent
    assert cert.supA <= 1 + 1e-12
    assert math.isfinite(cert.normBound)
    assert max(ratios) <= cert.normBound * 1.05
    assert elapsed < 120


@criterion(7)
def test_mobius_claim(criterion_detail):
    t0 = time.perf_counter()
    r = mobius_comparability_check(100_000, 7)
    elapsed = time.perf_counter() - t0
    criterion_detail.update(pairs=r["samples"], violations=r["violations"], seconds=fmt(elapsed))
    assert r["samples"] == 100_000
    assert r["violations"] == 0
    assert elapsed < 1


@criterion(8)
def test_herbort_blocki(criterion_detail):
    rows = herbort_blocki_battery()
    assert len(rows) == len(HER_POLYNOMIALS) * len(HER_POLES) * len(HER_LEVELS) == 60
    failures = sum(not r["holds"] for r in rows)
    one = HER_POLYNOMIALS["one"]
    eq_err = max(
        abs(herbort_blocki_check_bidisk((0, 0), t, one)["lhs"] / (math.pi**2 * math.exp(-4 * t)) - 1) for t in HER_LEVELS
    )
    criterion_detail.update(cases=len(rows), failures=failures, equality_rel_err=fmt(eq_err))
    assert failures == 0
    assert all(r["converged"] for r in rows)
    assert eq_err < 1e-6


COMPARABILITY_POLES = [(0.0, 0.5), (0.3, 0.5), (0.1 + 0.2j, 0.9)]


@criterion(9)
def test_sublevel_comparability(criterion_detail):
    violations = 0
    sampled = 0
    for k in (1, 2):
        for pole in COMPARABILITY_POLES:
            r = sublevel_comparability_check(k, pole, 1.0, 1000, 9)
            sampled += r["samples"]
            violations += r["violations"]
    criterion_detail.update(points=sampled, violations=violations)
    assert sampled == 6000
    assert violations == 0


@criterion(10)
def test_counterexample_growth(criterion_detail):
    t0 = time.perf_counter()
    c0 = float(zeta(1.2, 1))
    grow = counterexample_growth(1, 1.2, 1.2, 0.0, 5)
    flat = counterexample_growth(1, 1.2, 1.2, 0.5, 5)
    norms = [r["norm_f_p_pow"] for r in grow["rows"]]
    ratios = [r["ratio"] for r in grow["rows"]]
    elapsed = time.perf_counter() - t0
    below = all(n < c0 for n in norms)
    increasing = all(b > a for a, b in zip(ratios, ratios[1:]))
    criterion_detail.update(
        norms_below_zeta=below,
        max_norm_p_pow=fmt(max(norms)),
        zeta=fmt(c0),
        ratios_increasing=increasing,
        spread_alpha_half=fmt(flat["ratio_spread"]),
        seconds=fmt(elapsed),
    )
    assert below, f"||f_j||_p^p = {[round(n, 3) for n in norms]} vs sum l^-1.2 = {c0:.4f}"
    assert increasing
    assert flat["ratio_spread"] < 3
    assert elapsed < 120


@criterion(11)
def test_necessity_flip(criterion_detail):
    r = trend_flip(1, 2.0, 2.0, 0.05)
    criterion_detail.update(
        slope_below=fmt(r["below"]["slope_extrapolated"]),
        slope_above=fmt(r["above"]["slope_extrapolated"]),
        flips=r["flips"],
    )
    assert r["threshold"] == 0.0
    assert r["below"]["trend"] == "divergent"
    assert r["above"]["trend"] == "bounded"


@criterion(12)
def test_weighted_disk_integral_scaling(criterion_detail):
    a, b, c = 1.0, -0.5, 0.0
    centre = estimate_I(a, b, c, 0)
    ratios = []
    for m in range(1, 9):
        v = 1 - 2.0**-m
        ratios.append(estimate_I(a, b, c, v).real / estimate_I_rhs(a, b, v))
    band = max(ratios) / min(ratios)
    criterion_detail.update(centre_rel_err=fmt(abs(centre.real / (2 * math.pi) - 1)), band=fmt(band))
    assert centre.real == pytest.approx(2 * math.pi, rel=1e-6)
    assert band < 100
