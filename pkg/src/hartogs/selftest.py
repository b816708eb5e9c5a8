"""A fast battery of invariants, run by ``hartogs selftest``."""
from __future__ import annotations

import math

import numpy as np

from .classify import classify
from .domain import monomial_norm_sq, sample_points
from .green import HER_POLYNOMIALS, herbort_blocki_check_bidisk, mobius_comparability_check
from .kernel import diagonal_bounds, kernel, kernel_diagonal, kernel_series
from .quadrature import QuadSpec, integrate_radial
from .toeplitz import build_counterexample, counterexample_constant_alpha0, radial_toeplitz_constant


def _check(name: str, ok: bool, **info) -> dict:
    return {"name": name, "ok": bool(ok), **info}


def run_battery(seed: int = 0) -> dict:
    checks = []
    for k in (1, 2):
        zs = sample_points(k, 3, seed, margin=0.3)
        ws = sample_points(k, 3, seed + 1, margin=0.3)
        err = max(abs(kernel(k, z, w) - kernel_series(k, z, w, 80, 80)) / abs(kernel(k, z, w)) for z, w in zip(zs, ws))
        checks.append(_check(f"kernel closed form vs series, k={k}", err < 1e-8, max_rel_err=err))
        herm = max(abs(kernel(k, z, w) - np.conj(kernel(k, w, z))) for z, w in zip(zs, ws))
        checks.append(_check(f"kernel hermitian, k={k}", herm < 1e-10 * max(1.0, abs(kernel(k, zs[0], ws[0]))), max_abs_err=herm))
        # k = 1 makes the envelope exact, so allow rounding
        env = all(lo * (1 - 1e-12) <= kernel_diagonal(k, z) <= hi * (1 + 1e-12) for z in zs for lo, hi in [diagonal_bounds(k, z)])
        checks.append(_check(f"diagonal envelope, k={k}", env))
        beta = (1, 1) if k == 1 else (1, 0)
        num = integrate_radial(k, lambda r1, r2: 4 * math.pi**2 * r1 ** (2 * beta[0] + 1) * r2 ** (2 * beta[1] + 1.0), QuadSpec(depth=12))
        rel = abs(num.real - monomial_norm_sq(k, beta)) / monomial_norm_sq(k, beta)
        checks.append(_check(f"monomial norm by quadrature, k={k}", rel < 1e-6, rel_err=rel))
        seq = build_counterexample(k, 1.2, 2)
        c = radial_toeplitz_constant(k, 0.0, seq.h, QuadSpec(depth=12), r2_breaks=seq.breakpoints).real
        ref = counterexample_constant_alpha0(seq)
        checks.append(_check(f"radial Toeplitz constant closed form, k={k}", abs(c - ref) < 1e-6 * abs(ref), value=c, reference=ref))
    v = classify(1, 2, 2)
    checks.append(_check("classify(1, 2, 2)", v.as_dict() == {"case": "II", "alpha_threshold": "0", "strict": False}))
    mob = mobius_comparability_check(10_000, seed)
    checks.append(_check("Moebius comparability", mob["violations"] == 0, ratio_min=mob["ratio_min"], ratio_max=mob["ratio_max"]))
    her = herbort_blocki_check_bidisk((0.3, -0.2j), 1.0, HER_POLYNOMIALS["1+u1*u2"])
    checks.append(_check("Herbort-Blocki bidisk inequality", her["holds"], lhs=her["lhs"], rhs=her["rhs"]))
    return {"checks": checks, "failures": sum(not c["ok"] for c in checks)}


__all__ = ["run_battery"]
