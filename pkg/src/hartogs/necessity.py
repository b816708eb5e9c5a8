"""Boundary experiments behind the lower bounds on ``alpha``.

Along ``z_m = (0, 1 - 2^{-m})`` the quantity

    L(z) = int_S |K(z, w)|^2 K(w, w)^{-alpha} |w2|^2 dV(w)

over the certified sublevel set ``S = {G_bidisk(F w, F z) < -1}`` is
comparable to ``R(z) = (K(z,z)|z2|^2)^{-alpha} K(z,z) |z2|^4``.  If
``T_{K^{-alpha}}: L^p -> L^q`` were bounded, ``L(z)`` would also be at most a
constant times ``|z2|^{2/q-2/p} K(z,z)^{1-1/p+1/q}``; the witness is the
ratio of the two, and its growth along the approach contradicts
boundedness.  The implicit constants are unknown, so only trends are read.
"""
from __future__ import annotations

import math

import numpy as np

from .classify import classify
from .domain import Point2C, check_k, require_inside
from .green import mobius_transport, proper_map
from .kernel import kernel_diagonal, kernel_from_factors
from .quadrature import QuadSpec, _refine, gauss_legendre, trapezoid_rule

SUBLEVEL_SPEC = QuadSpec(radial_nodes=8, angular_nodes=32, rel_tol=1e-6)
M_MAX = 7
# extrapolated slope of log(witness) against log K(z,z) above which the
# trend counts as divergent
TREND_TOL = 0.01


def boundary_approach(k: int, m_max: int = M_MAX) -> list[Point2C]:
    check_k(k)
    return [Point2C(0j, complex(1 - 2.0 ** (-m))) for m in range(1, m_max + 1)]


def _centered_disk(s: QuadSpec, radius: float, power: int):
    """Polar rule on ``|xi| < radius`` with ``|xi| = radius * sigma^power``,
    which absorbs a ``|xi|^{2/power - 2}`` singularity at the centre."""
    sg, ws = gauss_legendre(2 * s.radial_nodes, 0.0, 1.0)
    r = radius * sg**power
    dr = ws * radius * power * sg ** (power - 1)
    th, wt = trapezoid_rule(s.angular_nodes)
    xi = (r[:, None] * np.exp(1j * th)[None, :]).ravel()
    w = (dr[:, None] * r[:, None] * wt[None, :]).ravel()
    return xi, w


def sublevel_integral(k: int, z, t: float, G, spec: QuadSpec | None = None):
    """``int G(w1, w2) dV(w)`` over ``{w : G_bidisk(F w, F z) < -t}``.

    Coordinates ``(u1, w2)`` with ``u1 = w1^k / w2``; each point of the
    product of pseudo-hyperbolic disks has ``k`` preimages ``w1``, and
    ``dV(w) = k^{-2} |u1|^{2/k - 2} |w2|^{2/k} dV(u1) dV(w2)`` on each.
    The rule is tailored to ``z1 = 0`` (then ``u1 = 0`` is the centre).
    """
    k = check_k(k)
    require_inside(k, z)
    spec = spec or SUBLEVEL_SPEC
    rad = math.exp(-t)
    fz = proper_map(k, z)

    def evaluate(s: QuadSpec):
        xi1, a1 = _centered_disk(s, rad, k)
        xi2, a2 = _centered_disk(s, rad, 1)
        u1 = mobius_transport(fz.z1, xi1)
        w2 = mobius_transport(fz.z2, xi2)
        j1 = a1 * (1 - abs(fz.z1) ** 2) ** 2 / np.abs(1 + np.conj(fz.z1) * xi1) ** 4
        j2 = a2 * (1 - abs(fz.z2) ** 2) ** 2 / np.abs(1 + np.conj(fz.z2) * xi2) ** 4
        U1 = u1[:, None]
        W2 = w2[None, :]
        jac = np.abs(U1) ** (2.0 / k - 2) * np.abs(W2) ** (2.0 / k) / k**2
        root = (U1 * W2) ** (1.0 / k)
        tot = 0.0
        for j in range(k):
            W1 = root * np.exp(2j * math.pi * j / k)
            tot += np.sum(j1[:, None] * j2[None, :] * jac * G(W1, W2))
        return complex(tot), False, u1.size * w2.size * k

    return _refine(evaluate, spec)


def _L_integrand(k: int, z, alpha: float):
    def G(w1, w2):
        kz = kernel_from_factors(k, z[0] * np.conj(w1), z[1] * np.conj(w2))
        kd = np.real(kernel_from_factors(k, np.abs(w1) ** 2 + 0j, np.abs(w2) ** 2 + 0j))
        return np.abs(kz) ** 2 * kd ** (-alpha) * np.abs(w2) ** 2

    return G


def lower_bound_chain(k: int, alpha: float, m: int, spec: QuadSpec | None = None) -> dict:
    """``L(z_m)``, the comparator ``R(z_m)`` and their ratio."""
    k = check_k(k)
    z = boundary_approach(k, m)[-1]
    res = sublevel_integral(k, z, 1.0, _L_integrand(k, z, alpha), spec)
    L = float(np.real(res.value))
    kzz = float(kernel_diagonal(k, z))
    a2 = abs(z.z2) ** 2
    R = (kzz * a2) ** (-alpha) * kzz * a2**2
    return {
        "k": k,
        "alpha": alpha,
        "m": m,
        "z2": z.z2.real,
        "L": L,
        "R": R,
        "ratio": L / R,
        "K_zz": kzz,
        "error_estimate": res.error_estimate,
        "converged": res.converged,
        "nodes": res.nodes,
        "refinements": [float(np.real(v)) for v in res.levels],
    }


def necessity_witness(k: int, p: float, q: float, alpha: float, spec: QuadSpec | None = None, m_max: int = M_MAX) -> dict:
    """Witness ``W(z_m) = L(z_m) / (|z2|^{2/q-2/p} K(z_m,z_m)^{1-1/p+1/q})``.

    Local slopes of ``log W`` against ``log K(z,z)`` tend to
    ``1/p - 1/q - alpha`` with a drift that halves at each step in ``m``
    (corrections of order ``1 - |z2|``); ``slope_extrapolated`` removes it
    with one Richardson step.  The trend is ``divergent`` when that slope
    exceeds ``TREND_TOL``.
    """
    k = check_k(k)
    p, q = float(p), float(q)
    if not 1 < p <= q < 2 + 2 / k:
        raise ValueError("need 1 < p <= q < 2 + 2/k")
    if m_max < 3:
        raise ValueError("m_max must be >= 3")
    rows = []
    for m in range(1, m_max + 1):
        c = lower_bound_chain(k, alpha, m, spec)
        denom = abs(c["z2"]) ** (2 / q - 2 / p) * c["K_zz"] ** (1 - 1 / p + 1 / q)
        c["witness"] = c["L"] / denom
        rows.append(c)
    lw = np.log([r["witness"] for r in rows])
    lk = np.log([r["K_zz"] for r in rows])
    slopes = np.diff(lw) / np.diff(lk)
    extrapolated = float(2 * slopes[-1] - slopes[-2])
    increasing = bool(np.all(np.diff(lw[1:]) > 0))
    divergent = extrapolated > TREND_TOL
    threshold = classify(k, p, q).alpha_threshold
    return {
        "k": k,
        "p": p,
        "q": q,
        "alpha": alpha,
        "rows": rows,
        "slopes": slopes.tolist(),
        "slope": float(slopes[-1]),
        "slope_extrapolated": extrapolated,
        "increasing": increasing,
        "trend": "divergent" if divergent else "bounded",
        "classifier_threshold": None if threshold is None else float(threshold),
        "converged": all(r["converged"] for r in rows),
    }


def trend_flip(k: int, p: float, q: float, delta: float = 0.05, spec: QuadSpec | None = None) -> dict:
    """Witness trends just below and just above the classifier threshold."""
    thr = classify(k, p, q).alpha_threshold
    if thr is None:
        raise ValueError("no threshold in case I")
    thr = float(thr)
    below = necessity_witness(k, p, q, thr - delta, spec)
    above = necessity_witness(k, p, q, thr + delta, spec)
    return {
        "threshold": thr,
        "delta": delta,
        "below": below,
        "above": above,
        "flips": below["trend"] == "divergent" and above["trend"] == "bounded",
    }


__all__ = [
    "M_MAX",
    "boundary_approach",
    "lower_bound_chain",
    "necessity_witness",
    "sublevel_integral",
    "trend_flip",
]
