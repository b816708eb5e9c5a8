"""Schur-test certificates for ``T_{K^{-alpha}}: L^p -> L^q``.

The generalised Schur test with splitting exponent ``eta = 1/p'`` needs
positive weights ``h1, h2, g`` with

    int |K(z, w)| h1(w)^{p'} dV(w)           <= C1 g(z)^{p'}
    int |K(z, w)|^{q/p} g(z)^q dV(z)          <= C2 h2(w)^q

and then ``||T|| <= C1^{1/p'} C2^{1/q} sup h1^{-1} h2 K^{-alpha}``.  Both
left sides are instances of the weighted kernel integral
``J(z) = int |K(z, w)|^a |r(w)|^b |w2|^c dV(w)``, whose size is
``K(z,z)^{a-1} |r(z)|^b |z2|^{a-2b-2}`` up to constants.  Here the constants
are sample maxima over interior points pushed toward the boundary, so a
certificate is numerical evidence, not a proof.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _fastkernel
from .classify import Case, classify
from .domain import Point2C, check_k, defect_r, in_basis_set, monomial_norm_sq, require_inside, sample_points
from .kernel import kernel_diagonal
from .quadrature import (
    IntegralResult,
    QuadSpec,
    angular_grid,
    integrate_disk,
    integrate_with_angular,
    lp_norm,
)
from .toeplitz import LaurentPoly, basis_coefficients, poly_l2_norm_sq

SCHUR_SPEC = QuadSpec(radial_nodes=4, angular_nodes=8, grading=3.0, depth=6, rel_tol=0.1)
STABILITY_TOL = 0.10


# --------------------------------------------------------------------------
# the two integral estimates


def estimate_I(a: float, b: float, c: float, v: complex, spec: QuadSpec | None = None) -> IntegralResult:
    """``int_D |1 - u conj(v)|^{-2a} (1 - |u|^2)^b |u|^c dV(u)``."""
    v = complex(v)
    if abs(v) >= 1:
        raise ValueError("v must lie in the unit disk")
    spec = spec or QuadSpec(radial_nodes=8, angular_nodes=64, depth=30, rel_tol=1e-8)

    def g(u):
        return np.abs(1 - u * np.conj(v)) ** (-2 * a) * (1 - np.abs(u) ** 2) ** b * np.abs(u) ** c

    focus = None if abs(v) < 0.5 else float(np.angle(v))
    res = integrate_disk(g, spec, focus_angle=focus, width=1 - abs(v))
    if b <= -1 or c <= -2:
        res.divergent = True
        res.converged = False
    return res


def estimate_I_rhs(a: float, b: float, v: complex) -> float:
    return (1 - abs(v) ** 2) ** (-2 * a + b + 2)


@dataclass
class JEstimate:
    result: IntegralResult
    rhs: float
    ratio: float
    in_range: bool
    level_ratios: list = field(default_factory=list)


def j_in_range(k: int, a: float, b: float, c: float) -> bool:
    return a >= 1 and -1 < b < 0 and -a + 2 * b + c + 2.0 / k > -2


def j_rhs(k: int, a: float, b: float, z) -> float:
    """``K(z,z)^{a-1} |r(z)|^b |z2|^{a-2b-2}``."""
    return float(kernel_diagonal(k, z)) ** (a - 1) * abs(float(defect_r(k, z))) ** b * abs(z[1]) ** (a - 2 * b - 2)


def weighted_kernel_integral(k: int, a: float, b: float, c: float, z, spec: QuadSpec | None = None) -> IntegralResult:
    """``int |K(z, w)|^a |r(w)|^b |w2|^c dV(w)`` by focused quadrature."""
    k = check_k(k)
    require_inside(k, z)
    spec = spec or SCHUR_SPEC
    z1, z2 = complex(z[0]), complex(z[1])

    def angular(s: QuadSpec, r1, r2):
        th1, th2, wa = angular_grid(k, s, z)
        ang = _fastkernel.kernel_abs_power(k, z1, z2, r1, r2, np.exp(1j * th1), np.exp(1j * th2), wa, float(a))
        rr = (r2**2 - r1 ** (2 * k)) * (1 - r2**2)
        return ang * rr**b * r2**c

    return integrate_with_angular(k, angular, spec)


def estimate_J(k: int, a: float, b: float, c: float, z, spec: QuadSpec | None = None, strict: bool = True) -> JEstimate:
    """``J(z)`` and its ratio to ``K(z,z)^{a-1} |r(z)|^b |z2|^{a-2b-2}``.

    Outside ``a >= 1, -1 < b < 0, -a + 2b + c + 2/k > -2`` a ``ValueError``
    is raised unless ``strict`` is false, in which case the integral is
    still computed and ``in_range`` is reported false.
    """
    ok = j_in_range(k, a, b, c)
    if strict and not ok:
        raise ValueError(f"(a, b, c) = ({a}, {b}, {c}) outside a >= 1, -1 < b < 0, -a+2b+c+2/k > -2")
    res = weighted_kernel_integral(k, a, b, c, z, spec)
    rhs = j_rhs(k, a, b, z)
    return JEstimate(res, rhs, float(np.real(res.value)) / rhs, ok, [float(np.real(x)) / rhs for x in res.levels])


# --------------------------------------------------------------------------
# weights and certificates


@dataclass(frozen=True)
class SchurParams:
    p: float
    q: float
    eta: float
    beta: float
    gamma: float

    @property
    def p_conj(self) -> float:
        return self.p / (self.p - 1)

    def validate(self, k: int) -> None:
        k = check_k(k)
        p, q = self.p, self.q
        if not 1 < p <= q < 2 + 2 / k:
            raise ValueError("need 1 < p <= q < 2 + 2/k")
        if not 0 < self.beta < min(1 / q, 1 - 1 / p):
            raise ValueError("beta must lie in (0, min(1/q, 1 - 1/p))")
        if not self.gamma < (1 + 2 / k) * (1 - 1 / p):
            raise ValueError("gamma must be < (1 + 2/k)(1 - 1/p)")

    @classmethod
    def default(cls, k: int, p: float, q: float, alpha: float = 0.0) -> "SchurParams":
        """``eta = 1/p'``, ``beta = min(1/q, 1/p')/4`` and the ``gamma`` that
        makes ``h1^{-1} h2 K^{-alpha}`` bounded: ``2/q - 1/p`` in case II,
        ``1/p - 2 alpha`` in case III."""
        p, q = float(p), float(q)
        verdict = classify(k, p, q)
        gamma = 1 / p - 2 * alpha if verdict.case is Case.III else 2 / q - 1 / p
        return cls(p, q, 1 - 1 / p, min(1 / q, 1 - 1 / p) / 4, gamma)


def build_weights(k: int, sp: SchurParams):
    """``(h1, g, h2)`` as functions of a point ``(z1, z2)``."""
    k = check_k(k)
    pc = sp.p_conj
    b, gm = sp.beta, sp.gamma

    def h1(w):
        return np.abs(defect_r(k, w)) ** (-b) * np.abs(w[1]) ** (2 * b - gm)

    def g(z):
        return np.abs(defect_r(k, z)) ** (-b) * np.abs(z[1]) ** (2 * b - 1 / pc)

    def h2(w):
        return (
            kernel_diagonal(k, w) ** (1 / sp.p - 1 / sp.q)
            * np.abs(defect_r(k, w)) ** (-b)
            * np.abs(w[1]) ** (1 / sp.p + 2 * b - 2 / sp.q)
        )

    return h1, g, h2


@dataclass
class SchurCertificate:
    C1: float
    C2: float
    supA: float
    normBound: float
    samplesUsed: int
    refinementStable: bool
    divergent: bool = False
    params: SchurParams | None = None
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        d = {
            "C1": self.C1,
            "C2": self.C2,
            "supA": self.supA,
            "normBound": self.normBound,
            "samplesUsed": self.samplesUsed,
            "refinementStable": self.refinementStable,
            "divergent": self.divergent,
        }
        if self.params is not None:
            d["params"] = {f: getattr(self.params, f) for f in ("p", "q", "eta", "beta", "gamma")}
        d.update(self.details)
        return d


def probe_points(k: int, samples: int, seed: int, m_max: int = 6) -> list[Point2C]:
    """Boundary-probing points at distance ``2^{-m}``, ``m = 1..m_max``, from
    each boundary stratum and their corner, plus seeded interior points."""
    k = check_k(k)
    pts = []
    for m in range(1, m_max + 1):
        d = 2.0 ** (-m)
        pts.append(Point2C(0j, complex(1 - d)))
        pts.append(Point2C(complex(((1 - d) * 0.5) ** (1 / k)), 0.5 + 0j))
        pts.append(Point2C(complex(((1 - d) ** 2) ** (1 / k)), complex(1 - d)))
    if samples > 0:
        pts.extend(sample_points(k, samples, seed, margin=2.0 ** (-m_max)))
    return list(dict.fromkeys(pts))


def _sup_A(k: int, alpha: float, sp: SchurParams, pts) -> float:
    h1, _, h2 = build_weights(k, sp)
    z1 = np.array([p.z1 for p in pts])
    z2 = np.array([p.z2 for p in pts])
    w = (z1, z2)
    a = h2(w) / h1(w) * kernel_diagonal(k, w) ** (-alpha)
    return float(np.max(a))


def schur_certify(
    k: int,
    alpha: float,
    sp: SchurParams | None = None,
    spec: QuadSpec | None = None,
    samples: int = 10,
    seed: int = 0,
    m_max: int = 6,
) -> SchurCertificate:
    """Sample-maximum Schur constants ``C1, C2`` and ``sup A``.

    ``refinementStable`` is true when ``C1`` and ``C2`` computed on the two
    finest quadrature levels differ by less than 10%.
    """
    k = check_k(k)
    if sp is None:
        raise ValueError("SchurParams required (see SchurParams.default)")
    sp.validate(k)
    spec = spec or SCHUR_SPEC
    if spec.refine_levels < 2:
        raise ValueError("stability needs at least two refinement levels")
    pc = sp.p_conj
    first = (1.0, -sp.beta * pc, (2 * sp.beta - sp.gamma) * pc)
    second = (sp.q / sp.p, -sp.beta * sp.q, (2 * sp.beta - 1 / pc) * sp.q)
    _, g, h2 = build_weights(k, sp)
    pts = probe_points(k, samples, seed, m_max)
    cache: dict = {}

    def J(abc, z):
        key = (abc, z)
        if key not in cache:
            cache[key] = weighted_kernel_integral(k, *abc, z, spec)
        return cache[key]

    c1_levels = np.zeros(spec.refine_levels)
    c2_levels = np.zeros(spec.refine_levels)
    divergent = False
    argmax = {}
    for z in pts:
        r1 = J(first, z)
        r2 = J(second, z)
        divergent = divergent or r1.divergent or r2.divergent
        l1 = np.real(np.array(r1.levels)) / float(g(z)) ** pc
        l2 = np.real(np.array(r2.levels)) / float(h2(z)) ** sp.q
        if l1[-1] > c1_levels[-1]:
            argmax["C1_at"] = [z.z1, z.z2]
        if l2[-1] > c2_levels[-1]:
            argmax["C2_at"] = [z.z1, z.z2]
        c1_levels = np.maximum(c1_levels, l1)
        c2_levels = np.maximum(c2_levels, l2)
    C1, C2 = float(c1_levels[-1]), float(c2_levels[-1])
    stable = bool(
        abs(c1_levels[-1] - c1_levels[-2]) < STABILITY_TOL * C1 and abs(c2_levels[-1] - c2_levels[-2]) < STABILITY_TOL * C2
    )
    supA = _sup_A(k, alpha, sp, pts)
    if divergent:
        bound = math.inf
    else:
        bound = C1 ** ((sp.p - 1) / sp.p) * C2 ** (1 / sp.q) * supA
    return SchurCertificate(
        C1,
        C2,
        supA,
        bound,
        len(pts),
        stable and not divergent,
        divergent,
        sp,
        {
            "C1_levels": c1_levels.tolist(),
            "C2_levels": c2_levels.tolist(),
            "exponents_first": list(first),
            "exponents_second": list(second),
            "normBound_derivation": "normBound=C1^((p-1)/p)*C2^(1/q)*supA",
            **{k_: [complex(x) for x in v] for k_, v in argmax.items()},
        },
    )


# --------------------------------------------------------------------------
# empirical operator ratios


def toeplitz_of_poly(k: int, alpha: float, f: LaurentPoly, spec: QuadSpec | None = None):
    """``T_{K^{-alpha}} f`` as a function, via its finitely many basis
    coefficients (the symbol is radial, so only the modes of ``f`` survive).

    Returns the function and the ``{beta: <K^{-alpha} f, z^beta>}`` map.
    """
    modes = sorted({m.mode for m in f.terms if in_basis_set(k, m.mode)})
    coef = np.atleast_1d(basis_coefficients(k, alpha, f, modes, spec).value) if modes else np.zeros(0)
    scale = [c / monomial_norm_sq(k, b) for c, b in zip(coef, modes)]

    def Tf(w1, w2):
        out = np.zeros(np.broadcast(w1, w2).shape, dtype=complex)
        for sc, (b1, b2) in zip(scale, modes):
            out = out + sc * w1**b1 * w2 ** float(b2)
        return out

    return Tf, dict(zip(modes, coef))


NORM_SPEC = QuadSpec(radial_nodes=4, angular_nodes=16, depth=8, rel_tol=1e-4)


def empirical_ratio(k: int, alpha: float, p: float, q: float, f: LaurentPoly, spec: QuadSpec | None = None) -> float:
    """``||T f||_q / ||f||_p`` for a polynomial ``f``.

    ``L^2`` norms use orthogonality of the angular modes (the image is a
    finite sum of orthogonal monomials); other exponents use quadrature.
    """
    spec = spec or NORM_SPEC
    Tf, coef = toeplitz_of_poly(k, alpha, f, spec)
    if q == 2:
        num = math.sqrt(sum(abs(c) ** 2 / monomial_norm_sq(k, b) for b, c in coef.items()))
    else:
        num = float(lp_norm(k, Tf, q, spec).value)
    if p == 2:
        den = math.sqrt(float(np.real(poly_l2_norm_sq(k, f, spec).value)))
    else:
        den = float(lp_norm(k, f, p, spec).value)
    return num / den


# --------------------------------------------------------------------------
# the b = 0 gap


def kernel_norm_proxy_check(k: int, p: float, z, b_proxy: float = -0.01, spec: QuadSpec | None = None) -> dict:
    """``||K(z, .) w2||_{L^p}`` against ``|z2|^{1-2/p} K(z,z)^{1-1/p}``.

    The weighted estimate is stated only for ``-1 < b < 0``; this quantity
    is its formal ``b = 0`` case.  Both the ``b = 0`` integral and the
    in-range proxy ``b = b_proxy`` are reported, and the gap is flagged.
    """
    k = check_k(k)
    a, c = p, p
    exact = weighted_kernel_integral(k, a, 0.0, c, z, spec)
    proxy = estimate_J(k, a, b_proxy, c, z, spec, strict=True)
    norm = float(np.real(exact.value)) ** (1 / p)
    bound = abs(z[1]) ** (1 - 2 / p) * float(kernel_diagonal(k, z)) ** (1 - 1 / p)
    return {
        "k": k,
        "p": p,
        "z": [complex(z[0]), complex(z[1])],
        "norm": norm,
        "bound": bound,
        "ratio": norm / bound,
        "proxy_b": b_proxy,
        "proxy_ratio": proxy.ratio,
        "b_zero_outside_stated_range": True,
        "converged": exact.converged and proxy.result.converged,
    }


__all__ = [
    "JEstimate",
    "NORM_SPEC",
    "SCHUR_SPEC",
    "SchurCertificate",
    "SchurParams",
    "build_weights",
    "empirical_ratio",
    "estimate_I",
    "estimate_I_rhs",
    "estimate_J",
    "j_in_range",
    "j_rhs",
    "kernel_norm_proxy_check",
    "probe_points",
    "schur_certify",
    "toeplitz_of_poly",
    "weighted_kernel_integral",
]
