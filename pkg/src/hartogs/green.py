"""Pluricomplex Green function of the bidisk and its pullback to ``Omega_k``.

The map ``F(z1, z2) = (z1^k / z2, z2)`` sends ``Omega_k`` holomorphically
into the bidisk, so ``G_bidisk(F z, F w)`` is a lower bound for the Green
function of ``Omega_k``.  Sublevel sets of the bidisk Green function are
products of pseudo-hyperbolic disks; everything here samples or integrates
over those products, which are certified subsets of the true sublevel sets.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .domain import DomainError, Point2C, check_k, require_inside
from .kernel import diagonal_bound_constants, kernel_diagonal
from .quadrature import IntegralResult, QuadSpec, _refine, gauss_legendre, trapezoid_rule

E = math.e
MOBIUS_LO = (E - 1) / (E + 1)
MOBIUS_HI = (E + 1) / (E - 1)


@functools.total_ordering
class _MinusInfinity:
    """Value of a Green function at its pole.

    Compares below every real number so sublevel membership works, but
    takes part in no arithmetic and refuses conversion to float.
    """

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "MINUS_INFINITY"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return 0

    def __lt__(self, other):
        if other is self:
            return False
        if isinstance(other, (int, float, np.floating, np.integer)):
            return True
        return NotImplemented

    def __float__(self):
        raise TypeError("the pole value takes part in no arithmetic")


MINUS_INFINITY = _MinusInfinity()


def _check_disk(*xs):
    for x in xs:
        if not np.all(np.abs(x) < 1):
            raise DomainError("points must lie in the open unit disk")


def mobius_distance(a, b):
    """Pseudo-hyperbolic distance ``|(a - b) / (1 - a conj(b))|`` (vectorised)."""
    _check_disk(a, b)
    d = np.abs((np.asarray(a) - b) / (1 - np.asarray(a) * np.conj(b)))
    return float(d) if np.ndim(d) == 0 else d


def mobius_transport(center, xi):
    """The point at pseudo-hyperbolic offset ``xi`` from ``center``:
    ``(center + xi) / (1 + conj(center) xi)``."""
    return (center + xi) / (1 + np.conj(center) * xi)


def bidisk_green(z, w):
    """``max_i log|(z_i - w_i)/(1 - z_i conj(w_i))|``; MINUS_INFINITY at the pole."""
    _check_disk(*z, *w)
    d = max(mobius_distance(z[0], w[0]), mobius_distance(z[1], w[1]))
    if d == 0.0:
        return MINUS_INFINITY
    return math.log(d)


def proper_map(k: int, z) -> Point2C:
    """``F(z) = (z1^k / z2, z2)``."""
    return Point2C(complex(z[0]) ** k / complex(z[1]), complex(z[1]))


def green_lower_bound(k: int, z, w):
    """``G_bidisk(F z, F w)``, a lower bound for the Green function of ``Omega_k``."""
    k = check_k(k)
    require_inside(k, z, w)
    return bidisk_green(proper_map(k, z), proper_map(k, w))


# --------------------------------------------------------------------------
# sampling certified sublevel sets


@dataclass
class SublevelSample:
    pole: Point2C
    level: float
    points: list


def _disk_uniform(rng, n, radius):
    return radius * np.sqrt(1.0 - rng.random(n)) * np.exp(2j * np.pi * rng.random(n))


def sample_sublevel(k: int, pole, t: float, count: int, seed: int) -> SublevelSample:
    """Points ``z`` of ``Omega_k`` with ``G_bidisk(F z, F pole) < -t``.

    Both coordinates of ``F z`` are drawn by Moebius transport of uniform
    offsets of modulus below ``e^{-t}``; ``z1`` is then a random ``k``-th
    root of ``u1 z2``.
    """
    k = check_k(k)
    require_inside(k, pole)
    if t <= 0:
        raise ValueError("t must be positive")
    rng = np.random.default_rng(seed)
    rad = math.exp(-t)
    fw = proper_map(k, pole)
    pts = []
    while len(pts) < count:
        n = count - len(pts)
        u1 = mobius_transport(fw.z1, _disk_uniform(rng, n, rad))
        z2 = mobius_transport(fw.z2, _disk_uniform(rng, n, rad))
        branch = rng.integers(0, k, n)
        z1 = (u1 * z2) ** (1.0 / k) * np.exp(2j * np.pi * branch / k)
        for a, b in zip(z1, z2):
            # z2 = 0 has probability zero but would leave the domain
            if b != 0 and abs(a) ** k < abs(b) < 1:
                pts.append(Point2C(complex(a), complex(b)))
    return SublevelSample(Point2C(complex(pole[0]), complex(pole[1])), t, pts)


# --------------------------------------------------------------------------
# checks


def mobius_comparability_check(samples: int, seed: int) -> dict:
    """Check ``(e-1)/(e+1) < (1-|a|^2)/(1-|b|^2) < (e+1)/(e-1)`` whenever
    the pseudo-hyperbolic distance of ``a, b`` is below ``1/e``."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    n_edge = samples // 2
    # half the b's uniform on the disk, half pushed toward the circle
    rb = np.concatenate([np.sqrt(1.0 - rng.random(samples - n_edge)), 1.0 - 10.0 ** (-6.0 * rng.random(n_edge))])
    b = rb * np.exp(2j * np.pi * rng.random(samples))
    xi = _disk_uniform(rng, samples, 1.0 / E)
    a = (b - xi) / (1 - xi * np.conj(b))
    dist = np.abs((a - b) / (1 - a * np.conj(b)))
    admissible = dist < 1.0 / E
    ratio = (1 - np.abs(a) ** 2) / (1 - np.abs(b) ** 2)
    r = ratio[admissible]
    bad = int(np.count_nonzero((r <= MOBIUS_LO) | (r >= MOBIUS_HI)))
    return {
        "samples": int(admissible.sum()),
        "violations": bad,
        "ratio_min": float(r.min()),
        "ratio_max": float(r.max()),
        "bound_lo": MOBIUS_LO,
        "bound_hi": MOBIUS_HI,
        "seed": seed,
    }


def sublevel_comparability_constant(k: int, t: float = 1.0) -> float:
    """``Cmax = (c_hi/c_lo) ((1+d)/(1-d))^4`` with ``d = e^{-t}``."""
    c = diagonal_bound_constants(k)
    d = math.exp(-t)
    return (c.c_hi / c.c_lo) * ((1 + d) / (1 - d)) ** 4


def sublevel_comparability_check(k: int, pole, t: float = 1.0, samples: int = 1000, seed: int = 0) -> dict:
    """Check ``K(z,z)|z2|^2 / (K(w,w)|w2|^2)`` lies in ``[1/Cmax, Cmax]`` on
    the certified sublevel set of the pole ``w``."""
    k = check_k(k)
    if t < 1:
        raise ValueError("the comparability constant is derived for t >= 1")
    smp = sample_sublevel(k, pole, t, samples, seed)
    if not smp.points:
        return {"samples": 0, "violations": 0, "empty": True}
    z1 = np.array([p.z1 for p in smp.points])
    z2 = np.array([p.z2 for p in smp.points])
    ref = float(kernel_diagonal(k, pole)) * abs(pole[1]) ** 2
    ratio = kernel_diagonal(k, (z1, z2)) * np.abs(z2) ** 2 / ref
    cmax = sublevel_comparability_constant(k, t)
    bad = int(np.count_nonzero((ratio < 1.0 / cmax) | (ratio > cmax)))
    return {
        "k": k,
        "pole": [complex(pole[0]), complex(pole[1])],
        "t": t,
        "samples": len(smp.points),
        "violations": bad,
        "ratio_min": float(ratio.min()),
        "ratio_max": float(ratio.max()),
        "cmax": cmax,
        "cmax_derivation": "Cmax=(c_hi/c_lo)*((1+e^-t)/(1-e^-t))^4",
        "seed": seed,
        "empty": False,
    }


def _disk_rule(s: QuadSpec, radius: float):
    """Polar product rule on ``|xi| < radius``: Gauss-Legendre radius x trapezoid angle."""
    r, wr = gauss_legendre(2 * s.radial_nodes, 0.0, radius)
    th, wt = trapezoid_rule(s.angular_nodes)
    xi = (r[:, None] * np.exp(1j * th)[None, :]).ravel()
    w = (wr[:, None] * r[:, None] * wt[None, :]).ravel()
    return xi, w


def integrate_moebius_product(center, radius: float, F: Callable, spec: QuadSpec | None = None) -> IntegralResult:
    """``int F(z1, z2) dV`` over ``{|phi_{c_i}(z_i)| < radius, i = 1, 2}``.

    Each factor is the image of ``|xi| < radius`` under
    ``xi -> (c + xi)/(1 + conj(c) xi)``, with Jacobian
    ``(1 - |c|^2)^2 / |1 + conj(c) xi|^4``.
    """
    spec = spec or QuadSpec(radial_nodes=8, angular_nodes=32)
    c1, c2 = complex(center[0]), complex(center[1])

    def evaluate(s: QuadSpec):
        xi, w = _disk_rule(s, radius)
        z1 = mobius_transport(c1, xi)
        z2 = mobius_transport(c2, xi)
        j1 = w * (1 - abs(c1) ** 2) ** 2 / np.abs(1 + np.conj(c1) * xi) ** 4
        j2 = w * (1 - abs(c2) ** 2) ** 2 / np.abs(1 + np.conj(c2) * xi) ** 4
        vals = np.asarray(F(z1[:, None], z2[None, :]))
        return complex(j1 @ vals @ j2), False, xi.size**2

    return _refine(evaluate, spec)


def bidisk_kernel_diagonal(w) -> float:
    return 1.0 / (math.pi**2 * (1 - abs(w[0]) ** 2) ** 2 * (1 - abs(w[1]) ** 2) ** 2)


def herbort_blocki_check_bidisk(w, t: float, f: Callable, spec: QuadSpec | None = None) -> dict:
    """``int_{G(., w) < -t} |f|^2 >= e^{-4t} |f(w)|^2 / K(w, w)`` on the bidisk."""
    _check_disk(*w)
    if t <= 0:
        raise ValueError("t must be positive")
    res = integrate_moebius_product(w, math.exp(-t), lambda a, b: np.abs(f(a, b)) ** 2, spec)
    lhs = float(np.real(res.value))
    rhs = math.exp(-4 * t) * abs(complex(f(complex(w[0]), complex(w[1])))) ** 2 / bidisk_kernel_diagonal(w)
    return {
        "w": [complex(w[0]), complex(w[1])],
        "t": t,
        "lhs": lhs,
        "rhs": rhs,
        "holds": lhs >= rhs * (1 - 1e-12),
        "margin": lhs - rhs,
        "quadrature": res.as_dict(),
        "converged": res.converged,
    }


HER_POLYNOMIALS = {
    "one": lambda a, b: np.ones(np.broadcast(a, b).shape, dtype=complex),
    "u1": lambda a, b: a + 0 * b,
    "1+u1*u2": lambda a, b: 1 + a * b,
    "u1^2-2u2+0.5": lambda a, b: a * a - 2 * b + 0.5,
}
HER_POLES = [(0, 0), (0.2, 0.1), (0.5, -0.3j), (-0.7 + 0.1j, 0.4), (0.9j, 0.85)]
HER_LEVELS = (0.5, 1.0, 2.0)


def herbort_blocki_battery(spec: QuadSpec | None = None) -> list[dict]:
    out = []
    for name, f in HER_POLYNOMIALS.items():
        for w in HER_POLES:
            for t in HER_LEVELS:
                r = herbort_blocki_check_bidisk(w, t, f, spec)
                r["polynomial"] = name
                out.append(r)
    return out


__all__ = [
    "HER_LEVELS",
    "HER_POLES",
    "HER_POLYNOMIALS",
    "MINUS_INFINITY",
    "MOBIUS_HI",
    "MOBIUS_LO",
    "SublevelSample",
    "bidisk_green",
    "bidisk_kernel_diagonal",
    "green_lower_bound",
    "herbort_blocki_battery",
    "herbort_blocki_check_bidisk",
    "integrate_moebius_product",
    "mobius_comparability_check",
    "mobius_distance",
    "mobius_transport",
    "sublevel_comparability_check",
    "sublevel_comparability_constant",
    "proper_map",
    "sample_sublevel",
]
