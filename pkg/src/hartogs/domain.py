"""Geometry of the fat Hartogs triangle ``{|z1|^k < |z2| < 1}``.

Points are stored as ``Point2C(z1, z2)``; most functions here are
vectorised and accept numpy arrays in either field.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

import numpy as np


class DomainError(ValueError):
    """A point or parameter lies outside the admissible set."""


class Point2C(NamedTuple):
    z1: complex
    z2: complex


class Exponent(NamedTuple):
    beta1: int
    beta2: int


class RadialPoint(NamedTuple):
    r1: float
    r2: float


def check_k(k) -> int:
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise DomainError(f"k must be a positive integer, got {k!r}")
    return int(k)


def contains(k: int, z) -> np.ndarray | bool:
    """True where ``|z1|^k < |z2| < 1`` strictly."""
    k = check_k(k)
    a1 = np.abs(z[0])
    a2 = np.abs(z[1])
    inside = (a1**k < a2) & (a2 < 1.0)
    return bool(inside) if np.ndim(inside) == 0 else inside


def require_inside(k: int, *points) -> None:
    for z in points:
        if not np.all(contains(k, z)):
            raise DomainError(f"point {z!r} is not inside Omega_{k}")


def defect_r(k: int, z):
    """Signed defect ``(|z2|^2 - |z1|^{2k}) (|z2|^2 - 1)``; negative inside."""
    k = check_k(k)
    t = np.abs(z[1]) ** 2
    return (t - np.abs(z[0]) ** (2 * k)) * (t - 1.0)


def in_basis_set(k: int, beta) -> bool:
    k = check_k(k)
    b1, b2 = int(beta[0]), int(beta[1])
    return b1 >= 0 and b1 + k * (b2 + 1) > -1


def min_beta2(k: int, beta1: int) -> int:
    """Smallest ``beta2`` with ``(beta1, beta2)`` in the basis set."""
    # least integer strictly greater than -1 - (beta1 + 1)/k
    return math.floor(Fraction(-(beta1 + 1), k) - 1) + 1


def basis_exponents(k: int, cap1: int, cap2: int) -> list[Exponent]:
    """Basis exponents with ``beta1 <= cap1`` and ``beta2 <= cap2``."""
    k = check_k(k)
    out = []
    for b1 in range(cap1 + 1):
        for b2 in range(min_beta2(k, b1), cap2 + 1):
            out.append(Exponent(b1, b2))
    return out


def monomial_norm_sq_coeff(k: int, beta) -> Fraction:
    """Rational ``c`` with ``||z^beta||^2 = c * pi^2``."""
    k = check_k(k)
    if not in_basis_set(k, beta):
        raise DomainError(f"{tuple(beta)} is not in the basis set for k={k}; the norm diverges")
    b1, b2 = int(beta[0]), int(beta[1])
    return Fraction(4 * k, (2 * b1 + 2) * (2 * k * (b2 + 1) + 2 * b1 + 2))


def monomial_norm_sq(k: int, beta) -> float:
    """``||z^beta||^2_{L^2}`` in closed form.

    Iterated integration over ``U = {r1^k < r2 < 1}`` gives
    ``4 pi^2 k / ((2 b1 + 2)(2k(b2 + 1) + 2 b1 + 2))``.
    """
    return float(monomial_norm_sq_coeff(k, beta)) * math.pi**2


def volume(k: int) -> float:
    return monomial_norm_sq(k, (0, 0))


def sample_points(k: int, count: int, seed: int, margin: float = 0.0) -> list[Point2C]:
    """Seeded interior points kept ``margin`` away from both boundary strata.

    ``r2`` is drawn first (volume-distributed on ``(0, 1/(1+margin)]``), then
    ``r1`` area-uniformly on ``|z1| <= (1 - margin) r2^{1/k}``; angles are
    uniform.  Every point satisfies ``1 - |z2| >= margin |z2|`` and
    ``|z2| - |z1|^k >= margin |z2|``.
    """
    k = check_k(k)
    if count < 1:
        raise ValueError("count must be >= 1")
    if not 0.0 <= margin < 0.5:
        raise ValueError("margin must lie in [0, 1/2)")
    z1, z2 = _sample_arrays(k, count, seed, margin)
    return [Point2C(complex(a), complex(b)) for a, b in zip(z1, z2)]


def _sample_arrays(k: int, count: int, seed: int, margin: float):
    rng = np.random.default_rng(seed)
    rmax = 1.0 / (1.0 + margin)
    z1 = np.empty(count, dtype=complex)
    z2 = np.empty(count, dtype=complex)
    filled = 0
    while filled < count:
        n = count - filled
        u, v, a1, a2 = (1.0 - rng.random(n) for _ in range(4))
        r2 = rmax * u ** (1.0 / (2.0 + 2.0 / k))
        r1 = (1.0 - margin) * r2 ** (1.0 / k) * np.sqrt(v)
        c1 = r1 * np.exp(2j * np.pi * a1)
        c2 = r2 * np.exp(2j * np.pi * a2)
        ok = contains(k, (c1, c2)) & (r2 > 0)
        m = int(ok.sum())
        z1[filled:filled + m] = c1[ok]
        z2[filled:filled + m] = c2[ok]
        filled += m
    return z1, z2
