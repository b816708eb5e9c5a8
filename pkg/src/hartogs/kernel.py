"""Bergman kernel of the fat Hartogs triangle.

With ``s = z1 * conj(w1)`` and ``t = z2 * conj(w2)``::

    K(z, w) = (p_k(s) t^2 + q_k(s) t + s^k p_k(s)) / (k pi^2 (1 - t)^2 (t - s^k)^2)

``kernel_series`` sums the reproducing expansion over the orthogonal
monomial basis instead; it shares no code with the closed form and is the
oracle the closed form is tested against.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .domain import (
    DomainError,
    basis_exponents,
    check_k,
    monomial_norm_sq,
    require_inside,
)

SINGULAR_EPS = 1e-12


class SingularKernelError(ArithmeticError):
    """Evaluation too close to a pole of the closed form."""


class KernelFactors(NamedTuple):
    s: complex
    t: complex


class DiagonalBoundConstants(NamedTuple):
    c_lo: float
    c_hi: float


def coefficient_polys(k: int, s):
    """``(p_k(s), q_k(s))`` by direct finite sums (``p_1 = 0``)."""
    k = check_k(k)
    s = np.asarray(s)
    p = np.zeros_like(s, dtype=np.result_type(s, float))
    q = np.zeros_like(p)
    sk = s**k
    for j in range(1, k + 1):
        sj = s ** (j - 1)
        if j < k:
            p = p + j * (k - j) * sj
        q = q + (j * j + (k - j) ** 2 * sk) * sj
    if p.ndim == 0:
        return p[()], q[()]
    return p, q


def kernel_factors(z, w) -> KernelFactors:
    return KernelFactors(z[0] * np.conj(w[0]), z[1] * np.conj(w[1]))


def kernel_from_factors(k: int, s, t):
    """Closed form as a function of ``(s, t)``; no domain or pole checks."""
    p, q = coefficient_polys(k, s)
    sk = s**k
    return (p * t * t + q * t + sk * p) / (k * math.pi**2 * (1 - t) ** 2 * (t - sk) ** 2)


def kernel(k: int, z, w):
    """``K(z, w)`` for ``z, w`` in the domain (vectorised)."""
    k = check_k(k)
    require_inside(k, z, w)
    s, t = kernel_factors(z, w)
    sk = s**k
    if np.any(np.abs(1 - t) < SINGULAR_EPS) or np.any(np.abs(t - sk) < SINGULAR_EPS):
        raise SingularKernelError("kernel evaluated at a near-singular pair (t ~ 1 or t ~ s^k)")
    return kernel_from_factors(k, s, t)


def kernel_diagonal(k: int, z):
    """``K(z, z)``, computed in real arithmetic."""
    k = check_k(k)
    require_inside(k, z)
    s = np.abs(z[0]) ** 2
    t = np.abs(z[1]) ** 2
    sk = s**k
    if np.any(1 - t < SINGULAR_EPS) or np.any(t - sk < SINGULAR_EPS):
        raise SingularKernelError("diagonal evaluated too close to the boundary")
    return kernel_from_factors(k, s, t)


def kernel_series(k: int, z, w, cap1: int, cap2: int) -> complex:
    """Truncated reproducing expansion ``sum z^b conj(w)^b / ||z^b||^2``.

    Enumerates ``b1 = 0..cap1`` and, for each, ``b2`` from the least
    admissible value up to ``cap2``.
    """
    k = check_k(k)
    require_inside(k, z, w)
    if cap1 < 0 or cap2 < 0:
        raise ValueError("caps must be nonnegative")
    basis = basis_exponents(k, cap1, cap2)
    b1 = np.array([b.beta1 for b in basis])
    b2 = np.array([b.beta2 for b in basis])
    inv_norm = np.array([1.0 / monomial_norm_sq(k, b) for b in basis])
    s = complex(z[0] * np.conj(w[0]))
    t = complex(z[1] * np.conj(w[1]))
    terms = s**b1 * t ** b2.astype(float) * inv_norm
    # fixed summation order: b1 outer, b2 inner, smallest terms added last
    return complex(np.sum(terms))


def diagonal_bound_constants(k: int) -> DiagonalBoundConstants:
    """Explicit envelope constants.

    Lower: ``p_k >= 0`` and ``q_k >= 1`` on ``[0, 1)``.  Upper: both are
    increasing there and ``s^k < t < 1`` on the diagonal, so the numerator is
    at most ``(2 p_k(1) + q_k(1)) t``.
    """
    k = check_k(k)
    p1, q1 = coefficient_polys(k, 1.0)
    scale = k * math.pi**2
    return DiagonalBoundConstants(1.0 / scale, float(2 * p1 + q1) / scale)


def envelope(k: int, z):
    """``|z2|^2 / ((1 - |z2|^2)^2 (|z2|^2 - |z1|^{2k})^2)``."""
    t = np.abs(z[1]) ** 2
    sig = np.abs(z[0]) ** (2 * k)
    return t / ((1 - t) ** 2 * (t - sig) ** 2)


def diagonal_bounds(k: int, z):
    """``(lo, hi)`` with ``lo <= K(z, z) <= hi``."""
    k = check_k(k)
    require_inside(k, z)
    c = diagonal_bound_constants(k)
    e = envelope(k, z)
    return c.c_lo * e, c.c_hi * e


def offdiagonal_envelope(k: int, z, w):
    """``c_hi |t| / (|1 - t|^2 |t - s^k|^2)``, an upper bound for ``|K(z, w)|``."""
    s, t = kernel_factors(z, w)
    c = diagonal_bound_constants(k)
    return c.c_hi * np.abs(t) / (np.abs(1 - t) ** 2 * np.abs(t - s**k) ** 2)


__all__ = [
    "DiagonalBoundConstants",
    "DomainError",
    "KernelFactors",
    "SingularKernelError",
    "coefficient_polys",
    "diagonal_bound_constants",
    "diagonal_bounds",
    "envelope",
    "kernel",
    "kernel_diagonal",
    "kernel_factors",
    "kernel_from_factors",
    "kernel_series",
    "offdiagonal_envelope",
]
