"""Bergman-Toeplitz operators ``T f(z) = int K(z, w) K(w, w)^{-alpha} f(w) dV(w)``.

``alpha = 0`` is the Bergman projection.  Inputs are either arbitrary
callables ``f(w1, w2)`` or :class:`LaurentPoly` objects, which carry their
monomial structure and take a fast path: the kernel is reduced to a few
angular Fourier modes on each radial node.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import zeta

from . import _fastkernel
from .domain import basis_exponents, check_k, monomial_norm_sq, require_inside
from .kernel import kernel_from_factors
from .quadrature import (
    IntegralResult,
    QuadSpec,
    angular_grid,
    angular_integrator,
    integrate_radial,
    integrate_with_angular,
)

DEFAULT_SPEC = QuadSpec(radial_nodes=4, angular_nodes=32, depth=8, rel_tol=1e-3)


@dataclass(frozen=True)
class Monomial:
    """``coeff * w1^a1 w2^a2 conj(w1)^b1 conj(w2)^b2``."""

    coeff: complex
    a: tuple = (0, 0)
    b: tuple = (0, 0)

    @property
    def mode(self) -> tuple:
        return (self.a[0] - self.b[0], self.a[1] - self.b[1])


@dataclass(frozen=True)
class LaurentPoly:
    """``g(|w1|, |w2|) * sum(monomials)``; ``g`` defaults to 1."""

    terms: tuple
    radial: Callable | None = field(default=None, compare=False)

    def __call__(self, w1, w2):
        w1 = np.asarray(w1)
        w2 = np.asarray(w2)
        out = np.zeros(np.broadcast(w1, w2).shape, dtype=complex)
        c1, c2 = np.conj(w1), np.conj(w2)
        for m in self.terms:
            out = out + m.coeff * w1 ** m.a[0] * w2 ** float(m.a[1]) * c1 ** m.b[0] * c2 ** float(m.b[1])
        if self.radial is not None:
            out = out * self.radial(np.abs(w1), np.abs(w2))
        return out

    def radial_factor(self, r1, r2):
        return 1.0 if self.radial is None else self.radial(r1, r2)


def monomial(beta, coeff=1.0) -> LaurentPoly:
    """Holomorphic monomial ``coeff * z^beta``."""
    return LaurentPoly((Monomial(coeff, (int(beta[0]), int(beta[1])), (0, 0)),))


def random_polynomial(seed: int, degree: int = 2, conj_degree: int = 1) -> LaurentPoly:
    """Seeded polynomial in ``w`` and ``conj(w)`` with complex Gaussian coefficients."""
    rng = np.random.default_rng(seed)
    terms = []
    for a1 in range(degree + 1):
        for a2 in range(degree + 1 - a1):
            for b1 in range(conj_degree + 1):
                for b2 in range(conj_degree + 1 - b1):
                    c = complex(rng.normal(), rng.normal())
                    terms.append(Monomial(c, (a1, a2), (b1, b2)))
    return LaurentPoly(tuple(terms))


def diagonal_from_radii(k: int, r1, r2):
    """``K(w, w)`` for ``|w1| = r1, |w2| = r2``."""
    return np.real(kernel_from_factors(k, np.asarray(r1) ** 2 + 0j, np.asarray(r2) ** 2 + 0j))


def symbol(k: int, alpha: float, r1, r2):
    """``K(w, w)^{-alpha}`` on radial arrays."""
    if alpha == 0:
        return np.ones(np.broadcast(r1, r2).shape)
    return diagonal_from_radii(k, r1, r2) ** (-alpha)


# --------------------------------------------------------------------------
# application by direct quadrature


def _poly_angular(k: int, z, alpha: float, polys: Sequence[LaurentPoly], focus):
    modes = sorted({m.mode for f in polys for m in f.terms})
    index = {m: i for i, m in enumerate(modes)}
    marr = np.array(modes, dtype=float)

    def angular(s: QuadSpec, r1, r2):
        th1, th2, wa = angular_grid(k, s, focus)
        e = wa[:, None] * np.exp(1j * (np.outer(th1, marr[:, 0]) + np.outer(th2, marr[:, 1])))
        four = _fastkernel.kernel_fourier(
            k, complex(z[0]), complex(z[1]), r1, r2, np.exp(1j * th1), np.exp(1j * th2), e
        )
        psi = symbol(k, alpha, r1, r2)
        out = np.zeros((r1.size, len(polys)), dtype=complex)
        for i, f in enumerate(polys):
            acc = np.zeros(r1.size, dtype=complex)
            for m in f.terms:
                acc += m.coeff * r1 ** (m.a[0] + m.b[0]) * r2 ** float(m.a[1] + m.b[1]) * four[:, index[m.mode]]
            out[:, i] = acc * psi * f.radial_factor(r1, r2)
        return out

    return angular


def apply_toeplitz(k: int, alpha: float, f, z, spec: QuadSpec | None = None, r2_breaks=()) -> IntegralResult:
    """``T_{K^{-alpha}} f (z)`` by quadrature against the closed-form kernel.

    ``f`` may be a callable, a :class:`LaurentPoly`, or a list of
    LaurentPoly (vector result).
    """
    k = check_k(k)
    require_inside(k, z)
    spec = spec or DEFAULT_SPEC
    many = isinstance(f, (list, tuple))
    if many or isinstance(f, LaurentPoly):
        polys = list(f) if many else [f]
        res = integrate_with_angular(k, _poly_angular(k, z, alpha, polys, z), spec, r2_breaks)
        if not many:
            res.value = res.value[0]
            res.levels = [v[0] for v in res.levels]
        return res

    def F(w1, w2):
        kv = kernel_from_factors(k, z[0] * np.conj(w1), z[1] * np.conj(w2))
        return kv * symbol(k, alpha, np.abs(w1), np.abs(w2)) * f(w1, w2)

    return integrate_with_angular(k, angular_integrator(F, k, z), spec, r2_breaks)


# --------------------------------------------------------------------------
# the basis-projection oracle


def basis_coefficients(k: int, alpha: float, f: LaurentPoly, basis, spec: QuadSpec | None = None) -> IntegralResult:
    """``<K^{-alpha} f, z^beta>`` for every ``beta`` in ``basis``.

    Angular integrals vanish unless the monomial's frequency equals ``beta``
    and are ``4 pi^2`` otherwise; the radial parts are integrated numerically.
    """
    spec = spec or DEFAULT_SPEC
    basis = list(basis)
    pairs = [(i, m) for i, beta in enumerate(basis) for m in f.terms if m.mode == tuple(beta)]

    def phi(r1, r2):
        r1, r2 = np.broadcast_arrays(r1, r2)
        out = np.zeros(r1.shape + (len(basis),), dtype=complex)
        if not pairs:
            return out
        base = 4 * math.pi**2 * symbol(k, alpha, r1, r2) * f.radial_factor(r1, r2) * r1 * r2
        for i, m in pairs:
            b1, b2 = basis[i]
            out[..., i] += m.coeff * base * r1 ** (m.a[0] + m.b[0] + b1) * r2 ** float(m.a[1] + m.b[1] + b2)
        return out

    return integrate_radial(k, phi, spec)


def poly_l2_norm_sq(k: int, f: LaurentPoly, spec: QuadSpec | None = None) -> IntegralResult:
    """``||f||_2^2``: only products of terms sharing an angular mode survive,
    each contributing ``4 pi^2`` times a radial integral."""
    spec = spec or DEFAULT_SPEC
    pairs = [(m, n) for m in f.terms for n in f.terms if m.mode == n.mode]

    def phi(r1, r2):
        r1, r2 = np.broadcast_arrays(r1, r2)
        acc = np.zeros(r1.shape, dtype=complex)
        for m, n in pairs:
            e1 = m.a[0] + m.b[0] + n.a[0] + n.b[0]
            e2 = m.a[1] + m.b[1] + n.a[1] + n.b[1]
            acc += m.coeff * np.conj(n.coeff) * r1**e1 * r2 ** float(e2)
        return 4 * math.pi**2 * np.abs(f.radial_factor(r1, r2)) ** 2 * acc * r1 * r2

    return integrate_radial(k, phi, spec)


def project_basis_oracle(k: int, alpha: float, f: LaurentPoly, z, caps=(8, 8), spec: QuadSpec | None = None) -> IntegralResult:
    """``sum_{beta <= caps} <K^{-alpha} f, z^beta> z^beta / ||z^beta||^2``.

    Independent of the closed-form kernel: only the monomial basis, its
    closed-form norms and radial quadrature are used.
    """
    k = check_k(k)
    require_inside(k, z)
    basis = basis_exponents(k, caps[0], caps[1])
    coef = basis_coefficients(k, alpha, f, basis, spec)
    zb = np.array([z[0] ** b1 * complex(z[1]) ** b2 / monomial_norm_sq(k, (b1, b2)) for b1, b2 in basis])
    value = complex(np.sum(coef.value * zb))
    levels = [complex(np.sum(np.asarray(v) * zb)) for v in coef.levels]
    err = abs(levels[-1] - levels[-2]) if len(levels) > 1 else 0.0
    return IntegralResult(value, err, coef.converged, coef.divergent, levels, coef.nodes)


# --------------------------------------------------------------------------
# radial inputs g(|w2|) conj(w2)


def radial_toeplitz_constant(k: int, alpha: float, g: Callable, spec: QuadSpec | None = None, r2_breaks=()) -> IntegralResult:
    """``c`` with ``T(g(|w2|) conj(w2)) = c / z2``.

    Only the ``(0, -1)`` basis coefficient survives, giving
    ``c = (1/(k pi^2)) int K^{-alpha}(w, w) g(|w2|) dV(w)``.
    """
    k = check_k(k)
    spec = spec or DEFAULT_SPEC
    scale = 4.0 / k

    def phi(r1, r2):
        return scale * symbol(k, alpha, r1, r2) * g(r2) * r1 * r2

    return integrate_radial(k, phi, spec, r2_breaks)


def inv_z2_norm_q(k: int, q: float) -> float:
    """``||1/z2||_{L^q}``; infinite for ``q >= 2 + 2/k``."""
    denom = 2 * k + 2 - k * q
    if denom <= 0:
        return math.inf
    return (2 * math.pi**2 * k / denom) ** (1.0 / q)


@dataclass(frozen=True)
class CounterexampleSeq:
    """``f_j = h(|z2|) conj(z2)`` on ``a_{j+1} < |z2| < 1`` with ``a_l = l^{-l}``
    and ``h(x) = x^{1/l - 1 - (2 + 2/k)/p}`` on ``(a_{l+1}, a_l]``."""

    k: int
    p: float
    j: int

    @property
    def breakpoints(self) -> list:
        return [float(l) ** (-l) for l in range(1, self.j + 2)]

    @property
    def exponents(self) -> list:
        return [1.0 / l - 1.0 - (2.0 + 2.0 / self.k) / self.p for l in range(1, self.j + 1)]

    def h(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        a = self.breakpoints
        for l, e in enumerate(self.exponents, start=1):
            piece = (x > a[l]) & (x <= a[l - 1])
            out = np.where(piece, np.where(piece, x, 1.0) ** e, out)
        return out

    def __call__(self, w1, w2):
        return self.h(np.abs(w2)) * np.conj(w2)

    def as_laurent(self) -> LaurentPoly:
        return LaurentPoly((Monomial(1.0, (0, 0), (0, 1)),), radial=lambda r1, r2: self.h(r2))

    def norm_p_pow(self) -> float:
        """``||f_j||_p^p`` in closed form, piece by piece."""
        p = self.p
        tot = 0.0
        for l in range(1, self.j + 1):
            tot += l * (l ** (-p) - (l + 1.0) ** (-(1.0 + 1.0 / l) * p))
        return 2 * math.pi**2 / p * tot


def build_counterexample(k: int, p: float, j: int) -> CounterexampleSeq:
    k = check_k(k)
    if not p > 1:
        raise ValueError("p must exceed 1")
    if j < 1:
        raise ValueError("j must be >= 1")
    return CounterexampleSeq(k, float(p), int(j))


def counterexample_constant_alpha0(seq: CounterexampleSeq) -> float:
    """Closed form of ``c_j`` at ``alpha = 0``: ``(2/k) int h(r) r^{1+2/k} dr``."""
    k, p = seq.k, seq.p
    a = seq.breakpoints
    tot = 0.0
    for l in range(1, seq.j + 1):
        e = 1.0 / l + 2.0 / k - (2.0 + 2.0 / k) / p
        if abs(e + 1.0) < 1e-14:
            tot += math.log(a[l - 1] / a[l])
        else:
            tot += (a[l - 1] ** (e + 1) - a[l] ** (e + 1)) / (e + 1)
    return 2.0 / k * tot


def counterexample_growth(k: int, p: float, q: float, alpha: float, j_max: int = 5, spec: QuadSpec | None = None) -> dict:
    """Ratios ``||T f_j||_q / ||f_j||_p`` along the counterexample sequence."""
    k = check_k(k)
    if not 1 < p <= q:
        raise ValueError("need 1 < p <= q")
    if j_max > 6:
        raise ValueError("j_max <= 6: deeper breakpoints are below quadrature resolution")
    # the level-difference error estimate overstates the true error (about
    # 1e-10 against the alpha = 0 closed form) by orders of magnitude
    spec = spec or QuadSpec(radial_nodes=8, depth=12, rel_tol=1e-5)
    inv_norm = inv_z2_norm_q(k, q)
    rows = []
    for j in range(1, j_max + 1):
        seq = build_counterexample(k, p, j)
        fp = seq.norm_p_pow()
        cres = radial_toeplitz_constant(k, alpha, seq.h, spec, r2_breaks=seq.breakpoints)
        c = float(np.real(cres.value))
        tq = abs(c) * inv_norm
        rows.append(
            {
                "j": j,
                "norm_f_p_pow": fp,
                "norm_f_p": fp ** (1.0 / p),
                "c_j": c,
                "c_j_error": cres.error_estimate,
                "c_j_converged": cres.converged,
                "norm_Tf_q": tq,
                "ratio": tq / fp ** (1.0 / p) if math.isfinite(tq) else math.inf,
            }
        )
    ratios = [r["ratio"] for r in rows]
    c0 = float(zeta(p, 1))
    finite = all(math.isfinite(r) for r in ratios)
    return {
        "k": k,
        "p": p,
        "q": q,
        "alpha": alpha,
        "regime": "case-i (1/z2 not in L^q)" if not math.isfinite(inv_norm) else "finite",
        "inv_z2_norm_q": inv_norm,
        "c0": c0,
        "rows": rows,
        "norm_below_c0": [r["norm_f_p_pow"] < c0 for r in rows],
        "ratio_strictly_increasing": finite and all(b > a for a, b in zip(ratios, ratios[1:])),
        "ratio_spread": (max(ratios) / min(ratios)) if finite else math.inf,
    }


__all__ = [
    "CounterexampleSeq",
    "LaurentPoly",
    "Monomial",
    "apply_toeplitz",
    "basis_coefficients",
    "build_counterexample",
    "counterexample_constant_alpha0",
    "counterexample_growth",
    "diagonal_from_radii",
    "inv_z2_norm_q",
    "monomial",
    "poly_l2_norm_sq",
    "project_basis_oracle",
    "radial_toeplitz_constant",
    "random_polynomial",
    "symbol",
]
