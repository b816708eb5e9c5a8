"""Deterministic graded quadrature over ``Omega_k`` and the unit disk.

Radial integrals use the parametrisation ``r1 = r2^{1/k} * sigma`` of
``U = {(r1, r2): r1^k < r2 < 1}``, so both radial axes run over ``(0, 1)``.
Each axis carries a composite Gauss-Legendre rule on geometric shells
graded toward every segment end.  The contribution beyond the innermost
shell at an end is extrapolated from the ratio of the last two shell sums:
for an integrand behaving like ``x^e`` at the end, successive shell sums
shrink by ``ratio^{-(e + 1)}``, so a ratio that no longer shrinks marks a
non-integrable end.

Angular integrals use the uniform trapezoid rule, or, when a ``focus`` point
is given, graded rules concentrated where ``K(focus, .)`` peaks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .domain import check_k

# Shell sums decaying slower than this are treated as non-integrable.
DIVERGENCE_RATIO = 0.97
# Kernel peaks at least this wide (in radians) get a uniform angular grid.
WIDE_PEAK = 0.1
PEAK_RESOLUTION = 0.6
_CHUNK = 400_000


@dataclass(frozen=True)
class QuadSpec:
    """Refinement parameters shared by every integral.

    ``radial_nodes`` Gauss points per shell (also per graded angular cell),
    ``angular_nodes`` trapezoid points per angle for unfocused integrals,
    ``grading`` the geometric ratio between neighbouring shells and
    ``depth`` the number of shells toward each segment end.  Level ``l`` of
    ``refine_levels`` scales nodes and depth by ``1 + l/2``.
    """

    radial_nodes: int = 8
    angular_nodes: int = 32
    grading: float = 2.0
    depth: int = 20
    refine_levels: int = 2
    rel_tol: float = 1e-6

    def __post_init__(self):
        if self.radial_nodes < 4 or self.angular_nodes < 4:
            raise ValueError("radialNodes and angularNodes must be >= 4")
        if self.grading <= 1.0:
            raise ValueError("grading ratio must exceed 1")
        if self.depth < 2 or self.refine_levels < 1 or self.rel_tol <= 0:
            raise ValueError("invalid QuadSpec")

    def level(self, lev: int) -> "QuadSpec":
        f = 1.0 + 0.5 * lev
        return replace(
            self,
            radial_nodes=int(math.ceil(self.radial_nodes * f)),
            angular_nodes=int(math.ceil(self.angular_nodes * f)),
            depth=int(math.ceil(self.depth * f)),
        )


@dataclass
class IntegralResult:
    value: complex
    error_estimate: float
    converged: bool
    divergent: bool
    levels: list = field(default_factory=list)
    nodes: int = 0

    @property
    def real(self) -> float:
        return float(np.real(self.value))

    def as_dict(self) -> dict:
        v = self.value
        return {
            "value": _jsonable(v),
            "error_estimate": float(self.error_estimate),
            "converged": bool(self.converged),
            "divergent": bool(self.divergent),
            "refinements": [_jsonable(x) for x in self.levels],
            "nodes": int(self.nodes),
        }


def _jsonable(v):
    v = np.asarray(v)
    if v.ndim:
        return [_jsonable(x) for x in v]
    v = v[()]
    if np.iscomplexobj(v):
        if v.imag == 0:
            return float(v.real)
        return {"re": float(v.real), "im": float(v.imag)}
    return float(v)


# --------------------------------------------------------------------------
# one-dimensional rules


@lru_cache(maxsize=None)
def _leggauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(n: int, a: float, b: float):
    """``n``-point Gauss-Legendre nodes and weights on ``[a, b]``."""
    x, w = _leggauss(n)
    h = 0.5 * (b - a)
    return a + h * (x + 1.0), h * w


@dataclass
class Rule1D:
    """Composite rule with shell labels; ``ends[e]`` lists the labels of the
    shells approaching end ``e``, outermost first."""

    x: np.ndarray
    w: np.ndarray
    label: np.ndarray
    ends: list
    nlabels: int

    @property
    def size(self) -> int:
        return self.x.size


def graded_rule(n: int, depth: int, ratio: float, breaks: Sequence[float] = (), lo=0.0, hi=1.0) -> Rule1D:
    """Rule on ``[lo, hi]`` split at ``breaks``, graded toward every segment end."""
    pts = [lo] + sorted(b for b in breaks if lo < b < hi) + [hi]
    xs, ws, labs, ends = [], [], [], []
    nl = 0
    for a, b in zip(pts[:-1], pts[1:]):
        half = 0.5 * (b - a)
        for side in (0, 1):
            shell_labels = []
            for j in range(depth):
                outer = half * ratio ** (-j)
                inner = half * ratio ** (-j - 1)
                if side == 0:
                    x, w = gauss_legendre(n, a + inner, a + outer)
                else:
                    x, w = gauss_legendre(n, b - outer, b - inner)
                xs.append(x)
                ws.append(w)
                labs.append(np.full(n, nl))
                shell_labels.append(nl)
                nl += 1
            ends.append(shell_labels)
    return Rule1D(np.concatenate(xs), np.concatenate(ws), np.concatenate(labs), ends, nl)


def periodic_graded_rule(n: int, width: float, ratio: float, period: float = 2 * math.pi, copies: int = 1):
    """Rule on one period, graded toward ``copies`` equally spaced peaks at
    ``0, period/copies, ...``; cells shrink geometrically to ``width / 4``."""
    h = 0.5 * period / copies
    width = max(width, 1e-14)
    nshell = max(1, int(math.ceil(math.log(4.0 * h / width) / math.log(ratio))))
    xs, ws = [], []
    for j in range(nshell):
        outer = h * ratio ** (-j)
        inner = h * ratio ** (-j - 1)
        for a, b in ((inner, outer), (-outer, -inner)):
            x, w = gauss_legendre(n, a, b)
            xs.append(x)
            ws.append(w)
    c = h * ratio ** (-nshell)
    x, w = gauss_legendre(n, -c, c)
    xs.append(x)
    ws.append(w)
    x0 = np.concatenate(xs)
    w0 = np.concatenate(ws)
    shifts = np.arange(copies) * (period / copies)
    return (x0[None, :] + shifts[:, None]).ravel(), np.tile(w0, copies)


def trapezoid_rule(m: int, period: float = 2 * math.pi):
    return np.arange(m) * (period / m), np.full(m, period / m)


# --------------------------------------------------------------------------
# tail extrapolation and divergence


def _end_tails(shell_sums: np.ndarray, rule: Rule1D, total_scale: float):
    """Extrapolated tails beyond every end, and a divergence flag.

    ``shell_sums`` has shape ``(nlabels, ...)``.
    """
    tail = np.zeros(shell_sums.shape[1:], dtype=shell_sums.dtype)
    divergent = False
    ratios = []
    for labels in rule.ends:
        last = shell_sums[labels[-1]]
        prev = shell_sums[labels[-2]]
        a_last = float(np.max(np.abs(last)))
        a_prev = float(np.max(np.abs(prev)))
        if a_last == 0.0 or a_last <= 1e-13 * total_scale:
            ratios.append(0.0)
            continue
        rho = a_last / a_prev if a_prev > 0 else math.inf
        ratios.append(rho)
        if rho >= DIVERGENCE_RATIO:
            divergent = True
            continue
        tail = tail + last * (rho / (1.0 - rho))
    return tail, divergent, ratios


def _combine(grid_values: np.ndarray, ra: Rule1D, rb: Rule1D):
    """Integrate ``grid_values[i, j, ...]`` on the tensor rule ``ra x rb``."""
    rows = np.tensordot(ra.w, grid_values, axes=(0, 0))  # (nb, ...)
    cols = np.tensordot(rb.w, grid_values, axes=(0, 1))  # (na, ...)
    base = np.tensordot(rb.w, rows, axes=(0, 0))
    shape = grid_values.shape[2:]
    sa = np.zeros((ra.nlabels,) + shape, dtype=grid_values.dtype)
    np.add.at(sa, ra.label, ra.w.reshape((-1,) + (1,) * len(shape)) * cols)
    sb = np.zeros((rb.nlabels,) + shape, dtype=grid_values.dtype)
    np.add.at(sb, rb.label, rb.w.reshape((-1,) + (1,) * len(shape)) * rows)
    scale = float(np.max(np.abs(base))) if np.size(base) else 0.0
    ta, da, qa = _end_tails(sa, ra, scale)
    tb, db, qb = _end_tails(sb, rb, scale)
    return base + ta + tb, (da or db), qa + qb


def _refine(evaluate: Callable[[QuadSpec], tuple], spec: QuadSpec) -> IntegralResult:
    vals, divs, nodes = [], [], 0
    for lev in range(spec.refine_levels):
        v, d, nn = evaluate(spec.level(lev))
        vals.append(v)
        divs.append(d)
        nodes = nn
    value = vals[-1]
    mag = float(np.max(np.abs(value))) if np.size(value) else 0.0
    if len(vals) > 1:
        err = float(np.max(np.abs(np.asarray(vals[-1]) - np.asarray(vals[-2]))))
        prev_mag = float(np.max(np.abs(vals[-2])))
        grew = prev_mag > 0 and mag > 10.0 * prev_mag
    else:
        err, grew = 0.0, False
    divergent = divs[-1] or grew or not np.all(np.isfinite(value))
    converged = (not divergent) and err <= spec.rel_tol * max(mag, 1e-300)
    if mag == 0.0 and err == 0.0 and not divergent:
        converged = True
    return IntegralResult(value, err, converged, divergent, vals, nodes)


# --------------------------------------------------------------------------
# integrals over Omega_k


def _radial_rules(s: QuadSpec, r2_breaks=()):
    r2 = graded_rule(s.radial_nodes, s.depth, s.grading, r2_breaks)
    sg = graded_rule(s.radial_nodes, s.depth, s.grading)
    return r2, sg


def integrate_radial(k: int, phi: Callable, spec: QuadSpec | None = None, r2_breaks=()) -> IntegralResult:
    """``int_U phi(r1, r2) dr1 dr2``.

    ``phi`` is called on broadcast 2-d arrays and may append trailing axes
    for vector-valued integrands.
    """
    k = check_k(k)
    spec = spec or QuadSpec()

    def evaluate(s: QuadSpec):
        r2r, sgr = _radial_rules(s, r2_breaks)
        r2 = r2r.x[:, None]
        root = r2 ** (1.0 / k)
        r1 = root * sgr.x[None, :]
        vals = np.asarray(phi(r1, r2))
        extra = vals.shape[2:] if vals.ndim > 2 else ()
        vals = np.broadcast_to(vals, r1.shape + extra).astype(np.result_type(vals, float))
        vals = vals * root.reshape(root.shape + (1,) * len(extra))
        v, d, _ = _combine(vals, r2r, sgr)
        return v[()] if np.ndim(v) == 0 else v, d, r2r.size * sgr.size

    return _refine(evaluate, spec)


def _peak_rule(s: QuadSpec, width: float, copies: int):
    if width >= WIDE_PEAK:
        # smooth in this angle: the trapezoid rule converges geometrically
        return trapezoid_rule(math.ceil(s.angular_nodes * max(1.0, PEAK_RESOLUTION / width)))
    return periodic_graded_rule(s.radial_nodes, width, s.grading, copies=copies)


def angular_grid(k: int, s: QuadSpec, focus=None):
    """Angle pairs ``(theta1, theta2)`` and weights for one refinement level."""
    if focus is None:
        t1, w1 = trapezoid_rule(s.angular_nodes)
        t2, w2 = trapezoid_rule(s.angular_nodes)
        th1 = np.repeat(t1, t2.size)
        th2 = np.tile(t2, t1.size)
        return th1, th2, np.repeat(w1, t2.size) * np.tile(w2, t1.size)
    z1, z2 = complex(focus[0]), complex(focus[1])
    a1, a2 = abs(z1), abs(z2)
    # peak widths of K(focus, .) in the relative angles
    width2 = max(1.0 - a2, 1e-12)
    width1 = max((1.0 - a1**k / a2) / k, 1e-12) if a1 else math.inf
    tau1, wt1 = _peak_rule(s, width1, k)
    tau2, wt2 = _peak_rule(s, width2, 1)
    # the theta1 peaks sit at k*tau1 = tau2 (mod 2 pi); shear so they stay put
    T1 = tau1[:, None] + tau2[None, :] / k
    T2 = np.broadcast_to(tau2[None, :], T1.shape)
    th1 = (np.angle(z1) - T1).ravel() if a1 else (-T1).ravel()
    th2 = (np.angle(z2) - T2).ravel()
    return th1, th2, (wt1[:, None] * wt2[None, :]).ravel()


def angular_integrator(F: Callable, k: int, focus=None):
    """Build ``(spec, r1, r2) -> angular integral`` for a generic integrand."""

    def angular(s: QuadSpec, r1: np.ndarray, r2: np.ndarray):
        th1, th2, wa = angular_grid(k, s, focus)
        e1 = np.exp(1j * th1)
        e2 = np.exp(1j * th2)
        out = None
        step = max(1, _CHUNK // wa.size)
        for i in range(0, r1.size, step):
            w1 = r1[i:i + step, None] * e1[None, :]
            w2 = r2[i:i + step, None] * e2[None, :]
            vals = np.asarray(F(w1, w2))
            vals = np.broadcast_to(vals, w1.shape + vals.shape[2:]) if vals.ndim >= 2 else np.broadcast_to(vals, w1.shape)
            part = np.tensordot(vals, wa, axes=(1, 0)) if vals.ndim == 2 else np.einsum("ca...,a->c...", vals, wa)
            if out is None:
                out = np.empty((r1.size,) + part.shape[1:], dtype=complex)
            out[i:i + step] = part
        return out

    return angular


def integrate_with_angular(k: int, angular: Callable, spec: QuadSpec, r2_breaks=()) -> IntegralResult:
    """Integrate over ``Omega_k`` given the angular integral at radial nodes."""
    k = check_k(k)

    def evaluate(s: QuadSpec):
        r2r, sgr = _radial_rules(s, r2_breaks)
        R2 = np.repeat(r2r.x, sgr.size)
        root = R2 ** (1.0 / k)
        R1 = root * np.tile(sgr.x, r2r.size)
        ang = angular(s, R1, R2)
        jac = (R1 * R2 * root).reshape((-1,) + (1,) * (ang.ndim - 1))
        vals = (ang * jac).reshape((r2r.size, sgr.size) + ang.shape[1:])
        v, d, _ = _combine(vals, r2r, sgr)
        return v[()] if np.ndim(v) == 0 else v, d, R1.size

    return _refine(evaluate, spec)


def integrate_full(k: int, F: Callable, spec: QuadSpec | None = None, focus=None, r2_breaks=()) -> IntegralResult:
    """``int_{Omega_k} F(w) dV(w)``.

    ``F(w1, w2)`` receives 2-d complex arrays (radial chunk x angles) and may
    return extra trailing axes for vector-valued integrands.  ``focus`` is a
    point where the integrand concentrates, typically the first argument of
    a kernel factor ``K(focus, w)``.
    """
    spec = spec or QuadSpec()
    return integrate_with_angular(k, angular_integrator(F, k, focus), spec, r2_breaks)


def lp_norm(k: int, f: Callable, p: float, spec: QuadSpec | None = None, focus=None, r2_breaks=()) -> IntegralResult:
    """``||f||_{L^p(Omega_k)}``; error and flags refer to the norm itself."""
    if p <= 0:
        raise ValueError("p must be positive")
    res = integrate_full(k, lambda w1, w2: np.abs(f(w1, w2)) ** p, spec, focus, r2_breaks)
    val = max(float(np.real(res.value)), 0.0)
    norm = val ** (1.0 / p)
    err = (norm / (p * val)) * res.error_estimate if val > 0 else res.error_estimate ** (1.0 / p)
    levels = [max(float(np.real(x)), 0.0) ** (1.0 / p) for x in res.levels]
    return IntegralResult(norm, err, res.converged, res.divergent, levels, res.nodes)


# --------------------------------------------------------------------------
# the unit disk


def integrate_disk(g: Callable, spec: QuadSpec | None = None, focus_angle: float | None = None, width: float = 1.0) -> IntegralResult:
    """``int_D g(u) dV(u)`` in polar coordinates, graded toward ``|u| = 0``
    and ``|u| = 1``; angularly graded toward ``focus_angle`` when given."""
    spec = spec or QuadSpec()

    def evaluate(s: QuadSpec):
        rr = graded_rule(s.radial_nodes, s.depth, s.grading)
        if focus_angle is None:
            th, wt = trapezoid_rule(s.angular_nodes)
        else:
            th, wt = periodic_graded_rule(s.radial_nodes, width, s.grading)
            th = th + focus_angle
        u = rr.x[:, None] * np.exp(1j * th)[None, :]
        vals = np.asarray(g(u)) * rr.x[:, None]
        ang = vals @ wt
        one = Rule1D(np.zeros(1), np.ones(1), np.zeros(1, int), [], 1)
        v, d, _ = _combine(ang[:, None], rr, one)
        return v[()] if np.ndim(v) == 0 else v, d, u.size

    return _refine(evaluate, spec)


__all__ = [
    "DIVERGENCE_RATIO",
    "IntegralResult",
    "QuadSpec",
    "Rule1D",
    "angular_grid",
    "angular_integrator",
    "gauss_legendre",
    "graded_rule",
    "integrate_disk",
    "integrate_full",
    "integrate_radial",
    "integrate_with_angular",
    "lp_norm",
    "periodic_graded_rule",
    "trapezoid_rule",
]
