"""Boundedness phase diagram of ``T_{K^{-alpha}}: L^p -> A^q`` on the fat
Hartogs triangle.

With ``x = 1/p`` and ``y = 1/q`` (so ``0 < y <= x < 1``) the cases are

* I:   ``y <= k/(2k+2)``; no ``alpha`` gives a bounded operator.
* II:  ``k/(2k+2) < y < (k+2)/(2k) - x/k``; bounded iff ``alpha >= x - y``.
* III: ``y >= (k+2)/(2k) - x/k``; bounded iff ``alpha > x - ((k+2)/(2k) - x/k)``.

Rational inputs are classified exactly.  Floats are compared with a
tolerance of ``TIE_TOL`` and ties go to the non-strict side of each
inequality as written above (toward case I at the first boundary, toward
case III at the second).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from enum import Enum
from fractions import Fraction
from numbers import Rational

from .domain import DomainError, check_k

TIE_TOL = 1e-12


class Case(str, Enum):
    I = "I"
    II = "II"
    III = "III"


@dataclass(frozen=True)
class PhaseVerdict:
    case: Case
    alpha_threshold: Fraction | float | None
    strict: bool

    def admits(self, alpha) -> bool:
        """Whether ``T_{K^{-alpha}}`` is bounded for this ``(k, p, q)``."""
        if self.case is Case.I:
            return False
        return alpha > self.alpha_threshold if self.strict else alpha >= self.alpha_threshold

    def as_dict(self) -> dict:
        thr = self.alpha_threshold
        return {
            "case": self.case.value,
            "alpha_threshold": None if thr is None else format_number(thr),
            "strict": self.strict,
        }


def parse_number(value) -> Fraction | float:
    """Exact ``Fraction`` for integers, fractions and terminating decimal
    strings such as ``"1.2"`` or ``"4/3"``; ``float`` otherwise."""
    if type(value) is Fraction:
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        s = value.strip()
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError):
            pass
        try:
            d = Decimal(s)
        except InvalidOperation:
            raise ValueError(f"not a number: {value!r}") from None
        if not d.is_finite():
            raise ValueError(f"not a finite number: {value!r}")
        return Fraction(d)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError("non-finite input")
        return value
    raise TypeError(f"unsupported number type {type(value).__name__}")


def format_number(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return repr(float(x))


def _exact(*xs) -> bool:
    return all(isinstance(x, Fraction) for x in xs)


def _ge(a, b, exact: bool) -> bool:
    return a >= b if exact else a >= b - TIE_TOL


def validate(p, q) -> tuple:
    p = parse_number(p)
    q = parse_number(q)
    if not p > 1:
        raise DomainError(f"p must exceed 1, got {format_number(p)}")
    if q < p:
        raise DomainError(f"q must be >= p, got p={format_number(p)}, q={format_number(q)}")
    return p, q


def upper_edge(k: int, inv_p):
    """``(k+2)/(2k) - inv_p/k``, the case II / III boundary in ``1/q``."""
    if isinstance(inv_p, Fraction):
        return Fraction(k + 2, 2 * k) - inv_p / k
    return (k + 2) / (2 * k) - inv_p / k


def classify(k: int, p, q) -> PhaseVerdict:
    """Case and ``alpha`` threshold for ``L^p -> A^q`` boundedness."""
    k = check_k(k)
    p, q = validate(p, q)
    if _exact(p, q):
        return _classify_exact(k, p, q)
    x = 1.0 / float(p)
    y = 1.0 / float(q)
    if _ge(k / (2 * k + 2), y, False):
        return PhaseVerdict(Case.I, None, False)
    edge = upper_edge(k, x)
    if _ge(y, edge, False):
        return PhaseVerdict(Case.III, x - edge, True)
    return PhaseVerdict(Case.II, x - y, False)


def _classify_exact(k: int, p: Fraction, q: Fraction) -> PhaseVerdict:
    # integer cross-multiplication; with p = a/b and q = c/d,
    # 1/q <= k/(2k+2)  <=>  (2k+2) d <= k c  and
    # 1/q >= (k+2)/(2k) - 1/(kp)  <=>  2k a d >= c ((k+2) a - 2b)
    a, b = p.numerator, p.denominator
    c, d = q.numerator, q.denominator
    if (2 * k + 2) * d <= k * c:
        return PhaseVerdict(Case.I, None, False)
    if 2 * k * a * d >= c * ((k + 2) * a - 2 * b):
        # 1/p - (k+2)/(2k) + 1/(kp)
        return PhaseVerdict(Case.III, Fraction(2 * (k + 1) * b - (k + 2) * a, 2 * k * a), True)
    # 1/p - 1/q
    return PhaseVerdict(Case.II, Fraction(b * c - a * d, a * c), False)


def projection_self_bounded(k: int, p) -> bool:
    """Whether the Bergman projection is bounded on ``L^p``:
    ``(2k+2)/(k+2) < p < (2k+2)/k``."""
    k = check_k(k)
    p = parse_number(p)
    if not p > 1:
        raise DomainError("p must exceed 1")
    if isinstance(p, Fraction):
        return Fraction(2 * k + 2, k + 2) < p < Fraction(2 * k + 2, k)
    return (2 * k + 2) / (k + 2) + TIE_TOL < p < (2 * k + 2) / k - TIE_TOL


def phase_scan(k: int, grid: int) -> list[dict]:
    """Verdicts at ``1/p = i/grid, 1/q = j/grid`` for ``0 < j <= i < grid``."""
    k = check_k(k)
    if grid < 2:
        raise ValueError("grid must be >= 2")
    rows = []
    for i in range(1, grid):
        for j in range(1, i + 1):
            x, y = Fraction(i, grid), Fraction(j, grid)
            v = classify(k, 1 / x, 1 / y)
            rows.append({"inv_p": x, "inv_q": y, "case": v.case.value, "alpha_threshold": v.alpha_threshold, "strict": v.strict})
    return rows


SCAN_HEADER = ("inv_p", "inv_q", "case", "alpha_threshold", "strict")


def scan_rows_as_text(rows) -> list[list[str]]:
    """String fields for CSV output; case I rows carry ``none`` as threshold."""
    out = []
    for r in rows:
        thr = r["alpha_threshold"]
        out.append([
            format_number(r["inv_p"]),
            format_number(r["inv_q"]),
            r["case"],
            "none" if thr is None else format_number(thr),
            "true" if r["strict"] else "false",
        ])
    return out


def gamma_constraint_holds(k: int, p, q) -> bool:
    """Whether ``gamma = 2/q - 1/p`` satisfies ``gamma < (1 + 2/k)(1 - 1/p)``."""
    k = check_k(k)
    p, q = validate(p, q)
    x, y = 1 / p, 1 / q
    return 2 * y - x < (1 + Fraction(2, k)) * (1 - x) if _exact(p, q) else 2 * y - x < (1 + 2 / k) * (1 - x)


__all__ = [
    "Case",
    "PhaseVerdict",
    "SCAN_HEADER",
    "TIE_TOL",
    "classify",
    "format_number",
    "gamma_constraint_holds",
    "parse_number",
    "phase_scan",
    "projection_self_bounded",
    "scan_rows_as_text",
    "upper_edge",
]
