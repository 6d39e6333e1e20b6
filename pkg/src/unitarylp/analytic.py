"""Closed-form code-size bounds and their certificate polynomials.

Each bound is a rational function of delta squared, valid above a
threshold, obtained from an explicit low-degree certificate polynomial.
The certificates are built here with exact rational coefficients so
that the ratio value-at-identity over trivial-zonal-coefficient can be
compared to the closed form without rounding.

Closed forms evaluate exactly on Fraction inputs and in floating point
on float inputs; bound_sum / bound_product return plain floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Final, Optional

from .sympoly import CosSymPoly, m_poly
from .zonal import PRODUCT, SUM, q_polynomial, zonal_expansion

NOT_APPLICABLE: Final = None


@dataclass(frozen=True)
class AnalyticBound:
    """One closed-form bound: validity threshold plus value function."""

    kind: str
    variant: int
    n: int
    applicable_from: Fraction  # threshold on delta squared
    strict: bool  # True: valid strictly above the threshold
    value_fn: Callable

    def applicable(self, delta_sq) -> bool:
        if self.strict:
            return delta_sq > self.applicable_from
        return delta_sq >= self.applicable_from

    def value(self, delta_sq):
        return self.value_fn(delta_sq)


def _sum_bounds(n: int) -> dict[int, AnalyticBound]:
    half = Fraction(1, 2)

    def v1(d2):
        return 2 * d2 / (2 * d2 - 1)

    def v2(d2):
        return 8 * n * n * d2 / (4 * n * n * d2 - (2 * n * n - 1))

    def v3(d2):
        den = 2 * n * (2 * n - 1) * d2 - (2 * n * n - n - 2)
        if den == 0:
            return math.inf
        return 16 * n * n * d2 / den

    return {
        1: AnalyticBound(SUM, 1, n, half, True, v1),
        2: AnalyticBound(SUM, 2, n, Fraction(2 * n * n - 1, 4 * n * n), True, v2),
        3: AnalyticBound(
            SUM, 3, n, Fraction(2 * n * n - n - 2, 2 * n * (2 * n - 1)), False, v3
        ),
    }


def _product_bounds(n: int) -> dict[int, AnalyticBound]:
    half = Fraction(1, 2)

    def v1(d2):
        return 2 * d2 / (2 * d2 - 1)

    def v2(d2):
        return 8 * n * d2 / (4 * n * d2 - (2 * n - 1))

    def v3(d2):
        cube = d2 * d2 * d2
        return (8 * cube + 4 * d2 * d2 + 8 * d2) / (8 * cube - Fraction(1, 4))

    out = {1: AnalyticBound(PRODUCT, 1, n, half, True, v1)}
    if n >= 3:
        out[2] = AnalyticBound(PRODUCT, 2, n, Fraction(2 * n - 1, 4 * n), True, v2)
    if n == 2:
        out[3] = AnalyticBound(PRODUCT, 3, n, half, False, v3)
    return out


def get_bound(kind: str, variant: int, n: int) -> Optional[AnalyticBound]:
    """The bound object for (kind, variant, n), or None when the variant
    is not defined at this n."""
    if n < 2:
        raise ValueError("need n >= 2")
    if variant not in (1, 2, 3):
        raise ValueError("variant must be 1, 2 or 3")
    table = _sum_bounds(n) if kind == SUM else _product_bounds(n)
    return table.get(variant)


def _checked_delta_sq(delta) -> Fraction:
    d = Fraction(delta)
    if not 0 <= d <= 1:
        raise ValueError("delta must lie in [0, 1]")
    return d * d


def bound_sum(n: int, delta, variant: int):
    """Closed-form bound for the averaged separation, or None below the
    variant's validity threshold."""
    d2 = _checked_delta_sq(delta)
    b = get_bound(SUM, variant, n)
    if b is None or not b.applicable(d2):
        return NOT_APPLICABLE
    return float(b.value(d2))


def bound_product(n: int, delta, variant: int):
    """Closed-form bound for the geometric-mean separation, or None when
    the variant does not apply (threshold, or wrong n)."""
    d2 = _checked_delta_sq(delta)
    b = get_bound(PRODUCT, variant, n)
    if b is None or not b.applicable(d2):
        return NOT_APPLICABLE
    return float(b.value(d2))


def best_analytic(n: int, delta, kind: str):
    """Minimum over the applicable variants; None if none applies."""
    values = []
    for variant in (1, 2, 3):
        v = bound_sum(n, delta, variant) if kind == SUM else bound_product(n, delta, variant)
        if v is not None:
            values.append(v)
    return min(values) if values else NOT_APPLICABLE


def certificate_poly(kind: str, variant: int, n: int, delta) -> CosSymPoly:
    """The explicit certificate behind each closed form, with the region
    parameter substituted exactly.

    For the averaged separation the parameter is s = 1 - 2 delta^2 (the
    region is sum of y at most n*s); for the geometric mean it is
    p = 2 delta^2 (the region is product of 1-y at least p^n).
    """
    d2 = _checked_delta_sq(delta)
    b = get_bound(kind, variant, n)
    if b is None or not b.applicable(d2):
        raise ValueError(f"variant {variant} not applicable for {kind} at n={n}, delta^2={float(d2):.6g}")
    m1 = m_poly((1,), n)
    if kind == SUM:
        s = 1 - 2 * d2
        if variant == 1:
            return m1 - n * s
        if variant == 2:
            return (m1 - n * s) * (m1 + n)
        # R below is the orbit sum of (y1+1)(y2+1): pairwise products
        # completed to a symmetric polynomial.  Any positive multiple
        # yields the same bound; this normalization makes the ratio test
        # land exactly on the closed form.
        r = CosSymPoly(
            n,
            {(1, 1): 1, (1,): n - 1, (): Fraction(n * (n - 1), 2)},
        )
        return (m1 - n * s) * r
    p = 2 * d2
    if variant == 1:
        # The sketch's printed sign gives a negative trivial coefficient;
        # the working certificate bounds sum of y by n(1-p) on the region.
        return m1 + n * (p - 1)
    q2 = q_polynomial("Q2", n)
    q1 = q_polynomial("Q1", n)
    if variant == 2:
        return q2 + Fraction(n + 1, 2) * p * q1 + Fraction(n + 1, 4) * (2 * n * (p - 1) + 1)
    return q2 + (p * p / 2 + 2 * p - 1) * q1 + (p * p * p - Fraction(1, 4))


def certificate_ratio(p: CosSymPoly) -> Fraction:
    """Exact bound ratio of a certificate: value at the identity divided
    by the trivial zonal coefficient."""
    expansion = zonal_expansion(p)
    c0 = expansion.trivial_coefficient
    if c0 <= 0:
        raise ValueError(f"trivial coefficient {c0} is not positive")
    return expansion.value_at_identity / c0
