"""Exact symmetric polynomial algebra on the eigenvalue circle.

Two coordinate systems appear throughout: the cosine variables
y_j = cos(theta_j) and the eigenvalue variables x_j = exp(i theta_j).
Polynomials symmetric in the y_j are stored on the monomial-symmetric
basis m_mu(y); symmetric Laurent polynomials in the x_j are stored on
the monomial-symmetric Laurent basis m_kappa(x), one monic term per
orbit.  All coefficients are exact rationals; floats never enter the
algebra.

A Signature is a weakly decreasing tuple of n integers, possibly
negative.  It splits uniquely as kappa = lam + s*(1,...,1) with s the
last entry and lam a partition whose n-th part is zero; the generalized
Schur function s_kappa is det^s times the classical Schur polynomial
S_lam.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache
from math import comb
from typing import Iterator, Mapping

import numpy as np

from .partitions import Partition, as_partition, generate_partitions, kostka

Signature = tuple[int, ...]

Rational = int | Fraction


def as_signature(entries) -> Signature:
    t = tuple(int(e) for e in entries)
    if not t:
        raise ValueError("signature needs at least one entry")
    if any(a < b for a, b in zip(t, t[1:])):
        raise ValueError(f"signature not weakly decreasing: {t!r}")
    return t


def signature_split(kappa: Signature) -> tuple[Partition, int]:
    """Split kappa into (lam, s) with s = last entry, lam = kappa - s."""
    s = kappa[-1]
    return tuple(k - s for k in kappa[:-1]) + (0,), s


def _distinct_permutations(t: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    return iter(set(itertools.permutations(t)))


def _clean(coeffs: dict) -> dict:
    return {k: v for k, v in coeffs.items() if v != 0}


@dataclass(frozen=True)
class CosSymPoly:
    """Symmetric polynomial in y_1..y_n on the monomial-symmetric basis.

    coeffs maps partitions mu (length <= n) to rational coefficients of
    m_mu(y); the empty partition keys the constant term.
    """

    n: int
    coeffs: Mapping[Partition, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for mu, c in self.coeffs.items():
            mu = as_partition(mu)
            if len(mu) > self.n:
                raise ValueError(f"partition {mu!r} has more than {self.n} parts")
            if c != 0:
                cleaned[mu] = Fraction(c)
        object.__setattr__(self, "coeffs", cleaned)

    @property
    def degree(self) -> int:
        return max((sum(mu) for mu in self.coeffs), default=0)

    def __add__(self, other):
        if isinstance(other, CosSymPoly):
            if other.n != self.n:
                raise ValueError("variable count mismatch")
            merged = dict(self.coeffs)
            for mu, c in other.coeffs.items():
                merged[mu] = merged.get(mu, Fraction(0)) + c
            return CosSymPoly(self.n, merged)
        return self + CosSymPoly(self.n, {(): Fraction(other)})

    __radd__ = __add__

    def __neg__(self):
        return CosSymPoly(self.n, {mu: -c for mu, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, CosSymPoly) else CosSymPoly(self.n, {(): -Fraction(other)}))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, CosSymPoly):
            if other.n != self.n:
                raise ValueError("variable count mismatch")
            a = self._monomials()
            b = other._monomials()
            prod: dict[tuple[int, ...], Fraction] = {}
            for ea, ca in a.items():
                for eb, cb in b.items():
                    e = tuple(i + j for i, j in zip(ea, eb))
                    prod[e] = prod.get(e, Fraction(0)) + ca * cb
            collected = {
                e: c
                for e, c in prod.items()
                if all(x >= y for x, y in zip(e, e[1:]))
            }
            return CosSymPoly(self.n, {as_partition(e): c for e, c in collected.items() if c != 0})
        return CosSymPoly(self.n, {mu: c * Fraction(other) for mu, c in self.coeffs.items()})

    __rmul__ = __mul__

    def _monomials(self) -> dict[tuple[int, ...], Fraction]:
        """Full orbit expansion: exponent tuple (length n) -> coefficient."""
        out: dict[tuple[int, ...], Fraction] = {}
        for mu, c in self.coeffs.items():
            padded = mu + (0,) * (self.n - len(mu))
            for perm in _distinct_permutations(padded):
                out[perm] = out.get(perm, Fraction(0)) + c
        return out


@dataclass(frozen=True)
class LaurentSymPoly:
    """Symmetric Laurent polynomial on the monic orbit-sum basis.

    coeffs maps signatures (weakly decreasing integer tuples of length n)
    to rational coefficients of m_kappa(x) = sum of x^alpha over the
    distinct permutations alpha of kappa.
    """

    n: int
    coeffs: Mapping[Signature, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for kappa, c in self.coeffs.items():
            kappa = as_signature(kappa)
            if len(kappa) != self.n:
                raise ValueError(f"signature {kappa!r} is not length {self.n}")
            if c != 0:
                cleaned[kappa] = Fraction(c)
        object.__setattr__(self, "coeffs", cleaned)

    def __add__(self, other: "LaurentSymPoly") -> "LaurentSymPoly":
        if other.n != self.n:
            raise ValueError("variable count mismatch")
        merged = dict(self.coeffs)
        for k, c in other.coeffs.items():
            merged[k] = merged.get(k, Fraction(0)) + c
        return LaurentSymPoly(self.n, merged)

    def __sub__(self, other: "LaurentSymPoly") -> "LaurentSymPoly":
        return self + (other * Fraction(-1))

    def __mul__(self, scalar) -> "LaurentSymPoly":
        s = Fraction(scalar)
        return LaurentSymPoly(self.n, {k: c * s for k, c in self.coeffs.items()})

    __rmul__ = __mul__

    def eval_at_angles(self, angles) -> complex:
        """Numerical evaluation at x_j = exp(i * angles_j)."""
        x = np.exp(1j * np.asarray(angles, dtype=float))
        total = 0j
        for kappa, c in self.coeffs.items():
            orbit = 0j
            for perm in _distinct_permutations(kappa):
                orbit += np.prod(x ** np.array(perm))
            total += float(c) * orbit
        return complex(total)


def m_poly(mu, n: int) -> CosSymPoly:
    """The single monomial-symmetric polynomial m_mu in n cosine variables."""
    mu = as_partition(mu)
    if len(mu) > n:
        raise ValueError(f"partition {mu!r} has more than {n} parts")
    return CosSymPoly(n, {mu: Fraction(1)})


@cache
def schur_laurent(kappa: Signature) -> LaurentSymPoly:
    """Generalized Schur function s_kappa as a symmetric Laurent polynomial.

    Computed as det^s * S_lam with (lam, s) the canonical split; the
    classical part expands through Kostka numbers, and the determinant
    power shifts every exponent tuple by s.
    """
    kappa = as_signature(kappa)
    n = len(kappa)
    lam, s = signature_split(kappa)
    lam = as_partition(lam)
    deg = sum(lam)
    coeffs: dict[Signature, Fraction] = {}
    for mu in generate_partitions(deg, n):
        if sum(mu) != deg:
            continue
        k = kostka(lam, mu)
        if k:
            shifted = tuple(p + s for p in mu + (0,) * (n - len(mu)))
            coeffs[shifted] = Fraction(k)
    return LaurentSymPoly(n, coeffs)


def schur_eval_bialternant(kappa: Signature, angles) -> complex:
    """Ratio-of-determinants evaluation of s_kappa, used as an oracle.

    Singular when two angles coincide modulo 2*pi; callers must perturb.
    """
    kappa = as_signature(kappa)
    n = len(kappa)
    x = np.exp(1j * np.asarray(angles, dtype=float))
    if len(x) != n:
        raise ValueError("angle count must match signature length")
    for i in range(n):
        for j in range(i + 1, n):
            if abs(x[i] - x[j]) < 1e-12:
                raise ValueError("coincident angles: bialternant ratio is singular")
    num = np.array([[x[j] ** (kappa[i] + n - 1 - i) for j in range(n)] for i in range(n)])
    den = np.array([[x[j] ** (n - 1 - i) for j in range(n)] for i in range(n)])
    return complex(np.linalg.det(num) / np.linalg.det(den))


def cos_to_laurent(p: CosSymPoly) -> LaurentSymPoly:
    """Exact image of p under y_j -> (x_j + 1/x_j) / 2.

    Expands every cosine monomial through the binomial theorem and
    collects the result on the monomial-symmetric Laurent basis.  The
    output is invariant under inverting any subset of the x_j.
    """
    n = p.n
    expanded: dict[tuple[int, ...], Fraction] = {}
    for exps, c in p._monomials().items():
        scale = c * Fraction(1, 2 ** sum(exps))
        # per-coordinate binomial expansions of (x + 1/x)^e
        per_coord = [
            [(e - 2 * i, comb(e, i)) for i in range(e + 1)] for e in exps
        ]
        for combo in itertools.product(*per_coord):
            exp_vec = tuple(t[0] for t in combo)
            weight = 1
            for t in combo:
                weight *= t[1]
            expanded[exp_vec] = expanded.get(exp_vec, Fraction(0)) + scale * weight
    collected = {
        e: c
        for e, c in expanded.items()
        if all(a >= b for a, b in zip(e, e[1:])) and c != 0
    }
    return LaurentSymPoly(n, collected)


def schur_expand(p: LaurentSymPoly) -> dict[Signature, Fraction]:
    """Coefficients c_kappa with p = sum c_kappa s_kappa.

    Peels the lexicographically largest remaining orbit: the leading
    monomial of s_kappa is x^kappa with coefficient 1, so each step has
    a unit pivot and strictly lowers the leading term.
    """
    remaining = dict(p.coeffs)
    out: dict[Signature, Fraction] = {}
    while remaining:
        lead = max(remaining)
        c = remaining.pop(lead)
        if c == 0:
            continue
        out[lead] = out.get(lead, Fraction(0)) + c
        for kappa, sc in schur_laurent(lead).coeffs.items():
            if kappa == lead:
                continue
            remaining[kappa] = remaining.get(kappa, Fraction(0)) - c * sc
            if remaining[kappa] == 0:
                del remaining[kappa]
    return {k: v for k, v in out.items() if v != 0}


def weyl_dimension(kappa: Signature) -> int:
    """Dimension of the irreducible with highest weight kappa."""
    kappa = as_signature(kappa)
    n = len(kappa)
    dim = Fraction(1)
    for i in range(n):
        for j in range(i + 1, n):
            dim *= Fraction(kappa[i] - kappa[j] + j - i, j - i)
    assert dim.denominator == 1 and dim > 0
    return int(dim)


def eval_cos_poly(p: CosSymPoly, y) -> float:
    """Floating-point evaluation of p at the cosine point y."""
    y = tuple(float(v) for v in y)
    if len(y) != p.n:
        raise ValueError("point length must match variable count")
    total = 0.0
    for mu, c in p.coeffs.items():
        padded = mu + (0,) * (p.n - len(mu))
        orbit = 0.0
        for perm in _distinct_permutations(padded):
            term = 1.0
            for v, e in zip(y, perm):
                term *= v ** e
            orbit += term
        total += float(c) * orbit
    return total
