"""Zonal functions of U(n), diversity measures, and positivity checks.

The orbit of a pair of unitary matrices (x, y) under simultaneous
left/right translation is characterized by the eigenvalue angles of
x y^{-1}; every quantity here is a function of that angle multiset.
Zonal nonnegativity is decided exactly (rational arithmetic), while the
empirical check draws random finite configurations and evaluates the
associated quadratic form numerically.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from .sympoly import (
    CosSymPoly,
    LaurentSymPoly,
    Signature,
    as_signature,
    cos_to_laurent,
    eval_cos_poly,
    schur_expand,
    schur_laurent,
    weyl_dimension,
)

SUM = "SUM"
PRODUCT = "PRODUCT"

OrbitPoint = tuple[float, ...]

#: Names of the certified-nonnegative building blocks, in display order.
Q_NAMES = ("Q0", "Q11", "Q1", "Q2", "Q111", "Q21", "Q3")

_Q_SHAPES = {
    "Q0": (),
    "Q11": (1, 1),
    "Q1": (1,),
    "Q2": (2,),
    "Q111": (1, 1, 1),
    "Q21": (2, 1),
    "Q3": (3,),
}


@dataclass(frozen=True)
class ZonalExpansion:
    """A function on orbits written as sum of c_kappa times the zonal
    function attached to the irreducible with signature kappa."""

    n: int
    coeffs: Mapping[Signature, Fraction] = field(default_factory=dict)

    @property
    def trivial_coefficient(self) -> Fraction:
        return self.coeffs.get((0,) * self.n, Fraction(0))

    @property
    def value_at_identity(self) -> Fraction:
        return sum(
            (c * weyl_dimension(kappa) for kappa, c in self.coeffs.items()),
            Fraction(0),
        )

    @property
    def min_coefficient(self) -> Fraction:
        return min(self.coeffs.values(), default=Fraction(0))

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coeffs.values())


@dataclass(frozen=True)
class Region:
    """Orbit points whose chosen diversity measure is at least delta."""

    kind: str
    delta: float
    n: int

    def __post_init__(self):
        if self.kind not in (SUM, PRODUCT):
            raise ValueError(f"unknown region kind {self.kind!r}")
        if self.delta < 0:
            raise ValueError("delta must be nonnegative")

    def membership(self, angles) -> bool:
        d = diversity_sum(angles) if self.kind == SUM else diversity_product(angles)
        return d >= self.delta


def orbit_point(angles) -> OrbitPoint:
    """Canonicalize angles into (-pi, pi], sorted descending."""
    out = []
    for a in angles:
        a = math.remainder(float(a), 2 * math.pi)
        if a <= -math.pi:
            a += 2 * math.pi
        out.append(a)
    return tuple(sorted(out, reverse=True))


def diversity_sum(angles) -> float:
    """Root-mean-square style separation: sqrt of the averaged 1 - cos."""
    angles = tuple(float(a) for a in angles)
    n = len(angles)
    return math.sqrt(sum(1.0 - math.cos(a) for a in angles) / (2 * n))


def diversity_product(angles) -> float:
    """Geometric-mean separation; zero whenever any angle vanishes."""
    angles = tuple(float(a) for a in angles)
    n = len(angles)
    log_sum = 0.0
    for a in angles:
        t = 1.0 - math.cos(a)
        if t < 1e-300:
            return 0.0
        log_sum += math.log(t)
    return math.sqrt(0.5 * math.exp(log_sum / n))


def q_polynomial(name: str, n: int, reduce_overlong: bool = False) -> CosSymPoly:
    """One of the seven certified-nonnegative cosine polynomials.

    With reduce_overlong, monomial-symmetric terms indexed by partitions
    longer than n are dropped (they are identically zero in n variables)
    instead of raising; useful for checking the short names at small n.
    """
    if name not in _Q_SHAPES:
        raise ValueError(f"unknown name {name!r}; expected one of {Q_NAMES}")
    if n < 2:
        raise ValueError("need at least two variables")
    quarter = Fraction(1, 4)
    tables: dict[str, dict[tuple[int, ...], Fraction]] = {
        "Q0": {(): Fraction(1)},
        "Q11": {(1, 1): Fraction(1), (): (n - 1) * quarter},
        "Q1": {(1,): Fraction(1)},
        "Q2": {(2,): Fraction(1), (1, 1): Fraction(1), (): -(n + 1) * quarter},
        "Q111": {(1, 1, 1): Fraction(1), (1,): (n - 2) * quarter},
        "Q21": {(2, 1): Fraction(1), (1, 1, 1): Fraction(2), (1,): -quarter},
        "Q3": {
            (3,): Fraction(1),
            (2, 1): Fraction(1),
            (1, 1, 1): Fraction(1),
            (1,): -(n + 2) * quarter,
        },
    }
    coeffs = tables[name]
    if any(len(mu) > n for mu in coeffs):
        if not reduce_overlong:
            raise ValueError(f"{name} involves partitions with more than {n} parts")
        coeffs = {mu: c for mu, c in coeffs.items() if len(mu) <= n}
    return CosSymPoly(n, coeffs)


def zonal_expansion(p: CosSymPoly) -> ZonalExpansion:
    """Expand a cosine polynomial over the zonal functions of U(n)."""
    return ZonalExpansion(p.n, schur_expand(cos_to_laurent(p)))


def real_character(kappa) -> LaurentSymPoly:
    """Real part of the signature-kappa character, as a function on orbits.

    Averaging the character with the one of the conjugate signature
    (entries negated and reversed) gives a symmetric Laurent polynomial
    whose value at every orbit point equals Re chi_kappa there; this is
    the natural single-character input for the positivity check.
    """
    kappa = as_signature(kappa)
    conj = tuple(-k for k in reversed(kappa))
    half = Fraction(1, 2)
    return schur_laurent(kappa) * half + schur_laurent(conj) * half


def is_positive_combination(p: CosSymPoly) -> tuple[bool, ZonalExpansion]:
    """Exact check that every zonal coefficient of p is nonnegative."""
    expansion = zonal_expansion(p)
    return expansion.is_nonnegative(), expansion


def _check_unitary(U: np.ndarray, what: str = "matrix") -> np.ndarray:
    U = np.asarray(U, dtype=complex)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise ValueError(f"{what} must be square")
    n = U.shape[0]
    defect = np.linalg.norm(U @ U.conj().T - np.eye(n))
    if defect > 1e-9:
        raise ValueError(f"{what} is not unitary: defect {defect:.3e}")
    return U


def eigen_angles(U) -> OrbitPoint:
    """Eigenvalue angles of a unitary matrix, canonicalized."""
    U = _check_unitary(U)
    w = np.linalg.eigvals(U)
    drift = np.max(np.abs(np.abs(w) - 1.0))
    if drift > 1e-8:
        raise ValueError(f"eigenvalue modulus drift {drift:.3e}")
    return orbit_point(np.angle(w))


def pair_orbit(x, y) -> OrbitPoint:
    """Orbit invariant of a pair: the angles of x y^{-1}."""
    x = _check_unitary(x, "x")
    y = _check_unitary(y, "y")
    return eigen_angles(x @ y.conj().T)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Unitary drawn by phase-corrected QR of a complex Gaussian matrix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def _form_value(p: CosSymPoly | LaurentSymPoly, angles) -> float:
    if isinstance(p, LaurentSymPoly):
        return float(np.real(p.eval_at_angles(angles)))
    return eval_cos_poly(p, [math.cos(t) for t in angles])


def _positivity_trial(
    p: CosSymPoly | LaurentSymPoly, code_size: int, seed_seq: np.random.SeedSequence
) -> float:
    rng = np.random.default_rng(seed_seq)
    n = p.n
    mats = [random_unitary(n, rng) for _ in range(code_size)]
    alpha = rng.standard_normal(code_size) + 1j * rng.standard_normal(code_size)
    alpha /= np.linalg.norm(alpha)
    gram = np.empty((code_size, code_size))
    identity_value = _form_value(p, [0.0] * n)
    for i in range(code_size):
        gram[i, i] = identity_value
        for j in range(i + 1, code_size):
            gram[i, j] = gram[j, i] = _form_value(p, pair_orbit(mats[i], mats[j]))
    return float(np.real(alpha.conj() @ gram @ alpha))


def empirical_positivity(
    p: CosSymPoly | LaurentSymPoly,
    trials: int,
    code_size: int,
    seed: int,
    *,
    threads: int = 1,
) -> float:
    """Minimum of the quadratic form attached to p over random codes.

    Each trial draws code_size random unitaries and a unit-norm complex
    weight vector, then evaluates sum over pairs of
    alpha_x conj(alpha_y) p(orbit(x, y)).  Weights live on the unit
    sphere, so the natural scale of the form is p at the identity.
    Accepts either a cosine polynomial or a symmetric Laurent polynomial
    (e.g. real_character output) evaluated at the orbit angles.
    Deterministic given (seed, trials); trials may run on a thread pool.
    """
    seqs = np.random.SeedSequence(seed).spawn(trials)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(lambda s: _positivity_trial(p, code_size, s), seqs))
    else:
        values = [_positivity_trial(p, code_size, s) for s in seqs]
    return min(values)
