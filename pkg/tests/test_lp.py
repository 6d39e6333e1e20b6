"""Cutting-plane optimizer: basis assembly, region sampling, certification."""

import math
from fractions import Fraction
from itertools import permutations

import pytest

from unitarylp.analytic import best_analytic, certificate_poly
from unitarylp.lp import (
    CERTIFIED,
    NO_BOUND_AT_DEGREE,
    BoundQuery,
    build_basis,
    default_grid_resolution,
    diversity_for_cardinality,
    lp_bound,
    sample_region,
    verify_certificate,
)
from unitarylp.partitions import degree
from unitarylp.sympoly import m_poly, weyl_dimension
from unitarylp.zonal import PRODUCT, SUM, zonal_expansion

HALF = Fraction(1, 2)


def orbit_size(mu, n):
    """Number of distinct monomials in the orbit sum m_mu on n variables."""
    padded = tuple(mu) + (0,) * (n - len(mu))
    return len(set(permutations(padded)))


# ---------------------------------------------------------------------------
# basis assembly


class TestBuildBasis:
    def test_n2_d1_matches_hand_expansion(self):
        b = build_basis(2, 1)
        assert list(b.partitions) == [(), (1,)]
        assert set(b.zonal_indices) == {(0, 0), (1, 0), (0, -1)}
        assert dict(b.M[0]) == {(0, 0): 1}
        assert dict(b.M[1]) == {(1, 0): HALF, (0, -1): HALF}

    def test_n2_d2_partition_list(self):
        b = build_basis(2, 2)
        assert list(b.partitions) == [(), (1,), (2,), (1, 1)]

    def test_n1_d3(self):
        b = build_basis(1, 3)
        assert list(b.partitions) == [(), (1,), (2,), (3,)]
        assert set(b.zonal_indices) == {(s,) for s in range(-3, 4)}

    @pytest.mark.parametrize("n,D", [(2, 3), (3, 2)])
    def test_columns_reproduce_zonal_expansion(self, n, D):
        b = build_basis(n, D)
        for j, mu in enumerate(b.partitions):
            assert dict(b.M[j]) == zonal_expansion(m_poly(mu, n)).coeffs

    @pytest.mark.parametrize("n,D", [(1, 4), (2, 3), (3, 2)])
    def test_trivial_row_present(self, n, D):
        b = build_basis(n, D)
        zero = (0,) * n
        assert zero in b.zonal_indices
        sorted_sigs = sorted(b.zonal_indices)
        assert sorted_sigs[b.zero_row] == zero

    def test_zonal_indices_deduplicated(self):
        b = build_basis(2, 4)
        assert len(b.zonal_indices) == len(set(b.zonal_indices))

    def test_dims_match_weyl_dimension(self):
        b = build_basis(2, 3)
        for kappa, d in zip(sorted(b.zonal_indices), b.dims):
            assert d == weyl_dimension(kappa)


# ---------------------------------------------------------------------------
# region sampling


class TestSampleRegion:
    def test_sum_delta_one_collapses_to_corner(self):
        pts = sample_region(2, SUM, 1.0, 9)
        assert pts and all(pt == (-1.0, -1.0) for pt in pts)

    def test_product_delta_one_collapses_to_corner(self):
        pts = sample_region(2, PRODUCT, 1.0, 9)
        assert pts and all(pt == (-1.0, -1.0) for pt in pts)

    def test_sum_halfplane_grid(self):
        # 2*delta^2 = 1 keeps the half of the sorted square below y1+y2 = 0
        pts = sample_region(2, SUM, math.sqrt(0.5), 3)
        expected_grid = {(1.0, -1.0), (0.0, 0.0), (0.0, -1.0), (-1.0, -1.0)}
        assert expected_grid <= set(pts)
        for y1, y2 in pts:
            assert 1.0 >= y1 >= y2 >= -1.0
            assert y1 + y2 <= 1e-9

    def test_product_region_membership(self):
        delta = 0.6
        cap = (2 * delta**2) ** 3
        for pt in sample_region(3, PRODUCT, delta, 5):
            assert math.prod(1.0 - y for y in pt) >= cap - 1e-9

    def test_empty_when_delta_exceeds_one(self):
        assert sample_region(2, SUM, 1.1, 9) == []
        assert sample_region(2, PRODUCT, 1.2, 9) == []

    def test_resolution_floor(self):
        with pytest.raises(ValueError):
            sample_region(2, SUM, 0.5, 1)

    def test_default_resolutions(self):
        assert default_grid_resolution(2) == 256
        assert default_grid_resolution(3) == 64
        assert default_grid_resolution(1) >= 8
        assert default_grid_resolution(5) >= 8


# ---------------------------------------------------------------------------
# certificate verification


class TestVerifyCertificate:
    def test_closed_form_certificate_is_nonpositive(self):
        delta = math.sqrt(0.75)
        cert = certificate_poly(SUM, 1, 2, delta)
        assert verify_certificate(cert.coeffs, 2, SUM, delta, 201) <= 1e-12

    def test_constant_one(self):
        assert verify_certificate({(): 1.0}, 2, SUM, 0.5, 65) == pytest.approx(1.0)

    def test_constant_minus_one(self):
        assert verify_certificate({(): -1.0}, 2, SUM, 0.5, 65) == pytest.approx(-1.0)

    def test_rejects_partition_outside_basis(self):
        with pytest.raises(ValueError):
            verify_certificate({(1, 1, 1): 1.0}, 2, SUM, 0.5, 65)


# ---------------------------------------------------------------------------
# the bound computation


class TestLpBound:
    def test_three_point_circle_code(self):
        # three equally spaced points on the circle achieve this delta, so
        # any sound bound is at least 3; degree 4 already gets close
        r = lp_bound(BoundQuery(n=1, kind=SUM, delta=math.sin(math.pi / 3), D=4))
        assert r.status == CERTIFIED
        assert 3.0 <= r.bound <= 3.05

    def test_degree_one_matches_closed_form(self):
        r = lp_bound(BoundQuery(n=2, kind=SUM, delta=math.sqrt(0.75), D=1))
        assert r.status == CERTIFIED
        assert 2.99 <= r.bound <= 3.0 + 1e-6

    def test_small_delta_degree_one_has_no_bound(self):
        r = lp_bound(BoundQuery(n=2, kind=SUM, delta=0.3, D=1))
        assert r.status == NO_BOUND_AT_DEGREE or r.bound > 100

    def test_certified_invariants(self):
        q = BoundQuery(n=2, kind=SUM, delta=0.75, D=3)
        r = lp_bound(q)
        assert r.status == CERTIFIED
        assert r.bound >= 1.0
        assert r.verification["max_violation"] <= q.slack
        assert min(r.zonal_coefficients.values()) >= -1e-12
        assert r.zonal_coefficients[(0, 0)] == pytest.approx(1.0, abs=1e-9)
        assert all(degree(mu) <= q.D for mu in r.coefficients)

    def test_objective_identity(self):
        # value at the identity orbit: sum of zonal coefficients weighted
        # by character dimension equals the monomial-basis evaluation at 1
        r = lp_bound(BoundQuery(n=2, kind=PRODUCT, delta=0.7, D=3))
        assert r.status == CERTIFIED
        via_zonal = sum(v * weyl_dimension(k) for k, v in r.zonal_coefficients.items())
        via_monomials = sum(v * orbit_size(mu, 2) for mu, v in r.coefficients.items())
        assert via_zonal == pytest.approx(via_monomials, abs=1e-9)
        assert r.bound == pytest.approx(via_monomials, abs=1e-9)

    def test_returned_certificate_passes_reverification(self):
        q = BoundQuery(n=2, kind=SUM, delta=0.8, D=4)
        r = lp_bound(q)
        assert r.status == CERTIFIED
        assert verify_certificate(r.coefficients, 2, SUM, 0.8, 301) <= q.slack

    def test_deterministic(self):
        q = BoundQuery(n=2, kind=SUM, delta=0.72, D=2)
        assert lp_bound(q).bound == lp_bound(q).bound

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"n": 0},
            {"delta": 0.0},
            {"delta": 1.5},
            {"D": 0},
            {"kind": "NEITHER"},
            {"grid_resolution": 4},
            {"slack": -1e-9},
            {"verify_resolution_factor": 0},
            {"max_rounds": 0},
        ],
    )
    def test_query_validation(self, kwargs):
        base = dict(n=2, kind=SUM, delta=0.6, D=2)
        base.update(kwargs)
        with pytest.raises(ValueError):
            lp_bound(BoundQuery(**base))


class TestSoundnessAndMonotonicity:
    def test_bound_at_most_closed_form_sum(self):
        # every closed-form certificate of degree <= D is feasible here
        lp = lp_bound(BoundQuery(n=2, kind=SUM, delta=0.8, D=3, slack=1e-8))
        assert lp.status == CERTIFIED
        assert lp.bound <= best_analytic(2, 0.8, SUM) + 1e-6

    def test_bound_at_most_closed_form_product(self):
        lp = lp_bound(BoundQuery(n=2, kind=PRODUCT, delta=0.8, D=2, slack=1e-8))
        assert lp.status == CERTIFIED
        assert lp.bound <= best_analytic(2, 0.8, PRODUCT) + 1e-6

    def test_bound_nonincreasing_in_delta(self):
        bounds = [
            lp_bound(BoundQuery(n=2, kind=SUM, delta=d, D=3)).bound
            for d in (0.75, 0.80, 0.85)
        ]
        assert bounds[0] >= bounds[1] - 1e-6
        assert bounds[1] >= bounds[2] - 1e-6

    def test_bound_nonincreasing_in_degree(self):
        b2 = lp_bound(BoundQuery(n=2, kind=SUM, delta=0.8, D=2)).bound
        b3 = lp_bound(BoundQuery(n=2, kind=SUM, delta=0.8, D=3)).bound
        assert b3 <= b2 + 1e-6


# ---------------------------------------------------------------------------
# cardinality -> diversity bisection


class TestDiversityForCardinality:
    def test_rejects_trivial_cardinality(self):
        with pytest.raises(ValueError):
            diversity_for_cardinality(2, SUM, 1, 2)

    def test_circle_codes_floor(self):
        # N-th roots of unity achieve diversity sin(pi/N), so the bisected
        # upper bound can never fall below it
        for N in (3, 4, 6):
            d = diversity_for_cardinality(1, SUM, N, 10)
            assert d >= math.sin(math.pi / N) - 5e-4
            assert d <= 1.0

    def test_nonincreasing_in_cardinality(self):
        d3 = diversity_for_cardinality(1, SUM, 3, 10)
        d4 = diversity_for_cardinality(1, SUM, 4, 10)
        d6 = diversity_for_cardinality(1, SUM, 6, 10)
        assert d3 >= d4 >= d6

    def test_low_degree_saturates_at_one(self):
        # degree 1 cannot certify a bound of 2 at any delta < 1 for n = 2
        assert diversity_for_cardinality(2, SUM, 2, 1) > 0.99
