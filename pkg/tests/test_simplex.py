"""Simplex solver versus an independent LP oracle."""

import numpy as np
import pytest

scipy_opt = pytest.importorskip("scipy.optimize")

from unitarylp.simplex import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    LpResult,
    solve_lp,
)

STATUS_FROM_SCIPY = {0: OPTIMAL, 2: INFEASIBLE, 3: UNBOUNDED}


def oracle(c, cons, nvar):
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for v, rel, b in cons:
        if rel == "<=":
            A_ub.append(v)
            b_ub.append(b)
        elif rel == ">=":
            A_ub.append(-np.asarray(v))
            b_ub.append(-b)
        else:
            A_eq.append(v)
            b_eq.append(b)
    res = scipy_opt.linprog(
        c,
        A_ub=np.array(A_ub) if A_ub else None,
        b_ub=np.array(b_ub) if b_ub else None,
        A_eq=np.array(A_eq) if A_eq else None,
        b_eq=np.array(b_eq) if b_eq else None,
        bounds=[(None, None)] * nvar,
        method="highs",
    )
    return STATUS_FROM_SCIPY.get(res.status), res.fun


def assert_feasible(x, cons, tol=1e-7):
    for v, rel, b in cons:
        resid = float(np.dot(v, x)) - b
        if rel == "<=":
            assert resid <= tol, (rel, resid)
        elif rel == ">=":
            assert resid >= -tol, (rel, resid)
        else:
            assert abs(resid) <= tol, (rel, resid)


class TestBasics:
    def test_single_lower_bound(self):
        res = solve_lp([1.0], [([1.0], ">=", 3.0)])
        assert res.status == OPTIMAL
        assert res.objective == pytest.approx(3.0)
        assert res.x[0] == pytest.approx(3.0)

    def test_contradiction(self):
        res = solve_lp([1.0], [([1.0], "<=", 1.0), ([1.0], ">=", 2.0)])
        assert res.status == INFEASIBLE

    def test_unbounded_below(self):
        res = solve_lp([-1.0], [([1.0], ">=", 0.0)])
        assert res.status == UNBOUNDED
        assert res.ray is not None
        assert np.dot([-1.0], res.ray) < 0

    def test_equality_only(self):
        res = solve_lp([1.0, 1.0], [([1.0, -1.0], "=", 2.0), ([1.0, 1.0], "=", 4.0)])
        assert res.status == OPTIMAL
        assert res.x == pytest.approx([3.0, 1.0])

    def test_degenerate_vertex(self):
        # three planes through the same point
        cons = [
            ([1.0, 0.0], ">=", 1.0),
            ([0.0, 1.0], ">=", 1.0),
            ([1.0, 1.0], ">=", 2.0),
        ]
        res = solve_lp([1.0, 1.0], cons)
        assert res.status == OPTIMAL
        assert res.objective == pytest.approx(2.0)

    def test_width_mismatch(self):
        with pytest.raises(ValueError):
            solve_lp([1.0, 2.0], [([1.0], "<=", 1.0)])

    def test_unknown_relation(self):
        with pytest.raises(ValueError):
            solve_lp([1.0], [([1.0], "<", 1.0)])


class TestAgainstOracle:
    def test_random_mixed_relations(self):
        rng = np.random.default_rng(987)
        for trial in range(250):
            nv = int(rng.integers(1, 7))
            m = int(rng.integers(1, 14))
            A = np.round(rng.standard_normal((m, nv)), 3)
            b = np.round(rng.standard_normal(m) * 2, 3)
            c = np.round(rng.standard_normal(nv), 3)
            rels = [("<=", "=", ">=")[k] for k in rng.integers(0, 3, m)]
            cons = [(A[i], rels[i], float(b[i])) for i in range(m)]
            res = solve_lp(c, cons)
            want_status, want_val = oracle(c, cons, nv)
            assert res.status == want_status, trial
            if res.status == OPTIMAL:
                assert res.objective == pytest.approx(want_val, abs=1e-6, rel=1e-6)
                assert_feasible(res.x, cons)

    def test_random_bounded_feasible(self):
        # built to be feasible and bounded: box plus random cuts through
        # a known interior point
        rng = np.random.default_rng(5150)
        for trial in range(120):
            nv = int(rng.integers(2, 6))
            m = int(rng.integers(1, 10))
            x0 = rng.uniform(-1, 1, nv)
            A = rng.standard_normal((m, nv))
            slackness = rng.uniform(0.1, 2.0, m)
            cons = [(A[i], "<=", float(A[i] @ x0 + slackness[i])) for i in range(m)]
            for j in range(nv):
                e = np.zeros(nv)
                e[j] = 1.0
                cons.append((e.copy(), "<=", 5.0))
                cons.append((e.copy(), ">=", -5.0))
            c = rng.standard_normal(nv)
            res = solve_lp(c, cons)
            want_status, want_val = oracle(c, cons, nv)
            assert res.status == want_status == OPTIMAL, trial
            assert res.objective == pytest.approx(want_val, abs=1e-6, rel=1e-6)
            assert_feasible(res.x, cons)

    def test_unbounded_rays_are_valid(self):
        rng = np.random.default_rng(31)
        seen = 0
        for trial in range(200):
            nv = int(rng.integers(2, 5))
            m = int(rng.integers(1, 4))
            A = np.round(rng.standard_normal((m, nv)), 3)
            b = np.round(rng.standard_normal(m), 3)
            c = np.round(rng.standard_normal(nv), 3)
            cons = [(A[i], "<=", float(b[i])) for i in range(m)]
            res = solve_lp(c, cons)
            want_status, _ = oracle(c, cons, nv)
            assert res.status == want_status
            if res.status == UNBOUNDED:
                seen += 1
                d = res.ray
                assert float(np.dot(c, d)) < -1e-9
                for v, _, _ in cons:
                    assert float(np.dot(v, d)) <= 1e-7
        assert seen > 20  # the family produces plenty of unbounded cases
