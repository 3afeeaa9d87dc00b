import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from secnet.gf import Mat, gf, mat_rank
from secnet.robust import (
    RobustCode, RobustError, check_conditions, failure_bound, lja_audit, random_invertible, random_of_rank,
    robust_decode, robust_encode, run_trial, summarize, vandermonde, worst_case_difference,
)


def rand_mat(ctx, r, c, rng):
    return Mat.from_rows(ctx, [[int(v) for v in rng.integers(0, ctx.order, c)] for _ in range(r)], cols=c)


def horner(coeffs, v, q):
    """Σ_i coeffs[i-1]·v^i for i = 1..n."""
    acc = 0
    for c in reversed(coeffs):
        acc = (acc + c) * v % q
    return acc


def make_code(q=251, m0=2, m1=1, m3=3, m4=3, n=4, seed=0):
    return RobustCode.sample(gf(q), m0, m1, m3, m4, n, np.random.default_rng(seed))


def test_zero_message():
    code = make_code()
    x, pkg = robust_encode(code, Mat.zeros(code.ctx, code.k, code.n))
    assert x.is_zero and pkg.u2.is_zero


def test_encoding_is_deterministic():
    rng = np.random.default_rng(1)
    a = make_code(n=3, seed=7)
    b = make_code(n=3, seed=7)
    m = rand_mat(a.ctx, a.k, 3, rng)
    assert robust_encode(a, m) == robust_encode(b, m)


def test_u2_is_polynomial_evaluation():
    rng = np.random.default_rng(2)
    code = make_code(q=65521, m0=3, m1=1, m3=4, m4=4, n=8)
    m = rand_mat(code.ctx, code.k, code.n, rng)
    _, pkg = robust_encode(code, m)
    for r in range(code.k):
        for j, v in enumerate(code.vs):
            assert pkg.u2[r, j] == horner(list(m.row(r)), v, 65521)


def test_bad_message_shape():
    code = make_code()
    with pytest.raises(RobustError):
        robust_encode(code, Mat.zeros(code.ctx, code.k + 1, code.n))


def test_decode_without_attack():
    rng = np.random.default_rng(3)
    ctx = gf(65521)
    for trial in range(20):
        code = RobustCode.sample(ctx, 3, 1, 4, 5, 8, rng)
        m = rand_mat(ctx, code.k, 8, rng)
        x, pkg = robust_encode(code, m)
        kb = random_of_rank(ctx, rng, 5, 4, 4)
        trace = robust_decode(code, kb @ x, pkg)
        assert trace.m_hat == m
        assert mat_rank((kb @ x).take_rows(trace.rows)) == trace.rank == len(trace.rows)


def test_decode_zero_observation_fails():
    rng = np.random.default_rng(4)
    code = make_code()
    m = rand_mat(code.ctx, code.k, code.n, rng)
    while m.is_zero:
        m = rand_mat(code.ctx, code.k, code.n, rng)
    _, pkg = robust_encode(code, m)
    trace = robust_decode(code, Mat.zeros(code.ctx, code.m4, code.n), pkg)
    assert trace.m_hat != m


def test_no_injection_satisfies_f1a():
    rng = np.random.default_rng(5)
    code = make_code()
    m = rand_mat(code.ctx, code.k, code.n, rng)
    kb = random_of_rank(code.ctx, rng, 3, 3, 2)
    cond = check_conditions(code, kb, Mat.zeros(code.ctx, 3, 0), m, Mat.zeros(code.ctx, 0, code.n))
    assert cond.f1a


def test_repeated_secret_breaks_f2():
    ctx = gf(31)
    v = 5
    u0 = Mat.identity(ctx, 2)
    code = RobustCode(ctx, 1, 0, 2, 2, 2, (v, v), u0)
    m = Mat.from_rows(ctx, [[ctx.neg(v), 1]])  # -v·t + t^2 vanishes at t = v
    assert (m @ code.u1).is_zero
    cond = check_conditions(code, Mat.identity(ctx, 2), Mat.zeros(ctx, 2, 0), m, Mat.zeros(ctx, 0, 2))
    assert not cond.f2 and cond.first_failure() == "F2"


@settings(max_examples=30, deadline=None)
@given(q=st.sampled_from([31, 251, 65521]), n=st.integers(2, 8), seed=st.integers(0, 10**6))
def test_vandermonde_full_rank_with_distinct_points(q, n, seed):
    m = min(n, 5)
    rng = np.random.default_rng(seed)
    vs = tuple(int(v) for v in rng.choice(np.arange(1, q), size=m, replace=False))
    assert mat_rank(vandermonde(gf(q), vs, n)) == m


def test_secret_count_enforced():
    with pytest.raises(RobustError):
        RobustCode(gf(31), 2, 1, 3, 3, 4, (1, 2), Mat.identity(gf(31), 3))


def test_small_field_warns():
    with pytest.warns(UserWarning):
        make_code(q=31, m0=2, m1=1, n=4)


@pytest.mark.filterwarnings("ignore::UserWarning")
def test_implication_at_small_field():
    """In GF(31) decoding fails often; every failure must violate a condition."""
    ctx = gf(31)
    results = [run_trial(ctx, 2, 1, 3, 3, 4, seed=9, trial=t) for t in range(400)]
    assert any(not r.success for r in results)
    assert all(r.success or not r.cond.all for r in results)


def test_trials_are_partition_invariant():
    ctx = gf(251)
    a = [run_trial(ctx, 2, 1, 3, 3, 4, seed=3, trial=t) for t in range(10)]
    b = [run_trial(ctx, 2, 1, 3, 3, 4, seed=3, trial=t) for t in reversed(range(10))]
    assert a == list(reversed(b))


def test_monte_carlo_500_trials():
    ctx = gf(65521)
    results = [run_trial(ctx, 3, 1, 4, 4, 8, seed=0, trial=t) for t in range(500)]
    s = summarize(results, 65521, 8, 3, 1)
    assert s.consistent
    assert s.implication_holds == s.trials


def test_failure_bound_value():
    b = failure_bound(65521, 8, 3, 1)
    assert b["F2"] == pytest.approx(8**4 / 65521)
    assert b["total"] == pytest.approx(0.0625, abs=1e-3)


def test_worst_case_polynomial_roots():
    q, n = 251, 4
    coeffs = worst_case_difference(n, q)
    for r in range(q):
        val = horner([int(c) for c in coeffs], r, q)
        assert (val == 0) == (r < n)


def test_collision_audit_rows():
    rows = lja_audit(4, 3, 251, 200_000, seed=1)
    assert {r.label for r in rows} >= {"worst", "unit"}
    assert all(r.within for r in rows)


def test_collision_audit_trivial_when_field_small():
    rows = lja_audit(8, 2, 7, 1000)
    assert all(r.bound == 1.0 and r.within for r in rows)


def test_collision_audit_needs_trials():
    with pytest.raises(RobustError):
        lja_audit(4, 3, 251, 0)


def test_random_invertible_is_invertible():
    rng = np.random.default_rng(0)
    for _ in range(10):
        assert mat_rank(random_invertible(gf(2), rng, 4)) == 4


def test_vacuous_bound_is_consistent():
    from secnet.robust import MonteCarloSummary

    s = MonteCarloSummary(10, 10, 10, 2.1)
    assert s.sigma == 0 and s.consistent
