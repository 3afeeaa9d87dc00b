import dataclasses
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from netgen import causal_table_strategy, rand_mat, random_model, random_spec_text, walk
from secnet.attack import (
    BudgetError, Strategy, UniquenessViolation, Verdict, _active_trace, linear_code, parse_code,
    parse_strategy, reduction_check, run_active, run_passive, table_code,
)
from secnet.dist import is_function_of
from secnet.gf import Mat, gf, mat_rank
from secnet.infoleak import mutual_info
from secnet.netmodel import ModelKind, TransferModel, compile_model, load_network, parse_network


def binary_setup(data):
    spec = load_network(data("onehop_binary.net"))
    code = parse_code(open(data("onehop_binary.code")).read())
    return spec, code


def test_binary_passive_conditional(data):
    spec, code = binary_setup(data)
    dist = run_passive(code, spec)
    cond = dist.conditional("M", "YE")
    half = Fraction(1, 2)
    assert cond[(0,)] == {((0, 0),): half, ((1, 0),): half}
    assert cond[(1,)] == {((0, 0),): half, ((1, 1),): half}
    assert mutual_info(dist, "M", "YE").value == pytest.approx(0.5, abs=1e-9)


def test_constant_encoder_leaks_nothing(data):
    spec, _ = binary_setup(data)
    code = table_code(gf(2), 2, {(m, l): (1, 0) for m in range(2) for l in range(2)})
    assert mutual_info(run_passive(code, spec), "M", "YE").value == 0


def test_passive_matches_monte_carlo(data):
    text = open(data("relay2.net")).read().replace("ctx field 2", "ctx field 3") + "wiretap 6 7 13\n"
    spec = parse_network(text)
    rng = random.Random(11)
    gen = rand_mat(gf(3), 4, 4, rng)
    code = linear_code(gf(3), gen, 1)
    exact = run_passive(code, spec).marginal(("M", "YE"))
    samples = 100_000
    npr = np.random.default_rng(11)
    ms = npr.integers(0, code.n_messages, samples)
    ls = npr.integers(0, code.n_scrambles, samples)
    cache, counts = {}, {}
    for m, l in zip(ms.tolist(), ls.tolist()):
        if (m, l) not in cache:
            cache[(m, l)] = (m, tuple(walk(spec, list(code.encoder(m, l)))[1]))
        key = cache[(m, l)]
        counts[key] = counts.get(key, 0) + 1
    assert set(counts) <= set(exact)
    for key, p in exact.items():
        p = float(p)
        sigma = (p * (1 - p) / samples) ** 0.5
        assert abs(counts.get(key, 0) / samples - p) <= 3 * sigma


def test_zero_strategy_marginal_equals_passive(data):
    spec = load_network(data("relay2_attack.net"))
    model = compile_model(spec)
    code = parse_code(open(data("relay2_linear.code")).read())
    active = run_active(code, model, Strategy.zero())
    assert active.marginal(("M", "YB", "YE")) == run_passive(code, model).marginal(("M", "YB", "YE"))


def test_replace_y1_attack_reveals_message(data):
    spec, code = binary_setup(data)
    strat = parse_strategy(open(data("attack_replace_y1.strategy")).read(), spec.ctx)
    dist = run_active(code, spec, strat)
    assert mutual_info(dist, "M", "YE").value == pytest.approx(1.0, abs=1e-12)


def test_singular_linear_strategy_is_rejected():
    ctx = gf(3)
    model = TransferModel(Mat.identity(ctx, 2), Mat.identity(ctx, 2), Mat.identity(ctx, 2),
                          Mat.from_rows(ctx, [[0, 1], [1, 0]]), ModelKind.ADDITION)
    g = Mat.identity(ctx, 2)
    assert mat_rank(Mat.identity(ctx, 2) - model.HE @ g) < 2
    code = linear_code(ctx, Mat.identity(ctx, 2), 1)
    with pytest.raises(UniquenessViolation):
        run_active(code, model, Strategy.linear(g))
    slow = dataclasses.replace(code, gen=None)
    with pytest.raises(UniquenessViolation):
        run_active(slow, model, Strategy.linear(g))


def test_feedback_strategy_on_graph_is_rejected(data):
    spec = load_network(data("series2.net"))
    code = parse_code(open(data("series2.code")).read())
    strat = parse_strategy(open(data("feedback.strategy")).read(), spec.ctx)
    with pytest.raises(UniquenessViolation):
        run_active(code, spec, strat)


def test_noncausal_table_strategy_uses_search():
    """A window that sees its own injection downstream still works when unique."""
    ctx = gf(2)
    model = TransferModel(Mat.identity(ctx, 1), Mat.identity(ctx, 1), Mat.identity(ctx, 1),
                          Mat.from_rows(ctx, [[1]]), ModelKind.ADDITION)
    code = linear_code(ctx, Mat.identity(ctx, 1), 1)
    strat = Strategy.table([{1}], [{(0,): 0, (1,): 0}])
    dist = run_active(code, model, strat)
    assert is_function_of(dist, "Z", "YE")
    run_active(code, model, Strategy.table([{1}], [{(0,): 1, (1,): 1}]))
    # y = x + α(y) with α(y) = 1 + y has no solution at all over GF(2)
    flip = Strategy.table([{1}], [{(0,): 1, (1,): 0}])
    with pytest.raises(UniquenessViolation):
        run_active(code, model, flip)


def test_budget():
    ctx = gf(2)
    code = linear_code(ctx, Mat.identity(ctx, 4), 2)
    model = TransferModel(Mat.identity(ctx, 4), Mat.zeros(ctx, 0, 4), Mat.zeros(ctx, 4, 0),
                          Mat.zeros(ctx, 0, 0), ModelKind.PASSIVE)
    with pytest.raises(BudgetError):
        run_passive(code, model, budget=8)
    with pytest.raises(BudgetError):
        run_passive(dataclasses.replace(code, gen=None), model, budget=8)


def test_zero_strategy_is_equivalent(data):
    spec = load_network(data("relay2_attack.net"))
    code = parse_code(open(data("relay2_linear.code")).read())
    assert reduction_check(code, compile_model(spec), Strategy.zero()).verdict is Verdict.EQUIVALENT


def test_binary_counterexample_is_leakier(data):
    spec, code = binary_setup(data)
    strat = parse_strategy(open(data("attack_replace_y1.strategy")).read(), spec.ctx)
    res = reduction_check(code, spec, strat)
    assert res.verdict is Verdict.LEAKIER
    assert res.leak_passive == pytest.approx(0.5, abs=1e-9)
    assert res.leak_active == pytest.approx(1.0, abs=1e-9)
    assert res.witness


@pytest.mark.parametrize("seed", range(20))
def test_vectorized_path_matches_per_input_solver(seed):
    rng = random.Random(seed)
    q = [2, 3, 5][seed % 3]
    model = random_model(rng, q, 3, 3, rng.randint(1, 3), rng.randint(1, 3))
    gen = rand_mat(model.ctx, 3, 3, rng)
    code = linear_code(model.ctx, gen, 1)
    slow = dataclasses.replace(code, gen=None)
    for strat in (Strategy.zero(), causal_table_strategy(rng, model),
                  Strategy.linear(rand_mat(model.ctx, model.HE.cols, model.HE.rows, rng))):
        try:
            want = sorted(_active_trace(slow, model, strat, 1 << 20))
        except UniquenessViolation:
            with pytest.raises(UniquenessViolation):
                list(_active_trace(code, model, strat, 1 << 20))
            continue
        assert sorted(_active_trace(code, model, strat, 1 << 20)) == want
    assert run_passive(code, model).pmf == run_passive(slow, model).pmf


@pytest.mark.parametrize("seed", range(12))
def test_linear_spec_fast_path_matches_graph_simulation(seed):
    rng = random.Random(seed)
    q = [2, 3][seed % 2]
    model_kind = ["addition", "replacement"][(seed // 2) % 2]
    spec = parse_network(random_spec_text(rng, q, 9, 3, model=model_kind))
    model = compile_model(spec)
    code = linear_code(spec.ctx, rand_mat(spec.ctx, 3, 3, rng), 1)
    slow = dataclasses.replace(code, gen=None)
    assert run_passive(code, spec).pmf == run_passive(slow, spec).pmf
    for strat in (causal_table_strategy(rng, model),
                  Strategy.linear(rand_mat(spec.ctx, model.HE.cols, model.HE.rows, rng))):
        try:
            want = sorted(_active_trace(slow, spec, strat, 1 << 20))
        except UniquenessViolation:
            with pytest.raises(UniquenessViolation):
                list(_active_trace(code, spec, strat, 1 << 20))
            continue
        assert sorted(_active_trace(code, spec, strat, 1 << 20)) == want


def test_two_transmission_linear_code_vectorized():
    rng = random.Random(3)
    model = random_model(rng, 2, 2, 2, 1, 2)
    code = linear_code(model.ctx, rand_mat(model.ctx, 4, 4, rng), 1, n=2)
    strat = Strategy.linear(rand_mat(model.ctx, 1, 2, rng), n=2)
    slow = dataclasses.replace(code, gen=None)
    try:
        want = sorted(_active_trace(slow, model, strat, 1 << 20))
    except UniquenessViolation:
        return
    assert sorted(_active_trace(code, model, strat, 1 << 20)) == want


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 10**6), q=st.sampled_from([2, 3, 5]))
def test_reduction_holds_for_linear_models(seed, q):
    rng = random.Random(seed)
    m3, m4, m5, m6 = (rng.randint(1, 3) for _ in range(4))
    model = random_model(rng, q, m3, m4, m5, m6)
    k = rng.randint(1, m3)
    code = linear_code(model.ctx, rand_mat(model.ctx, m3, m3, rng), k)
    strat = causal_table_strategy(rng, model)
    res = reduction_check(code, model, strat)
    assert res.verdict is Verdict.EQUIVALENT
    assert abs(res.leak_active - res.leak_passive) < 1e-9
    assert is_function_of(res.active, "Z", "YE")
    assert sum(res.active.pmf.values()) == 1
