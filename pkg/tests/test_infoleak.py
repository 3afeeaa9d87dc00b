import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from secnet.dist import JointDist
from secnet.infoleak import (
    entropy, l1_security, leakage_bound, mutual_info, renyi_cond, renyi_lower_bound_holds,
)
from secnet.onehop import binary_counterexample, construct_odd, leakage_profile


def uniform(names, keys):
    return JointDist.from_weights(names, {k: 1 for k in keys})


def test_binary_passive_leak_is_half_bit():
    dist = binary_counterexample().joint()
    for obs in (("Y1", "Y3"), ("Y1", "Y4"), ("Y2", "Y3"), ("Y2", "Y4")):
        assert mutual_info(dist, "M", obs).value == pytest.approx(0.5, abs=1e-9)
        assert l1_security(dist, "M", obs).exact == Fraction(1, 2)


def test_product_distribution_has_no_leak():
    dist = uniform(("A", "B"), [(a, b) for a in range(3) for b in range(4)])
    assert mutual_info(dist, "A", "B").value == 0
    assert l1_security(dist, "A", "B").exact == 0


def test_odd_construction_d5_leak():
    # With Y1 = M + L, the leak I(M; Y1 Y3) equals H(Y3 | Y1).
    want = (3 / 5) * math.log2(10 / 6) + (2 / 5) * math.log2(5)
    dist = construct_odd(5).joint()
    assert mutual_info(dist, "M", ("Y1", "Y3")).value == pytest.approx(want, abs=1e-9)
    assert leakage_profile(construct_odd(5)).row(1, 3).info == pytest.approx(want, abs=1e-9)


@pytest.mark.parametrize("k", [2, 3, 5, 8])
def test_l1_secret_equals_observation(k):
    dist = uniform(("X", "Y"), [(i, i) for i in range(k)])
    assert l1_security(dist, "X", "Y").exact == Fraction(2 * (k - 1), k)


def test_renyi_independent_and_determined():
    indep = uniform(("X", "Z"), [(x, z) for x in range(8) for z in range(3)])
    same = uniform(("X", "Z"), [(x, x) for x in range(8)])
    for s in (0.25, 0.5, 1.0):
        assert renyi_cond(indep, "X", "Z", s).value == pytest.approx(3.0, abs=1e-12)
        assert renyi_cond(same, "X", "Z", s).value == pytest.approx(0.0, abs=1e-12)


def test_renyi_s_range():
    d = uniform(("X", "Z"), [(0, 0), (1, 0)])
    for s in (0, -0.5, 1.5):
        with pytest.raises(ValueError):
            renyi_cond(d, "X", "Z", s)
        with pytest.raises(ValueError):
            leakage_bound(2, 1.0, s)


def test_unknown_variable():
    d = uniform(("X", "Z"), [(0, 0), (1, 0)])
    with pytest.raises(KeyError):
        mutual_info(d, "X", "W")


def test_leakage_bound_at_hash_instance():
    """q = 2, l = 4, m2 = 1, k = 8: k̄ = 2 and the bound is 2^{-⌈√4⌉} = 1/4."""
    k, l, m2 = 8, 4, 1
    kbar = k - m2 * l - math.isqrt(l - 1) - 1
    # X uniform on 8 bits, Eve sees the first m2·l of them
    dist = uniform(("X", "Z"), [(x, x >> (k - m2 * l)) for x in range(2**k)])
    h2 = renyi_cond(dist, "X", "Z", 1).value
    assert h2 == pytest.approx(k - m2 * l)
    assert renyi_lower_bound_holds(dist, "X", "Z", 1)
    assert leakage_bound(2**kbar, h2, 1).value == pytest.approx(2.0 ** -2)


weights = st.dictionaries(
    st.tuples(st.integers(0, 2), st.integers(0, 3)), st.integers(1, 9), min_size=1, max_size=12
)


@settings(max_examples=80, deadline=None)
@given(w=weights)
def test_information_inequalities(w):
    d = JointDist.from_weights(("A", "B"), w)
    i = mutual_info(d, "A", "B").value
    assert -1e-9 <= i <= min(entropy(d, "A").value, entropy(d, "B").value) + 1e-9
    l1 = l1_security(d, "A", "B", secret_size=3).exact
    assert 0 <= l1 <= 2
    pa = d.marginal("A")
    uniform_independent = (len(pa) == 3 and len(set(pa.values())) == 1 and i < 1e-12)
    assert (l1 == 0) == uniform_independent
    values = [renyi_cond(d, "A", "B", s).value for s in (0.25, 0.5, 0.75, 1.0)]
    assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))
