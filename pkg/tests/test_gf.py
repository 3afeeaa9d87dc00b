import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from secnet.gf import (
    ArithError, Mat, UnsupportedOperation, ctx_make, gf, image_intersect, is_irreducible,
    mat_inverse, mat_kernel, mat_rank, mat_solve_right, smallest_irreducible, zmod,
)


def poly_divides(f, g, p):
    """Does f divide g over GF(p)? Plain long division, little-endian lists."""
    g = list(g)
    inv = pow(f[-1], p - 2, p)
    while len(g) >= len(f):
        c = g[-1] * inv % p
        shift = len(g) - len(f)
        for i, a in enumerate(f):
            g[shift + i] = (g[shift + i] - c * a) % p
        while g and g[-1] == 0:
            g.pop()
    return not g


def irreducible_by_trial_division(poly, p):
    t = len(poly) - 1
    for deg in range(1, t // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            if poly_divides(list(low) + [1], poly, p):
                return False
    return True


def poly_mulmod(a, b, f, p):
    """Schoolbook product of two element codes modulo f (oracle for extension fields)."""
    t = len(f) - 1
    da = [(a // p**i) % p for i in range(t)]
    db = [(b // p**i) % p for i in range(t)]
    prod = [0] * (2 * t - 1)
    for i, x in enumerate(da):
        for j, y in enumerate(db):
            prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, t - 1, -1):
        c = prod[k]
        if c:
            for i, fc in enumerate(f):
                prod[k - t + i] = (prod[k - t + i] - c * fc) % p
    return sum(c * p**i for i, c in enumerate(prod[:t]))


def rand_mat(ctx, rows, cols, rng):
    return Mat.from_rows(ctx, [[rng.randrange(ctx.order) for _ in range(cols)] for _ in range(rows)], cols=cols)


def test_gf2_elements():
    ctx = ctx_make("prime-field", 2, 1)
    assert list(ctx.elements()) == [0, 1]
    assert ctx.add(1, 1) == 0


def test_ring_has_zero_divisor():
    z4 = ctx_make("modular-ring", 4, 1)
    assert z4.mul(2, 2) == 0


def test_gf256_reduction_polynomial():
    ctx = gf(2, 8)
    assert ctx.poly == (1, 1, 0, 1, 1, 0, 0, 0, 1)  # x^8 + x^4 + x^3 + x + 1


@pytest.mark.parametrize("p,t", [(2, 2), (2, 3), (2, 4), (2, 8), (3, 2), (3, 3), (5, 2)])
def test_smallest_irreducible_matches_trial_division(p, t):
    first = None
    for code in range(p**t):
        poly = [(code // p**i) % p for i in range(t)] + [1]
        if irreducible_by_trial_division(poly, p):
            first = tuple(poly)
            break
    assert smallest_irreducible(p, t) == first


@pytest.mark.parametrize("p,t", [(2, 4), (3, 3), (5, 2)])
def test_rabin_agrees_with_trial_division(p, t):
    for code in range(p**t):
        poly = [(code // p**i) % p for i in range(t)] + [1]
        assert is_irreducible(poly, p) == irreducible_by_trial_division(poly, p)


@pytest.mark.parametrize("p,t", [(2, 2), (2, 3), (3, 2)])
def test_extension_multiplication_matches_polynomials(p, t):
    ctx = gf(p, t)
    for a in ctx.elements():
        for b in ctx.elements():
            assert ctx.mul(a, b) == poly_mulmod(a, b, ctx.poly, p)


@pytest.mark.parametrize("p,t", [(2, 1), (3, 1), (251, 1), (2, 4), (3, 2), (2, 8)])
def test_every_nonzero_element_is_invertible(p, t):
    ctx = gf(p, t)
    for e in range(1, ctx.order):
        assert ctx.mul(e, ctx.inv(e)) == 1


def test_bad_contexts():
    with pytest.raises(ArithError):
        ctx_make("prime-field", 4, 1)
    with pytest.raises(ArithError):
        ctx_make("extension-field", 2, 0)
    with pytest.raises(ArithError):
        ctx_make("modular-ring", 1, 1)


def test_rank_rejected_over_rings():
    m = Mat.identity(zmod(4), 2)
    with pytest.raises(UnsupportedOperation):
        mat_rank(m)


def test_worked_example_ranks():
    ctx = gf(2)
    kb = Mat.from_rows(ctx, [[1, 0, 0, 0], [0, 0, 1, 0], [1, 1, 0, 0], [0, 0, 1, 1]])
    hb = Mat.from_rows(ctx, [[1, 0, 0, 0, 0], [0, 0, 0, 0, 0], [1, 1, 1, 1, 1], [0, 0, 0, 0, 0]])
    assert mat_rank(kb) == 4
    assert mat_rank(hb) == 2
    assert mat_rank(Mat.zeros(ctx, 3, 3)) == 0


def test_solve_identity_and_inconsistent():
    ctx = gf(7)
    b = Mat.from_rows(ctx, [[1, 2, 3], [4, 5, 6]])
    assert mat_solve_right(Mat.identity(ctx, 3), b) == b
    a = Mat.from_rows(ctx, [[1, 0], [0, 0]])
    assert mat_solve_right(a, Mat.from_rows(ctx, [[0, 1]])) is None


def test_solve_random_gf31():
    rng = random.Random(5)
    ctx = gf(31)
    for _ in range(20):
        a = rand_mat(ctx, 5, 7, rng)
        if mat_rank(a) < 5:
            continue
        x0 = rand_mat(ctx, 3, 5, rng)
        x = mat_solve_right(a, x0 @ a)
        assert x is not None and x @ a == x0 @ a


def test_kernel_of_identity_is_empty():
    assert mat_kernel(Mat.identity(gf(5), 4)).rows == 0


def test_image_intersect_rank_identity():
    rng = random.Random(9)
    ctx = gf(5)
    for _ in range(30):
        a, b = rand_mat(ctx, 6, 3, rng), rand_mat(ctx, 6, 3, rng)
        inter = image_intersect(a, b)
        assert inter.rows == mat_rank(a) + mat_rank(b) - mat_rank(a.hstack(b))
    a = rand_mat(ctx, 6, 3, rng)
    assert image_intersect(a, a).rows == mat_rank(a)


fields = st.sampled_from([gf(2), gf(3), gf(5), gf(31), gf(2, 3), gf(3, 2)])


@settings(max_examples=60, deadline=None)
@given(ctx=fields, data=st.data())
def test_field_axioms(ctx, data):
    el = st.integers(0, ctx.order - 1)
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    assert ctx.add(a, b) == ctx.add(b, a)
    assert ctx.mul(a, b) == ctx.mul(b, a)
    assert ctx.mul(a, ctx.add(b, c)) == ctx.add(ctx.mul(a, b), ctx.mul(a, c))
    assert ctx.add(a, ctx.neg(a)) == 0
    assert ctx.mul(ctx.mul(a, b), c) == ctx.mul(a, ctx.mul(b, c))


@settings(max_examples=40, deadline=None)
@given(ctx=fields, seed=st.integers(0, 10**6), r=st.integers(1, 5), k=st.integers(1, 5), c=st.integers(1, 5))
def test_rank_of_product_bounded(ctx, seed, r, k, c):
    rng = random.Random(seed)
    a, b = rand_mat(ctx, r, k, rng), rand_mat(ctx, k, c, rng)
    assert mat_rank(a @ b) <= min(mat_rank(a), mat_rank(b))


@settings(max_examples=40, deadline=None)
@given(ctx=fields, seed=st.integers(0, 10**6), r=st.integers(1, 5), c=st.integers(1, 5), s=st.integers(1, 3))
def test_solve_is_exact_when_found(ctx, seed, r, c, s):
    rng = random.Random(seed)
    a, b = rand_mat(ctx, r, c, rng), rand_mat(ctx, s, c, rng)
    x = mat_solve_right(a, b)
    if x is not None:
        assert x @ a == b
    else:
        assert mat_rank(a.vstack(b)) > mat_rank(a)


@settings(max_examples=40, deadline=None)
@given(ctx=fields, seed=st.integers(0, 10**6), n=st.integers(1, 5))
def test_inverse_round_trip(ctx, seed, n):
    m = rand_mat(ctx, n, n, random.Random(seed))
    inv = mat_inverse(m)
    if inv is None:
        assert mat_rank(m) < n
    else:
        assert m @ inv == Mat.identity(ctx, n)
