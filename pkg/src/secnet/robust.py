"""Robust code with a Vandermonde secret header.

Alice mixes X = [M; 0] with a random invertible U0 and shares the secrets
V1..Vm and U2 = M·U1 with Bob out of band, where U1[i, j] = V_j^i. Bob keeps
a basis Ȳ of the rows he receives, solves U3·Ȳ·U1 = U2 and outputs U3·Ȳ.
Bob never needs the channel matrices.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .gf import ArithCtx, Mat, gf, mat_rank, mat_solve_right


class RobustError(ValueError):
    pass


def _rand_mat(ctx: ArithCtx, rng: np.random.Generator, rows: int, cols: int) -> Mat:
    vals = rng.integers(0, ctx.order, size=rows * cols)
    return Mat(ctx, rows, cols, tuple(int(v) for v in vals))


def random_invertible(ctx: ArithCtx, rng: np.random.Generator, n: int) -> Mat:
    while True:
        m = _rand_mat(ctx, rng, n, n)
        if mat_rank(m) == n:
            return m


def random_of_rank(ctx: ArithCtx, rng: np.random.Generator, rows: int, cols: int, rank: int) -> Mat:
    """Uniform-ish matrix of exact rank, as a product of full-rank factors."""
    if rank > min(rows, cols):
        raise RobustError(f"rank {rank} impossible for a {rows}x{cols} matrix")
    while True:
        m = _rand_mat(ctx, rng, rows, rank) @ _rand_mat(ctx, rng, rank, cols)
        if mat_rank(m) == rank:
            return m


def vandermonde(ctx: ArithCtx, vs: tuple[int, ...], n: int) -> Mat:
    """n × m matrix with entry (i, j) = V_j^i for i = 1..n."""
    rows = [[ctx.pow(v, i) for v in vs] for i in range(1, n + 1)]
    return Mat.from_rows(ctx, rows, cols=len(vs))


@dataclass(frozen=True)
class RobustCode:
    """Code parameters and the sampled secrets.

    Attributes:
        ctx: Field GF(q').
        m0, m1: Rank of Alice's channel and of Eve's injection.
        m3, m4: Alice's and Bob's edge counts.
        n: Block length.
        vs: Secrets V1..Vm with m = m0 + 1.
        u0: Invertible m3 × m3 mixing matrix.
    """

    ctx: ArithCtx
    m0: int
    m1: int
    m3: int
    m4: int
    n: int
    vs: tuple[int, ...]
    u0: Mat

    def __post_init__(self):
        if len(self.vs) != self.m0 + 1:
            raise RobustError(f"need m0 + 1 = {self.m0 + 1} secrets, got {len(self.vs)}")
        if not 0 <= self.m1 < self.m0 <= min(self.m3, self.m4):
            raise RobustError("need 0 <= m1 < m0 <= min(m3, m4)")

    @property
    def k(self) -> int:
        """Message rows m0 − m1."""
        return self.m0 - self.m1

    @property
    def u1(self) -> Mat:
        return vandermonde(self.ctx, self.vs, self.n)

    @classmethod
    def sample(cls, ctx: ArithCtx, m0: int, m1: int, m3: int, m4: int, n: int,
               rng: np.random.Generator, distinct: bool = False) -> RobustCode:
        """Draw V's i.i.d. uniform (or distinct when ``distinct``) and U0."""
        if n ** (m0 + 1) >= ctx.order:
            warnings.warn(f"q'={ctx.order} is not much larger than n^(m0+1)={n ** (m0 + 1)}", stacklevel=2)
        if distinct:
            if ctx.order < m0 + 1:
                raise RobustError("field too small for distinct secrets")
            vs = tuple(int(v) for v in rng.choice(ctx.order, size=m0 + 1, replace=False))
        else:
            vs = tuple(int(v) for v in rng.integers(0, ctx.order, size=m0 + 1))
        return cls(ctx, m0, m1, m3, m4, n, vs, random_invertible(ctx, rng, m3))


@dataclass(frozen=True)
class SecretPackage:
    vs: tuple[int, ...]
    u2: Mat


def robust_encode(code: RobustCode, m: Mat) -> tuple[Mat, SecretPackage]:
    """Return the channel input U0·[M; 0] and the out-of-band package."""
    if m.shape != (code.k, code.n):
        raise RobustError(f"message must be {code.k}x{code.n}, got {m.shape}")
    x = m.vstack(Mat.zeros(code.ctx, code.m3 - code.k, code.n))
    return code.u0 @ x, SecretPackage(code.vs, m @ code.u1)


@dataclass(frozen=True)
class DecodeTrace:
    """What the decoder did.

    Attributes:
        rank: m̄0, the rank of the received block.
        rows: Indices of the rows kept as Ȳ.
        u3: Solution of U3·Ȳ·U1 = U2, or None.
        m_hat: Decoded message, or None.
        success: Whether decoding produced the right message (set by callers
            that know M; the decoder itself only reports solvability).
        failed: "none", "solve", or the first violated condition.
    """

    rank: int
    rows: tuple[int, ...]
    u3: Mat | None
    m_hat: Mat | None
    success: bool
    failed: str = "none"


def independent_rows(y: Mat) -> tuple[int, ...]:
    """Greedy lowest-index basis of the row space."""
    kept: list[int] = []
    for i in range(y.rows):
        if mat_rank(y.take_rows(kept + [i])) == len(kept) + 1:
            kept.append(i)
    return tuple(kept)


def robust_decode(code: RobustCode, y_b: Mat, package: SecretPackage) -> DecodeTrace:
    """Decode from Bob's block and the secret package alone."""
    if y_b.shape != (code.m4, code.n):
        raise RobustError(f"Y_B must be {code.m4}x{code.n}, got {y_b.shape}")
    rows = independent_rows(y_b)
    ybar = y_b.take_rows(rows)
    u1 = vandermonde(code.ctx, package.vs, code.n)
    u3 = mat_solve_right(ybar @ u1, package.u2)
    if u3 is None:
        return DecodeTrace(len(rows), rows, None, None, False, "solve")
    return DecodeTrace(len(rows), rows, u3, u3 @ ybar, True)


@dataclass(frozen=True)
class Conditions:
    f1a: bool  # im(K_B U0 P) ∩ im Ĥ_B = {0}
    f1b: bool  # K_B U0 P is injective on the column space of M
    f2: bool  # right-multiplying [M; Ẑ] by U1 keeps its rank

    @property
    def all(self) -> bool:
        return self.f1a and self.f1b and self.f2

    def first_failure(self) -> str:
        for name, ok in (("F1'", self.f1a), ("F1''", self.f1b), ("F2", self.f2)):
            if not ok:
                return name
        return "none"


def check_conditions(code: RobustCode, kb: Mat, hb: Mat, m: Mat, z: Mat) -> Conditions:
    """Evaluate the sufficient decoding conditions with full model knowledge."""
    ctx = code.ctx
    p = Mat.identity(ctx, code.k).vstack(Mat.zeros(ctx, code.m3 - code.k, code.k))
    a = kb @ code.u0 @ p
    ra, rh = mat_rank(a), mat_rank(hb)
    f1a = mat_rank(a.hstack(hb)) == ra + rh
    f1b = mat_rank(a @ m) == mat_rank(m)
    mz = m.vstack(z)
    f2 = mat_rank(mz @ code.u1) == mat_rank(mz)
    return Conditions(f1a, f1b, f2)


# --- Monte Carlo ----------------------------------------------------------


@dataclass(frozen=True)
class TrialResult:
    trial: int
    cond: Conditions
    success: bool
    failed: str


def run_trial(ctx: ArithCtx, m0: int, m1: int, m3: int, m4: int, n: int, seed: int, trial: int,
              m2: int = 1) -> TrialResult:
    """One adversarial trial with its own RNG stream.

    K_B has rank m0. Eve's injection direction Ĥ_B = K_B·W lies inside
    Bob's receivable space, and her injected rows Ẑ = G·Y_E + R mix what she
    overhears on m2 edges with fresh noise.
    """
    rng = np.random.default_rng([seed, trial])
    code = RobustCode.sample(ctx, m0, m1, m3, m4, n, rng)
    msg = _rand_mat(ctx, rng, code.k, n)
    x_in, pkg = robust_encode(code, msg)
    kb = random_of_rank(ctx, rng, m4, m3, m0)
    hb = kb @ random_of_rank(ctx, rng, m3, m1, m1) if m1 else Mat.zeros(ctx, m4, 0)
    ke = _rand_mat(ctx, rng, m2, m3)
    z = _rand_mat(ctx, rng, m1, m2) @ (ke @ x_in) + _rand_mat(ctx, rng, m1, n)
    y_b = kb @ x_in + hb @ z
    trace = robust_decode(code, y_b, pkg)
    cond = check_conditions(code, kb, hb, msg, z)
    ok = trace.m_hat is not None and trace.m_hat == msg
    if ok:
        failed = "none"
    elif trace.failed == "solve":
        failed = "solve"
    else:
        failed = cond.first_failure()
        if failed == "none":
            # only possible if the decoding conditions were insufficient
            raise AssertionError(f"trial {trial}: all conditions hold but decoding failed")
    return TrialResult(trial, cond, ok, failed)


def run_trials(ctx: ArithCtx, m0: int, m1: int, m3: int, m4: int, n: int, trials: int,
               seed: int) -> Iterator[TrialResult]:
    for t in range(trials):
        yield run_trial(ctx, m0, m1, m3, m4, n, seed, t)


def failure_bound(q: int, n: int, m0: int, m1: int) -> dict[str, float]:
    """Union bound on the failure probability, term by term.

    F2 fails with probability at most n^(m0+1)/q'. The F1' and F1'' terms
    are one minus the products of (1 − q'^t) factors; the F1'' term uses the
    largest possible message rank m0 − m1.
    """
    f2 = n ** (m0 + 1) / q
    f1a = 1 - math.prod(1 - float(q) ** t for t in range(m1 - m0, 0))
    f1b = 1 - math.prod(1 - float(q) ** (-m0 + s) for s in range(m0 - m1))
    return {"F2": f2, "F1'": f1a, "F1''": f1b, "total": f2 + f1a + f1b}


@dataclass(frozen=True)
class MonteCarloSummary:
    trials: int
    failures: int
    implication_holds: int
    bound: float

    @property
    def rate(self) -> float:
        return self.failures / self.trials

    @property
    def sigma(self) -> float:
        b = min(self.bound, 1.0)
        return math.sqrt(b * (1 - b) / self.trials)

    @property
    def consistent(self) -> bool:
        """Empirical failure rate does not exceed the bound by more than 3σ.

        A bound of 1 or more says nothing, so any rate is consistent with it.
        """
        return self.bound >= 1 or self.rate <= self.bound + 3 * self.sigma


def summarize(results: list[TrialResult], q: int, n: int, m0: int, m1: int) -> MonteCarloSummary:
    fails = sum(not r.success for r in results)
    impl = sum(1 for r in results if not r.cond.all or r.success)
    return MonteCarloSummary(len(results), fails, impl, failure_bound(q, n, m0, m1)["total"])


# --- collision audit ------------------------------------------------------


def _poly_eval_mod(coeffs: np.ndarray, v: np.ndarray, q: int) -> np.ndarray:
    """Σ_i coeffs[i-1]·v^i mod q for i = 1..n, by Horner."""
    acc = np.zeros_like(v)
    for c in coeffs[::-1]:
        acc = (acc + int(c)) * v % q
    return acc


def worst_case_difference(n: int, q: int) -> np.ndarray:
    """Coefficients of x·(x−1)…(x−n+1) without its zero constant term.

    This polynomial has n distinct roots, so a collision happens whenever
    every V_j is one of them, with probability exactly (n/q')^m.
    """
    poly = [1]  # ascending coefficients
    for r in range(n):
        nxt = [0] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i + 1] = (nxt[i + 1] + c) % q
            nxt[i] = (nxt[i] - r * c) % q
        poly = nxt
    return np.array(poly[1:], dtype=np.int64)


@dataclass(frozen=True)
class CollisionRow:
    label: str
    hits: int
    trials: int
    bound: float
    exact: float | None

    @property
    def rate(self) -> float:
        return self.hits / self.trials

    @property
    def sigma(self) -> float:
        return math.sqrt(self.bound * (1 - self.bound) / self.trials)

    @property
    def within(self) -> bool:
        return self.rate <= self.bound + 3 * self.sigma


def lja_audit(n: int, m: int, q: int, trials: int, seed: int = 0, random_pairs: int = 4) -> list[CollisionRow]:
    """Empirical Pr{x·U1 = x'·U1} for several differences x − x'.

    A collision means the polynomial Σ_i (x − x')_i·t^i vanishes at every
    V_j. Rows cover the worst-case difference, a unit vector, and a few
    random differences. Requires a prime q'.
    """
    if trials < 1:
        raise RobustError("trials must be positive")
    rng = np.random.default_rng([seed, 0])
    bound = min(1.0, (n / q) ** m)
    diffs: list[tuple[str, np.ndarray, float | None]] = [
        ("worst", worst_case_difference(n, q), (min(n, q) / q) ** m),
        ("unit", np.eye(1, n, 0, dtype=np.int64)[0], (1 / q) ** m),
    ]
    for r in range(random_pairs):
        d = np.zeros(n, dtype=np.int64)
        while not d.any():
            d = rng.integers(0, q, size=n)
        diffs.append((f"random{r}", d, None))
    rows = []
    for k, (label, d, exact) in enumerate(diffs):
        vs = np.random.default_rng([seed, k + 1]).integers(0, q, size=(trials, m), dtype=np.int64)
        hits = int(np.all(_poly_eval_mod(d, vs, q) == 0, axis=1).sum())
        rows.append(CollisionRow(label, hits, trials, bound, exact))
    return rows


def default_field(q: int) -> ArithCtx:
    """GF(q') for the offered sizes: a prime, or 65536 for GF(2^16)."""
    if q == 1 << 16:
        return gf(2, 16)
    return gf(q)

