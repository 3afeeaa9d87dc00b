"""Toeplitz hashing, the hash-based secrecy wrapper, and rate accounting.

The hash family maps a length-k vector v = (v1, v2), with v1 of length k̄,
to v1 + T(S)·v2. T(S) is the k̄ × (k − k̄) Toeplitz matrix with
T[a, b] = S[a − b + k − k̄] (1-based indices, seed S of length k − 1).
Wrapping a message m with scramble l as (m − T·l, l) makes the hash of the
wrapped vector equal m, so the receiver recovers m by hashing.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .gf import ArithCtx, Mat, gf, mat_rank

AUDIT_CAP = 1 << 16


class HashError(ValueError):
    pass


def seed_from_int(code: int, ctx: ArithCtx, length: int) -> tuple[int, ...]:
    """Seed digits with S_1 most significant, so integer order is lexicographic."""
    q = ctx.order
    if not 0 <= code < q**length:
        raise HashError(f"seed {code:#x} out of range for {length} symbols over {ctx}")
    return tuple((code // q ** (length - 1 - i)) % q for i in range(length))


def seed_to_int(seed: Sequence[int], ctx: ArithCtx) -> int:
    code = 0
    for s in seed:
        code = code * ctx.order + s
    return code


def toeplitz_matrix(seed: Sequence[int], k: int, kbar: int, ctx: ArithCtx) -> Mat:
    """T(S), shape k̄ × (k − k̄)."""
    if not 0 < kbar <= k:
        raise HashError(f"need 0 < k̄ <= k, got k={k}, k̄={kbar}")
    if len(seed) != k - 1:
        raise HashError(f"seed must have k - 1 = {k - 1} symbols, got {len(seed)}")
    w = k - kbar
    rows = [[seed[a - b + w - 1] for b in range(w)] for a in range(kbar)]
    return Mat.from_rows(ctx, rows, cols=w)


@dataclass(frozen=True)
class ToeplitzHash:
    """Linear hash v -> (I, T(S))·v from F^k to F^k̄."""

    ctx: ArithCtx
    k: int
    kbar: int
    seed: tuple[int, ...]

    @property
    def T(self) -> Mat:
        return toeplitz_matrix(self.seed, self.k, self.kbar, self.ctx)

    @property
    def matrix(self) -> Mat:
        return Mat.identity(self.ctx, self.kbar).hstack(self.T)

    def __call__(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.k:
            raise HashError(f"hash input must have length {self.k}")
        ctx = self.ctx
        t = self.T
        out = []
        for a in range(self.kbar):
            out.append(ctx.add(v[a], ctx.dot(t.row(a), v[self.kbar:])))
        return tuple(out)

    def encoder_block(self) -> Mat:
        """[[I, −T], [0, I]], the invertible pre-image map for (m; l)."""
        ctx, kb, w = self.ctx, self.kbar, self.k - self.kbar
        top = Mat.identity(ctx, kb).hstack(-self.T)
        bottom = Mat.zeros(ctx, w, kb).hstack(Mat.identity(ctx, w))
        return top.vstack(bottom)

    def wrap(self, m: Sequence[int], l: Sequence[int]) -> tuple[int, ...]:
        """(m − T·l, l)."""
        if len(m) != self.kbar or len(l) != self.k - self.kbar:
            raise HashError("message/scramble lengths do not match the hash")
        ctx, t = self.ctx, self.T
        head = [ctx.sub(m[a], ctx.dot(t.row(a), l)) for a in range(self.kbar)]
        return tuple(head) + tuple(l)


def toeplitz_hash(seed: Sequence[int] | int, k: int, kbar: int, ctx: ArithCtx | None = None) -> ToeplitzHash:
    ctx = ctx or gf(2)
    if isinstance(seed, int):
        seed = seed_from_int(seed, ctx, k - 1)
    h = ToeplitzHash(ctx, k, kbar, tuple(seed))
    h.T  # validates dimensions
    return h


@dataclass(frozen=True)
class AuditResult:
    """Worst pairwise collision probability over the whole seed family."""

    max_collision: Fraction
    bound: Fraction
    worst_difference: tuple[int, ...] | None

    @property
    def ratio(self) -> Fraction:
        return self.max_collision / self.bound

    @property
    def ok(self) -> bool:
        return self.max_collision <= self.bound


def universal2_audit(k: int, kbar: int, ctx: ArithCtx | None = None) -> AuditResult:
    """Exhaustively measure Pr_S[h_S(x) = h_S(x')] over x ≠ x'.

    Because every hash is linear, a pair collides exactly when the hash of
    x − x' vanishes, so scanning all nonzero differences covers all pairs.
    """
    ctx = ctx or gf(2)
    q = ctx.order
    if q**k > AUDIT_CAP:
        raise HashError(f"audit over {q}^{k} inputs exceeds the cap of {AUDIT_CAP}")
    n_seeds = q ** (k - 1)
    counts: dict[tuple[int, ...], int] = {}
    diffs = [d for d in itertools.product(range(q), repeat=k) if any(d)]
    for code in range(n_seeds):
        h = toeplitz_hash(code, k, kbar, ctx)
        for d in diffs:
            if not any(h(d)):
                counts[d] = counts.get(d, 0) + 1
    worst = max(counts.items(), key=lambda kv: kv[1], default=(None, 0))
    return AuditResult(Fraction(worst[1], n_seeds), Fraction(1, q**kbar), worst[0])


# --- secrecy wrapper ------------------------------------------------------


def sacrificed_length(k: int, m2: int, l: int) -> int:
    """k̄ = k − m2·l − ⌈√l⌉."""
    kbar = k - m2 * l - math.isqrt(l - 1) - 1 if l > 0 else k
    if kbar < 1:
        raise HashError(f"k={k}, m2={m2}, l={l} leaves no room for a message (k̄={kbar})")
    return kbar


def wrap_encoder(inner: Callable[[tuple[int, ...]], Sequence[int]], h: ToeplitzHash,
                 m: Sequence[int], l: Sequence[int]) -> tuple[int, ...]:
    """Feed (m − T·l, l) to the inner encoder."""
    return tuple(inner(h.wrap(m, l)))


def wrap_decoder(h: ToeplitzHash, inner: Callable[[Sequence[int]], Sequence[int]],
                 y_b: Sequence[int]) -> tuple[int, ...]:
    """Inner decode, then hash."""
    return h(tuple(inner(y_b)))


@dataclass(frozen=True)
class WrapCode:
    """Linear inner code (flattened x = G·v) behind a Toeplitz wrapper.

    Attributes:
        gen: (m3·n) × k inner generator.
        hash: The privacy-amplification hash.
        m3, n: Channel shape of the inner code.
    """

    gen: Mat
    hash: ToeplitzHash
    m3: int
    n: int

    def encode(self, m: Sequence[int], l: Sequence[int]) -> tuple[int, ...]:
        return wrap_encoder(lambda v: (self.gen @ Mat.column(self.gen.ctx, v)).col(0), self.hash, m, l)

    def overall_generator(self) -> Mat:
        """G·[[I, −T],[0, I]]: the linear map from (m; l) to the channel input."""
        return self.gen @ self.hash.encoder_block()

    def as_code(self):
        from .attack import linear_code

        return linear_code(self.gen.ctx, self.overall_generator(), self.hash.kbar, self.n)


def eve_view_matrix(ke: Mat, n: int) -> Mat:
    """I_n ⊗ K_E in the column-by-column flattening."""
    rows = []
    for t in range(n):
        for r in ke.to_rows():
            row = [0] * (ke.cols * n)
            row[t * ke.cols:(t + 1) * ke.cols] = r
            rows.append(row)
    return Mat.from_rows(ke.ctx, rows, cols=ke.cols * n)


def linear_leak(view: Mat, kbar: int) -> int:
    """I(M; V·(m; l)) in units of log q for uniform independent m and l.

    Equals rank(V) − rank(V restricted to the scramble columns).
    """
    return mat_rank(view) - mat_rank(view.take_cols(range(kbar, view.cols)))


@dataclass(frozen=True)
class SeedSearchResult:
    """Outcome of a lexicographic seed scan.

    Attributes:
        seed: Winning (or best) seed.
        found: Whether the seed leaks nothing against the whole family.
        leak: Worst leak of that seed over the family, in units of log q.
        witness: A family member attaining that leak (None when found).
        scanned: Number of seeds examined.
    """

    seed: tuple[int, ...]
    found: bool
    leak: int
    witness: Mat | None
    scanned: int


def seed_search(gen: Mat, k: int, kbar: int, family: Sequence[Mat], n: int,
                max_seeds: int | None = None) -> SeedSearchResult:
    """Scan seeds in lexicographic order for one that leaks nothing.

    Args:
        gen: Inner generator, (m3·n) × k.
        k, kbar: Hash input and output lengths.
        family: Candidate K_E matrices (each m6 × m3).
        n: Block length.
        max_seeds: Optional cap on the number of seeds tried.

    Returns:
        The first zero-leak seed, or the seed with the smallest worst-case
        leak together with the K_E attaining it.
    """
    if not family:
        raise HashError("empty K_E family")
    ctx = gen.ctx
    views = [eve_view_matrix(ke, n) @ gen for ke in family]
    total = ctx.order ** (k - 1)
    limit = total if max_seeds is None else min(total, max_seeds)
    best = None
    for code in range(limit):
        h = toeplitz_hash(code, k, kbar, ctx)
        block = h.encoder_block()
        worst, wit = 0, None
        for ke, v in zip(family, views):
            leak = linear_leak(v @ block, kbar)
            if leak > worst:
                worst, wit = leak, ke
                if best is not None and worst >= best.leak:
                    break
        if worst == 0:
            return SeedSearchResult(h.seed, True, 0, None, code + 1)
        if best is None or worst < best.leak:
            best = SeedSearchResult(h.seed, False, worst, wit, code + 1)
    return SeedSearchResult(best.seed, False, best.leak, best.witness, limit)


def rank_one_family(ctx: ArithCtx, m3: int, rank: int = 1) -> list[Mat]:
    """Every rank-``rank`` K_E with ``rank`` rows, up to row-space equality."""
    seen, out = set(), []
    from .gf import row_basis

    for entries in itertools.product(ctx.elements(), repeat=rank * m3):
        m = Mat(ctx, rank, m3, tuple(entries))
        if mat_rank(m) != rank:
            continue
        key = row_basis(m).entries
        if key not in seen:
            seen.add(key)
            out.append(m)
    return out


@dataclass(frozen=True)
class MarkovRow:
    c: int
    threshold: float
    violating_fraction: Fraction
    bound: Fraction

    @property
    def ok(self) -> bool:
        return self.violating_fraction <= self.bound


def markov_audit(leaks_nats: Sequence[float], l: int, q: int, cs: Iterable[int]) -> list[MarkovRow]:
    """Compare the seed fraction with leak above q^{−⌈√l⌉+c+1} against q^{−c−1}.

    Args:
        leaks_nats: Leak of every seed in the family, in nats.
        l: Block length.
        q: Field size.
        cs: Slack exponents to test.
    """
    root = math.isqrt(l - 1) + 1 if l > 0 else 0
    rows = []
    for c in cs:
        thr = float(q) ** (-root + c + 1)
        bad = sum(1 for v in leaks_nats if v > thr + 1e-12)
        rows.append(MarkovRow(c, thr, Fraction(bad, len(leaks_nats)), Fraction(1, q ** (c + 1))))
    return rows


# --- rate accounting ------------------------------------------------------


class Regime(str, enum.Enum):
    SECRECY_ROBUST = "secrecy+robustness"
    SECRECY = "secrecy-only"
    ROBUST = "robustness-only"


@dataclass(frozen=True)
class RateReport:
    regime: Regime
    m0: int
    m1: int
    m2: int
    raw: int

    @property
    def guaranteed(self) -> bool:
        return self.raw > 0

    @property
    def rate(self) -> int:
        return self.raw if self.guaranteed else 0

    def __str__(self) -> str:
        if not self.guaranteed:
            return f"{self.regime.value}: not guaranteed ({self.raw})"
        return f"{self.regime.value}: {self.rate}"


def rate_report(m0: int, m1: int, m2: int, regime: Regime | str) -> RateReport:
    """Achievable symbols per channel use in each regime.

    secrecy+robustness gives m0 − m1 − m2, secrecy-only m0 − m2 and
    robustness-only m0 − m1. A result of zero or below is reported as not
    guaranteed.
    """
    regime = Regime(regime)
    raw = {
        Regime.SECRECY_ROBUST: m0 - m1 - m2,
        Regime.SECRECY: m0 - m2,
        Regime.ROBUST: m0 - m1,
    }[regime]
    return RateReport(regime, m0, m1, m2, raw)
