"""Exact arithmetic over GF(p), GF(p^t) and Z_d, plus a small dense matrix kit.

Elements are plain Python ints. Extension-field elements use the little-endian
base-p code of their polynomial representative, so ``1 + x`` over GF(2) is 3.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence


class ArithError(ValueError):
    """Raised for invalid contexts and malformed matrix operations."""


class UnsupportedOperation(ArithError):
    """Raised when an operation needs a field but the context is a ring."""


class Kind(str, enum.Enum):
    PRIME = "prime-field"
    EXTENSION = "extension-field"
    RING = "modular-ring"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# --- polynomials over GF(p), little-endian coefficient lists ---------------


def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], f: Sequence[int], p: int) -> list[int]:
    a = _ptrim([c % p for c in a])
    df = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _ptrim(a)
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _ptrim(out)


def _ppowmod(base: list[int], e: int, f: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, f, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), f, p)
        base = _pmod(_pmul(base, base, p), f, p)
        e >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Rabin's irreducibility test for a monic polynomial over GF(p).

    Args:
        poly: Little-endian coefficients, leading coefficient 1.
        p: Field characteristic (prime).

    Returns:
        True when ``poly`` has no nontrivial factor over GF(p).
    """
    f = _ptrim([c % p for c in poly])
    t = len(f) - 1
    if t < 1:
        return False
    if t == 1:
        return True
    x = [0, 1]
    # x^(p^t) == x mod f
    xp = x
    for _ in range(t):
        xp = _ppowmod(xp, p, f, p)
    if _ptrim([(a - b) % p for a, b in itertools.zip_longest(xp, x, fillvalue=0)]):
        return False
    for r in _prime_factors(t):
        xp = x
        for _ in range(t // r):
            xp = _ppowmod(xp, p, f, p)
        diff = _ptrim([(a - b) % p for a, b in itertools.zip_longest(xp, x, fillvalue=0)])
        if len(_pgcd(f, diff, p)) != 1:
            return False
    return True


def smallest_irreducible(p: int, t: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree t over GF(p).

    Candidates are scanned in increasing order of the base-p code of their
    lower coefficients, which orders them lexicographically from the top
    coefficient down.
    """
    for code in range(p**t):
        low = [(code // p**i) % p for i in range(t)]
        poly = low + [1]
        if is_irreducible(poly, p):
            return tuple(poly)
    raise ArithError(f"no irreducible polynomial of degree {t} over GF({p})")


# --- arithmetic context ----------------------------------------------------

_TABLE_LIMIT = 1 << 16


@lru_cache(maxsize=None)
def _log_tables(p: int, poly: tuple[int, ...]) -> tuple[list[int], list[int]]:
    """exp/log tables for GF(p^t) built from a primitive element."""
    t = len(poly) - 1
    q = p**t

    def mul_raw(a: int, b: int) -> int:
        return _encode(_pmod(_pmul(_decode(a, p, t), _decode(b, p, t), p), poly, p), p)

    order = q - 1
    factors = _prime_factors(order)
    for g in range(2, q):
        ok = True
        for r in factors:
            e, acc, base = order // r, 1, g
            while e:
                if e & 1:
                    acc = mul_raw(acc, base)
                base = mul_raw(base, base)
                e >>= 1
            if acc == 1:
                ok = False
                break
        if ok:
            break
    exp = [0] * (2 * order)
    log = [0] * q
    acc = 1
    for i in range(order):
        exp[i] = acc
        log[acc] = i
        acc = mul_raw(acc, g)
    for i in range(order, 2 * order):
        exp[i] = exp[i - order]
    return exp, log


def _decode(code: int, p: int, t: int) -> list[int]:
    return _ptrim([(code // p**i) % p for i in range(t)])


def _encode(coeffs: Sequence[int], p: int) -> int:
    return sum(c * p**i for i, c in enumerate(coeffs))


@dataclass(frozen=True)
class ArithCtx:
    """Arithmetic context for GF(p), GF(p^t) or Z_d.

    Attributes:
        kind: Which algebra the context describes.
        p: Characteristic for fields, modulus d for rings.
        t: Extension degree (1 unless kind is EXTENSION).
        poly: Little-endian reduction polynomial for extension fields.
    """

    kind: Kind
    p: int
    t: int = 1
    poly: tuple[int, ...] = field(default=())

    @property
    def order(self) -> int:
        return self.p**self.t

    @property
    def is_field(self) -> bool:
        return self.kind is not Kind.RING

    def elements(self) -> range:
        return range(self.order)

    def __str__(self) -> str:
        if self.kind is Kind.RING:
            return f"Z_{self.p}"
        if self.kind is Kind.EXTENSION:
            return f"GF({self.p}^{self.t})"
        return f"GF({self.p})"

    # element arithmetic
    def add(self, a: int, b: int) -> int:
        if self.t == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return _encode(
            [(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))], self.p
        )

    def neg(self, a: int) -> int:
        if self.t == 1:
            return -a % self.p
        if self.p == 2:
            return a
        return _encode([-x % self.p for x in self._digits(a)], self.p)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.t == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        if self.order <= _TABLE_LIMIT:
            exp, log = _log_tables(self.p, self.poly)
            return exp[log[a] + log[b]]
        return _encode(
            _pmod(_pmul(_decode(a, self.p, self.t), _decode(b, self.p, self.t), self.p),
                  self.poly, self.p),
            self.p,
        )

    def inv(self, a: int) -> int:
        if a == 0 or (self.t == 1 and a % self.p == 0):
            raise ZeroDivisionError(f"0 has no inverse in {self}")
        if self.kind is Kind.RING:
            try:
                return pow(a, -1, self.p)
            except ValueError:
                raise ZeroDivisionError(f"{a} is not a unit in {self}") from None
        if self.t == 1:
            return pow(a, self.p - 2, self.p)
        if self.order <= _TABLE_LIMIT:
            exp, log = _log_tables(self.p, self.poly)
            return exp[(self.order - 1 - log[a]) % (self.order - 1)]
        return self.pow(a, self.order - 2)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.t == 1:
            return pow(a, e, self.p)
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def _digits(self, a: int) -> list[int]:
        return [(a // self.p**i) % self.p for i in range(self.t)]

    def dot(self, xs: Iterable[int], ys: Iterable[int]) -> int:
        if self.t == 1:
            return sum(x * y for x, y in zip(xs, ys)) % self.p
        acc = 0
        for x, y in zip(xs, ys):
            if x and y:
                acc = self.add(acc, self.mul(x, y))
        return acc


def ctx_make(kind: Kind | str, p: int, t: int = 1) -> ArithCtx:
    """Build an arithmetic context.

    Args:
        kind: ``"prime-field"``, ``"extension-field"`` or ``"modular-ring"``.
        p: Prime characteristic for fields, modulus d >= 2 for rings.
        t: Extension degree; ignored (must be 1) for the other kinds.

    Returns:
        The context. Extension fields use the lexicographically smallest
        monic irreducible of degree t as their reduction polynomial.
    """
    kind = Kind(kind)
    if t < 1:
        raise ArithError("degree t must be at least 1")
    if kind is Kind.RING:
        if p < 2:
            raise ArithError("ring modulus must be at least 2")
        if t != 1:
            raise ArithError("rings take no extension degree")
        return ArithCtx(Kind.RING, p)
    if not is_prime(p):
        raise ArithError(f"field characteristic {p} is not prime")
    if kind is Kind.PRIME or t == 1:
        if t != 1:
            raise ArithError("prime fields take no extension degree")
        return ArithCtx(Kind.PRIME, p)
    if p**t > 1 << 32:
        raise ArithError("fields larger than 2^32 elements are not supported")
    return ArithCtx(Kind.EXTENSION, p, t, smallest_irreducible(p, t))


def gf(p: int, t: int = 1) -> ArithCtx:
    """Shorthand for GF(p) or GF(p^t)."""
    return ctx_make(Kind.PRIME if t == 1 else Kind.EXTENSION, p, t)


def zmod(d: int) -> ArithCtx:
    return ctx_make(Kind.RING, d)


# --- matrices -------------------------------------------------------------


@dataclass(frozen=True)
class Mat:
    """Immutable dense matrix over an arithmetic context (row-major entries)."""

    ctx: ArithCtx
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ArithError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, ctx: ArithCtx, rows: Sequence[Sequence[int]], cols: int | None = None) -> Mat:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ArithError("ragged rows")
        q = ctx.order
        flat = tuple(int(v) % q if ctx.t == 1 else int(v) for v in itertools.chain.from_iterable(rows))
        if ctx.t > 1 and any(not 0 <= v < q for v in flat):
            raise ArithError(f"entry out of range for {ctx}")
        return cls(ctx, len(rows), cols, flat)

    @classmethod
    def zeros(cls, ctx: ArithCtx, rows: int, cols: int) -> Mat:
        return cls(ctx, rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, ctx: ArithCtx, n: int) -> Mat:
        return cls(ctx, n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def column(cls, ctx: ArithCtx, values: Sequence[int]) -> Mat:
        return cls.from_rows(ctx, [[v] for v in values], cols=1)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def T(self) -> Mat:
        return Mat(self.ctx, self.cols, self.rows,
                   tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)))

    @property
    def is_zero(self) -> bool:
        return not any(self.entries)

    def _check(self, other: Mat):
        if other.ctx != self.ctx:
            raise ArithError(f"context mismatch: {self.ctx} vs {other.ctx}")

    def __add__(self, other: Mat) -> Mat:
        self._check(other)
        if self.shape != other.shape:
            raise ArithError(f"shape mismatch {self.shape} + {other.shape}")
        add = self.ctx.add
        return Mat(self.ctx, self.rows, self.cols, tuple(add(a, b) for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> Mat:
        return Mat(self.ctx, self.rows, self.cols, tuple(self.ctx.neg(a) for a in self.entries))

    def __sub__(self, other: Mat) -> Mat:
        return self + (-other)

    def scale(self, c: int) -> Mat:
        return Mat(self.ctx, self.rows, self.cols, tuple(self.ctx.mul(c, a) for a in self.entries))

    def __matmul__(self, other: Mat) -> Mat:
        self._check(other)
        if self.cols != other.rows:
            raise ArithError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = [other.col(j) for j in range(other.cols)]
        dot = self.ctx.dot
        out = []
        for i in range(self.rows):
            r = self.row(i)
            out.extend(dot(r, c) for c in cols)
        return Mat(self.ctx, self.rows, other.cols, tuple(out))

    def hstack(self, other: Mat) -> Mat:
        self._check(other)
        if self.rows != other.rows:
            raise ArithError("hstack needs equal row counts")
        return Mat.from_rows(self.ctx, [self.row(i) + other.row(i) for i in range(self.rows)],
                             cols=self.cols + other.cols)

    def vstack(self, other: Mat) -> Mat:
        self._check(other)
        if self.cols != other.cols:
            raise ArithError("vstack needs equal column counts")
        return Mat(self.ctx, self.rows + other.rows, self.cols, self.entries + other.entries)

    def take_rows(self, idx: Sequence[int]) -> Mat:
        return Mat.from_rows(self.ctx, [self.row(i) for i in idx], cols=self.cols)

    def take_cols(self, idx: Sequence[int]) -> Mat:
        return Mat.from_rows(self.ctx, [[self[i, j] for j in idx] for i in range(self.rows)], cols=len(idx))

    def __str__(self) -> str:
        return "\n".join(" ".join(str(v) for v in self.row(i)) for i in range(self.rows))


def _require_field(ctx: ArithCtx, what: str):
    if not ctx.is_field:
        raise UnsupportedOperation(f"{what} is not supported over the ring {ctx}")


def _rref(ctx: ArithCtx, rows: list[list[int]], ncols: int | None = None) -> tuple[list[list[int]], list[int]]:
    """In-place reduced row echelon form over a field.

    Columns are scanned left to right; the pivot for each column is the
    lowest-index remaining row with a nonzero entry. Only the first ``ncols``
    columns are used for pivots (the rest ride along as an augmentation).

    Returns:
        The reduced rows and the list of pivot columns.
    """
    if not rows:
        return rows, []
    width = len(rows[0]) if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    prime = ctx.t == 1
    p = ctx.p
    for c in range(width):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = ctx.inv(rows[r][c])
        if prime:
            rows[r] = [v * inv % p for v in rows[r]]
        else:
            rows[r] = [ctx.mul(v, inv) for v in rows[r]]
        pr = rows[r]
        for i in range(len(rows)):
            f = rows[i][c]
            if i != r and f:
                if prime:
                    rows[i] = [(a - f * b) % p for a, b in zip(rows[i], pr)]
                else:
                    rows[i] = [ctx.sub(a, ctx.mul(f, b)) for a, b in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def mat_rank(m: Mat) -> int:
    """Rank of ``m`` over its field (rings are rejected)."""
    _require_field(m.ctx, "rank")
    _, piv = _rref(m.ctx, m.to_rows())
    return len(piv)


def mat_inverse(m: Mat) -> Mat | None:
    """Inverse of a square matrix, or None when singular."""
    _require_field(m.ctx, "inverse")
    if m.rows != m.cols:
        raise ArithError("inverse needs a square matrix")
    n = m.rows
    aug = [list(m.row(i)) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    red, piv = _rref(m.ctx, aug, ncols=n)
    if len(piv) < n:
        return None
    return Mat.from_rows(m.ctx, [r[n:] for r in red], cols=n)


def mat_solve_right(a: Mat, b: Mat) -> Mat | None:
    """Solve X·A = B.

    Args:
        a: r×c matrix.
        b: s×c matrix.

    Returns:
        An s×r matrix X with X·A = B and all free variables set to 0, or
        None when the system is inconsistent.
    """
    _require_field(a.ctx, "solve")
    a._check(b)
    if a.cols != b.cols:
        raise ArithError(f"X·A = B needs equal column counts, got {a.shape} and {b.shape}")
    ctx, r = a.ctx, a.rows
    # transpose: A^T X^T = B^T, augment with all right-hand sides at once
    at = a.T
    bt = b.T
    aug = [list(at.row(i)) + list(bt.row(i)) for i in range(at.rows)]
    red, piv = _rref(ctx, aug, ncols=r)
    npiv = len(piv)
    for row in red[npiv:]:
        if any(row[r:]):
            return None
    xt = [[0] * b.rows for _ in range(r)]
    for k, c in enumerate(piv):
        xt[c] = red[k][r:]
    return Mat.from_rows(ctx, xt, cols=b.rows).T


def mat_kernel(m: Mat) -> Mat:
    """Basis of the right kernel {x : M·x = 0}, one basis vector per row."""
    _require_field(m.ctx, "kernel")
    ctx = m.ctx
    red, piv = _rref(ctx, m.to_rows())
    free = [c for c in range(m.cols) if c not in set(piv)]
    basis = []
    for f in free:
        v = [0] * m.cols
        v[f] = 1
        for k, c in enumerate(piv):
            v[c] = ctx.neg(red[k][f])
        basis.append(v)
    return Mat.from_rows(ctx, basis, cols=m.cols)


def row_basis(m: Mat) -> Mat:
    """Reduced basis of the row space of ``m``."""
    _require_field(m.ctx, "row basis")
    red, piv = _rref(m.ctx, m.to_rows())
    return Mat.from_rows(m.ctx, red[:len(piv)], cols=m.cols)


def image_intersect(a: Mat, b: Mat) -> Mat:
    """Basis (as rows) of im A ∩ im B, the intersection of column spaces."""
    _require_field(a.ctx, "image intersection")
    a._check(b)
    if a.rows != b.rows:
        raise ArithError("column spaces live in different dimensions")
    ker = mat_kernel(a.hstack(-b))
    if ker.rows == 0:
        return Mat.zeros(a.ctx, 0, a.rows)
    u = ker.take_cols(range(a.cols))
    vecs = (a @ u.T).T
    return row_basis(vecs)
