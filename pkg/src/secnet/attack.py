"""Passive and active eavesdropping simulated by exhaustive enumeration.

Symbols of an n-transmission block are flattened column by column: position
``t*m + j`` (0-based) holds coordinate j of transmission t. Strategy windows
use the same flattening, 1-based.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .dist import JointDist, is_function_of
from .gf import ArithCtx, Kind, Mat, mat_inverse
from .netmodel import ModelKind, NetworkSpec, TransferModel, check_causal, compile_model, compile_passive, simulate_edges

DEFAULT_BUDGET = 1 << 24
SEARCH_CAP = 1 << 20


class BudgetError(RuntimeError):
    """Enumeration would exceed the configured budget."""


class UniquenessViolation(RuntimeError):
    """The strategy fixed point has zero or several solutions for some input."""

    def __init__(self, msg: str, m: int | None = None, l: int | None = None, count: int | None = None):
        self.m, self.l, self.count = m, l, count
        super().__init__(msg)


# --- codes ----------------------------------------------------------------


def _digits(v: int, q: int, k: int) -> list[int]:
    return [(v // q**i) % q for i in range(k)]


@dataclass(frozen=True)
class Code:
    """Encoder (and optional decoder) over an n-transmission block.

    Attributes:
        ctx: Symbol alphabet.
        m3: Channel inputs per transmission.
        n: Transmissions per block.
        n_messages: |M|; messages are 0..|M|-1.
        n_scrambles: |L|; scrambles are uniform on 0..|L|-1.
        encoder: (m, l) -> flattened channel input of length m3·n.
        decoder: Optional flattened Y_B -> m.
        message_probs: Optional message distribution (uniform when None).
        gen, k_msg: Generator and message length of a linear code; they
            enable the vectorized enumeration path.
    """

    ctx: ArithCtx
    m3: int
    n: int
    n_messages: int
    n_scrambles: int
    encoder: Callable[[int, int], tuple[int, ...]]
    decoder: Callable[[tuple[int, ...]], int] | None = None
    message_probs: tuple[Fraction, ...] | None = None
    gen: Mat | None = None
    k_msg: int = 0

    def inputs(self, budget: int = DEFAULT_BUDGET):
        """Yield (m, l, integer weight, x) for every message/scramble pair."""
        size = self.n_messages * self.n_scrambles
        if size > budget:
            raise BudgetError(f"{size} message/scramble pairs exceed the budget of {budget}")
        if self.message_probs is None:
            weights = [1] * self.n_messages
        else:
            probs = [Fraction(p) for p in self.message_probs]
            if len(probs) != self.n_messages or sum(probs) != 1:
                raise ValueError("message_probs must be a distribution over all messages")
            den = lcm(*(p.denominator for p in probs))
            weights = [int(p * den) for p in probs]
        for m in range(self.n_messages):
            if weights[m] == 0:
                continue
            for l in range(self.n_scrambles):
                x = tuple(self.encoder(m, l))
                if len(x) != self.m3 * self.n:
                    raise ValueError(f"encoder output has length {len(x)}, expected {self.m3 * self.n}")
                yield m, l, weights[m], x


def linear_code(ctx: ArithCtx, gen: Mat, k_msg: int, n: int = 1) -> Code:
    """Code whose flattened channel input is ``gen · (m; l)``.

    Args:
        ctx: Field.
        gen: (m3·n) × (k_msg + k_scr) generator.
        k_msg: Number of message symbols; the rest of ``gen``'s columns take
            scramble symbols.
        n: Block length.
    """
    q = ctx.order
    if gen.rows % n:
        raise ValueError("generator rows must be a multiple of n")
    k_scr = gen.cols - k_msg
    rows = gen.to_rows()

    def enc(m: int, l: int) -> tuple[int, ...]:
        v = _digits(m, q, k_msg) + _digits(l, q, k_scr)
        return tuple(ctx.dot(r, v) for r in rows)

    return Code(ctx, gen.rows // n, n, q**k_msg, q**k_scr, enc, gen=gen, k_msg=k_msg)


def table_code(ctx: ArithCtx, m3: int, table: Mapping[tuple[int, int], Sequence[int]], n: int = 1) -> Code:
    """Code from an explicit (m, l) -> flattened input table."""
    n_m = 1 + max(m for m, _ in table)
    n_l = 1 + max(l for _, l in table)
    missing = [(m, l) for m in range(n_m) for l in range(n_l) if (m, l) not in table]
    if missing:
        raise ValueError(f"encoder table misses {missing[:3]}")
    frozen = {k: tuple(v) for k, v in table.items()}
    return Code(ctx, m3, n, n_m, n_l, lambda m, l: frozen[(m, l)])


def default_scramble_size(q: int, m3: int, n: int, n_messages: int) -> int:
    """q^{m3·n}/|M| rounded down to a power of q (at least 1)."""
    size = 1
    while size * q * n_messages <= q ** (m3 * n):
        size *= q
    return size


# --- strategies -----------------------------------------------------------


class StrategyKind(str, enum.Enum):
    ZERO = "zero"
    LINEAR = "linear"
    TABLE = "table"


@dataclass(frozen=True)
class Strategy:
    """Eve's deterministic injection rule.

    Attributes:
        kind: zero, linear (z_t = G·y_t per transmission) or table.
        windows: For table strategies, one set of 1-based flattened
            observation positions per flattened injection. Optional for the
            other kinds.
        G: m5 × m6 matrix for linear strategies.
        tables: For table strategies, one lookup per injection keyed by the
            observed values at the window positions in increasing order.
        n: Block length the strategy is written for.
    """

    kind: StrategyKind
    windows: tuple[frozenset[int], ...] = ()
    G: Mat | None = None
    tables: tuple[Mapping[tuple[int, ...], int], ...] = ()
    n: int = 1

    @classmethod
    def zero(cls, n: int = 1) -> Strategy:
        return cls(StrategyKind.ZERO, n=n)

    @classmethod
    def linear(cls, G: Mat, n: int = 1) -> Strategy:
        return cls(StrategyKind.LINEAR, G=G, n=n)

    @classmethod
    def table(cls, windows: Sequence[Iterable[int]], tables: Sequence[Mapping[tuple[int, ...], int]], n: int = 1) -> Strategy:
        ws = tuple(frozenset(w) for w in windows)
        if len(ws) != len(tables):
            raise ValueError("one table per window required")
        return cls(StrategyKind.TABLE, ws, None, tuple(dict(t) for t in tables), n)

    @classmethod
    def from_function(cls, ctx: ArithCtx, windows: Sequence[Iterable[int]],
                      fns: Sequence[Callable[[tuple[int, ...]], int]], n: int = 1) -> Strategy:
        """Tabulate per-injection functions of the window-restricted view."""
        ws = [frozenset(w) for w in windows]
        tables = []
        for w, fn in zip(ws, fns):
            tables.append({key: fn(key) % ctx.order for key in itertools.product(ctx.elements(), repeat=len(w))})
        return cls.table(ws, tables, n)

    def apply(self, ctx: ArithCtx, y: Sequence[int], m5: int, m6: int) -> tuple[int, ...]:
        """Evaluate α on a flattened observation vector."""
        if self.kind is StrategyKind.ZERO:
            return (0,) * (m5 * self.n)
        if self.kind is StrategyKind.LINEAR:
            rows = self.G.to_rows()
            out = []
            for t in range(self.n):
                col = y[t * m6:(t + 1) * m6]
                out.extend(ctx.dot(r, col) for r in rows)
            return tuple(out)
        out = []
        for w, tab in zip(self.windows, self.tables):
            key = tuple(y[j - 1] for j in sorted(w))
            try:
                out.append(tab[key])
            except KeyError:
                raise ValueError(f"strategy table has no entry for observation {key}") from None
        return tuple(out)

    def effective_windows(self, m5: int, m6: int) -> tuple[frozenset[int], ...] | None:
        if self.kind is StrategyKind.TABLE:
            return self.windows
        if self.kind is StrategyKind.ZERO:
            return tuple(frozenset() for _ in range(m5 * self.n))
        return None


def parse_strategy(text: str, ctx: ArithCtx) -> Strategy:
    """Parse a strategy description.

    Format::

        strategy zero
        strategy linear      # followed by one line per row of G
        strategy table       # followed by blocks:
        n <blocklength>      # optional, default 1
        alpha <i> window <j...>
        <y_j1> <y_j2> ... -> <z_i>
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if not lines or not lines[0][1].startswith("strategy"):
        raise ValueError("strategy file must start with 'strategy zero|linear|table'")
    tok = lines[0][1].split()
    if len(tok) != 2 or tok[1] not in ("zero", "linear", "table"):
        raise ValueError(f"line {lines[0][0]}: expected 'strategy zero|linear|table'")
    kind = StrategyKind(tok[1])
    n = 1
    body = []
    for lineno, line in lines[1:]:
        if line.startswith("n "):
            n = int(line.split()[1])
        else:
            body.append((lineno, line))
    if kind is StrategyKind.ZERO:
        if body:
            raise ValueError(f"line {body[0][0]}: zero strategy takes no body")
        return Strategy.zero(n)
    if kind is StrategyKind.LINEAR:
        try:
            rows = [[int(v) for v in line.split()] for _, line in body]
        except ValueError as e:
            raise ValueError(f"bad matrix row: {e}") from None
        return Strategy.linear(Mat.from_rows(ctx, rows), n)
    windows: dict[int, frozenset[int]] = {}
    tables: dict[int, dict[tuple[int, ...], int]] = {}
    current = None
    for lineno, line in body:
        tok = line.split()
        if tok[0] == "alpha":
            if len(tok) < 3 or tok[2] != "window":
                raise ValueError(f"line {lineno}: expected 'alpha <i> window <j...>'")
            current = int(tok[1])
            windows[current] = frozenset(int(v) for v in tok[3:])
            tables[current] = {}
        elif "->" in tok:
            if current is None:
                raise ValueError(f"line {lineno}: lookup line before any 'alpha'")
            k = tok.index("->")
            key = tuple(int(v) for v in tok[:k])
            if len(key) != len(windows[current]) or len(tok) != k + 2:
                raise ValueError(f"line {lineno}: lookup key must list one value per window position")
            tables[current][key] = int(tok[k + 1])
        else:
            raise ValueError(f"line {lineno}: unrecognized strategy line {line!r}")
    idx = sorted(windows)
    if idx != list(range(1, len(idx) + 1)):
        raise ValueError("alpha indices must be 1..m5·n")
    for i in idx:
        need = ctx.order ** len(windows[i])
        if len(tables[i]) != need:
            raise ValueError(f"alpha {i} table has {len(tables[i])} entries, needs {need}")
    return Strategy.table([windows[i] for i in idx], [tables[i] for i in idx], n)


# --- channels -------------------------------------------------------------


class _Channel:
    """Maps (flattened x, flattened z) to flattened (y_B, y_E)."""

    ctx: ArithCtx
    m3: int
    m4: int
    m5: int
    m6: int
    linear_model: TransferModel | None = None

    def run(self, x: Sequence[int], z: Sequence[int], n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        yb, ye = [], []
        for t in range(n):
            b, e = self._column(x[t * self.m3:(t + 1) * self.m3], z[t * self.m5:(t + 1) * self.m5])
            yb.extend(b)
            ye.extend(e)
        return tuple(yb), tuple(ye)


class _MatrixChannel(_Channel):
    def __init__(self, model: TransferModel):
        self.linear_model = model
        self.ctx = model.ctx
        self.m3, self.m4, self.m5, self.m6 = model.KB.cols, model.KB.rows, model.HB.cols, model.KE.rows
        self._kb, self._ke = model.KB.to_rows(), model.KE.to_rows()
        self._hb, self._he = model.HB.to_rows(), model.HE.to_rows()

    def _column(self, x, z):
        dot, add = self.ctx.dot, self.ctx.add
        yb = [add(dot(k, x), dot(h, z)) if z else dot(k, x) for k, h in zip(self._kb, self._hb)]
        ye = [add(dot(k, x), dot(h, z)) if z else dot(k, x) for k, h in zip(self._ke, self._he)]
        return yb, ye


class _GraphChannel(_Channel):
    def __init__(self, spec: NetworkSpec):
        self.spec = spec
        self.ctx = spec.ctx
        self.m3, self.m4, self.m5, self.m6 = spec.m3, spec.m4, spec.m5, spec.m6
        if spec.model is ModelKind.PASSIVE and spec.inject:
            raise ValueError("passive spec with inject edges")

    def _column(self, x, z):
        values, observed = simulate_edges(self.spec, x, z)
        return [values[j - 1] for j in self.spec.sinks], observed


def _channel(model: TransferModel | NetworkSpec) -> _Channel:
    if isinstance(model, TransferModel):
        return _MatrixChannel(model)
    if isinstance(model, NetworkSpec):
        return _GraphChannel(model)
    raise TypeError(f"expected TransferModel or NetworkSpec, got {type(model).__name__}")


def _block_diag(a: Mat, n: int) -> Mat:
    """I_n ⊗ a in the flattened ordering."""
    if n == 1:
        return a
    rows = []
    for t in range(n):
        for r in a.to_rows():
            row = [0] * (a.cols * n)
            row[t * a.cols:(t + 1) * a.cols] = r
            rows.append(row)
    return Mat.from_rows(a.ctx, rows, cols=a.cols * n)


def _kron_model(model: TransferModel, n: int) -> TransferModel:
    """Block-diagonal n-transmission model in the flattened ordering."""
    if n == 1:
        return model
    return TransferModel(*(_block_diag(a, n) for a in (model.KB, model.KE, model.HB, model.HE)), model.kind)


# --- fixed-point solving ----------------------------------------------------


class _Solver:
    """Finds the unique y with y = observe(x, α(y)) for each input."""

    def __init__(self, channel: _Channel, strategy: Strategy, n: int):
        self.ch, self.st, self.n = channel, strategy, n
        ctx = channel.ctx
        self.m5n, self.m6n = channel.m5 * n, channel.m6 * n
        self.mode = "search"
        if strategy.kind is StrategyKind.ZERO or self.m5n == 0:
            self.mode = "zero"
        elif strategy.kind is StrategyKind.LINEAR and channel.linear_model is not None:
            he = channel.linear_model.HE
            lhs = Mat.identity(ctx, he.rows) - he @ strategy.G
            self.inv = mat_inverse(lhs)
            self.mode = "linear"
            self._ke = channel.linear_model.KE.to_rows()
        else:
            windows = strategy.effective_windows(channel.m5, channel.m6)
            if windows is not None and channel.linear_model is not None:
                order = sorted(range(len(windows)), key=lambda i: (len(windows[i]), i))
                chain = all(windows[a] <= windows[b] for a, b in zip(order, order[1:]))
                ws = [windows[i] for i in order]
                big = _kron_model(channel.linear_model, n)
                permuted = TransferModel(big.KB, big.KE, big.HB.take_cols(order), big.HE.take_cols(order), big.kind)
                if chain and check_causal(permuted, ws):
                    self.mode = "causal"
                    self.order = order
                    self.windows = windows
        if self.mode == "search":
            q = ctx.order
            if q**self.m6n > SEARCH_CAP:
                raise BudgetError(
                    f"non-causal strategy needs a search over {q}^{self.m6n} observations (cap {SEARCH_CAP})"
                )
            self.candidates = [
                (y, strategy.apply(ctx, y, channel.m5, channel.m6))
                for y in itertools.product(ctx.elements(), repeat=self.m6n)
            ]

    def solve(self, x: tuple[int, ...], m: int, l: int) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
        """Return (y_B, y_E, z) for input x."""
        ch, st, ctx, n = self.ch, self.st, self.ch.ctx, self.n
        if self.mode == "zero":
            z = (0,) * self.m5n
            yb, ye = ch.run(x, z, n)
            return yb, ye, z
        if self.mode == "linear":
            if self.inv is None:
                raise UniquenessViolation(
                    f"I - H_E·G is singular: the fixed point is not unique (first input m={m}, l={l})", m, l
                )
            inv_rows = self.inv.to_rows()
            y = []
            for t in range(n):
                xc = x[t * ch.m3:(t + 1) * ch.m3]
                kx = [ctx.dot(r, xc) for r in self._ke]
                y.extend(ctx.dot(r, kx) for r in inv_rows)
            z = st.apply(ctx, y, ch.m5, ch.m6)
            yb, ye = ch.run(x, z, n)
            assert ye == tuple(y)
            return yb, ye, z
        if self.mode == "causal":
            z = [0] * self.m5n
            for i in self.order:
                _, ye = ch.run(x, z, n)
                w = sorted(self.windows[i])
                key = tuple(ye[j - 1] for j in w)
                z[i] = st.tables[i][key] if st.kind is StrategyKind.TABLE else 0
            z = tuple(z)
            yb, ye = ch.run(x, z, n)
            if st.apply(ctx, ye, ch.m5, ch.m6) != z:
                raise UniquenessViolation(f"causal substitution did not close for m={m}, l={l}", m, l)
            return yb, ye, z
        hits = []
        for y, z in self.candidates:
            yb, ye = ch.run(x, z, n)
            if ye == y:
                hits.append((yb, ye, z))
                if len(hits) > 1:
                    break
        if len(hits) != 1:
            raise UniquenessViolation(
                f"fixed point has {'no' if not hits else 'several'} solutions for m={m}, l={l}",
                m, l, len(hits),
            )
        return hits[0]


# --- vectorized path --------------------------------------------------------

_BATCH_TABLE_CAP = 1 << 22


def _np(a: Mat) -> np.ndarray:
    return np.array(a.to_rows(), dtype=np.int64).reshape(a.rows, a.cols)


def _batch_trace(code: Code, model, strategy: Strategy, budget: int):
    """Array form of the enumeration for linear codes over Z_p or Z_d.

    Linear network specs are compiled first. Returns None when the fast path
    does not apply (nonlinear code or network, extension field, weighted
    messages or a non-causal table strategy); callers then fall back to
    per-input solving.
    """
    ctx = code.ctx
    if (code.gen is None or code.message_probs is not None or ctx.kind is Kind.EXTENSION
            or ctx.p >= 1 << 20):
        return None
    if isinstance(model, NetworkSpec):
        if not model.is_linear:
            return None
        model = compile_model(model) if model.inject else compile_passive(model)
    size = code.n_messages * code.n_scrambles
    if size > budget:
        raise BudgetError(f"{size} message/scramble pairs exceed the budget of {budget}")
    ch = _channel(model)
    _check_dims(code, ch, strategy)
    solver = _Solver(ch, strategy, code.n)
    if solver.mode not in ("zero", "linear", "causal"):
        return None
    q, n, k = ctx.p, code.n, code.gen.cols
    idx = np.arange(size, dtype=np.int64)
    ms, ls = idx // code.n_scrambles, idx % code.n_scrambles
    digits = [(ms // q**i) % q for i in range(code.k_msg)]
    digits += [(ls // q**i) % q for i in range(k - code.k_msg)]
    v = np.stack(digits, axis=1) if digits else np.zeros((size, 0), dtype=np.int64)
    x = v @ _np(code.gen).T % q
    big = _kron_model(model, n)
    kb, ke, hb, he = (_np(a) for a in (big.KB, big.KE, big.HB, big.HE))
    ye0 = x @ ke.T % q
    m5n = ch.m5 * n
    if solver.mode == "zero":
        z = np.zeros((size, m5n), dtype=np.int64)
    elif solver.mode == "linear":
        if solver.inv is None:
            raise UniquenessViolation(
                "I - H_E·G is singular: the fixed point is not unique (first input m=0, l=0)", 0, 0
            )
        y = ye0 @ _np(_block_diag(solver.inv, n)).T % q
        z = y @ _np(_block_diag(strategy.G, n)).T % q
    else:
        z = np.zeros((size, m5n), dtype=np.int64)
        luts = []
        for i in range(m5n):
            w = sorted(solver.windows[i])
            if q ** len(w) > _BATCH_TABLE_CAP:
                return None
            lut = np.full(q ** len(w), -1, dtype=np.int64)
            for key, val in strategy.tables[i].items():
                lut[sum(c * q**p for p, c in enumerate(key))] = val
            luts.append((w, lut))

        def lookup(i, ye):
            w, lut = luts[i]
            keys = np.zeros(size, dtype=np.int64)
            for p, j in enumerate(w):
                keys += ye[:, j - 1] * q**p
            vals = lut[keys]
            if (vals < 0).any():
                bad = int(np.argmax(vals < 0))
                raise ValueError(f"strategy table has no entry for observation {tuple(ye[bad, j - 1] for j in w)}")
            return vals

        for i in solver.order:
            z[:, i] = lookup(i, (ye0 + z @ he.T) % q)
        ye = (ye0 + z @ he.T) % q
        again = np.stack([lookup(i, ye) for i in range(m5n)], axis=1) if m5n else z
        mismatch = np.any(again != z, axis=1)
        if mismatch.any():
            bad = int(np.argmax(mismatch))
            raise UniquenessViolation(
                f"causal substitution did not close for m={ms[bad]}, l={ls[bad]}", int(ms[bad]), int(ls[bad])
            )
    ye = (ye0 + z @ he.T) % q
    yb = (x @ kb.T + z @ hb.T) % q
    return ms, ls, yb, ye, z, ye0


def _rows(a: np.ndarray) -> list[tuple[int, ...]]:
    return list(map(tuple, a.tolist()))


def _check_dims(code: Code, ch: _Channel, strategy: Strategy | None):
    if code.m3 != ch.m3:
        raise ValueError(f"code feeds {code.m3} symbols per transmission, channel takes {ch.m3}")
    if code.ctx != ch.ctx:
        raise ValueError("code and channel use different alphabets")
    if strategy is not None:
        if strategy.n != code.n:
            raise ValueError(f"strategy block length {strategy.n} differs from code block length {code.n}")
        if strategy.kind is StrategyKind.LINEAR and strategy.G.shape != (ch.m5, ch.m6):
            raise ValueError(f"G must be {ch.m5}x{ch.m6}, got {strategy.G.shape}")
        if strategy.kind is StrategyKind.TABLE and len(strategy.windows) != ch.m5 * code.n:
            raise ValueError(f"table strategy needs {ch.m5 * code.n} injections, has {len(strategy.windows)}")


def run_passive(code: Code, model: TransferModel | NetworkSpec, budget: int = DEFAULT_BUDGET) -> JointDist:
    """Exact distribution of (M, Y_B, Y_E) with Eve only listening."""
    weights: dict[tuple, int] = {}
    fast = _batch_trace(code, model, Strategy.zero(code.n), budget)
    if fast is not None:
        ms, _, yb, ye, _, _ = fast
        for key in zip(ms.tolist(), _rows(yb), _rows(ye)):
            weights[key] = weights.get(key, 0) + 1
        return JointDist.from_weights(("M", "YB", "YE"), weights)
    ch = _channel(model)
    _check_dims(code, ch, None)
    z = (0,) * (ch.m5 * code.n)
    for m, l, w, x in code.inputs(budget):
        yb, ye = ch.run(x, z, code.n)
        key = (m, yb, ye)
        weights[key] = weights.get(key, 0) + w
    return JointDist.from_weights(("M", "YB", "YE"), weights)


def _active_trace(code: Code, model, strategy: Strategy, budget: int):
    fast = _batch_trace(code, model, strategy, budget)
    if fast is not None:
        ms, ls, yb, ye, z, ye0 = fast
        for row in zip(ms.tolist(), ls.tolist(), itertools.repeat(1), _rows(yb), _rows(ye), _rows(z), _rows(ye0)):
            yield row
        return
    ch = _channel(model)
    _check_dims(code, ch, strategy)
    solver = _Solver(ch, strategy, code.n)
    zero = (0,) * (ch.m5 * code.n)
    for m, l, w, x in code.inputs(budget):
        yb, ye, z = solver.solve(x, m, l)
        _, ye0 = ch.run(x, zero, code.n)
        yield m, l, w, yb, ye, z, ye0


def run_active(code: Code, model: TransferModel | NetworkSpec, strategy: Strategy,
               budget: int = DEFAULT_BUDGET) -> JointDist:
    """Exact distribution of (M, Y_B, Y_E, Z) under an active strategy.

    Raises:
        UniquenessViolation: The strategy's fixed point is not unique for
            some (m, l).
    """
    weights: dict[tuple, int] = {}
    for m, _, w, yb, ye, z, _ in _active_trace(code, model, strategy, budget):
        key = (m, yb, ye, z)
        weights[key] = weights.get(key, 0) + w
    dist = JointDist.from_weights(("M", "YB", "YE", "Z"), weights)
    assert is_function_of(dist, "Z", "YE")
    return dist


class Verdict(str, enum.Enum):
    EQUIVALENT = "equivalent"
    LEAKIER = "leakier"
    INEQUIVALENT = "inequivalent"


@dataclass(frozen=True)
class ReductionResult:
    """Outcome of comparing an active attack with its passive counterpart.

    Attributes:
        verdict: equivalent when each view is a function of the other,
            leakier when the active view is not a function of the passive
            one and carries strictly more information, inequivalent otherwise.
        leak_passive, leak_active: I(M; Y_E) in bits.
        witness: Two inputs whose passive views agree while the active ones
            differ (or the reverse), when such a pair exists.
    """

    verdict: Verdict
    leak_passive: float
    leak_active: float
    forward: bool
    backward: bool
    witness: str | None = None
    passive: JointDist | None = field(default=None, repr=False)
    active: JointDist | None = field(default=None, repr=False)


def reduction_check(code: Code, model: TransferModel | NetworkSpec, strategy: Strategy,
                    budget: int = DEFAULT_BUDGET, tol: float = 1e-9) -> ReductionResult:
    """Decide whether an active strategy reveals more than passive listening.

    Both views are compared pointwise over every (m, l): the active view must
    be a function of the passive view and vice versa.
    """
    from .infoleak import mutual_info

    fwd: dict[tuple, tuple] = {}
    bwd: dict[tuple, tuple] = {}
    forward = backward = True
    witness = None
    wp: dict[tuple, int] = {}
    wa: dict[tuple, int] = {}
    for m, l, w, yb, ye, z, ye0 in _active_trace(code, model, strategy, budget):
        prev = fwd.setdefault(ye0, (ye, m, l))
        if prev[0] != ye and forward:
            forward = False
            witness = witness or (
                f"passive view {ye0} is shared by (m={prev[1]}, l={prev[2]}) and (m={m}, l={l}) "
                f"but the active views differ: {prev[0]} vs {ye}"
            )
        prev = bwd.setdefault(ye, (ye0, m, l))
        if prev[0] != ye0 and backward:
            backward = False
            witness = witness or (
                f"active view {ye} is shared by (m={prev[1]}, l={prev[2]}) and (m={m}, l={l}) "
                f"but the passive views differ: {prev[0]} vs {ye0}"
            )
        wp[(m, ye0)] = wp.get((m, ye0), 0) + w
        wa[(m, ye, z)] = wa.get((m, ye, z), 0) + w
    passive = JointDist.from_weights(("M", "YE"), wp)
    active = JointDist.from_weights(("M", "YE", "Z"), wa)
    ip = mutual_info(passive, "M", "YE").value
    ia = mutual_info(active, "M", ("YE", "Z")).value
    if forward and backward:
        verdict = Verdict.EQUIVALENT
    elif ia > ip + tol:
        verdict = Verdict.LEAKIER
    else:
        verdict = Verdict.INEQUIVALENT
    return ReductionResult(verdict, ip, ia, forward, backward, witness, passive, active)


def parse_code(text: str) -> Code:
    """Parse a code description.

    Two layouts are accepted::

        code linear              code table
        ctx field <p>            ctx field <p> | ctx ring <d>
        messages <k_msg>         m3 <m3>
        n <n>                    n <n>
        <generator rows>         map <m> <l> -> <x_1> ... <x_{m3·n}>

    The linear generator maps (message digits; scramble digits) to the
    flattened channel input.
    """
    from .gf import Kind, ctx_make

    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if not lines or lines[0][1] not in ("code linear", "code table"):
        raise ValueError("code file must start with 'code linear' or 'code table'")
    kind = lines[0][1].split()[1]
    ctx = None
    params = {"n": 1}
    rows: list[list[int]] = []
    table: dict[tuple[int, int], tuple[int, ...]] = {}
    for lineno, line in lines[1:]:
        tok = line.split()
        try:
            if tok[0] == "ctx":
                if tok[1] == "field":
                    ctx = ctx_make(Kind.PRIME if len(tok) == 3 else Kind.EXTENSION, int(tok[2]),
                                   int(tok[4]) if len(tok) == 5 else 1)
                else:
                    ctx = ctx_make(Kind.RING, int(tok[2]))
            elif tok[0] in ("messages", "m3", "n"):
                params[tok[0]] = int(tok[1])
            elif tok[0] == "map":
                k = tok.index("->")
                m, l = int(tok[1]), int(tok[2])
                table[(m, l)] = tuple(int(v) for v in tok[k + 1:])
            else:
                rows.append([int(v) for v in tok])
        except (ValueError, IndexError):
            raise ValueError(f"line {lineno}: cannot parse {line!r}") from None
    if ctx is None:
        raise ValueError("code file needs a ctx line")
    if kind == "linear":
        if "messages" not in params or not rows:
            raise ValueError("linear code needs 'messages' and generator rows")
        return linear_code(ctx, Mat.from_rows(ctx, rows), params["messages"], params["n"])
    if "m3" not in params or not table:
        raise ValueError("table code needs 'm3' and map lines")
    table = {k: tuple(x % ctx.order for x in v) for k, v in table.items()}
    return table_code(ctx, params["m3"], table, params["n"])
