"""Network descriptions and the transfer matrices they induce.

A network is a directed multigraph whose edges carry one symbol each. Edge
``j`` computes its symbol as ``sum(theta[j, j'] * value[j'])`` over edges
``j' < j`` entering its tail node. Edges ``1..m3`` leave the source. The
adversary reads the wiretap edges and adds (or substitutes) symbols on the
inject edges.

Besides linear coefficients, an edge may be given an arbitrary lookup-table
function of earlier edges (``func`` lines). Such networks cannot be compiled
into matrices but can still be simulated edge by edge.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

from .gf import ArithCtx, Mat, ctx_make, Kind, mat_rank


class SpecError(ValueError):
    """Malformed or inconsistent network description."""

    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


class ModelKind(str, enum.Enum):
    PASSIVE = "passive"
    ADDITION = "addition"
    REPLACEMENT = "replacement"


@dataclass(frozen=True)
class EdgeFunc:
    """Lookup-table edge function.

    ``table`` is indexed by the mixed-radix code of the input values, first
    input most significant.
    """

    inputs: tuple[int, ...]
    table: tuple[int, ...]

    def __call__(self, values: Sequence[int], q: int) -> int:
        code = 0
        for v in values:
            code = code * q + v
        return self.table[code]


@dataclass(frozen=True)
class NetworkSpec:
    """Validated network description.

    Attributes:
        ctx: Arithmetic context of edge symbols.
        m3: Number of source edges (ids 1..m3).
        edges: ``(id, tail, head)`` for ids 1..m7 in order.
        theta: Nonzero coefficients keyed by ``(j, j')``.
        sinks: Increasing sink edge ids (Bob's observations).
        wiretap: Increasing wiretapped edge ids.
        inject: Injected edge ids, in injection index order.
        model: Attack model the description asks for.
        funcs: Optional nonlinear edge functions, keyed by edge id.
        origin: Original edge id for each edge (differs after splitting).
    """

    ctx: ArithCtx
    m3: int
    edges: tuple[tuple[int, str, str], ...]
    theta: Mapping[tuple[int, int], int]
    sinks: tuple[int, ...]
    wiretap: tuple[int, ...] = ()
    inject: tuple[int, ...] = ()
    model: ModelKind = ModelKind.PASSIVE
    funcs: Mapping[int, EdgeFunc] = field(default_factory=dict)
    origin: tuple[int, ...] = ()

    @property
    def m7(self) -> int:
        return len(self.edges)

    @property
    def m4(self) -> int:
        return len(self.sinks)

    @property
    def m5(self) -> int:
        return len(self.inject)

    @property
    def m6(self) -> int:
        return len(self.wiretap)

    @property
    def is_linear(self) -> bool:
        return not self.funcs

    def tail(self, j: int) -> str:
        return self.edges[j - 1][1]

    def head(self, j: int) -> str:
        return self.edges[j - 1][2]

    def nodes(self) -> list[str]:
        seen: dict[str, None] = {}
        for _, t, h in self.edges:
            seen.setdefault(t)
            seen.setdefault(h)
        return list(seen)

    def original_id(self, j: int) -> int:
        return self.origin[j - 1] if self.origin else j

    def with_attack(
        self,
        wiretap: Iterable[int] | None = None,
        inject: Iterable[int] | None = None,
        model: ModelKind | str | None = None,
    ) -> NetworkSpec:
        """Copy with new adversary edge sets, re-validated and split if needed.

        Edge ids refer to this spec's numbering.
        """
        spec = replace(
            self,
            wiretap=tuple(sorted(set(self.wiretap if wiretap is None else wiretap))),
            inject=tuple(self.inject if inject is None else inject),
            model=ModelKind(model) if model is not None else self.model,
        )
        return normalize(spec)


def _validate(spec: NetworkSpec) -> None:
    m7, m3 = spec.m7, spec.m3
    if m7 == 0:
        raise SpecError("network has no edges")
    if not 0 < m3 <= m7:
        raise SpecError(f"source edge count {m3} out of range 1..{m7}")
    for k, (j, _, _) in enumerate(spec.edges, start=1):
        if j != k:
            raise SpecError(f"edge ids must be 1..{m7} in order, found {j} at position {k}")
    src = spec.tail(1)
    for j in range(1, m3 + 1):
        if spec.tail(j) != src:
            raise SpecError(f"source edge {j} does not leave the source node {src}")
    for (j, jp), v in spec.theta.items():
        if not (1 <= j <= m7 and 1 <= jp <= m7):
            raise SpecError(f"coefficient ({j}, {jp}) refers to a missing edge")
        if jp >= j:
            raise SpecError(f"coefficient ({j}, {jp}) violates the partial time order (need j' < j)")
        if j <= m3:
            raise SpecError(f"source edge {j} cannot read other edges")
        if spec.head(jp) != spec.tail(j):
            raise SpecError(f"edge {jp} does not enter the tail of edge {j}")
        if not 0 < v < spec.ctx.order:
            raise SpecError(f"coefficient ({j}, {jp}) = {v} is not a nonzero element of {spec.ctx}")
    for j, fn in spec.funcs.items():
        if j <= m3 or j > m7:
            raise SpecError(f"function on edge {j} must be on a non-source edge")
        if any(jp >= j or spec.head(jp) != spec.tail(j) for jp in fn.inputs):
            raise SpecError(f"function on edge {j} reads an edge that is not an earlier in-edge")
        if any(k[0] == j for k in spec.theta):
            raise SpecError(f"edge {j} has both coefficients and a function")
        if len(fn.table) != spec.ctx.order ** len(fn.inputs):
            raise SpecError(f"function table for edge {j} has the wrong length")
    for name in ("sinks", "wiretap"):
        seq = getattr(spec, name)
        if any(b <= a for a, b in zip(seq, seq[1:])):
            raise SpecError(f"{name} edges must be strictly increasing")
        if any(not 1 <= j <= m7 for j in seq):
            raise SpecError(f"{name} edge out of range 1..{m7}")
    if len(set(spec.inject)) != len(spec.inject):
        raise SpecError("inject edges must be distinct")
    if any(not 1 <= j <= m7 for j in spec.inject):
        raise SpecError(f"inject edge out of range 1..{m7}")
    if spec.model is ModelKind.REPLACEMENT and set(spec.inject) != set(spec.wiretap):
        raise SpecError("the replacement model needs identical wiretap and inject sets")


def split_source_edges(spec: NetworkSpec) -> NetworkSpec:
    """Insert a relay vertex in the middle of every source edge.

    Tail halves keep ids 1..m3, head halves get m3+1..2·m3 and every other
    edge shifts up by m3. Sink, wiretap and inject references to a source
    edge move to its head half, so injections on it become legal.
    """
    m3 = spec.m3
    new_id = {j: j + m3 for j in range(1, spec.m7 + 1)}
    edges = []
    for j in range(1, m3 + 1):
        edges.append((j, spec.tail(j), f"{spec.head(j)}@split{spec.original_id(j)}"))
    for j in range(1, m3 + 1):
        edges.append((m3 + j, f"{spec.head(j)}@split{spec.original_id(j)}", spec.head(j)))
    for j in range(m3 + 1, spec.m7 + 1):
        edges.append((new_id[j], spec.tail(j), spec.head(j)))
    one = 1
    theta = {(m3 + j, j): one for j in range(1, m3 + 1)}
    for (j, jp), v in spec.theta.items():
        theta[(new_id[j], new_id[jp])] = v
    funcs = {new_id[j]: EdgeFunc(tuple(new_id[i] for i in fn.inputs), fn.table) for j, fn in spec.funcs.items()}
    orig = [spec.original_id(j) for j in range(1, m3 + 1)] * 2
    orig += [spec.original_id(j) for j in range(m3 + 1, spec.m7 + 1)]
    return NetworkSpec(
        ctx=spec.ctx,
        m3=m3,
        edges=tuple(edges),
        theta=theta,
        sinks=tuple(new_id[j] for j in spec.sinks),
        wiretap=tuple(new_id[j] for j in spec.wiretap),
        inject=tuple(new_id[j] for j in spec.inject),
        model=spec.model,
        funcs=funcs,
        origin=tuple(orig),
    )


def normalize(spec: NetworkSpec) -> NetworkSpec:
    """Validate ``spec`` and split source edges when one of them is injected."""
    if spec.model is ModelKind.REPLACEMENT and set(spec.inject) == set(spec.wiretap):
        spec = replace(spec, inject=tuple(spec.wiretap))
    _validate(spec)
    if any(j <= spec.m3 for j in spec.inject):
        spec = split_source_edges(spec)
        _validate(spec)
    return spec


def _ints(tokens: Sequence[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise SpecError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None


def parse_network(text: str) -> NetworkSpec:
    """Parse the line-oriented network description format.

    Args:
        text: Description text. Recognized lines::

            ctx field <p> [ext <t>] | ctx ring <d>
            edges <m7>
            edge <j> <tail> <head>
            source <m3>
            coeff <j> <j'> <element>
            func <j> <j1> ... <jr> : <table entries>
            sink <j1> <j2> ...
            wiretap <j1> <j2> ...
            inject <j1> <j2> ...
            model passive|addition|replacement

    Returns:
        The validated spec. Source edges named in ``inject`` are split.
    """
    ctx = None
    m7 = m3 = None
    edges: dict[int, tuple[str, str]] = {}
    theta: dict[tuple[int, int], int] = {}
    funcs: dict[int, EdgeFunc] = {}
    sinks: list[int] = []
    wiretap: list[int] = []
    inject: list[int] = []
    model = ModelKind.PASSIVE
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        key, args = tok[0], tok[1:]
        try:
            if key == "ctx":
                if len(args) == 2 and args[0] == "field":
                    ctx = ctx_make(Kind.PRIME, int(args[1]))
                elif len(args) == 4 and args[0] == "field" and args[2] == "ext":
                    ctx = ctx_make(Kind.EXTENSION, int(args[1]), int(args[3]))
                elif len(args) == 2 and args[0] == "ring":
                    ctx = ctx_make(Kind.RING, int(args[1]))
                else:
                    raise SpecError("expected 'ctx field <p> [ext <t>]' or 'ctx ring <d>'", lineno)
            elif key == "edges":
                (m7,) = _ints(args, lineno)
            elif key == "edge":
                if len(args) != 3:
                    raise SpecError("expected 'edge <j> <tail> <head>'", lineno)
                j = _ints(args[:1], lineno)[0]
                if j in edges:
                    raise SpecError(f"edge {j} declared twice", lineno)
                edges[j] = (args[1], args[2])
            elif key == "source":
                (m3,) = _ints(args, lineno)
            elif key == "coeff":
                j, jp, v = _ints(args, lineno)
                if ctx is None:
                    raise SpecError("ctx must precede coefficients", lineno)
                if not 0 <= v < ctx.order and ctx.t > 1:
                    raise SpecError(f"element {v} out of range for {ctx}", lineno)
                v %= ctx.order
                if v:
                    theta[(j, jp)] = v
            elif key == "func":
                if ":" not in args:
                    raise SpecError("expected 'func <j> <inputs...> : <table...>'", lineno)
                k = args.index(":")
                head = _ints(args[:k], lineno)
                funcs[head[0]] = EdgeFunc(tuple(head[1:]), tuple(_ints(args[k + 1:], lineno)))
            elif key == "sink":
                sinks += _ints(args, lineno)
            elif key == "wiretap":
                wiretap += _ints(args, lineno)
            elif key == "inject":
                inject += _ints(args, lineno)
            elif key == "model":
                try:
                    model = ModelKind(args[0])
                except (ValueError, IndexError):
                    raise SpecError("model must be passive, addition or replacement", lineno) from None
            else:
                raise SpecError(f"unknown directive {key!r}", lineno)
        except SpecError as e:
            if e.line is None:
                raise SpecError(str(e), lineno) from None
            raise
        except ValueError as e:
            raise SpecError(str(e), lineno) from None
    if ctx is None:
        raise SpecError("missing ctx line")
    if not m7:
        raise SpecError("network has no edges")
    if m3 is None:
        raise SpecError("missing source line")
    if sorted(edges) != list(range(1, m7 + 1)):
        raise SpecError(f"edges must be declared exactly once each for ids 1..{m7}")
    spec = NetworkSpec(
        ctx=ctx,
        m3=m3,
        edges=tuple((j, *edges[j]) for j in range(1, m7 + 1)),
        theta=theta,
        sinks=tuple(sorted(set(sinks))),
        wiretap=tuple(sorted(set(wiretap))),
        inject=tuple(inject),
        model=model,
        funcs=funcs,
    )
    return normalize(spec)


def load_network(path: str) -> NetworkSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_network(fh.read())


# --- compilation ----------------------------------------------------------


@dataclass(frozen=True)
class Dims:
    m0: int
    m1: int
    m2: int
    m3: int
    m4: int
    m5: int
    m6: int


@dataclass(frozen=True)
class TransferModel:
    """Linear attack model Y_B = K_B·X + H_B·Z, Y_E = K_E·X + H_E·Z."""

    KB: Mat
    KE: Mat
    HB: Mat
    HE: Mat
    kind: ModelKind

    @property
    def ctx(self) -> ArithCtx:
        return self.KB.ctx

    @property
    def dims(self) -> Dims:
        return Dims(
            m0=mat_rank(self.KB),
            m1=mat_rank(self.HB),
            m2=mat_rank(self.KE),
            m3=self.KB.cols,
            m4=self.KB.rows,
            m5=self.HB.cols,
            m6=self.KE.rows,
        )


def _require_linear(spec: NetworkSpec):
    if not spec.is_linear:
        raise SpecError("networks with table functions have no transfer matrices")


def _substitute(spec: NetworkSpec, state: list[list[int]], j: int, mode: str, attacked: frozenset[int]):
    """Left-multiply ``state`` by the substitution matrix of edge ``j``.

    Every substitution matrix differs from the identity only in row j, so
    applying it replaces that one row of the running product.
    """
    ctx = spec.ctx
    if mode == "replace" and j in attacked:
        return  # row j becomes the unit vector: the edge carries only the injection
    width = len(state[j - 1])
    row = [0] * width
    for (a, b), coef in spec.theta.items():
        if a == j:
            src = state[b - 1]
            row = [ctx.add(r, ctx.mul(coef, s)) for r, s in zip(row, src)]
    if mode == "add":
        row = [ctx.add(r, s) for r, s in zip(row, state[j - 1])]
    state[j - 1] = row


def _product(spec: NetworkSpec, start: list[list[int]], mode: str, attacked=frozenset()) -> list[list[int]]:
    state = [list(r) for r in start]
    for j in range(spec.m3 + 1, spec.m7 + 1):
        _substitute(spec, state, j, mode, attacked)
    return state


def _unit_rows(m7: int, positions: Sequence[int]) -> list[list[int]]:
    """m7 × len(positions) matrix with a 1 at (positions[i], i)."""
    rows = [[0] * len(positions) for _ in range(m7)]
    for i, pos in enumerate(positions):
        rows[pos - 1][i] = 1
    return rows


def _project(ctx: ArithCtx, state: list[list[int]], select: Sequence[int], width: int) -> Mat:
    return Mat.from_rows(ctx, [state[j - 1] for j in select], cols=width)


def compile_passive(spec: NetworkSpec) -> TransferModel:
    """K_B = P_B·M_{m8}⋯M_1·P_A and K_E = P_E·M_{m8}⋯M_1·P_A."""
    _require_linear(spec)
    ctx = spec.ctx
    state = _product(spec, _unit_rows(spec.m7, range(1, spec.m3 + 1)), "plain")
    kb = _project(ctx, state, spec.sinks, spec.m3)
    ke = _project(ctx, state, spec.wiretap, spec.m3)
    return TransferModel(kb, ke, Mat.zeros(ctx, spec.m4, 0), Mat.zeros(ctx, spec.m6, 0), ModelKind.PASSIVE)


def compile_addition(spec: NetworkSpec) -> TransferModel:
    """Wiretap-and-addition model.

    H_B = P_B·M'_{m8}⋯M'_1·P_{E,A} and H_E = P_E·(M'_{m8}⋯M'_1 − I)·P_{E,A}.
    The −I term means Eve reads an attacked edge before adding to it.
    """
    _require_linear(spec)
    if not spec.inject:
        raise SpecError("the addition model needs at least one inject edge")
    ctx = spec.ctx
    passive = compile_passive(spec)
    start = _unit_rows(spec.m7, spec.inject)
    state = _product(spec, start, "add")
    hb = _project(ctx, state, spec.sinks, spec.m5)
    minus_i = [[ctx.sub(a, b) for a, b in zip(r, s)] for r, s in zip(state, start)]
    he = _project(ctx, minus_i, spec.wiretap, spec.m5)
    return TransferModel(passive.KB, passive.KE, hb, he, ModelKind.ADDITION)


def compile_replacement(spec: NetworkSpec) -> TransferModel:
    """Wiretap-and-replacement model (attacked edges carry only Eve's symbol).

    Returns K_B' = P_B·M''·P_A, K_E' = P_E·F·M''·P_A, H_B' = P_B·M''·P_E^T and
    H_E' = P_E·F·M''·P_E^T, where F re-applies θ on wiretapped rows so Eve
    sees each attacked edge's value before she overwrites it. Injection index
    i corresponds to the i-th wiretapped edge.
    """
    _require_linear(spec)
    if set(spec.inject) != set(spec.wiretap):
        raise SpecError("the replacement model needs identical wiretap and inject sets")
    if any(j <= spec.m3 for j in spec.inject):
        raise SpecError("replacement on a source edge needs the split network")
    ctx = spec.ctx
    attacked = frozenset(spec.wiretap)

    def observe(state):
        out = []
        for j in spec.wiretap:
            row = [0] * len(state[0])
            for (a, b), coef in spec.theta.items():
                if a == j:
                    row = [ctx.add(r, ctx.mul(coef, s)) for r, s in zip(row, state[b - 1])]
            out.append(row)
        return out

    sx = _product(spec, _unit_rows(spec.m7, range(1, spec.m3 + 1)), "replace", attacked)
    sz = _product(spec, _unit_rows(spec.m7, spec.wiretap), "replace", attacked)
    kb = _project(ctx, sx, spec.sinks, spec.m3)
    hb = _project(ctx, sz, spec.sinks, spec.m6)
    ke = Mat.from_rows(ctx, observe(sx), cols=spec.m3)
    he = Mat.from_rows(ctx, observe(sz), cols=spec.m6)
    return TransferModel(kb, ke, hb, he, ModelKind.REPLACEMENT)


def compile_model(spec: NetworkSpec) -> TransferModel:
    """Compile according to ``spec.model``."""
    if spec.model is ModelKind.ADDITION:
        return compile_addition(spec)
    if spec.model is ModelKind.REPLACEMENT:
        return compile_replacement(spec)
    return compile_passive(spec)


# --- causal structure -----------------------------------------------------


@dataclass(frozen=True)
class CausalReport:
    """Outcome of a causality check; truthy when the windows are causal."""

    ok: bool
    violations: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


Window = frozenset


def check_causal(model: TransferModel, windows: Sequence[Iterable[int]]) -> CausalReport:
    """Check the causal condition for a window family.

    Args:
        model: Compiled model; only H_E is consulted.
        windows: One set of observation positions (1-based) per injection.

    Returns:
        A report that is true iff H_E[j, i] = 0 whenever j is in window i
        and the windows are nested in index order.
    """
    ws = [frozenset(w) for w in windows]
    he = model.HE
    if len(ws) != he.cols:
        raise ValueError(f"expected {he.cols} windows, got {len(ws)}")
    bad = []
    for i, w in enumerate(ws):
        for j in sorted(w):
            if not 1 <= j <= he.rows:
                bad.append(f"window {i + 1} names observation {j} outside 1..{he.rows}")
            elif he[j - 1, i]:
                bad.append(f"A1: observation {j} in window {i + 1} depends on injection {i + 1}")
    for i in range(len(ws) - 1):
        if not ws[i] <= ws[i + 1]:
            bad.append(f"A2: window {i + 1} is not contained in window {i + 2}")
    return CausalReport(not bad, tuple(bad))


def _dependents(spec: NetworkSpec, i: int) -> set[int]:
    """Edges whose value can change when edge i changes (transitive reads)."""
    reads: dict[int, set[int]] = {}
    for (j, jp) in spec.theta:
        reads.setdefault(j, set()).add(jp)
    for j, fn in spec.funcs.items():
        reads.setdefault(j, set()).update(fn.inputs)
    hit = {i}
    for j in range(i + 1, spec.m7 + 1):
        if reads.get(j, set()) & hit:
            hit.add(j)
    return hit - {i}


def optimal_windows(spec: NetworkSpec) -> tuple[tuple[int, ...], tuple[frozenset[int], ...]]:
    """Maximal causal windows of prefix shape for the spec's inject set.

    For each inject edge i, gamma(i) is the smallest wiretapped edge whose
    observation depends on the injection at i (infinity when none does).
    For linear specs dependence is read off H_E, so cancelling paths do not
    count; nonlinear specs use transitive reads. Injections are ordered by
    gamma with ties broken by edge id, and injection i may observe every
    wiretapped edge whose id is below gamma(i).

    Returns:
        ``(eta_o, windows)``: inject edge ids in the new order and the
        corresponding 1-based observation windows.
    """
    if spec.is_linear and spec.inject:
        he = compile_addition(spec.with_attack(model=ModelKind.ADDITION)).HE
        deps = {i: {spec.wiretap[r] for r in range(he.rows) if he[r, c]} for c, i in enumerate(spec.inject)}
    else:
        deps = {i: _dependents(spec, i) & set(spec.wiretap) for i in spec.inject}

    def gamma(i: int) -> float:
        return min(deps[i], default=math.inf)

    eta_o = tuple(sorted(spec.inject, key=lambda i: (gamma(i), i)))
    windows = tuple(
        frozenset(k + 1 for k, jw in enumerate(spec.wiretap) if jw < gamma(i)) for i in eta_o
    )
    return eta_o, windows


def nodes_to_edges(spec: NetworkSpec, occupied: Iterable[str]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Edges seized by an adversary holding the given nodes.

    Returns:
        ``(E_E, E_A)``: both are every edge with an occupied endpoint.
        Pass them to :meth:`NetworkSpec.with_attack`, which applies the
        source-edge split when needed.
    """
    occ = set(occupied)
    known = set(spec.nodes())
    unknown = occ - known
    if unknown:
        raise SpecError(f"unknown node(s): {', '.join(sorted(unknown))}")
    hit = tuple(j for j, t, h in spec.edges if t in occ or h in occ)
    return hit, hit


def occupy(spec: NetworkSpec, occupied: Iterable[str], model: ModelKind | str = ModelKind.ADDITION) -> NetworkSpec:
    """Spec with the adversary seizing every edge incident to ``occupied``."""
    ee, ea = nodes_to_edges(spec, occupied)
    if not ea:
        return spec.with_attack(wiretap=(), inject=(), model=ModelKind.PASSIVE)
    return spec.with_attack(wiretap=ee, inject=ea, model=model)


def attack_ranks(spec: NetworkSpec, occupied: Iterable[str], model: ModelKind | str = ModelKind.ADDITION) -> Dims:
    """(m0, m1, m2, ...) for a node adversary on ``occupied``."""
    attacked = occupy(spec, occupied, model)
    if not attacked.inject:
        return compile_passive(attacked).dims
    return compile_model(attacked).dims


def intermediate_nodes(spec: NetworkSpec) -> list[str]:
    """Nodes other than the source and the receiving ends of sink edges."""
    ends = {spec.tail(1)} | {spec.head(j) for j in spec.sinks}
    return [v for v in spec.nodes() if v not in ends and "@split" not in v]


# --- multicast ------------------------------------------------------------


@dataclass(frozen=True)
class MulticastTable:
    """Rank table of a multi-sender, multi-receiver network.

    Attributes:
        direct: ``(i, j) -> rank K_{i,j;i}``, sender i to receiver j.
        cross: ``(i, j) -> m1_{i,j}``, interference on receiver j's view of i.
        leak: ``(i, i2, j2) -> m2_{i;i2,j2}``, what receiver j2 of sender i2
            learns about sender i.
    """

    direct: Mapping[tuple[int, int], int]
    cross: Mapping[tuple[int, int], int] = field(default_factory=dict)
    leak: Mapping[tuple[int, int, int], int] = field(default_factory=dict)


def multicast_params(table: MulticastTable) -> dict[int, tuple[int, int, int]]:
    """Per-sender (m0, m1, m2), each the maximum over the relevant entries."""
    if not table.direct:
        raise ValueError("empty rank table")
    senders = sorted({i for i, _ in table.direct})
    out = {}
    for i in senders:
        m0 = max(r for (a, _), r in table.direct.items() if a == i)
        m1 = max((r for (a, _), r in table.cross.items() if a == i), default=0)
        m2 = max((r for (a, _, _), r in table.leak.items() if a == i), default=0)
        out[i] = (m0, m1, m2)
    return out


def parse_multicast(text: str) -> MulticastTable:
    """Parse ``direct i j r``, ``cross i j r`` and ``leak i i2 j2 r`` lines."""
    direct, cross, leak = {}, {}, {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        vals = _ints(tok[1:], lineno)
        if tok[0] == "direct" and len(vals) == 3:
            direct[(vals[0], vals[1])] = vals[2]
        elif tok[0] == "cross" and len(vals) == 3:
            cross[(vals[0], vals[1])] = vals[2]
        elif tok[0] == "leak" and len(vals) == 4:
            leak[(vals[0], vals[1], vals[2])] = vals[3]
        else:
            raise SpecError(f"unrecognized rank line {line!r}", lineno)
    return MulticastTable(direct, cross, leak)


# --- forward simulation -----------------------------------------------------


def simulate_edges(
    spec: NetworkSpec,
    x: Sequence[int],
    z: Sequence[int] | None = None,
) -> tuple[list[int], list[int]]:
    """Walk the graph once in edge order.

    Args:
        spec: Network (linear or with table functions).
        x: Source symbols, one per source edge.
        z: Injected symbols, one per inject edge (zeros when omitted).

    Returns:
        ``(values, observed)``: final edge values (after injection) and the
        values Eve reads on her wiretapped edges (before her own injection).
    """
    ctx = spec.ctx
    q = ctx.order
    z = [0] * spec.m5 if z is None else list(z)
    slot = {j: i for i, j in enumerate(spec.inject)}
    replace_mode = spec.model is ModelKind.REPLACEMENT
    readers: dict[int, list[tuple[int, int]]] = {}
    for (a, b), coef in spec.theta.items():
        readers.setdefault(a, []).append((b, coef))
    values = [0] * spec.m7
    pre = [0] * spec.m7
    for j in range(1, spec.m7 + 1):
        if j <= spec.m3:
            v = x[j - 1]
        elif j in spec.funcs:
            fn = spec.funcs[j]
            v = fn([values[b - 1] for b in fn.inputs], q)
        else:
            v = 0
            for b, coef in readers.get(j, ()):
                v = ctx.add(v, ctx.mul(coef, values[b - 1]))
        pre[j - 1] = v
        if j in slot:
            v = z[slot[j]] if replace_mode else ctx.add(v, z[slot[j]])
        values[j - 1] = v
    return values, [pre[j - 1] for j in spec.wiretap]
