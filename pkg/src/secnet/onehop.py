"""One-hop relay network: Alice -> relay -> Bob over Z_d.

Alice sends (Y1, Y2), the relay maps them to (Y3, Y4) = φ(Y1, Y2) and Bob
decodes M from (Y3, Y4). Relay tables are d × d integer grids indexed
[Y1][Y2]. With the standard encoder Y1 = M + L, Y2 = L, the cell (i, j)
carries M = i − j, so a relay pair is decodable exactly when the output
pair determines the cell's diagonal offset.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .dist import JointDist, is_function_of
from .infoleak import TOL, cond_entropy, entropy, l1_security, mutual_info

Table = tuple[tuple[int, ...], ...]
NAMES = ("M", "L", "Y1", "Y2", "Y3", "Y4")


class OneHopError(ValueError):
    pass


class BudgetError(RuntimeError):
    pass


def as_table(rows: Sequence[Sequence[int]]) -> Table:
    return tuple(tuple(int(v) for v in r) for r in rows)


# Reference pairs (φ3, φ4) for d = 3, 4, 3, 4, 5, 6, 7, 8.
EX1 = (as_table([[1, 0, 0], [0, 0, 2], [1, 2, 2]]), as_table([[1, 0, 1], [1, 2, 1], [0, 2, 0]]))
EX2 = (
    as_table([[1, 0, 3, 3], [0, 0, 2, 3], [1, 1, 3, 2], [0, 2, 2, 1]]),
    as_table([[2, 2, 1, 0], [0, 3, 3, 1], [0, 3, 3, 0], [1, 1, 2, 2]]),
)
EX3 = (as_table([[0, 1, 0], [1, 1, 2], [0, 2, 2]]), as_table([[0, 2, 2], [0, 1, 0], [1, 1, 2]]))
EX4 = (
    as_table([[0, 1, 3, 3], [0, 1, 2, 0], [1, 1, 2, 3], [0, 2, 2, 3]]),
    as_table([[0, 0, 1, 0], [1, 1, 1, 2], [3, 2, 2, 2], [3, 0, 3, 3]]),
)
EX5 = (
    as_table([[0, 1, 2, 0, 0], [1, 1, 2, 3, 1], [2, 2, 2, 3, 4], [0, 3, 3, 3, 4], [0, 1, 4, 4, 4]]),
    as_table([[0, 3, 3, 3, 4], [0, 1, 4, 4, 4], [0, 1, 2, 0, 0], [1, 1, 2, 3, 1], [2, 2, 2, 3, 4]]),
)
EX6 = (
    as_table([
        [0, 1, 2, 5, 5, 5], [0, 1, 2, 3, 0, 0], [1, 1, 2, 3, 4, 1],
        [2, 2, 2, 3, 4, 5], [0, 3, 3, 3, 4, 5], [0, 1, 4, 4, 4, 5],
    ]),
    as_table([
        [1, 1, 1, 2, 3, 1], [2, 2, 2, 2, 3, 4], [5, 3, 3, 3, 3, 4],
        [5, 0, 4, 4, 4, 4], [5, 0, 1, 5, 5, 5], [0, 0, 1, 2, 0, 0],
    ]),
)
EX7 = (
    as_table([
        [0, 1, 2, 3, 0, 0, 0], [1, 1, 2, 3, 4, 1, 1], [2, 2, 2, 3, 4, 5, 2],
        [3, 3, 3, 3, 4, 5, 6], [0, 4, 4, 4, 4, 5, 6], [0, 1, 5, 5, 5, 5, 6],
        [0, 1, 2, 6, 6, 6, 6],
    ]),
    as_table([
        [0, 4, 4, 4, 4, 5, 6], [0, 1, 5, 5, 5, 5, 6], [0, 1, 2, 6, 6, 6, 6],
        [0, 1, 2, 3, 0, 0, 0], [1, 1, 2, 3, 4, 1, 1], [2, 2, 2, 3, 4, 5, 2],
        [3, 3, 3, 3, 4, 5, 6],
    ]),
)
EX8 = (
    as_table([
        [0, 1, 2, 3, 7, 7, 7, 7], [0, 1, 2, 3, 4, 0, 0, 0], [1, 1, 2, 3, 4, 5, 1, 1],
        [2, 2, 2, 3, 4, 5, 6, 2], [3, 3, 3, 3, 4, 5, 6, 7], [0, 4, 4, 4, 4, 5, 6, 7],
        [0, 1, 5, 5, 5, 5, 6, 7], [0, 1, 2, 6, 6, 6, 6, 7],
    ]),
    as_table([
        [2, 2, 2, 2, 3, 4, 5, 2], [3, 3, 3, 3, 3, 4, 5, 6], [7, 4, 4, 4, 4, 4, 5, 6],
        [7, 0, 5, 5, 5, 5, 5, 6], [7, 0, 1, 6, 6, 6, 6, 6], [7, 0, 1, 2, 7, 7, 7, 7],
        [0, 0, 1, 2, 3, 0, 0, 0], [1, 1, 1, 2, 3, 4, 1, 1],
    ]),
)
EXAMPLES = {"Ex1": EX1, "Ex2": EX2, "Ex3": EX3, "Ex4": EX4, "Ex5": EX5, "Ex6": EX6, "Ex7": EX7, "Ex8": EX8}


# --- codes ----------------------------------------------------------------


class Encoder(str, enum.Enum):
    STANDARD = "standard"  # Y1 = M + L, Y2 = L
    TABLE = "table"


Construction = str  # "odd", "even" or "" for anything else


@dataclass(frozen=True)
class OneHopCode:
    """A code (encoder, relay tables, decoder) on the one-hop relay network.

    Attributes:
        d: Alphabet size.
        phi3, phi4: Relay tables indexed [Y1][Y2].
        encoder: Encoder kind.
        enc_table: For TABLE encoders, enc_table[m][l] = (Y1, Y2).
        decoder: Optional explicit table (Y3, Y4) -> m; derived when None.
        construction: "odd"/"even" for the systematic families.
    """

    d: int
    phi3: Table
    phi4: Table
    encoder: Encoder = Encoder.STANDARD
    enc_table: tuple[tuple[tuple[int, int], ...], ...] | None = None
    decoder: dict | None = field(default=None, compare=False)
    construction: Construction = ""

    def __post_init__(self):
        _check_table(self.phi3, self.d)
        _check_table(self.phi4, self.d)
        if self.encoder is Encoder.TABLE and self.enc_table is None:
            raise OneHopError("table encoder without a table")

    def encode(self, m: int, l: int) -> tuple[int, int]:
        if self.encoder is Encoder.STANDARD:
            return (m + l) % self.d, l
        return self.enc_table[m][l]

    def relay(self, y1: int, y2: int) -> tuple[int, int]:
        return self.phi3[y1][y2], self.phi4[y1][y2]

    def decode_table(self) -> dict[tuple[int, int], int]:
        """(Y3, Y4) -> m over the reachable outputs; raises if ambiguous."""
        if self.decoder is not None:
            return dict(self.decoder)
        out: dict[tuple[int, int], int] = {}
        for m, l in itertools.product(range(self.d), repeat=2):
            key = self.relay(*self.encode(m, l))
            if out.setdefault(key, m) != m:
                raise OneHopError(f"outputs {key} do not determine the message")
        return out

    def joint(self) -> JointDist:
        """Uniform independent (M, L) pushed through the code."""
        w = {}
        for m, l in itertools.product(range(self.d), repeat=2):
            y1, y2 = self.encode(m, l)
            y3, y4 = self.relay(y1, y2)
            w[(m, l, y1, y2, y3, y4)] = 1
        return JointDist.from_weights(NAMES, w)


def _check_table(t: Table, d: int):
    if len(t) != d or any(len(r) != d for r in t):
        raise OneHopError(f"relay table must be {d}x{d}")
    if any(not 0 <= v < d for r in t for v in r):
        raise OneHopError(f"relay table entries must lie in Z_{d}")


def binary_counterexample() -> OneHopCode:
    """Y1 = L, Y2 = M + L; Y3 = Y1(Y2 + 1), Y4 = (Y1 + 1)Y2; ψ = Y3 + Y4."""
    phi3 = as_table([[i * (j + 1) % 2 for j in range(2)] for i in range(2)])
    phi4 = as_table([[(i + 1) * j % 2 for j in range(2)] for i in range(2)])
    enc = tuple(tuple((l, (m + l) % 2) for l in range(2)) for m in range(2))
    dec = {(a, b): (a + b) % 2 for a in range(2) for b in range(2)}
    return OneHopCode(2, phi3, phi4, Encoder.TABLE, enc, dec)


# --- anti-Latin verification ----------------------------------------------


def _line_has_duplicate(line: Sequence[int]) -> bool:
    return len(set(line)) < len(line)


def anti_latin_witness(t: Table) -> str | None:
    """First row or column without a repeated value, or None."""
    for i, r in enumerate(t):
        if not _line_has_duplicate(r):
            return f"row {i}"
    for j in range(len(t)):
        if not _line_has_duplicate([r[j] for r in t]):
            return f"column {j}"
    return None


def is_anti_latin(t: Table) -> bool:
    return anti_latin_witness(t) is None


@dataclass(frozen=True)
class ALSVerdict:
    """Outcome of checking a relay pair.

    Attributes:
        anti_latin3, anti_latin4: Each table repeats a value in every row and column.
        separable: For each φ3 value a, the φ4 value sets of different diagonals are disjoint.
        witnesses: Human-readable reasons for each failed check.
    """

    anti_latin3: bool
    anti_latin4: bool
    separable: bool
    witnesses: tuple[str, ...] = ()

    @property
    def decodable(self) -> bool:
        return self.anti_latin3 and self.anti_latin4 and self.separable


def xi(phi3: Table, phi4: Table, a: int, m: int) -> set[int]:
    """φ4 values on the diagonal j = i + m where φ3 equals a."""
    d = len(phi3)
    return {phi4[i][(i + m) % d] for i in range(d) if phi3[i][(i + m) % d] == a}


def verify_pair(phi3: Sequence[Sequence[int]], phi4: Sequence[Sequence[int]], d: int | None = None) -> ALSVerdict:
    phi3, phi4 = as_table(phi3), as_table(phi4)
    d = len(phi3) if d is None else d
    _check_table(phi3, d)
    _check_table(phi4, d)
    wit = []
    w3, w4 = anti_latin_witness(phi3), anti_latin_witness(phi4)
    if w3:
        wit.append(f"phi3 {w3} has no repeated value")
    if w4:
        wit.append(f"phi4 {w4} has no repeated value")
    sep = True
    for a in range(d):
        sets = [xi(phi3, phi4, a, m) for m in range(d)]
        for m, m2 in itertools.combinations(range(d), 2):
            common = sets[m] & sets[m2]
            if common:
                sep = False
                wit.append(f"a={a}: diagonals {m} and {m2} share phi4 values {sorted(common)}")
    return ALSVerdict(w3 is None, w4 is None, sep, tuple(wit))


# --- systematic constructions ---------------------------------------------


def _fill(d: int, pre3: Callable[[int], list], pre4: Callable[[int], list]) -> tuple[Table, Table]:
    t3 = [[None] * d for _ in range(d)]
    t4 = [[None] * d for _ in range(d)]
    for tab, pre in ((t3, pre3), (t4, pre4)):
        for k in range(d):
            for i, j in pre(k):
                i, j = i % d, j % d
                if tab[i][j] is not None:
                    raise AssertionError(f"cell ({i},{j}) assigned twice")
                tab[i][j] = k
    return as_table(t3), as_table(t4)


def construct_odd(d: int) -> OneHopCode:
    """Decodable pair for d = 2ℓ + 1 ≥ 3."""
    if d < 3 or d % 2 == 0:
        raise OneHopError(f"construct_odd needs odd d >= 3, got {d}")
    ell = d // 2

    def pre3(k):
        return [(k, k - s) for s in range(ell, -1, -1)] + [(k - s, k) for s in range(1, ell + 1)]

    def pre4(k):
        return [(k + ell, k - s) for s in range(ell, -1, -1)] + [(k + s, k) for s in range(ell - 1, -1, -1)]

    t3, t4 = _fill(d, pre3, pre4)
    return OneHopCode(d, t3, t4, construction="odd")


def construct_even(d: int) -> OneHopCode:
    """Decodable pair for d = 2ℓ ≥ 4.

    The φ4 preimages are laid out so that d = 4 reproduces EX4:
    row k − ℓ + 2 across columns k − ℓ + 1 … k + 1, then column
    k + 1 down from row k − ℓ + 1 to k − 2ℓ + 3.
    """
    if d < 4 or d % 2:
        raise OneHopError(f"construct_even needs even d >= 4, got {d}")
    ell = d // 2

    def pre3(k):
        return [(k + 1, k - s) for s in range(ell - 1, -1, -1)] + [(k - s, k) for s in range(ell)]

    def pre4(k):
        r = k - ell + 2
        return [(r, c) for c in range(k - ell + 1, k + 2)] + [(i, k + 1) for i in range(k - ell + 1, k - 2 * ell + 2, -1)]

    t3, t4 = _fill(d, pre3, pre4)
    return OneHopCode(d, t3, t4, construction="even")


def construct(d: int) -> OneHopCode:
    return construct_odd(d) if d % 2 else construct_even(d)


def joint_recovery(code: OneHopCode) -> bool:
    """Whether (Y3, Y4) determines both M and L."""
    return is_function_of(code.joint(), ["M", "L"], ["Y3", "Y4"])


# --- exhaustive search ----------------------------------------------------


def _anti_latin_tables(d: int, first: int | None = None) -> Iterator[Table]:
    rows = [r for r in itertools.product(range(d), repeat=d) if _line_has_duplicate(r)]
    first_rows = [r for r in rows if first is None or r[0] == first]
    for combo in itertools.product(first_rows, *([rows] * (d - 1))):
        if all(_line_has_duplicate([r[j] for r in combo]) for j in range(d)):
            yield combo


def search_pairs(d: int, budget: int = 10**8) -> list[tuple[Table, Table]]:
    """All decodable pairs with φ3(0, 0) = 0.

    φ3 ranges over anti-Latin tables; φ4 is filled cell by cell, pruning as
    soon as an output pair (φ3, φ4) is shared by two diagonals or a finished
    row lacks a repeat. ``budget`` caps the number of φ4 cell assignments.
    """
    if d not in (2, 3):
        raise OneHopError(f"exhaustive search is limited to d in (2, 3), got {d}")
    if budget <= 0:
        raise BudgetError("search budget exhausted before starting")
    cells = [(i, j) for i in range(d) for j in range(d)]
    found: list[tuple[Table, Table]] = []
    steps = 0

    for t3 in _anti_latin_tables(d, first=0):
        t4 = [[0] * d for _ in range(d)]
        owner: dict[tuple[int, int], int] = {}

        def rec(pos: int):
            nonlocal steps
            if pos == len(cells):
                tab = as_table(t4)
                if is_anti_latin(tab):
                    found.append((t3, tab))
                return
            i, j = cells[pos]
            diag = (j - i) % d
            for v in range(d):
                steps += 1
                if steps > budget:
                    raise BudgetError(f"search exceeded budget of {budget} steps")
                key = (t3[i][j], v)
                prev = owner.get(key)
                if prev is not None and prev != diag:
                    continue
                t4[i][j] = v
                if j == d - 1 and not _line_has_duplicate(t4[i]):
                    continue
                if prev is None:
                    owner[key] = diag
                    rec(pos + 1)
                    del owner[key]
                else:
                    rec(pos + 1)

        rec(0)
    return found


def relabel_equivalent(a: tuple[Table, Table], b: tuple[Table, Table]) -> bool:
    """Whether b = (σ3∘a3, σ4∘a4) for some value permutations σ3, σ4."""
    for ta, tb in zip(a, b):
        sigma: dict[int, int] = {}
        for ra, rb in zip(ta, tb):
            for x, y in zip(ra, rb):
                if sigma.setdefault(x, y) != y:
                    return False
        if len(set(sigma.values())) != len(sigma):
            return False
    return True


# --- leakage --------------------------------------------------------------


PAIRS = ((1, 3), (1, 4), (2, 3), (2, 4))


def closed_form(d: int, construction: Construction, i: int, j: int, base: float = 2) -> float | None:
    """Closed-form H(Y_j | Y_i) for the systematic constructions."""
    lg = lambda x: math.log(x, base)  # noqa: E731
    if construction == "odd":
        return (d + 1) / 2 / d * lg(2 * d / (d + 1)) + (d - 1) / 2 / d * lg(d)
    if construction == "even":
        if (i, j) in ((2, 3), (1, 4)):
            return (d + 2) / 2 / d * lg(2 * d / (d + 2)) + (d - 2) / 2 / d * lg(d)
        return 0.5 * lg(2) + 0.5 * lg(d)
    return None


@dataclass(frozen=True)
class LeakRow:
    i: int
    j: int
    info: float
    d1: Fraction
    closed: float | None

    @property
    def matches(self) -> bool | None:
        return None if self.closed is None else abs(self.info - self.closed) <= TOL


@dataclass(frozen=True)
class LeakageProfile:
    rows: tuple[LeakRow, ...]
    pair_slack: tuple[float, float]  # for i = 1, 2

    def row(self, i: int, j: int) -> LeakRow:
        return next(r for r in self.rows if (r.i, r.j) == (i, j))


def pair_slack(dist: JointDist, d: int, base: float = 2) -> tuple[float, float]:
    """I(M;Y_iY3) + I(M;Y_iY4) − (2H(M) − log d) for i = 1, 2."""
    hm = entropy(dist, "M", base).value
    out = []
    for i in (1, 2):
        yi = f"Y{i}"
        lhs = mutual_info(dist, "M", [yi, "Y3"], base).value + mutual_info(dist, "M", [yi, "Y4"], base).value
        out.append(lhs - (2 * hm - math.log(d, base)))
    return tuple(out)


def leakage_profile(code: OneHopCode, base: float = 2) -> LeakageProfile:
    """Exact I(M; Y_i, Y_j) and d1(M | Y_i, Y_j) for i ∈ {1,2}, j ∈ {3,4}.

    For systematic constructions each value is also compared with the
    closed-form H(Y_j | Y_i), and a mismatch beyond TOL raises.
    """
    dist = code.joint()
    rows = []
    for i, j in PAIRS:
        obs = [f"Y{i}", f"Y{j}"]
        info = mutual_info(dist, "M", obs, base).value
        d1 = l1_security(dist, "M", obs, code.d).exact
        cf = closed_form(code.d, code.construction, i, j, base)
        if cf is not None:
            h = cond_entropy(dist, f"Y{j}", f"Y{i}", base).value
            if abs(h - cf) > TOL or abs(info - cf) > TOL:
                raise AssertionError(f"closed form mismatch at (Y{i},Y{j}): {info} vs {cf}")
        rows.append(LeakRow(i, j, info, d1, cf))
    return LeakageProfile(tuple(rows), pair_slack(dist, code.d, base))


# --- active attacks -------------------------------------------------------


def active_joint(code: OneHopCode, edge: int, replace: Callable[[int], int]) -> JointDist:
    """Distribution when Eve overwrites Y_edge (edge 1 or 2) by replace(Y_edge).

    Coordinates Y1, Y2 keep the values Alice sent; Y3, Y4 are the relay
    outputs computed from the replaced input.
    """
    if edge not in (1, 2):
        raise OneHopError("only Y1 or Y2 can be replaced")
    w = {}
    for m, l in itertools.product(range(code.d), repeat=2):
        y1, y2 = code.encode(m, l)
        a, b = (replace(y1), y2) if edge == 1 else (y1, replace(y2))
        y3, y4 = code.relay(a, b)
        w[(m, l, y1, y2, y3, y4)] = 1
    return JointDist.from_weights(NAMES, w)


def recovery_probability(dist: JointDist, observed: Sequence[str]) -> Fraction:
    """Best success probability of guessing M from ``observed``."""
    best: dict[tuple, dict[int, Fraction]] = {}
    mi = dist.index("M")
    oi = [dist.index(n) for n in observed]
    for k, p in dist.pmf.items():
        o = tuple(k[i] for i in oi)
        best.setdefault(o, {})
        best[o][k[mi]] = best[o].get(k[mi], Fraction(0)) + p
    return sum((max(v.values()) for v in best.values()), Fraction(0))


def max_active_recovery(code: OneHopCode) -> tuple[Fraction, tuple]:
    """Worst case over constant replacements of Y1 or Y2 and one observed output.

    Returns:
        (probability, (edge, constant, observed edge)) for the best attack.
    """
    best = (Fraction(-1), ())
    for edge, c, j in itertools.product((1, 2), range(code.d), (3, 4)):
        dist = active_joint(code, edge, lambda _y, c=c: c)
        p = recovery_probability(dist, [f"Y{edge}", f"Y{j}"])
        if p > best[0]:
            best = (p, (edge, c, j))
    return best


# --- d = 2 relay maps -----------------------------------------------------


def all_relay_maps(d: int = 2) -> Iterator[tuple[Table, Table]]:
    """Every deterministic φ: Z_d² → Z_d², as (φ3, φ4) tables."""
    for outs in itertools.product(itertools.product(range(d), repeat=2), repeat=d * d):
        t3 = as_table([[outs[i * d + j][0] for j in range(d)] for i in range(d)])
        t4 = as_table([[outs[i * d + j][1] for j in range(d)] for i in range(d)])
        yield t3, t4


def recoverable(code: OneHopCode) -> bool:
    """Bob's outputs determine M (no attack)."""
    return is_function_of(code.joint(), "M", ["Y3", "Y4"])


def two_observation_secure(code: OneHopCode) -> bool:
    """No pair (Y_i, Y_j), i ∈ {1,2}, j ∈ {3,4}, determines M."""
    dist = code.joint()
    return not any(is_function_of(dist, "M", [f"Y{i}", f"Y{j}"]) for i, j in PAIRS)


def _relabel_orbit(base: tuple[Table, Table]) -> set[tuple[Table, Table]]:
    """Images of a relay map under per-wire flips f1..f4 ∈ {id, +1} over Z_2."""
    orbit = set()
    for f1, f2, f3, f4 in itertools.product((0, 1), repeat=4):
        t3 = as_table([[base[0][i ^ f1][j ^ f2] ^ f3 for j in range(2)] for i in range(2)])
        t4 = as_table([[base[1][i ^ f1][j ^ f2] ^ f4 for j in range(2)] for i in range(2)])
        orbit.add((t3, t4))
    return orbit


@dataclass(frozen=True)
class RelayAuditReport:
    total: int
    recoverable: int
    survivors: tuple[tuple[Table, Table], ...]
    orbit_size: int
    outside_orbit: tuple[tuple[Table, Table], ...]

    @property
    def ok(self) -> bool:
        return bool(self.survivors) and not self.outside_orbit


def lemma_t6_audit() -> RelayAuditReport:
    """Classify all 256 binary relay maps under Y1 = M + L, Y2 = L.

    Survivors must be recoverable and leak-proof against every two-edge
    observation. Each survivor is compared with the orbit of
    (Y1(Y2 + 1), (Y1 + 1)Y2) under per-wire flips.
    """
    ref = binary_counterexample()
    orbit = _relabel_orbit((ref.phi3, ref.phi4))
    total, rec, survivors = 0, 0, []
    for t3, t4 in all_relay_maps(2):
        total += 1
        code = OneHopCode(2, t3, t4)
        if not recoverable(code):
            continue
        rec += 1
        if two_observation_secure(code):
            survivors.append((t3, t4))
    outside = tuple(s for s in survivors if s not in orbit)
    return RelayAuditReport(total, rec, tuple(survivors), len(orbit), outside)


def min_binary_pair_slack(base: float = 2) -> float:
    """Smallest pair_slack over every recoverable binary relay map."""
    worst = math.inf
    for t3, t4 in all_relay_maps(2):
        code = OneHopCode(2, t3, t4)
        if recoverable(code):
            worst = min(worst, *pair_slack(code.joint(), 2, base))
    return worst


# --- randomized relay -----------------------------------------------------


RAND_NAMES = ("M", "L", "L2", "Y1", "Y2", "Y3", "Y4")


@dataclass(frozen=True)
class RandomRelayReport:
    """Randomized relay Y3 = Y1 + Y2 + L', Y4 = L' over Z_2."""

    passive_info: dict[tuple[int, int], float]
    decodes: bool
    active_recovery: dict[tuple[int, int, int], Fraction]

    @property
    def ok(self) -> bool:
        return (
            self.decodes
            and all(v <= TOL for v in self.passive_info.values())
            and all(p < 1 for p in self.active_recovery.values())
        )


def _random_relay_dist(edge: int | None = None, const: int = 0) -> JointDist:
    w = {}
    for m, l, l2 in itertools.product(range(2), repeat=3):
        y1, y2 = l, (m + l) % 2
        a, b = y1, y2
        if edge == 1:
            a = const
        elif edge == 2:
            b = const
        w[(m, l, l2, y1, y2, (a + b + l2) % 2, l2)] = 1
    return JointDist.from_weights(RAND_NAMES, w)


def randomized_relay_demo() -> RandomRelayReport:
    dist = _random_relay_dist()
    passive = {(i, j): mutual_info(dist, "M", [f"Y{i}", f"Y{j}"]).value for i, j in PAIRS}
    decodes = all(((k[5] + k[6]) % 2) == k[0] for k in dist.pmf)
    active = {}
    for edge, c, j in itertools.product((1, 2), (0, 1), (3, 4)):
        active[(edge, c, j)] = recovery_probability(_random_relay_dist(edge, c), [f"Y{edge}", f"Y{j}"])
    return RandomRelayReport(passive, decodes, active)


# --- pair files -----------------------------------------------------------


def parse_pair(text: str) -> tuple[Table, Table]:
    """Two d × d integer grids separated by a blank line; '#' starts a comment."""
    blocks: list[list[list[int]]] = [[]]
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            if blocks[-1]:
                blocks.append([])
            continue
        try:
            blocks[-1].append([int(tok) for tok in line.split()])
        except ValueError:
            raise OneHopError(f"non-integer entry in line {raw!r}") from None
    blocks = [b for b in blocks if b]
    if len(blocks) != 2:
        raise OneHopError(f"expected two grids, found {len(blocks)}")
    t3, t4 = as_table(blocks[0]), as_table(blocks[1])
    d = len(t3)
    _check_table(t3, d)
    _check_table(t4, d)
    return t3, t4


def format_pair(pair: tuple[Table, Table]) -> str:
    return "\n\n".join("\n".join(" ".join(map(str, r)) for r in t) for t in pair) + "\n"
