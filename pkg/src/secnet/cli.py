"""Command-line front end.

Exit codes: 0 success, 2 bad input, 3 security finding (an attack gains
information, a pair is not decodable, no zero-leak seed was found),
4 model violation (non-unique strategy fixed point, decoding conditions
that held without successful decoding).
"""

from __future__ import annotations

import argparse
import glob
import itertools
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

from . import __version__
from .attack import BudgetError, UniquenessViolation, parse_code, parse_strategy, reduction_check, run_active, run_passive
from .gf import Mat, gf, mat_rank
from .infoleak import l1_security, mutual_info
from .netmodel import (
    ModelKind,
    SpecError,
    attack_ranks,
    compile_model,
    compile_passive,
    intermediate_nodes,
    load_network,
    multicast_params,
    parse_multicast,
)
from .onehop import BudgetError as SearchBudgetError
from .report import fmt, plot_failures, plot_leakage, to_csv, to_text

log = logging.getLogger("secnet")

EXIT_OK, EXIT_INPUT, EXIT_FINDING, EXIT_VIOLATION = 0, 2, 3, 4


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _emit(args, header: Sequence[str], rows: Sequence[Sequence], title: str | None = None) -> None:
    if args.format == "csv":
        sys.stdout.write(to_csv(header, rows))
        return
    if title:
        print(title)
    sys.stdout.write(to_text(header, rows))


def _note(args, text: str) -> None:
    """Free-form report lines; suppressed in CSV mode so the output stays parseable."""
    if args.format != "csv":
        print(text)


def _mat_lines(m: Mat) -> list[str]:
    return [" ".join(map(str, r)) for r in m.to_rows()] or ["(empty)"]


# --- transfer -------------------------------------------------------------


def cmd_transfer(args) -> int:
    spec = load_network(args.spec)
    model = compile_model(spec) if spec.inject else compile_passive(spec)
    passive = model.kind is ModelKind.PASSIVE or not spec.inject
    mats = [("K_B", model.KB), ("K_E", model.KE)]
    if not passive:
        mats += [("H_B", model.HB), ("H_E", model.HE)]
    d = model.dims
    dims = [("m0", d.m0, "rank of the channel from Alice to Bob")]
    if not passive:
        dims.append(("m1", d.m1, "rank of the channel from Eve to Bob"))
    dims += [
        ("m2", d.m2, "rank of the channel from Alice to Eve"),
        ("m3", d.m3, "Alice's input edges"),
        ("m4", d.m4, "Bob's output edges"),
    ]
    if not passive:
        dims.append(("m5", d.m5, "Eve's injection edges"))
    dims.append(("m6", d.m6, "Eve's observed edges"))
    if args.format == "csv":
        rows = [(name, i + 1, line) for name, m in mats for i, line in enumerate(_mat_lines(m))]
        rows += [(name, "", v) for name, v, _ in dims]
        _emit(args, ("item", "row", "value"), rows)
        return EXIT_OK
    print(f"model: {model.kind.value} over {spec.ctx}")
    for name, m in mats:
        print(f"{name} ({m.rows}x{m.cols}):")
        for line in _mat_lines(m):
            print("  " + line)
    _emit(args, ("parameter", "value", "meaning"), dims)
    return EXIT_OK


# --- attack-sim / reduction -----------------------------------------------


def cmd_attack_sim(args) -> int:
    spec = load_network(args.spec)
    code = parse_code(_read(args.code))
    passive = run_passive(code, spec, args.budget)
    rows = [
        ("I(M;Y_E) passive", mutual_info(passive, "M", "YE").value),
        ("d1(M|Y_E) passive", l1_security(passive, "M", "YE", code.n_messages).exact),
    ]
    if args.strategy:
        strat = parse_strategy(_read(args.strategy), spec.ctx)
        active = run_active(code, spec, strat, args.budget)
        rows += [
            ("I(M;Y_E,Z) active", mutual_info(active, "M", ("YE", "Z")).value),
            ("d1(M|Y_E,Z) active", l1_security(active, "M", ("YE", "Z"), code.n_messages).exact),
        ]
    _emit(args, ("measure", "value"), rows)
    return EXIT_OK


def cmd_reduction(args) -> int:
    spec = load_network(args.spec)
    strat = parse_strategy(_read(args.strategy), spec.ctx)
    code = parse_code(_read(args.code))
    res = reduction_check(code, spec, strat, args.budget)
    rows = [
        ("verdict", res.verdict.value),
        ("I_passive_bits", res.leak_passive),
        ("I_active_bits", res.leak_active),
        ("active_function_of_passive", res.forward),
        ("passive_function_of_active", res.backward),
    ]
    _emit(args, ("item", "value"), rows, title="active vs passive eavesdropping (exact distributions)")
    if res.witness:
        _note(args, f"witness: {res.witness}")
    return EXIT_OK if res.verdict.value == "equivalent" else EXIT_FINDING


# --- hash-code ------------------------------------------------------------


def cmd_hash_code(args) -> int:
    from .seccode import sacrificed_length, seed_search, seed_to_int, toeplitz_hash, universal2_audit

    ctx = gf(2)
    status = EXIT_OK
    if (args.audit or args.hash_seed is not None) and not 0 < args.kbar <= args.k:
        raise InputError("--audit and --seed need 0 < --kbar <= --k")
    if args.audit:
        a = universal2_audit(args.k, args.kbar, ctx)
        _emit(args, ("k", "kbar", "max_collision", "bound", "ratio", "ok"),
              [(args.k, args.kbar, a.max_collision, a.bound, a.ratio, a.ok)],
              title="universal2 audit over all seeds and input pairs")
        if not a.ok:
            status = EXIT_FINDING
    if args.hash_seed is not None:
        h = toeplitz_hash(args.hash_seed, args.k, args.kbar, ctx)
        block = h.encoder_block()
        ident = (h.matrix @ block) == Mat.identity(ctx, args.kbar).hstack(Mat.zeros(ctx, args.kbar, args.k - args.kbar))
        _note(args, f"seed {args.hash_seed:#x} -> S = {''.join(map(str, h.seed))}")
        _emit(args, ("hash_row", "entries"), [(i + 1, line) for i, line in enumerate(_mat_lines(h.matrix))])
        _note(args, f"(I, T)·[[I, -T], [0, I]] = (I, 0): {ident}")
    if args.family:
        paths = sorted({p for pat in args.family for p in (glob.glob(pat) or [pat])})
        family = []
        for p in paths:
            spec = load_network(p)
            family.append(compile_passive(spec.with_attack(wiretap=spec.wiretap, inject=(), model=ModelKind.PASSIVE)).KE)
        m3 = family[0].cols
        if any(f.cols != m3 for f in family):
            raise InputError("family specs disagree on the number of source edges")
        if args.k % m3:
            raise InputError(f"k={args.k} is not a multiple of m3={m3}")
        n = args.k // m3
        m2 = max(mat_rank(f) for f in family)
        kbar = args.kbar or sacrificed_length(args.k, m2, n)
        res = seed_search(Mat.identity(ctx, args.k), args.k, kbar, family, n)
        rows = [("k", args.k), ("kbar", kbar), ("l", n), ("family_size", len(family)),
                ("seed", f"{seed_to_int(res.seed, ctx):#x}"),
                ("zero_leak", res.found), ("worst_leak_symbols", res.leak), ("seeds_scanned", res.scanned)]
        _emit(args, ("item", "value"), rows, title="seed search against the K_E family")
        if not res.found:
            _note(args, "witness K_E:\n  " + "\n  ".join(_mat_lines(res.witness)))
            status = EXIT_FINDING
    if not (args.audit or args.family or args.hash_seed is not None):
        raise InputError("nothing to do: pass --audit, --seed or --family")
    return status


# --- robust-sim -----------------------------------------------------------


def _trial_chunk(params: tuple) -> list:
    from .robust import default_field, run_trial

    q, m0, m1, m3, m4, n, seed, lo, hi = params
    ctx = default_field(q)
    return [run_trial(ctx, m0, m1, m3, m4, n, seed, t) for t in range(lo, hi)]


def cmd_robust_sim(args) -> int:
    from .robust import failure_bound, summarize

    m3 = args.m3 or args.m0 + 1
    m4 = args.m4 or args.m0 + 1
    chunks = max(1, args.jobs)
    step = -(-args.trials // chunks)
    params = [(args.q, args.m0, args.m1, m3, m4, args.n, args.seed, lo, min(args.trials, lo + step))
              for lo in range(0, args.trials, step)]
    try:
        if args.jobs > 1:
            with ProcessPoolExecutor(args.jobs) as pool:
                results = [r for part in pool.map(_trial_chunk, params) for r in part]
        else:
            results = [r for p in params for r in _trial_chunk(p)]
    except AssertionError as e:
        print(f"model violation: {e}", file=sys.stderr)
        return EXIT_VIOLATION
    s = summarize(results, args.q, args.n, args.m0, args.m1)
    _note(args, f"seed={args.seed} q'={args.q} n={args.n} m0={args.m0} m1={args.m1} m3={m3} m4={m4}")
    _emit(args, ("trial", "F1'", "F1''", "F2", "success"),
          [(r.trial, r.cond.f1a, r.cond.f1b, r.cond.f2, r.success) for r in results])
    terms = failure_bound(args.q, args.n, args.m0, args.m1)
    _note(args, f"failures {s.failures}/{s.trials} = {fmt(s.rate)}; bound {fmt(terms['total'])} "
                f"(F2 term {fmt(terms['F2'])}); 3-sigma consistent: {s.consistent}; "
                f"implication held in {s.implication_holds}/{s.trials} trials")
    if args.plot:
        plot_failures([r.success for r in results], terms["total"], args.plot)
        _note(args, f"figure written to {args.plot}")
    return EXIT_OK if s.consistent else EXIT_FINDING


# --- onehop ---------------------------------------------------------------


def _leak_rows(code) -> list[tuple]:
    from .onehop import leakage_profile

    prof = leakage_profile(code)
    return [(f"Y{r.i}Y{r.j}", r.info, r.d1, r.closed if r.closed is not None else "") for r in prof.rows]


def cmd_onehop(args) -> int:
    from . import onehop as oh

    sub = args.onehop_cmd
    if sub == "demo-binary":
        code = oh.binary_counterexample()
        _emit(args, ("pair", "I_bits", "d1", "closed_form"), _leak_rows(code), title="passive leakage")
        attacks = [("(i) Y1 <- 1, observe Y1 Y3", 1, 1, 3), ("(ii) Y1 <- 0, observe Y1 Y4", 1, 0, 4)]
        rows = []
        for label, edge, c, j in attacks:
            dist = oh.active_joint(code, edge, lambda _y, c=c: c)
            rows.append((label, mutual_info(dist, "M", [f"Y{edge}", f"Y{j}"]).value,
                         oh.recovery_probability(dist, [f"Y{edge}", f"Y{j}"])))
        _emit(args, ("attack", "I_bits", "recovery_probability"), rows, title="active replacement")
        return EXIT_OK
    if sub == "construct":
        code = oh.construct(args.d)
        v = oh.verify_pair(code.phi3, code.phi4)
        _note(args, oh.format_pair((code.phi3, code.phi4)))
        _note(args, f"decodable: {v.decodable}; (Y3, Y4) also determines L: {oh.joint_recovery(code)}")
        _emit(args, ("pair", "I_bits", "d1", "closed_form"), _leak_rows(code), title="passive leakage")
        p, attack = oh.max_active_recovery(code)
        _note(args, f"best constant-replacement attack {attack}: recovery probability {fmt(p)}")
        if args.plot:
            ds = list(range(3, max(args.d, 4) + 1))
            measured, closed = {}, {}
            for d in ds:
                prof = oh.leakage_profile(oh.construct(d))
                for r in prof.rows:
                    measured.setdefault((r.i, r.j), []).append(r.info)
                    closed.setdefault((r.i, r.j), []).append(r.closed)
            plot_leakage(ds, measured, closed, args.plot)
            _note(args, f"figure written to {args.plot}")
        return EXIT_OK if v.decodable else EXIT_FINDING
    if sub == "verify":
        try:
            pair = oh.parse_pair(_read(args.file))
        except oh.OneHopError as e:
            raise InputError(str(e)) from None
        v = oh.verify_pair(*pair)
        _emit(args, ("check", "value"),
              [("anti_latin_phi3", v.anti_latin3), ("anti_latin_phi4", v.anti_latin4),
               ("separable", v.separable), ("decodable", v.decodable)])
        for w in v.witnesses:
            _note(args, "  " + w)
        return EXIT_OK if v.decodable else EXIT_FINDING
    if sub == "search":
        pairs = oh.search_pairs(args.d, args.budget)
        _note(args, f"{len(pairs)} decodable pairs with phi3(0,0) = 0 for d = {args.d}")
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write("\n".join(oh.format_pair(p) for p in pairs))
        ex1 = any(oh.relabel_equivalent(oh.EX1, p) for p in pairs) if args.d == 3 else ""
        _emit(args, ("d", "pairs", "contains_ex1_relabeled"), [(args.d, len(pairs), ex1)])
        return EXIT_OK
    if sub == "audit-t6":
        r = oh.lemma_t6_audit()
        _emit(args, ("relay_maps", "recoverable", "survivors", "orbit_size", "outside_orbit"),
              [(r.total, r.recoverable, len(r.survivors), r.orbit_size, len(r.outside_orbit))],
              title="binary relay maps under Y1 = M + L, Y2 = L")
        return EXIT_OK if r.ok else EXIT_FINDING
    raise InputError("missing onehop subcommand")


# --- qkd-rate / multicast -------------------------------------------------


def cmd_qkd_rate(args) -> int:
    from .seccode import rate_report

    spec = load_network(args.spec)
    model = ModelKind(args.model)
    if args.worst_case is not None:
        nodes = intermediate_nodes(spec)
        if not 0 <= args.worst_case <= len(nodes):
            raise InputError(f"--worst-case must lie in 0..{len(nodes)}")
        dims = [attack_ranks(spec, s, model) for s in itertools.combinations(nodes, args.worst_case)]
        m0 = min(d.m0 for d in dims)
        m1 = max(d.m1 for d in dims)
        m2 = max(d.m2 for d in dims)
        label = f"worst case over {len(dims)} sets of {args.worst_case} node(s)"
    else:
        occ = [] if args.occupied in (None, ["none"]) else args.occupied
        d = attack_ranks(spec, occ, model)
        m0, m1, m2 = d.m0, d.m1, d.m2
        label = "occupied: " + (" ".join(occ) or "none")
    rep = rate_report(m0, m1, m2, args.regime)
    _emit(args, ("m0", "m1", "m2", "regime", "rate", "guaranteed"),
          [(m0, m1, m2, rep.regime.value, rep.rate, rep.guaranteed)], title=label)
    return EXIT_OK


def cmd_multicast(args) -> int:
    from .seccode import rate_report

    table = parse_multicast(_read(args.file))
    rows = []
    for i, (m0, m1, m2) in sorted(multicast_params(table).items()):
        rep = rate_report(m0, m1, m2, args.regime)
        rows.append((i, m0, m1, m2, rep.rate, rep.guaranteed))
    _emit(args, ("sender", "m0", "m1", "m2", "rate", "guaranteed"), rows, title=f"regime: {args.regime}")
    return EXIT_OK


# --- parser ---------------------------------------------------------------


def _int_auto(s: str) -> int:
    try:
        return int(s, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}") from None


def _hex(s: str) -> int:
    try:
        return int(s, 16)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a hex seed: {s!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="secnet", description="Secure network coding analyses at desk scale.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--format", choices=("text", "csv"), default="text", help="report layout")
    p.add_argument("--seed", type=_int_auto, default=0, help="64-bit master seed (SECNET_SEED overrides)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for Monte Carlo runs")
    p.add_argument("--budget", type=int, default=1 << 24, help="enumeration cap")
    p.add_argument("--log-level", default="WARNING")
    # The same options after the subcommand; SUPPRESS keeps the top-level values unless given.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "csv"), default=argparse.SUPPRESS)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
    common.add_argument("--budget", type=int, default=argparse.SUPPRESS)
    common.add_argument("--log-level", default=argparse.SUPPRESS)
    sp = p.add_subparsers(dest="cmd", required=True)

    s = sp.add_parser("transfer", parents=[common], help="compile a network into K_B, K_E, H_B, H_E",
                      description="CSV columns: item,row,value (matrix rows, then m0..m6).")
    s.add_argument("spec")
    s.set_defaults(func=cmd_transfer)

    s = sp.add_parser("attack-sim", parents=[common], help="exact leakage of a code, passively or under a strategy",
                      description="CSV columns: measure,value (bits; d1 as an exact rational).")
    s.add_argument("spec")
    s.add_argument("code")
    s.add_argument("--strategy")
    s.set_defaults(func=cmd_attack_sim)

    s = sp.add_parser("reduction", parents=[common], help="compare an active strategy with passive listening",
                      description="CSV columns: item,value. Exit 0 equivalent, 3 otherwise, 4 non-unique.")
    s.add_argument("spec")
    s.add_argument("strategy")
    s.add_argument("code")
    s.set_defaults(func=cmd_reduction)

    s = sp.add_parser("hash-code", parents=[common], help="Toeplitz hashing: audit, show a seed, search against a K_E family",
                      description="CSV columns depend on the action: audit rows, hash rows, or item,value.")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--kbar", type=int, default=0, help="output length (derived from the family when omitted)")
    s.add_argument("--seed", type=_hex, dest="hash_seed", default=None,
                   help="hash seed as hex, S_1 most significant (not affected by SECNET_SEED)")
    s.add_argument("--audit", action="store_true")
    s.add_argument("--family", nargs="+", help="network specs (or quoted globs) whose K_E form the family")
    s.set_defaults(func=cmd_hash_code)

    s = sp.add_parser("robust-sim", parents=[common], help="Monte Carlo of the Vandermonde-header robust code",
                      description="CSV columns: trial,F1',F1'',F2,success.")
    s.add_argument("--q", type=int, default=65521)
    s.add_argument("--n", type=int, default=8)
    s.add_argument("--m0", type=int, default=3)
    s.add_argument("--m1", type=int, default=1)
    s.add_argument("--m3", type=int, default=0, help="default m0 + 1")
    s.add_argument("--m4", type=int, default=0, help="default m0 + 1")
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--seed", type=_int_auto, dest="sim_seed", default=None)
    s.add_argument("--plot", help="write the running failure rate to this image")
    s.set_defaults(func=cmd_robust_sim)

    s = sp.add_parser("onehop", help="one-hop relay network analyses")
    oh = s.add_subparsers(dest="onehop_cmd", required=True)
    oh.add_parser("demo-binary", parents=[common], help="binary non-linear relay and its active break",
                  description="CSV: pair,I_bits,d1,closed_form then attack,I_bits,recovery_probability.")
    c = oh.add_parser("construct", parents=[common], help="systematic decodable pair for a given d",
                      description="CSV columns: pair,I_bits,d1,closed_form.")
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--plot", help="plot leakage against d = 3..D to this image")
    c = oh.add_parser("verify", parents=[common], help="check a pair file", description="CSV columns: check,value.")
    c.add_argument("--file", required=True)
    c = oh.add_parser("search", parents=[common], help="exhaustive decodable-pair search (d = 2 or 3)",
                      description="CSV columns: d,pairs,contains_ex1_relabeled.")
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--out", help="write every pair found to this file")
    oh.add_parser("audit-t6", parents=[common], help="classify all binary relay maps",
                  description="CSV columns: relay_maps,recoverable,survivors,orbit_size,outside_orbit.")
    s.set_defaults(func=cmd_onehop)

    s = sp.add_parser("qkd-rate", parents=[common], help="rate of a node-adversary scenario",
                      description="CSV columns: m0,m1,m2,regime,rate,guaranteed.")
    s.add_argument("spec")
    s.add_argument("--occupied", nargs="*", help="occupied node names, or 'none'")
    s.add_argument("--worst-case", type=int, help="take the worst case over all sets of this many nodes")
    s.add_argument("--regime", default="secrecy-only",
                   choices=("secrecy+robustness", "secrecy-only", "robustness-only"))
    s.add_argument("--model", default="addition", choices=("addition", "replacement"))
    s.set_defaults(func=cmd_qkd_rate)

    s = sp.add_parser("multicast", parents=[common], help="per-sender rates from a multicast rank table",
                      description="CSV columns: sender,m0,m1,m2,rate,guaranteed.")
    s.add_argument("file")
    s.add_argument("--regime", default="secrecy+robustness",
                   choices=("secrecy+robustness", "secrecy-only", "robustness-only"))
    s.set_defaults(func=cmd_multicast)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(name)s: %(message)s")
    env = os.environ.get("SECNET_SEED")
    if env is not None:
        try:
            args.seed = int(env, 0)
        except ValueError:
            print(f"error: SECNET_SEED={env!r} is not an integer", file=sys.stderr)
            return EXIT_INPUT
    if args.cmd == "robust-sim":
        if getattr(args, "sim_seed", None) is not None and env is None:
            args.seed = args.sim_seed
        if not 0 <= args.seed < 1 << 64:
            print("error: seed must fit in 64 bits", file=sys.stderr)
            return EXIT_INPUT
    try:
        return args.func(args)
    except UniquenessViolation as e:
        print(f"model violation: {e}", file=sys.stderr)
        return EXIT_VIOLATION
    except SpecError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as e:
        print(f"error: {e.filename}: {e.strerror}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, BudgetError, SearchBudgetError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
