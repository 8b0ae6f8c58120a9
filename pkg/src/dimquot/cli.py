"""``dimquot`` command line.

Exit codes: 0 pass, 1 check failed, 2 usage or input error, 3 internal error.
"""
from __future__ import annotations

import argparse
import sys
import traceback

from . import abgroup as ab
from .catalog import builtin
from .crossed import MalformedCube, crossed_cube_check
from .group import GroupError, evaluate_word
from .groupring import IdealTuple, RingError, e_idl_cube, group_ring, integers, is_good_tuple, zero_ring
from .parsing import ParseError, load_cube, load_group, parse_ideals, parse_subgroup, parse_word
from .report import ReportDocument, emit_csv, emit_report
from .verify import (
    FAIL,
    PASS,
    TWO_GROUPS_16,
    CorpusConfig,
    QuotientHom,
    check_bd,
    check_exponent2,
    check_inclusion_n,
    check_modg,
    expand_checks,
    probe_free_example,
    run_corpus,
    sweep_free_example,
)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _print_record(rec) -> None:
    subs = ", ".join(f"{s['name']}(order {s['order']})" for s in rec.subgroups)
    print(f"{rec.check} on {rec.group['name']} (order {rec.group['order']}): {subs}")
    print(f"  |D| = {rec.d_order}, |N| = {rec.norm_order}")
    if rec.quotient:
        q = rec.quotient
        f = q["invariant_factors"]
        shape = " + ".join(f"Z/{d}" for d in f) if f else ("0" if f is not None else "non-abelian")
        print(f"  D/N = {shape}, exponent {q['exponent']}")
    extras = {k: v for k, v in rec.detail.items() if k not in ("connectivity_convention",)}
    if extras:
        print("  " + ", ".join(f"{k}={v}" for k, v in extras.items()))
    print(f"  verdict: {rec.verdict}")


def _write_json(path, records, config, deterministic=False, statistics=None):
    if path:
        emit_report(ReportDocument(config, records, statistics), path, deterministic)


def _exit_for(records) -> int:
    return EXIT_FAIL if any(r.verdict == FAIL for r in records) else EXIT_PASS


def _subs(args, g, names):
    out = []
    for nm in names:
        text = getattr(args, nm)
        if text is None:
            raise UsageError(f"--{nm} is required")
        out.append(parse_subgroup(nm, text).build(g))
    return out


def cmd_check(args) -> int:
    g = load_group(args.group, cap=args.cap)
    if args.command == "exp2":
        rec = check_exponent2(g, *_subs(args, g, "RST"))
    elif args.command == "bd":
        rec = check_bd(g, *_subs(args, g, "RS"))
    elif args.command == "modg":
        rec = check_modg(g, *_subs(args, g, "RST"))
    else:
        subs = [parse_subgroup(f"R{k}", t).build(g) for k, t in enumerate(args.sub or [], 1)]
        if len(subs) != args.n:
            raise UsageError(f"--n {args.n} needs exactly {args.n} --sub options, got {len(subs)}")
        rec = check_inclusion_n(g, subs)
    _print_record(rec)
    _write_json(args.json, [rec], {"command": args.command, "group": args.group})
    return _exit_for([rec])


def _parse_invariants(text: str) -> ab.FgAbelianGroup:
    try:
        orders = [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise UsageError(f"bad invariant list {text!r}") from None
    if any(o < 0 or o == 1 for o in orders):
        raise UsageError("orders must be 0 (for Z) or at least 2")
    return ab.FgAbelianGroup.from_cyclic([o for o in orders if o], free_rank=orders.count(0))


def cmd_gamma(args) -> int:
    a = _parse_invariants(args.invariants)
    print(f"A = {a}")
    methods = ["presentation", "closed"] if args.method == "both" else [args.method]
    if "presentation" in methods and not a.is_finite:
        raise UsageError("the presentation method needs a finite group")
    results = {m: ab.whitehead_gamma(a, m) for m in methods}
    for m, gm in results.items():
        print(f"Gamma(A) [{m}] = {gm}")
    print(f"A (x) A = {ab.tensor_square(a)}")
    if a.is_finite:
        print(f"Phi(A) = {ab.phi(a)}")
    else:
        print("Phi(A) = n/a (infinite A)")
    print(f"Lambda^2(A) = {ab.exterior_square(a)}")
    if args.method == "both":
        agree = results["presentation"] == results["closed"]
        print(f"agreement: {'yes' if agree else 'NO'}")
        return EXIT_PASS if agree else EXIT_FAIL
    return EXIT_PASS


def _ring(args):
    spec = args.ring
    kind = spec[0]
    if kind == "group" and len(spec) == 2:
        g = load_group(spec[1], cap=args.cap)
        return group_ring(g, cap=args.cap), g
    if kind == "zero" and len(spec) == 2 and spec[1].isdigit():
        return zero_ring(int(spec[1])), None
    if kind == "int" and len(spec) == 1:
        return integers(), None
    raise UsageError("--ring takes 'group FILE', 'zero N' or 'int'")


def cmd_good(args) -> int:
    ring, g = _ring(args)
    t = IdealTuple(ring, tuple(parse_ideals(args.ideals, ring, g)))
    res = is_good_tuple(t)
    print(f"{t.n}-tuple in {ring.name}: {'good' if res.good else 'not good'}")
    if res.witness:
        alpha, beta, k = res.witness
        print(f"  witness: alpha={set(alpha) or '{}'}, beta={set(beta) or '{}'}, k={k}")
    return EXIT_PASS if res.good else EXIT_FAIL


def cmd_cube(args) -> int:
    ring, g = _ring(args)
    t = IdealTuple(ring, tuple(parse_ideals(args.tuple, ring, g)))
    table = e_idl_cube(t)
    fmt = lambda s: "{" + ",".join(map(str, s)) + "}"
    for (alpha, beta), entry in table.items():
        print(f"E(alpha={fmt(alpha)}, beta={fmt(beta)}) = {entry}")
    return EXIT_PASS


def cmd_crossed(args) -> int:
    d = load_cube(args.file)
    verdicts = crossed_cube_check(d)
    for v in verdicts:
        line = f"{'pass' if v.passed else 'FAIL'}  {v.axiom}"
        if v.witness:
            line += f"  [{v.witness}]"
        print(line)
    return EXIT_PASS if all(v.passed for v in verdicts) else EXIT_FAIL


def cmd_batch(args) -> int:
    if args.corpus != "builtin":
        raise UsageError("only --corpus builtin is available")
    checks = tuple(c.strip() for c in args.checks.split(",") if c.strip())
    kwargs = {"checks": checks, "seed": args.seed, "max_triples": args.max_triples}
    if args.groups is not None:
        kwargs["groups"] = tuple(x.strip() for x in args.groups.split(",") if x.strip())
    config = CorpusConfig(**kwargs)
    try:
        expand_checks(config.checks, config.incl_n)
        for name in config.groups:
            builtin(name)
    except (ValueError, KeyError) as e:
        raise UsageError(str(e).strip("'\"")) from None
    report = run_corpus(config)
    doc = ReportDocument(config.to_json(), report.records)
    emit_report(doc, args.report, deterministic=args.deterministic)
    if args.csv:
        emit_csv(report.records, args.csv)
    s = doc.summary
    print(f"{len(report.records)} records: {s['pass']} pass, {s['fail']} fail, {s['inapplicable']} inapplicable")
    if s["fail"]:
        print("check failures present: see report", file=sys.stderr)
    return EXIT_FAIL if s["fail"] else EXIT_PASS


def cmd_probe(args) -> int:
    targets = [load_group(t, cap=args.cap) for t in args.target] if args.target else None
    if targets is None:
        targets = [load_group(f"builtin:{n}") for n in TWO_GROUPS_16]
    records, stats = [], {}
    if args.sweep:
        for g in targets:
            sw = sweep_free_example(g)
            records += sw.records
            stats[g.name] = {
                "assignments": sw.assignments,
                "surjective": sw.surjective,
                "distinct_images": len(sw.records),
                "quotient_rank_counts": {str(k): v for k, v in sw.rank_counts.items()},
            }
            print(f"{g.name}: {sw.surjective}/{sw.assignments} onto, {len(sw.records)} distinct (R,S,T), ranks {sw.rank_counts}")
    else:
        if len(targets) != 1 or None in (args.a, args.b, args.c):
            raise UsageError("without --sweep give one --target and all of --a, --b, --c")
        g = targets[0]
        imgs = [evaluate_word(g, parse_word(w)) for w in (args.a, args.b, args.c)]
        rec = probe_free_example(QuotientHom(g, *imgs))
        _print_record(rec)
        records.append(rec)
    _write_json(args.report, records, {"command": "probe-free", "sweep": bool(args.sweep)}, args.deterministic, stats)
    bad = sum(r.verdict != PASS for r in records)
    print(f"{len(records)} records, {bad} not passing")
    return _exit_for(records)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dimquot", description="Generalized dimension subgroups and related checks.")
    p.add_argument("--cap", type=int, default=128, help="group order cap")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, needed in (("exp2", "RST"), ("bd", "RS"), ("modg", "RST")):
        sp = sub.add_parser(name, help=f"{name} check on one instance")
        sp.add_argument("--group", required=True, help="group file or builtin:NAME")
        for x in needed:
            sp.add_argument(f"--{x}", help="comma-separated words; the normal closure is taken")
        sp.add_argument("--json", help="write a JSON report here")
        sp.set_defaults(func=cmd_check)
    sp = sub.add_parser("incl", help="symmetric commutator inside the dimension subgroup")
    sp.add_argument("--group", required=True)
    sp.add_argument("--n", type=int, required=True, choices=(2, 3, 4))
    sp.add_argument("--sub", action="append", help="one subgroup (repeat n times)")
    sp.add_argument("--json")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("gamma", help="Gamma, Phi, Lambda^2 and tensor square of an abelian group")
    sp.add_argument("--invariants", required=True, help="e.g. 2,4 (0 stands for Z)")
    sp.add_argument("--method", choices=("presentation", "closed", "both"), default="both")
    sp.set_defaults(func=cmd_gamma)

    for name, opt, func in (("good", "--ideals", cmd_good), ("cube", "--tuple", cmd_cube)):
        sp = sub.add_parser(name)
        sp.add_argument("--ring", nargs="+", required=True, metavar="SPEC", help="group FILE | zero N | int")
        sp.add_argument(opt, required=True, help="';'-separated ideals: aug(words), [v],[v], N*R, zero, full")
        sp.set_defaults(func=func)

    sp = sub.add_parser("crossed", help="check crossed-cube axioms on JSON tables")
    sp.add_argument("--file", required=True)
    sp.set_defaults(func=cmd_crossed)

    sp = sub.add_parser("batch", help="run the corpus harness")
    sp.add_argument("--corpus", default="builtin")
    sp.add_argument("--groups", help="comma-separated subset of the built-in groups")
    sp.add_argument("--checks", default="exp2,bd,modg,incl")
    sp.add_argument("--report", required=True)
    sp.add_argument("--csv")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-triples", type=int, default=500)
    sp.add_argument("--deterministic", action="store_true", help="zero timing fields")
    sp.set_defaults(func=cmd_batch)

    sp = sub.add_parser("probe-free", help="push the free-group example into finite groups")
    sp.add_argument("--target", action="append", help="group file or builtin:NAME (default: 2-groups of order <= 16)")
    sp.add_argument("--sweep", action="store_true")
    sp.add_argument("--a")
    sp.add_argument("--b")
    sp.add_argument("--c")
    sp.add_argument("--report")
    sp.add_argument("--deterministic", action="store_true")
    sp.set_defaults(func=cmd_probe)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except (UsageError, ParseError, GroupError, RingError, MalformedCube, ab.InfiniteGroupError) as e:
        print(f"dimquot: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
