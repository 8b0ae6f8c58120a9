"""Run the verification harness over the built-in corpus and write a JSON report."""
from __future__ import annotations

import argparse
import sys
import time

from dimquot.report import ReportDocument, emit_csv, emit_report
from dimquot.verify import BUILTIN_CORPUS, CorpusConfig, run_corpus


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--groups", default=",".join(BUILTIN_CORPUS))
    p.add_argument("--checks", default="exp2,bd,modg,incl,aux")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-triples", type=int, default=500)
    p.add_argument("--report", default="corpus_report.json")
    p.add_argument("--csv")
    p.add_argument("--deterministic", action="store_true")
    args = p.parse_args(argv)

    config = CorpusConfig(
        groups=tuple(x for x in args.groups.split(",") if x),
        checks=tuple(x for x in args.checks.split(",") if x),
        seed=args.seed,
        max_triples=args.max_triples,
    )
    start = time.perf_counter()
    rep = run_corpus(config, progress=lambda g, c: print(f"  {g.name:8s} {c}", file=sys.stderr))
    emit_report(ReportDocument(config.to_json(), rep.records), args.report, args.deterministic)
    if args.csv:
        emit_csv(rep.records, args.csv)
    s = rep.summary
    print(f"{len(rep.records)} records: {s['pass']} pass, {s['fail']} fail, {s['inapplicable']} inapplicable "
          f"({time.perf_counter() - start:.1f}s) -> {args.report}")
    return 1 if s["fail"] else 0


if __name__ == "__main__":
    sys.exit(main())
