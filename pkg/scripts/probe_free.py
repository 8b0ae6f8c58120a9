"""Sweep all maps from the free group on a, b, c into small 2-groups and tabulate quotient ranks."""
from __future__ import annotations

import argparse
import sys

from dimquot.catalog import builtin
from dimquot.report import ReportDocument, emit_report
from dimquot.verify import PASS, TWO_GROUPS_16, sweep_free_example


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--targets", default=",".join(TWO_GROUPS_16))
    p.add_argument("--all-maps", action="store_true", help="include non-surjective maps")
    p.add_argument("--report")
    args = p.parse_args(argv)

    records, stats, failures = [], {}, 0
    print(f"{'target':8s} {'maps':>6s} {'onto':>6s} {'images':>6s}  quotient ranks")
    for name in (x for x in args.targets.split(",") if x):
        sweep = sweep_free_example(builtin(name), surjective_only=not args.all_maps)
        failures += sum(r.verdict != PASS for r in sweep.records)
        records += sweep.records
        stats[name] = {"assignments": sweep.assignments, "surjective": sweep.surjective, "rank_counts": sweep.rank_counts}
        print(f"{name:8s} {sweep.assignments:6d} {sweep.surjective:6d} {len(sweep.records):6d}  {sweep.rank_counts}")
    if args.report:
        emit_report(ReportDocument({"targets": args.targets.split(",")}, records, statistics=stats), args.report, True)
    print(f"{failures} failing records")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
