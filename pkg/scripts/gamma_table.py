"""Print Gamma, Phi, tensor and exterior squares for small finite abelian groups."""
from __future__ import annotations

import argparse
import itertools
import sys

from dimquot.abgroup import FgAbelianGroup, exponent, exterior_square, phi, tensor, whitehead_gamma


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--factors", default="2,3,4,5,6,8,9", help="allowed invariant factors")
    p.add_argument("--max-len", type=int, default=2, help="at most this many factors")
    args = p.parse_args(argv)

    factors = [int(x) for x in args.factors.split(",")]
    bad = 0
    print(f"{'A':18s} {'Gamma(A)':22s} {'Phi(A)':14s} {'A(x)A':22s} {'L2(A)':14s} ok")
    for k in range(1, args.max_len + 1):
        for orders in itertools.combinations_with_replacement(factors, k):
            a = FgAbelianGroup.from_cyclic(orders)
            g, p_, t, l2 = whitehead_gamma(a), phi(a), tensor(a, a), exterior_square(a)
            ok = g == whitehead_gamma(a, "closed") and exponent(p_) in (1, 2) and p_.order * t.order == g.order * l2.order
            bad += not ok
            print(f"{str(a):18s} {str(g):22s} {str(p_):14s} {str(t):22s} {str(l2):14s} {'yes' if ok else 'NO'}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
