"""Jacobi sweep: endpoint and derivative inequalities over (n, alpha, beta),
plus the second moment of Legendre zeros drifting toward the arcsine value 1/2."""
import argparse
import csv
import itertools
import sys

import numpy as np

from lame_choquet import JacobiParams, eq_j_strong_check, jacobi_zeros, theorem_tj_check


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=50)
    ap.add_argument("--params", type=float, nargs="+", default=[0.0, 0.5, -0.5, 1.0, 2.0])
    ap.add_argument("--out", default="-")
    args = ap.parse_args(argv)

    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    writer = csv.writer(fh)
    writer.writerow(["n", "alpha", "beta", "tj_min_slack", "strong_min_slack", "second_moment"])
    worst = np.inf
    for n, a, b in itertools.product(range(1, args.n_max + 1), args.params, args.params):
        p = JacobiParams(n, a, b)
        tj = theorem_tj_check(p, certify=False).min_slack
        strong = eq_j_strong_check(p).min_slack if n >= 2 else ""
        worst = min(worst, tj, strong if strong != "" else np.inf)
        writer.writerow([n, a, b, repr(tj), repr(strong) if strong != "" else "", repr(float(np.mean(jacobi_zeros(p) ** 2)))])
    print(f"worst slack {worst:.3e}", file=sys.stderr)


if __name__ == "__main__":
    main()
