"""Relative error against step size at fixed cutoff, n = 10^100, v = 1.

The cutoff uses N = 720 with no safety factor, which reproduces the
published q = 6.067e-48; the reference is the sum on the grid one level
finer than the last reported one.
"""
import argparse
import math

import mpmath

from gstieltjes.cli import CliConfig, convergence_rows


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--k", type=int, default=100, help="n = 10^k")
    p.add_argument("--v", default="1")
    p.add_argument("--digits", type=int, default=1000)
    p.add_argument("--q-digits", type=int, default=720)
    p.add_argument("--M", type=int, default=101)
    p.add_argument("--levels", type=int, default=5)
    args = p.parse_args()

    cfg = CliConfig(
        "convergence", n=10**args.k, v=args.v, digits=args.digits,
        M=args.M, q_digits=args.q_digits, levels=args.levels,
    )
    rows = convergence_rows(cfg)
    print(f"{'m':>2} {'h':>14} {'rel_err':>12} {'digits':>8} {'x digits':>9}")
    prev = None
    for m, h, err in rows:
        d = float(-mpmath.log10(err))
        growth = f"{d / prev:9.2f}" if prev else " " * 9
        print(f"{m:>2} {mpmath.nstr(h, 6):>14} {mpmath.nstr(err, 4):>12} {d:8.1f} {growth}")
        prev = d
    ds = [float(-mpmath.log10(e)) for _, _, e in rows]
    geo = math.exp(sum(math.log(b / a) for a, b in zip(ds, ds[1:])) / (len(ds) - 1))
    print(f"geometric mean digit growth per halving: {geo:.2f}")


if __name__ == "__main__":
    main()
