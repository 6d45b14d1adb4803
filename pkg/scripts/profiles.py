"""Integrand profiles around the saddle (real and imaginary parts of f(y)/f(0)).

Writes one CSV per (n, v) into --out-dir; plotting is left to the reader.
"""
import argparse
import csv
from pathlib import Path

import mpmath

from gstieltjes.cli import CliConfig, profile_rows


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out-dir", default="results/profiles")
    p.add_argument("--M", type=int, default=201)
    p.add_argument("--digits", type=int, default=30)
    p.add_argument("--v", nargs="+", default=["1", "2+3i"])
    p.add_argument("--k", nargs="+", type=int, default=[5, 10, 15, 100], help="n = 10^k")
    args = p.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for v in args.v:
        for k in args.k:
            cfg = CliConfig("profile", n=10**k, v=v, digits=args.digits, M=args.M)
            rows = profile_rows(cfg)
            path = out / f"profile_n1e{k}_v{v.replace('+', 'p')}.csv"
            with open(path, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["y", "re_ratio", "im_ratio"])
                for y, re, im in rows:
                    w.writerow([mpmath.nstr(x, 17, min_fixed=1, max_fixed=0) for x in (y, re, im)])
            q = rows[-1][0]
            print(f"v={v:5s} n=1e{k:<4d} q={mpmath.nstr(q, 5):>12s} -> {path}")


if __name__ == "__main__":
    main()
