"""Wall-clock timings of gamma_n(1) at 100 and 1000 digits."""
import argparse

from gstieltjes import GammaRequest, gamma


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--k", nargs="+", type=int, default=[5, 10, 15, 50, 100], help="n = 10^k")
    p.add_argument("--digits", nargs="+", type=int, default=[100, 1000])
    p.add_argument("--v", default="1")
    args = p.parse_args()

    print(f"{'n':>7} {'digits':>6} {'seconds':>8} {'M':>6}")
    for k in args.k:
        for d in args.digits:
            res = gamma(GammaRequest(n=10**k, v=args.v, digits=d))
            print(f"{'1e' + str(k):>7} {d:>6} {res.elapsed:8.2f} {res.plan.M:>6}")


if __name__ == "__main__":
    main()
