"""Digits on which the closed-form asymptotic value agrees with quadrature,
for n = 10^k; the agreement should grow roughly like k."""
import argparse

from gstieltjes import GammaRequest, gamma
from gstieltjes.mpkernel import agreement_digits


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--k", nargs="+", type=int, default=[3, 5, 10, 15, 20, 30, 50, 100])
    p.add_argument("--v", default="1")
    p.add_argument("--digits", type=int, default=110)
    args = p.parse_args()

    print(f"{'n':>7} {'re digits':>10} {'im digits':>10}")
    for k in args.k:
        req = dict(n=10**k, v=args.v, digits=args.digits)
        q = gamma(GammaRequest(**req)).value
        a = gamma(GammaRequest(**req, method="asymptotic")).value
        im = "" if q.is_real else f"{agreement_digits(a.im, q.im):10.1f}"
        print(f"{'1e' + str(k):>7} {agreement_digits(a.re, q.re):10.1f} {im:>10}")


if __name__ == "__main__":
    main()
