"""Principal branch W0 of the Lambert W function for complex arguments.

Halley iteration on w*exp(w) - z. Early steps run at low precision and the
precision is doubled as the iterate settles, so most of the work at 1000+
digits is a couple of full-precision steps.
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import libmp as L

from .errors import ConvergenceError
from .mpkernel import (
    MPComplex,
    RND,
    bits_to_digits,
    cexp,
    clog,
    csqrt,
    digits_to_bits,
    zero,
)

MAX_ITER = 100
_START_PREC = 64
_GUARD_BITS = 24


@dataclass(frozen=True)
class LambertResult:
    w: MPComplex
    residual: mpmath.mpf  # |w e^w - z| / |z|
    iterations: int


def _seed(z: MPComplex) -> MPComplex:
    p = z.prec
    az = L.to_float(L.mpc_abs(z.pair, 53, RND))
    if az > 3:
        l1 = clog(z)
        l2 = clog(l1)
        return l1 - l2 + l2 / l1
    e = MPComplex.real(L.mpf_e(p, RND), p)
    branch = z * e + 1
    if L.to_float(L.mpc_abs(branch.pair, 53, RND)) < 1.8:
        # expansion about the branch point -1/e
        s = csqrt(branch.scale2(1))
        return -1 + s - s * s / 3 + s * s * s * MPComplex.of(11, p) / 72
    if az < 0.3:
        return z - z * z + z * z * z * 3 / 2
    return clog(z + 1)


def _halley_step(w: MPComplex, z: MPComplex) -> MPComplex:
    ew = cexp(w)
    f = w * ew - z
    wp1 = w + 1
    denom = ew * wp1 - (w + 2) * f / wp1.scale2(1)
    return w - f / denom


def _rel(a: MPComplex, b: MPComplex) -> float:
    """|a| / |b| as a float (b nonzero)."""
    la, lb = a.log10_abs(), b.log10_abs()
    return 10.0 ** max(-4000.0, la - lb)


def lambert_w0(z: MPComplex, digits: int | None = None) -> LambertResult:
    """W0(z) to ``digits`` decimal digits (default: the precision of ``z``)."""
    target = z.prec if digits is None else max(z.prec, digits_to_bits(digits))
    want_digits = bits_to_digits(target)
    if z.is_zero:
        return LambertResult(zero(target), mpmath.mpf(0), 0)

    internal = target + _GUARD_BITS
    p = min(_START_PREC, internal)
    zi = z.with_prec(internal)
    near_branch = (zi * MPComplex.real(L.mpf_e(internal, RND), internal) + 1).log10_abs() < -6
    if near_branch:
        # a short start precision cannot see how far z is from -1/e
        p = internal
    w = _seed(z.with_prec(p))
    iterations = 0
    tol_final = 10.0 ** (-want_digits - 2)
    while True:
        zp = z.with_prec(p)
        w = w.with_prec(p)
        tol = tol_final if p == internal else 2.0 ** (-p + 8)
        while True:
            iterations += 1
            if iterations > MAX_ITER:
                raise ConvergenceError(
                    f"Lambert W did not converge in {MAX_ITER} Halley steps "
                    f"(z = {z!r}, precision {p} bits)"
                )
            w_new = _halley_step(w, zp)
            dw = _rel(w_new - w, w_new) if not w_new.is_zero else 0.0
            w = w_new
            if dw <= tol:
                break
        if p == internal:
            break
        p = min(2 * p, internal)

    zi = z.with_prec(internal)
    resid = (w * cexp(w) - zi).abs() / zi.abs()
    residual = mpmath.mp.make_mpf(L.mpf_pos(resid.re, 64, RND))
    if resid.log10_abs() > -want_digits + 2:
        raise ConvergenceError(
            f"Lambert W residual {mpmath.nstr(residual, 5)} exceeds 1e-{want_digits - 2}"
        )
    return LambertResult(w.with_prec(target), residual, iterations)

