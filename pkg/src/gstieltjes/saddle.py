"""Saddle point of exp(g) for the integrand log^{n+1}(a+ix) / cosh^2(pi x).

With g(x) = (n+1) log log(a+ix) - 2 pi x, the saddle g'(omega) = 0 has the
closed form omega = i (a - u / W0(u)), u = (n+1) i / (2 pi). We evaluate the
closed form and polish it with one Newton step at full precision.
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import libmp as L

from .errors import BranchError, DomainError, ValidityError
from .lambertw import lambert_w0
from .mpkernel import (
    MPComplex,
    bits_to_digits,
    cexp,
    clog,
    csqrt,
    digits_to_bits,
    imag_unit,
    ln10,
    pi,
)

CONTOUR_MODES = ("unit", "steepest")
VALIDITY_FACTOR = 20
Q_SAFETY = 1.5


def saddle_valid(n: int, a: MPComplex) -> bool:
    """True when (n+1) >= 20 max(1, |a|), our reading of "n >> |a|"."""
    mag = 0.0 if a.is_zero else 10 ** min(300.0, a.log10_abs())
    return n + 1 >= VALIDITY_FACTOR * max(1.0, mag)


@dataclass(frozen=True)
class SaddleData:
    n: int
    a: MPComplex
    u: MPComplex
    w0: MPComplex
    omega: MPComplex
    log_l_omega: MPComplex  # log log(a + i omega)
    g_omega: MPComplex
    gpp: MPComplex
    theta: mpmath.mpf
    eps: MPComplex
    mode: str
    x0: MPComplex  # start of the contour; 0 unless Re(a) < 1/2

    @property
    def prec(self) -> int:
        return self.omega.prec

    @property
    def digits(self) -> int:
        return bits_to_digits(self.prec)


def compute_u(n: int, prec: int) -> MPComplex:
    """u = (n+1) i / (2 pi)."""
    if n < 0:
        raise DomainError("n must be non-negative")
    return imag_unit(prec) * (n + 1) / pi(prec).scale2(1)


def _inner(x: MPComplex, a: MPComplex) -> MPComplex:
    z = a + x.mul_i()
    if z.is_zero or (z.is_real and L.mpf_sign(z.re) <= 0):
        raise BranchError(f"a + ix = {z!r} lies on the branch cut of log")
    return z


def g_eval(x: MPComplex, n: int, a: MPComplex) -> MPComplex:
    """g(x) = (n+1) log(log(a + ix)) - 2 pi x, principal branches."""
    z = _inner(x, a)
    lz = clog(z)
    if lz.is_zero:
        raise BranchError("a + ix = 1 makes the inner logarithm vanish")
    return clog(lz) * (n + 1) - x * pi(x.prec).scale2(1)


def g_prime(x: MPComplex, n: int, a: MPComplex) -> MPComplex:
    """g'(x) = (n+1) i / ((a+ix) log(a+ix)) - 2 pi."""
    z = _inner(x, a)
    lz = clog(z)
    if lz.is_zero:
        raise BranchError("a + ix = 1 makes the inner logarithm vanish")
    return imag_unit(x.prec) * (n + 1) / (z * lz) - pi(x.prec).scale2(1)


def g_second_at(x: MPComplex, n: int, a: MPComplex) -> MPComplex:
    """g''(x) = (n+1)(1 + 1/log z) / (z^2 log z) with z = a + ix."""
    z = _inner(x, a)
    lz = clog(z)
    if lz.is_zero:
        raise BranchError("a + ix = 1 makes the inner logarithm vanish")
    return (1 + 1 / lz) * (n + 1) / (z * z * lz)


def contour_origin(a: MPComplex) -> MPComplex:
    """Where the half-line contours start: 0, or -i/4 when Re(a) < 1/2.

    For small Re(a) the integrand near x = 0 is of size |log a|^(n+1) and
    becomes a (n+1)!-sized, almost imaginary piece at a = 0, so Re I cancels
    catastrophically. Starting both the a and conj(a) contours at -i/4 gives
    the same full-line sum (x -> -conj(x) swaps them) while avoiding the cut,
    which lies at Im x >= Re a, and the pole at -i/2.
    """
    p = a.prec
    if L.mpf_ge(a.re, L.from_rational(1, 2, p, "n")):
        return MPComplex.real(0, p)
    return MPComplex(L.fzero, L.from_rational(-1, 4, p, "n"), p)


def saddle_residual(sd: SaddleData) -> MPComplex:
    """(n+1) + 2 pi i (a + i omega) log(a + i omega), zero at the saddle."""
    z = sd.a + sd.omega.mul_i()
    return (z * clog(z)).mul_i() * pi(sd.prec).scale2(1) + (sd.n + 1)


def contour_direction(sd: SaddleData, mode: str = "unit") -> MPComplex:
    """Contour rotation eps: 1, or exp(i phi) with phi = (pi - theta)/2."""
    p = sd.prec
    if mode == "unit":
        return MPComplex.real(1, p)
    if mode == "steepest":
        theta = MPComplex.real(sd.theta, p)
        phi = (pi(p) - theta).scale2(-1)
        return cexp(phi.mul_i())
    raise ValueError(f"unknown contour mode {mode!r}; expected one of {CONTOUR_MODES}")


def saddle_point(n: int, a, digits: int, mode: str = "unit") -> SaddleData:
    """Solve for the saddle omega at ``digits`` working digits.

    ``a`` is v - 1/2. Raises :class:`DomainError` if Re(a) < 0 and
    :class:`ValidityError` when n is not large enough compared with |a|.
    """
    prec = digits_to_bits(digits)
    a = MPComplex.of(a, prec)
    if L.mpf_sign(a.re) < 0:
        raise DomainError("Re(v) must be >= 1/2 (Re(a) >= 0)")
    if n < 0:
        raise DomainError("n must be non-negative")
    if not saddle_valid(n, a):
        raise ValidityError(
            f"saddle method needs n+1 >= {VALIDITY_FACTOR} max(1, |a|); "
            f"got n = {n}, |a| ~ {10 ** a.log10_abs():.3g}"
        )
    u = compute_u(n, prec)
    w0 = lambert_w0(u, digits).w
    omega = (a - u / w0).mul_i()

    # one Newton step on (n+1) + 2 pi i z log z = 0, z = a + i omega
    two_pi = pi(prec).scale2(1)
    z = a + omega.mul_i()
    lz = clog(z)
    f = (z * lz).mul_i() * two_pi + (n + 1)
    fp = -(lz + 1) * two_pi
    omega = omega - f / fp

    z = _inner(omega, a)
    lz = clog(z)
    llz = clog(lz)
    g_omega = llz * (n + 1) - omega * two_pi
    gpp = (1 + 1 / lz) * (n + 1) / (z * z * lz)
    x0 = contour_origin(a)
    span = omega - x0
    theta = (span * span * gpp).arg().re_mpf
    one = MPComplex.real(1, prec)
    sd = SaddleData(n, a, u, w0, omega, llz, g_omega, gpp, theta, one, mode, x0)
    eps = contour_direction(sd, mode)
    return SaddleData(n, a, u, w0, omega, llz, g_omega, gpp, theta, eps, mode, x0)


def g_second(sd: SaddleData) -> MPComplex:
    return sd.gpp


def cutoff_q(sd: SaddleData, N: int, safety: float = Q_SAFETY) -> mpmath.mpf:
    """q = safety * sqrt(N ln 10 / |g''(omega) (omega - x0)^2|); x0 is usually 0."""
    if N < 1:
        raise ValueError("N must be >= 1")
    p = sd.prec
    span = sd.omega - sd.x0
    curv = (sd.gpp * span * span).abs()
    q = csqrt(ln10(p) * N / curv) * MPComplex.real(safety, p)
    return q.re_mpf
