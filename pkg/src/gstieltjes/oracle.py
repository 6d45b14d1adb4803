"""Independent small-n ground truth for gamma_n(v).

Hurwitz zeta comes from a direct sum plus an Euler-Maclaurin tail, and the
constants are Laurent coefficients of zeta(s, v) - 1/(s-1) about s = 1,
read off a trapezoidal Cauchy integral on |s - 1| = r.

Everything here runs on mpmath's high-level API under a local working
precision; none of it shares code with the quadrature routes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath

from .errors import ConvergenceError, DomainError
from .mpkernel import MPComplex, digits_to_bits

N_MAX_ORACLE = 30
DEFAULT_RADIUS = mpmath.mpf(1) / 4
DEFAULT_NODES = 64
MAX_NODES = 4096


@dataclass(frozen=True)
class HurwitzParams:
    s: mpmath.mpc
    v: mpmath.mpc
    terms: int
    bernoulli_order: int

    @classmethod
    def choose(cls, s, v, digits: int) -> "HurwitzParams":
        terms = math.ceil(2.5 * digits) + math.ceil(abs(float(mpmath.im(s))))
        return cls(s, v, terms, 2 * math.ceil(digits / 4))


def _to_mp(x) -> mpmath.mpc:
    if isinstance(x, MPComplex):
        return x.to_mpmath()
    if isinstance(x, str):
        return MPComplex.of(x, mpmath.mp.prec).to_mpmath()
    return mpmath.mpc(x)


def _em_sum(p: HurwitzParams) -> tuple[mpmath.mpc, mpmath.mpf]:
    """(zeta(s, v) without the pole term's partner, size of first omitted term)."""
    s, v, N = p.s, p.v, p.terms
    logs = _log_table(v, N, mpmath.mp.prec)
    head = mpmath.fsum(mpmath.exp(-s * lk) for lk in logs)
    x = N + v
    xs = x ** (-s)
    tail = x * xs / (s - 1) + xs / 2
    # B_2j / (2j)! * s (s+1) ... (s+2j-2) * x^(-s-2j+1)
    rising = s
    power = xs / x
    x2 = x * x
    last = mpmath.mpf(0)
    for j in range(1, p.bernoulli_order + 2):
        term = mpmath.bernoulli(2 * j) / mpmath.factorial(2 * j) * rising * power
        if j > p.bernoulli_order:
            last = abs(term)
            break
        tail += term
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        power /= x2
    return head + tail, last


@lru_cache(maxsize=16)
def _log_table(v, N: int, prec: int) -> tuple:
    """log(k + v) for k < N; shared by every contour node."""
    with mpmath.workprec(prec):
        return tuple(mpmath.log(k + v) for k in range(N))


def hurwitz_zeta(s, v, digits: int) -> MPComplex:
    """zeta(s, v) to ``digits`` digits; raises DomainError at s = 1 or Re v <= 0."""
    with mpmath.workdps(digits + 15):
        s_, v_ = _to_mp(s), _to_mp(v)
        if s_ == 1:
            raise DomainError("hurwitz_zeta has a pole at s = 1")
        if mpmath.re(v_) <= 0:
            raise DomainError("hurwitz_zeta needs Re(v) > 0")
        value = _hurwitz_mp(s_, v_, digits)
        return MPComplex.of(value, digits_to_bits(digits + 5))


def _hurwitz_mp(s, v, digits: int) -> mpmath.mpc:
    p = HurwitzParams.choose(s, v, digits)
    for _ in range(8):
        value, last = _em_sum(p)
        size = abs(value) if value != 0 else mpmath.mpf(1)
        if last <= size * mpmath.mpf(10) ** (-digits - 2):
            return value
        p = HurwitzParams(s, v, 2 * p.terms, p.bernoulli_order)
    raise ConvergenceError(f"Euler-Maclaurin remainder too large for s = {s}, v = {v}")


def _node_values(v, r, K: int, dps: int, known: list | None = None) -> list:
    """(t_j, F(1 + r t_j)) on K equispaced nodes; reuses a K/2 grid if given."""
    with mpmath.workdps(dps):
        values = []
        for j in range(K):
            if known is not None and j % 2 == 0:
                values.append(known[j // 2])
                continue
            t = mpmath.expjpi(mpmath.mpf(2 * j) / K)
            f = _hurwitz_mp(1 + r * t, v, dps - 10) - 1 / (r * t)
            values.append((t, f))
        return values


def _laurent_coeffs(nmax: int, values: list, dps: int) -> list:
    """Trapezoid estimates of c_k r^k, k <= nmax."""
    K = len(values)
    with mpmath.workdps(dps):
        return [mpmath.fsum(f * t ** (-k) for t, f in values) / K for k in range(nmax + 1)]


def gamma_oracle_series(
    nmax: int, v, digits: int, r=DEFAULT_RADIUS, K: int = DEFAULT_NODES
) -> list[MPComplex]:
    """gamma_0(v), ..., gamma_nmax(v) from one Cauchy contour.

    K doubles until the top coefficients stop moving; the working precision
    is padded for the k!/r^k amplification and raised again if the measured
    cancellation says so.
    """
    if nmax < 0:
        raise DomainError("n must be non-negative")
    if nmax > N_MAX_ORACLE:
        raise DomainError(f"the oracle is meant for n <= {N_MAX_ORACLE}")
    key = (nmax, str(v), digits, str(r), K)
    return list(_series_cached(*key))


@lru_cache(maxsize=64)
def _series_cached(nmax: int, v_text: str, digits: int, r_text: str, K: int) -> tuple:
    with mpmath.workdps(digits + 20):
        v = _to_mp(v_text)
        r = mpmath.mpf(r_text)
        if mpmath.re(v) < mpmath.mpf(1) / 2:
            raise DomainError("Re(v) must be >= 1/2")
        amp = float(mpmath.log10(mpmath.factorial(nmax)) - nmax * mpmath.log10(r))
    # room for |gamma_k| up to 10^-15 below max |F| before a retry is needed
    dps = digits + 20 + math.ceil(amp)
    for _ in range(4):
        gam = _contour(nmax, v, r, K, dps, digits)
        with mpmath.workdps(dps):
            loss = max(
                float(mpmath.log10(fmax * mpmath.factorial(k) / r**k) - mpmath.log10(abs(g)))
                for k, (g, fmax) in enumerate(gam)
                if g != 0
            )
        if dps - loss >= digits + 5:
            bits = digits_to_bits(digits + 5)
            return tuple(MPComplex.of(g, bits) for g, _ in gam)
        dps = math.ceil(loss) + digits + 20
    raise ConvergenceError("oracle could not absorb the cancellation on the contour")


def _contour(nmax, v, r, K, dps, digits):
    prev, values = None, None
    while K <= MAX_NODES:
        values = _node_values(v, r, K, dps, values)
        coeffs = _laurent_coeffs(nmax, values, dps)
        with mpmath.workdps(dps):
            fmax = max(abs(f) for _, f in values)
            gam = [
                (-1) ** k * mpmath.factorial(k) * c / r**k for k, c in enumerate(coeffs)
            ]
            if prev is not None:
                tol = mpmath.mpf(10) ** (-digits - 3)
                if all(abs(g - p) <= tol * abs(g) for g, p in zip(gam, prev)):
                    return [(g, fmax) for g in gam]
        prev = gam
        K *= 2
    raise ConvergenceError(f"Cauchy trapezoid not converged with {MAX_NODES} nodes")


def gamma_oracle(n: int, v, digits: int, r=DEFAULT_RADIUS) -> MPComplex:
    """gamma_n(v) from the Laurent coefficients of zeta(s, v) at s = 1."""
    return gamma_oracle_series(n, v, digits, r)[n]
