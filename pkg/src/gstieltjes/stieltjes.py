"""Public API: gamma_n(v) from the saddle route, the real-axis route, or the
closed-form saddle-point asymptotic.

With a = v - 1/2 and I_n(a) = int_0^inf log^{n+1}(a+ix) / cosh^2(pi x) dx,

    gamma_n(v) = -pi / (2(n+1)) * (I_n(a) + conj(I_n(conj a))),

which for real a is -pi/(n+1) * Re I_n(a). Everything is carried as
log(value) until the final decimal formatting.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import mpmath
from mpmath import libmp as L

from .dequad import (
    QuadPlan,
    _real_axis_range,
    _real_axis_scale,
    integrate_adaptive,
    integrate_real_axis,
    m_schedule,
)
from .errors import ConvergenceError, DomainError, PrecisionError, ValidityError
from .lambertw import lambert_w0
from .mpkernel import (
    BigSciComplex,
    MPComplex,
    bits_to_digits,
    cexp,
    clog,
    digits_to_bits,
    format_bigsci,
    log_add,
    pi,
    reduce_phase,
    working_prec,
)
from .saddle import compute_u, contour_origin, saddle_point, saddle_valid

METHODS = ("auto", "saddle", "direct", "asymptotic")
DIGIT_PAD = 5
DEFAULT_GUARD = 10
_MAX_RETRIES = 3


@dataclass(frozen=True)
class GammaRequest:
    n: int
    v: object = 1
    digits: int = 50
    method: str = "auto"
    contour_mode: str = "unit"
    M: int | None = None
    guard: int = DEFAULT_GUARD

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 0:
            raise DomainError(f"n must be a non-negative integer, got {self.n!r}")
        if self.digits < 1:
            raise DomainError("digits must be >= 1")
        if self.method not in METHODS:
            raise DomainError(f"method must be one of {METHODS}")
        v = MPComplex.of(self.v, 128)
        if L.mpf_lt(v.re, L.from_rational(1, 2, 10, "n")):
            raise DomainError("Re(v) must be >= 1/2")


@dataclass(frozen=True)
class GammaResult:
    value: BigSciComplex
    method_used: str
    plan: QuadPlan | None
    est_error: mpmath.mpf | None
    elapsed: float
    log_value: MPComplex
    imag_residue: mpmath.mpf | None = None
    request: GammaRequest | None = None
    traces: tuple = field(default_factory=tuple)


def assemble_gamma(n: int, log_i: MPComplex, log_i_conj: MPComplex | None = None) -> MPComplex:
    """log gamma_n(v) from log I_n(a) and, for complex a, log I_n(conj a).

    For real a pass only ``log_i``; I_n(conj a) = I_n(a) then.
    """
    if log_i_conj is None:
        log_i_conj = log_i
    p = max(log_i.prec, log_i_conj.prec)
    total = log_add(log_i, log_i_conj.conj())
    # -pi / (2(n+1)): magnitude pi/(2(n+1)), phase pi
    factor = clog(pi(p) / (2 * (n + 1)))
    return reduce_phase(total + factor + pi(p).mul_i())


def _cancellation(log_i: MPComplex, log_i_conj: MPComplex, log_gamma: MPComplex, n: int) -> float:
    """Digits lost combining the two terms."""
    p = log_gamma.prec
    back = log_gamma - clog(pi(p) / (2 * (n + 1)))
    biggest = max(L.to_float(log_i.re), L.to_float(log_i_conj.re))
    return max(0.0, (biggest - L.to_float(back.re)) / math.log(10))


def _imag_residue(log_gamma: MPComplex) -> mpmath.mpf:
    """|Im gamma| / |gamma| for a value that should be real."""
    s = L.mpf_sin(log_gamma.im, log_gamma.prec, "n")
    return mpmath.mp.make_mpf(L.mpf_pos(L.mpf_abs(s), 64, "n"))


def _route(n: int, a: MPComplex, method: str) -> str:
    if method != "auto":
        return method
    return "saddle" if saddle_valid(n, a) else "direct"


# ---------------------------------------------------------------------------
# the three routes, each returning log I at a and conj(a)
# ---------------------------------------------------------------------------


def _a_and_conj(a: MPComplex) -> list[MPComplex]:
    return [a] if a.is_real else [a, a.conj()]


def asymptotic_I(n: int, a, digits: int) -> MPComplex:
    """Saddle-point approximation of log I_n(a).

    log I = (n+1) log W0(u) - 2 pi omega + 1/2 log(8(n+1) / (pi (1 + W0(u)))),
    with omega = i (a - u / W0(u)).
    """
    prec = digits_to_bits(digits)
    a = MPComplex.of(a, prec)
    if L.mpf_sign(a.re) < 0:
        raise DomainError("Re(v) must be >= 1/2")
    if not saddle_valid(n, a):
        raise ValidityError(f"asymptotic formula needs n+1 >= 20 max(1, |a|); got n = {n}")
    u = compute_u(n, prec)
    w = lambert_w0(u, digits).w
    omega = (a - u / w).mul_i()
    p = pi(prec)
    amp = clog(MPComplex.real(8 * (n + 1), prec) / (p * (w + 1))).scale2(-1)
    return reduce_phase(clog(w) * (n + 1) - omega * p.scale2(1) + amp)


def _logs(n, a, method, N, prec, mode, M0):
    if method == "asymptotic":
        return [asymptotic_I(n, x, bits_to_digits(prec)) for x in _a_and_conj(a)], []
    if method == "saddle":
        digits = bits_to_digits(prec)
        quads = [
            integrate_adaptive(saddle_point(n, x, digits, mode), N, M0=M0)
            for x in _a_and_conj(a)
        ]
    elif method == "direct":
        quads = [integrate_real_axis(n, x, N, prec) for x in _a_and_conj(a)]
    else:
        raise DomainError(f"unknown method {method!r}")
    return [q.log_I for q in quads], quads


def _compute_log(n, make_a, digits, method, guard=DEFAULT_GUARD, mode="unit", M=None):
    """(log gamma, quadrature results) at enough precision to absorb cancellation.

    ``make_a(prec)`` builds a = v - 1/2 at a given precision, so inputs that
    are not binary fractions are re-rounded on every retry.
    """
    N = digits + DIGIT_PAD
    M0 = M if M is not None else m_schedule(digits)
    extra = _direct_loss_hint(n, make_a(64)) if method == "direct" else 0
    for attempt in range(_MAX_RETRIES + 1):
        prec = working_prec(N + extra, n, guard)
        a = make_a(prec)
        if L.mpf_sign(a.re) < 0:
            raise DomainError("Re(v) must be >= 1/2")
        try:
            logs, quads = _logs(n, a, method, N + extra, prec, mode, M0)
        except ConvergenceError:
            # a cancellation noise floor above 10^-N looks like non-convergence
            if attempt == _MAX_RETRIES:
                raise
            extra = max(2 * extra, 20)
            continue
        log_gamma = assemble_gamma(n, logs[0], logs[1] if len(logs) > 1 else None)
        loss = _cancellation(logs[0], logs[-1], log_gamma, n)
        loss += max((q.loss_digits for q in quads), default=0.0)
        if loss + 2 <= guard + extra or attempt == _MAX_RETRIES:
            return log_gamma, quads
        extra = math.ceil(loss) + 5
    raise AssertionError("unreachable")


def _direct_loss_hint(n: int, a: MPComplex) -> int:
    """Rough digits of cancellation on the real axis, from float magnitudes.

    Compares the largest node of the real-axis sum with the saddle-point
    size of the integral; only meaningful where the saddle estimate is.
    """
    if not saddle_valid(n, a):
        return 0
    a_c = complex(a)
    x0 = complex(contour_origin(a))
    s = _real_axis_scale(n, a_c, x0)
    _, _, peak = _real_axis_range(n, a_c, s, 20, 0.125, x0)
    est = max(L.to_float(asymptotic_I(n, x, 30).re) for x in _a_and_conj(a))
    return max(0, math.ceil((peak - est) / math.log(10)))


def _fixed_a(a):
    return lambda prec: MPComplex.of(a, prec)


def _a_from_v(v):
    return lambda prec: MPComplex.of(v, prec) - MPComplex.of("0.5", prec)


def gamma_direct(n: int, a, digits: int, guard: int = DEFAULT_GUARD) -> MPComplex:
    """log gamma_n(v), v = a + 1/2, by real-axis DE quadrature (small n)."""
    return _compute_log(n, _fixed_a(a), digits, "direct", guard)[0]


def gamma_saddle(n: int, a, digits: int, mode: str = "unit", guard: int = DEFAULT_GUARD) -> MPComplex:
    """log gamma_n(v) by quadrature through the saddle (large n)."""
    return _compute_log(n, _fixed_a(a), digits, "saddle", guard, mode)[0]


def gamma_asymptotic(n: int, a, digits: int, guard: int = DEFAULT_GUARD) -> MPComplex:
    """log gamma_n(v) from the closed-form saddle-point approximation."""
    return _compute_log(n, _fixed_a(a), digits, "asymptotic", guard)[0]


def gamma(req: GammaRequest) -> GammaResult:
    """Compute gamma_n(v) to ``req.digits`` significant digits."""
    t0 = time.perf_counter()
    n = req.n
    make_a = _a_from_v(req.v)
    method = _route(n, make_a(128), req.method)
    guard = req.guard
    for attempt in range(_MAX_RETRIES):
        log_gamma, quads = _compute_log(n, make_a, req.digits, method, guard, req.contour_mode, req.M)
        real = make_a(64).is_real
        try:
            value = format_bigsci(log_gamma, req.digits, real=real)
        except PrecisionError:
            if attempt == _MAX_RETRIES - 1:
                raise
            guard *= 2
            continue
        return GammaResult(
            value=value,
            method_used=method,
            plan=quads[0].plan if quads else None,
            est_error=max(q.est_error for q in quads) if quads else None,
            elapsed=time.perf_counter() - t0,
            log_value=log_gamma,
            imag_residue=_imag_residue(log_gamma) if real else None,
            request=req,
            traces=tuple(q.trace for q in quads),
        )
    raise AssertionError("unreachable")


def relative_difference(x: MPComplex, y: MPComplex) -> float:
    """log10 |exp(x)/exp(y) - 1| for two log-space values."""
    p = min(x.prec, y.prec)
    d = reduce_phase(x.with_prec(p) - y.with_prec(p))
    r = cexp(d) - 1
    return r.log10_abs()
