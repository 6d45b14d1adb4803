"""Double-exponential trapezoidal quadrature of I_n(a) = int_0^inf f(x) dx.

f(x) = log^{n+1}(a+ix) / cosh^2(pi x) = exp(g(x)) h(x), h = (1 + tanh pi x)^2.

Two routes live here:

* the saddle route integrates along x(y) = omega exp(1 + eps y - exp(-eps y)),
  which puts the saddle at y = 0; values are normalized by exp(g(omega)) so
  every node is O(1) no matter how large n is;
* the real-axis route (small n) uses x(t) = s exp(t - exp(-t)) on the real
  line, where f is peaked near the origin.

Both refine by halving the step with fixed cutoffs and reuse every node
from the coarser levels. All sums are pairwise in grid order, so results are
bit-for-bit reproducible.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import mpmath
from mpmath import libmp as L

from .errors import ConvergenceError
from .mpkernel import (
    LOG2_10,
    MPComplex,
    RND,
    bits_to_digits,
    cexp,
    clog,
    ctanh,
    pi,
    reduce_phase,
    tree_sum,
)
from .saddle import SaddleData, _inner, contour_origin, cutoff_q

MAX_HALVINGS = 8
MAX_HALVINGS_REAL_AXIS = 10
MAX_WIDENINGS = 40


def m_schedule(N: int) -> int:
    """Starting node count for N target digits (201 at 100, 3201 at 1000)."""
    if N <= 100:
        return 201
    if N < 1000:
        m = 201 * math.ceil(N / 100)
    else:
        m = 3201 * math.ceil(N / 1000)
    return m if m % 2 else m + 1


@dataclass(frozen=True)
class QuadPlan:
    N: int
    q: mpmath.mpf
    M: int
    h: mpmath.mpf
    eps: MPComplex
    prec: int

    @property
    def half(self) -> int:
        return (self.M - 1) // 2

    def node(self, k: int):
        """Raw mpf for y_k = -q + k h (exact)."""
        return L.mpf_mul(self.h._mpf_, L.from_int(k - self.half))

    def halved(self) -> "QuadPlan":
        h2 = mpmath.mp.make_mpf(L.mpf_shift(self.h._mpf_, -1))
        return QuadPlan(self.N, self.q, 2 * self.M - 1, h2, self.eps, self.prec)


def make_plan(sd: SaddleData, N: int, M: int | None = None, q=None, safety: float = 1.5) -> QuadPlan:
    """Grid for N target digits; M is forced odd so a node sits on the saddle.

    h is rounded to 53 bits and q recomputed as h (M-1)/2, so that relation
    and the grid symmetry hold exactly.
    """
    if M is None:
        M = m_schedule(N)
    if M < 3:
        raise ValueError("M must be >= 3")
    if M % 2 == 0:
        M += 1
    if q is None:
        q = cutoff_q(sd, N, safety)
    half = (M - 1) // 2
    q_raw = mpmath.mpf(q)._mpf_ if not isinstance(q, mpmath.mpf) else q._mpf_
    h_raw = L.mpf_div(q_raw, L.from_int(half), 53, RND)
    q_exact = L.mpf_mul(h_raw, L.from_int(half))
    return QuadPlan(
        N, mpmath.mp.make_mpf(q_exact), M, mpmath.mp.make_mpf(h_raw), sd.eps, sd.prec
    )


@dataclass(frozen=True)
class QuadResult:
    log_I: MPComplex
    trace: tuple = field(default_factory=tuple)  # ((h, log_I), ...) from coarse to fine
    est_error: mpmath.mpf | None = None
    plan: QuadPlan | None = None
    loss_digits: float = 0.0


# ---------------------------------------------------------------------------
# contour geometry
# ---------------------------------------------------------------------------


def _y(y, prec: int) -> MPComplex:
    return y if isinstance(y, MPComplex) else MPComplex.real(y, prec)


def _exponent(y: MPComplex, eps: MPComplex) -> tuple[MPComplex, MPComplex]:
    """(e^{-eps y}, exp(1 + eps y - e^{-eps y}))."""
    ey = eps * y
    emy = cexp(-ey)
    return emy, cexp(ey - emy + 1)


def contour_x(y, sd: SaddleData) -> MPComplex:
    """x(y) = x0 + (omega - x0) exp(1 + eps y - e^{-eps y}); x(0) = omega.

    x0 is the contour origin, 0 except when Re(a) < 1/2.
    """
    y = _y(y, sd.prec)
    if y.is_zero:
        return sd.omega
    return sd.x0 + (sd.omega - sd.x0) * _exponent(y, sd.eps)[1]


def contour_dx(y, sd: SaddleData) -> MPComplex:
    """dx/dy = (omega - x0) eps (1 + e^{-eps y}) exp(1 + eps y - e^{-eps y})."""
    y = _y(y, sd.prec)
    emy, ex = _exponent(y, sd.eps)
    return (sd.omega - sd.x0) * sd.eps * (emy + 1) * ex


def tanh_weight(x: MPComplex) -> MPComplex:
    """h(x) = (1 + tanh(pi x))^2, bounded by 4 for Re x >= 0.

    When exp(-2 pi x) is below the working ulp, tanh(pi x) rounds to 1 and
    h is exactly 4; that shortcut skips a costly tanh at |x| ~ n.
    """
    p = x.prec
    if L.mpf_sign(x.re) > 0:
        lg = L.mpf_mul(x.re, L.mpf_shift(L.mpf_pi(30, RND), 1), 30, RND)
        if L.to_float(lg) > (p + 8) * math.log(2):
            return MPComplex.real(4, p)
    t = ctanh(x * pi(p)) + 1
    return t * t


def _node_value(y: MPComplex, sd: SaddleData, two_pi: MPComplex) -> MPComplex:
    emy, ex = _exponent(y, sd.eps)
    span = sd.omega - sd.x0
    x = sd.x0 + span * ex
    dx = span * sd.eps * (emy + 1) * ex
    z = _inner(x, sd.a)
    llz = clog(clog(z))
    diff = (llz - sd.log_l_omega) * (sd.n + 1) - (x - sd.omega) * two_pi
    return cexp(diff) * tanh_weight(x) * dx


def _node_value_unit(y_raw, sd: SaddleData, two_pi: MPComplex) -> MPComplex:
    # eps = 1 fast path: real exponentials only for the contour map
    p = sd.prec
    emy = L.mpf_exp(L.mpf_neg(y_raw), p, RND)
    ex = L.mpf_exp(L.mpf_add(L.mpf_sub(y_raw, emy, p, RND), L.fone, p, RND), p, RND)
    span = sd.omega - sd.x0
    x = MPComplex(*L.mpc_mul_mpf(span.pair, ex, p, RND), p)
    if not sd.x0.is_zero:
        x = x + sd.x0
    jac = L.mpf_mul(L.mpf_add(emy, L.fone, p, RND), ex, p, RND)
    dx = MPComplex(*L.mpc_mul_mpf(span.pair, jac, p, RND), p)
    z = _inner(x, sd.a)
    llz = clog(clog(z))
    diff = (llz - sd.log_l_omega) * (sd.n + 1) - (x - sd.omega) * two_pi
    return cexp(diff) * tanh_weight(x) * dx


def integrand_normalized(y, sd: SaddleData) -> MPComplex:
    """exp(g(x(y)) - g(omega)) h(x(y)) dx/dy, O(1) near the saddle."""
    y = _y(y, sd.prec)
    return _node_value(y, sd, pi(sd.prec).scale2(1))


def _evaluator(sd: SaddleData):
    two_pi = pi(sd.prec).scale2(1)
    unit = sd.eps.is_real and sd.eps.re == L.fone
    if unit:
        return lambda y_raw: _node_value_unit(y_raw, sd, two_pi)
    return lambda y_raw: _node_value(MPComplex(y_raw, L.fzero, sd.prec), sd, two_pi)


def _trapezoid(values: list[MPComplex], h_raw) -> MPComplex:
    """h * (sum of interior nodes + half the two endpoints)."""
    ends = (values[0] + values[-1]).scale2(-1)
    s = tree_sum(values[1:-1]) + ends if len(values) > 2 else ends
    return s * MPComplex(h_raw, L.fzero, s.prec)


def _rel_diff(a: MPComplex, b: MPComplex) -> float:
    """log10(|a - b| / |b|)."""
    d = a - b
    if d.is_zero:
        return -math.inf
    return d.log10_abs() - b.log10_abs()


def _mpf_from_log10(x: float) -> mpmath.mpf:
    if x == -math.inf:
        return mpmath.mpf(0)
    # exact enough for a diagnostic; avoids float underflow below 1e-308
    k = math.floor(x)
    return mpmath.mp.make_mpf(
        L.mpf_mul(L.from_float(10 ** (x - k)), L.mpf_pow_int(L.from_int(10), k, 64, RND), 64, RND)
    )


def _loss_digits(values: list[MPComplex], h_raw, total: MPComplex) -> float:
    """Digits cancelled in h * sum(values): largest |h v_k| against |total|."""
    if total.is_zero:
        return math.inf
    biggest = max(v.log10_abs() for v in values if not v.is_zero) + _log2_raw(h_raw) / LOG2_10
    return max(0.0, biggest - total.log10_abs())


def _log_from_sum(sd: SaddleData, s: MPComplex) -> MPComplex:
    return reduce_phase(sd.g_omega + clog(s))


def integrate(sd: SaddleData, plan: QuadPlan) -> QuadResult:
    """Single trapezoidal pass on the plan's grid."""
    f = _evaluator(sd)
    values = [f(plan.node(k)) for k in range(plan.M)]
    s = _trapezoid(values, plan.h._mpf_)
    log_i = _log_from_sum(sd, s)
    return QuadResult(log_i, ((plan.h, log_i),), None, plan)


def _refine(f, plan: QuadPlan, values: list[MPComplex]) -> tuple[QuadPlan, list[MPComplex]]:
    fine = plan.halved()
    new = [f(fine.node(2 * j + 1)) for j in range(plan.M - 1)]
    merged = [None] * fine.M
    merged[0::2] = values
    merged[1::2] = new
    return fine, merged


def _tails_small(values: list[MPComplex], N: int) -> bool:
    s = tree_sum(values)
    if s.is_zero:
        return False
    ref = s.log10_abs() - N - 2
    return all(v.is_zero or v.log10_abs() < ref for v in (values[0], values[-1]))


def _widen(f, plan: QuadPlan, values: list[MPComplex], N: int) -> tuple[QuadPlan, list[MPComplex]]:
    """Grow q at fixed h until both end nodes are negligible.

    The Gaussian cutoff is too short when n is small next to |a|: the
    x -> 0 tail then stays visible and the trapezoid sum drops to O(h^2).
    """
    for _ in range(MAX_WIDENINGS):
        if _tails_small(values, N):
            return plan, values
        half = plan.half
        extra = max(1, half // 4)
        wide = QuadPlan(plan.N, plan.q, plan.M + 2 * extra, plan.h, plan.eps, plan.prec)
        q_raw = L.mpf_mul(plan.h._mpf_, L.from_int(wide.half))
        wide = QuadPlan(plan.N, mpmath.mp.make_mpf(q_raw), wide.M, plan.h, plan.eps, plan.prec)
        left = [f(wide.node(k)) for k in range(extra)]
        right = [f(wide.node(wide.M - extra + k)) for k in range(extra)]
        plan, values = wide, left + values + right
    raise ConvergenceError(
        f"integrand tails still above 1e-{N} after widening to q = {mpmath.nstr(plan.q, 6)}"
    )


def integrate_adaptive(
    sd: SaddleData,
    N: int,
    M0: int | None = None,
    q=None,
    max_halvings: int = MAX_HALVINGS,
) -> QuadResult:
    """Halve h (fixed q) until consecutive sums agree to 10^-N relative."""
    plan = make_plan(sd, N, M=M0, q=q)
    f = _evaluator(sd)
    values = [f(plan.node(k)) for k in range(plan.M)]
    plan, values = _widen(f, plan, values, N)
    s = _trapezoid(values, plan.h._mpf_)
    trace = [(plan.h, _log_from_sum(sd, s))]
    est = None
    for _ in range(max_halvings):
        plan, values = _refine(f, plan, values)
        s_new = _trapezoid(values, plan.h._mpf_)
        rel = _rel_diff(s, s_new)
        s = s_new
        trace.append((plan.h, _log_from_sum(sd, s)))
        est = _mpf_from_log10(rel)
        if rel < -N:
            return QuadResult(trace[-1][1], tuple(trace), est, plan, _loss_digits(values, plan.h._mpf_, s))
    raise ConvergenceError(
        f"no convergence to 1e-{N} after {max_halvings} halvings "
        f"(n = {sd.n}, a = {sd.a!r}, M = {plan.M}, q = {mpmath.nstr(plan.q, 6)}, "
        f"last relative change {est}); raise the working precision"
    )


def convergence_levels(
    sd: SaddleData, q, M0: int = 101, levels: int = 5
) -> tuple[list[tuple[int, mpmath.mpf, MPComplex]], MPComplex]:
    """Sums on nested grids h0 2^-m (m < levels) plus the next finer reference.

    The reference grid is evaluated once; coarser sums reuse its nodes.
    """
    plan0 = make_plan(sd, 1, M=M0, q=q)
    fine_M = (M0 - 1) * 2**levels + 1
    fine = make_plan(sd, 1, M=fine_M, q=plan0.q)
    f = _evaluator(sd)
    values = [f(fine.node(k)) for k in range(fine.M)]
    ref = _trapezoid(values, fine.h._mpf_)
    rows = []
    for m in range(levels):
        stride = 2 ** (levels - m)
        sub = values[::stride]
        h = mpmath.mp.make_mpf(L.mpf_shift(plan0.h._mpf_, -m))
        rows.append((m, h, _trapezoid(sub, h._mpf_)))
    return rows, ref


# ---------------------------------------------------------------------------
# real-axis route (small n)
# ---------------------------------------------------------------------------


def _log2_raw(x) -> float:
    return math.log2(int(x[1])) + x[2]


def _float_log_weight(x: complex) -> float:
    """log |1 / cosh^2(pi x)| in floats, for Re x >= 0."""
    e = cmath.exp(-2 * math.pi * x) if x.real < 300 else 0j
    return math.log(4) - 2 * math.pi * x.real - 2 * math.log(abs(1 + e))


def _float_log_term(t: float, s: float, n: int, a: complex, x0: complex = 0j) -> float:
    """log|f(x(t)) x'(t)| in floats for x = x0 + s exp(t - e^{-t})."""
    emt = math.exp(-t) if t > -700 else math.inf
    if emt == math.inf or t - emt < -700:
        return -math.inf
    logr = math.log(s) + t - emt
    if logr > 700:
        return -math.inf
    x = x0 + math.exp(logr)
    z = a + 1j * x
    if z == 0:
        return -math.inf
    lz = cmath.log(z)
    if lz == 0:
        return -math.inf
    return (n + 1) * math.log(abs(lz)) + _float_log_weight(x) + logr + math.log1p(emt)


def _real_axis_scale(n: int, a: complex, x0: complex = 0j) -> float:
    best, arg = -math.inf, 1.0
    for k in range(-60, 121):
        x = x0 + 10 ** (k / 20)
        lz = cmath.log(a + 1j * x)
        if lz == 0:
            continue
        val = (n + 1) * math.log(abs(lz)) - 2 * math.pi * x.real
        if val > best:
            best, arg = val, 10 ** (k / 20)
    return max(1.0, arg)


def _real_axis_range(
    n: int, a: complex, s: float, digits: float, h0: float, x0: complex = 0j
) -> tuple[int, int, float]:
    """Index range [kmin, kmax] of nodes t_k = k h0 with non-negligible terms."""
    step = h0
    ts = [k * step for k in range(int(-12 / step), int(12 / step) + 1)]
    logs = [_float_log_term(t, s, n, a, x0) for t in ts]
    peak = max(logs)
    cut = peak - (digits + 5) * math.log(10)
    keep = [i for i, v in enumerate(logs) if v > cut]
    lo, hi = ts[keep[0]] - 2 * step, ts[keep[-1]] + 2 * step
    return int(math.floor(lo / step)), int(math.ceil(hi / step)), peak


def integrate_real_axis(n: int, a, N: int, prec: int, h0: float = 0.125) -> QuadResult:
    """I_n(a) on a horizontal line with the DE map x = x0 + s exp(t - e^{-t}).

    x0 is the contour origin from :func:`contour_origin` (0 unless Re a < 1/2,
    where the line is Im x = -1/4).

    The integrand oscillates for larger n, so the sum cancels; the number
    of digits lost is returned in ``loss_digits`` and it is the caller's job
    to rerun at higher precision when that exceeds its guard.
    """
    a_mp = MPComplex.of(a, prec)
    a_c = complex(a_mp)
    x0 = contour_origin(a_mp)
    x0_c = complex(x0)
    s = _real_axis_scale(n, a_c, x0_c)
    kmin, kmax, _ = _real_axis_range(n, a_c, s, bits_to_digits(prec), h0, x0_c)

    p = prec
    s_raw = L.from_float(s, p, RND)
    two_pi = pi(p).scale2(1)
    h0_raw = L.from_float(h0)

    def term(t_raw) -> MPComplex:
        emt = L.mpf_exp(L.mpf_neg(t_raw), p, RND)
        ex = L.mpf_exp(L.mpf_sub(t_raw, emt, p, RND), p, RND)
        x_raw = L.mpf_mul(s_raw, ex, p, RND)
        jac = L.mpf_mul(x_raw, L.mpf_add(emt, L.fone, p, RND), p, RND)
        x = MPComplex(x_raw, L.fzero, p) + x0
        z = a_mp + x.mul_i()
        lz = clog(z)
        if lz.is_zero:
            return MPComplex(L.fzero, L.fzero, p)
        g = clog(lz) * (n + 1) - x * two_pi
        return cexp(g) * tanh_weight(x) * MPComplex(jac, L.fzero, p)

    def node(k: int, level: int):
        return L.mpf_mul(L.mpf_shift(h0_raw, -level), L.from_int(k))

    values = [term(node(k, 0)) for k in range(kmin, kmax + 1)]
    h = h0_raw
    total = tree_sum(values) * MPComplex(h, L.fzero, p)
    trace = [(mpmath.mp.make_mpf(h), total)]
    kmin_l, kmax_l = kmin, kmax
    for level in range(1, MAX_HALVINGS_REAL_AXIS + 1):
        kmin_l, kmax_l = 2 * kmin_l, 2 * kmax_l
        new = [term(node(k, level)) for k in range(kmin_l + 1, kmax_l, 2)]
        merged = [None] * (len(values) + len(new))
        merged[0::2] = values
        merged[1::2] = new
        values = merged
        h = L.mpf_shift(h, -1)
        new_total = tree_sum(values) * MPComplex(h, L.fzero, p)
        rel = _rel_diff(total, new_total)
        total = new_total
        trace.append((mpmath.mp.make_mpf(h), total))
        if rel < -N:
            break
    else:
        raise ConvergenceError(
            f"real-axis quadrature did not reach 1e-{N} after {MAX_HALVINGS_REAL_AXIS} halvings "
            f"(n = {n}, a = {a_mp!r})"
        )
    loss = _loss_digits(values, h, total)
    log_i = reduce_phase(clog(total))
    log_trace = tuple((hh, reduce_phase(clog(v))) for hh, v in trace)
    return QuadResult(log_i, log_trace, _mpf_from_log10(rel), None, loss)
