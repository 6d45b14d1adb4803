"""Arbitrary-precision complex scalars and big-exponent decimal output.

Every value is immutable and carries its own working precision in bits.
Arithmetic goes through mpmath's low-level ``libmp`` routines with an
explicit precision and round-to-nearest-even, so nothing in this module
reads or mutates mpmath's global context.

Results such as gamma_{10^100} ~ 10^(2.3e98) cannot live in any
fixed-exponent format, so the pipeline carries ``log(value)`` as an
:class:`MPComplex` and only converts to decimal at the very end through
:func:`format_bigsci`.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
from mpmath import libmp as L

from .errors import DomainError, PrecisionError

RND = L.round_nearest
MIN_PREC = 64
LOG2_10 = math.log2(10)

_ZERO = L.fzero
_ONE = L.fone


def digits_to_bits(digits: float) -> int:
    return max(MIN_PREC, math.ceil(digits * LOG2_10))


def bits_to_digits(bits: int) -> int:
    return int(bits / LOG2_10)


def ceil_log10(m: int) -> int:
    """Exact ceil(log10(m)) for a positive integer ``m``."""
    if m < 1:
        raise ValueError("m must be positive")
    return 0 if m == 1 else len(str(m - 1))


def working_prec(digits: int, n: int, guard: int = 10) -> int:
    """Bits needed to get ``digits`` digits out of an order-``n`` computation.

    The (n+1) log log(.) factor amplifies relative error by roughly the
    number of digits of n, hence the ceil(log10(n+1)) term.
    """
    return digits_to_bits(digits + guard + ceil_log10(n + 1))


_NUM = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(
    rf"^\s*\(?\s*(?P<re>{_NUM})?\s*(?:(?P<imsign>[+-])?\s*(?P<im>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*(?P<unit>[ij]))?\s*\)?\s*$"
)


def _parse_complex_text(text: str) -> tuple[str, str]:
    m = _COMPLEX_RE.match(text)
    if not m or (m.group("re") is None and m.group("unit") is None):
        raise ValueError(f"cannot parse complex number {text!r}")
    re_part = m.group("re") or "0"
    if m.group("unit") is None:
        return re_part, "0"
    im = m.group("im") or "1"
    sign = m.group("imsign")
    if m.group("re") is not None and sign is None and m.group("im") is None:
        # "3i" was captured as re="3", unit="i"
        return "0", re_part
    if m.group("re") is not None and sign is None:
        raise ValueError(f"cannot parse complex number {text!r}")
    return re_part, ("-" if sign == "-" else "") + im


def _real_from(value, prec: int):
    if isinstance(value, bool):
        raise TypeError("bool is not a numeric value here")
    if isinstance(value, int):
        return L.from_int(value, prec, RND)
    if isinstance(value, Fraction):
        return L.from_rational(value.numerator, value.denominator, prec, RND)
    if isinstance(value, float):
        return L.from_float(value, prec, RND)
    if isinstance(value, str):
        return L.from_str(value.strip(), prec, RND)
    if isinstance(value, mpmath.mpf):
        return L.mpf_pos(value._mpf_, prec, RND)
    if isinstance(value, tuple) and len(value) == 4:
        return L.mpf_pos(value, prec, RND)
    raise TypeError(f"unsupported real value {value!r}")


@dataclass(frozen=True, slots=True)
class MPComplex:
    """Complex number with raw ``libmp`` parts sharing one precision."""

    re: tuple
    im: tuple
    prec: int

    def __post_init__(self):
        if self.prec < MIN_PREC:
            raise ValueError(f"precision must be >= {MIN_PREC} bits, got {self.prec}")

    @classmethod
    def of(cls, value, prec: int) -> "MPComplex":
        """Round ``value`` (int, float, str, complex, mpmath, ...) to ``prec`` bits."""
        if isinstance(value, MPComplex):
            return cls(L.mpf_pos(value.re, prec, RND), L.mpf_pos(value.im, prec, RND), prec)
        if isinstance(value, mpmath.mpc):
            re_, im_ = value._mpc_
            return cls(L.mpf_pos(re_, prec, RND), L.mpf_pos(im_, prec, RND), prec)
        if isinstance(value, complex):
            return cls(_real_from(value.real, prec), _real_from(value.imag, prec), prec)
        if isinstance(value, str):
            re_s, im_s = _parse_complex_text(value)
            return cls(_real_from(re_s, prec), _real_from(im_s, prec), prec)
        return cls(_real_from(value, prec), _ZERO, prec)

    @classmethod
    def real(cls, value, prec: int) -> "MPComplex":
        return cls(_real_from(value, prec), _ZERO, prec)

    # -- coercion -------------------------------------------------------
    def _other(self, other):
        if isinstance(other, MPComplex):
            return other
        if isinstance(other, (int, float, complex, Fraction, mpmath.mpf, mpmath.mpc)) and not isinstance(other, bool):
            return MPComplex.of(other, self.prec)
        return None

    @property
    def pair(self) -> tuple:
        return (self.re, self.im)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        p = max(self.prec, o.prec)
        return MPComplex(*L.mpc_add(self.pair, o.pair, p, RND), p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        p = max(self.prec, o.prec)
        return MPComplex(*L.mpc_sub(self.pair, o.pair, p, RND), p)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            # exact integer scaling, even for integers wider than prec
            return MPComplex(*L.mpc_mul_int(self.pair, other, self.prec, RND), self.prec)
        o = self._other(other)
        if o is None:
            return NotImplemented
        p = max(self.prec, o.prec)
        if o.im == _ZERO:
            return MPComplex(*L.mpc_mul_mpf(self.pair, o.re, p, RND), p)
        return MPComplex(*L.mpc_mul(self.pair, o.pair, p, RND), p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if o.is_zero:
            raise ZeroDivisionError("complex division by zero")
        p = max(self.prec, o.prec)
        if o.im == _ZERO:
            return MPComplex(*L.mpc_div_mpf(self.pair, o.re, p, RND), p)
        return MPComplex(*L.mpc_div(self.pair, o.pair, p, RND), p)

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return MPComplex(L.mpf_neg(self.re), L.mpf_neg(self.im), self.prec)

    def __pos__(self):
        return self

    def conj(self) -> "MPComplex":
        return MPComplex(self.re, L.mpf_neg(self.im), self.prec)

    def mul_i(self) -> "MPComplex":
        """Exact multiplication by the imaginary unit."""
        return MPComplex(L.mpf_neg(self.im), self.re, self.prec)

    def scale2(self, k: int) -> "MPComplex":
        """Exact multiplication by 2**k."""
        return MPComplex(L.mpf_shift(self.re, k), L.mpf_shift(self.im, k), self.prec)

    # -- parts and queries ---------------------------------------------
    @property
    def real_part(self) -> "MPComplex":
        return MPComplex(self.re, _ZERO, self.prec)

    @property
    def imag_part(self) -> "MPComplex":
        return MPComplex(self.im, _ZERO, self.prec)

    @property
    def is_zero(self) -> bool:
        return self.re == _ZERO and self.im == _ZERO

    @property
    def is_real(self) -> bool:
        return self.im == _ZERO

    def abs(self) -> "MPComplex":
        return MPComplex(L.mpc_abs(self.pair, self.prec, RND), _ZERO, self.prec)

    def arg(self) -> "MPComplex":
        return MPComplex(L.mpc_arg(self.pair, self.prec, RND), _ZERO, self.prec)

    def with_prec(self, prec: int) -> "MPComplex":
        return MPComplex.of(self, prec)

    def log10_abs(self) -> float:
        """log10|z| as a float; works for exponents far beyond float range."""
        if self.is_zero:
            return -math.inf
        return _log2_mpf(L.mpc_abs(self.pair, 60, RND)) / LOG2_10

    def sign_re(self) -> int:
        return L.mpf_sign(self.re)

    # -- conversions ----------------------------------------------------
    def to_mpmath(self) -> mpmath.mpc:
        return mpmath.mp.make_mpc(self.pair)

    @property
    def re_mpf(self) -> mpmath.mpf:
        return mpmath.mp.make_mpf(self.re)

    @property
    def im_mpf(self) -> mpmath.mpf:
        return mpmath.mp.make_mpf(self.im)

    def __complex__(self):
        return complex(L.to_float(self.re), L.to_float(self.im))

    def __float__(self):
        if self.im != _ZERO:
            raise TypeError("cannot convert a non-real MPComplex to float")
        return L.to_float(self.re)

    def to_str(self, digits: int | None = None) -> str:
        d = digits or bits_to_digits(self.prec)
        r = L.to_str(self.re, d)
        if self.im == _ZERO:
            return r
        i = L.to_str(self.im, d)
        return f"{r}{'' if i.startswith('-') else '+'}{i}i"

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"MPComplex('{self.to_str(20)}', prec={self.prec})"


def _log2_mpf(x) -> float:
    sign, man, exp, bc = x
    if not man:
        return -math.inf
    # top 53 bits of the mantissa are plenty for a float log
    shift = max(0, bc - 53)
    return math.log2(int(man) >> shift) + exp + shift


def zero(prec: int) -> MPComplex:
    return MPComplex(_ZERO, _ZERO, prec)


def one(prec: int) -> MPComplex:
    return MPComplex(_ONE, _ZERO, prec)


def imag_unit(prec: int) -> MPComplex:
    return MPComplex(_ZERO, _ONE, prec)


def pi(prec: int) -> MPComplex:
    return MPComplex(L.mpf_pi(prec, RND), _ZERO, prec)


def ln10(prec: int) -> MPComplex:
    return MPComplex(L.mpf_ln10(prec, RND), _ZERO, prec)


def clog(z: MPComplex) -> MPComplex:
    """Principal logarithm, Im in (-pi, pi]."""
    if z.is_zero:
        raise DomainError("logarithm of zero")
    return MPComplex(*L.mpc_log(z.pair, z.prec, RND), z.prec)


def cexp(z: MPComplex) -> MPComplex:
    return MPComplex(*L.mpc_exp(z.pair, z.prec, RND), z.prec)


def csqrt(z: MPComplex) -> MPComplex:
    return MPComplex(*L.mpc_sqrt(z.pair, z.prec, RND), z.prec)


def ctanh(z: MPComplex) -> MPComplex:
    return MPComplex(*L.mpc_tanh(z.pair, z.prec, RND), z.prec)


def rexp(x, prec: int):
    """exp of a raw real ``libmp`` value."""
    return L.mpf_exp(x, prec, RND)


def cpow_int_plus(z: MPComplex, k: int) -> MPComplex:
    """z**k for an arbitrary-size integer k >= 0, as exp(k * log z)."""
    if k < 0:
        raise ValueError("exponent must be non-negative")
    if k == 0:
        return one(z.prec)
    if z.is_zero:
        return zero(z.prec)
    return cexp(clog(z) * k)


def reduce_phase(z: MPComplex) -> MPComplex:
    """Shift Im(z) by a multiple of 2*pi into (-pi, pi]; exp(z) is unchanged."""
    p = z.prec
    two_pi = L.mpf_shift(L.mpf_pi(p + 20, RND), 1)
    mag = max(0, z.im[2] + z.im[3]) if z.im != L.fzero else 0  # log2 |Im| bound
    turns = L.to_int(L.mpf_div(z.im, two_pi, mag + 60, RND), RND)
    if turns == 0:
        return z
    # extra bits so the subtraction keeps the full precision of the remainder
    extra = max(0, turns.bit_length()) + 20
    two_pi = L.mpf_shift(L.mpf_pi(p + extra, RND), 1)
    im = L.mpf_sub(z.im, L.mpf_mul(two_pi, L.from_int(turns), p + extra, RND), p, RND)
    pi_ = L.mpf_pi(p, RND)
    if L.mpf_gt(im, pi_):
        im = L.mpf_sub(im, L.mpf_shift(pi_, 1), p, RND)
    elif L.mpf_le(im, L.mpf_neg(pi_)):
        im = L.mpf_add(im, L.mpf_shift(pi_, 1), p, RND)
    return MPComplex(z.re, im, p)


def tree_sum(values: Sequence[MPComplex]) -> MPComplex:
    """Pairwise summation in a fixed order; round-off grows like O(log n)."""
    if not values:
        raise ValueError("empty sum")
    level = list(values)
    while len(level) > 1:
        nxt = [level[i] + level[i + 1] for i in range(0, len(level) - 1, 2)]
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
    return level[0]


def log_add(x: MPComplex, y: MPComplex) -> MPComplex:
    """log(exp(x) + exp(y)) without ever forming exp(x) or exp(y)."""
    if L.mpf_lt(x.re, y.re):
        x, y = y, x
    d = cexp(y - x)
    s = d + 1
    if s.is_zero:
        raise PrecisionError("exact cancellation in log-space sum")
    return x + clog(s)


# ---------------------------------------------------------------------------
# Big-exponent decimal numbers
# ---------------------------------------------------------------------------

_BIGSCI_RE = re.compile(r"^(?P<sign>-)?(?P<mant>\d(?:\.\d*)?)(?:e(?P<exp>-?\d+))?$")


@dataclass(frozen=True)
class BigSci:
    """Decimal scientific value ``sign * mantissa * 10**exponent``.

    ``mantissa`` is the digit string "d.dd...d"; ``exponent`` is an unbounded int.
    """

    sign: int
    mantissa: str
    exponent: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if type(self.exponent) is not int:
            # gmpy mpz leaks in from libmp; keep the public type plain
            object.__setattr__(self, "exponent", int(self.exponent))
        digits = self.mantissa.replace(".", "")
        if not digits.isdigit():
            raise ValueError(f"bad mantissa {self.mantissa!r}")
        if digits[0] == "0" and set(digits) != {"0"}:
            raise ValueError("leading mantissa digit must be nonzero")

    @property
    def is_zero(self) -> bool:
        return set(self.mantissa.replace(".", "")) == {"0"}

    @property
    def digits(self) -> int:
        return len(self.mantissa.replace(".", ""))

    @property
    def digit_string(self) -> str:
        return self.mantissa.replace(".", "")

    @classmethod
    def zero(cls) -> "BigSci":
        return cls(1, "0", 0)

    def __str__(self):
        if self.is_zero:
            return "0"
        return f"{'-' if self.sign < 0 else ''}{self.mantissa}e{self.exponent}"

    @classmethod
    def parse(cls, text: str) -> "BigSci":
        text = text.strip()
        m = _BIGSCI_RE.match(text)
        if not m:
            raise ValueError(f"not a BigSci literal: {text!r}")
        exp = int(m.group("exp")) if m.group("exp") is not None else 0
        return cls(-1 if m.group("sign") else 1, m.group("mant"), exp)

    def as_fraction_scaled(self, exponent: int) -> Fraction:
        """Value / 10**exponent as an exact fraction (for close comparisons)."""
        digits = self.digit_string
        k = self.exponent - (len(digits) - 1) - exponent
        v = Fraction(int(digits)) * (Fraction(10) ** k)
        return -v if self.sign < 0 else v


def agreement_digits(a: BigSci, b: BigSci) -> float:
    """Number of significant decimal digits on which ``a`` and ``b`` agree.

    Computed from the relative difference, capped at the shorter mantissa.
    """
    cap = float(min(a.digits, b.digits))
    if a.is_zero and b.is_zero:
        return cap
    if a.is_zero or b.is_zero or abs(a.exponent - b.exponent) > 1:
        return 0.0
    base = b.exponent
    va, vb = a.as_fraction_scaled(base), b.as_fraction_scaled(base)
    diff = abs(va - vb)
    if diff == 0:
        return cap
    rel = diff / abs(vb)
    return max(0.0, min(cap, -math.log10(rel.numerator) + math.log10(rel.denominator)))


@dataclass(frozen=True)
class BigSciComplex:
    re: BigSci
    im: BigSci

    @property
    def is_real(self) -> bool:
        return self.im.is_zero

    def __str__(self):
        text = f"({self.re} + {self.im}i)"
        return text.replace("+ -", "- ")

    @classmethod
    def parse(cls, text: str) -> "BigSciComplex":
        text = text.strip()
        if not (text.startswith("(") and text.endswith("i)")):
            return cls(BigSci.parse(text), BigSci.zero())
        body = text[1:-2]
        m = re.match(r"^(?P<re>\S+) (?P<op>[+-]) (?P<im>\S+)$", body)
        if not m:
            raise ValueError(f"not a BigSciComplex literal: {text!r}")
        im = BigSci.parse(m.group("im"))
        if m.group("op") == "-":
            im = BigSci(-im.sign, im.mantissa, im.exponent)
        return cls(BigSci.parse(m.group("re")), im)


def _mantissa_of(log10_value, digits: int, prec: int) -> tuple[str, int]:
    """Decimal mantissa/exponent of 10**log10_value (raw mpf), round-to-nearest."""
    e = L.to_int(L.mpf_floor(log10_value, prec, RND))
    frac = L.mpf_sub(log10_value, L.from_int(e, prec, RND), prec, RND)
    m = L.mpf_exp(L.mpf_mul(frac, L.mpf_ln10(prec, RND), prec, RND), prec, RND)
    scaled = L.mpf_mul(m, L.from_int(10 ** (digits - 1), prec, RND), prec, RND)
    k = L.to_int(scaled, RND)
    if k >= 10**digits:
        k //= 10
        e += 1
    elif k < 10 ** (digits - 1):
        # frac rounded just below zero
        k = 10**digits - 1 if k == 0 else k * 10
        e -= 1
    s = str(k)
    return (s[0] + "." + s[1:]) if digits > 1 else s, e


def format_bigsci(logvalue: MPComplex, digits: int, real: bool = False) -> BigSciComplex:
    """Convert ``log(value)`` into decimal mantissas and exact exponents.

    Re(logvalue) is log|value| and Im(logvalue) the phase. With ``real=True``
    the imaginary part is reported as exactly zero. A part too small to
    resolve at all at the carried precision is reported as zero; a part that
    is resolvable but not to ``digits`` digits raises :class:`PrecisionError`.
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    z = reduce_phase(logvalue)
    p = z.prec
    avail = p / LOG2_10
    lm_digits = max(0.0, _log2_mpf(L.mpf_abs(z.re)) / LOG2_10) if z.re != _ZERO else 0.0
    ln10_ = L.mpf_ln10(p, RND)
    trig = L.mpf_cos_sin(z.im, p, RND)
    accs = []
    for c in trig:
        if c == _ZERO:
            accs.append(math.inf)
            continue
        loss = max(0.0, -_log2_mpf(L.mpf_abs(c)) / LOG2_10)
        accs.append(avail - loss - lm_digits - 2)
    if max(accs[0], -math.inf if real else accs[1]) < 1:
        raise PrecisionError(f"carried precision ({avail:.0f} digits) cannot resolve the value")
    parts = []
    for idx, (c, acc) in enumerate(zip(trig, accs)):
        if (idx == 1 and real) or c == _ZERO or acc < 1:
            # zero, or indistinguishable from zero at the carried precision
            parts.append(BigSci.zero())
            continue
        if acc < digits + 1:
            raise PrecisionError(
                f"need about {digits + 1 - acc:.0f} more digits of carried precision "
                f"to pin {digits} significant digits"
            )
        log10_part = L.mpf_div(
            L.mpf_add(z.re, L.mpf_log(L.mpf_abs(c), p, RND), p, RND), ln10_, p, RND
        )
        mant, e = _mantissa_of(log10_part, digits, p)
        parts.append(BigSci(L.mpf_sign(c), mant, e))
    return BigSciComplex(parts[0], parts[1])
