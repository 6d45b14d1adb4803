import json
import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gstieltjes.errors import PrecisionError
from gstieltjes.mpkernel import (
    BigSci,
    BigSciComplex,
    MPComplex,
    agreement_digits,
    bits_to_digits,
    ceil_log10,
    cexp,
    clog,
    digits_to_bits,
    format_bigsci,
    log_add,
    reduce_phase,
    tree_sum,
    working_prec,
)

PREC = 200

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)


def mp(z, prec=PREC):
    return MPComplex.of(z, prec)


def close(x: MPComplex, y, tol=1e-50):
    with mpmath.workprec(PREC):
        y = mpmath.mpc(y)
        return abs(x.to_mpmath() - y) <= tol * max(1, abs(y))


def test_ceil_log10_exact():
    assert ceil_log10(1) == 0
    assert ceil_log10(10) == 1
    assert ceil_log10(11) == 2
    assert ceil_log10(10**100) == 100
    assert ceil_log10(10**100 + 1) == 101
    with pytest.raises(ValueError):
        ceil_log10(0)


def test_digits_bits_roundtrip():
    for d in (15, 50, 100, 1000):
        assert bits_to_digits(digits_to_bits(d)) >= d
    assert working_prec(100, 10**100) > working_prec(100, 10**5)


def test_parse_complex_forms():
    assert mp("2+3i").to_mpmath() == mpmath.mpc(2, 3)
    assert mp("(2 - 3j)").to_mpmath() == mpmath.mpc(2, -3)
    assert mp("-i").to_mpmath() == mpmath.mpc(0, -1)
    assert mp("0.5").to_mpmath() == mpmath.mpc(0.5, 0)
    with pytest.raises(ValueError):
        mp("two")


@given(finite, finite, finite, finite)
def test_arithmetic_matches_mpmath(a, b, c, d):
    x, y = mp(complex(a, b)), mp(complex(c, d))
    with mpmath.workprec(PREC):
        X, Y = mpmath.mpc(a, b), mpmath.mpc(c, d)
        assert close(x + y, X + Y)
        assert close(x - y, X - Y)
        assert close(x * y, X * Y)
        if Y != 0:
            assert close(x / y, X / Y)


@given(finite, finite)
def test_exp_log_inverse(a, b):
    z = mp(complex(a, b))
    if z.is_zero:
        return
    back = cexp(clog(z))
    assert close(back, z.to_mpmath())


def test_reduce_phase_huge_imaginary():
    # phase of order 1e80 still reduces to the right angle
    prec = 600
    with mpmath.workprec(prec):
        big = mpmath.mpf(10) ** 80 + mpmath.mpf(1) / 3
        z = MPComplex.of(mpmath.mpc(1, big), prec)
        got = reduce_phase(z).im_mpf
        want = big - 2 * mpmath.pi * mpmath.floor(big / (2 * mpmath.pi) + mpmath.mpf(1) / 2)
        assert abs(got - want) < mpmath.mpf(10) ** -100
        assert abs(got) <= mpmath.pi


@given(st.floats(-50, 50), st.floats(-3, 3), st.floats(-50, 50), st.floats(-3, 3))
def test_log_add_matches_direct(a, b, c, d):
    x, y = mp(complex(a, b)), mp(complex(c, d))
    with mpmath.workprec(PREC):
        s = mpmath.exp(mpmath.mpc(a, b)) + mpmath.exp(mpmath.mpc(c, d))
        if abs(s) < mpmath.mpf(10) ** -20 * (abs(mpmath.exp(a)) + abs(mpmath.exp(c))):
            return
        got = cexp(log_add(x, y)).to_mpmath()
        assert abs(got - s) <= mpmath.mpf(10) ** -40 * abs(s)


def test_tree_sum():
    vals = [mp(k) for k in range(1, 101)]
    assert tree_sum(vals).to_mpmath() == 5050


@given(st.integers(1, 9), st.text("0123456789", min_size=0, max_size=30), st.integers(-10**30, 10**30))
def test_bigsci_str_parse_roundtrip(lead, rest, exponent):
    mant = str(lead) + ("." + rest if rest else "")
    for sign in (1, -1):
        x = BigSci(sign, mant, exponent)
        assert BigSci.parse(str(x)) == x


def test_bigsci_complex_roundtrip():
    z = BigSciComplex(BigSci(1, "1.5", 10**99), BigSci(-1, "7.25", 3))
    assert BigSciComplex.parse(str(z)) == z
    real = BigSciComplex(BigSci(-1, "2.0", 5), BigSci.zero())
    assert BigSciComplex.parse(str(real)).re == real.re


@given(st.integers(-10**40, 10**40).filter(lambda k: k != 0), st.integers(5, 40))
def test_format_bigsci_of_integer(k, digits):
    prec = digits_to_bits(digits + 60)
    got = format_bigsci(clog(MPComplex.of(k, prec)), digits, real=True).re
    assert got.sign == (1 if k > 0 else -1)
    assert got.exponent - (len(str(abs(k))) - 1) in (0, 1)  # 1 when rounding carries
    # correctly rounded: within half a unit in the last place
    ulp = Fraction(10) ** (got.exponent - digits + 1)
    assert abs(abs(got.as_fraction_scaled(0)) - abs(k)) <= ulp / 2


def test_format_bigsci_huge_exponent_is_exact():
    # 10^(10^50 + 1/2): exponent 10^50, mantissa sqrt(10)
    prec = digits_to_bits(130)
    with mpmath.workprec(prec):
        lv = (mpmath.mpf(10) ** 50 + mpmath.mpf(1) / 2) * mpmath.ln(10)
    z = MPComplex.of(lv, prec)
    got = format_bigsci(z, 20, real=True).re
    assert got.exponent == 10**50
    with mpmath.workdps(40):
        assert got.mantissa == mpmath.nstr(mpmath.sqrt(10), 20, strip_zeros=False)


def test_format_bigsci_refuses_unresolvable():
    prec = digits_to_bits(40)
    with mpmath.workprec(prec):
        lv = mpmath.mpf(10) ** 35 * mpmath.ln(10)
    with pytest.raises(PrecisionError):
        format_bigsci(MPComplex.of(lv, prec), 30, real=True)


def test_agreement_digits():
    a = BigSci(1, "1.23456789", 7)
    b = BigSci(1, "1.23456780", 7)
    assert 7 <= agreement_digits(a, b) <= 9
    assert agreement_digits(a, a) == 9
    assert agreement_digits(a, BigSci(1, "1.23456789", 9)) == 0


def test_json_safe_bigsci_exponent():
    x = BigSci(1, "3.5", 10**120)
    text = json.dumps({"e": str(x.exponent)})
    assert int(json.loads(text)["e"]) == x.exponent
    assert isinstance(BigSci(1, "1", mpmath.libmp.MPZ(5)).exponent, int)


def test_mantissa_rounding_carries():
    # 9.9999...96 to 5 digits rounds up into the next decade
    prec = digits_to_bits(60)
    with mpmath.workprec(prec):
        x = mpmath.mpf("9.99996") * mpmath.mpf(10) ** 3
        z = MPComplex.of(mpmath.log(x), prec)
    got = format_bigsci(z, 5, real=True).re
    assert (got.mantissa, got.exponent) == ("1.0000", 4)
    assert math.isclose(float(got.as_fraction_scaled(0)), 10000)
