import doctest

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

import gstieltjes
from gstieltjes import GammaRequest, gamma
from gstieltjes.errors import DomainError, ValidityError
from gstieltjes.mpkernel import MPComplex, agreement_digits, cexp, clog, digits_to_bits
from gstieltjes.oracle import gamma_oracle_series
from gstieltjes.stieltjes import (
    asymptotic_I,
    assemble_gamma,
    gamma_asymptotic,
    gamma_direct,
    gamma_saddle,
    relative_difference,
)


def test_package_doctests():
    failures, _ = doctest.testmod(gstieltjes)
    assert failures == 0


def test_request_validation():
    with pytest.raises(DomainError):
        GammaRequest(n=-1)
    with pytest.raises(DomainError):
        GammaRequest(n=True)
    with pytest.raises(DomainError):
        GammaRequest(n=5, v="0.25")
    with pytest.raises(DomainError):
        GammaRequest(n=5, digits=0)
    with pytest.raises(DomainError):
        GammaRequest(n=5, method="magic")


def test_routing():
    assert gamma(GammaRequest(n=5, digits=20)).method_used == "direct"
    assert gamma(GammaRequest(n=10**5, digits=20)).method_used == "saddle"
    with pytest.raises(ValidityError):
        gamma(GammaRequest(n=5, digits=20, method="saddle"))


def test_small_n_against_mpmath():
    for n in range(6):
        res = gamma(GammaRequest(n=n, v=1, digits=30))
        with mpmath.workdps(40):
            ref = mpmath.stieltjes(n)
            got = cexp(res.log_value).to_mpmath()
            assert abs(got - ref) <= mpmath.mpf(10) ** -29 * abs(ref)


@pytest.mark.parametrize("v", ["1", "0.5", "1.5+0.5i"])
def test_saddle_route_against_oracle_at_its_edge(v):
    # n = 28 is inside both the oracle's range and the saddle's validity range
    n = 28
    ref = clog(gamma_oracle_series(n, v, 40)[n])
    a = MPComplex.of(v, 200) - MPComplex.of("0.5", 200)
    assert relative_difference(gamma_saddle(n, a, 40), ref) < -38


def test_real_v_imaginary_residue_below_target():
    for n, digits in [(10**5, 50), (10**100, 100), (7, 40)]:
        res = gamma(GammaRequest(n=n, v=1, digits=digits))
        assert res.value.im.is_zero
        assert res.imag_residue < mpmath.mpf(10) ** -digits


def test_conjugate_symmetry():
    a = gamma(GammaRequest(n=10**5, v="2+3i", digits=30)).value
    b = gamma(GammaRequest(n=10**5, v="2-3i", digits=30)).value
    assert a.re == b.re
    assert a.im.mantissa == b.im.mantissa and a.im.exponent == b.im.exponent
    assert a.im.sign == -b.im.sign


@given(st.integers(2, 40), st.integers(8, 30))
def test_more_digits_refine_fewer(k, digits):
    n = 10**k
    lo = gamma(GammaRequest(n=n, v=1, digits=digits)).value.re
    hi = gamma(GammaRequest(n=n, v=1, digits=digits + 15)).value.re
    assert agreement_digits(lo, hi) >= digits - 1


def test_assemble_real_shortcut():
    a = MPComplex.of("0.5", 200)
    log_i = asymptotic_I(10**6, a, 50)
    assert assemble_gamma(10**6, log_i) == assemble_gamma(10**6, log_i, log_i)


def test_asymptotic_error_shrinks_with_n():
    errs = []
    for k in (5, 20, 60):
        n = 10**k
        q = gamma_saddle(n, "0.5", 80)
        s = gamma_asymptotic(n, "0.5", 80)
        errs.append(relative_difference(s, q))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < -55


def test_direct_route_high_precision():
    got = gamma_direct(2, "0.5", 60)
    with mpmath.workdps(70):
        assert abs(cexp(got).to_mpmath() - mpmath.stieltjes(2)) < mpmath.mpf(10) ** -60


def test_relative_difference():
    prec = digits_to_bits(50)
    x = MPComplex.of(10, prec)
    y = x + MPComplex.of("1e-20", prec)
    assert -21 < relative_difference(x, y) < -19


def test_euler_constant_at_n_zero():
    res = gamma(GammaRequest(n=0, v=1, digits=50))
    assert res.value.re.mantissa == "5.7721566490153286060651209008240243104215933593992"
    assert res.value.re.exponent == -1


def test_assembly_sign_and_paths():
    prec = digits_to_bits(60)
    log_i = MPComplex.of(mpmath.log(mpmath.mpf(3)), prec)  # I = 3, real positive
    g = assemble_gamma(4, log_i)
    assert cexp(g).re_mpf < 0
    # both assembly paths agree when fed a real a
    a = MPComplex.of("0.5", prec)
    li = asymptotic_I(10**5, a, 60)
    assert relative_difference(assemble_gamma(10**5, li), assemble_gamma(10**5, li, asymptotic_I(10**5, a.conj(), 60))) < -55


def test_asymptotic_conjugate_symmetry():
    a = gamma(GammaRequest(n=10**30, v="2+3i", digits=40, method="asymptotic")).value
    b = gamma(GammaRequest(n=10**30, v="2-3i", digits=40, method="asymptotic")).value
    assert a.re == b.re and a.im.mantissa == b.im.mantissa and a.im.sign == -b.im.sign


@pytest.mark.parametrize("n,v", [(10**5, "1"), (10**40, "2+3i"), (9, "0.5")])
def test_est_error_below_target(n, v):
    res = gamma(GammaRequest(n=n, v=v, digits=40))
    assert res.est_error <= mpmath.mpf(10) ** -40
    assert res.plan is not None or res.method_used == "direct"


@pytest.mark.parametrize("n", [500, 2000])
def test_overlap_band_a_one(n):
    s = gamma(GammaRequest(n=n, v="1.5", digits=100, method="saddle")).log_value
    d = gamma(GammaRequest(n=n, v="1.5", digits=100, method="direct")).log_value
    assert relative_difference(s, d) <= -100
