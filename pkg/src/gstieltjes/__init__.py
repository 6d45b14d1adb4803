"""Generalized Stieltjes constants gamma_n(v) for huge n and complex v.

    >>> from gstieltjes import GammaRequest, gamma
    >>> gamma(GammaRequest(n=10**5, v=1, digits=20)).value.re
    BigSci(sign=1, mantissa='1.9919273063125410957', exponent=83432)
"""
from .errors import (
    BranchError,
    ConvergenceError,
    DomainError,
    PrecisionError,
    StieltjesError,
    ValidityError,
)
from .lambertw import lambert_w0
from .mpkernel import BigSci, BigSciComplex, MPComplex, format_bigsci
from .oracle import gamma_oracle, gamma_oracle_series, hurwitz_zeta
from .saddle import saddle_point
from .stieltjes import (
    GammaRequest,
    GammaResult,
    asymptotic_I,
    gamma,
    gamma_asymptotic,
    gamma_direct,
    gamma_saddle,
)

__all__ = [
    "BigSci",
    "BigSciComplex",
    "BranchError",
    "ConvergenceError",
    "DomainError",
    "GammaRequest",
    "GammaResult",
    "MPComplex",
    "PrecisionError",
    "StieltjesError",
    "ValidityError",
    "asymptotic_I",
    "format_bigsci",
    "gamma",
    "gamma_asymptotic",
    "gamma_direct",
    "gamma_oracle",
    "gamma_oracle_series",
    "gamma_saddle",
    "hurwitz_zeta",
    "lambert_w0",
    "saddle_point",
]
