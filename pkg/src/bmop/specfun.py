"""Scalar special functions: gamma ratios, modified Bessel functions and
the scaled weights w_mu (first kind, growing) and r_nu (second kind,
decaying) that everything downstream is built from.

Double mode is backed by scipy.special (exponentially scaled ive/kve so the
log-magnitude never overflows); extended mode is backed by mpmath at the
configured mantissa width.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
from mpmath import mp
from scipy import special as sp

from .errors import DomainError, PoleError
from .precision import DOUBLE, LogValue, PrecisionConfig


@dataclass(frozen=True)
class Params:
    """Parameter quadruple governing the whole weight system.

    mu > -1, nu > 0 and b > a > 0 are required; products of the two weight
    families are integrable on (0, inf) exactly under these constraints.
    """

    mu: float
    nu: float
    a: float
    b: float

    def __post_init__(self):
        if not self.mu > -1:
            raise DomainError(f"mu must be > -1, got {self.mu}")
        if not self.nu > 0:
            raise DomainError(f"nu must be > 0, got {self.nu}")
        if not (self.b > self.a > 0):
            raise DomainError(f"need b > a > 0, got a={self.a}, b={self.b}")

    @property
    def gap(self) -> float:
        """b^2 - a^2, the scale entering every explicit coefficient."""
        return self.b * self.b - self.a * self.a


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def pochhammer(x: float, k: int) -> float:
    """Rising factorial x(x+1)...(x+k-1); empty product is 1."""
    if k < 0:
        raise DomainError("pochhammer requires k >= 0")
    out = 1.0
    for i in range(k):
        out *= x + i
    return out


def log_gamma_ratio(p: float, q: float) -> LogValue:
    """Gamma(p)/Gamma(q) carried in log space."""
    if _is_nonpositive_integer(p) or _is_nonpositive_integer(q):
        raise PoleError(f"gamma pole at p={p}, q={q}")
    sign = int(sp.gammasgn(p) * sp.gammasgn(q))
    return LogValue(float(sp.gammaln(p) - sp.gammaln(q)), sign)


def log_gamma(p: float) -> LogValue:
    if _is_nonpositive_integer(p):
        raise PoleError(f"gamma pole at {p}")
    return LogValue(float(sp.gammaln(p)), int(sp.gammasgn(p)))


def bessel_i(mu: float, z: float, precision: PrecisionConfig = DOUBLE) -> LogValue:
    """Modified Bessel function of the first kind, order mu > -1, z >= 0."""
    if not mu > -1:
        raise DomainError(f"bessel_i requires mu > -1, got {mu}")
    if z < 0:
        raise DomainError("bessel_i requires z >= 0")
    if z == 0.0:
        if mu == 0.0:
            return LogValue(0.0, 1)
        if mu > 0:
            return LogValue.zero()
        return LogValue(math.inf, 1)  # -1 < mu < 0 diverges at 0
    if precision.extended:
        with mp.workprec(precision.mantissa_bits):
            return LogValue.from_mpf(mpmath.besseli(mu, z))
    scaled = float(sp.ive(mu, z))  # I_mu(z) * exp(-z)
    if scaled > 0 and math.isfinite(scaled):
        return LogValue(math.log(scaled) + z, 1)
    # ive underflows for tiny z with large order; leading series term then
    # dominates to full double accuracy
    log_lead = mu * math.log(z / 2.0) - float(sp.gammaln(mu + 1.0))
    correction = math.log1p(z * z / (4.0 * (mu + 1.0)))
    return LogValue(log_lead + correction, 1)


def bessel_k(nu: float, z: float, precision: PrecisionConfig = DOUBLE) -> LogValue:
    """Modified Bessel function of the second kind (Macdonald function), z > 0."""
    if z <= 0:
        raise DomainError("bessel_k requires z > 0")
    if precision.extended:
        with mp.workprec(precision.mantissa_bits):
            return LogValue.from_mpf(mpmath.besselk(nu, z))
    scaled = float(sp.kve(nu, z))  # K_nu(z) * exp(z)
    return LogValue(math.log(scaled) - z, 1)


def omega(mu: float, a: float, x: float, precision: PrecisionConfig = DOUBLE) -> LogValue:
    """First-kind weight x^(mu/2) I_mu(2 a sqrt(x)); positive on (0, inf)."""
    if x <= 0:
        raise DomainError("omega requires x > 0; use omega_at_zero for the limit")
    i = bessel_i(mu, 2.0 * a * math.sqrt(x), precision)
    return LogValue(i.log_magnitude + 0.5 * mu * math.log(x), i.sign)


def rho(nu: float, b: float, x: float, precision: PrecisionConfig = DOUBLE) -> LogValue:
    """Second-kind weight x^(nu/2) K_nu(2 b sqrt(x)); positive on (0, inf)."""
    if x <= 0:
        raise DomainError("rho requires x > 0; use rho_at_zero for the limit")
    k = bessel_k(nu, 2.0 * b * math.sqrt(x), precision)
    return LogValue(k.log_magnitude + 0.5 * nu * math.log(x), k.sign)


def omega_at_zero(mu: float, a: float) -> float:
    """lim_{x->0} of the first-kind weight: (a x)^mu / Gamma(mu+1) at x=0."""
    if mu > 0:
        return 0.0
    if mu == 0:
        return 1.0
    return math.inf


def rho_at_zero(nu: float, b: float) -> LogValue:
    """lim_{x->0} of the second-kind weight: Gamma(nu) / (2 b^nu)."""
    if nu <= 0:
        raise DomainError("rho_at_zero requires nu > 0")
    g = log_gamma(nu)
    return LogValue(g.log_magnitude - math.log(2.0) - nu * math.log(b), 1)


def omega_mp(mu, a, x, bits: int = 200):
    """Extended-precision first-kind weight as an mpf (internal helper)."""
    with mp.workprec(bits):
        x = mp.mpf(x)
        return x ** (mp.mpf(mu) / 2) * mpmath.besseli(mu, 2 * mp.mpf(a) * mpmath.sqrt(x))


def rho_mp(nu, b, x, bits: int = 200):
    """Extended-precision second-kind weight as an mpf (internal helper)."""
    with mp.workprec(bits):
        x = mp.mpf(x)
        return x ** (mp.mpf(nu) / 2) * mpmath.besselk(nu, 2 * mp.mpf(b) * mpmath.sqrt(x))


def _besselk_asymptotic(nu, z, bits: int):
    """K_nu(z) from the large-z expansion; valid once e^(-2z) < 2^-bits."""
    with mp.workprec(bits + 20):
        z = mp.mpf(z)
        four_nu2 = 4 * mp.mpf(nu) ** 2
        s = term = mp.mpf(1)
        k = 0
        tol = mp.mpf(2) ** (-(bits + 10))
        while abs(term) > tol:
            k += 1
            term *= (four_nu2 - (2 * k - 1) ** 2) / (8 * z * k)
            if k > 2 * float(z):  # past the optimal truncation point
                break
            s += term
        return mpmath.sqrt(mp.pi / (2 * z)) * mpmath.exp(-z) * s


def _besselk_int_series(n: int, z, bits: int):
    """K_n(z), integer n >= 0, by the ascending series with log term.

    The two series cancel to e^(-z) out of terms growing like e^z, so the
    working precision carries ~3z/ln2 guard bits.
    """
    slack = int(3.0 * float(z)) + 40
    with mp.workprec(bits + slack):
        z = mp.mpf(z)
        h = z * z / 4
        s1 = mp.mpf(0)
        for k in range(n):
            s1 += mp.factorial(n - k - 1) / mp.factorial(k) * (-h) ** k
        s1 *= (z / 2) ** (-n) / 2
        ln = mpmath.log(z / 2)
        term = mp.mpf(1) / mp.factorial(n)
        psi_a = -mpmath.euler
        psi_b = mpmath.digamma(n + 1)
        s2 = mp.mpf(0)
        floor = mp.mpf(2) ** (-(bits + slack - 10)) * mpmath.exp(z)
        k = 0
        while True:
            contrib = term * (psi_a + psi_b - 2 * ln)
            s2 += contrib
            if k > 2 and abs(contrib) < floor:
                break
            k += 1
            term *= h / (k * (n + k))
            psi_a += mp.mpf(1) / k
            psi_b += mp.mpf(1) / (n + k)
        s2 *= (-1) ** n * (z / 2) ** n / 2
        return s1 + s2


def besselk_mp(nu, z, bits: int = 200):
    """K_nu(z) as an mpf at the requested precision.

    mpmath's integer-order path goes through a numerical order limit and is
    orders of magnitude slower than the half-integer one, so integer orders
    are routed to direct series/asymptotic evaluations instead.
    """
    with mp.workprec(bits):
        z = mp.mpf(z)
        n = float(nu)
        if n == int(n) and n >= 0:
            if 2 * float(z) > (bits + 20) * math.log(2.0):
                return _besselk_asymptotic(nu, z, bits)
            return _besselk_int_series(int(n), z, bits)
        return mpmath.besselk(nu, z)


def hyp_terminating(kind: str, numerator, denominator, z: float,
                    tol: float = 1e-16, max_terms: int = 10000) -> float:
    """Terminating (or truncated 0F1) hypergeometric sum with compensated
    summation.

    kind is one of "2F1", "1F2", "0F1".  For 2F1/1F2 the first numerator
    parameter must be a non-positive integer -n so the series terminates.
    """
    numerator = list(numerator)
    denominator = list(denominator)
    expected = {"2F1": (2, 1), "1F2": (1, 2), "0F1": (0, 1)}
    if kind not in expected:
        raise DomainError(f"unknown hypergeometric kind {kind!r}")
    if (len(numerator), len(denominator)) != expected[kind]:
        raise DomainError(f"{kind} takes {expected[kind][0]} numerator and "
                          f"{expected[kind][1]} denominator parameters")
    if kind != "0F1":
        first = numerator[0]
        if not (first <= 0 and first == math.floor(first)):
            raise DomainError(f"{kind} requires a terminating first parameter, got {first}")
        n_terms = int(-first) + 1
    else:
        n_terms = max_terms

    terms = []
    term = 1.0
    for k in range(n_terms):
        terms.append(term)
        if kind != "0F1" and k + 1 >= n_terms:
            break
        if kind == "0F1" and k > 2 and abs(term) < tol * abs(math.fsum(terms)):
            break
        ratio = z / (k + 1.0)
        for p in numerator:
            ratio *= p + k
        for q in denominator:
            qk = q + k
            if qk == 0.0:
                raise PoleError(f"denominator parameter {q} hits a pole at term {k}")
            ratio /= qk
        term *= ratio
    return math.fsum(terms)
