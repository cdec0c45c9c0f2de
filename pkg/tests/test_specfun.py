import math

import mpmath
import pytest
from mpmath import mp

from bmop.errors import DomainError
from bmop.precision import DOUBLE, PrecisionConfig
from bmop.specfun import (Params, bessel_i, bessel_k, besselk_mp,
                          hyp_terminating, omega, omega_at_zero, rho,
                          rho_at_zero)

EXT = PrecisionConfig(mode="extended", mantissa_bits=200)


class TestParams:
    def test_valid(self):
        p = Params(mu=0.5, nu=1.5, a=1.0, b=2.0)
        assert p.gap == pytest.approx(3.0)

    @pytest.mark.parametrize("kw", [
        dict(mu=-1.5, nu=1.0, a=1.0, b=2.0),
        dict(mu=0.0, nu=0.0, a=1.0, b=2.0),
        dict(mu=0.0, nu=1.0, a=2.0, b=1.0),
        dict(mu=0.0, nu=1.0, a=-1.0, b=2.0),
    ])
    def test_invalid(self, kw):
        with pytest.raises(DomainError):
            Params(**kw)


class TestBessel:
    @pytest.mark.parametrize("order", [0.0, 0.5, 1.0, 2.5])
    @pytest.mark.parametrize("z", [0.01, 1.0, 10.0, 80.0])
    def test_i_vs_mpmath(self, order, z):
        ref = float(mpmath.besseli(order, z))
        assert bessel_i(order, z).value() == pytest.approx(ref, rel=1e-13)

    @pytest.mark.parametrize("order", [0.5, 1.0, 2.5])
    @pytest.mark.parametrize("z", [0.01, 1.0, 10.0, 80.0])
    def test_k_vs_mpmath(self, order, z):
        ref = float(mpmath.besselk(order, z))
        assert bessel_k(order, z).value() == pytest.approx(ref, rel=1e-13)

    def test_wronskian(self):
        for z in (0.2, 1.0, 5.0, 30.0):
            lhs = (bessel_i(1.5, z).value() * bessel_k(2.5, z).value()
                   + bessel_i(2.5, z).value() * bessel_k(1.5, z).value())
            assert lhs == pytest.approx(1.0 / z, rel=1e-12)


class TestBesselkMp:
    @pytest.mark.parametrize("n", [0, 1, 2, 5, 13])
    @pytest.mark.parametrize("z", [0.01, 0.8, 7.0, 60.0, 260.0])
    def test_integer_orders(self, n, z):
        with mp.workprec(200):
            got = besselk_mp(n, mp.mpf(z), 200)
            ref = mpmath.besselk(n, mp.mpf(z))
            assert abs(got - ref) <= mp.mpf(2) ** -170 * abs(ref)

    def test_non_integer_delegates(self):
        with mp.workprec(200):
            got = besselk_mp(1.5, mp.mpf(2), 200)
            ref = mpmath.besselk(1.5, mp.mpf(2))
            assert abs(got - ref) <= mp.mpf(2) ** -170 * abs(ref)


class TestWeights:
    def test_omega_definition(self):
        x, mu, a = 1.7, 0.5, 1.2
        ref = x ** (mu / 2) * float(mpmath.besseli(mu, 2 * a * math.sqrt(x)))
        assert omega(mu, a, x).value() == pytest.approx(ref, rel=1e-13)

    def test_rho_definition(self):
        x, nu, b = 1.7, 1.5, 2.1
        ref = x ** (nu / 2) * float(mpmath.besselk(nu, 2 * b * math.sqrt(x)))
        assert rho(nu, b, x).value() == pytest.approx(ref, rel=1e-13)

    def test_omega_three_term(self):
        # omega_{mu+1} = x omega_{mu-1} - (mu/a) omega_{mu}
        mu, a = 1.5, 1.0
        for x in (0.1, 1.0, 10.0):
            lhs = omega(mu + 1, a, x).value()
            rhs = x * omega(mu - 1, a, x).value() - mu / a * omega(mu, a, x).value()
            assert lhs == pytest.approx(rhs, rel=1e-10)

    def test_omega_at_zero(self):
        # literal limit: 0 for mu > 0, 1 at mu = 0, divergent for mu < 0
        assert omega_at_zero(0.5, 1.3) == 0.0
        assert omega_at_zero(0.0, 1.3) == 1.0
        assert omega_at_zero(-0.5, 1.3) == math.inf
        # small-x coefficient: omega(x) ~ (a x)^mu / Gamma(mu+1)
        mu, a, x = 0.5, 1.3, 1e-12
        assert omega(mu, a, x).value() / x ** mu == pytest.approx(
            a ** mu / math.gamma(mu + 1.0), rel=1e-5)

    def test_rho_at_zero(self):
        nu, b = 1.5, 2.0
        x = 1e-12
        assert rho(nu, b, x).value() == pytest.approx(
            rho_at_zero(nu, b).value(), rel=1e-5)

    def test_extended_matches_double(self):
        v_d = omega(0.5, 1.0, 3.0, DOUBLE).value()
        v_e = omega(0.5, 1.0, 3.0, EXT).value()
        assert v_d == pytest.approx(v_e, rel=1e-13)


class TestHypTerminating:
    def test_2f1_n1(self):
        # 2F1(-1, b; c; z) = 1 - b z / c
        assert hyp_terminating("2F1", [-1.0, 2.0], [3.0], 0.5) == pytest.approx(
            1.0 - 2.0 * 0.5 / 3.0, rel=1e-14)

    def test_1f2_n0(self):
        assert hyp_terminating("1F2", [0.0], [2.0, 3.0], 1.7) == 1.0

    def test_1f2_finite_sum(self):
        # 1F2(-2; 2, 1; 1): term k has (-2)_k / ((2)_k (1)_k k!)
        val = hyp_terminating("1F2", [-2.0], [2.0, 1.0], 1.0)
        manual = 1.0 + (-2.0) / (2.0 * 1.0) + 2.0 / ((2.0 * 3.0) * (1.0 * 2.0) * 2.0)
        assert val == pytest.approx(manual, rel=1e-14)
