import numpy as np
import pytest

from bmop import lommel
from bmop.errors import DomainError
from bmop.precision import PrecisionConfig
from bmop.specfun import Params, omega, rho

EXT = PrecisionConfig(mode="extended", mantissa_bits=300)
P0 = Params(mu=0.5, nu=1.5, a=1.0, b=2.0)
P1 = Params(mu=0.0, nu=1.0, a=0.8, b=1.6)


class TestShiftPair:
    def test_m0(self):
        pair = lommel.shift_pair(0.7, 0)
        assert pair.r_poly == (1.0,)
        assert pair.s_poly == ()

    def test_m1(self):
        pair = lommel.shift_pair(0.7, 1)
        assert pair.r_poly == ()
        assert pair.s_poly == (1.0,)

    def test_m2_matches_three_term(self):
        # m = 2 reduces to the three-term recurrence: r(x) = x, s(x) = -(mu+1)
        mu = 0.7
        pair = lommel.shift_pair(mu, 2)
        assert pair.r_at(3.5) == pytest.approx(3.5)
        assert pair.s_at(3.5) == pytest.approx(-(mu + 1.0))

    def test_negative_m_rejected(self):
        with pytest.raises(DomainError):
            lommel.shift_pair(0.5, -1)


class TestReconstruction:
    @pytest.mark.parametrize("p", [P0, P1], ids=["S0", "S1"])
    def test_omega_shift(self, p):
        for m in range(13):
            for x in np.geomspace(0.1, 20.0, 7):
                got = lommel.omega_shift_eval(p, m, float(x))
                ref = omega(p.mu + m, p.a, float(x), EXT).value()
                assert got == pytest.approx(ref, rel=1e-9)

    @pytest.mark.parametrize("p", [P0, P1], ids=["S0", "S1"])
    def test_rho_shift(self, p):
        for m in range(13):
            for x in np.geomspace(0.1, 20.0, 7):
                got = lommel.rho_shift_eval(p, m, float(x))
                ref = rho(p.nu + m, p.b, float(x), EXT).value()
                assert got == pytest.approx(ref, rel=1e-9)

    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_sign_parity(self, m):
        # the second-kind identity uses scale -b, not +b; the naive +b
        # combination must fail whenever the two scale powers differ in sign
        p = P0
        x = 1.0
        pair = lommel.shift_pair(p.nu, m)
        w0 = rho(p.nu, p.b, x, EXT).value()
        w1 = rho(p.nu + 1, p.b, x, EXT).value()
        arg = p.b * p.b * x
        correct = ((-p.b) ** (-m) * pair.r_at(arg) * w0
                   + (-p.b) ** (1 - m) * pair.s_at(arg) * w1)
        naive = (p.b ** (-m) * pair.r_at(arg) * w0
                 + p.b ** (1 - m) * pair.s_at(arg) * w1)
        ref = rho(p.nu + m, p.b, x, EXT).value()
        assert correct == pytest.approx(ref, rel=1e-9)
        assert abs(naive - ref) > 1e-3 * abs(ref)

    def test_x_positive_required(self):
        with pytest.raises(DomainError):
            lommel.omega_shift_eval(P0, 2, 0.0)
        with pytest.raises(DomainError):
            lommel.rho_shift_eval(P0, 2, -1.0)
