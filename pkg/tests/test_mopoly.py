import math

import pytest
import scipy.special as sp

from bmop import mopoly
from bmop.errors import DomainError
from bmop.precision import PrecisionConfig
from bmop.specfun import Params, omega, rho

EXT = PrecisionConfig(mode="extended", mantissa_bits=300)
P0 = Params(mu=0.5, nu=1.5, a=1.0, b=2.0)
P1 = Params(mu=0.0, nu=1.0, a=0.8, b=1.6)


class TestExpansions:
    def test_q0_is_weight(self):
        for x in (0.3, 1.0, 5.0):
            assert mopoly.q_eval(P0, 0, x) == pytest.approx(
                omega(P0.mu, P0.a, x).value(), rel=1e-13)

    def test_q1_hand_expansion(self):
        # (mu=0, nu=1, a=1, b=2): Q_1(1) = -2 I_0(2) + 3 I_1(2)
        p = Params(mu=0.0, nu=1.0, a=1.0, b=2.0)
        ref = -2.0 * sp.iv(0, 2.0) + 3.0 * sp.iv(1, 2.0)
        assert mopoly.q_eval(p, 1, 1.0) == pytest.approx(ref, rel=1e-12)

    def test_p0_prefactor(self):
        base = P0.mu + P0.nu + 1.0
        pref = (2.0 * P0.gap ** base
                / (P0.a ** P0.mu * P0.b ** P0.nu * math.gamma(base)))
        for x in (0.3, 2.0):
            assert mopoly.p_eval(P0, 0, x) == pytest.approx(
                pref * rho(P0.nu, P0.b, x).value(), rel=1e-12)

    def test_coeff_counts(self):
        qc = mopoly.q_coeffs(P0, 4)
        pc = mopoly.p_coeffs(P0, 4)
        assert len(qc.coeffs) == 5
        assert len(pc.coeffs) == 5

    def test_normalization(self):
        base = P0.mu + P0.nu + 1.0
        c2 = mopoly.normalization_c(P0, 2).value.value()
        ref = 2.0 * P0.gap ** base / (
            P0.a ** P0.mu * P0.b ** P0.nu * math.gamma(base + 2) * 2.0)
        assert c2 == pytest.approx(ref, rel=1e-13)


class TestOracles:
    @pytest.mark.parametrize("p", [P0, P1], ids=["S0", "S1"])
    @pytest.mark.parametrize("n", [0, 1, 3, 6])
    def test_q_routes_agree(self, p, n):
        for x in (0.2, 1.0, 4.0):
            direct = mopoly.q_eval(p, n, x)
            det = mopoly.q_eval_determinant(p, n, x)
            ser = mopoly.q_eval_series(p, n, x)
            scale = max(abs(direct), abs(mopoly.q_eval(p, n, 1.0)))
            assert abs(direct - det) <= 1e-10 * scale
            assert abs(direct - ser) <= 1e-10 * scale

    @pytest.mark.parametrize("p", [P0, P1], ids=["S0", "S1"])
    @pytest.mark.parametrize("n", [0, 1, 3, 6])
    def test_p_routes_agree(self, p, n):
        for x in (0.2, 1.0, 4.0):
            direct = mopoly.p_eval(p, n, x)
            det = mopoly.p_eval_determinant(p, n, x)
            scale = max(abs(direct), abs(mopoly.p_eval(p, n, 1.0)))
            assert abs(direct - det) <= 1e-10 * scale


class TestPolyPairs:
    def test_a1_constants(self):
        # A_{1,1} = -(mu+nu+1), A_{1,2} = (b^2-a^2)/a
        pair = mopoly.a_polys(P0, 1)
        assert pair.first == (pytest.approx(-(P0.mu + P0.nu + 1.0)),)
        assert pair.second == (pytest.approx(P0.gap / P0.a),)

    @pytest.mark.parametrize("p", [P0, P1], ids=["S0", "S1"])
    @pytest.mark.parametrize("n", [1, 2, 4, 7])
    def test_a_reconstructs_q(self, p, n):
        for x in (0.3, 1.5, 6.0):
            got = mopoly.a_polys(p, n).reconstruct(x, EXT)
            ref = mopoly.q_eval(p, n, x, EXT)
            assert got == pytest.approx(ref, rel=1e-10)

    @pytest.mark.parametrize("p", [P0, P1], ids=["S0", "S1"])
    @pytest.mark.parametrize("n", [1, 2, 4, 7])
    def test_b_reconstructs_p(self, p, n):
        for x in (0.3, 1.5, 6.0):
            got = mopoly.b_polys(p, n).reconstruct(x, EXT)
            ref = mopoly.p_eval(p, n, x, EXT)
            assert got == pytest.approx(ref, rel=1e-10)

    def test_degrees(self):
        pair = mopoly.a_polys(P0, 5)
        assert len(pair.first) == 5 // 2 + 1
        assert len(pair.second) == (5 - 1) // 2 + 1

    def test_n0_rejected(self):
        with pytest.raises(DomainError):
            mopoly.a_polys(P0, 0)
        with pytest.raises(DomainError):
            mopoly.b_polys(P0, 0)


class TestSignChanges:
    @pytest.mark.parametrize("n", [0, 1, 2, 3, 5])
    def test_counts_small(self, n):
        assert mopoly.count_sign_changes(P0, n) == n

    def test_profile_matches(self):
        assert mopoly.sign_change_profile(P1, 5) == [0, 1, 2, 3, 4, 5]
