import math
from fractions import Fraction as Q

import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from coulombev import exactnum as en


def dih_double_sum(sign, n, m):
    tot = Q(0)
    for i in range(1, n + 1):
        jmax = (m - 1 + i) if sign == "+" else (m + 1 - i)
        for j in range(1, jmax + 1):
            tot += Q(1, i * j)
    return tot


class TestHarmonic:
    def test_reference_values(self):
        assert en.harmonic(0, 1) == 0
        assert en.harmonic(5, 1) == Q(137, 60)
        assert en.harmonic(4, 2) == Q(205, 144)

    def test_negative_raises(self):
        with pytest.raises(en.DomainError):
            en.harmonic(-1)

    @given(st.integers(min_value=1, max_value=50))
    @settings(max_examples=50, deadline=None)
    def test_recurrence(self, n):
        assert en.harmonic(n) - en.harmonic(n - 1) == Q(1, n)


class TestDiharmonic:
    def test_reference_values(self):
        assert en.diharmonic("+", 4, 1) == Q(415, 144)
        assert en.diharmonic("-", 0, 7) == 0
        h6, h62 = en.harmonic(6), en.harmonic(6, 2)
        assert en.diharmonic("+", 6, 0) == (h6 * h6 - h62) / 2

    @given(st.integers(min_value=0, max_value=10), st.integers(min_value=-8, max_value=10),
           st.sampled_from("+-"))
    @settings(max_examples=120, deadline=None)
    def test_double_sum_oracle(self, n, m, sign):
        assert en.diharmonic(sign, n, m) == dih_double_sum(sign, n, m)


class TestGammaRatio:
    def test_reference_values(self):
        g = en.gamma_ratio_limit(0, 1)
        assert g.coeff(0) == en.SymExpr.scalar(1) and g.coeff(1) == en.SymExpr.scalar(0)
        g = en.gamma_ratio_limit(3, 1)
        assert g.coeff(0) == en.SymExpr.scalar(-6)
        # -6 * (1 - eps*11/6): eps coefficient +11
        assert g.coeff(1) == en.SymExpr.scalar(11)
        g = en.gamma_ratio_limit(1, 1)
        assert g.coeff(0) == en.SymExpr.scalar(-1) and g.coeff(1) == en.SymExpr.scalar(1)

    def test_unsupported_order(self):
        with pytest.raises(en.UnsupportedOrderError):
            en.gamma_ratio_limit(2, 3)

    def test_numeric_agreement(self):
        with mp.workdps(30):
            e = mp.mpf("1e-6")
            for N in range(0, 11):
                s = en.gamma_ratio_limit(N, 1)
                exact = float(mp.gamma(e) / mp.gamma(e - N))
                assert abs(s.numeric(float(e)) / exact - 1) < 1e-5


class TestPolygamma:
    def test_reference_values(self):
        assert en.polygamma_int(0, 1) == en.SymExpr.of(en.GAMMA_E, -1)
        assert en.polygamma_int(1, 1) == en.SymExpr.of(en.ZETA2)
        assert en.polygamma_int(0, 4) == en.SymExpr({en.GAMMA_E: -1, en.ONE: Q(11, 6)})

    def test_higher_orders_rejected(self):
        with pytest.raises(en.UnsupportedOrderError):
            en.polygamma_int(2, 3)


class TestHyp2F1Unit:
    def test_reference_values(self):
        assert en.hypergeometric_2f1_unit(7, 0, Q(5, 2)) == 1
        assert en.hypergeometric_2f1_unit(1, 2, 3) == Q(1, 2)
        assert en.hypergeometric_2f1_unit(-1, 1, 2) == Q(3, 2)

    def test_pole(self):
        with pytest.raises(en.DomainError):
            en.hypergeometric_2f1_unit(1, 3, -1)


def f_num(n, k, a, b, e):
    return mp.hyp2f1(-n + a * e, k + b * e, -n + 1 + a * e, -1)


class TestHyperfExpansion:
    def test_case_k0_exact_example(self):
        # n=1, a=b=1: 2F1(-1+e, e; e; -1) = 2^{1-e} = 2(1 - e ln2 + ...)
        f = en.hypergeometric_f_expansion(1, 0, 1, 1)
        assert f.coeff(0) == en.SymExpr.scalar(2)
        assert f.coeff(1) == en.SymExpr.of(en.LN2, -2)

    def test_pole_coefficient_formula(self):
        n, k, a, b = 3, 2, Q(5), Q(1)
        s = en.hypergeometric_f_expansion(n, k, a, b)
        assert s.coeff(-1) == en.SymExpr.scalar(Q(-1) ** (n + 1) * Q(n) / a * en.binomial(k + n - 1, n))

    def test_degenerate_a(self):
        with pytest.raises(en.DomainError):
            en.hypergeometric_f_expansion(2, 1, 0, 1)

    @pytest.mark.parametrize("n,k,a,b", [(2, 0, 1, 1), (3, 0, 2, 1), (2, 0, 1, 3)])
    def test_case_k0_numeric(self, n, k, a, b):
        s = en.hypergeometric_f_expansion(n, k, Q(a), Q(b))
        with mp.workdps(30):
            e1, e2 = mp.mpf("1e-6"), mp.mpf("5e-7")
            v1, v2 = f_num(n, k, a, b, e1), f_num(n, k, a, b, e2)
            c0 = (e1 * v2 - e2 * v1) / (e1 - e2)
            c1 = (v1 - v2) / (e1 - e2)
        assert abs(float(c0) - s.coeff(0).numeric()) < 1e-5
        assert abs(float(c1) - s.coeff(1).numeric()) < 1e-3

    @pytest.mark.parametrize("n,k,a,b", [(1, 1, 1, 1), (2, 2, 1, 1), (3, 2, 2, 1), (4, 3, 3, 2), (2, 5, 1, 1)])
    def test_case_k_positive_numeric(self, n, k, a, b):
        s = en.hypergeometric_f_expansion(n, k, Q(a), Q(b))
        with mp.workdps(30):
            e1, e2 = mp.mpf("1e-6"), mp.mpf("5e-7")
            v1, v2 = f_num(n, k, a, b, e1), f_num(n, k, a, b, e2)
            pole = (v1 - v2) / (1 / e1 - 1 / e2)
            const = v1 - pole / e1
        assert abs(float(pole) - s.coeff(-1).numeric()) < 1e-4
        assert abs(float(const) - s.coeff(0).numeric()) < 1e-3

    def test_f32_continuation(self):
        # the 3F2 tail evaluates to alpha ln2 + beta; compare against mpmath
        # (mpmath needs dps >= 30 for its own acceleration to converge here)
        with mp.workdps(40):
            for (n, k) in [(1, 1), (2, 2), (1, 3), (4, 3), (16, 16)]:
                mine = en.f32_unit_negative(n, k).numeric()
                ref = float(mp.hyp3f2(1, 1, n + k + 1, 2, n + 2, -1))
                assert abs(mine - ref) < 1e-10


rational = st.fractions(min_value=-9, max_value=9).filter(lambda q: q.denominator <= 7)


def eps_series(draw_low):
    return st.builds(
        lambda low, cs: en.EpsSeries.from_coeffs(low, [en.SymExpr.scalar(c) for c in cs]),
        st.integers(min_value=draw_low, max_value=0),
        st.lists(rational, min_size=1, max_size=4),
    )


class TestEpsSeries:
    @given(eps_series(0), eps_series(-2), eps_series(-2))
    @settings(max_examples=100, deadline=None)
    def test_ring_laws(self, x, y, z):
        assert (x + y) + z == x + (y + z)
        assert x.mul(y + z) == x.mul(y) + x.mul(z)

    def test_pole_cap(self):
        with pytest.raises(en.DomainError):
            en.EpsSeries.from_coeffs(-3, [en.SymExpr.scalar(1)])

    def test_invert(self):
        y = en.EpsSeries.from_coeffs(0, [en.SymExpr.scalar(2), en.SymExpr.scalar(5)])
        assert y.mul(y.invert()).coeff(0) == en.SymExpr.scalar(1)
        assert y.mul(y.invert()).coeff(1) == en.SymExpr.scalar(0)

    def test_symexpr_basis_guard(self):
        ze = en.SymExpr.of(en.ZETA2)
        with pytest.raises(en.BasisError):
            ze * ze


class TestSymExpr:
    def test_product_rules(self):
        g = en.SymExpr.of(en.GAMMA_E)
        la = en.SymExpr.of(en.lam("mu"))
        assert g * g == en.SymExpr.of(en.GAMMA2)
        assert g * la == en.SymExpr.of(en.gamma_lam("mu"))
        assert la * la == en.SymExpr.of(en.lam2("mu"))

    def test_numeric(self):
        val = en.SymExpr({en.ONE: Q(1, 2), en.LN2: 2}).numeric()
        assert abs(val - (0.5 + 2 * math.log(2))) < 1e-15
