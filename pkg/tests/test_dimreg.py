import math
from fractions import Fraction as Q

import numpy as np
import pytest

from coulombev import coulomb as cb
from coulombev import dimreg as dr
from coulombev.exactnum import (
    DomainError,
    EpsSeries,
    GAMMA_E,
    LN_PI,
    ONE,
    SymExpr,
    ZETA2,
    diharmonic,
    factorial,
    harmonic as H,
    lam,
)

S = SymExpr.scalar
HALF = Q(1, 2)
B0 = -Q(3, 8)  # (l-1/2)(l+1/2)(l+3/2) at l = 0


class TestSeriesCoefficients:
    def test_first_coefficients(self):
        for l in (0, 1, 2):
            for eps in (Q(0), Q(1, 100), Q(-3, 100)):
                t = dr.series_coefficients(l, eps, 3)
                assert t.a[(1, 0)] == Q(1, 2)
                assert t.a[(1, 1)] == Q(-1) / (2 * (1 + l) * (1 + 2 * eps))

    def test_collapse_reproduces_laguerre_ratio(self):
        for n in range(1, 9):
            for l in range(n):
                t = dr.series_coefficients(l, Q(0), n - l + 2)
                for j in range(0, n - l + 2):
                    if j <= n - l - 1:
                        expect = (
                            Q(-1) ** j
                            * factorial(n - l - 1)
                            * factorial(2 * l + 1)
                            / (factorial(j) * factorial(n - l - j - 1) * factorial(2 * l + 1 + j))
                        )
                    else:
                        expect = Q(0)  # the series terminates
                    assert t.collapse(n, j) == expect

    def test_singular_eps(self):
        with pytest.raises(DomainError):
            dr.series_coefficients(0, Q(-1, 2), 2)


class TestShooting:
    def test_eps_zero_reproduces_integers(self):
        for (n, l) in [(1, 0), (2, 0), (2, 1), (3, 1)]:
            eig = dr.eigenvalue_shoot(cb.QuantumState(n, l), 0.0)
            assert abs(eig.nbar - n) < 1e-10

    def test_l_dependence(self):
        e31 = dr.eigenvalue_shoot(cb.QuantumState(3, 1), 0.01)
        e32 = dr.eigenvalue_shoot(cb.QuantumState(3, 2), 0.01)
        assert abs(e31.nbar - 3) > 1e-3
        assert abs(e31.nbar - e32.nbar) > 1e-4

    def test_eps_range_guard(self):
        with pytest.raises(DomainError):
            dr.eigenvalue_shoot(cb.QuantumState(1, 0), 0.2)

    def test_range_edge_branch_selection(self):
        # at eps = 0.05 the (3,2) eigenvalue drops below n - 1/2 while the
        # (4,2) one enters the primary window; node counting must pick the
        # right branch via the expansion-centered bracket
        eig = dr.eigenvalue_shoot(cb.QuantumState(3, 2), 0.05)
        est = dr.nbar_expansion(cb.QuantumState(3, 2)).numeric(0.05)
        assert abs(eig.nbar - est) < 0.05
        eig4 = dr.eigenvalue_shoot(cb.QuantumState(4, 2), 0.05)
        assert eig4.nbar > eig.nbar + 0.5

    def test_nbar_expansion_against_shooting(self):
        st = cb.QuantumState(2, 1)
        slope = float(dr.nbar_expansion(st).coeff(1).numeric())
        e1 = dr.eigenvalue_shoot(st, 1e-3).nbar
        e2 = dr.eigenvalue_shoot(st, 5e-4).nbar
        richardson = 2 * (e2 - 2) / 5e-4 - (e1 - 2) / 1e-3
        assert abs(richardson - slope) < 2e-3 * abs(slope)


class TestEnergyExpansion:
    def test_reference_values(self):
        s = dr.energy_expansion(cb.QuantumState(1, 0))
        assert s.coeff(0) == S(Q(-1, 2))
        assert s.coeff(1) == Q(-1, 2) * SymExpr({lam("mu"): Q(4), ONE: Q(6)})
        s = dr.energy_expansion(cb.QuantumState(2, 1))
        assert s.coeff(1) == Q(-1, 8) * SymExpr({lam("mu"): Q(4), ONE: Q(22, 3) + 1})

    def test_order_of_accuracy(self):
        for (n, l) in [(1, 0), (2, 0), (2, 1), (3, 1)]:
            st = cb.QuantumState(n, l)
            en = 1.0 / (2.0 * n * n)
            d1 = abs(dr.eigenvalue_shoot(st, 1e-3).ebar - dr.energy_series_numeric(st, 1e-3)) / en
            d2 = abs(dr.eigenvalue_shoot(st, 5e-4).ebar - dr.energy_series_numeric(st, 5e-4)) / en
            assert d1 / d2 >= 3.6


class TestContactExpansion:
    def test_reference_value_1s(self):
        s = dr.contact_expansion(cb.QuantumState(1, 0))
        assert s.coeff(0) == S(1)
        expect = SymExpr(
            {lam("mu"): Q(3), ONE: Q(4), LN_PI: HALF, GAMMA_E: -HALF, ZETA2: Q(-2)}
        )
        assert s.coeff(1) == expect

    def test_numeric_cross_check(self):
        st = cb.QuantumState(1, 0)
        devs = []
        for eps in (1e-3, 5e-4):
            eig = dr.eigenvalue_shoot(st, eps)
            num = math.sqrt(dr.phibar2_numeric(eig))
            devs.append(abs(num / dr.contact_numeric(st, eps) - 1))
        assert devs[0] / devs[1] > 3.0  # O(eps^2) residual


class TestDivergentTables:
    @pytest.mark.parametrize("n", range(1, 11))
    def test_V3(self, n):
        v = dr.divergent_expectation("V3", n, 0)
        assert v.pole() == S(-1)
        assert v.finite() == SymExpr({lam("mu"): Q(-4), ONE: 4 * H(n) - Q(2, n) - 4})
        assert (v.mr_pow, v.za_pow) == (0, 3)

    @pytest.mark.parametrize("n", range(1, 11))
    def test_VVprime(self, n):
        v = dr.divergent_expectation("V.V'", n, 0)
        assert v.pole() == S(-2)
        assert v.finite() == SymExpr({lam("mu"): Q(-4), ONE: 4 * H(n) - Q(2, n) - 2})

    @pytest.mark.parametrize("n", range(1, 11))
    def test_Vprime_sq(self, n):
        v = dr.divergent_expectation("(V')2", n, 0)
        assert v.pole() == S(-2)
        assert v.finite() == SymExpr(
            {lam("mu"): Q(-8), ONE: 8 * H(n) + Q(4, 3 * n * n) - Q(4, n) - Q(16, 3)}
        )
        assert (v.mr_pow, v.za_pow) == (1, 3)

    @pytest.mark.parametrize("n", range(1, 11))
    def test_V2p2(self, n):
        v = dr.divergent_expectation("V2.p2", n, 0)
        assert v.pole() == S(2)
        assert v.finite() == SymExpr({lam("mu"): Q(8), ONE: -8 * H(n) + Q(4, n) - Q(2, n * n) + 8})

    @pytest.mark.parametrize("n", range(1, 11))
    def test_p2Vp2(self, n):
        v = dr.divergent_expectation("p2.V.p2", n, 0)
        assert v.pole() == S(-4)
        assert v.finite() == SymExpr(
            {lam("mu"): Q(-16), ONE: 16 * H(n) - Q(8, n) - Q(1, n**3) + Q(8, n * n) - 16}
        )

    @pytest.mark.parametrize("n", range(1, 11))
    def test_finite_composites(self, n):
        rows = {
            "p6": Q(5, n**6) - Q(16, n**5) + (8 * n * n + 1) / (B0 * n**5) + Q(32, n**3),
            "p4.V": (-4 * n * n - 2) / (B0 * n**5) - Q(1, n**6) - Q(16, n**3),
            "V.p2.V": (8 * n * n + 1) / (4 * B0 * n**5) + Q(8, n**3),
            "r4e/r2.dr2": (-2 * n * n - 1) / (4 * B0 * n**5) - Q(2, n**3),
            "r4e/r.dr3": (3 * n * n + Q(3, 2)) / (4 * B0 * n**5) + Q(4, n**3),
            "r4e.p2.V": Q(1, n**4),
            "r4e.p4": Q(-3, n**4),
            "p.r4e.p.V": Q(1, n**4) - Q(4, n**3),
            "r4e.p.V.p": Q(1, n**4) - Q(2, n**3),
        }
        for tag, table in rows.items():
            v = dr.divergent_expectation(tag, n, 0)
            assert v.pole() == S(0), tag
            assert v.finite() == S(table * n**3), tag

    @pytest.mark.parametrize("n", range(1, 9))
    def test_beta_composites(self, n):
        # the entries the table writes through (1/beta^2)<V3>
        prim = dr._divergent_primitive
        checks = [
            ("r4e/r2.p2", prim(n, -3, 3, beta_pow=1).scale(2).shift_dims(mr=1)
             + dr.value_as_brace(cb.Value(S(Q(-2, n**5)), 4, 4), n, 1, 1)),
            ("r4e/r.dr.V", prim(n, -3, 3, beta_pow=1)),
            ("r4e.dr2.V", prim(n, -3, 3, beta_pow=1).scale(-2)
             + dr.value_as_brace(cb.Value(S(Q(-1, n**4) + Q(2, n**3)), 3, 4), n, 0, 1)),
            ("r4e.dr2.p2", prim(n, -3, 3, beta_pow=1).scale(4).shift_dims(mr=1)
             + dr.value_as_brace(cb.Value(S(Q(-2, n**5) + Q(3, n**4) - Q(4, n**3)), 4, 4), n, 1, 1)),
            ("r4e/r.dr.p2", prim(n, -3, 3, beta_pow=1).scale(-2).shift_dims(mr=1)
             + dr.value_as_brace(cb.Value(S(Q(1, n**5)), 4, 4), n, 1, 1)),
        ]
        for tag, rhs in checks:
            lhs = dr.divergent_expectation(tag, n, 0)
            assert (lhs - rhs).series.is_zero(), tag

    def test_l0_composite_pvpv(self):
        for n in range(1, 9):
            lhs = dr.divergent_expectation("p.V.p.V", n, 0)
            fin = (4 * n * n + 2) / (4 * B0 * n**5) + Q(4, n**3)
            rhs = dr.divergent_expectation("V3", n, 0).scale(-1).shift_dims(mr=1) + dr.value_as_brace(
                cb.Value(S(fin), 4, 6), n, 1, 3
            )
            assert (lhs - rhs).series.is_zero()

    def test_unknown_tag(self):
        with pytest.raises(dr.DivergentCatalogError):
            dr.divergent_expectation("bogus", 1, 0)


class TestLPositiveBranch:
    @pytest.mark.parametrize("n", range(2, 11))
    def test_tables(self, n):
        for l in range(1, n):
            L = Q(l * (l + 1))
            Bl = (l - HALF) * (l + HALF) * (l + Q(3, 2))
            assert dr.divergent_expectation("V3", n, l).sym == S(-1 / (L * (l + HALF) * n**3))
            assert dr.divergent_expectation("(V')2", n, l).sym == S(
                (3 * n * n - L) / (2 * L * (l + HALF) * (l - HALF) * (l + Q(3, 2)) * n**5)
            )
            assert dr.divergent_expectation("V2.p2", n, l).sym == S((2 * n * n - L) / (L * (l + HALF) * n**5))
            assert dr.divergent_expectation("p2.V.p2", n, l).sym == S(
                -Q(1, n**6) + 4 / ((l + HALF) * n**5) - 4 / (L * (l + HALF) * n**3)
            )
            assert dr.divergent_expectation("V.p2.V", n, l).sym == S((8 * n * n + 1 - 4 * L) / (4 * Bl * n**5))
            assert dr.divergent_expectation("V'.dr", n, l).sym == SymExpr()


class TestIdentityNetwork:
    @pytest.mark.parametrize("n", range(1, 9))
    def test_l0(self, n):
        for name, res in dr.identity_residuals(n, 0):
            assert res.is_zero(), name

    def test_l_positive(self):
        for n in range(2, 9):
            for l in range(1, n):
                for name, res in dr.identity_residuals(n, l):
                    assert not res, (name, n, l)


class TestPoleCrossCheck:
    @pytest.mark.parametrize("tag,numeric", [("V3", dr.v3_brace_numeric), ("(V')2", dr.vp2_brace_numeric)])
    def test_pole_fit(self, tag, numeric):
        for n in (1, 2):
            st = cb.QuantumState(n, 0)
            eps_list = (0.02, 0.01, 0.005)
            vals = [numeric(dr.eigenvalue_shoot(st, e)) for e in eps_list]
            A = np.array([[1.0 / e, 1.0] for e in eps_list])
            coef, *_ = np.linalg.lstsq(A, np.array(vals), rcond=None)
            pole = float(dr.divergent_expectation(tag, n, 0).pole().numeric())
            assert abs(coef[0] / pole - 1) < 0.01


class TestContractTypes:
    def test_eps_param(self):
        p = dr.EpsParam(0.01)
        assert abs(p.D - 2.98) < 1e-15
        with pytest.raises(DomainError):
            dr.EpsParam(0.3)
        t = dr.series_coefficients(0, dr.EpsParam(Q(1, 100)), 2)
        assert t.a[(1, 0)] == Q(1, 2)

    def test_split_wavefunction(self):
        for n in (1, 2, 3, 5):
            for p in (1, 2):
                split = dr.split_wavefunction(n, p)
                assert split.p == p
                # tail starts at rho^p and head + tail = L_{n0} at eps = 0
                l0 = dr._l0_poly(n)
                for j, c in enumerate(split.tail.coeffs):
                    if j < p:
                        assert c == 0
                head0 = {}
                for (j, k, cser) in split.head:
                    head0[j] = head0.get(j, Q(0)) + cser.coeff(0).rational * n**k
                for j in range(l0.degree + 1):
                    assert head0.get(j, Q(0)) + split.tail.coeff(j) == l0.coeff(j)
        # the (j,k) = (1,1) head coefficient is -1/(2(1+2eps)) = -1/2 + eps + ...
        split = dr.split_wavefunction(2, 2)
        coeffs = {(j, k): c for (j, k, c) in split.head}
        assert coeffs[(1, 1)].coeff(0).rational == Q(-1, 2)
        assert coeffs[(1, 1)].coeff(1).rational == Q(1)
