import math
from fractions import Fraction as Q

import pytest
import scipy.integrate as si

from coulombev import coulomb as cb
from coulombev.exactnum import DivergenceError, DomainError, SymExpr, lam

STATES = [cb.QuantumState(n, l) for n in range(1, 11) for l in range(n)]


def test_state_validation():
    with pytest.raises(DomainError):
        cb.QuantumState(0, 0)
    with pytest.raises(DomainError):
        cb.QuantumState(2, 2)
    assert cb.QuantumState(4, 2).nr == 1


def test_wavefunction_spec_examples():
    wf = cb.radial_wavefunction(cb.QuantumState(1, 0))
    assert wf.poly.coeffs == [Q(1)]
    assert wf.norm2 == Q(4)
    wf = cb.radial_wavefunction(cb.QuantumState(2, 0))
    assert wf.poly.coeffs == [Q(2), Q(-1)]
    wf = cb.radial_wavefunction(cb.QuantumState(3, 1))
    assert wf.poly.coeffs == [Q(4), Q(-1)]


def test_normalization_exact():
    for st in STATES:
        assert cb.expectation_oracle("1", st).sym.rational == 1


@pytest.mark.parametrize("tag", sorted(cb.CATALOG))
def test_catalog_closed_equals_oracle(tag):
    entry = cb.CATALOG[tag]
    for st in STATES:
        if st.l < entry.min_l:
            continue
        c = cb.expectation_closed(tag, st)
        o = cb.expectation_oracle(tag, st)
        assert c.sym == o.sym, (tag, st.n, st.l)
        assert (c.mr_pow, c.za_pow, c.pi_pow) == (o.mr_pow, o.za_pow, o.pi_pow)


def test_reference_values():
    assert cb.expectation_closed("1/r", cb.QuantumState(3, 1)).sym.rational == Q(1, 9)
    # 4/((l+1/2) n^3) - 3/n^4 at (2,1): 1/3 - 3/16 = 7/48
    assert cb.expectation_closed("p4", cb.QuantumState(2, 1)).sym.rational == Q(7, 48)
    assert cb.expectation_closed("r", cb.QuantumState(2, 1)).sym.rational == Q(5)
    assert cb.expectation_oracle("r2", cb.QuantumState(1, 0)).sym.rational == 3
    assert cb.expectation_oracle("dr", cb.QuantumState(1, 0)).sym.rational == -1


def test_log_entry_kappa_resolution():
    v = cb.expectation_closed(cb.OperatorSpec("ln/r", kappa="mu"), cb.QuantumState(1, 0))
    assert v.sym == SymExpr({lam("mu"): Q(1), ("one",): Q(1), ("gamma_e",): Q(-1)})


def test_guard_points_to_dimreg():
    with pytest.raises(cb.RequiresDimregError):
        cb.expectation_closed("1/r3", cb.QuantumState(2, 0))
    with pytest.raises(cb.CatalogError):
        cb.expectation_closed("nonsense", cb.QuantumState(1, 0))


def test_virial():
    for st in STATES:
        e = Q(-1, 2 * st.n**2)
        assert cb.expectation_oracle("p2", st).sym.rational == -2 * e
        assert cb.expectation_oracle("V", st).sym.rational == 2 * e


def test_p4_schroedinger_reduction():
    for st in STATES:
        e = Q(-1, 2 * st.n**2)
        rhs = 4 * (e * e + 2 * e * cb.power_moment(st, -1) + cb.power_moment(st, -2))
        assert cb.expectation_closed("p4", st).sym.rational == rhs


def test_rs_dr_relation():
    for st in [s for s in STATES if s.n <= 8]:
        for s in (1, 2, 3):
            lhs = cb.bilinear(st, cb.fn_of(st), cb.d_r(st, cb.fn_of(st)), s).sym.rational
            assert lhs == -Q(s + 2, 2) * cb.power_moment(st, s - 1)


def test_contact_value():
    for n in range(1, 11):
        assert cb.radial_wavefunction(cb.QuantumState(n, 0)).contact_limit_sq() == Q(4, n**3)


def test_recursion_and_feynman_hellmann():
    for st in [s for s in STATES if s.n <= 8]:
        for s in range(0, 5):
            assert cb.recursion_residual(s, st) == 0
        assert cb.feynman_hellmann_residual(st) == 0


def test_p6_naive_divergence():
    for n in (1, 2, 3):
        with pytest.raises(DivergenceError):
            cb.p6_naive_oracle(cb.QuantumState(n, 0))
    for (n, l) in [(2, 1), (3, 2), (5, 3)]:
        st = cb.QuantumState(n, l)
        assert cb.p6_naive_oracle(st).sym == cb.expectation_closed("p6", st).sym


def test_momentum_normalization():
    for n in range(1, 5):
        R = cb.momentum_radial(cb.QuantumState(n, 0))
        val, _ = si.quad(lambda p: p * p * R(p) ** 2 / (2 * math.pi) ** 3, 0, math.inf, limit=400)
        assert abs(val - 1) < 1e-10


def test_cx1_l_positive_branch():
    # (2,1) with c1 = c2 = 5/128 and equal masses m1 = m2 = 2 m_r
    coef, val = cb.cx1_energy_shift(cb.QuantumState(2, 1), Q(5, 128), Q(5, 128), 2, 2)
    assert coef == Q(-5, 256)
    assert val.sym.rational == Q(-5, 256) * Q(1, 24)
    assert (val.mr_pow, val.za_pow) == (1, 6)


def test_cx1_l0_branch_pole():
    coef, val = cb.cx1_energy_shift(cb.QuantumState(1, 0), Q(5, 128), Q(5, 128), 2, 2)
    # pole: coef * (-2/eps) relative to pi phibar^2 mubar^2eps prefactor
    assert val.pole() == SymExpr.scalar(coef * -2)
    assert cb.cx1_energy_shift(cb.QuantumState(1, 0), 0, 0, 2, 2)[1].series.is_zero()


def test_value_unit_arithmetic():
    a = cb.Value(SymExpr.scalar(1), 1, 2, 0)
    b = cb.Value(SymExpr.scalar(2), 1, 2, 0)
    assert (a + b).sym.rational == 3
    with pytest.raises(DomainError):
        a + cb.Value(SymExpr.scalar(1), 2, 2, 0)


def test_momentum_wavefunction_structure():
    R = cb.momentum_radial(cb.QuantumState(3, 1))
    assert isinstance(R, cb.MomentumRadialWF)
    assert R.state == cb.QuantumState(3, 1)
    assert R.gegenbauer.n == 1 and R.gegenbauer.lam == 2  # C_{n-l-1}^{l+1}
    assert R(0.4) != 0.0
