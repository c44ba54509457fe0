"""D = 3 - 2*eps machinery: the generalized power-series solution of the
radial equation, numerical eigenvalue shooting, eps-expansions of the energy
and of the wave function at contact, and analytic pole extraction for
divergent S-state expectation values via the head/tail split of the series.

Divergent l = 0 values are returned as Laurent braces relative to the
standing prefactor

    pi * phibar_n^2 * mubar^{2 eps} * m_r^mr_pow * (Zalpha)^za_pow ,

with pi phibar^2 -> (m_r Zalpha)^3/n^3 as eps -> 0.  For l > 0 the exact
finite Value is returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from .exactnum import (
    DivergenceError,
    DomainError,
    EpsSeries,
    GAMMA_E,
    LN2,
    LN_PI,
    LNQN,
    ONE,
    Q,
    SYM_ONE,
    SYM_ZERO,
    SymExpr,
    ZETA2,
    diharmonic,
    exp_series,
    factorial,
    gamma_series,
    harmonic,
    lam,
)
from .laguerre import Poly, assoc_laguerre
from .coulomb import (
    Fn,
    QuantumState,
    Value,
    bilinear,
    d_r,
    expectation_closed,
    fn_of,
)

EULER_GAMMA = 0.5772156649015328606
HALF = Q(1, 2)


class ShootingError(RuntimeError):
    pass


class DivergentCatalogError(KeyError):
    pass


@dataclass(frozen=True)
class EpsParam:
    """The regulator: numeric eps (float or Fraction) with D = 3 - 2 eps.

    Numeric values are restricted to |eps| < 1/4 so the l-dependent exponents
    of the generalized series stay in the convergent range.
    """

    eps: object

    def __post_init__(self):
        if abs(self.eps) >= Q(1, 4):
            raise DomainError("numeric eps must satisfy |eps| < 1/4")

    @property
    def D(self):
        return 3 - 2 * self.eps


def _unwrap_eps(eps):
    return eps.eps if isinstance(eps, EpsParam) else eps


# ---------------------------------------------------------------------------
# generalized series coefficients a_{jk}
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoeffTable:
    """a_{jk} of the generalized series sum a_{jk} nbar^k rho^{j+2 eps k}."""

    l: int
    eps: object  # float or Fraction
    jmax: int
    a: Dict[Tuple[int, int], object]

    def collapse(self, n: int, j: int):
        """A_j = sum_k a_{jk} n^k; at eps = 0 this is the Laguerre coefficient."""
        return sum(self.a[(j, k)] * n**k for k in range(j + 1))


def series_coefficients(l: int, eps, j_max: int) -> CoeffTable:
    """Fill the a_{jk} recursion at numeric eps (float, Fraction or EpsParam)."""
    eps = _unwrap_eps(eps)
    if j_max < 1:
        raise DomainError("j_max must be >= 1")
    a: Dict[Tuple[int, int], object] = {(0, 0): eps * 0 + 1}
    for j in range(1, j_max + 1):
        for k in range(0, j + 1):
            prev = a.get((j - 1, k), 0)
            prev_k1 = a.get((j - 1, k - 1), 0)
            den = (j + 2 * eps * k) * (j + 2 * l + 1 + 2 * eps * (k - 1))
            if den == 0:
                raise DomainError("singular eps: recursion denominator vanishes at j=%d k=%d" % (j, k))
            a[(j, k)] = (prev * (j + l + eps * (2 * k - 1)) - prev_k1) / den
    return CoeffTable(l, eps, j_max, a)


def _eps_lin(c0, c1, order: int = 2) -> EpsSeries:
    return EpsSeries.from_coeffs(0, [SymExpr.scalar(Q(c0)), SymExpr.scalar(Q(c1))]).truncate(order)


def _eps_poly(*coeffs) -> EpsSeries:
    # exact polynomial in eps; pad the truncation so products keep full order
    cs = [SymExpr.scalar(Q(x)) for x in coeffs]
    while len(cs) < 3:
        cs.append(SYM_ZERO)
    return EpsSeries.from_coeffs(0, cs)


def series_coefficients_eps(l: int, j_max: int, order: int = 2) -> Dict[Tuple[int, int], EpsSeries]:
    """a_{jk} as exact rational eps-series (the analytic split uses these)."""
    one = EpsSeries.constant(Q(1), order)
    zero = EpsSeries.zero(order)
    a: Dict[Tuple[int, int], EpsSeries] = {(0, 0): one}
    for j in range(1, j_max + 1):
        for k in range(0, j + 1):
            prev = a.get((j - 1, k), zero)
            prev_k1 = a.get((j - 1, k - 1), zero)
            num = prev.mul(_eps_lin(j + l, 2 * k - 1, order), order_cap=order) - prev_k1
            den = _eps_lin(j, 2 * k, order).mul(_eps_lin(j + 2 * l + 1, 2 * (k - 1), order), order_cap=order)
            a[(j, k)] = num.mul(den.invert(order_cap=order), order_cap=order)
    return a


def eval_series(table: CoeffTable, nbar: float, rho: float) -> Tuple[float, float]:
    """(L, dL/drho) of the generalized series at numeric eps and nbar."""
    eps = float(table.eps)
    val = 0.0
    der = 0.0
    for (j, k), c in table.a.items():
        c = float(c)
        power = j + 2 * eps * k
        term = c * nbar**k * rho**power
        val += term
        if power:
            der += c * nbar**k * power * rho ** (power - 1)
    return val, der


# ---------------------------------------------------------------------------
# eigenvalue shooting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DimRegEigen:
    state: QuantumState
    eps: float
    mu: float
    nbar: float
    gammabar: float
    ebar: float
    sol: object
    rho0: float
    rhomax: float
    table: CoeffTable


def _mubar(mu: float) -> float:
    return mu * math.exp(EULER_GAMMA / 2.0) / (2.0 * math.sqrt(math.pi))


def gammabar_from_nbar(nbar: float, eps: float, mu: float) -> float:
    """Invert nbar = (1/gb) Gamma(1/2-eps) pi^(eps-1/2) (mubar/(2 gb))^(2 eps)."""
    w = math.gamma(0.5 - eps) * math.pi ** (eps - 0.5) * _mubar(mu) ** (2 * eps)
    return (w * 2.0 ** (-2.0 * eps) / nbar) ** (1.0 / (1.0 + 2.0 * eps))


def _integrate(l, eps, nbar, rho0, rhomax, table, dense=False):
    y0 = eval_series(table, nbar, rho0)

    def rhs(rho, y):
        L, dL = y
        d2 = -(2.0 * (l + 1 - eps) / rho - 1.0) * dL + ((l + 1 - eps) - nbar * rho ** (2 * eps)) / rho * L
        return (dL, d2)

    sol = solve_ivp(rhs, (rho0, rhomax), y0, method="DOP853", rtol=1e-12, atol=1e-250, dense_output=dense)
    if not sol.success:
        raise ShootingError("ODE integration failed: %s" % sol.message)
    return sol


def _count_nodes(sol, rho0: float, rho_hi: float) -> int:
    xs = np.linspace(rho0, rho_hi, 1600)
    vals = sol.sol(xs)[0]
    # ignore crossings inside the noise floor: after strong decay the
    # leftover e^{+rho} contamination of the bisected solution flips sign at
    # amplitudes ~1e-15 of the maximum, which are not nodes
    floor = 1e-9 * float(np.max(np.abs(vals)))
    nodes, last = 0, 0.0
    for v in vals:
        if abs(v) < floor:
            continue
        s = math.copysign(1.0, v)
        if last and s != last:
            nodes += 1
        last = s
    return nodes


def eigenvalue_shoot(state: QuantumState, eps: float, mu: float = 1.0) -> DimRegEigen:
    """Find nbar by bisection on the tail sign of L, verifying the node count."""
    eps = float(_unwrap_eps(eps))
    if abs(eps) > 0.05:
        raise DomainError("eps outside the validated shooting range |eps| <= 0.05")
    n, l = state.n, state.l
    rho0, rhomax = 1e-3, 20.0 + 10.0 * n
    table = series_coefficients(l, eps, 12)

    def tail_sign(nbar):
        sol = _integrate(l, eps, nbar, rho0, rhomax, table)
        return math.copysign(1.0, sol.y[0][-1])

    # candidate brackets: [n-1/2, n+1/2] first, then one centered on the
    # expansion estimate (near the range edge the O(eps) shift can exceed 1/2
    # and the primary window may hold a neighboring eigenvalue; the node count
    # selects the branch)
    centers = [float(n)]
    est = float(nbar_expansion(state).numeric(eps))
    if abs(est - n) > 0.1:
        centers.append(est)
    bracketed = False
    for center in centers:
        lo, hi = center - 0.5, center + 0.5
        s_lo, s_hi = tail_sign(lo), tail_sign(hi)
        if s_lo == s_hi:
            continue
        bracketed = True
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if tail_sign(mid) == s_lo:
                lo = mid
            else:
                hi = mid
        nbar = 0.5 * (lo + hi)
        sol = _integrate(l, eps, nbar, rho0, rhomax, table, dense=True)
        nodes = _count_nodes(sol, rho0, min(4.0 * n + 2.0 * l + 4.0, rhomax))
        if nodes == state.nr:
            gb = gammabar_from_nbar(nbar, eps, mu)
            return DimRegEigen(state, eps, mu, nbar, gb, -0.5 * gb * gb, sol, rho0, rhomax, table)
        last_nodes = nodes
    if bracketed:
        raise ShootingError("wrong eigenvalue branch: %d nodes, expected %d" % (last_nodes, state.nr))
    raise ShootingError("no sign change of the tail in [n-1/2, n+1/2]; bracket error")


def wavefunction_moment(eig: DimRegEigen, power: float, quad_dps: int = 20) -> float:
    """int_0^inf rho^power e^{-rho} L(rho)^2 drho from the shot solution.

    The L(0)^2 = 1 part is integrated analytically (Gamma function); for
    power near -1 the quadrature alone cannot resolve the mass hiding at
    exponentially small rho.
    """
    import mpmath as mp

    table, nbar = eig.table, eig.nbar

    def l_sq_minus_1(rho):
        rho = float(rho)
        if rho <= eig.rho0:
            L = eval_series(table, nbar, rho)[0]
        elif rho >= eig.rhomax:
            return -1.0
        else:
            L = float(eig.sol.sol(rho)[0])
        return L * L - 1.0

    def f(rho):
        return mp.mpf(rho) ** power * mp.e ** (-rho) * l_sq_minus_1(rho)

    with mp.workdps(quad_dps):
        analytic = mp.gamma(power + 1.0)
        rest = mp.quad(f, [0, 1.0, 10.0, eig.rhomax])
        return float(analytic + rest)


def phibar2_numeric(eig: DimRegEigen) -> float:
    """phibar^2 from the normalization of the shot S-state wave function."""
    if eig.state.l != 0:
        raise DomainError("contact normalization implemented for S states")
    D = 3.0 - 2.0 * eig.eps
    omega = 2.0 * math.pi ** (D / 2.0) / math.gamma(D / 2.0)
    return (2.0 * eig.gammabar) ** D / (omega * wavefunction_moment(eig, D - 1.0))


def v3_brace_numeric(eig: DimRegEigen) -> float:
    """Numeric <Vbar^3>/(pi phibar^2 (Za)^3 mubar^{2 eps}) from the shot wave function."""
    eps = eig.eps
    D = 3.0 - 2.0 * eps
    omega = 2.0 * math.pi ** (D / 2.0) / math.gamma(D / 2.0)
    beta3 = (math.gamma(0.5 - eps) * _mubar(eig.mu) ** (2 * eps) * math.pi ** (eps - 0.5)) ** 3
    i3 = wavefunction_moment(eig, -1.0 + 4.0 * eps, quad_dps=25)
    return -omega * beta3 * (2.0 * eig.gammabar) ** (-4.0 * eps) * i3 / (math.pi * _mubar(eig.mu) ** (2 * eps))


def vp2_brace_numeric(eig: DimRegEigen) -> float:
    """Numeric <(Vbar')^2>/(pi phibar^2 m_r (Za)^3 mubar^{2 eps}).

    The rho integral carries rho^{-2+2 eps}, so the three-term head of the
    generalized series is integrated analytically and only the regular
    remainder L^2 - Lhat^2 goes to quadrature.
    """
    import mpmath as mp

    eps, nbar = eig.eps, eig.nbar
    table = eig.table

    def lhat(rho):
        return 1.0 + 0.5 * rho - nbar * rho ** (1.0 + 2.0 * eps) / (2.0 * (1.0 + 2.0 * eps))

    def l_val(rho):
        rho = float(rho)
        if rho <= eig.rho0:
            return eval_series(table, nbar, rho)[0]
        if rho >= eig.rhomax:
            return 0.0
        return float(eig.sol.sol(rho)[0])

    def f(rho):
        rho_f = float(rho)
        diff = l_val(rho_f) ** 2 - lhat(rho_f) ** 2
        return mp.mpf(rho) ** (-2.0 + 2.0 * eps) * mp.e ** (-rho) * diff

    with mp.workdps(25):
        rest = mp.quad(f, [0, 1.0, 10.0, eig.rhomax])
        # int rho^{-2+2eps} e^-rho Lhat^2: powers 0,1,1+2e,2,2+2e,2+4e
        c = 1.0 / (1.0 + 2.0 * eps)
        head_terms = (
            (0.0, 1.0),
            (1.0, 1.0),
            (1.0 + 2 * eps, -nbar * c),
            (2.0, 0.25),
            (2.0 + 2 * eps, -0.5 * nbar * c),
            (2.0 + 4 * eps, 0.25 * nbar * nbar * c * c),
        )
        analytic = mp.fsum(w * mp.gamma(-1.0 + 2.0 * eps + p) for p, w in head_terms)
        i2 = float(analytic + rest)
    D = 3.0 - 2.0 * eps
    omega = 2.0 * math.pi ** (D / 2.0) / math.gamma(D / 2.0)
    beta2 = (math.gamma(0.5 - eps) * _mubar(eig.mu) ** (2 * eps) * math.pi ** (eps - 0.5)) ** 2
    pref = omega * beta2 * (1.0 - 2.0 * eps) ** 2 * (2.0 * eig.gammabar) ** (1.0 - 2.0 * eps)
    return pref * i2 / (math.pi * _mubar(eig.mu) ** (2 * eps))


# ---------------------------------------------------------------------------
# eps-expansions of energy and contact value
# ---------------------------------------------------------------------------


def nbar_expansion(state: QuantumState) -> EpsSeries:
    """nbar = n { 1 + 2 eps (gamma_E - H_{n+l} - 1/(2n)) + O(eps^2) }."""
    n, l = state.n, state.l
    corr = SymExpr({GAMMA_E: Q(2), ONE: -2 * harmonic(n + l) - Q(1, n)})
    return EpsSeries.from_coeffs(0, [SymExpr.scalar(Q(n)), n * corr])


def energy_expansion(state: QuantumState) -> EpsSeries:
    """Ebar/(m_r (Zalpha)^2) = -(1/2n^2){1 + eps [4 Lambda_mu + 4 H_{n+l} + 2/n]}."""
    n, l = state.n, state.l
    en = Q(-1, 2 * n * n)
    bracket = SymExpr({lam("mu"): Q(4), ONE: 4 * harmonic(n + l) + Q(2, n)})
    return EpsSeries.from_coeffs(0, [SymExpr.scalar(en), en * bracket])


def energy_series_numeric(state: QuantumState, eps: float, mu: float = 1.0) -> float:
    tags = {lam("mu"): math.log(mu * state.n / 2.0)}
    return energy_expansion(state).numeric(eps, tags)


def contact_expansion(state: QuantumState) -> EpsSeries:
    """phibar_{nl}/(gamma_n^D/pi)^(1/2) = 1 + eps [ ... ] + O(eps^2)."""
    n, l = state.n, state.l
    nr = state.nr
    hnl = harmonic(n + l)
    bracket = SymExpr(
        {
            lam("mu"): Q(3),
            ONE: 2 * n * diharmonic("+", n + l, -nr)
            - n * (hnl * hnl - harmonic(n + l, 2))
            + n * (harmonic(nr) ** 2 + harmonic(nr, 2))
            + 2 * hnl
            + 2 * harmonic(2 * l + 1)
            - 2
            + Q(2, n),
            LN_PI: HALF,
            GAMMA_E: -HALF,
            ZETA2: -2 * n,
        }
    )
    return EpsSeries.from_coeffs(0, [SYM_ONE, bracket])


def contact_numeric(state: QuantumState, eps: float, mu: float = 1.0) -> float:
    """phibar from the O(eps) expansion, with gamma_n^D kept unexpanded."""
    tags = {lam("mu"): math.log(mu * state.n / 2.0)}
    series = contact_expansion(state)
    gamma_n = 1.0 / state.n
    d = 3.0 - 2.0 * eps
    return math.sqrt(gamma_n**d / math.pi) * (1.0 + eps * series.coeff(1).numeric(tags))


# ---------------------------------------------------------------------------
# divergent expectation values: head/tail split
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DivergentValue:
    """brace multiplying pi phibar^2 mubar^{2 eps} m_r^mr_pow (Zalpha)^za_pow."""

    series: EpsSeries
    mr_pow: int
    za_pow: int

    def __add__(self, other: "DivergentValue") -> "DivergentValue":
        if (self.mr_pow, self.za_pow) != (other.mr_pow, other.za_pow):
            raise DomainError(
                "adding braces with mismatched prefactors: (%d,%d) vs (%d,%d)"
                % (self.mr_pow, self.za_pow, other.mr_pow, other.za_pow)
            )
        return DivergentValue(self.series + other.series, self.mr_pow, self.za_pow)

    def __sub__(self, other: "DivergentValue") -> "DivergentValue":
        return self + other.scale(-1)

    def scale(self, c) -> "DivergentValue":
        return DivergentValue(self.series * c, self.mr_pow, self.za_pow)

    def mul_series(self, series: EpsSeries, mr=0, za=0) -> "DivergentValue":
        return DivergentValue(self.series.mul(series, order_cap=0), self.mr_pow + mr, self.za_pow + za)

    def shift_dims(self, mr=0, za=0) -> "DivergentValue":
        return DivergentValue(self.series, self.mr_pow + mr, self.za_pow + za)

    def pole(self) -> SymExpr:
        return self.series.coeff(-1)

    def finite(self) -> SymExpr:
        return self.series.coeff(0)

    @property
    def total_mr_pow(self) -> int:
        return self.mr_pow + 3  # phibar^2 carries (m_r Zalpha)^3 / pi

    @property
    def total_za_pow(self) -> int:
        return self.za_pow + 3

    def __repr__(self):
        return "pi.phibar2.mubar^2eps m_r^%d Za^%d * [%r]" % (self.mr_pow, self.za_pow, self.series)


def value_as_brace(v: Value, n: int, mr_pow: int, za_pow: int) -> DivergentValue:
    """Fold a finite 3D Value into the brace convention (valid through eps^0)."""
    if v.pi_pow != 0:
        raise DomainError("cannot fold a value with explicit pi powers")
    if (v.mr_pow, v.za_pow) != (mr_pow + 3, za_pow + 3):
        raise DomainError("dimension mismatch folding Value into brace form")
    return DivergentValue(EpsSeries.constant(v.sym * Q(n**3), 0), mr_pow, za_pow)


def _head_terms(p: int, a_eps: Dict[Tuple[int, int], EpsSeries], derivs: int):
    """Terms (j, k, coeff-series) of D_rho^derivs [ e^{-rho/2} Lhat ]."""
    terms = [(j, k, c) for (j, k), c in a_eps.items() if j < p]
    for _ in range(derivs):
        new = []
        for (j, k, c) in terms:
            new.append((j - 1, k, c.mul(_eps_lin(j, 2 * k), order_cap=2)))
            new.append((j, k, c * Q(-1, 2)))
        terms = new
    return [(j, k, c) for (j, k, c) in terms if not c.is_zero()]


def _l0_poly(n: int) -> Poly:
    return assoc_laguerre(n - 1, 1) * (1 / Q(n))


def _fn_slice(poly: Poly, lo: int = 0, hi: Optional[int] = None) -> Fn:
    return Fn({j: c for j, c in enumerate(poly.coeffs) if j >= lo and (hi is None or j < hi)})


def _chain(f: Fn, derivs: int) -> Fn:
    for _ in range(derivs):
        f = f.drho()
    return f


@dataclass(frozen=True)
class SplitWF:
    """Head/tail split of the generalized S-state series L_{n0}.

    `head` holds the low-order generalized terms (j, k, eps-series coefficient
    of nbar^k rho^{j + 2 eps k}) for j < p; `tail` is the remainder at eps = 0,
    i.e. the p-subtracted normalized Laguerre polynomial; L = head + tail
    identically in the eps -> 0 limit, with the tail starting at rho^p.
    """

    n: int
    p: int
    head: tuple  # ((j, k, EpsSeries), ...)
    tail: Poly


def split_wavefunction(n: int, p: int) -> SplitWF:
    """Split L_{n0} into its eps-sensitive head (j < p) and regular tail."""
    a_eps = series_coefficients_eps(0, max(p - 1, 1), order=2)
    head = tuple((j, k, c) for (j, k), c in sorted(a_eps.items()) if j < p)
    l0 = _l0_poly(n)
    # the eps = 0 collapse of the head must be the Taylor head of L_{n0}
    collapsed: Dict[int, Fraction] = {}
    for (j, k, cser) in head:
        collapsed[j] = collapsed.get(j, Q(0)) + cser.coeff(0).rational * n**k
    for j, cval in collapsed.items():
        if cval != l0.coeff(j):
            raise AssertionError("head collapse mismatch at rho^%d" % j)
    return SplitWF(n, p, head, l0.drop_low(p))


def _divergent_primitive(
    n: int,
    sigma: int,
    c: int,
    a: int = 0,
    b: int = 0,
    beta_pow: int = 0,
    coef: Optional[EpsSeries] = None,
) -> DivergentValue:
    """Brace of coef(eps) beta^beta_pow int dr r^{D-1+sigma+2c eps} (d^a Rbar)(d^b Rbar).

    This is the head/tail split: the head-squared part integrates to gamma
    functions expanded in eps; the tail cross terms are finite at eps = 0 and
    reduce to subtracted-Laguerre moments.
    """
    m = beta_pow
    if coef is None:
        coef = EpsSeries.constant(Q(1), 1)
    sig_rho = 2 + sigma
    p = max(0, max(a, b) - sig_rho)
    A = a + b - 3 - sigma

    # --- analytic head x head ---
    split = split_wavefunction(n, p)
    a_eps = {(j, k): cser for (j, k, cser) in split.head}
    fa_terms = _head_terms(p, a_eps, a)
    fb_terms = _head_terms(p, a_eps, b)
    nu1 = SymExpr({GAMMA_E: Q(2), ONE: -2 * harmonic(n) - Q(1, n)})

    def nbar_pow(k: int) -> EpsSeries:
        return EpsSeries.from_coeffs(0, [SymExpr.scalar(Q(n**k)), (n**k) * (k * nu1)])

    int_total = EpsSeries.zero(0)
    for (j1, k1, c1) in fa_terms:
        for (j2, k2, c2) in fb_terms:
            marg = sig_rho + 1 + j1 + j2
            ceps = 2 * (c - 1 + k1 + k2)
            if ceps == 0:
                if marg <= 0:
                    raise DivergenceError("unregulated divergent head term rho^%d" % (marg - 1))
                gam = EpsSeries.constant(factorial(marg - 1), 1)
            else:
                gam = gamma_series(marg, Q(ceps), order=1)
            int_total = int_total + c1.mul(c2, order_cap=1).mul(nbar_pow(k1 + k2), order_cap=1).mul(
                gam, order_cap=0
            )

    # --- tail cross terms at eps = 0 ---
    l0 = _l0_poly(n)
    head0 = _fn_slice(l0, hi=p)
    tail0 = _fn_slice(split.tail)
    full0 = _fn_slice(l0)

    combined: Dict[int, Fraction] = {}
    for fL, fR in ((_chain(head0, a), _chain(tail0, b)), (_chain(tail0, a), _chain(full0, b))):
        for j1, c1 in fL.table.items():
            for j2, c2 in fR.table.items():
                t = sig_rho + j1 + j2
                combined[t] = combined.get(t, Q(0)) + c1 * c2
    b_val = Q(0)
    for t, cv in combined.items():
        if not cv:
            continue
        if t < 0:
            raise DivergenceError("tail subtraction depth insufficient: rho^%d survives" % t)
        b_val += cv * factorial(t)
    int_total = int_total + EpsSeries.constant(b_val, 0)

    # --- prefactor chain ---
    g1 = SymExpr({lam("mu"): Q(2), ONE: 2 * harmonic(n) + Q(1, n)})  # gammabar/gamma_n - 1 at O(eps)
    x0 = SymExpr({lam("mu"): Q(1), GAMMA_E: HALF, LN2: Q(-1), LN_PI: -HALF})  # ln(mubar/2gamma_n)
    pref = EpsSeries.constant(4 * Q(2, n) ** A, 1).mul(coef.truncate(1), order_cap=1)
    u = EpsSeries.from_coeffs(0, [SYM_ONE, SymExpr({GAMMA_E: Q(1), LN2: Q(2)})])
    for _ in range(m):
        pref = pref.mul(u, order_cap=1)
    inv_v = EpsSeries.from_coeffs(0, [SYM_ONE, SymExpr({ONE: Q(2), GAMMA_E: Q(-1), LN2: Q(-2)})])
    pref = pref.mul(inv_v, order_cap=1)
    if m != 1:
        pref = pref.mul(exp_series(EpsSeries.from_coeffs(1, [(m - 1) * SymExpr.of(LN_PI)]), 1), order_cap=1)
        pref = pref.mul(exp_series(EpsSeries.from_coeffs(1, [2 * (m - 1) * x0]), 1), order_cap=1)
    if A:
        pref = pref.mul(EpsSeries.from_coeffs(0, [SYM_ONE, A * g1]), order_cap=1)
    if m != c:
        pref = pref.mul(
            exp_series(EpsSeries.from_coeffs(1, [2 * (m - c) * (SymExpr.of(LNQN) )]), 1), order_cap=1
        )
    return DivergentValue(pref.mul(int_total, order_cap=0), A, A + m)


# -- l = 0 tag assembly ------------------------------------------------------


def _l0_V(n):
    return _divergent_primitive(n, -1, 1, beta_pow=1, coef=_eps_poly(-1))


def _l0_V2(n):
    return _divergent_primitive(n, -2, 2, beta_pow=2)


def _l0_V3(n):
    return _divergent_primitive(n, -3, 3, beta_pow=3, coef=_eps_poly(-1))


def _l0_VVp(n):
    return _divergent_primitive(n, -3, 2, beta_pow=2, coef=_eps_poly(-1, 2))


def _l0_Vp2(n):
    return _divergent_primitive(n, -4, 2, beta_pow=2, coef=_eps_poly(1, -4))


def _l0_VVp_dr(n):
    return _divergent_primitive(n, -3, 2, a=0, b=1, beta_pow=2, coef=_eps_poly(-1, 2))


def _l0_Vp_dr(n):
    return _divergent_primitive(n, -2, 1, a=0, b=1, beta_pow=1, coef=_eps_poly(1, -2))


def _l0_V2p2(n):
    # <Vbar^2 p^2> = 2 m [ Ebar <V2> - <V3> ]
    ebar = energy_expansion(QuantumState(n, 0))
    t1 = _l0_V2(n).mul_series(ebar * 2, mr=1, za=2).shift_dims(mr=1)
    t2 = _l0_V3(n).scale(-2).shift_dims(mr=1)
    return t1 + t2


def _l0_p2Vp2(n):
    # <p^2 Vbar p^2> = 4 m^2 [ Ebar^2 <V> - 2 Ebar <V2> + <V3> ]
    ebar = energy_expansion(QuantumState(n, 0))
    e2 = ebar.mul(ebar, order_cap=1)
    t1 = _l0_V(n).mul_series(e2 * 4, mr=2, za=4).shift_dims(mr=2)
    t2 = _l0_V2(n).mul_series(ebar * (-8), mr=1, za=2).shift_dims(mr=2)
    t3 = _l0_V3(n).scale(4).shift_dims(mr=2)
    return t1 + t2 + t3


def _l0_VbarP2Vbar(n):
    # <Vbar p^2 Vbar> = 2 m Ebar <V2> - 2 m <V3> - 2 <V Vp dr>
    ebar = energy_expansion(QuantumState(n, 0))
    t1 = _l0_V2(n).mul_series(ebar * 2, mr=1, za=2).shift_dims(mr=1)
    t2 = _l0_V3(n).scale(-2).shift_dims(mr=1)
    t3 = _l0_VVp_dr(n).scale(-2)
    return t1 + t2 + t3


def _l0_p4V(n):
    # <p^4 Vbar> = 4 m^2 [ Ebar^2 <V> - 2 Ebar <V2> + <V3> ] + 4 m <V Vp dr>
    return _l0_p2Vp2(n) + _l0_VVp_dr(n).scale(4).shift_dims(mr=1)


def _l0_piVpiV(n):
    # int (d psi) Vbar [ Vbar' psi + Vbar d psi ]
    t1 = _divergent_primitive(n, -3, 2, a=1, b=0, beta_pow=2, coef=_eps_poly(-1, 2))
    t2 = _divergent_primitive(n, -2, 2, a=1, b=1, beta_pow=2)
    return t1 + t2


def _l0_p6(n):
    # <p^6> = 8 m^3 [ Ebar^3 - 3 Ebar^2 <V> + 3 Ebar <V2> - <V3> ] - 8 m^2 <V Vp dr>
    ebar = energy_expansion(QuantumState(n, 0))
    e2 = ebar.mul(ebar, order_cap=1)
    e3 = e2.mul(ebar, order_cap=1)
    one_brace = DivergentValue(EpsSeries.constant(Q(n**3), 0), -3, -3)
    t0 = one_brace.mul_series(e3 * 8, mr=3, za=6).shift_dims(mr=3)
    t1 = _l0_V(n).mul_series(e2 * (-24), mr=2, za=4).shift_dims(mr=3)
    t2 = _l0_V2(n).mul_series(ebar * 24, mr=1, za=2).shift_dims(mr=3)
    t3 = _l0_V3(n).scale(-8).shift_dims(mr=3)
    t4 = _l0_VVp_dr(n).scale(-8).shift_dims(mr=2)
    return t0 + t1 + t2 + t3 + t4


# the "second and higher order derivatives" family (r^{4 eps} regulators)


def _l0_rm2e_dr2(n):
    return _divergent_primitive(n, -2, 2, a=0, b=2)


def _l0_rm2e_p2(n):
    # <r^{-2+4eps} p^2> = 2 m [ Ebar <r^{-2+4eps}> + beta <r^{-3+6eps}> ]
    ebar = energy_expansion(QuantumState(n, 0))
    t1 = _divergent_primitive(n, -2, 2).mul_series(ebar * 2, mr=1, za=2).shift_dims(mr=1)
    t2 = _divergent_primitive(n, -3, 3, beta_pow=1).scale(2).shift_dims(mr=1)
    return t1 + t2


def _l0_rm1e_dr3(n):
    return _divergent_primitive(n, -1, 2, a=0, b=3)


def _l0_r4e_dr2V(n):
    # <r^{4eps} dr^2 Vbar> = <r^{4eps}[Vbar'' + 2 Vbar' dr + Vbar dr^2]>
    t1 = _divergent_primitive(n, -3, 3, beta_pow=1, coef=_eps_poly(-2, 6, -4))  # -(1-2e)(2-2e)
    t2 = _divergent_primitive(n, -2, 3, a=0, b=1, beta_pow=1, coef=_eps_poly(2, -4))
    t3 = _divergent_primitive(n, -1, 3, a=0, b=2, beta_pow=1, coef=_eps_poly(-1))
    return t1 + t2 + t3


def _l0_r4e_dr2p2(n):
    # <r^{4eps} dr^2 p^2> = 2 m [ Ebar <r^{4eps} dr^2> - <r^{4eps} dr^2 Vbar> ]
    ebar = energy_expansion(QuantumState(n, 0))
    t1 = _divergent_primitive(n, 0, 2, a=0, b=2).mul_series(ebar * 2, mr=1, za=2).shift_dims(mr=1)
    t2 = _l0_r4e_dr2V(n).scale(-2).shift_dims(mr=1)
    return t1 + t2


def _l0_r4e_p2V(n):
    # <r^{4eps} p^2 Vbar> = 2 m Ebar <r^{4eps} V> - 2 m <r^{4eps} V^2> - 2 <r^{4eps} V' dr>
    ebar = energy_expansion(QuantumState(n, 0))
    t1 = (
        _divergent_primitive(n, -1, 3, beta_pow=1, coef=_eps_poly(-1))
        .mul_series(ebar * 2, mr=1, za=2)
        .shift_dims(mr=1)
    )
    t2 = _divergent_primitive(n, -2, 4, beta_pow=2).scale(-2).shift_dims(mr=1)
    t3 = _divergent_primitive(n, -2, 3, a=0, b=1, beta_pow=1, coef=_eps_poly(1, -2)).scale(-2)
    return t1 + t2 + t3


def _l0_r4e_p4(n):
    # p^4 psi = 4 m^2 (Ebar-V)^2 psi + 2m (lap V) psi + 4 m V' dr psi; the
    # delta term <r^{4eps} delta^D> is scaleless and vanishes in dimreg
    ebar = energy_expansion(QuantumState(n, 0))
    e2 = ebar.mul(ebar, order_cap=1)
    t0 = _divergent_primitive(n, 0, 2).mul_series(e2 * 4, mr=2, za=4).shift_dims(mr=2)
    t1 = (
        _divergent_primitive(n, -1, 3, beta_pow=1, coef=_eps_poly(-1))
        .mul_series(ebar * (-8), mr=1, za=2)
        .shift_dims(mr=2)
    )
    t2 = _divergent_primitive(n, -2, 4, beta_pow=2).scale(4).shift_dims(mr=2)
    t3 = _divergent_primitive(n, -2, 3, a=0, b=1, beta_pow=1, coef=_eps_poly(1, -2)).scale(4).shift_dims(mr=1)
    return t0 + t1 + t2 + t3


def _l0_pi_r4e_piV(n):
    # <p_i r^{4eps} p_i Vbar> = (1-2e) beta G(1,0;-2,3) - beta G(1,1;-1,3)
    t1 = _divergent_primitive(n, -2, 3, a=1, b=0, beta_pow=1, coef=_eps_poly(1, -2))
    t2 = _divergent_primitive(n, -1, 3, a=1, b=1, beta_pow=1, coef=_eps_poly(-1))
    return t1 + t2


def _l0_r4e_piVpi(n):
    # <r^{4eps} p_i Vbar p_i> = -<r^{4eps} V' dr> + 2 m [Ebar <r^{4eps} V> - <r^{4eps} V^2>]
    ebar = energy_expansion(QuantumState(n, 0))
    t1 = _divergent_primitive(n, -2, 3, a=0, b=1, beta_pow=1, coef=_eps_poly(-1, 2))
    t2 = (
        _divergent_primitive(n, -1, 3, beta_pow=1, coef=_eps_poly(-1))
        .mul_series(ebar * 2, mr=1, za=2)
        .shift_dims(mr=1)
    )
    t3 = _divergent_primitive(n, -2, 4, beta_pow=2).scale(-2).shift_dims(mr=1)
    return t1 + t2 + t3


def _l0_rm1e_drV(n):
    # <r^{-1+4eps} dr Vbar> = -beta <r^{-2+6eps} dr> + (1-2e) beta <r^{-3+6eps}>
    t1 = _divergent_primitive(n, -2, 3, a=0, b=1, beta_pow=1, coef=_eps_poly(-1))
    t2 = _divergent_primitive(n, -3, 3, beta_pow=1, coef=_eps_poly(1, -2))
    return t1 + t2


def _l0_rm1e_drp2(n):
    # <r^{-1+4eps} dr p^2> = 2 m [ Ebar <r^{-1+4eps} dr> - (1-2e)<r^{-1+4eps} V'...> ]
    ebar = energy_expansion(QuantumState(n, 0))
    t1 = _divergent_primitive(n, -1, 2, a=0, b=1).mul_series(ebar * 2, mr=1, za=2).shift_dims(mr=1)
    t2 = _divergent_primitive(n, -3, 3, beta_pow=1, coef=_eps_poly(1, -2)).scale(-2).shift_dims(mr=1)
    t3 = _divergent_primitive(n, -2, 3, a=0, b=1, beta_pow=1, coef=_eps_poly(-1)).scale(-2).shift_dims(mr=1)
    return t1 + t2 + t3


_L0_TAGS: Dict[str, Callable] = {
    "V3": _l0_V3,
    "V.V'": _l0_VVp,
    "(V')2": _l0_Vp2,
    "V2.p2": _l0_V2p2,
    "p2.V.p2": _l0_p2Vp2,
    "p6": _l0_p6,
    "p4.V": _l0_p4V,
    "V.p2.V": _l0_VbarP2Vbar,
    "p.V.p.V": _l0_piVpiV,
    "drd.V.dr.V": _l0_piVpiV,  # identical angular content at l = 0
    "V'.dr": _l0_Vp_dr,
    "V.V'.dr": _l0_VVp_dr,
    "r4e/r2.dr2": _l0_rm2e_dr2,
    "r4e/r2.p2": _l0_rm2e_p2,
    "r4e/r.dr3": _l0_rm1e_dr3,
    "r4e.dr2.V": _l0_r4e_dr2V,
    "r4e.dr2.p2": _l0_r4e_dr2p2,
    "r4e.p2.V": _l0_r4e_p2V,
    "r4e.p4": _l0_r4e_p4,
    "p.r4e.p.V": _l0_pi_r4e_piV,
    "r4e.p.V.p": _l0_r4e_piVpi,
    "r4e/r.dr.V": _l0_rm1e_drV,
    "r4e/r.dr.p2": _l0_rm1e_drp2,
}


# -- l > 0 branch: exact three-dimensional composites -------------------------


def _pos_V3(st):
    v = bilinear(st, fn_of(st), fn_of(st), -3).scale(-1)
    return Value(v.sym, 3, 6)


def _pos_VVp(st):
    v = bilinear(st, fn_of(st), fn_of(st), -3).scale(-1)
    return Value(v.sym, 3, 5)


def _pos_Vp2(st):
    v = bilinear(st, fn_of(st), fn_of(st), -4)
    return Value(v.sym, 4, 6)


def _pos_V2p2(st):
    e = Q(-1, 2 * st.n**2)
    v = bilinear(st, fn_of(st), fn_of(st), -2).scale(2 * e) + bilinear(st, fn_of(st), fn_of(st), -3).scale(2)
    return Value(v.sym, 4, 6)


def _pos_p2Vp2(st):
    e = Q(-1, 2 * st.n**2)
    f = fn_of(st)
    v = (
        bilinear(st, f, f, -1).scale(-4 * e * e)
        + bilinear(st, f, f, -2).scale(-8 * e)
        + bilinear(st, f, f, -3).scale(-4)
    )
    return Value(v.sym, 5, 6)


def _pos_p6(st):
    return expectation_closed("p6", st)


def _pos_p4V(st):
    # p2Vp2 - 2 m (V')^2
    v = _pos_p2Vp2(st).sym - 2 * _pos_Vp2(st).sym
    return Value(v, 5, 6)


def _pos_VbarP2Vbar(st):
    v = expectation_closed("p.1/r2.p", st)
    return Value(v.sym, 4, 6)


def _pos_piVpiV(st):
    f = fn_of(st)
    df = d_r(st, f)
    v = bilinear(st, df, f, -3).scale(-1) + bilinear(st, df, df, -2)
    if st.l:
        v = v + bilinear(st, f, f, -4).scale(Q(st.l * (st.l + 1)))
    return Value(v.sym, 4, 6)


def _pos_drdVdrV(st):
    f = fn_of(st)
    df = d_r(st, f)
    v = bilinear(st, df, f, -3).scale(-1) + bilinear(st, df, df, -2)
    return Value(v.sym, 4, 6)


def _pos_Vp_dr(st):
    v = bilinear(st, fn_of(st), d_r(st, fn_of(st)), -2)
    return Value(v.sym, 3, 4)


def _pos_VVp_dr(st):
    v = bilinear(st, fn_of(st), d_r(st, fn_of(st)), -3).scale(-1)
    return Value(v.sym, 4, 6)


def _pos_rm2e_dr2(st):
    return expectation_closed("1/r2.dr2", st).shift_dims(0, 0, 0)


def _pos_rm2e_p2(st):
    e = Q(-1, 2 * st.n**2)
    f = fn_of(st)
    v = bilinear(st, f, f, -2).scale(2 * e) + bilinear(st, f, f, -3).scale(2)
    return Value(v.sym, 4, 4)


def _pos_rm1e_dr3(st):
    return expectation_closed("1/r.dr3", st)


def _pos_r4e_dr2V(st):
    f = fn_of(st)
    v = (
        bilinear(st, f, _chain_r(st, f, 2), -1).scale(-1)
        + bilinear(st, f, _chain_r(st, f, 1), -2).scale(2)
        + bilinear(st, f, f, -3).scale(-2)
    )
    return Value(v.sym, 3, 4)


def _chain_r(st, f, k):
    for _ in range(k):
        f = d_r(st, f)
    return f


def _pos_r4e_dr2p2(st):
    e = Q(-1, 2 * st.n**2)
    f = fn_of(st)
    t1 = bilinear(st, f, _chain_r(st, f, 2), 0).scale(2 * e)
    t2 = _pos_r4e_dr2V(st).sym * (-2)
    return Value(t1.sym + t2, 4, 4)


def _pos_r4e_p2V(st):
    e = Q(-1, 2 * st.n**2)
    f = fn_of(st)
    v = (
        bilinear(st, f, f, -1).scale(-2 * e)
        - bilinear(st, f, f, -2).scale(2)
        - bilinear(st, f, _chain_r(st, f, 1), -2).scale(2)
    )
    return Value(v.sym, 3, 4)


def _pos_r4e_p4(st):
    e = Q(-1, 2 * st.n**2)
    f = fn_of(st)
    v = (
        bilinear(st, f, f, 0).scale(4 * e * e)
        + bilinear(st, f, f, -1).scale(8 * e)
        + bilinear(st, f, f, -2).scale(4)
        + bilinear(st, f, _chain_r(st, f, 1), -2).scale(4)
    )
    return Value(v.sym, 4, 4)


def _pos_pi_r4e_piV(st):
    f = fn_of(st)
    df = d_r(st, f)
    v = bilinear(st, df, f, -2) - bilinear(st, df, df, -1)
    if st.l:
        v = v - bilinear(st, f, f, -3).scale(Q(st.l * (st.l + 1)))
    return Value(v.sym, 3, 4)


def _pos_r4e_piVpi(st):
    e = Q(-1, 2 * st.n**2)
    f = fn_of(st)
    v = (
        bilinear(st, f, _chain_r(st, f, 1), -2).scale(-1)
        + bilinear(st, f, f, -1).scale(-2 * e)
        - bilinear(st, f, f, -2).scale(2)
    )
    return Value(v.sym, 3, 4)


def _pos_rm1e_drV(st):
    f = fn_of(st)
    v = bilinear(st, f, _chain_r(st, f, 1), -2).scale(-1) + bilinear(st, f, f, -3)
    return Value(v.sym, 3, 4)


def _pos_rm1e_drp2(st):
    e = Q(-1, 2 * st.n**2)
    f = fn_of(st)
    v = (
        bilinear(st, f, _chain_r(st, f, 1), -1).scale(2 * e)
        - bilinear(st, f, f, -3).scale(2)
        + bilinear(st, f, _chain_r(st, f, 1), -2).scale(2)
    )
    return Value(v.sym, 4, 4)


_LPOS_TAGS: Dict[str, Callable] = {
    "V3": _pos_V3,
    "V.V'": _pos_VVp,
    "(V')2": _pos_Vp2,
    "V2.p2": _pos_V2p2,
    "p2.V.p2": _pos_p2Vp2,
    "p6": _pos_p6,
    "p4.V": _pos_p4V,
    "V.p2.V": _pos_VbarP2Vbar,
    "p.V.p.V": _pos_piVpiV,
    "drd.V.dr.V": _pos_drdVdrV,
    "V'.dr": _pos_Vp_dr,
    "V.V'.dr": _pos_VVp_dr,
    "r4e/r2.dr2": _pos_rm2e_dr2,
    "r4e/r2.p2": _pos_rm2e_p2,
    "r4e/r.dr3": _pos_rm1e_dr3,
    "r4e.dr2.V": _pos_r4e_dr2V,
    "r4e.dr2.p2": _pos_r4e_dr2p2,
    "r4e.p2.V": _pos_r4e_p2V,
    "r4e.p4": _pos_r4e_p4,
    "p.r4e.p.V": _pos_pi_r4e_piV,
    "r4e.p.V.p": _pos_r4e_piVpi,
    "r4e/r.dr.V": _pos_rm1e_drV,
    "r4e/r.dr.p2": _pos_rm1e_drp2,
}


def divergent_tags():
    return sorted(_L0_TAGS)


def divergent_expectation(tag: str, n: int, l: int):
    """Dimensionally regularized catalog: Laurent brace for l = 0, exact
    finite Value for l > 0."""
    st = QuantumState(n, l)
    table = _L0_TAGS if l == 0 else _LPOS_TAGS
    fn = table.get(tag)
    if fn is None:
        raise DivergentCatalogError(
            "unknown divergent tag %r; valid: %s" % (tag, ", ".join(divergent_tags()))
        )
    return fn(n) if l == 0 else fn(st)


# ---------------------------------------------------------------------------
# identity network
# ---------------------------------------------------------------------------


def identity_residuals(n: int, l: int) -> List[Tuple[str, object]]:
    """Residuals of the exact D-dimensional relations, through O(eps^0)."""
    out = []
    if l == 0:
        vp2 = _l0_Vp2(n)
        v3 = _l0_V3(n)
        v2 = _l0_V2(n)
        vvpdr = _l0_VVp_dr(n)
        vp2v = _l0_VbarP2Vbar(n)
        ebar = energy_expansion(QuantumState(n, 0))
        pi_v2_pi = _divergent_primitive(n, -2, 2, a=1, b=1, beta_pow=2)
        out.append(("V.p2.V == p.V2.p", (vp2v - pi_v2_pi).series))
        out.append(("(V')2 == -2 V.V'.dr", (vp2 - vvpdr.scale(-2)).series))
        t = v3.scale(2).shift_dims(mr=1) + vp2v - v2.mul_series(ebar * 2, mr=1, za=2).shift_dims(mr=1)
        out.append(("(V')2 == 2m V3 + V.p2.V - 2mE V2", (vp2 - t).series))
        t4 = _l0_p2Vp2(n) - _l0_p4V(n)
        out.append(("2m (V')2 == p2.V.p2 - p4.V", (vp2.scale(2).shift_dims(mr=1) - t4).series))
        out.append(("V'.dr == -2 pi phibar2 Za mubar^2eps", (_l0_Vp_dr(n) - DivergentValue(EpsSeries.constant(Q(-2), 0), 0, 1)).series))
        rec = (
            v2.mul_series(ebar.mul(_eps_poly(4, -16), order_cap=1), mr=1, za=2).shift_dims(mr=1)
            + v3.mul_series(_eps_poly(-6, 20), 0, 0).shift_dims(mr=1)
            + vp2.mul_series(_eps_poly(3, -6), 0, 0)
        )
        out.append(("s=-2+4eps recursion", rec.series))
        return out
    # l > 0: everything is finite and the identities close at eps = 0
    st = QuantumState(n, l)
    e = Q(-1, 2 * n * n)
    L = Q(l * (l + 1))
    vp2 = _pos_Vp2(st).sym
    v3 = _pos_V3(st).sym
    v2 = expectation_closed("V2", st).sym
    vvpdr = _pos_VVp_dr(st).sym
    vp2v = _pos_VbarP2Vbar(st).sym
    out.append(("V.p2.V == p.V2.p", vp2v - expectation_closed("p.1/r2.p", st).sym))
    out.append(("(V')2 == -2 V.V'.dr", vp2 - (-2) * vvpdr))
    out.append(("(V')2 == 2m V3 + V.p2.V - 2mE V2", vp2 - (2 * v3 + vp2v - 2 * e * v2)))
    out.append(("2m (V')2 == p2.V.p2 - p4.V", 2 * vp2 - (_pos_p2Vp2(st).sym - _pos_p4V(st).sym)))
    out.append(("V'.dr == 0 (l>0)", _pos_Vp_dr(st).sym))
    out.append(
        (
            "s=-2+4eps recursion",
            4 * e * v2 - 6 * v3 + (3 - 4 * L) * vp2,
        )
    )
    return out
