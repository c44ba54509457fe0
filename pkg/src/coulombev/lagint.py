"""Closed-form Laguerre moment integrals I, J, K, L, M and their p-subtracted
variants, with the integer-power limiting machinery, plus an independent
brute-force oracle that integrates monomial by monomial.

All integrals are of the shape  int_0^inf dx e^{-x} x^s (ln x)^m  P(x) Q(x).
Integer s gives exact SymExpr values over {1, gamma_E, zeta(2), gamma_E^2};
non-integer rational s falls back to high-precision floating gamma functions
and returns a plain float that must not enter exact comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union

import mpmath as mp

from .exactnum import (
    DivergenceError,
    DomainError,
    EpsSeries,
    Q,
    SYM_ZERO,
    SymExpr,
    GAMMA_E,
    ONE,
    ZETA2,
    GAMMA2,
    factorial,
    gamma_series,
    harmonic,
    inv_gamma_series,
    psi1_series,
    psi_series,
)
from .laguerre import Poly, assoc_laguerre, subtract_laguerre

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class MomentSpec:
    """One moment integral: x^s (ln x)^logpow  ^pL_n^k(x) [ L_n'^k'(x) ]."""

    s: Fraction
    logpow: int
    left: Tuple[int, int, int]  # (n, k, p)
    right: Optional[Tuple[int, int]] = None  # (n', k')

    def convergent(self) -> bool:
        return Q(self.s) + self.left[2] > -1


# ---------------------------------------------------------------------------
# brute-force oracle: expand in monomials, integrate with Gamma derivatives
# ---------------------------------------------------------------------------

_LN_WEIGHTS = (0, 1, 2)


def _mono_int(t: int, logpow: int) -> SymExpr:
    """int_0^inf e^{-x} x^t ln^m x dx for integer t >= 0, m <= 2, exact."""
    if t < 0:
        raise DivergenceError("monomial x^%d diverges at the origin" % t)
    f = factorial(t)
    if logpow == 0:
        return SymExpr.scalar(f)
    h = harmonic(t)
    if logpow == 1:
        # Gamma'(t+1) = t! (H_t - gamma_E)
        return SymExpr({ONE: f * h, GAMMA_E: -f})
    if logpow == 2:
        # Gamma''(t+1) = t! [ (H_t - gamma_E)^2 + zeta(2) - H_t^(2) ]
        h2 = harmonic(t, 2)
        return SymExpr({ONE: f * (h * h - h2), GAMMA_E: -2 * f * h, GAMMA2: f, ZETA2: f})
    raise DomainError("log power %d unsupported" % logpow)


def _mono_int_num(t: mp.mpf, logpow: int) -> mp.mpf:
    g = mp.gamma(t + 1)
    if logpow == 0:
        return g
    psi = mp.digamma(t + 1)
    if logpow == 1:
        return g * psi
    return g * (psi * psi + mp.polygamma(1, t + 1))


def poly_moment(p: Poly, q: Poly, s: int, logpow: int = 0) -> SymExpr:
    """Exact int_0^inf e^{-x} x^s ln^m x P(x) Q(x) dx for integer s."""
    prod = p * q
    out = SYM_ZERO
    for r, c in enumerate(prod.coeffs):
        if c:
            out = out + c * _mono_int(s + r, logpow)
    return out


def brute_force_moment(spec: MomentSpec):
    """Monomial-by-monomial oracle; exact for integer s, float for half-integer."""
    if spec.logpow not in _LN_WEIGHTS:
        raise DomainError("logpow must be 0, 1 or 2")
    if not spec.convergent():
        raise DivergenceError(
            "moment diverges: leading monomial x^%s below x^-1" % (Q(spec.s) + spec.left[2])
        )
    n, k, p = spec.left
    left = subtract_laguerre(n, k, p).poly
    right = assoc_laguerre(*spec.right) if spec.right else Poly([1])
    s = Q(spec.s)
    if s.denominator == 1:
        return poly_moment(left, right, int(s), spec.logpow)
    prod = left * right
    with mp.workdps(30):
        total = mp.mpf(0)
        for r, c in enumerate(prod.coeffs):
            if c:
                t = mp.mpf(s.numerator) / s.denominator + r
                if t <= -1:
                    raise DivergenceError("monomial x^%s diverges" % (s + r))
                total += mp.mpf(c.numerator) / c.denominator * _mono_int_num(t, spec.logpow)
        return float(total)


# ---------------------------------------------------------------------------
# closed forms via termwise gamma-ratio limits
# ---------------------------------------------------------------------------


def _term_limit(a: int, b: int, c: int, logpow: int) -> SymExpr:
    """eps^0 of Gamma(a+e)Gamma(b+e)/Gamma(c+e) * {d/ds brace}^logpow at e -> 0.

    This is the limiting procedure for integer powers: every term of the K/L/M
    sums has this shape with b >= 1.
    """
    if b < 1:
        raise DivergenceError("Gamma(%d + eps) signals a divergent integral" % b)
    ga = gamma_series(a, 1, order=1 if a <= 0 else 2)
    gb = gamma_series(b, 1, order=2)
    gc = inv_gamma_series(c, 1, order=2)
    pref = ga.mul(gb, order_cap=2).mul(gc, order_cap=1)
    if logpow == 0:
        series = pref.truncate(0)
    else:
        s_a = psi_series(a, 1, order=1)
        s_b = psi_series(b, 1, order=1)
        s_c = psi_series(c, 1, order=1)
        sser = s_a + s_b - s_c
        if logpow == 1:
            brace = sser
        else:
            t_ser = psi1_series(a, 1) + psi1_series(b, 1) - psi1_series(c, 1)
            brace = sser.mul(sser, order_cap=0) + t_ser
        series = pref.mul(brace, order_cap=0)
    for kk in range(series.low, 0):
        if series.coeff(kk):
            raise DivergenceError("residual 1/eps pole in gamma-limit term")
    return series.coeff(0)


def _require_convergent(s: Scalar, p: int):
    if Q(s) + p <= -1:
        raise DivergenceError("integral nonconvergent: s + p = %s <= -1" % (Q(s) + p))


def _laguerre_prefactors(n: int, k: int, r: int) -> Fraction:
    # (-1)^r (n+k)! / ( r! (n-r)! (k+r)! )
    return Q(-1) ** r * factorial(n + k) / (factorial(r) * factorial(n - r) * factorial(k + r))


def _is_int(s: Scalar) -> bool:
    return Q(s).denominator == 1


def integral_I(s: Scalar, n: int, k: int, p: int = 0):
    """^pI_s(n,k) = int e^{-x} x^s ^pL_n^k(x) dx.

    p = 0 uses the no-sum closed form with the gamma-ratio limit; p = 1, 2 use
    the 2F1-reduced forms; larger p falls back to the explicit sum over r >= p.
    """
    _require_convergent(s, p)
    if n < 0:
        return SYM_ZERO
    if not _is_int(s):
        return brute_force_moment(MomentSpec(Q(s), 0, (n, k, p)))
    s = int(Q(s))
    if p == 0:
        pref = Q(-1) ** n / factorial(n)
        return pref * _term_limit(s - k + 1, s + 1, s - k - n + 1, 0)
    if p in (1, 2):
        if p > n:
            return SYM_ZERO
        # Gamma(s+1+e) * { G(e) - 1 [+ n(s+1+e)/(k+1) for p=2] } with
        # G(e) = Gamma(n+k-s-e) Gamma(k+1) / ( Gamma(k-s-e) Gamma(n+k+1) )
        gs1 = gamma_series(s + 1, 1, order=1 if s + 1 <= 0 else 2)
        g = gamma_series(n + k - s, -1, order=1 if n + k - s <= 0 else 2)
        g = g.mul(inv_gamma_series(k - s, -1, order=2), order_cap=2)
        g = g * (factorial(k) / factorial(n + k))
        brace = g - 1
        if p == 2:
            brace = brace + EpsSeries.from_coeffs(0, [SymExpr.scalar(Q(n * (s + 1), k + 1)), SymExpr.scalar(Q(n, k + 1))])
        series = gs1.mul(brace, order_cap=0)
        for kk in range(series.low, 0):
            if series.coeff(kk):
                raise DivergenceError("residual pole in subtracted I")
        return (factorial(n + k) / (factorial(n) * factorial(k))) * series.coeff(0)
    out = SYM_ZERO
    for r in range(p, n + 1):
        out = out + _laguerre_prefactors(n, k, r) * _mono_int(s + r, 0)
    return out


def integral_J(s: Scalar, n: int, k: int):
    """J_s(n,k) = int e^{-x} x^s ln x L_n^k(x) dx; value in span{1, gamma_E}."""
    _require_convergent(s, 0)
    if n < 0:
        return SYM_ZERO
    if not _is_int(s):
        return brute_force_moment(MomentSpec(Q(s), 1, (n, k, 0)))
    s = int(Q(s))
    pref = Q(-1) ** n / factorial(n)
    return pref * _term_limit(s - k + 1, s + 1, s - k - n + 1, 1)


def _bilinear_closed(s: Scalar, n: int, k: int, n2: int, k2: int, p: int, logpow: int):
    _require_convergent(s, p)
    if n < 0 or n2 < 0:
        return SYM_ZERO
    if not _is_int(s):
        if logpow == 0:
            # general gamma-ratio sum; the ratio Gamma(x)/Gamma(x-n') is the
            # falling-factorial polynomial prod_{j=1..n'} (x - j)
            with mp.workdps(30):
                total = mp.mpf(0)
                sf = mp.mpf(Q(s).numerator) / Q(s).denominator
                for r in range(p, n + 1):
                    a_r = _laguerre_prefactors(n, k, r) * Q(-1) ** n2 / factorial(n2)
                    ratio = mp.mpf(1)
                    for j in range(1, n2 + 1):
                        ratio *= sf + r + 1 - k2 - j
                    total += mp.mpf(a_r.numerator) / a_r.denominator * ratio * mp.gamma(sf + r + 1)
                return float(total)
        return brute_force_moment(MomentSpec(Q(s), logpow, (n, k, p), (n2, k2)))
    s = int(Q(s))
    out = SYM_ZERO
    pref2 = Q(-1) ** n2 / factorial(n2)
    for r in range(p, n + 1):
        a_r = _laguerre_prefactors(n, k, r) * pref2
        out = out + a_r * _term_limit(s + r + 1 - k2, s + r + 1, s + r + 1 - k2 - n2, logpow)
    return out


def integral_K(s: Scalar, n: int, k: int, n2: int, k2: int, p: int = 0):
    """^pK_s(n,k;n',k') = int e^{-x} x^s ^pL_n^k L_{n'}^{k'} dx."""
    return _bilinear_closed(s, n, k, n2, k2, p, 0)


def integral_L(s: Scalar, n: int, k: int, n2: int, k2: int, p: int = 0):
    """^pL_s(n,k;n',k') with one ln x in the weight."""
    return _bilinear_closed(s, n, k, n2, k2, p, 1)


def integral_M(s: Scalar, n: int, k: int, n2: int, k2: int):
    """M_s(n,k;n',k') with ln^2 x in the weight."""
    return _bilinear_closed(s, n, k, n2, k2, 0, 2)
