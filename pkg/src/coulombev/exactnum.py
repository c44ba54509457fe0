"""Exact-rational substrate: harmonic and diharmonic numbers, a small basis of
symbolic constants (Euler gamma, zeta(2), logs), expansions of gamma and
digamma functions near integers, and truncated Laurent series in the
dimensional-regularization parameter epsilon.

Scalars are `fractions.Fraction` throughout; nothing here ever rounds.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Mapping, Optional, Sequence, Union

Q = Fraction
Scalar = Union[int, Fraction]


class DomainError(ValueError):
    pass


class DivergenceError(ValueError):
    pass


class UnsupportedOrderError(ValueError):
    pass


class BasisError(ValueError):
    """A symbolic product left the fixed constant basis."""


# ---------------------------------------------------------------------------
# harmonic and diharmonic numbers
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def harmonic(n: int, alpha: int = 1) -> Fraction:
    """H_n^(alpha) = sum_{k=1..n} k^-alpha, with H_0 = 0."""
    if n < 0:
        raise DomainError("harmonic number needs n >= 0, got n=%d" % n)
    if alpha < 1:
        raise DomainError("harmonic order must be >= 1")
    if n == 0:
        return Q(0)
    return harmonic(n - 1, alpha) + Q(1, n**alpha)


def h0(n: int, alpha: int = 1) -> Fraction:
    """Harmonic number extended by H_j = 0 for j <= 0."""
    return harmonic(n, alpha) if n > 0 else Q(0)


@lru_cache(maxsize=None)
def diharmonic(sign: str, n: int, m: int) -> Fraction:
    """Rising (+) and falling (-) diharmonic numbers.

    diH_+(n,m) = sum_{i=1..n} H_{m-1+i}/i,  diH_-(n,m) = sum_{i=1..n} H_{m+1-i}/i,
    with H_j = 0 for j <= 0.  Arguments outside the nonzero ranges simply give 0.
    """
    if sign not in ("+", "-"):
        raise DomainError("diharmonic sign must be '+' or '-'")
    total = Q(0)
    for i in range(1, n + 1):
        j = m - 1 + i if sign == "+" else m + 1 - i
        total += h0(j) / i
    return total


def binomial(a: Scalar, b: int) -> Fraction:
    """Generalized binomial (a over b) for integer b >= 0, exact."""
    if b < 0:
        return Q(0)
    a = Q(a)
    num = Q(1)
    for i in range(b):
        num *= a - i
    return num / factorial(b)


@lru_cache(maxsize=None)
def factorial(n: int) -> Fraction:
    if n < 0:
        raise DomainError("factorial of negative integer")
    return Q(1) if n == 0 else n * factorial(n - 1)


def rising(a: Scalar, n: int) -> Fraction:
    """Rising factorial a^(n-bar) = a (a+1) ... (a+n-1)."""
    a = Q(a)
    out = Q(1)
    for i in range(n):
        out *= a + i
    return out


@lru_cache(maxsize=None)
def bernoulli(m: int) -> Fraction:
    """Bernoulli number B_m (B_1 = -1/2 convention)."""
    if m == 0:
        return Q(1)
    s = Q(0)
    for j in range(m):
        s += binomial(m + 1, j) * bernoulli(j)
    return -s / (m + 1)


def zeta_nonpositive(s: int) -> Fraction:
    """zeta(-s) for integer s >= 0 (zeta(0) = -1/2)."""
    if s < 0:
        raise DomainError("use zeta_nonpositive only for arguments <= 0")
    return Q(-1) ** s * bernoulli(s + 1) / (s + 1)


def eta_nonpositive(s: int) -> Fraction:
    """Dirichlet eta(-s) for integer s >= 0; eta(0) = 1/2, eta(-1) = 1/4, ..."""
    return (1 - Q(2) ** (1 + s)) * zeta_nonpositive(s)


# ---------------------------------------------------------------------------
# symbolic constants
# ---------------------------------------------------------------------------

ONE = ("one",)
GAMMA_E = ("gamma_e",)
ZETA2 = ("zeta2",)
LN2 = ("ln2",)
LN_PI = ("ln_pi",)
GAMMA2 = ("gamma2",)  # gamma_e**2
LNQN = ("ln_2mrza_over_n",)  # ln(2 m_r Zalpha / n), resolved per state


def lam(label: str = "mu"):
    """Log-scale symbol Lambda_kappa = ln(kappa*n/(2 m_r Zalpha))."""
    return ("lambda", label)


def lam2(label: str = "mu"):
    return ("lambda2", label)


def gamma_lam(label: str = "mu"):
    return ("gamma_lambda", label)


_TAG_NAMES = {
    ONE: "1",
    GAMMA_E: "gamma_E",
    ZETA2: "zeta(2)",
    LN2: "ln2",
    LN_PI: "ln(pi)",
    GAMMA2: "gamma_E^2",
    LNQN: "ln(2*mr*Za/n)",
}


def tag_name(tag) -> str:
    if tag in _TAG_NAMES:
        return _TAG_NAMES[tag]
    kind = tag[0]
    if kind == "lambda":
        return "Lambda[%s]" % tag[1]
    if kind == "lambda2":
        return "Lambda[%s]^2" % tag[1]
    if kind == "gamma_lambda":
        return "gamma_E*Lambda[%s]" % tag[1]
    return str(tag)


def _mul_tags(t1, t2):
    """Product of two non-ONE basis tags, or BasisError."""
    if t1[0] == "lambda" and t2 == GAMMA_E or t2[0] == "lambda" and t1 == GAMMA_E:
        label = t1[1] if t1[0] == "lambda" else t2[1]
        return gamma_lam(label)
    if t1 == GAMMA_E and t2 == GAMMA_E:
        return GAMMA2
    if t1[0] == "lambda" and t2[0] == "lambda" and t1[1] == t2[1]:
        return lam2(t1[1])
    raise BasisError("product %s * %s leaves the symbol basis" % (tag_name(t1), tag_name(t2)))


class SymExpr:
    """Finite rational linear combination over the fixed symbol basis."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping] = None):
        d: Dict = {}
        if terms:
            for tag, c in terms.items():
                c = Q(c)
                if c:
                    d[tag] = c
        self.terms = d

    # -- constructors ------------------------------------------------------
    @classmethod
    def scalar(cls, x: Scalar) -> "SymExpr":
        return cls({ONE: Q(x)})

    @classmethod
    def of(cls, tag, coeff: Scalar = 1) -> "SymExpr":
        return cls({tag: Q(coeff)})

    # -- predicates --------------------------------------------------------
    def is_rational(self) -> bool:
        return all(t == ONE for t in self.terms)

    @property
    def rational(self) -> Fraction:
        return self.terms.get(ONE, Q(0))

    def coeff(self, tag) -> Fraction:
        return self.terms.get(tag, Q(0))

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- ring operations ---------------------------------------------------
    def __add__(self, other):
        other = _as_sym(other)
        d = dict(self.terms)
        for tag, c in other.terms.items():
            d[tag] = d.get(tag, Q(0)) + c
        return SymExpr(d)

    __radd__ = __add__

    def __neg__(self):
        return SymExpr({t: -c for t, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_sym(other))

    def __rsub__(self, other):
        return _as_sym(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return SymExpr({t: c * other for t, c in self.terms.items()})
        other = _as_sym(other)
        out: Dict = {}

        def put(tag, c):
            if c:
                out[tag] = out.get(tag, Q(0)) + c

        for t1, c1 in self.terms.items():
            for t2, c2 in other.terms.items():
                if t1 == ONE:
                    put(t2, c1 * c2)
                elif t2 == ONE:
                    put(t1, c1 * c2)
                else:
                    put(_mul_tags(t1, t2), c1 * c2)
        return SymExpr(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return SymExpr({t: c / Q(other) for t, c in self.terms.items()})
        other = _as_sym(other)
        if not other.is_rational() or not other.rational:
            raise BasisError("can only divide by a nonzero rational")
        return self * (1 / other.rational)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SymExpr.scalar(other)
        if not isinstance(other, SymExpr):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- output ------------------------------------------------------------
    def numeric(self, tag_values: Optional[Mapping] = None) -> float:
        vals = dict(_NUMERIC_TAGS)
        if tag_values:
            vals.update(tag_values)
        total = 0.0
        for tag, c in self.terms.items():
            if tag not in vals:
                raise DomainError("no numeric value supplied for symbol %s" % tag_name(tag))
            total += float(c) * vals[tag]
        return total

    def as_dict(self) -> Dict[str, str]:
        return {tag_name(t): str(c) for t, c in sorted(self.terms.items(), key=lambda kv: tag_name(kv[0]))}

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for tag, c in sorted(self.terms.items(), key=lambda kv: tag_name(kv[0])):
            if tag == ONE:
                bits.append(str(c))
            elif c == 1:
                bits.append(tag_name(tag))
            elif c == -1:
                bits.append("-" + tag_name(tag))
            else:
                bits.append("%s*%s" % (c, tag_name(tag)))
        return " + ".join(bits).replace("+ -", "- ")


def _as_sym(x) -> SymExpr:
    if isinstance(x, SymExpr):
        return x
    if isinstance(x, (int, Fraction)):
        return SymExpr.scalar(x)
    raise TypeError("cannot coerce %r to SymExpr" % (x,))


SYM_ZERO = SymExpr()
SYM_ONE = SymExpr.scalar(1)

# 50-digit reference constants, rounded to float for numeric rendering.
_NUMERIC_TAGS = {
    ONE: 1.0,
    GAMMA_E: 0.57721566490153286060651209008240243104215933593992,
    ZETA2: 1.6449340668482264364724151666460251892189499012068,
    LN2: 0.69314718055994530941723212145817656807550013436026,
    LN_PI: 1.1447298858494001741434273513530587116472948129153,
    GAMMA2: 0.57721566490153286060651209008240243104215933593992**2,
}


# ---------------------------------------------------------------------------
# truncated Laurent series in epsilon
# ---------------------------------------------------------------------------

POLE_FLOOR = -2  # the artifact never produces a worse pole


class EpsSeries:
    """Laurent series sum_{k=low..order} c_k eps^k with SymExpr coefficients.

    `order` is the inclusive truncation order; arithmetic tracks it so that a
    result never claims coefficients it cannot know.
    """

    __slots__ = ("low", "coeffs", "order")

    def __init__(self, low: int, coeffs: Sequence, order: int):
        coeffs = [_as_sym(c) for c in coeffs]
        # trim exact leading zeros
        while coeffs and not coeffs[0] and low < order + 1:
            coeffs.pop(0)
            low += 1
        if not coeffs:
            low = order + 1
        if low < POLE_FLOOR:
            raise DomainError("pole order %d exceeds the cap of 2" % -low)
        assert len(coeffs) == max(order - low + 1, 0)
        self.low = low
        self.coeffs = coeffs
        self.order = order

    # -- constructors ------------------------------------------------------
    @classmethod
    def constant(cls, x, order: int = 0) -> "EpsSeries":
        return cls(0, [_as_sym(x)] + [SYM_ZERO] * order, order)

    @classmethod
    def zero(cls, order: int = 0) -> "EpsSeries":
        return cls(order + 1, [], order)

    @classmethod
    def from_coeffs(cls, low: int, coeffs: Sequence) -> "EpsSeries":
        return cls(low, list(coeffs), low + len(coeffs) - 1)

    # -- access -------------------------------------------------------------
    def coeff(self, k: int) -> SymExpr:
        if k > self.order:
            raise UnsupportedOrderError("coefficient of eps^%d beyond truncation %d" % (k, self.order))
        if k < self.low:
            return SYM_ZERO
        return self.coeffs[k - self.low]

    def is_zero(self) -> bool:
        return all(not c for c in self.coeffs)

    # -- arithmetic ----------------------------------------------------------
    def _aligned(self, other: "EpsSeries"):
        order = min(self.order, other.order)
        low = min(self.low, other.low)
        return low, order

    def __add__(self, other):
        if isinstance(other, (int, Fraction, SymExpr)):
            other = EpsSeries.constant(other, self.order)
        low, order = self._aligned(other)
        coeffs = [self.coeff(k) + other.coeff(k) for k in range(low, order + 1)]
        return EpsSeries(low, coeffs, order)

    __radd__ = __add__

    def __neg__(self):
        return EpsSeries(self.low, [-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, SymExpr)):
            other = EpsSeries.constant(other, self.order)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def mul(self, other: "EpsSeries", order_cap: Optional[int] = None) -> "EpsSeries":
        order = min(self.order + other.low, other.order + self.low)
        if order_cap is not None:
            order = min(order, order_cap)
        low = self.low + other.low
        if low > order:
            return EpsSeries.zero(order)
        coeffs = []
        for k in range(low, order + 1):
            acc = SYM_ZERO
            for i in range(self.low, min(self.order, k - other.low) + 1):
                j = k - i
                if other.low <= j <= other.order:
                    ci = self.coeff(i)
                    cj = other.coeff(j)
                    if ci and cj:
                        acc = acc + ci * cj
            coeffs.append(acc)
        return EpsSeries(low, coeffs, order)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, SymExpr)):
            o = _as_sym(other)
            return EpsSeries(self.low, [c * o for c in self.coeffs], self.order)
        return self.mul(other)

    __rmul__ = __mul__

    def invert(self, order_cap: Optional[int] = None) -> "EpsSeries":
        """Reciprocal; requires the leading coefficient to be a nonzero rational."""
        if not self.coeffs:
            raise DomainError("cannot invert the zero series")
        lead = self.coeffs[0]
        if not lead.is_rational() or not lead.rational:
            raise DomainError("inversion needs a nonzero constant leading coefficient")
        v = self.low
        rel_avail = self.order - v
        out_order = (-v + rel_avail) if order_cap is None else order_cap
        rel = min(rel_avail, out_order + v)
        inv_lead = 1 / lead.rational
        # normalized series 1 + u with u of positive valuation
        norm = EpsSeries(0, [self.coeff(v + i) * inv_lead for i in range(rel + 1)], rel)
        u = norm - 1
        out = EpsSeries.constant(1, rel)
        term = EpsSeries.constant(1, rel)
        while True:
            term = term.mul(-u, order_cap=rel)
            if term.is_zero():
                break
            out = out + term
        out = out * inv_lead
        return EpsSeries(out.low - v, list(out.coeffs), out.order - v).truncate(out_order)

    def shift(self, k: int) -> "EpsSeries":
        return EpsSeries(self.low + k, list(self.coeffs), self.order + k)

    def truncate(self, order: int) -> "EpsSeries":
        order = min(order, self.order)
        return EpsSeries(self.low, [self.coeff(k) for k in range(self.low, order + 1)], order)

    # -- comparison / output -------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, EpsSeries):
            return NotImplemented
        order = min(self.order, other.order)
        return all(self.coeff(k) == other.coeff(k) for k in range(POLE_FLOOR, order + 1))

    def numeric(self, eps: float, tag_values: Optional[Mapping] = None) -> float:
        return sum(c.numeric(tag_values) * eps ** (self.low + i) for i, c in enumerate(self.coeffs))

    def as_dict(self):
        return {
            "lowest_order": self.low,
            "truncation": self.order,
            "coeffs": [c.as_dict() for c in self.coeffs],
        }

    def __repr__(self):
        if self.is_zero():
            return "0 + O(eps^%d)" % (self.order + 1)
        bits = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            k = self.low + i
            if k == 0:
                bits.append("(%r)" % c)
            else:
                bits.append("(%r)*eps^%d" % (c, k))
        return " + ".join(bits) + " + O(eps^%d)" % (self.order + 1)


def exp_series(x: EpsSeries, order_cap: int) -> EpsSeries:
    """exp(x) for a series with strictly positive valuation."""
    if x.low < 1:
        raise DomainError("exp_series needs a series starting at eps^1 or higher")
    out = EpsSeries.constant(1, order_cap)
    term = EpsSeries.constant(1, order_cap)
    k = 1
    while k * x.low <= order_cap:
        term = term.mul(x, order_cap=order_cap) * Q(1, k)
        out = out + term
        k += 1
    return out


# ---------------------------------------------------------------------------
# gamma / digamma expansions near integers
# ---------------------------------------------------------------------------


def _psi_int(m: int) -> SymExpr:
    # psi(m) for integer m >= 1
    return SymExpr({ONE: harmonic(m - 1), GAMMA_E: Q(-1)})


def _psi1_int(m: int) -> SymExpr:
    # psi'(m) for integer m >= 1
    return SymExpr({ZETA2: Q(1), ONE: -harmonic(m - 1, 2)})


def gamma_series(m: int, c: Scalar = 1, order: int = 1) -> EpsSeries:
    """Expansion of Gamma(m + c*eps) about eps = 0 for integer m.

    For m >= 1 the series is regular; for m <= 0 it has a simple pole.
    Supported through relative order 2.
    """
    c = Q(c)
    if c == 0:
        raise DomainError("gamma_series needs a nonzero eps coefficient")
    if m >= 1:
        if order - 0 > 2:
            raise UnsupportedOrderError("gamma_series supports relative order <= 2")
        psi = _psi_int(m)
        coeffs = [SYM_ONE, c * psi]
        if order >= 2:
            coeffs.append(c * c * Q(1, 2) * (psi * psi + _psi1_int(m)))
        return factorial(m - 1) * EpsSeries.from_coeffs(0, coeffs[: order + 1]).truncate(order)
    N = -m
    if order + 1 > 2:
        raise UnsupportedOrderError("gamma_series at poles supports order <= 1")
    # Gamma(c*eps) = 1/(c*eps) - gamma + c*eps*(gamma^2+zeta2)/2 + ...
    g_eps = EpsSeries.from_coeffs(
        -1,
        [
            SymExpr.scalar(Q(1) / c),
            SymExpr.of(GAMMA_E, -1),
            c * Q(1, 2) * SymExpr({GAMMA2: Q(1), ZETA2: Q(1)}),
        ],
    )
    hn = harmonic(N)
    hn2 = harmonic(N, 2)
    # prod_{j=1..N} 1/(1 - c*eps/j) = 1 + c*eps*H_N + (c*eps)^2 (H^2+H2)/2 + ...
    prodinv = EpsSeries.from_coeffs(0, [SYM_ONE, SymExpr.scalar(c * hn), SymExpr.scalar(c * c * (hn * hn + hn2) / 2)])
    sign = Q(-1) ** N / factorial(N)
    return (g_eps.mul(prodinv, order_cap=order) * sign).truncate(order)


def inv_gamma_series(m: int, c: Scalar = 1, order: int = 1) -> EpsSeries:
    """Expansion of 1/Gamma(m + c*eps) about eps = 0 for integer m."""
    c = Q(c)
    if c == 0:
        raise DomainError("inv_gamma_series needs a nonzero eps coefficient")
    if m >= 1:
        if order > 2:
            raise UnsupportedOrderError("inv_gamma_series supports relative order <= 2")
        psi = _psi_int(m)
        coeffs = [SYM_ONE, -c * psi]
        if order >= 2:
            coeffs.append(c * c * Q(1, 2) * (psi * psi - _psi1_int(m)))
        return EpsSeries.from_coeffs(0, coeffs[: order + 1]).truncate(order) * (1 / factorial(m - 1))
    N = -m
    if order - 1 > 2:
        raise UnsupportedOrderError("inv_gamma_series at zeros supports order <= 3")
    # 1/Gamma(c*eps) = c*eps*(1 + gamma*c*eps + (gamma^2 - zeta2)(c*eps)^2/2 + ...)
    inv_g = EpsSeries.from_coeffs(
        1,
        [
            SymExpr.scalar(c),
            c * c * SymExpr.of(GAMMA_E),
            c * c * c * Q(1, 2) * SymExpr({GAMMA2: Q(1), ZETA2: Q(-1)}),
        ],
    )
    hn = harmonic(N)
    hn2 = harmonic(N, 2)
    # prod_{j=1..N} (1 - c*eps/j) = 1 - c*eps*H_N + (c*eps)^2 (H^2-H2)/2 - ...
    prod = EpsSeries.from_coeffs(0, [SYM_ONE, SymExpr.scalar(-c * hn), SymExpr.scalar(c * c * (hn * hn - hn2) / 2)])
    sign = Q(-1) ** N * factorial(N)
    return (inv_g.mul(prod, order_cap=order) * sign).truncate(order)


def psi_series(m: int, c: Scalar = 1, order: int = 1) -> EpsSeries:
    """Expansion of psi(m + c*eps) about eps = 0 for integer m (order <= 1)."""
    c = Q(c)
    if order > 1:
        raise UnsupportedOrderError("psi_series supports order <= 1")
    if m >= 1:
        return EpsSeries.from_coeffs(0, [_psi_int(m), c * _psi1_int(m)]).truncate(order)
    N = -m
    return EpsSeries.from_coeffs(
        -1,
        [
            SymExpr.scalar(-1 / c),
            SymExpr({ONE: harmonic(N), GAMMA_E: Q(-1)}),
            c * SymExpr({ZETA2: Q(1), ONE: harmonic(N, 2)}),
        ],
    ).truncate(order)


def psi1_series(m: int, c: Scalar = 1, order: int = 0) -> EpsSeries:
    """Expansion of psi'(m + c*eps) about eps = 0 for integer m (order 0 only)."""
    c = Q(c)
    if order > 0:
        raise UnsupportedOrderError("psi1_series supports order 0 only")
    if m >= 1:
        return EpsSeries.from_coeffs(0, [_psi1_int(m)])
    N = -m
    return EpsSeries.from_coeffs(
        -2,
        [
            SymExpr.scalar(1 / (c * c)),
            SYM_ZERO,
            SymExpr({ZETA2: Q(1), ONE: harmonic(N, 2)}),
        ],
    )


# ---------------------------------------------------------------------------
# spec'd operations
# ---------------------------------------------------------------------------


def gamma_ratio_limit(N: int, orders: int = 1) -> EpsSeries:
    """Expansion of Gamma(eps)/Gamma(eps - N) = (-1)^N N! (1 - eps H_N + ...).

    The ratio is a polynomial in eps; coefficients are signed elementary
    symmetric functions of 1, 1/2, ..., 1/N.
    """
    if N < 0:
        raise DomainError("gamma_ratio_limit needs N >= 0")
    if orders > 2:
        raise UnsupportedOrderError("expansion depth capped at 2")
    hn = harmonic(N)
    hn2 = harmonic(N, 2)
    e = [Q(1), hn, (hn * hn - hn2) / 2]
    sign = Q(-1) ** N * factorial(N)
    coeffs = [SymExpr.scalar(sign * (Q(-1) ** k) * e[k]) for k in range(orders + 1)]
    return EpsSeries.from_coeffs(0, coeffs)


def polygamma_int(k: int, N: int) -> SymExpr:
    """psi(N) for k=0 and psi(1,N) for k=1, at integer N >= 1, zeta(2) symbolic."""
    if N < 1:
        raise DomainError("polygamma_int needs N >= 1")
    if k == 0:
        return _psi_int(N)
    if k == 1:
        return _psi1_int(N)
    raise UnsupportedOrderError("polygamma order k=%d unsupported (only k <= 1 needed)" % k)


def hypergeometric_2f1_unit(a: Scalar, n: int, c: Scalar) -> Fraction:
    """2F1(a, -n; c; 1) = (c-a)^(rising n) / c^(rising n) for integer n >= 0."""
    if n < 0:
        raise DomainError("needs integer n >= 0")
    a, c = Q(a), Q(c)
    den = rising(c, n)
    if den == 0:
        raise DomainError("pole: c^(rising n) vanishes for c=%s, n=%d" % (c, n))
    return rising(c - a, n) / den


def _poly_mul_linear(poly, shift):
    """poly(j) * (j + shift) with poly as coefficient list in j."""
    out = [Q(0)] * (len(poly) + 1)
    for i, c in enumerate(poly):
        out[i + 1] += c
        out[i] += c * shift
    return out


def _poly_shift_basis(poly):
    """Rewrite sum_i c_i j^i as sum_m d_m (j+1)^m."""
    # substitute j = (j+1) - 1
    out = [Q(0)] * len(poly)
    for i, c in enumerate(poly):
        # expand ( (j+1) - 1 )^i
        for m in range(i + 1):
            out[m] += c * binomial(i, m) * Q(-1) ** (i - m)
    return out


def f32_unit_negative(n: int, k: int) -> SymExpr:
    """3F2(1,1,n+k+1; 2,n+2; -1) for integers n >= 0, k >= 1, in span{1, ln2}."""
    num = [Q(1)]
    den = Q(1)
    for t in range(k - 1):
        num = _poly_mul_linear(num, Q(n + 2 + t))
        den *= Q(n + 2 + t)
    # series sum_j (-1)^j R(j)/(j+1), R = num/den
    d = _poly_shift_basis(num)
    out = SymExpr.of(LN2, d[0] / den)  # m = 0 term: sum (-1)^j/(j+1) = ln 2
    for m in range(1, len(d)):
        out = out + SymExpr.scalar(d[m] * eta_nonpositive(m - 1) / den)
    return out


def hypergeometric_f_expansion(n: int, k: int, a: Scalar, b: Scalar) -> EpsSeries:
    """Eps-expansion of 2F1(-n + a*eps, k + b*eps; -n+1 + a*eps; -1).

    Two closed cases: k = 0 (regular, through O(eps)) and k >= 1 (simple pole,
    through O(1)).  Coefficients lie in span{1, ln2}.
    """
    if n < 1:
        raise DomainError("needs n >= 1")
    if k < 0:
        raise DomainError("needs k >= 0")
    a, b = Q(a), Q(b)
    if a == 0:
        raise DomainError("degenerate parameter a = 0")
    if k == 0:
        sgn = Q(-1) ** n
        c0 = SymExpr.scalar(1 - sgn * b / a)
        inner = SymExpr.of(LN2, -1 + sgn)
        inner = inner + SymExpr.scalar(-sgn * (b / a) * harmonic(n - 1))
        inner = inner + SymExpr.scalar(sum(Q((-1) ** j, n - j) for j in range(1, n)))
        return EpsSeries.from_coeffs(0, [c0, b * inner])
    binom_kn = binomial(k + n - 1, n)
    pole = SymExpr.scalar(Q(-1) ** (n + 1) * n / a * binom_kn)
    const = SymExpr.scalar(1)
    const = const + SymExpr.scalar(Q(-1) ** n * binom_kn * (1 - (n * b / a) * (harmonic(k + n - 1) - harmonic(k - 1))))
    const = const + SymExpr.scalar(n * sum(Q(-1) ** j * rising(k, j) / ((n - j) * factorial(j)) for j in range(1, n)))
    const = const + (Q(-1) ** n * n * rising(k, n + 1) / factorial(n + 1)) * f32_unit_negative(n, k)
    return EpsSeries.from_coeffs(-1, [pole, const])
