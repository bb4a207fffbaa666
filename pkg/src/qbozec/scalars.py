"""Exact coefficient arithmetic: rationals with square-root adjunctions,
Laurent polynomials in q, and canonically normalized rational functions.

Every scalar in the library lives in K(q) where K is a compositum of real
quadratic extensions Q(sqrt(r)) grown on demand (square roots enter only
through isotropic crystal-operator coefficients).  Normal forms are exact
and canonical so equality, hashing, and serialization are stable.
"""

from __future__ import annotations

import math

try:
    from gmpy2 import mpq as Q  # noqa: N811 - fast exact rationals
except ImportError:  # pragma: no cover - gmpy2 is optional
    from fractions import Fraction as Q

Q0 = Q(0)
Q1 = Q(1)


class NotRegularAtZero(ArithmeticError):
    """Raised when evaluating at q = 0 a function with a pole there."""


class ScalarError(ValueError):
    pass


_SQUAREFREE_CACHE: dict[int, tuple[int, int]] = {}


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Write n = s * k^2 with s squarefree; returns (s, k).  Requires n >= 1."""
    if n < 1:
        raise ScalarError(f"radicand must be positive, got {n}")
    hit = _SQUAREFREE_CACHE.get(n)
    if hit is not None:
        return hit
    s, k, m, p = 1, 1, n, 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if e % 2:
                s *= p
            k *= p ** (e // 2)
        p += 1 if p == 2 else 2
    s *= m
    _SQUAREFREE_CACHE[n] = (s, k)
    return s, k


def _prime_factors(n: int) -> list[int]:
    out, m, p = [], n, 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        out.append(m)
    return out


class RadicalRational:
    """Element of the square-root compositum: a finite sum c_r * sqrt(r)
    over squarefree radicands r >= 1 with rational coefficients c_r."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: dict[int, Q]):
        # assumes radicands squarefree and coefficients nonzero
        self._terms = terms
        self._hash = None

    @staticmethod
    def from_rational(c) -> "RadicalRational":
        c = Q(c)
        return RadicalRational({} if c == 0 else {1: c})

    @staticmethod
    def sqrt_of_rational(c) -> "RadicalRational":
        """sqrt(a/b) normalized to (k/b) * sqrt(s) with s squarefree."""
        c = Q(c)
        if c < 0:
            raise ScalarError("negative radicand")
        if c == 0:
            return RR_ZERO
        a, b = int(c.numerator), int(c.denominator)
        s, k = squarefree_decompose(a * b)
        coeff = Q(k, b)
        return RadicalRational({s: coeff}) if s != 1 else RadicalRational({1: coeff})

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return not self._terms or set(self._terms) == {1}

    def rational_value(self) -> Q:
        if not self._terms:
            return Q0
        if set(self._terms) != {1}:
            raise ScalarError(f"not rational: {self}")
        return self._terms[1]

    def radicands(self) -> tuple[int, ...]:
        return tuple(sorted(self._terms))

    def __add__(self, other: "RadicalRational") -> "RadicalRational":
        if not other._terms:
            return self
        if not self._terms:
            return other
        terms = dict(self._terms)
        for r, c in other._terms.items():
            v = terms.get(r, Q0) + c
            if v == 0:
                terms.pop(r, None)
            else:
                terms[r] = v
        return RadicalRational(terms)

    def __neg__(self) -> "RadicalRational":
        return RadicalRational({r: -c for r, c in self._terms.items()})

    def __sub__(self, other: "RadicalRational") -> "RadicalRational":
        return self + (-other)

    def __mul__(self, other: "RadicalRational") -> "RadicalRational":
        if not self._terms or not other._terms:
            return RR_ZERO
        terms: dict[int, Q] = {}
        for r1, c1 in self._terms.items():
            for r2, c2 in other._terms.items():
                g = math.gcd(r1, r2)
                rad = (r1 // g) * (r2 // g)
                v = terms.get(rad, Q0) + c1 * c2 * g
                if v == 0:
                    terms.pop(rad, None)
                else:
                    terms[rad] = v
        return RadicalRational(terms)

    def scale(self, c) -> "RadicalRational":
        c = Q(c)
        if c == 0:
            return RR_ZERO
        return RadicalRational({r: v * c for r, v in self._terms.items()})

    def inverse(self) -> "RadicalRational":
        """Conjugate-norm descent: multiplying by the sqrt(p)-conjugate
        removes the prime p from every radicand in play."""
        if not self._terms:
            raise ZeroDivisionError("inverse of zero")
        primes: set[int] = set()
        for r in self._terms:
            primes.update(_prime_factors(r))
        if not primes:
            return RadicalRational({1: 1 / self._terms[1]})
        p = min(primes)
        conj = RadicalRational(
            {r: (-c if r % p == 0 else c) for r, c in self._terms.items()}
        )
        norm = self * conj  # lives in the subfield without sqrt(p)
        return conj * norm.inverse()

    def __truediv__(self, other: "RadicalRational") -> "RadicalRational":
        return self * other.inverse()

    def __eq__(self, other) -> bool:
        return isinstance(other, RadicalRational) and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            key = tuple(
                (r, int(c.numerator), int(c.denominator))
                for r, c in sorted(self._terms.items())
            )
            self._hash = hash(key)
        return self._hash

    def __str__(self) -> str:
        return format_radical(self)

    def __repr__(self) -> str:
        return f"RadicalRational({format_radical(self)})"


RR_ZERO = RadicalRational({})
RR_ONE = RadicalRational({1: Q1})


def _fmt_q(c: Q) -> str:
    return str(c)


def format_radical(x: RadicalRational) -> str:
    if not x._terms:
        return "0"
    parts = []
    for r, c in sorted(x._terms.items()):
        if r == 1:
            piece = _fmt_q(c)
        elif c == 1:
            piece = f"sqrt({r})"
        elif c == -1:
            piece = f"-sqrt({r})"
        else:
            piece = f"{_fmt_q(c)}*sqrt({r})"
        parts.append(piece)
    out = parts[0]
    for piece in parts[1:]:
        out += ("-" + piece[1:]) if piece.startswith("-") else ("+" + piece)
    return out


class LaurentPolynomial:
    """Sparse Laurent polynomial in q with RadicalRational coefficients."""

    __slots__ = ("_coeffs", "_hash")

    def __init__(self, coeffs: dict[int, RadicalRational]):
        self._coeffs = {e: c for e, c in coeffs.items() if not c.is_zero()}
        self._hash = None

    @staticmethod
    def constant(c: RadicalRational) -> "LaurentPolynomial":
        return LaurentPolynomial({0: c})

    @staticmethod
    def q_power(e: int) -> "LaurentPolynomial":
        return LaurentPolynomial({e: RR_ONE})

    def is_zero(self) -> bool:
        return not self._coeffs

    def coeff(self, e: int) -> RadicalRational:
        return self._coeffs.get(e, RR_ZERO)

    def items(self):
        return self._coeffs.items()

    def support(self) -> list[int]:
        return sorted(self._coeffs)

    def order(self) -> int:
        """Valuation at q = 0 (minimal exponent).  Undefined for 0."""
        if not self._coeffs:
            raise ScalarError("order of zero polynomial")
        return min(self._coeffs)

    def degree(self) -> int:
        if not self._coeffs:
            raise ScalarError("degree of zero polynomial")
        return max(self._coeffs)

    def __add__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        if not other._coeffs:
            return self
        if not self._coeffs:
            return other
        coeffs = dict(self._coeffs)
        for e, c in other._coeffs.items():
            v = coeffs.get(e)
            v = c if v is None else v + c
            if v.is_zero():
                coeffs.pop(e, None)
            else:
                coeffs[e] = v
        return LaurentPolynomial(coeffs)

    def __neg__(self) -> "LaurentPolynomial":
        return LaurentPolynomial({e: -c for e, c in self._coeffs.items()})

    def __sub__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        return self + (-other)

    def __mul__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        if not self._coeffs or not other._coeffs:
            return LP_ZERO
        coeffs: dict[int, RadicalRational] = {}
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                e = e1 + e2
                v = coeffs.get(e)
                w = c1 * c2
                v = w if v is None else v + w
                if v.is_zero():
                    coeffs.pop(e, None)
                else:
                    coeffs[e] = v
        return LaurentPolynomial(coeffs)

    def scale(self, c: RadicalRational) -> "LaurentPolynomial":
        if c.is_zero():
            return LP_ZERO
        return LaurentPolynomial({e: v * c for e, v in self._coeffs.items()})

    def shift(self, k: int) -> "LaurentPolynomial":
        return LaurentPolynomial({e + k: c for e, c in self._coeffs.items()})

    def bar(self) -> "LaurentPolynomial":
        """q -> q^{-1}."""
        return LaurentPolynomial({-e: c for e, c in self._coeffs.items()})

    def divexact(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        """Exact division; raises if the remainder is nonzero."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return LP_ZERO
        rem = dict(self._coeffs)
        out: dict[int, RadicalRational] = {}
        dtop = other.degree()
        dlead_inv = other.coeff(dtop).inverse()
        floor = self.order() - other.order()  # minimal possible quotient exponent
        while rem:
            top = max(rem)
            e = top - dtop
            if e < floor:
                raise ScalarError("inexact polynomial division")
            c = rem[top] * dlead_inv
            out[e] = c
            for eo, co in other._coeffs.items():
                k = eo + e
                v = rem.get(k, RR_ZERO) - co * c
                if v.is_zero():
                    rem.pop(k, None)
                else:
                    rem[k] = v
        return LaurentPolynomial(out)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LaurentPolynomial) and self._coeffs == other._coeffs
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(sorted(self._coeffs.items(), key=lambda t: t[0])))
        return self._hash

    def __str__(self) -> str:
        return format_laurent(self)

    def __repr__(self) -> str:
        return f"LaurentPolynomial({format_laurent(self)})"


LP_ZERO = LaurentPolynomial({})
LP_ONE = LaurentPolynomial({0: RR_ONE})


def format_laurent(p: LaurentPolynomial) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for e in sorted(p._coeffs, reverse=True):
        c = p._coeffs[e]
        cs = format_radical(c)
        multi = ("+" in cs[1:]) or ("-" in cs[1:])
        if e == 0:
            piece = f"({cs})" if multi else cs
        else:
            qs = "q" if e == 1 else f"q^{e}"
            if multi:
                piece = f"({cs})*{qs}"
            elif cs == "1":
                piece = qs
            elif cs == "-1":
                piece = f"-{qs}"
            else:
                piece = f"{cs}*{qs}"
        parts.append(piece)
    out = parts[0]
    for piece in parts[1:]:
        out += (" - " + piece[1:]) if piece.startswith("-") else (" + " + piece)
    return out


def _strip_normalize(num: LaurentPolynomial, den: LaurentPolynomial):
    """Normalize a fraction: den becomes a polynomial with constant term 1,
    all q-power shifts pushed into num."""
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return LP_ZERO, LP_ONE
    s = den.order()
    if s:
        den = den.shift(-s)
        num = num.shift(-s)
    u = den.coeff(0)
    if not (u.is_rational() and u.rational_value() == 1):
        inv = u.inverse()
        den = den.scale(inv)
        num = num.scale(inv)
    return num, den


def _poly_remainder(a: LaurentPolynomial, b: LaurentPolynomial) -> LaurentPolynomial:
    """Degree-wise remainder of a by b; both genuine polynomials, b != 0."""
    rem = dict(a._coeffs)
    dtop = b.degree()
    lead_inv = b.coeff(dtop).inverse()
    while rem and max(rem) >= dtop:
        top = max(rem)
        c = rem[top] * lead_inv
        e = top - dtop
        for eo, co in b._coeffs.items():
            k = eo + e
            v = rem.get(k, RR_ZERO) - co * c
            if v.is_zero():
                rem.pop(k, None)
            else:
                rem[k] = v
    return LaurentPolynomial(rem)


def _laurent_gcd(a: LaurentPolynomial, b: LaurentPolynomial) -> LaurentPolynomial:
    """gcd in K[q] of two polynomials with nonzero constant term, normalized
    to constant term 1.  (Stripping q-powers off remainders is harmless:
    the gcd has a nonzero constant term, so q never divides it.)"""
    while not b.is_zero():
        r = _poly_remainder(a, b)
        if not r.is_zero() and r.order():
            r = r.shift(-r.order())
        a, b = b, r
    u = a.coeff(0)
    if not (u.is_rational() and u.rational_value() == 1):
        a = a.scale(u.inverse())
    return a


class RationalFunction:
    """Element of K(q) in the canonical form num/den where den is a
    polynomial with constant term 1 coprime to num (q-shifts live in num)."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: LaurentPolynomial, den: LaurentPolynomial, _normalized=False):
        if not _normalized:
            num, den = _strip_normalize(num, den)
            if den != LP_ONE and not num.is_zero():
                g = _laurent_gcd(num.shift(-num.order()), den)
                if g != LP_ONE:
                    num = num.divexact(g)
                    den = den.divexact(g)
        self.num = num
        self.den = den
        self._hash = None

    @staticmethod
    def from_laurent(p: LaurentPolynomial) -> "RationalFunction":
        return RationalFunction(p, LP_ONE, _normalized=True)

    @staticmethod
    def from_rational(c) -> "RationalFunction":
        return RationalFunction.from_laurent(
            LaurentPolynomial.constant(RadicalRational.from_rational(c))
        )

    @staticmethod
    def from_radical(c: RadicalRational) -> "RationalFunction":
        return RationalFunction.from_laurent(LaurentPolynomial.constant(c))

    @staticmethod
    def q_power(e: int) -> "RationalFunction":
        return RationalFunction.from_laurent(LaurentPolynomial.q_power(e))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_laurent(self) -> bool:
        return self.den == LP_ONE

    def as_laurent(self) -> LaurentPolynomial:
        if self.den != LP_ONE:
            raise ScalarError(f"not a Laurent polynomial: {self}")
        return self.num

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.den == LP_ONE and other.den == LP_ONE:
            return RationalFunction(self.num + other.num, LP_ONE, _normalized=True)
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den, _normalized=True)

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-other)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        if self.is_zero() or other.is_zero():
            return RF_ZERO
        if self.den == LP_ONE and other.den == LP_ONE:
            return RationalFunction(self.num * other.num, LP_ONE, _normalized=True)
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        if other.is_zero():
            raise ZeroDivisionError("division by zero scalar")
        if self.is_zero():
            return RF_ZERO
        return RationalFunction(self.num * other.den, self.den * other.num)

    def inverse(self) -> "RationalFunction":
        return RF_ONE / self

    def bar(self) -> "RationalFunction":
        """The bar involution q -> q^{-1}."""
        return RationalFunction(self.num.bar(), self.den.bar())

    def order_at_zero(self) -> int:
        """Valuation at q = 0; raises on the zero function."""
        return self.num.order()

    def order_at_infinity(self) -> int:
        return self.bar().order_at_zero()

    def value_at_zero(self) -> RadicalRational:
        """Exact value at q = 0; raises NotRegularAtZero on a pole."""
        if self.is_zero():
            return RR_ZERO
        ordv = self.num.order()
        if ordv < 0:
            raise NotRegularAtZero(f"pole of order {-ordv} at q=0: {self}")
        if ordv > 0:
            return RR_ZERO
        return self.num.coeff(0)

    def series_at_zero(self, upto: int) -> dict[int, RadicalRational]:
        """Laurent-series coefficients at q = 0 for exponents < upto."""
        if self.is_zero():
            return {}
        lo = self.num.order()
        if lo >= upto:
            return {}
        # invert den = 1 + d as a power series up to the needed order
        need = upto - lo
        inv = {0: RR_ONE}
        d = {e: -c for e, c in self.den.items() if e != 0}
        for k in range(1, need):
            acc = RR_ZERO
            for e, c in d.items():
                if 0 <= k - e < k and (k - e) in inv:
                    acc = acc + c * inv[k - e]
            if not acc.is_zero():
                inv[k] = acc
        out: dict[int, RadicalRational] = {}
        for e1, c1 in self.num.items():
            for e2, c2 in inv.items():
                e = e1 + e2
                if e < upto:
                    v = out.get(e, RR_ZERO) + c1 * c2
                    if v.is_zero():
                        out.pop(e, None)
                    else:
                        out[e] = v
        return out

    def is_constant(self) -> bool:
        return self.is_zero() or (
            self.den == LP_ONE and self.num.support() == [0]
        )

    def constant_value(self) -> RadicalRational:
        if self.is_zero():
            return RR_ZERO
        if not self.is_constant():
            raise ScalarError(f"not constant: {self}")
        return self.num.coeff(0)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RationalFunction)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"RationalFunction({format_scalar(self)})"


RF_ZERO = RationalFunction.from_laurent(LP_ZERO)
RF_ONE = RationalFunction.from_laurent(LP_ONE)
RF_Q = RationalFunction.q_power(1)


def rf_int(n: int) -> RationalFunction:
    return RationalFunction.from_rational(n)


def _coeff_denominator_lcm(p: LaurentPolynomial) -> int:
    L = 1
    for _, c in p.items():
        for r, v in sorted(c._terms.items()):
            L = L * int(v.denominator) // math.gcd(L, int(v.denominator))
    return L


def format_scalar(f: RationalFunction) -> str:
    """Canonical string: num/den scaled to integer coefficients, den with a
    positive integer constant term, terms in descending powers of q."""
    if f.is_zero():
        return "0"
    L = _coeff_denominator_lcm(f.num)
    L = L * _coeff_denominator_lcm(f.den) // math.gcd(L, _coeff_denominator_lcm(f.den))
    scale = RadicalRational.from_rational(L)
    num, den = f.num.scale(scale), f.den.scale(scale)
    ns = format_laurent(num)
    if den == LaurentPolynomial.constant(RadicalRational.from_rational(L)) and L == 1:
        return ns
    ds = format_laurent(den)
    if " " in ns or ns.startswith("-"):
        ns = f"({ns})"
    if " " in ds:
        ds = f"({ds})"
    return f"{ns}/{ds}"


def q_integer(n: int, r: int = 1) -> RationalFunction:
    """[n]_i = (q_i^n - q_i^{-n})/(q_i - q_i^{-1}) with q_i = q^r."""
    if n == 0:
        return RF_ZERO
    sign = 1 if n > 0 else -1
    m = abs(n)
    # q_i^{m-1} + q_i^{m-3} + ... + q_i^{1-m}
    coeffs = {r * (m - 1 - 2 * k): RR_ONE for k in range(m)}
    p = RationalFunction.from_laurent(LaurentPolynomial(coeffs))
    return p if sign > 0 else -p


def q_factorial(n: int, r: int = 1) -> RationalFunction:
    if n < 0:
        raise ScalarError("factorial of negative integer")
    out = RF_ONE
    for k in range(2, n + 1):
        out = out * q_integer(k, r)
    return out


def qbinom(n: int, k: int, r: int = 1) -> RationalFunction:
    """Generalized Gaussian binomial [n; k]_i = prod_{s=1..k} [n+1-s]_i / [k]_i!.

    Defined for any integer n and k >= 0; the division is exact and the
    result is always a Laurent polynomial.
    """
    if k < 0:
        raise ScalarError("lower index must be nonnegative")
    if k == 0:
        return RF_ONE
    numer = RF_ONE
    for s in range(1, k + 1):
        numer = numer * q_integer(n + 1 - s, r)
    if numer.is_zero():
        return RF_ZERO
    denom = q_factorial(k, r)
    quotient = numer.as_laurent().divexact(denom.as_laurent())
    return RationalFunction.from_laurent(quotient)


def nu_syntactically_regular(f: RationalFunction) -> bool:
    """Syntactic check that f lies in 1 + q*Z>=0[[q]]: accepts exactly the
    written forms `1` and `1/(1 - p)` with p a nonnegative polynomial of
    positive order.  Anything else earns a warning (not an error)."""
    if f == RF_ONE:
        return True
    if f.num == LP_ONE:
        p = LP_ONE - f.den
        if p.is_zero():
            return True
        if p.order() >= 1 and all(
            c.is_rational() and c.rational_value() > 0 for _, c in p.items()
        ):
            return True
    return False
