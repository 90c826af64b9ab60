"""
Exact scalars in the rational function field Q(t).

The quantum parameter is q = t**2, so q**(1/2) = t and every power of q
that shows up in the standard R-matrices is a Laurent monomial in t.

A Scalar is stored as a reduced fraction num/den of integer polynomials
(python-flint ``fmpz_poly``).  The canonical form has gcd(num, den) = 1
in Z[t] (no common polynomial factor, no common integer content) and a
positive leading coefficient on the denominator, so equal values have
identical representations.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

from flint import fmpq, fmpz, fmpz_poly

__all__ = [
    "Scalar",
    "ScalarError",
    "ZeroDivision",
    "T",
    "Q",
    "LAMBDA",
    "ZERO",
    "ONE",
    "as_scalar",
    "parse_scalar",
    "qpow",
]


class ScalarError(ValueError):
    pass


class ZeroDivision(ZeroDivisionError, ScalarError):
    """Division by the zero scalar."""


_P_ONE = fmpz_poly([1])
_P_ZERO = fmpz_poly([])


def _normalize(num, den):
    if num == 0:
        return _P_ZERO, _P_ONE
    if den == 0:
        raise ZeroDivision("zero denominator")
    if den.degree() > 0 and num.degree() >= 0:
        g = num.gcd(den)
        if g.degree() > 0:
            num = num / g
            den = den / g
    c = fmpz(num.content()).gcd(fmpz(den.content()))
    if c != 1:
        num = num / c
        den = den / c
    if den.leading_coefficient() < 0:
        num = -num
        den = -den
    return num, den


class Scalar:
    """An element of Q(t), immutable."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=None, _reduced=False):
        if isinstance(num, Scalar):
            self.num, self.den = num.num, num.den
            self._hash = None
            return
        if not isinstance(num, fmpz_poly):
            if isinstance(num, Rational) and not isinstance(num, int):
                num = Fraction(num)
                den = fmpz_poly([num.denominator]) if den is None else den * num.denominator
                num = fmpz_poly([num.numerator])
            else:
                num = fmpz_poly([int(num)])
        if den is None:
            den = _P_ONE
        elif not isinstance(den, fmpz_poly):
            den = fmpz_poly([int(den)])
        if not _reduced:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    # construction helpers

    @classmethod
    def monomial(cls, k: int, coeff=1) -> "Scalar":
        """coeff * t**k for any integer k."""
        c = int(coeff)
        if c == 0:
            return ZERO
        if k >= 0:
            return cls(fmpz_poly([0] * k + [c]), _P_ONE, _reduced=True)
        num, den = fmpz_poly([c]), fmpz_poly([0] * (-k) + [1])
        return cls(num, den, _reduced=(c in (1, -1)))

    @classmethod
    def from_coeffs(cls, num_coeffs, den_coeffs=(1,)) -> "Scalar":
        return cls(fmpz_poly(list(num_coeffs)), fmpz_poly(list(den_coeffs)))

    # predicates

    def is_zero(self) -> bool:
        return self.num == 0

    def __bool__(self):
        return self.num != 0

    def is_one(self) -> bool:
        return self.den == 1 and self.num == 1

    def is_polynomial(self) -> bool:
        return self.den == 1

    # arithmetic

    def __add__(self, other):
        if not isinstance(other, Scalar):
            other = as_scalar(other)
        if other.num == 0:
            return self
        if self.num == 0:
            return other
        if self.den == other.den:
            num = self.num + other.num
            if self.den == 1:
                return Scalar(num, _P_ONE, _reduced=True)
            return Scalar(num, self.den)
        return Scalar(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            other = as_scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return as_scalar(other) - self

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, int):
                if other == 0:
                    return ZERO
                return Scalar(self.num * other, self.den)
            other = as_scalar(other)
        if self.num == 0 or other.num == 0:
            return ZERO
        if self.den == 1 and other.den == 1:
            return Scalar(self.num * other.num, _P_ONE, _reduced=True)
        return Scalar(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.num == 0:
            raise ZeroDivision("inverse of zero scalar")
        num, den = self.den, self.num
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        return Scalar(num, den, _reduced=True)

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            other = as_scalar(other)
        if other.num == 0:
            raise ZeroDivision("division by zero scalar")
        return self * other.inverse()

    def __rtruediv__(self, other):
        return as_scalar(other) / self

    def __pow__(self, k: int):
        k = int(k)
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return ONE
        return Scalar(self.num ** k, self.den ** k, _reduced=True)

    # comparison

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = as_scalar(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(int(c) for c in self.num.coeffs()),
                               tuple(int(c) for c in self.den.coeffs())))
        return self._hash

    # substitutions

    def at(self, t0) -> Fraction:
        """Evaluate at a rational point; raises ZeroDivision on a pole."""
        x = fmpq(Fraction(t0).numerator, Fraction(t0).denominator)
        d = self.den(x)
        if d == 0:
            raise ZeroDivision(f"pole at t = {t0}")
        v = self.num(x) / d
        return Fraction(int(v.p), int(v.q))

    def subs_power(self, k: int) -> "Scalar":
        """Substitute t -> t**k (k may be negative)."""
        if k == 1:
            return self
        if k > 0:
            x = fmpz_poly([0] * k + [1])
            return Scalar(self.num(x), self.den(x))
        if k == -1:
            return self._invert_variable()
        return self._invert_variable().subs_power(-k)

    def _invert_variable(self) -> "Scalar":
        # t -> 1/t: p(1/t) = rev(p)/t^deg p
        a, b = self.num, self.den
        if a == 0:
            return ZERO
        da, db = a.degree(), b.degree()
        ra = fmpz_poly(list(reversed(a.coeffs())))
        rb = fmpz_poly(list(reversed(b.coeffs())))
        shift = db - da
        if shift >= 0:
            return Scalar(ra * fmpz_poly([0] * shift + [1]), rb)
        return Scalar(ra, rb * fmpz_poly([0] * (-shift) + [1]))

    # display

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        n = _poly_str(self.num)
        if self.den == 1:
            return n
        d = _poly_str(self.den)
        if len(self.num.coeffs()) > 1 or n.startswith("-"):
            n = f"({n})"
        if len([c for c in self.den.coeffs() if c != 0]) > 1 or (
                self.den.degree() > 0 and self.den.leading_coefficient() != 1):
            d = f"({d})"
        return f"{n}/{d}"


def _poly_str(p) -> str:
    coeffs = [int(c) for c in p.coeffs()]
    if not coeffs:
        return "0"
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = str(a)
        else:
            mono = "t" if k == 1 else f"t^{k}"
            body = mono if a == 1 else f"{a}*{mono}"
        parts.append((sign, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


ZERO = Scalar(_P_ZERO, _P_ONE, _reduced=True)
ONE = Scalar(_P_ONE, _P_ONE, _reduced=True)
T = Scalar.monomial(1)
Q = Scalar.monomial(2)
LAMBDA = Q - Q.inverse()


def qpow(k) -> Scalar:
    """q**k for integer or half-integer k."""
    twice = Fraction(k) * 2
    if twice.denominator != 1:
        raise ScalarError(f"q**{k}: exponent must be a half-integer")
    return Scalar.monomial(int(twice))


def as_scalar(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)) or isinstance(x, Rational):
        return Scalar(x)
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Scalar")


def parse_scalar(text: str, root: int = 1) -> Scalar:
    """Parse an expression in t and q, e.g. ``"q - q^-1"``.

    The base variable is q**(1/(2*root)); with the default root = 1 it is
    t = q**(1/2).  Fractional powers of q must land on integral powers of it.
    """
    import sympy

    t, q, x = sympy.symbols("t q x", positive=True)
    src = text.replace("^", "**")
    try:
        expr = sympy.sympify(src, locals={"t": t, "q": q, "lam": q - 1 / q})
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise ScalarError(f"cannot parse scalar expression {text!r}") from exc
    if not isinstance(expr, sympy.Expr):
        raise ScalarError(f"not a scalar expression: {text!r}")
    expr = sympy.powsimp(sympy.expand_power_base(expr.subs({q: x ** (2 * root), t: x ** root})), force=True)
    expr = sympy.together(expr)
    if expr.free_symbols - {x}:
        raise ScalarError(f"unknown symbols in {text!r}: {expr.free_symbols - {x}}")
    num, den = sympy.fraction(expr)
    try:
        pn = sympy.Poly(sympy.expand(num), x, domain="QQ")
        pd = sympy.Poly(sympy.expand(den), x, domain="QQ")
    except sympy.PolynomialError as exc:
        raise ScalarError(f"{text!r} is not rational in q^(1/{2 * root})") from exc
    return _from_qq_coeffs(pn.all_coeffs()[::-1]) / _from_qq_coeffs(pd.all_coeffs()[::-1])


def _from_qq_coeffs(coeffs) -> Scalar:
    fr = [Fraction(int(c.p), int(c.q)) for c in coeffs]
    lcm = 1
    for f in fr:
        lcm = lcm * f.denominator // math.gcd(lcm, f.denominator)
    return Scalar(fmpz_poly([int(f * lcm) for f in fr]), fmpz_poly([lcm]))
