"""Exact arithmetic: rationals, quadratic fields Q(sqrt d) and dense polynomials.

Rationals are :class:`fractions.Fraction`.  Elements of Q(sqrt d) are
:class:`QuadElement`; an element with zero irrational part compares equal to
(and hashes like) the corresponding Fraction, so rational data can be mixed
freely into quadratic computations.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union


class DegreeTooHigh(ValueError):
    pass


class FieldMismatch(ValueError):
    pass


def squarefree_part(n: int) -> int:
    """Squarefree part of n, keeping the sign."""
    sign = -1 if n < 0 else 1
    n = abs(n)
    out = 1
    p = 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
        if n % p == 0:
            out *= p
            n //= p
        p += 1
    return sign * out * n


def is_squarefree(n: int) -> bool:
    return n != 0 and squarefree_part(n) == n


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    q = Fraction(q)
    if q < 0:
        return None
    a, b = q.numerator, q.denominator
    ra, rb = math.isqrt(a), math.isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    return None


@dataclass(frozen=True)
class Field:
    """Q (``d is None``) or the quadratic field Q(sqrt d)."""

    d: int | None = None

    def __post_init__(self):
        if self.d is not None and (self.d in (0, 1) or not is_squarefree(self.d)):
            raise ValueError(f"d={self.d} is not a squarefree integer != 0, 1")

    @property
    def is_rational(self) -> bool:
        return self.d is None

    def __call__(self, x) -> "Scalar":
        return self.coerce(x)

    def coerce(self, x) -> "Scalar":
        if isinstance(x, QuadElement):
            if x.b == 0:
                return x.a if self.d is None else QuadElement(x.a, Fraction(0), self.d)
            if x.d != self.d:
                raise FieldMismatch(f"{x} does not lie in {self}")
            return x
        x = Fraction(x)
        return x if self.d is None else QuadElement(x, Fraction(0), self.d)

    def zero(self):
        return self.coerce(0)

    def one(self):
        return self.coerce(1)

    def sqrt_d(self) -> "QuadElement":
        if self.d is None:
            raise ValueError("Q has no distinguished square root")
        return QuadElement(Fraction(0), Fraction(1), self.d)

    def contains(self, x) -> bool:
        if isinstance(x, QuadElement):
            return x.b == 0 or x.d == self.d
        return True

    def __str__(self):
        return "Q" if self.d is None else f"Q(sqrt {self.d})"

    @classmethod
    def parse(cls, text: str) -> "Field":
        text = text.strip()
        if text == "Q":
            return cls(None)
        m = re.fullmatch(r"Q\(\s*sqrt\s*\(?\s*(-?\d+)\s*\)?\s*\)", text)
        if not m:
            raise ValueError(f"cannot parse field {text!r}")
        return cls(int(m.group(1)))


QQ = Field(None)


@dataclass(frozen=True, eq=False)
class QuadElement:
    """a + b*sqrt(d) with rational a, b."""

    a: Fraction
    b: Fraction
    d: int

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    def _lift(self, other):
        if isinstance(other, QuadElement):
            if other.d != self.d and other.b != 0 and self.b != 0:
                raise FieldMismatch(f"cannot combine elements of Q(sqrt {self.d}) and Q(sqrt {other.d})")
            if other.d != self.d and other.b == 0:
                return QuadElement(other.a, 0, self.d)
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElement(Fraction(other), Fraction(0), self.d)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadElement(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadElement(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadElement(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadElement(self.a * o.a + self.d * self.b * o.b, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self) -> "QuadElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadElement(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = QuadElement(Fraction(1), Fraction(0), self.d)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, QuadElement):
            if self.b == 0 and other.b == 0:
                return self.a == other.a
            return self.d == other.d and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def is_rational(self) -> bool:
        return self.b == 0

    def __repr__(self):
        return f"QuadElement({self})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[Fraction, QuadElement]


def conjugate(x):
    """The nontrivial automorphism of Q(sqrt d); identity on Q."""
    if isinstance(x, QuadElement):
        return QuadElement(x.a, -x.b, x.d)
    return x


def field_sqrt(x, field: Field):
    """A square root of x inside ``field``, or None."""
    x = field.coerce(x)
    if field.d is None:
        return rational_sqrt(x)
    d = field.d
    p, q = x.a, x.b
    if q == 0:
        r = rational_sqrt(p)
        if r is not None:
            return QuadElement(r, 0, d)
        r = rational_sqrt(p / d)
        if r is not None:
            return QuadElement(0, r, d)
        return None
    # (u + v sqrt d)^2 = p + q sqrt d  =>  u^2 + d v^2 = p, 2uv = q
    n = rational_sqrt(p * p - d * q * q)
    if n is None:
        return None
    for u2 in ((p + n) / 2, (p - n) / 2):
        u = rational_sqrt(u2)
        if u:
            v = q / (2 * u)
            return QuadElement(u, v, d)
    return None


def format_scalar(x) -> str:
    if isinstance(x, QuadElement):
        if x.b == 0:
            return str(x.a)
        irr = f"{x.b}*sqrt({x.d})"
        if x.a == 0:
            return irr
        if x.b < 0:
            return f"{x.a}-{-x.b}*sqrt({x.d})"
        return f"{x.a}+{irr}"
    return str(Fraction(x))


_RAT = r"\d+(?:/\d+)?"
_SCALAR = re.compile(
    rf"^(?P<a>[+-]?{_RAT})?(?:(?P<sign>[+-])?(?P<b>{_RAT})?\*?sqrt\((?P<d>-?\d+)\))?$"
)


_PURE = re.compile(rf"^(?P<b>[+-]?{_RAT})\*sqrt\((?P<d>-?\d+)\)$")


def parse_scalar(text, field: Field = QQ):
    """Parse "p/q" or "a+b*sqrt(d)" into an element of ``field``."""
    if isinstance(text, int):
        return field.coerce(text)
    s = str(text).replace(" ", "")
    pure = _PURE.match(s)
    if pure:
        if field.d != int(pure.group("d")):
            raise FieldMismatch(f"{text!r} is not an element of {field}")
        return field.coerce(QuadElement(0, Fraction(pure.group("b")), field.d))
    m = _SCALAR.match(s)
    if not s or not m or (m.group("a") is None and m.group("d") is None):
        raise ValueError(f"cannot parse scalar {text!r}")
    a = Fraction(m.group("a")) if m.group("a") else Fraction(0)
    if m.group("d") is None:
        return field.coerce(a)
    d = int(m.group("d"))
    if field.d != d:
        raise FieldMismatch(f"{text!r} is not an element of {field}")
    b = Fraction(m.group("b")) if m.group("b") else Fraction(1)
    if m.group("sign") == "-":
        b = -b
    elif m.group("sign") is None and m.group("a") is not None and m.group("b") is None:
        raise ValueError(f"cannot parse scalar {text!r}")
    return field.coerce(QuadElement(a, b, d))


class Poly:
    """Dense univariate polynomial over a :class:`Field`, ascending coefficients."""

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs: Iterable = (), field: Field = QQ):
        cs = [field.coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)
        self.field = field

    @classmethod
    def monomial(cls, k: int, field: Field = QQ, c=1) -> "Poly":
        return cls([0] * k + [c], field)

    @classmethod
    def constant(cls, c, field: Field = QQ) -> "Poly":
        return cls([c], field)

    @classmethod
    def linear_root(cls, r, field: Field = QQ) -> "Poly":
        """The monic polynomial t - r."""
        return cls([-field.coerce(r), 1], field)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero()

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def monic(self) -> "Poly":
        lc = self.lead()
        return Poly([c / lc for c in self.coeffs], self.field)

    def over(self, field: Field) -> "Poly":
        return Poly(self.coeffs, field)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.field == self.field or other.field.is_rational:
                return other.over(self.field)
            raise FieldMismatch(f"cannot mix polynomials over {self.field} and {other.field}")
        return Poly([other], self.field)

    def _common(self, other):
        if isinstance(other, Poly) and self.field.is_rational and not other.field.is_rational:
            return self.over(other.field), other
        return self, self._coerce(other)

    def __add__(self, other):
        p, o = self._common(other)
        n = max(len(p.coeffs), len(o.coeffs))
        z = p.field.zero()
        a = p.coeffs + (z,) * (n - len(p.coeffs))
        b = o.coeffs + (z,) * (n - len(o.coeffs))
        return Poly([x + y for x, y in zip(a, b)], p.field)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs], self.field)

    def __sub__(self, other):
        p, o = self._common(other)
        return p + (-o)

    def __rsub__(self, other):
        p, o = self._common(other)
        return o + (-p)

    def __mul__(self, other):
        self, o = self._common(other)
        if not self.coeffs or not o.coeffs:
            return Poly([], self.field)
        out = [self.field.zero()] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if not x:
                continue
            for j, y in enumerate(o.coeffs):
                out[i + j] = out[i + j] + x * y
        return Poly(out, self.field)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly([1], self.field)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other):
        self, o = self._common(other)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [self.field.zero()] * max(len(rem) - len(o.coeffs) + 1, 0)
        lc = o.lead()
        while len(rem) >= len(o.coeffs) and rem:
            shift = len(rem) - len(o.coeffs)
            c = rem[-1] / lc
            q[shift] = c
            for j, y in enumerate(o.coeffs):
                rem[shift + j] = rem[shift + j] - c * y
            rem.pop()
            while rem and not rem[-1]:
                rem.pop()
        return Poly(q, self.field), Poly(rem, self.field)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = self.field.zero() if not isinstance(x, Poly) else Poly([], self.field)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner: "Poly") -> "Poly":
        return self(inner)

    def conjugate(self) -> "Poly":
        return Poly([conjugate(c) for c in self.coeffs], self.field)

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:], self.field)

    def is_rational(self) -> bool:
        return all(not isinstance(c, QuadElement) or c.b == 0 for c in self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, QuadElement)):
            return self.coeffs == Poly([other], self.field).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def sort_key(self):
        return (self.degree, tuple(_scalar_key(c) for c in self.coeffs))

    def __repr__(self):
        return f"Poly({self}, {self.field})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            cs = format_scalar(c)
            if isinstance(c, QuadElement) and c.b != 0 and c.a != 0:
                cs = f"({cs})"
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            elif mono:
                terms.append(f"{cs}*{mono}")
            else:
                terms.append(cs)
        return " + ".join(terms).replace("+ -", "- ")


def _scalar_key(c):
    if isinstance(c, QuadElement):
        return (c.a, c.b)
    return (Fraction(c), Fraction(0))


def poly_gcd(p: Poly, q: Poly) -> Poly:
    while not q.is_zero():
        p, q = q, p % q
    return p.monic() if not p.is_zero() else p


def poly_roots_quadratic(p: Poly, field: Field | None = None) -> list:
    """Roots of a polynomial of degree <= 2 lying in its field, with multiplicity."""
    field = field or p.field
    p = p.over(field)
    if p.degree > 2:
        raise DegreeTooHigh(f"degree {p.degree} > 2")
    if p.degree <= 0:
        return []
    if p.degree == 1:
        b, a = p.coeffs
        return [-b / a]
    c, b, a = p.coeffs
    disc = b * b - 4 * a * c
    r = field_sqrt(disc, field)
    if r is None:
        return []
    r1 = (-b + r) / (2 * a)
    r2 = (-b - r) / (2 * a)
    return sorted([field.coerce(r1), field.coerce(r2)], key=_scalar_key)


def rational_roots(p: Poly) -> list[Fraction]:
    """Distinct rational roots of a polynomial with rational coefficients."""
    if not p.is_rational():
        raise ValueError("rational root test needs rational coefficients")
    cs = [Fraction(c.a) if isinstance(c, QuadElement) else Fraction(c) for c in p.coeffs]
    while cs and cs[0] == 0:
        cs.pop(0)
    roots = []
    if len(p.coeffs) > len(cs) and p.degree > 0:
        roots.append(Fraction(0))
    if len(cs) <= 1:
        return roots
    den = math.lcm(*(c.denominator for c in cs))
    ints = [int(c * den) for c in cs]
    a0, an = abs(ints[0]), abs(ints[-1])
    q = Poly(cs, QQ)
    for num in _divisors(a0):
        for dd in _divisors(an):
            for sgn in (1, -1):
                r = Fraction(sgn * num, dd)
                if r not in roots and q(r) == 0:
                    roots.append(r)
    return sorted(roots)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [i for i in range(1, math.isqrt(n) + 1) if n % i == 0]
    return sorted(set(small + [n // i for i in small]))


class CannotFactor(ValueError):
    pass


def factor_poly(p: Poly) -> tuple[object, list[tuple[Poly, int]]]:
    """Factor ``p`` into its leading coefficient and monic irreducible factors.

    Only the cases needed for desk-scale bases are handled: linear factors are
    peeled off by the rational root test (rational coefficients) and the
    quadratic formula; what remains must have degree <= 2, or be a rational
    cubic without rational roots.  Anything else raises :class:`CannotFactor`.
    """
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    field = p.field
    lead = p.lead()
    rest = p.monic()
    out: dict[Poly, int] = {}

    def peel(root):
        nonlocal rest
        lin = Poly.linear_root(root, field)
        while True:
            q, r = divmod(rest, lin)
            if not r.is_zero():
                break
            rest = q
            out[lin] = out.get(lin, 0) + 1

    if rest.is_rational() and rest.degree > 2:
        for r in rational_roots(rest):
            peel(r)
    while rest.degree > 0:
        if rest.degree <= 2:
            roots = poly_roots_quadratic(rest)
            if not roots:
                out[rest] = out.get(rest, 0) + 1
                rest = Poly([1], field)
            else:
                for r in roots:
                    if rest.degree > 0:
                        peel(r)
            continue
        if rest.degree == 3 and rest.is_rational() and not rational_roots(rest):
            # a root in Q(sqrt d) \ Q would pair with its conjugate and force a rational one
            out[rest] = out.get(rest, 0) + 1
            rest = Poly([1], field)
            continue
        raise CannotFactor(f"cannot factor {rest} over {field}")
    return lead, sorted(out.items(), key=lambda kv: kv[0].sort_key())


def is_irreducible(p: Poly) -> bool | None:
    """Irreducibility over p.field; None when it cannot be certified (degree >= 4)."""
    if p.degree <= 0:
        return False
    if p.degree == 1:
        return True
    if p.degree == 2:
        return not poly_roots_quadratic(p)
    if p.degree == 3:
        if p.is_rational():
            return not rational_roots(p)
        return None
    return None


def content_lcm(values: Sequence[Fraction]) -> int:
    return math.lcm(*(Fraction(v).denominator for v in values)) if values else 1
