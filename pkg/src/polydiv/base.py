"""Base varieties: P^1, A^1 and toric bases, with their divisors and functions.

On P^1 the affine coordinate is t = v/w, so infinity is the point [1:0].
Closed points away from infinity are monic irreducible polynomials in t.
Toric bases only carry divisors (one per ray); their sections are handled
character by character in :mod:`polydiv.algebra`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .convex import Quasifan
from .exactnum import (
    QQ,
    CannotFactor,
    Field,
    Poly,
    QuadElement,
    conjugate,
    factor_poly,
    is_irreducible,
)

INFINITE = math.inf


class UnsupportedBase(ValueError):
    pass


class ReducibleFactor(ValueError):
    pass


class ImageInSupport(ValueError):
    pass


class BaseMismatch(ValueError):
    pass


# --- prime divisors --------------------------------------------------------------

@dataclass(frozen=True)
class Infinity:
    def sort_key(self):
        return (1, ())

    def __str__(self):
        return "inf"


INFINITY = Infinity()


@dataclass(frozen=True)
class FinitePoint:
    """The closed point cut out by a monic irreducible polynomial."""

    poly: Poly
    asserted: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.poly.degree < 1 or not self.poly.is_monic():
            raise ValueError(f"point polynomial {self.poly} must be monic of positive degree")
        irr = is_irreducible(self.poly)
        if irr is False:
            raise ReducibleFactor(f"{self.poly} is reducible over {self.poly.field}")
        object.__setattr__(self, "asserted", irr is None)

    @classmethod
    def rational(cls, a, fld: Field = QQ) -> "FinitePoint":
        """The point t = a."""
        return cls(Poly.linear_root(a, fld))

    @property
    def degree(self) -> int:
        return self.poly.degree

    def sort_key(self):
        return (0, self.poly.sort_key())

    def __str__(self):
        return f"[{self.poly}]"


@dataclass(frozen=True)
class RayDivisor:
    """The torus-invariant prime divisor of the ray with this index."""

    index: int

    def sort_key(self):
        return (2, (self.index,))

    def __str__(self):
        return f"D{self.index}"


PrimeDivisor = Union[Infinity, FinitePoint, RayDivisor]


def point_degree(p: PrimeDivisor) -> int:
    if isinstance(p, FinitePoint):
        return p.degree
    if isinstance(p, Infinity):
        return 1
    raise UnsupportedBase("ray divisors have no degree")


def conjugate_point(p: PrimeDivisor) -> PrimeDivisor:
    if isinstance(p, FinitePoint):
        return FinitePoint(p.poly.conjugate())
    return p


# --- Q-divisors --------------------------------------------------------------------

class QDivisor(Mapping):
    """A finite Q-linear combination of prime divisors (zero entries dropped)."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Mapping | Iterable = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        acc: dict = {}
        for p, c in items:
            acc[p] = acc.get(p, Fraction(0)) + Fraction(c)
        self._entries = {p: c for p, c in sorted(acc.items(), key=lambda kv: kv[0].sort_key()) if c != 0}

    def __getitem__(self, p):
        return self._entries[p]

    def __iter__(self) -> Iterator:
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def coeff(self, p) -> Fraction:
        return self._entries.get(p, Fraction(0))

    def __add__(self, other: "QDivisor") -> "QDivisor":
        return QDivisor(list(self.items()) + list(other.items()))

    def __neg__(self):
        return QDivisor({p: -c for p, c in self.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k):
        return QDivisor({p: k * c for p, c in self.items()})

    def __eq__(self, other):
        if isinstance(other, QDivisor):
            return self._entries == other._entries
        if isinstance(other, Mapping):
            return self == QDivisor(other)
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._entries.items()))

    def __le__(self, other: "QDivisor") -> bool:
        return all(c >= 0 for c in (other - self).values())

    def __ge__(self, other):
        return other <= self

    def is_effective(self) -> bool:
        return all(c >= 0 for c in self.values())

    def restrict(self, keep) -> "QDivisor":
        return QDivisor({p: c for p, c in self.items() if keep(p)})

    def __repr__(self):
        return "{" + ", ".join(f"{p}: {c}" for p, c in self.items()) + "}"


def floor_divisor(D: QDivisor) -> QDivisor:
    return QDivisor({p: math.floor(c) for p, c in D.items()})


# --- base varieties ------------------------------------------------------------------

@dataclass(frozen=True)
class BaseVariety:
    """P1, A1 or a toric variety from a fan; P1 may have finitely many points removed."""

    kind: str
    field: Field = QQ
    fan: Quasifan | None = None
    removed: tuple = ()

    def __post_init__(self):
        if self.kind not in ("P1", "A1", "toric"):
            raise ValueError(f"unknown base kind {self.kind!r}")
        if self.kind == "toric":
            if self.fan is None:
                raise ValueError("a toric base needs a fan")
            if any(not c.is_pointed() for c in self.fan.maximal):
                raise ValueError("toric base fans must consist of pointed cones")
        removed = tuple(sorted(set(self.removed), key=lambda p: p.sort_key()))
        object.__setattr__(self, "removed", removed)

    @classmethod
    def P1(cls, fld: Field = QQ) -> "BaseVariety":
        return cls("P1", fld)

    @classmethod
    def A1(cls, fld: Field = QQ) -> "BaseVariety":
        return cls("A1", fld)

    @classmethod
    def toric(cls, fan: Quasifan, fld: Field = QQ) -> "BaseVariety":
        return cls("toric", fld, fan)

    @property
    def is_curve(self) -> bool:
        return self.kind in ("P1", "A1")

    @property
    def is_affine_curve(self) -> bool:
        return self.kind == "A1" or (self.kind == "P1" and bool(self.removed))

    @cached_property
    def rays(self) -> tuple:
        if self.kind != "toric":
            return ()
        return self.fan.rays

    def remove(self, points: Iterable[PrimeDivisor]) -> "BaseVariety":
        pts = set(self.removed) | set(points)
        if not pts:
            return self
        if self.kind == "P1" and INFINITY in pts:
            rest = tuple(p for p in pts if p != INFINITY)
            return BaseVariety("A1", self.field, None, rest)
        if self.kind == "toric":
            return BaseVariety("toric", self.field, self.fan, tuple(pts))
        return BaseVariety(self.kind, self.field, None, tuple(pts))

    def with_field(self, fld: Field) -> "BaseVariety":
        return BaseVariety(self.kind, fld, self.fan, self.removed)

    def contains_point(self, p: PrimeDivisor) -> bool:
        if p in self.removed:
            return False
        if self.kind == "toric":
            return isinstance(p, RayDivisor) and 0 <= p.index < len(self.rays)
        if isinstance(p, RayDivisor):
            return False
        if isinstance(p, Infinity):
            return self.kind == "P1"
        return self.field.is_rational and p.poly.is_rational() or not self.field.is_rational

    def describe(self) -> str:
        if self.kind == "toric":
            return f"toric base with rays {list(map(list, self.rays))} over {self.field}"
        name = "P1" if self.kind == "P1" else "A1"
        if self.removed:
            name += " minus " + ", ".join(str(p) for p in self.removed)
        return f"{name} over {self.field}"

    def __str__(self):
        return self.describe()


def degree(D: QDivisor, Y: BaseVariety) -> Fraction:
    if not Y.is_curve:
        raise UnsupportedBase("degree is defined on curve bases only")
    return sum((c * point_degree(p) for p, c in D.items()), Fraction(0))


# --- rational functions --------------------------------------------------------------

class RationalFunction:
    """constant * prod p_i^{e_i} with monic p_i in the coordinate t.

    Factors of degree >= 2 are split further when the factoring routine can;
    otherwise they are kept and trusted to be irreducible.
    """

    __slots__ = ("constant", "factors", "field")

    def __init__(self, constant=1, factors: Iterable[tuple[Poly, int]] = (), fld: Field | None = None):
        fs = list(factors)
        if fld is None:
            fld = next((p.field for p, _ in fs if not p.field.is_rational), None)
            if fld is None:
                fld = Field(constant.d) if isinstance(constant, QuadElement) and constant.b else QQ
        const = fld.coerce(constant)
        if not const:
            raise ValueError("rational functions must be nonzero")
        acc: dict[Poly, int] = {}
        for p, e in fs:
            if e == 0:
                continue
            p = p.over(fld) if p.field != fld else p
            if p.is_zero():
                raise ValueError("zero factor in a rational function")
            if p.degree == 0:
                const = const * p.coeffs[0] ** e
                continue
            if p.degree >= 2:
                try:
                    lead, parts = factor_poly(p)
                except CannotFactor:
                    lead, parts = p.lead(), [(p.monic(), 1)]
            else:
                lead, parts = p.lead(), [(p.monic(), 1)]
            const = const * lead ** e
            for q, k in parts:
                acc[q] = acc.get(q, 0) + k * e
        self.constant = const
        self.factors = tuple(sorted(((p, e) for p, e in acc.items() if e), key=lambda pe: pe[0].sort_key()))
        self.field = fld

    @classmethod
    def one(cls, fld: Field = QQ) -> "RationalFunction":
        return cls(1, (), fld)

    @classmethod
    def from_poly(cls, p: Poly) -> "RationalFunction":
        return cls(1, [(p, 1)], p.field)

    @classmethod
    def t(cls, fld: Field = QQ) -> "RationalFunction":
        return cls(1, [(Poly([0, 1], fld), 1)], fld)

    def over(self, fld: Field) -> "RationalFunction":
        return RationalFunction(self.constant, [(p.over(fld), e) for p, e in self.factors], fld)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        if not isinstance(other, RationalFunction):
            other = RationalFunction(other, (), self.field)
        fld = self.field if not self.field.is_rational else other.field
        return RationalFunction(
            fld.coerce(self.constant) * fld.coerce(other.constant), list(self.factors) + list(other.factors), fld
        )

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "RationalFunction":
        return RationalFunction(self.constant ** k, [(p, e * k) for p, e in self.factors], self.field)

    def inverse(self) -> "RationalFunction":
        return self ** -1

    def __truediv__(self, other):
        if not isinstance(other, RationalFunction):
            other = RationalFunction(other, (), self.field)
        return self * other.inverse()

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.constant == other.constant and self.factors == other.factors
        if isinstance(other, (int, Fraction, QuadElement)):
            return not self.factors and self.constant == other
        return NotImplemented

    def __hash__(self):
        return hash((self.constant, self.factors))

    def is_constant(self) -> bool:
        return not self.factors

    def conjugate(self) -> "RationalFunction":
        return RationalFunction(conjugate(self.constant), [(p.conjugate(), e) for p, e in self.factors], self.field)

    def numerator(self) -> Poly:
        out = Poly([self.constant], self.field)
        for p, e in self.factors:
            if e > 0:
                out = out * p ** e
        return out

    def denominator(self) -> Poly:
        out = Poly([1], self.field)
        for p, e in self.factors:
            if e < 0:
                out = out * p ** (-e)
        return out

    def as_polynomial(self) -> Poly | None:
        if any(e < 0 for _, e in self.factors):
            return None
        return self.numerator()

    def __call__(self, x):
        return self.numerator()(x) / self.denominator()(x)

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        parts = []
        if self.constant != 1 or not self.factors:
            parts.append(str(self.constant))
        for p, e in self.factors:
            s = f"({p})" if p.degree > 1 or p.coeffs[0] else str(p)
            parts.append(s if e == 1 else f"{s}^{e}")
        return "*".join(parts)


def divisor_of(f: RationalFunction, Y: BaseVariety) -> QDivisor:
    """Zeros minus poles of f, with infinity absorbing the degree on P1."""
    if not Y.is_curve:
        raise UnsupportedBase("rational functions on toric bases are out of scope")
    entries = []
    total = 0
    for p, e in f.factors:
        pt = FinitePoint(p.over(Y.field) if Y.field != p.field else p)
        entries.append((pt, e))
        total += e * p.degree
    D = QDivisor(entries)
    if Y.kind == "P1" and total:
        D = D + QDivisor({INFINITY: -total})
    return D.restrict(lambda p: p not in Y.removed)


def _sections_data(D: QDivisor, Y: BaseVariety):
    if not Y.is_curve:
        raise UnsupportedBase("section spaces on toric bases live in the algebra module")
    Df = floor_divisor(D).restrict(lambda p: Y.contains_point(p))
    factors = [(p.poly, -int(c)) for p, c in Df.items() if isinstance(p, FinitePoint)]
    base = RationalFunction(1, factors, Y.field)
    return Df, base


def global_sections_dim(D: QDivisor, Y: BaseVariety):
    """dim H^0(Y, O(floor D)); INFINITE on affine curves whenever nonzero."""
    if not Y.is_curve:
        raise UnsupportedBase("section spaces on toric bases live in the algebra module")
    if Y.is_affine_curve:
        return INFINITE
    deg = degree(floor_divisor(D), Y)
    return int(deg) + 1 if deg >= 0 else 0


def global_sections_basis(D: QDivisor, Y: BaseVariety, degree_bound: int | None = None) -> list[RationalFunction]:
    """Basis t^k * N of H^0(O(floor D)) with N = prod p^(-floor c_p).

    On affine curves the space is infinite dimensional, so only the sections
    whose numerator has degree <= degree_bound are returned.
    """
    Df, base = _sections_data(D, Y)
    t = RationalFunction.t(Y.field)
    if Y.is_affine_curve:
        if degree_bound is None:
            raise ValueError("affine bases need a numerator degree bound")
        if Y.kind == "P1":
            raise UnsupportedBase("section bases on P1 minus finite points are not implemented")
        top = degree_bound - base.numerator().degree
    else:
        top = int(degree(Df, Y))
    return [base * t ** k if k else base for k in range(top + 1)]


def in_sections(f: RationalFunction, D: QDivisor, Y: BaseVariety) -> bool:
    """div(f) + floor(D) >= 0 on Y."""
    return (divisor_of(f, Y) + floor_divisor(D).restrict(Y.contains_point)).is_effective()


# --- semilinear base maps ---------------------------------------------------------------

def _hom_eval(p: Poly, G: Poly, H: Poly, e: int) -> tuple[Poly, int]:
    """Dehomogenized P(G, H) for P the degree-deg(p) form of p; returns (poly, form degree)."""
    n = p.degree
    out = Poly([], G.field)
    for k, c in enumerate(p.coeffs):
        out = out + (G ** k) * (H ** (n - k)) * c
    return out, n * e


def _zeros_of_form(Q: Poly, form_degree: int, fld: Field, moebius: bool) -> QDivisor:
    entries = []
    if Q.degree > 0:
        if moebius:
            entries.append((FinitePoint(Q.monic()), 1))
        else:
            _, parts = factor_poly(Q)
            entries += [(FinitePoint(q), k) for q, k in parts]
    if form_degree > Q.degree:
        entries.append((INFINITY, form_degree - Q.degree))
    return QDivisor(entries)


@dataclass(frozen=True)
class SemilinearBaseMap:
    """psi(P) = [G(gamma P) : H(gamma P)] for binary forms G, H of degree e.

    G and H are stored dehomogenized (w = 1).  ``twist`` is the conjugation of
    Q(sqrt d) when True.  Degree-one maps are the Moebius transformations
    with matrix [[a, b], [c, d]], i.e. t -> (a gamma(t) + b) / (c gamma(t) + d).
    """

    G: Poly
    H: Poly
    e: int
    twist: bool
    field: Field
    kind: str = "P1"

    def __post_init__(self):
        if self.G.degree > self.e or self.H.degree > self.e or max(self.G.degree, self.H.degree) < self.e:
            raise ValueError("forms G, H must have degree e with no common factor at infinity")
        if self.kind == "toric" and self.e != 1:
            raise UnsupportedBase("toric bases only admit identity maps")
        if self.e == 1:
            (a, b), (c, d) = self.matrix
            if a * d - b * c == 0:
                raise ImageInSupport("Moebius matrix is singular; the map is constant")
            if self.kind == "A1" and c != 0:
                raise UnsupportedBase("maps of A1 must fix infinity")

    @classmethod
    def moebius(cls, matrix, twist: bool = False, fld: Field = QQ, kind: str = "P1") -> "SemilinearBaseMap":
        (a, b), (c, d) = matrix
        return cls(Poly([b, a], fld), Poly([d, c], fld), 1, twist, fld, kind)

    @classmethod
    def identity(cls, fld: Field = QQ, twist: bool = False, kind: str = "P1") -> "SemilinearBaseMap":
        return cls.moebius(((1, 0), (0, 1)), twist, fld, kind)

    @classmethod
    def from_forms(cls, G: Poly, H: Poly, e: int, fld: Field = QQ) -> "SemilinearBaseMap":
        return cls(G.over(fld), H.over(fld), e, False, fld, "P1")

    @property
    def matrix(self):
        if self.e != 1:
            raise ValueError("only degree-one maps have a matrix")
        z = self.field.zero()
        g = list(self.G.coeffs) + [z] * (2 - len(self.G.coeffs))
        h = list(self.H.coeffs) + [z] * (2 - len(self.H.coeffs))
        return ((g[1], g[0]), (h[1], h[0]))

    @property
    def is_moebius(self) -> bool:
        return self.e == 1

    def _gamma(self, x):
        return conjugate(x) if self.twist else x

    def _gamma_poly(self, p: Poly) -> Poly:
        return p.conjugate() if self.twist else p

    def compose(self, first: "SemilinearBaseMap") -> "SemilinearBaseMap":
        """self o first."""
        G1 = self._gamma_poly(first.G)
        H1 = self._gamma_poly(first.H)
        G, _ = _hom_eval_form(self.G, self.e, G1, H1, first.e)
        H, _ = _hom_eval_form(self.H, self.e, G1, H1, first.e)
        kind = self.kind if self.kind == first.kind else "P1"
        return SemilinearBaseMap(G, H, self.e * first.e, self.twist != first.twist, self.field, kind)

    def inverse(self) -> "SemilinearBaseMap":
        """Inverse of a Moebius map: matrix gamma(A^-1) with the same twist."""
        (a, b), (c, d) = self.matrix
        det = a * d - b * c
        inv = ((d / det, -b / det), (-c / det, a / det))
        g = self._gamma
        return SemilinearBaseMap.moebius(
            ((g(inv[0][0]), g(inv[0][1])), (g(inv[1][0]), g(inv[1][1]))), self.twist, self.field, self.kind
        )

    def is_identity(self) -> bool:
        return not self.twist and self == SemilinearBaseMap.identity(self.field, False, self.kind)

    def __eq__(self, other):
        if not isinstance(other, SemilinearBaseMap):
            return NotImplemented
        return (
            self.twist == other.twist
            and self.e == other.e
            and _proportional(self.G, self.H, other.G, other.H)
        )

    def __hash__(self):
        return hash((self.twist, self.e))

    def pullback_function(self, f: RationalFunction) -> RationalFunction:
        """psi* f = (gamma f) o (gamma R) where R = G / H."""
        if self.kind == "toric":
            raise UnsupportedBase("rational functions on toric bases are out of scope")
        fld = self.field
        f = f.over(fld) if f.field != fld else f
        G = self._gamma_poly(self.G)
        H = self._gamma_poly(self.H)
        factors = []
        for p, k in f.factors:
            Q, form_deg = _hom_eval(self._gamma_poly(p), G, H, self.e)
            factors.append((Q, k))
            factors.append((H, -k * p.degree))
        return RationalFunction(self._gamma(f.constant), factors, fld)

    def pullback_point(self, P: PrimeDivisor) -> QDivisor:
        if isinstance(P, RayDivisor):
            return QDivisor({P: 1})
        G = self._gamma_poly(self.G)
        H = self._gamma_poly(self.H)
        if isinstance(P, Infinity):
            return _zeros_of_form(H, self.e, self.field, self.is_moebius)
        Q, form_deg = _hom_eval(self._gamma_poly(P.poly.over(self.field)), G, H, self.e)
        return _zeros_of_form(Q, form_deg, self.field, self.is_moebius)

    def pullback_divisor(self, D: QDivisor) -> QDivisor:
        if self.kind == "toric":
            if self.e != 1 or self.matrix[0][1] or self.matrix[1][0] or self.matrix[0][0] != self.matrix[1][1]:
                raise UnsupportedBase("toric bases only admit identity maps")
            return D
        out = QDivisor()
        for P, c in D.items():
            out = out + c * self.pullback_point(P)
        return out

    def __str__(self):
        tw = "gamma o " if self.twist else ""
        if self.e == 1:
            (a, b), (c, d) = self.matrix
            return f"{tw}[{a} v + {b} w : {c} v + {d} w]"
        return f"{tw}[{self.G} : {self.H}] (degree {self.e})"


def _hom_eval_form(P: Poly, e_p: int, G: Poly, H: Poly, e: int) -> tuple[Poly, int]:
    """Dehomogenized P(G, H) where P is read as a form of degree e_p."""
    out = Poly([], G.field)
    for k in range(e_p + 1):
        c = P.coeffs[k] if k < len(P.coeffs) else 0
        if c:
            out = out + (G ** k) * (H ** (e_p - k)) * c
    return out, e_p * e


def _proportional(G1: Poly, H1: Poly, G2: Poly, H2: Poly) -> bool:
    return (G1 * H2 - G2 * H1).is_zero()


def pullback_divisor(psi: SemilinearBaseMap, D: QDivisor) -> QDivisor:
    return psi.pullback_divisor(D)
