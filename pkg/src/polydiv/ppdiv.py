"""Polyhedral divisors, plurifunctions and morphisms between them.

A polyhedral divisor is a finite sum of coefficients Delta_D (polyhedra with a
common pointed tail omega, or Empty) over prime divisors D of a base.  Prime
divisors without an entry carry the neutral coefficient omega.

Order convention: D1 <= D2 means D1(m) <= D2(m) for every m in the dual of
omega, i.e. every coefficient of D2 is contained in the matching coefficient
of D1 (larger divisors have smaller polyhedra, and Empty is the largest).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .base import (
    INFINITY,
    BaseMismatch,
    BaseVariety,
    FinitePoint,
    Infinity,
    PrimeDivisor,
    QDivisor,
    RationalFunction,
    SemilinearBaseMap,
    UnsupportedBase,
    degree,
    divisor_of,
)
from .convex import (
    INF,
    Cone,
    Empty,
    PolyhedronCoefficient,
    TailedPolyhedron,
    common_refinement,
    minkowski_sum,
)
from .exactnum import Field, poly_roots_quadratic, rational_roots, Poly
from .lattice import LatticeMorphism, RankMismatch, dot


class InvalidPPDivisor(ValueError):
    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


class OutsideWeightCone(ValueError):
    pass


class TailNotMapped(ValueError):
    pass


class ChainMismatch(ValueError):
    pass


class CannotCertifySplitting(ValueError):
    pass


def _sort_entries(entries: Mapping) -> dict:
    return dict(sorted(entries.items(), key=lambda kv: kv[0].sort_key()))


class PolyhedralDivisor:
    """sum of Delta_D (x) D over prime divisors of ``base`` with tail ``tail``."""

    def __init__(
        self,
        tail: Cone,
        base: BaseVariety,
        entries: Mapping[PrimeDivisor, PolyhedronCoefficient] | Iterable = (),
        proper_by_construction: bool = False,
        interpretation: str | None = None,
    ):
        items = list(entries.items()) if isinstance(entries, Mapping) else list(entries)
        self.tail = tail
        self.lattice_rank = tail.rank
        self.base = base
        self.proper_by_construction = proper_by_construction
        self.interpretation = interpretation
        problems = []
        seen = set()
        for D, _ in items:
            if D in seen:
                problems.append(f"prime divisor {D} listed twice")
            seen.add(D)
        self.entries: dict = _sort_entries(dict(items))
        problems += self.problems()
        if problems:
            raise InvalidPPDivisor(problems)

    def problems(self) -> list[str]:
        out = []
        if not self.tail.is_pointed():
            out.append("tail cone is not pointed")
        for D, c in self.entries.items():
            if not self.base.contains_point(D):
                out.append(f"entry {D} is not a prime divisor of {self.base.describe()}")
            if c.rank != self.lattice_rank:
                out.append(f"entry {D}: coefficient has rank {c.rank}, lattice has rank {self.lattice_rank}")
            elif isinstance(c, TailedPolyhedron) and c.tail != self.tail:
                out.append(f"entry {D}: coefficient tail {c.tail!r} differs from the tail cone {self.tail!r}")
        return out

    # --- coefficient access ---------------------------------------------------------

    @cached_property
    def tail_point(self) -> TailedPolyhedron:
        return TailedPolyhedron.point((0,) * self.lattice_rank, self.tail)

    @cached_property
    def weight_cone(self) -> Cone:
        return self.tail.dual()

    def coefficient(self, D: PrimeDivisor) -> PolyhedronCoefficient:
        return self.entries.get(D, self.tail_point)

    def empty_points(self) -> list[PrimeDivisor]:
        return [D for D, c in self.entries.items() if isinstance(c, Empty)]

    def polyhedra(self) -> list[TailedPolyhedron]:
        return [c for c in self.entries.values() if isinstance(c, TailedPolyhedron)]

    def loc(self) -> BaseVariety:
        return self.base.remove(self.empty_points())

    def fiber_polyhedron(self, y: PrimeDivisor) -> PolyhedronCoefficient:
        """Minkowski sum of the coefficients of the entries through y (omega if none)."""
        out: PolyhedronCoefficient = self.tail_point
        for D, c in self.entries.items():
            if D == y:
                out = minkowski_sum(out, c)
        return out

    # --- evaluation --------------------------------------------------------------------

    def support(self, D: PrimeDivisor, m: Sequence[int]):
        return self.coefficient(D).support(m)

    def evaluate(self, m: Sequence[int]) -> QDivisor:
        """D(m) = sum h_D(m) D on Loc(D)."""
        if len(m) != self.lattice_rank:
            raise RankMismatch("weight has the wrong rank")
        if not self.weight_cone.contains(m):
            raise OutsideWeightCone(f"{tuple(m)} is outside the weight cone")
        return QDivisor(
            {D: c.support(m) for D, c in self.entries.items() if not isinstance(c, Empty) and D not in self.base.removed}
        )

    def degree_at(self, m: Sequence[int]) -> Fraction:
        return degree(self.evaluate(m), self.loc())

    @cached_property
    def refinement(self):
        return common_refinement([p.normal_quasifan for p in self.polyhedra()], self.weight_cone)

    def test_points(self) -> list[tuple[int, ...]]:
        return self.refinement.test_points()

    # --- structure -----------------------------------------------------------------------

    def _canonical(self) -> dict:
        return {D: c for D, c in self.entries.items() if not (isinstance(c, TailedPolyhedron) and c == self.tail_point)}

    def __eq__(self, other):
        if not isinstance(other, PolyhedralDivisor):
            return NotImplemented
        return (
            self.tail == other.tail
            and self.base == other.base
            and _coeff_dict_eq(self._canonical(), other._canonical())
        )

    def __hash__(self):
        return hash((self.lattice_rank, len(self._canonical())))

    def __add__(self, other: "PolyhedralDivisor") -> "PolyhedralDivisor":
        self._check_compatible(other)
        keys = list(self.entries) + [D for D in other.entries if D not in self.entries]
        entries = {D: minkowski_sum(self.coefficient(D), other.coefficient(D)) for D in keys}
        return PolyhedralDivisor(self.tail, self.base, entries)

    def _check_compatible(self, other: "PolyhedralDivisor") -> None:
        if self.base != other.base or self.tail != other.tail:
            raise BaseMismatch("polyhedral divisors live on different bases or tails")

    def with_base(self, base: BaseVariety) -> "PolyhedralDivisor":
        return PolyhedralDivisor(self.tail, base, self.entries, self.proper_by_construction, self.interpretation)

    def __repr__(self):
        parts = [f"{c!r}⊗{D}" for D, c in self.entries.items()]
        return f"PolyhedralDivisor({' + '.join(parts) or '0'} on {self.base.describe()})"


def _coeff_dict_eq(a: dict, b: dict) -> bool:
    if set(a) != set(b):
        return False
    for D in a:
        x, y = a[D], b[D]
        if isinstance(x, Empty) or isinstance(y, Empty):
            if not (isinstance(x, Empty) and isinstance(y, Empty)):
                return False
        elif x != y:
            return False
    return True


def evaluate(D: PolyhedralDivisor, m: Sequence[int]) -> QDivisor:
    return D.evaluate(m)


def loc(D: PolyhedralDivisor) -> BaseVariety:
    return D.loc()


def fiber_polyhedron(D: PolyhedralDivisor, y: PrimeDivisor) -> PolyhedronCoefficient:
    return D.fiber_polyhedron(y)


# --- properness -------------------------------------------------------------------------

@dataclass
class PropernessCertificate:
    semiample_checks: list[tuple[tuple[int, ...], Fraction]]
    big_checks: list[tuple[tuple[int, ...], Fraction]]
    semiample: bool
    big: bool
    reason: str = ""

    @property
    def proper(self) -> bool:
        return self.semiample and self.big

    def __bool__(self):
        return self.proper


def is_proper(D: PolyhedralDivisor) -> PropernessCertificate:
    """Certify the two evaluation conditions on a curve base.

    m -> deg D(m) is concave and piecewise linear on the common refinement of
    the normal quasifans, so nonnegativity at the generators of its maximal
    cones gives nonnegativity on the whole weight cone.  A concave, positively
    homogeneous, nonnegative function vanishing at one interior point vanishes
    identically, so positivity at a single interior sample gives bigness.
    """
    if D.base.kind == "toric":
        if D.proper_by_construction:
            return PropernessCertificate([], [], True, True, "proper by construction (toric downgrade)")
        raise UnsupportedBase("properness is only certified on curve bases")
    Y = D.loc()
    if Y.is_affine_curve:
        return PropernessCertificate([], [], True, True, f"{Y.describe()} is affine: every divisor is semiample and big")
    gens = []
    for c in D.refinement.maximal:
        for g in c.generators:
            if g not in gens:
                gens.append(tuple(g))
    semi = [(g, degree(D.evaluate(g), Y)) for g in sorted(gens)]
    inner = D.weight_cone.interior_sample()
    big = [(inner, degree(D.evaluate(inner), Y))]
    return PropernessCertificate(
        semi,
        big,
        all(d >= 0 for _, d in semi),
        all(d > 0 for _, d in big),
        "degree checks on the common refinement of the normal quasifans",
    )


def leq(D1: PolyhedralDivisor, D2: PolyhedralDivisor) -> bool:
    """D1 <= D2 as divisor-valued functions: each D2 coefficient sits inside the D1 one."""
    D1._check_compatible(D2)
    for D in set(D1.entries) | set(D2.entries):
        c1, c2 = D1.coefficient(D), D2.coefficient(D)
        if isinstance(c2, Empty):
            continue
        if isinstance(c1, Empty) or not c1.contains(c2):
            return False
    return True


# --- plurifunctions ------------------------------------------------------------------------

class Plurifunction:
    """sum v_i (x) f_i in N (x) k(Y)*; evaluates to prod f_i^<m, v_i>."""

    def __init__(self, rank: int, terms: Iterable[tuple[Sequence[int], RationalFunction]] = ()):
        self.rank = rank
        ts = []
        for v, f in terms:
            v = tuple(int(x) for x in v)
            if len(v) != rank:
                raise RankMismatch(f"plurifunction vector {v} does not have rank {rank}")
            ts.append((v, f))
        self.terms = tuple(ts)

    @classmethod
    def trivial(cls, rank: int) -> "Plurifunction":
        return cls(rank, ())

    def evaluate(self, m: Sequence[int], fld: Field | None = None) -> RationalFunction:
        if len(m) != self.rank:
            raise RankMismatch("plurifunction evaluated at a weight of the wrong rank")
        out = RationalFunction.one(fld) if fld is not None else RationalFunction.one()
        for v, f in self.terms:
            k = dot(m, v)
            if k:
                out = out * f ** k
        return out

    __call__ = evaluate

    def canonical(self) -> tuple[RationalFunction, ...]:
        """Values on the standard basis of M; two plurifunctions are equal iff these agree."""
        basis = [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]
        return tuple(self.evaluate(e) for e in basis)

    def __eq__(self, other):
        if not isinstance(other, Plurifunction):
            return NotImplemented
        return self.rank == other.rank and self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def is_trivial(self) -> bool:
        return all(f == 1 for f in self.canonical())

    def __mul__(self, other: "Plurifunction") -> "Plurifunction":
        if other.rank != self.rank:
            raise RankMismatch("multiplying plurifunctions of different ranks")
        return Plurifunction(self.rank, self.terms + other.terms)

    def inverse(self) -> "Plurifunction":
        return Plurifunction(self.rank, [(tuple(-x for x in v), f) for v, f in self.terms])

    def pushforward(self, F: LatticeMorphism) -> "Plurifunction":
        return Plurifunction(F.target, [(F(v), f) for v, f in self.terms])

    def pullback(self, psi: SemilinearBaseMap) -> "Plurifunction":
        return Plurifunction(self.rank, [(v, psi.pullback_function(f)) for v, f in self.terms])

    def simplified(self) -> "Plurifunction":
        basis = [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]
        return Plurifunction(self.rank, [(e, f) for e, f in zip(basis, self.canonical()) if f != 1])

    def __repr__(self):
        return "Plurifunction(" + " + ".join(f"{v}⊗{f}" for v, f in self.terms) + ")"


def pluri_eval(f: Plurifunction, m: Sequence[int]) -> RationalFunction:
    return f.evaluate(m)


def pluri_divisor(f: Plurifunction, tail: Cone, Y: BaseVariety) -> PolyhedralDivisor:
    """div(f) = sum (v_i + omega) (x) div(f_i).

    The coefficient at a prime D collects to the lattice translate w_D + omega
    with w_D = sum ord_D(f_i) v_i, which is invertible in the Grothendieck group.
    """
    if not Y.is_curve:
        raise UnsupportedBase("plurifunction divisors need a curve base")
    acc: dict = {}
    for v, g in f.terms:
        for D, k in divisor_of(g, Y).items():
            w = acc.get(D, (0,) * f.rank)
            acc[D] = tuple(a + k * b for a, b in zip(w, v))
    entries = {D: TailedPolyhedron.point(w, tail) for D, w in acc.items() if any(w)}
    return PolyhedralDivisor(tail, Y, entries)


def add_principal(D: PolyhedralDivisor, f: Plurifunction) -> PolyhedralDivisor:
    """D + div(f), keeping Empty entries."""
    P = pluri_divisor(f, D.tail, D.base)
    return D + P


# --- pushforward and pullback ---------------------------------------------------------------

def pushforward(F: LatticeMorphism, D: PolyhedralDivisor, target_tail: Cone) -> PolyhedralDivisor:
    if F.source != D.lattice_rank or F.target != target_tail.rank:
        raise RankMismatch("lattice map does not match the ranks")
    if not all(target_tail.contains(F(g)) for g in D.tail.generators):
        raise TailNotMapped("F does not map the tail cone into the target tail")
    entries = {}
    for P, c in D.entries.items():
        entries[P] = Empty(F.target, target_tail) if isinstance(c, Empty) else c.linear_image(F, target_tail)
    return PolyhedralDivisor(target_tail, D.base, entries)


def pullback(psi: SemilinearBaseMap, D: PolyhedralDivisor, base: BaseVariety | None = None) -> PolyhedralDivisor:
    """psi*(D): each coefficient moves to the prime divisors of psi*(D), scaled by multiplicity."""
    base = base if base is not None else D.base
    acc: dict = {}
    for P, c in D.entries.items():
        for Q, k in psi.pullback_divisor(QDivisor({P: 1})).items():
            if isinstance(c, Empty):
                piece = c
            else:
                piece = c.scale(int(k)) if k != 1 else c
            acc[Q] = minkowski_sum(acc[Q], piece) if Q in acc else piece
    return PolyhedralDivisor(D.tail, base, acc)


# --- morphisms --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PPDivMorphism:
    """(psi, F, f) with psi: Y -> Y', F: N -> N' and f a plurifunction in N' (x) k(Y)*."""

    psi: SemilinearBaseMap
    F: LatticeMorphism
    f: Plurifunction

    def __post_init__(self):
        if self.f.rank != self.F.target:
            raise RankMismatch("plurifunction rank must equal the target lattice rank")

    @classmethod
    def identity(cls, D: PolyhedralDivisor) -> "PPDivMorphism":
        kind = D.base.kind if D.base.kind != "A1" else "A1"
        return cls(
            SemilinearBaseMap.identity(D.base.field, False, kind),
            LatticeMorphism.identity(D.lattice_rank),
            Plurifunction.trivial(D.lattice_rank),
        )

    def __eq__(self, other):
        if not isinstance(other, PPDivMorphism):
            return NotImplemented
        return self.psi == other.psi and self.F == other.F and self.f == other.f

    def __hash__(self):
        return hash(self.F)

    def is_identity(self) -> bool:
        return (
            self.psi.is_identity()
            and self.F == LatticeMorphism.identity(self.F.source)
            and self.f.is_trivial()
        )


def compose(t2: PPDivMorphism, t1: PPDivMorphism) -> PPDivMorphism:
    """(psi2 o psi1, F2 o F1, F2_*(f1) * psi1^*(f2))."""
    if t2.F.source != t1.F.target:
        raise ChainMismatch("lattice maps do not chain")
    if t1.psi.field != t2.psi.field:
        raise ChainMismatch("base maps live over different fields")
    psi = t2.psi.compose(t1.psi)
    F = t2.F.compose(t1.F)
    f = t1.f.pushforward(t2.F) * t2.f.pullback(t1.psi)
    return PPDivMorphism(psi, F, f)


@dataclass
class MorphismReport:
    ok: bool
    failures: list[tuple[str, tuple[int, ...], object, object]] = field(default_factory=list)
    checked: list[tuple[int, ...]] = field(default_factory=list)

    def __bool__(self):
        return self.ok

    def lines(self) -> list[str]:
        return [f"at {D}, m={m}: {lhs} vs {rhs}" for D, m, lhs, rhs in self.failures]


def _compare(t: PPDivMorphism, D: PolyhedralDivisor, Dp: PolyhedralDivisor, equality: bool) -> MorphismReport:
    F, psi = t.F, t.psi
    if F.source != D.lattice_rank or F.target != Dp.lattice_rank:
        raise ChainMismatch("lattice map does not match the divisors")
    if not all(Dp.tail.contains(F(g)) for g in D.tail.generators):
        raise TailNotMapped("F does not map tail(D) into tail(D')")
    base = D.base
    pushed = pushforward(F, D, Dp.tail)
    pulled = pullback(psi, Dp, base)
    failures = []
    lhs_empty = set(pulled.empty_points())
    rhs_empty = set(D.empty_points())
    bad = (lhs_empty ^ rhs_empty) if equality else (lhs_empty - rhs_empty)
    for P in sorted(bad, key=lambda p: p.sort_key()):
        failures.append((str(P), (), "empty" if P in lhs_empty else "finite", "empty" if P in rhs_empty else "finite"))
    polys = pulled.polyhedra() + pushed.polyhedra()
    points = common_refinement([p.normal_quasifan for p in polys], Dp.weight_cone).test_points()
    keep = lambda P: P not in rhs_empty and P not in lhs_empty and P not in base.removed
    for m in points:
        lhs = pulled.evaluate(m).restrict(keep)
        rhs = (pushed.evaluate(m) + divisor_of(t.f.evaluate(m, base.field), base)).restrict(keep)
        diff = rhs - lhs
        for P in sorted(set(lhs) | set(rhs), key=lambda p: p.sort_key()):
            c = diff.coeff(P)
            if c < 0 or (equality and c != 0):
                failures.append((str(P), tuple(m), lhs.coeff(P), rhs.coeff(P)))
    return MorphismReport(not failures, failures, points)


def is_morphism(t: PPDivMorphism, D: PolyhedralDivisor, Dp: PolyhedralDivisor) -> MorphismReport:
    """psi*(D') <= F_*(D) + div(f), checked by evaluation on refinement test points."""
    return _compare(t, D, Dp, equality=False)


def is_isomorphic_image(t: PPDivMorphism, D: PolyhedralDivisor, Dp: PolyhedralDivisor) -> MorphismReport:
    """The equality psi*(D') = F_*(D) + div(f)."""
    return _compare(t, D, Dp, equality=True)


# --- base change ------------------------------------------------------------------------------

def split_point(P: PrimeDivisor, L: Field) -> list[PrimeDivisor]:
    """Prime divisors over L lying over a point defined over Q."""
    if not isinstance(P, FinitePoint):
        return [P]
    p = P.poly.over(L)
    if P.degree == 1:
        return [FinitePoint(p)]
    if P.degree == 2:
        roots = poly_roots_quadratic(p)
        if roots:
            return [FinitePoint(Poly.linear_root(r, L)) for r in roots]
        return [FinitePoint(p)]
    if P.degree == 3 and P.poly.is_rational() and not rational_roots(P.poly):
        # an irreducible rational cubic has no root in a quadratic field
        return [FinitePoint(p)]
    raise CannotCertifySplitting(f"cannot certify the splitting of {P.poly} over {L}")


def base_change(D: PolyhedralDivisor, d: int) -> PolyhedralDivisor:
    if not D.base.is_curve:
        raise UnsupportedBase("base change is implemented for curve bases")
    if not D.base.field.is_rational:
        raise ValueError("base change starts from a divisor over Q")
    L = Field(d)
    entries = {}
    for P, c in D.entries.items():
        for Q in split_point(P, L):
            entries[Q] = c
    removed = [Q for P in D.base.removed for Q in split_point(P, L)]
    base = BaseVariety(D.base.kind, L, None, tuple(removed))
    return PolyhedralDivisor(D.tail, base, entries, D.proper_by_construction, D.interpretation)


def conjugate_divisor(D: PolyhedralDivisor) -> PolyhedralDivisor:
    from .base import conjugate_point

    return PolyhedralDivisor(
        D.tail, D.base, {conjugate_point(P): c for P, c in D.entries.items()}, D.proper_by_construction
    )
