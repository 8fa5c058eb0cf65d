"""Exact rational convex geometry: cones, quasifans and tailed polyhedra.

Everything rests on one primitive, :func:`cone_from_inequalities`, which turns
an H-description {x : <a_i, x> >= 0} into a lineality basis plus the extreme
rays of the pointed part.  For the ranks in scope (at most 4, plus one for
homogenization) enumerating tight row subsets is instant.

Polyhedra are handled through homogenization: conv(V) + tail corresponds to
the cone over {(v, 1)} and {(t, 0)} one dimension up.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence, Union

from .lattice import (
    LatticeMorphism,
    determinant,
    RankMismatch,
    dot,
    inverse,
    nullspace,
    primitive,
    rank as matrix_rank,
    rref,
)

INF = math.inf
NEG_INF = -math.inf


class NotPointed(ValueError):
    pass


class NotInDual(ValueError):
    pass


class OutsideDual(ValueError):
    pass


class Inconsistent(ValueError):
    pass


class RankTooHigh(ValueError):
    pass


class EmptyPolyhedron(ValueError):
    pass


def _dedupe_rows(rows: Iterable[Sequence]) -> list[tuple[int, ...]]:
    seen = []
    for r in rows:
        if any(x != 0 for x in r):
            p = primitive(r)
            if p not in seen:
                seen.append(p)
    return seen


def _span_basis(vectors: Sequence[Sequence], n: int) -> tuple[tuple[int, ...], ...]:
    """Canonical integer basis (primitive rows of the RREF) of a subspace."""
    red, _ = rref(vectors, n)
    return tuple(primitive(r) for r in red)


def _kernel_vector(eqs: Sequence[Sequence], n: int) -> tuple | None:
    """Generator of the kernel of n - 1 equations, or None if it is larger.

    Cofactor expansion: the i-th entry is (-1)^i times the minor without column i.
    """
    k = []
    for i in range(n):
        minor = [tuple(r[j] for j in range(n) if j != i) for r in eqs]
        d = determinant(minor) if minor else Fraction(1)
        k.append(d if i % 2 == 0 else -d)
    return tuple(k) if any(k) else None


def cone_from_inequalities(rows: Sequence[Sequence], n: int) -> tuple[tuple, tuple]:
    """H -> V for {x in Q^n : <a, x> >= 0 for a in rows}.

    Returns (lineality basis, extreme rays of the cone intersected with the
    orthogonal complement of the lineality space), all primitive integer
    vectors, rays sorted.
    """
    return _cone_from_inequalities(tuple(_dedupe_rows(rows)), n)


@lru_cache(maxsize=65536)
def _cone_from_inequalities(rows: tuple, n: int) -> tuple[tuple, tuple]:
    lin = nullspace(rows, n) if rows else [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    lin_basis = _span_basis(lin, n) if lin else ()
    l = len(lin_basis)
    need = n - 1 - l
    rays: list[tuple[int, ...]] = []
    if need >= 0:
        for subset in itertools.combinations(rows, need):
            k = _kernel_vector(list(subset) + list(lin_basis), n)
            if k is None:
                continue
            for sgn in (1, -1):
                cand = tuple(sgn * x for x in k)
                if all(dot(a, cand) >= 0 for a in rows):
                    p = primitive(cand)
                    if p not in rays:
                        rays.append(p)
                    break
    return lin_basis, tuple(sorted(rays))


class Cone:
    """A rational polyhedral cone in Q^rank.

    ``rays`` are the primitive extreme rays of the pointed part (the cone cut
    with the complement of its lineality space) and ``lineality`` is a basis of
    the lineality space.  ``generators`` lists rays followed by +-lineality.
    """

    __slots__ = ("rank", "rays", "lineality", "__dict__")

    def __init__(self, rank: int, rays: Sequence, lineality: Sequence = ()):
        self.rank = rank
        self.rays = tuple(tuple(r) for r in rays)
        self.lineality = tuple(tuple(v) for v in lineality)

    @classmethod
    def from_generators(cls, generators: Iterable[Sequence], rank: int) -> "Cone":
        gens = _dedupe_rows(generators)
        for g in gens:
            if len(g) != rank:
                raise RankMismatch(f"generator {g} does not have rank {rank}")
        dual_lin, dual_rays = cone_from_inequalities(gens, rank)
        dual_gens = list(dual_rays) + list(dual_lin) + [tuple(-x for x in v) for v in dual_lin]
        lin, rays = cone_from_inequalities(dual_gens, rank)
        c = cls(rank, rays, lin)
        c.__dict__["halfspaces"] = tuple(dual_gens)
        return c

    @classmethod
    def from_inequalities(cls, rows: Iterable[Sequence], rank: int) -> "Cone":
        lin, rays = cone_from_inequalities(list(rows), rank)
        return cls(rank, rays, lin)

    @classmethod
    def zero(cls, rank: int) -> "Cone":
        return cls(rank, (), ())

    @classmethod
    def whole(cls, rank: int) -> "Cone":
        return cls.from_generators([], rank).dual()

    @classmethod
    def orthant(cls, rank: int) -> "Cone":
        return cls.from_generators([[int(i == j) for j in range(rank)] for i in range(rank)], rank)

    @cached_property
    def generators(self) -> tuple[tuple[int, ...], ...]:
        return self.rays + self.lineality + tuple(tuple(-x for x in v) for v in self.lineality)

    @cached_property
    def halfspaces(self) -> tuple[tuple[int, ...], ...]:
        """Inner normals h with cone = {x : <h, x> >= 0 for all h}."""
        return self.dual().generators

    def dual(self) -> "Cone":
        lin, rays = cone_from_inequalities(self.generators, self.rank)
        return Cone(self.rank, rays, lin)

    def contains(self, v: Sequence) -> bool:
        return all(dot(h, v) >= 0 for h in self.halfspaces)

    def contains_cone(self, other: "Cone") -> bool:
        return all(self.contains(g) for g in other.generators)

    def __eq__(self, other):
        if not isinstance(other, Cone):
            return NotImplemented
        return self.rank == other.rank and self.contains_cone(other) and other.contains_cone(self)

    def __hash__(self):
        return hash((self.rank, self.dim, len(self.lineality)))

    @cached_property
    def dim(self) -> int:
        return matrix_rank(self.generators, self.rank) if self.generators else 0

    def is_pointed(self) -> bool:
        return not self.lineality

    def is_full_dimensional(self) -> bool:
        return self.dim == self.rank

    def is_zero(self) -> bool:
        return not self.generators

    def face(self, m: Sequence) -> "Cone":
        """The face {u in cone : <m, u> = 0}; m must lie in the dual cone."""
        if len(m) != self.rank:
            raise RankMismatch("face: rank mismatch")
        if any(dot(m, g) < 0 for g in self.generators):
            raise NotInDual(f"{tuple(m)} is not in the dual cone")
        return Cone.from_generators([g for g in self.generators if dot(m, g) == 0], self.rank)

    def faces(self) -> list["Cone"]:
        """All faces, from the whole cone down to the minimal face."""
        hs = self.halfspaces
        out: list[Cone] = []
        for k in range(len(hs) + 1):
            for sub in itertools.combinations(hs, k):
                m = tuple(sum(col) for col in zip(*sub)) if sub else (0,) * self.rank
                f = self.face(m)
                if f not in out:
                    out.append(f)
        return out

    def intersect(self, other: "Cone") -> "Cone":
        return Cone.from_inequalities(list(self.halfspaces) + list(other.halfspaces), self.rank)

    def interior_sample(self) -> tuple[int, ...]:
        """Sum of the generators: a point of the relative interior."""
        if not self.generators:
            return (0,) * self.rank
        return tuple(sum(col) for col in zip(*self.generators))

    def relative_interior_contains(self, v: Sequence) -> bool:
        if not self.contains(v):
            return False
        return all(dot(h, v) > 0 for h in self.halfspaces if any(dot(h, g) != 0 for g in self.generators))

    def image(self, F: LatticeMorphism) -> "Cone":
        return Cone.from_generators([F(g) for g in self.generators], F.target)

    def preimage(self, F: LatticeMorphism) -> "Cone":
        """{v : F(v) in cone}."""
        Ft = F.transpose()
        return Cone.from_inequalities([Ft(h) for h in self.halfspaces], F.source)

    def __repr__(self):
        parts = [str(list(r)) for r in self.rays]
        if self.lineality:
            parts.append("lin=" + str([list(v) for v in self.lineality]))
        return f"Cone({self.rank}; {', '.join(parts)})"


def dual_cone(c: Cone) -> Cone:
    return c.dual()


def face(c: Cone, m: Sequence) -> Cone:
    return c.face(m)


def is_pointed(c: Cone) -> bool:
    return c.is_pointed()


@dataclass(frozen=True)
class Quasifan:
    """A finite set of cones closed under faces; ``maximal`` lists the top cones."""

    rank: int
    maximal: tuple[Cone, ...]

    @cached_property
    def cones(self) -> tuple[Cone, ...]:
        out: list[Cone] = []
        for c in self.maximal:
            for f in c.faces():
                if f not in out:
                    out.append(f)
        return tuple(out)

    @cached_property
    def rays(self) -> tuple[tuple[int, ...], ...]:
        """Primitive generators of the one-dimensional cones (pointed part only)."""
        out = []
        for c in self.cones:
            for r in c.rays:
                if r not in out:
                    out.append(r)
        return tuple(sorted(out))

    def test_points(self) -> list[tuple[int, ...]]:
        """Generators and one interior sample of every maximal cone, deduplicated."""
        out: list[tuple[int, ...]] = []
        for c in self.maximal:
            for p in list(c.generators) + [c.interior_sample()]:
                p = tuple(p)
                if p not in out:
                    out.append(p)
        return out

    def support_contains(self, v: Sequence) -> bool:
        return any(c.contains(v) for c in self.maximal)

    def cone_containing(self, v: Sequence) -> list[int]:
        return [i for i, c in enumerate(self.maximal) if c.contains(v)]

    def __eq__(self, other):
        if not isinstance(other, Quasifan):
            return NotImplemented
        return (
            self.rank == other.rank
            and all(any(c == d for d in other.maximal) for c in self.maximal)
            and all(any(c == d for d in self.maximal) for c in other.maximal)
        )

    def __hash__(self):
        return hash((self.rank, len(self.maximal)))


def common_refinement(fans: Sequence[Quasifan], support: Cone | None = None) -> Quasifan:
    """Maximal cones of the coarsest common refinement of quasifans with equal support."""
    if not fans:
        if support is None:
            raise ValueError("common_refinement needs a fan or a support cone")
        return Quasifan(support.rank, (support,))
    rank = fans[0].rank
    top = support.dim if support is not None else max(c.dim for c in fans[0].maximal)
    current = [support] if support is not None else list(fans[0].maximal)
    for fan in fans if support is not None else fans[1:]:
        nxt = []
        for a in current:
            for b in fan.maximal:
                c = a.intersect(b)
                if c.dim == top and c not in nxt:
                    nxt.append(c)
        current = nxt
    return Quasifan(rank, tuple(current))


# --- polyhedra -------------------------------------------------------------------

Point = tuple


def _as_point(v: Sequence) -> Point:
    return tuple(Fraction(x) for x in v)


class TailedPolyhedron:
    """conv(vertices) + tail, stored in minimal V-form.

    The tail must be pointed so that the vertex set is well defined.
    """

    __slots__ = ("rank", "vertices", "tail", "__dict__")

    def __init__(self, points: Iterable[Sequence], tail: Cone | Iterable[Sequence] | None = None, rank: int | None = None):
        pts = [_as_point(p) for p in points]
        if not pts:
            raise EmptyPolyhedron("a tailed polyhedron needs at least one point")
        n = len(pts[0]) if rank is None else rank
        if any(len(p) != n for p in pts):
            raise RankMismatch("points of different ranks")
        if tail is None:
            tail_gens: list = []
        elif isinstance(tail, Cone):
            if tail.rank != n:
                raise RankMismatch("tail cone rank differs from the points")
            if not tail.is_pointed():
                raise NotPointed("tail cone must be pointed")
            tail_gens = list(tail.generators)
        else:
            tail_gens = [tuple(t) for t in tail]
        hom = [tuple(p) + (Fraction(1),) for p in pts] + [tuple(t) + (0,) for t in tail_gens]
        hcone = Cone.from_generators(hom, n + 1)
        if hcone.lineality:
            raise NotPointed("tail cone must be pointed")
        verts = []
        tails = []
        for r in hcone.rays:
            if r[-1] > 0:
                verts.append(tuple(Fraction(x, r[-1]) for x in r[:-1]))
            else:
                tails.append(r[:-1])
        self.rank = n
        self.vertices = tuple(sorted(verts))
        if isinstance(tail, Cone):
            self.tail = tail
        else:
            self.tail = Cone(n, sorted(tails), ())
        self.__dict__["hcone"] = hcone

    @classmethod
    def point(cls, p: Sequence, tail: Cone | None = None) -> "TailedPolyhedron":
        return cls([p], tail if tail is not None else Cone.zero(len(p)), len(p))

    @classmethod
    def from_hrep(cls, rows: Sequence[Sequence], n: int) -> "TailedPolyhedron":
        """Polyhedron {x : <a, x> + b >= 0} from homogeneous rows (a, b)."""
        hcone = Cone.from_inequalities(list(rows) + [(0,) * n + (1,)], n + 1)
        if hcone.lineality:
            raise NotPointed("polyhedron contains a line")
        verts = [tuple(Fraction(x, r[-1]) for x in r[:-1]) for r in hcone.rays if r[-1] > 0]
        if not verts:
            raise EmptyPolyhedron("the inequalities have no common solution")
        tails = [r[:-1] for r in hcone.rays if r[-1] == 0]
        return cls(verts, Cone(n, sorted(tails), ()), n)

    @cached_property
    def hcone(self) -> Cone:
        return Cone.from_generators(
            [tuple(v) + (Fraction(1),) for v in self.vertices] + [tuple(t) + (0,) for t in self.tail.generators],
            self.rank + 1,
        )

    @property
    def inequalities(self) -> tuple:
        """Rows (a, b) with polyhedron = {x : <a, x> + b >= 0}."""
        return self.hcone.halfspaces

    def contains_point(self, p: Sequence) -> bool:
        q = tuple(p) + (1,)
        return all(dot(h, q) >= 0 for h in self.inequalities)

    def contains(self, other: "TailedPolyhedron") -> bool:
        return all(self.contains_point(v) for v in other.vertices) and self.tail.contains_cone(other.tail)

    def __eq__(self, other):
        if not isinstance(other, TailedPolyhedron):
            return NotImplemented
        return self.rank == other.rank and self.vertices == other.vertices and self.tail == other.tail

    def __hash__(self):
        return hash((self.rank, self.vertices))

    def __repr__(self):
        vs = ", ".join("(" + ",".join(str(x) for x in v) + ")" for v in self.vertices)
        return f"TailedPolyhedron([{vs}] + {self.tail!r})"

    def __add__(self, other):
        return minkowski_sum(self, other)

    def translate(self, v: Sequence) -> "TailedPolyhedron":
        v = _as_point(v)
        return TailedPolyhedron([tuple(a + b for a, b in zip(p, v)) for p in self.vertices], self.tail, self.rank)

    def scale(self, k: int) -> "TailedPolyhedron":
        if k <= 0:
            raise ValueError("only positive scalings keep the tail")
        return TailedPolyhedron([tuple(k * a for a in p) for p in self.vertices], self.tail, self.rank)

    def linear_image(self, F: LatticeMorphism, target_tail: Cone) -> "TailedPolyhedron":
        """F(self) + target_tail."""
        return TailedPolyhedron([F(v) for v in self.vertices], target_tail, F.target)

    def with_tail(self, tail: Cone) -> "TailedPolyhedron":
        return TailedPolyhedron(self.vertices, tail, self.rank)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for v in self.vertices for x in v)

    def support(self, m: Sequence):
        if len(m) != self.rank:
            raise RankMismatch("support: rank mismatch")
        if any(dot(m, t) < 0 for t in self.tail.generators):
            return NEG_INF
        return min(dot(m, v) for v in self.vertices)

    def minimizing_vertices(self, m: Sequence) -> list[Point]:
        h = self.support(m)
        return [v for v in self.vertices if dot(m, v) == h]

    @cached_property
    def normal_quasifan(self) -> Quasifan:
        maximal = []
        for v in self.vertices:
            rows = list(self.tail.generators) + [tuple(a - b for a, b in zip(w, v)) for w in self.vertices if w != v]
            maximal.append(Cone.from_inequalities(rows, self.rank))
        return Quasifan(self.rank, tuple(maximal))


@dataclass(frozen=True)
class Empty:
    """The empty coefficient; its support function is identically +infinity."""

    rank: int
    tail: Cone = field(compare=False)

    def support(self, m: Sequence):
        return INF

    def __repr__(self):
        return "Empty"

    def contains(self, other) -> bool:
        return isinstance(other, Empty)


PolyhedronCoefficient = Union[TailedPolyhedron, Empty]


def minkowski_sum(a: PolyhedronCoefficient, b: PolyhedronCoefficient) -> PolyhedronCoefficient:
    if a.rank != b.rank:
        raise RankMismatch("Minkowski sum of polyhedra of different ranks")
    if isinstance(a, Empty):
        return a
    if isinstance(b, Empty):
        return b
    pts = [tuple(x + y for x, y in zip(v, w)) for v in a.vertices for w in b.vertices]
    if a.tail == b.tail:
        tail = a.tail
    else:
        tail = Cone.from_generators(list(a.tail.generators) + list(b.tail.generators), a.rank)
    return TailedPolyhedron(pts, tail, a.rank)


def support_eval(d: PolyhedronCoefficient, m: Sequence):
    """h_d(m) = min over d of <m, .>; -inf off the dual of the tail, +inf for Empty."""
    return d.support(m)


def normal_quasifan(d: TailedPolyhedron) -> Quasifan:
    return d.normal_quasifan


def is_integral(d: TailedPolyhedron) -> bool:
    return d.is_integral()


def polyhedron_from_support(tail: Cone, samples: Mapping[Sequence, Fraction]) -> TailedPolyhedron:
    """The polyhedron with tail ``tail`` cut out by <m, x> >= h(m) over the samples."""
    n = tail.rank
    rows = [tuple(m) + (-Fraction(h),) for m, h in samples.items()]
    # the recession cone of the result is cut out by the sampled m alone
    try:
        d = TailedPolyhedron.from_hrep(rows, n)
    except (EmptyPolyhedron, NotPointed) as exc:
        raise Inconsistent(str(exc)) from exc
    if d.tail != tail:
        raise Inconsistent("samples do not pin down the requested tail cone")
    d = d.with_tail(tail)
    for m, h in samples.items():
        if d.support(m) != h:
            raise Inconsistent(f"support at {tuple(m)} is {d.support(m)}, sample says {h}")
    return d


def polyhedron_test_points(polys: Sequence[TailedPolyhedron], support: Cone) -> list[tuple[int, ...]]:
    """Generators and interior samples of the common refinement of the normal quasifans."""
    fans = [p.normal_quasifan for p in polys]
    return common_refinement(fans, support).test_points()


@dataclass(frozen=True, eq=False)
class FormalDifference:
    """plus - minus in the Grothendieck group of polyhedra with a common tail."""

    plus: TailedPolyhedron
    minus: TailedPolyhedron

    @classmethod
    def of(cls, d: TailedPolyhedron) -> "FormalDifference":
        return cls(d, TailedPolyhedron.point((0,) * d.rank, d.tail))

    @property
    def tail(self) -> Cone:
        return self.plus.tail

    @property
    def rank(self) -> int:
        return self.plus.rank

    def eval(self, m: Sequence) -> Fraction:
        if not self.tail.dual().contains(m):
            raise OutsideDual(f"{tuple(m)} is outside the dual of the tail")
        return self.plus.support(m) - self.minus.support(m)

    def __add__(self, other: "FormalDifference") -> "FormalDifference":
        return FormalDifference(self.plus + other.plus, self.minus + other.minus)

    def __neg__(self) -> "FormalDifference":
        return FormalDifference(self.minus, self.plus)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, FormalDifference):
            return NotImplemented
        return self.plus + other.minus == other.plus + self.minus

    def __hash__(self):
        return hash(self.rank)

    def is_zero(self) -> bool:
        return self.plus == self.minus

    def __repr__(self):
        return f"FormalDifference({self.plus!r} - {self.minus!r})"


def eval_difference(fd: FormalDifference, m: Sequence) -> Fraction:
    return fd.eval(m)


def hilbert_basis(c: Cone) -> list[tuple[int, ...]]:
    """A minimal generating set of the monoid c ∩ Z^n.

    Supported: ranks 1 and 2 (any cone), and pointed simplicial full-dimensional
    cones of higher rank.
    """
    n = c.rank
    if c.is_zero():
        return []
    if c.lineality:
        if n > 2:
            raise RankTooHigh("Hilbert bases of non-pointed cones are only supported in rank <= 2")
        out = []
        for v in c.lineality:
            out += [tuple(v), tuple(-x for x in v)]
        if c.dim > len(c.lineality):
            # a half-plane: the boundary line plus a point at lattice distance 1
            out.append(_bezout_point(c.halfspaces[0]))
        return sorted(out)
    rays = list(c.rays)
    if len(rays) == 1:
        return [rays[0]]
    if len(rays) != n:
        raise RankTooHigh("Hilbert bases need a simplicial full-dimensional cone here")
    cands = sorted(set(p for p in _parallelepiped_points(rays) if any(p)) | set(rays))
    basis = []
    for x in cands:
        if not any(c.contains(tuple(a - b for a, b in zip(x, y))) for y in cands if y != x):
            basis.append(x)
    return sorted(basis)


def _bezout_point(h: tuple[int, ...]) -> tuple[int, ...]:
    """An integer w with <h, w> = 1 for primitive h in rank 2."""
    a, b = h
    g, x, y = _ext_gcd(a, b)
    return (x, y) if g == 1 else (-x, -y)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def _parallelepiped_points(rays: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    n = len(rays)
    cols = tuple(tuple(rays[j][i] for j in range(n)) for i in range(n))
    inv = inverse(cols)
    lo = [sum(min(0, r[i]) for r in rays) for i in range(n)]
    hi = [sum(max(0, r[i]) for r in rays) for i in range(n)]
    out = []
    for p in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        lam = [sum(inv[i][j] * p[j] for j in range(n)) for i in range(n)]
        if all(0 <= x <= 1 for x in lam):
            out.append(tuple(p))
    return out
