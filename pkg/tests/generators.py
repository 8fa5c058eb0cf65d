"""Seeded random inputs shared by the property suites."""
from __future__ import annotations

import random
from fractions import Fraction

from polydiv.base import INFINITY, BaseVariety, FinitePoint, RationalFunction, SemilinearBaseMap
from polydiv.convex import Cone, TailedPolyhedron
from polydiv.exactnum import QQ, Poly
from polydiv.lattice import LatticeMorphism, determinant
from polydiv.ppdiv import Plurifunction, PolyhedralDivisor

TAILS = [
    Cone.orthant(2),
    Cone.from_generators([(1, 0), (1, 2)], 2),
    Cone.from_generators([(1, 0), (1, 12)], 2),
    Cone.from_generators([(2, 1), (-1, 3)], 2),
    Cone.from_generators([(1, 1)], 2),
    Cone.zero(2),
]

FULL_TAILS = TAILS[:4]


def grid_point(rng: random.Random, lo: int = -3, hi: int = 3, den: int = 2) -> tuple:
    return tuple(Fraction(rng.randint(lo * den, hi * den), den) for _ in range(2))


def polyhedron(rng: random.Random, tail: Cone | None = None, den: int = 2) -> TailedPolyhedron:
    tail = tail if tail is not None else rng.choice(TAILS)
    pts = [grid_point(rng, den=den) for _ in range(rng.randint(1, 4))]
    return TailedPolyhedron(pts, tail, 2)


def integer_polyhedron(rng: random.Random, tail: Cone) -> TailedPolyhedron:
    return polyhedron(rng, tail, den=1)


def cone(rng: random.Random, rank: int) -> Cone:
    gens = []
    for _ in range(rng.randint(1, rank + 2)):
        v = tuple(rng.randint(-3, 3) for _ in range(rank))
        if any(v):
            gens.append(v)
    if not gens:
        gens = [(1,) + (0,) * (rank - 1)]
    return Cone.from_generators(gens, rank)


RATIONAL_POINTS = [FinitePoint.rational(a) for a in (0, 1, -1, 2, Fraction(1, 2))]


def p1_divisor(rng: random.Random, tail: Cone | None = None, points=None) -> PolyhedralDivisor:
    """A random pp-divisor on P1 over Q; properness is not enforced."""
    tail = tail if tail is not None else rng.choice(FULL_TAILS)
    pool = list(points) if points is not None else RATIONAL_POINTS + [INFINITY]
    chosen = rng.sample(pool, rng.randint(1, min(3, len(pool))))
    return PolyhedralDivisor(tail, BaseVariety.P1(), {P: polyhedron(rng, tail) for P in chosen})


def rational_function(rng: random.Random) -> RationalFunction:
    factors = []
    for a in rng.sample([0, 1, -1, 2, 3], rng.randint(0, 2)):
        factors.append((Poly([-a, 1]), rng.choice([-2, -1, 1, 2])))
    return RationalFunction(Fraction(rng.choice([1, 2, -3, Fraction(1, 2)])), factors, QQ)


def plurifunction(rng: random.Random, rank: int = 2) -> Plurifunction:
    terms = []
    for _ in range(rng.randint(0, 2)):
        v = tuple(rng.randint(-2, 2) for _ in range(rank))
        terms.append((v, rational_function(rng)))
    return Plurifunction(rank, terms)


def lattice_map(rng: random.Random) -> LatticeMorphism:
    while True:
        rows = tuple(tuple(rng.randint(-2, 2) for _ in range(2)) for _ in range(2))
        if determinant(rows) != 0:
            return LatticeMorphism(rows, 2, 2)


def moebius(rng: random.Random) -> SemilinearBaseMap:
    while True:
        m = tuple(tuple(Fraction(rng.randint(-2, 2)) for _ in range(2)) for _ in range(2))
        if m[0][0] * m[1][1] - m[0][1] * m[1][0] != 0:
            return SemilinearBaseMap.moebius(m)
