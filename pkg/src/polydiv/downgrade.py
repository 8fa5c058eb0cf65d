"""Downgrading an affine toric variety to the action of a saturated subtorus.

Given sigma in N_Q and F: N' -> N, split 0 -> N' -> N -> N'' -> 0 with a
projection P and a section s.  The base is the toric variety of the fan cut
out by the images of the rays of sigma, and the coefficient over a ray v of
that fan is s(sigma ∩ P^-1(v)) with tail F^-1(sigma).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key

from .base import INFINITY, BaseVariety, FinitePoint, RayDivisor
from .convex import Cone, Quasifan, RankTooHigh, TailedPolyhedron
from .lattice import LatticeMorphism, SplitSequence, primitive, smith_split
from .ppdiv import PolyhedralDivisor


class SliceEmpty(ValueError):
    pass


@dataclass(frozen=True)
class DowngradeInput:
    sigma: Cone
    F: LatticeMorphism
    P: LatticeMorphism | None = None
    s: LatticeMorphism | None = None

    def __post_init__(self):
        if not self.sigma.is_pointed():
            raise ValueError("sigma must be pointed")
        if self.F.target != self.sigma.rank:
            raise ValueError("F must map into the lattice of sigma")
        if (self.P is None) != (self.s is None):
            raise ValueError("give both P and s, or neither")

    def split(self) -> SplitSequence:
        if self.P is None:
            return smith_split(self.F)
        smith_split(self.F)  # surfaces NotInjective / TorsionCokernel
        return SplitSequence(self.F, self.P, self.s)


@dataclass
class DowngradeOutput:
    fan: Quasifan
    ppdiv: PolyhedralDivisor
    split: SplitSequence
    rays: tuple
    ray_points: dict

    @property
    def section_used(self) -> LatticeMorphism:
        return self.split.s


def _half(v) -> int:
    x, y = v
    return 0 if (y > 0 or (y == 0 and x > 0)) else 1


def _angle_cmp(a, b) -> int:
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha - hb
    cross = a[0] * b[1] - a[1] * b[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def projected_fan(sigma: Cone, P: LatticeMorphism) -> Quasifan:
    """Coarsest fan on the images of the rays of sigma inside P(sigma)."""
    n = P.target
    if n > 2:
        raise RankTooHigh("projected fans are computed for bases of rank <= 2")
    if n == 0:
        return Quasifan(0, (Cone.zero(0),))
    images = sorted({primitive(P(r)) for r in sigma.rays if any(P(r))})
    if n == 1:
        return Quasifan(1, tuple(Cone.from_generators([v], 1) for v in images))
    image = sigma.image(P)
    rays = sorted(images, key=cmp_to_key(_angle_cmp))
    cones = []
    for i, a in enumerate(rays):
        b = rays[(i + 1) % len(rays)]
        if a == b:
            continue
        cross = a[0] * b[1] - a[1] * b[0]
        if cross <= 0:
            continue
        mid = (a[0] + b[0], a[1] + b[1])
        if image.contains(mid):
            cones.append(Cone.from_generators([a, b], 2))
    covered = [r for c in cones for r in c.rays]
    cones += [Cone.from_generators([r], 2) for r in rays if r not in covered]
    return Quasifan(2, tuple(cones))


def slice_polyhedron(sigma: Cone, P: LatticeMorphism, v) -> TailedPolyhedron:
    """sigma ∩ P^-1(v) as a polyhedron in N_Q."""
    n = sigma.rank
    rows = [tuple(h) + (0,) for h in sigma.halfspaces]
    for row, vi in zip(P.matrix, v):
        rows.append(tuple(row) + (-vi,))
        rows.append(tuple(-x for x in row) + (vi,))
    try:
        return TailedPolyhedron.from_hrep(rows, n)
    except ValueError as exc:
        raise SliceEmpty(f"sigma does not meet P^-1({v})") from exc


def downgrade(inp: DowngradeInput) -> DowngradeOutput:
    split = inp.split()
    F, P, s = split.F, split.P, split.s
    sigma = inp.sigma
    tail = sigma.preimage(F)
    fan = projected_fan(sigma, P)
    rays = fan.rays
    coeffs = {}
    for v in rays:
        coeffs[v] = slice_polyhedron(sigma, P, v).linear_image(s, tail)
    note = "proper by construction (toric downgrade)"
    if P.target == 0:
        base = BaseVariety.toric(fan)
        D = PolyhedralDivisor(tail, base, {}, proper_by_construction=True, interpretation=note)
        return DowngradeOutput(fan, D, split, rays, {})
    if P.target == 1:
        if set(rays) == {(1,), (-1,)}:
            base = BaseVariety.P1()
            points = {(1,): FinitePoint.rational(0), (-1,): INFINITY}
        else:
            base = BaseVariety.A1()
            points = {rays[0]: FinitePoint.rational(0)}
        D = PolyhedralDivisor(tail, base, {points[v]: coeffs[v] for v in rays})
        return DowngradeOutput(fan, D, split, rays, points)
    base = BaseVariety.toric(fan)
    points = {v: RayDivisor(i) for i, v in enumerate(base.rays)}
    D = PolyhedralDivisor(
        tail, base, {points[v]: coeffs[v] for v in rays}, proper_by_construction=True, interpretation=note
    )
    return DowngradeOutput(fan, D, split, rays, points)
