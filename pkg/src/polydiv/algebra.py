"""Graded pieces of the section algebra A[Y, D] = sum_m H^0(Y, O(D(m))).

Curve bases get explicit bases of rational functions.  Toric bases are
handled one character at a time: u contributes to the piece of weight m iff
<u, v_rho> + h_rho(m) >= 0 for every ray rho of the fan.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .base import (
    INFINITE,
    RationalFunction,
    RayDivisor,
    UnsupportedBase,
    global_sections_basis,
    global_sections_dim,
    in_sections,
)
from .convex import RankTooHigh, hilbert_basis
from .lattice import dot
from .ppdiv import PolyhedralDivisor, PropernessCertificate, is_proper


class NotProper(ValueError):
    pass


@dataclass
class GradedPiece:
    weight: tuple[int, ...]
    dim: object
    basis: list = field(default_factory=list)
    truncated: bool = False

    @property
    def count(self) -> int:
        """Number of basis elements found (the dimension when finite)."""
        return len(self.basis) if (self.truncated or self.dim == INFINITE) else self.dim


def certificate(D: PolyhedralDivisor) -> PropernessCertificate:
    cert = D.__dict__.get("_certificate")
    if cert is None:
        cert = is_proper(D)
        D.__dict__["_certificate"] = cert
    return cert


def require_proper(D: PolyhedralDivisor) -> None:
    if not certificate(D).proper:
        raise NotProper("the polyhedral divisor is not proper")


def graded_piece(
    D: PolyhedralDivisor,
    m: Sequence[int],
    degree_bound: int | None = None,
    ubox: Sequence[tuple[int, int]] | None = None,
) -> GradedPiece:
    """H^0(Loc D, O(D(m))).

    On affine curves the piece is infinite dimensional; with ``degree_bound``
    the basis is truncated to numerators of degree <= degree_bound.  On toric
    bases the characters u inside ``ubox`` are listed.
    """
    require_proper(D)
    m = tuple(m)
    if not D.weight_cone.contains(m):
        return GradedPiece(m, 0, [])
    if D.base.kind == "toric":
        if ubox is None:
            raise ValueError("toric pieces need a box of characters")
        us = [u for u in itertools.product(*(range(a, b + 1) for a, b in ubox)) if fine_graded_piece(D, m, u)]
        return GradedPiece(m, INFINITE, us, truncated=True)
    Y = D.loc()
    Dm = D.evaluate(m)
    if Y.is_affine_curve:
        if degree_bound is None:
            return GradedPiece(m, INFINITE, [], truncated=True)
        return GradedPiece(m, INFINITE, global_sections_basis(Dm, Y, degree_bound), truncated=True)
    basis = global_sections_basis(Dm, Y)
    return GradedPiece(m, global_sections_dim(Dm, Y), basis)


def weight_monoid_generators(D: PolyhedralDivisor) -> list[tuple[int, ...]]:
    """Hilbert basis of the weight monoid omega^dual ∩ M (rank <= 2)."""
    if D.lattice_rank > 2:
        raise RankTooHigh("weight monoid generators are computed up to rank 2")
    return hilbert_basis(D.weight_cone)


@dataclass
class HilbertTable:
    box: list[tuple[int, int]]
    cells: dict[tuple[int, ...], object]
    degree_bound: int | None = None

    def __getitem__(self, m):
        return self.cells[tuple(m)]


def box_points(box: Sequence[tuple[int, int]]):
    return itertools.product(*(range(a, b + 1) for a, b in box))


def hilbert_table(D: PolyhedralDivisor, box: Sequence[tuple[int, int]], degree_bound: int | None = None) -> HilbertTable:
    """Dimensions of the graded pieces over a box of weights (curve bases).

    On affine curves the cells count sections with numerator degree <= degree_bound.
    """
    require_proper(D)
    if not D.base.is_curve:
        raise UnsupportedBase("Hilbert tables need a curve base; use fine_graded_piece on toric bases")
    if D.loc().is_affine_curve and degree_bound is None:
        raise ValueError("pieces over an affine base are infinite dimensional; pass a degree bound")
    cells = {}
    for m in box_points(box):
        cells[m] = graded_piece(D, m, degree_bound).count
    return HilbertTable(list(box), cells, degree_bound)


def check_multiplication(
    D: PolyhedralDivisor, m1: Sequence[int], m2: Sequence[int], degree_bound: int | None = None
) -> bool:
    """Products of basis elements of pieces m1 and m2 land in piece m1 + m2."""
    require_proper(D)
    if not D.base.is_curve:
        raise UnsupportedBase("multiplication checks need a curve base")
    p1 = graded_piece(D, m1, degree_bound)
    p2 = graded_piece(D, m2, degree_bound)
    m = tuple(a + b for a, b in zip(m1, m2))
    if not D.weight_cone.contains(m):
        return not p1.basis or not p2.basis
    Dm = D.evaluate(m)
    Y = D.loc()
    return all(in_sections(f * g, Dm, Y) for f in p1.basis for g in p2.basis)


def fine_graded_piece(D: PolyhedralDivisor, m: Sequence[int], u: Sequence[int]) -> int:
    """1 iff the character u of the toric base lies in H^0(O(D(m)))."""
    if D.base.kind != "toric":
        raise UnsupportedBase("fine gradings need a toric base")
    if not D.weight_cone.contains(m):
        return 0
    for i, ray in enumerate(D.base.rays):
        h = D.support(RayDivisor(i), m)
        if dot(u, ray) + h < 0:
            return 0
    return 1
