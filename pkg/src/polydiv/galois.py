"""Galois semilinear actions of Z/2 = Gal(Q(sqrt d)/Q) on polyhedral divisors.

An action is given by the image (psi, F, f) of the nontrivial element.  It
must be a semilinear automorphism, psi*(D) = F_*(D) + div(f), and square to
the identity triple.  On graded pieces the generator acts by
h -> f(m) psi*(h), sending the piece of m to the piece of F^T m; the fixed
points of this semilinear involution form a Q-form of each orbit space.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import graded_piece, require_proper, weight_monoid_generators
from .base import QDivisor, RationalFunction, SemilinearBaseMap, divisor_of
from .convex import Cone, NotPointed, RankTooHigh
from .exactnum import Field, QuadElement, conjugate
from .lattice import LatticeMorphism, inverse, rank as matrix_rank
from .ppdiv import (
    MorphismReport,
    PolyhedralDivisor,
    PPDivMorphism,
    compose,
    is_isomorphic_image,
)

__all__ = [
    "SemilinearBaseMap",
    "SemilinearAction",
    "ActionInvalid",
    "AxiomResult",
    "is_semilinear_automorphism",
    "is_galois_action",
    "gillard_cocycle",
    "descent_dimensions",
    "torus_form_candidates",
]


class ActionInvalid(ValueError):
    pass


@dataclass(frozen=True)
class SemilinearAction:
    """A Z/2 action given by its generator, or the trivial action."""

    group: str
    generator: PPDivMorphism | None = None

    def __post_init__(self):
        if self.group not in ("trivial", "Z/2"):
            raise ValueError("only the trivial group and Z/2 are supported")
        if self.group == "Z/2" and self.generator is None:
            raise ValueError("a Z/2 action needs the image of its generator")

    @classmethod
    def trivial(cls) -> "SemilinearAction":
        return cls("trivial", None)

    def generator_for(self, D: PolyhedralDivisor) -> PPDivMorphism:
        return self.generator if self.generator is not None else PPDivMorphism.identity(D)


@dataclass
class AxiomResult:
    name: str
    ok: bool
    details: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok


def _weights(D: PolyhedralDivisor) -> list[tuple[int, ...]]:
    try:
        return weight_monoid_generators(D)
    except RankTooHigh:
        return list(D.weight_cone.generators)


def is_semilinear_automorphism(t: PPDivMorphism, D: PolyhedralDivisor) -> AxiomResult:
    """The equality psi*(D) = F_*(D) + div(f), with F an automorphism preserving omega."""
    details = []
    F = t.F
    if not F.is_automorphism():
        return AxiomResult("automorphism", False, ["F is not a lattice automorphism"])
    if D.tail.image(F) != D.tail:
        return AxiomResult("automorphism", False, ["F does not map the tail cone onto itself"])
    report: MorphismReport = is_isomorphic_image(t, D, D)
    details += report.lines()
    return AxiomResult("automorphism", report.ok, details)


def _square_law(t: PPDivMorphism, D: PolyhedralDivisor) -> AxiomResult:
    sq = compose(t, t)
    details = []
    if not sq.psi.is_identity():
        details.append(f"psi^2 = {sq.psi} is not the identity")
    if sq.F != LatticeMorphism.identity(D.lattice_rank):
        details.append(f"F^2 = {sq.F.rows()} is not the identity")
    for m in _weights(D):
        val = sq.f.evaluate(m, D.base.field)
        if val != 1:
            details.append(f"square plurifunction at m={m} is {val}, not 1")
    return AxiomResult("square law", not details, details)


def is_galois_action(a: SemilinearAction, D: PolyhedralDivisor) -> list[AxiomResult]:
    """Automorphism equality for the generator and the Z/2 square law."""
    if a.group == "trivial":
        g = a.generator_for(D)
        ok = g.is_identity()
        return [AxiomResult("trivial generator", ok, [] if ok else ["generator is not the identity triple"])]
    g = a.generator
    out = []
    if not g.psi.twist:
        out.append(AxiomResult("twist", False, ["the generator of Z/2 must act through the conjugation"]))
    out.append(is_semilinear_automorphism(g, D))
    out.append(_square_law(g, D))
    return out


def action_ok(results: list[AxiomResult]) -> bool:
    return all(r.ok for r in results)


@dataclass
class GillardCocycle:
    values: dict[tuple[int, ...], RationalFunction]
    identity_a: AxiomResult
    cocycle_b: AxiomResult

    @property
    def ok(self) -> bool:
        return self.identity_a.ok and self.cocycle_b.ok


def gillard_cocycle(a: SemilinearAction, D: PolyhedralDivisor, weights: Sequence | None = None) -> GillardCocycle:
    """h(m) = f(F^T m) on weight-monoid generators, with identities (a) and (b).

    (a)  psi*(D(m)) = D(F^T m) + div(h(F^T m))
    (b)  h(m) * psi*(h(F^T m)) = 1, the cocycle relation for the pair (gamma, gamma).
    """
    g = a.generator_for(D)
    Ft = g.F.transpose()
    fld = D.base.field
    ms = list(weights) if weights is not None else _weights(D)
    h = {tuple(m): g.f.evaluate(Ft(m), fld) for m in ms}
    Y = D.loc()
    fa, fb = [], []
    for m in ms:
        m = tuple(m)
        Fm = Ft(m)
        lhs = g.psi.pullback_divisor(D.evaluate(m))
        rhs = D.evaluate(Fm) + divisor_of(g.f.evaluate(Ft(Fm), fld), Y)
        if lhs != rhs:
            fa.append(f"m={m}: psi*(D(m)) = {lhs} but D(F*m) + div(h) = {rhs}")
        prod = h[m] * g.psi.pullback_function(g.f.evaluate(Ft(Fm), fld))
        if prod != 1:
            fb.append(f"m={m}: h(m) * psi*(h(F*m)) = {prod}")
    return GillardCocycle(h, AxiomResult("gillard (a)", not fa, fa), AxiomResult("cocycle (b)", not fb, fb))


# --- descent of graded pieces ------------------------------------------------------------------

class InfinitePiece(ValueError):
    pass


def _coordinates(r: RationalFunction, basis: list[RationalFunction], fld: Field) -> list:
    """Coordinates of r in a basis t^k * N (k = 0, 1, ...)."""
    if not basis:
        raise ActionInvalid(f"{r} should vanish in an empty piece")
    g = (r / basis[0]).as_polynomial()
    if g is None or g.degree >= len(basis):
        raise ActionInvalid(f"{r} does not lie in the target piece")
    coeffs = list(g.over(fld).coeffs) if not g.is_zero() else []
    return [fld.coerce(c) for c in coeffs] + [fld.zero()] * (len(basis) - len(coeffs))


def _split_q(x, d=None) -> tuple[Fraction, Fraction]:
    if isinstance(x, QuadElement):
        return x.a, x.b
    return Fraction(x), Fraction(0)


@dataclass
class DescentRow:
    orbit: tuple[tuple[int, ...], ...]
    dim_L: int
    dim_fixed: int


def fixed_dimension(op_images: list[list], d: int | None) -> int:
    """dim over Q of the fixed space of a semilinear involution on L^n.

    ``op_images[j]`` is the image of the j-th basis vector; sqrt(d) e_j maps to
    -sqrt(d) T(e_j).
    """
    n = len(op_images)
    if d is None:
        rows = [[Fraction(op_images[j][i]) - (1 if i == j else 0) for j in range(n)] for i in range(n)]
        return n - matrix_rank(rows, n)
    # Q-coordinates: (a_1..a_n, b_1..b_n) for sum (a_j + b_j sqrt d) e_j
    cols = []
    for j in range(n):
        img = [_split_q(x, d) for x in op_images[j]]
        cols.append([a for a, _ in img] + [b for _, b in img])
    for j in range(n):
        # T(sqrt d e_j) = -sqrt d (A + B sqrt d) = -d B - A sqrt d
        img = [_split_q(x, d) for x in op_images[j]]
        cols.append([-d * b for _, b in img] + [-a for a, _ in img])
    mat = [[cols[c][r] - (1 if r == c else 0) for c in range(2 * n)] for r in range(2 * n)]
    return 2 * n - matrix_rank(mat, 2 * n)


def descent_dimensions(
    a: SemilinearAction, D: PolyhedralDivisor, box: Sequence[tuple[int, int]]
) -> list[DescentRow]:
    """dim_L V and dim_Q V^Gamma for every orbit {m, F^T m} of weights in the box."""
    results = is_galois_action(a, D)
    if not action_ok(results):
        raise ActionInvalid("; ".join(x for r in results for x in r.details) or "action axioms fail")
    require_proper(D)
    if D.loc().is_affine_curve or not D.base.is_curve:
        raise InfinitePiece("descent tables need finite-dimensional pieces (a projective curve base)")
    g = a.generator_for(D)
    Ft = g.F.transpose()
    fld = D.base.field
    d = fld.d
    rows = []
    done = set()
    for m in itertools.product(*(range(lo, hi + 1) for lo, hi in box)):
        if m in done:
            continue
        m2 = tuple(Ft(m))
        orbit = (m,) if m2 == m else tuple(sorted((m, m2)))
        done.update(orbit)
        pieces = {w: graded_piece(D, w).basis for w in orbit}
        offsets, n = {}, 0
        for w in orbit:
            offsets[w] = n
            n += len(pieces[w])
        images = []
        for w in orbit:
            target = tuple(Ft(w))
            fw = g.f.evaluate(w, fld)
            for b in pieces[w]:
                img = fw * g.psi.pullback_function(b)
                coords = _coordinates(img, pieces[target], fld)
                vec = [fld.zero()] * n
                for k, c in enumerate(coords):
                    vec[offsets[target] + k] = c
                images.append(vec)
        if a.group == "trivial" or d is None:
            fixed = n if a.group == "trivial" else fixed_dimension(images, None)
        else:
            fixed = fixed_dimension(images, d)
        rows.append(DescentRow(orbit, n, fixed))
    return rows


def semilinear_operator(a: SemilinearAction, D: PolyhedralDivisor, m: Sequence[int]):
    """The map h -> f(m) psi*(h) from the piece of m to the piece of F^T m."""
    g = a.generator_for(D)
    fm = g.f.evaluate(tuple(m), D.base.field)
    return lambda h: fm * g.psi.pullback_function(h)


# --- k-forms of the torus ---------------------------------------------------------------------

def torus_form_candidates(omega: Cone, order: int) -> list[LatticeMorphism]:
    """Lattice automorphisms F of Z^2 with F^order = id and F(omega) = omega.

    Such an F permutes the two primitive extremal rays of omega, so it is
    determined by the permutation and is checked for integrality.
    """
    if omega.rank != 2:
        raise RankTooHigh("torus forms are classified in rank 2")
    if not omega.is_pointed():
        raise NotPointed("the tail cone must be pointed")
    if omega.dim != 2:
        raise ValueError("the tail cone must be full-dimensional")
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    r1, r2 = omega.rays
    R = ((r1[0], r2[0]), (r1[1], r2[1]))
    Rinv = inverse(R)
    out = []
    for images in ((r1, r2), (r2, r1)):
        S = ((images[0][0], images[1][0]), (images[0][1], images[1][1]))
        M = [[sum(Fraction(S[i][k]) * Rinv[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
        if any(x.denominator != 1 for row in M for x in row):
            continue
        F = LatticeMorphism(tuple(tuple(int(x) for x in row) for row in M), 2, 2)
        if not F.is_automorphism() or F.power(order) != LatticeMorphism.identity(2):
            continue
        if omega.image(F) == omega:
            out.append(F)
    return out
