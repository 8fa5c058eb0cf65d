import os
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import generators as gen
import suites
from polydiv import documents as docs
from polydiv.base import INFINITY, BaseVariety, FinitePoint, QDivisor, RationalFunction, SemilinearBaseMap
from polydiv.convex import Cone, Empty, TailedPolyhedron
from polydiv.exactnum import Field, Poly
from polydiv.lattice import LatticeMorphism
from polydiv.ppdiv import (
    CannotCertifySplitting,
    ChainMismatch,
    InvalidPPDivisor,
    Plurifunction,
    PolyhedralDivisor,
    PPDivMorphism,
    TailNotMapped,
    add_principal,
    base_change,
    compose,
    is_isomorphic_image,
    is_morphism,
    is_proper,
    leq,
    pluri_divisor,
    split_point,
)

GOLDEN = os.path.join(os.path.dirname(__file__), os.pardir, "golden")
O2 = Cone.orthant(2)
P1 = BaseVariety.P1()
ZERO, ONE = FinitePoint.rational(0), FinitePoint.rational(1)
seeds = st.integers(0, 10**9)


def load(name):
    return docs.parse_ppdiv(docs.read_document(os.path.join(GOLDEN, name)), name)


def poly(*pts, tail=O2):
    return TailedPolyhedron(list(pts), tail, tail.rank)


def test_a3_evaluation_and_properness():
    D = load("a3.ppdiv")
    assert D.evaluate((1, 1)) == QDivisor({INFINITY: 1})
    assert D.degree_at((2, 5)) == 2
    cert = is_proper(D)
    assert cert.semiample and cert.big and cert


def test_trivial_coefficient_is_not_big():
    D = load("trivial-coefficient.ppdiv")
    cert = is_proper(D)
    assert cert.semiample and not cert.big


def test_validation_collects_problems():
    other = Cone.from_generators([(1, 0), (1, 2)], 2)
    with pytest.raises(InvalidPPDivisor) as err:
        PolyhedralDivisor(O2, P1, {ZERO: poly((0, 0), tail=other), INFINITY: poly((1, 1))})
    assert any("tail" in p for p in err.value.problems)
    with pytest.raises(InvalidPPDivisor):
        PolyhedralDivisor(O2, BaseVariety.A1(), {INFINITY: poly((0, 0))})


def test_empty_coefficients_shrink_the_locus():
    D = PolyhedralDivisor(O2, P1, {ZERO: Empty(2, O2), ONE: poly((1, 0), (0, 1))})
    assert D.loc().is_affine_curve
    assert ZERO not in D.evaluate((1, 0)) and D.evaluate((1, 0)).coeff(ONE) == 0
    assert is_proper(D).proper


def test_leq_orientation():
    small = PolyhedralDivisor(O2, P1, {ZERO: poly((0, 0))})
    big = PolyhedralDivisor(O2, P1, {ZERO: poly((1, 1))})
    assert leq(small, big) and not leq(big, small)
    void = PolyhedralDivisor(O2, P1, {ZERO: Empty(2, O2)})
    assert leq(big, void) and not leq(void, big)
    assert all(small.degree_at(m) <= big.degree_at(m) for m in [(1, 0), (0, 1), (2, 3)])


def test_plurifunctions_compare_by_values():
    t = RationalFunction.t()
    a = Plurifunction(2, [((1, 0), t), ((0, 1), t)])
    b = Plurifunction(2, [((1, 1), t)])
    assert a == b
    assert a.evaluate((2, 3)) == t ** 5
    assert (a * a.inverse()).is_trivial()
    swap = LatticeMorphism.from_rows([[0, 1], [1, 0]], 2)
    c = Plurifunction(2, [((1, 0), t)]).pushforward(swap)
    assert c.evaluate((0, 1)) == t and c.evaluate((1, 0)) == 1


def test_principal_pp_divisor():
    t = RationalFunction.t()
    f = Plurifunction(2, [((1, 0), t / RationalFunction.from_poly(Poly([-1, 1])))])
    E = pluri_divisor(f, O2, P1)
    assert E.evaluate((1, 0)) == QDivisor({ZERO: 1, ONE: -1})
    assert E.degree_at((3, 4)) == 0
    D = load("a3.ppdiv")
    assert add_principal(add_principal(D, f), f.inverse()) == D


def test_identity_and_chain_errors():
    D = load("a3.ppdiv")
    idm = PPDivMorphism.identity(D)
    assert idm.is_identity()
    assert is_isomorphic_image(idm, D, D).ok
    rank1 = PPDivMorphism(SemilinearBaseMap.identity(), LatticeMorphism.from_rows([[1, 1]], 2), Plurifunction.trivial(1))
    with pytest.raises(ChainMismatch):
        compose(rank1, rank1)
    neg = PPDivMorphism(SemilinearBaseMap.identity(), LatticeMorphism.from_rows([[-1, 0], [0, 1]], 2),
                        Plurifunction.trivial(2))
    with pytest.raises(TailNotMapped):
        is_morphism(neg, D, D)


def test_morphism_inequality_versus_equality():
    D = load("a3.ppdiv")
    lower = PolyhedralDivisor(O2, P1, {ZERO: poly((0, 0)), INFINITY: poly((0, 0))})
    t = PPDivMorphism.identity(D)
    assert is_morphism(t, D, lower).ok
    assert not is_isomorphic_image(t, D, lower).ok
    report = is_morphism(t, lower, D)
    assert not report.ok and report.lines()


@pytest.mark.parametrize("seed", [11, 12, 13])
def test_morphism_algebra_on_other_seeds(seed):
    n, bad = suites.morphism_algebra(12, seed)
    assert not bad, bad


def test_split_point():
    L = Field(2)
    q = FinitePoint(Poly([-2, 0, 1]))
    assert len(split_point(q, L)) == 2
    assert len(split_point(FinitePoint(Poly([1, 0, 1])), L)) == 1
    assert split_point(INFINITY, L) == [INFINITY]
    assert len(split_point(FinitePoint(Poly([-2, 0, 0, 1])), L)) == 1
    with pytest.raises(CannotCertifySplitting):
        split_point(FinitePoint(Poly([1, 0, 0, 0, 1])), L)


def test_base_change_splits_entries():
    q = FinitePoint(Poly([-2, 0, 1]))
    D = PolyhedralDivisor(O2, P1, {q: poly((Fraction(1, 2), 0)), INFINITY: poly((0, 1))})
    DL = base_change(D, 2)
    assert len(DL.entries) == 3 and DL.base.field == Field(2)
    assert DL.degree_at((1, 1)) == D.degree_at((1, 1)) == 2
    assert base_change(D, 3).entries.keys() != DL.entries.keys()


@pytest.mark.parametrize("seed", [21, 22])
def test_base_change_suite_on_other_seeds(seed):
    n, bad, split, inert = suites.base_change_degrees(15, seed)
    assert not bad, bad


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_refinement_test_points_detect_equality(seed):
    rng = random.Random(seed)
    D = gen.p1_divisor(rng)
    E = gen.p1_divisor(rng, D.tail)
    agree = all(D.evaluate(m) == E.evaluate(m) for m in D.test_points() + E.test_points())
    assert agree == (D == E)
