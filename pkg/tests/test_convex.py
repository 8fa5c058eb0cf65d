from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import suites
from polydiv.convex import (
    Cone,
    Empty,
    FormalDifference,
    Inconsistent,
    NotInDual,
    NotPointed,
    TailedPolyhedron,
    eval_difference,
    hilbert_basis,
    minkowski_sum,
    polyhedron_from_support,
    support_eval,
)

seeds = st.integers(0, 10**9)


@pytest.mark.parametrize("name", sorted(suites.CONVEX_SUITES))
@settings(max_examples=10, deadline=None)
@given(seed=seeds)
def test_convex_properties_on_fresh_seeds(name, seed):
    n, bad = suites.CONVEX_SUITES[name](5, seed)
    assert not bad, bad


def test_dual_and_faces_of_orthant():
    c = Cone.orthant(2)
    assert c.dual() == c
    assert c.face((1, 0)) == Cone.from_generators([(0, 1)], 2)
    assert c.face((1, 1)) == Cone.zero(2)
    assert len(c.faces()) == 4
    with pytest.raises(NotInDual):
        c.face((1, -1))


def test_non_pointed_cones():
    half = Cone.from_inequalities([(1, 0)], 2)
    assert not half.is_pointed()
    assert half.lineality and half.dim == 2
    assert Cone.from_generators([(1, 1)], 2).dual().contains((1, -1))
    with pytest.raises(NotPointed):
        TailedPolyhedron([(0, 0)], half, 2)


def test_hilbert_bases():
    assert sorted(hilbert_basis(Cone.from_generators([(1, 0), (1, 2)], 2))) == [(1, 0), (1, 1), (1, 2)]
    dual = Cone.from_generators([(1, 0), (1, 12)], 2).dual()
    assert sorted(hilbert_basis(dual)) == [(0, 1), (1, 0), (12, -1)]
    assert sorted(hilbert_basis(Cone.orthant(3))) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]


def test_support_function_values():
    O = Cone.orthant(2)
    d = TailedPolyhedron([(1, 0), (0, 1)], O, 2)
    assert support_eval(d, (1, 1)) == 1
    assert support_eval(d, (2, 3)) == 2
    assert support_eval(d, (1, -1)) == float("-inf")
    assert support_eval(Empty(2, O), (1, 1)) == float("inf")


def test_vertex_form_is_minimal():
    O = Cone.orthant(2)
    d = TailedPolyhedron([(1, 0), (0, 1), (1, 1), (3, 0), (Fraction(1, 2), Fraction(1, 2))], O, 2)
    assert d.vertices == ((0, 1), (1, 0))
    assert d.contains_point((Fraction(1, 2), Fraction(1, 2)))
    assert not d.contains_point((0, 0))


def test_minkowski_sum_of_segments():
    Z = Cone.zero(2)
    a = TailedPolyhedron([(0, 0), (1, 0)], Z, 2)
    b = TailedPolyhedron([(0, 0), (0, 1)], Z, 2)
    assert minkowski_sum(a, b) == TailedPolyhedron([(0, 0), (1, 0), (0, 1), (1, 1)], Z, 2)
    assert isinstance(minkowski_sum(a, Empty(2, Z)), Empty)


def test_reconstruction_rejects_inconsistent_samples():
    O = Cone.orthant(2)
    with pytest.raises(Inconsistent):
        polyhedron_from_support(O, {(1, 0): 0, (0, 1): 0, (1, 1): -1})


def test_formal_differences():
    O = Cone.orthant(2)
    a = TailedPolyhedron([(1, 0), (0, 1)], O, 2)
    b = TailedPolyhedron([(0, 0)], O, 2)
    fd = FormalDifference(a, b)
    assert eval_difference(fd, (1, 1)) == 1
    assert fd + FormalDifference(b, a) == FormalDifference(b, b)
    assert FormalDifference(minkowski_sum(a, a), a) == FormalDifference(a, b)


def test_normal_quasifan_of_segment():
    O = Cone.orthant(2)
    d = TailedPolyhedron([(1, 0), (0, 1)], O, 2)
    fan = d.normal_quasifan
    assert len(fan.maximal) == 2
    assert set(fan.rays) == {(1, 0), (0, 1), (1, 1)}
