from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from polydiv.exactnum import (
    QQ,
    CannotFactor,
    DegreeTooHigh,
    Field,
    FieldMismatch,
    Poly,
    QuadElement,
    conjugate,
    factor_poly,
    field_sqrt,
    format_scalar,
    is_irreducible,
    parse_scalar,
    poly_roots_quadratic,
    rational_roots,
    squarefree_part,
)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
ds = st.sampled_from([2, 3, 5, -1, -3, 7])


@st.composite
def quads(draw, d=None):
    d = d if d is not None else draw(ds)
    return QuadElement(draw(rationals), draw(rationals), d)


@given(ds.flatmap(lambda d: st.tuples(quads(d), quads(d), quads(d))))
def test_field_axioms(xyz):
    x, y, z = xyz
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x - x == 0
    if x != 0:
        assert x * x.inverse() == 1
        assert (y / x) * x == y


@given(ds.flatmap(lambda d: st.tuples(quads(d), quads(d))))
def test_conjugation_is_a_field_automorphism(xy):
    x, y = xy
    assert conjugate(x * y) == conjugate(x) * conjugate(y)
    assert conjugate(x + y) == conjugate(x) + conjugate(y)
    assert conjugate(conjugate(x)) == x
    assert (x * y).norm() == x.norm() * y.norm()


@given(quads())
def test_scalar_text_round_trip(x):
    fld = Field(x.d)
    assert parse_scalar(format_scalar(x), fld) == x


def test_rational_elements_compare_with_fractions():
    assert QuadElement(Fraction(3, 2), 0, 2) == Fraction(3, 2)
    assert hash(QuadElement(Fraction(3, 2), 0, 2)) == hash(Fraction(3, 2))


def test_parse_scalar_forms():
    L = Field(2)
    assert parse_scalar("3+2*sqrt(2)", L) == QuadElement(3, 2, 2)
    assert parse_scalar("-1/2-sqrt(2)", L) == QuadElement(Fraction(-1, 2), -1, 2)
    assert parse_scalar("sqrt(2)", L) == L.sqrt_d()
    assert parse_scalar("5/3") == Fraction(5, 3)
    with pytest.raises(FieldMismatch):
        parse_scalar("sqrt(3)", L)
    with pytest.raises(ValueError):
        parse_scalar("abc")


def test_field_parse_and_squarefree():
    assert Field.parse("Q") == QQ
    assert Field.parse("Q(sqrt 2)") == Field(2)
    assert squarefree_part(12) == 3
    assert squarefree_part(-8) == -2


def test_field_sqrt():
    L = Field(2)
    assert field_sqrt(QuadElement(3, 2, 2), L) ** 2 == QuadElement(3, 2, 2)
    assert field_sqrt(2, L) == L.sqrt_d()
    assert field_sqrt(3, L) is None
    assert field_sqrt(Fraction(9, 4), QQ) == Fraction(3, 2)


@given(st.lists(rationals, min_size=1, max_size=5), st.lists(rationals, min_size=1, max_size=4))
def test_division_with_remainder(a, b):
    p, q = Poly(a), Poly(b)
    if q.is_zero():
        return
    quo, rem = divmod(p, q)
    assert quo * q + rem == p
    assert rem.is_zero() or rem.degree < q.degree


@settings(max_examples=60)
@given(st.lists(st.integers(-4, 4), min_size=1, max_size=3, unique=True), st.integers(1, 5))
def test_factoring_products_of_linear_factors(roots, lead):
    p = Poly([lead])
    for r in roots:
        p = p * Poly([-r, 1])
    c, factors = factor_poly(p)
    assert c == lead
    assert sorted(-f.coeffs[0] for f, _ in factors) == sorted(roots)
    assert sorted(rational_roots(p)) == sorted(roots)


def test_factoring_mixed():
    t2m2 = Poly([-2, 0, 1])
    p = Poly([1, 1]) ** 2 * t2m2
    c, factors = factor_poly(p)
    assert c == 1 and factors == [(Poly([1, 1]), 2), (t2m2, 1)]
    L = Field(2)
    _, over_L = factor_poly(t2m2.over(L))
    assert len(over_L) == 2


def test_irreducibility():
    assert is_irreducible(Poly([-2, 0, 1])) is True
    assert is_irreducible(Poly([-2, 0, 1], Field(2))) is False
    assert is_irreducible(Poly([-2, 0, 0, 1])) is True
    assert is_irreducible(Poly([-2, 0, 0, 1], Field(2))) is True
    assert is_irreducible(Poly([-2, 0, QuadElement(0, 1, 2), 1], Field(2))) is None
    assert is_irreducible(Poly([1, 0, 0, 0, 1])) is None


def test_quadratic_roots():
    assert poly_roots_quadratic(Poly([-1, 0, 1])) == [-1, 1]
    assert poly_roots_quadratic(Poly([1, 0, 1])) == []
    roots = poly_roots_quadratic(Poly([1, 0, 1], Field(-1)))
    assert [r * r for r in roots] == [-1, -1]
    with pytest.raises(DegreeTooHigh):
        poly_roots_quadratic(Poly([1, 0, 0, 1]))


def test_quartic_without_roots_cannot_be_factored():
    with pytest.raises(CannotFactor):
        factor_poly(Poly([2, 0, 0, 0, 1]))
