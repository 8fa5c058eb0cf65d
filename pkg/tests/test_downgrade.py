import itertools
import os

import pytest

import oracles
from polydiv import documents as docs
from polydiv.algebra import fine_graded_piece
from polydiv.convex import Cone
from polydiv.downgrade import DowngradeInput, downgrade, projected_fan, slice_polyhedron
from polydiv.lattice import LatticeMorphism, NotInjective, TorsionCokernel

GOLDEN = os.path.join(os.path.dirname(__file__), os.pardir, "golden")


def load(name):
    return docs.parse_downgrade_input(docs.read_document(os.path.join(GOLDEN, name)))


def test_blowup_fine_pieces_match_the_ring():
    out = downgrade(load("blowup.dginput"))
    for m in range(4):
        for u in itertools.product(range(-5, 6), repeat=2):
            assert fine_graded_piece(out.ppdiv, (m,), u) == oracles.blowup_fine(m, u)


def test_projected_fan_and_slices():
    P = LatticeMorphism.from_rows([[1, 0, 1], [0, 1, 1]], 3)
    fan = projected_fan(Cone.orthant(3), P)
    assert set(fan.rays) == {(1, 0), (0, 1), (1, 1)}
    assert len(fan.maximal) == 2
    sl = slice_polyhedron(Cone.orthant(3), P, (1, 1))
    assert set(sl.vertices) == {(0, 0, 1), (1, 1, 0)}


def test_full_torus_gives_a_point_base():
    out = downgrade(load("identity.dginput"))
    assert out.fan.rank == 0 and out.rays == ()
    assert out.ppdiv.lattice_rank == 2 and not out.ppdiv.entries


def test_split_sequence_is_checked():
    F = LatticeMorphism.from_rows([[1], [1], [-1]], 1)
    with pytest.raises(ValueError):
        DowngradeInput(Cone.orthant(3), F, LatticeMorphism.from_rows([[1, 0, 1], [0, 1, 1]], 3))
    with pytest.raises(ValueError):
        DowngradeInput(Cone.orthant(2), F)


def test_subtorus_must_be_saturated():
    with pytest.raises(TorsionCokernel):
        downgrade(DowngradeInput(Cone.orthant(2), LatticeMorphism.from_rows([[2], [0]], 1)))
    with pytest.raises(NotInjective):
        downgrade(DowngradeInput(Cone.orthant(2), LatticeMorphism.from_rows([[1, 1], [1, 1]], 2)))
