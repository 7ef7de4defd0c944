"""Graded pieces of point ideals and the chosen 4-dimensional subspace."""
from __future__ import annotations

import random
from fractions import Fraction

import pytest

from tensurf import (
    GenericityError,
    PointSet,
    basis_a1,
    choose_generic_U,
    ideal_piece,
    m_generators,
    minors_certificate,
    parse_biform,
    random_generic_points,
    subspace_from_forms,
)
from tensurf.linalg import in_span, subspace_basis
from tensurf.points import hilbert
from tensurf.bipoly import mono_basis


def span_of(forms):
    bd = forms[0].bidegree
    basis = mono_basis(bd)
    return subspace_basis([f.to_vector(basis) for f in forms]), basis


def test_ideal_piece_dimension_complements_hilbert(skew4):
    for bd in ((2, 1), (3, 1), (2, 2)):
        piece = ideal_piece(skew4, bd)
        full = (bd[0] + 1) * (bd[1] + 1)
        assert piece.dimension == full - hilbert(skew4, bd)
        for f in piece.basis:
            for p in skew4:
                assert f.evaluate(p) == 0


def test_ideal_piece_empty_set_is_everything():
    X = PointSet(())
    piece = ideal_piece(X, (2, 1))
    assert piece.dimension == 6


def test_m_generators_empty_set():
    g = m_generators(PointSet(()))
    assert str(g.g1) == "u"
    assert str(g.g2) == "v"


def test_m_generators_on_four_points_spans_reference(skew4):
    """For the four-point configuration the (2,1) piece is 2-dimensional
    and spanned by two known reference generators."""
    g = m_generators(skew4)
    assert g.degrees == ((2, 1), (2, 1))
    vecs, basis = span_of([g.g1, g.g2])
    assert len(vecs) == 2
    ref1 = parse_biform("6*t^2*u + 7*s^2*v - 23*s*t*v", (2, 1))
    ref2 = parse_biform("2*s*t*u - 3*s^2*v + 7*s*t*v", (2, 1))
    for ref in (ref1, ref2):
        for p in skew4:
            assert ref.evaluate(p) == 0
        assert in_span(vecs, ref.to_vector(basis))


def test_m_generators_odd_count():
    X = random_generic_points(5, seed=1)
    g = m_generators(X)
    assert g.degrees == ((2, 1), (3, 1))
    for p in X:
        assert g.g1.evaluate(p) == 0
        assert g.g2.evaluate(p) == 0


def test_m_generators_rejects_non_generic(diag4):
    with pytest.raises(GenericityError):
        m_generators(diag4)


def test_basis_a1_size_and_labels(two_points):
    for a in (2, 3, 4):
        sb = basis_a1(two_points, a)
        q = 2 * (a + 1) - len(two_points)
        assert len(sb.forms) == q
        assert len(sb.labels) == q
        piece = ideal_piece(two_points, (a, 1))
        assert piece.dimension == q
        vecs, basis = span_of(piece.basis)
        for f in sb.forms:
            assert in_span(vecs, f.to_vector(basis))
        # labels record which generator each basis element shifts
        for f, (gi, st) in zip(sb.forms, sb.labels):
            assert gi in (0, 1)
            assert sum(st[:2]) + (1 if gi >= 0 else 0) >= 0  # well-formed


def test_basis_a1_is_independent(skew4):
    sb = basis_a1(skew4, 4)
    vecs, _ = span_of(sb.forms)
    assert len(vecs) == len(sb.forms)


def test_choose_generic_u_properties(two_points):
    U = choose_generic_U(two_points, 3, seed=5)
    assert U.a == 3 and U.r == 2
    assert len(U.f) == 4
    assert U.certified
    for f in U.f:
        assert f.bidegree == (3, 1)
        for p in two_points:
            assert f.evaluate(p) == 0
    # deterministic in the seed
    V = choose_generic_U(two_points, 3, seed=5)
    assert [str(f) for f in V.f] == [str(f) for f in U.f]
    W = choose_generic_U(two_points, 3, seed=6)
    assert [str(f) for f in W.f] != [str(f) for f in U.f]


def test_minors_certificate_modes(two_points):
    U = choose_generic_U(two_points, 3, seed=2, mode="full")
    assert U.certified
    cert = U.certificate
    assert cert.get("mode") == "full"


def test_subspace_from_forms_round_trip(two_points):
    U = choose_generic_U(two_points, 3, seed=9)
    V = subspace_from_forms(two_points, 3, list(U.f))
    assert [str(f) for f in V.f] == [str(f) for f in U.f]
    assert V.r == 2


def test_subspace_from_forms_rejects_bad_input(two_points):
    piece = ideal_piece(two_points, (3, 1))
    with pytest.raises(ValueError):
        subspace_from_forms(two_points, 3, piece.basis[:3])  # not four forms
    off = parse_biform("s^3*u", (3, 1))  # does not vanish on X
    with pytest.raises(ValueError):
        subspace_from_forms(two_points, 3,
                            [off, piece.basis[0], piece.basis[1], piece.basis[2]])
    # dependent forms are accepted but flagged as uncertified
    dep = [piece.basis[0], piece.basis[1], piece.basis[2],
           piece.basis[0] + piece.basis[1]]
    U = subspace_from_forms(two_points, 3, dep)
    assert not U.certified
