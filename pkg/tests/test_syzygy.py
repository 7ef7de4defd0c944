"""Syzygy computation: QP split, graded kernels, minimal degree pairs."""
from __future__ import annotations

import random
from fractions import Fraction

import pytest

from tensurf import (
    BiForm,
    PointSet,
    choose_generic_U,
    graded_kernel,
    mu_basis,
    qp_decompose,
    random_generic_points,
    subspace_from_forms,
)
from tensurf.errors import DegeneracyError
from tensurf.ideal_pieces import basis_a1, ideal_piece, m_generators


def pipeline_to_mu(X, a, seed):
    U = choose_generic_U(X, a, seed=seed)
    qp = qp_decompose(U)
    return U, qp, mu_basis(qp, expect=(a, U.r, U.certified))


def test_qp_reproduces_forms(two_points):
    U = choose_generic_U(two_points, 3, seed=1)
    qp = qp_decompose(U)
    g1, g2 = U.gens.g1, U.gens.g2
    for i in range(4):
        assert qp.entries[0][i] * g1 + qp.entries[1][i] * g2 == U.f[i]
    # row degrees are the two shift amounts
    assert qp.row_degrees == (3 - g1.bidegree[0], 3 - g2.bidegree[0])


def test_graded_kernel_elements_are_syzygies(two_points):
    U = choose_generic_U(two_points, 3, seed=3)
    qp = qp_decompose(U)
    for alpha in (2, 3):
        for L in graded_kernel(qp, alpha):
            total = BiForm.zero((alpha + 3, 1))
            for Li, fi in zip(L, U.f):
                total = total + Li * fi
            assert total.is_zero()


def test_mu_degrees_on_certified_instances():
    rng = random.Random(0)
    for _ in range(6):
        r = rng.randint(0, 6)
        a = rng.randint(max(2, (r + 1) // 2 + 1), 5)
        if 2 * (a + 1) - r < 4:
            continue
        X = random_generic_points(r, seed=rng.randint(0, 10**6))
        U, qp, mb = pipeline_to_mu(X, a, seed=rng.randint(0, 10**6))
        assert mb.mu1 + mb.mu2 == 2 * a - r
        assert {mb.mu1, mb.mu2} == {a - r // 2, a - (r + 1) // 2}
        assert mb.mu1 >= mb.mu2
        # both kernel generators are genuine syzygies of f
        for K, deg in ((mb.K1, mb.mu1), (mb.K2, mb.mu2)):
            total = BiForm.zero((deg + a, 1))
            for Ki, fi in zip(K, U.f):
                total = total + Ki * fi
            assert total.is_zero()


def test_mu_odd_remainder_split(two_points):
    # r = 3, a = 3: degree pair must be {2, 1}
    X = random_generic_points(3, seed=12)
    U, qp, mb = pipeline_to_mu(X, 3, seed=4)
    assert (mb.mu1, mb.mu2) == (2, 1)


def test_mu_r0_split():
    U, qp, mb = pipeline_to_mu(PointSet(()), 2, 8)
    assert (mb.mu1, mb.mu2) == (2, 2)


def test_mu_deterministic(two_points):
    _, _, mb1 = pipeline_to_mu(two_points, 4, seed=5)
    _, _, mb2 = pipeline_to_mu(two_points, 4, seed=5)
    for K, L in ((mb1.K1, mb2.K1), (mb1.K2, mb2.K2)):
        assert [str(f) for f in K] == [str(f) for f in L]


def test_mu_canonical_scaling(two_points):
    _, _, mb = pipeline_to_mu(two_points, 3, seed=6)
    for K in (mb.K1, mb.K2):
        coeffs = []
        for f in K:
            coeffs.extend(f.terms.values())
        assert all(c.denominator == 1 for c in coeffs)


def test_degenerate_forms_fail_loudly(two_points):
    """A subspace whose forms share structure beyond genericity must
    either fail the QP rank check or miss the expected degree pair, but
    never silently return a wrong answer."""
    gens = m_generators(two_points)
    g1 = gens.g1
    s = BiForm.variable("s")
    t = BiForm.variable("t")
    # all four forms are multiples of g1 alone: QP has rank < 2
    bad = [m * g1 for m in (s * s, s * t, t * t, (s * s) + (t * t))]
    U = subspace_from_forms(two_points, 3, bad)
    assert not U.certified
    with pytest.raises(DegeneracyError):
        qp_decompose(U)


def test_common_factor_subspace_fails_sum_rule(two_points):
    """Four independent forms sharing the factor s: the subspace is
    uncertified and the kernel degrees drop below 2a - r.  The sum rule
    must catch this instead of returning a wrong answer."""
    piece = ideal_piece(two_points, (3, 1))
    forms = [piece.basis[0], piece.basis[1], piece.basis[2], piece.basis[3]]
    U = subspace_from_forms(two_points, 3, forms)
    assert not U.certified
    qp = qp_decompose(U)
    with pytest.raises(DegeneracyError):
        mu_basis(qp, expect=(3, 2, U.certified))
