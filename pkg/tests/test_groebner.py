"""Elimination baseline: sparse polynomials, Buchberger, surviving form."""
from __future__ import annotations

from fractions import Fraction

import pytest

from tensurf import (
    PointSet,
    StepCapExceeded,
    buchberger,
    eliminate_params,
    parse_biform,
    subspace_from_forms,
)
from tensurf.groebner import ElimPoly, normal_form


def mono(expo, c=1):
    return ElimPoly.monomial(expo, c)


def test_elimpoly_arithmetic():
    x = mono((0, 0, 0, 1, 0, 0, 0))
    y = mono((0, 0, 0, 0, 1, 0, 0))
    f = x + y
    assert not (f - x - y).terms
    g = f.mul_term((0, 1, 0, 0, 0, 0, 0), Fraction(2))
    assert set(g.terms) == {(0, 1, 0, 1, 0, 0, 0), (0, 1, 0, 0, 1, 0, 0)}
    assert all(c == 2 for c in g.terms.values())
    assert g.monic().lead()[1] == 1


def test_order_respects_blocks():
    # any monomial containing an eliminable variable beats any pure
    # target monomial
    s = mono((0, 1, 0, 0, 0, 0, 0))
    X4 = mono((0, 0, 0, 4, 0, 0, 0))
    f = s + X4
    assert f.lead()[0] == (0, 1, 0, 0, 0, 0, 0)


def test_buchberger_and_normal_form():
    # ideal (s^2 - u, u): its basis reduces s^2 to zero
    s2 = mono((0, 2, 0, 0, 0, 0, 0))
    u = mono((0, 0, 1, 0, 0, 0, 0))
    gb = buchberger([s2 - u, u])
    assert normal_form(s2, gb).is_zero()
    assert normal_form(mono((0, 1, 0, 0, 0, 0, 0)), gb).terms  # s not in ideal


def test_elimination_recovers_quadric():
    forms = [parse_biform(t, (1, 1)) for t in ("s*u", "t*u", "s*v", "t*v")]
    U = subspace_from_forms(PointSet(()), 1, forms)
    H = eliminate_params(U)
    assert str(H) in ("X*W - Y*Z", "Y*Z - X*W")
    assert H.degree == 2


def test_elimination_matches_pipeline_on_quadric_variants():
    from tensurf import implicitize

    out = implicitize(None, 1, seed=5, verify=False)
    H1 = out.result.H.normalized()
    H2 = eliminate_params(out.U)
    assert H1 == H2


def test_step_cap_exceeded():
    forms = [parse_biform(t, (2, 1)) for t in
             ("s^2*u + t^2*v", "s*t*u - s^2*v", "t^2*u + s*t*v",
              "s^2*u - t^2*u + s*t*v")]
    U = subspace_from_forms(PointSet(()), 2, forms)
    with pytest.raises(StepCapExceeded):
        eliminate_params(U, step_cap=5)
