"""Graded pieces of a point ideal and generic 4-dimensional subspaces.

For a generic set X of r points on P1 x P1 the direct sum of the
bidegree-(i, 1) pieces of its ideal is generated, as a module over the
degree-(1, 0) variables, by exactly two elements g1, g2:

* r = 0:       g1 = u, g2 = v (the whole ring), bidegrees (0,1), (0,1);
* r = 2k:      both generators live in bidegree (k, 1);
* r = 2k + 1:  g1 in bidegree (k, 1), g2 in bidegree (k+1, 1), where g2
  is chosen canonically inside the 3-dimensional (k+1, 1) piece as the
  first reduced null-space basis vector independent of s*g1, t*g1.

The bidegree-(a, 1) piece then has the structured basis b consisting of
all degree-(a - deg g_i) monomial shifts of each generator; its length
is always q = 2(a+1) - r.  A surface parameterization is a generic
4-dimensional subspace U of that piece, encoded by a 4 x q integer
coefficient matrix C with f = C * b.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .bipoly import BiForm, mono_basis
from .points import GenericityError, eval_matrix, is_generic


@dataclass
class GradedPiece:
    """A graded piece of the ideal of X: canonical basis of the space of
    bidegree-(i, j) forms vanishing on X."""

    bidegree: tuple
    basis: list
    dimension: int = 0

    def __post_init__(self):
        self.dimension = len(self.basis)


@dataclass
class MGenerators:
    g1: BiForm
    g2: BiForm

    @property
    def degrees(self):
        return (self.g1.bidegree, self.g2.bidegree)


@dataclass
class StructuredBasis:
    """Ordered basis of the (a, 1) piece by monomial shifts of g1, g2.

    ``labels[k] = (gen_index, st_monomial)`` records that basis element k
    is the degree-(shift, 0) monomial (es, et, 0, 0) times generator
    gen_index (0 for g1, 1 for g2).
    """

    a: int
    forms: list
    labels: list


@dataclass
class SubspaceU:
    """A 4-dimensional subspace of the (a, 1) piece: f = C * b."""

    a: int
    f: tuple
    C: list
    basis: StructuredBasis
    gens: MGenerators
    r: int
    seed: int | None = None
    certified: bool = False
    certificate: dict = field(default_factory=dict)


def ideal_piece(X, bidegree):
    """Canonical basis of the forms of the given bidegree vanishing on X."""
    basis = mono_basis(bidegree)
    if len(X) == 0:
        vecs = [[Fraction(1) if k == i else Fraction(0) for k in range(len(basis.monomials))]
                for i in range(len(basis.monomials))]
    else:
        vecs = linalg.nullspace(eval_matrix(X, bidegree))
    forms = [BiForm.from_vector(v, basis) for v in vecs]
    return GradedPiece(tuple(bidegree), forms)


def m_generators(X):
    """The two minimal generators of the (*, 1) strand of the ideal of X.

    Requires X generic; raises GenericityError otherwise.
    """
    r = len(X)
    if r == 0:
        return MGenerators(BiForm.variable("u"), BiForm.variable("v"))
    if not is_generic(X):
        raise GenericityError("point set is not generic")
    k = r // 2
    if r % 2 == 0:
        piece = ideal_piece(X, (k, 1))
        if piece.dimension != 2:
            raise GenericityError(
                f"expected a 2-dimensional ({k},1) piece, got {piece.dimension}"
            )
        return MGenerators(piece.basis[0], piece.basis[1])
    piece1 = ideal_piece(X, (k, 1))
    if piece1.dimension != 1:
        raise GenericityError(
            f"expected a 1-dimensional ({k},1) piece, got {piece1.dimension}"
        )
    g1 = piece1.basis[0]
    piece2 = ideal_piece(X, (k + 1, 1))
    if piece2.dimension != 3:
        raise GenericityError(
            f"expected a 3-dimensional ({k + 1},1) piece, got {piece2.dimension}"
        )
    s = BiForm.variable("s")
    t = BiForm.variable("t")
    big = mono_basis((k + 1, 1))
    shifts = [(s * g1).to_vector(big), (t * g1).to_vector(big)]
    for cand in piece2.basis:
        vec = cand.to_vector(big)
        if not linalg.in_span(shifts, vec):
            return MGenerators(g1, cand)
    raise GenericityError("no generator independent of the shifts of g1")


def basis_a1(X, a, gens=None):
    """Structured basis of the (a, 1) piece by monomial shifts of g1, g2.

    Always has length q = 2(a+1) - r; requires a >= ceil(r/2) so that
    both shift families are nonempty.
    """
    r = len(X)
    if 2 * a < r:
        raise ValueError(f"need a >= ceil(r/2); got a={a}, r={r}")
    gens = gens or m_generators(X)
    forms = []
    labels = []
    for gi, g in enumerate((gens.g1, gens.g2)):
        shift = a - g.bidegree[0]
        if shift < 0:
            raise ValueError(f"generator degree {g.bidegree[0]} exceeds a={a}")
        for es in range(shift, -1, -1):
            mono = BiForm.monomial((es, shift - es, 0, 0))
            forms.append(mono * g)
            labels.append((gi, (es, shift - es)))
    q = 2 * (a + 1) - r
    if len(forms) != q:
        raise RuntimeError(f"structured basis has {len(forms)} elements, expected {q}")
    big = mono_basis((a, 1))
    vecs = [f.to_vector(big) for f in forms]
    if linalg.rank(vecs) != q:
        raise GenericityError("structured basis is linearly dependent")
    return StructuredBasis(a, forms, labels)


def minors_certificate(C, mode="spot", count=64, seed=0):
    """Genericity certificate for a 4 x q coefficient matrix.

    mode "full" checks every 4 x 4 minor; mode "spot" checks full rank
    plus ``count`` random minors (all of C(q, 4) when that is smaller).
    Returns a report dict with the verdict and any failing column set.
    """
    q = len(C[0])
    if len(C) != 4:
        raise ValueError("C must have 4 rows")
    cols = list(range(q))
    all_subsets = list(itertools.combinations(cols, 4))
    if mode == "full" or len(all_subsets) <= count:
        subsets = all_subsets
        mode_used = "full"
    elif mode == "spot":
        if linalg.rank(C) != 4:
            return {"ok": False, "mode": "spot", "reason": "rank < 4"}
        rng = random.Random(seed)
        subsets = rng.sample(all_subsets, count)
        mode_used = "spot"
    else:
        raise ValueError(f"unknown mode {mode!r}")
    for sub in subsets:
        minor = linalg.det_frac([[C[i][j] for j in sub] for i in range(4)])
        if minor == 0:
            return {"ok": False, "mode": mode_used, "zero_minor_columns": list(sub)}
    return {"ok": True, "mode": mode_used, "checked": len(subsets)}


def choose_generic_U(X, a, seed, coeff_range=(-20, 20), mode="spot",
                     max_tries=64):
    """Sample an integer matrix C until the minors certificate passes,
    and assemble the subspace U with f = C * b."""
    r = len(X)
    q = 2 * (a + 1) - r
    if q < 4:
        raise ValueError(f"(a, 1) piece has dimension {q} < 4; increase a")
    gens = m_generators(X)
    b = basis_a1(X, a, gens)
    rng = random.Random(seed)
    lo, hi = coeff_range
    for _ in range(max_tries):
        C = [[rng.randint(lo, hi) for _ in range(q)] for _ in range(4)]
        cert = minors_certificate(C, mode=mode, seed=seed)
        if cert["ok"]:
            f = _assemble_f(C, b)
            return SubspaceU(a, f, C, b, gens, r, seed=seed,
                             certified=True, certificate=cert)
    raise GenericityError(f"no generic C found in {max_tries} tries")


def subspace_from_forms(X, a, forms, mode="spot"):
    """Build a SubspaceU from four explicit (a, 1) forms.

    Solves for the coefficient matrix C exactly; raises if any form is
    not in the (a, 1) piece of the ideal.  The minors certificate is
    recorded but a failing certificate does not raise, so explicitly
    supplied parameterizations can be degenerate on purpose.
    """
    r = len(X)
    gens = m_generators(X)
    b = basis_a1(X, a, gens)
    big = mono_basis((a, 1))
    cols = [f.to_vector(big) for f in b.forms]
    mat = [list(row) for row in zip(*cols)]
    C = []
    for f in forms:
        if f.bidegree != (a, 1):
            raise ValueError(f"form of bidegree {f.bidegree}, expected {(a, 1)}")
        sol = linalg.solve(mat, f.to_vector(big))
        if sol is None:
            raise ValueError("form does not lie in the (a,1) piece of the ideal")
        C.append(sol)
    cert = minors_certificate(C, mode=mode)
    return SubspaceU(a, tuple(forms), C, b, gens, r,
                     certified=bool(cert["ok"]), certificate=cert)


def _assemble_f(C, b):
    out = []
    for row in C:
        f = BiForm.zero((b.a, 1))
        for coef, form in zip(row, b.forms):
            if coef:
                f = f + form.scale(coef)
        out.append(f)
    return tuple(out)
