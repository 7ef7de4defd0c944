"""Moving-plane syzygies of a parameterization in degree (*, 0).

Writing each coordinate form as f_i = Q_i g1 + P_i g2 against the two
ideal generators turns the search for syzygies with k[s,t] coefficients
into linear algebra over the 2 x 4 matrix QP = [[Q0..Q3], [P0..P3]]:
because g1, g2 form a regular sequence (generic X), a vector L of
degree-(alpha, 0) forms satisfies sum L_i f_i = 0 exactly when
QP * L = 0.  Scanning alpha upward and keeping canonical complements of
the shifted span of earlier generators yields the two minimal kernel
generators (the mu-basis); their degrees add up to 2a - r.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .bipoly import BiForm, mono_basis
from .errors import DegeneracyError


@dataclass
class QPMatrix:
    """The 2 x 4 coefficient matrix of f against (g1, g2).

    entries[0][i] = Q_i and entries[1][i] = P_i, binary forms in s, t of
    the two row degrees.  A and B are the corresponding blocks of the
    subspace matrix C.
    """

    entries: list
    row_degrees: tuple
    A: list
    B: list
    U: object = None


@dataclass
class MuBasis:
    """Two minimal degree-(*, 0) syzygies, mu1 >= mu2."""

    K1: tuple
    K2: tuple
    mu1: int
    mu2: int
    kernel_dims: dict = field(default_factory=dict)

    @property
    def degrees(self):
        return (self.mu1, self.mu2)


def qp_decompose(U):
    """Split the subspace matrix C into the QP coefficient matrix.

    Verifies the decomposition f_i = Q_i g1 + P_i g2 exactly, and
    certifies rank(QP) = 2 over the fraction field via a nonzero 2 x 2
    minor; rank < 2 means the f_i share a common factor.
    """
    b = U.basis
    j1 = next(b.labels[k][1][0] + b.labels[k][1][1] for k in range(len(b.labels))
              if b.labels[k][0] == 0)
    j2 = next(b.labels[k][1][0] + b.labels[k][1][1] for k in range(len(b.labels))
              if b.labels[k][0] == 1)
    A = []
    B = []
    Q = []
    P = []
    for i in range(4):
        arow, brow = [], []
        qterms, pterms = {}, {}
        for coef, (gi, (es, et)) in zip(U.C[i], b.labels):
            coef = Fraction(coef)
            if gi == 0:
                arow.append(coef)
                if coef:
                    qterms[(es, et, 0, 0)] = coef
            else:
                brow.append(coef)
                if coef:
                    pterms[(es, et, 0, 0)] = coef
        A.append(arow)
        B.append(brow)
        Q.append(BiForm((j1, 0), qterms))
        P.append(BiForm((j2, 0), pterms))
    qp = QPMatrix([Q, P], (j1, j2), A, B, U)
    g1, g2 = U.gens.g1, U.gens.g2
    for i in range(4):
        if Q[i] * g1 + P[i] * g2 != U.f[i]:
            raise RuntimeError(f"QP decomposition failed to reproduce f_{i}")
    if not _rank_two(Q, P):
        raise DegeneracyError(
            "qp", "QP has rank < 2 over the fraction field "
            "(the coordinate forms share a common factor)")
    return qp


def _rank_two(Q, P):
    for i in range(4):
        for j in range(i + 1, 4):
            if not (Q[i] * P[j] - Q[j] * P[i]).is_zero():
                return True
    return False


def graded_kernel(qp, alpha):
    """Canonical basis of {L : QP * L = 0} with deg L_i = (alpha, 0).

    Returns a list of 4-tuples of binary forms.  Every returned syzygy
    is cross-checked against sum L_i f_i = 0 in the original ring.
    """
    mat = _kernel_matrix(qp, alpha)
    vecs = linalg.nullspace(mat)
    out = [_vector_to_syzygy(v, alpha) for v in vecs]
    if qp.U is not None:
        zero = BiForm.zero((alpha + qp.U.a, 1))
        for L in out:
            total = zero
            for Li, fi in zip(L, qp.U.f):
                total = total + Li * fi
            if not total.is_zero():
                raise RuntimeError("kernel vector is not a syzygy of f")
    return out


def _kernel_matrix(qp, alpha):
    """Rows: coefficients of sum L_i Q_i and sum L_i P_i; columns indexed
    by (i, coefficient of s^(alpha-m) t^m in L_i)."""
    j1, j2 = qp.row_degrees
    ncols = 4 * (alpha + 1)
    rows = []
    for row_forms, jd in zip(qp.entries, (j1, j2)):
        coeffs = []
        for form in row_forms:
            c = [Fraction(0)] * (jd + 1)
            for (es, et, _, _), val in form.terms.items():
                c[et] = val
            coeffs.append(c)
        for n in range(alpha + jd + 1):
            row = [Fraction(0)] * ncols
            for i in range(4):
                ci = coeffs[i]
                for m in range(alpha + 1):
                    l = n - m
                    if 0 <= l <= jd:
                        row[i * (alpha + 1) + m] = ci[l]
            rows.append(row)
    return rows


def _vector_to_syzygy(vec, alpha):
    forms = []
    for i in range(4):
        terms = {}
        for m in range(alpha + 1):
            c = vec[i * (alpha + 1) + m]
            if c:
                terms[(alpha - m, m, 0, 0)] = c
        forms.append(BiForm((alpha, 0), terms))
    return tuple(forms)


def _syzygy_to_vector(L, alpha):
    vec = []
    for form in L:
        c = [Fraction(0)] * (alpha + 1)
        for (es, et, _, _), val in form.terms.items():
            c[et] = val
        vec.extend(c)
    return vec


def _shift_to_degree(L, source_deg, alpha):
    """All monomial shifts of a syzygy L of degree source_deg up to
    degree alpha, as coordinate vectors."""
    out = []
    d = alpha - source_deg
    for es in range(d, -1, -1):
        mono = BiForm.monomial((es, d - es, 0, 0))
        shifted = tuple(mono * Li for Li in L)
        out.append(_syzygy_to_vector(shifted, alpha))
    return out


def mu_basis(qp, expect=None, max_degree=None):
    """Scan degrees upward for the two minimal kernel generators.

    ``expect`` optionally carries (a, r, certified); when the instance is
    certified generic the degree pair is asserted to be
    {a - floor(r/2), a - ceil(r/2)} and the sum 2a - r.  The scan aborts
    past ``max_degree`` (default 2a, or 2 * row degree sum).
    """
    j1, j2 = qp.row_degrees
    if max_degree is None:
        if expect is not None:
            max_degree = 2 * expect[0]
        else:
            max_degree = 2 * (j1 + j2) + 2
    found = []
    dims = {}
    for alpha in range(max_degree + 1):
        if len(found) == 2:
            break
        mat = _kernel_matrix(qp, alpha)
        if not _may_have_kernel(mat):
            dims[alpha] = 0
            continue
        kern = graded_kernel(qp, alpha)
        dims[alpha] = len(kern)
        if not kern:
            continue
        span = []
        for L, deg in found:
            span.extend(_shift_to_degree(L, deg, alpha))
        span_basis = linalg.subspace_basis(span) if span else []
        for L in kern:
            if len(found) == 2:
                break
            vec = _syzygy_to_vector(L, alpha)
            if span_basis and linalg.in_span(span_basis, vec):
                continue
            found.append((_canonical_syzygy(L), alpha))
            span_basis = linalg.subspace_basis(
                span_basis + [_syzygy_to_vector(found[-1][0], alpha)])
    if len(found) < 2:
        raise DegeneracyError(
            "mu_basis", f"fewer than two kernel generators up to degree {max_degree}")
    (Ka, da), (Kb, db) = found
    if da >= db:
        K1, mu1, K2, mu2 = Ka, da, Kb, db
    else:
        K1, mu1, K2, mu2 = Kb, db, Ka, da
    mb = MuBasis(K1, K2, mu1, mu2, dims)
    _check_freeness(mb)
    if expect is not None:
        a, r, certified = expect
        if mu1 + mu2 != 2 * a - r:
            raise DegeneracyError(
                "mu_basis",
                f"kernel generator degrees {mu1}+{mu2} != 2a-r = {2 * a - r}")
        if certified and {mu1, mu2} != {a - r // 2, a - (r + 1) // 2}:
            raise DegeneracyError(
                "mu_basis",
                f"certified-generic instance has degrees {{{mu1},{mu2}}}, "
                f"expected {{{a - r // 2},{a - (r + 1) // 2}}}")
    return mb


def _may_have_kernel(mat):
    """Fast sound emptiness filter: if the matrix has full column rank
    mod p, the exact kernel is zero and the scan can skip this degree."""
    if not mat:
        return False
    ncols = len(mat[0])
    if len(mat) < ncols:
        return True
    ints = linalg.int_rows(mat)
    p = 2147483647
    arr = np.array([[x % p for x in row] for row in ints], dtype=np.int64)
    return linalg.rank_mod(arr, p) < ncols


def _canonical_syzygy(L):
    """Scale a syzygy vector to primitive integer coefficients with a
    positive leading entry (presentation only; the span is unchanged)."""
    alpha = L[0].bidegree[0]
    vec = _syzygy_to_vector(L, alpha)
    ints = linalg.primitive_int_vector(vec)
    return _vector_to_syzygy([Fraction(x) for x in ints], alpha)


def _check_freeness(mb):
    rng = random.Random(20240811)
    for _ in range(4):
        sv, tv = rng.randint(-40, 40), rng.randint(-40, 40)
        if sv == 0 and tv == 0:
            continue
        point = ((sv, tv), (1, 1))
        mat = [[Ki.evaluate(point) for Ki in (mb.K1[i], mb.K2[i])] for i in range(4)]
        if linalg.rank(mat) == 2:
            return
    raise DegeneracyError("mu_basis", "kernel generators fail the rank-2 check")
