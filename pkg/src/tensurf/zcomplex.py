"""Degree-(2a-1, 0) strand of the approximation complex and its determinant.

The surface map f = (f0..f3) of bidegree (a, 1) has a rank-two module of
(*, 0) syzygies with a free basis K1, K2.  Multiplying each Ki by the
monomials of the complementary degree produces a basis of the 2a + r
syzygies of degree (2a-1, 0); applying the Koszul map sends each basis
syzygy L to the linear form sum_j L_j X_j expanded over the monomials
s^(2a-1), ..., t^(2a-1).  This yields the 2a x (2a+r) matrix d1 of
linear forms whose kernel d2 has exactly r columns, and the alternating
ratio of complementary minors det M1 / det M2 is the implicit equation
of the surface (up to the assumed-trivial multiplicity of the map).
"""

from __future__ import annotations

import math
import os
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bipoly import (
    BiForm,
    SurfForm,
    mono_basis,
    substitute_surface,
    surf_mono_list,
    _key_surf,
)
from .errors import DegeneracyError, PipelineError
from .ideal_pieces import SubspaceU, choose_generic_U, subspace_from_forms
from .interpolate import (
    SimplexInterpolatorMod,
    interp_simplex_exact,
    newton_nodes,
    simplex_points,
)
from .linalg import (
    charpolys_mod_batch,
    det_frac,
    det_int,
    det_mod,
    dets_mod_batch,
    matinv_mod,
    nullspace,
    prime_stream,
    primitive_int_vector,
    rank,
    rank_mod,
)
from .points import GenericityError, PointSet, is_generic
from .syzygy import mu_basis, qp_decompose

SURF_NAMES = ("X", "Y", "Z", "W")

# beyond this matrix size the square (r = 0) determinant switches to the
# evaluate-mod-p / Chinese-remainder engine
MODULAR_DET_MIN = 26
# symbolic fraction-free cross-check of the interpolated determinant
BAREISS_CHECK_MAX = 12


@dataclass
class ComplexNu:
    """The matrices of the degree-nu strand, nu = (2a-1, 0).

    d1 is stored as four integer coefficient matrices, one per variable
    of the target space: entry (n, j) of d1 equals
    sum_V coeff[V][n][j] * V.  d2 (present when r > 0) is stored the
    same way with shape (2a+r) x r.
    """

    a: int
    r: int
    nu: tuple
    col_labels: list
    coeff: dict
    d2_coeff: dict | None = None
    mu: object = None
    U: SubspaceU | None = None

    @property
    def rows(self):
        return 2 * self.a

    @property
    def cols(self):
        return 2 * self.a + self.r

    def d1_entry(self, n, j):
        terms = {}
        for v, name in enumerate(SURF_NAMES):
            c = self.coeff[name][n][j]
            if c:
                expo = [0, 0, 0, 0]
                expo[v] = 1
                terms[tuple(expo)] = Fraction(c)
        return SurfForm(1, terms)

    def d1_strings(self):
        return [
            [str(self.d1_entry(n, j)) for j in range(self.cols)]
            for n in range(self.rows)
        ]

    def d1_at(self, q):
        """Evaluate d1 at a point of the target space (exact)."""
        qs = [Fraction(x) for x in q]
        out = []
        for n in range(self.rows):
            row = []
            for j in range(self.cols):
                total = Fraction(0)
                for v, name in enumerate(SURF_NAMES):
                    c = self.coeff[name][n][j]
                    if c:
                        total += c * qs[v]
                row.append(total)
            out.append(row)
        return out

    def d2_entry(self, j, c):
        if self.d2_coeff is None:
            raise ValueError("d2 has not been computed")
        terms = {}
        for v, name in enumerate(SURF_NAMES):
            val = self.d2_coeff[name][j][c]
            if val:
                expo = [0, 0, 0, 0]
                expo[v] = 1
                terms[tuple(expo)] = Fraction(val)
        return SurfForm(1, terms)

    def d2_strings(self):
        if self.r == 0 or self.d2_coeff is None:
            return []
        return [
            [str(self.d2_entry(j, c)) for c in range(self.r)]
            for j in range(self.cols)
        ]


@dataclass
class ImplicitResult:
    det_poly: SurfForm
    H: SurfForm
    deg_lambda_assumed: int
    chosen_minor_columns: tuple
    verification: dict = field(default_factory=dict)
    power_screen: dict = field(default_factory=dict)


@dataclass
class PipelineOutput:
    U: SubspaceU
    qp: object
    mb: object
    cn: ComplexNu
    result: ImplicitResult
    timings_ms: dict


def build_d1(U, mb):
    """Assemble d1 by shifting the two free syzygies up to degree 2a-1."""
    a, r = U.a, U.r
    nu = 2 * a - 1
    ncols = 2 * a + r
    coeff = {name: [[0] * ncols for _ in range(2 * a)] for name in SURF_NAMES}
    labels = []
    col = 0
    for which, K, mu in ((1, mb.K1, mb.mu1), (2, mb.K2, mb.mu2)):
        shift = nu - mu
        if shift < 0:
            raise DegeneracyError("d1", f"syzygy degree {mu} exceeds {nu}")
        kcoef = []
        for comp in K:
            vec = [0] * (mu + 1)
            for (es, et, eu, ev), c in comp.terms.items():
                if c.denominator != 1:
                    raise DegeneracyError("d1", "syzygy basis is not integral")
                vec[et] = int(c)
            kcoef.append(vec)
        for met in range(shift + 1):
            for v, name in enumerate(SURF_NAMES):
                for et in range(mu + 1):
                    c = kcoef[v][et]
                    if c:
                        coeff[name][met + et][col] = c
            labels.append((which, (shift - met, met)))
            col += 1
    if col != ncols:
        raise DegeneracyError(
            "d1", f"assembled {col} columns, expected {ncols}"
        )
    cn = ComplexNu(a, r, (nu, 0), labels, coeff, mu=mb, U=U)
    _check_no_constant_kernel(cn)
    return cn


def build_d1_direct(U):
    """Assemble d1 from scratch: solve for every degree-(2a-1, 0) syzygy
    of f as one nullspace, with no knowledge of the module structure."""
    a, r = U.a, U.r
    nu = 2 * a - 1
    ncols = 2 * a + r
    out_rows = mono_basis((nu + a, 1))
    index = {m: n for n, m in enumerate(out_rows.monomials)}
    mat = [[Fraction(0)] * (8 * a) for _ in range(len(out_rows.monomials))]
    shifts = mono_basis((nu, 0)).monomials
    for i, f in enumerate(U.f):
        for m, (es, et, _, _) in enumerate(shifts):
            colidx = i * 2 * a + m
            for (fes, fet, feu, fev), c in f.terms.items():
                key = (es + fes, et + fet, feu, fev)
                mat[index[key]][colidx] += c
    null = nullspace(mat)
    if len(null) != ncols:
        raise DegeneracyError(
            "d1",
            f"degree-({nu},0) syzygy space has dimension {len(null)}, "
            f"expected {ncols}",
        )
    coeff = {name: [[0] * ncols for _ in range(2 * a)] for name in SURF_NAMES}
    labels = []
    for col, vec in enumerate(null):
        ivec = primitive_int_vector(vec)
        for v, name in enumerate(SURF_NAMES):
            for n in range(2 * a):
                coeff[name][n][col] = ivec[v * 2 * a + n]
        labels.append(("direct", col))
    cn = ComplexNu(a, r, (nu, 0), labels, coeff, mu=None, U=U)
    _check_no_constant_kernel(cn)
    return cn


def _check_no_constant_kernel(cn):
    """No nonzero constant vector may lie in ker d1: the four coefficient
    matrices stacked vertically must have full column rank."""
    stacked = []
    for name in SURF_NAMES:
        stacked.extend(cn.coeff[name])
    arr = np.array(
        [[x % (2**31 - 1) for x in row] for row in stacked], dtype=np.int64
    )
    if rank_mod(arr, 2**31 - 1) == cn.cols:
        return
    if rank([[Fraction(x) for x in row] for row in stacked]) != cn.cols:
        raise DegeneracyError("d1", "a constant vector lies in the kernel of d1")


def compute_d2(cn):
    """Solve d1 . v = 0 for columns v of linear forms.

    Unknowns are the 4 * (2a+r) linear coefficients; equating the
    coefficient of each quadratic monomial to zero per row gives the
    linear system.  The constant-part subsystem is exactly the
    no-constant-kernel invariant already enforced at build time.
    """
    ncols = cn.cols
    if cn.r == 0:
        cn.d2_coeff = {name: [[] for _ in range(ncols)] for name in SURF_NAMES}
        return cn
    A = [cn.coeff[name] for name in SURF_NAMES]
    eqs = []
    for n in range(cn.rows):
        for va in range(4):
            for vb in range(va, 4):
                row = [Fraction(0)] * (4 * ncols)
                for j in range(ncols):
                    if va == vb:
                        row[4 * j + va] += A[va][n][j]
                    else:
                        row[4 * j + vb] += A[va][n][j]
                        row[4 * j + va] += A[vb][n][j]
                eqs.append(row)
    null = nullspace(eqs)
    if len(null) != cn.r:
        raise DegeneracyError(
            "d2",
            f"kernel of d1 in linear forms has dimension {len(null)}, "
            f"expected {cn.r}",
        )
    d2 = {name: [[0] * cn.r for _ in range(ncols)] for name in SURF_NAMES}
    for c, vec in enumerate(null):
        ivec = primitive_int_vector(vec)
        for j in range(ncols):
            for v, name in enumerate(SURF_NAMES):
                d2[name][j][c] = ivec[4 * j + v]
    cn.d2_coeff = d2
    _check_composition_zero(cn)
    return cn


def _check_composition_zero(cn):
    """d1 . d2 = 0 identically: verified coefficientwise on each of the
    ten quadratic monomials of the target space."""
    A = {name: cn.coeff[name] for name in SURF_NAMES}
    B = {name: cn.d2_coeff[name] for name in SURF_NAMES}

    def prod(Pname, Qname):
        P, Q = A[Pname], B[Qname]
        out = [[0] * cn.r for _ in range(cn.rows)]
        for n in range(cn.rows):
            Pn = P[n]
            for j in range(cn.cols):
                p = Pn[j]
                if p:
                    Qj = Q[j]
                    row = out[n]
                    for c in range(cn.r):
                        row[c] += p * Qj[c]
        return out

    for ia, na in enumerate(SURF_NAMES):
        for ib in range(ia, 4):
            nb = SURF_NAMES[ib]
            M = prod(na, nb)
            if na != nb:
                N = prod(nb, na)
                M = [
                    [M[n][c] + N[n][c] for c in range(cn.r)]
                    for n in range(cn.rows)
                ]
            if any(any(row) for row in M):
                raise DegeneracyError("d2", "d1 . d2 is not identically zero")


def _pivot_columns(mat):
    """First lexicographic maximal independent column set of an integer
    matrix (fraction-free elimination); None if rank < row count."""
    rows = [row[:] for row in mat]
    nr, nc = len(rows), len(rows[0])
    piv = []
    rr = 0
    for c in range(nc):
        if rr == nr:
            break
        sel = next((i for i in range(rr, nr) if rows[i][c]), None)
        if sel is None:
            continue
        rows[rr], rows[sel] = rows[sel], rows[rr]
        pv = rows[rr][c]
        for i in range(rr + 1, nr):
            if rows[i][c]:
                f = rows[i][c]
                rows[i] = [
                    rows[i][k] * pv - rows[rr][k] * f for k in range(nc)
                ]
        piv.append(c)
        rr += 1
    return piv if rr == nr else None


def _d1_at_int(cn, q, columns=None):
    cols = range(cn.cols) if columns is None else columns
    A = [cn.coeff[name] for name in SURF_NAMES]
    return [
        [
            sum(A[v][n][j] * q[v] for v in range(4))
            for j in cols
        ]
        for n in range(cn.rows)
    ]


def _d2_rows_at(cn, q, rows):
    B = [cn.d2_coeff[name] for name in SURF_NAMES]
    return [
        [
            sum(Fraction(B[v][j][c]) * q[v] for v in range(4))
            for c in range(cn.r)
        ]
        for j in rows
    ]


def choose_minor_columns(cn, seed=0, attempts=200):
    """Pick a column subset J with det d1[:, J] != 0 and complementary
    det d2[J^c, :] != 0, certified by nonvanishing at sample points."""
    if cn.r == 0:
        return tuple(range(cn.cols))
    rng = random.Random(0x5EED ^ (seed * 2654435761 % 2**32))
    for _ in range(attempts):
        q = [rng.randint(-99, 99) for _ in range(4)]
        if not any(q):
            continue
        J = _pivot_columns(_d1_at_int(cn, q))
        if J is None:
            continue
        comp = [j for j in range(cn.cols) if j not in set(J)]
        for _ in range(60):
            w = [rng.randint(-99, 99) for _ in range(4)]
            if det_frac(_d2_rows_at(cn, w, comp)) != 0:
                return tuple(J)
    raise DegeneracyError(
        "determinant", "no admissible column subset found after bounded search"
    )


def _det_values_exact(cn, J, deg, nodes, pts, threads=1):
    """det of d1[:, J] evaluated at every grid node (exact integers)."""
    AX = [cn.coeff["X"][n] for n in range(cn.rows)]
    AY = [cn.coeff["Y"][n] for n in range(cn.rows)]
    AZ = [cn.coeff["Z"][n] for n in range(cn.rows)]
    AW = [cn.coeff["W"][n] for n in range(cn.rows)]
    args = (AX, AY, AZ, AW, list(J), nodes)
    if threads > 1:
        chunks = [pts[i::threads] for i in range(threads)]
        try:
            from concurrent.futures import ProcessPoolExecutor

            with ProcessPoolExecutor(max_workers=threads) as pool:
                parts = list(
                    pool.map(_det_chunk, [(args, ch) for ch in chunks])
                )
            vals = {}
            for ch, part in zip(chunks, parts):
                vals.update(zip(ch, part))
            return vals
        except (OSError, PermissionError, ImportError):
            pass
    return dict(zip(pts, _det_chunk((args, pts))))


def _det_chunk(packed):
    (AX, AY, AZ, AW, J, nodes), pts = packed
    out = []
    for (p, q, s) in pts:
        x, y, z = nodes[p], nodes[q], nodes[s]
        M = [
            [
                AX[n][j] * x + AY[n][j] * y + AZ[n][j] * z + AW[n][j]
                for j in J
            ]
            for n in range(len(AX))
        ]
        out.append(det_int(M))
    return out


def _interp_homog(values, deg, nodes):
    """Interpolate grid values of a degree-deg homogeneous form at W=1
    and rehomogenize; coefficients must come out integral."""
    coeffs = interp_simplex_exact(values, deg, nodes=nodes)
    terms = {}
    for (i, j, k), c in coeffs.items():
        if c.denominator != 1:
            raise DegeneracyError(
                "determinant", "non-integral interpolated coefficient"
            )
        terms[(i, j, k, deg - i - j - k)] = c
    return SurfForm(deg, terms)


def surf_divide(P, Q):
    """Exact division of homogeneous forms; raises on a remainder."""
    if Q.is_zero():
        raise ZeroDivisionError("division by the zero form")
    if P.is_zero():
        return SurfForm.zero(max(P.degree - Q.degree, 0))
    qlead = min(Q.terms, key=_key_surf)
    qc = Q.terms[qlead]
    rem = dict(P.terms)
    out = {}
    while rem:
        lead = min(rem, key=_key_surf)
        expo = tuple(x - y for x, y in zip(lead, qlead))
        if min(expo) < 0:
            raise DegeneracyError(
                "determinant", "minor division left a remainder"
            )
        c = rem[lead] / qc
        out[expo] = c
        for qe, qv in Q.terms.items():
            key = tuple(x + y for x, y in zip(expo, qe))
            nv = rem.get(key, Fraction(0)) - c * qv
            if nv:
                rem[key] = nv
            else:
                rem.pop(key, None)
    return SurfForm(P.degree - Q.degree, out)


def det_poly_bareiss(mat):
    """Fraction-free symbolic determinant of a matrix of homogeneous
    forms of equal degree (division-exact Bareiss sweep)."""
    n = len(mat)
    d = mat[0][0].degree
    if n == 1:
        return mat[0][0]
    M = [row[:] for row in mat]
    sign = 1
    prev = None
    for k in range(n - 1):
        sel = next((i for i in range(k, n) if not M[i][k].is_zero()), None)
        if sel is None:
            return SurfForm.zero(n * d)
        if sel != k:
            M[k], M[sel] = M[sel], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[i][j] * M[k][k] - M[i][k] * M[k][j]
                M[i][j] = num if prev is None else surf_divide(num, prev)
        prev = M[k][k]
    det = M[n - 1][n - 1]
    return -det if sign < 0 else det


def det_complex(cn, seed=0, threads=1, cross_check="auto", mode="auto"):
    """det of the complex: det d1[:, J] / det d2[J^c, :] as an exact
    polynomial identity, computed by evaluation and interpolation."""
    n = cn.rows
    if cn.r > 0 and cn.d2_coeff is None:
        raise PipelineError("determinant", "d2 must be computed first")
    J = choose_minor_columns(cn, seed=seed)
    comp = [j for j in range(cn.cols) if j not in set(J)]
    use_modular = mode == "modular" or (
        mode == "auto" and cn.r == 0 and n >= MODULAR_DET_MIN
    )
    if use_modular and cn.r != 0:
        raise PipelineError(
            "determinant", "modular determinant path requires r = 0"
        )
    if use_modular:
        det_poly = _det_modular_square(cn, seed=seed)
    else:
        nodes = newton_nodes(n + 1)
        pts = simplex_points(n)
        vals = _det_values_exact(cn, J, n, nodes, pts, threads=threads)
        P1 = _interp_homog(vals, n, nodes)
        if P1.is_zero():
            raise DegeneracyError("determinant", "chosen maximal minor is zero")
        if cn.r:
            nodes2 = newton_nodes(cn.r + 1)
            pts2 = simplex_points(cn.r)
            vals2 = {}
            for (p, q, s) in pts2:
                w = (nodes2[p], nodes2[q], nodes2[s], 1)
                vals2[(p, q, s)] = det_frac(_d2_rows_at(cn, w, comp))
            P2 = _interp_homog(vals2, cn.r, nodes2)
            if P2.is_zero():
                raise DegeneracyError(
                    "determinant", "complementary minor of d2 is zero"
                )
            det_poly = surf_divide(P1, P2)
        else:
            det_poly = P1
        do_check = cross_check is True or (
            cross_check == "auto" and n <= BAREISS_CHECK_MAX
        )
        if do_check:
            M1 = [[cn.d1_entry(i, j) for j in J] for i in range(n)]
            S1 = det_poly_bareiss(M1)
            if cn.r:
                M2 = [
                    [cn.d2_entry(j, c) for c in range(cn.r)] for j in comp
                ]
                S2 = det_poly_bareiss(M2)
                sym = surf_divide(S1, S2)
            else:
                sym = S1
            if sym != det_poly:
                raise PipelineError(
                    "determinant",
                    "interpolated determinant disagrees with the symbolic pass",
                )
    if det_poly.degree != 2 * cn.a - cn.r:
        raise DegeneracyError(
            "determinant",
            f"determinant degree {det_poly.degree}, expected {2*cn.a - cn.r}",
        )
    H = det_poly.normalized()
    screen = perfect_power_screen(H, seed=seed)
    return ImplicitResult(
        det_poly=det_poly,
        H=H,
        deg_lambda_assumed=1,
        chosen_minor_columns=tuple(J),
        power_screen=screen,
    )


def _det_modular_square(cn, seed=0, batch_primes=16, max_primes=4000):
    """Large square case (r = 0): the integer coefficients of det d1 are
    assembled by Chinese remaindering over 31-bit primes.

    Two tricks keep this fast enough for 40 x 40 inputs whose
    determinant has thousands of digits per coefficient:

    * the number of primes needed is fixed in advance from exact
      determinant values at a few +-1 points (an upper estimate of the
      largest coefficient), instead of repeatedly attempting rational
      reconstruction;
    * per prime, the node simplex is swept line by line along one
      coordinate axis: on a line only the fiber variable z varies, and
      det(B + z*C) = det(C) * det(zI - (-C^{-1}B)), so one batched
      Hessenberg characteristic polynomial replaces a determinant per
      node.

    The lifted result is verified against one fresh prime and one exact
    big-integer evaluation of det d1.
    """
    n = cn.rows
    trace = _trace if os.environ.get("TENSURF_TRACE") else None
    axis, unit, free = _fiber_axes(cn)
    if axis is None:
        raise DegeneracyError("determinant", "chosen maximal minor is zero")
    A_int = [cn.coeff[name] for name in SURF_NAMES]

    # upper estimate of the coefficient magnitude: |det| at +-1 points
    # bounds the coefficient sum when no cancellation occurs, so pad it
    rng = random.Random(seed + 91)
    digits = 0
    for _ in range(3):
        w = [rng.choice((-1, 1)) for _ in range(4)]
        d = det_int(_d1_at_int_w(cn, w))
        if d:
            digits = max(digits, int(d.bit_length() * 0.30103) + 1)
    if digits == 0:
        digits = _hadamard_digits(A_int, n)
    target = 10 ** (digits + 12)
    if trace:
        trace(f"det estimate {digits} digits")

    interp = SimplexInterpolatorMod(n)
    nodes = interp.nodes
    pts = interp.points
    # lines (i, j) of the simplex, and where each (i, j, k) node lands
    lines = sorted({(i, j) for (i, j, _) in pts})
    line_no = {ij: l for l, ij in enumerate(lines)}
    scatter = np.full((len(lines), n + 1), -1, dtype=np.int64)
    for flat, (i, j, k) in enumerate(pts):
        scatter[line_no[(i, j)], k] = flat
    smask = scatter >= 0
    sidx = scatter[smask]
    xs = np.array([nodes[i] for (i, _) in lines], dtype=np.int64)
    ys = np.array([nodes[j] for (_, j) in lines], dtype=np.int64)

    def residues_for(p):
        Ap = [
            np.array([[x % p for x in row] for row in A_int[v]],
                     dtype=np.int64)
            for v in range(4)
        ]
        dC = det_mod(Ap[axis], p)
        if dC == 0:
            return None
        Cinv = matinv_mod(Ap[axis], p)
        coef = []
        for v in (free[0], free[1], unit):
            R = np.zeros((n, n), dtype=np.int64)
            for k in range(n):
                R = (R + Cinv[:, k : k + 1] * Ap[v][k : k + 1, :]) % p
            coef.append((-R) % p)
        Mx, My, M0 = coef
        mats = (
            (Mx[None, :, :] * (xs[:, None, None] % p)) % p
            + (My[None, :, :] * (ys[:, None, None] % p)) % p
            + M0[None, :, :]
        ) % p
        cp = charpolys_mod_batch(mats, p)
        zv = np.array([nd % p for nd in nodes], dtype=np.int64)
        zpow = np.empty((n + 1, n + 1), dtype=np.int64)
        zpow[:, 0] = 1
        for e in range(1, n + 1):
            zpow[:, e] = zpow[:, e - 1] * zv % p
        V = (cp[:, None, :] * zpow[None, :, :] % p).sum(axis=2) % p
        V = V * dC % p
        vals = np.empty(len(pts), dtype=np.int64)
        vals[sidx] = V[smask]
        return interp.run(vals, p)

    pstream = prime_stream()
    combined = {}
    modulus = 1
    batch = []

    def fold_batch():
        nonlocal combined, modulus
        bC = {}
        bM = 1
        for p, res in batch:
            if bM == 1:
                bC = dict(res)
                bM = p
                continue
            inv = pow(bM % p, p - 2, p)
            for key in bC.keys() | res.keys():
                a = bC.get(key, 0)
                bC[key] = a + bM * ((res.get(key, 0) - a) * inv % p)
            bM *= p
        batch.clear()
        if modulus == 1:
            combined, modulus = bC, bM
            return
        inv = pow(modulus % bM, -1, bM)
        for key in combined.keys() | bC.keys():
            a = combined.get(key, 0)
            combined[key] = a + modulus * ((bC.get(key, 0) - a) * inv % bM)
        modulus *= bM

    used = 0
    while True:
        while modulus * math.prod(p for p, _ in batch) <= 2 * target:
            if used >= max_primes:
                raise PipelineError(
                    "determinant",
                    "modular reconstruction did not converge",
                )
            p = next(pstream)
            res = residues_for(p)
            if res is None:
                continue
            batch.append((p, res))
            used += 1
            if len(batch) >= batch_primes:
                fold_batch()
                if trace:
                    trace(f"{used} primes folded")
        if batch:
            fold_batch()
        half = modulus // 2
        terms = {}
        for key, c in combined.items():
            if c > half:
                c -= modulus
            if c:
                terms[key] = c
        v1 = _verify_lift(terms, residues_for, pstream)
        v2 = v1 and _verify_eval(cn, terms, axis, unit, free, n, rng)
        if trace:
            trace(f"verify: fresh-prime {v1} exact-eval {v2}")
        if v1 and v2:
            break
        target *= 10 ** max(32, digits // 8)
    expo = _expo_map(axis, unit, free, n)
    det_poly = SurfForm(
        n, {expo(i, j, k): Fraction(c) for (i, j, k), c in terms.items()}
    )
    return det_poly


def _trace(msg):
    print(f"[det] {msg}", file=sys.stderr, flush=True)


def _fiber_axes(cn):
    """Pick the coordinate whose coefficient matrix is invertible as the
    sweep axis; returns (axis, unit, (free1, free2)) as variable slots."""
    p = 2**31 - 1
    for axis in (2, 3, 0, 1):
        mat = cn.coeff[SURF_NAMES[axis]]
        red = np.array(
            [[x % p for x in row] for row in mat], dtype=np.int64
        )
        if rank_mod(red, p) == cn.rows or rank(mat) == cn.rows:
            rest = [v for v in range(4) if v != axis]
            return axis, rest[-1], (rest[0], rest[1])
    return None, None, None


def _expo_map(axis, unit, free, n):
    def expo(i, j, k):
        e = [0, 0, 0, 0]
        e[free[0]] = i
        e[free[1]] = j
        e[axis] = k
        e[unit] = n - i - j - k
        return tuple(e)

    return expo


def _hadamard_digits(A_int, n):
    total = 0.0
    for row in range(n):
        norm = sum(
            (sum(abs(A_int[v][row][j]) for v in range(4))) ** 2
            for j in range(n)
        )
        total += 0.5 * math.log10(norm) if norm else 0.0
    return int(total) + 1


def _verify_lift(terms, residues_for, pstream):
    for _ in range(8):
        p = next(pstream)
        res = residues_for(p)
        if res is None:
            continue
        for key in terms.keys() | res.keys():
            if terms.get(key, 0) % p != res.get(key, 0):
                return False
        return True
    raise PipelineError(
        "determinant", "could not find a usable verification prime"
    )


def _verify_eval(cn, terms, axis, unit, free, n, rng):
    expo = _expo_map(axis, unit, free, n)
    for _ in range(20):
        w = [rng.randint(-9, 9) for _ in range(4)]
        if all(x == 0 for x in w):
            continue
        dval = det_int(_d1_at_int_w(cn, w))
        total = 0
        for (i, j, k), c in terms.items():
            e = expo(i, j, k)
            m = c
            for v in range(4):
                if e[v]:
                    m *= w[v] ** e[v]
            total += m
        return total == dval
    return False


def _d1_at_int_w(cn, w):
    A = [cn.coeff[name] for name in SURF_NAMES]
    return [
        [
            sum(A[v][n][j] * w[v] for v in range(4))
            for j in range(cn.cols)
        ]
        for n in range(cn.rows)
    ]


# ----------------------------------------------------------------------
# univariate helpers for the perfect-power screen


def _up_trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _up_mul(f, g):
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    out[i + j] += a * b
    return _up_trim(out)


def _up_deriv(f):
    return _up_trim([i * c for i, c in enumerate(f)][1:])


def _up_divmod(f, g):
    f = f[:]
    q = [Fraction(0)] * max(len(f) - len(g) + 1, 0)
    while len(f) >= len(g) and _up_trim(f):
        k = len(f) - len(g)
        c = f[-1] / g[-1]
        q[k] = c
        for i, b in enumerate(g):
            f[k + i] -= c * b
        _up_trim(f)
    return _up_trim(q), f


def _up_gcd(f, g):
    f, g = _up_trim(f[:]), _up_trim(g[:])
    while g:
        _, rem = _up_divmod(f, g)
        f, g = g, rem
    if f:
        lead = f[-1]
        f = [c / lead for c in f]
    return f


def _up_multiplicities(f):
    """Multiplicities of the nonconstant factors (Yun's algorithm)."""
    f = _up_trim([Fraction(c) for c in f])
    if len(f) <= 1:
        return []
    g = _up_gcd(f, _up_deriv(f))
    w, _ = _up_divmod(f, g)
    mults = []
    i = 1
    while len(w) > 1:
        y = _up_gcd(w, g)
        factor, _ = _up_divmod(w, y)
        if len(factor) > 1:
            mults.append(i)
        g, _ = _up_divmod(g, y)
        w = y
        i += 1
    return mults


def perfect_power_screen(H, seed=0, lines=2):
    """Restrict H to random lines and square-free-decompose the
    univariate restrictions.  A common multiplicity gcd > 1 dividing
    deg H flags the result as a possible proper power; a flag only,
    since the multiplicity of the surface map is assumed 1."""
    rng = random.Random(seed + 17)
    deg = H.degree
    exps = []
    got = 0
    for _ in range(8 * lines):
        if got == lines:
            break
        Av = [rng.randint(-9, 9) for _ in range(4)]
        Bv = [rng.randint(-9, 9) for _ in range(4)]
        coeffs = _restrict_to_line(H, Av, Bv)
        if len(coeffs) - 1 != deg:
            continue
        mults = _up_multiplicities(coeffs)
        g = 0
        for m in mults:
            g = math.gcd(g, m)
        exps.append(g if g else 1)
        got += 1
    if got < lines:
        return {"suspect": False, "exponent": 1, "lines": got}
    e = exps[0]
    for x in exps[1:]:
        e = math.gcd(e, x)
    suspect = e > 1 and deg % e == 0
    return {"suspect": suspect, "exponent": e if suspect else 1, "lines": got}


def _restrict_to_line(H, Av, Bv):
    """Coefficients of t -> H(A + t B) as a univariate list."""
    cache = {}

    def pow_line(v, e):
        key = (v, e)
        if key not in cache:
            if e == 0:
                cache[key] = [Fraction(1)]
            else:
                base = [Fraction(Av[v]), Fraction(Bv[v])]
                cache[key] = _up_mul(pow_line(v, e - 1), base)
        return cache[key]

    out = [Fraction(0)] * (H.degree + 1)
    for expo, c in H.terms.items():
        term = [Fraction(c)]
        for v, e in enumerate(expo):
            if e:
                term = _up_mul(term, pow_line(v, e))
        for i, val in enumerate(term):
            out[i] += val
    return out


def composition_vanishes(H, forms):
    """Exact proof that H(f0, ..., f3) is identically zero.

    The composition is bihomogeneous of bidegree (M, N) with M = a * deg H
    and N = deg H, so its dehomogenization in the chart s = u = 1 is a
    polynomial of degree at most M in one variable and N in the other.
    Vanishing on a full (M+1) x (N+1) integer grid therefore forces every
    coefficient to zero; no expansion of the composition is needed.
    """
    a = max(es + et for (es, et, eu, ev) in forms[0].terms)
    M = a * H.degree
    N = H.degree
    for x in range(M + 1):
        for y in range(N + 1):
            fv = [f.evaluate(((1, x), (1, y))) for f in forms]
            if H.evaluate(fv) != 0:
                return False
    return True


def verify_implicit(H, U, samples=25, seed=0, substitution="auto"):
    """Oracle checks for a computed implicit equation."""
    report = {}
    a, r = U.a, U.r
    report["degree"] = H.degree * 1 == 2 * a - r
    rng = random.Random(seed + 5)
    ok_samples = 0
    tried = 0
    while ok_samples < samples and tried < 40 * samples:
        tried += 1
        pt = ((1, rng.randint(-40, 40)), (1, rng.randint(-40, 40)))
        fv = [f.evaluate(pt) for f in U.f]
        if not any(fv):
            continue
        if H.evaluate(fv) != 0:
            report["sampled_points"] = False
            break
        ok_samples += 1
    else:
        report["sampled_points"] = ok_samples == samples
    grid = (a * H.degree + 1) * (H.degree + 1)
    do_full = substitution in (True, "full") or (
        substitution == "auto" and grid <= 4000
    )
    if do_full:
        report["substitution"] = composition_vanishes(H, U.f)
    else:
        report["substitution"] = "skipped"
    report["ok"] = all(v is True or v == "skipped" for v in report.values())
    return report


def membership_rank_test(cn, q):
    """Rank of d1 at a point of the target space: a drop below 2a means
    the point lies on the surface."""
    qs = [Fraction(x) for x in q]
    if not any(qs):
        raise ValueError("the zero point is not a point of the target space")
    M = cn.d1_at(qs)
    return "on_surface" if rank(M) < cn.rows else "off_surface"


_STAGES = (
    "subspace",
    "qp",
    "mu_basis",
    "d1",
    "d2",
    "determinant",
    "verification",
)


def implicitize(
    X,
    a,
    forms=None,
    seed=None,
    method="bump",
    samples=25,
    threads=1,
    substitution="auto",
    verify=True,
    det_seed=0,
    cert_mode="spot",
):
    """Full pipeline: point set and degree to implicit equation.

    Exactly one of ``forms`` (four explicit bidegree-(a,1) forms) or
    ``seed`` (a generic random subspace) selects U.
    """
    if (forms is None) == (seed is None):
        raise ValueError("provide exactly one of forms or seed")
    if X is None:
        X = PointSet(())
    timings = {}

    def run(stage, fn):
        t0 = time.perf_counter()
        try:
            out = fn()
        except PipelineError:
            raise
        except GenericityError as e:
            raise PipelineError(stage, str(e)) from e
        timings[stage] = (time.perf_counter() - t0) * 1000.0
        return out

    if forms is not None:
        U = run("subspace", lambda: subspace_from_forms(X, a, forms, mode=cert_mode))
    else:
        U = run("subspace", lambda: choose_generic_U(X, a, seed, mode=cert_mode))
    qp = run("qp", lambda: qp_decompose(U))
    mb = run(
        "mu_basis", lambda: mu_basis(qp, expect=(a, U.r, U.certified))
    )
    if method == "bump":
        cn = run("d1", lambda: build_d1(U, mb))
    elif method == "direct":
        cn = run("d1", lambda: build_d1_direct(U))
    else:
        raise ValueError(f"unknown method {method!r}")
    run("d2", lambda: compute_d2(cn))
    result = run(
        "determinant",
        lambda: det_complex(cn, seed=det_seed, threads=threads),
    )
    if verify:
        result.verification = run(
            "verification",
            lambda: verify_implicit(
                result.H, U, samples=samples, seed=det_seed,
                substitution=substitution,
            ),
        )
    return PipelineOutput(
        U=U, qp=qp, mb=mb, cn=cn, result=result, timings_ms=timings
    )
