"""Exact linear algebra over the rationals, with modular fast paths.

The exact core is fraction-free (Bareiss) elimination on integer
matrices for ranks and determinants, plus rational reduced row echelon
for canonical subspace bases.  "Canonical" always means: the unique
reduced row echelon basis of the subspace, so any two computations of
the same subspace agree exactly.

The modular kit (31-bit primes, Chinese remaindering, rational
reconstruction, mod-p elimination on numpy arrays) is an internal
accelerator only; every consumer either certifies its answer exactly or
falls back to the exact routines.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

import numpy as np


# ----------------------------------------------------------------------
# exact routines
# ----------------------------------------------------------------------


def frac_rows(mat):
    return [[Fraction(x) for x in row] for row in mat]


def int_rows(mat):
    """Clear denominators row by row (row scaling preserves rank, row
    space and null space)."""
    out = []
    for row in mat:
        den = 1
        for x in row:
            f = Fraction(x)
            den = den * f.denominator // gcd(den, f.denominator)
        out.append([int(Fraction(x) * den) for x in row])
    return out


def rref(mat):
    """Reduced row echelon form over Q.  Returns (rows, pivot_cols)."""
    m = frac_rows(mat)
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def row_echelon_int(mat):
    """Fraction-free row echelon form of an integer matrix.

    Returns (rows, pivot_cols); the rows are integer multiples of the
    reduced ones, which is all rank/null space work needs.
    """
    m = [list(map(int, row)) for row in mat]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    prev = 1
    for c in range(ncols):
        pivot = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        pv = m[r][c]
        for i in range(r + 1, len(m)):
            if m[i][c] != 0 or True:
                # Bareiss update keeps entries equal to minors of the input
                row = m[i]
                lead = row[c]
                for k in range(c, ncols):
                    row[k] = (pv * row[k] - lead * m[r][k]) // prev
        prev = pv
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(mat):
    mat = int_rows(mat)
    _, pivots = row_echelon_int(mat)
    return len(pivots)


def nullspace(mat):
    """Canonical basis of the right null space.

    The returned vectors are the reduced row echelon basis of the null
    space (stacked as rows they are in RREF), so the output depends only
    on the subspace, not on elimination details.
    """
    mat = int_rows(mat)
    if not mat:
        return []
    ncols = len(mat[0])
    ech, pivots = row_echelon_int(mat)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fcol in free:
        vec = [Fraction(0)] * ncols
        vec[fcol] = Fraction(1)
        # back substitution through the echelon rows, bottom-up
        for i in range(len(ech) - 1, -1, -1):
            c = pivots[i]
            s = sum((ech[i][k] * vec[k] for k in range(c + 1, ncols)),
                    start=Fraction(0))
            vec[c] = -s / Fraction(ech[i][c])
        basis.append(vec)
    return subspace_basis(basis)


def subspace_basis(vectors):
    """Canonical (RREF) basis of the span of the given vectors."""
    rows = [v for v in vectors if any(x != 0 for x in v)]
    if not rows:
        return []
    red, _ = rref(rows)
    return red


def in_span(vectors, target):
    """Exact membership of target in span(vectors)."""
    if all(x == 0 for x in target):
        return True
    if not vectors:
        return False
    stacked = subspace_basis(list(vectors) + [list(target)])
    return len(stacked) == len(subspace_basis(vectors))


def det_int(mat):
    """Determinant of a square integer matrix by Bareiss elimination."""
    m = [list(map(int, row)) for row in mat]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for c in range(n):
        pivot = None
        for i in range(c, n):
            if m[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            return 0
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            sign = -sign
        pv = m[c][c]
        for i in range(c + 1, n):
            row = m[i]
            lead = row[c]
            for k in range(c, n):
                row[k] = (pv * row[k] - lead * m[c][k]) // prev
        prev = pv
    return sign * m[n - 1][n - 1]


def det_frac(mat):
    n = len(mat)
    if n == 0:
        return Fraction(1)
    scaled = []
    denprod = 1
    for row in mat:
        den = 1
        for x in row:
            f = Fraction(x)
            den = den * f.denominator // gcd(den, f.denominator)
        scaled.append([int(Fraction(x) * den) for x in row])
        denprod *= den
    return Fraction(det_int(scaled), denprod)


def solve(mat, rhs):
    """One exact solution of mat @ x = rhs, or None if inconsistent."""
    if not mat:
        return None if any(Fraction(b) != 0 for b in rhs) else []
    ncols = len(mat[0])
    aug = [list(row) + [b] for row, b in zip(mat, rhs)]
    red, pivots = rref(aug)
    for row in red:
        if all(x == 0 for x in row[:-1]) and row[-1] != 0:
            return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        if c == ncols:
            return None
        x[c] = red[i][-1]
    return x


def primitive_int_vector(vec):
    """Scale a rational vector to coprime integers with positive first
    nonzero entry.  Zero vectors pass through unchanged."""
    fr = [Fraction(x) for x in vec]
    den = 1
    for f in fr:
        den = den * f.denominator // gcd(den, f.denominator)
    ints = [int(f * den) for f in fr]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g == 0:
        return ints
    lead = next(v for v in ints if v != 0)
    if lead < 0:
        g = -g
    return [v // g for v in ints]


def mat_vec(mat, vec):
    return [sum(a * b for a, b in zip(row, vec)) for row in mat]


def mat_mul(A, B):
    if not A or not B:
        return []
    cols = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in A]


# ----------------------------------------------------------------------
# modular kit
# ----------------------------------------------------------------------

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n):
    """Deterministic Miller-Rabin for n < 3.3e24 with the fixed base set."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_stream(start=2**31 - 1):
    """Yield primes descending from start (31-bit by default, so that
    products of two residues stay inside int64)."""
    n = start
    while n > 2:
        if is_probable_prime(n):
            yield n
        n -= 1


def primes31(count):
    out = []
    for p in prime_stream():
        out.append(p)
        if len(out) == count:
            return out
    raise RuntimeError("prime supply exhausted")


def crt(residues, primes):
    """Chinese remainder lift to [0, prod primes)."""
    x = 0
    m = 1
    for r, p in zip(residues, primes):
        # solve x' = x (mod m), x' = r (mod p)
        t = ((r - x) * pow(m % p, p - 2, p)) % p
        x = x + m * t
        m *= p
    return x % m


def rational_reconstruct(c, m):
    """Recover p/q from c mod m with |p|, q <= sqrt(m/2), or None.

    Standard half-extended Euclid; the returned fraction f satisfies
    f = c (mod m) whenever it exists within the bound.
    """
    c %= m
    bound = isqrt(m // 2)
    r0, r1 = m, c
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound:
        return None
    if gcd(r1, abs(t1)) != 1:
        return None
    num, den = (r1, t1) if t1 > 0 else (-r1, -t1)
    return Fraction(num, den)


def mat_mod(mat, p):
    """Reduce an exact matrix mod p into an int64 numpy array.  Rational
    entries use modular inverses of their denominators (caller must keep
    denominators coprime to p)."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    out = np.zeros((rows, cols), dtype=np.int64)
    for i, row in enumerate(mat):
        for j, x in enumerate(row):
            if isinstance(x, int):
                out[i, j] = x % p
            else:
                f = Fraction(x)
                d = f.denominator % p
                if d == 0:
                    raise ZeroDivisionError("denominator divisible by p")
                out[i, j] = (f.numerator % p) * pow(d, p - 2, p) % p
    return out


def rank_mod(arr, p):
    """Rank of an int64 numpy matrix mod p.  A modular rank is always a
    lower bound for the exact rank."""
    m = arr % p
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        m[r, c:] = m[r, c:] * inv % p
        below = m[r + 1 :, c]
        nzr = np.nonzero(below)[0]
        if nzr.size:
            idx = r + 1 + nzr
            m[idx, c:] = (m[idx, c:] - np.outer(m[idx, c], m[r, c:])) % p
        r += 1
    return r


def det_mod(arr, p):
    """Determinant of a square int64 numpy matrix mod p."""
    m = arr % p
    n = m.shape[0]
    det = 1
    for c in range(n):
        nz = np.nonzero(m[c:, c])[0]
        if nz.size == 0:
            return 0
        i = c + int(nz[0])
        if i != c:
            m[[c, i]] = m[[i, c]]
            det = (-det) % p
        pv = int(m[c, c])
        det = det * pv % p
        inv = pow(pv, p - 2, p)
        below = m[c + 1 :, c]
        nzr = np.nonzero(below)[0]
        if nzr.size:
            idx = c + 1 + nzr
            factor = m[idx, c] * inv % p
            m[idx, c:] = (m[idx, c:] - factor[:, None] * m[c, c:]) % p
    return det


def pow_mod_batch(base, e, p):
    """Elementwise base**e mod p on an int64 array, by binary powering.

    Intermediate products stay below 2**62 for p < 2**31, so plain int64
    arithmetic is safe.  Zero entries map to zero.
    """
    b = np.asarray(base, dtype=np.int64) % p
    out = np.ones_like(b)
    while e:
        if e & 1:
            out = out * b % p
        b = b * b % p
        e >>= 1
    return out


def dets_mod_batch(mats, p):
    """Determinants mod p of a whole batch of square int64 matrices.

    ``mats`` has shape (N, n, n).  Elimination runs vectorized across the
    batch without row swaps; the rare lanes that hit a zero pivot are
    redone one at a time with proper pivoting.
    """
    T = mats % p
    N, n, _ = T.shape
    det = np.ones(N, dtype=np.int64)
    bad = np.zeros(N, dtype=bool)
    for c in range(n - 1):
        piv = T[:, c, c]
        bad |= piv == 0
        det = det * piv % p
        inv = pow_mod_batch(piv, p - 2, p)
        factor = T[:, c + 1 :, c] * inv[:, None] % p
        T[:, c + 1 :, c + 1 :] = (
            T[:, c + 1 :, c + 1 :]
            - factor[:, :, None] * T[:, c : c + 1, c + 1 :]
        ) % p
    det = det * T[:, n - 1, n - 1] % p
    if bad.any():
        for i in np.nonzero(bad)[0]:
            det[i] = det_mod(mats[i], p)
    return det


def matinv_mod(mat, p):
    """Inverse of an integer matrix mod p, or None if singular mod p."""
    A = np.asarray(mat, dtype=np.int64) % p
    n = A.shape[0]
    E = np.eye(n, dtype=np.int64)
    for c in range(n):
        nz = np.nonzero(A[c:, c])[0]
        if nz.size == 0:
            return None
        r = c + int(nz[0])
        if r != c:
            A[[c, r]] = A[[r, c]]
            E[[c, r]] = E[[r, c]]
        inv = pow(int(A[c, c]), p - 2, p)
        A[c] = A[c] * inv % p
        E[c] = E[c] * inv % p
        rows = np.nonzero(A[:, c])[0]
        rows = rows[rows != c]
        if rows.size:
            f = A[rows, c][:, None]
            A[rows] = (A[rows] - f * A[c]) % p
            E[rows] = (E[rows] - f * E[c]) % p
    return E


def charpolys_mod_batch(mats, p):
    """Characteristic polynomials mod p of a batch of int64 matrices.

    Returns an (N, n+1) array whose row l holds the coefficients of
    det(z*I - M_l), constant term first.  Each lane is reduced to upper
    Hessenberg form by similarity transforms (vectorized across the
    batch), then expanded by the usual Hessenberg recurrence.  Zero
    subdiagonal entries just split the matrix into blocks, so no lane
    ever needs a retry.
    """
    H = np.array(mats, dtype=np.int64) % p
    L, n, _ = H.shape
    for c in range(n - 2):
        sub = H[:, c + 1 :, c] != 0
        has = sub.any(axis=1)
        first = np.argmax(sub, axis=1)
        need = np.nonzero(has & (first > 0))[0]
        if need.size:
            rows = c + 1 + first[need]
            tmp = H[need, c + 1, :].copy()
            H[need, c + 1, :] = H[need, rows, :]
            H[need, rows, :] = tmp
            tmp = H[need, :, c + 1].copy()
            H[need, :, c + 1] = H[need, :, rows]
            H[need, :, rows] = tmp
        piv = H[:, c + 1, c]
        inv = pow_mod_batch(piv, p - 2, p)
        factor = H[:, c + 2 :, c] * inv[:, None] % p
        H[:, c + 2 :, :] = (
            H[:, c + 2 :, :] - factor[:, :, None] * H[:, c + 1 : c + 2, :]
        ) % p
        # similarity: the inverse row operation adds columns back
        t = H[:, :, c + 2 :] * factor[:, None, :] % p
        H[:, :, c + 1] = (H[:, :, c + 1] + t.sum(axis=2)) % p
    # det(z I - H_k) expanded along the last column, block-by-block
    P = np.zeros((L, n + 1, n + 1), dtype=np.int64)
    P[:, 0, 0] = 1
    for k in range(1, n + 1):
        tmp = np.zeros((L, k + 1), dtype=np.int64)
        tmp[:, 1 : k + 1] = P[:, k - 1, 0:k]
        tmp[:, 0:k] = (
            tmp[:, 0:k] - H[:, k - 1, k - 1][:, None] * P[:, k - 1, 0:k]
        ) % p
        prod = np.ones(L, dtype=np.int64)
        for m in range(2, k + 1):
            prod = prod * H[:, k - m + 1, k - m] % p
            if not prod.any():
                break
            coef = H[:, k - m, k - 1] * prod % p
            tmp[:, 0 : k - m + 1] = (
                tmp[:, 0 : k - m + 1]
                - coef[:, None] * P[:, k - m, 0 : k - m + 1]
            ) % p
        P[:, k, 0 : k + 1] = tmp
    return P[:, n, :]
