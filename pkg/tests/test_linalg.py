"""Exact and modular linear algebra kernels."""
from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest

from tensurf.linalg import (
    charpolys_mod_batch,
    crt,
    det_frac,
    det_int,
    det_mod,
    dets_mod_batch,
    in_span,
    is_probable_prime,
    mat_mod,
    matinv_mod,
    nullspace,
    pow_mod_batch,
    prime_stream,
    primitive_int_vector,
    rank,
    rank_mod,
    rational_reconstruct,
    rref,
    solve,
    subspace_basis,
)


def rand_mat(rng, n, m, lo=-9, hi=9):
    return [[Fraction(rng.randint(lo, hi)) for _ in range(m)] for _ in range(n)]


def test_rref_idempotent_and_rank():
    rng = random.Random(1)
    for _ in range(10):
        M = rand_mat(rng, 4, 6)
        R, pivots = rref(M)
        R2, pivots2 = rref(R)
        assert R == R2 and pivots == pivots2
        assert rank(M) == len(pivots)


def test_nullspace_annihilates():
    rng = random.Random(2)
    for _ in range(10):
        M = rand_mat(rng, 3, 6)
        for v in nullspace(M):
            for row in M:
                assert sum(a * b for a, b in zip(row, v)) == 0
        assert len(nullspace(M)) == 6 - rank(M)


def test_det_int_matches_det_frac_and_laplace():
    rng = random.Random(3)
    for n in (1, 2, 3, 4, 5):
        A = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        d = det_int(A)
        assert d == det_frac([[Fraction(x) for x in row] for row in A])
    # a singular matrix
    A = [[1, 2], [2, 4]]
    assert det_int(A) == 0


def test_det_multiplicative():
    rng = random.Random(4)
    for _ in range(5):
        A = [[rng.randint(-5, 5) for _ in range(4)] for _ in range(4)]
        B = [[rng.randint(-5, 5) for _ in range(4)] for _ in range(4)]
        C = [[sum(A[i][k] * B[k][j] for k in range(4)) for j in range(4)]
             for i in range(4)]
        assert det_int(C) == det_int(A) * det_int(B)


def test_solve_and_spans():
    rng = random.Random(5)
    A = rand_mat(rng, 3, 3)
    while rank(A) < 3:
        A = rand_mat(rng, 3, 3)
    x = [Fraction(1), Fraction(-2), Fraction(3)]
    b = [sum(A[i][j] * x[j] for j in range(3)) for i in range(3)]
    assert solve(A, b) == x
    vs = [[1, 0, 1], [0, 1, 1]]
    basis = subspace_basis([[Fraction(c) for c in v] for v in vs])
    assert len(basis) == 2
    assert in_span(basis, [Fraction(2), Fraction(3), Fraction(5)])
    assert not in_span(basis, [Fraction(0), Fraction(0), Fraction(1)])


def test_primitive_int_vector():
    v = [Fraction(2, 3), Fraction(-4, 9), Fraction(0)]
    w = primitive_int_vector(v)
    assert w == [3, -2, 0] or w == [-3, 2, 0]
    g = 0
    import math

    for x in w:
        g = math.gcd(g, abs(x))
    assert g == 1


def test_prime_stream_and_primality():
    ps = prime_stream()
    first = [next(ps) for _ in range(5)]
    assert all(is_probable_prime(p) for p in first)
    assert all(first[i] > first[i + 1] for i in range(4))
    assert first[0] == 2**31 - 1


def test_crt_round_trip():
    rng = random.Random(6)
    primes = [1000003, 1000033, 1000037]
    M = primes[0] * primes[1] * primes[2]
    for _ in range(10):
        x = rng.randrange(M)
        assert crt([x % p for p in primes], primes) == x


def test_rational_reconstruct():
    m = (2**31 - 1) * 2147483629  # product of two primes
    for num, den in ((3, 7), (-22, 5), (1, 1), (10**6, 997)):
        c = (num * pow(den, -1, m)) % m
        f = rational_reconstruct(c, m)
        assert f == Fraction(num, den)


def test_det_mod_and_rank_mod_agree_with_exact():
    rng = random.Random(7)
    p = 2**31 - 1
    for n in (2, 3, 5):
        A = [[rng.randint(-50, 50) for _ in range(n)] for _ in range(n)]
        arr = np.array(A, dtype=np.int64) % p
        assert det_mod(arr, p) == det_int(A) % p
        assert rank_mod(arr, p) == rank([[Fraction(x) for x in row] for row in A])


def test_mat_mod_handles_fractions():
    p = 101
    M = [[Fraction(1, 2), Fraction(-1, 3)], [Fraction(5), Fraction(0)]]
    arr = mat_mod(M, p)
    assert arr[0][0] == pow(2, -1, p)
    assert arr[0][1] == (-pow(3, -1, p)) % p
    assert arr[1][0] == 5 and arr[1][1] == 0


def test_pow_mod_batch():
    p = 10007
    base = np.array([0, 1, 2, 3, 9999], dtype=np.int64)
    out = pow_mod_batch(base, p - 2, p)
    for b, o in zip(base.tolist(), out.tolist()):
        assert o == pow(int(b), p - 2, p)


def test_dets_mod_batch_matches_det_int():
    rng = random.Random(8)
    p = 2**31 - 1
    mats = []
    exact = []
    for _ in range(6):
        n = 4
        A = [[rng.randint(-20, 20) for _ in range(n)] for _ in range(n)]
        mats.append(np.array(A, dtype=np.int64) % p)
        exact.append(det_int(A) % p)
    out = dets_mod_batch(np.stack(mats), p)
    assert out.tolist() == exact


def test_matinv_mod():
    rng = random.Random(9)
    p = 1000003
    A = np.array([[rng.randint(0, p - 1) for _ in range(5)] for _ in range(5)],
                 dtype=np.int64)
    inv = matinv_mod(A, p)
    assert inv is not None
    prod = np.zeros((5, 5), dtype=np.int64)
    for i in range(5):
        for j in range(5):
            prod[i, j] = sum(int(A[i, k]) * int(inv[k, j]) for k in range(5)) % p
    assert np.array_equal(prod, np.eye(5, dtype=np.int64))
    # singular input reports None
    B = np.array([[1, 2], [2, 4]], dtype=np.int64)
    assert matinv_mod(B, p) is None


def charpoly_exact(A):
    """Coefficients of det(z*I - A), constant term first, via exact
    interpolation at integer nodes."""
    n = len(A)
    xs = list(range(n + 1))
    ys = []
    for x in xs:
        M = [[Fraction(x if i == j else 0) - Fraction(A[i][j]) for j in range(n)]
             for i in range(n)]
        ys.append(det_frac(M))
    # Lagrange interpolation, dense coefficients low-to-high
    coeffs = [Fraction(0)] * (n + 1)
    for k, xk in enumerate(xs):
        num = [Fraction(1)]
        den = Fraction(1)
        for m, xm in enumerate(xs):
            if m == k:
                continue
            den *= xk - xm
            new = [Fraction(0)] * (len(num) + 1)
            for i, c in enumerate(num):
                new[i] -= c * xm
                new[i + 1] += c
            num = new
        scale = ys[k] / den
        for i, c in enumerate(num):
            coeffs[i] += c * scale
    return [int(c) for c in coeffs]


def test_charpolys_mod_batch_matches_exact():
    rng = random.Random(10)
    p = 2**31 - 1
    for n in (1, 2, 3, 5, 8):
        mats = []
        want = []
        for _ in range(4):
            A = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
            mats.append(np.array(A, dtype=np.int64) % p)
            want.append([c % p for c in charpoly_exact(A)])
        out = charpolys_mod_batch(np.stack(mats), p)
        assert out.shape == (4, n + 1)
        assert out.tolist() == want


def test_charpolys_mod_batch_pivot_breakdown_cases():
    # matrices engineered so the Hessenberg reduction must swap rows and
    # split blocks (zero subdiagonal pivots)
    p = 2**31 - 1
    A = [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]
    B = [[2, 0, 0, 0], [0, 3, 0, 0], [0, 0, 5, 0], [0, 0, 0, 7]]
    C = [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0]]
    mats = np.stack([np.array(M, dtype=np.int64) % p for M in (A, B, C)])
    out = charpolys_mod_batch(mats, p)
    for M, row in zip((A, B, C), out.tolist()):
        assert row == [c % p for c in charpoly_exact(M)]
