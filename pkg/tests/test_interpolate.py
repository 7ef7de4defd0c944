"""Trivariate interpolation on the degree-d simplex grid."""
from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from tensurf import interp_simplex_exact, newton_nodes, simplex_points
from tensurf.interpolate import SimplexInterpolatorMod


def random_poly(rng, d, density=0.6):
    terms = {}
    for (i, j, k) in simplex_points(d):
        if rng.random() < density:
            terms[(i, j, k)] = rng.randint(-20, 20)
    return terms


def eval_poly(terms, x, y, z):
    total = 0
    for (i, j, k), c in terms.items():
        total += c * x**i * y**j * z**k
    return total


def test_newton_nodes_distinct():
    nodes = newton_nodes(9)
    assert len(set(nodes)) == 9
    assert all(isinstance(x, int) for x in nodes)


def test_simplex_points_count():
    for d in (1, 2, 3, 5):
        pts = simplex_points(d)
        assert len(pts) == (d + 1) * (d + 2) * (d + 3) // 6
        assert all(i + j + k <= d for (i, j, k) in pts)


def test_exact_interpolation_round_trip():
    rng = random.Random(0)
    for d in (1, 2, 4):
        terms = random_poly(rng, d)
        nodes = newton_nodes(d + 1)
        values = {
            (i, j, k): Fraction(eval_poly(terms, nodes[i], nodes[j],
                                          nodes[k]))
            for (i, j, k) in simplex_points(d)
        }
        got = interp_simplex_exact(values, d)
        want = {e: Fraction(c) for e, c in terms.items() if c}
        assert got == want


def test_modular_interpolator_matches_exact():
    rng = random.Random(1)
    p = 2**31 - 1
    for d in (2, 3, 6):
        terms = random_poly(rng, d, density=0.8)
        interp = SimplexInterpolatorMod(d)
        nodes = interp.nodes
        values = np.array(
            [
                eval_poly(terms, nodes[i], nodes[j], nodes[k]) % p
                for (i, j, k) in interp.points
            ],
            dtype=np.int64,
        )
        got = interp.run(values, p)
        want = {e: c % p for e, c in terms.items() if c % p}
        assert got == want


def test_modular_interpolator_reusable_across_primes():
    rng = random.Random(2)
    d = 4
    terms = random_poly(rng, d)
    interp = SimplexInterpolatorMod(d)
    nodes = interp.nodes
    for p in (2**31 - 1, 2147483629):
        values = np.array(
            [
                eval_poly(terms, nodes[i], nodes[j], nodes[k]) % p
                for (i, j, k) in interp.points
            ],
            dtype=np.int64,
        )
        got = interp.run(values, p)
        want = {e: c % p for e, c in terms.items() if c % p}
        assert got == want
