"""Dense interpolation of trivariate polynomial values on a simplex grid.

A homogeneous quaternary form of degree d is recovered from its values
at W = 1 on the lower-set grid {(p, q, r) : p + q + r <= d} of node
triples (x_p, x_q, x_r).  Newton divided differences run along one axis
at a time; because each sweep only combines entries with the same
remaining indices, the simplex support is preserved, and the triangular
Newton-to-monomial conversion is likewise per-axis.

Both an exact rational version and a mod-p version (numpy int64, for
the Chinese-remainder determinant path) are provided.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np


def newton_nodes(count):
    """Distinct integer nodes ordered by magnitude: 0, -1, 1, -2, 2, ..."""
    out = [0]
    k = 1
    while len(out) < count:
        out.append(-k)
        if len(out) < count:
            out.append(k)
        k += 1
    return out[:count]


def simplex_points(d):
    """Index triples of the interpolation grid, in a fixed order."""
    return [
        (p, q, r)
        for p in range(d + 1)
        for q in range(d + 1 - p)
        for r in range(d + 1 - p - q)
    ]


def newton_expansion(nodes):
    """E[m] = integer coefficient list of prod_{l<m} (x - nodes[l]);
    E[m][i] multiplies x^i."""
    E = [[1]]
    for m in range(1, len(nodes)):
        prev = E[-1]
        nxt = [0] * (len(prev) + 1)
        c = nodes[m - 1]
        for i, v in enumerate(prev):
            nxt[i + 1] += v
            nxt[i] -= c * v
        E.append(nxt)
    return E


def interp_simplex_exact(values, d, nodes=None):
    """Exact interpolation from a dict {(p,q,r): value} of grid values.

    Returns {(i,j,k): Fraction coefficient of x^i y^j z^k}, total degree
    <= d.  The caller may assert integrality when the target polynomial
    is known to have integer coefficients.
    """
    nodes = nodes or newton_nodes(d + 1)
    c = {pt: Fraction(values[pt]) for pt in simplex_points(d)}

    # divided differences along each axis in turn
    for axis in range(3):
        for fixed in _fixed_pairs(d):
            budget = d - sum(fixed)
            seq = [c[_at(axis, m, fixed)] for m in range(budget + 1)]
            for lvl in range(1, budget + 1):
                for idx in range(budget, lvl - 1, -1):
                    seq[idx] = (seq[idx] - seq[idx - 1]) / (
                        nodes[idx] - nodes[idx - lvl])
            for m in range(budget + 1):
                c[_at(axis, m, fixed)] = seq[m]

    # Newton basis -> monomial basis, axis by axis
    E = newton_expansion(nodes)
    for axis in range(3):
        for fixed in _fixed_pairs(d):
            budget = d - sum(fixed)
            seq = [c[_at(axis, m, fixed)] for m in range(budget + 1)]
            out = [Fraction(0)] * (budget + 1)
            for m in range(budget + 1):
                cm = seq[m]
                if cm:
                    row = E[m]
                    for i in range(m + 1):
                        out[i] += cm * row[i]
            for m in range(budget + 1):
                c[_at(axis, m, fixed)] = out[m]
    return {pt: v for pt, v in c.items() if v}


def _fixed_pairs(d):
    return [(a, b) for a in range(d + 1) for b in range(d + 1 - a)]


def _at(axis, m, fixed):
    if axis == 0:
        return (m, fixed[0], fixed[1])
    if axis == 1:
        return (fixed[0], m, fixed[1])
    return (fixed[0], fixed[1], m)


class SimplexInterpolatorMod:
    """Reusable mod-p interpolation on the degree-d simplex grid.

    Per prime: fill a cube from the value vector (ordered like
    ``simplex_points``), run masked divided-difference sweeps and the
    triangular conversion, and read off monomial residues.
    """

    def __init__(self, d):
        self.d = d
        self.nodes = newton_nodes(d + 1)
        self.points = simplex_points(d)
        self.E = newton_expansion(self.nodes)
        n = d + 1
        idx = np.arange(n)
        total = idx[:, None, None] + idx[None, :, None] + idx[None, None, :]
        self.mask = (total <= d)

    def run(self, values, p):
        """values: int64 array ordered like self.points -> dict of
        monomial residues {(i,j,k): int}."""
        d, n = self.d, self.d + 1
        cube = np.zeros((n, n, n), dtype=np.int64)
        for (pt, v) in zip(self.points, values):
            cube[pt] = int(v) % p
        inv = {}

        def inv_diff(a, b):
            key = self.nodes[a] - self.nodes[b]
            if key not in inv:
                inv[key] = pow(key % p, p - 2, p)
            return inv[key]

        for axis in range(3):
            cube = np.moveaxis(cube, axis, 0)
            for lvl in range(1, n):
                for idx in range(d, lvl - 1, -1):
                    cube[idx] = (cube[idx] - cube[idx - 1]) % p * inv_diff(
                        idx, idx - lvl) % p
            cube = np.moveaxis(cube, 0, axis)
            cube *= self.mask
        # conversion matrix T[i, m] = E[m][i] mod p
        T = np.zeros((n, n), dtype=np.int64)
        for m in range(n):
            for i in range(m + 1):
                T[i, m] = self.E[m][i] % p
        for axis in range(3):
            cube = np.moveaxis(cube, axis, 0)
            flat = cube.reshape(n, -1)
            out = np.zeros_like(flat)
            # triangular product in O(n) passes to stay inside int64
            for m in range(n):
                out[: m + 1] = (out[: m + 1] + T[: m + 1, m : m + 1] * flat[m]) % p
            cube = out.reshape(cube.shape)
            cube = np.moveaxis(cube, 0, axis)
            cube *= self.mask
        coeffs = {}
        nz = np.argwhere(cube)
        for i, j, k in nz:
            coeffs[(int(i), int(j), int(k))] = int(cube[i, j, k])
        return coeffs
