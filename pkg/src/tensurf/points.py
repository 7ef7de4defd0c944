"""Finite point sets on P1 x P1 and their bigraded Hilbert functions.

A point is a pair of P1 coordinates ((A0 : A1), (B0 : B1)), stored in
the normalized representative whose first nonzero coordinate is 1.  The
bigraded Hilbert function of a set X in bidegree (i, j) is the rank of
the evaluation matrix pairing the points against the monomial basis of
that bidegree; X is "generic" when that rank is as large as possible in
every bidegree of the window [0, r-1] x [0, r-1], which by monotonicity
forces maximal rank everywhere.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .bipoly import mono_basis


class GenericityError(ValueError):
    """Raised when an operation requires a generic point set."""


def _normalize_pair(pair):
    a0, a1 = Fraction(pair[0]), Fraction(pair[1])
    if a0 == 0 and a1 == 0:
        raise ValueError("(0:0) is not a point of P1")
    if a0 != 0:
        return (Fraction(1), a1 / a0)
    return (Fraction(0), Fraction(1))


@dataclass(frozen=True)
class PointP1P1:
    """A point of P1 x P1 in normalized coordinates."""

    first: tuple
    second: tuple

    def __init__(self, first, second):
        object.__setattr__(self, "first", _normalize_pair(first))
        object.__setattr__(self, "second", _normalize_pair(second))

    def coords(self):
        return (self.first, self.second)


class PointSet:
    """An ordered collection of distinct points of P1 x P1."""

    def __init__(self, points):
        pts = []
        seen = set()
        for p in points:
            if not isinstance(p, PointP1P1):
                p = PointP1P1(*p)
            key = (p.first, p.second)
            if key in seen:
                raise ValueError(f"duplicate point {key}")
            seen.add(key)
            pts.append(p)
        self.points = tuple(pts)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __eq__(self, other):
        return isinstance(other, PointSet) and self.points == other.points

    def __repr__(self):
        return f"PointSet({len(self)} points)"


@dataclass(frozen=True)
class Partition:
    """A weakly decreasing sequence of positive integers."""

    parts: tuple

    def __init__(self, parts):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts):
            raise ValueError("partition parts must be positive")
        if any(parts[k] < parts[k + 1] for k in range(len(parts) - 1)):
            raise ValueError("partition parts must be weakly decreasing")
        object.__setattr__(self, "parts", parts)

    def __len__(self):
        return len(self.parts)

    def total(self):
        return sum(self.parts)


def conjugate(part):
    """Conjugate partition: part k of the conjugate counts the parts of
    the input that are >= k+1."""
    parts = part.parts if isinstance(part, Partition) else tuple(part)
    if not parts:
        return Partition(())
    out = []
    for k in range(1, parts[0] + 1):
        out.append(sum(1 for p in parts if p >= k))
    return Partition(out)


def eval_matrix(X, bidegree):
    """Points-by-monomials evaluation matrix in bidegree (i, j).

    Row order follows the point set, column order the canonical monomial
    basis; entry = A0^es A1^et B0^eu B1^ev.
    """
    basis = mono_basis(bidegree)
    rows = []
    for p in X:
        (a0, a1), (b0, b1) = p.coords()
        row = []
        for es, et, eu, ev in basis.monomials:
            row.append(a0**es * a1**et * b0**eu * b1**ev)
        rows.append(row)
    return rows


def hilbert(X, bidegree):
    """Value of the bigraded Hilbert function of X at (i, j)."""
    if len(X) == 0:
        return 0
    return linalg.rank(eval_matrix(X, bidegree))


def hilbert_table(X, imax, jmax):
    """Table [i][j] of Hilbert values for 0 <= i <= imax, 0 <= j <= jmax."""
    return [[hilbert(X, (i, j)) for j in range(jmax + 1)] for i in range(imax + 1)]


def partitions(X):
    """The two distribution partitions of X: point counts per first
    projection fiber and per second projection fiber, sorted decreasing."""
    first_counts = {}
    second_counts = {}
    for p in X:
        first_counts[p.first] = first_counts.get(p.first, 0) + 1
        second_counts[p.second] = second_counts.get(p.second, 0) + 1
    alpha = Partition(sorted(first_counts.values(), reverse=True))
    beta = Partition(sorted(second_counts.values(), reverse=True))
    return alpha, beta


@dataclass
class StabilizedCheckReport:
    ok: bool
    failures: list = field(default_factory=list)


def stabilized_hilbert_check(X, margin=2):
    """Check the closed stabilized formulas for the Hilbert function.

    For i >= (number of distinct first coordinates) - 1 the value at
    (i, j) must equal the partial sum of the conjugate of the first
    partition through index j+1, and symmetrically in the other factor
    with partial sums through index i+1.
    """
    if len(X) == 0:
        return StabilizedCheckReport(True)
    alpha, beta = partitions(X)
    astar = conjugate(alpha).parts
    bstar = conjugate(beta).parts
    h = len(alpha)
    v = len(beta)
    failures = []
    jmax = len(astar) + margin
    for i in (h - 1, h):
        for j in range(jmax + 1):
            expected = sum(astar[: j + 1])
            got = hilbert(X, (i, j))
            if got != expected:
                failures.append(((i, j), got, expected))
    imax = len(bstar) + margin
    for j in (v - 1, v):
        for i in range(imax + 1):
            expected = sum(bstar[: i + 1])
            got = hilbert(X, (i, j))
            if got != expected:
                failures.append(((i, j), got, expected))
    return StabilizedCheckReport(not failures, failures)


def is_generic(X):
    """Whether X imposes independent conditions in every bidegree.

    Checking the window 0 <= i, j <= r-1 suffices: the Hilbert function
    is componentwise nondecreasing and bounded by r, and a pass on the
    window edge already reaches r, forcing the maximal value outside.
    """
    r = len(X)
    done = set()
    for i in range(r):
        for j in range(r):
            if (i, j) in done:
                continue
            target = min((i + 1) * (j + 1), r)
            if hilbert(X, (i, j)) != target:
                return False
            if target == r:
                for ii in range(i, r):
                    for jj in range(j, r):
                        done.add((ii, jj))
    return True


def random_generic_points(r, seed, coord_range=(-50, 50), max_tries=32):
    """Sample r distinct points with integer affine coordinates until the
    genericity test passes.  Deterministic for a fixed seed."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    if r == 0:
        return PointSet([])
    rng = random.Random(seed)
    lo, hi = coord_range
    if hi - lo + 1 < r:
        raise ValueError("coordinate range too small for r distinct values")
    for _ in range(max_tries):
        firsts = rng.sample(range(lo, hi + 1), r)
        seconds = rng.sample(range(lo, hi + 1), r)
        X = PointSet([((1, x), (1, y)) for x, y in zip(firsts, seconds)])
        if is_generic(X):
            return X
    raise GenericityError(f"no generic set of {r} points found in {max_tries} tries")


def stabilization_indices(X, j=None, i=None):
    """Smallest index at which the Hilbert function stops growing along a
    row or column.  Pass exactly one of j (column, returns i(j)) or i
    (row, returns j(i))."""
    if (j is None) == (i is None):
        raise ValueError("pass exactly one of i= or j=")
    r = len(X)
    if j is not None:
        values = lambda t: hilbert(X, (t, j))
    else:
        values = lambda t: hilbert(X, (i, t))
    prev = values(0)
    for t in range(r + 2):
        nxt = values(t + 1)
        if nxt == prev:
            return t
        prev = nxt
    raise RuntimeError("stabilization not reached inside the search window")


# ----------------------------------------------------------------------
# JSON formats
# ----------------------------------------------------------------------


def _coord_to_json(c):
    f = Fraction(c)
    if f.denominator == 1:
        return int(f)
    return str(f)


def points_to_json(X):
    return {
        "points": [
            [[_coord_to_json(c) for c in p.first], [_coord_to_json(c) for c in p.second]]
            for p in X
        ]
    }


def points_from_json(data):
    pts = []
    for entry in data.get("points", []):
        (a0, a1), (b0, b1) = entry
        pts.append(PointP1P1((Fraction(str(a0)), Fraction(str(a1))),
                             (Fraction(str(b0)), Fraction(str(b1)))))
    return PointSet(pts)


def load_points(path):
    with open(path) as fh:
        return points_from_json(json.load(fh))


def save_points(X, path):
    with open(path, "w") as fh:
        json.dump(points_to_json(X), fh, indent=1)
        fh.write("\n")
