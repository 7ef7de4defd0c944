"""Elimination-ideal baseline for the implicit equation.

The surface map is dehomogenized on the chart t = v = 1 and lifted to
its affine cone with a scaling variable c: the ideal
(X - c*f0~, ..., W - c*f3~) in k[c, s, u, X, Y, Z, W] contracts to the
principal ideal of the cone, so a Groebner basis for a block order with
{c, s, u} ahead of {X, Y, Z, W} leaves exactly one generator in the
target variables: the implicit equation.  Without the scaling variable
the chart image is a surface patch whose closure ideal is not principal
in general, which is why the cone construction is used.

This is a deliberately plain Buchberger implementation, meant as an
independent oracle and timing baseline, not as a competitive engine.
"""

from __future__ import annotations

from fractions import Fraction

from .bipoly import SurfForm, substitute_surface
from .errors import DegeneracyError, StepCapExceeded

NVARS = 7  # c, s, u, X, Y, Z, W


def _order_key(expo):
    """Block order key: {c,s,u} graded reverse lex over {X,Y,Z,W}
    graded reverse lex.  Larger key = larger monomial."""
    b1, b2 = expo[:3], expo[3:]
    return (
        sum(b1),
        tuple(-x for x in reversed(b1)),
        sum(b2),
        tuple(-x for x in reversed(b2)),
    )


class ElimPoly:
    """Sparse polynomial in (c, s, u, X, Y, Z, W) over the rationals."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for e, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[tuple(e)] = c
        self.terms = clean

    @classmethod
    def monomial(cls, expo, coef=1):
        return cls({tuple(expo): Fraction(coef)})

    def is_zero(self):
        return not self.terms

    def lead(self):
        e = max(self.terms, key=_order_key)
        return e, self.terms[e]

    def __add__(self, other):
        terms = dict(self.terms)
        for e, c in other.terms.items():
            nc = terms.get(e, Fraction(0)) + c
            if nc:
                terms[e] = nc
            else:
                terms.pop(e, None)
        return ElimPoly(terms)

    def __sub__(self, other):
        terms = dict(self.terms)
        for e, c in other.terms.items():
            nc = terms.get(e, Fraction(0)) - c
            if nc:
                terms[e] = nc
            else:
                terms.pop(e, None)
        return ElimPoly(terms)

    def mul_term(self, expo, coef):
        return ElimPoly(
            {
                tuple(a + b for a, b in zip(e, expo)): c * coef
                for e, c in self.terms.items()
            }
        )

    def monic(self):
        if not self.terms:
            return self
        _, lc = self.lead()
        return ElimPoly({e: c / lc for e, c in self.terms.items()})

    def __str__(self):
        names = ("c", "s", "u", "X", "Y", "Z", "W")
        parts = []
        for e in sorted(self.terms, key=_order_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"{n}^{k}" if k > 1 else n for n, k in zip(names, e) if k
            )
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts) if parts else "0"


def _divides(ea, eb):
    return all(x <= y for x, y in zip(ea, eb))


def _lcm(ea, eb):
    return tuple(max(x, y) for x, y in zip(ea, eb))


def normal_form(f, basis, budget=None):
    """Fully reduce f by the basis; optionally spend from a step budget
    (a mutable one-element list) and raise when it runs out."""
    leads = [g.lead() for g in basis]
    rem = ElimPoly(dict(f.terms))
    out = {}
    while rem.terms:
        if budget is not None:
            budget[0] -= 1
            if budget[0] < 0:
                raise StepCapExceeded(
                    "reduction step cap exceeded in the elimination baseline"
                )
        e, c = rem.lead()
        hit = None
        for g, (ge, gc) in zip(basis, leads):
            if _divides(ge, e):
                hit = (g, ge, gc)
                break
        if hit is None:
            out[e] = c
            del rem.terms[e]
            continue
        g, ge, gc = hit
        shift = tuple(x - y for x, y in zip(e, ge))
        rem = rem - g.mul_term(shift, c / gc)
    return ElimPoly(out)


def buchberger(gens, step_cap=200000):
    """Reduced Groebner basis for the block elimination order.

    Normal selection strategy (smallest lcm in the order), the coprime
    lead-monomial criterion, and a hard cap on reduction steps.
    """
    basis = [g.monic() for g in gens if not g.is_zero()]
    budget = [step_cap]
    pairs = []
    for i in range(len(basis)):
        for j in range(i):
            pairs.append((j, i))

    def lcm_of(pair):
        ei = basis[pair[0]].lead()[0]
        ej = basis[pair[1]].lead()[0]
        return _lcm(ei, ej)

    while pairs:
        pairs.sort(key=lambda pr: _order_key(lcm_of(pr)))
        i, j = pairs.pop(0)
        ei, _ = basis[i].lead()
        ej, _ = basis[j].lead()
        l = _lcm(ei, ej)
        if all(x + y == z for x, y, z in zip(ei, ej, l)):
            continue  # coprime leads: S-polynomial reduces to zero
        si = basis[i].mul_term(tuple(a - b for a, b in zip(l, ei)), 1)
        sj = basis[j].mul_term(tuple(a - b for a, b in zip(l, ej)), 1)
        s = si - sj
        rem = normal_form(s, basis, budget)
        if rem.is_zero():
            continue
        rem = rem.monic()
        basis.append(rem)
        k = len(basis) - 1
        pairs.extend((t, k) for t in range(k))
    # interreduce to the unique reduced basis
    reduced = []
    for i, g in enumerate(basis):
        others = [h for t, h in enumerate(basis) if t != i]
        rem = normal_form(g, others)
        if not rem.is_zero():
            reduced.append(rem.monic())
    # drop duplicates that interreduction can leave behind
    seen = set()
    final = []
    for g in sorted(reduced, key=lambda h: _order_key(h.lead()[0])):
        key = frozenset(g.terms.items())
        if key not in seen:
            seen.add(key)
            final.append(g)
    return final


def eliminate_params(U, step_cap=200000):
    """Implicit equation via the elimination baseline.

    Builds the cone ideal on the chart t = v = 1, runs Buchberger, and
    returns the unique surviving generator in the target variables as a
    normalized homogeneous form of degree 2a - r, cross-checked by exact
    substitution of the surface map.
    """
    a, r = U.a, U.r
    den = 1
    for f in U.f:
        for c in f.terms.values():
            den = den * c.denominator // _gcd(den, c.denominator)
    gens = []
    for idx, f in enumerate(U.f):
        terms = {}
        for (es, et, eu, ev), c in f.terms.items():
            expo = (1, es, eu, 0, 0, 0, 0)
            terms[expo] = terms.get(expo, Fraction(0)) - c * den
        var = [0] * NVARS
        var[3 + idx] = 1
        terms[tuple(var)] = Fraction(1)
        gens.append(ElimPoly(terms))
    gb = buchberger(gens, step_cap=step_cap)
    survivors = [
        g for g in gb if all(e[0] == e[1] == e[2] == 0 for e in g.terms)
    ]
    if len(survivors) != 1:
        raise DegeneracyError(
            "baseline",
            f"elimination ideal has {len(survivors)} generators, expected 1",
        )
    g = survivors[0]
    degs = {sum(e[3:]) for e in g.terms}
    if len(degs) != 1:
        raise DegeneracyError("baseline", "eliminated generator is not homogeneous")
    deg = degs.pop()
    if deg != 2 * a - r:
        raise DegeneracyError(
            "baseline", f"eliminated degree {deg}, expected {2*a - r}"
        )
    H = SurfForm(deg, {e[3:]: c for e, c in g.terms.items()}).normalized()
    check = substitute_surface(H, U.f)
    if not check.is_zero():
        raise DegeneracyError(
            "baseline", "eliminated generator fails surface substitution"
        )
    return H


def _gcd(x, y):
    while y:
        x, y = y, x % y
    return x
