"""Exact bigraded polynomial arithmetic.

Two polynomial flavours live here:

* ``BiForm``   -- a bihomogeneous form in k[s,t,u,v], where s,t have
  bidegree (1,0) and u,v have bidegree (0,1).  Every stored form is
  homogeneous of a single bidegree (i,j).
* ``SurfForm`` -- a homogeneous form in k[X,Y,Z,W], the coordinate ring
  of the target projective 3-space.

Coefficients are exact rationals (``fractions.Fraction``); no floating
point is used anywhere.  Monomials are ordered graded-lexicographically
with s > t > u > v (resp. X > Y > Z > W).  Within one bidegree the total
degree is constant, so this amounts to plain lex on exponent vectors.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

BI_VARS = ("s", "t", "u", "v")
SURF_VARS = ("X", "Y", "Z", "W")

_COEF_RE = re.compile(r"^[+-]?\d+(/\d+)?$")
_VARPOW_RE = re.compile(r"^([a-zA-Z])(?:\^(\d+))?$")


def _key_bi(expo):
    # canonical sort key: lex with s > t > u > v, largest first
    return (-expo[0], -expo[2])


def _key_surf(expo):
    return (-expo[0], -expo[1], -expo[2])


class BiForm:
    """A bihomogeneous form in k[s,t,u,v] of a fixed bidegree (i,j).

    ``terms`` maps exponent quadruples (e_s, e_t, e_u, e_v) to nonzero
    rational coefficients, with e_s + e_t = i and e_u + e_v = j.
    """

    __slots__ = ("bidegree", "terms")

    def __init__(self, bidegree, terms=None):
        i, j = int(bidegree[0]), int(bidegree[1])
        if i < 0 or j < 0:
            raise ValueError("bidegree must be nonnegative")
        self.bidegree = (i, j)
        clean = {}
        for expo, c in (terms or {}).items():
            c = Fraction(c)
            if c == 0:
                continue
            es, et, eu, ev = expo
            if es < 0 or et < 0 or eu < 0 or ev < 0 or es + et != i or eu + ev != j:
                raise ValueError(f"exponent {expo} is not of bidegree {(i, j)}")
            clean[(es, et, eu, ev)] = c
        self.terms = clean

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls, bidegree):
        return cls(bidegree, {})

    @classmethod
    def monomial(cls, expo, coef=1):
        es, et, eu, ev = expo
        return cls((es + et, eu + ev), {tuple(expo): Fraction(coef)})

    @classmethod
    def variable(cls, name):
        idx = BI_VARS.index(name)
        expo = [0, 0, 0, 0]
        expo[idx] = 1
        return cls.monomial(tuple(expo))

    # -- ring structure ----------------------------------------------

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if not isinstance(other, BiForm):
            return NotImplemented
        if self.bidegree != other.bidegree:
            raise ValueError("cannot add forms of different bidegrees")
        terms = dict(self.terms)
        for expo, c in other.terms.items():
            terms[expo] = terms.get(expo, Fraction(0)) + c
        return BiForm(self.bidegree, terms)

    def __neg__(self):
        return BiForm(self.bidegree, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, BiForm):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, BiForm):
            i = self.bidegree[0] + other.bidegree[0]
            j = self.bidegree[1] + other.bidegree[1]
            terms = {}
            for (a1, a2, a3, a4), c in self.terms.items():
                for (b1, b2, b3, b4), d in other.terms.items():
                    key = (a1 + b1, a2 + b2, a3 + b3, a4 + b4)
                    terms[key] = terms.get(key, Fraction(0)) + c * d
            return BiForm((i, j), terms)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c):
        c = Fraction(c)
        return BiForm(self.bidegree, {e: k * c for e, k in self.terms.items()})

    def __eq__(self, other):
        return (
            isinstance(other, BiForm)
            and self.bidegree == other.bidegree
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.bidegree, frozenset(self.terms.items())))

    # -- views --------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: _key_bi(kv[0]))

    def to_vector(self, basis):
        """Dense coefficient vector with respect to a MonomialBasis."""
        if basis.bidegree != self.bidegree:
            raise ValueError("basis bidegree mismatch")
        return [self.terms.get(m, Fraction(0)) for m in basis.monomials]

    @classmethod
    def from_vector(cls, vec, basis):
        return cls(basis.bidegree, dict(zip(basis.monomials, vec)))

    def evaluate(self, point):
        """Evaluate at a point of P1 x P1 given by a coordinate pair.

        ``point`` is ((A0, A1), (B0, B1)) or a points.PointP1P1; s maps
        to A0, t to A1, u to B0, v to B1.
        """
        (a0, a1), (b0, b1) = _point_coords(point)
        total = Fraction(0)
        for (es, et, eu, ev), c in self.terms.items():
            total += c * a0**es * a1**et * b0**eu * b1**ev
        return total

    def __str__(self):
        return _format_terms(self.sorted_terms(), BI_VARS)

    def __repr__(self):
        return f"BiForm({self.bidegree}, {str(self)!r})"


class SurfForm:
    """A homogeneous form in k[X,Y,Z,W] of a fixed total degree."""

    __slots__ = ("degree", "terms")

    def __init__(self, degree, terms=None):
        d = int(degree)
        if d < 0:
            raise ValueError("degree must be nonnegative")
        self.degree = d
        clean = {}
        for expo, c in (terms or {}).items():
            c = Fraction(c)
            if c == 0:
                continue
            if len(expo) != 4 or min(expo) < 0 or sum(expo) != d:
                raise ValueError(f"exponent {expo} is not of degree {d}")
            clean[tuple(expo)] = c
        self.terms = clean

    @classmethod
    def zero(cls, degree):
        return cls(degree, {})

    @classmethod
    def monomial(cls, expo, coef=1):
        return cls(sum(expo), {tuple(expo): Fraction(coef)})

    @classmethod
    def variable(cls, name):
        idx = SURF_VARS.index(name)
        expo = [0, 0, 0, 0]
        expo[idx] = 1
        return cls.monomial(tuple(expo))

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if not isinstance(other, SurfForm):
            return NotImplemented
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degrees")
        terms = dict(self.terms)
        for expo, c in other.terms.items():
            terms[expo] = terms.get(expo, Fraction(0)) + c
        return SurfForm(self.degree, terms)

    def __neg__(self):
        return SurfForm(self.degree, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, SurfForm):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, SurfForm):
            terms = {}
            for ea, c in self.terms.items():
                for eb, d in other.terms.items():
                    key = tuple(x + y for x, y in zip(ea, eb))
                    terms[key] = terms.get(key, Fraction(0)) + c * d
            return SurfForm(self.degree + other.degree, terms)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c):
        c = Fraction(c)
        return SurfForm(self.degree, {e: k * c for e, k in self.terms.items()})

    def __eq__(self, other):
        return (
            isinstance(other, SurfForm)
            and self.degree == other.degree
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: _key_surf(kv[0]))

    def leading_coefficient(self):
        if not self.terms:
            return Fraction(0)
        return self.sorted_terms()[0][1]

    def normalized(self):
        """Scale to integer coefficients with content 1 and positive
        leading coefficient (graded lex X > Y > Z > W)."""
        if not self.terms:
            return self
        den = 1
        for c in self.terms.values():
            den = den * c.denominator // gcd(den, c.denominator)
        ints = {e: int(c * den) for e, c in self.terms.items()}
        g = 0
        for v in ints.values():
            g = gcd(g, abs(v))
        lead = min(ints, key=_key_surf)
        sign = 1 if ints[lead] > 0 else -1
        return SurfForm(self.degree, {e: Fraction(sign * v, g) for e, v in ints.items()})

    def evaluate(self, values):
        """Evaluate at a 4-tuple of rational values for (X, Y, Z, W)."""
        x, y, z, w = (Fraction(v) for v in values)
        total = Fraction(0)
        for (ex, ey, ez, ew), c in self.terms.items():
            total += c * x**ex * y**ey * z**ez * w**ew
        return total

    def __str__(self):
        return _format_terms(self.sorted_terms(), SURF_VARS)

    def __repr__(self):
        return f"SurfForm({self.degree}, {str(self)!r})"


@dataclass(frozen=True)
class MonomialBasis:
    """Ordered monomial basis of the bidegree-(i,j) graded piece of
    k[s,t,u,v]; the list has (i+1)(j+1) exponent quadruples in canonical
    (graded lex, s > t > u > v) order."""

    bidegree: tuple
    monomials: tuple


def mono_basis(bidegree):
    i, j = bidegree
    if i < 0 or j < 0:
        raise ValueError("bidegree must be nonnegative")
    monos = []
    for es in range(i, -1, -1):
        for eu in range(j, -1, -1):
            monos.append((es, i - es, eu, j - eu))
    return MonomialBasis((i, j), tuple(monos))


def surf_mono_list(degree):
    """Monomials of k[X,Y,Z,W] of the given total degree in canonical
    order (graded lex, X > Y > Z > W)."""
    monos = []
    for ex in range(degree, -1, -1):
        for ey in range(degree - ex, -1, -1):
            for ez in range(degree - ex - ey, -1, -1):
                monos.append((ex, ey, ez, degree - ex - ey - ez))
    return monos


def poly_arith(op, F, G=None, c=None):
    """Uniform dispatcher: op in {"add", "mul", "scale"}."""
    if op == "add":
        return F + G
    if op == "mul":
        return F * G
    if op == "scale":
        return F.scale(c)
    raise ValueError(f"unknown op {op!r}")


def evaluate(F, point):
    return F.evaluate(point)


def _point_coords(point):
    if hasattr(point, "first"):
        first, second = point.first, point.second
    else:
        first, second = point
    a0, a1 = Fraction(first[0]), Fraction(first[1])
    b0, b1 = Fraction(second[0]), Fraction(second[1])
    if a0 == 0 and a1 == 0:
        raise ValueError("(0:0) is not a point of P1")
    if b0 == 0 and b1 == 0:
        raise ValueError("(0:0) is not a point of P1")
    return (a0, a1), (b0, b1)


# ----------------------------------------------------------------------
# composition H(f0, f1, f2, f3)
# ----------------------------------------------------------------------


def substitute_surface(H, forms):
    """Substitute four equal-bidegree forms into a form on P3.

    Returns the BiForm H(f0, f1, f2, f3).  For a degree-d H and bidegree
    (a, b) inputs the result is bihomogeneous of bidegree (d*a, d*b); in
    particular it is identically zero exactly when H vanishes on the
    closure of the image of the map defined by the forms.

    Small inputs go through direct exact arithmetic.  Larger ones use a
    dense modular evaluation with enough 31-bit primes to cover an a
    priori coefficient bound, followed by Chinese-remainder lifting, so
    the result is still exact.
    """
    f0, f1, f2, f3 = forms
    bd = f0.bidegree
    for f in forms:
        if f.bidegree != bd:
            raise ValueError("all substituted forms must share one bidegree")
    d = H.degree
    out_bd = (d * bd[0], d * bd[1])
    if not H.terms:
        return BiForm.zero(out_bd)
    dense = (out_bd[0] + 1) * (out_bd[1] + 1)
    if len(H.terms) * dense <= 250_000:
        return _substitute_direct(H, forms, out_bd)
    return _substitute_modular(H, forms, out_bd)


def _substitute_direct(H, forms, out_bd):
    powers = [{0: BiForm((0, 0), {(0, 0, 0, 0): 1})} for _ in range(4)]

    def power(i, e):
        cache = powers[i]
        if e not in cache:
            cache[e] = power(i, e - 1) * forms[i]
        return cache[e]

    total = BiForm.zero(out_bd)
    for (e0, e1, e2, e3), c in H.terms.items():
        prod = power(0, e0)
        for i, e in ((1, e1), (2, e2), (3, e3)):
            if e:
                prod = prod * power(i, e)
        total = total + prod.scale(c)
    return total


def _biform_int_grid(F):
    """Clear denominators: returns (2-D list of ints indexed by
    (e_s, e_u), common denominator)."""
    i, j = F.bidegree
    den = 1
    for c in F.terms.values():
        den = den * c.denominator // gcd(den, c.denominator)
    grid = [[0] * (j + 1) for _ in range(i + 1)]
    for (es, _et, eu, _ev), c in F.terms.items():
        grid[es][eu] = int(c * den)
    return grid, den


def _substitute_modular(H, forms, out_bd):
    from . import linalg  # local import to avoid a cycle at module load

    d = H.degree
    grids = []
    dens = []
    for f in forms:
        g, den = _biform_int_grid(f)
        grids.append(g)
        dens.append(den)
    # common scaling: multiply every form by L, so each degree-d term of H
    # picks up the uniform factor L^d
    L = 1
    for den in dens:
        L = L * den // gcd(L, den)
    for g, den in zip(grids, dens):
        m = L // den
        if m != 1:
            for row in g:
                for k in range(len(row)):
                    row[k] *= m
    hden = 1
    for c in H.terms.values():
        hden = hden * c.denominator // gcd(hden, c.denominator)
    hterms = {e: int(c * hden) for e, c in H.terms.items()}

    # a priori bound on the coefficients of hden * H(L*f0, ..., L*f3)
    norms = [sum(abs(v) for row in g for v in row) for g in grids]
    bound = 0
    for (e0, e1, e2, e3), c in hterms.items():
        bound += abs(c) * norms[0] ** e0 * norms[1] ** e1 * norms[2] ** e2 * norms[3] ** e3
    need = 2 * bound + 1

    rows, cols = out_bd[0] + 1, out_bd[1] + 1
    residues = []
    primes = []
    modulus = 1
    pit = linalg.prime_stream()
    while modulus < need:
        p = next(pit)
        primes.append(p)
        modulus *= p
        fg = [
            np.array([[v % p for v in row] for row in g], dtype=np.int64)
            for g in grids
        ]
        residues.append(_compose_mod_p(hterms, fg, d, (rows, cols), p))
    result = {}
    half = modulus // 2
    scale = Fraction(1, hden * L**d)
    for es in range(rows):
        for eu in range(cols):
            val = linalg.crt([int(r[es, eu]) for r in residues], primes)
            if val > half:
                val -= modulus
            if val:
                expo = (es, out_bd[0] - es, eu, out_bd[1] - eu)
                result[expo] = val * scale
    return BiForm(out_bd, result)


def _compose_mod_p(hterms, fgrids, d, out_shape, p):
    """Dense composition mod p, Horner-style over exponents of f0, f1."""
    rows, cols = out_shape
    f0, f1, f2, f3 = fgrids

    def mul_grid(A, B):
        ra, ca = A.shape
        rb, cb = B.shape
        out = np.zeros((ra + rb - 1, ca + cb - 1), dtype=np.int64)
        for i in range(rb):
            for j in range(cb):
                v = int(B[i, j])
                if v:
                    out[i : i + ra, j : j + ca] = (
                        out[i : i + ra, j : j + ca] + v * A
                    ) % p
        return out

    one = np.ones((1, 1), dtype=np.int64)

    def make_pow_cache(base):
        cache = {0: one}

        def power(e):
            if e not in cache:
                cache[e] = mul_grid(power(e - 1), base)
            return cache[e]

        return power

    pow0, pow1, pow2, pow3 = (make_pow_cache(f) for f in (f0, f1, f2, f3))
    tail_cache = {}

    def tail(e2, e3):
        # f2^e2 * f3^e3, cached across all H terms
        if (e2, e3) not in tail_cache:
            tail_cache[(e2, e3)] = mul_grid(pow2(e2), pow3(e3))
        return tail_cache[(e2, e3)]

    nested = {}
    for (e0, e1, e2, e3), c in hterms.items():
        nested.setdefault(e0, {}).setdefault(e1, []).append((e2, e3, c % p))

    acc = np.zeros(out_shape, dtype=np.int64)
    for e0, sub0 in nested.items():
        acc0 = np.zeros(out_shape, dtype=np.int64)
        for e1, entries in sub0.items():
            acc1 = np.zeros(out_shape, dtype=np.int64)
            for e2, e3, c in entries:
                t = tail(e2, e3)
                rr, cc = t.shape
                acc1[:rr, :cc] = (acc1[:rr, :cc] + c * t) % p
            if e1:
                acc1 = mul_grid(acc1, pow1(e1))[:rows, :cols]
            acc0 = (acc0 + acc1) % p
        if e0:
            acc0 = mul_grid(acc0, pow0(e0))[:rows, :cols]
        acc = (acc + acc0) % p
    return acc


# ----------------------------------------------------------------------
# text grammar
# ----------------------------------------------------------------------


def _format_terms(sorted_terms, var_names):
    if not sorted_terms:
        return "0"
    pieces = []
    for expo, c in sorted_terms:
        mono = "*".join(
            name if e == 1 else f"{name}^{e}"
            for name, e in zip(var_names, expo)
            if e > 0
        )
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not pieces:
            pieces.append(body if c > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(pieces)


def _tokenize_terms(text):
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial string")
    # split into signed chunks
    chunks = []
    sign = 1
    cur = ""
    i = 0
    while i < len(text):
        ch = text[i]
        if ch in "+-" and (cur.strip() or not chunks and not cur.strip()):
            if cur.strip():
                chunks.append((sign, cur.strip()))
                cur = ""
                sign = 1 if ch == "+" else -1
            else:
                # leading sign
                sign = sign * (1 if ch == "+" else -1)
        else:
            cur += ch
        i += 1
    if cur.strip():
        chunks.append((sign, cur.strip()))
    if not chunks:
        raise ValueError(f"cannot parse polynomial: {text!r}")
    return chunks


def _parse_term(term, alphabet):
    coef = Fraction(1)
    expo = {}
    saw_coef = False
    for piece in term.split("*"):
        piece = piece.strip()
        if not piece:
            raise ValueError(f"empty factor in term {term!r}")
        if _COEF_RE.match(piece):
            if saw_coef or expo:
                raise ValueError(f"misplaced coefficient in term {term!r}")
            coef = Fraction(piece)
            saw_coef = True
            continue
        m = _VARPOW_RE.match(piece)
        if not m:
            raise ValueError(f"cannot parse factor {piece!r}")
        name, pow_s = m.group(1), m.group(2)
        if name not in alphabet:
            raise ValueError(
                f"variable {name!r} does not belong to alphabet {alphabet}"
            )
        e = int(pow_s) if pow_s else 1
        expo[name] = expo.get(name, 0) + e
    return coef, expo


def _detect_alphabet(text):
    has_bi = any(v in text for v in BI_VARS)
    has_surf = any(v in text for v in SURF_VARS)
    if has_bi and has_surf:
        raise ValueError("mixed variable alphabets in one polynomial")
    return has_bi, has_surf


def parse_biform(text, bidegree=None):
    """Parse the canonical text grammar into a BiForm.

    The bidegree is inferred from the terms when not supplied; supplying
    it is required only for the zero polynomial ("0")."""
    has_bi, has_surf = _detect_alphabet(text)
    if has_surf:
        raise ValueError("expected variables from {s,t,u,v}")
    terms = {}
    inferred = None
    for sign, term in _tokenize_terms(text):
        coef, expo = _parse_term(term, BI_VARS)
        if coef == 0:
            continue
        quad = (
            expo.get("s", 0),
            expo.get("t", 0),
            expo.get("u", 0),
            expo.get("v", 0),
        )
        bd = (quad[0] + quad[1], quad[2] + quad[3])
        if inferred is None:
            inferred = bd
        elif inferred != bd:
            raise ValueError(f"terms of mixed bidegrees {inferred} and {bd}")
        terms[quad] = terms.get(quad, Fraction(0)) + sign * coef
    if inferred is None:
        inferred = bidegree if bidegree is not None else (0, 0)
    if bidegree is not None and tuple(bidegree) != inferred:
        raise ValueError(f"expected bidegree {bidegree}, parsed {inferred}")
    return BiForm(inferred, terms)


def parse_surfform(text, degree=None):
    """Parse the canonical text grammar into a SurfForm."""
    has_bi, has_surf = _detect_alphabet(text)
    if has_bi:
        raise ValueError("expected variables from {X,Y,Z,W}")
    terms = {}
    inferred = None
    for sign, term in _tokenize_terms(text):
        coef, expo = _parse_term(term, SURF_VARS)
        if coef == 0:
            continue
        quad = (
            expo.get("X", 0),
            expo.get("Y", 0),
            expo.get("Z", 0),
            expo.get("W", 0),
        )
        d = sum(quad)
        if inferred is None:
            inferred = d
        elif inferred != d:
            raise ValueError(f"terms of mixed degrees {inferred} and {d}")
        terms[quad] = terms.get(quad, Fraction(0)) + sign * coef
    if inferred is None:
        inferred = degree if degree is not None else 0
    if degree is not None and degree != inferred:
        raise ValueError(f"expected degree {degree}, parsed {inferred}")
    return SurfForm(inferred, terms)
