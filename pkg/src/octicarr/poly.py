"""Sparse multivariate polynomials with exact Scalar coefficients.

Terms are stored in a dict keyed by exponent tuples; zero coefficients are
never stored.  The canonical term order is graded lexicographic with the
first variable largest, which fixes serialization.
"""
from __future__ import annotations

from fractions import Fraction

from .scalar import FieldContext, QQ, Scalar, ScalarError


class PolyError(ValueError):
    pass


def _grlex_key(e: tuple) -> tuple:
    return (sum(e), e)


class Poly:
    __slots__ = ("ctx", "nvars", "terms")

    def __init__(self, ctx: FieldContext, nvars: int, terms: dict | None = None):
        self.ctx = ctx
        self.nvars = nvars
        self.terms = terms if terms is not None else {}

    # -- constructors ----------------------------------------------------------

    @staticmethod
    def zero(ctx: FieldContext, nvars: int) -> "Poly":
        return Poly(ctx, nvars, {})

    @staticmethod
    def const(ctx: FieldContext, nvars: int, value) -> "Poly":
        c = ctx.coerce(value)
        if c.is_zero():
            return Poly(ctx, nvars, {})
        return Poly(ctx, nvars, {(0,) * nvars: c})

    @staticmethod
    def variable(ctx: FieldContext, nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return Poly(ctx, nvars, {tuple(e): ctx.one()})

    def _coerce_other(self, other):
        if isinstance(other, Poly):
            if other.ctx != self.ctx or other.nvars != self.nvars:
                raise PolyError("polynomial ring mismatch")
            return other
        if isinstance(other, (int, Fraction, Scalar)):
            return Poly.const(self.ctx, self.nvars, other)
        return None

    # -- queries ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def constant_coefficient(self) -> Scalar:
        return self.terms.get((0,) * self.nvars, self.ctx.zero())

    def leading(self) -> tuple[tuple, Scalar]:
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def sorted_terms(self) -> list[tuple[tuple, Scalar]]:
        return sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def variables_used(self) -> set[int]:
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(i)
        return used

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other):
        o = self._coerce_other(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in o.terms.items():
            s = terms.get(e)
            s = c if s is None else s + c
            if s.is_zero():
                terms.pop(e, None)
            else:
                terms[e] = s
        return Poly(self.ctx, self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ctx, self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce_other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce_other(other)
        if o is None:
            return NotImplemented
        if not self.terms or not o.terms:
            return Poly(self.ctx, self.nvars, {})
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                s = terms.get(e)
                s = c if s is None else s + c
                if s.is_zero():
                    terms.pop(e, None)
                else:
                    terms[e] = s
        return Poly(self.ctx, self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise PolyError("negative power")
        out = Poly.const(self.ctx, self.nvars, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce_other(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash((self.ctx, self.nvars, frozenset(self.terms.items())))

    def scale(self, c) -> "Poly":
        c = self.ctx.coerce(c)
        if c.is_zero():
            return Poly(self.ctx, self.nvars, {})
        return Poly(self.ctx, self.nvars, {e: v * c for e, v in self.terms.items()})

    # -- calculus / evaluation ----------------------------------------------------

    def derivative(self, i: int) -> "Poly":
        terms = {}
        for e, c in self.terms.items():
            k = e[i]
            if k == 0:
                continue
            e2 = list(e)
            e2[i] = k - 1
            terms[tuple(e2)] = c * k
        return Poly(self.ctx, self.nvars, terms)

    def eval(self, point: list) -> Scalar:
        """Evaluate at a full point of Scalars (or ints)."""
        vals = [self.ctx.coerce(v) for v in point]
        out = self.ctx.zero()
        for e, c in self.terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    t = t * vals[i] ** k
            out = out + t
        return out

    def subs_polys(self, images: list["Poly"]) -> "Poly":
        """Substitute variable i by images[i] (all in a common target ring)."""
        tgt = images[0]
        out = Poly.zero(tgt.ctx, tgt.nvars)
        for e, c in self.terms.items():
            t = Poly.const(tgt.ctx, tgt.nvars, c)
            for i, k in enumerate(e):
                if k:
                    t = t * images[i] ** k
            out = out + t
        return out

    def eval_partial(self, assignment: dict[int, Scalar]) -> "Poly":
        """Substitute scalars for a subset of the variables."""
        out_terms: dict = {}
        for e, c in self.terms.items():
            for i, v in assignment.items():
                k = e[i]
                if k:
                    c = c * v ** k
            if c.is_zero():
                continue
            e2 = tuple(0 if i in assignment else k for i, k in enumerate(e))
            s = out_terms.get(e2)
            s = c if s is None else s + c
            if s.is_zero():
                out_terms.pop(e2, None)
            else:
                out_terms[e2] = s
        return Poly(self.ctx, self.nvars, out_terms)

    # -- exact division / gcd -------------------------------------------------------

    def exact_div(self, other: "Poly") -> "Poly":
        """Quotient self/other when the division is exact; PolyError otherwise."""
        o = self._coerce_other(other)
        if o is None or o.is_zero():
            raise PolyError("division by zero polynomial")
        if self.is_zero():
            return Poly(self.ctx, self.nvars, {})
        rem = Poly(self.ctx, self.nvars, dict(self.terms))
        quot: dict = {}
        oe, oc = o.leading()
        oc_inv = oc.inverse()
        while not rem.is_zero():
            re, rc = rem.leading()
            qe = tuple(a - b for a, b in zip(re, oe))
            if any(k < 0 for k in qe):
                raise PolyError("division is not exact")
            qc = rc * oc_inv
            quot[qe] = qc
            rem = rem - Poly(self.ctx, self.nvars, {qe: qc}) * o
        return Poly(self.ctx, self.nvars, quot)

    def divides(self, other: "Poly") -> bool:
        try:
            other.exact_div(self)
            return True
        except PolyError:
            return False

    def monomial_content(self) -> tuple:
        """Componentwise-min exponent over the terms."""
        if self.is_zero():
            return (0,) * self.nvars
        its = iter(self.terms)
        m = list(next(its))
        for e in its:
            for i, k in enumerate(e):
                if k < m[i]:
                    m[i] = k
        return tuple(m)

    def primitive_part(self) -> "Poly":
        """Strip monomial content and rational content, normalize the leading sign."""
        if self.is_zero():
            return self
        m = self.monomial_content()
        terms = {tuple(a - b for a, b in zip(e, m)): c for e, c in self.terms.items()}
        p = Poly(self.ctx, self.nvars, terms)
        if self.ctx.kind == "Fp":
            _, lc = p.leading()
            return p.scale(lc.inverse())
        nums, dens = [], []
        for c in terms.values():
            nums.append(c.a.numerator)
            dens.append(c.a.denominator)
            if c.b is not None:
                nums.append(c.b.numerator)
                dens.append(c.b.denominator)
        from math import gcd, lcm
        g = 0
        for n in nums:
            g = gcd(g, n)
        l = 1
        for d in dens:
            l = lcm(l, d)
        scale = Fraction(l, g if g else 1)
        p = p.scale(scale)
        _, lc = p.leading()
        lead = lc.a if lc.a != 0 else lc.b
        if lead < 0:
            p = p.scale(-1)
        return p

    # -- serialization ----------------------------------------------------------------

    def to_text(self, names: list[str]) -> str:
        """Human/parser-readable form, e.g. ``A0*A1 + 2*A2^2 - 1``."""
        if self.is_zero():
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                (names[i] if k == 1 else f"{names[i]}^{k}")
                for i, k in enumerate(e) if k)
            from .scalar import serialize_scalar
            cs = serialize_scalar(c)
            negative = cs.startswith("-")
            body = cs[1:] if negative else cs
            if "+" in body or ("-" in body[1:]) or " " in body:
                body = f"({cs})"
                negative = False
            if mono:
                part = mono if body == "1" else f"{body}*{mono}"
            else:
                part = body
            if not pieces:
                pieces.append(("-" if negative else "") + part)
            else:
                pieces.append(("- " if negative else "+ ") + part)
        return " ".join(pieces)

    def __repr__(self):
        names = [f"v{i}" for i in range(self.nvars)]
        return f"Poly({self.to_text(names)})"


def _gcd_normalize(p: Poly) -> Poly:
    """Unit-normalize: strip rational content and fix the leading sign,
    keeping any monomial factor."""
    if p.is_zero() or p.ctx.kind == "Fp":
        if p.ctx.kind == "Fp" and not p.is_zero():
            _, lc = p.leading()
            return p.scale(lc.inverse())
        return p
    from math import gcd, lcm
    g, l = 0, 1
    for c in p.terms.values():
        for x in ((c.a,) if c.b is None else (c.a, c.b)):
            if x:
                g = gcd(g, x.numerator)
                l = lcm(l, x.denominator)
    out = p.scale(Fraction(l, g)) if g else p
    _, lc = out.leading()
    lead = lc.a if lc.a != 0 else lc.b
    if lead is not None and lead < 0:
        out = out.scale(-1)
    return out


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """GCD of multivariate polynomials over a field, normalized up to units.

    Common monomial factors are split off first; the rest is a recursive
    primitive PRS on the last variable actually used.  Adequate for the small
    parameter polynomials that occur in symmetry computations.
    """
    if f.is_zero():
        return _gcd_normalize(g)
    if g.is_zero():
        return _gcd_normalize(f)
    mf, mg = f.monomial_content(), g.monomial_content()
    common = tuple(min(a, b) for a, b in zip(mf, mg))
    if any(mf) or any(mg):
        f = Poly(f.ctx, f.nvars,
                 {tuple(a - b for a, b in zip(e, mf)): c for e, c in f.terms.items()})
        g = Poly(g.ctx, g.nvars,
                 {tuple(a - b for a, b in zip(e, mg)): c for e, c in g.terms.items()})
        core = poly_gcd(f, g)
        return _gcd_normalize(core * Poly(f.ctx, f.nvars, {common: f.ctx.one()}))
    used = f.variables_used() | g.variables_used()
    if not used:
        return Poly.const(f.ctx, f.nvars, 1)
    v = max(used)

    def to_univ(p: Poly) -> dict[int, Poly]:
        coeffs: dict[int, Poly] = {}
        for e, c in p.terms.items():
            k = e[v]
            e2 = list(e)
            e2[v] = 0
            rest = coeffs.setdefault(k, Poly.zero(p.ctx, p.nvars))
            coeffs[k] = rest + Poly(p.ctx, p.nvars, {tuple(e2): c})
        return coeffs

    def from_univ(coeffs: dict[int, Poly]) -> Poly:
        out = Poly.zero(f.ctx, f.nvars)
        for k, c in coeffs.items():
            e = [0] * f.nvars
            e[v] = k
            out = out + c * Poly(f.ctx, f.nvars, {tuple(e): f.ctx.one()})
        return out

    def content(coeffs: dict[int, Poly]) -> Poly:
        c = Poly.zero(f.ctx, f.nvars)
        for p in coeffs.values():
            c = poly_gcd(c, p)
        return c

    def prim(coeffs: dict[int, Poly]) -> dict[int, Poly]:
        c = content(coeffs)
        if c.is_constant():
            return coeffs
        return {k: p.exact_div(c) for k, p in coeffs.items()}

    fu, gu = to_univ(f), to_univ(g)
    cont = poly_gcd(content(fu), content(gu))
    a, b = prim(fu), prim(gu)
    while True:
        if not b:
            break
        da, db = max(a), max(b)
        if da < db:
            a, b = b, a
            da, db = db, da
        # pseudo-remainder of a by b in the variable v
        lc_b = b[db]
        r = dict(a)
        for _ in range(da - db + 1):
            if not r:
                break
            dr = max(r)
            if dr < db:
                break
            lc_r = r[dr]
            new: dict[int, Poly] = {}
            for k, c in r.items():
                new[k] = c * lc_b
            for k, c in b.items():
                kk = k + dr - db
                cur = new.get(kk, Poly.zero(f.ctx, f.nvars))
                cur = cur - c * lc_r
                if cur.is_zero():
                    new.pop(kk, None)
                else:
                    new[kk] = cur
            new.pop(dr, None)
            r = new
        if not r:
            a = b
            break
        a, b = b, prim(r)
    core = from_univ(prim(a))
    return _gcd_normalize(core * cont)
