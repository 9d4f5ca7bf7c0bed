"""Concrete eight-plane arrangements: incidence tables, singularity profiles,
Euler characteristics and Hodge numbers of the associated double covers.

An Arrangement holds eight linear forms with Scalar coefficients; an
ArrangementFamily holds forms whose coefficients are polynomials in the
parameters A0.. and specializes to Arrangements.

The deformation number h^{1,2} is the dimension of the degree-8 piece of the
equisingular ideal modulo the Jacobian ideal.  Both graded pieces live inside
the 165-dimensional space of degree-8 forms in x, y, z, t, so the computation
is finite linear algebra: the annihilator of the degree-8 piece of the k-th
power of a stratum's plane ideal is spanned by the order-(k-1) derivative
functionals at the stratum (restricted to the line for one-dimensional
strata), and the equisingular piece is cut out by the functionals in those
spans that also kill the Jacobian piece.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import gcd, lcm
import random

from . import incidence as inc
from .linalg import BareissReducer, Matrix, RowReducer, det, kernel_basis, left_kernel_basis
from .poly import Poly
from .scalar import FieldContext, Scalar


class GeometryError(ValueError):
    pass


class NonGenericSpecialization(GeometryError):
    """Specialized parameters change the incidence table of the family."""


class BudgetExhausted(GeometryError):
    pass


PARAM_NAMES = [f"A{i}" for i in range(10)]
COORD_NAMES = ["x", "y", "z", "t"]


@dataclass
class Arrangement:
    """Eight planes with exact Scalar coefficient rows."""

    ctx: FieldContext
    rows: list[list[Scalar]]  # 8 x 4
    params: list | None = None  # parameter values if specialized from a family

    def __post_init__(self):
        if len(self.rows) != 8 or any(len(r) != 4 for r in self.rows):
            raise GeometryError("an arrangement needs eight rows of four coefficients")

    def matrix(self) -> Matrix:
        return Matrix(self.rows)

    def form_poly(self, i: int) -> Poly:
        """Plane i (1-based) as a linear Poly in x, y, z, t."""
        p = Poly.zero(self.ctx, 4)
        for j, c in enumerate(self.rows[i - 1]):
            if not c.is_zero():
                p = p + Poly.variable(self.ctx, 4, j).scale(c)
        return p

    def octic_poly(self) -> Poly:
        f = Poly.const(self.ctx, 4, 1)
        for i in range(1, 9):
            f = f * self.form_poly(i)
        return f

    def normalized_integral(self) -> "Arrangement":
        """Scale each row so entries have denominator one (projectively trivial)."""
        if self.ctx.kind == "Fp":
            return self
        rows = []
        for row in self.rows:
            den = 1
            for c in row:
                den = lcm(den, c.a.denominator)
                if c.b is not None:
                    den = lcm(den, c.b.denominator)
            rows.append([c * den for c in row])
        return Arrangement(self.ctx, rows)

    def permuted(self, g: inc.Permutation) -> "Arrangement":
        """Relabel planes: the plane labeled g(i) of the result is plane i."""
        rows: list = [None] * 8
        for i in range(8):
            rows[g[i]] = self.rows[i]
        return Arrangement(self.ctx, rows)


@dataclass
class ArrangementFamily:
    """Eight planes whose coefficients are polynomials in parameters A0..A{k-1}."""

    ctx: FieldContext
    nparams: int
    rows: list[list[Poly]]  # 8 x 4, entries in ctx[A0..]

    def __post_init__(self):
        for r in self.rows:
            if all(p.is_zero() for p in r):
                raise GeometryError("a family form is identically zero")

    def matrix(self) -> Matrix:
        return Matrix(self.rows)

    def specialize(self, params: list) -> Arrangement:
        vals = [self.ctx.coerce(v) for v in params]
        if len(vals) != max(self.nparams, 0):
            raise GeometryError(f"expected {self.nparams} parameters, got {len(vals)}")
        rows = [[p.eval(vals) for p in row] for row in self.rows]
        return Arrangement(self.ctx, rows)

    def minor_polys(self) -> list[Poly]:
        m = self.matrix()
        return [det([m.rows[i - 1] for i in q]) for q in inc.QUADS]

    def generic_table(self) -> inc.Table:
        """Quadruples whose minors vanish identically in the parameters."""
        return tuple(r for r, p in enumerate(self.minor_polys()) if p.is_zero())


def incidence_table_of(arr: Arrangement) -> inc.Table:
    """Quadruples of planes whose 4x4 coefficient minor vanishes."""
    rows = arr.rows
    table = []
    for r, q in enumerate(inc.QUADS):
        if det([rows[i - 1] for i in q]).is_zero():
            table.append(r)
    return tuple(table)


def is_octic_arrangement(arr: Arrangement) -> tuple[bool, list[str]]:
    """Check the defining conditions directly by rank computations.

    No six planes may share a point (every 6-subset has rank 4) and no four
    planes may share a line (every 4-subset has rank at least 3); forms must
    be nonzero and pairwise non-proportional.
    """
    violations: list[str] = []
    rows = arr.rows
    for i in range(8):
        if all(c.is_zero() for c in rows[i]):
            violations.append(f"plane {i + 1} is zero")
    for i, j in combinations(range(8), 2):
        if _rank_of(rows, (i, j)) < 2:
            violations.append(f"planes {i + 1},{j + 1} proportional")
    for sub in combinations(range(8), 4):
        if _rank_of(rows, sub) <= 2:
            violations.append(
                "planes " + ",".join(str(i + 1) for i in sub) + " share a line")
    for sub in combinations(range(8), 6):
        if _rank_of(rows, sub) <= 3:
            violations.append(
                "planes " + ",".join(str(i + 1) for i in sub) + " share a point")
    return (not violations), violations


def _rank_of(rows, idx) -> int:
    red = RowReducer(4)
    for i in idx:
        red.add(rows[i])
    return red.rank


@dataclass
class SingularityProfile:
    """Singular strata of the arrangement, each a sorted tuple of plane indices."""

    p3: list[tuple]
    p4_0: list[tuple]
    p4_1: list[tuple]
    p5_0: list[tuple]
    p5_1: list[tuple]
    p5_2: list[tuple]
    l2: list[tuple]
    l3: list[tuple]

    @property
    def counts(self) -> dict[str, int]:
        return {"p3": len(self.p3), "p4_0": len(self.p4_0), "p4_1": len(self.p4_1),
                "p5_0": len(self.p5_0), "p5_1": len(self.p5_1), "p5_2": len(self.p5_2),
                "l2": len(self.l2), "l3": len(self.l3)}

    def count_tuple(self) -> tuple[int, ...]:
        """(p3, p4_0, p4_1, p5_0, p5_1, p5_2, l3)."""
        return (len(self.p3), len(self.p4_0), len(self.p4_1), len(self.p5_0),
                len(self.p5_1), len(self.p5_2), len(self.l3))

    def point_strata(self):
        for group in (self.p3, self.p4_0, self.p4_1, self.p5_0, self.p5_1, self.p5_2):
            yield from group

    def line_strata(self):
        yield from self.l2
        yield from self.l3


def singularities(table: inc.Table) -> SingularityProfile:
    """Combinatorial singularity profile read off the incidence table.

    Fivefold points are quintuples with all contained quadruples present;
    fourfold points the table quadruples inside no fivefold point; triple
    lines the triples with all containing quadruples present; triple points
    the triples inside no table quadruple; double lines the remaining pairs.
    Point subtypes count incident triple lines.
    """
    tset = set(table)
    fives = [inc.QUINTS[q] for q in inc.derive_fivefold_points(table)]
    triple_lines = [inc.TRIPLES[t] for t in inc.derive_triple_lines(table)]
    fours = [inc.QUADS[r] for r in table
             if not any(set(inc.QUADS[r]) <= set(f) for f in fives)]
    triple_pts = [t for t in inc.TRIPLES
                  if not any(set(t) <= set(inc.QUADS[r]) for r in tset)]
    line_pairs = {p for t in triple_lines for p in combinations(t, 2)}
    doubles = [p for p in inc.PAIRS if p not in line_pairs]

    def n_lines(pt) -> int:
        return sum(1 for t in triple_lines if set(t) <= set(pt))

    p4_0 = [q for q in fours if n_lines(q) == 0]
    p4_1 = [q for q in fours if n_lines(q) == 1]
    p5 = {0: [], 1: [], 2: []}
    for f in fives:
        p5[n_lines(f)].append(f)
    return SingularityProfile(triple_pts, p4_0, p4_1, p5[0], p5[1], p5[2],
                              doubles, triple_lines)


def euler_characteristic(prof: SingularityProfile) -> int:
    c = prof.counts
    return (40 + 4 * c["p4_0"] + 3 * c["p4_1"] + 16 * c["p5_0"]
            + 18 * c["p5_1"] + 20 * c["p5_2"] + c["l3"])


@dataclass
class InvariantRecord:
    counts: tuple[int, ...]
    h12: int
    h11: int
    chi: int


# ---------------------------------------------------------------------------
# Hodge numbers via degree-8 graded pieces
# ---------------------------------------------------------------------------

DEG8_MONOMIALS: list[tuple[int, int, int, int]] = [
    (a, b, c, 8 - a - b - c)
    for a in range(9) for b in range(9 - a) for c in range(9 - a - b)]
_MONO_INDEX = {m: i for i, m in enumerate(DEG8_MONOMIALS)}
N8 = len(DEG8_MONOMIALS)  # 165

_DERIV_ORDERS = {k: [e + (k - 1 - sum(e),)
                     for e in ((a, b, c) for a in range(k) for b in range(k - a)
                               for c in range(k - a - b))]
                 for k in (3, 4, 5)}


def _falling(a: int, b: int) -> int:
    out = 1
    for i in range(b):
        out *= a - i
    return out


def _deriv_factor(alpha, beta) -> int:
    """Scalar factor of d^beta applied to x^alpha (0 when beta exceeds alpha)."""
    f = 1
    for a, b in zip(alpha, beta):
        if b > a:
            return 0
        f *= _falling(a, b)
    return f


def _exponents_of_degree(d: int):
    for a in range(d + 1):
        for b in range(d + 1 - a):
            for c in range(d + 1 - a - b):
                yield (a, b, c, d - a - b - c)


class _RationalOps:
    """Plain-int model of Q for integer-valued inputs."""

    width = 1
    zero = 0
    one = 1

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def scale_int(a, n):
        return a * n

    @staticmethod
    def is_zero(a):
        return a == 0

    @staticmethod
    def from_scalar(s: Scalar):
        return int(s.a)

    @staticmethod
    def to_scalar(a, ctx):
        return ctx.coerce(a)

    @staticmethod
    def realify(a):
        return ((a,),)


class _QuadOps:
    """Int-pair model (a, b) = a + b*sqrt(d) of a quadratic ring."""

    width = 2
    zero = (0, 0)
    one = (1, 0)

    def __init__(self, d: int):
        self.d = d

    @staticmethod
    def add(a, b):
        return (a[0] + b[0], a[1] + b[1])

    def mul(self, a, b):
        return (a[0] * b[0] + self.d * a[1] * b[1], a[0] * b[1] + a[1] * b[0])

    @staticmethod
    def scale_int(a, n):
        return (a[0] * n, a[1] * n)

    @staticmethod
    def is_zero(a):
        return a[0] == 0 and a[1] == 0

    @staticmethod
    def from_scalar(s: Scalar):
        return (int(s.a), int(s.b))

    @staticmethod
    def to_scalar(a, ctx):
        return Scalar(ctx, Fraction(a[0]), Fraction(a[1]))

    def realify(self, a):
        # multiplication-by-a matrix on the basis (1, sqrt(d)), row-wise
        return ((a[0], a[1]), (self.d * a[1], a[0]))


def _ops_for(ctx: FieldContext):
    return _RationalOps() if ctx.kind == "Q" else _QuadOps(ctx.d)


def _point_of_planes(arr: Arrangement, planes) -> list[Scalar]:
    ker = kernel_basis([arr.rows[i - 1] for i in planes])
    if len(ker) != 1:
        raise GeometryError(f"planes {planes} do not meet in a single point")
    return [v if isinstance(v, Scalar) else arr.ctx.coerce(v) for v in ker[0]]


def _line_of_planes(arr: Arrangement, planes) -> tuple[list[Scalar], list[Scalar]]:
    ker = kernel_basis([arr.rows[i - 1] for i in planes])
    if len(ker) != 2:
        raise GeometryError(f"planes {planes} do not meet in a line")
    coerce = arr.ctx.coerce
    return ([v if isinstance(v, Scalar) else coerce(v) for v in ker[0]],
            [v if isinstance(v, Scalar) else coerce(v) for v in ker[1]])


def _clear_scalar_vec(vec: list[Scalar]) -> list[Scalar]:
    den = 1
    for c in vec:
        den = lcm(den, c.a.denominator)
        if c.b is not None:
            den = lcm(den, c.b.denominator)
    return [c * den for c in vec]


def _monomial_powers_at(point: list, ops) -> dict:
    """gamma -> point^gamma for every exponent of total degree <= 8."""
    cache = {(0, 0, 0, 0): ops.one}
    for d in range(1, 9):
        for e in _exponents_of_degree(d):
            i = next(k for k in range(4) if e[k])
            prev = list(e)
            prev[i] -= 1
            cache[e] = ops.mul(cache[tuple(prev)], point[i])
    return cache


def _line_expansions(p: list, q: list, ops) -> dict:
    """gamma -> coefficients of prod_i (s*p_i + u*q_i)^gamma_i in powers of s."""
    cache = {(0, 0, 0, 0): [ops.one]}
    zero = ops.zero
    for d in range(1, 9):
        for e in _exponents_of_degree(d):
            i = next(k for k in range(4) if e[k])
            prev = list(e)
            prev[i] -= 1
            base = cache[tuple(prev)]
            out = [zero] * (len(base) + 1)
            pi, qi = p[i], q[i]
            for r, c in enumerate(base):
                if ops.is_zero(c):
                    continue
                out[r + 1] = ops.add(out[r + 1], ops.mul(c, pi))
                out[r] = ops.add(out[r], ops.mul(c, qi))
            cache[e] = out
    return cache


def _transverse_directions(p: list[Scalar], q: list[Scalar]) -> tuple[int, int]:
    """Two coordinate directions completing the span of a line to all of space."""
    ctx = p[0].ctx
    red = RowReducer(4)
    red.add(p)
    red.add(q)
    dirs = []
    for i in range(4):
        e = [ctx.zero()] * 4
        e[i] = ctx.one()
        if red.add(e):
            dirs.append(i)
        if len(dirs) == 2:
            return dirs[0], dirs[1]
    raise GeometryError("line basis is degenerate")


def _point_functional_rows(arr: Arrangement, planes, ops):
    """Order-(k-1) derivative functionals at a k-fold point, on all monomials."""
    k = len(planes)
    point = [ops.from_scalar(s) for s in _clear_scalar_vec(_point_of_planes(arr, planes))]
    powers = _monomial_powers_at(point, ops)
    zero = ops.zero
    rows = []
    for beta in _DERIV_ORDERS[k]:
        row = []
        for alpha in DEG8_MONOMIALS:
            f = _deriv_factor(alpha, beta)
            if f == 0:
                row.append(zero)
            else:
                row.append(ops.scale_int(
                    powers[tuple(a - b for a, b in zip(alpha, beta))], f))
        rows.append(row)
    return rows


def _line_functional_rows(arr: Arrangement, planes, ops):
    """Jet functionals (restriction coefficients of transverse derivatives)
    along a double (k=2) or triple (k=3) line."""
    k = 2 if len(planes) == 2 else 3
    ps, qs = _line_of_planes(arr, planes)
    u1, u2 = _transverse_directions(ps, qs)
    p = [ops.from_scalar(s) for s in _clear_scalar_vec(ps)]
    q = [ops.from_scalar(s) for s in _clear_scalar_vec(qs)]
    expansions = _line_expansions(p, q, ops)
    betas: list[tuple] = [(0, 0, 0, 0)]
    for reps in range(1, k):
        for dirs in combinations_with_replacement((u1, u2), reps):
            beta = [0, 0, 0, 0]
            for d in dirs:
                beta[d] += 1
            betas.append(tuple(beta))
    zero = ops.zero
    rows = []
    for beta in betas:
        deg = 8 - sum(beta)
        for r in range(deg + 1):
            row = []
            for alpha in DEG8_MONOMIALS:
                f = _deriv_factor(alpha, beta)
                if f == 0:
                    row.append(zero)
                    continue
                coeffs = expansions[tuple(a - b for a, b in zip(alpha, beta))]
                row.append(ops.scale_int(coeffs[r], f) if r < len(coeffs) else zero)
            rows.append(row)
    return rows


def _realified(row: list, ops) -> list[list[int]]:
    """Integer rows over Q whose joint rank is width * rank over the field."""
    blocks = [ops.realify(a) for a in row]
    return [[b[i][j] for b in blocks for j in range(ops.width)]
            for i in range(ops.width)]


def hodge_numbers(arr: Arrangement, table: inc.Table | None = None) -> tuple[int, int]:
    """(h12, h11) of the double cover's resolution, by exact linear algebra.

    h12 is the dimension of the degree-8 equisingular piece modulo the
    degree-8 Jacobian piece; h11 follows from the Euler characteristic.
    """
    if arr.ctx.kind == "Fp":
        raise GeometryError("Hodge numbers are computed in characteristic zero only")
    arr = arr.normalized_integral()
    derived = incidence_table_of(arr)
    if table is not None and derived != table:
        raise NonGenericSpecialization(
            "arrangement table differs from the expected generic table")
    table = derived
    ctx = arr.ctx
    ops = _ops_for(ctx)
    width = ops.width
    prof = singularities(table)

    F = arr.octic_poly()
    # per Jacobian product: sparse (monomial index, value) pairs and a dense row
    jf_terms = []
    jf_rows_field = []
    for j in range(4):
        dF = F.derivative(j)
        for i in range(4):
            g = dF * Poly.variable(ctx, 4, i)
            terms = []
            row = [ops.zero] * N8
            for e, c in g.terms.items():
                val = ops.from_scalar(c)
                terms.append((_MONO_INDEX[e], val))
                row[_MONO_INDEX[e]] = val
            jf_terms.append(terms)
            jf_rows_field.append(row)

    jf_red = BareissReducer(width * N8)
    for row in jf_rows_field:
        for real in _realified(row, ops):
            jf_red.add(real)
    r_j, rem = divmod(jf_red.rank, width)
    if rem:
        raise GeometryError("realified Jacobian rank is not a field-rank multiple")

    big = BareissReducer(width * N8)
    cap = width * (N8 - r_j)
    strata = list(prof.line_strata()) + list(prof.point_strata())
    for planes in strata:
        if big.rank >= cap:
            break
        if planes in prof.l2 or planes in prof.l3:
            rows_full = _line_functional_rows(arr, planes, ops)
        else:
            rows_full = _point_functional_rows(arr, planes, ops)
        on_jf = [[_apply_scaled(row, terms, ops) for terms in jf_terms]
                 for row in rows_full]
        for combo in _ops_left_kernel(on_jf, ops):
            vec = None
            for c, row in zip(combo, rows_full):
                if ops.is_zero(c):
                    continue
                part = [ops.mul(c, x) for x in row]
                vec = part if vec is None else [ops.add(a, b) for a, b in zip(vec, part)]
            if vec is None:
                continue
            for real in _realified(vec, ops):
                big.add(real)
    dim_eq, rem = divmod(width * N8 - big.rank, width)
    if rem:
        raise GeometryError("realified equisingular rank is not a field-rank multiple")
    h12 = dim_eq - r_j
    chi = euler_characteristic(prof)
    return h12, chi // 2 + h12


def _apply_scaled(row: list, terms: list, ops):
    out = ops.zero
    add, mul = ops.add, ops.mul
    for idx, val in terms:
        out = add(out, mul(row[idx], val))
    return out


def _ops_left_kernel(on_jf: list[list], ops) -> list[list]:
    """Left kernel of a small matrix of field-element models."""
    if not on_jf:
        return []
    if ops.width == 1:
        return left_kernel_basis(on_jf)
    # quadratic ring: transpose, take the right kernel over Scalars
    ctx = FieldContext.quadratic(ops.d)
    t = [[ops.to_scalar(on_jf[i][c], ctx) for i in range(len(on_jf))]
         for c in range(len(on_jf[0]))]
    ker = kernel_basis(t)
    out = []
    for v in ker:
        vec = [x if isinstance(x, Scalar) else ctx.coerce(x) for x in v]
        vec = _clear_scalar_vec(vec)
        out.append([ops.from_scalar(x) for x in vec])
    return out


def arrangement_invariants(arr: Arrangement) -> InvariantRecord:
    table = incidence_table_of(arr)
    prof = singularities(table)
    chi = euler_characteristic(prof)
    h12, h11 = hodge_numbers(arr, table)
    return InvariantRecord(prof.count_tuple(), h12, h11, chi)


# ---------------------------------------------------------------------------
# Generic specialization of families
# ---------------------------------------------------------------------------

def generic_specialize(fam: ArrangementFamily, seed: int = 0,
                       max_tries: int = 200) -> Arrangement:
    """Draw small-height rational parameters until the family's generic table
    is realized exactly and the arrangement conditions hold."""
    if fam.nparams == 0:
        arr = fam.specialize([])
        ok, violations = is_octic_arrangement(arr)
        if not ok:
            raise GeometryError(f"parameter-free family is degenerate: {violations}")
        return arr
    minors = fam.minor_polys()
    generic = {r for r, p in enumerate(minors) if p.is_zero()}
    rnd = random.Random(seed)
    height = 5
    for attempt in range(max_tries):
        if attempt and attempt % 25 == 0:
            height *= 2
        vals = [Fraction(rnd.randint(-height, height)) for _ in range(fam.nparams)]
        coerced = [fam.ctx.coerce(v) for v in vals]
        if all(minors[r].eval(coerced).is_zero() == (r in generic) for r in range(70)):
            arr = fam.specialize(coerced)
            ok, _ = is_octic_arrangement(arr)
            if ok:
                arr.params = coerced
                return arr
    raise BudgetExhausted(
        f"no generic specialization found in {max_tries} draws (seed {seed})")
