"""Fibration reports for a concrete arrangement.

Five constructions are supported: Kummer fibrations from pairs of opposite
fourfold points, elliptic fibrations from fourfold and fivefold points and
from pairs of skew double lines, and K3 fibrations by double sextics (planes
through a double or triple line) and by double quadrics (pencils through two
skew lines).  Discriminants and J-invariants are kept in factored symbolic
form; expansion happens only inside verification helpers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from . import incidence as inc
from .geometry import Arrangement, GeometryError, SingularityProfile, singularities
from .linalg import RowReducer, det, kernel_basis
from .poly import Poly
from .scalar import FieldContext, Scalar


class FibrationError(ValueError):
    pass


class DegeneratePair(FibrationError):
    pass


class NotAPoint(FibrationError):
    pass


class NotSkew(FibrationError):
    pass


class Concurrent(FibrationError):
    pass


# ---------------------------------------------------------------------------
# Kummer fibrations
# ---------------------------------------------------------------------------

KODAIRA_BY_COUNT = {1: "I2", 2: "I4", 3: "I0*", 4: "I2*"}
EULER_BY_TYPE = {"I2": 2, "I4": 4, "I0*": 6, "I2*": 8}

SURFACE_CLASSES = {
    frozenset({("I0*", 2)}): "S1",
    frozenset({("I4", 2), ("I2", 2)}): "S2",
    frozenset({("I0*", 1), ("I2", 3)}): "S3",
    frozenset({("I2*", 1), ("I2", 2)}): "S4",
    frozenset({("I4", 1), ("I2", 4)}): "S5",
    frozenset({("I2", 6)}): "S6",
}


@dataclass
class PencilPosition:
    """A point of the base pencil: None means the member at infinity."""

    value: Scalar | None

    def __str__(self):
        return "inf" if self.value is None else str(self.value)

    def same(self, other: "PencilPosition") -> bool:
        if (self.value is None) or (other.value is None):
            return (self.value is None) and (other.value is None)
        return self.value == other.value


@dataclass
class KummerSurface:
    quadruple: tuple[int, int, int, int]
    fibers: list[tuple[str, PencilPosition, list[tuple[int, int]]]]
    # (Kodaira type, position, contributing plane pairs)

    @property
    def surface_class(self) -> str:
        counts: dict[str, int] = {}
        for typ, _, _ in self.fibers:
            counts[typ] = counts.get(typ, 0) + 1
        return SURFACE_CLASSES.get(frozenset(counts.items()), "??")

    @property
    def euler_sum(self) -> int:
        return sum(EULER_BY_TYPE[t] for t, _, _ in self.fibers)


@dataclass
class KummerReport:
    pair: tuple[tuple, tuple]
    surfaces: tuple[KummerSurface, KummerSurface]


def _intersection_point(arr: Arrangement, planes) -> list[Scalar]:
    ker = kernel_basis([arr.rows[i - 1] for i in planes])
    if len(ker) != 1:
        raise NotAPoint(f"planes {planes} do not meet in a single point")
    return [v if isinstance(v, Scalar) else arr.ctx.coerce(v) for v in ker[0]]


def _dot(row: list[Scalar], vec: list[Scalar]) -> Scalar:
    out = row[0].ctx.zero()
    for a, b in zip(row, vec):
        out = out + a * b
    return out


def kummer_reports(arr: Arrangement, table: inc.Table | None = None) -> list[KummerReport]:
    """One report per pair of opposite fourfold points in the table."""
    if table is None:
        from .geometry import incidence_table_of
        table = incidence_table_of(arr)
    reports = []
    for qa, qb in inc.disjoint_quadruple_pairs(table):
        try:
            reports.append(_kummer_for_pair(arr, qa, qb))
        except DegeneratePair:
            continue
    return reports


def _kummer_for_pair(arr: Arrangement, qa, qb) -> KummerReport:
    ctx = arr.ctx
    a_pt = _intersection_point(arr, qa)
    b_pt = _intersection_point(arr, qb)
    # pencil of planes through the line joining the two points
    pencil = kernel_basis([a_pt, b_pt])
    if len(pencil) != 2:
        raise DegeneratePair("the two fourfold points coincide")
    pencil = [[v if isinstance(v, Scalar) else ctx.coerce(v) for v in row]
              for row in pencil]

    def surface(quad, apex) -> KummerSurface:
        pairs = list(combinations(quad, 2))
        # second point on each intersection line, independent of the apex
        line_pts = []
        for u, v in pairs:
            ker = kernel_basis([arr.rows[u - 1], arr.rows[v - 1]])
            pt = None
            for cand in ker:
                cand = [x if isinstance(x, Scalar) else ctx.coerce(x) for x in cand]
                red = RowReducer(4)
                red.add(apex)
                if red.add(cand):
                    pt = cand
                    break
            if pt is None:
                raise DegeneratePair(f"line of planes {u},{v} degenerates")
            line_pts.append(pt)
        # pencil basis adapted so the member through the first line is infinity
        first = line_pts[0]
        c0, c1 = _dot(pencil[0], first), _dot(pencil[1], first)
        if c0.is_zero() and c1.is_zero():
            raise DegeneratePair("an intersection line equals the joining line")
        w1 = [c1 * x - c0 * y for x, y in zip(pencil[0], pencil[1])]
        w0 = pencil[0] if not c0.is_zero() else pencil[1]
        positions = []
        for pt in line_pts:
            den = _dot(w1, pt)
            num = _dot(w0, pt)
            if den.is_zero():
                if num.is_zero():
                    raise DegeneratePair("an intersection line equals the joining line")
                positions.append(PencilPosition(None))
            else:
                positions.append(PencilPosition(-num / den))
        groups: list[tuple[PencilPosition, list[int]]] = []
        for k, pos in enumerate(positions):
            for gpos, members in groups:
                if gpos.same(pos):
                    members.append(k)
                    break
            else:
                groups.append((pos, [k]))
        fibers = []
        for pos, members in groups:
            typ = KODAIRA_BY_COUNT[len(members)]
            fibers.append((typ, pos, [pairs[k] for k in members]))
        return KummerSurface(tuple(quad), fibers)

    s1 = surface(qa, a_pt)
    s2 = surface(qb, b_pt)
    return KummerReport((qa, qb), (s1, s2))


# ---------------------------------------------------------------------------
# Elliptic fibrations from points and skew lines
# ---------------------------------------------------------------------------

@dataclass
class FactoredForm:
    """constant * prod factors[i]^exps[i], factors as Polys."""

    constant: Scalar
    factors: list[tuple[Poly, int]]

    def expand(self) -> Poly:
        out = Poly.const(self.factors[0][0].ctx if self.factors else self.constant.ctx,
                         self.factors[0][0].nvars if self.factors else 1, self.constant)
        for f, k in self.factors:
            out = out * f ** k
        return out

    def eval(self, point: list[Scalar]) -> Scalar:
        out = self.constant
        for f, k in self.factors:
            out = out * f.eval(point) ** k
        return out


@dataclass
class EllipticReport:
    kind: str                      # "p4-point" | "p5-point" | "skew-lines"
    planes: tuple[int, ...]
    roots: list[FactoredForm]      # the three roots of the cubic model
    discriminant: FactoredForm
    j_numerator: FactoredForm      # J = j_numerator / j_denominator
    j_denominator: FactoredForm


def _complete_columns(ctx: FieldContext, fixed_cols: list[list[Scalar]]):
    """Complete given independent columns to an invertible 4x4 matrix."""
    red = RowReducer(4)
    cols = [list(c) for c in fixed_cols]
    for c in cols:
        if not red.add(c):
            raise FibrationError("dependent columns in frame completion")
    basis = []
    for i in range(4):
        e = [ctx.zero()] * 4
        e[i] = ctx.one()
        if red.add(e):
            basis.append(e)
    all_cols = basis + cols  # fixed columns go last
    return [[all_cols[j][i] for j in range(4)] for i in range(4)]


def elliptic_from_point(arr: Arrangement, point_planes) -> EllipticReport:
    """Cubic model, discriminant and J for the fibration by lines through a
    fourfold or fivefold point."""
    ctx = arr.ctx
    k = len(point_planes)
    if k not in (4, 5):
        raise NotAPoint("expected a fourfold or fivefold point")
    apex = _intersection_point(arr, point_planes)
    m = _complete_columns(ctx, [apex])
    new_rows = []
    for i in range(8):
        new_rows.append([_dot(arr.rows[i], [m[r][c] for r in range(4)])
                         for c in range(4)])
    incident = [i for i in range(8) if new_rows[i][3].is_zero()]
    others = [i for i in range(8) if i not in incident]
    if sorted(i + 1 for i in incident) != sorted(point_planes):
        raise NotAPoint("planes through the point do not match the given set")

    def tri(row) -> Poly:
        p = Poly.zero(ctx, 3)
        for j in range(3):
            if not row[j].is_zero():
                p = p + Poly.variable(ctx, 3, j).scale(row[j])
        return p

    f_in = [tri(new_rows[i]) for i in incident]
    f_out = []
    for i in others:
        g = new_rows[i][3]
        f_out.append(tri([c / g for c in new_rows[i][:3]] + [None]))
    prod_in = FactoredForm(ctx.one(), [(f, 1) for f in f_in])
    if k == 5:
        f6, f7, f8 = f_out
        roots = [FactoredForm(-ctx.one(), prod_in.factors + [(fm, 1)])
                 for fm in (f6, f7, f8)]
        diffs = [f7 - f8, f6 - f8, f6 - f7]
        disc = FactoredForm(ctx.coerce(16),
                            [(f, 6) for f in f_in] + [(d, 2) for d in diffs])
        n = (f6 * f6 + f7 * f7 + f8 * f8 - f6 * f7 - f6 * f8 - f7 * f8)
        jn = FactoredForm(ctx.coerce(4), [(n, 3)])
        jd = FactoredForm(ctx.coerce(27), [(d, 2) for d in diffs])
        return EllipticReport("p5-point", tuple(point_planes), roots, disc, jn, jd)
    f5, f6, f7, f8 = f_out
    roots = [
        FactoredForm(-ctx.one(), prod_in.factors + [(f5 - f7, 1), (f5 - f6, 1)]),
        FactoredForm(-ctx.one(), prod_in.factors + [(f5 - f8, 1), (f5 - f6, 1)]),
        FactoredForm(-ctx.one(), prod_in.factors + [(f5 - f8, 1), (f5 - f7, 1)]),
    ]
    diffs = [a - b for a, b in combinations((f5, f6, f7, f8), 2)]
    disc = FactoredForm(ctx.coerce(16),
                        [(f, 6) for f in f_in] + [(d, 2) for d in diffs])
    fs = (f5, f6, f7, f8)
    six = Poly.const(ctx, 3, 6)
    g = six * f5 * f6 * f7 * f8
    for a, b, c in combinations(fs, 3):
        g = g - a * b * c * (a + b + c)
    for a, b in combinations(fs, 2):
        g = g + a * a * b * b
    jn = FactoredForm(ctx.coerce(4), [(g, 3)])
    jd = FactoredForm(ctx.coerce(27), [(d, 2) for d in diffs])
    return EllipticReport("p4-point", tuple(point_planes), roots, disc, jn, jd)


def elliptic_from_skew_lines(arr: Arrangement, pair) -> EllipticReport:
    """Cubic model for the fibration by lines meeting two skew double lines.

    The two line parameters are kept independent: restrictions to the second
    line live in variables (u0, u1), to the first line in (v0, v1).
    """
    (i1, j1), (i2, j2) = pair
    ctx = arr.ctx
    four = [i1, j1, i2, j2]
    frame = [arr.rows[i - 1] for i in four]
    if det(frame).is_zero():
        raise NotSkew("the four planes are concurrent")
    # substitution matrix sending the frame rows to x, y, z, t
    inv = _invert4(frame, ctx)
    others = [i for i in range(1, 9) if i not in four]
    f_bin, g_bin = [], []
    for i in others:
        row = [_dot(arr.rows[i - 1], [inv[r][c] for r in range(4)]) for c in range(4)]
        # restriction to z=t=0 (the line of the second pair), vars (u0, u1)
        f = Poly.zero(ctx, 4)
        f = f + Poly.variable(ctx, 4, 0).scale(row[0]) + Poly.variable(ctx, 4, 1).scale(row[1])
        # restriction to x=y=0 (the line of the first pair), vars (v0, v1)
        g = Poly.zero(ctx, 4)
        g = g + Poly.variable(ctx, 4, 2).scale(row[2]) + Poly.variable(ctx, 4, 3).scale(row[3])
        f_bin.append(f)
        g_bin.append(g)

    def bracket(a, b) -> Poly:
        return f_bin[a] * g_bin[b] - f_bin[b] * g_bin[a]

    e1 = FactoredForm(ctx.one(), [(bracket(1, 3), 1), (bracket(0, 2), 1)])
    e2 = FactoredForm(ctx.one(), [(bracket(1, 2), 1), (bracket(0, 3), 1)])
    zero_root = FactoredForm(ctx.zero(), [])
    all_brackets = [bracket(a, b) for a, b in combinations(range(4), 2)]
    disc = FactoredForm(ctx.coerce(16), [(b, 2) for b in all_brackets])
    p1, p2 = e1.expand(), e2.expand()
    n = p1 * p1 + p2 * p2 - p1 * p2
    jn = FactoredForm(ctx.coerce(4), [(n, 3)])
    jd = FactoredForm(ctx.coerce(27), [(b, 2) for b in all_brackets])
    return EllipticReport("skew-lines", tuple(four), [zero_root, e1, e2],
                          disc, jn, jd)


def _invert4(rows, ctx: FieldContext):
    d = det(rows)
    if d.is_zero():
        raise FibrationError("singular frame")
    inv = [[None] * 4 for _ in range(4)]
    for i in range(4):
        for j in range(4):
            minor = [[rows[r][c] for c in range(4) if c != j]
                     for r in range(4) if r != i]
            v = det(minor) / d
            inv[j][i] = v if (i + j) % 2 == 0 else -v
    return inv


# ---------------------------------------------------------------------------
# K3 pencils
# ---------------------------------------------------------------------------

@dataclass
class SpecialFiber:
    kind: str                 # "two-coincide" | "four-concurrent"
    members: tuple[int, ...]  # plane indices involved
    values: list[Scalar]      # solved base values
    defining: Poly | None     # residual polynomial when roots are irrational


@dataclass
class K3PencilReport:
    kind: str                                  # "double-sextic" | "double-quadric"
    datum: tuple                               # line pair indices / substitution tag
    branch: list[Poly]                         # branch factors
    special: list[SpecialFiber] = field(default_factory=list)
    multiplicity: int = 1


def k3_sextic_pencil(arr: Arrangement, line: tuple[int, int]) -> K3PencilReport:
    """K3 fibration by the pencil of planes through the line of two planes.

    The six restricted branch lines are forms in (x, y, z) whose coefficients
    are linear in the pencil parameter s; coincidences and four-fold
    concurrences among them are located exactly.
    """
    i, j = line
    ctx = arr.ctx
    ri, rj = arr.rows[i - 1], arr.rows[j - 1]
    frame = _complete_rows(ctx, [ri, rj])
    inv = _invert4(frame, ctx)
    others = [k for k in range(1, 9) if k not in (i, j)]
    # restricted line k: coefficients (on x, y, z) are linear in s: row after
    # substitution, with t := s*z folded into the z-coefficient
    lines = []
    s = Poly.variable(ctx, 1, 0)
    for k in others:
        row = [_dot(arr.rows[k - 1], [inv[r][c] for r in range(4)]) for c in range(4)]
        a, b, c, d = row
        lines.append((Poly.const(ctx, 1, a), Poly.const(ctx, 1, b),
                      Poly.const(ctx, 1, c) + s.scale(d)))
    report = K3PencilReport("double-sextic", (i, j), list(lines))
    # coincidences of two restricted lines
    for (ka, la), (kb, lb) in combinations(zip(others, lines), 2):
        minors = [la[0] * lb[1] - la[1] * lb[0],
                  la[0] * lb[2] - la[2] * lb[0],
                  la[1] * lb[2] - la[2] * lb[1]]
        g = _univariate_gcd(minors)
        if g is None or g.is_constant():
            continue
        vals, residual = _roots_univariate(g, ctx)
        report.special.append(SpecialFiber("two-coincide", (ka, kb), vals, residual))
    # four restricted lines concurrent
    for quad in combinations(range(6), 4):
        rows3 = [lines[q] for q in quad]
        minors = []
        for drop in range(4):
            sub = [rows3[r] for r in range(4) if r != drop]
            minors.append(_det3_poly(sub))
        g = _univariate_gcd(minors)
        if g is None or g.is_constant():
            continue
        vals, residual = _roots_univariate(g, ctx)
        report.special.append(SpecialFiber(
            "four-concurrent", tuple(others[q] for q in quad), vals, residual))
    return report


def _complete_rows(ctx, fixed_rows):
    """Rows completing the given ones to an invertible matrix; the fixed rows
    are placed third and fourth (mapped to z and t)."""
    red = RowReducer(4)
    for r in fixed_rows:
        if not red.add(r):
            raise FibrationError("proportional planes do not span a line")
    extras = []
    for i in range(4):
        e = [ctx.zero()] * 4
        e[i] = ctx.one()
        if red.add(e):
            extras.append(e)
    return extras + [list(r) for r in fixed_rows]


def _det3_poly(rows):
    (a1, b1, c1), (a2, b2, c2), (a3, b3, c3) = rows
    return (a1 * (b2 * c3 - b3 * c2) - b1 * (a2 * c3 - a3 * c2)
            + c1 * (a2 * b3 - a3 * b2))


def _univariate_gcd(polys: list[Poly]) -> Poly | None:
    from .poly import poly_gcd
    nz = [p for p in polys if not p.is_zero()]
    if not nz:
        return None
    g = nz[0]
    for p in nz[1:]:
        g = poly_gcd(g, p)
        if g.is_constant():
            break
    return g


def _roots_univariate(g: Poly, ctx) -> tuple[list[Scalar], Poly | None]:
    """Roots of a univariate polynomial: linear and quadratic solved exactly,
    a higher-degree remainder is returned as the defining polynomial."""
    from .symmetry import _square_roots
    coeffs: dict[int, Scalar] = {e[0]: c for e, c in g.terms.items()}
    deg = max(coeffs) if coeffs else 0
    vals: list[Scalar] = []
    if 0 not in coeffs:
        vals.append(ctx.zero())
        coeffs = {k - min(coeffs): c for k, c in coeffs.items()}
        deg = max(coeffs)
    if deg == 1:
        vals.append(-coeffs.get(0, ctx.zero()) / coeffs[1])
        return vals, None
    if deg == 2:
        a = coeffs[2]
        b = coeffs.get(1, ctx.zero())
        c = coeffs.get(0, ctx.zero())
        disc = b * b - 4 * a * c
        roots = _square_roots(disc, ctx)
        if roots is None:
            return vals, g
        for r in roots:
            ext = r.ctx
            aa = ext.coerce(a.as_fraction()) if a.is_rational() and a.ctx != ext else a
            bb = ext.coerce(b.as_fraction()) if b.is_rational() and b.ctx != ext else b
            if aa.ctx != ext or bb.ctx != ext:
                return vals, g
            vals.append((-bb + r) / (2 * aa))
        return vals, None
    return vals, (g if deg > 0 else None)


def k3_quadric_pencils(arr: Arrangement, four_planes,
                       table: inc.Table | None = None) -> list[K3PencilReport]:
    """The three double-quadric pencils attached to four non-concurrent planes
    paired as (1,2),(3,4); multiplicity counts the triple-line choices."""
    ctx = arr.ctx
    rows = [arr.rows[i - 1] for i in four_planes]
    if det(rows).is_zero():
        raise Concurrent("the four planes meet in a point")
    inv = _invert4(rows, ctx)
    others = [i for i in range(1, 9) if i not in four_planes]
    new_rows = []
    for i in others:
        new_rows.append([_dot(arr.rows[i - 1], [inv[r][c] for r in range(4)])
                         for c in range(4)])
    if table is None:
        from .geometry import incidence_table_of
        table = incidence_table_of(arr)
    t3 = [inc.TRIPLES[t] for t in inc.derive_triple_lines(table)]

    def line_multiplicity(a, b) -> int:
        return 3 if any({a, b} <= set(t) for t in t3) else 1

    i1, j1, i2, j2 = four_planes
    mult = 3 * line_multiplicity(i1, j1) * line_multiplicity(i2, j2)

    # p0q0, p0q1, p1q0, lam*p1q1 and the two listed permutations
    p0 = Poly.variable(ctx, 5, 0)
    p1 = Poly.variable(ctx, 5, 1)
    q0 = Poly.variable(ctx, 5, 2)
    q1 = Poly.variable(ctx, 5, 3)
    lam = Poly.variable(ctx, 5, 4)
    subs_list = [
        ("x=p0q0 y=p0q1 z=p1q0 t=l*p1q1", [p0 * q0, p0 * q1, p1 * q0, lam * p1 * q1]),
        ("x=p0q0 y=p0q1 z=l*p1q1 t=p1q0", [p0 * q0, p0 * q1, lam * p1 * q1, p1 * q0]),
        ("x=p0q0 y=l*p1q1 z=p0q1 t=p1q0", [p0 * q0, lam * p1 * q1, p0 * q1, p1 * q0]),
    ]
    reports = []
    for tag, images in subs_list:
        branch = []
        for row in new_rows:
            form = Poly.zero(ctx, 5)
            for c, img in zip(row, images):
                if not c.is_zero():
                    form = form + img.scale(c)
            branch.append(form)
        reports.append(K3PencilReport("double-quadric", (tuple(four_planes), tag),
                                      branch, multiplicity=mult))
    return reports


# ---------------------------------------------------------------------------
# Whole-arrangement driver
# ---------------------------------------------------------------------------

@dataclass
class FibrationSuite:
    kummer: list[KummerReport]
    elliptic_points: list[EllipticReport]
    skew_lines: list[EllipticReport]
    k3_sextic: list[K3PencilReport]
    k3_quadric: list[K3PencilReport]


def fibration_suite(arr: Arrangement, table: inc.Table | None = None,
                    profile: SingularityProfile | None = None) -> FibrationSuite:
    if table is None:
        from .geometry import incidence_table_of
        table = incidence_table_of(arr)
    prof = profile or singularities(table)
    kummer = kummer_reports(arr, table)
    points = []
    for planes in list(prof.p4_0) + list(prof.p4_1) + list(prof.p5_0) \
            + list(prof.p5_1) + list(prof.p5_2):
        points.append(elliptic_from_point(arr, planes))
    skew = []
    quadric = []
    tset = set(table)
    all_lines = ([(tuple(l), tuple(l)) for l in prof.l2]
                 + [(tuple(l), tuple(l[:2])) for l in prof.l3])
    for (fa, ra), (fb, rb) in combinations(all_lines, 2):
        if set(fa) & set(fb):
            continue
        if inc.QUAD_RANK[tuple(sorted(ra + rb))] in tset:
            continue
        try:
            skew.append(elliptic_from_skew_lines(arr, (ra, rb)))
            quadric.extend(k3_quadric_pencils(arr, ra + rb, table))
        except (NotSkew, Concurrent):
            continue
    sextic = [k3_sextic_pencil(arr, pair) for pair in inc.PAIRS]
    return FibrationSuite(kummer, points, skew, sextic, quadric)
