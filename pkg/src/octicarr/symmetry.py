"""Lifting table symmetries to projective transformations.

A permutation that preserves a family's incidence table lifts to at most one
projective map Phi with F_{sigma(i)} o Phi = lambda_i * F_i evaluated at the
image parameters.  The solver anchors Phi on four parameter-free family rows,
determines the four anchor scale factors from the linear relations forced by
the remaining rows' coefficient patterns, and recovers the image parameters
through a linearized monomial system plus an exponent-lattice extraction.
Everything is exact: matrices over the polynomial ring are eliminated
fraction-free and results are cleared to primitive polynomial data.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import incidence as inc
from .geometry import Arrangement, ArrangementFamily, GeometryError
from .linalg import det, kernel_basis, left_kernel_basis
from .poly import Poly, poly_gcd
from .scalar import FieldContext, QQ, Scalar


class SymmetryError(ValueError):
    pass


class NoLift(SymmetryError):
    """The permutation preserves the table but admits no projective lift."""


class NotClosed(SymmetryError):
    pass


@dataclass
class Lift:
    """A projective lift: Phi (4x4 over the parameters), scale factors, and
    the induced parameter map, all as primitive polynomial data."""

    sigma: inc.Permutation
    phi_matrix: list[list[Poly]]               # Phi, rows act on (x, y, z, t)
    lambdas: list[tuple[Poly, Poly]]           # (num, den), normalized so l1 = 1
    param_map: list[Poly]                      # phi: A -> B, projective tuple

    def phi_images(self) -> list[Poly]:
        """Phi as substitution images: entries are linear forms in x,y,z,t with
        parameter-polynomial coefficients, encoded in a joint ring."""
        return self.phi_matrix


def _is_param_free(row: list[Poly]) -> bool:
    return all(p.is_constant() for p in row)


def _const_row(row: list[Poly]) -> list[Fraction]:
    return [p.constant_coefficient().a for p in row]


def _adjugate4(rows: list[list[Poly]]) -> list[list[Poly]]:
    out = [[None] * 4 for _ in range(4)]
    for i in range(4):
        for j in range(4):
            minor = [[rows[r][c] for c in range(4) if c != j]
                     for r in range(4) if r != i]
            m = det(minor)
            out[j][i] = m if (i + j) % 2 == 0 else -m
    return out


def _monomials_of_rows(rows: list[list[Poly]]) -> list[tuple]:
    monos = set()
    for row in rows:
        for p in row:
            monos.update(p.terms.keys())
    return sorted(monos)


def _coeff_matrix(row: list[Poly], monos: list[tuple]):
    """4 x m matrix (over the base field) of the row's coefficients."""
    idx = {m: k for k, m in enumerate(monos)}
    ctx = row[0].ctx
    out = [[ctx.zero()] * len(monos) for _ in range(4)]
    for s, p in enumerate(row):
        for e, c in p.terms.items():
            out[s][idx[e]] = c
    return out


def lift_permutation(fam: ArrangementFamily, sigma: inc.Permutation) -> Lift:
    """The unique projective lift of an invariant permutation, or NoLift."""
    if fam.ctx.kind == "Fp":
        raise SymmetryError("lifts are computed in characteristic zero")
    n = fam.nparams
    ring = lambda: Poly.zero(fam.ctx, n)  # noqa: E731
    rows = fam.rows

    free = [i for i in range(8) if _is_param_free(rows[i])]
    anchors = None
    for combo in combinations(free, 4):
        t_rows = [_const_row(rows[i]) for i in combo]
        if det(t_rows) != 0:
            w_rows = [rows[sigma[i]] for i in combo]
            dw = det(w_rows)
            if not dw.is_zero():
                anchors = combo
                break
    if anchors is None:
        raise NoLift("no invertible parameter-free anchor frame")
    t_rows = [[Poly.const(fam.ctx, n, c) for c in _const_row(rows[i])]
              for i in anchors]
    w_rows = [rows[sigma[i]] for i in anchors]
    adj = _adjugate4(w_rows)

    others = [i for i in range(8) if i not in anchors]
    param_rows = [i for i in others
                  if any(not p.is_constant() for p in rows[i])]
    monos = _monomials_of_rows([rows[i] for i in others])

    # linear constraints on the four anchor scale factors
    lam_eqs: list[list[Poly]] = []
    u_vecs = {}
    for j in others:
        u = [sum((rows[sigma[j]][r] * adj[r][k] for r in range(4)), ring())
             for k in range(4)]
        u_vecs[j] = u
        cmat = _coeff_matrix(rows[j], monos)
        for c in left_kernel_basis(cmat):
            # sum_s c_s * L_j(lam)_s = 0, linear in the anchor lambdas
            cs = [x if isinstance(x, Scalar) else fam.ctx.coerce(x) for x in c]
            eq = []
            for k in range(4):
                ts = fam.ctx.zero()
                for si in range(4):
                    ts = ts + cs[si] * t_rows[k][si].constant_coefficient()
                eq.append(u_vecs[j][k].scale(ts))
            lam_eqs.append(eq)
    lam_kernel = kernel_basis(lam_eqs) if lam_eqs else []
    if lam_eqs and len(lam_kernel) == 0:
        raise NoLift("anchor scale system is inconsistent")
    if not lam_eqs:
        raise NoLift("no constraints available to pin the anchor scales")
    if len(lam_kernel) != 1:
        raise NoLift(f"anchor scales underdetermined (dimension {len(lam_kernel)})")
    lam = [v if isinstance(v, Poly) else Poly.const(fam.ctx, n, v)
           for v in lam_kernel[0]]
    lam = _strip_common(lam)

    # target vectors for the non-anchor rows
    v_vecs = {}
    for j in others:
        v = []
        for s in range(4):
            acc = ring()
            for k in range(4):
                acc = acc + u_vecs[j][k] * lam[k] * t_rows[k][s]
            v.append(acc)
        if all(p.is_zero() for p in v):
            raise NoLift(f"lift collapses row {j + 1}")
        v_vecs[j] = v

    if n == 0:
        bparams: list[Poly] = []
    else:
        pmonos = _monomials_of_rows([rows[i] for i in param_rows])
        values = _solve_monomial_values(fam, param_rows, pmonos, v_vecs)
        bparams = _extract_parameters(fam, pmonos, values)

    phi = [[None] * 4 for _ in range(4)]
    for r in range(4):
        for c in range(4):
            acc = ring()
            for k in range(4):
                acc = acc + adj[r][k] * lam[k] * t_rows[k][c]
            phi[r][c] = acc
    phi = _strip_common([p for row in phi for p in row])
    phi = [phi[4 * r:4 * r + 4] for r in range(4)]

    lambdas = _all_lambdas(fam, sigma, phi, bparams)
    return Lift(sigma, phi, lambdas, bparams)


def _strip_common(polys: list[Poly]) -> list[Poly]:
    """Divide a polynomial tuple by its gcd and rational content."""
    nz = [p for p in polys if not p.is_zero()]
    if not nz:
        return polys
    g = nz[0]
    for p in nz[1:]:
        g = poly_gcd(g, p)
        if g.is_constant():
            break
    if not g.is_constant():
        polys = [p.exact_div(g) if not p.is_zero() else p for p in polys]
    # rational content
    nums, dens = [], []
    for p in polys:
        for c in p.terms.values():
            nums.append(c.a.numerator)
            dens.append(c.a.denominator)
            if c.b is not None and c.b != 0:
                nums.append(c.b.numerator)
                dens.append(c.b.denominator)
    from math import gcd, lcm
    gg = 0
    for x in nums:
        gg = gcd(gg, x)
    ll = 1
    for x in dens:
        ll = lcm(ll, x)
    if gg:
        polys = [p.scale(Fraction(ll, gg)) for p in polys]
    lead = next((p for p in polys if not p.is_zero()), None)
    if lead is not None:
        _, lc = lead.leading()
        sign = lc.a if lc.a != 0 else lc.b
        if sign is not None and sign < 0:
            polys = [-p for p in polys]
    return polys


def _solve_monomial_values(fam, others, monos, v_vecs) -> list[Poly]:
    """Values of the image-parameter monomials, up to one common scale."""
    n = fam.nparams
    m = len(monos)
    if m == 0:
        raise NoLift("target rows carry no parameters")
    idx = {mo: k for k, mo in enumerate(monos)}
    eqs: list[list[Poly]] = []
    for j in others:
        cmat = _coeff_matrix(fam.rows[j], monos)
        v = v_vecs[j]
        for s1 in range(4):
            for s2 in range(s1 + 1, 4):
                # (row_j(B)[s1]) * v[s2] - (row_j(B)[s2]) * v[s1] = 0
                eq = []
                for k in range(m):
                    lhs = v[s2].scale(cmat[s1][k]) if not cmat[s1][k].is_zero() \
                        else Poly.zero(fam.ctx, n)
                    rhs = v[s1].scale(cmat[s2][k]) if not cmat[s2][k].is_zero() \
                        else Poly.zero(fam.ctx, n)
                    eq.append(lhs - rhs)
                if any(not p.is_zero() for p in eq):
                    eqs.append(eq)
    if not eqs:
        raise NoLift("no conditions on the image parameters")
    ker = kernel_basis(eqs)
    if len(ker) != 1:
        raise NoLift(f"image-parameter system has kernel dimension {len(ker)}")
    vals = [v if isinstance(v, Poly) else Poly.const(fam.ctx, n, v)
            for v in ker[0]]
    return _strip_common(vals)


def _extract_parameters(fam, monos, values: list[Poly]) -> list[Poly]:
    """Solve the exponent lattice: B_i as integer power products of the
    monomial values (the common scale cancels in equal-weight combinations)."""
    n = fam.nparams
    live = [k for k, v in enumerate(values) if not v.is_zero()]
    if not live:
        raise NoLift("all image-parameter monomial values vanish")
    exps = [monos[k] for k in live]
    # rational solve of [E | 1] * c = e_i (+ scale column) for each parameter
    rows = [list(exps[r]) + [1] for r in range(len(live))]
    out = []
    for i in range(n):
        target = [Fraction(1) if j == i else Fraction(0) for j in range(n)]
        coeffs = _solve_integer_combination(rows, target)
        if coeffs is None:
            raise NoLift(f"cannot express image parameter {i} from monomial values")
        num = Poly.const(fam.ctx, n, 1)
        den = Poly.const(fam.ctx, n, 1)
        for c, k in zip(coeffs, live):
            if c > 0:
                num = num * values[k] ** c
            elif c < 0:
                den = den * values[k] ** (-c)
        out.append((num, den))
    lcd = Poly.const(fam.ctx, n, 1)
    for _, d in out:
        q = poly_gcd(lcd, d)
        lcd = lcd * d.exact_div(q) if not q.is_constant() else lcd * d
    cleared = []
    for c_num, c_den in out:
        cleared.append(c_num * lcd.exact_div(c_den))
    return _strip_common(cleared)


def _solve_integer_combination(rows: list[list[int]], target: list[Fraction]):
    """Integer c with sum_k c_k rows[k][:-1] = target and sum_k c_k rows[k][-1]
    free (the last column tracks the common scale; it cancels in ratios by
    construction, so it is left unconstrained)."""
    ncols = len(target)
    mat = [[Fraction(rows[r][c]) for r in range(len(rows))] for c in range(ncols)]
    rhs = list(target)
    # solve mat * c = rhs over Q, then pick an integral point of the solution set
    aug = [mat[c] + [rhs[c]] for c in range(ncols)]
    pivots = []
    r = 0
    nunk = len(rows)
    for c in range(nunk):
        piv = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        aug[r] = [x / aug[r][c] for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                aug[i] = [x - aug[i][c] * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    for i in range(r, len(aug)):
        if aug[i][-1] != 0:
            return None
    sol = [Fraction(0)] * nunk
    for row_i, c in enumerate(pivots):
        sol[c] = aug[row_i][-1]
    if all(x.denominator == 1 for x in sol):
        return [int(x) for x in sol]
    return None


def _all_lambdas(fam, sigma, phi, bparams) -> list[tuple[Poly, Poly]]:
    """Scale factors for all eight rows, as (num, den) pairs with l1 = (1, 1)."""
    n = fam.nparams
    lams: list[tuple[Poly, Poly]] = []
    for i in range(8):
        src = fam.rows[sigma[i]]
        lhs = [sum((src[r] * phi[r][c] for r in range(4)), Poly.zero(fam.ctx, n))
               for c in range(4)]
        tgt = [p.subs_polys(bparams) if n else p for p in fam.rows[i]]
        s0 = next((s for s in range(4) if not tgt[s].is_zero()), None)
        if s0 is None or (lhs[s0].is_zero() and not all(p.is_zero() for p in lhs)):
            raise NoLift(f"row {i + 1} does not match under the lift")
        num, den = lhs[s0], tgt[s0]
        for s in range(4):
            if not (lhs[s] * den - tgt[s] * num).is_zero():
                raise NoLift(f"row {i + 1} fails the lift identity")
        lams.append((num, den))
    n0, d0 = lams[0]
    out = []
    for num, den in lams:
        a, b = num * d0, den * n0
        g = poly_gcd(a, b)
        if not g.is_constant():
            a, b = a.exact_div(g), b.exact_div(g)
        ab = _strip_common([a, b])
        out.append((ab[0], ab[1]))
    return out


def verify_lift(fam: ArrangementFamily, lift: Lift) -> bool:
    """Expand the defining identity for every row; exact polynomial check."""
    n = fam.nparams
    for i in range(8):
        src = fam.rows[lift.sigma[i]]
        lhs = [sum((src[r] * lift.phi_matrix[r][c] for r in range(4)),
                   Poly.zero(fam.ctx, n)) for c in range(4)]
        tgt = [p.subs_polys(lift.param_map) if n else p for p in fam.rows[i]]
        num, den = lift.lambdas[i]
        for s in range(4):
            if not (lhs[s] * den - tgt[s] * num).is_zero():
                return False
    return True


# ---------------------------------------------------------------------------
# Fixed loci of parameter maps
# ---------------------------------------------------------------------------

@dataclass
class FixedLocusReport:
    """Components of the fixed locus of a projective parameter self-map."""

    minor_system: list[Poly]
    points: list[list[Scalar]] = field(default_factory=list)
    linear_components: list[list[Poly]] = field(default_factory=list)  # linear equations
    quadric_components: list[Poly] = field(default_factory=list)
    unsolved: list[Poly] = field(default_factory=list)
    whole_space: bool = False


def fixed_locus(param_map: list[Poly], nparams: int) -> FixedLocusReport:
    """Solve rank([A; phi(A)]) <= 1 as far as linear algebra and quadratic
    formulas reach; higher-degree residual factors are reported unsolved."""
    ctx = param_map[0].ctx
    n = nparams
    avars = [Poly.variable(ctx, n, i) for i in range(n)]
    minors = []
    for i in range(n):
        for j in range(i + 1, n):
            m = avars[i] * param_map[j] - avars[j] * param_map[i]
            if not m.is_zero():
                minors.append(m)
    report = FixedLocusReport(minor_system=minors)
    if not minors:
        report.whole_space = True
        return report

    if n == 2:
        _binary_points(minors, report, ctx)
        return report

    # common factor of all minors cuts out a positive-dimensional component
    g = minors[0]
    for m in minors[1:]:
        g = poly_gcd(g, m)
        if g.is_constant():
            break
    residual = minors
    if not g.is_constant():
        residual = [m.exact_div(g) for m in minors]
        for f, mult in _simple_factors(g):
            if f.degree() == 1:
                report.linear_components.append([f])
            elif f.degree() == 2:
                report.quadric_components.append(f)
            else:
                report.unsolved.append(f)

    _linear_point_solve(residual, report, ctx, n)
    return report


def _simple_factors(p: Poly):
    """Split off monomial atoms; no general factorization is attempted."""
    out = []
    mono = p.monomial_content()
    if any(mono):
        for i, k in enumerate(mono):
            if k:
                out.append((Poly.variable(p.ctx, p.nvars, i), k))
        p = Poly(p.ctx, p.nvars,
                 {tuple(a - b for a, b in zip(e, mono)): c for e, c in p.terms.items()})
    if not p.is_constant():
        out.append((p.primitive_part(), 1))
    return out


def _binary_points(residual: list[Poly], report: FixedLocusReport, ctx) -> None:
    """Points on the parameter line: roots of the gcd of binary forms."""
    g = residual[0]
    for m in residual[1:]:
        g = poly_gcd(g, m)
    if g.is_constant():
        return
    for f, mult in _simple_factors(g):
        if f.degree() == 1:
            pt = _root_of_linear_binary(f, ctx)
            if pt is not None:
                report.points.append(pt)
            continue
        if f.degree() == 2:
            pts = _roots_of_quadratic_binary(f, ctx)
            if pts is None:
                report.unsolved.append(f)
            else:
                report.points.extend(pts)
            continue
        report.unsolved.append(f)


def _root_of_linear_binary(f: Poly, ctx):
    # c0*A0 + c1*A1 = 0 -> (c1 : -c0)
    c0 = f.terms.get((1, 0), None)
    c1 = f.terms.get((0, 1), None)
    zero, one = ctx.zero(), ctx.one()
    if c0 is None:
        return [one, zero]
    if c1 is None:
        return [zero, one]
    return [c1, -c0]


def _roots_of_quadratic_binary(f: Poly, ctx):
    a = f.terms.get((2, 0), ctx.zero())
    b = f.terms.get((1, 1), ctx.zero())
    c = f.terms.get((0, 2), ctx.zero())
    if a.is_zero():
        # f = A1 * (b*A0 + c*A1)
        return [[ctx.one(), ctx.zero()], [c, -b]] if not b.is_zero() else None
    if c.is_zero():
        # f = A0 * (a*A0 + b*A1)
        return [[ctx.zero(), ctx.one()], [-b, a]]
    disc = b * b - 4 * a * c
    roots = _square_roots(disc, ctx)
    if roots is None:
        return None
    out = []
    for r in roots:
        ext = r.ctx
        bb = _coerce_between(b, ext)
        aa = _coerce_between(a, ext)
        if bb is None or aa is None:
            return None
        s = (-bb + r) / (2 * aa)
        out.append([s, ext.one()])
    return out


def _coerce_between(x: Scalar, ext: FieldContext):
    if x.ctx == ext:
        return x
    if x.is_rational():
        return ext.coerce(x.as_fraction())
    return None


def _square_roots(x: Scalar, ctx):
    """Square roots of a rational scalar inside the base field or a quadratic
    extension; None when x is not rational or needs a tower."""
    if not x.is_rational():
        return None
    v = x.as_fraction()
    if v == 0:
        return [ctx.zero()]
    num = v.numerator * v.denominator
    s = _int_sqrt_part(abs(num))
    d = abs(num) // (s * s) * (1 if num > 0 else -1)
    root_scale = Fraction(s, v.denominator)
    if d == 1:
        r = ctx.coerce(root_scale)
        return [r, -r]
    if ctx.kind == "quad" and ctx.d == d:
        r = ctx.sqrt_gen() * ctx.coerce(root_scale)
        return [r, -r]
    if ctx.kind == "Q":
        ext = FieldContext.quadratic(d)
        r = ext.sqrt_gen() * ext.coerce(root_scale)
        return [r, -r]
    return None


def _int_sqrt_part(n: int) -> int:
    s = 1
    f = 2
    while f * f <= n:
        while n % (f * f) == 0:
            n //= f * f
            s *= f
        f += 1
    return s


def _linear_point_solve(residual: list[Poly], report: FixedLocusReport, ctx, n) -> None:
    """Collect coordinate points and small-height rational points of the
    residual system; linear systems are solved exactly."""
    linear = [m for m in residual if m.degree() == 1]
    nonlinear = [m for m in residual if m.degree() > 1]
    if linear:
        rows = []
        for m in linear:
            row = [ctx.zero()] * n
            for e, c in m.terms.items():
                row[e.index(1)] = c
            rows.append(row)
        ker = kernel_basis(rows)
        if len(ker) == 1:
            vec = [x if isinstance(x, Scalar) else ctx.coerce(x) for x in ker[0]]
            if all(m.eval(vec).is_zero() for m in residual):
                report.points.append(vec)
            else:
                report.unsolved.extend(nonlinear)
        elif not nonlinear:
            report.linear_components.append(linear)
        else:
            report.unsolved.extend(nonlinear)
        return
    # coordinate points
    for i in range(n):
        pt = [ctx.one() if j == i else ctx.zero() for j in range(n)]
        if all(m.eval(pt).is_zero() for m in residual):
            report.points.append(pt)
    covered = {tuple(_normalize_point(p)) for p in report.points}
    import itertools
    for vals in itertools.product(range(-3, 4), repeat=n - 1):
        pt = [ctx.one()] + [ctx.coerce(v) for v in vals]
        if all(m.eval(pt).is_zero() for m in residual):
            key = tuple(_normalize_point(pt))
            if key not in covered:
                covered.add(key)
                report.points.append(pt)
    leftover = [m for m in residual if m.degree() > 1]
    if leftover and not report.points:
        report.unsolved.extend(leftover)


def _normalize_point(pt: list[Scalar]) -> list[str]:
    lead = next((c for c in pt if not c.is_zero()), None)
    if lead is None:
        return [str(c) for c in pt]
    inv = lead.inverse()
    return [str(c * inv) for c in pt]


# ---------------------------------------------------------------------------
# Group fingerprints
# ---------------------------------------------------------------------------

@dataclass
class GroupFingerprint:
    order: int
    generators: list[inc.Permutation]
    abelian: bool
    exponent: int
    orbits: list[tuple[int, ...]]


def group_fingerprint(perms: list[inc.Permutation]) -> GroupFingerprint:
    """Order, greedy small generating set, abelian flag, exponent, orbits."""
    pset = set(perms)
    if inc.IDENTITY not in pset:
        raise NotClosed("identity element missing")
    for g in perms:
        if inc.perm_inverse(g) not in pset:
            raise NotClosed(f"inverse of {inc.perm_cycles(g)} missing")
        for h in perms:
            if inc.perm_compose(g, h) not in pset:
                raise NotClosed("composition leaves the set")
    generators: list[inc.Permutation] = []
    span = {inc.IDENTITY}
    for g in sorted(pset):
        if g in span:
            continue
        generators.append(g)
        frontier = [g]
        while frontier:
            x = frontier.pop()
            for h in list(span) + generators:
                for y in (inc.perm_compose(x, h), inc.perm_compose(h, x)):
                    if y not in span:
                        span.add(y)
                        frontier.append(y)
        if len(span) == len(pset):
            break
    abelian = all(inc.perm_compose(g, h) == inc.perm_compose(h, g)
                  for g in generators for h in generators)
    from math import lcm
    exponent = 1
    for g in pset:
        k = 1
        x = g
        while x != inc.IDENTITY:
            x = inc.perm_compose(x, g)
            k += 1
        exponent = lcm(exponent, k)
    seen = set()
    orbits = []
    for i in range(8):
        if i in seen:
            continue
        orb = {i}
        frontier = [i]
        while frontier:
            x = frontier.pop()
            for g in pset:
                if g[x] not in orb:
                    orb.add(g[x])
                    frontier.append(g[x])
        seen |= orb
        orbits.append(tuple(sorted(j + 1 for j in orb)))
    return GroupFingerprint(len(pset), generators, abelian, exponent, orbits)


# ---------------------------------------------------------------------------
# Distinguished elements
# ---------------------------------------------------------------------------

@dataclass
class DistinguishedElement:
    point: list[Scalar]
    arrangement: Arrangement
    provenance: str


def distinguished_elements(fam: ArrangementFamily,
                           max_group_order: int = 60) -> list[DistinguishedElement]:
    """Isolated fixed points of the symmetry parameter maps (and of pairwise
    intersections of fixed components, iterated) that keep the generic table."""
    if fam.nparams == 0:
        return []
    table = fam.generic_table()
    perms = inc.invariant_permutations(table)
    if len(perms) > max_group_order:
        fp = group_fingerprint(perms)
        perms = [g for g in fp.generators]
    minors = fam.minor_polys()
    nonzero_minors = [m for m in minors if not m.is_zero()]

    points: dict[tuple, list[Scalar]] = {}
    lines: list[list[Poly]] = []
    conics: list[Poly] = []
    for g in perms:
        if g == inc.IDENTITY:
            continue
        try:
            lift = lift_permutation(fam, g)
        except NoLift:
            continue
        rep = fixed_locus(lift.param_map, fam.nparams)
        for pt in rep.points:
            points.setdefault(tuple(_normalize_point(pt)), pt)
        lines.extend(rep.linear_components)
        conics.extend(rep.quadric_components)

    # intersect linear components pairwise until stable; add quadric meets
    changed = True
    seen_lines = {tuple(sorted(str(eq) for eq in eqs)) for eqs in lines}
    while changed:
        changed = False
        for a in range(len(lines)):
            for b in range(a + 1, len(lines)):
                eqs = lines[a] + lines[b]
                sol = _solve_linear_system(eqs, fam)
                if sol is None:
                    continue
                kind, payload = sol
                if kind == "point":
                    key = tuple(_normalize_point(payload))
                    if key not in points:
                        points[key] = payload
                elif kind == "line":
                    key = tuple(sorted(str(eq) for eq in payload))
                    if key not in seen_lines:
                        seen_lines.add(key)
                        lines.append(payload)
                        changed = True
        for eqs in list(lines):
            for q in conics:
                for pt in _line_conic_points(eqs, q, fam):
                    key = tuple(_normalize_point(pt))
                    if key not in points:
                        points[key] = pt

    out = []
    for key, pt in sorted(points.items()):
        ctx = pt[0].ctx
        if all(c.is_zero() for c in pt):
            continue
        degenerate = False
        for m in nonzero_minors:
            val = _eval_in_ctx(m, pt, ctx)
            if val is None or val.is_zero():
                degenerate = True
                break
        if degenerate:
            continue
        rows = [[_eval_in_ctx(p, pt, ctx) for p in row] for row in fam.rows]
        arr = Arrangement(ctx, rows, params=pt)
        out.append(DistinguishedElement(pt, arr, "fixed point of symmetry maps"))
    return out


def _eval_in_ctx(p: Poly, pt: list[Scalar], ctx: FieldContext):
    """Evaluate a base-field polynomial at a point of a possibly larger field."""
    out = ctx.zero()
    for e, c in p.terms.items():
        term = ctx.coerce(c) if c.ctx != ctx else c
        for i, k in enumerate(e):
            if k:
                term = term * pt[i] ** k
        out = out + term
    return out


def _solve_linear_system(eqs: list[Poly], fam):
    ctx = eqs[0].ctx
    n = fam.nparams
    rows = []
    for m in eqs:
        if m.degree() != 1:
            return None
        row = [ctx.zero()] * n
        for e, c in m.terms.items():
            row[e.index(1)] = c
        rows.append(row)
    ker = kernel_basis(rows)
    if len(ker) == 1:
        return ("point", [x if isinstance(x, Scalar) else ctx.coerce(x)
                          for x in ker[0]])
    if len(ker) == 2 and n > 2:
        # still a positive-dimensional component; keep as a line (its equations)
        return ("line", eqs)
    return None


def _line_conic_points(line_eqs: list[Poly], conic: Poly, fam):
    """Intersect a linear component with a conic when the line is a genuine
    parameter line (kernel dimension two): substitute and solve a quadratic."""
    ctx = conic.ctx
    n = fam.nparams
    rows = []
    for m in line_eqs:
        if m.degree() != 1:
            return []
        row = [ctx.zero()] * n
        for e, c in m.terms.items():
            row[e.index(1)] = c
        rows.append(row)
    ker = kernel_basis(rows)
    if len(ker) != 2:
        return []
    p = [x if isinstance(x, Scalar) else ctx.coerce(x) for x in ker[0]]
    q = [x if isinstance(x, Scalar) else ctx.coerce(x) for x in ker[1]]
    # conic(s*p + u*q) = a s^2 + b s u + c u^2
    a = conic.eval(p)
    c = conic.eval(q)
    b = _polarization(conic, p, q)
    if a.is_zero() and b.is_zero() and c.is_zero():
        return []
    pts = []
    if a.is_zero():
        pts.append(p)
        if not b.is_zero():
            # b s u + c u^2 = 0 -> u(b s + c u) = 0: second root s/u = -c/b
            s = -c / b
            pts.append([s * x + y for x, y in zip(p, q)])
        return pts
    disc = b * b - 4 * a * c
    roots = _square_roots(disc, ctx)
    if roots is None:
        return []
    ext = roots[0].ctx
    for r in roots:
        s = (-ext.coerce(b.as_fraction()) + r) / (2 * ext.coerce(a.as_fraction())) \
            if b.is_rational() and a.is_rational() else None
        if s is None:
            return []
        pts.append([s * ext.coerce(x.as_fraction()) + ext.coerce(y.as_fraction())
                    for x, y in zip(p, q)])
    return pts


def _polarization(conic: Poly, p: list[Scalar], q: list[Scalar]) -> Scalar:
    ctx = conic.ctx
    out = ctx.zero()
    for e, c in conic.terms.items():
        idxs = [i for i, k in enumerate(e) for _ in range(k)]
        if len(idxs) != 2:
            raise SymmetryError("not a quadratic form")
        i, j = idxs
        if i == j:
            out = out + c * (p[i] * q[i] + p[i] * q[i])
        else:
            out = out + c * (p[i] * q[j] + p[j] * q[i])
    return out
