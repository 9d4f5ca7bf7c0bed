"""The shipped equation corpus and its text grammar.

Each record is one line ``id | field | nparams | equation``.  An equation is
a product of eight linear forms in x, y, z, t; coefficients may use integer
and rational literals, parameters A0..A9, sqrt(d) and the imaginary unit i.
At the top level of the product, bare coordinate letters and parenthesized
groups are separate factors; inside a factor, juxtaposition multiplies.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import hashlib
import importlib.resources as resources
import re

from .geometry import ArrangementFamily
from .poly import Poly
from .scalar import FieldContext, QQ, Scalar

NPARAMS_MAX = 10
NVARS = 4 + NPARAMS_MAX  # x y z t A0..A9
VAR_NAMES = ["x", "y", "z", "t"] + [f"A{i}" for i in range(NPARAMS_MAX)]
_VAR_INDEX = {n: i for i, n in enumerate(VAR_NAMES)}

CORPUS_RESOURCE = "corpus.txt"
CORPUS_SHA256 = "ec1279792ed42527cd2eb7111fb08f23b5753801e2a5a61652c831eb79429e6f"


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class NonLinearFactor(ValueError):
    pass


class WrongFactorCount(ValueError):
    pass


FIELD_TAGS = {
    "Q": QQ,
    "Q(sqrt(5))": FieldContext.quadratic(5),
    "Q(sqrt(-3))": FieldContext.quadratic(-3),
    "Q(i)": FieldContext.quadratic(-1),
    "F2": FieldContext.prime(2),
    "F3": FieldContext.prime(3),
}


def field_tag_of(ctx: FieldContext) -> str:
    for tag, c in FIELD_TAGS.items():
        if c == ctx:
            return tag
    if ctx.kind == "quad":
        return f"Q(sqrt({ctx.d}))"
    if ctx.kind == "Fp":
        return f"F{ctx.p}"
    return "Q"


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|(sqrt|A\d|[A-Za-z])|(.))")


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.items: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError("cannot tokenize", pos)
            if m.group(1):
                self.items.append(("int", m.group(1), m.start(1)))
            elif m.group(2):
                self.items.append(("name", m.group(2), m.start(2)))
            elif not m.group(3).isspace():
                self.items.append(("sym", m.group(3), m.start(3)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.items[self.i] if self.i < len(self.items) else ("end", "", len(self.text))

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect_sym(self, s: str):
        kind, val, pos = self.next()
        if kind != "sym" or val != s:
            raise ParseError(f"expected {s!r}, found {val!r}", pos)


class _Parser:
    """Recursive-descent parser producing Polys over (x, y, z, t, A0..A9)."""

    def __init__(self, text: str, ctx: FieldContext):
        self.toks = _Tokens(text)
        self.ctx = ctx

    def _const(self, value) -> Poly:
        return Poly.const(self.ctx, NVARS, value)

    def parse_expr(self) -> Poly:
        out = self.parse_term()
        while True:
            kind, val, _ = self.toks.peek()
            if kind == "sym" and val in "+-":
                self.toks.next()
                rhs = self.parse_term()
                out = out + rhs if val == "+" else out - rhs
            else:
                return out

    def parse_term(self) -> Poly:
        out = self.parse_unary()
        while True:
            kind, val, pos = self.toks.peek()
            if kind == "sym" and val == "*":
                self.toks.next()
                out = out * self.parse_unary()
            elif kind == "sym" and val == "/":
                self.toks.next()
                div = self.parse_unary()
                if not div.is_constant() or div.is_zero():
                    raise ParseError("division only by nonzero constants", pos)
                out = out.scale(div.constant_coefficient().inverse())
            elif kind in ("int", "name") or (kind == "sym" and val == "("):
                out = out * self.parse_unary()
            else:
                return out

    def parse_unary(self) -> Poly:
        sign = 1
        while True:
            kind, val, _ = self.toks.peek()
            if kind == "sym" and val == "-":
                self.toks.next()
                sign = -sign
            elif kind == "sym" and val == "+":
                self.toks.next()
            else:
                break
        p = self.parse_power()
        return p if sign == 1 else -p

    def parse_power(self) -> Poly:
        base = self.parse_atom()
        kind, val, pos = self.toks.peek()
        if kind == "sym" and val == "^":
            self.toks.next()
            k2, v2, p2 = self.toks.next()
            if k2 != "int":
                raise ParseError("exponent must be an integer", p2)
            return base ** int(v2)
        return base

    def parse_atom(self) -> Poly:
        kind, val, pos = self.toks.next()
        if kind == "int":
            return self._const(int(val))
        if kind == "name":
            if val == "sqrt":
                self.toks.expect_sym("(")
                sign = 1
                k2, v2, p2 = self.toks.next()
                if k2 == "sym" and v2 == "-":
                    sign = -1
                    k2, v2, p2 = self.toks.next()
                if k2 != "int":
                    raise ParseError("sqrt expects an integer", p2)
                self.toks.expect_sym(")")
                return self._sqrt_const(sign * int(v2), p2)
            if val in ("i", "I"):
                return self._sqrt_const(-1, pos)
            if val in _VAR_INDEX:
                return Poly.variable(self.ctx, NVARS, _VAR_INDEX[val])
            raise ParseError(f"unknown name {val!r}", pos)
        if kind == "sym" and val == "(":
            inner = self.parse_expr()
            self.toks.expect_sym(")")
            return inner
        raise ParseError(f"unexpected token {val!r}", pos)

    def _sqrt_const(self, d: int, pos: int) -> Poly:
        if self.ctx.kind != "quad" or self.ctx.d != d:
            raise ParseError(f"sqrt({d}) needs field context Q(sqrt({d}))", pos)
        return self._const(self.ctx.sqrt_gen())

    def parse_product_factors(self) -> list[Poly]:
        """Top-level product: bare letters and parenthesized groups are factors."""
        factors: list[Poly] = []
        sign = 1
        while True:
            kind, val, pos = self.toks.peek()
            if kind == "end":
                break
            if kind == "sym" and val == "*":
                self.toks.next()
                continue
            if kind == "sym" and val == "-" and not factors:
                self.toks.next()
                sign = -sign
                continue
            factors.append(self.parse_power())
        if sign == -1 and factors:
            factors[0] = -factors[0]
        return factors


def parse_equation(text: str, ctx: FieldContext = QQ) -> list[list[Poly]]:
    """Parse a product of eight linear forms; rows of coefficient polynomials.

    Returns 8 rows of 4 Polys in the parameters (NPARAMS_MAX variables).
    """
    parser = _Parser(text, ctx)
    factors = parser.parse_product_factors()
    kind, val, pos = parser.toks.peek()
    if kind != "end":
        raise ParseError(f"trailing input {val!r}", pos)
    rows: list[list[Poly]] = []
    scale = None
    for f in factors:
        if f.is_constant():
            c = f.constant_coefficient()
            scale = c if scale is None else scale * c
            continue
        rows.append(_linear_form_row(f))
    if scale is not None and rows:
        rows[0] = [p.scale(scale) for p in rows[0]]
    if len(rows) != 8:
        raise WrongFactorCount(f"expected 8 linear factors, found {len(rows)}")
    return rows


def _linear_form_row(f: Poly) -> list[Poly]:
    row = [Poly.zero(f.ctx, NPARAMS_MAX) for _ in range(4)]
    for e, c in f.terms.items():
        coord_part = e[:4]
        if sum(coord_part) != 1:
            raise NonLinearFactor(f"factor is not linear in x, y, z, t: {f!r}")
        j = coord_part.index(1)
        mono = Poly(f.ctx, NPARAMS_MAX, {tuple(e[4:]): c})
        row[j] = row[j] + mono
    return row


@dataclass
class EquationRecord:
    """One corpus entry: an equation family over a declared base field."""

    id: str
    field_tag: str
    nparams: int
    rows: list[list[Poly]]  # 8 x 4 over the A-parameters

    @property
    def ctx(self) -> FieldContext:
        return FIELD_TAGS[self.field_tag]

    @property
    def characteristic(self) -> int:
        return self.ctx.characteristic

    def family(self) -> ArrangementFamily:
        trimmed = [[Poly(self.ctx, self.nparams,
                         {e[:self.nparams]: c for e, c in p.terms.items()})
                    for p in row] for row in self.rows]
        return ArrangementFamily(self.ctx, self.nparams, trimmed)

    def equation_text(self) -> str:
        return serialize_equation(self.rows)

    def line(self) -> str:
        return f"{self.id} | {self.field_tag} | {self.nparams} | {self.equation_text()}"


def _factor_text(row: list[Poly]) -> str:
    names = VAR_NAMES
    pieces = []
    nonzero = [(j, p) for j, p in enumerate(row) if not p.is_zero()]
    if len(nonzero) == 1:
        j, p = nonzero[0]
        if p.is_constant() and p.constant_coefficient() == p.ctx.one():
            return names[j]
    for j, p in nonzero:
        if p.is_constant():
            c = p.constant_coefficient()
            if c == p.ctx.one():
                term = names[j]
            else:
                cs = p.to_text(names[4:])
                term = f"{cs}*{names[j]}" if not _needs_parens(cs) else f"({cs})*{names[j]}"
        else:
            body = p.to_text(names[4:])
            term = f"{body}*{names[j]}" if not _needs_parens(body) else f"({body})*{names[j]}"
        pieces.append(term)
    out = pieces[0]
    for term in pieces[1:]:
        if term.startswith("-") and not term.startswith("("):
            out += " - " + term[1:]
        else:
            out += " + " + term
    return f"({out})"


def _needs_parens(s: str) -> bool:
    depth = 0
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0:
            return True
    return False


def serialize_equation(rows: list[list[Poly]]) -> str:
    return "".join(_factor_text(row) for row in rows)


def parse_record_line(line: str) -> EquationRecord:
    parts = [p.strip() for p in line.split("|")]
    if len(parts) != 4:
        raise ParseError(f"malformed record line: {line!r}", 0)
    rid, tag, nparams, eq = parts
    if tag not in FIELD_TAGS:
        raise ParseError(f"unknown field tag {tag!r}", 0)
    ctx = FIELD_TAGS[tag]
    rows14 = parse_equation(eq, ctx)
    rows = [[Poly(ctx, NPARAMS_MAX, dict(p.terms)) for p in row] for row in rows14]
    rec = EquationRecord(rid, tag, int(nparams), rows)
    used = set()
    for row in rec.rows:
        for p in row:
            used |= p.variables_used()
    if used and (max(used) + 1 != rec.nparams or used != set(range(rec.nparams))):
        raise ParseError(f"record {rid}: parameters not contiguous A0..A{rec.nparams - 1}", 0)
    if not used and rec.nparams != 0:
        raise ParseError(f"record {rid}: declared {rec.nparams} parameters, used none", 0)
    return rec


def _row_key(rows: list[list[Poly]]):
    return tuple(tuple(frozenset(p.terms.items()) for p in row) for row in rows)


def records_equal(a: EquationRecord, b: EquationRecord) -> bool:
    return (a.id == b.id and a.field_tag == b.field_tag and a.nparams == b.nparams
            and _row_key(a.rows) == _row_key(b.rows))


class Corpus:
    """All shipped records, keyed by id ('1'..'455', 'c2-1'..'c2-15', 'c3-1')."""

    def __init__(self, records: list[EquationRecord]):
        self.records = records
        self.by_id = {r.id: r for r in records}
        if len(self.by_id) != len(records):
            raise ParseError("duplicate record ids", 0)

    def __len__(self):
        return len(self.records)

    def char0(self) -> list[EquationRecord]:
        return [r for r in self.records if r.characteristic == 0]

    def positive_char(self) -> list[EquationRecord]:
        return [r for r in self.records if r.characteristic != 0]

    def __getitem__(self, rid) -> EquationRecord:
        return self.by_id[str(rid)]


def load_corpus() -> Corpus:
    data = resources.files("octicarr.data").joinpath(CORPUS_RESOURCE).read_bytes()
    if CORPUS_SHA256 is not None:
        digest = hashlib.sha256(data).hexdigest()
        if digest != CORPUS_SHA256:
            raise ParseError(f"corpus checksum mismatch: {digest}", 0)
    records = []
    for line in data.decode().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        records.append(parse_record_line(line))
    n0 = sum(1 for r in records if r.characteristic == 0)
    n2 = sum(1 for r in records if r.characteristic == 2)
    n3 = sum(1 for r in records if r.characteristic == 3)
    if (n0, n2, n3) != (455, 15, 1):
        raise ParseError(f"corpus must hold 455+15+1 records, found {(n0, n2, n3)}", 0)
    return Corpus(records)
