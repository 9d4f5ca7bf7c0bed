"""Breadth-first generation of all candidate incidence tables.

States are triplets (triple lines, table, fivefold points).  Each stage
extends every known state by one new quadruple and then stabilizes it:
unresolved 3-intersections branch into a triple-line case and a fivefold
case, committed triple lines / fivefold points saturate the table upward /
downward, and states breaking the pairwise-intersection or cardinality
axioms are discarded.  Stable states are canonicalized under the S8 action
and deduplicated globally; the process drains after a bounded number of
stages, yielding 515 states.

Realizability of a candidate table is encoded by normalizing an admissible
quintuple of planes to x, y, z, t, x+y+z+t and writing the remaining three
planes with unknown coefficients: the table quadruples give the vanishing
ideal I of 4x4 minors, the other quadruples the non-vanishing factors J.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from . import incidence as inc
from .linalg import Matrix, minor4
from .poly import Poly
from .scalar import FieldContext, QQ


class EnumerationError(RuntimeError):
    pass


class NoAdmissibleQuintuple(EnumerationError):
    """No quintuple avoids the table; happens for a single exceptional table."""


class MismatchedCorpus(EnumerationError):
    """A certified table is absent from the enumerated candidates."""


State = tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]  # (t3, t, t5)

EMPTY_STATE: State = ((), (), ())

_QUAD_MASK = inc.QUAD_MASK
_TRIPLE_MASK = inc.TRIPLE_MASK
_QUINT_MASK = inc.QUINT_MASK
_POP = [bin(m).count("1") for m in range(256)]
_MASK_TO_TRIPLE = {m: r for r, m in enumerate(_TRIPLE_MASK)}
_MASK_TO_QUINT = {m: r for r, m in enumerate(_QUINT_MASK)}


def _saturate(t3: frozenset, t: frozenset, t5: frozenset) -> frozenset:
    quads = set(t)
    for tr in t3:
        quads.update(inc.QUADS_OVER_TRIPLE[tr])
    for qu in t5:
        quads.update(inc.QUADS_UNDER_QUINT[qu])
    return frozenset(quads)


def _violates(t3, t5) -> bool:
    if len(t3) > 4 or len(t5) > 4:
        return True
    t3m = [_TRIPLE_MASK[x] for x in t3]
    for i in range(len(t3m)):
        for j in range(i + 1, len(t3m)):
            if _POP[t3m[i] & t3m[j]] > 1:
                return True
    t5m = [_QUINT_MASK[x] for x in t5]
    for i in range(len(t5m)):
        for j in range(i + 1, len(t5m)):
            if _POP[t5m[i] & t5m[j]] > 3:
                return True
    return False


def _first_unresolved(t3, t, t5):
    quads = sorted(t)
    masks = [_QUAD_MASK[r] for r in quads]
    t3m = {_TRIPLE_MASK[x] for x in t3}
    t5m = {_QUINT_MASK[x] for x in t5}
    for i in range(len(masks)):
        for j in range(i + 1, len(masks)):
            m = masks[i] & masks[j]
            if _POP[m] != 3:
                continue
            if m in t3m:
                continue
            u = masks[i] | masks[j]
            if u in t5m:
                continue
            return m, u
    return None


def stabilize(state: State) -> list[State]:
    """All stable valid descendants of a raw state.

    Branch order does not affect the outcome set: every unresolved pair must
    commit to one of its two resolutions in any completion.
    """
    out: list[State] = []
    seen: set[State] = set()
    stack = [(frozenset(state[0]), frozenset(state[1]), frozenset(state[2]))]
    while stack:
        t3, t, t5 = stack.pop()
        if _violates(t3, t5):
            continue
        t = _saturate(t3, t, t5)
        key = (tuple(sorted(t3)), tuple(sorted(t)), tuple(sorted(t5)))
        if key in seen:
            continue
        seen.add(key)
        pair = _first_unresolved(t3, t, t5)
        if pair is None:
            out.append(key)
            continue
        m, u = pair
        stack.append((t3 | {_MASK_TO_TRIPLE[m]}, t, t5))
        stack.append((t3, t, t5 | {_MASK_TO_QUINT[u]}))
    return out


def canonical_state(state: State) -> State:
    """Minimum of the S8 orbit: minimal table first, then transported lists."""
    t3, t, t5 = state
    if not t:
        return (tuple(sorted(t3)), (), tuple(sorted(t5)))
    min_table, witnesses = inc.minimal_witnesses(t)
    if not t3 and not t5:
        return ((), min_table, ())
    best = None
    for w in witnesses.tolist():
        g = inc.ALL_PERMS[w]
        cand = (inc.apply_perm_triples(tuple(t3), g),
                inc.apply_perm_quints(tuple(t5), g))
        if best is None or cand < best:
            best = cand
    return (best[0], min_table, best[1])


@dataclass
class EnumerationResult:
    states: list[State]
    stage_sizes: list[int]

    @property
    def tables(self) -> list[inc.Table]:
        return [s[1] for s in self.states]


def enumerate_triplets(progress=None) -> EnumerationResult:
    """Generate every triplet satisfying the table axioms, canonically labeled."""
    seen: dict[State, int] = {EMPTY_STATE: 0}
    frontier: list[State] = [EMPTY_STATE]
    stage_sizes = [1]
    stage = 0
    while frontier:
        stage += 1
        new: dict[State, None] = {}
        raw_seen: set[State] = set()
        for t3, t, t5 in frontier:
            tset = set(t)
            for q in range(70):
                if q in tset:
                    continue
                raw = (t3, tuple(sorted(tset | {q})), t5)
                if raw in raw_seen:
                    continue
                raw_seen.add(raw)
                for stable in stabilize(raw):
                    cstate = canonical_state(stable)
                    if cstate not in seen and cstate not in new:
                        new[cstate] = None
        frontier = list(new)
        for s in frontier:
            seen[s] = stage
        stage_sizes.append(len(frontier))
        if progress is not None:
            progress(stage, len(frontier))
        if stage > 70:
            raise EnumerationError("enumeration failed to drain")
    return EnumerationResult(sorted(seen), stage_sizes)


EXCEPTIONAL_TABLE = inc.table_from_text(
    "1234 1256 1278 1357 1368 1458 1467 2358 2367 2457 2468 3456 3478 5678")


@dataclass
class RealizabilitySystem:
    """Minor conditions for arrangements with a prescribed incidence table."""

    table: inc.Table
    quintuple: tuple[int, ...]            # plane indices normalized to the frame
    unknown_planes: tuple[int, ...]       # plane indices carrying unknown rows
    nvars: int
    matrix: Matrix                        # 8x4 over Q[unknowns]
    ideal: list[Poly] = field(default_factory=list)      # minors required zero
    nonvanishing: list[Poly] = field(default_factory=list)  # factors of J

    def evaluate_point(self, values: list, ctx: FieldContext) -> bool:
        """True when all ideal generators vanish and no J factor does."""
        vals = [ctx.coerce(v) for v in values]
        for g in self.ideal:
            if not g.eval(vals).is_zero():
                return False
        for f in self.nonvanishing:
            if f.eval(vals).is_zero():
                return False
        return True


_FRAME_ROWS = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (1, 1, 1, 1))


def admissible_quintuples(table: inc.Table):
    tset = {inc.QUADS[r] for r in table}
    for quint in combinations(range(1, 9), 5):
        if not any(set(q) <= set(quint) for q in tset):
            yield quint


def build_realizability_system(table: inc.Table, *, frame_rows=None,
                               frame_planes=None) -> RealizabilitySystem:
    """Normalized symbolic system for one table.

    By default the lexicographically first admissible quintuple is pinned to
    the frame x, y, z, t, x+y+z+t; a custom frame can be supplied for the
    dedicated exceptional-table check.
    """
    if frame_planes is None:
        quint = next(iter(admissible_quintuples(table)), None)
        if quint is None:
            raise NoAdmissibleQuintuple(
                "every quintuple of planes contains a table quadruple")
        frame_planes = quint
        frame_rows = _FRAME_ROWS
    unknown = tuple(i for i in range(1, 9) if i not in frame_planes)
    nvars = 4 * len(unknown)
    ctx = QQ

    def var(k: int) -> Poly:
        return Poly.variable(ctx, nvars, k)

    rows: list[list[Poly]] = [[Poly.zero(ctx, nvars)] * 4 for _ in range(8)]
    for plane, row in zip(frame_planes, frame_rows):
        rows[plane - 1] = [Poly.const(ctx, nvars, c) for c in row]
    for k, plane in enumerate(unknown):
        rows[plane - 1] = [var(4 * k + j) for j in range(4)]
    m = Matrix(rows)
    sys = RealizabilitySystem(table, frame_planes, unknown, nvars, m)
    tset = set(table)
    for r in range(70):
        minor = minor4(m, inc.QUADS[r])
        if r in tset:
            sys.ideal.append(minor)
        elif not minor.is_zero():
            sys.nonvanishing.append(minor)
    return sys


def exceptional_cube_system() -> RealizabilitySystem:
    """The dedicated 8-unknown system for the unique quintuple-free table.

    Its first six planes form the face configuration x, x-t, y, y-t, z, t;
    the last two carry unknown rows.
    """
    frame_planes = (1, 2, 3, 4, 5, 6)
    frame_rows = ((1, 0, 0, 0), (1, 0, 0, -1), (0, 1, 0, 0), (0, 1, 0, -1),
                  (0, 0, 1, 0), (0, 0, 0, 1))
    return build_realizability_system(
        EXCEPTIONAL_TABLE, frame_rows=frame_rows, frame_planes=frame_planes)


@dataclass
class SearchBudget:
    seed: int = 0
    max_height: int = 6
    attempts: int = 4000


def find_rational_point(sys: RealizabilitySystem, ctx: FieldContext,
                        budget: SearchBudget | None = None):
    """Search V(I) \\ V(J) for a point; NotFound (None) is not an emptiness proof.

    Prime fields are searched exhaustively over projectively normalized rows;
    over Q a seeded random small-height search is used.
    """
    budget = budget or SearchBudget()
    nplanes = len(sys.unknown_planes)
    if ctx.kind == "Fp":
        p = ctx.p
        rows = []
        for code in range(1, p ** 4):
            row = [(code // p ** j) % p for j in range(4)]
            lead = next(x for x in row if x)
            if lead != 1:
                continue
            rows.append(row)
        from itertools import product
        for combo in product(rows, repeat=nplanes):
            values = [x for row in combo for x in row]
            if sys.evaluate_point(values, ctx):
                return [ctx.coerce(v) for v in values]
        return None
    import random
    rnd = random.Random(budget.seed)
    height = 1
    for attempt in range(budget.attempts):
        if attempt and attempt % (budget.attempts // budget.max_height + 1) == 0:
            height += 1
        values = [rnd.randint(-height, height) for _ in range(sys.nvars)]
        if sys.evaluate_point(values, ctx):
            return [ctx.coerce(v) for v in values]
    return None


@dataclass
class Partition:
    char0_ids: dict[inc.Table, str]
    char2_ids: dict[inc.Table, str]
    char3_ids: dict[inc.Table, str]
    unrealizable: list[inc.Table]

    @property
    def sizes(self) -> tuple[int, int, int, int]:
        return (len(self.char0_ids),
                len(self.char2_ids) + len(self.char3_ids) + len(self.unrealizable),
                len(self.char2_ids), len(self.char3_ids))


def classify_candidates(candidate_tables: list[inc.Table],
                        certified: dict[str, tuple[int, inc.Table]]) -> Partition:
    """Partition candidates by certificates: corpus id -> (characteristic, table)."""
    by_table_char0: dict[inc.Table, str] = {}
    by_table_char2: dict[inc.Table, str] = {}
    by_table_char3: dict[inc.Table, str] = {}
    cand = set(candidate_tables)
    for cid, (char, table) in certified.items():
        if table not in cand:
            raise MismatchedCorpus(f"certified table for {cid} not among candidates")
        target = {0: by_table_char0, 2: by_table_char2, 3: by_table_char3}[char]
        if table in target:
            raise MismatchedCorpus(
                f"table certified twice in characteristic {char}: {cid} and {target[table]}")
        target[table] = cid
    unreal = [t for t in candidate_tables
              if t not in by_table_char0 and t not in by_table_char2
              and t not in by_table_char3]
    return Partition(by_table_char0, by_table_char2, by_table_char3, unreal)
