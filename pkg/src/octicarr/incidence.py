"""Combinatorics of incidence tables for eight labeled planes.

An incidence table is a lexicographically sorted, duplicate-free list of
4-subsets of {1..8} (the quadruples of planes meeting in a point).  Derived
from it are the triple lines (3-subsets all of whose five containing
quadruples are present) and the fivefold points (5-subsets all of whose five
contained quadruples are present).  The symmetric group on eight letters acts
by relabeling; the canonical representative is the lexicographic minimum of
the orbit.

Tables are handled as sorted tuples of ranks into the fixed lexicographic
lists of all C(8,4)=70 quadruples / 56 triples / 56 quintuples, so that tuple
order and table order agree.  The full S8 scan used for canonical forms and
stabilizers is vectorized with numpy index tables (exact integer work only).
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations

import numpy as np

QUADS: tuple[tuple[int, int, int, int], ...] = tuple(combinations(range(1, 9), 4))
TRIPLES: tuple[tuple[int, int, int], ...] = tuple(combinations(range(1, 9), 3))
QUINTS: tuple[tuple[int, int, int, int, int], ...] = tuple(combinations(range(1, 9), 5))
PAIRS: tuple[tuple[int, int], ...] = tuple(combinations(range(1, 9), 2))

QUAD_RANK = {q: r for r, q in enumerate(QUADS)}
TRIPLE_RANK = {t: r for r, t in enumerate(TRIPLES)}
QUINT_RANK = {q: r for r, q in enumerate(QUINTS)}

QUAD_MASK = tuple(sum(1 << (i - 1) for i in q) for q in QUADS)
TRIPLE_MASK = tuple(sum(1 << (i - 1) for i in t) for t in TRIPLES)
QUINT_MASK = tuple(sum(1 << (i - 1) for i in q) for q in QUINTS)
_MASK_TO_QUAD = {m: r for r, m in enumerate(QUAD_MASK)}
_MASK_TO_TRIPLE = {m: r for r, m in enumerate(TRIPLE_MASK)}
_MASK_TO_QUINT = {m: r for r, m in enumerate(QUINT_MASK)}

# quadruple ranks containing a given triple / contained in a given quintuple
QUADS_OVER_TRIPLE = tuple(
    tuple(QUAD_RANK[tuple(sorted(t + (k,)))] for k in range(1, 9) if k not in t)
    for t in TRIPLES)
QUADS_UNDER_QUINT = tuple(
    tuple(QUAD_RANK[q] for q in combinations(qu, 4)) for qu in QUINTS)
TRIPLES_OF_QUAD = tuple(
    tuple(TRIPLE_RANK[t] for t in combinations(q, 3)) for q in QUADS)

Permutation = tuple[int, ...]  # images of 1..8, stored 0-indexed

IDENTITY: Permutation = tuple(range(8))


def perm_compose(g: Permutation, h: Permutation) -> Permutation:
    """(g then h): the composite sends x to h(g(x))."""
    return tuple(h[g[i]] for i in range(8))


def perm_inverse(g: Permutation) -> Permutation:
    inv = [0] * 8
    for i, gi in enumerate(g):
        inv[gi] = i
    return tuple(inv)


def perm_cycles(g: Permutation) -> str:
    """Cycle notation on letters 1..8, e.g. ``(1,2)(3,5)(4,6)(7,8)``."""
    seen = [False] * 8
    out = []
    for i in range(8):
        if seen[i] or g[i] == i:
            seen[i] = True
            continue
        cyc = [i]
        seen[i] = True
        j = g[i]
        while j != i:
            cyc.append(j)
            seen[j] = True
            j = g[j]
        out.append("(" + ",".join(str(k + 1) for k in cyc) + ")")
    return "".join(out) if out else "id"


def perm_from_cycles(text: str) -> Permutation:
    g = list(range(8))
    if text.strip() in ("", "id", "Id", "()"):
        return tuple(g)
    for part in text.replace(" ", "").strip(")").split(")"):
        part = part.lstrip("(")
        if not part:
            continue
        cyc = [int(x) - 1 for x in part.split(",")]
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            g[a] = b
    return tuple(g)


def _build_action_tables():
    perms = np.array(list(permutations(range(8))), dtype=np.int8)  # (40320, 8)

    def table(subsets, rank_of):
        idx = np.array(subsets, dtype=np.int8) - 1            # (n, k)
        images = perms[:, idx]                                # (40320, n, k)
        images = np.sort(images, axis=2)
        lookup = np.zeros((8,) * idx.shape[1], dtype=np.int8)
        for r, s in enumerate(subsets):
            lookup[tuple(i - 1 for i in s)] = r
        cols = tuple(images[:, :, j] for j in range(idx.shape[1]))
        return lookup[cols]

    return (perms,
            table(QUADS, QUAD_RANK),
            table(TRIPLES, TRIPLE_RANK),
            table(QUINTS, QUINT_RANK))


ALL_PERMS_NP, QUAD_ACTION, TRIPLE_ACTION, QUINT_ACTION = _build_action_tables()
ALL_PERMS: tuple[Permutation, ...] = tuple(map(tuple, ALL_PERMS_NP.tolist()))
N_PERMS = len(ALL_PERMS)


Table = tuple[int, ...]  # sorted tuple of quadruple ranks


def table_from_quadruples(quadruples) -> Table:
    ranks = {QUAD_RANK[tuple(sorted(q))] for q in quadruples}
    return tuple(sorted(ranks))


def table_quadruples(table: Table) -> list[tuple[int, int, int, int]]:
    return [QUADS[r] for r in table]


def table_to_text(table: Table) -> str:
    """Quadruples as 4-digit groups; the empty table prints as "-"."""
    if not table:
        return "-"
    return " ".join("".join(map(str, QUADS[r])) for r in table)


def table_from_text(line: str) -> Table:
    line = line.strip()
    if line in ("", "-"):
        return ()
    quads = []
    for grp in line.split():
        if len(grp) != 4 or not grp.isdigit():
            raise ValueError(f"bad quadruple group {grp!r}")
        quads.append(tuple(int(ch) for ch in grp))
    return table_from_quadruples(quads)


def apply_perm(table: Table, g: Permutation) -> Table:
    """Relabel planes by g; quadruples and the table are re-sorted."""
    out = []
    for r in table:
        q = QUADS[r]
        out.append(QUAD_RANK[tuple(sorted(g[i - 1] + 1 for i in q))])
    return tuple(sorted(out))


def apply_perm_triples(triples: tuple[int, ...], g: Permutation) -> tuple[int, ...]:
    out = []
    for r in triples:
        t = TRIPLES[r]
        out.append(TRIPLE_RANK[tuple(sorted(g[i - 1] + 1 for i in t))])
    return tuple(sorted(out))


def apply_perm_quints(quints: tuple[int, ...], g: Permutation) -> tuple[int, ...]:
    out = []
    for r in quints:
        q = QUINTS[r]
        out.append(QUINT_RANK[tuple(sorted(g[i - 1] + 1 for i in q))])
    return tuple(sorted(out))


def derive_triple_lines(table: Table) -> tuple[int, ...]:
    """Triples whose five containing quadruples all lie in the table."""
    tset = set(table)
    return tuple(t for t in range(56)
                 if all(q in tset for q in QUADS_OVER_TRIPLE[t]))


def derive_fivefold_points(table: Table) -> tuple[int, ...]:
    """Quintuples whose five contained quadruples all lie in the table."""
    tset = set(table)
    return tuple(q for q in range(56)
                 if all(r in tset for r in QUADS_UNDER_QUINT[q]))


@dataclass
class ValidityReport:
    l3: bool
    l4: bool
    l5: bool
    l6: bool
    failures: list[str]

    @property
    def ok(self) -> bool:
        return self.l3 and self.l4 and self.l5 and self.l6


def validate(table: Table) -> ValidityReport:
    """Check the local axioms of a plausible incidence table.

    l3: every pair of quadruples sharing 3 indices is resolved by a derived
        triple line or fivefold point; l4: triple lines pairwise share at most
        one index; l5: fivefold points pairwise share at most three; l6: at
        most four of each.
    """
    failures: list[str] = []
    t3 = derive_triple_lines(table)
    t5 = derive_fivefold_points(table)
    t3_masks = [TRIPLE_MASK[t] for t in t3]
    t5_masks = [QUINT_MASK[q] for q in t5]
    t3_set = set(t3_masks)
    t5_set = set(t5_masks)
    l3 = True
    masks = [QUAD_MASK[r] for r in table]
    for i in range(len(masks)):
        for j in range(i + 1, len(masks)):
            inter = masks[i] & masks[j]
            if bin(inter).count("1") != 3:
                continue
            union = masks[i] | masks[j]
            if inter not in t3_set and union not in t5_set:
                l3 = False
                failures.append(
                    f"l3: {QUADS[table[i]]} and {QUADS[table[j]]} unresolved")
    l4 = True
    for i in range(len(t3_masks)):
        for j in range(i + 1, len(t3_masks)):
            if bin(t3_masks[i] & t3_masks[j]).count("1") > 1:
                l4 = False
                failures.append(f"l4: {TRIPLES[t3[i]]} and {TRIPLES[t3[j]]}")
    l5 = True
    for i in range(len(t5_masks)):
        for j in range(i + 1, len(t5_masks)):
            if bin(t5_masks[i] & t5_masks[j]).count("1") > 3:
                l5 = False
                failures.append(f"l5: {QUINTS[t5[i]]} and {QUINTS[t5[j]]}")
    l6 = len(t3) <= 4 and len(t5) <= 4
    if not l6:
        failures.append(f"l6: {len(t3)} triple lines, {len(t5)} fivefold points")
    return ValidityReport(l3, l4, l5, l6, failures)


def _orbit_rows(table: Table) -> np.ndarray:
    cols = QUAD_ACTION[:, list(table)]
    cols.sort(axis=1)
    return cols


def minimal_table(table: Table) -> tuple[Table, Permutation]:
    """Lexicographic minimum over all relabelings, with one witness permutation."""
    if not table:
        return (), IDENTITY
    rows = _orbit_rows(table)
    order = np.lexsort(tuple(rows[:, j] for j in reversed(range(rows.shape[1]))))
    best = order[0]
    return tuple(rows[best].tolist()), ALL_PERMS[best]


def minimal_witnesses(table: Table) -> tuple[Table, np.ndarray]:
    """Minimal table plus the indices of every permutation attaining it."""
    if not table:
        return (), np.arange(N_PERMS)
    rows = _orbit_rows(table)
    order = np.lexsort(tuple(rows[:, j] for j in reversed(range(rows.shape[1]))))
    best = rows[order[0]]
    hits = np.nonzero((rows == best).all(axis=1))[0]
    return tuple(best.tolist()), hits


def invariant_permutations(table: Table) -> list[Permutation]:
    """All relabelings fixing the table; the result is a group."""
    if not table:
        return list(ALL_PERMS)
    rows = _orbit_rows(table)
    target = np.array(sorted(table), dtype=np.int8)
    hits = np.nonzero((rows == target).all(axis=1))[0]
    return [ALL_PERMS[i] for i in hits.tolist()]


def disjoint_quadruple_pairs(table: Table) -> list[tuple[tuple, tuple]]:
    """Unordered pairs of table quadruples with empty intersection."""
    out = []
    for i in range(len(table)):
        for j in range(i + 1, len(table)):
            if QUAD_MASK[table[i]] & QUAD_MASK[table[j]] == 0:
                out.append((QUADS[table[i]], QUADS[table[j]]))
    return out
