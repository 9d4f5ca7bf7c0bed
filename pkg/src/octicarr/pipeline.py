"""End-to-end verification pipeline and JSON report assembly.

Drives: candidate enumeration, certificate-based classification of the
candidates into characteristic-0 / characteristic-2 / characteristic-3
realizability, and per-record verification of the corpus (tables, profiles,
Euler characteristics, Hodge numbers, symmetry orders, Kummer pair counts).
Reports are deterministic for a fixed seed: keys are sorted and all scalars
are serialized through their canonical text forms.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import json

from . import incidence as inc
from .corpus import Corpus, EquationRecord, load_corpus
from .enumeration import (EnumerationResult, classify_candidates,
                          enumerate_triplets)
from .geometry import (Arrangement, euler_characteristic, generic_specialize,
                       hodge_numbers, incidence_table_of, is_octic_arrangement,
                       singularities)
from .scalar import serialize_scalar

SCHEMA_VERSION = "1"


def certificate_table(rec: EquationRecord, seed: int = 0) -> inc.Table:
    """Minimal incidence table certified by a corpus record.

    Characteristic zero: a generic specialization; positive characteristic:
    the family's generic vanishing pattern over F_p[A..].
    """
    fam = rec.family()
    if rec.characteristic == 0:
        arr = generic_specialize(fam, seed=seed)
        return inc.minimal_table(incidence_table_of(arr))[0]
    table = fam.generic_table()
    if not inc.validate(table).ok:
        raise ValueError(f"record {rec.id} has an invalid generic table")
    return inc.minimal_table(table)[0]


def classification_report(corpus: Corpus, result: EnumerationResult,
                          seed: int = 0) -> dict:
    certified = {}
    for rec in corpus.records:
        certified[rec.id] = (rec.characteristic, certificate_table(rec, seed))
    partition = classify_candidates(result.tables, certified)
    n0, nrest, n2, n3 = partition.sizes
    report = {
        "schema": SCHEMA_VERSION,
        "candidates": len(result.states),
        "stage_sizes": result.stage_sizes,
        "realizable_char0": n0,
        "not_realizable_char0": nrest,
        "realizable_char2": n2,
        "realizable_char3": n3,
        "certificates": {
            inc.table_to_text(t): cid
            for t, cid in sorted({**partition.char0_ids, **partition.char2_ids,
                                  **partition.char3_ids}.items())},
        "unrealizable_tables": sorted(
            inc.table_to_text(t) for t in partition.unrealizable),
    }
    return report


@dataclass
class RecordVerification:
    id: str
    field_tag: str
    nparams: int
    params: list[str] | None
    table: str
    minimal_table: str
    profile: dict
    chi: int
    h12: int | None
    h11: int | None
    symmetry_order: int
    kummer_pairs: int
    errors: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in (
            "id", "field_tag", "nparams", "params", "table", "minimal_table",
            "profile", "chi", "h12", "h11", "symmetry_order", "kummer_pairs",
            "errors")}


def verify_record(rec: EquationRecord, seed: int = 0,
                  with_hodge: bool = True) -> RecordVerification:
    fam = rec.family()
    errors: list[str] = []
    params = None
    if rec.characteristic == 0:
        arr = generic_specialize(fam, seed=seed)
        params = [serialize_scalar(v) for v in (arr.params or [])]
        ok, violations = is_octic_arrangement(arr)
        if not ok:
            errors.extend(violations)
        table = incidence_table_of(arr)
    else:
        arr = None
        table = fam.generic_table()
        if not inc.validate(table).ok:
            errors.append("generic table fails the table axioms")
    mt, _ = inc.minimal_table(table)
    prof = singularities(table)
    chi = euler_characteristic(prof)
    h12 = h11 = None
    if with_hodge and rec.characteristic == 0:
        try:
            h12, h11 = hodge_numbers(arr, table)
        except Exception as exc:  # pragma: no cover - collected, not raised
            errors.append(f"hodge: {exc}")
    sym_order = len(inc.invariant_permutations(table))
    kummer = len(inc.disjoint_quadruple_pairs(mt))
    return RecordVerification(
        rec.id, rec.field_tag, rec.nparams, params,
        inc.table_to_text(table), inc.table_to_text(mt),
        prof.counts, chi, h12, h11, sym_order, kummer, errors)


def _verify_one(args):
    rec, seed, with_hodge = args
    return verify_record(rec, seed=seed, with_hodge=with_hodge)


def verify_corpus(corpus: Corpus, candidates: list[inc.Table] | None = None,
                  seed: int = 0, jobs: int = 1, with_hodge: bool = True,
                  ids: list[str] | None = None) -> dict:
    records = corpus.records if ids is None else [corpus[i] for i in ids]
    work = [(rec, seed, with_hodge) for rec in records]
    if jobs > 1:
        import multiprocessing as mp
        with mp.Pool(jobs) as pool:
            results = pool.map(_verify_one, work)
    else:
        results = [_verify_one(w) for w in work]
    results.sort(key=lambda r: _id_key(r.id))
    by_table: dict[str, list[str]] = {}
    for r in results:
        if r.field_tag in ("Q", "Q(sqrt(5))", "Q(sqrt(-3))", "Q(i)"):
            by_table.setdefault(r.minimal_table, []).append(r.id)
    duplicates = {t: ids_ for t, ids_ in by_table.items() if len(ids_) > 1}
    report = {
        "schema": SCHEMA_VERSION,
        "seed": seed,
        "records": [r.as_dict() for r in results],
        "distinct_char0_tables": len(by_table),
        "duplicate_tables": duplicates,
        "record_errors": {r.id: r.errors for r in results if r.errors},
    }
    if candidates is not None:
        cand = set(candidates)
        missing = [r.id for r in results
                   if inc.table_from_text(r.minimal_table) not in cand]
        report["tables_outside_candidates"] = missing
    return report


def _id_key(rid: str):
    if rid.isdigit():
        return (0, int(rid), "")
    return (1, 0, rid)


def report_json(payload: dict) -> str:
    return json.dumps(payload, indent=1, sort_keys=True)
