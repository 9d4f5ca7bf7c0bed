"""Command-line interface.

Subcommands: enumerate, classify, analyze, symmetries, fibrations,
corpus-verify, report.  Exit codes: 0 success, 1 verification mismatch,
2 usage error.
"""
from __future__ import annotations

from fractions import Fraction
import argparse
import json
import sys

from . import incidence as inc
from .corpus import FIELD_TAGS, load_corpus, parse_equation, parse_record_line
from .corpus import EquationRecord, NPARAMS_MAX
from .geometry import (euler_characteristic, generic_specialize, hodge_numbers,
                       incidence_table_of, singularities)
from .pipeline import (classification_report, report_json, verify_corpus,
                       verify_record)
from .poly import Poly
from .scalar import serialize_scalar


def _load_candidates(path: str | None):
    from .enumeration import enumerate_triplets
    if path:
        tables = []
        with open(path) as f:
            for line in f:
                line = line.strip()
                if line:
                    tables.append(inc.table_from_text(line))
        return tables
    return enumerate_triplets().tables


def _record_from_arg(arg: str, char: int, field: str | None,
                     corpus=None) -> EquationRecord:
    corpus = corpus or load_corpus()
    if arg in corpus.by_id:
        return corpus[arg]
    with open(arg) as f:
        text = f.read().strip()
    if "|" in text:
        return parse_record_line(text)
    tag = field or {0: "Q", 2: "F2", 3: "F3"}[char]
    rows = parse_equation(text, FIELD_TAGS[tag])
    used = set()
    for row in rows:
        for p in row:
            used |= p.variables_used()
    nparams = max(used) + 1 if used else 0
    return EquationRecord("file", tag, nparams, rows)


def cmd_enumerate(args) -> int:
    from .enumeration import enumerate_triplets
    result = enumerate_triplets()
    lines = [inc.table_to_text(t) for t in result.tables]
    out = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as f:
            f.write(out)
    else:
        sys.stdout.write(out)
    print(f"# {len(result.states)} candidates; stage sizes {result.stage_sizes}",
          file=sys.stderr)
    return 0 if len(result.states) == 515 else 1


def cmd_classify(args) -> int:
    from .enumeration import EnumerationResult, enumerate_triplets
    corpus = load_corpus()
    if args.candidates:
        tables = _load_candidates(args.candidates)
        result = EnumerationResult([((), t, ()) for t in tables], [])
    else:
        result = enumerate_triplets()
    report = classification_report(corpus, result, seed=args.seed)
    summary = (f"{report['realizable_char0']} realizable / "
               f"{report['not_realizable_char0']} non-realizable "
               f"({report['realizable_char2']} char-2, "
               f"{report['realizable_char3']} char-3)")
    if args.format == "json":
        print(report_json(report))
    else:
        print(summary)
    ok = (report["realizable_char0"], report["not_realizable_char0"],
          report["realizable_char2"], report["realizable_char3"]) == (455, 60, 15, 1)
    return 0 if ok else 1


def _parse_params(raw: list[str] | None, rec: EquationRecord):
    if raw is None:
        return None
    vals = []
    for item in raw:
        vals.append(rec.ctx.coerce(Fraction(item)))
    return vals


def cmd_analyze(args) -> int:
    rec = _record_from_arg(args.target, args.char, args.field)
    fam = rec.family()
    payload = {"id": rec.id, "field": rec.field_tag, "nparams": rec.nparams}
    if rec.characteristic == 0:
        params = _parse_params(args.params, rec)
        arr = fam.specialize(params) if params is not None \
            else generic_specialize(fam, seed=args.seed)
        table = incidence_table_of(arr)
        payload["params"] = [serialize_scalar(v) for v in (params or arr.params or [])]
        h12, h11 = hodge_numbers(arr, table)
        payload["h12"], payload["h11"] = h12, h11
    else:
        params = _parse_params(args.params, rec)
        if params is not None:
            arr = fam.specialize(params)
            table = incidence_table_of(arr)
        else:
            table = fam.generic_table()
    mt, _ = inc.minimal_table(table)
    prof = singularities(table)
    payload["table"] = inc.table_to_text(table)
    payload["minimal_table"] = inc.table_to_text(mt)
    payload["profile"] = prof.counts
    payload["chi"] = euler_characteristic(prof)
    if args.format == "json":
        print(report_json(payload))
    else:
        print(f"record {payload['id']} over {payload['field']}")
        print("table:        ", payload["table"])
        print("minimal table:", payload["minimal_table"])
        print("profile:      ", " ".join(f"{k}={v}" for k, v in payload["profile"].items()))
        line = f"chi={payload['chi']}"
        if "h12" in payload:
            line += f" h12={payload['h12']} h11={payload['h11']}"
        print(line)
    return 0


def cmd_symmetries(args) -> int:
    from . import symmetry as sym
    rec = _record_from_arg(args.target, args.char, args.field)
    fam = rec.family()
    table = fam.generic_table()
    perms = inc.invariant_permutations(table)
    fp = sym.group_fingerprint(perms)
    payload = {
        "id": rec.id,
        "group_order": fp.order,
        "abelian": fp.abelian,
        "exponent": fp.exponent,
        "orbits": [list(o) for o in fp.orbits],
        "generators": [inc.perm_cycles(g) for g in fp.generators],
        "lifts": [],
    }
    names = [f"A{i}" for i in range(rec.nparams)] or ["A0"]
    use = perms if fp.order <= args.max_group_order else \
        [g for g in fp.generators]
    for g in use:
        if g == inc.IDENTITY:
            continue
        try:
            lift = sym.lift_permutation(fam, g)
        except sym.NoLift as exc:
            payload["lifts"].append({"sigma": inc.perm_cycles(g),
                                     "no_lift": str(exc)})
            continue
        entry = {
            "sigma": inc.perm_cycles(g),
            "phi_matrix": [[p.to_text(names) for p in row]
                           for row in lift.phi_matrix],
            "param_map": [p.to_text(names) for p in lift.param_map],
        }
        if rec.nparams:
            rep = sym.fixed_locus(lift.param_map, rec.nparams)
            entry["fixed_locus"] = {
                "whole_space": rep.whole_space,
                "points": [[serialize_scalar(c) for c in pt] for pt in rep.points],
                "linear_components": [[eq.to_text(names) for eq in comp]
                                      for comp in rep.linear_components],
                "quadric_components": [q.to_text(names)
                                       for q in rep.quadric_components],
                "unsolved": [q.to_text(names) for q in rep.unsolved],
            }
        payload["lifts"].append(entry)
    if rec.nparams and not args.no_distinguished:
        des = sym.distinguished_elements(fam)
        payload["distinguished"] = [
            [serialize_scalar(c) for c in d.point] for d in des]
    print(report_json(payload) if args.format == "json" else
          json.dumps(payload, indent=1, sort_keys=True))
    return 0


def cmd_fibrations(args) -> int:
    from . import fibration as fib
    rec = _record_from_arg(args.target, args.char, args.field)
    if rec.characteristic != 0:
        print("fibration reports need characteristic zero", file=sys.stderr)
        return 2
    fam = rec.family()
    params = _parse_params(args.params, rec)
    arr = fam.specialize(params) if params is not None \
        else generic_specialize(fam, seed=args.seed)
    table = incidence_table_of(arr)
    suite = fib.fibration_suite(arr, table)
    xaynames = ["x", "y", "z"]
    payload = {
        "id": rec.id,
        "kummer": [{
            "pair": [list(r.pair[0]), list(r.pair[1])],
            "surfaces": [{
                "quadruple": list(s.quadruple),
                "class": s.surface_class,
                "fibers": [{"type": t, "position": str(pos),
                            "pairs": [list(p) for p in prov]}
                           for t, pos, prov in s.fibers],
                "euler": s.euler_sum,
            } for s in r.surfaces],
        } for r in suite.kummer],
        "elliptic_points": [{
            "kind": r.kind, "planes": list(r.planes),
            "discriminant": _factored_text(r.discriminant, xaynames),
            "j_numerator": _factored_text(r.j_numerator, xaynames),
            "j_denominator": _factored_text(r.j_denominator, xaynames),
        } for r in suite.elliptic_points],
        "skew_lines": [{
            "kind": r.kind, "planes": list(r.planes),
            "discriminant": _factored_text(r.discriminant, ["u0", "u1", "v0", "v1"]),
        } for r in suite.skew_lines],
        "k3_sextic": [{
            "line": list(r.datum),
            "branch": [[p.to_text(["s"]) for p in trip] for trip in r.branch],
            "special": [{"kind": s.kind, "members": list(s.members),
                         "values": [serialize_scalar(v) for v in s.values],
                         "defining": s.defining.to_text(["s"]) if s.defining else None}
                        for s in r.special],
        } for r in suite.k3_sextic],
        "k3_quadric": [{
            "datum": [list(r.datum[0]), r.datum[1]],
            "multiplicity": r.multiplicity,
            "branch": [p.to_text(["p0", "p1", "q0", "q1", "l"])
                       for p in r.branch],
        } for r in suite.k3_quadric],
    }
    print(report_json(payload))
    return 0


def _factored_text(ff, names) -> dict:
    return {
        "constant": serialize_scalar(ff.constant),
        "factors": [[p.to_text(names), k] for p, k in ff.factors],
    }


def cmd_corpus_verify(args) -> int:
    corpus = load_corpus()
    candidates = _load_candidates(args.candidates) if (args.candidates or
                                                       not args.no_candidates) else None
    report = verify_corpus(corpus, candidates=candidates, seed=args.seed,
                           jobs=args.jobs, with_hodge=not args.no_hodge,
                           ids=args.ids.split(",") if args.ids else None)
    text = report_json(report)
    if args.out:
        with open(args.out, "w") as f:
            f.write(text + "\n")
    else:
        print(text)
    ok = (not report["record_errors"]
          and not report.get("tables_outside_candidates")
          and not report["duplicate_tables"])
    if args.ids is None and report["distinct_char0_tables"] != 455:
        ok = False
    return 0 if ok else 1


def cmd_report(args) -> int:
    args.no_candidates = False
    args.ids = None
    return cmd_corpus_verify(args)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="octicarr",
        description="Exact classification of eight-plane arrangements and "
                    "their double-cover Calabi-Yau threefolds.")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--char", type=int, default=0, choices=(0, 2, 3))
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--format", choices=("json", "text"), default="text")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("enumerate", help="emit the candidate incidence tables")
    p.add_argument("--out")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("classify", help="partition candidates by realizability")
    p.add_argument("--candidates", help="reuse an enumerate output file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("analyze", help="table, profile, Euler, Hodge of a record")
    p.add_argument("target", help="corpus id or equation file")
    p.add_argument("--params", nargs="*")
    p.add_argument("--field")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("symmetries", help="invariant permutations, lifts, fixed loci")
    p.add_argument("target")
    p.add_argument("--field")
    p.add_argument("--max-group-order", type=int, default=60)
    p.add_argument("--no-distinguished", action="store_true")
    p.set_defaults(func=cmd_symmetries)

    p = sub.add_parser("fibrations", help="all fibration reports for a record")
    p.add_argument("target")
    p.add_argument("--params", nargs="*")
    p.add_argument("--field")
    p.set_defaults(func=cmd_fibrations)

    p = sub.add_parser("corpus-verify", help="full corpus verification pipeline")
    p.add_argument("--candidates")
    p.add_argument("--no-candidates", action="store_true")
    p.add_argument("--no-hodge", action="store_true")
    p.add_argument("--ids", help="comma-separated record ids (subset run)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_corpus_verify)

    p = sub.add_parser("report", help="write the full JSON report")
    p.add_argument("--out", required=True)
    p.add_argument("--candidates")
    p.add_argument("--no-hodge", action="store_true")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    if not getattr(args, "command", None):
        parser.print_help()
        return 2
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
