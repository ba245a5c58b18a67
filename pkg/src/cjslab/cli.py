"""Command line front end.

Exit codes: 0 success, 1 negative mathematical verdict (invalid formula,
failed ``--require`` query, unmet precondition such as a relational
representation of a non-DCJS), 2 usage, input or parse errors, 3 an
inconclusive decision (a resource cap was hit).
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .clans import RegionSet, enumerate_abstract_points, enumerate_clans
from .decider import KINDS, decide, decide_restricted_dcjs, enumerate_structures
from .logic import ParseError, parse_formula
from .representation import Embedding, relational_representation, set_representation, verify_embedding
from .standard import (
    FiniteTopology, family_cjs, finite_topology_rc, fixture_pr2nn, powerset_structure, relational_structure,
)
from .structures import (
    ConstructionError, FiniteJoinStructure, PreconditionError, StructureError, classify, validate_structure,
)


class UsageError(Exception):
    pass


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}: not valid JSON ({e.msg} at line {e.lineno})") from None


def load_structure(path: str) -> FiniteJoinStructure:
    raw = _read_json(path)
    if not isinstance(raw, dict):
        raise UsageError(f"{path}: expected a JSON object")
    return validate_structure(raw)


def _dump(obj) -> str:
    return json.dumps(obj, ensure_ascii=False)


def _fmt_set(S: FiniteJoinStructure, r: RegionSet) -> str:
    return "[" + ", ".join(r.sorted_members(S)) + "]"


def region_sets_from_json(S: FiniteJoinStructure, data: list) -> list[RegionSet]:
    """Inverse of the ``clans``/``points`` machine output."""
    out = []
    for item in data:
        for x in item["members"]:
            S.idx(x)
        out.append(RegionSet(frozenset(item["members"]), frozenset({item["kind"]})))
    return out


def embedding_from_dict(S: FiniteJoinStructure, data: dict) -> Embedding:
    points = tuple(data["points"])
    rel = data.get("relation")
    mapping = {a: frozenset(data["map"][a]) for a in S.elements}
    relation = None if rel is None else frozenset((p, q) for p, q in rel)
    return Embedding(points, mapping, relation)


# ---------------------------------------------------------------------------


def cmd_check(args) -> int:
    S = load_structure(args.file)
    c = classify(S)
    rep = c.contact_report
    if args.format == "json":
        print(_dump({
            "elements": len(S),
            "is_join_semilattice": c.is_join_semilattice,
            "contact_axioms": rep.verdicts,
            "contact_witnesses": {k: list(v) for k, v in rep.witnesses.items()},
            "satisfies_ad": c.satisfies_ad,
            "ad_witness": None if c.ad_witness is None else list(c.ad_witness),
            "schema_a1_witness": None if c.schema_a1_witness is None else list(c.schema_a1_witness),
            "schema_a_witness": None if c.schema_a_witness is None else list(c.schema_a_witness),
            "is_cjs": c.is_cjs,
            "is_dcjs": c.is_dcjs,
        }))
    else:
        yn = {True: "yes", False: "no"}
        print(f"elements: {len(S)}")
        print("bounded join-semilattice: yes")
        for ax, ok in rep.verdicts.items():
            extra = "" if ok else f"  witness ({', '.join(rep.witnesses[ax])})"
            print(f"axiom {ax}: {yn[ok]}{extra}")
        extra = "" if c.ad_witness is None else f"  witness ({', '.join(c.ad_witness)})"
        print(f"(ad): {yn[c.satisfies_ad]}{extra}")
        if c.schema_a1_witness:
            print(f"schema A1: no  witness ({', '.join(c.schema_a1_witness)})")
        if c.schema_a_witness:
            print(f"schema A: no  witness ({', '.join(c.schema_a_witness)})")
        print(f"CJS: {yn[c.is_cjs]}")
        print(f"DCJS: {yn[c.is_dcjs]}")
    if args.require == "cjs" and not c.is_cjs:
        return 1
    if args.require == "dcjs" and not c.is_dcjs:
        return 1
    return 0


def _cmd_sets(args, enumerate_fn) -> int:
    S = load_structure(args.file)
    sets = enumerate_fn(S)
    if args.format == "json":
        print(_dump([r.to_dict(S) for r in sets]))
    else:
        for r in sets:
            print(_fmt_set(S, r))
        print(f"total: {len(sets)}")
    return 0


def cmd_represent(args) -> int:
    S = load_structure(args.file)
    if args.mode == "set":
        E = set_representation(S)
    else:
        E = relational_representation(S, strategy=args.strategy)
    rep = verify_embedding(S, E)
    if args.format == "json":
        d = E.to_dict(S)
        d["verified"] = rep.clauses
        print(_dump(d))
    else:
        print(f"points: {len(E.points)}")
        for p in E.points:
            print(f"  {p} = {_fmt_set(S, E.point_sets[p])}")
        if E.relation is not None:
            rel = sorted(E.relation, key=lambda pq: (E.points.index(pq[0]), E.points.index(pq[1])))
            print("relation: " + " ".join(f"{p}-{q}" for p, q in rel))
        for a in S.elements:
            print(f"  h({a}) = {{{', '.join(sorted(E.mapping[a], key=E.points.index))}}}")
        for k, ok in rep.clauses.items():
            print(f"{k}: {'ok' if ok else 'FAILED ' + str(rep.witnesses[k])}")
    return 0 if rep.ok else 1


def cmd_decide(args) -> int:
    phi = parse_formula(args.formula)
    run = decide_restricted_dcjs if args.dcjs else decide
    res = run(phi, mode=args.mode, max_reference_size=args.max_reference_size, max_work=args.max_work)
    if args.format == "json":
        out = {"verdict": res.verdict, "mode": res.mode, "bound": res.bound,
               "structures_examined": res.structures_examined, "work": res.work}
        if res.counterexample is not None:
            out["counterexample"] = res.counterexample.to_dict()
        if res.note:
            out["note"] = res.note
        print(_dump(out))
    else:
        print(res.verdict.upper())
        if res.counterexample is not None:
            print(_dump(res.counterexample.to_dict()))
        if res.note:
            print(res.note)
    if res.verdict == "valid":
        return 0
    return 1 if res.verdict == "invalid" else 3


def cmd_enumerate(args) -> int:
    if args.size < 1:
        raise UsageError("--size must be at least 1")
    counts: dict[int, int] = {}
    for S in enumerate_structures(args.size, args.kind, exact=args.exact):
        counts[len(S)] = counts.get(len(S), 0) + 1
        if not args.count_only:
            print(_dump(S.to_dict()))
    if args.count_only:
        total = sum(counts.values())
        if args.format == "json":
            print(_dump({"kind": args.kind, "counts": {str(k): v for k, v in sorted(counts.items())},
                         "total": total}))
        else:
            for k, v in sorted(counts.items()):
                print(f"size {k}: {v}")
            print(f"total: {total}")
    return 0


def _split_points(text: str) -> list[str]:
    return [p.strip() for p in text.split(",") if p.strip()]


def _split_family(text: str) -> list[list[str]]:
    return [_split_points(block) for block in text.split(";")]


def cmd_example(args) -> int:
    name = args.name
    if name == "pr2nn":
        S = fixture_pr2nn()
    elif name == "powerset":
        S = powerset_structure(_split_points(args.points or "1,2"))
    elif name == "relational":
        pts = _split_points(args.points or "1,2")
        rel = {(p, p) for p in pts}
        for edge in _split_points(args.relation or ""):
            p, _, q = edge.partition("-")
            rel |= {(p, q), (q, p)}
        fam = None if args.family is None else [[], pts] + _split_family(args.family)
        if fam is not None:
            fam = list(dict.fromkeys(frozenset(b) for b in fam))
        S = relational_structure(pts, rel, fam)
    elif name == "topology":
        if args.topology:
            T = FiniteTopology.from_dict(_read_json(args.topology))
        else:
            pts = _split_points(args.points or "1,2")
            opens = {frozenset(), frozenset(pts)}
            if args.opens:
                opens |= {frozenset(b) for b in _split_family(args.opens)}
            T = FiniteTopology(tuple(pts), frozenset(opens))
        S = finite_topology_rc(T).structure
    elif name == "family":
        pts = _split_points(args.points or "1,2")
        fam = [[], pts] + (_split_family(args.family) if args.family else [])
        S = family_cjs(pts, list(dict.fromkeys(frozenset(b) for b in fam)))
    else:
        raise UsageError(f"unknown example {name!r}")
    print(_dump(S.to_dict()))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cjslab", description="Finite contact join-semilattices.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "json"), default="human")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="classify a structure file ('-' for stdin)")
    c.add_argument("file")
    c.add_argument("--require", choices=("cjs", "dcjs"), help="exit 1 unless the structure is of this kind")
    c.set_defaults(run=cmd_check)

    c = sub.add_parser("clans", parents=[common], help="list all clans")
    c.add_argument("file")
    c.set_defaults(run=lambda a: _cmd_sets(a, enumerate_clans))

    c = sub.add_parser("points", parents=[common], help="list all abstract points")
    c.add_argument("file")
    c.set_defaults(run=lambda a: _cmd_sets(a, enumerate_abstract_points))

    c = sub.add_parser("represent", parents=[common], help="build and verify a representation")
    c.add_argument("file")
    c.add_argument("--mode", choices=("set", "relational"), default="set")
    c.add_argument("--strategy", choices=("clan", "prime-ideal"), default="clan")
    c.set_defaults(run=cmd_represent)

    c = sub.add_parser("decide", parents=[common], help="decide validity of a formula")
    c.add_argument("formula")
    c.add_argument("--mode", choices=("auto", "reference", "generated"), default="auto")
    c.add_argument("--dcjs", action="store_true", help="search DCJS only")
    c.add_argument("--max-reference-size", type=int, default=7)
    c.add_argument("--max-work", type=int, default=None)
    c.set_defaults(run=cmd_decide)

    c = sub.add_parser("enumerate", parents=[common], help="structures up to isomorphism")
    c.add_argument("--size", type=int, required=True)
    c.add_argument("--kind", choices=KINDS, default="cjs")
    c.add_argument("--count-only", action="store_true")
    c.add_argument("--exact", action="store_true", help="only the given size")
    c.set_defaults(run=cmd_enumerate)

    c = sub.add_parser("example", parents=[common], help="emit a standard example structure")
    c.add_argument("name", choices=("pr2nn", "powerset", "relational", "topology", "family"))
    c.add_argument("--points", help="comma separated points, e.g. 1,2,3")
    c.add_argument("--relation", help="symmetric edges, e.g. 1-2,2-3 (reflexive pairs implied)")
    c.add_argument("--family", help="subsets separated by ';', e.g. '1;1,2' (empty set and W implied)")
    c.add_argument("--opens", help="open sets separated by ';' (empty set and whole space implied)")
    c.add_argument("--topology", help="topology JSON file {points, opens}")
    c.set_defaults(run=cmd_example)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.run(args)
    except ParseError as e:
        print(f"error: formula parse error: {e}", file=sys.stderr)
        return 2
    except StructureError as e:
        where = f" (field {e.field})" if e.field else ""
        print(f"error: malformed structure{where}: {e}", file=sys.stderr)
        return 2
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (PreconditionError, ConstructionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
