"""Command-line surface for the package.

One invocation maps to one library call: cache building, pointwise
queries, pattern generation, witness search, exhaustive thresholds, and
witness verification.  Output comes in two formats: human (plain lines,
timings allowed) and structured (a single JSON document with stable
field names; identical inputs produce byte-identical documents, so no
timing fields appear there).

Exit codes: 0 success or witness found; 1 search exhausted / nothing
found; 2 usage error; 3 a value or requested range beyond the table;
4 corrupt or inconsistent input documents.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import colorings as col
from . import ground
from . import hjlab
from . import patterns as pat
from . import search as srch
from .errors import (
    CorruptCacheError,
    EnumerationCapError,
    MalformedWitnessError,
    NotMemberError,
    OrderViolationError,
    OutOfDomainError,
    OutOfRangeError,
    PredicateMismatchError,
    ResourceBudgetError,
    SchemaViolationError,
)

DEFAULT_BUILD_LIMIT = 10**7
DEFAULT_CACHE_NAME = "sigma-default.sgt"
ENV_CACHE_DIR = "SQSTAR_CACHE_DIR"

_USAGE_ERRORS = (
    ValueError,
    NotMemberError,
    EnumerationCapError,
    ResourceBudgetError,
    OrderViolationError,
    OutOfDomainError,
)
_RANGE_ERRORS = (OutOfRangeError,)
_CORRUPT_ERRORS = (
    CorruptCacheError,
    PredicateMismatchError,
    SchemaViolationError,
    MalformedWitnessError,
)


class _CliError(Exception):
    """Usage-level problem detected after argparse."""


def _emit(args, doc: dict, human_lines) -> None:
    if args.format == "structured":
        sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    else:
        for line in human_lines:
            sys.stdout.write(str(line) + "\n")


def _emit_error(args, kind: str, message: str) -> None:
    if getattr(args, "format", "human") == "structured":
        doc = {"error": kind, "message": message}
        sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    else:
        sys.stderr.write(f"error ({kind}): {message}\n")


def _default_cache_path():
    d = os.environ.get(ENV_CACHE_DIR)
    if d:
        return os.path.join(d, DEFAULT_CACHE_NAME)
    return None


def _get_table(args, min_limit: int | None = None) -> ground.GroundTable:
    """Resolve the ground table: explicit cache, default cache, or build.

    An explicit cache that is too small is an out-of-range condition (the
    caller asked for values it cannot cover); with no cache at all an
    in-memory table is built at the default limit, enlarged if needed.
    """
    path = args.cache or _default_cache_path()
    if path and os.path.exists(path):
        table = ground.load_cache(path, "sigma")
        if min_limit is not None and table.limit < min_limit:
            raise OutOfRangeError(
                f"cache limit {table.limit} below required {min_limit}; rebuild it"
            )
        return table
    if args.cache:
        raise _CliError(f"cache file {args.cache} does not exist")
    limit = max(DEFAULT_BUILD_LIMIT, min_limit or 0)
    sys.stderr.write(
        f"warning: no cache configured, building an in-memory table "
        f"(limit {limit}); use build-cache and --cache to avoid this\n"
    )
    return ground.build_table(limit)


def _parse_monomial(token: str):
    """Parse "2:1,5:2" into [(2, 1), (5, 2)]; "-" is the empty monomial."""
    if token in ("-", ""):
        return []
    out = []
    for item in token.split(","):
        if ":" in item:
            t, _, e = item.partition(":")
            out.append((int(t), int(e)))
        else:
            out.append((int(item), 1))
    return out


def _parse_sets(token: str):
    return tuple(
        tuple(int(a) for a in group.split(",")) for group in token.split(";") if group
    )


def _parse_coloring(desc: str, bound: int | None) -> col.Coloring:
    """Build a coloring from a descriptor.

    Accepted forms: random:seed=S,r=R[,bound=B]; periodic:q=Q,r=R or
    periodic:q=Q,map=1;2[,bound=B]; file:PATH.  A bound given via flag
    fills in when the descriptor does not carry one.
    """
    kind, _, rest = desc.partition(":")
    if kind == "file":
        if not rest:
            raise _CliError("file coloring needs a path")
        return col.from_file(rest)
    fields = {}
    for item in rest.split(","):
        if "=" in item:
            key, _, val = item.partition("=")
            fields[key] = val
    if kind == "random":
        if "seed" not in fields or "r" not in fields:
            raise _CliError(f"random coloring needs seed= and r=, got {desc!r}")
        b = int(fields["bound"]) if "bound" in fields else bound
        if b is None:
            raise _CliError("random coloring needs a bound (flag --bound)")
        return col.random_coloring(int(fields["seed"]), int(fields["r"]), b)
    if kind == "periodic":
        if "q" not in fields:
            raise _CliError(f"periodic coloring needs q=, got {desc!r}")
        q = int(fields["q"])
        if "map" in fields:
            mapping = [int(c) for c in fields["map"].split(";")]
        elif "r" in fields:
            r = int(fields["r"])
            mapping = [(i % r) + 1 for i in range(q)]
        else:
            raise _CliError(f"periodic coloring needs r= or map=, got {desc!r}")
        b = int(fields["bound"]) if "bound" in fields else bound
        if b is None:
            raise _CliError("periodic coloring needs a bound (flag --bound)")
        return col.periodic_coloring(q, mapping, b)
    raise _CliError(f"unknown coloring descriptor {desc!r}")


def _build_spec(args, gen_tokens=None):
    """PatternSpec from family flags; gen_tokens only sizes fpf/deuber."""
    fam = args.family
    if fam == "fpf":
        k = args.k if args.k is not None else (len(gen_tokens) if gen_tokens else None)
        if k is None:
            raise _CliError("fpf needs --k (or explicit --gen entries)")
        return pat.FpF(k)
    if fam == "brauer":
        if args.k is None:
            raise _CliError("brauer needs --k")
        return pat.Brauer(args.k)
    if fam == "deuber":
        m = args.m
        if m is None and gen_tokens:
            m = len(gen_tokens) - 1
        if m is None or args.p is None:
            raise _CliError("deuber needs --m and --p")
        return pat.Deuber(m, args.p)
    if fam == "mt":
        if args.m is None or args.phi is None:
            raise _CliError("mt needs --m and --phi")
        return pat.MillikenTaylor(args.m, pat.phi_from_str(args.phi))
    if fam == "geo":
        if args.k is None:
            raise _CliError("geo needs --k")
        return pat.GeoArithmetic(args.k)
    if fam == "pvw":
        if args.d is None or args.sets is None:
            raise _CliError("pvw needs --d and --sets")
        return pat.PolyVdW(args.d, _parse_sets(args.sets))
    raise _CliError(f"unknown family {fam!r}")


def _build_generators(spec, tokens):
    """Generator assignment from the --gen tokens of the pattern command."""
    fam = pat.family_name(spec)
    try:
        if fam in ("fpf", "deuber", "mt"):
            return {"xs": [int(t) for t in tokens]}
        if fam == "brauer":
            if len(tokens) != 2:
                raise _CliError("brauer takes --gen X Z")
            return {"x": int(tokens[0]), "z": int(tokens[1])}
        if fam == "geo":
            if len(tokens) != 4:
                raise _CliError("geo takes --gen B GAMMA A D")
            return {
                "b": _parse_monomial(tokens[0]),
                "gamma": [int(t) for t in tokens[1].split(",")],
                "a": int(tokens[2]),
                "d": int(tokens[3]),
            }
        if fam == "pvw":
            if len(tokens) != 2:
                raise _CliError("pvw takes --gen B C")
            return {"b": _parse_monomial(tokens[0]), "c": int(tokens[1])}
    except ValueError as exc:
        raise _CliError(f"bad --gen value: {exc}") from exc
    raise _CliError(f"unknown family {fam!r}")


def _add_family_flags(sp):
    sp.add_argument("--family", required=True,
                    choices=["fpf", "brauer", "deuber", "mt", "geo", "pvw"])
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--p", type=int, default=None)
    sp.add_argument("--phi", type=str, default=None)
    sp.add_argument("--d", type=int, default=None)
    sp.add_argument("--sets", type=str, default=None)


def _word_pairs(word):
    return [[int(p), int(a)] for p, a in word.letters]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sqstar",
        description="Sums-of-two-squares counting semigroup: queries, "
        "pattern search, verification.",
    )
    ap.add_argument("--format", choices=["human", "structured"], default="human")
    ap.add_argument("--cache", type=str, default=None,
                    help="path to a binary ground-table cache")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-cache", help="sieve a table and write it to disk")
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--predicate", choices=["sigma"], default="sigma")
    p.add_argument("--out", type=str, required=True)

    p = sub.add_parser("member", help="two-squares membership of an integer")
    p.add_argument("n", type=int)

    p = sub.add_parser("op", help="induced product of two ranks")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)

    p = sub.add_parser("power", help="iterated induced product")
    p.add_argument("x", type=int)
    p.add_argument("n", type=int)

    p = sub.add_parser("rank", help="rank of a ground-set member")
    p.add_argument("s", type=int)

    p = sub.add_parser("element", help="member with a given rank")
    p.add_argument("n", type=int)

    p = sub.add_parser("fp", help="finite products of a rank sequence")
    p.add_argument("xs", type=int, nargs="+")

    p = sub.add_parser("pattern", help="generate one configuration")
    _add_family_flags(p)
    p.add_argument("--gen", type=str, nargs="+", required=True)

    p = sub.add_parser("search", help="find a monochromatic configuration")
    _add_family_flags(p)
    p.add_argument("--coloring", type=str, required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--gen-max", type=int, default=64)
    p.add_argument("--mode", choices=["det", "fast"], default="det")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--include-identity", action="store_true")
    p.add_argument("--out", type=str, default=None,
                   help="write the witness document here")

    p = sub.add_parser("threshold", help="exhaustive forcing bound, tiny sizes")
    _add_family_flags(p)
    p.add_argument("--colors", type=int, required=True)
    p.add_argument("--start-bound", type=int, default=2)
    p.add_argument("--max-bound", type=int, required=True)

    p = sub.add_parser("hj", help="located combinatorial line search")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ap-k", type=int, default=None)
    p.add_argument("--coloring", type=str, default=None)
    p.add_argument("--bound", type=int, default=100000)
    p.add_argument("--budget", type=int, default=None)

    p = sub.add_parser("phj", help="polynomial grid line search")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--colors", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--coloring", type=str, default=None)
    p.add_argument("--bound", type=int, default=100000)
    p.add_argument("--budget", type=int, default=None)

    p = sub.add_parser("verify", help="re-check a witness document")
    p.add_argument("--witness", type=str, required=True)
    p.add_argument("--coloring", type=str, default=None)
    p.add_argument("--bound", type=int, default=None)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return _dispatch(args)
    except _CliError as exc:
        _emit_error(args, "usage", str(exc))
        return 2
    except _RANGE_ERRORS as exc:
        _emit_error(args, "out-of-range", str(exc))
        return 3
    except _CORRUPT_ERRORS as exc:
        _emit_error(args, "corrupt-input", str(exc))
        return 4
    except _USAGE_ERRORS as exc:
        _emit_error(args, "usage", str(exc))
        return 2
    except FileNotFoundError as exc:
        _emit_error(args, "usage", str(exc))
        return 2


def _dispatch(args) -> int:
    cmd = args.command

    if cmd == "build-cache":
        table = ground.build_table(args.limit)
        ground.save_cache(table, args.out)
        doc = {
            "limit": table.limit,
            "size": table.size,
            "predicate": table.predicate_id,
            "path": args.out,
        }
        _emit(args, doc, [f"wrote {args.out}: {table.size} members below {table.limit}"])
        return 0

    if cmd == "member":
        ok = ground.is_member(args.n)
        _emit(args, {"n": args.n, "member": ok}, ["true" if ok else "false"])
        return 0

    if cmd == "op":
        table = _get_table(args)
        from .semigroup import star

        r = star(args.m, args.n, table)
        _emit(args, {"m": args.m, "n": args.n, "result": r}, [r])
        return 0

    if cmd == "power":
        table = _get_table(args)
        from .semigroup import power

        r = power(args.x, args.n, table)
        _emit(args, {"x": args.x, "n": args.n, "result": r}, [r])
        return 0

    if cmd == "rank":
        table = _get_table(args, min_limit=args.s + 1 if args.s >= 0 else None)
        r = table.rank(args.s)
        _emit(args, {"s": args.s, "rank": r}, [r])
        return 0

    if cmd == "element":
        table = _get_table(args)
        s = table.element(args.n)
        _emit(args, {"n": args.n, "element": s}, [s])
        return 0

    if cmd == "fp":
        table = _get_table(args)
        from .semigroup import finite_products

        vals = sorted(finite_products(args.xs, table))
        _emit(args, {"xs": args.xs, "products": vals},
              [" ".join(str(v) for v in vals)])
        return 0

    if cmd == "pattern":
        spec = _build_spec(args, gen_tokens=args.gen)
        gens = _build_generators(spec, args.gen)
        table = _get_table(args)
        config = pat.generate_configuration(spec, gens, table)
        doc = {
            "spec": pat.spec_to_doc(spec),
            "generators": pat.generators_to_doc(spec, gens),
            "configuration": [int(v) for v in config],
        }
        _emit(args, doc, [" ".join(str(v) for v in config)])
        return 0

    if cmd == "search":
        spec = _build_spec(args)
        coloring = _parse_coloring(args.coloring, args.bound)
        if coloring.bound < args.bound:
            raise _CliError(
                f"coloring bound {coloring.bound} below requested bound {args.bound}"
            )
        table = _get_table(args, min_limit=None)
        bounds = srch.SearchBounds(
            generator_max=args.gen_max,
            value_bound=args.bound,
            node_budget=args.budget,
            include_identity=args.include_identity,
        )
        mode = "deterministic" if args.mode == "det" else "fast"
        report = srch.find_witness(
            table, coloring, spec, bounds, mode=mode, workers=args.workers
        )
        doc = {
            "status": report.status,
            "nodes": report.nodes,
            "skipped": report.skipped_out_of_range,
            "mode": args.mode,
            "coloring": coloring.provenance,
            "witness": pat.witness_to_doc(report.witness) if report.witness else None,
        }
        human = [
            f"status: {report.status} (nodes {report.nodes}, "
            f"skipped {report.skipped_out_of_range}, {report.elapsed:.3f}s)"
        ]
        if report.witness:
            human.append(f"generators: {report.witness.generators}")
            human.append(
                "configuration: "
                + " ".join(str(v) for v in report.witness.configuration)
            )
            human.append(f"color: {report.witness.color}")
            if args.out:
                pat.save_witness(report.witness, args.out)
                human.append(f"witness written to {args.out}")
        _emit(args, doc, human)
        return 0 if report.found else 1

    if cmd == "threshold":
        spec = _build_spec(args)
        table = _get_table(args)
        n = srch.threshold(spec, args.colors, args.start_bound, args.max_bound, table)
        doc = {
            "spec": pat.spec_to_doc(spec),
            "colors": args.colors,
            "threshold": n,
        }
        _emit(args, doc, [n if n is not None else "none"])
        return 0 if n is not None else 1

    if cmd == "hj":
        table = _get_table(args)
        desc = args.coloring or f"random:seed=0,r={args.r}"
        coloring = _parse_coloring(desc, args.bound)
        wc = hjlab.word_coloring(coloring, table)
        rep = hjlab.hj_search(args.q, wc, args.n, ap_k=args.ap_k,
                              node_budget=args.budget)
        doc = {
            "status": rep.status,
            "nodes": rep.nodes,
            "skipped": rep.skipped,
            "coloring": coloring.provenance,
            "alpha": _word_pairs(rep.alpha) if rep.alpha is not None else None,
            "gamma": list(rep.gamma) if rep.gamma else None,
            "family-set": list(rep.family_set) if rep.family_set else None,
            "color": rep.color,
            "line": [_word_pairs(w) for w in rep.line] if rep.line else None,
        }
        human = [f"status: {rep.status} (nodes {rep.nodes}, skipped {rep.skipped})"]
        if rep.found:
            human.append(f"alpha: {_word_pairs(rep.alpha)}  gamma: {list(rep.gamma)}")
            if rep.family_set:
                human.append(f"family set: {list(rep.family_set)}")
            human.append(f"color: {rep.color}")
        _emit(args, doc, human)
        return 0 if rep.found else 1

    if cmd == "phj":
        table = _get_table(args)
        desc = args.coloring or f"random:seed=0,r={args.colors}"
        coloring = _parse_coloring(desc, args.bound)
        pc = hjlab.point_coloring(coloring, table)
        rep = hjlab.phj_search(args.q, args.colors, args.d, args.n, pc,
                               node_budget=args.budget)
        doc = {
            "status": rep.status,
            "nodes": rep.nodes,
            "skipped": rep.skipped,
            "coloring": coloring.provenance,
            "point": rep.point.to_doc() if rep.point is not None else None,
            "gamma": list(rep.gamma) if rep.gamma else None,
            "color": rep.color,
        }
        human = [f"status: {rep.status} (nodes {rep.nodes}, skipped {rep.skipped})"]
        if rep.found:
            human.append(f"gamma: {list(rep.gamma)}  color: {rep.color}")
        _emit(args, doc, human)
        return 0 if rep.found else 1

    if cmd == "verify":
        w = pat.load_witness(args.witness)
        if args.coloring:
            coloring = _parse_coloring(args.coloring, args.bound)
        else:
            coloring = col.from_provenance(w.coloring_provenance, args.bound)
        table = _get_table(args, min_limit=w.table_limit)
        ok = srch.verify_witness(w, coloring, table)
        doc = {"witness": args.witness, "valid": bool(ok)}
        _emit(args, doc, ["valid" if ok else "INVALID"])
        return 0 if ok else 1

    raise _CliError(f"unknown command {cmd!r}")


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
