"""Command-line interface: ``semioval <command> ...``.

Every command prints a JSON report (``report_version`` 1) and optionally
writes it to ``--report``. Exit codes: 0 success / verified, 1 verified
false, 2 usage error, 3 timeout.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from . import __version__
from .analysis import (
    KNOWN_MINIMA,
    UNIQUE_TEN_SECANT,
    PointSet,
    dover_bound_value,
    excluded_secant_sizes,
    is_blocking_semioval,
    is_blocking_set,
    is_semioval,
    lower_bound,
    lower_bound_dover,
    lower_bound_heger_takats,
    secant_bound_exclusions,
    secant_spectrum,
    tangent_map,
)
from .fixtures import fixture_names, fixture_path
from .gf import FieldError
from .group import GroupError, stabilizer_of_set
from .model.export import FORMATS, export_model
from .model.model import build_base_model, constrain_size
from .plane import PlaneError, load_points, plane_of_order

REPORT_VERSION = 1
EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_TIMEOUT = 0, 1, 2, 3
SCENARIOS = ("ten-secant", "i3", "i4")


class UsageError(Exception):
    pass


def _sha256(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _report(command: str, params: dict, q: int | None, result: dict, t0: float, inputs=()) -> dict:
    return {
        "report_version": REPORT_VERSION,
        "command": command,
        "parameters": params,
        "q": q,
        "result": result,
        "wall_time": f"{time.perf_counter() - t0:.3f}",
        "version": __version__,
        "inputs": {p: _sha256(p) for p in inputs},
    }


def _load_set(path: str, q: int) -> PointSet:
    plane = plane_of_order(q)
    pts = load_points(path, plane)
    if not pts:
        raise UsageError(f"{path}: no points")
    return PointSet(plane, pts)


def _fmt_point(plane, i) -> str:
    return "({},{},{})".format(*plane.triples[i])


def _fmt_line(plane, i) -> str:
    return "[{},{},{}]".format(*plane.triples[i])


# -- commands ------------------------------------------------------------------------


def cmd_verify(args, t0):
    s = _load_set(args.file, args.q)
    plane = s.plane
    spec = secant_spectrum(s)
    ok = is_blocking_semioval(s)
    result = {
        "size": s.size,
        "blocking": is_blocking_set(s),
        "semioval": is_semioval(s),
        "blocking_semioval": ok,
        "spectrum": list(spec.x),
        "tangent_map": {
            _fmt_point(plane, p): [_fmt_line(plane, l) for l in ls] for p, ls in tangent_map(s).items()
        },
    }
    return _report(args.command, {"file": args.file, "q": args.q}, args.q, result, t0, [args.file]), (
        EXIT_OK if ok else EXIT_FALSE
    )


def cmd_bounds(args, t0):
    q = args.q
    plane_of_order(q)  # validates q
    best = lower_bound(q)
    n = best if args.n is None else args.n
    dover = None
    if 8 * q >= 47:
        dover = {"value": lower_bound_dover(q), "expression": dover_bound_value(q)}
    try:
        by_bound = sorted(secant_bound_exclusions(q, n))
        all_excl = sorted(excluded_secant_sizes(q, n))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    structural = {}
    for s in all_excl:
        if s not in by_bound:
            structural[str(s)] = "full line" if s == q + 1 else "q-secant excluded at this size"
    result = {
        "dover": dover,
        "dover_applicable": dover is not None,
        "heger_takats": lower_bound_heger_takats(q),
        "minimum_possible_size": best,
        "size": n,
        "excluded_secant_sizes": by_bound,
        "also_excluded": structural,
        "at_most_one": ({str(UNIQUE_TEN_SECANT[(q, n)]): "at most one such secant"} if (q, n) in UNIQUE_TEN_SECANT else {}),
        "known_minimum": KNOWN_MINIMA.get(q),
    }
    return _report("bounds", {"q": q, "n": args.n}, q, result, t0), EXIT_OK


def cmd_stabilizer(args, t0):
    s = _load_set(args.file, args.q)
    plane = s.plane
    g = stabilizer_of_set(plane, s.indices())
    fixed = g.fixed_points()
    result = {
        "order": g.order,
        "fixed_points": [_fmt_point(plane, p) for p in fixed],
        "elements": [[list(r) for r in h.matrix] for h in g] if args.elements else None,
    }
    return _report("stabilizer", {"file": args.file, "q": args.q}, args.q, result, t0, [args.file]), EXIT_OK


def cmd_orbits(args, t0):
    from .search import cases as cs
    from .search import ten_secant as ts

    plane = plane_of_order(11)
    if args.scenario == "ten-secant":
        pairs = cs.ten_secant_line_pair_orbits(plane)
        thirds = {str(c): cs.ten_secant_third_point_options(plane, c) for _, c in pairs}
        g = cs.ten_secant_stage2_group(plane, pairs[0][1])
        result = {
            "two_secant_pairs": ["[0,1,1] & [0,1,{}]".format(c) for _, c in pairs],
            "count": len(pairs),
            "stage2_doubly_transitive": cs.is_doubly_transitive(plane, g, [(x, 0, 1) for x in range(11)]),
            "third_point_options": thirds,
            "stage_counts": list(ts.STAGE_COUNTS),
            "total_configurations": ts.TOTAL_CONFIGURATIONS,
            "printed_total": ts.PRINTED_TOTAL,
            "printed_total_discrepancy": ts.PRINTED_TOTAL - ts.TOTAL_CONFIGURATIONS,
        }
    else:
        orbs = cs.p_orbits(plane, args.scenario)
        cases = cs.six_secant_i3_cases(plane) if args.scenario == "i3" else cs.six_secant_i4_cases(plane)
        result = {
            "p_orbits": len(orbs),
            "orbit_sizes": [len(o) for o in orbs],
            "representatives": [_fmt_point(plane, o[0]) for o in orbs],
            "first_line_candidates": [len(cs.first_line_candidates(plane, o[0])) for o in orbs],
            "cases": len(cases),
            "cases_sha256": cs.cases_digest(cases),
        }
    return _report("orbits", {"scenario": args.scenario}, 11, result, t0), EXIT_OK


def cmd_export(args, t0):
    if args.scenario:
        from .search import cases as cs
        from .search import run as rn
        from .search import ten_secant as ts

        plane = plane_of_order(11)
        name = {"i3": "six-secant-i3", "i4": "six-secant-i4"}.get(args.scenario, args.scenario)
        lst = rn.case_list(name)
        if not 0 <= args.case < len(lst):
            raise UsageError(f"case {args.case} outside 0..{len(lst) - 1}")
        c = lst[args.case]
        cfg = ts.block_case(plane, c) if name == "ten-secant" else c
        model = cs.case_model(plane, cfg)
        q = 11
    else:
        if args.q is None:
            raise UsageError("export needs --q or --scenario")
        q = args.q
        model = build_base_model(plane_of_order(q))
        if args.size is not None:
            constrain_size(model, args.size)
    text = export_model(model, args.format, args.out)
    result = {
        "format": args.format,
        "out": args.out,
        "sha256": hashlib.sha256(text.encode()).hexdigest(),
        "variables": model.n_vars,
    }
    params = {"q": args.q, "size": args.size, "scenario": args.scenario, "case": args.case, "format": args.format}
    return _report("export", params, q, result, t0), EXIT_OK


def cmd_fixtures(args, t0):
    if args.name is None:
        result = {"fixtures": fixture_names()}
    else:
        if args.name not in fixture_names():
            raise UsageError(f"unknown fixture {args.name!r}")
        result = {"name": args.name, "path": str(fixture_path(args.name))}
    return _report("fixtures", {"name": args.name}, None, result, t0), EXIT_OK


def cmd_search(args, t0):
    from .search import run as rn
    from .search import small

    tl = args.time_limit_per_case
    params = {k: v for k, v in vars(args).items() if k not in ("func", "report", "command")}
    if args.search in rn.SEARCHES:
        engine = args.engine or ("direct" if args.search == "ten-secant" else "cp")
        total = len(rn.case_list(args.search))
        rng = rn.parse_range(args.cases, total)
        progress = None
        if args.verbose:
            def progress(r):
                print(f"case {r.case_id}: {r.status}", file=sys.stderr, flush=True)
        jobs = args.jobs if args.jobs is not None else rn.default_jobs()
        summary = rn.run_search(args.search, engine, rng, jobs, tl, not args.literal_model, progress)
        result = summary.as_dict()
        result["wall_time"] = f"{summary.wall_time:.3f}"
        if not args.full_results:
            result.pop("results")
        if summary.timeouts:
            code = EXIT_TIMEOUT
        elif summary.sat:
            code = EXIT_FALSE
        else:
            code = EXIT_OK if summary.certified else EXIT_FALSE
        return _report("search", params, 11, result, t0), code
    if args.search == "ten-secant-variant":
        r = small.ten_secant_variant(args.cap or 28, tl)
        w = r.witness
        result = {"status": r.status, "size": None if w is None else w.size}
        if w is not None:
            result["spectrum"] = list(secant_spectrum(w).x)
            result["points"] = [_fmt_point(w.plane, p) for p in w.indices()]
        return _report("search", params, 11, result, t0), _status_code(r.status)
    if args.q is None:
        raise UsageError(f"search {args.search} needs --q")
    if args.search == "min":
        try:
            r = small.min_blocking_semioval(args.q, args.n_max, tl)
        except small.SearchTimeout as exc:
            return _report("search", params, args.q, {"error": str(exc)}, t0), EXIT_TIMEOUT
        return _report("search", params, args.q, r.as_dict(), t0), EXIT_OK if r.minimum is not None else EXIT_FALSE
    if args.search == "diag":
        if args.a is None or args.b is None:
            raise UsageError("search diag needs --a and --b")
        cap = args.cap if args.cap is not None else 2 * args.q + 4
        try:
            found = small.diagonal_orbit_search(args.q, args.a, args.b, cap, args.structure, tl)
        except small.SearchTimeout as exc:
            return _report("search", params, args.q, {"error": str(exc)}, t0), EXIT_TIMEOUT
        plane = plane_of_order(args.q)
        out = []
        for s in found:
            spec = secant_spectrum(s)
            out.append({"size": s.size, "spectrum": list(spec.x), "points": [_fmt_point(plane, p) for p in s.indices()]})
        result = {"cap": cap, "found": len(found), "sizes": sorted({s.size for s in found}), "sets": out}
        return _report("search", params, args.q, result, t0), EXIT_OK if found else EXIT_FALSE
    raise UsageError(f"unknown search {args.search!r}")


def _status_code(status: str) -> int:
    return {"SAT": EXIT_OK, "UNSAT": EXIT_FALSE, "TIMEOUT": EXIT_TIMEOUT}[status]


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="semioval", description="Blocking semiovals in PG(2,q).")
    p.add_argument("--version", action="version", version=f"semioval {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--report", help="also write the JSON report to this file")

    for name in ("verify", "spectrum"):
        sp = sub.add_parser(name, help="check a point-set file (spectrum is an alias)")
        sp.add_argument("file")
        sp.add_argument("--q", type=int, required=True)
        common(sp)
        sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("bounds", help="lower bounds and excluded secant sizes")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", type=int, help="set size for the exclusions (default: the lower bound)")
    common(sp)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("stabilizer", help="collineation stabiliser of a point set")
    sp.add_argument("file")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--elements", action="store_true", help="list the matrices")
    common(sp)
    sp.set_defaults(func=cmd_stabilizer)

    sp = sub.add_parser("orbits", help="symmetry reductions of the PG(2,11) searches")
    sp.add_argument("scenario", choices=SCENARIOS)
    common(sp)
    sp.set_defaults(func=cmd_orbits)

    sp = sub.add_parser("export", help="write a model as OPB or DIMACS")
    sp.add_argument("--q", type=int)
    sp.add_argument("--size", type=int)
    sp.add_argument("--scenario", choices=("ten-secant", "i3", "i4"))
    sp.add_argument("--case", type=int, default=0)
    sp.add_argument("--format", choices=FORMATS, required=True)
    sp.add_argument("--out", required=True)
    common(sp)
    sp.set_defaults(func=cmd_export)

    sp = sub.add_parser("fixtures", help="list shipped fixtures or print one's path")
    sp.add_argument("name", nargs="?")
    common(sp)
    sp.set_defaults(func=cmd_fixtures)

    sp = sub.add_parser("search", help="case searches, minimum sizes, invariant sets")
    sp.add_argument(
        "search",
        choices=("ten-secant", "six-secant-i3", "six-secant-i4", "min", "diag", "ten-secant-variant"),
    )
    sp.add_argument("--q", type=int)
    sp.add_argument("--a", type=int)
    sp.add_argument("--b", type=int)
    sp.add_argument("--cap", type=int, help="size cap (diag, ten-secant-variant)")
    sp.add_argument("--structure", action="store_true", help="diag: force the fixed-triangle structure")
    sp.add_argument("--n-max", type=int, help="min: largest size tried")
    sp.add_argument("--engine", choices=("direct", "cp"))
    sp.add_argument("--jobs", type=int, help="worker processes (default $SEMIOVAL_JOBS or 1)")
    sp.add_argument("--time-limit-per-case", type=float, default=600.0)
    sp.add_argument("--cases", help="case sub-range i..j (j exclusive)")
    sp.add_argument("--literal-model", action="store_true",
                    help="six-secant: only the point forcings, no derived secant constraints")  # fmt: skip
    sp.add_argument("--full-results", action="store_true", help="include per-case results in the report")
    sp.add_argument("-v", "--verbose", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_search)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        report, code = args.func(args, t0)
    except (UsageError, PlaneError, FieldError, GroupError, ValueError, OSError) as exc:
        print(f"semioval: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = json.dumps(report, indent=2, sort_keys=False)
    print(text)
    if getattr(args, "report", None):
        Path(args.report).write_text(text + "\n", encoding="utf-8")
    return code


if __name__ == "__main__":
    sys.exit(main())
