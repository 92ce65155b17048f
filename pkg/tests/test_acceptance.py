"""Acceptance suite: one PASS/FAIL line per criterion (see the terminal summary).

Criterion 5 runs fixed CI sub-ranges. Full-run reports found in
``reports/`` (or ``$SEMIOVAL_REPORTS``) are checked as well; setting
``SEMIOVAL_FULL=1`` runs the full case lists here instead.
"""

import json
import os
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from oracle import blocking_semiovals_by_enumeration
from semioval.analysis import PointSet, is_blocking_semioval, secant_spectrum, spectrum_solutions
from semioval.cli import main
from semioval.fixtures import SIZE26, fixture_path
from semioval.group import find_equivalence, stabilizer_of_set
from semioval.model.export import read_dimacs, to_dimacs, to_opb
from semioval.model.model import SAT, UNSAT, all_solutions, build_base_model, constrain_size, force_point
from semioval.plane import plane_of_order
from semioval.search import cases as cs
from semioval.search import run, small
from semioval.search import ten_secant as ts

from conftest import SEED

pytestmark = pytest.mark.acceptance

REPORTS = Path(os.environ.get("SEMIOVAL_REPORTS", Path(__file__).resolve().parents[1] / "reports"))
FULL = os.environ.get("SEMIOVAL_FULL") == "1"
RESULTS: dict[int, tuple[str, str]] = {}


def record(n, ok, detail):
    RESULTS[n] = ("PASS" if ok else "FAIL", detail)
    assert ok, f"criterion {n}: {detail}"


def _cli(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


def test_criterion_1_bounds(capsys):
    t0 = time.perf_counter()
    code, rep = _cli(capsys, "bounds", "--q", "11")
    dt = time.perf_counter() - t0
    r = rep["result"]
    ok = code == 0 and r["minimum_possible_size"] == 25 and r["excluded_secant_sizes"] == [7, 8, 9] and dt < 1.0
    record(1, ok, f"min size {r['minimum_possible_size']}, excluded {r['excluded_secant_sizes']}, {dt:.3f}s")


def test_criterion_2_size26(capsys):
    t0 = time.perf_counter()
    path = str(fixture_path(SIZE26))
    code_v, v = _cli(capsys, "verify", path, "--q", "11")
    code_s, s = _cli(capsys, "stabilizer", path, "--q", "11")
    dt = time.perf_counter() - t0
    spec = v["result"]["spectrum"]
    fixed = sorted(s["result"]["fixed_points"])
    ok = (
        code_v == 0
        and v["result"]["blocking_semioval"]
        and spec[10] == 1
        and spec[1] == 26
        and v["result"]["tangent_map"]["(0,0,1)"] == ["[1,0,0]"]
        and s["result"]["order"] == 5
        and fixed == ["(0,0,1)", "(0,1,0)", "(1,0,0)"]
        and dt < 10
    )
    record(2, ok, f"x10={spec[10]} x1={spec[1]} stabilizer order {s['result']['order']} fixing {fixed}, {dt:.2f}s")


def test_criterion_3_spectrum_identities():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    bad = 0
    for q in (2, 3, 5, 11):
        plane = plane_of_order(q)
        for _ in range(1000):
            density = rng.random()
            s = PointSet.from_mask(plane, rng.random(plane.n_points) < density)
            bad += not secant_spectrum(s).identities_hold()
    sols = spectrum_solutions(11, 25, 6)
    x6 = min(x[4] for x in sols)
    x4 = min(x[2] for x in sols)
    dt = time.perf_counter() - t0
    ok = bad == 0 and x6 == 9 and x4 == 2 and dt < 60
    record(3, ok, f"4000 random sets, {bad} violations; min x6={x6}, min x4={x4}, {dt:.1f}s")


def test_criterion_4_orbit_counts(capsys):
    plane = plane_of_order(11)
    pairs = cs.ten_secant_line_pair_orbits(plane)
    thirds = {c: cs.ten_secant_third_point_options(plane, c) for _, c in pairs}
    i3, i4 = cs.p_orbits(plane, "i3"), cs.p_orbits(plane, "i4")
    n3, n4 = len(cs.six_secant_i3_cases(plane)), len(cs.six_secant_i4_cases(plane))
    code, rep = _cli(capsys, "search", "ten-secant", "--cases", "0..1")
    extra = rep["result"]["extra"]
    ok = (
        len(pairs) == 5
        and all(len(t) == 9 for t in thirds.values())
        and len(i3) == 45
        and n3 == 760
        and len(i4) == 15
        and n4 == 1056
        and ts.TOTAL_CONFIGURATIONS == 47_628_000
        and extra["total_configurations"] == 47_628_000
        and extra["printed_total_discrepancy"] == 10_000
    )
    record(
        4,
        ok,
        f"ten-secant options {len(pairs)}, i3 {len(i3)} orbits/{n3} cases, i4 {len(i4)} orbits/{n4} cases, "
        f"total {ts.TOTAL_CONFIGURATIONS} (printed {ts.PRINTED_TOTAL}, flagged)",
    )


CI_RANGES = {
    ("six-secant-i3", "cp"): [(0, 20), (740, 760)],
    ("six-secant-i4", "cp"): [(0, 20), (1036, 1056)],
    ("ten-secant", "direct"): [(0, 60), (1200, 1260)],
    ("ten-secant", "cp"): [(0, 20)],
}
FULL_REPORTS = {
    ("six-secant-i3", "cp"): "sixsecanti3.json",
    ("six-secant-i4", "cp"): "sixsecanti4.json",
    ("ten-secant", "direct"): "tensecant_engine_direct.json",
    ("ten-secant", "cp"): "tensecant_engine_cp.json",
}


def _full_report_status(key):
    path = REPORTS / FULL_REPORTS[key]
    if not path.exists():
        return None, "no full-run report"
    r = json.loads(path.read_text())["result"]
    ok = r["certified"] and r["sat"] == 0 and r["cases_run"] == r["total_cases"]
    if key[0] == "ten-secant" and key[1] == "direct":
        ok = ok and r["extra"]["configurations_covered"] == ts.TOTAL_CONFIGURATIONS
    return ok, f"full report {r['unsat']}/{r['total_cases']} UNSAT in {r['wall_time']}s"


def test_criterion_5_branch_runs():
    t0 = time.perf_counter()
    parts, ok = [], True
    for key, ranges in CI_RANGES.items():
        search, engine = key
        if FULL:
            ranges = [(0, len(run.case_list(search)))]
        n = sat = 0
        for lo, hi in ranges:
            s = run.run_search(search, engine, (lo, hi), jobs=run.default_jobs())
            ok &= s.certified
            n += len(s.results)
            sat += s.sat
        ok &= sat == 0 and n >= 20
        full_ok, full_msg = _full_report_status(key)
        if full_ok is False:
            ok = False
        parts.append(f"{search}/{engine}: {n} cases UNSAT ({full_msg})")
    dt = time.perf_counter() - t0
    ok &= FULL or dt < 600
    record(5, ok, "; ".join(parts) + f"; {dt:.0f}s")


def test_criterion_6_small_minima():
    t0 = time.perf_counter()
    found, ok = {}, True
    for q, expected in ((3, 6), (4, 9), (5, 11)):
        r = small.min_blocking_semioval(q)
        found[q] = r.minimum
        ok &= r.minimum == expected and r.witness is not None and is_blocking_semioval(r.witness)
        ok &= len(r.witness) == expected
        ok &= small.decide_size(q, expected - 1) == UNSAT
    dt = time.perf_counter() - t0
    ok &= dt < 1800
    record(6, ok, f"minima {found}, UNSAT one below each, witnesses verified, {dt:.1f}s")


def test_criterion_7_rediscovery(capsys, size26):
    t0 = time.perf_counter()
    code, rep = _cli(capsys, "search", "diag", "--q", "11", "--a", "9", "--b", "4")
    plane = size26.plane
    sets = [PointSet(plane, [plane.index_of(tuple(int(c) for c in p.strip("()").split(","))) for p in x["points"]]) for x in rep["result"]["sets"]]
    good = [
        s
        for s in sets
        if len(s) == 26
        and is_blocking_semioval(s)
        and secant_spectrum(s)[10] == 1
        and stabilizer_of_set(plane, s.indices()).order == 5
        and find_equivalence(plane, size26.indices(), s.indices()) is not None
    ]
    dt = time.perf_counter() - t0
    ok = code == 0 and bool(good) and dt < 600
    record(7, ok, f"{len(sets)} invariant sets, {len(good)} equivalent to the shipped 26-point set, {dt:.1f}s")


def test_criterion_8_oracle_equivalence():
    t0 = time.perf_counter()
    ok, counts = True, {}
    for q in (2, 3):
        plane = plane_of_order(q)
        for n in range(1, min(8, plane.n_points) + 1):
            oracle = set(blocking_semiovals_by_enumeration(plane, n))
            m = build_base_model(plane)
            constrain_size(m, n)
            cp = {tuple(s.indices()) for s in all_solutions(m)}
            ok &= oracle == cp
            if oracle:
                counts[(q, n)] = len(oracle)
    ok &= not any(q == 2 for q, _ in counts)
    dt = time.perf_counter() - t0
    ok &= dt < 300
    record(8, ok, f"witness sets agree for all sizes <= 8; nonempty: {counts}; PG(2,2) none; {dt:.1f}s")


def test_criterion_9_export_round_trip(tmp_path):
    outs = []
    for i in range(2):
        for fmt in ("opb", "dimacs"):
            p = tmp_path / f"{i}.{fmt}"
            subprocess.run(
                [sys.executable, "-m", "semioval.cli", "export", "--q", "3", "--size", "6", "--format", fmt, "--out", str(p)],
                check=True,
                capture_output=True,
            )
            outs.append(p.read_bytes())
    stable = outs[0] == outs[2] and outs[1] == outs[3]
    m = build_base_model(plane_of_order(3))
    constrain_size(m, 6)
    native = m.engine().solve()
    try:
        from pysat.solvers import Solver
    except ImportError:
        RESULTS[9] = ("SKIP", "byte-stable; no external solver installed, run the documented manual step")
        assert stable
        pytest.skip("python-sat not installed")
    n_vars, clauses = read_dimacs(outs[1].decode())
    with Solver(name="cadical153", bootstrap_with=clauses) as s:
        external = SAT if s.solve() else UNSAT
    ok = stable and native == external == SAT and outs[0].decode() == to_opb(m) and outs[1].decode() == to_dimacs(m)
    record(9, ok, f"exports byte-stable: {stable}; native {native}, CaDiCaL {external} on q=3 size 6")
