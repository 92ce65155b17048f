"""Case-level search harness: sequential or process-pool, deterministic reduction."""

from __future__ import annotations

import multiprocessing as mp
import os
import time
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass, field
from functools import lru_cache

from ..model.model import DEFAULT_TIME_LIMIT, SAT, TIMEOUT, UNSAT, solve
from ..plane import plane_of_order
from . import ten_secant as ts
from .cases import CaseResult, case_model, cases_digest, six_secant_i3_cases, six_secant_i4_cases

SEARCHES = ("ten-secant", "six-secant-i3", "six-secant-i4")
ENGINES = ("direct", "cp")


class SearchError(ValueError):
    pass


@dataclass
class SearchSummary:
    search: str
    engine: str
    total_cases: int
    case_range: tuple[int, int]
    results: list[CaseResult] = field(default_factory=list)
    wall_time: float = 0.0
    extra: dict = field(default_factory=dict)
    aborted: str | None = None

    @property
    def unsat(self) -> int:
        return sum(r.status == UNSAT for r in self.results)

    @property
    def sat(self) -> int:
        return sum(r.status == SAT for r in self.results)

    @property
    def timeouts(self) -> int:
        return sum(r.status == TIMEOUT for r in self.results)

    @property
    def complete(self) -> bool:
        lo, hi = self.case_range
        return self.aborted is None and len(self.results) == hi - lo

    @property
    def certified(self) -> bool:
        """Every requested case ran and was UNSAT."""
        return self.complete and self.unsat == len(self.results)

    def as_dict(self) -> dict:
        return {
            "search": self.search,
            "engine": self.engine,
            "total_cases": self.total_cases,
            "case_range": list(self.case_range),
            "cases_run": len(self.results),
            "unsat": self.unsat,
            "sat": self.sat,
            "timeouts": self.timeouts,
            "aborted": self.aborted,
            "certified": self.certified,
            "witnesses": [{"case_id": r.case_id, "points": r.witness} for r in self.results if r.witness],
            "wall_time": round(self.wall_time, 3),
            "extra": self.extra,
            "results": [r.as_dict() for r in self.results],
        }


# -- per-process caches -----------------------------------------------------------


@lru_cache(maxsize=None)
def _plane11():
    return plane_of_order(11)


@lru_cache(maxsize=None)
def case_list(search: str):
    p = _plane11()
    if search == "six-secant-i3":
        return six_secant_i3_cases(p)
    if search == "six-secant-i4":
        return six_secant_i4_cases(p)
    if search == "ten-secant":
        return ts.ten_secant_blocks()
    raise SearchError(f"unknown search {search!r}; choose one of {SEARCHES}")


def _solve_one(search: str, engine: str, index: int, time_limit: float | None, structural: bool) -> CaseResult:
    plane = _plane11()
    case = case_list(search)[index]
    t0 = time.perf_counter()
    if search == "ten-secant" and engine == "direct":
        covered, visited, found = ts.check_block_direct(case)
        witness = None
        if found:
            cfg = ts.find_in_block(case)[0]
            witness = _ten_secant_witness(plane, cfg)
        stats = {"covered": covered, "visited": visited, "found": found}
        stats["wall_time"] = round(time.perf_counter() - t0, 4)
        return CaseResult(case.index, SAT if found else UNSAT, witness, stats)
    cfg = ts.block_case(plane, case) if search == "ten-secant" else case
    res = solve(case_model(plane, cfg, structural=structural), time_limit)
    witness = res.witness.indices() if res.witness is not None else None
    return CaseResult(index, res.status, witness, res.stats)


def _ten_secant_witness(plane, cfg) -> list[int]:
    pts = [plane.point(ts.affine_to_point(x, y)).index for x, y in cfg]
    pts += [plane.point((1, a, 0)).index for a in range(1, 11)]
    return sorted(pts)


def parse_range(spec: str | None, total: int) -> tuple[int, int]:
    """``"i..j"`` (inclusive of i, exclusive of j) or ``None`` for all cases."""
    if spec is None:
        return 0, total
    try:
        lo_s, hi_s = spec.split("..")
        lo = int(lo_s) if lo_s else 0
        hi = int(hi_s) if hi_s else total
    except ValueError:
        raise SearchError(f"bad case range {spec!r}; expected i..j") from None
    if not 0 <= lo < hi <= total:
        raise SearchError(f"case range {spec!r} outside 0..{total}")
    return lo, hi


def default_jobs() -> int:
    env = os.environ.get("SEMIOVAL_JOBS")
    if env:
        return max(1, int(env))
    return 1


def run_search(
    search: str,
    engine: str = "cp",
    cases: tuple[int, int] | None = None,
    jobs: int = 1,
    time_limit: float | None = DEFAULT_TIME_LIMIT,
    structural: bool = True,
    progress=None,
) -> SearchSummary:
    """Run a case range; stops at the first SAT or TIMEOUT result.

    Results are sorted by case id whatever the completion order. With
    several jobs, cases already submitted when a run aborts still finish and
    are reported.
    """
    if engine not in ENGINES:
        raise SearchError(f"unknown engine {engine!r}")
    if engine == "direct" and search != "ten-secant":
        raise SearchError("the direct engine exists only for the ten-secant search")
    all_cases = case_list(search)
    lo, hi = cases if cases is not None else (0, len(all_cases))
    summary = SearchSummary(search, engine, len(all_cases), (lo, hi))
    t0 = time.perf_counter()
    results: dict[int, CaseResult] = {}

    def record(r: CaseResult):
        results[r.case_id] = r
        if progress is not None:
            progress(r)
        if r.status in (SAT, TIMEOUT) and summary.aborted is None:
            summary.aborted = f"case {r.case_id} {r.status}"

    if jobs <= 1:
        for i in range(lo, hi):
            record(_solve_one(search, engine, i, time_limit, structural))
            if summary.aborted:
                break
    else:
        ctx = mp.get_context("fork")
        with ProcessPoolExecutor(max_workers=jobs, mp_context=ctx) as pool:
            pending = set()
            nxt = lo
            while nxt < hi or pending:
                while nxt < hi and len(pending) < 2 * jobs and not summary.aborted:
                    pending.add(pool.submit(_solve_one, search, engine, nxt, time_limit, structural))
                    nxt += 1
                if not pending:
                    break
                done, pending = wait(pending, return_when=FIRST_COMPLETED)
                for f in done:
                    record(f.result())
                if summary.aborted:
                    nxt = hi
    summary.results = [results[k] for k in sorted(results)]
    summary.wall_time = time.perf_counter() - t0
    summary.extra = _extra(search, summary)
    return summary


def _extra(search: str, summary: SearchSummary) -> dict:
    all_cases = case_list(search)
    if search == "ten-secant":
        covered = sum(r.stats.get("covered", 0) for r in summary.results)
        out = {
            "stage_counts": list(ts.STAGE_COUNTS),
            "total_configurations": ts.TOTAL_CONFIGURATIONS,
            "printed_total": ts.PRINTED_TOTAL,
            "printed_total_discrepancy": ts.PRINTED_TOTAL - ts.TOTAL_CONFIGURATIONS,
            "blocks": ts.N_BLOCKS,
        }
        if summary.engine == "direct":
            out["configurations_covered"] = covered
            out["leaves_visited"] = sum(r.stats.get("visited", 0) for r in summary.results)
        return out
    return {"cases_sha256": cases_digest(all_cases)}
