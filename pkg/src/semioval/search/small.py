"""Minimum-size search, the diagonal-orbit search and the 26-point variant."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from ..analysis import PointSet, lower_bound
from ..group import GroupSet, cyclic_group, diagonal, orbits
from ..model.model import (
    DEFAULT_TIME_LIMIT,
    SAT,
    TIMEOUT,
    UNSAT,
    ConstraintModel,
    build_base_model,
    constrain_size,
    force_point,
    force_secant,
    solve,
)
from ..plane import Plane, plane_of_order
from . import ten_secant as ts
from .cases import case_model


class SearchTimeout(RuntimeError):
    pass


@dataclass
class MinResult:
    q: int
    minimum: int | None
    witness: PointSet | None
    attempts: list[dict] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "q": self.q,
            "minimum": self.minimum,
            "witness": self.witness.indices() if self.witness is not None else None,
            "attempts": self.attempts,
        }


def min_start(q: int) -> int:
    return max(lower_bound(q), q + 2)


def min_blocking_semioval(
    q: int,
    n_max: int | None = None,
    time_limit: float | None = DEFAULT_TIME_LIMIT,
    start: int | None = None,
) -> MinResult:
    """Smallest n with a blocking semioval of size n, trying n = start, start+1, ...

    Point (0,0,1) is forced into the set; the collineation group is
    transitive on points, so this loses nothing. ``minimum`` is None when
    no size up to ``n_max`` works.
    """
    plane = plane_of_order(q)
    n = min_start(q) if start is None else start
    n_max = plane.n_points if n_max is None else n_max
    out = MinResult(q, None, None)
    while n <= n_max:
        m = build_base_model(plane)
        constrain_size(m, n)
        force_point(m, 0, True)
        r = solve(m, time_limit)
        out.attempts.append({"size": n, "status": r.status, "stats": r.stats})
        if r.status == TIMEOUT:
            raise SearchTimeout(f"q={q} size {n} timed out")
        if r.status == SAT:
            out.minimum, out.witness = n, r.witness
            return out
        n += 1
    return out


def decide_size(q: int, n: int, time_limit: float | None = DEFAULT_TIME_LIMIT) -> str:
    """Status of "a blocking semioval of exactly n points exists" in PG(2,q)."""
    plane = plane_of_order(q)
    m = build_base_model(plane)
    constrain_size(m, n)
    force_point(m, 0, True)
    return solve(m, time_limit).status


# -- diagonal-orbit search ---------------------------------------------------------


def diagonal_group(plane: Plane, a: int, b: int) -> GroupSet:
    if not (0 < a < plane.q and 0 < b < plane.q):
        raise ValueError("a and b must be nonzero field elements")
    g = diagonal(plane, a, b)
    if g.is_identity():
        raise ValueError("diag(1,a,b) is the identity")
    return cyclic_group(g)


def invariant_model(plane: Plane, group: GroupSet, cap: int) -> ConstraintModel:
    """Base model, size <= cap, and every point/tangent variable constant on orbits."""
    m = build_base_model(plane)
    constrain_size(m, cap, "<=")
    n = plane.n_points
    point_orbits = orbits(range(n), group)
    for kind, orbs, off in (("point", point_orbits, 0), ("line", orbits(range(n), group, "line"), n)):
        for o in orbs:
            r = off + o[0]
            for x in o[1:]:
                m.add([off + x], "==", 1, guard=(r, True), label=f"{kind} orbit")
                m.add([off + x], "==", 0, guard=(r, False), label=f"{kind} orbit")
    m.branch_first = [[o[0] for o in point_orbits]]
    return m


def add_fixed_triangle_structure(m: ConstraintModel, group: GroupSet) -> None:
    """The fixed-triangle structure: [0,0,1] a (q-1)-secant missing (1,0,0) and
    (0,1,0), (0,0,1) in with tangent [1,0,0], and [0,1,0] meeting the set in
    (0,0,1) plus one point orbit."""
    plane = m.plane
    q = plane.q
    force_point(m, (1, 0, 0), False)
    force_point(m, (0, 1, 0), False)
    force_secant(m, (0, 0, 1), q - 1)
    force_point(m, (0, 0, 1), True)
    m.force(m.tangent_var((1, 0, 0)), True)
    force_secant(m, (0, 1, 0), 1 + group.order)


def diagonal_orbit_search(
    q: int,
    a: int,
    b: int,
    cap: int,
    structure: bool = False,
    time_limit: float | None = DEFAULT_TIME_LIMIT,
    max_results: int | None = None,
) -> list[PointSet]:
    """All blocking semiovals of at most ``cap`` points invariant under diag(1,a,b)."""
    plane = plane_of_order(q)
    g = diagonal_group(plane, a, b)
    m = invariant_model(plane, g, cap)
    if structure:
        add_fixed_triangle_structure(m, g)
    eng = m.engine()
    out = []
    t0 = time.perf_counter()
    status = eng.solve(time_limit)
    while status == SAT:
        out.append(m.verify_witness(eng.assignment()))
        if max_results is not None and len(out) >= max_results:
            return out
        left = None if time_limit is None else time_limit - (time.perf_counter() - t0)
        if left is not None and left <= 0:
            raise SearchTimeout("diagonal search timed out")
        status = eng.next_solution(left)
    if status == TIMEOUT:
        raise SearchTimeout("diagonal search timed out")
    assert status == UNSAT
    return out


def square_pairs(q: int) -> list[tuple[int, int]]:
    """Pairs (a, b) of nonzero squares with diag(1,a,b) not the identity."""
    f = plane_of_order(q).field
    sq = [s for s in f.squares() if s != 0]
    return [(a, b) for a in sq for b in sq if (a, b) != (1, 1)]


# -- ten-secant extras -------------------------------------------------------------


def ten_secant_variant(cap: int = 28, time_limit: float | None = DEFAULT_TIME_LIMIT):
    """The 10-secant setup without the size-25 equation: size <= cap,
    [0,0,1] a 10-secant missing (1,0,0) and (0,1,0)."""
    plane = plane_of_order(11)
    m = build_base_model(plane)
    constrain_size(m, cap, "<=")
    force_point(m, (1, 0, 0), False)
    force_point(m, (0, 1, 0), False)
    force_secant(m, (0, 0, 1), 10)
    return solve(m, time_limit)


def cross_engine_sample(n: int = 20, seed: int = 0, time_limit: float | None = 60.0) -> list[dict]:
    """Direct check vs constraint model on ``n`` random complete configurations."""
    plane = plane_of_order(11)
    rng = random.Random(seed)
    blocks = ts.ten_secant_blocks()
    out = []
    for _ in range(n):
        block = rng.choice(blocks)
        leaf = rng.randrange(ts.BLOCK_SIZE)
        for i, cfg in enumerate(ts.block_configurations(block)):
            if i == leaf:
                break
        direct = SAT if ts.tangent_check(cfg) else UNSAT
        r = solve(case_model(plane, ts.block_case(plane, block, full=cfg)), time_limit)
        out.append({"block": block.index, "leaf": leaf, "direct": direct, "cp": r.status})
    return out
