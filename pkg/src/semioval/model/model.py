"""The Boolean model of a blocking semioval.

Variables: one per point (``in the set``) and one per line (``is a
tangent``). The base model has three guarded families, for every line ``l``
and point ``P``::

    tangent(l)      =>  sum(points on l) == 1
    not tangent(l)  =>  sum(points on l) >= 2
    point(P)        =>  sum(tangent lines through P) == 1

Solutions are exactly the blocking semiovals. Case searches add size,
point and secant forcings on top.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from ..analysis import PointSet, is_blocking_semioval
from ..plane import Plane
from .engine import SAT, TIMEOUT, UNSAT, EngineStats, LinearConstraint, PBEngine, normalize_linear

DEFAULT_TIME_LIMIT = 600.0

COMPARATORS = ("==", ">=", "<=")


class ModelError(ValueError):
    pass


class WitnessError(RuntimeError):
    """A solver witness failed re-verification; this is a solver bug."""


@dataclass(frozen=True)
class CardConstraint:
    """``[guard =>] sum(vars) <cmp> bound``; ``guard`` is ``(var, polarity)`` or None."""

    vars: tuple[int, ...]
    cmp: str
    bound: int
    guard: tuple[int, bool] | None = None
    label: str = ""

    def bounds(self) -> tuple[int, int]:
        n = len(self.vars)
        if self.cmp == "==":
            return self.bound, self.bound
        if self.cmp == ">=":
            return self.bound, n
        return 0, self.bound

    def holds(self, values) -> bool:
        if self.guard is not None and bool(values[self.guard[0]]) != self.guard[1]:
            return True
        lo, hi = self.bounds()
        s = int(sum(int(values[v]) for v in self.vars))
        return lo <= s <= hi


@dataclass
class SolveResult:
    status: str
    witness: PointSet | None = None
    stats: dict = field(default_factory=dict)


class ConstraintModel:
    """Point/tangent Boolean variables plus guarded cardinality constraints.

    Variable ``i`` for ``i < N`` is point ``i``; variable ``N + l`` is the
    tangency of line ``l``.
    """

    def __init__(self, plane: Plane):
        self.plane = plane
        self.n = plane.n_points
        self.constraints: list[CardConstraint] = []
        self.forced: dict[int, bool] = {}
        self.has_base = False
        self.branch_first: list[list[int]] = []

    # -- variables ---------------------------------------------------------
    @property
    def n_vars(self) -> int:
        return 2 * self.n

    def point_var(self, p) -> int:
        return self.plane.point(p).index

    def tangent_var(self, l) -> int:
        return self.n + self.plane.line(l).index

    def var_name(self, v: int) -> str:
        if v < self.n:
            return "point {}:{}:{}".format(*self.plane.triples[v])
        return "tangent[{}:{}:{}]".format(*self.plane.triples[v - self.n])

    # -- constraints -------------------------------------------------------
    def add(self, vars: Sequence[int], cmp: str, bound: int, guard=None, label: str = "") -> None:
        if cmp not in COMPARATORS:
            raise ModelError(f"unknown comparator {cmp!r}")
        self.constraints.append(CardConstraint(tuple(int(v) for v in vars), cmp, int(bound), guard, label))

    def force(self, var: int, value: bool) -> None:
        value = bool(value)
        if var in self.forced and self.forced[var] != value:
            raise ModelError(f"{self.var_name(var)} already forced {self.forced[var]}")
        self.forced[var] = value

    def copy(self) -> ConstraintModel:
        m = ConstraintModel(self.plane)
        m.constraints = list(self.constraints)
        m.forced = dict(self.forced)
        m.has_base = self.has_base
        m.branch_first = [list(g) for g in self.branch_first]
        return m

    # -- export helpers ------------------------------------------------------
    def compile(self) -> tuple[list[LinearConstraint], dict[int, int]]:
        """Linear PB form used by the engine (tight big-M coefficients)."""
        out = []
        for c in self.constraints:
            out += _card_to_linear(c)
        units = {v: int(b) for v, b in self.forced.items()}
        return out, units

    def size_max(self) -> int | None:
        """Tightest unguarded upper bound on the number of points, if any."""
        best = None
        full = set(range(self.n))
        for c in self.constraints:
            if c.guard is None and c.cmp in ("==", "<=") and len(c.vars) == self.n and set(c.vars) == full:
                best = c.bound if best is None else min(best, c.bound)
        return best

    def engine(self, first_value: int = 1, pencil: bool = True) -> PBEngine:
        """Compile into a :class:`PBEngine`.

        With ``pencil`` and a size upper bound present, the engine also runs
        the pencil counting bound, which is sound for the base model only
        (it relies on every line being a tangent or a >=2-secant).
        Groups in ``branch_first`` are branched on before the lines.
        """
        cons, units = self.compile()
        lines = [list(row) for row in self.plane.points_on_line.tolist()]
        groups = [list(g) for g in self.branch_first] + lines
        priorities = [0] * len(self.branch_first) + [1] * len(lines)
        geometry = None
        hi = self.size_max()
        if pencil and hi is not None and self.has_base:
            geometry = (self.plane.points_on_line, self.plane.lines_through_point, hi)
        return PBEngine(self.n_vars, cons, units, groups, first_value, geometry, priorities)

    def check_assignment(self, values) -> bool:
        if any(bool(values[v]) != b for v, b in self.forced.items()):
            return False
        return all(c.holds(values) for c in self.constraints)

    def witness_from(self, values) -> PointSet:
        mask = np.asarray(values[: self.n]) == 1
        return PointSet.from_mask(self.plane, mask)

    def verify_witness(self, values) -> PointSet:
        w = self.witness_from(values)
        if not self.check_assignment(values) or not is_blocking_semioval(w):
            raise WitnessError("solver returned an assignment that does not verify")
        return w


def _card_to_linear(c: CardConstraint) -> list[LinearConstraint]:
    n = len(c.vars)
    lo, hi = c.bounds()
    out = []
    if c.guard is None:
        neg_guard = None
    else:
        gv, pol = c.guard
        neg_guard = 2 * gv + (1 if pol else 0)
    if lo > 0:
        terms = [(1, 2 * v) for v in c.vars]
        if neg_guard is not None:
            terms.append((lo, neg_guard))
        out.append(normalize_linear(terms, lo))
    if hi < n:
        k = n - hi
        terms = [(1, 2 * v + 1) for v in c.vars]
        if neg_guard is not None:
            terms.append((k, neg_guard))
        out.append(normalize_linear(terms, k))
    return out


def build_base_model(plane: Plane) -> ConstraintModel:
    """The three guarded families for every line and point: 3(q^2+q+1) constraints."""
    m = ConstraintModel(plane)
    n = m.n
    for l in range(n):
        pts = plane.points_on_line[l].tolist()
        t = n + l
        m.add(pts, "==", 1, guard=(t, True), label=f"tangent-line {l}")
        m.add(pts, ">=", 2, guard=(t, False), label=f"secant-line {l}")
    for p in range(n):
        tl = [n + l for l in plane.lines_through_point[p].tolist()]
        m.add(tl, "==", 1, guard=(p, True), label=f"unique-tangent {p}")
    m.has_base = True
    return m


def constrain_size(model: ConstraintModel, n: int, cmp: str = "==") -> None:
    model.add(range(model.n), cmp, n, label=f"size {cmp} {n}")


def force_point(model: ConstraintModel, p, inside: bool) -> None:
    model.force(model.point_var(p), inside)


def force_secant(model: ConstraintModel, l, k: int) -> None:
    """Force line ``l`` to meet the set in exactly ``k`` points."""
    plane = model.plane
    line = plane.line(l)
    pts = plane.points_on_line[line.index].tolist()
    if not 0 <= k <= len(pts):
        raise ModelError(f"secant size {k} impossible for a line of {len(pts)} points")
    forced_in = sum(1 for p in pts if model.forced.get(p) is True)
    forced_out = sum(1 for p in pts if model.forced.get(p) is False)
    if forced_in > k or len(pts) - forced_out < k:
        raise ModelError(f"{line} cannot be a {k}-secant given the forced points")
    if k >= 1:
        model.force(model.tangent_var(line), k == 1)
    model.add(pts, "==", k, label=f"{k}-secant {line}")


def solve(
    model: ConstraintModel,
    time_limit: float | None = DEFAULT_TIME_LIMIT,
    first_value: int = 1,
    pencil: bool = True,
) -> SolveResult:
    """Decide the model; SAT witnesses are re-verified before being returned."""
    eng = model.engine(first_value, pencil)
    status = eng.solve(time_limit)
    witness = None
    if status == SAT:
        witness = model.verify_witness(eng.assignment())
    return SolveResult(status, witness, eng.stats.as_dict())


def all_solutions(model: ConstraintModel, time_limit: float | None = None, pencil: bool = True) -> list[PointSet]:
    eng = model.engine(pencil=pencil)
    return [model.verify_witness(a) for a in eng.solutions(time_limit)]


__all__ = [
    "SAT",
    "TIMEOUT",
    "UNSAT",
    "CardConstraint",
    "ConstraintModel",
    "EngineStats",
    "ModelError",
    "SolveResult",
    "WitnessError",
    "all_solutions",
    "build_base_model",
    "constrain_size",
    "force_point",
    "force_secant",
    "solve",
]
