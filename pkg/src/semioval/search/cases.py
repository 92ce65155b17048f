"""Case configurations for the PG(2,11) searches and the symmetry reductions behind them.

Six-secant coordinates: ``Q = (1,1,0)`` and ``R = (1,0,1)`` are joined by
the 6-secant ``n = [1,10,10]``; the other 6-secants through Q are
``l1 = [1,10,0]`` and ``l2 = [0,0,1]``, those through R are
``m1 = [1,0,10]`` and ``m2 = [0,1,0]``. The four points ``li & mj`` are
``(1,0,0), (0,1,0), (0,0,1)`` and ``(1,1,1)``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from itertools import combinations

from ..group import GroupSet, orbits, subgroup_fixing
from ..model.model import ConstraintModel, ModelError, build_base_model, constrain_size, force_secant
from ..plane import Plane

SIX = 6
SIZE = 25

Q6 = (1, 1, 0)
R6 = (1, 0, 1)
FIVE_LINES = {"l2": (0, 0, 1), "m2": (0, 1, 0), "m1": (1, 0, 10), "l1": (1, 10, 0), "n": (1, 10, 10)}
I_POINTS = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1))
I3_OUT = (1, 1, 1)


class CaseError(ValueError):
    pass


@dataclass(frozen=True)
class CaseConfig:
    """One starting configuration: point forcings plus exact secant sizes.

    ``core_secants`` belong to the case definition itself. ``secants``,
    ``max_secant`` (a cap on every line) and ``counts`` (exact sizes of
    point sets, which are also branched on first) are consequences of the
    case hypotheses that speed up the search and can be switched off.
    """

    case_id: int
    forced_in: tuple[int, ...]
    forced_out: tuple[int, ...] = ()
    secants: tuple[tuple[int, int], ...] = ()
    max_secant: int | None = None
    core_secants: tuple[tuple[int, int], ...] = ()
    counts: tuple[tuple[tuple[int, ...], int], ...] = ()
    size: int | None = SIZE
    description: str = ""

    def __post_init__(self):
        if set(self.forced_in) & set(self.forced_out):
            raise CaseError(f"case {self.case_id}: a point is forced both in and out")

    def as_dict(self) -> dict:
        return {
            "case_id": self.case_id,
            "forced_in": list(self.forced_in),
            "forced_out": list(self.forced_out),
            "secants": [list(s) for s in self.secants],
            "max_secant": self.max_secant,
            "core_secants": [list(s) for s in self.core_secants],
            "counts": [[list(p), k] for p, k in self.counts],
            "size": self.size,
            "description": self.description,
        }

    def check(self, plane: Plane) -> None:
        """Secant forcings must be consistent with the point forcings."""
        for l, k in (*self.secants, *self.core_secants):
            pts = set(plane.points_on_line[l].tolist())
            n_in = len(pts & set(self.forced_in))
            n_out = len(pts & set(self.forced_out))
            if n_in > k or len(pts) - n_out < k:
                raise CaseError(f"case {self.case_id}: line {plane.triples[l]} cannot be a {k}-secant")


@dataclass
class CaseResult:
    case_id: int
    status: str
    witness: list[int] | None = None
    stats: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"case_id": self.case_id, "status": self.status, "witness": self.witness, "stats": self.stats}


def case_model(plane: Plane, cfg: CaseConfig, structural: bool = True) -> ConstraintModel:
    """Base model plus the case's forcings.

    With ``structural`` false only the size, point forcings and core
    secants are added; the derived secant sizes and the secant cap are left
    for the solver to rediscover.
    """
    m = build_base_model(plane)
    if cfg.size is not None:
        constrain_size(m, cfg.size)
    for p in cfg.forced_in:
        m.force(p, True)
    for p in cfg.forced_out:
        m.force(p, False)
    for l, k in cfg.core_secants:
        m.add(plane.points_on_line[l].tolist(), "==", k, label=f"{k}-secant {l}")
    if structural:
        for l, k in cfg.secants:
            force_secant(m, l, k)
        if cfg.max_secant is not None:
            for l in range(plane.n_lines):
                m.add(plane.points_on_line[l].tolist(), "<=", cfg.max_secant, label=f"cap {l}")
        for pts, k in cfg.counts:
            m.add(pts, "==", k, label=f"count {k}")
            m.branch_first.append(list(pts))
    return m


def cases_digest(cases) -> str:
    """SHA-256 over the canonical JSON of a case list."""
    h = hashlib.sha256()
    for c in cases:
        h.update(json.dumps(c.as_dict(), sort_keys=True).encode())
    return h.hexdigest()


# -- ten-secant symmetry reductions ------------------------------------------------

Q10 = (1, 0, 0)
R10 = (0, 1, 0)
TEN_SECANT = (0, 0, 1)
THREE_SECANT = (0, 1, 0)


def _pair_action(n: int):
    def act(g, x):
        a, b = divmod(x, n)
        a, b = int(g.line_perm[a]), int(g.line_perm[b])
        return min(a, b) * n + max(a, b)

    return act


def ten_secant_line_pair_orbits(plane: Plane) -> list[tuple[int, int]]:
    """Orbit representatives of pairs of 2-secants through Q.

    The group fixes Q, R and the 3-secant ``[0,1,0]``; the pairs range over
    the lines through Q other than the 10-secant and the 3-secant.
    Representatives are returned as ``(c, c')`` with the lines ``[0,1,c]``.
    """
    if plane.q != 11:
        raise CaseError("ten-secant reduction is specific to PG(2,11)")
    g = subgroup_fixing(plane, pointwise=[Q10, R10], setwise_lines=[THREE_SECANT])
    n = plane.n_lines
    skip = {plane.line(TEN_SECANT).index, plane.line(THREE_SECANT).index}
    qlines = [l for l in plane.lines_through_point[plane.point(Q10).index].tolist() if l not in skip]
    dom = [a * n + b for a, b in combinations(sorted(qlines), 2)]
    out = []
    for orb in orbits(dom, g, _pair_action(n)):
        # pick the representative containing [0,1,1] with the smallest partner
        pairs = [divmod(x, n) for x in orb]
        first = plane.line((0, 1, 1)).index
        with_first = sorted(b if a == first else a for a, b in pairs if first in (a, b))
        if not with_first:
            raise CaseError("an orbit of 2-secant pairs avoids [0,1,1]")
        out.append((1, plane.triples[with_first[0]][2]))
    return sorted(out)


def ten_secant_stage2_group(plane: Plane, c2: int) -> GroupSet:
    """Collineations fixing Q, R and the three non-tangent lines through Q."""
    return subgroup_fixing(plane, pointwise=[Q10, R10], setwise_lines=[THREE_SECANT, (0, 1, 1), (0, 1, c2)])


def is_doubly_transitive(plane: Plane, group: GroupSet, points) -> bool:
    pts = sorted(plane.point(p).index for p in points)
    n = plane.n_points
    dom = [a * n + b for a in pts for b in pts if a != b]

    def act(g, x):
        a, b = divmod(x, n)
        return int(g.perm[a]) * n + int(g.perm[b])

    return len(orbits(dom, group, act)) == 1


def ten_secant_third_point_options(plane: Plane, c2: int) -> list[int]:
    """Orbit representatives (x-coordinates) of the third 3-secant point once (0,0,1), (1,0,1) are fixed."""
    g = ten_secant_stage2_group(plane, c2)
    keep = [h for h in g if int(h.perm[plane.point((0, 0, 1)).index]) == plane.point((0, 0, 1)).index
            and int(h.perm[plane.point((1, 0, 1)).index]) == plane.point((1, 0, 1)).index]  # fmt: skip
    sub = GroupSet(plane, keep)
    x_of = {plane.point((x, 0, 1)).index: x for x in range(2, 11)}
    return sorted(min(x_of[p] for p in o) for o in orbits(list(x_of), sub))


# -- six-secant configuration --------------------------------------------------------


def five_lines(plane: Plane) -> dict[str, int]:
    return {k: plane.line(v).index for k, v in FIVE_LINES.items()}


def star_points(plane: Plane) -> set[int]:
    """Points on at least one of the five 6-secants."""
    out: set[int] = set()
    for l in five_lines(plane).values():
        out |= set(plane.points_on_line[l].tolist())
    return out


def special_points(plane: Plane) -> list[int]:
    return [plane.point(p).index for p in (Q6, R6, *I_POINTS)]


def _check_coordinatization(plane: Plane) -> None:
    fl = five_lines(plane)
    ok = plane.incident(Q6, fl["n"]) and plane.incident(R6, fl["n"])
    ok &= all(plane.incident(Q6, fl[k]) for k in ("l1", "l2"))
    ok &= all(plane.incident(R6, fl[k]) for k in ("m1", "m2"))
    meets = {plane.meet(fl[a], fl[b]).coords for a in ("l1", "l2") for b in ("m1", "m2")}
    if not ok or meets != set(I_POINTS):
        raise CaseError("six-secant coordinatization is inconsistent")


def off_star_count(inside_i: int) -> int:
    """Points of a 25-set off the five 6-secants: 25 - (26 - |I & S|)."""
    return SIZE - (26 - inside_i)


def p_candidates(plane: Plane) -> list[int]:
    star = star_points(plane)
    return [p for p in range(plane.n_points) if p not in star]


def first_line_candidates(plane: Plane, p: int) -> list[int]:
    """Lines through ``p`` meeting the five lines in five distinct points.

    These are the lines through ``p`` avoiding Q, R and the four points of I
    (each of which lies on two of the five lines).
    """
    bad = {int(plane.join_table[p, s]) for s in special_points(plane)}
    return [l for l in plane.lines_through_point[p].tolist() if l not in bad]


def i3_group(plane: Plane) -> GroupSet:
    """Collineations preserving {Q, R}, the three points of I in the set, and (1,1,1)."""
    inside = [p for p in I_POINTS if p != I3_OUT]
    return subgroup_fixing(plane, pointwise=[I3_OUT], setwise_points=[[Q6, R6], inside])


def i4_group(plane: Plane) -> GroupSet:
    return subgroup_fixing(plane, setwise_points=[[Q6, R6], list(I_POINTS)])


def p_orbits(plane: Plane, which: str) -> list[list[int]]:
    if which not in ("i3", "i4"):
        raise CaseError(f"unknown six-secant branch {which!r}")
    g = i3_group(plane) if which == "i3" else i4_group(plane)
    return orbits(p_candidates(plane), g)


def _intersections(plane: Plane, line: int) -> list[int]:
    pts = [plane.meet(line, l).index for l in five_lines(plane).values()]
    if len(set(pts)) != 5:
        raise CaseError("chosen 6-secant does not meet the five lines in distinct points")
    return pts


def _require_11(plane: Plane):
    if plane.q != 11:
        raise CaseError("six-secant cases are specific to PG(2,11)")
    _check_coordinatization(plane)


def six_secant_i3_cases(plane: Plane) -> list[CaseConfig]:
    """P ranges over orbit representatives, then unordered pairs of candidate lines."""
    _require_11(plane)
    base_in = [plane.point(p).index for p in (*[x for x in I_POINTS if x != I3_OUT], Q6, R6)]
    out_pt = plane.point(I3_OUT).index
    fives = list(five_lines(plane).values())
    off = ((tuple(p_candidates(plane)), off_star_count(3)),)
    cases = []
    for orb in p_orbits(plane, "i3"):
        p = orb[0]
        for a, b in combinations(first_line_candidates(plane, p), 2):
            forced = set(base_in) | {p}
            for l in (a, b):
                forced |= set(_intersections(plane, l))
            cfg = CaseConfig(
                case_id=len(cases),
                forced_in=tuple(sorted(forced)),
                forced_out=(out_pt,),
                secants=tuple((l, SIX) for l in (*fives, a, b)),
                max_secant=SIX,
                counts=off,
                description=f"i3 P={plane.triples[p]} 6-secants {plane.triples[a]} {plane.triples[b]}",
            )
            cfg.check(plane)
            cases.append(cfg)
    return cases


def six_secant_i4_cases(plane: Plane) -> list[CaseConfig]:
    """P over orbit representatives, a first 6-secant among the candidates,
    and the second 6-secant any other line through P (ordered choice)."""
    _require_11(plane)
    base_in = [plane.point(p).index for p in (*I_POINTS, Q6, R6)]
    fives = list(five_lines(plane).values())
    off = ((tuple(p_candidates(plane)), off_star_count(4)),)
    cases = []
    for orb in p_orbits(plane, "i4"):
        p = orb[0]
        for a in first_line_candidates(plane, p):
            forced = tuple(sorted(set(base_in) | {p} | set(_intersections(plane, a))))
            for b in plane.lines_through_point[p].tolist():
                if b == a:
                    continue
                cfg = CaseConfig(
                    case_id=len(cases),
                    forced_in=forced,
                    secants=tuple((l, SIX) for l in (*fives, a)),
                    max_secant=SIX,
                    core_secants=((b, SIX),),
                    counts=off,
                    description=f"i4 P={plane.triples[p]} 6-secants {plane.triples[a]} then {plane.triples[b]}",
                )
                cfg.check(plane)
                cases.append(cfg)
    return cases


__all__ = [
    "CaseConfig",
    "CaseError",
    "CaseResult",
    "ModelError",
    "case_model",
    "cases_digest",
    "first_line_candidates",
    "i3_group",
    "i4_group",
    "p_candidates",
    "p_orbits",
    "six_secant_i3_cases",
    "six_secant_i4_cases",
    "ten_secant_line_pair_orbits",
    "ten_secant_third_point_options",
]
