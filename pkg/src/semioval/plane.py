"""The Desarguesian projective plane PG(2,q).

Points and lines are triples of field encodings normalised so the leftmost
nonzero coordinate is 1. The index of a point is the rank of its normalised
triple in lexicographic order; lines use the same indexing, so the line
``[a,b,c]`` has the same index as the point ``(a,b,c)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .gf import Field, FieldError, field_of_order

Triple = tuple[int, int, int]


class PlaneError(ValueError):
    pass


class PointFileError(PlaneError):
    pass


@dataclass(frozen=True, order=True)
class ProjPoint:
    index: int
    coords: Triple

    def __str__(self):
        return "({},{},{})".format(*self.coords)


@dataclass(frozen=True, order=True)
class ProjLine:
    index: int
    coeffs: Triple

    def __str__(self):
        return "[{},{},{}]".format(*self.coeffs)


def normalize(field: Field, v) -> Triple:
    v = tuple(int(c) for c in v)
    for c in v:
        if c:
            s = field.inv(c)
            return tuple(field.mul(s, x) for x in v)  # type: ignore[return-value]
    raise PlaneError("the zero vector is not a projective point")


def cross(field: Field, u, v) -> Triple:
    m, s = field.mul, field.sub
    return (
        s(m(u[1], v[2]), m(u[2], v[1])),
        s(m(u[2], v[0]), m(u[0], v[2])),
        s(m(u[0], v[1]), m(u[1], v[0])),
    )


class Plane:
    """PG(2,q) with both incidence directions tabulated.

    ``points_on_line[l]`` and ``lines_through_point[p]`` are sorted index
    arrays of length q+1; ``incidence[p, l]`` is the boolean flag matrix.
    """

    def __init__(self, field: Field):
        self.field = field
        q = self.q = field.q
        triples: list[Triple] = [(0, 0, 1)]
        triples += [(0, 1, c) for c in range(q)]
        triples += [(1, b, c) for b in range(q) for c in range(q)]
        self.triples = triples
        self.n_points = self.n_lines = len(triples)
        self._index = {t: i for i, t in enumerate(triples)}
        self.points = [ProjPoint(i, t) for i, t in enumerate(triples)]
        self.lines = [ProjLine(i, t) for i, t in enumerate(triples)]

        n = self.n_points
        t = np.array(triples, dtype=np.int64)
        mul, add = field.mul_table, field.add_table
        terms = [mul[t[:, None, c], t[None, :, c]] for c in range(3)]
        inc = add[add[terms[0], terms[1]], terms[2]] == 0
        inc.setflags(write=False)
        self.incidence = inc
        pol = np.array([np.flatnonzero(inc[:, l]) for l in range(n)], dtype=np.int64)
        ltp = np.array([np.flatnonzero(inc[p, :]) for p in range(n)], dtype=np.int64)
        pol.setflags(write=False)
        ltp.setflags(write=False)
        self.points_on_line = pol
        self.lines_through_point = ltp
        self._pol = [frozenset(r) for r in pol.tolist()]
        self._ltp = ltp.tolist()
        # join[p][r] = line through p and r (diagonal = -1)
        join = np.full((n, n), -1, dtype=np.int64)
        for l in range(n):
            pts = pol[l]
            join[np.ix_(pts, pts)] = l
        np.fill_diagonal(join, -1)
        join.setflags(write=False)
        self.join_table = join

    def __repr__(self):
        return f"Plane(PG(2,{self.q}))"

    # -- lookup ---------------------------------------------------------
    def index_of(self, v) -> int:
        return self._index[normalize(self.field, v)]

    def point(self, v) -> ProjPoint:
        if isinstance(v, ProjPoint):
            return v
        if isinstance(v, (int, np.integer)):
            return self.points[int(v)]
        return self.points[self.index_of(self._check(v))]

    def line(self, v) -> ProjLine:
        if isinstance(v, ProjLine):
            return v
        if isinstance(v, (int, np.integer)):
            return self.lines[int(v)]
        return self.lines[self.index_of(self._check(v))]

    def _check(self, v):
        v = tuple(int(c) for c in v)
        if len(v) != 3:
            raise PlaneError(f"expected a coordinate triple, got {v!r}")
        if any(not 0 <= c < self.q for c in v):
            raise PlaneError(f"coordinates {v} are not elements of GF({self.q})")
        return v

    def points_of(self, line) -> list[ProjPoint]:
        return [self.points[i] for i in self.points_on_line[self.line(line).index]]

    def lines_through(self, point) -> list[ProjLine]:
        return [self.lines[i] for i in self.lines_through_point[self.point(point).index]]

    # -- geometry -------------------------------------------------------
    def incident(self, point, line) -> bool:
        return bool(self.incidence[self.point(point).index, self.line(line).index])

    def line_through(self, p, r) -> ProjLine:
        p, r = self.point(p), self.point(r)
        if p.index == r.index:
            raise PlaneError(f"{p} and {r} are the same point")
        return self.lines[int(self.join_table[p.index, r.index])]

    def meet(self, l, m) -> ProjPoint:
        l, m = self.line(l), self.line(m)
        if l.index == m.index:
            raise PlaneError(f"{l} and {m} are the same line")
        return self.points[self.index_of(cross(self.field, l.coeffs, m.coeffs))]

    def collinear(self, a, b, c) -> bool:
        a, b, c = (self.point(x).index for x in (a, b, c))
        if a == b or b == c or a == c:
            return True
        return bool(self.incidence[c, self.join_table[a, b]])

    def in_general_position(self, pts) -> bool:
        idx = [self.point(x).index for x in pts]
        if len(set(idx)) != len(idx):
            return False
        for i in range(len(idx)):
            for j in range(i + 1, len(idx)):
                l = self.join_table[idx[i], idx[j]]
                for k in range(j + 1, len(idx)):
                    if self.incidence[idx[k], l]:
                        return False
        return True


@lru_cache(maxsize=None)
def plane_build(field: Field) -> Plane:
    return Plane(field)


def plane_of_order(q: int) -> Plane:
    return plane_build(field_of_order(q))


# -- point-set files ----------------------------------------------------------


def parse_points(text: str, plane: Plane) -> list[int]:
    """Parse ``x:y:z`` lines into normalised point indices (file order kept).

    Raises :class:`PointFileError` on malformed lines, coordinates outside
    ``[0, q)``, the zero vector, or duplicate points.
    """
    out: list[int] = []
    seen: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(":")
        if len(parts) != 3:
            raise PointFileError(f"line {lineno}: expected x:y:z, got {raw.strip()!r}")
        try:
            coords = tuple(int(s) for s in parts)
        except ValueError:
            raise PointFileError(f"line {lineno}: non-integer coordinate in {raw.strip()!r}") from None
        if any(not 0 <= c < plane.q for c in coords):
            raise PointFileError(f"line {lineno}: coordinates {coords} outside GF({plane.q})")
        try:
            idx = plane.index_of(coords)
        except PlaneError as exc:
            raise PointFileError(f"line {lineno}: {exc}") from None
        if idx in seen:
            raise PointFileError(
                f"line {lineno}: duplicate of point on line {seen[idx]} ({plane.points[idx]})"
            )
        seen[idx] = lineno
        out.append(idx)
    return out


def load_points(path, plane: Plane) -> list[int]:
    return parse_points(Path(path).read_text(encoding="utf-8"), plane)


def format_points(indices, plane: Plane, header: str | None = None) -> str:
    lines = [f"# {h}" for h in header.splitlines()] if header else []
    lines += ["{}:{}:{}".format(*plane.triples[i]) for i in sorted(indices)]
    return "\n".join(lines) + "\n"


__all__ = [
    "FieldError",
    "Plane",
    "PlaneError",
    "PointFileError",
    "ProjLine",
    "ProjPoint",
    "cross",
    "format_points",
    "load_points",
    "normalize",
    "parse_points",
    "plane_build",
    "plane_of_order",
]
