"""The 10-secant branch for a 25-point blocking semioval of PG(2,11).

Coordinates: the 10-secant is ``[0,0,1]`` (z = 0) and its two missing points
are ``Q = (1,0,0)`` and ``R = (0,1,0)``. In the affine part ``z = 1`` the
lines through ``Q`` are the rows ``y = c`` and the lines through ``R`` the
columns ``x = c``. The 15 points off the 10-secant split into ``S_R`` (7
points, tangents through R, so pairwise distinct columns) and ``S_Q`` (8
points, tangents through Q, so pairwise distinct rows):

* ``S_R``: three points on the row ``y = 0`` (the 3-secant ``[0,1,0]``),
  namely columns 0, 1 and ``c3``; two on ``y = 10`` (``[0,1,1]``); two on
  the row of the second 2-secant ``[0,1,c2]``.
* ``S_Q``: the four unused columns, taken in increasing order, each receive
  two points whose rows avoid the three non-tangent rows and each other.

Stage counts are 5, 9, C(8,2), C(6,2) and C(8,2) C(6,2) C(4,2) C(2,2).
The construction already gives a blocking set in which every affine point
has one tangent; what is left is the tangent condition at the ten points
``(1,a,0)``: the eleven lines through ``(1,a,0)`` other than z = 0 are the
level sets of ``y - a x``, and exactly one of them may miss ``S'``, i.e.
``y - a x`` takes exactly ten values on ``S'``.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np
from numba import njit

Q11 = 11
SECOND_TWO_SECANTS = (2, 3, 5, 7, 10)  # c2 in [0,1,c2]
THIRD_POINTS = tuple(range(2, 11))  # c3 in (c3,0,1) on the 3-secant
FIRST_TWO_SECANT_ROW = 10  # [0,1,1] is y = -1
STAGE_COUNTS = (len(SECOND_TWO_SECANTS), len(THIRD_POINTS), comb(8, 2), comb(6, 2), comb(8, 2) * comb(6, 2) * comb(4, 2))
TOTAL_CONFIGURATIONS = int(np.prod(STAGE_COUNTS))
PRINTED_TOTAL = 47_638_000  # commonly quoted total, kept to flag the difference
BLOCK_SIZE = STAGE_COUNTS[3] * STAGE_COUNTS[4]
N_BLOCKS = STAGE_COUNTS[0] * STAGE_COUNTS[1] * STAGE_COUNTS[2]


@dataclass(frozen=True)
class TenSecantBlock:
    """Stages 1-3 fixed: ``c2``, ``c3`` and the two columns used on y = 10."""

    index: int
    c2: int
    c3: int
    pair: tuple[int, int]

    @property
    def s_r_partial(self) -> list[tuple[int, int]]:
        """Affine ``(x, y)`` points of ``S_R`` fixed by the block."""
        return [(0, 0), (1, 0), (self.c3, 0), (self.pair[0], FIRST_TWO_SECANT_ROW), (self.pair[1], FIRST_TWO_SECANT_ROW)]


def row_of(c2: int) -> int:
    """Affine row of the line ``[0,1,c2]``."""
    return (-c2) % Q11


def ten_secant_blocks() -> list[TenSecantBlock]:
    out = []
    i = 0
    for c2 in SECOND_TWO_SECANTS:
        for c3 in THIRD_POINTS:
            free = [x for x in range(Q11) if x not in (0, 1, c3)]
            for pair in combinations(free, 2):
                out.append(TenSecantBlock(i, c2, c3, pair))
                i += 1
    return out


def block_configurations(block: TenSecantBlock) -> Iterator[list[tuple[int, int]]]:
    """Every full ``S'`` (15 affine points, S_R first) in the block, in search order."""
    ycs = row_of(block.c2)
    used = {0, 1, block.c3, *block.pair}
    free4 = [x for x in range(Q11) if x not in used]
    rows = [y for y in range(Q11) if y not in (0, FIRST_TWO_SECANT_ROW, ycs)]
    base = block.s_r_partial
    for p4 in combinations(free4, 2):
        s_r = base + [(p4[0], ycs), (p4[1], ycs)]
        cols = [x for x in range(Q11) if x not in used and x not in p4]
        yield from _s_q(s_r, cols, rows)


def _s_q(prefix, cols, rows):
    if not cols:
        yield list(prefix)
        return
    x = cols[0]
    for pair in combinations(rows, 2):
        rest = [y for y in rows if y not in pair]
        yield from _s_q(prefix + [(x, pair[0]), (x, pair[1])], cols[1:], rest)


def tangent_check(points, slopes=range(1, Q11)) -> bool:
    """True iff every ``(1,a,0)`` has exactly one line missing the affine points."""
    for a in slopes:
        if len({(y - a * x) % Q11 for x, y in points}) != Q11 - 1:
            return False
    return True


# -- direct checker ----------------------------------------------------------------

_SUBTREE = np.array([STAGE_COUNTS[4], 90, 6, 1, 1], dtype=np.int64)


@njit(cache=True)
def _add(x, y, cnt, ndist, amask):
    bad = False
    for a in range(1, 11):
        v = (y - a * x) % 11
        if cnt[a, v] == 0:
            ndist[a] += 1
            if ndist[a] > 10 and amask[a]:
                bad = True
        cnt[a, v] += 1
    return bad


@njit(cache=True)
def _remove(x, y, cnt, ndist):
    for a in range(1, 11):
        v = (y - a * x) % 11
        cnt[a, v] -= 1
        if cnt[a, v] == 0:
            ndist[a] -= 1


# recursive: numba's on-disk cache is unreliable here, so compile per process
@njit
def _sq_level(level, cols, ncols, rows_free, cnt, ndist, stats, subtree, prune, amask):
    if level == ncols:
        stats[1] += 1
        ok = True
        for a in range(1, 11):
            if amask[a] and ndist[a] != 10:
                ok = False
                break
        if ok:
            stats[2] += 1
        stats[0] += 1
        return
    x = cols[level]
    for i in range(11):
        if not rows_free[i]:
            continue
        for j in range(i + 1, 11):
            if not rows_free[j]:
                continue
            b1 = _add(x, i, cnt, ndist, amask)
            b2 = _add(x, j, cnt, ndist, amask)
            if prune and (b1 or b2):
                stats[0] += subtree[level + 1]
            else:
                rows_free[i] = False
                rows_free[j] = False
                _sq_level(level + 1, cols, ncols, rows_free, cnt, ndist, stats, subtree, prune, amask)
                rows_free[i] = True
                rows_free[j] = True
            _remove(x, j, cnt, ndist)
            _remove(x, i, cnt, ndist)


@njit
def _check_block(c2, c3, x1, x2, prune, subtree, amask):
    """Returns ``[covered, visited, found]`` for one block."""
    stats = np.zeros(3, dtype=np.int64)
    cnt = np.zeros((11, 11), dtype=np.int64)
    ndist = np.zeros(11, dtype=np.int64)
    ycs = (11 - c2) % 11
    used = np.zeros(11, dtype=np.bool_)
    for x in (0, 1, c3, x1, x2):
        used[x] = True
    bad = False
    bad |= _add(0, 0, cnt, ndist, amask)
    bad |= _add(1, 0, cnt, ndist, amask)
    bad |= _add(c3, 0, cnt, ndist, amask)
    bad |= _add(x1, 10, cnt, ndist, amask)
    bad |= _add(x2, 10, cnt, ndist, amask)
    if prune and bad:
        stats[0] = 15 * subtree[0]
        return stats
    rows_free = np.ones(11, dtype=np.bool_)
    rows_free[0] = False
    rows_free[10] = False
    rows_free[ycs] = False
    cols = np.zeros(4, dtype=np.int64)
    for u in range(11):
        if used[u]:
            continue
        for w in range(u + 1, 11):
            if used[w]:
                continue
            b1 = _add(u, ycs, cnt, ndist, amask)
            b2 = _add(w, ycs, cnt, ndist, amask)
            if prune and (b1 or b2):
                stats[0] += subtree[0]
            else:
                k = 0
                for x in range(11):
                    if not used[x] and x != u and x != w:
                        cols[k] = x
                        k += 1
                _sq_level(0, cols, 4, rows_free, cnt, ndist, stats, subtree, prune, amask)
            _remove(w, ycs, cnt, ndist)
            _remove(u, ycs, cnt, ndist)
    return stats


def _mask(slopes) -> np.ndarray:
    m = np.zeros(Q11, dtype=np.bool_)
    for a in slopes:
        if not 1 <= a < Q11:
            raise ValueError(f"slope {a} outside 1..10")
        m[a] = True
    return m


def check_block_direct(block: TenSecantBlock, prune: bool = True, slopes=range(1, Q11)) -> tuple[int, int, int]:
    """``(configurations covered, leaves visited, blocking semiovals found)``.

    ``slopes`` restricts the tangent test to the points ``(1,a,0)`` with
    ``a`` listed; the full set of slopes is the actual search, subsets exist
    so the checker can be tested against cases that do pass.
    """
    s = _check_block(block.c2, block.c3, block.pair[0], block.pair[1], prune, _SUBTREE, _mask(slopes))
    return int(s[0]), int(s[1]), int(s[2])


def find_in_block(block: TenSecantBlock, slopes=range(1, Q11)) -> list[list[tuple[int, int]]]:
    """Slow pure-Python listing of the passing configurations of a block."""
    return [cfg for cfg in block_configurations(block) if tangent_check(cfg, slopes)]


def affine_to_point(x: int, y: int) -> tuple[int, int, int]:
    return (x, y, 1)


# -- constraint-model form ---------------------------------------------------------


def block_case(plane, block: TenSecantBlock, full: list[tuple[int, int]] | None = None):
    """The block (or, with ``full``, one complete ``S'``) as a :class:`CaseConfig`.

    Forcings: Q and R out, the 10-secant and the three non-tangent lines
    through Q with their sizes, the other lines through Q tangent, the
    columns of the known ``S_R`` points tangent, and the known points in.
    """
    from .cases import CaseConfig

    if plane.q != Q11:
        raise ValueError("ten-secant cases are specific to PG(2,11)")
    q_pt, r_pt = plane.point((1, 0, 0)).index, plane.point((0, 1, 0)).index
    ten = plane.line((0, 0, 1)).index
    rows = {0: 3, FIRST_TWO_SECANT_ROW: 2, row_of(block.c2): 2}
    secants = [(ten, 10)]
    for y in range(Q11):
        secants.append((plane.line((0, 1, (-y) % Q11)).index, rows.get(y, 1)))
    pts = full if full is not None else block.s_r_partial
    cols = {x for x, _ in pts[:7]}  # S_R comes first in both lists
    for x in sorted(cols):
        secants.append((plane.line((1, 0, (-x) % Q11)).index, 1))
    forced_in = tuple(sorted(plane.point(affine_to_point(x, y)).index for x, y in pts))
    cfg = CaseConfig(
        case_id=block.index,
        forced_in=forced_in,
        forced_out=(q_pt, r_pt),
        core_secants=tuple(secants),
        description=f"ten-secant c2={block.c2} c3={block.c3} pair={block.pair}" + (" (full)" if full else ""),
    )
    cfg.check(plane)
    return cfg
