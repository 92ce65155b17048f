"""Backtracking search over linear pseudo-Boolean constraints.

Every constraint is normalised to ``sum(a_i * lit_i) >= b`` with positive
integer coefficients. Propagation keeps, per constraint, the slack
``sum(a_i over literals not yet false) - b``: a negative slack is a conflict,
and any unassigned literal whose coefficient exceeds the slack is implied.
A guarded cardinality constraint compiled to this form propagates exactly as
strongly as the guarded original, so one propagator serves every model.

Search is chronological backtracking: no clause learning, no restarts.
Assignments, the trail and the decision stack live in NumPy arrays owned by
:class:`PBEngine`, so a search can stop after a decision budget and resume
where it left off. That is how time limits and solution enumeration work.

Literal ``2*v`` is variable ``v`` true, ``2*v + 1`` is ``v`` false.
"""

from __future__ import annotations

import time
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field

import numpy as np
from numba import njit

SAT, UNSAT, TIMEOUT = "SAT", "UNSAT", "TIMEOUT"

# indices into the int64 state vector
_TLEN, _QHEAD, _DLEN, _DECISIONS, _PROPS, _CONFLICTS = range(6)

_R_UNSAT, _R_SAT, _R_BUDGET = 0, 1, 2


@njit(cache=True)
def _assign(v, value, val, trail, st):
    val[v] = value
    trail[st[_TLEN]] = v
    st[_TLEN] += 1


@njit(cache=True)
def _propagate(val, trail, st, con_start, con_lit, con_coef, slack, maxc, occ_start, occ_con, occ_coef):
    while st[_QHEAD] < st[_TLEN]:
        v = trail[st[_QHEAD]]
        st[_QHEAD] += 1
        flit = 2 * v + val[v]
        conflict = False
        for k in range(occ_start[flit], occ_start[flit + 1]):
            c = occ_con[k]
            s = slack[c] - occ_coef[k]
            slack[c] = s
            if conflict:
                continue
            if s < 0:
                conflict = True
                continue
            if s < maxc[c]:
                # literals are stored by decreasing coefficient
                for j in range(con_start[c], con_start[c + 1]):
                    if con_coef[j] <= s:
                        break
                    lit = con_lit[j]
                    u = lit >> 1
                    if val[u] < 0:
                        _assign(u, 1 - (lit & 1), val, trail, st)
                        st[_PROPS] += 1
        if conflict:
            return True
    return False


@njit(cache=True)
def _undo(pos, val, trail, st, slack, occ_start, occ_con, occ_coef):
    i = st[_TLEN] - 1
    while i >= pos:
        v = trail[i]
        if i < st[_QHEAD]:
            flit = 2 * v + val[v]
            for k in range(occ_start[flit], occ_start[flit + 1]):
                slack[occ_con[k]] += occ_coef[k]
        val[v] = -1
        i -= 1
    st[_TLEN] = pos
    if st[_QHEAD] > pos:
        st[_QHEAD] = pos


@njit(cache=True)
def _pick(val, grp_start, grp_var, grp_prio):
    # lowest priority class first, then the most constrained group in it:
    # fewest unassigned variables (ties: lowest group index)
    best_g = -1
    best_p = 1 << 30
    best_n = 1 << 30
    for g in range(grp_start.shape[0] - 1):
        pr = grp_prio[g]
        if pr > best_p:
            continue
        n = 0
        for k in range(grp_start[g], grp_start[g + 1]):
            if val[grp_var[k]] < 0:
                n += 1
        if n > 0 and (pr < best_p or n < best_n):
            best_p = pr
            best_n = n
            best_g = g
    if best_g >= 0:
        for k in range(grp_start[best_g], grp_start[best_g + 1]):
            if val[grp_var[k]] < 0:
                return grp_var[k]
    for v in range(val.shape[0]):
        if val[v] < 0:
            return v
    return -1


@njit(cache=True)
def _pencil(val, trail, st, pol, ltp, size_max, line_in):
    """Counting bound over the pencil of lines through each point.

    The lines through a point partition the rest of the plane, so for a point
    X outside the set ``|S| = sum(|l & S|)`` over the lines through X, and for
    X inside ``|S| = 1 + sum(|l & S| - 1)``. Bounding each term below by the
    current count and by 1 (blocking) or 2 (known non-tangent) gives a lower
    bound on ``|S|``; if the bound exceeds ``size_max`` that membership of X
    is impossible. Returns -1 on conflict, else the number of assignments.
    """
    n = pol.shape[0]
    in_count = 0
    for p in range(n):
        if val[p] == 1:
            in_count += 1
    for l in range(n):
        c = 0
        for k in range(pol.shape[1]):
            if val[pol[l, k]] == 1:
                c += 1
        line_in[l] = c
    made = 0
    for x in range(n):
        vx = val[x]
        out_ok = vx != 1
        in_ok = vx != 0
        if out_ok:
            lb = 0
            for k in range(ltp.shape[1]):
                l = ltp[x, k]
                c = line_in[l]
                need = 2 if val[n + l] == 0 else 1
                lb += c if c > need else need
            if lb > size_max:
                out_ok = False
        if in_ok:
            extra = 0 if vx == 1 else 1
            lb = 1
            has_tangent = False
            can_save = False
            for k in range(ltp.shape[1]):
                l = ltp[x, k]
                c = line_in[l] + extra
                t = val[n + l]
                if t == 1:
                    has_tangent = True
                    lb += (c if c > 1 else 1) - 1
                else:
                    lb += (c if c > 2 else 2) - 1
                    if c == 1 and t != 0:
                        can_save = True
            if not has_tangent:
                if can_save:
                    lb -= 1
                else:
                    in_ok = False
            if in_count + extra > size_max or lb > size_max:
                in_ok = False
        if not out_ok and not in_ok:
            return -1
        if vx < 0:
            if not out_ok:
                _assign(x, 1, val, trail, st)
                made += 1
            elif not in_ok:
                _assign(x, 0, val, trail, st)
                made += 1
    return made


@njit(cache=True)
def _initial_scan(val, trail, st, con_start, con_lit, con_coef, slack, maxc):
    # implications present before any assignment (e.g. x >= 1 unit constraints)
    for c in range(slack.shape[0]):
        s = slack[c]
        if s < 0:
            return True
        if s < maxc[c]:
            for j in range(con_start[c], con_start[c + 1]):
                if con_coef[j] <= s:
                    break
                lit = con_lit[j]
                u = lit >> 1
                want = 1 - (lit & 1)
                if val[u] < 0:
                    _assign(u, want, val, trail, st)
                elif val[u] != want:
                    # already assigned the other way and not yet processed; propagation will see it
                    pass
    return False


@njit(cache=True)
def _search(
    budget, resume, first_value,
    val, trail, st, dec_var, dec_pos, dec_flip,
    con_start, con_lit, con_coef, slack, maxc,
    occ_start, occ_con, occ_coef, grp_start, grp_var, grp_prio,
    pol, ltp, size_max, line_in,
):  # fmt: skip
    backtrack = resume
    while True:
        conflict = backtrack
        if not conflict:
            conflict = _propagate(
                val, trail, st, con_start, con_lit, con_coef, slack, maxc, occ_start, occ_con, occ_coef
            )
        if not conflict and size_max >= 0:
            made = _pencil(val, trail, st, pol, ltp, size_max, line_in)
            if made < 0:
                conflict = True
            elif made > 0:
                st[_PROPS] += made
                continue
        if conflict:
            backtrack = False
            st[_CONFLICTS] += 1
            while st[_DLEN] > 0 and dec_flip[st[_DLEN] - 1] == 1:
                st[_DLEN] -= 1
            if st[_DLEN] == 0:
                return _R_UNSAT
            d = st[_DLEN] - 1
            _undo(dec_pos[d], val, trail, st, slack, occ_start, occ_con, occ_coef)
            dec_flip[d] = 1
            _assign(dec_var[d], 1 - first_value, val, trail, st)
            continue
        if st[_DECISIONS] >= budget:
            return _R_BUDGET
        v = _pick(val, grp_start, grp_var, grp_prio)
        if v < 0:
            return _R_SAT
        st[_DECISIONS] += 1
        d = st[_DLEN]
        dec_var[d] = v
        dec_pos[d] = st[_TLEN]
        dec_flip[d] = 0
        st[_DLEN] += 1
        _assign(v, first_value, val, trail, st)


@dataclass
class EngineStats:
    decisions: int = 0
    propagations: int = 0
    conflicts: int = 0
    wall_time: float = 0.0

    def as_dict(self) -> dict:
        return {
            "decisions": self.decisions,
            "propagations": self.propagations,
            "conflicts": self.conflicts,
            "wall_time": round(self.wall_time, 6),
        }


@dataclass
class LinearConstraint:
    """``sum(coef * lit) >= rhs`` over engine literals (``2v`` / ``2v+1``)."""

    lits: Sequence[int]
    coefs: Sequence[int]
    rhs: int


def normalize_linear(terms: Sequence[tuple[int, int]], rhs: int) -> LinearConstraint:
    """Normalise ``sum(coef * lit) >= rhs`` to positive coefficients, one term per variable."""
    by_var: dict[int, int] = {}
    for coef, lit in terms:
        v, neg = lit >> 1, lit & 1
        if neg:
            # a * not(x) = a - a * x
            rhs -= coef
            coef = -coef
        by_var[v] = by_var.get(v, 0) + coef
    lits, coefs = [], []
    for v, a in sorted(by_var.items()):
        if a > 0:
            lits.append(2 * v)
            coefs.append(a)
        elif a < 0:
            lits.append(2 * v + 1)
            coefs.append(-a)
            rhs += -a
    return LinearConstraint(lits, coefs, rhs)


@dataclass
class PBEngine:
    """A resumable solver instance. Build once per problem; not thread-safe."""

    n_vars: int
    constraints: Sequence[LinearConstraint]
    units: dict[int, int] = field(default_factory=dict)
    groups: Sequence[Sequence[int]] = ()
    first_value: int = 1
    geometry: tuple | None = None
    priorities: Sequence[int] | None = None
    stats: EngineStats = field(default_factory=EngineStats)

    def __post_init__(self):
        n = self.n_vars
        cons = [c for c in self.constraints if len(c.lits) or c.rhs > 0]
        starts, lits, coefs, rhs = [0], [], [], []
        for c in cons:
            order = sorted(range(len(c.lits)), key=lambda i: (-c.coefs[i], c.lits[i]))
            lits += [int(c.lits[i]) for i in order]
            coefs += [int(c.coefs[i]) for i in order]
            starts.append(len(lits))
            rhs.append(int(c.rhs))
        self._con_start = np.array(starts, dtype=np.int64)
        self._con_lit = np.array(lits, dtype=np.int64)
        self._con_coef = np.array(coefs, dtype=np.int64)
        rhs_a = np.array(rhs, dtype=np.int64)
        sums = np.add.reduceat(self._con_coef, self._con_start[:-1]) if lits else np.zeros(0, np.int64)
        empty = self._con_start[1:] == self._con_start[:-1]
        sums = np.where(empty, 0, sums) if len(cons) else sums
        self._slack = (sums - rhs_a).astype(np.int64)
        self._maxc = np.array(
            [coefs[starts[i]] if starts[i] < starts[i + 1] else 0 for i in range(len(cons))],
            dtype=np.int64,
        )
        occ: list[list[tuple[int, int]]] = [[] for _ in range(2 * n)]
        for ci in range(len(cons)):
            for j in range(starts[ci], starts[ci + 1]):
                occ[lits[j]].append((ci, coefs[j]))
        occ_start = [0]
        occ_con, occ_coef = [], []
        for lst in occ:
            for ci, a in lst:
                occ_con.append(ci)
                occ_coef.append(a)
            occ_start.append(len(occ_con))
        self._occ_start = np.array(occ_start, dtype=np.int64)
        self._occ_con = np.array(occ_con, dtype=np.int64)
        self._occ_coef = np.array(occ_coef, dtype=np.int64)
        gs, gv = [0], []
        for g in self.groups:
            gv += [int(v) for v in g]
            gs.append(len(gv))
        self._grp_start = np.array(gs, dtype=np.int64)
        self._grp_var = np.array(gv, dtype=np.int64)
        prio = [0] * len(self.groups) if self.priorities is None else list(self.priorities)
        if len(prio) != len(self.groups):
            raise ValueError("one priority per branching group")
        self._grp_prio = np.array(prio, dtype=np.int64)
        if self.geometry is None:
            self._pol = self._ltp = np.zeros((1, 1), dtype=np.int64)
            self._size_max = -1
        else:
            pol, ltp, size_max = self.geometry
            self._pol = np.ascontiguousarray(pol, dtype=np.int64)
            self._ltp = np.ascontiguousarray(ltp, dtype=np.int64)
            self._size_max = int(size_max)
        self._line_in = np.zeros(self._pol.shape[0], dtype=np.int64)

        self._val = np.full(n, -1, dtype=np.int64)
        self._trail = np.zeros(max(n, 1), dtype=np.int64)
        self._st = np.zeros(6, dtype=np.int64)
        self._dec_var = np.zeros(max(n, 1), dtype=np.int64)
        self._dec_pos = np.zeros(max(n, 1), dtype=np.int64)
        self._dec_flip = np.zeros(max(n, 1), dtype=np.int64)
        self._finished = False
        self._root_conflict = False
        for v, value in sorted(self.units.items()):
            if self._val[v] >= 0 and self._val[v] != value:
                self._root_conflict = True
            elif self._val[v] < 0:
                _assign(v, int(value), self._val, self._trail, self._st)
        if not self._root_conflict:
            self._root_conflict = bool(
                _initial_scan(
                    self._val, self._trail, self._st, self._con_start, self._con_lit,
                    self._con_coef, self._slack, self._maxc,
                )
            )  # fmt: skip

    def _run(self, resume: bool, time_limit: float | None, chunk: int) -> str:
        if self._finished or self._root_conflict:
            self._finished = True
            return UNSAT
        t0 = time.perf_counter()
        base = self.stats.wall_time
        deadline = None if time_limit is None else t0 + time_limit
        first = True
        while True:
            budget = int(self._st[_DECISIONS]) + chunk
            r = _search(
                budget, bool(resume and first), int(self.first_value),
                self._val, self._trail, self._st, self._dec_var, self._dec_pos, self._dec_flip,
                self._con_start, self._con_lit, self._con_coef, self._slack, self._maxc,
                self._occ_start, self._occ_con, self._occ_coef, self._grp_start, self._grp_var, self._grp_prio,
                self._pol, self._ltp, self._size_max, self._line_in,
            )  # fmt: skip
            first = False
            self._sync_stats(base + time.perf_counter() - t0)
            if r == _R_UNSAT:
                self._finished = True
                return UNSAT
            if r == _R_SAT:
                return SAT
            if deadline is not None and time.perf_counter() >= deadline:
                return TIMEOUT

    def _sync_stats(self, elapsed: float) -> None:
        self.stats.decisions = int(self._st[_DECISIONS])
        self.stats.propagations = int(self._st[_PROPS])
        self.stats.conflicts = int(self._st[_CONFLICTS])
        self.stats.wall_time = elapsed

    def solve(self, time_limit: float | None = None, chunk: int = 20000) -> str:
        """Search for the next solution from the current state."""
        return self._run(False, time_limit, chunk)

    def next_solution(self, time_limit: float | None = None, chunk: int = 20000) -> str:
        """Continue after a SAT result, excluding the solution just returned."""
        return self._run(True, time_limit, chunk)

    def assignment(self) -> np.ndarray:
        return self._val.copy()

    def solutions(self, time_limit: float | None = None) -> Iterator[np.ndarray]:
        """Yield every solution; raises ``TimeoutError`` if the limit is hit."""
        t0 = time.perf_counter()
        status = self.solve(time_limit)
        while True:
            if status == TIMEOUT:
                raise TimeoutError("solution enumeration timed out")
            if status == UNSAT:
                return
            yield self.assignment()
            left = None if time_limit is None else max(0.0, time_limit - (time.perf_counter() - t0))
            status = self.next_solution(left)
