"""Portable exports of a :class:`ConstraintModel`: OPB and DIMACS CNF.

Variable ``i + 1`` is point ``i`` and ``N + l + 1`` is the tangency of line
``l`` (N = number of points); CNF auxiliaries follow. Output is a pure
function of the model, so files are byte-stable across runs.

OPB guards use a big-M equal to the number of summed literals (q+1 for line
and pencil sums). CNF cardinalities use the sequential counter; the guard
literal is added only to the counter's overflow clauses, since the counter
definitions are satisfiable on their own.
"""

from __future__ import annotations

import re
from pathlib import Path

from .engine import LinearConstraint, PBEngine, normalize_linear
from .model import CardConstraint, ConstraintModel

FORMATS = ("opb", "dimacs")


class ExportError(ValueError):
    pass


def _mapping_comments(model: ConstraintModel, prefix: str) -> list[str]:
    return [f"{prefix} var {v + 1} = {model.var_name(v)}" for v in range(model.n_vars)]


# -- OPB ----------------------------------------------------------------------------


def _opb_rows(c: CardConstraint) -> list[tuple[list[tuple[int, int]], str, int]]:
    """Rows ``(terms, op, rhs)`` over 1-based variables, positive literals only."""
    n = len(c.vars)
    lo, hi = c.bounds()
    xs = [v + 1 for v in c.vars]
    if c.guard is None:
        if lo == hi:
            return [([(1, x) for x in xs], "=", lo)]
        rows = []
        if lo > 0:
            rows.append(([(1, x) for x in xs], ">=", lo))
        if hi < n:
            rows.append(([(-1, x) for x in xs], ">=", -hi))
        return rows
    g, pol = c.guard
    gx = g + 1
    m = n
    rows = []
    # guard true  <=>  gl = 1 where gl is g (pol) or 1-g (not pol)
    if lo > 0:
        # sum >= lo - M * (1 - gl)
        if pol:
            rows.append(([(1, x) for x in xs] + [(-m, gx)], ">=", lo - m))
        else:
            rows.append(([(1, x) for x in xs] + [(m, gx)], ">=", lo))
    if hi < n:
        # -sum >= -hi - M * (1 - gl)
        if pol:
            rows.append(([(-1, x) for x in xs] + [(-m, gx)], ">=", -hi - m))
        else:
            rows.append(([(-1, x) for x in xs] + [(m, gx)], ">=", -hi))
    return rows


def to_opb(model: ConstraintModel) -> str:
    rows = []
    for c in model.constraints:
        rows += _opb_rows(c)
    for v, b in sorted(model.forced.items()):
        rows.append(([(1, v + 1)], "=", int(b)))
    out = [f"* #variable= {model.n_vars} #constraint= {len(rows)}"]
    out.append(f"* blocking semioval model for PG(2,{model.plane.q})")
    out += _mapping_comments(model, "*")
    for terms, op, rhs in rows:
        lhs = " ".join(f"{a:+d} x{x}" for a, x in terms)
        out.append(f"{lhs} {op} {rhs} ;")
    return "\n".join(out) + "\n"


# -- DIMACS ------------------------------------------------------------------------


class _CNF:
    def __init__(self, n_vars: int):
        self.n_vars = n_vars
        self.clauses: list[list[int]] = []

    def new_var(self) -> int:
        self.n_vars += 1
        return self.n_vars

    def at_most(self, lits: list[int], k: int, guard: int | None) -> None:
        """``guard => sum(lits) <= k`` (guard None: unconditional)."""
        g = [] if guard is None else [-guard]
        n = len(lits)
        if k >= n:
            return
        if k == 0:
            for x in lits:
                self.clauses.append(g + [-x])
            return
        s = [[self.new_var() for _ in range(k)] for _ in range(n - 1)]
        self.clauses.append([-lits[0], s[0][0]])
        for j in range(1, k):
            self.clauses.append([-s[0][j]])
        for i in range(1, n - 1):
            x = lits[i]
            self.clauses.append([-x, s[i][0]])
            self.clauses.append([-s[i - 1][0], s[i][0]])
            for j in range(1, k):
                self.clauses.append([-x, -s[i - 1][j - 1], s[i][j]])
                self.clauses.append([-s[i - 1][j], s[i][j]])
            self.clauses.append(g + [-x, -s[i - 1][k - 1]])
        self.clauses.append(g + [-lits[n - 1], -s[n - 2][k - 1]])

    def at_least(self, lits: list[int], k: int, guard: int | None) -> None:
        g = [] if guard is None else [-guard]
        n = len(lits)
        if k <= 0:
            return
        if k > n:
            self.clauses.append(g)
            return
        if k == 1:
            self.clauses.append(g + list(lits))
            return
        self.at_most([-x for x in lits], n - k, guard)


def to_dimacs(model: ConstraintModel) -> str:
    cnf = _CNF(model.n_vars)
    for c in model.constraints:
        lits = [v + 1 for v in c.vars]
        guard = None
        if c.guard is not None:
            guard = (c.guard[0] + 1) * (1 if c.guard[1] else -1)
        lo, hi = c.bounds()
        cnf.at_least(lits, lo, guard)
        cnf.at_most(lits, hi, guard)
    for v, b in sorted(model.forced.items()):
        cnf.clauses.append([v + 1 if b else -(v + 1)])
    out = [f"c blocking semioval model for PG(2,{model.plane.q})"]
    out += _mapping_comments(model, "c")
    out.append(f"p cnf {cnf.n_vars} {len(cnf.clauses)}")
    out += [" ".join(map(str, cl)) + " 0" for cl in cnf.clauses]
    return "\n".join(out) + "\n"


def export_model(model: ConstraintModel, fmt: str, path=None) -> str:
    if fmt == "opb":
        text = to_opb(model)
    elif fmt in ("dimacs", "cnf"):
        text = to_dimacs(model)
    else:
        raise ExportError(f"unsupported format {fmt!r}; choose one of {FORMATS}")
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


# -- import -------------------------------------------------------------------------

_TERM = re.compile(r"([+-]?\d+)\s+x(\d+)")


def read_opb(text: str) -> PBEngine:
    """Parse a linear OPB decision instance into an engine (no branching hints)."""
    n_vars = 0
    cons: list[LinearConstraint] = []

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("*"):
            m = re.search(r"#variable=\s*(\d+)", line)
            if m:
                n_vars = max(n_vars, int(m.group(1)))
            continue
        if not line.endswith(";"):
            raise ExportError(f"line {lineno}: missing ';'")
        body = line[:-1].strip()
        m = re.match(r"(.*?)(>=|=)\s*([+-]?\d+)$", body)
        if m is None:
            raise ExportError(f"line {lineno}: cannot parse {raw!r}")
        lhs, op, rhs = m.group(1), m.group(2), int(m.group(3))
        terms = [(int(a), int(x) - 1) for a, x in _TERM.findall(lhs)]
        if not terms:
            raise ExportError(f"line {lineno}: no terms")
        n_vars = max(n_vars, max(x for _, x in terms) + 1)
        for sign in (1, -1) if op == "=" else (1,):
            # normalize_linear turns negative coefficients into negated literals
            cons.append(normalize_linear([(sign * a, 2 * x) for a, x in terms], sign * rhs))
    return PBEngine(n_vars, cons)


def read_dimacs(text: str) -> tuple[int, list[list[int]]]:
    n_vars, clauses = 0, []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            n_vars = int(parts[2])
            continue
        lits = [int(t) for t in line.split()]
        if lits[-1] != 0:
            raise ExportError("clause not terminated by 0")
        clauses.append(lits[:-1])
    return n_vars, clauses
