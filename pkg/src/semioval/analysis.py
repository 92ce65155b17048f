"""Point-set predicates, secant spectra and the lower bounds for blocking semiovals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, isqrt

import numpy as np

from .plane import Plane


class AnalysisError(ValueError):
    pass


class PointSet:
    """A set of points of a plane, stored as a membership bitmap."""

    __slots__ = ("plane", "members", "size")

    def __init__(self, plane: Plane, points=()):
        self.plane = plane
        self.members = np.zeros(plane.n_points, dtype=bool)
        for p in points:
            self.members[plane.point(p).index] = True
        self.size = int(self.members.sum())

    @classmethod
    def from_mask(cls, plane: Plane, mask) -> PointSet:
        s = cls(plane)
        s.members = np.asarray(mask, dtype=bool).copy()
        s.size = int(s.members.sum())
        return s

    def __len__(self):
        return self.size

    def __contains__(self, p):
        return bool(self.members[self.plane.point(p).index])

    def __iter__(self):
        return iter(self.indices())

    def __eq__(self, other):
        return (
            isinstance(other, PointSet)
            and other.plane is self.plane
            and bool(np.array_equal(self.members, other.members))
        )

    def __repr__(self):
        return f"PointSet(q={self.plane.q}, size={self.size})"

    def indices(self) -> list[int]:
        return np.flatnonzero(self.members).tolist()

    def coords(self) -> list[tuple[int, int, int]]:
        return [self.plane.triples[i] for i in self.indices()]

    def line_counts(self) -> np.ndarray:
        """``|l & S|`` for every line index."""
        return self.members[self.plane.points_on_line].sum(axis=1)

    def image(self, g) -> PointSet:
        mask = np.zeros_like(self.members)
        mask[g.perm[self.members]] = True
        return PointSet.from_mask(self.plane, mask)


@dataclass(frozen=True)
class SecantSpectrum:
    """``x[i]`` is the number of lines meeting the set in exactly ``i`` points."""

    q: int
    size: int
    x: tuple[int, ...]

    def __getitem__(self, i):
        return self.x[i]

    def identities_hold(self) -> bool:
        q, n, x = self.q, self.size, self.x
        return (
            sum(x) == q * q + q + 1
            and sum(i * v for i, v in enumerate(x)) == n * (q + 1)
            and sum(comb(i, 2) * v for i, v in enumerate(x)) == comb(n, 2)
        )


def secant_spectrum(s: PointSet) -> SecantSpectrum:
    q = s.plane.q
    counts = np.bincount(s.line_counts(), minlength=q + 2)
    return SecantSpectrum(q, s.size, tuple(int(c) for c in counts))


def tangent_lines(point, s: PointSet) -> list:
    plane = s.plane
    p = plane.point(point)
    if not s.members[p.index]:
        raise AnalysisError(f"{p} is not in the set")
    counts = s.line_counts()
    return [plane.lines[l] for l in plane.lines_through_point[p.index] if counts[l] == 1]


def tangent_map(s: PointSet) -> dict[int, list[int]]:
    """Point index -> indices of its tangent lines, for every point of the set."""
    plane = s.plane
    counts = s.line_counts()
    return {
        p: [int(l) for l in plane.lines_through_point[p] if counts[l] == 1] for p in s.indices()
    }


def is_blocking_set(s: PointSet) -> bool:
    spec = secant_spectrum(s)
    return spec.x[0] == 0 and spec.x[s.plane.q + 1] == 0


def is_semioval(s: PointSet) -> bool:
    if s.size == 0:
        return False
    plane = s.plane
    tangent = s.line_counts() == 1
    per_point = tangent[plane.lines_through_point].sum(axis=1)
    return bool(np.all(per_point[s.members] == 1))


def is_blocking_semioval(s: PointSet) -> bool:
    return is_blocking_set(s) and is_semioval(s)


# -- spectrum equations for a 25-point set in PG(2,11) -----------------------------

RESIDUAL_RHS = (123, -89, 74)


def spectrum_residual_eqs(x, n: int = 25, q: int = 11) -> tuple[int, int, int]:
    """Left-minus-right residuals of the three linear relations between
    ``x_2..x_6`` for a 25-point blocking semioval of PG(2,11) with no line
    meeting it in 7 or more points.

    ``x`` is a :class:`SecantSpectrum` or a sequence indexable by secant
    size; entries 0, 1 and 7.. must be ``0, 25, 0, ...`` (the blocking
    semioval preconditions) or :class:`AnalysisError` is raised.
    """
    if q != 11 or n != 25:
        raise AnalysisError("the relations are specialised to q=11, n=25")
    xs = list(x.x if isinstance(x, SecantSpectrum) else x)
    xs += [0] * (13 - len(xs))
    if xs[0] != 0 or xs[1] != 25 or any(xs[7:]):
        raise AnalysisError("preconditions x0=0, x1=25, x7..x12=0 violated")
    x2, x3, x4, x5, x6 = xs[2:7]
    return (
        x2 + x5 + 3 * x6 - 123,
        x3 - 3 * x5 - 8 * x6 + 89,
        x4 + 3 * x5 + 6 * x6 - 74,
    )


def double_count_system(q: int, n: int, max_secant: int) -> tuple[list[list[int]], list[int]]:
    """Rows of the three standard counts restricted to ``x_2..x_max`` after
    substituting ``x_0 = 0`` and ``x_1 = n``."""
    ks = range(2, max_secant + 1)
    rows = [[1 for _ in ks], [k for k in ks], [comb(k, 2) for k in ks]]
    rhs = [q * q + q + 1 - n, n * (q + 1) - n, comb(n, 2)]
    return rows, rhs


def spectrum_solutions(q: int = 11, n: int = 25, max_secant: int = 6) -> list[tuple[int, ...]]:
    """All nonnegative integer ``(x_2, ..., x_max)`` satisfying the three counts.

    Parametrised by the top ``max_secant - 4`` coordinates; the remaining
    three are solved exactly from the (unimodular for max_secant=6) system.
    """
    rows, rhs = double_count_system(q, n, max_secant)
    m = max_secant - 1
    if m < 3:
        raise AnalysisError("need at least x2, x3, x4")
    free = m - 3
    bound = rhs[0]
    out = []

    def rec(prefix):
        if len(prefix) == free:
            r = [rhs[i] - sum(rows[i][3 + j] * prefix[j] for j in range(free)) for i in range(3)]
            sol = _solve3([[rows[i][c] for c in range(3)] for i in range(3)], r)
            if sol is not None and all(v >= 0 for v in sol):
                out.append(tuple(sol) + tuple(prefix))
            return
        for v in range(bound + 1):
            rec(prefix + [v])

    rec([])
    return sorted(out)


def _solve3(a, b):
    det = Fraction(_det3(a))
    if det == 0:
        return None
    sol = []
    for c in range(3):
        m = [row[:] for row in a]
        for r in range(3):
            m[r][c] = b[r]
        v = Fraction(_det3(m)) / det
        if v.denominator != 1:
            return None
        sol.append(int(v))
    return sol


def _det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def min_x6(q: int = 11, n: int = 25) -> int:
    sols = spectrum_solutions(q, n, 6)
    if not sols:
        raise AnalysisError("no feasible spectrum")
    return min(s[4] for s in sols)


# -- lower bounds -----------------------------------------------------------------


def _ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def lower_bound_dover(q: int) -> int:
    """Least integer n with ``n >= 2q + sqrt(2q - 47/4) - 1/2``.

    Evaluated exactly: ``n >= 2q - 1/2 + sqrt(D)`` iff ``n - 2q + 1/2 >= 0``
    and ``(n - 2q + 1/2)^2 >= D``.
    """
    d = Fraction(2 * q) - Fraction(47, 4)
    if d < 0:
        raise AnalysisError(f"bound undefined for q={q}: 2q < 47/4")
    # integer square root bracket for a starting point
    n = 2 * q + isqrt(int(d)) - 1
    while True:
        t = Fraction(n) - 2 * q + Fraction(1, 2)
        if t >= 0 and t * t >= d:
            break
        n += 1
    while True:
        t = Fraction(n - 1) - 2 * q + Fraction(1, 2)
        if t >= 0 and t * t >= d:
            n -= 1
        else:
            return n


def dover_bound_value(q: int) -> str:
    """The real-valued bound as an exact closed form, for reports."""
    d = Fraction(8 * q - 47, 4)
    return f"{2 * q} + sqrt({d}) - 1/2"


def lower_bound_heger_takats(q: int) -> int:
    return _ceil_frac(Fraction(9 * q, 4) - 3)


def secant_size_bound(q: int, k: int) -> int:
    """Minimum size of a blocking semioval with a (q-k)-secant: ceil(q(3k+4)/(k+2) - k)."""
    if not 1 <= k < q - 1:
        raise AnalysisError(f"k={k} outside 1 <= k < {q - 1}")
    return _ceil_frac(Fraction(q * (3 * k + 4), k + 2) - k)


def lower_bound(q: int) -> int:
    """Best available lower bound (max of the applicable bounds)."""
    bounds = [lower_bound_heger_takats(q)]
    if 8 * q >= 47:
        bounds.append(lower_bound_dover(q))
    return max(bounds)


def secant_bound_exclusions(q: int, n: int) -> set[int]:
    """Secant sizes ``q - k`` ruled out because ``secant_size_bound(q, k) > n``."""
    return {q - k for k in range(1, q - 1) if secant_size_bound(q, k) > n}


def excluded_secant_sizes(q: int, n: int) -> set[int]:
    """Secant sizes impossible for an n-point blocking semioval of PG(2,q).

    Always excludes q+1 (no line is contained). Sizes q-k are excluded when
    the secant-size bound exceeds n. For (q, n) = (11, 25) the q-secant is
    also excluded, a fact imported for that single instance.
    """
    if n < q + 1:
        raise AnalysisError(f"n={n} below q+1")
    out = {q + 1} | secant_bound_exclusions(q, n)
    if (q, n) == (11, 25):
        out.add(11)
    return out


# Structural fact used only for (q, n) = (11, 25): at most one 10-secant.
UNIQUE_TEN_SECANT = {(11, 25): 10}


def known_minimum(q: int) -> int | None:
    """Smallest blocking semioval sizes in the small Desarguesian planes (None: none exist)."""
    return KNOWN_MINIMA[q]


KNOWN_MINIMA: dict[int, int | None] = {2: None, 3: 6, 4: 9, 5: 11, 7: 16, 8: 19, 9: 21, 11: 26}

