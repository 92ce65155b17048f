import itertools
from math import comb, sqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semioval.analysis import (
    AnalysisError,
    PointSet,
    excluded_secant_sizes,
    is_blocking_semioval,
    is_blocking_set,
    is_semioval,
    known_minimum,
    lower_bound,
    lower_bound_dover,
    lower_bound_heger_takats,
    min_x6,
    secant_bound_exclusions,
    secant_size_bound,
    secant_spectrum,
    spectrum_residual_eqs,
    spectrum_solutions,
    tangent_lines,
    tangent_map,
)
from semioval.fixtures import TRIANGLE_ORDERS, fixture_text, triangle_name
from semioval.plane import parse_points, plane_of_order


@given(st.sampled_from([2, 3, 4, 5, 7, 11]), st.data())
@settings(max_examples=150, deadline=None)
def test_spectrum_identities(q, data):
    plane = plane_of_order(q)
    pts = data.draw(st.sets(st.integers(0, plane.n_points - 1)))
    spec = secant_spectrum(PointSet(plane, pts))
    assert spec.identities_hold()
    assert len(spec.x) == q + 2


def test_spectrum_of_size26(size26):
    spec = secant_spectrum(size26)
    assert spec.x == (0, 26, 70, 20, 10, 0, 6, 0, 0, 0, 1, 0, 0)
    assert is_blocking_semioval(size26)


def test_tangent_queries(size26):
    plane = size26.plane
    assert [str(l) for l in tangent_lines((0, 0, 1), size26)] == ["[1,0,0]"]
    tm = tangent_map(size26)
    assert set(tm) == set(size26.indices()) and all(len(v) == 1 for v in tm.values())
    with pytest.raises(AnalysisError):
        tangent_lines((1, 0, 0), size26)
    assert plane.index_of((1, 0, 0)) not in size26


def _brute_blocking_semioval(s):
    plane = s.plane
    counts = [sum(p in s for p in plane.points_on_line[l]) for l in range(plane.n_lines)]
    if any(c == 0 or c == plane.q + 1 for c in counts):
        return False
    for p in s.indices():
        if sum(counts[l] == 1 for l in plane.lines_through_point[p]) != 1:
            return False
    return True


@pytest.mark.parametrize("q", [2, 3])
def test_predicates_match_naive_definition(q, seed):
    plane = plane_of_order(q)
    rng = np.random.default_rng(seed)
    for _ in range(300):
        s = PointSet(plane, np.flatnonzero(rng.random(plane.n_points) < 0.5))
        assert is_blocking_semioval(s) == _brute_blocking_semioval(s)


def test_predicates_on_small_sets():
    plane = plane_of_order(3)
    line = PointSet(plane, plane.points_on_line[0])
    assert not is_blocking_set(line)
    assert not is_semioval(PointSet(plane, [0]))  # q+1 tangents
    assert not is_semioval(PointSet(plane))
    assert not is_blocking_set(PointSet(plane, [0]))


@pytest.mark.parametrize("q", TRIANGLE_ORDERS)
def test_vertexless_triangles(q):
    plane = plane_of_order(q)
    s = PointSet(plane, parse_points(fixture_text(triangle_name(q)), plane))
    assert len(s) == 3 * (q - 1)
    assert is_blocking_semioval(s)


def _dover_float(q):
    return 2 * q + sqrt(2 * q - 47 / 4) - 0.5


@pytest.mark.parametrize("q", [7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31])
def test_dover_bound_matches_float(q):
    b = lower_bound_dover(q)
    assert b - 1 < _dover_float(q) <= b


def test_bound_values():
    assert lower_bound_dover(11) == 25
    assert lower_bound_dover(7) == 15
    assert lower_bound_dover(8) == 18
    assert lower_bound_heger_takats(11) == 22
    assert lower_bound_heger_takats(4) == 6
    assert lower_bound_heger_takats(16) == 33
    assert lower_bound(11) == 25
    assert lower_bound(3) == lower_bound_heger_takats(3)
    with pytest.raises(AnalysisError):
        lower_bound_dover(5)


def test_secant_size_bound():
    assert secant_size_bound(11, 1) == 25
    assert secant_size_bound(11, 4) == 26
    assert secant_size_bound(11, 5) == 25
    # ceil(q(3k+4)/(k+2) - k) computed with floats, away from integer ties
    for q in (7, 11, 13, 19):
        for k in range(1, q - 1):
            v = q * (3 * k + 4) / (k + 2) - k
            if abs(v - round(v)) > 1e-9:
                assert secant_size_bound(q, k) == int(np.ceil(v))
    with pytest.raises(AnalysisError):
        secant_size_bound(11, 10)


def test_excluded_secant_sizes():
    assert secant_bound_exclusions(11, 25) == {7, 8, 9}
    assert excluded_secant_sizes(11, 25) == {7, 8, 9, 11, 12}
    assert 12 in excluded_secant_sizes(11, 26)
    assert secant_bound_exclusions(11, 26) == set()


def _brute_spectra(q=11, n=25, top=6):
    """Every (x2..x6) with the three counts, by direct enumeration."""
    lines, inc, pairs = q * q + q + 1 - n, n * q, comb(n, 2)
    out = []
    for x6 in range(lines + 1):
        for x5 in range(lines + 1 - x6):
            for x4 in range(lines + 1 - x6 - x5):
                for x3 in range(lines + 1 - x6 - x5 - x4):
                    x2 = lines - x6 - x5 - x4 - x3
                    xs = (x2, x3, x4, x5, x6)
                    if sum((k + 2) * v for k, v in enumerate(xs)) != inc:
                        continue
                    if sum(comb(k + 2, 2) * v for k, v in enumerate(xs)) == pairs:
                        out.append(xs)
    return sorted(out)


def test_spectrum_solutions_against_enumeration():
    sols = spectrum_solutions(11, 25, 6)
    assert sols == _brute_spectra()
    assert min(s[4] for s in sols) == min_x6() == 9
    assert min(s[2] for s in sols) >= 2
    assert min(s[2] for s in sols) == 2


def test_residual_relations():
    for x2, x3, x4, x5, x6 in spectrum_solutions():
        x = [0, 25, x2, x3, x4, x5, x6]
        assert spectrum_residual_eqs(x) == (0, 0, 0)
    with pytest.raises(AnalysisError):
        spectrum_residual_eqs([0, 24, 0, 0, 0, 0, 0])
    with pytest.raises(AnalysisError):
        spectrum_residual_eqs([0, 25], n=26)


def test_known_minima_respect_bounds():
    for q, m in [(3, 6), (4, 9), (5, 11), (7, 16), (11, 26)]:
        assert known_minimum(q) == m
        assert lower_bound(q) <= m
    assert known_minimum(2) is None


def test_naive_spectrum_counts():
    plane = plane_of_order(5)
    pts = list(itertools.islice(range(plane.n_points), 0, 31, 3))
    s = PointSet(plane, pts)
    naive = [0] * 7
    for l in range(plane.n_lines):
        naive[sum(p in pts for p in plane.points_on_line[l])] += 1
    assert list(secant_spectrum(s).x) == naive
