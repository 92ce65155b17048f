import numpy as np
import pytest

from semioval.analysis import PointSet
from semioval.group import (
    Collineation,
    GroupError,
    GroupSet,
    cyclic_group,
    diagonal,
    find_equivalence,
    from_frame,
    identity,
    orbits,
    pgl_order,
    stabilizer_of_set,
    subgroup_fixing,
)
from semioval.plane import plane_of_order


def _random_collineation(plane, rng):
    while True:
        m = rng.integers(0, plane.q, size=(3, 3)).tolist()
        try:
            return Collineation(plane, m)
        except GroupError:
            continue


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_collineations_preserve_incidence(q, seed):
    plane = plane_of_order(q)
    rng = np.random.default_rng(seed + q)
    for _ in range(10):
        g = _random_collineation(plane, rng)
        inc = plane.incidence
        assert np.array_equal(inc[np.ix_(np.argsort(g.perm), np.argsort(g.line_perm))], inc)
        assert (g * g.inverse()).is_identity()


def test_composition_order():
    plane = plane_of_order(5)
    g = Collineation(plane, [[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    h = diagonal(plane, 2, 3)
    p = plane.point((1, 2, 3))
    assert (g * h).apply_point(p) == g.apply_point(h.apply_point(p))


def test_frame_map():
    plane = plane_of_order(7)
    frame = [(1, 2, 0), (0, 1, 5), (3, 0, 1), (1, 1, 1)]
    g = from_frame(plane, *frame)
    std = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]
    assert [g.apply_point(s) for s in std] == [plane.point(f) for f in frame]
    with pytest.raises(GroupError):
        from_frame(plane, (1, 0, 0), (0, 1, 0), (1, 1, 0), (1, 1, 1))


def test_singular_matrix():
    with pytest.raises(GroupError):
        Collineation(plane_of_order(3), [[1, 1, 0], [1, 1, 0], [0, 0, 1]])


def test_full_group_of_fano_plane():
    plane = plane_of_order(2)
    g = subgroup_fixing(plane)
    assert g.order == pgl_order(2) == 168


def test_line_stabilizer_q3():
    plane = plane_of_order(3)
    line = plane.line((0, 0, 1))
    g = subgroup_fixing(plane, setwise_lines=[line])
    # q^2 (q^2-1)(q^2-q) (q-1): stabiliser of a line in PGL(3,3)
    assert g.order == pgl_order(3) // 13 == 432


def test_orbits_partition():
    plane = plane_of_order(5)
    g = cyclic_group(diagonal(plane, 2, 4))
    orbs = orbits(range(plane.n_points), g)
    flat = sorted(x for o in orbs for x in o)
    assert flat == list(range(plane.n_points))
    assert all(len(o) in (1, 2, 4) for o in orbs)
    assert all(o == sorted(o) for o in orbs)


def test_not_a_group():
    plane = plane_of_order(5)
    with pytest.raises(GroupError):
        GroupSet(plane, [identity(plane), diagonal(plane, 2, 1)], verify=True)
    with pytest.raises(GroupError):
        GroupSet(plane, [diagonal(plane, 2, 1)])


def test_size26_stabilizer(size26):
    g = stabilizer_of_set(size26.plane, size26.indices())
    plane = size26.plane
    assert g.order == 5
    assert sorted(g.fixed_points()) == sorted(plane.index_of(v) for v in [(0, 0, 1), (0, 1, 0), (1, 0, 0)])
    assert all(size26.image(h) == size26 for h in g)


@pytest.mark.parametrize("q", [3, 4, 5])
def test_stabilizer_is_conjugation_invariant(q, seed):
    from semioval.fixtures import fixture_text, triangle_name
    from semioval.plane import parse_points

    plane = plane_of_order(q)
    s = PointSet(plane, parse_points(fixture_text(triangle_name(q)), plane))
    h = _random_collineation(plane, np.random.default_rng(seed))
    a = stabilizer_of_set(plane, s.indices())
    b = stabilizer_of_set(plane, s.image(h).indices())
    assert a.order == b.order
    # vertexless triangle: side permutations times the diagonal torus, except
    # in PG(2,4) where the 9 points form the Hesse configuration
    assert a.order == (216 if q == 4 else 6 * (q - 1) ** 2)


def test_find_equivalence(size26, seed):
    plane = size26.plane
    g = _random_collineation(plane, np.random.default_rng(seed))
    img = size26.image(g)
    h = find_equivalence(plane, size26.indices(), img.indices())
    assert h is not None and size26.image(h) == img
    other = PointSet(plane, size26.indices()[:-1] + [plane.index_of((1, 0, 0))])
    assert find_equivalence(plane, size26.indices(), other.indices()) is None
