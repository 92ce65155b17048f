"""Independent brute-force oracles shared by several test modules."""

from itertools import combinations

import numpy as np


def blocking_semiovals_by_enumeration(plane, size):
    """Every blocking semioval of exactly ``size`` points, as sorted index tuples.

    Uses only the incidence matrix: line counts via a matrix product, then the
    definitions checked directly.
    """
    inc = plane.incidence.astype(np.int64)
    q = plane.q
    found = []
    for subset in combinations(range(plane.n_points), size):
        mask = np.zeros(plane.n_points, dtype=np.int64)
        mask[list(subset)] = 1
        counts = mask @ inc
        if (counts == 0).any() or (counts == q + 1).any():
            continue
        tangent = (counts == 1).astype(np.int64)
        per_point = inc @ tangent
        if (per_point[list(subset)] == 1).all():
            found.append(subset)
    return found
