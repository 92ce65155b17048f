"""Collineations of PG(2,q) from PGL(3,q): action, frames, stabilisers, orbits.

Groups are explicit element lists. Every group used here is small (at most
a few tens of thousands of elements), so there is no generator machinery.
Field automorphisms are not modelled, so for non-prime q this is PGL, not
PGammaL.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Sequence

import numpy as np

from .plane import Plane

Matrix = tuple[tuple[int, int, int], tuple[int, int, int], tuple[int, int, int]]

MAX_FAMILY = 10**6
CLOSURE_CHECK_LIMIT = 20000


class GroupError(ValueError):
    pass


def _normalize_matrix(field, rows) -> Matrix:
    flat = [int(x) for row in rows for x in row]
    for c in flat:
        if c:
            s = field.inv(c)
            flat = [field.mul(s, x) for x in flat]
            return (tuple(flat[0:3]), tuple(flat[3:6]), tuple(flat[6:9]))  # type: ignore[return-value]
    raise GroupError("zero matrix")


def _det(field, m) -> int:
    mul, add, sub = field.mul, field.add, field.sub
    a, b, c = m[0]
    d, e, f = m[1]
    g, h, i = m[2]
    t1 = mul(a, sub(mul(e, i), mul(f, h)))
    t2 = mul(b, sub(mul(d, i), mul(f, g)))
    t3 = mul(c, sub(mul(d, h), mul(e, g)))
    return add(sub(t1, t2), t3)


def _matmul(field, x, y) -> list[list[int]]:
    mul, add = field.mul, field.add
    return [
        [add(add(mul(x[r][0], y[0][c]), mul(x[r][1], y[1][c])), mul(x[r][2], y[2][c])) for c in range(3)]
        for r in range(3)
    ]


def _adjugate(field, m) -> list[list[int]]:
    mul, sub = field.mul, field.sub

    def minor(r0, r1, c0, c1):
        return sub(mul(m[r0][c0], m[r1][c1]), mul(m[r0][c1], m[r1][c0]))

    # adj[i][j] = cofactor(j, i)
    cof = [
        [minor(1, 2, 1, 2), field.neg(minor(1, 2, 0, 2)), minor(1, 2, 0, 1)],
        [field.neg(minor(0, 2, 1, 2)), minor(0, 2, 0, 2), field.neg(minor(0, 2, 0, 1))],
        [minor(0, 1, 1, 2), field.neg(minor(0, 1, 0, 2)), minor(0, 1, 0, 1)],
    ]
    return [[cof[j][i] for j in range(3)] for i in range(3)]


class Collineation:
    """A projectivity ``v -> M v`` acting on point coordinate columns.

    Lines transform by the inverse transpose, ``[l] -> [l M^-1]``. The point
    and line permutations are computed eagerly, since every use here is in a
    loop over the whole plane.
    """

    __slots__ = ("plane", "matrix", "perm", "line_perm")

    def __init__(self, plane: Plane, rows):
        field = plane.field
        m = _normalize_matrix(field, rows)
        if _det(field, m) == 0:
            raise GroupError("singular matrix")
        self.plane = plane
        self.matrix = m
        t = np.array(plane.triples, dtype=np.int64)
        self.perm = _apply_matrix(plane, m, t)
        adj = _adjugate(field, m)  # proportional to M^-1
        # row vector l -> l * adj  ==  column vector adj^T l
        adj_t = [[adj[c][r] for c in range(3)] for r in range(3)]
        self.line_perm = _apply_matrix(plane, adj_t, t)

    def __eq__(self, other):
        return isinstance(other, Collineation) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"Collineation({[list(r) for r in self.matrix]})"

    def __mul__(self, other: Collineation) -> Collineation:
        """``(g * h)(P) == g(h(P))``."""
        return Collineation(self.plane, _matmul(self.plane.field, self.matrix, other.matrix))

    def inverse(self) -> Collineation:
        return Collineation(self.plane, _adjugate(self.plane.field, self.matrix))

    def is_identity(self) -> bool:
        return self.matrix == ((1, 0, 0), (0, 1, 0), (0, 0, 1))

    def apply_point(self, point):
        return self.plane.points[int(self.perm[self.plane.point(point).index])]

    def apply_line(self, line):
        return self.plane.lines[int(self.line_perm[self.plane.line(line).index])]

    def apply_set(self, indices) -> frozenset[int]:
        perm = self.perm
        return frozenset(int(perm[i]) for i in indices)

    def fixed_points(self) -> list[int]:
        return [i for i, j in enumerate(self.perm.tolist()) if i == j]

    def order(self) -> int:
        n, g = 1, self
        while not g.is_identity():
            g = g * self
            n += 1
        return n


def _apply_matrix(plane: Plane, m, t: np.ndarray) -> np.ndarray:
    """Indices of ``M v`` for every normalised triple ``v`` (rows of ``t``)."""
    field = plane.field
    mul, add = field.mul_table, field.add_table
    out = np.zeros_like(t)
    for r in range(3):
        acc = mul[m[r][0], t[:, 0]]
        acc = add[acc, mul[m[r][1], t[:, 1]]]
        out[:, r] = add[acc, mul[m[r][2], t[:, 2]]]
    # normalise each row: divide by first nonzero coordinate
    first = np.where(out[:, 0] != 0, out[:, 0], np.where(out[:, 1] != 0, out[:, 1], out[:, 2]))
    s = field.inv_table[first]
    norm = mul[s[:, None], out]
    q = plane.q
    # rank of normalised triple, matching Plane's enumeration order
    idx = np.where(
        norm[:, 0] == 1,
        q + 1 + norm[:, 1] * q + norm[:, 2],
        np.where(norm[:, 1] == 1, 1 + norm[:, 2], 0),
    )
    res = idx.astype(np.int64)
    res.setflags(write=False)
    return res


def identity(plane: Plane) -> Collineation:
    return Collineation(plane, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))


def from_frame(plane: Plane, e1, e2, e3, u) -> Collineation:
    """The unique collineation sending (1,0,0),(0,1,0),(0,0,1),(1,1,1) to the four given points."""
    pts = [plane.point(x) for x in (e1, e2, e3, u)]
    if not plane.in_general_position(pts):
        raise GroupError("frame images are not in general position")
    return _from_frame_idx(plane, [p.index for p in pts])


def _from_frame_idx(plane: Plane, idx: Sequence[int]) -> Collineation:
    return Collineation(plane, _frame_matrix(plane, idx))


def _frame_matrix(plane: Plane, idx: Sequence[int]) -> list[list[int]]:
    f = plane.field
    a, b, c, d = (plane.triples[i] for i in idx)
    cols = [a, b, c]
    # solve columns * lam = d ; columns are the images of e1, e2, e3
    m = [[cols[j][r] for j in range(3)] for r in range(3)]
    det = _det(f, m)
    inv_det = f.inv(det)
    adj = _adjugate(f, m)
    lam = [f.mul(inv_det, f.dot(adj[r], d)) for r in range(3)]
    return [[f.mul(m[r][j], lam[j]) for j in range(3)] for r in range(3)]


# -- groups -------------------------------------------------------------------


class GroupSet:
    """A finite collineation group held as an explicit, sorted element list."""

    def __init__(self, plane: Plane, elements: Iterable[Collineation], verify: bool | None = None):
        self.plane = plane
        uniq = {g.matrix: g for g in elements}
        self.elements = [uniq[k] for k in sorted(uniq)]
        if not any(g.is_identity() for g in self.elements):
            raise GroupError("group does not contain the identity")
        if verify is None:
            verify = len(self.elements) <= CLOSURE_CHECK_LIMIT
        if verify:
            self.check_closure()

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def check_closure(self) -> None:
        """Raise unless the element set is a group.

        Builds the group generated by a growing subset of the elements and
        checks it never leaves the set and finally equals it; a finite set
        equal to the group generated by some of its members is a group.
        """
        perms = {g.perm.tobytes(): g.perm for g in self.elements}
        if len(perms) != len(self.elements):
            raise GroupError("distinct matrices with equal actions")
        gens: list[np.ndarray] = []
        closure = {np.arange(self.plane.n_points).tobytes(): np.arange(self.plane.n_points)}
        for key, p in perms.items():
            if key in closure:
                continue
            gens.append(p)
            frontier = list(closure.values())
            while frontier:
                nxt = []
                for x in frontier:
                    for s in gens:
                        y = s[x]
                        k = y.tobytes()
                        if k not in closure:
                            if k not in perms:
                                raise GroupError("not closed under composition")
                            closure[k] = y
                            nxt.append(y)
                frontier = nxt
        if len(closure) != len(perms):
            raise GroupError("not closed under composition")

    def fixed_points(self) -> list[int]:
        n = self.plane.n_points
        fixed = np.ones(n, dtype=bool)
        ar = np.arange(n)
        for g in self.elements:
            fixed &= g.perm == ar
        return np.flatnonzero(fixed).tolist()


def orbits(domain: Iterable[int], group: GroupSet, action: str | Callable = "point") -> list[list[int]]:
    """Partition ``domain`` (indices) into orbits.

    ``action`` is ``"point"``/``"line"`` or a callable ``(g, x) -> x'``. Each
    orbit is sorted, its representative is its minimum, and orbits are
    sorted by representative. Raises ``GroupError`` if ``domain`` is not
    invariant under the group.
    """
    if action == "point":
        act = lambda g, x: int(g.perm[x])  # noqa: E731
    elif action == "line":
        act = lambda g, x: int(g.line_perm[x])  # noqa: E731
    else:
        act = action  # type: ignore[assignment]
    dom = sorted(set(domain))
    dset = set(dom)
    seen: set = set()
    out = []
    for x in dom:
        if x in seen:
            continue
        orb = {x}
        frontier = [x]
        while frontier:
            y = frontier.pop()
            for g in group.elements:
                z = act(g, y)
                if z not in dset:
                    raise GroupError(f"domain is not invariant: {y} -> {z}")
                if z not in orb:
                    orb.add(z)
                    frontier.append(z)
        seen |= orb
        out.append(sorted(orb))
    return out


def _frame_search(
    plane: Plane,
    anchors: Sequence[int],
    image_classes: Sequence[Sequence[int]],
    accept: Callable[[Collineation], bool],
    limit: int = MAX_FAMILY,
) -> list[Collineation]:
    """All collineations with ``g(anchor_i) in image_classes[i]`` that pass ``accept``.

    ``anchors`` is a frame; images are enumerated as ordered general-position
    tuples, each determining one collineation.
    """
    size = 1
    for c in image_classes:
        size *= len(c)
    if size > limit * 50:
        raise GroupError(f"frame search space {size} too large")
    inc, join = plane.incidence, plane.join_table
    found = []
    checked = 0

    def rec(chosen: list[int]):
        nonlocal checked
        k = len(chosen)
        if k == 4:
            checked += 1
            if checked > limit:
                raise GroupError(f"family exceeds {limit} members")
            m = _frame_matrix(plane, chosen)
            g = Collineation(plane, _matmul(plane.field, m, binv))
            if accept(g):
                found.append(g)
            return
        for x in image_classes[k]:
            if x in chosen:
                continue
            ok = True
            for i in range(k):
                for j in range(i + 1, k):
                    if inc[x, join[chosen[i], chosen[j]]]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                rec(chosen + [x])

    if not plane.in_general_position(anchors):
        raise GroupError("anchors are not a frame")
    # anchors -> standard frame -> images
    binv = _adjugate(plane.field, _frame_matrix(plane, list(anchors)))
    rec([])
    return found


def _complete_frame(plane: Plane, start: Sequence[int]) -> list[int]:
    frame = list(start)
    for x in range(plane.n_points):
        if len(frame) == 4:
            break
        if x not in frame and plane.in_general_position(frame + [x]):
            frame.append(x)
    if len(frame) != 4:
        raise GroupError("cannot complete to a frame")
    return frame


def subgroup_fixing(
    plane: Plane,
    pointwise: Iterable = (),
    setwise_lines: Iterable = (),
    setwise_points: Iterable[Iterable] = (),
    limit: int = MAX_FAMILY,
) -> GroupSet:
    """Collineations fixing each listed point, each listed line (as a set of
    points) and each listed point set (setwise).

    The family enumerated is the set of collineations determined by a frame
    built from the fixed points, then from the fixed point sets, then padded
    with arbitrary points whose images are unconstrained.
    """
    fixed = [plane.point(p).index for p in pointwise]
    lines = [plane.line(l).index for l in setwise_lines]
    classes = [frozenset(plane.point(p).index for p in s) for s in setwise_points]

    frame: list[int] = []
    image_classes: list[list[int]] = []
    for p in fixed:
        if len(frame) < 4 and plane.in_general_position(frame + [p]):
            frame.append(p)
            image_classes.append([p])
    for cls in sorted(classes, key=len):
        for p in sorted(cls):
            if len(frame) < 4 and plane.in_general_position(frame + [p]):
                frame.append(p)
                image_classes.append(sorted(cls))
    if len(frame) < 4:
        padded = _complete_frame(plane, frame)
        for _ in padded[len(frame):]:
            image_classes.append(list(range(plane.n_points)))
        frame = padded

    def accept(g: Collineation) -> bool:
        perm = g.perm
        if any(int(perm[p]) != p for p in fixed):
            return False
        if any(int(g.line_perm[l]) != l for l in lines):
            return False
        return all(g.apply_set(c) == c for c in classes)

    return GroupSet(plane, _frame_search(plane, frame, image_classes, accept, limit))


def point_signature(plane: Plane, members: np.ndarray, p: int) -> tuple[int, ...]:
    """Sorted intersection sizes of the lines through ``p``; invariant under the set stabiliser."""
    counts = members[plane.points_on_line[plane.lines_through_point[p]]].sum(axis=1)
    return tuple(sorted(counts.tolist()))


def stabilizer_of_set(plane: Plane, point_set) -> GroupSet:
    """All collineations mapping ``point_set`` onto itself.

    A frame ``F0`` inside the set is fixed and its images are enumerated over
    ordered 4-tuples of the set, restricted to points with the same line
    intersection profile as the corresponding frame point. Sets without a
    frame fall back to :func:`subgroup_fixing`.
    """
    idx = sorted({plane.point(p).index for p in point_set})
    s = frozenset(idx)
    if len(idx) < 4 or not _has_frame(plane, idx):
        if len(idx) < 2:
            raise GroupError("point set too small for a stabiliser search")
        return subgroup_fixing(plane, setwise_points=[idx])
    members = np.zeros(plane.n_points, dtype=np.int64)
    members[idx] = 1
    sig: dict[tuple, list[int]] = {}
    for p in idx:
        sig.setdefault(point_signature(plane, members, p), []).append(p)
    # choose frame points from the smallest signature classes first
    order = sorted(idx, key=lambda p: (len(sig[point_signature(plane, members, p)]), p))
    frame = _greedy_frame(plane, order)
    classes = [sig[point_signature(plane, members, p)] for p in frame]

    elements = _frame_search(plane, frame, classes, lambda g: g.apply_set(s) == s)
    return GroupSet(plane, elements)


def find_equivalence(plane: Plane, a, b) -> Collineation | None:
    """A collineation mapping point set ``a`` onto ``b``, or None if there is none."""
    ia = sorted({plane.point(p).index for p in a})
    ib = sorted({plane.point(p).index for p in b})
    if len(ia) != len(ib):
        return None
    if len(ia) < 4 or not _has_frame(plane, ia):
        raise GroupError("equivalence test needs four points in general position")
    ma = np.zeros(plane.n_points, dtype=np.int64)
    mb = np.zeros(plane.n_points, dtype=np.int64)
    ma[ia] = 1
    mb[ib] = 1
    sig_a = {p: point_signature(plane, ma, p) for p in ia}
    sig_b: dict[tuple, list[int]] = {}
    for p in ib:
        sig_b.setdefault(point_signature(plane, mb, p), []).append(p)
    if sorted(sig_a.values()) != sorted(s for s, ps in sig_b.items() for _ in ps):
        return None
    order = sorted(ia, key=lambda p: (len(sig_b[sig_a[p]]), p))
    frame = _greedy_frame(plane, order)
    target = frozenset(ib)
    for g in _frame_search(plane, frame, [sig_b[sig_a[p]] for p in frame], lambda g: g.apply_set(ia) == target):
        return g
    return None


def _has_frame(plane: Plane, idx: Sequence[int]) -> bool:
    try:
        _greedy_frame(plane, idx)
        return True
    except GroupError:
        return False


def _greedy_frame(plane: Plane, order: Sequence[int]) -> list[int]:
    order = list(order)

    def rec(frame, start):
        if len(frame) == 4:
            return frame
        for i in range(start, len(order)):
            cand = frame + [order[i]]
            if plane.in_general_position(cand):
                r = rec(cand, i + 1)
                if r:
                    return r
        return None

    res = rec([], 0)
    if res is None:
        raise GroupError("no four points of the set are in general position")
    return res


def pgl_order(q: int) -> int:
    return (q**3 - 1) * (q**3 - q) * (q**3 - q**2) // (q - 1)


def cyclic_group(g: Collineation) -> GroupSet:
    elems = [identity(g.plane)]
    h = g
    while not h.is_identity():
        elems.append(h)
        h = h * g
    return GroupSet(g.plane, elems)


def diagonal(plane: Plane, a: int, b: int, c: int = 1) -> Collineation:
    """``diag(c, a, b)``; default first entry 1."""
    if 0 in (a, b, c):
        raise GroupError("diagonal entries must be nonzero")
    return Collineation(plane, ((c, 0, 0), (0, a, 0), (0, 0, b)))


__all__ = [
    "Collineation",
    "GroupError",
    "GroupSet",
    "cyclic_group",
    "diagonal",
    "find_equivalence",
    "from_frame",
    "identity",
    "orbits",
    "pgl_order",
    "stabilizer_of_set",
    "subgroup_fixing",
]
