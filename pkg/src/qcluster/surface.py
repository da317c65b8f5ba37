"""Combinatorial triangulations of unpunctured marked surfaces.

Labels ``0..n-1`` are internal arcs and ``n..m-1`` boundary segments, so a
label doubles as a row index of the extended exchange matrix.  A triangle
is a triple of side labels in counterclockwise order; inside it the quiver
has an arrow from each side to the next one.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    BudgetExceeded,
    CrossingChords,
    InvalidTriangulation,
    NotAnInternalArc,
    NotMaximal,
    PuncturedSurface,
    TorusOnePointExcluded,
)

Tri = tuple[int, int, int]


def canonical_triangle(sides: Sequence[int]) -> Tri:
    """Rotate a counterclockwise triple so that its smallest label comes first."""
    a, b, c = (int(x) for x in sides)
    i = (a, b, c).index(min(a, b, c))
    return tuple((a, b, c)[i:] + (a, b, c)[:i])  # type: ignore[return-value]


def rotate_to(tri: Tri, label: int) -> Tri:
    i = tri.index(label)
    return tri[i:] + tri[:i]  # type: ignore[return-value]


@dataclass(frozen=True)
class Triangulation:
    """Triangle incidence data; ``endpoints`` is only set for polygons."""

    n: int
    boundary: tuple[int, ...]
    triangles: tuple[Tri, ...]
    endpoints: tuple[tuple[int, int], ...] | None = field(default=None, compare=False)

    @property
    def m(self) -> int:
        return self.n + len(self.boundary)

    def is_internal(self, label: int) -> bool:
        return 0 <= label < self.n

    @cached_property
    def occurrences(self) -> dict[int, list[tuple[Tri, int]]]:
        """Map each label to its ``(triangle, slot)`` occurrences."""
        occ: dict[int, list[tuple[Tri, int]]] = {}
        for tri in self.triangles:
            for slot, lab in enumerate(tri):
                occ.setdefault(lab, []).append((tri, slot))
        return occ

    def triangles_of(self, k: int) -> list[Tri]:
        return [t for t, _ in self.occurrences[k]]

    def chord(self, label: int) -> tuple[int, int] | None:
        return None if self.endpoints is None else self.endpoints[label]

    def chords(self) -> dict[tuple[int, int], int]:
        if self.endpoints is None:
            raise ValueError("only polygon triangulations carry chords")
        return {self.endpoints[i]: i for i in range(self.n)}

    @cached_property
    def shape(self) -> frozenset | tuple:
        """Label-free identity for polygons, the labelled triangles otherwise."""
        if self.endpoints is not None:
            return frozenset(self.endpoints[: self.n])
        return self.triangles

    def contains_chord(self, chord: tuple[int, int]) -> bool:
        return tuple(sorted(chord)) in self.chords()

    def to_json(self) -> dict:
        out: dict = {"n": self.n, "boundary": list(self.boundary), "triangles": [list(t) for t in self.triangles]}
        if self.endpoints is not None:
            out["endpoints"] = [list(e) for e in self.endpoints]
        return out


def _make(n: int, boundary: Iterable[int], triangles: Iterable[Sequence[int]], endpoints=None) -> Triangulation:
    tris = tuple(sorted(canonical_triangle(t) for t in triangles))
    eps = None if endpoints is None else tuple(tuple(sorted(e)) for e in endpoints)
    return Triangulation(n, tuple(boundary), tris, eps)


def validate(t: Triangulation) -> None:
    labels = set(range(t.n)) | set(t.boundary)
    if set(t.boundary) != set(range(t.n, t.m)):
        raise InvalidTriangulation("boundary labels must be n..m-1")
    for tri in t.triangles:
        if len(set(tri)) != 3:
            raise InvalidTriangulation(f"triangle {tri} repeats a side (self-folded)")
        if not set(tri) <= labels:
            raise InvalidTriangulation(f"triangle {tri} uses an unknown label")
    for lab in labels:
        cnt = len(t.occurrences.get(lab, []))
        want = 2 if t.is_internal(lab) else 1
        if cnt != want:
            raise InvalidTriangulation(f"label {lab} lies in {cnt} triangle sides, expected {want}")
    if not t.boundary:
        if t.n == 3 and len(t.triangles) == 2:
            raise TorusOnePointExcluded("the torus with one marked point is excluded")
        raise PuncturedSurface("a surface without boundary has punctures")
    for cls in marked_points(t):
        if not cls[1]:
            raise PuncturedSurface("triangulation has an interior marked point")


def marked_points(t: Triangulation) -> list[tuple[list[tuple[Tri, int]], bool]]:
    """Corner classes; corner ``(tri, i)`` sits at the start of side ``tri[i]``.

    Each class is returned with a flag saying whether it touches a
    boundary segment.
    """
    corners = [(tri, i) for tri in t.triangles for i in range(3)]
    parent = {c: c for c in corners}

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for lab in range(t.n):
        (t1, i1), (t2, i2) = t.occurrences[lab]
        union((t1, i1), (t2, (i2 + 1) % 3))
        union((t1, (i1 + 1) % 3), (t2, i2))
    classes: dict = {}
    for c in corners:
        classes.setdefault(find(c), []).append(c)
    out = []
    for members in classes.values():
        on_boundary = any(
            not t.is_internal(tri[i]) or not t.is_internal(tri[(i - 1) % 3]) for tri, i in members
        )
        out.append((members, on_boundary))
    return out


def from_triangles(n: int, boundary: Sequence[int], triangles: Iterable[Sequence[int]]) -> Triangulation:
    t = _make(n, boundary, triangles)
    validate(t)
    return t


# ---------------------------------------------------------------------------
# quiver


@dataclass(frozen=True)
class Arrow:
    tail: int
    head: int
    triangle: Tri


@dataclass(frozen=True)
class QuiverWithRelations:
    """Quiver on internal arcs; ``b`` is extended with boundary rows."""

    n: int
    b: np.ndarray
    arrows: tuple[Arrow, ...]
    relations: frozenset[tuple[int, int]]

    @property
    def b_square(self) -> np.ndarray:
        return self.b[: self.n]

    def arrows_from(self, v: int) -> list[int]:
        return [i for i, a in enumerate(self.arrows) if a.tail == v]

    def arrows_to(self, v: int) -> list[int]:
        return [i for i, a in enumerate(self.arrows) if a.head == v]

    def arrow_in(self, tri: Tri, tail: int, head: int) -> int | None:
        for i, a in enumerate(self.arrows):
            if a.triangle == tri and a.tail == tail and a.head == head:
                return i
        return None


@lru_cache(maxsize=8192)
def quiver_of(t: Triangulation) -> QuiverWithRelations:
    b = np.zeros((t.m, t.n), dtype=np.int64)
    arrows: list[Arrow] = []
    relations: set[tuple[int, int]] = set()
    for tri in t.triangles:
        local: dict[int, int] = {}
        for i in range(3):
            s, u = tri[i], tri[(i + 1) % 3]
            # arrow s -> u contributes b[u, s] += 1 and b[s, u] -= 1
            if t.is_internal(s):
                b[u, s] += 1
            if t.is_internal(u):
                b[s, u] -= 1
            if t.is_internal(s) and t.is_internal(u):
                local[i] = len(arrows)
                arrows.append(Arrow(s, u, tri))
        if len(local) == 3:
            for i in range(3):
                relations.add((local[i], local[(i + 1) % 3]))
    b.setflags(write=False)
    return QuiverWithRelations(t.n, b, tuple(arrows), frozenset(relations))


def is_gentle(q: QuiverWithRelations) -> bool:
    """Check the four gentle-algebra clauses for a quiver with relations."""
    for v in range(q.n):
        if len(q.arrows_from(v)) > 2 or len(q.arrows_to(v)) > 2:
            return False
    for i, beta in enumerate(q.arrows):
        before = q.arrows_to(beta.tail)
        after = q.arrows_from(beta.head)
        if sum((a, i) in q.relations for a in before) > 1:
            return False
        if sum((a, i) not in q.relations for a in before) > 1:
            return False
        if sum((i, g) in q.relations for g in after) > 1:
            return False
        if sum((i, g) not in q.relations for g in after) > 1:
            return False
    return all(q.arrows[a].head == q.arrows[b].tail for a, b in q.relations)


# ---------------------------------------------------------------------------
# flips and local configuration


@dataclass(frozen=True)
class LocalConfig:
    """Quadrilateral around ``k``.

    ``tri_minus = (k, km2, km1)`` and ``tri_plus = (k, kp2, kp1)`` in
    counterclockwise order, so ``km1 -> k -> km2`` and ``kp1 -> k -> kp2``.
    Neighbour labels may be boundary segments (absent arrows).
    """

    k: int
    tri_minus: Tri
    tri_plus: Tri
    km1: int
    kp1: int
    km2: int
    kp2: int
    n: int

    @property
    def coincidence(self) -> str:
        if self.km1 == self.kp1:
            return "km1=kp1"
        if self.km2 == self.kp2:
            return "km2=kp2"
        return "none"

    def present(self, label: int) -> bool:
        return 0 <= label < self.n


def local_config(t: Triangulation, k: int) -> LocalConfig:
    if not t.is_internal(k):
        raise NotAnInternalArc(f"{k} is not an internal arc")
    d1, d2 = sorted(t.triangles_of(k))
    if d1 == d2:
        raise InvalidTriangulation("arc lies twice in one triangle")
    _, a, b = rotate_to(d1, k)
    _, c, d = rotate_to(d2, k)
    if b == d and a == c:
        raise TorusOnePointExcluded("both neighbour coincidences hold")
    return LocalConfig(k, rotate_to(d1, k), rotate_to(d2, k), b, d, a, c, t.n)


def flip(t: Triangulation, k: int) -> Triangulation:
    """Replace ``k`` by the other diagonal of its quadrilateral; the label is kept."""
    cfg = local_config(t, k)
    _, a, b = cfg.tri_minus
    _, c, d = cfg.tri_plus
    new1 = canonical_triangle((k, b, c))
    new2 = canonical_triangle((k, d, a))
    rest = [tri for tri in t.triangles if tri not in (canonical_triangle(cfg.tri_minus), canonical_triangle(cfg.tri_plus))]
    endpoints = None
    if t.endpoints is not None:
        eps = list(t.endpoints)
        s1 = _far_vertex(eps, k, a, b)
        s2 = _far_vertex(eps, k, c, d)
        eps[k] = tuple(sorted((s1, s2)))
        endpoints = tuple(eps)
    return Triangulation(t.n, t.boundary, tuple(sorted(rest + [new1, new2])), endpoints)


def _far_vertex(eps, k, x, y) -> int:
    # the corner opposite k is the one vertex shared by the other two sides
    (v,) = set(eps[x]) & set(eps[y])
    return v


# ---------------------------------------------------------------------------
# polygons


def chords_cross(p: tuple[int, int], q: tuple[int, int]) -> bool:
    a, b = sorted(p)
    c, d = sorted(q)
    return a < c < b < d or c < a < d < b


def polygon_triangulation(vertex_count: int, diagonals: Sequence[Sequence[int]]) -> Triangulation:
    """Triangulated convex polygon with vertices ``0..N-1`` counterclockwise.

    Diagonal ``i`` gets label ``i``; boundary segment ``(j, j+1)`` gets label
    ``n + j``.
    """
    nv = int(vertex_count)
    if nv < 4:
        raise ValueError("need at least 4 vertices")
    diags = [tuple(sorted(int(x) for x in d)) for d in diagonals]
    for d in diags:
        if not (0 <= d[0] < d[1] < nv) or d[1] - d[0] in (1, nv - 1):
            raise InvalidTriangulation(f"{d} is not a diagonal")
    if len(set(diags)) != len(diags):
        raise InvalidTriangulation("repeated diagonal")
    for p, q in combinations(diags, 2):
        if chords_cross(p, q):
            raise CrossingChords(f"chords {p} and {q} cross")
    if len(diags) != nv - 3:
        raise NotMaximal(f"{len(diags)} diagonals, a triangulation needs {nv - 3}")
    n = nv - 3
    label = {d: i for i, d in enumerate(diags)}
    endpoints = list(diags)
    for j in range(nv):
        seg = tuple(sorted((j, (j + 1) % nv)))
        label[seg] = n + j
        endpoints.append(seg)
    tris = []
    for u, v, w in combinations(range(nv), 3):
        e1, e2, e3 = (u, v), (v, w), (u, w)
        if e1 in label and e2 in label and e3 in label:
            tris.append((label[e1], label[e2], label[e3]))
    t = _make(n, range(n, n + nv), tris, endpoints)
    validate(t)
    return t


def fan_triangulation(vertex_count: int, apex: int = 0) -> Triangulation:
    nv = vertex_count
    diags = [(apex, (apex + j) % nv) for j in range(2, nv - 1)]
    return polygon_triangulation(nv, diags)


def all_polygon_chords(vertex_count: int) -> list[tuple[int, int]]:
    nv = vertex_count
    return [(i, j) for i in range(nv) for j in range(i + 2, nv) if not (i == 0 and j == nv - 1)]


# ---------------------------------------------------------------------------
# annuli


def annulus_triangulation(outer: int, inner: int) -> Triangulation:
    """Standard bridging triangulation of an annulus.

    Arc ``0`` is the cut between inner point 0 and outer point 0; the strip
    is triangulated by first walking along the inner boundary and then the
    outer one.  Inner segments get labels ``n..n+inner-1``, outer ones
    follow.
    """
    if outer < 1 or inner < 1:
        raise ValueError("each boundary component needs a marked point")
    n = outer + inner
    inner_seg = [n + j for j in range(inner)]
    outer_seg = [n + inner + j for j in range(outer)]
    tris = []
    prev = 0
    new_label = 1
    steps = ["in"] * inner + ["out"] * outer
    for idx, step in enumerate(steps):
        new = 0 if idx == len(steps) - 1 else new_label
        if step == "in":
            tris.append((inner_seg[steps[:idx].count("in")], new, prev))
        else:
            tris.append((new, outer_seg[steps[:idx].count("out")], prev))
        if new:
            new_label += 1
        prev = new
    return from_triangles(n, range(n, n + inner + outer), tris)


# ---------------------------------------------------------------------------
# search


class FlipBFS:
    """Breadth-first enumeration of triangulations reachable from ``start``.

    Neighbours are generated in increasing flip index; the enumeration is
    extended lazily and can be shared between queries.
    """

    def __init__(self, start: Triangulation) -> None:
        self.start = start
        self.order: list[Triangulation] = [start]
        self._paths: dict = {start.shape: ()}
        self._queue: deque[Triangulation] = deque([start])

    def path_to(self, t: Triangulation) -> tuple[int, ...]:
        return self._paths[t.shape]

    def _expand_one(self) -> bool:
        if not self._queue:
            return False
        t = self._queue.popleft()
        base = self._paths[t.shape]
        for k in range(t.n):
            nt = flip(t, k)
            if nt.shape not in self._paths:
                self._paths[nt.shape] = base + (k,)
                self.order.append(nt)
                self._queue.append(nt)
        return True

    def iterate(self, budget: int) -> Iterator[Triangulation]:
        i = 0
        while i < budget:
            while i >= len(self.order):
                if not self._expand_one():
                    return
            yield self.order[i]
            i += 1
        raise BudgetExceeded(f"search exhausted its budget of {budget} triangulations")


_BFS_CACHE: dict[Triangulation, FlipBFS] = {}


def bfs_from(t: Triangulation) -> FlipBFS:
    bfs = _BFS_CACHE.get(t)
    if bfs is None:
        if len(_BFS_CACHE) > 512:
            _BFS_CACHE.clear()
        bfs = _BFS_CACHE[t] = FlipBFS(t)
    return bfs


def find_flip_path(start: Triangulation, to_arc: tuple[int, int], budget: int = 100_000) -> tuple[int, ...]:
    """Shortest flip sequence from ``start`` to a triangulation containing a chord."""
    chord = tuple(sorted(to_arc))
    if start.endpoints is None:
        raise ValueError("chord descriptors need a polygon triangulation")
    nv = len(start.boundary)
    if chord not in all_polygon_chords(nv):
        raise NotAnInternalArc(f"{to_arc} is not a diagonal")
    bfs = bfs_from(start)
    for t in bfs.iterate(budget):
        if t.contains_chord(chord):
            return bfs.path_to(t)
    raise BudgetExceeded("flip graph exhausted without reaching the arc")


def walk(start: Triangulation, path: Sequence[int]) -> list[Triangulation]:
    """The triangulations visited along ``path``, starting with ``start``."""
    out = [start]
    for k in path:
        out.append(flip(out[-1], k))
    return out


def all_polygon_triangulations(vertex_count: int) -> list[Triangulation]:
    bfs = bfs_from(fan_triangulation(vertex_count))
    while bfs._expand_one():
        pass
    return list(bfs.order)
