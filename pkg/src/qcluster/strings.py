"""Strings of the gentle algebra of a triangulation.

A string is the crossing sequence of an arc with the internal arcs of a
triangulation.  Besides the vertex labels and arrow directions each step
records the triangle it passes through; two internal arcs can be joined by
two arrows (annuli), so the triangle is what pins down the arrow.

Positions inside a word are 0-based.  A submodule is stored as the sorted
tuple of positions it contains.
"""
from __future__ import annotations

import heapq
import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import Backtrack, BudgetExceeded, InvalidString, MissingArrow, NotAnArc, RelationViolated
from .surface import LocalConfig, Triangulation, Tri, canonical_triangle, flip, local_config, rotate_to

RIGHT = 1
LEFT = -1

Submodule = tuple[int, ...]


@dataclass(frozen=True)
class StringWord:
    """Vertices ``x_0..x_{s-1}``; ``directions[i]`` is ``RIGHT`` for ``x_i -> x_{i+1}``.

    ``via[i]`` is the triangle containing the arrow of step ``i``.  The
    empty word of an arc of the triangulation carries that arc in ``arc``.
    """

    vertices: tuple[int, ...]
    directions: tuple[int, ...] = ()
    via: tuple[Tri, ...] = ()
    arc: int | None = None

    def __post_init__(self) -> None:
        s = len(self.vertices)
        if s == 0 and self.arc is None:
            raise InvalidString("the empty word needs an arc label")
        if s and self.arc is not None:
            raise InvalidString("only the empty word carries an arc label")
        if len(self.directions) != max(s - 1, 0) or len(self.via) != max(s - 1, 0):
            raise InvalidString("a word of length s has s-1 steps")
        if any(d not in (RIGHT, LEFT) for d in self.directions):
            raise InvalidString("directions are +1 (right) or -1 (left)")

    @classmethod
    def empty(cls, arc: int) -> "StringWord":
        return cls((), (), (), arc)

    @property
    def length(self) -> int:
        return len(self.vertices)

    def is_empty(self) -> bool:
        return not self.vertices

    def reversed(self) -> "StringWord":
        if self.is_empty():
            return self
        return StringWord(
            self.vertices[::-1],
            tuple(-d for d in self.directions[::-1]),
            self.via[::-1],
        )

    def canonical(self) -> "StringWord":
        """The lexicographically smaller of the word and its reverse."""
        r = self.reversed()
        mine = (self.vertices, self.directions, self.via)
        theirs = (r.vertices, r.directions, r.via)
        return self if mine <= theirs else r

    def key(self) -> tuple:
        c = self.canonical()
        return (c.arc, c.vertices, c.directions, c.via)

    def __str__(self) -> str:
        return format_word(self)


# ---------------------------------------------------------------------------
# text form


_TOKEN = re.compile(r"^(>R|<L)(?:\[(\d+)\])?$")


def parse_word(text: str, t: Triangulation | None = None) -> StringWord:
    """Parse ``"1 >R 2 <L 3"`` or ``"@arc:4"``.

    A step may name its triangle as ``>R[j]`` (index into ``t.triangles``);
    otherwise it is inferred from ``t`` when unique.
    """
    text = text.strip()
    if text.startswith("@arc:"):
        return StringWord.empty(int(text[5:]))
    toks = text.split()
    if not toks or len(toks) % 2 == 0:
        raise InvalidString(f"cannot parse word {text!r}")
    verts = [int(x) for x in toks[0::2]]
    dirs, via = [], []
    for i, tok in enumerate(toks[1::2]):
        mt = _TOKEN.match(tok)
        if not mt:
            raise InvalidString(f"bad direction token {tok!r}")
        d = RIGHT if mt.group(1) == ">R" else LEFT
        dirs.append(d)
        if mt.group(2) is not None:
            if t is None:
                raise InvalidString("triangle indices need a triangulation")
            via.append(t.triangles[int(mt.group(2))])
        else:
            if t is None:
                raise InvalidString("cannot infer triangles without a triangulation")
            tail, head = (verts[i], verts[i + 1]) if d == RIGHT else (verts[i + 1], verts[i])
            cands = [tri for tri in t.triangles if _has_arrow(tri, tail, head)]
            if len(cands) != 1:
                raise InvalidString(
                    f"step {i} is {'ambiguous' if cands else 'not an arrow'}; name its triangle with [j]"
                )
            via.append(cands[0])
    return StringWord(tuple(verts), tuple(dirs), tuple(via))


def format_word(w: StringWord, t: Triangulation | None = None) -> str:
    if w.is_empty():
        return f"@arc:{w.arc}"
    parts = [str(w.vertices[0])]
    for i, d in enumerate(w.directions):
        tok = ">R" if d == RIGHT else "<L"
        if t is not None:
            tok += f"[{t.triangles.index(w.via[i])}]"
        parts += [tok, str(w.vertices[i + 1])]
    return " ".join(parts)


def _has_arrow(tri: Tri, tail: int, head: int) -> bool:
    if tail not in tri or head not in tri:
        return False
    i = tri.index(tail)
    return tri[(i + 1) % 3] == head


# ---------------------------------------------------------------------------
# validity


def validate_string(w: StringWord, t: Triangulation) -> None:
    """Raise ``MissingArrow``, ``Backtrack`` or ``RelationViolated`` on bad words."""
    if w.is_empty():
        if not t.is_internal(w.arc):
            raise InvalidString(f"{w.arc} is not an internal arc")
        return
    for x in w.vertices:
        if not t.is_internal(x):
            raise MissingArrow(f"vertex {x} is not an internal arc")
    tris = set(t.triangles)
    for i, d in enumerate(w.directions):
        tail, head = (w.vertices[i], w.vertices[i + 1]) if d == RIGHT else (w.vertices[i + 1], w.vertices[i])
        if w.via[i] not in tris or not _has_arrow(w.via[i], tail, head):
            raise MissingArrow(f"step {i}: no arrow {tail}->{head} in triangle {w.via[i]}")
    for i in range(len(w.directions) - 1):
        if w.via[i] != w.via[i + 1]:
            continue
        if w.directions[i] != w.directions[i + 1]:
            raise Backtrack(f"steps {i} and {i + 1} traverse the same arrow back and forth")
        # two arrows of one triangle in a row: a composition inside the triangle
        if all(t.is_internal(x) for x in w.via[i]):
            raise RelationViolated(f"steps {i} and {i + 1} compose to a relation")
        raise MissingArrow(f"steps {i} and {i + 1} use one triangle twice")


def is_valid(w: StringWord, t: Triangulation) -> bool:
    try:
        validate_string(w, t)
    except InvalidString:
        return False
    return True



def enumerate_strings(t: Triangulation, max_length: int) -> list[StringWord]:
    """All nonempty strings with at most ``max_length`` vertices, one per reverse pair."""
    internal = [x for x in range(t.n)]
    steps: dict[int, list[tuple[int, int, Tri]]] = {x: [] for x in internal}
    for tri in t.triangles:
        for i in range(3):
            tail, head = tri[i], tri[(i + 1) % 3]
            if t.is_internal(tail) and t.is_internal(head):
                steps[tail].append((RIGHT, head, tri))
                steps[head].append((LEFT, tail, tri))
    found: dict[tuple, StringWord] = {}
    stack = [StringWord((x,)) for x in internal]
    while stack:
        w = stack.pop()
        found.setdefault(w.key(), w.canonical())
        if w.length == max_length:
            continue
        for d, y, tri in steps[w.vertices[-1]]:
            w2 = StringWord(w.vertices + (y,), w.directions + (d,), w.via + (tri,))
            if is_valid(w2, t):
                stack.append(w2)
    return sorted(found.values(), key=lambda w: (w.length, w.key()))


# ---------------------------------------------------------------------------
# canonical submodules


def canonical_submodules(w: StringWord) -> list[Submodule]:
    """All position sets closed under the arrows of ``w``, sorted.

    A step ``i -> i+1`` forces ``i+1`` into the set once ``i`` is in it, and
    symmetrically for left steps.  Enumerated by a left-to-right search.
    """
    s = w.length
    if s == 0:
        return [()]
    out: list[Submodule] = []
    chosen: list[int] = []

    def rec(i: int, prev_in: bool) -> None:
        if i == s:
            out.append(tuple(chosen))
            return
        for take in (False, True):
            if i > 0:
                d = w.directions[i - 1]
                if d == RIGHT and prev_in and not take:
                    continue
                if d == LEFT and take and not prev_in:
                    continue
            if take:
                chosen.append(i)
            rec(i + 1, take)
            if take:
                chosen.pop()

    rec(0, False)
    return sorted(out)


def direction_masks(directions: Sequence[int]) -> tuple[int, int]:
    right = left = 0
    for i, d in enumerate(directions):
        if d == RIGHT:
            right |= 1 << i
        else:
            left |= 1 << i
    return right, left


def canonical_submodules_bruteforce(directions: Sequence[int]) -> list[Submodule]:
    """Oracle: subsets whose maximal intervals are substrings, by exhaustion."""
    s = len(directions) + 1
    right, left = direction_masks(directions)
    masks = _kernels.closed_masks(s, right, left)
    return sorted(tuple(i for i in range(s) if (int(mk) >> i) & 1) for mk in masks)


def dim_vector(w: StringWord, u: Sequence[int], m: int) -> np.ndarray:
    v = np.zeros(m, dtype=np.int64)
    for i in u:
        v[w.vertices[i]] += 1
    return v


def submodule_dims(w: StringWord, subs: Sequence[Submodule], m: int) -> np.ndarray:
    out = np.zeros((len(subs), m), dtype=np.int64)
    for r, u in enumerate(subs):
        for i in u:
            out[r, w.vertices[i]] += 1
    return out


# ---------------------------------------------------------------------------
# arcs as triangle paths


@dataclass(frozen=True)
class TrianglePath:
    """Triangles ``D_0..D_s`` met by an arc and the crossings between them."""

    triangles: tuple[Tri, ...]
    crossings: tuple[int, ...]


def triangle_path(w: StringWord, t: Triangulation) -> TrianglePath:
    if w.is_empty():
        raise InvalidString("the empty word has no triangle path")
    xs = w.vertices
    s = len(xs)
    if s == 1:
        d0, d1 = sorted(t.triangles_of(xs[0]))
        return TrianglePath((d0, d1), xs)
    first = [tri for tri in t.triangles_of(xs[0]) if tri != w.via[0]]
    last = [tri for tri in t.triangles_of(xs[-1]) if tri != w.via[-1]]
    if len(first) != 1 or len(last) != 1:
        raise InvalidString("word does not determine its end triangles")
    return TrianglePath((first[0],) + tuple(w.via) + (last[0],), xs)


def word_from_path(path: TrianglePath) -> StringWord:
    xs = path.crossings
    dirs = []
    for i in range(len(xs) - 1):
        tri = path.triangles[i + 1]
        dirs.append(RIGHT if _has_arrow(tri, xs[i], xs[i + 1]) else LEFT)
    return StringWord(tuple(xs), tuple(dirs), tuple(path.triangles[1:-1]))


# ---------------------------------------------------------------------------
# visits to the flip quadrilateral


@dataclass(frozen=True)
class Visit:
    """A maximal stretch of an arc inside the quadrilateral of ``k``.

    ``first``/``last`` index the triangles of the path; ``entry`` and
    ``exit`` name a side (``"a"``..``"d"``) or a corner (``"P"``, ``"R"``,
    ``"S1"``, ``"S2"``) of the quadrilateral.  ``positions`` lists the word
    positions the visit covers, entry and exit crossings included.
    """

    first: int
    last: int
    entry: str
    exit: str
    positions: tuple[int, ...]

    @property
    def k_crossings(self) -> int:
        return self.last - self.first


# triangle (k, a, b): corners opposite k, a, b; triangle (k, c, d) likewise
_CORNERS = {0: ("S1", "P", "R"), 1: ("S2", "R", "P")}
_SIDES = {0: (None, "a", "b"), 1: (None, "c", "d")}
_NEW_TRI_OF_SIDE = {"b": 0, "c": 0, "d": 1, "a": 1}
_NEW_TRI_OF_CORNER = {"P": 0, "R": 1}


def quad_names(cfg: LocalConfig) -> tuple[Tri, Tri]:
    return canonical_triangle(cfg.tri_minus), canonical_triangle(cfg.tri_plus)


def visits(w: StringWord, t: Triangulation, k: int, path: TrianglePath | None = None) -> list[Visit]:
    cfg = local_config(t, k)
    quad = quad_names(cfg)
    rot = (cfg.tri_minus, cfg.tri_plus)
    path = path or triangle_path(w, t)
    tris, xs = path.triangles, path.crossings
    s = len(xs)
    out: list[Visit] = []
    i = 0
    while i <= s:
        if tris[i] not in quad:
            i += 1
            continue
        j = i
        while j < s and xs[j] == k and tris[j + 1] in quad:
            j += 1
        # crossing xs[i-1] enters triangle i, xs[j] leaves triangle j
        q0 = quad.index(tris[i])
        q1 = quad.index(tris[j])
        if i == 0:
            entry = _CORNERS[q0][rot[q0].index(xs[0])]
        else:
            entry = _SIDES[q0][rot[q0].index(xs[i - 1])]
        if j == s:
            exit_ = _CORNERS[q1][rot[q1].index(xs[s - 1])]
        else:
            exit_ = _SIDES[q1][rot[q1].index(xs[j])]
        lo = i - 1 if i > 0 else 0
        hi = j if j < s else s - 1
        out.append(Visit(i, j, entry, exit_, tuple(range(lo, hi + 1))))
        i = j + 1
    return out


def _rewrite_visit(v: Visit, new_tris: tuple[Tri, Tri], k: int) -> list | None:
    """Token list ``[T]`` or ``[T, k, T']`` replacing a visit; ``None`` means the arc is ``k'``."""
    ends = (v.entry, v.exit)
    side_tri = [_NEW_TRI_OF_SIDE[e] for e in ends if e in _NEW_TRI_OF_SIDE]
    if all(e in ("S1", "S2") for e in ends):
        return None

    def home(e: str) -> int:
        if e in _NEW_TRI_OF_SIDE:
            return _NEW_TRI_OF_SIDE[e]
        if e in _NEW_TRI_OF_CORNER:
            return _NEW_TRI_OF_CORNER[e]
        # S1/S2 lie in both new triangles; take the one holding the other end
        return side_tri[0] if side_tri else _NEW_TRI_OF_CORNER[ends[0] if ends[1] == e else ends[1]]

    h0, h1 = home(v.entry), home(v.exit)
    if h0 == h1:
        return [new_tris[h0]]
    return [new_tris[h0], k, new_tris[h1]]


def flip_string_with_map(w: StringWord, t: Triangulation, k: int) -> tuple[StringWord, dict[int, int]]:
    """Rewrite ``w`` for ``flip(t, k)``; also map old non-``k`` positions to new ones.

    Each visit to the quadrilateral is rerouted inside the two new
    triangles; crossings outside it, and those of the quadrilateral sides,
    are kept in order.
    """
    if w.is_empty():
        if w.arc == k:
            # the old diagonal crosses only the new one
            return StringWord((k,)), {}
        return w, {}
    cfg = local_config(t, k)
    _, a, b = cfg.tri_minus
    _, c, d = cfg.tri_plus
    new_tris = (canonical_triangle((k, b, c)), canonical_triangle((k, d, a)))
    path = triangle_path(w, t)
    vs = visits(w, t, k, path)
    tris, xs = path.triangles, path.crossings
    tokens: list = []  # alternating triangle, crossing label, triangle, ...
    old_index: list[int | None] = []  # word position of each crossing token, None for k'
    pos = 0
    vi = 0
    while pos <= len(xs):
        if vi < len(vs) and vs[vi].first == pos:
            v = vs[vi]
            rep = _rewrite_visit(v, new_tris, k)
            if rep is None:
                return StringWord.empty(k), {}
            for tok in rep:
                if isinstance(tok, tuple):
                    tokens.append(tok)
                else:
                    tokens.append(tok)
                    old_index.append(None)
            pos = v.last
            vi += 1
        else:
            tokens.append(tris[pos])
        if pos < len(xs):
            tokens.append(xs[pos])
            old_index.append(pos)
        pos += 1
    new_tri_list = tuple(tok for tok in tokens if isinstance(tok, tuple))
    new_xs = tuple(tok for tok in tokens if not isinstance(tok, tuple))
    w2 = word_from_path(TrianglePath(new_tri_list, new_xs))
    mapping = {old: new for new, old in enumerate(old_index) if old is not None}
    return w2, mapping


def flip_string(w: StringWord, t: Triangulation, k: int) -> StringWord:
    return flip_string_with_map(w, t, k)[0]


def k_positions(w: StringWord, k: int) -> list[int]:
    return [i for i, x in enumerate(w.vertices) if x == k]


# ---------------------------------------------------------------------------
# arcs of general surfaces


_NOT_AN_ARC: set = set()


def flip_path_to_string(
    start: Triangulation, w: StringWord, budget: int = 100_000
) -> tuple[tuple[int, ...], int]:
    """A flip sequence after which the arc of ``w`` is in the triangulation.

    Best-first over pairs (triangulation, rewritten word), shortest word
    first, ties broken by path length and then by insertion order.
    Returns the path and the label the arc then carries.  Strings of
    curves that are not arcs exhaust the search.
    """
    if w.is_empty():
        return (), w.arc
    root = (start.shape, w.key())
    if root in _NOT_AN_ARC:
        raise NotAnArc("search space exhausted")
    seen = {root}
    heap = [(w.length, 0, 0, start, w, ())]
    tick = 0
    count = 0
    while heap:
        _, _, _, t, word, path = heapq.heappop(heap)
        count += 1
        if count > budget:
            raise BudgetExceeded(f"no flip path within {budget} states")
        for k in range(t.n):
            w2 = flip_string(word, t, k)
            if w2.is_empty():
                return path + (k,), w2.arc
            t2 = flip(t, k)
            key = (t2.shape, w2.key())
            if key not in seen:
                seen.add(key)
                tick += 1
                heapq.heappush(heap, (w2.length, len(path) + 1, tick, t2, w2, path + (k,)))
    # every state seen is the same curve, which is not an arc
    if len(_NOT_AN_ARC) > 1_000_000:
        _NOT_AN_ARC.clear()
    _NOT_AN_ARC.update(seen)
    raise NotAnArc("search space exhausted")


def word_of_arc(start: Triangulation, path: Sequence[int], label: int) -> StringWord:
    """The word in ``start`` of the arc labelled ``label`` after flipping ``path``."""
    ts = [start]
    for k in path:
        ts.append(flip(ts[-1], k))
    w = StringWord.empty(label)
    for t, k in zip(reversed(ts[1:]), reversed(path)):
        w = flip_string(w, t, k)
    return w


def intersection_counts(w: StringWord, n: int) -> list[int]:
    cnt = [0] * n
    for x in w.vertices:
        cnt[x] += 1
    return cnt


def rotate_tri(tri: Tri, label: int) -> Tri:
    return rotate_to(tri, label)
