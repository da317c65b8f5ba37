"""Quantum expansions of string objects by weight transport along flips.

A weighted expansion of a string ``w`` in a triangulation ``T`` is the sum

    sum_U q^{v(U)/2} X^{g + B dim U}

over the canonical submodules ``U`` of ``w``, with ``g`` the index.  A
flip at ``k`` rewrites ``w`` into ``w'``; submodules on both sides are
grouped by the positions they use away from ``k``.  Inside such a group
the ``k`` (or ``k'``) positions are either forced or free, and the
exponent ``c`` of ``X_k`` is the same for every member.  When ``c >= 0``
each ``X^{E(U)}`` expands binomially in the new frame; when ``c < 0`` the
roles are swapped.  The free positions are matched by the prefix rule:
the first free positions on the many side carry the complement of the
single side's choice, the remaining ones the complement of the binomial
pattern.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import NoIntegralSolution, TransportError, UnclassifiableSegment
from .index import extended_index, index_of, transport_index
from .qtorus import QTElement, monomial, pairing, zero
from .seed import CompatiblePair, mutate_pair, principal_pair, solve_lambda
from .strings import (
    StringWord,
    Submodule,
    canonical_submodules,
    dim_vector,
    flip_path_to_string,
    flip_string_with_map,
    k_positions,
    visits,
)
from .surface import Triangulation, find_flip_path, local_config, quiver_of, walk

Pattern = tuple[int, ...]


# ---------------------------------------------------------------------------
# frames


def surface_pair(t: Triangulation, coefficients: str = "auto") -> CompatiblePair:
    """Compatible pair for ``t``.

    ``"boundary"`` uses the boundary segments as frozen rows, ``"principal"``
    uses principal coefficients, and ``"auto"`` tries boundary first.
    """
    q = quiver_of(t)
    if coefficients in ("auto", "boundary"):
        try:
            return CompatiblePair(q.b, solve_lambda(q.b))
        except NoIntegralSolution:
            if coefficients == "boundary":
                raise
    return principal_pair(q.b_square)


# ---------------------------------------------------------------------------
# binomial weights


def binomial_weight(lam: Sequence[int]) -> int:
    """``sum over l with lam_l = 1 of (c - 2l + 1)``, ``l`` counted from 1."""
    c = len(lam)
    return sum(c - 2 * l + 1 for l in range(1, c + 1) if lam[l - 1])


def binomial_expand(d, b, k: int) -> list[tuple[Pattern, int, np.ndarray]]:
    """Expand ``X^d`` with ``d_k = c > 0`` into the frame mutated at ``k``.

    ``b`` is the exchange matrix of the frame ``d`` is written in.  Returns
    ``(lam, weight, exponent)`` for every ``lam`` in ``{0,1}^c``; ``lam_l = 1``
    picks the ``[b_k]_+`` summand of the ``l``-th factor, and

        X^d = sum_lam q^{weight/2} X'^{d - 2c e_k + |lam| [b_k]_+ + (c - |lam|) [b_k]_-}.
    """
    d = np.asarray(d, dtype=np.int64)
    c = int(d[k])
    if c <= 0:
        raise ValueError("binomial_expand needs a positive k-th entry")
    col = np.asarray(b, dtype=np.int64)[:, k]
    plus, minus = np.maximum(col, 0), np.maximum(-col, 0)
    base = d.copy()
    base[k] -= 2 * c
    out = []
    for lam in itertools.product((0, 1), repeat=c):
        j = sum(lam)
        out.append((lam, binomial_weight(lam), base + j * plus + (c - j) * minus))
    return out


# ---------------------------------------------------------------------------
# lambda patterns


@dataclass(frozen=True)
class LambdaPattern:
    """Which of the ``s + 1`` copies of the doubled neighbour a submodule uses."""

    lam: Pattern

    @property
    def s(self) -> int:
        return len(self.lam) - 1

    @property
    def a(self) -> int:
        return sum(1 for x, y in zip(self.lam, self.lam[1:]) if x == y == 0)

    @property
    def b(self) -> int:
        inner = sum(1 for x, y in zip(self.lam, self.lam[1:]) if x == y == 1)
        return inner + (self.lam[0] == 1) + (self.lam[-1] == 1)

    @property
    def c(self) -> int:
        return -self.s + 2 * sum(self.lam)

    def free_old(self) -> list[int]:
        """Copies of ``k`` between two unused neighbours: free on the old side."""
        return [i for i, (x, y) in enumerate(zip(self.lam, self.lam[1:])) if x == y == 0]

    def free_new(self) -> list[int]:
        """Copies of ``k'`` next to used neighbours only, ends included: free on the new side."""
        lam = (1,) + self.lam + (1,)
        return [i for i, (x, y) in enumerate(zip(lam, lam[1:])) if x == y == 1]


# ---------------------------------------------------------------------------
# segments


@dataclass(frozen=True)
class Segment:
    """Positions ``start..end`` of a word with a case tag."""

    start: int
    end: int
    tag: str
    entry: str | None = None
    exit: str | None = None
    visits: int = 0

    @property
    def positions(self) -> range:
        return range(self.start, self.end + 1)


_ADJACENT = {frozenset("bc"), frozenset("ad")}
_OPPOSITE = {frozenset("ac"), frozenset("bd")}
_SAME = {frozenset("ab"), frozenset("cd")}
_SIDES = set("abcd")


def _tag_plain(entry: str, exit_: str, kc: int, at_start: bool) -> str:
    ends = {entry, exit_}
    if ends <= _SIDES:
        pair = frozenset(ends)
        if kc == 1 and pair in _ADJACENT:
            return "A1"
        if kc == 1 and pair in _OPPOSITE:
            return "A2"
        if kc == 0 and pair in _SAME:
            return "A3"
    elif ends & {"S1", "S2"}:
        return "A4"
    elif kc == 0:
        return "A5" if at_start else "A6"
    raise UnclassifiableSegment(f"visit {entry}->{exit_} with {kc} crossings of k")


def _tag_chain(chain, at_start: bool) -> str:
    entry, exit_ = chain[0].entry, chain[-1].exit
    r = len(chain)
    kc = sum(v.k_crossings for v in chain)
    corner = [e for e in (entry, exit_) if e not in _SIDES]
    if r == 1:
        if not corner:
            if kc == 1:
                return "B1"
        elif kc >= 1 or {entry, exit_} & {"S1", "S2"}:
            return "B3"
        else:
            return "B4" if at_start else "B5"
    elif len(corner) == 2:
        return "B6"
    elif len(corner) == 1:
        return "B7"
    else:
        return "B2" if r == 2 else "B8"
    raise UnclassifiableSegment(f"chain {entry}->{exit_} of {r} visits")


def segment_decompose(w: StringWord, t: Triangulation, k: int) -> list[Segment]:
    """Tile the positions of ``w`` by maximal stretches inside and outside the quadrilateral of ``k``."""
    if w.is_empty():
        tag = "A4" if w.arc == k else "Outside"
        return [Segment(0, -1, tag)]
    cfg = local_config(t, k)
    coincident = cfg.coincidence != "none"
    vs = visits(w, t, k)
    chains: list[list] = []
    for v in vs:
        if chains and coincident and chains[-1][-1].positions[-1] == v.positions[0]:
            chains[-1].append(v)
        else:
            chains.append([v])
    out: list[Segment] = []
    pos = 0
    for ch in chains:
        lo, hi = ch[0].positions[0], ch[-1].positions[-1]
        if lo > pos:
            out.append(Segment(pos, lo - 1, "Outside"))
        at_start = lo == 0 and ch[0].first == 0
        if coincident:
            tag = _tag_chain(ch, at_start)
        else:
            v = ch[0]
            tag = _tag_plain(v.entry, v.exit, v.k_crossings, at_start)
        out.append(Segment(lo, hi, tag, ch[0].entry, ch[-1].exit, len(ch)))
        pos = hi + 1
    if pos < w.length:
        out.append(Segment(pos, w.length - 1, "Outside"))
    return out


def subword(w: StringWord, start: int, end: int) -> StringWord:
    return StringWord(w.vertices[start : end + 1], w.directions[start:end], w.via[start:end])


# ---------------------------------------------------------------------------
# weighted expansions


@dataclass(frozen=True)
class WeightedExpansion:
    word: StringWord
    index: np.ndarray
    weights: dict = field(compare=False)

    def exponent(self, b, u: Submodule) -> np.ndarray:
        b = np.asarray(b, dtype=np.int64)
        if self.word.is_empty():
            return self.index.copy()
        return self.index + b @ dim_vector(self.word, u, b.shape[0])[: b.shape[1]]

    def terms(self, b) -> list[tuple[Submodule, int, np.ndarray]]:
        return [(u, self.weights[u], self.exponent(b, u)) for u in sorted(self.weights)]


def trivial_expansion(label: int, m: int) -> WeightedExpansion:
    g = np.zeros(m, dtype=np.int64)
    g[label] = 1
    return WeightedExpansion(StringWord.empty(label), g, {(): 0})


def expansion_element(we: WeightedExpansion, pair: CompatiblePair) -> QTElement:
    """``sum_U q^{v(U)/2} X^{ind + B dim U}`` in the torus of ``pair``."""
    out = zero(pair.lam)
    for _, v, e in we.terms(pair.b):
        out = out + monomial(pair.lam, e.tolist(), half=v)
    return out


@dataclass
class Block:
    """Submodules of the old and new word whose weighted sums agree."""

    old: list[Submodule]
    new: list[Submodule]
    kind: str  # "prefix" or "peel"


@dataclass
class Transport:
    expansion: WeightedExpansion
    blocks: list[Block]
    fallbacks: int
    segments: list[Segment]


@dataclass
class _Side:
    word: StringWord
    index: np.ndarray
    b: np.ndarray
    subs: list[Submodule]
    kpos: set[int]

    def exponent(self, u: Submodule) -> tuple[int, ...]:
        n = self.b.shape[1]
        return tuple((self.index + self.b @ dim_vector(self.word, u, self.b.shape[0])[:n]).tolist())


@dataclass
class _Group:
    """Submodules with the same positions away from ``k``."""

    members: dict[frozenset, Submodule]
    forced: frozenset
    free: list[int]

    def regular(self) -> bool:
        return len(self.members) == 1 << len(self.free)

    def member(self, bits: Sequence[int]) -> Submodule | None:
        ks = self.forced | {p for p, x in zip(self.free, bits) if x}
        return self.members.get(frozenset(ks))


def _groups(side: _Side, to_common) -> dict[tuple, _Group]:
    raw: dict[tuple, dict] = defaultdict(dict)
    for u in side.subs:
        key = tuple(sorted(to_common(p) for p in u if p not in side.kpos))
        raw[key][frozenset(p for p in u if p in side.kpos)] = u
    out = {}
    for key, members in raw.items():
        sets = list(members)
        forced = frozenset.intersection(*sets)
        free = sorted(frozenset.union(*sets) - forced)
        out[key] = _Group(members, forced, free)
    return out


def _bits(g: _Group, u: Submodule) -> tuple[int, ...]:
    s = set(u)
    return tuple(int(p in s) for p in g.free)


def _prefix_match(src: _Side, sg: _Group, dst: _Side, dg: _Group, c: int, k: int):
    """Expand every member of ``sg`` into ``dg``; ``None`` if the prefix rule fails.

    Yields ``(u_src, [(u_dst, binomial weight)])``.
    """
    a = len(sg.free)
    if len(dg.free) != a + c or not sg.regular() or not dg.regular():
        return None
    out = []
    for u in sg.members.values():
        bits = _bits(sg, u)
        e_src = src.exponent(u)
        images = []
        for lam, wt, e in binomial_expand(e_src, src.b, k):
            target = tuple(1 - x for x in bits) + tuple(1 - x for x in lam)
            u2 = dg.member(target)
            if u2 is None or dst.exponent(u2) != tuple(e.tolist()):
                return None
            images.append((u2, wt))
        out.append((u, images))
    return out


def _check_integral(weights: dict) -> None:
    for u, v in weights.items():
        if not isinstance(v, (int, np.integer)):
            raise TransportError(f"weight of {u} is not an integer count of q^(1/2)")


def _peel(old: _Side, new: _Side, olds: list[Submodule], news: list[Submodule], v: dict, k: int, c: int) -> dict:
    """Weights on ``news`` from weights ``v`` on ``olds`` inside one class of exponents.

    For ``c >= 0`` the old terms are expanded and collected.  For ``c < 0``
    new submodules are taken in decreasing order of their top term and
    matched greedily against the remaining old terms.
    """
    out: dict = {}
    if c >= 0:
        pool: dict[tuple, list[int]] = defaultdict(list)
        for u in olds:
            e = old.exponent(u)
            if c == 0:
                pool[e].append(v[u])
                continue
            for _, wt, e2 in binomial_expand(e, old.b, k):
                pool[tuple(e2.tolist())].append(v[u] + wt)
        by_exp: dict[tuple, list[Submodule]] = defaultdict(list)
        for u2 in news:
            by_exp[new.exponent(u2)].append(u2)
        if sorted(pool) != sorted(by_exp) or any(len(pool[e]) != len(by_exp[e]) for e in pool):
            raise TransportError("expanded old terms do not match the new submodules")
        for e, us in by_exp.items():
            for u2, wt in zip(sorted(us), sorted(pool[e])):
                out[u2] = wt
        return out
    remaining: dict[tuple, list[tuple[int, Submodule]]] = defaultdict(list)
    for u in olds:
        remaining[old.exponent(u)].append((v[u], u))
    order = sorted(news, key=lambda u2: (sum(1 for p in u2 if p in new.kpos), u2))
    for u2 in order:
        exps = binomial_expand(new.exponent(u2), new.b, k)
        _, _, top = exps[0]
        cands = sorted(remaining.get(tuple(top.tolist()), []))
        if not cands:
            raise TransportError(f"no old term left for the top of {u2}")
        base = cands[0][0]
        for _, wt, e in exps:
            bucket = remaining.get(tuple(e.tolist()), [])
            hit = next((x for x in sorted(bucket) if x[0] == base + wt), None)
            if hit is None:
                raise TransportError(f"expansion of {u2} is not contained in the old terms")
            bucket.remove(hit)
        out[u2] = base
    if any(remaining.values()):
        raise TransportError("old terms left over after peeling")
    return out


def _sides(w: StringWord, g, t: Triangulation, k: int, pair: CompatiblePair, pair_new: CompatiblePair):
    w2, pos_map = flip_string_with_map(w, t, k)
    g2 = transport_index(g, pair.b, k)
    old = _Side(w, np.asarray(g, dtype=np.int64), pair.b, canonical_submodules(w), set(k_positions(w, k)))
    new = _Side(w2, g2, pair_new.b, canonical_submodules(w2), set(k_positions(w2, k)))
    return old, new, pos_map


def transport_weights(
    we: WeightedExpansion,
    t: Triangulation,
    k: int,
    pair: CompatiblePair,
    pair_new: CompatiblePair | None = None,
) -> Transport:
    """Move a weighted expansion across the flip of ``t`` at ``k``."""
    pair_new = pair_new or mutate_pair(pair, k)
    w = we.word
    if w.is_empty() and w.arc != k:
        return Transport(we, [Block([()], [()], "prefix")], 0, [])
    old, new, pos_map = _sides(w, we.index, t, k, pair, pair_new)
    if w.is_empty():
        # the arc k itself: X_k = X'^{-e_k + [b_k]_+} + X'^{-e_k + [b_k]_-}
        old.subs, old.kpos = [()], set()
    g_old = _groups(old, lambda p: pos_map[p])
    g_new = _groups(new, lambda p: p)
    if set(g_old) != set(g_new):
        raise TransportError("the two words do not share their non-k positions")
    v = we.weights
    v2: dict = {}
    blocks: list[Block] = []
    pending: dict[tuple, list] = defaultdict(list)
    for key in sorted(g_old):
        sg, dg = g_old[key], g_new[key]
        u0 = next(iter(sg.members.values()))
        c = old.exponent(u0)[k]
        if c >= 0:
            match = _prefix_match(old, sg, new, dg, c, k) if c > 0 else None
            if c == 0 and len(sg.members) == len(dg.members) == 1:
                (u,), (u2,) = sg.members.values(), dg.members.values()
                if old.exponent(u) == new.exponent(u2):
                    match = [(u, [(u2, 0)])]
            if match is not None:
                for u, images in match:
                    for u2, wt in images:
                        v2[u2] = v[u] + wt
                    blocks.append(Block([u], [u2 for u2, _ in images], "prefix"))
                continue
        else:
            match = _prefix_match(new, dg, old, sg, -c, k)
            if match is not None:
                ok = True
                local = []
                for u2, images in match:
                    vals = {v[u] - wt for u, wt in images}
                    if len(vals) != 1:
                        ok = False
                        break
                    local.append((u2, vals.pop(), [u for u, _ in images]))
                if ok:
                    for u2, val, us in local:
                        v2[u2] = val
                        blocks.append(Block(us, [u2], "prefix"))
                    continue
        ebar = tuple(x for i, x in enumerate(old.exponent(u0)) if i != k)
        pending[(ebar, c)].append(key)
    fallbacks = 0
    for (_, c), keys in sorted(pending.items()):
        olds = [u for key in keys for u in g_old[key].members.values()]
        news = [u for key in keys for u in g_new[key].members.values()]
        got = _peel(old, new, olds, news, v, k, c)
        v2.update(got)
        blocks.append(Block(sorted(olds), sorted(news), "peel"))
        fallbacks += 1
    if set(v2) != set(new.subs):
        raise TransportError("weights not defined on every new submodule")
    _check_integral(v2)
    segments = segment_decompose(w, t, k) if not w.is_empty() else []
    return Transport(WeightedExpansion(new.word, new.index, v2), blocks, fallbacks, segments)


# ---------------------------------------------------------------------------
# checking identities across one flip


def exchange_element(pair: CompatiblePair, k: int) -> QTElement:
    """``X'_k`` written in the torus of ``pair``."""
    col = pair.b[:, k]
    out = zero(pair.lam)
    for p in (np.maximum(col, 0), np.maximum(-col, 0)):
        e = p.copy()
        e[k] -= 1
        out = out + monomial(pair.lam, e.tolist())
    return out


def _primed_in_old(e2, pair: CompatiblePair, pair_new: CompatiblePair, k: int, xk: QTElement) -> QTElement:
    """``X'^{e2}`` with ``e2_k >= 0`` written in the old torus."""
    e2 = np.asarray(e2, dtype=np.int64)
    c = int(e2[k])
    a = e2.copy()
    a[k] = 0
    # X'^{e2} = q^{-c lam'(a, e_k)/2} X'^a (X'_k)^c and X'^a = X^a as a_k = 0
    ek = np.zeros_like(a)
    ek[k] = 1
    half = -c * pairing(pair_new.lam, a, ek)
    return monomial(pair.lam, a.tolist(), half=half) * (xk**c)


def flip_identity_holds(
    old_terms: Sequence[tuple[int, Sequence[int]]],
    new_terms: Sequence[tuple[int, Sequence[int]]],
    pair: CompatiblePair,
    pair_new: CompatiblePair,
    k: int,
) -> bool:
    """Whether ``sum q^{v/2} X^e`` equals ``sum q^{v'/2} X'^{e'}``.

    Both sides are multiplied on the right by ``(X'_k)^N``, large enough to
    clear negative powers of ``X'_k``, and compared in the old torus.
    """
    xk = exchange_element(pair, k)
    depth = max([0] + [-int(e[k]) for _, e in new_terms])
    ek = np.zeros(pair.m, dtype=np.int64)
    ek[k] = depth
    lhs = zero(pair.lam)
    for v, e in old_terms:
        lhs = lhs + monomial(pair.lam, list(e), half=int(v))
    lhs = lhs * (xk**depth)
    rhs = zero(pair.lam)
    for v, e in new_terms:
        e = np.asarray(e, dtype=np.int64)
        shift = pairing(pair_new.lam, e, ek)
        rhs = rhs + _primed_in_old(e + ek, pair, pair_new, k, xk).qshift(int(v) + shift)
    return lhs == rhs


def check_transport(we: WeightedExpansion, tr: Transport, pair: CompatiblePair, pair_new: CompatiblePair, k: int, blocks: bool = True) -> bool:
    """Whole identity and, optionally, one identity per block."""
    old_t = {u: (v, e) for u, v, e in we.terms(pair.b)}
    new_t = {u: (v, e) for u, v, e in tr.expansion.terms(pair_new.b)}
    if not flip_identity_holds(list(old_t.values()), list(new_t.values()), pair, pair_new, k):
        return False
    if blocks:
        for blk in tr.blocks:
            if not flip_identity_holds([old_t[u] for u in blk.old], [new_t[u] for u in blk.new], pair, pair_new, k):
                return False
    return True


# ---------------------------------------------------------------------------
# local case bijections


@dataclass
class CaseBijection:
    """Partition bijection of one segment with its local weights."""

    tag: str
    word: StringWord
    new_word: StringWord
    index: np.ndarray
    new_index: np.ndarray
    blocks: list[Block]
    weights: dict
    new_weights: dict

    def dims(self, side: str, u: Submodule, m: int) -> tuple[int, ...]:
        w = self.word if side == "old" else self.new_word
        return tuple(dim_vector(w, u, m).tolist())

    def old_terms(self, b) -> dict:
        we = WeightedExpansion(self.word, self.index, self.weights)
        return {u: (v, e) for u, v, e in we.terms(b)}

    def new_terms(self, b) -> dict:
        we = WeightedExpansion(self.new_word, self.new_index, self.new_weights)
        return {u: (v, e) for u, v, e in we.terms(b)}


def case_bijection(
    seg: Segment,
    w: StringWord,
    t: Triangulation,
    k: int,
    pair: CompatiblePair,
    pair_new: CompatiblePair | None = None,
) -> CaseBijection:
    """Local partition bijection of the segment ``seg`` of ``w``.

    The subword is taken on its own with its own index.  The single side
    of each block gets weight 0 and the many side the binomial weights.
    """
    if seg.tag == "Outside":
        raise ValueError("outside segments are not changed by the flip")
    pair_new = pair_new or mutate_pair(pair, k)
    n_word = subword(w, seg.start, seg.end)
    g = extended_index(n_word, t, pair.b)
    old, new, pos_map = _sides(n_word, g, t, k, pair, pair_new)
    g_old = _groups(old, lambda p: pos_map[p])
    g_new = _groups(new, lambda p: p)
    if set(g_old) != set(g_new):
        raise TransportError("segment words do not share their non-k positions")
    v: dict = {}
    v2: dict = {}
    blocks = []
    for key in sorted(g_old):
        sg, dg = g_old[key], g_new[key]
        u0 = next(iter(sg.members.values()))
        c = old.exponent(u0)[k]
        if c >= 0:
            match = _prefix_match(old, sg, new, dg, c, k) if c else [
                (u, [(u2, 0)]) for u, u2 in zip(sg.members.values(), dg.members.values())
            ]
            if match is None or (c == 0 and len(sg.members) != len(dg.members)):
                raise TransportError(f"no block structure in segment {seg}")
            for u, images in match:
                v[u] = 0
                for u2, wt in images:
                    v2[u2] = wt
                blocks.append(Block([u], [u2 for u2, _ in images], "prefix"))
        else:
            match = _prefix_match(new, dg, old, sg, -c, k)
            if match is None:
                raise TransportError(f"no block structure in segment {seg}")
            for u2, images in match:
                v2[u2] = 0
                for u, wt in images:
                    v[u] = wt
                blocks.append(Block([u for u, _ in images], [u2], "prefix"))
    return CaseBijection(seg.tag, n_word, new.word, old.index, new.index, blocks, v, v2)


# ---------------------------------------------------------------------------
# the whole computation


@dataclass
class ExpansionRun:
    expansion: WeightedExpansion
    path: tuple[int, ...]
    label: int
    pairs: list[CompatiblePair]
    triangulations: list[Triangulation]
    steps: list[Transport]

    @property
    def fallbacks(self) -> int:
        return sum(s.fallbacks for s in self.steps)

    def tags(self) -> set[str]:
        return {seg.tag for s in self.steps for seg in s.segments}


def run_expansion(
    arc,
    target: Triangulation,
    pair: CompatiblePair | None = None,
    budget: int = 100_000,
    check: bool = False,
) -> ExpansionRun:
    """Expansion of an arc, given as a chord or as its word in ``target``.

    The arc is brought into a triangulation by flips, where its expansion
    is trivial, and the weights are carried back along the reversed path.
    With ``check`` every step is verified in the torus, blocks included.
    """
    if isinstance(arc, StringWord):
        path, label = flip_path_to_string(target, arc, budget)
    else:
        path = find_flip_path(target, arc, budget)
        label = None
    ts = walk(target, path)
    if label is None:
        label = ts[-1].chords()[tuple(sorted(arc))]
    pairs = [pair or surface_pair(target)]
    for kk in path:
        pairs.append(mutate_pair(pairs[-1], kk))
    we = trivial_expansion(label, target.m)
    steps = []
    for i in range(len(path), 0, -1):
        kk = path[i - 1]
        tr = transport_weights(we, ts[i], kk, pairs[i], pairs[i - 1])
        if check and not check_transport(we, tr, pairs[i], pairs[i - 1], kk):
            raise TransportError(f"flip identity fails at step {i} (k={kk})")
        steps.append(tr)
        we = tr.expansion
    return ExpansionRun(we, tuple(path), label, pairs, ts, steps)


def compute_expansion(arc, target: Triangulation, pair: CompatiblePair | None = None, budget: int = 100_000) -> WeightedExpansion:
    return run_expansion(arc, target, pair, budget).expansion
