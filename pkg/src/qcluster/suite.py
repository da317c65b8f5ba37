"""Per-instance verification used by ``verify-suite`` and the acceptance tests."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .corpus import Instance
from .expansion import (
    check_transport,
    expansion_element,
    run_expansion,
    segment_decompose,
    surface_pair,
    transport_weights,
)
from .index import index_of, transport_index
from .qtorus import specialize_q1
from .seed import initial_seed, mutate_pair, variable_along_path
from .strings import canonical_submodules, dim_vector, flip_string
from .surface import flip, local_config


@dataclass
class InstanceReport:
    name: str
    oracle: bool = False
    flips: bool = True
    blocks: bool = True
    counting: bool = False
    positive: bool = False
    index: bool = True
    vanishing: bool = True
    vanishing_checked: int = 0
    fallbacks: int = 0
    terms: int = 0
    tags: Counter = field(default_factory=Counter)
    first_difference: str | None = None

    @property
    def ok(self) -> bool:
        return all((self.oracle, self.flips, self.blocks, self.counting, self.positive, self.index, self.vanishing))


def _first_difference(a, b) -> str:
    diff = a - b
    g, c = diff.sorted_terms()[0]
    return f"exponent {list(g)}: expansion minus oracle = {c!r}"


def _neighbourhood(t, k) -> set[int]:
    cfg = local_config(t, k)
    return {k, cfg.km1, cfg.kp1, cfg.km2, cfg.kp2}


def verify_instance(inst: Instance, single_flips: bool = True, pair=None) -> InstanceReport:
    t = inst.triangulation
    pair = pair or surface_pair(t)
    rep = InstanceReport(inst.name)
    run = run_expansion(inst.arc, t, pair)
    we = run.expansion
    rep.fallbacks = run.fallbacks
    el = expansion_element(we, pair)
    oracle = variable_along_path(initial_seed(pair), run.path, run.label)
    rep.oracle = el == oracle
    if not rep.oracle:
        rep.first_difference = _first_difference(el, oracle)
    rep.terms = len(el)
    rep.positive = el.is_positive()

    # counting at q = 1
    w = we.word
    subs = canonical_submodules(w)
    want: Counter = Counter()
    for u in subs:
        e = we.index + pair.b @ dim_vector(w, u, t.m)[: t.n] if not w.is_empty() else we.index
        want[tuple(e.tolist())] += 1
    rep.counting = specialize_q1(el) == dict(want) and sum(want.values()) == len(subs)

    for st in run.steps:
        rep.tags.update(seg.tag for seg in st.segments)
    if not single_flips:
        return rep
    for k in range(t.n):
        tr = transport_weights(we, t, k, pair)
        pair_new = mutate_pair(pair, k)
        rep.fallbacks += tr.fallbacks
        rep.tags.update(seg.tag for seg in tr.segments)
        if not w.is_empty():
            rep.tags.update(seg.tag for seg in segment_decompose(w.reversed(), t, k))
        if not check_transport(we, tr, pair, pair_new, k, blocks=False):
            rep.flips = False
        elif not check_transport(we, tr, pair, pair_new, k, blocks=True):
            rep.blocks = False
        # index agreement on the mutable part
        if not w.is_empty():
            g = index_of(w, t)
            g2 = index_of(flip_string(w, t, k), flip(t, k))
            if not np.array_equal(transport_index(g, pair.b, k)[: t.n], g2[: t.n]):
                rep.index = False
            if not set(w.vertices) & _neighbourhood(t, k):
                rep.vanishing_checked += 1
                if g[k] != 0:
                    rep.vanishing = False
    return rep
