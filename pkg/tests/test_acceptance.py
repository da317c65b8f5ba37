"""The nine acceptance criteria, at zero tolerance.

The corpus is verified once per session; each criterion reads the cached
reports.  A summary line per criterion is printed at the end of the run.
"""
import functools
import itertools
import random
import time
from collections import Counter

import numpy as np
import pytest

from qcluster.corpus import (
    ANNULI,
    EXTRA_ANNULI,
    EXTRA_SHAPES,
    annulus_instances,
    annulus_triangulations,
    polygon_instances,
    polygon_triangulations,
)
from qcluster.errors import NotAnArc
from qcluster.expansion import (
    LambdaPattern,
    binomial_expand,
    binomial_weight,
    case_bijection,
    exchange_element,
    flip_identity_holds,
    segment_decompose,
    surface_pair,
)
from qcluster.qtorus import monomial, normalized_monomial, zero
from qcluster.seed import check_compatible, initial_seed, mutate_matrix, mutate_pair, mutate_seed, principal_pair
from qcluster.strings import (
    LEFT,
    RIGHT,
    StringWord,
    canonical_submodules,
    canonical_submodules_bruteforce,
    enumerate_strings,
    flip_path_to_string,
    format_word,
    parse_word,
)
from qcluster.suite import verify_instance
from qcluster.surface import all_polygon_triangulations, flip, quiver_of

POLYGONS = (5, 6, 7, 8)
B_TAGS = {f"B{i}" for i in range(1, 9)}
ALL_TAGS = {f"A{i}" for i in range(1, 7)} | B_TAGS


@functools.cache
def reports(family: str):
    """``(reports, seconds)`` for one corpus family."""
    start = time.perf_counter()
    if family == "polygons":
        insts = [i for nv in POLYGONS for i in polygon_instances(nv)]
    elif family == "annuli":
        insts = [i for o, r in ANNULI for i in annulus_instances(o, r)]
    else:
        insts = [i for o, r in EXTRA_ANNULI for i in annulus_instances(o, r, EXTRA_SHAPES)]
    out = [verify_instance(inst) for inst in insts]
    return out, time.perf_counter() - start


def corpus():
    return reports("polygons")[0] + reports("annuli")[0]


def failures(reps, attr):
    return [r.name for r in reps if not getattr(r, attr)]


# ---------------------------------------------------------------------------
# 1, 2: oracle equivalence


def test_criterion_1_polygons(record):
    reps, secs = reports("polygons")
    bad = failures(reps, "oracle")
    counts = Counter(r.name.split(":")[0] for r in reps)
    ntri = {nv: len(polygon_triangulations(nv)) for nv in POLYGONS}
    record(1, not bad and secs < 120, f"{len(reps) - len(bad)}/{len(reps)} polygon instances equal the oracle "
           f"({dict(counts)}, triangulations {ntri}) in {secs:.1f}s")
    assert not bad, bad[:5]
    # the budget of 500 exceeds the 132 octagon triangulations
    assert ntri[8] == 132
    assert secs < 120


def test_criterion_2_annuli_oracle(record):
    reps, secs = reports("annuli")
    bad = failures(reps, "oracle")
    record(2, not bad, f"{len(reps) - len(bad)}/{len(reps)} annulus 1+1/2+1 instances equal the oracle in {secs:.1f}s")
    assert not bad, bad[:5]
    assert secs < 120


def test_criterion_2_tags_extended_corpus(record):
    reps, _ = reports("extra")
    tags = set().union(*(r.tags for r in reports("annuli")[0] + reps))
    bad = failures(reps, "ok")
    missing = sorted(ALL_TAGS - tags)
    record(2, True, f"with annuli 2+2/3+1 added ({len(reps)} more instances, {len(bad)} failing) "
           f"tags missing: {missing or 'none'}")
    assert not bad, bad[:5]
    assert not missing


@pytest.mark.xfail(strict=True, reason="B1, B5 and B8 cannot fire on arcs of the 1+1 and 2+1 annuli")
def test_criterion_2_tags_literal(record):
    tags = set().union(*(r.tags for r in reports("annuli")[0]))
    missing = sorted(B_TAGS - tags)
    record(2, not missing, f"tags missing on 1+1/2+1 arcs alone: {missing or 'none'}")
    assert not missing


def test_criterion_2_tags_unreachable():
    """B1 and B5 fire on no string of these annuli; B8 only on strings of non-arcs."""
    b8_words = 0
    for o, r in ANNULI:
        for t in annulus_triangulations(o, r):
            for w in enumerate_strings(t, 8):
                tags = set()
                for k in range(t.n):
                    for ww in (w, w.reversed()):
                        tags |= {s.tag for s in segment_decompose(ww, t, k)}
                assert not tags & {"B1", "B5"}, format_word(w, t)
                if "B8" in tags:
                    b8_words += 1
                    with pytest.raises(NotAnArc):
                        flip_path_to_string(t, w)
    assert b8_words > 0


# ---------------------------------------------------------------------------
# 3: single flips and blocks


def test_criterion_3_single_flips(record):
    reps = corpus()
    bad_flips = failures(reps, "flips")
    bad_blocks = failures(reps, "blocks")
    record(3, not bad_flips and not bad_blocks,
           f"every single flip of {len(reps)} instances: {len(bad_flips)} identity failures, {len(bad_blocks)} block failures")
    assert not bad_flips, bad_flips[:5]
    assert not bad_blocks, bad_blocks[:5]


# ---------------------------------------------------------------------------
# 4: golden cases


def _octagon():
    want = ((0, 1, 2), (0, 5, 6), (1, 7, 8), (2, 3, 4), (3, 9, 10), (4, 11, 12))
    return next(t for t in polygon_triangulations(8) if t.triangles == want)


def _annulus():
    return next(t for t in annulus_triangulations(2, 1) if t.triangles == ((0, 2, 1), (0, 3, 1), (2, 5, 4)))


def _blocks(t, k, text):
    pair = surface_pair(t)
    new = mutate_pair(pair, k)
    w = parse_word(text, t)
    (seg,) = segment_decompose(w, t, k)
    cb = case_bijection(seg, w, t, k, pair)
    old_t, new_t = cb.old_terms(pair.b), cb.new_terms(new.b)
    identities = all(
        flip_identity_holds([old_t[u] for u in b.old], [new_t[u] for u in b.new], pair, new, k) for b in cb.blocks
    )

    def dims(side, us):
        return sorted(cb.dims(side, u, t.m)[: t.n] for u in us)

    shape = sorted((dims("old", b.old), dims("new", b.new)) for b in cb.blocks)
    return seg.tag, format_word(cb.new_word), shape, identities


def _e(t, *labels):
    v = [0] * t.n
    for x in labels:
        v[x] += 1
    return tuple(v)


def _expected(t, rows):
    return sorted((sorted(_e(t, *u) for u in old), sorted(_e(t, *u) for u in new)) for old, new in rows)


def test_criterion_4_golden(record):
    oc, an = _octagon(), _annulus()
    # octagon, k = 2: k-2 = 0, k-1 = 1, k+2 = 3, k+1 = 4
    cases = {
        "A1": (oc, 2, "1 >R 2 >R 3", "1 >R 3", [
            ([()], [()]),
            ([(3,), (2, 3)], [(3,)]),
            ([(1, 2, 3)], [(1, 3)]),
        ]),
        "A2": (oc, 2, "1 >R 2 <L 4", "1 <L 2 >R 4", [
            ([(), (2,)], [()]),
            ([(2, 4)], [(4,)]),
            ([(2, 1)], [(1,)]),
            ([(1, 2, 4)], [(1, 2, 4), (1, 4)]),
        ]),
        "A4": (oc, 2, "2 >R 0", "0", [
            ([()], [()]),
            ([(0,), (2, 0)], [(0,)]),
        ]),
        # annulus, k = 0: k-1 = k+1 = 1, k-2 = 2
        "B2": (an, 0, "2 >R[0] 1 >R[1] 0 >R[0] 2", "2 >R 0 >R 1 >R 2", [
            ([()], [()]),
            ([(2,), (0, 2)], [(2,)]),
            ([(1, 0, 2)], [(1, 2), (0, 1, 2)]),
            ([(2, 1, 0, 2)], [(2, 0, 1, 2)]),
        ]),
    }
    bad = []
    for tag, (t, k, text, new_text, rows) in cases.items():
        got_tag, got_word, shape, identities = _blocks(t, k, text)
        if (got_tag, got_word, shape, identities) != (tag, new_text, _expected(t, rows), True):
            bad.append(tag)
    record(4, not bad, f"golden cases {sorted(cases)} reproduced; mismatches: {bad or 'none'}")
    assert not bad


# ---------------------------------------------------------------------------
# 5: binomial law


def _random_pair(rng):
    n = rng.randint(1, 3)
    b0 = np.zeros((n, n), dtype=np.int64)
    for i, j in itertools.combinations(range(n), 2):
        b0[i, j] = rng.randint(-2, 2)
        b0[j, i] = -b0[i, j]
    pair = principal_pair(b0)
    for _ in range(rng.randint(0, 3)):
        pair = mutate_pair(pair, rng.randrange(n))
    return pair


def test_criterion_5_binomial(record):
    start = time.perf_counter()
    rng = random.Random(20261016)
    checked = 0
    ok = True
    for c in range(1, 6):
        for _ in range(24):
            pair = _random_pair(rng)
            assert pair.m <= 6
            k = rng.randrange(pair.n)
            new = mutate_pair(pair, k)
            d = [rng.randint(-2, 2) for _ in range(pair.m)]
            d[k] = c
            gens = [monomial(pair.lam, row.tolist()) for row in np.eye(pair.m, dtype=np.int64)]
            gens[k] = exchange_element(pair, k)
            direct = normalized_monomial(d, gens, new.lam)
            expanded = zero(pair.lam)
            for _, v, e in binomial_expand(d, new.b, k):
                expanded = expanded + monomial(pair.lam, e.tolist(), half=v)
            ok &= direct == expanded
            checked += 1
        for lam in itertools.product((0, 1), repeat=c):
            for l in range(1, c + 1):
                if lam[l - 1]:
                    lower = lam[: l - 1] + (0,) + lam[l:]
                    ok &= binomial_weight(lam) - binomial_weight(lower) == c - 2 * l + 1
    secs = time.perf_counter() - start
    record(5, ok and secs < 10, f"{checked} random expansions of X'^d (c = 1..5, m <= 6) and the recursion, {secs:.1f}s")
    assert ok
    assert secs < 10


# ---------------------------------------------------------------------------
# 6, 7, 8: counting, positivity, index


def test_criterion_6_counting(record):
    reps = corpus()
    bad = failures(reps, "counting")
    record(6, not bad, f"{len(reps) - len(bad)}/{len(reps)} instances count canonical submodules at q = 1")
    assert not bad, bad[:5]


def test_criterion_7_positivity(record):
    reps = corpus()
    bad = failures(reps, "positive")
    terms = sum(r.terms for r in reps)
    record(7, not bad, f"{len(reps) - len(bad)}/{len(reps)} variables positive ({terms} terms)")
    assert not bad, bad[:5]


def test_criterion_8_index(record):
    reps = corpus()
    bad_index = failures(reps, "index")
    bad_zero = failures(reps, "vanishing")
    checked = sum(r.vanishing_checked for r in reps)
    record(8, not bad_index and not bad_zero and checked > 0,
           f"index transport agrees on all flips ({len(bad_index)} failures); "
           f"vanishing holds on {checked} H-avoiding cases ({len(bad_zero)} failures)")
    assert not bad_index, bad_index[:5]
    assert not bad_zero, bad_zero[:5]
    assert checked > 0


# ---------------------------------------------------------------------------
# 9: structural suites


def test_criterion_9_structural(record):
    start = time.perf_counter()
    rng = random.Random(9)
    results = {}

    ok = True
    for _ in range(60):
        pair = _random_pair(rng)
        s = initial_seed(pair)
        for _ in range(rng.randint(0, 2)):
            s = mutate_seed(s, rng.randrange(pair.n))
        k = rng.randrange(pair.n)
        s1 = mutate_seed(s, k)
        check_compatible(s1.pair.b, s1.pair.lam)
        s2 = mutate_seed(s1, k)
        ok &= s2.pair == s.pair and s2.variables == s.variables
    results["mutation involution + compatibility"] = ok

    surfaces = [t for nv in (4, 5, 6, 7) for t in all_polygon_triangulations(nv)]
    surfaces += [t for o, r in ANNULI for t in annulus_triangulations(o, r)]
    ok_flip = ok_quiver = True
    for t in surfaces:
        for k in range(t.n):
            t2 = flip(t, k)
            ok_flip &= flip(t2, k) == t
            ok_quiver &= np.array_equal(mutate_matrix(quiver_of(t).b, k)[: t.n], quiver_of(t2).b[: t.n])
    results["flip involution"] = ok_flip
    results["quiver mutation"] = ok_quiver

    ok = True
    cases = 0
    for _ in range(240):
        s = rng.randint(1, 18)
        dirs = tuple(rng.choice((RIGHT, LEFT)) for _ in range(s - 1))
        w = StringWord(tuple(range(s)), dirs, tuple((i, i + 1, -1) for i in range(s - 1)))
        ok &= canonical_submodules(w) == canonical_submodules_bruteforce(dirs)
        cases += 1
    results[f"brute-force submodules ({cases} cases)"] = ok

    ok = True
    for s in range(13):
        for lam in itertools.product((0, 1), repeat=s + 1):
            p = LambdaPattern(lam)
            ok &= p.b - p.a == -s + 2 * sum(lam)
    results["lambda patterns s <= 12"] = ok

    secs = time.perf_counter() - start
    bad = [name for name, good in results.items() if not good]
    record(9, not bad and secs < 60, f"{', '.join(results)}; failures: {bad or 'none'}; {secs:.1f}s")
    assert not bad
    assert secs < 60
