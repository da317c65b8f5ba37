import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qcluster.corpus import annulus_triangulations, polygon_triangulations
from qcluster.expansion import (
    LambdaPattern,
    binomial_expand,
    binomial_weight,
    case_bijection,
    compute_expansion,
    exchange_element,
    expansion_element,
    flip_identity_holds,
    segment_decompose,
    surface_pair,
    transport_weights,
    trivial_expansion,
)
from qcluster.qtorus import monomial, normalized_monomial
from qcluster.seed import CompatiblePair, initial_seed, mutate_pair, principal_pair, solve_lambda, variable_along_path
from qcluster.strings import StringWord, format_word, parse_word
from qcluster.surface import fan_triangulation, find_flip_path, flip, local_config, walk

OCTAGON = next(
    t for t in polygon_triangulations(8)
    if t.triangles == ((0, 1, 2), (0, 5, 6), (1, 7, 8), (2, 3, 4), (3, 9, 10), (4, 11, 12))
)
ANNULUS = next(t for t in annulus_triangulations(2, 1) if t.triangles == ((0, 2, 1), (0, 3, 1), (2, 5, 4)))


def new_variables(pair, k):
    """Generators of the mutated frame written in the old torus."""
    gens = [monomial(pair.lam, np.eye(pair.m, dtype=int)[i].tolist()) for i in range(pair.m)]
    gens[k] = exchange_element(pair, k)
    return gens


# ---------------------------------------------------------------------------
# binomial weights


def test_binomial_weight_small():
    assert [binomial_weight(lam) for lam in ((0,), (1,))] == [0, 0]
    v = {lam: binomial_weight(lam) for lam in itertools.product((0, 1), repeat=2)}
    assert v[(1, 0)] - v[(0, 0)] == 1
    assert v[(0, 1)] - v[(0, 0)] == -1
    assert v[(1, 1)] - v[(0, 1)] == 1


@pytest.mark.parametrize("c", range(1, 6))
def test_binomial_recursion(c):
    for lam in itertools.product((0, 1), repeat=c):
        assert binomial_weight((0,) * c) == 0
        for l in range(1, c + 1):
            if lam[l - 1] == 1:
                lam0 = lam[: l - 1] + (0,) + lam[l:]
                assert binomial_weight(lam) - binomial_weight(lam0) == c - 2 * l + 1


@st.composite
def frames(draw):
    n = draw(st.integers(1, 3))
    b0 = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            x = draw(st.integers(-2, 2))
            b0[i, j], b0[j, i] = x, -x
    pair = principal_pair(b0)
    for k in draw(st.lists(st.integers(0, n - 1), max_size=3)):
        pair = mutate_pair(pair, k)
    return pair


@settings(max_examples=60, deadline=None)
@given(frames(), st.data())
def test_binomial_law(pair, data):
    k = data.draw(st.integers(0, pair.n - 1))
    c = data.draw(st.integers(1, 5))
    d = data.draw(st.lists(st.integers(-2, 2), min_size=pair.m, max_size=pair.m))
    d[k] = c
    new = mutate_pair(pair, k)
    # X'^d by multiplying the new generators in the old torus
    direct = normalized_monomial(d, new_variables(pair, k), new.lam)
    expanded = sum(
        (monomial(pair.lam, e.tolist(), half=v) for _, v, e in binomial_expand(d, new.b, k)),
        start=monomial(pair.lam, [0] * pair.m, coeff=0),
    )
    assert direct == expanded


def test_binomial_single_factor_is_exchange():
    pair = principal_pair([[0, 1], [-1, 0]])
    new = mutate_pair(pair, 0)
    d = [1, 0, 0, 0]
    terms = binomial_expand(d, new.b, 0)
    assert sorted(v for _, v, _ in terms) == [0, 0]
    assert len(terms) == 2


@pytest.mark.parametrize("s", range(0, 13))
def test_lambda_pattern_identity(s):
    for lam in itertools.product((0, 1), repeat=s + 1):
        p = LambdaPattern(lam)
        assert p.b - p.a == -s + 2 * sum(lam)
        assert p.c == p.b - p.a
        assert len(p.free_old()) == p.a


def test_frame_identity():
    for t in (OCTAGON, ANNULUS, fan_triangulation(6)):
        pair = surface_pair(t)
        for k in range(t.n):
            new = mutate_pair(pair, k)
            lhs = monomial(pair.lam, pair.b[:, k].tolist())
            rhs = normalized_monomial((-new.b[:, k]).tolist(), new_variables(pair, k), new.lam)
            assert lhs == rhs


def test_coincidence_b_prime():
    t = ANNULUS
    pair = surface_pair(t)
    for k in range(t.n):
        cfg = local_config(t, k)
        if cfg.coincidence != "km1=kp1":
            continue
        b, b2 = pair.b, mutate_pair(pair, k).b
        for j in range(t.m):
            want = 2 * (j == cfg.km1) - (j == cfg.km2) - (j == cfg.kp2)
            assert b2[j, k] == want
            if j != k:
                assert b2[j, cfg.km1] - b[j, cfg.km1] == 2 * max(b[j, k], 0)


# ---------------------------------------------------------------------------
# segments


def test_segment_outside():
    t = fan_triangulation(8)
    cfg = local_config(t, 0)
    far = next(x for x in range(t.n) if x not in {0, cfg.km1, cfg.kp1, cfg.km2, cfg.kp2})
    assert [s.tag for s in segment_decompose(StringWord((far,)), t, 0)] == ["Outside"]


def test_segment_tags_golden():
    t = OCTAGON
    assert [s.tag for s in segment_decompose(parse_word("1 >R 2 >R 3", t), t, 2)] == ["A1"]
    assert [s.tag for s in segment_decompose(parse_word("1 >R 2 <L 4", t), t, 2)] == ["A2"]
    assert [s.tag for s in segment_decompose(parse_word("2 >R 0", t), t, 2)] == ["A4"]
    assert [s.tag for s in segment_decompose(parse_word("2 >R[0] 1 >R[1] 0 >R[0] 2", ANNULUS), ANNULUS, 0)] == ["B2"]


def test_segment_b8_shape():
    t = next(t for t in annulus_triangulations(2, 1) if t.triangles == ((0, 1, 2), (0, 4, 5), (1, 2, 3)))
    w = parse_word("0 >R[0] 1 >R[2] 2 <L[0] 1 >R[2] 2 >R[0] 0", t)
    assert [s.tag for s in segment_decompose(w, t, 2)] == ["B8"]


def test_segments_tile():
    t = OCTAGON
    w = parse_word("1 >R 2 <L 4", t)
    for k in range(t.n):
        segs = segment_decompose(w, t, k)
        assert [p for s in segs for p in s.positions] == list(range(w.length))


# ---------------------------------------------------------------------------
# golden case bijections


def block_dims(cb, t):
    def d(side, u):
        return cb.dims(side, u, t.m)[: t.n]

    return sorted(
        (sorted(d("old", u) for u in blk.old), sorted(d("new", u) for u in blk.new)) for blk in cb.blocks
    )


def vec(t, **entries):
    v = [0] * t.n
    for label, x in entries.items():
        v[int(label[1:])] += x
    return tuple(v)


def check_blocks(cb, t, k, pair):
    new = mutate_pair(pair, k)
    old_t, new_t = cb.old_terms(pair.b), cb.new_terms(new.b)
    for blk in cb.blocks:
        assert flip_identity_holds([old_t[u] for u in blk.old], [new_t[u] for u in blk.new], pair, new, k)


def _case(t, k, text):
    pair = surface_pair(t)
    w = parse_word(text, t)
    (seg,) = segment_decompose(w, t, k)
    cb = case_bijection(seg, w, t, k, pair)
    check_blocks(cb, t, k, pair)
    return cb


def test_golden_case_one():
    t, k = OCTAGON, 2  # k-1 = 1, k+2 = 3
    cb = _case(t, k, "1 >R 2 >R 3")
    assert format_word(cb.new_word) == "1 >R 3"
    z = vec(t)
    want = [
        ([z], [z]),
        ([vec(t, x3=1), vec(t, x2=1, x3=1)], [vec(t, x3=1)]),
        ([vec(t, x1=1, x2=1, x3=1)], [vec(t, x1=1, x3=1)]),
    ]
    assert block_dims(cb, t) == sorted((sorted(a), sorted(b)) for a, b in want)
    assert set(cb.weights.values()) == {0} and set(cb.new_weights.values()) == {0}


def test_golden_case_two():
    t, k = OCTAGON, 2  # k-1 = 1, k+1 = 4
    cb = _case(t, k, "1 >R 2 <L 4")
    assert format_word(cb.new_word) == "1 <L 2 >R 4"
    z = vec(t)
    want = [
        ([z, vec(t, x2=1)], [z]),
        ([vec(t, x2=1, x4=1)], [vec(t, x4=1)]),
        ([vec(t, x2=1, x1=1)], [vec(t, x1=1)]),
        ([vec(t, x1=1, x2=1, x4=1)], [vec(t, x1=1, x2=1, x4=1), vec(t, x1=1, x4=1)]),
    ]
    assert block_dims(cb, t) == sorted((sorted(a), sorted(b)) for a, b in want)
    assert cb.index[k] == -1 and cb.new_index[k] == 1


def test_golden_case_four():
    t, k = OCTAGON, 2  # k-2 = 0
    cb = _case(t, k, "2 >R 0")
    assert format_word(cb.new_word) == "0"
    z = vec(t)
    want = [([z], [z]), ([vec(t, x0=1), vec(t, x2=1, x0=1)], [vec(t, x0=1)])]
    assert block_dims(cb, t) == sorted((sorted(a), sorted(b)) for a, b in want)


def test_golden_coincidence_case_two():
    t, k = ANNULUS, 0  # k-1 = k+1 = 1, k-2 = 2
    cb = _case(t, k, "2 >R[0] 1 >R[1] 0 >R[0] 2")
    assert format_word(cb.new_word) == "2 >R 0 >R 1 >R 2"
    z = vec(t)
    want = [
        ([z], [z]),
        ([vec(t, x2=1), vec(t, x0=1, x2=1)], [vec(t, x2=1)]),
        ([vec(t, x1=1, x0=1, x2=1)], [vec(t, x1=1, x2=1), vec(t, x0=1, x1=1, x2=1)]),
        ([vec(t, x2=2, x1=1, x0=1)], [vec(t, x2=2, x0=1, x1=1)]),
    ]
    assert block_dims(cb, t) == sorted((sorted(a), sorted(b)) for a, b in want)


# ---------------------------------------------------------------------------
# whole expansions


def test_trivial_expansion():
    t = fan_triangulation(5)
    pair = surface_pair(t)
    assert expansion_element(trivial_expansion(1, t.m), pair) == monomial(pair.lam, np.eye(t.m, dtype=int)[1].tolist())
    assert compute_expansion((0, 2), t).word.is_empty()


def test_empty_word_flip_gives_exchange():
    t = fan_triangulation(6)
    pair = surface_pair(t)
    for k in range(t.n):
        new = mutate_pair(pair, k)
        tr = transport_weights(trivial_expansion(k, t.m), flip(t, k), k, new, pair)
        assert expansion_element(tr.expansion, pair) == exchange_element(pair, k)


def test_avoiding_h_is_unchanged():
    t = fan_triangulation(8)
    pair = surface_pair(t)
    cfg = local_config(t, 0)
    far = next(x for x in range(t.n) if x not in {0, cfg.km1, cfg.kp1, cfg.km2, cfg.kp2})
    we = compute_expansion(t.endpoints[far], flip(t, far), mutate_pair(pair, far))
    tr = transport_weights(we, flip(t, far), 0, mutate_pair(pair, far), mutate_pair(mutate_pair(pair, far), 0))
    assert tr.expansion.word == we.word
    assert tr.expansion.weights == we.weights


def test_pentagon_a2_examples():
    t = fan_triangulation(5)
    pair = CompatiblePair(surface_pair(t).b, solve_lambda(surface_pair(t).b))
    s = initial_seed(pair)
    for chord in [(1, 3), (1, 4), (2, 4)]:
        we = compute_expansion(chord, t, pair)
        path = find_flip_path(t, chord)
        label = walk(t, path)[-1].chords()[chord]
        assert expansion_element(we, pair) == variable_along_path(s, path, label)
    sizes = sorted(len(expansion_element(compute_expansion(ch, t, pair), pair)) for ch in [(1, 3), (1, 4), (2, 4)])
    assert sizes[0] == 2 and sizes[-1] == 3
