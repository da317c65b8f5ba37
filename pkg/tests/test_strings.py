import random

import pytest
from hypothesis import given, settings, strategies as st

from qcluster.corpus import annulus_triangulations
from qcluster.errors import Backtrack, InvalidString, MissingArrow, RelationViolated
from qcluster.strings import (
    LEFT,
    RIGHT,
    StringWord,
    canonical_submodules,
    canonical_submodules_bruteforce,
    dim_vector,
    enumerate_strings,
    flip_string,
    format_word,
    is_valid,
    parse_word,
    validate_string,
)
from qcluster.surface import all_polygon_triangulations, fan_triangulation, flip, polygon_triangulation

HEX3 = polygon_triangulation(6, [(0, 2), (2, 4), (0, 4)])


def desk():
    ts = all_polygon_triangulations(6) + all_polygon_triangulations(7)
    return ts + annulus_triangulations(1, 1) + annulus_triangulations(2, 1)


def test_single_vertex_valid():
    validate_string(StringWord((0,)), fan_triangulation(5))


def test_a2_word_valid():
    t = fan_triangulation(5)
    words = [w for w in enumerate_strings(t, 3) if w.length == 2]
    assert len(words) == 1
    validate_string(words[0], t)
    w = words[0]
    assert not is_valid(StringWord(w.vertices, (-w.directions[0],), w.via), t)


def test_relation_violated():
    t = HEX3
    tri = next(tri for tri in t.triangles if all(t.is_internal(x) for x in tri))
    a, b, c = tri
    with pytest.raises(RelationViolated):
        validate_string(StringWord((a, b, c), (RIGHT, RIGHT), (tri, tri)), t)


def test_backtrack_and_missing_arrow():
    t = HEX3
    tri = next(tri for tri in t.triangles if all(t.is_internal(x) for x in tri))
    a, b, _ = tri
    with pytest.raises(Backtrack):
        validate_string(StringWord((a, b, a), (RIGHT, LEFT), (tri, tri)), t)
    with pytest.raises(MissingArrow):
        validate_string(StringWord((b, a), (RIGHT,), (tri,)), t)


def test_empty_word_needs_arc():
    with pytest.raises(InvalidString):
        StringWord(())


def test_parse_format_round_trip():
    t = HEX3
    for w in enumerate_strings(t, 3):
        assert parse_word(format_word(w, t), t) == w
    assert parse_word("@arc:1") == StringWord.empty(1)


def test_canonical_submodules_examples():
    assert canonical_submodules(StringWord.empty(0)) == [()]
    tri = (0, 1, 5)
    w = StringWord((0, 1), (RIGHT,), (tri,))
    assert canonical_submodules(w) == sorted([(), (1,), (0, 1)])


def test_canonical_submodules_three_step():
    # k-1 -> k -> k+2 in the octagon with all neighbours internal
    from qcluster.corpus import polygon_triangulations

    t = next(t for t in polygon_triangulations(8) if t.triangles == ((0, 1, 2), (0, 5, 6), (1, 7, 8), (2, 3, 4), (3, 9, 10), (4, 11, 12)))
    w = parse_word("1 >R 2 >R 3", t)
    dims = sorted(tuple(dim_vector(w, u, t.m)[: t.n]) for u in canonical_submodules(w))
    assert dims == sorted([(0, 0, 0, 0, 0), (0, 0, 0, 1, 0), (0, 0, 1, 1, 0), (0, 1, 1, 1, 0)])
    assert tuple(dim_vector(w, (1, 2), t.m)[: t.n]) == (0, 0, 1, 1, 0)


def test_dim_vector_counts_repeats():
    w = StringWord((0, 1, 0), (RIGHT, LEFT), ((0, 1, 9), (0, 1, 8)))
    assert dim_vector(w, (0, 1, 2), 3).tolist() == [2, 1, 0]
    assert dim_vector(w, (), 3).tolist() == [0, 0, 0]


@settings(max_examples=250, deadline=None)
@given(st.lists(st.sampled_from((RIGHT, LEFT)), max_size=17))
def test_bruteforce_equivalence(dirs):
    s = len(dirs) + 1
    w = StringWord(tuple(range(s)), tuple(dirs), tuple((i, i + 1, 99) for i in range(s - 1)))
    assert canonical_submodules(w) == canonical_submodules_bruteforce(dirs)


def test_bruteforce_equivalence_long():
    rng = random.Random(7)
    for _ in range(20):
        dirs = [rng.choice((RIGHT, LEFT)) for _ in range(17)]
        w = StringWord(tuple(range(18)), tuple(dirs), tuple((i, i + 1, 99) for i in range(17)))
        assert canonical_submodules(w) == canonical_submodules_bruteforce(dirs)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from((RIGHT, LEFT)), max_size=12))
def test_reverse_invariance(dirs):
    s = len(dirs) + 1
    w = StringWord(tuple(range(s)), tuple(dirs), tuple((i, i + 1, 99) for i in range(s - 1)))
    mirrored = sorted(tuple(sorted(s - 1 - i for i in u)) for u in canonical_submodules(w.reversed()))
    assert mirrored == canonical_submodules(w)


def test_flip_string_involution_and_validity():
    for t in desk():
        for w in enumerate_strings(t, 5):
            for k in range(t.n):
                t2 = flip(t, k)
                w2 = flip_string(w, t, k)
                if not w2.is_empty():
                    validate_string(w2, t2)
                assert flip_string(w2, t2, k).key() == w.key()


def test_flip_string_avoiding_h():
    from qcluster.surface import local_config

    t = fan_triangulation(8)
    for w in enumerate_strings(t, 3):
        for k in range(t.n):
            cfg = local_config(t, k)
            if not set(w.vertices) & {k, cfg.km1, cfg.kp1, cfg.km2, cfg.kp2}:
                assert flip_string(w, t, k) == w


def test_flip_string_golden_cases():
    from qcluster.corpus import polygon_triangulations

    t = next(t for t in polygon_triangulations(8) if t.triangles == ((0, 1, 2), (0, 5, 6), (1, 7, 8), (2, 3, 4), (3, 9, 10), (4, 11, 12)))
    t2 = flip(t, 2)
    assert format_word(flip_string(parse_word("1 >R 2 >R 3", t), t, 2)) == "1 >R 3"
    new = flip_string(parse_word("1 >R 2 <L 4", t), t, 2)
    assert (new.vertices, new.directions) == ((1, 2, 4), (LEFT, RIGHT))
    validate_string(new, t2)
