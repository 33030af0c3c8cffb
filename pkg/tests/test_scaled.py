import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gitgauge import geometry as geo
from gitgauge import scaled
from gitgauge.scaled import (
    AFFINE,
    FORCED_INFINITE,
    FREE_DELTA,
    INFINITE,
    PROJECTIVE,
    TRANSITION,
    ZERO,
    CombinatorialType,
    ValuationAssignment,
    Vertex,
)

from instances import random_shape


def make(mode, rows, markings=()):
    """Build a type from ``(id, class, parent)`` triples."""
    return CombinatorialType(mode, tuple(Vertex(*v) for v in rows), tuple(markings))


OPEN_2 = make(PROJECTIVE, [("r", FREE_DELTA, None)], [(1, "r"), (2, "r")])
GAMMA_1 = make(PROJECTIVE, [("r", FREE_DELTA, None), ("a", ZERO, "r")], [(1, "a"), (2, "a")])
GAMMA_4 = make(
    PROJECTIVE,
    [("r", FORCED_INFINITE, None), ("a", INFINITE, "r"), ("b", TRANSITION, "a"), ("c", TRANSITION, "a")],
    [(1, "b"), (2, "c")],
)


# -- validation -------------------------------------------------------------------


def test_open_stratum_is_valid():
    assert scaled.validate_type(OPEN_2) == []
    assert scaled.validate_type(make(PROJECTIVE, [("r", FREE_DELTA, None)])) == []


def test_marking_on_forced_infinite_root():
    T = make(PROJECTIVE, [("r", FORCED_INFINITE, None), ("a", TRANSITION, "r")], [(1, "r"), (2, "a")])
    assert any("marking on infinite-scaling component" in v for v in scaled.validate_type(T))


def test_two_transitions_on_a_path():
    T = make(
        PROJECTIVE,
        [("r", FORCED_INFINITE, None), ("a", TRANSITION, "r"), ("b", TRANSITION, "a")],
        [(1, "b")],
    )
    assert any("two transitions on a path" in v for v in scaled.validate_type(T))


def test_other_violations():
    increasing = make(PROJECTIVE, [("r", FORCED_INFINITE, None), ("a", ZERO, "r"), ("b", INFINITE, "a")])
    assert any("b" in v for v in scaled.validate_type(increasing))
    free_with_bubble = make(PROJECTIVE, [("r", FREE_DELTA, None), ("a", TRANSITION, "r")], [(1, "a")])
    assert scaled.validate_type(free_with_bubble)
    forced_all_zero = make(PROJECTIVE, [("r", FORCED_INFINITE, None), ("a", ZERO, "r")], [(1, "a"), (2, "a")])
    assert scaled.validate_type(forced_all_zero)
    cycle = make(PROJECTIVE, [("r", FREE_DELTA, None), ("a", ZERO, "b"), ("b", ZERO, "a")])
    assert scaled.validate_type(cycle)
    bad_labels = make(PROJECTIVE, [("r", FREE_DELTA, None)], [(2, "r")])
    assert scaled.validate_type(bad_labels)
    affine_root = make(AFFINE, [("r", FREE_DELTA, None)])
    assert scaled.validate_type(affine_root)


# -- stability ----------------------------------------------------------------------


def test_stability_examples():
    leaf_t = make(PROJECTIVE, [("r", FORCED_INFINITE, None), ("a", TRANSITION, "r")], [(1, "a")])
    ok, counts = scaled.is_stable_type(leaf_t)
    assert ok and counts["a"] == 2

    leaf_z = make(PROJECTIVE, [("r", FREE_DELTA, None), ("a", ZERO, "r")], [(1, "a")])
    ok, counts = scaled.is_stable_type(leaf_z)
    assert not ok and counts["a"] == 2

    trivalent = make(
        PROJECTIVE,
        [("r", FORCED_INFINITE, None), ("i", INFINITE, "r"), ("a", TRANSITION, "i"), ("b", TRANSITION, "i")],
        [(1, "a"), (2, "b")],
    )
    ok, counts = scaled.is_stable_type(trivalent)
    assert ok and counts["i"] == 3


def test_affine_counts_z0():
    T = make(AFFINE, [("r", TRANSITION, None)], [(1, "r")])
    ok, counts = scaled.is_stable_type(T)
    assert ok and counts["r"] == 2


# -- enumeration -------------------------------------------------------------------


def test_projective_counts():
    assert [len(scaled.enumerate_types(n)) for n in range(3)] == [1, 2, 6]


def test_n2_dimension_multiset():
    dims = Counter(scaled.stratum_dimension(T) for T in scaled.enumerate_types(2))
    assert dims == Counter({3: 1, 2: 3, 1: 2})


def test_affine_n2():
    types = scaled.enumerate_types(2, AFFINE)
    assert sorted(scaled.stratum_dimension(T) for T in types) == [0, 0, 1]


def test_enumeration_is_canonical_and_valid():
    for mode in (PROJECTIVE, AFFINE):
        for n in range(4):
            types = scaled.enumerate_types(n, mode)
            keys = [scaled.canonical_form(T) for T in types]
            assert keys == sorted(set(keys))
            for T in types:
                assert scaled.validate_type(T) == []
                assert scaled.is_stable_type(T)[0]
                assert T.n == n


# -- dimensions ----------------------------------------------------------------------


def test_dimension_examples():
    assert scaled.stratum_dimension(OPEN_2) == 3
    assert scaled.stratum_dimension(GAMMA_1) == 2
    affine_open = make(AFFINE, [("r", TRANSITION, None)], [(1, "r"), (2, "r")])
    assert scaled.stratum_dimension(affine_open) == 1


def test_codimension_examples():
    assert scaled.stratum_codimension(GAMMA_1) == 1
    assert scaled.stratum_codimension(GAMMA_4) == 2
    assert scaled.stratum_dimension(GAMMA_4) == 1
    bare = make(PROJECTIVE, [("r", FREE_DELTA, None)])
    assert scaled.stratum_codimension(bare) == 0 and scaled.stratum_dimension(bare) == 1


def test_unstable_type_rejected():
    leaf_z = make(PROJECTIVE, [("r", FREE_DELTA, None), ("a", ZERO, "r")], [(1, "a")])
    with pytest.raises(ValueError):
        scaled.stratum_dimension(leaf_z)


def test_balanced_rank_examples():
    assert scaled.balanced_rank(OPEN_2) == 0
    assert scaled.balanced_rank(GAMMA_4) == 1
    assert scaled.balanced_relation_matrix(GAMMA_4) == [[0, 1, -1]]
    three = make(
        PROJECTIVE,
        [
            ("r", FORCED_INFINITE, None),
            ("a", TRANSITION, "r"),
            ("b", TRANSITION, "r"),
            ("c", TRANSITION, "r"),
        ],
        [(1, "a"), (2, "b"), (3, "c")],
    )
    assert scaled.balanced_rank(three) == 2
    assert geo.rank(scaled.balanced_relation_matrix(three)) == 2


def test_balanced_rank_matches_matrix_rank():
    for mode in (PROJECTIVE, AFFINE):
        for n in range(5):
            for T in scaled.enumerate_types(n, mode):
                matrix = scaled.balanced_relation_matrix(T)
                assert scaled.balanced_rank(T) == (geo.rank(matrix) if matrix else 0)


def test_dimension_plus_codimension_small():
    for n in range(5):
        for T in scaled.enumerate_types(n, PROJECTIVE):
            assert scaled.stratum_dimension(T) + scaled.stratum_codimension(T) == n + 1
        for T in scaled.enumerate_types(n, AFFINE):
            assert scaled.stratum_dimension(T) + scaled.stratum_codimension(T) == n - 1


# -- canonical form ----------------------------------------------------------------


def test_canonical_form_ignores_sibling_order():
    a = make(
        PROJECTIVE,
        [("r", FORCED_INFINITE, None), ("x", TRANSITION, "r"), ("y", TRANSITION, "r")],
        [(1, "x"), (2, "y")],
    )
    b = make(
        PROJECTIVE,
        [("r", FORCED_INFINITE, None), ("y", TRANSITION, "r"), ("x", TRANSITION, "r")],
        [(2, "y"), (1, "x")],
    )
    assert scaled.canonical_form(a) == scaled.canonical_form(b)


def test_canonical_form_sees_labels():
    a = make(
        PROJECTIVE,
        [("r", FREE_DELTA, None), ("x", ZERO, "r")],
        [(1, "x"), (2, "x"), (3, "r")],
    )
    b = make(
        PROJECTIVE,
        [("r", FREE_DELTA, None), ("x", ZERO, "r")],
        [(1, "x"), (3, "x"), (2, "r")],
    )
    assert scaled.canonical_form(a) != scaled.canonical_form(b)


def test_canonical_form_keeps_root():
    T = make(PROJECTIVE, [("r", FREE_DELTA, None), ("a", ZERO, "r")], [(1, "a"), (2, "a")])
    rerooted = make(PROJECTIVE, [("a", ZERO, None), ("r", FREE_DELTA, "a")], [(1, "a"), (2, "a")])
    assert scaled.canonical_form(T) != scaled.canonical_form(rerooted)
    assert scaled.validate_type(rerooted)


# -- tropical limits ---------------------------------------------------------------

CHAIN = {"root": None, "a": "root", "b": "a"}


def test_tropical_examples():
    val = ValuationAssignment({"a": 1, "b": 2}, -3)
    assert scaled.tropical_limit(CHAIN, val) == {"root": INFINITE, "a": INFINITE, "b": TRANSITION}
    val = ValuationAssignment({"a": 1, "b": 2}, -2)
    assert scaled.tropical_limit(CHAIN, val) == {"root": INFINITE, "a": INFINITE, "b": ZERO}
    val = ValuationAssignment({"a": 1, "b": 2}, 0)
    limit = scaled.tropical_limit(CHAIN, val)
    assert limit["a"] == limit["b"] == ZERO and limit["root"] == TRANSITION


def test_valuations_must_be_positive():
    with pytest.raises(ValueError):
        ValuationAssignment({"a": 0}, 1)
    with pytest.raises(ValueError):
        scaled.tropical_limit(CHAIN, ValuationAssignment({"a": 1}, 1))


def random_valuation(rng, parents):
    edges = {v: Fraction(rng.randint(1, 6), rng.randint(1, 3)) for v, p in parents.items() if p}
    delta = Fraction(rng.randint(-12, 4), rng.randint(1, 3))
    return ValuationAssignment(edges, delta)


def test_transitions_are_balanced():
    rng = random.Random(7)
    for _ in range(300):
        parents = random_shape(rng, rng.randint(1, 8))
        val = random_valuation(rng, parents)
        w = scaled.limit_weights(parents, val)
        zeros = [v for v, x in w.items() if x == 0]
        assert {v for v, c in scaled.tropical_limit(parents, val).items() if c == TRANSITION} == set(zeros)
        # signed sum of edge valuations between two transitions vanishes
        for u in zeros:
            for v in zeros:
                path_u, path_v = [], []
                x = u
                while parents[x] is not None:
                    path_u.append(x)
                    x = parents[x]
                x = v
                while parents[x] is not None:
                    path_v.append(x)
                    x = parents[x]
                total = sum(val.edges[e] for e in set(path_u) - set(path_v)) - sum(
                    val.edges[e] for e in set(path_v) - set(path_u)
                )
                assert total == 0


# -- properties -----------------------------------------------------------------------

_RANK = {ZERO: 0, TRANSITION: 1, INFINITE: 2}


@st.composite
def shapes_with_valuations(draw):
    size = draw(st.integers(1, 9))
    parents = {"v0": None}
    for i in range(1, size):
        parents[f"v{i}"] = f"v{draw(st.integers(0, i - 1))}"
    positive = st.fractions(min_value=Fraction(1, 4), max_value=6, max_denominator=4)
    edges = {v: draw(positive) for v, p in parents.items() if p}
    delta = draw(st.fractions(min_value=-15, max_value=5, max_denominator=4))
    return parents, ValuationAssignment(edges, delta)


@settings(max_examples=200, deadline=None)
@given(shapes_with_valuations())
def test_tropical_limit_is_monotone(data):
    parents, val = data
    classes = scaled.tropical_limit(parents, val)
    for v, p in parents.items():
        if p is None:
            continue
        assert _RANK[classes[v]] <= _RANK[classes[p]]
        seen, cur = 0, v
        while cur is not None:
            seen += classes[cur] == TRANSITION
            cur = parents[cur]
        assert seen <= 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 3), st.sampled_from([PROJECTIVE, AFFINE]), st.randoms(use_true_random=False))
def test_canonical_form_ignores_vertex_names(n, mode, rng):
    for T in scaled.enumerate_types(n, mode):
        ids = [v.id for v in T.vertices]
        fresh = dict(zip(ids, rng.sample(range(1000), len(ids))))
        order = list(T.vertices)
        rng.shuffle(order)
        renamed = CombinatorialType(
            mode,
            tuple(Vertex(f"x{fresh[v.id]}", v.cls, None if v.parent is None else f"x{fresh[v.parent]}") for v in order),
            tuple(sorted((lab, f"x{fresh[vid]}") for lab, vid in T.markings)),
        )
        assert scaled.canonical_form(renamed) == scaled.canonical_form(T)
        assert scaled.stratum_dimension(renamed) == scaled.stratum_dimension(T)
