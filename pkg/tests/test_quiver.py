from __future__ import annotations

import itertools
import random

import pytest

from stratakit.errors import DimensionMismatch
from stratakit.quiver import (
    Quiver,
    condensation,
    directed_bipartitions,
    enumerate_paths,
    finest_stratification_order,
    path_from_word,
)


def _chain(n: int) -> Quiver:
    vertices = [str(i) for i in range(1, n + 1)]
    return Quiver.build(vertices, [(f"a{i}", str(i), str(i + 1)) for i in range(1, n)])


def _five_vertex() -> Quiver:
    return Quiver.build(
        ["1", "2", "3", "4", "5"],
        [
            ("alpha", "1", "2"),
            ("beta", "1", "2"),
            ("gamma", "2", "2"),
            ("delta1", "2", "3"),
            ("eps1", "2", "4"),
            ("delta2", "3", "5"),
            ("eps2", "4", "5"),
            ("rho", "5", "5"),
        ],
    )


def _random_quiver(rng: random.Random) -> Quiver:
    n = rng.randint(1, 8)
    vertices = [str(i) for i in range(1, n + 1)]
    arrows = [
        (f"a{k}", rng.choice(vertices), rng.choice(vertices)) for k in range(rng.randint(0, 2 * n))
    ]
    return Quiver.build(vertices, arrows)


def _brute_force_lowers(q: Quiver) -> set[frozenset[str]]:
    """Every nonempty proper vertex set with no path leaving it."""
    reach = {(v, w): q.has_path(v, w) for v in q.vertices for w in q.vertices}
    found = set()
    for size in range(1, len(q.vertices)):
        for subset in itertools.combinations(q.vertices, size):
            lower = set(subset)
            upper = set(q.vertices) - lower
            if not any(reach[v, w] for v in lower for w in upper):
                found.add(frozenset(lower))
    return found


def test_path_from_word_composes_right_to_left():
    q = _chain(3)
    path = path_from_word(q, ["a2", "a1"])
    assert (path.source, path.target) == ("1", "3")
    assert path.arrows == ("a1", "a2")
    assert str(path) == "a2*a1"


def test_path_from_word_rejects_bad_words():
    q = _chain(3)
    with pytest.raises(DimensionMismatch):
        path_from_word(q, ["a1", "a2"])
    with pytest.raises(DimensionMismatch):
        path_from_word(q, [])
    with pytest.raises(KeyError):
        path_from_word(q, ["zz"])


def test_quiver_rejects_undeclared_endpoints():
    with pytest.raises(DimensionMismatch):
        Quiver.build(["1"], [("a", "1", "2")])


def test_enumerate_paths_orders_by_length():
    paths = enumerate_paths(_chain(3), 5)
    assert [p.length for p in paths] == [0, 0, 0, 1, 1, 2]
    assert str(paths[-1]) == "a2*a1"


def test_finest_order_on_chain_is_source_first():
    assert finest_stratification_order(_chain(3)) == [["1"], ["2"], ["3"]]


def test_condensation_merges_cycles():
    q = Quiver.build(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "1"), ("c", "2", "3")])
    classes, class_quiver = condensation(q)
    assert classes == [["1", "2"], ["3"]]
    assert class_quiver.vertices == ("{1,2}", "3")
    assert len(class_quiver.arrows) == 1


def test_five_vertex_quiver_has_five_classes():
    q = _five_vertex()
    assert finest_stratification_order(q) == [["1"], ["2"], ["3"], ["4"], ["5"]]
    lowers = {b.lower for b in directed_bipartitions(q)}
    assert frozenset({"5"}) in lowers
    assert frozenset({"3", "4", "5"}) in lowers
    assert frozenset({"3"}) not in lowers


def test_bipartitions_match_brute_force():
    rng = random.Random(2024)
    for _ in range(200):
        q = _random_quiver(rng)
        found = directed_bipartitions(q)
        assert {b.lower for b in found} == _brute_force_lowers(q)
        for b in found:
            assert b.lower | b.upper == set(q.vertices)
            assert not b.lower & b.upper


def test_finest_order_never_points_backwards():
    rng = random.Random(7)
    for _ in range(100):
        q = _random_quiver(rng)
        order = finest_stratification_order(q)
        position = {v: i for i, group in enumerate(order) for v in group}
        for arrow in q.arrows:
            assert position[arrow.source] <= position[arrow.target]
