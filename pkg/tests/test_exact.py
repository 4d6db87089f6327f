import random
from itertools import combinations

import pytest

from ikcs.exact import (
    SearchBudgetExceeded,
    closed_form_maxdeg2,
    has_conversion_set_of_size,
    maxdeg2_witness,
    min_conversion_set,
)
from ikcs.graph import Graph
from ikcs.percolation import is_conversion_set
from genutil import random_graph


def brute_reference(g, k):
    for size in range(g.n + 1):
        for cand in combinations(range(g.n), size):
            if is_conversion_set(g, cand, k):
                return size, cand
    raise AssertionError


def test_small_battery_matches_reference():
    rng = random.Random(2024)
    for _ in range(120):
        n = rng.randrange(1, 9)
        g = random_graph(rng, n, 0.35)
        k = rng.randrange(1, 4)
        size, wit = min_conversion_set(g, k)
        ref_size, ref_wit = brute_reference(g, k)
        assert size == ref_size
        assert wit == ref_wit  # lexicographically least witness
        assert is_conversion_set(g, wit, k)


def test_decision_flavor_consistent():
    rng = random.Random(31)
    for _ in range(60):
        g = random_graph(rng, rng.randrange(1, 9), 0.4)
        k = rng.randrange(1, 4)
        size, _ = min_conversion_set(g, k)
        assert has_conversion_set_of_size(g, k, size)
        assert not has_conversion_set_of_size(g, k, size - 1)


def test_budget_guard():
    g = random_graph(random.Random(0), 40, 0.1)
    with pytest.raises(SearchBudgetExceeded):
        min_conversion_set(g, 2, budget_vertices=30)
    # raising the budget clears the guard
    size, _ = min_conversion_set(Graph(3, ((0, 1), (1, 2))), 2, budget_vertices=3)
    assert size == 2


def test_workers_do_not_change_answer():
    rng = random.Random(77)
    for _ in range(6):
        g = random_graph(rng, rng.randrange(8, 13), 0.3)
        one = min_conversion_set(g, 2, workers=1)
        par = min_conversion_set(g, 2, workers=3)
        assert one == par


def test_workers_cross_chunk_boundary():
    # C(17, 8) and C(17, 9) both exceed one scan chunk
    g = Graph(17, tuple((i, (i + 1) % 17) for i in range(17)))
    assert not has_conversion_set_of_size(g, 2, 8, workers=3)
    assert has_conversion_set_of_size(g, 2, 9, workers=3)
    assert min_conversion_set(g, 2, workers=3) == min_conversion_set(g, 2)


def test_closed_form_paths_and_cycles():
    for p in range(1, 10):
        g = Graph(p, tuple((i, i + 1) for i in range(p - 1)))
        size, wit = maxdeg2_witness(g)
        assert size == closed_form_maxdeg2(g) == p // 2 + 1
        assert is_conversion_set(g, wit, 2)
        assert size == min_conversion_set(g, 2)[0]
    for p in range(3, 10):
        g = Graph(p, tuple((i, (i + 1) % p) for i in range(p)))
        size, wit = maxdeg2_witness(g)
        assert size == closed_form_maxdeg2(g) == (p + 1) // 2
        assert is_conversion_set(g, wit, 2)
        assert size == min_conversion_set(g, 2)[0]


def test_closed_form_disjoint_union():
    # path of 4 plus cycle of 5 plus isolated vertex
    edges = [(0, 1), (1, 2), (2, 3)]
    edges += [(4 + i, 4 + (i + 1) % 5) for i in range(5)]
    g = Graph(10, tuple(edges))
    size, wit = maxdeg2_witness(g)
    assert size == (4 // 2 + 1) + (5 + 1) // 2 + 1
    assert is_conversion_set(g, wit, 2)
    assert min_conversion_set(g, 2)[0] == size


def test_trivial_sizes():
    assert min_conversion_set(Graph(0, ()), 2) == (0, ())
    assert min_conversion_set(Graph(1, ()), 3) == (1, (0,))
    g = Graph(2, ((0, 1),))
    assert min_conversion_set(g, 1) == (1, (0,))
