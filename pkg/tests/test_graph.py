from fractions import Fraction
from math import prod

import pytest

from selfsim.graph import (
    INF,
    Graph,
    adjacency_matrix,
    compare_means,
    count_paths,
    enumerate_paths,
    is_path,
    longest_path_from,
    longest_path_into,
    max_geometric_mean_cycle,
    random_path,
    reduce_mean,
    sources_and_sinks,
    strongly_connected_components,
    validate,
)

# a -> b -> c as arrows s -> r
CHAIN = Graph.build(["a", "b", "c"], [("x", "b", "a"), ("y", "c", "b")])

WEIGHTS = [Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3)]


def _random_graph(rng, max_vertices=5, max_edges=6):
    vs = [f"v{i}" for i in range(rng.randint(1, max_vertices))]
    edges = [(f"e{k}", rng.choice(vs), rng.choice(vs)) for k in range(rng.randint(0, max_edges))]
    return Graph.build(vs, edges)


def _brute_max_mean(g, weight):
    """Best (product, length) over closed paths of length <= 2|V|."""
    best = None
    for n in range(1, 2 * len(g.vertices) + 1):
        if count_paths(g, n) > 50000:
            break
        for mu in enumerate_paths(g, n):
            if g.r(mu[0]) != g.s(mu[-1]):
                continue
            cand = (prod((weight(e) for e in mu), start=Fraction(1)), n)
            if best is None or compare_means(cand, best) > 0:
                best = cand
    return best


def test_validate_reports_duplicates_and_undeclared_vertices():
    g = Graph.build(["a", "a"], [("x", "a", "z"), ("x", "a", "a")])
    defects = validate(g)
    assert "duplicate vertex 'a'" in defects
    assert "duplicate edge 'x'" in defects
    assert any("undeclared source 'z'" in d for d in defects)


def test_chain_paths_and_lengths():
    assert is_path(CHAIN, ("y", "x"))
    assert not is_path(CHAIN, ("x", "y"))
    assert enumerate_paths(CHAIN, 2) == [("y", "x")]
    assert longest_path_into(CHAIN, "c") == 2
    assert longest_path_from(CHAIN, "a") == 2
    assert sources_and_sinks(CHAIN) == ({"a"}, {"c"})


def test_cycle_upstream_makes_longest_path_infinite():
    g = Graph.build(["a", "b"], [("l", "a", "a"), ("x", "b", "a")])
    assert longest_path_into(g, "b") == INF
    assert longest_path_from(g, "b") == 0
    assert longest_path_into(g, "b", support=["x"]) == 1


def test_adjacency_matrix_counts_parallel_edges():
    g = Graph.build(["1", "2"], [("p", "1", "2"), ("q", "1", "2"), ("r", "2", "2")])
    assert adjacency_matrix(g) == [[0, 2], [0, 1]]


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_count_paths_matches_enumeration(n):
    g = Graph.build(["1", "2"], [("p", "1", "1"), ("q", "1", "2"), ("r", "2", "1"), ("s", "2", "2")])
    assert count_paths(g, n) == len(enumerate_paths(g, n))


def test_strongly_connected_components_flags_loops():
    g = Graph.build(["a", "b", "c"], [("l", "a", "a"), ("x", "b", "a"), ("y", "c", "b"), ("z", "b", "c")])
    comps = strongly_connected_components(g)
    assert [sorted(c.vertices) for c in comps] == [["a"], ["b", "c"]]
    assert all(c.nontrivial for c in comps)
    bare = strongly_connected_components(CHAIN)
    assert not any(c.nontrivial for c in bare)


def test_reduce_mean_and_compare():
    assert reduce_mean(Fraction(4, 9), 2) == (2, 3, 1)
    assert reduce_mean(Fraction(2), 2) == (2, 1, 2)
    assert compare_means((Fraction(2), 2), (Fraction(3, 2), 1)) == -1
    assert compare_means((Fraction(9, 4), 2), (Fraction(3, 2), 1)) == 0


def test_max_geometric_mean_cycle_picks_the_heavier_cycle():
    g = Graph.build(["u", "v"], [("l", "u", "u"), ("f", "u", "v"), ("g", "v", "u")])
    weights = {"l": Fraction(3, 2), "f": Fraction(2), "g": Fraction(2)}
    res = max_geometric_mean_cycle(g, weights.__getitem__)
    assert res.value == (2, 1, 1)
    assert sorted(res.witness) == ["f", "g"]
    assert not res.below_one()


def test_acyclic_support_has_no_mean():
    res = max_geometric_mean_cycle(CHAIN, lambda e: Fraction(5))
    assert res.value is None
    assert res.below_one()


def test_random_path_is_a_path(rng):
    g = Graph.build(["1", "2"], [("p", "1", "1"), ("q", "1", "2"), ("r", "2", "1")])
    for _ in range(20):
        mu = random_path(g, rng, 6)
        assert len(mu) == 6 and is_path(g, mu)
    assert random_path(CHAIN, rng, 3, first="x") is None


def test_max_geometric_mean_cycle_matches_brute_force(rng):
    for _ in range(150):
        g = _random_graph(rng)
        weights = {e.id: rng.choice(WEIGHTS) for e in g.edges}
        res = max_geometric_mean_cycle(g, weights.__getitem__)
        brute = _brute_max_mean(g, weights.__getitem__)
        if brute is None:
            assert res.value is None
            continue
        p, q, length = res.value
        assert compare_means((Fraction(p, q), length), brute) == 0
        w = res.witness
        assert is_path(g, w) and g.r(w[0]) == g.s(w[-1])
        assert compare_means((prod((weights[e] for e in w), start=Fraction(1)), len(w)), brute) == 0


def test_longest_path_into_matches_brute_force(rng):
    for _ in range(150):
        g = _random_graph(rng, max_vertices=4, max_edges=5)
        n = len(g.vertices)
        for v in g.vertices:
            # a path longer than |V| repeats a vertex, so a cycle feeds v
            if enumerate_paths(g, n + 1, v):
                assert longest_path_into(g, v) == INF
            else:
                longest = max((k for k in range(1, n + 1) if enumerate_paths(g, k, v)), default=0)
                assert longest_path_into(g, v) == longest
