from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homcut.caps import Caps
from homcut.errors import InvalidPermutation, NotApplicable, ParseError, SizeCapExceeded
from homcut.graphs import (
    Graph,
    complete_graph,
    connected_components,
    cycle_graph,
    direct_product,
    disjoint_union,
    empty_graph,
    grid_graph,
    is_isomorphic,
    path_graph,
    petersen_graph,
    star_graph,
)
from homcut.oracle import hom_exists_bruteforce
from homcut.ordering import (
    cut_decomposition,
    cutwidth_exact,
    cutwidth_heuristic,
    order_width,
    parse_ordering,
)
from homcut.preprocess import core_of, prime_factorize
from homcut.repsets import ReductionConfig
from homcut.solver import solve

from conftest import graphs, ref_hom_exists

K3 = complete_graph(3)
BACKENDS = ("noop", "him", "rowbasis")


def ref_cutwidth(g: Graph) -> int:
    return min(order_width(g, p) for p in permutations(range(g.n)))


# ---------------------------------------------------------------- cut decomposition


def test_cut_decomposition_path():
    dec = cut_decomposition(path_graph(4), [0, 1, 2, 3])
    assert dec.widths == [1, 1, 1] and dec.width == 1
    assert dec.cuts[0].edges == ((0, 1),) and dec.cuts[0].left == (0,)


def test_cut_decomposition_k4():
    k4 = complete_graph(4)
    assert min(cut_decomposition(k4, p).width for p in permutations(range(4))) == 4


def test_cut_decomposition_star_leaf_first():
    dec = cut_decomposition(star_graph(3), [1, 0, 2, 3])
    assert dec.widths == [1, 2, 1] and dec.width == 2


def test_cut_decomposition_invalid():
    with pytest.raises(InvalidPermutation):
        cut_decomposition(K3, [0, 1, 1])
    with pytest.raises(InvalidPermutation):
        cut_decomposition(K3, [0, 1])


@settings(max_examples=50, deadline=None)
@given(graphs(7), st.randoms(use_true_random=False))
def test_cut_invariants(g, rnd):
    order = list(range(g.n))
    rnd.shuffle(order)
    dec = cut_decomposition(g, order)
    pos = {v: i for i, v in enumerate(order)}
    for cut in dec.cuts:
        crossing = {(u, v) if pos[u] < pos[v] else (v, u) for u, v in g.edges() if (pos[u] < cut.i) != (pos[v] < cut.i)}
        assert set(cut.edges) == crossing
        assert all(pos[a] < cut.i <= pos[b] for a, b in cut.edges)
        assert set(cut.left) == {a for a, _ in cut.edges}
    assert dec.width == order_width(g, order)
    if len(connected_components(g)) == 1 and g.n > 1:
        assert all(c.k >= 1 for c in dec.cuts)


# ---------------------------------------------------------------- cutwidth


def test_cutwidth_exact_examples():
    assert cutwidth_exact(cycle_graph(4))[1] == 2
    assert cutwidth_exact(complete_graph(4))[1] == 4
    order, w = cutwidth_exact(path_graph(5))
    assert w == 1 and order_width(path_graph(5), order) == 1


def test_cutwidth_exact_cap():
    with pytest.raises(SizeCapExceeded):
        cutwidth_exact(empty_graph(5), Caps(cutwidth_exact_vertices=4))


@settings(max_examples=40, deadline=None)
@given(graphs(7))
def test_cutwidth_exact_is_optimal(g):
    order, w = cutwidth_exact(g)
    assert sorted(order) == list(range(g.n))
    assert cut_decomposition(g, order).width == w == ref_cutwidth(g)


def test_cutwidth_exact_twenty_vertices():
    g = grid_graph(4, 5)
    order, w = cutwidth_exact(g)
    assert cut_decomposition(g, order).width == w
    assert w <= cutwidth_heuristic(g, seed=1)[1]


def test_cutwidth_heuristic_examples():
    order, w = cutwidth_heuristic(path_graph(50))
    assert w == 1
    _, w10 = cutwidth_heuristic(cycle_graph(10))
    assert w10 <= 3


@settings(max_examples=30, deadline=None)
@given(graphs(8), st.integers(0, 2**32))
def test_cutwidth_heuristic_self_consistent(g, seed):
    order, w = cutwidth_heuristic(g, seed=seed, iterations=300)
    assert cut_decomposition(g, order).width == w
    assert w >= cutwidth_exact(g)[1]


def test_parse_ordering():
    assert parse_ordering("# order\n3 1\n2\n", 3) == [2, 0, 1]
    with pytest.raises(InvalidPermutation):
        parse_ordering("1 1 2", 3)
    with pytest.raises(ParseError):
        parse_ordering("1 x 2", 3)


# ---------------------------------------------------------------- preprocessing


def test_core_examples():
    assert is_isomorphic(core_of(cycle_graph(6)), complete_graph(2))
    assert is_isomorphic(core_of(K3), K3)
    paw_like = Graph.from_edges(4, [(0, 1), (1, 2), (0, 2), (3, 0), (3, 1)])
    assert is_isomorphic(core_of(paw_like), K3)


def test_core_edgeless_and_cap():
    assert core_of(empty_graph(4)).n == 1
    with pytest.raises(SizeCapExceeded):
        core_of(empty_graph(11))


@settings(max_examples=30, deadline=None)
@given(graphs(6))
def test_core_is_minimal_retract(g):
    c = core_of(g)
    assert hom_exists_bruteforce(g, c) and hom_exists_bruteforce(c, g)
    # no homomorphism from the core to any of its proper induced subgraphs
    for v in range(c.n):
        if c.n > 1:
            rest = c.induced([u for u in range(c.n) if u != v])
            assert not hom_exists_bruteforce(c, rest)


def test_factor_examples():
    assert prime_factorize(K3) == [K3]
    fs = prime_factorize(direct_product(K3, K3))
    assert len(fs) == 2 and all(is_isomorphic(f, K3) for f in fs)
    assert is_isomorphic(direct_product(*fs), direct_product(K3, K3))
    assert len(prime_factorize(cycle_graph(5))) == 1


def test_factor_k3_k4():
    prod = direct_product(K3, complete_graph(4))
    fs = sorted(prime_factorize(prod), key=lambda f: f.n)
    assert [f.n for f in fs] == [3, 4]
    assert is_isomorphic(direct_product(fs[0], fs[1]), prod)


def test_factor_not_applicable():
    with pytest.raises(NotApplicable):
        prime_factorize(cycle_graph(6))
    with pytest.raises(NotApplicable):
        prime_factorize(disjoint_union(K3, K3))


# ---------------------------------------------------------------- solve


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize(
    "g,h,expected",
    [
        (complete_graph(4), K3, False),
        (cycle_graph(5), K3, True),
        (cycle_graph(5), cycle_graph(5), True),
        (cycle_graph(6), complete_graph(2), True),
        (petersen_graph(), K3, True),
    ],
    ids=["K4-K3", "C5-K3", "C5-C5", "C6-K2", "Petersen-K3"],
)
def test_solve_examples(backend, g, h, expected):
    rep = solve(g, h, cfg=ReductionConfig(backend))
    assert rep.answer is expected
    assert all(c.size_after <= c.size_before for c in rep.cuts)


def test_petersen_oracle_agrees():
    assert hom_exists_bruteforce(petersen_graph(), K3)


def test_solve_given_ordering_and_invalid():
    g = cycle_graph(5)
    assert solve(g, K3, order=[0, 2, 4, 1, 3]).answer
    with pytest.raises(InvalidPermutation):
        solve(g, K3, order=[0, 1, 2])


def test_solve_disconnected_target():
    h = disjoint_union(K3, complete_graph(2))
    assert solve(cycle_graph(5), h).answer
    assert not solve(complete_graph(4), h).answer
    assert solve(disjoint_union(cycle_graph(5), path_graph(2)), h).answer


def test_solve_report_json():
    rep = solve(petersen_graph(), K3, cfg=ReductionConfig("rowbasis"), preprocess=("core", "factor"))
    data = rep.to_json()
    assert data["answer"] is True and data["backend"] == "rowbasis"
    assert set(data["preprocess"]) == {"core_vertices", "factors", "notes"}
    assert all({"i", "k", "size_before", "size_after"} <= set(c) for c in data["cuts"])
    assert data["preprocess"]["core_vertices"] == 3


def test_solve_rejects_unknown_preprocess():
    with pytest.raises(ValueError):
        solve(K3, K3, preprocess=("magic",))


def test_solve_cadence():
    g, h = grid_graph(3, 3), K3
    rep = solve(g, h, cfg=ReductionConfig("rowbasis", cadence=2, skip_within_bound=False))
    assert rep.answer
    runs = [c for c in rep.cuts if c.k >= 2]
    assert any(not c.run for c in runs)


def test_solve_large_graph_uses_heuristic():
    g = grid_graph(3, 8)
    rep = solve(g, complete_graph(2), cfg=ReductionConfig("rowbasis"))
    assert rep.answer


def test_table_bounds_rowbasis():
    rep = solve(grid_graph(3, 4), K3, cfg=ReductionConfig("rowbasis"))
    for c in rep.cuts:
        if c.bound is not None and c.run:
            assert c.size_after <= c.bound


def test_table_bounds_him():
    rep = solve(grid_graph(3, 4), complete_graph(2), cfg=ReductionConfig("him"))
    for c in rep.cuts:
        if c.run:
            assert c.size_after < c.bound


@settings(max_examples=60, deadline=None)
@given(graphs(6), graphs(4))
def test_solve_matches_reference(g, h):
    expected = ref_hom_exists(g, h)
    assert hom_exists_bruteforce(g, h) == expected
    for backend in BACKENDS:
        for pre in ((), ("core",), ("core", "factor"), ("factor",)):
            assert solve(g, h, cfg=ReductionConfig(backend), preprocess=pre).answer == expected


@settings(max_examples=40, deadline=None)
@given(graphs(7), graphs(5))
def test_core_equivalence(g, h):
    assert solve(g, h).answer == solve(g, core_of(h)).answer


@settings(max_examples=25, deadline=None)
@given(graphs(6), st.sampled_from([K3, complete_graph(4), cycle_graph(5)]), st.sampled_from([K3, cycle_graph(5)]))
def test_factor_conjunction(g, h1, h2):
    both = solve(g, direct_product(h1, h2)).answer
    assert both == (solve(g, h1).answer and solve(g, h2).answer)
