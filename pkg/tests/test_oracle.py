import json

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homcut.caps import Caps
from homcut.errors import BudgetExceeded
from homcut.graphs import complete_graph, cycle_graph, empty_graph, grid_graph, is_isomorphic
from homcut.oracle import (
    GenSpec,
    default_corpus_path,
    generate,
    generate_corpus,
    hom_count_bruteforce,
    hom_exists_bruteforce,
    load_corpus,
)
from homcut.rng import Xoshiro256, splitmix64

from conftest import graphs, ref_hom_exists

K2, K3 = complete_graph(2), complete_graph(3)


def ref_hom_count(g, h):
    """Count by enumerating every vertex map."""
    from itertools import product

    return sum(
        all(h.has_edge(f[u], f[v]) for u, v in g.edges()) for f in product(range(h.n), repeat=g.n)
    )


# ---------------------------------------------------------------- brute force


def test_exists_examples():
    assert hom_exists_bruteforce(K3, K3)
    assert not hom_exists_bruteforce(K3, K2)
    assert hom_exists_bruteforce(cycle_graph(5), K3)


def test_count_examples():
    assert hom_count_bruteforce(K2, K3) == 6
    assert hom_count_bruteforce(empty_graph(1), cycle_graph(7)) == 7
    assert hom_count_bruteforce(cycle_graph(4), K2) == 2


def test_budget():
    with pytest.raises(BudgetExceeded):
        hom_count_bruteforce(empty_graph(8), complete_graph(4), Caps(hom_nodes=100))


@settings(max_examples=80, deadline=None)
@given(graphs(6), graphs(4))
def test_exists_iff_positive_count(g, h):
    c = hom_count_bruteforce(g, h)
    assert c == ref_hom_count(g, h)
    assert hom_exists_bruteforce(g, h) == (c > 0) == ref_hom_exists(g, h)


# ---------------------------------------------------------------- rng


def test_splitmix64_reference_value():
    _, z = splitmix64(0)
    assert z == 0xE220A8397B1DCDAF


def test_xoshiro_reference_stream():
    rng = Xoshiro256()
    rng.s = [1, 2, 3, 4]
    assert [rng.next_u64() for _ in range(4)] == [11520, 0, 1509978240, 1215971899390074240]


def test_rng_helpers():
    rng = Xoshiro256(7)
    xs = [rng.below(5) for _ in range(200)]
    assert set(xs) == set(range(5))
    assert all(0.0 <= Xoshiro256(s).random() < 1.0 for s in range(20))
    with pytest.raises(ValueError):
        rng.below(0)


# ---------------------------------------------------------------- generation


def test_generate_examples():
    assert is_isomorphic(generate(GenSpec("cycle", 5)), cycle_graph(5))
    assert generate(GenSpec("gnp", 6, 0.0, seed=3)).m == 0
    assert generate(GenSpec("gnp", 6, 1.0, seed=3)) == complete_graph(6)
    assert generate(GenSpec("clique", 4)) == complete_graph(4)
    assert generate(GenSpec("grid", 2, cols=3)) == grid_graph(2, 3)


def test_random_target_is_connected():
    for seed in range(20):
        g = generate(GenSpec("random-target", 7, 0.2, seed))
        ref = nx.Graph()
        ref.add_nodes_from(range(g.n))
        ref.add_edges_from(g.edges())
        assert nx.is_connected(ref)


def test_genspec_validation():
    with pytest.raises(ValueError):
        GenSpec("gnp", 5, 1.5)
    with pytest.raises(ValueError):
        GenSpec("tree", 5)
    with pytest.raises(ValueError):
        GenSpec("gnp", 0)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["gnp", "random-target"]), st.integers(1, 12), st.floats(0, 1), st.integers(0, 2**64))
def test_generate_deterministic(model, n, p, seed):
    spec = GenSpec(model, n, p, seed)
    assert generate(spec) == generate(GenSpec.from_json(json.loads(json.dumps(spec.to_json()))))


def test_corpus_shape_and_shipped_copy():
    corpus = generate_corpus()
    assert len(corpus) == 500
    assert generate_corpus() == corpus
    gs = [GenSpec.from_json(x["graph"]) for x in corpus]
    hs = [GenSpec.from_json(x["target"]) for x in corpus]
    assert max(s.n for s in gs) <= 9 and max(s.n for s in hs) <= 5
    assert {s.p for s in gs + hs} == {0.2, 0.5, 0.8}
    shipped = load_corpus(default_corpus_path())
    assert shipped == list(zip(gs, hs))


def test_load_corpus_empty(tmp_path):
    p = tmp_path / "c.json"
    p.write_text('{"instances": []}')
    assert load_corpus(p) == []
