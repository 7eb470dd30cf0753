"""Target preprocessing: cores and prime factorization under the direct product."""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from itertools import combinations

from homcut.caps import Caps, get_caps
from homcut.errors import NotApplicable
from homcut.graphs import Graph, direct_product, is_connected, isomorphism
from homcut.oracle import hom_exists_bruteforce


def core_of(h: Graph, caps: Caps | None = None) -> Graph:
    """Smallest induced subgraph that H maps to; this is the core of H up to isomorphism."""
    caps = caps or get_caps()
    caps.check("core_vertices", h.n, "core search")
    start = 1 if h.m == 0 else 2
    for size in range(start, h.n):
        for verts in combinations(range(h.n), size):
            c = h.induced(verts)
            if c.m == 0 and h.m > 0:
                continue
            if hom_exists_bruteforce(h, c, caps):
                return c
    return h


@lru_cache(maxsize=None)
def _connected_nonbipartite(n: int) -> tuple[Graph, ...]:
    """All connected non-bipartite graphs on n vertices, one per isomorphism class."""
    pairs = list(combinations(range(n), 2))
    found: list[Graph] = []
    for mask in range(1 << len(pairs)):
        g = Graph.from_edges(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])
        if g.is_bipartite or not is_connected(g):
            continue
        if not any(isomorphism(g, f) is not None for f in found):
            found.append(g)
    return tuple(found)


def _degrees(g: Graph) -> Counter:
    return Counter(g.degree(v) for v in range(g.n))


def prime_factorize(c: Graph, caps: Caps | None = None) -> list[Graph]:
    """Prime factors of a connected non-bipartite graph (brute force, small graphs).

    A factor of such a graph is itself connected and non-bipartite, so it has at
    least three vertices; candidates are filtered by edge count and degree
    multiset before the isomorphism test.
    """
    caps = caps or get_caps()
    if not is_connected(c) or c.is_bipartite:
        raise NotApplicable("factorization needs a connected non-bipartite graph")
    caps.check("factor_vertices", c.n, "prime factorization")
    n = c.n
    target_deg = _degrees(c)
    for s in range(3, n + 1):
        if n % s or n // s < 3 or s > n // s:
            continue
        t = n // s
        for g1 in _connected_nonbipartite(s):
            for g2 in _connected_nonbipartite(t):
                if 2 * g1.m * g2.m != c.m:
                    continue
                prod_deg = Counter()
                for d1, x in _degrees(g1).items():
                    for d2, y in _degrees(g2).items():
                        prod_deg[d1 * d2] += x * y
                if prod_deg != target_deg:
                    continue
                if isomorphism(direct_product(g1, g2), c, caps) is not None:
                    return prime_factorize(g1, caps) + prime_factorize(g2, caps)
    return [c]
