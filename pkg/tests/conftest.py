"""Shared test helpers: independent reference computations and hypothesis strategies."""

from __future__ import annotations

from itertools import permutations, product

import numpy as np
import pytest
from hypothesis import strategies as st

from homcut.graphs import BoolMatrix, Graph


def np_kron_power(a: BoolMatrix, k: int) -> np.ndarray:
    """Reference Kronecker power via numpy (same big-endian index convention)."""
    base = np.array(a.to_lists(), dtype=np.int64).reshape(a.rows, a.cols)
    out = np.ones((1, 1), dtype=np.int64)
    for _ in range(k):
        out = np.kron(out, base)
    return out


def ref_covered(a: BoolMatrix, tuples, k: int) -> set:
    """Columns of A^{(x)k} covered by some row tuple, by direct enumeration."""
    cols = set()
    for c in product(range(a.cols), repeat=k):
        for t in tuples:
            if all(a[t[i], c[i]] for i in range(k)):
                cols.add(c)
                break
    return cols


def ref_hom_exists(g: Graph, h: Graph) -> bool:
    """Exhaustive search over all maps; only for tiny graphs."""
    edges = g.edges()
    for f in product(range(h.n), repeat=g.n):
        if all(h.has_edge(f[u], f[v]) for u, v in edges):
            return True
    return False


def ref_mim(a: BoolMatrix) -> int:
    """Largest identity submatrix by enumerating row subsets and column assignments."""
    from itertools import combinations

    best = 0
    rows = range(a.rows)
    for size in range(1, min(a.rows, a.cols) + 1):
        found = False
        for rs in combinations(rows, size):
            for cs in permutations(range(a.cols), size):
                if all(a[r, c] == (i == j) for i, r in enumerate(rs) for j, c in enumerate(cs)):
                    found = True
                    break
            if found:
                break
        if not found:
            break
        best = size
    return best


def ref_him(a: BoolMatrix) -> int:
    """Largest triangular unit-diagonal submatrix by enumerating ordered sequences."""
    best = 0

    def extend(rows, cols):
        nonlocal best
        best = max(best, len(rows))
        for r in range(a.rows):
            if r in rows:
                continue
            for c in range(a.cols):
                if c in cols or not a[r, c]:
                    continue
                if any(a[x, c] for x in rows):
                    continue
                extend(rows + [r], cols + [c])

    extend([], [])
    return best


def ref_rank(m) -> int:
    """Independent rank via sympy over GF(p)."""
    from sympy import GF, Matrix
    from sympy.polys.matrices import DomainMatrix

    if m.rows == 0 or m.cols == 0:
        return 0
    dm = DomainMatrix.from_Matrix(Matrix(m.entries)).convert_to(GF(m.p))
    return dm.rank()


@st.composite
def bool_matrices(draw, max_rows=4, max_cols=4, min_rows=1, min_cols=1):
    r = draw(st.integers(min_rows, max_rows))
    c = draw(st.integers(min_cols, max_cols))
    rows = draw(st.lists(st.lists(st.integers(0, 1), min_size=c, max_size=c), min_size=r, max_size=r))
    return BoolMatrix.from_lists(rows)


@st.composite
def square_bool_matrices(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    return draw(bool_matrices(n, n, n, n))


@st.composite
def graphs(draw, max_n=6, min_n=1):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, keep in zip(pairs, chosen) if keep])


@pytest.fixture
def tmp_graph(tmp_path):
    from homcut.graphs import write_graph

    def make(g, name="g.txt"):
        path = tmp_path / name
        write_graph(g, path)
        return str(path)

    return make
