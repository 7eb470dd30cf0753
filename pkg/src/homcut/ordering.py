"""Linear orderings of a graph and the cuts they induce."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from homcut.caps import Caps, get_caps
from homcut.errors import InvalidPermutation, ParseError
from homcut.graphs import Graph, _bits
from homcut.rng import Xoshiro256


@dataclass(frozen=True)
class Cut:
    i: int
    edges: tuple[tuple[int, int], ...]  # (left endpoint, right endpoint)
    left: tuple[int, ...]  # X_i, ordered by position

    @property
    def k(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class CutDecomposition:
    order: tuple[int, ...]
    cuts: tuple[Cut, ...]  # cuts[i - 1] is cut i, for i in 1..n-1

    @property
    def width(self) -> int:
        return max((c.k for c in self.cuts), default=0)

    @property
    def widths(self) -> list[int]:
        return [c.k for c in self.cuts]


def check_permutation(order: Sequence[int], n: int) -> tuple[int, ...]:
    order = tuple(int(v) for v in order)
    if sorted(order) != list(range(n)):
        raise InvalidPermutation(f"ordering is not a permutation of {n} vertices")
    return order


def cut_decomposition(g: Graph, order: Sequence[int]) -> CutDecomposition:
    order = check_permutation(order, g.n)
    pos = [0] * g.n
    for i, v in enumerate(order):
        pos[v] = i
    oriented = sorted(
        ((u, v) if pos[u] < pos[v] else (v, u) for u, v in g.edges()),
        key=lambda e: (pos[e[0]], pos[e[1]]),
    )
    cuts = []
    for i in range(1, g.n):
        es = tuple(e for e in oriented if pos[e[0]] < i <= pos[e[1]])
        left = tuple(sorted({a for a, _ in es}, key=lambda v: pos[v]))
        cuts.append(Cut(i, es, left))
    return CutDecomposition(order, tuple(cuts))


def order_width(g: Graph, order: Sequence[int]) -> int:
    pos = {v: i for i, v in enumerate(order)}
    diff = [0] * (g.n + 1)
    for u, v in g.edges():
        a, b = sorted((pos[u], pos[v]))
        diff[a + 1] += 1
        diff[b + 1] -= 1
    run = best = 0
    for i in range(1, g.n):
        run += diff[i]
        best = max(best, run)
    return best


def cutwidth_exact(g: Graph, caps: Caps | None = None) -> tuple[list[int], int]:
    """Optimal ordering by dynamic programming over the set of placed vertices."""
    caps = caps or get_caps()
    caps.check("cutwidth_exact_vertices", g.n, "exact cutwidth")
    n = g.n
    if n <= 1:
        return list(range(n)), 0
    size = 1 << n
    masks = np.arange(size, dtype=np.int64)
    # cut(S) = sum of degrees in S - 2 * edges inside S
    inner = np.zeros(size, dtype=np.int64)
    degsum = np.zeros(size, dtype=np.int64)
    for v in range(n):
        lo = 1 << v
        old = masks[:lo]
        inner[lo : 2 * lo] = inner[:lo] + np.bitwise_count(old & g.adj[v]).astype(np.int64)
        degsum[lo : 2 * lo] = degsum[:lo] + g.degree(v)
    cut = degsum - 2 * inner
    pop = np.bitwise_count(masks)
    INF = np.iinfo(np.int64).max
    f = np.full(size, INF, dtype=np.int64)
    f[0] = 0
    layers = [masks[pop == c] for c in range(n + 1)]
    for c in range(1, n + 1):
        layer = layers[c]
        best = np.full(layer.size, INF, dtype=np.int64)
        for v in range(n):
            has = (layer >> v) & 1 == 1
            sub = layer[has]
            cand = np.maximum(f[sub ^ (1 << v)], cut[sub])
            best[has] = np.minimum(best[has], cand)
        f[layer] = best
    order = []
    m = size - 1
    while m:
        for v in _bits(m):
            prev = m ^ (1 << v)
            if max(f[prev], cut[m]) == f[m]:
                order.append(v)
                m = prev
                break
    order.reverse()
    return order, int(f[size - 1])


def bfs_order(g: Graph) -> list[int]:
    seen = [False] * g.n
    out = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        q = deque([s])
        while q:
            v = q.popleft()
            out.append(v)
            for u in _bits(g.adj[v]):
                if not seen[u]:
                    seen[u] = True
                    q.append(u)
    return out


def cutwidth_heuristic(g: Graph, seed: int = 0, iterations: int = 4000) -> tuple[list[int], int]:
    """Simulated annealing over adjacent swaps, starting from a BFS order."""
    order = bfs_order(g)
    n = g.n
    if n <= 2:
        return order, order_width(g, order)
    rng = Xoshiro256(seed)
    scale = g.m + 1

    def cost(o):
        pos = {v: i for i, v in enumerate(o)}
        diff = [0] * (n + 1)
        for u, v in g.edges():
            a, b = sorted((pos[u], pos[v]))
            diff[a + 1] += 1
            diff[b + 1] -= 1
        run = width = total = 0
        for i in range(1, n):
            run += diff[i]
            width = max(width, run)
            total += run
        return width * scale * n + total, width

    cur_cost, cur_w = cost(order)
    best, best_cost, best_w = list(order), cur_cost, cur_w
    temp = float(scale)
    for it in range(iterations):
        i = rng.below(n - 1)
        order[i], order[i + 1] = order[i + 1], order[i]
        c, w = cost(order)
        delta = c - cur_cost
        if delta <= 0 or rng.random() < math.exp(-delta / max(temp, 1e-9)):
            cur_cost, cur_w = c, w
            if c < best_cost:
                best, best_cost, best_w = list(order), c, w
        else:
            order[i], order[i + 1] = order[i + 1], order[i]
        temp *= 0.999
    return best, best_w


def parse_ordering(text: str, n: int) -> list[int]:
    vals = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        for tok in line.split():
            try:
                vals.append(int(tok) - 1)
            except ValueError:
                raise ParseError(f"bad vertex {tok!r}", lineno) from None
    return list(check_permutation(vals, n))


def read_ordering(path, n: int) -> list[int]:
    return parse_ordering(Path(path).read_text(encoding="utf-8"), n)
