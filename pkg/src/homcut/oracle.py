"""Brute-force homomorphism checking and seeded instance generation."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

from homcut.caps import Caps, get_caps
from homcut.errors import BudgetExceeded
from homcut.graphs import Graph, _bits, connected_components
from homcut.rng import Xoshiro256


def _search(g: Graph, h: Graph, caps: Caps, count: bool) -> int:
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    full = (1 << h.n) - 1
    dom = [full] * g.n
    assigned = [False] * g.n
    nodes = 0

    def rec(idx: int) -> int:
        nonlocal nodes
        if idx == g.n:
            return 1
        v = order[idx]
        total = 0
        for u in _bits(dom[v]):
            nodes += 1
            if nodes > caps.hom_nodes:
                raise BudgetExceeded(f"more than {caps.hom_nodes} search nodes")
            saved = []
            ok = True
            for w in _bits(g.adj[v]):
                if not assigned[w]:
                    saved.append((w, dom[w]))
                    dom[w] &= h.adj[u]
                    if not dom[w]:
                        ok = False
                        break
            if ok:
                assigned[v] = True
                total += rec(idx + 1)
                assigned[v] = False
            for w, d in reversed(saved):
                dom[w] = d
            if total and not count:
                return total
        return total

    return rec(0)


def hom_exists_bruteforce(g: Graph, h: Graph, caps: Caps | None = None) -> bool:
    """Backtracking in descending-degree order with forward domain pruning."""
    return _search(g, h, caps or get_caps(), count=False) > 0


def hom_count_bruteforce(g: Graph, h: Graph, caps: Caps | None = None) -> int:
    return _search(g, h, caps or get_caps(), count=True)


# ------------------------------------------------------------------ generation

MODELS = ("gnp", "cycle", "clique", "grid", "random-target")


@dataclass(frozen=True)
class GenSpec:
    model: str
    n: int
    p: float = 0.5
    seed: int = 0
    cols: int | None = None  # grid only; defaults to n

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if self.n < 1:
            raise ValueError("n must be >= 1")

    def to_json(self) -> dict:
        d = asdict(self)
        if d["cols"] is None:
            del d["cols"]
        return d

    @classmethod
    def from_json(cls, d: dict) -> "GenSpec":
        return cls(d["model"], int(d["n"]), float(d.get("p", 0.5)), int(d.get("seed", 0)), d.get("cols"))


def _gnp(n: int, p: float, rng: Xoshiro256) -> list[tuple[int, int]]:
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.append((i, j))
    return edges


def generate(spec: GenSpec) -> Graph:
    """Deterministic for a fixed spec; all randomness comes from the pinned generator."""
    from homcut.graphs import complete_graph, cycle_graph, grid_graph

    n = spec.n
    if spec.model == "cycle":
        return cycle_graph(n)
    if spec.model == "clique":
        return complete_graph(n)
    if spec.model == "grid":
        return grid_graph(n, spec.cols or n)
    rng = Xoshiro256(spec.seed)
    edges = _gnp(n, spec.p, rng)
    g = Graph.from_edges(n, edges)
    if spec.model == "random-target":
        comps = connected_components(g)
        extra = [(comps[i][0], comps[i + 1][0]) for i in range(len(comps) - 1)]
        g = Graph.from_edges(n, edges + extra)
    return g


def generate_corpus(count: int = 500, seed: int = 2024, max_g: int = 9, max_h: int = 5) -> list[dict]:
    """Random (G, H) pairs with mixed densities."""
    rng = Xoshiro256(seed)
    probs = (0.2, 0.5, 0.8)
    out = []
    for _ in range(count):
        g = GenSpec("gnp", 1 + rng.below(max_g), rng.choice(probs), rng.below(1 << 32))
        h = GenSpec("gnp", 1 + rng.below(max_h), rng.choice(probs), rng.below(1 << 32))
        out.append({"graph": g.to_json(), "target": h.to_json()})
    return out


def load_corpus(path) -> list[tuple[GenSpec, GenSpec]]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return [(GenSpec.from_json(x["graph"]), GenSpec.from_json(x["target"])) for x in data.get("instances", [])]


def default_corpus_path() -> Path:
    return Path(__file__).with_name("data") / "default_corpus.json"
