"""Graphs and 0/1 matrices stored as integer bitrows.

Bit ``j`` of ``adj[i]`` (or ``bits[i]``) is the entry in row ``i``, column ``j``.
Vertices are 0-based in memory and 1-based in files.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Iterable, Sequence

from homcut.caps import Caps, get_caps
from homcut.errors import DuplicateEdgeIgnored, LoopRejected, ParseError, SizeCapExceeded


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class BoolMatrix:
    rows: int
    cols: int
    bits: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0 or len(self.bits) != self.rows:
            raise ValueError("inconsistent matrix dimensions")
        limit = 1 << self.cols
        for b in self.bits:
            if b < 0 or b >= limit:
                raise ValueError("row has bits outside the column range")

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]]) -> "BoolMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        bits = []
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
            b = 0
            for j, x in enumerate(r):
                if x not in (0, 1):
                    raise ValueError(f"entry {x!r} is not 0/1")
                if x:
                    b |= 1 << j
            bits.append(b)
        return cls(len(rows), ncols, tuple(bits))

    @classmethod
    def identity(cls, n: int) -> "BoolMatrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def ones(cls, rows: int, cols: int) -> "BoolMatrix":
        return cls(rows, cols, tuple((1 << cols) - 1 for _ in range(rows)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BoolMatrix":
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def upper_triangular(cls, r: int) -> "BoolMatrix":
        """Ones on and above the diagonal: the bi-adjacency matrix of the half-graph."""
        full = (1 << r) - 1
        return cls(r, r, tuple(full & ~((1 << i) - 1) for i in range(r)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return (self.bits[i] >> j) & 1

    def row_support(self, i: int) -> list[int]:
        return _bits(self.bits[i])

    def to_lists(self) -> list[list[int]]:
        return [[(b >> j) & 1 for j in range(self.cols)] for b in self.bits]

    def transpose(self) -> "BoolMatrix":
        out = [0] * self.cols
        for i, b in enumerate(self.bits):
            for j in _bits(b):
                out[j] |= 1 << i
        return BoolMatrix(self.cols, self.rows, tuple(out))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int] | None = None) -> "BoolMatrix":
        if cols is None:
            return BoolMatrix(len(rows), self.cols, tuple(self.bits[i] for i in rows))
        out = []
        for i in rows:
            b = self.bits[i]
            nb = 0
            for t, j in enumerate(cols):
                if (b >> j) & 1:
                    nb |= 1 << t
            out.append(nb)
        return BoolMatrix(len(rows), len(cols), tuple(out))

    @property
    def is_symmetric(self) -> bool:
        return self.rows == self.cols and self == self.transpose()

    @property
    def entries(self) -> int:
        return self.rows * self.cols

    def count_ones(self) -> int:
        return sum(b.bit_count() for b in self.bits)

    def __str__(self):
        return "\n".join("".join(str(x) for x in r) for r in self.to_lists())


def kron(a: BoolMatrix, b: BoolMatrix, caps: Caps | None = None) -> BoolMatrix:
    """Kronecker product; row ``(r1, r2)`` sits at index ``r1 * b.rows + r2``."""
    caps = caps or get_caps()
    caps.check("kron_entries", a.entries * b.entries, "Kronecker product")
    out = []
    for ra in a.bits:
        shifts = [c * b.cols for c in _bits(ra)]
        for rb in b.bits:
            row = 0
            for s in shifts:
                row |= rb << s
            out.append(row)
    return BoolMatrix(a.rows * b.rows, a.cols * b.cols, tuple(out))


def kron_power(a: BoolMatrix, k: int, caps: Caps | None = None) -> BoolMatrix:
    """``a`` tensored with itself ``k`` times (big-endian tuple index encoding)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    caps = caps or get_caps()
    caps.check("kron_entries", a.entries**k, "Kronecker power")
    out = a
    for _ in range(k - 1):
        out = kron(out, a, caps)
    return out


def encode_tuple(t: Sequence[int], base: int) -> int:
    x = 0
    for c in t:
        x = x * base + c
    return x


def decode_index(x: int, base: int, k: int) -> tuple[int, ...]:
    out = [0] * k
    for i in range(k - 1, -1, -1):
        x, out[i] = divmod(x, base)
    return tuple(out)


def kron_entry(a: BoolMatrix, row: Sequence[int], col: Sequence[int]) -> int:
    """Entry of a Kronecker power at tuple-indexed position, without materializing."""
    for r, c in zip(row, col, strict=True):
        if not (a.bits[r] >> c) & 1:
            return 0
    return 1


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a graph needs at least one vertex")
        if len(self.adj) != self.n:
            raise ValueError("adjacency has the wrong number of rows")
        limit = 1 << self.n
        for v, row in enumerate(self.adj):
            if row < 0 or row >= limit:
                raise ValueError("adjacency bits out of range")
            if (row >> v) & 1:
                raise ValueError(f"loop at vertex {v}")
            for u in _bits(row):
                if not (self.adj[u] >> v) & 1:
                    raise ValueError("adjacency is not symmetric")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels=None) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj), labels)

    @classmethod
    def from_matrix(cls, m: BoolMatrix) -> "Graph":
        if not m.is_symmetric:
            raise ValueError("adjacency matrix must be symmetric")
        return cls(m.rows, m.bits)

    @property
    def m(self) -> int:
        return sum(b.bit_count() for b in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in _bits(self.adj[u]) if u < v]

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def neighbors(self, v: int) -> list[int]:
        return _bits(self.adj[v])

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def adjacency_matrix(self) -> BoolMatrix:
        return BoolMatrix(self.n, self.n, self.adj)

    def induced(self, vertices: Sequence[int]) -> "Graph":
        vertices = list(vertices)
        pos = {v: i for i, v in enumerate(vertices)}
        adj = []
        for v in vertices:
            row = 0
            for u in _bits(self.adj[v]):
                if u in pos:
                    row |= 1 << pos[u]
            adj.append(row)
        labels = None
        if self.labels is not None:
            labels = tuple(self.labels[v] for v in vertices)
        return Graph(len(vertices), tuple(adj), labels)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        return Graph.from_edges(self.n, [(perm[u], perm[v]) for u, v in self.edges()])

    def bipartition(self) -> tuple[list[int], list[int]] | None:
        """BFS 2-colouring (smallest vertex of each component goes left), or None."""
        side = [-1] * self.n
        for s in range(self.n):
            if side[s] >= 0:
                continue
            side[s] = 0
            queue = [s]
            while queue:
                v = queue.pop()
                for u in _bits(self.adj[v]):
                    if side[u] < 0:
                        side[u] = 1 - side[v]
                        queue.append(u)
                    elif side[u] == side[v]:
                        return None
        return [v for v in range(self.n) if side[v] == 0], [v for v in range(self.n) if side[v] == 1]

    @property
    def is_bipartite(self) -> bool:
        return self.bipartition() is not None

    def biadjacency(self) -> BoolMatrix:
        parts = self.bipartition()
        if parts is None:
            raise ValueError("graph is not bipartite")
        left, right = parts
        return self.adjacency_matrix().submatrix(left, right)


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, tuple(full & ~(1 << i) for i in range(n)))


def empty_graph(n: int) -> Graph:
    return Graph(n, (0,) * n)


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycles need at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def grid_graph(rows: int, cols: int) -> Graph:
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph.from_edges(rows * cols, edges)


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def half_graph(r: int) -> Graph:
    """Bipartite graph on v_1..v_r, u_1..u_r with v_i u_j an edge iff i <= j."""
    return Graph.from_edges(2 * r, [(i, r + j) for i in range(r) for j in range(i, r)])


def disjoint_union(*graphs: Graph) -> Graph:
    edges, off = [], 0
    for g in graphs:
        edges += [(u + off, v + off) for u, v in g.edges()]
        off += g.n
    return Graph.from_edges(off, edges)


def direct_product(h1: Graph, h2: Graph) -> Graph:
    """Categorical product; vertex ``(v1, v2)`` has index ``v1 * h2.n + v2``."""
    adj = []
    for v1 in range(h1.n):
        n1 = _bits(h1.adj[v1])
        for v2 in range(h2.n):
            row = 0
            for u1 in n1:
                row |= h2.adj[v2] << (u1 * h2.n)
            adj.append(row)
    return Graph(h1.n * h2.n, tuple(adj))


@dataclass(frozen=True)
class AssocBipartite:
    base: Graph
    star: BoolMatrix

    def as_graph(self) -> Graph:
        """H* as an explicit graph: copy u' is vertex u, copy u'' is vertex n + u."""
        n = self.base.n
        return Graph.from_edges(
            2 * n, [(u, n + w) for u in range(n) for w in self.star.row_support(u)]
        )


def associated_bipartite(h: Graph) -> AssocBipartite:
    return AssocBipartite(h, h.adjacency_matrix())


def connected_components(g: Graph) -> list[list[int]]:
    seen = 0
    comps = []
    for s in range(g.n):
        if (seen >> s) & 1:
            continue
        comp = 1 << s
        frontier = 1 << s
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= g.adj[v]
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        comps.append(_bits(comp))
    return comps


def is_connected(g: Graph) -> bool:
    return len(connected_components(g)) == 1


def _refine(g: Graph) -> list[tuple]:
    """Colour refinement signature per vertex, a few rounds deep."""
    colour = [g.degree(v) for v in range(g.n)]
    for _ in range(3):
        new = [(colour[v], tuple(sorted(colour[u] for u in _bits(g.adj[v])))) for v in range(g.n)]
        index = {c: i for i, c in enumerate(sorted(set(new)))}
        colour = [index[c] for c in new]
    return colour


def isomorphism(g1: Graph, g2: Graph, caps: Caps | None = None) -> list[int] | None:
    """Return a bijection ``f`` with ``uv in E(g1) <=> f(u)f(v) in E(g2)``, or None."""
    caps = caps or get_caps()
    caps.check("iso_vertices", max(g1.n, g2.n), "isomorphism test")
    if g1.n != g2.n or g1.m != g2.m:
        return None
    if sorted(g1.degree(v) for v in range(g1.n)) != sorted(g2.degree(v) for v in range(g2.n)):
        return None
    # refine both graphs jointly so colour ids are comparable
    joint = disjoint_union(g1, g2)
    colour = _refine(joint)
    c1, c2 = colour[: g1.n], colour[g1.n :]
    if sorted(c1) != sorted(c2):
        return None
    order = sorted(range(g1.n), key=lambda v: (-g1.degree(v), v))
    # place vertices adjacent to already placed ones early
    placed, seq = 0, []
    while order:
        best = max(order, key=lambda v: ((g1.adj[v] & placed).bit_count(), g1.degree(v)))
        order.remove(best)
        seq.append(best)
        placed |= 1 << best
    f = [-1] * g1.n
    used = 0

    def extend(idx: int) -> bool:
        nonlocal used
        if idx == len(seq):
            return True
        v = seq[idx]
        for w in range(g2.n):
            if (used >> w) & 1 or c2[w] != c1[v]:
                continue
            ok = True
            for u in seq[:idx]:
                if g1.has_edge(u, v) != g2.has_edge(f[u], w):
                    ok = False
                    break
            if not ok:
                continue
            f[v] = w
            used |= 1 << w
            if extend(idx + 1):
                return True
            used &= ~(1 << w)
            f[v] = -1
        return False

    return f if extend(0) else None


def is_isomorphic(g1: Graph, g2: Graph, caps: Caps | None = None) -> bool:
    return isomorphism(g1, g2, caps) is not None


# ---------------------------------------------------------------- file I/O


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def parse_graph(text: str) -> Graph:
    n = m = None
    edges: list[tuple[int, int]] = []
    seen = set()
    edge_lines = 0
    last = 0
    for lineno, line in _content_lines(text):
        last = lineno
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise ParseError("duplicate header", lineno)
            if len(parts) != 4 or parts[1] != "hom":
                raise ParseError("expected 'p hom <n> <m>'", lineno)
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError("header counts must be integers", lineno) from None
            if n < 1 or m < 0:
                raise ParseError("need n >= 1 and m >= 0", lineno)
        elif parts[0] == "e":
            if n is None:
                raise ParseError("edge before header", lineno)
            if len(parts) != 3:
                raise ParseError("expected 'e <u> <v>'", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError("edge endpoints must be integers", lineno) from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(f"endpoint out of range 1..{n}", lineno)
            if u == v:
                raise LoopRejected(f"loop at vertex {u}", lineno)
            edge_lines += 1
            key = (min(u, v) - 1, max(u, v) - 1)
            if key in seen:
                warnings.warn(f"line {lineno}: duplicate edge {u} {v} ignored", DuplicateEdgeIgnored)
                continue
            seen.add(key)
            edges.append(key)
        else:
            raise ParseError(f"unknown line type {parts[0]!r}", lineno)
    if n is None:
        raise ParseError("missing 'p hom' header", last or None)
    if edge_lines != m:
        raise ParseError(f"header announces {m} edges, found {edge_lines}", last)
    return Graph.from_edges(n, edges)


def format_graph(g: Graph) -> str:
    lines = [f"p hom {g.n} {g.m}"]
    lines += [f"e {u + 1} {v + 1}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def read_graph(path) -> Graph:
    return parse_graph(Path(path).read_text(encoding="utf-8"))


def write_graph(g: Graph, path) -> None:
    Path(path).write_text(format_graph(g), encoding="utf-8")


def parse_matrix(text: str) -> BoolMatrix:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty matrix file", 1)
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2:
        raise ParseError("expected '<rows> <cols>'", lineno)
    try:
        rows, cols = int(parts[0]), int(parts[1])
    except ValueError:
        raise ParseError("dimensions must be integers", lineno) from None
    if rows < 1 or cols < 1:
        raise ParseError("dimensions must be positive", lineno)
    body = lines[1:]
    if len(body) != rows:
        raise ParseError(f"expected {rows} matrix rows, found {len(body)}", body[-1][0] if body else lineno)
    data = []
    for lineno, line in body:
        if len(line) != cols or set(line) - {"0", "1"}:
            raise ParseError(f"expected {cols} characters of 0/1", lineno)
        data.append([int(ch) for ch in line])
    return BoolMatrix.from_lists(data)


def format_matrix(a: BoolMatrix) -> str:
    return f"{a.rows} {a.cols}\n" + "".join(
        "".join(str(x) for x in r) + "\n" for r in a.to_lists()
    )


def read_matrix(path) -> BoolMatrix:
    return parse_matrix(Path(path).read_text(encoding="utf-8"))


def write_matrix(a: BoolMatrix, path) -> None:
    Path(path).write_text(format_matrix(a), encoding="utf-8")


def all_tuples(h: int, k: int):
    return product(range(h), repeat=k)
