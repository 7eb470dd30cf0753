"""Cut-by-cut dynamic program for the existence of a homomorphism G -> H.

At cut ``i`` the table holds colourings of ``X_i`` (the left endpoints of the
crossing edges) that extend to a homomorphism of the prefix. Before moving on,
the table is viewed as a set of tuples indexed by the crossing edges and shrunk
to a representative subset with respect to the k-th Kronecker power of ``A_H``.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Sequence

from homcut.caps import Caps, get_caps
from homcut.errors import NotApplicable, SizeCapExceeded
from homcut.graphs import Graph, _bits, connected_components
from homcut.ordering import CutDecomposition, check_permutation, cut_decomposition, cutwidth_exact, cutwidth_heuristic
from homcut.preprocess import core_of, prime_factorize
from homcut.repsets import ReductionConfig, TupleSet, reduce_with_stats

log = logging.getLogger(__name__)


@dataclass
class CutRecord:
    i: int
    k: int
    size_before: int
    size_after: int
    run: bool
    bound: int | None = None
    component: int = 0
    target: int = 0
    note: str | None = None

    def to_json(self) -> dict:
        d = {
            "i": self.i,
            "k": self.k,
            "size_before": self.size_before,
            "size_after": self.size_after,
            "run": self.run,
            "bound": self.bound,
            "component": self.component,
            "target": self.target,
        }
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class SolveReport:
    answer: bool
    width: int
    backend: str
    cuts: list[CutRecord] = field(default_factory=list)
    core_vertices: int | None = None
    factors: list[int] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    time_ms: float = 0.0

    def to_json(self) -> dict:
        return {
            "answer": self.answer,
            "width": self.width,
            "backend": self.backend,
            "cuts": [c.to_json() for c in self.cuts],
            "preprocess": {
                "core_vertices": self.core_vertices,
                "factors": self.factors,
                "notes": self.notes,
            },
            "time_ms": round(self.time_ms, 3),
        }


def run_dp(
    g: Graph,
    h: Graph,
    dec: CutDecomposition,
    cfg: ReductionConfig,
    records: list | None = None,
    tag: tuple[int, int] = (0, 0),
) -> bool:
    """The table recurrence for one ordering of G (connected or not) against H."""
    a = h.adjacency_matrix()
    order = dec.order
    full = (1 << h.n) - 1
    pos = {v: i for i, v in enumerate(order)}
    # colourings of the current X as tuples aligned with `xs`
    xs: tuple[int, ...] = ()
    table: set[tuple[int, ...]] = {()}
    eligible = 0
    for step, v in enumerate(order):
        back = [x for x in _bits(g.adj[v]) if pos[x] < step]
        idx = {x: j for j, x in enumerate(xs)}
        slots = [idx[x] for x in back]
        if step + 1 < len(order):
            cut = dec.cuts[step]
            nxt = cut.left
        else:
            cut, nxt = None, ()
        # where each vertex of the next X comes from: a slot of xs, or v itself
        src = [idx[x] if x != v else -1 for x in nxt]
        new: set[tuple[int, ...]] = set()
        for col in table:
            allowed = full
            for j in slots:
                allowed &= h.adj[col[j]]
                if not allowed:
                    break
            for u in _bits(allowed):
                new.add(tuple(col[j] if j >= 0 else u for j in src))
        table, xs = new, nxt
        if not table:
            return False
        if cut is None:
            continue
        k = cut.k
        before = len(table)
        if k >= 2 and cfg.backend != "noop":
            eligible += 1
            if (eligible - 1) % cfg.cadence:
                if records is not None:
                    records.append(CutRecord(cut.i, k, before, before, False, None, *tag))
                continue
            spot = {x: j for j, x in enumerate(xs)}
            schema = [spot[e[0]] for e in cut.edges]
            first = {}
            for j, e in enumerate(cut.edges):
                first.setdefault(e[0], j)
            back_idx = [first[x] for x in xs]
            tuples = TupleSet(k, h.n, tuple(tuple(col[j] for j in schema) for col in table))
            out, stats = reduce_with_stats(a, tuples, cfg)
            table = {tuple(t[j] for j in back_idx) for t in out.tuples}
            if records is not None:
                records.append(CutRecord(cut.i, k, before, len(table), stats.run, stats.bound, *tag, stats.note))
        elif records is not None:
            records.append(CutRecord(cut.i, k, before, before, False, None, *tag))
    return True


def _order_for(g: Graph, caps: Caps, seed: int) -> list[int]:
    if g.n <= caps.cutwidth_exact_vertices:
        return cutwidth_exact(g, caps)[0]
    return cutwidth_heuristic(g, seed)[0]


def _prepare_target(h: Graph, preprocess: Sequence[str], caps: Caps, report: SolveReport) -> list[Graph]:
    """Replace a connected target by its core and/or prime factors."""
    targets = [h]
    if "core" in preprocess:
        try:
            h = core_of(h, caps)
            targets = [h]
            report.core_vertices = h.n if report.core_vertices is None else max(report.core_vertices, h.n)
        except SizeCapExceeded as exc:
            report.notes.append(f"core skipped: {exc}")
    if "factor" in preprocess:
        try:
            targets = prime_factorize(h, caps)
            report.factors.extend(f.n for f in targets)
        except (NotApplicable, SizeCapExceeded) as exc:
            report.notes.append(f"factorization skipped: {exc}")
    return targets


def solve(
    g: Graph,
    h: Graph,
    order: Sequence[int] | None = None,
    cfg: ReductionConfig | None = None,
    preprocess: Sequence[str] = (),
    caps: Caps | None = None,
    seed: int = 0,
) -> SolveReport:
    """Decide whether G maps homomorphically to H."""
    t0 = time.perf_counter()
    cfg = cfg or ReductionConfig()
    caps = caps or cfg.caps or get_caps()
    if cfg.caps is None:
        cfg.caps = caps
    bad = set(preprocess) - {"core", "factor"}
    if bad:
        raise ValueError(f"unknown preprocessing step(s): {', '.join(sorted(bad))}")
    report = SolveReport(True, 0, cfg.backend)
    if order is not None:
        order = check_permutation(order, g.n)
    g_comps = connected_components(g)
    h_comps = connected_components(h)
    targets = [_prepare_target(h.induced(c), preprocess, caps, report) for c in h_comps]
    answer = True
    for ci, comp in enumerate(g_comps):
        gc = g.induced(comp)
        if order is not None:
            where = {v: j for j, v in enumerate(comp)}
            sub = [where[v] for v in order if v in where]
        else:
            sub = _order_for(gc, caps, seed)
        dec = cut_decomposition(gc, sub)
        report.width = max(report.width, dec.width)
        if len(comp) > 1:
            assert all(c.k >= 1 for c in dec.cuts), "connected component with an empty cut"
        ok = False
        for ti, parts in enumerate(targets):
            if all(run_dp(gc, t, dec, cfg, report.cuts, (ci, ti)) for t in parts):
                ok = True
                break
        if not ok:
            answer = False
            break
    report.answer = answer
    report.time_ms = (time.perf_counter() - t0) * 1000
    return report


def hom_exists(g: Graph, h: Graph, backend: str = "noop", **kw) -> bool:
    return solve(g, h, cfg=ReductionConfig(backend), **kw).answer
