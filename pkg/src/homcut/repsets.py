"""Representative sets of DP rows with respect to Kronecker powers of a 0/1 matrix.

A subset ``S'`` of ``S`` represents ``S`` (for ``M = A^{(x)k}``) when every column
covered by a row of ``S`` is covered by a row of ``S'``. Backends:

``noop``      keep everything
``him``       remove rows one at a time with the multinomial-budget procedure
``rowbasis``  keep a row basis of ``L^{(x)k}`` for a low-rank same-support ``B = L R``
``oracle``    exact minimum subset (test scale only)
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from homcut.caps import Caps, get_caps
from homcut.errors import BudgetExceeded, PreconditionViolated, SizeCapExceeded, SupportMismatch
from homcut.fields import FAST_PRIME, FieldMatrix, lr_factor, rank, streamed_row_basis
from homcut.graphs import BoolMatrix, _bits
from homcut.params import best_support_matrix, him_exact

log = logging.getLogger(__name__)

BACKENDS = ("noop", "him", "rowbasis", "oracle")


@dataclass(frozen=True)
class TupleSet:
    """Deduplicated, sorted k-tuples over ``range(h)`` (0-based in memory)."""

    k: int
    h: int
    tuples: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        ts = tuple(sorted(set(tuple(int(x) for x in t) for t in self.tuples)))
        for t in ts:
            if len(t) != self.k or not all(0 <= x < self.h for x in t):
                raise ValueError(f"tuple {t} is not a {self.k}-tuple over [{self.h}]")
        object.__setattr__(self, "tuples", ts)

    @classmethod
    def all(cls, k: int, h: int) -> "TupleSet":
        from homcut.graphs import all_tuples

        return cls(k, h, tuple(all_tuples(h, k)))

    def __len__(self):
        return len(self.tuples)

    def __iter__(self):
        return iter(self.tuples)

    def __contains__(self, t):
        return tuple(t) in set(self.tuples)

    def with_tuples(self, tuples: Iterable[Sequence[int]]) -> "TupleSet":
        return TupleSet(self.k, self.h, tuple(tuple(t) for t in tuples))

    def issubset(self, other: "TupleSet") -> bool:
        return set(self.tuples) <= set(other.tuples)

    def to_json(self) -> dict:
        return {"k": self.k, "h": self.h, "tuples": [[x + 1 for x in t] for t in self.tuples]}

    @classmethod
    def from_json(cls, data: dict) -> "TupleSet":
        return cls(data["k"], data["h"], tuple(tuple(x - 1 for x in t) for t in data["tuples"]))


@dataclass(frozen=True)
class MultinomialBudget:
    ell: tuple[int, ...]

    def __post_init__(self):
        if any(x < 0 for x in self.ell):
            raise ValueError("budgets must be non-negative")

    @property
    def value(self) -> int:
        return multinomial(self.ell)

    def decremented(self, i: int) -> "MultinomialBudget":
        ell = list(self.ell)
        ell[i] -= 1
        return MultinomialBudget(tuple(ell))


def multinomial(parts: Sequence[int]) -> int:
    out, total = 1, 0
    for x in parts:
        total += x
        out *= math.comb(total, x)
    return out


@dataclass
class ReductionConfig:
    backend: str = "noop"
    prime: int = FAST_PRIME
    support: FieldMatrix | None = None  # rowbasis: explicit same-support matrix
    per_coordinate: bool = True  # him: per-coordinate budgets
    skip_within_bound: bool = True  # rowbasis: leave sets already below rank^k alone
    cadence: int = 1  # reduce at every cadence-th eligible cut
    caps: Caps | None = None

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise ValueError(f"unknown backend {self.backend!r}; choose from {', '.join(BACKENDS)}")
        if self.cadence < 1:
            raise ValueError("cadence must be >= 1")


# ------------------------------------------------------------------ coverage helpers


def tuple_mask(a: BoolMatrix, t: Sequence[int]) -> int:
    """Bitmask over flat column indices of ``A^{(x)k}`` covered by row tuple ``t``."""
    mask = 1
    for x in t:
        row = a.bits[x]
        nxt = 0
        for c in _bits(mask):
            nxt |= row << (c * a.cols)
        mask = nxt
        if not mask:
            break
    return mask


def covered_columns(a: BoolMatrix, tuples: Iterable[Sequence[int]], caps: Caps | None = None) -> int:
    caps = caps or get_caps()
    out = 0
    for t in tuples:
        caps.check("oracle_columns", a.cols ** len(t), "column enumeration")
        out |= tuple_mask(a, t)
    return out


def represents(a: BoolMatrix, sub: TupleSet, full: TupleSet, caps: Caps | None = None) -> bool:
    """Exhaustive check that ``sub`` covers exactly the columns ``full`` covers."""
    return covered_columns(a, sub, caps) == covered_columns(a, full, caps)


# ------------------------------------------------------------------ him backend


class _HimCache:
    def __init__(self, a: BoolMatrix, caps: Caps):
        self.a, self.caps, self.memo = a, caps, {}

    def __call__(self, rows: frozenset) -> int:
        if rows not in self.memo:
            self.memo[rows] = him_exact(self.a.submatrix(sorted(rows)), self.caps)[0] if rows else 0
        return self.memo[rows]


def _projections(tuples, k):
    return [frozenset(t[i] for t in tuples) for i in range(k)]


def him_reduce_remove_one(
    a: BoolMatrix,
    s: TupleSet,
    budgets: MultinomialBudget,
    caps: Caps | None = None,
    _him=None,
) -> tuple[int, ...] | None:
    """A tuple ``v`` such that ``S - {v}`` still represents ``S``.

    Starting from the whole set, take the smallest tuple ``v`` and look for a
    coordinate ``i`` and column ``u`` with ``A[v_i][u] = 1`` such that the tuples
    zero at ``u`` in coordinate ``i`` still meet the budget with ``ell_i - 1``.
    If one exists, restrict to those tuples and repeat; otherwise ``v`` is removable.
    """
    caps = caps or get_caps()
    k, h = s.k, s.h
    if len(budgets.ell) != k:
        raise ValueError("one budget per coordinate")
    g = budgets.value
    if g > h**k:
        raise PreconditionViolated(f"budget g = {g} exceeds the number of {k}-tuples ({h ** k})")
    if len(s) < g:
        return None
    him = _him or _HimCache(a, caps)
    for i, rows in enumerate(_projections(s.tuples, k)):
        if him(rows) >= budgets.ell[i]:
            raise PreconditionViolated(f"coordinate {i}: him of projected rows is not below ell_{i}")
    cur = list(s.tuples)
    ell = budgets
    while True:
        v = min(cur)
        step = None
        for i in range(k):
            if ell.ell[i] == 0:
                raise PreconditionViolated(f"coordinate {i}: budget exhausted")
            hist = [0] * h
            for t in cur:
                hist[t[i]] += 1
            need = ell.decremented(i).value
            for u in a.row_support(v[i]):
                size = sum(c for x, c in enumerate(hist) if c and not a[x, u])
                if size >= need:
                    step = (i, u)
                    break
            if step:
                break
        if step is None:
            return v
        i, u = step
        cur = [t for t in cur if not a[t[i], u]]
        ell = ell.decremented(i)


def _budgets(a, tuples, k, per_coordinate, him) -> MultinomialBudget:
    if per_coordinate:
        return MultinomialBudget(tuple(him(r) + 1 for r in _projections(tuples, k)))
    return MultinomialBudget((him(frozenset(range(a.rows))) + 1,) * k)


def him_reduce_full(
    a: BoolMatrix, s: TupleSet, per_coordinate: bool = True, caps: Caps | None = None
) -> tuple[TupleSet, int]:
    """Remove tuples until the set is below its multinomial budget.

    Returns the reduced set and the final budget ``g`` (the size guarantee).
    """
    caps = caps or get_caps()
    k = s.k
    him = _HimCache(a, caps)
    cur = set(s.tuples)
    while True:
        budget = _budgets(a, cur, k, per_coordinate, him)
        g = budget.value
        if len(cur) < g:
            break
        v = him_reduce_remove_one(a, s.with_tuples(cur), budget, caps, _him=him)
        if v is None:
            break
        cur.discard(v)
    return s.with_tuples(cur), g


# ------------------------------------------------------------------ rowbasis backend


def rowbasis_reduce(a: BoolMatrix, b: FieldMatrix, s: TupleSet, caps: Caps | None = None) -> TupleSet:
    """Keep tuples whose rows of ``L^{(x)k}`` are a basis, where ``B = L R``."""
    if not b.same_support(a):
        raise SupportMismatch("B does not have the support of A")
    if not s.tuples:
        return s
    fac = lr_factor(b)
    return s.with_tuples(streamed_row_basis(fac.L, s.tuples, s.k, caps))


# ------------------------------------------------------------------ oracle


def oracle_minimal_representative(a: BoolMatrix, s: TupleSet, caps: Caps | None = None) -> TupleSet:
    """Minimum-cardinality subset covering the same columns (exact set cover)."""
    caps = caps or get_caps()
    caps.check("oracle_columns", a.cols**s.k, "oracle column count")
    tuples = list(s.tuples)
    masks = [tuple_mask(a, t) for t in tuples]
    universe = 0
    for m in masks:
        universe |= m
    if not universe:
        return s.with_tuples(())
    # a row whose coverage sits inside another row's is never needed
    keep = []
    for j, m in enumerate(masks):
        if not any(
            (masks[x] | m) == masks[x] and (masks[x] != m or x < j) for x in range(len(masks)) if x != j
        ):
            keep.append(j)
    tuples = [tuples[j] for j in keep]
    masks = [masks[j] for j in keep]
    # greedy upper bound
    best: list[int] = []
    left = universe
    while left:
        j = max(range(len(masks)), key=lambda x: ((masks[x] & left).bit_count(), -x))
        best.append(j)
        left &= ~masks[j]
    largest = max(m.bit_count() for m in masks)
    col_rows: dict[int, int] = {}
    for j, m in enumerate(masks):
        for c in _bits(m):
            col_rows[c] = col_rows.get(c, 0) | (1 << j)
    nodes = 0

    def rec(chosen: list[int], left: int) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes > caps.oracle_nodes:
            raise BudgetExceeded(f"oracle search exceeded {caps.oracle_nodes} nodes")
        if not left:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        if len(chosen) + -(-left.bit_count() // largest) >= len(best):
            return
        # branch on the uncovered column with fewest covering rows
        col = min(_bits(left), key=lambda c: col_rows[c].bit_count())
        for j in _bits(col_rows[col]):
            chosen.append(j)
            rec(chosen, left & ~masks[j])
            chosen.pop()

    rec([], universe)
    return s.with_tuples(tuples[j] for j in best)


# ------------------------------------------------------------------ dispatcher


@dataclass
class ReductionStats:
    run: bool
    bound: int | None = None
    note: str | None = None
    extra: dict = field(default_factory=dict)


def support_for(a: BoolMatrix, cfg: ReductionConfig) -> tuple[FieldMatrix, str, int]:
    if cfg.support is not None:
        if not cfg.support.same_support(a):
            raise SupportMismatch("configured support matrix does not match A")
        return cfg.support, "given", rank(cfg.support)
    return best_support_matrix(a, cfg.prime, cfg.caps)


def reduce_with_stats(a: BoolMatrix, s: TupleSet, cfg: ReductionConfig) -> tuple[TupleSet, ReductionStats]:
    caps = cfg.caps or get_caps()
    if s.k <= 1 or cfg.backend == "noop":
        return s, ReductionStats(False)
    try:
        if cfg.backend == "him":
            out, g = him_reduce_full(a, s, cfg.per_coordinate, caps)
            return out, ReductionStats(True, g)
        if cfg.backend == "rowbasis":
            b, source, r = support_for(a, cfg)
            bound = r**s.k
            if cfg.skip_within_bound and len(s) <= bound:
                return s, ReductionStats(False, bound, extra={"support": source})
            return rowbasis_reduce(a, b, s, caps), ReductionStats(True, bound, extra={"support": source})
        out = oracle_minimal_representative(a, s, caps)
        return out, ReductionStats(True)
    except (SizeCapExceeded, BudgetExceeded) as exc:
        log.warning("%s backend skipped: %s", cfg.backend, exc)
        return s, ReductionStats(False, note=f"{cfg.backend} skipped: {exc}")


def reduce(a: BoolMatrix, s: TupleSet, cfg: ReductionConfig) -> TupleSet:
    return reduce_with_stats(a, s, cfg)[0]
