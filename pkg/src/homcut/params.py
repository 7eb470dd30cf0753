"""Rank parameters of 0/1 matrices and the witnesses that certify them.

mim and him are computed exactly by branch and bound for small matrices,
mimsup is only ever bracketed, and support-rank upper bounds come from explicit
same-support matrices (the adjacency matrix itself, the clique pattern
``i - j``, and the product construction driven by a local biclique cover).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from sympy.utilities.iterables import multiset_permutations

from homcut.caps import Caps, get_caps
from homcut.errors import InvalidWitness, NotApplicable, NotFound, RetryLimit, SupportMismatch
from homcut.fields import DEFAULT_PRIME, FieldMatrix, rank
from homcut.graphs import BoolMatrix, Graph, _bits, decode_index, encode_tuple, kron_entry, kron_power
from homcut.rng import Xoshiro256

# ------------------------------------------------------------------ witnesses


@dataclass(frozen=True)
class MimWitness:
    """Rows and columns (flat indices of ``A`` or of a Kronecker power of ``A``)."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]

    def __len__(self):
        return len(self.rows)

    def to_json(self) -> dict:
        return {"rows": [r + 1 for r in self.rows], "cols": [c + 1 for c in self.cols]}


@dataclass(frozen=True)
class HimWitness:
    rows: tuple[int, ...]
    cols: tuple[int, ...]

    def __len__(self):
        return len(self.rows)

    def to_json(self) -> dict:
        return {"rows": [r + 1 for r in self.rows], "cols": [c + 1 for c in self.cols]}


def _power_entry(a: BoolMatrix, k: int, r: int, c: int) -> int:
    return kron_entry(a, decode_index(r, a.rows, k), decode_index(c, a.cols, k))


def is_mim_witness(a: BoolMatrix, w: MimWitness, power: int = 1) -> bool:
    """Check that ``A^{(x)power}[rows, cols]`` is an identity matrix, entry by entry."""
    m = len(w.rows)
    if len(w.cols) != m or len(set(w.rows)) != m or len(set(w.cols)) != m:
        return False
    for x, r in enumerate(w.rows):
        for y, c in enumerate(w.cols):
            if _power_entry(a, power, r, c) != (x == y):
                return False
    return True


def is_him_witness(a: BoolMatrix, w: HimWitness) -> bool:
    """Ones on the diagonal and zeros at ``(rows[i], cols[j])`` for ``i < j``."""
    m = len(w.rows)
    if len(w.cols) != m or len(set(w.rows)) != m or len(set(w.cols)) != m:
        return False
    for j in range(m):
        if not a[w.rows[j], w.cols[j]]:
            return False
        for i in range(j):
            if a[w.rows[i], w.cols[j]]:
                return False
    return True


def normalize_him_witness(a: BoolMatrix, rows: Sequence[int], cols: Sequence[int]) -> HimWitness:
    """Accept either triangular orientation and return the zeros-above form."""
    w = HimWitness(tuple(rows), tuple(cols))
    if is_him_witness(a, w):
        return w
    rev = HimWitness(tuple(reversed(rows)), tuple(reversed(cols)))
    if is_him_witness(a, rev):
        return rev
    raise InvalidWitness("sequences do not form a half-induced matching in either orientation")


# ------------------------------------------------------------------ mim


def _max_clique(adj: list[int], initial: list[int]) -> list[int]:
    """Maximum clique over bitset adjacency, greedy-colouring bound."""
    best = list(initial)

    def colour_sort(P: int) -> list[tuple[int, int]]:
        out = []
        colour = 0
        U = P
        while U:
            colour += 1
            Q = U
            while Q:
                low = Q & -Q
                v = low.bit_length() - 1
                Q &= ~low & ~adj[v]
                U &= ~low
                out.append((v, colour))
        return out

    def expand(R: list[int], P: int) -> None:
        nonlocal best
        for v, c in reversed(colour_sort(P)):
            if len(R) + c <= len(best):
                return
            R.append(v)
            NP = P & adj[v]
            if NP:
                expand(R, NP)
            elif len(R) > len(best):
                best = list(R)
            R.pop()
            P &= ~(1 << v)

    expand([], (1 << len(adj)) - 1)
    return best


def mim_exact(a: BoolMatrix, caps: Caps | None = None) -> tuple[int, MimWitness]:
    """Largest identity submatrix after row/column permutation."""
    caps = caps or get_caps()
    caps.check("mim_entries", a.entries, "mim_exact")
    verts = [(r, c) for r in range(a.rows) for c in a.row_support(r)]
    if not verts:
        return 0, MimWitness((), ())
    at = a.transpose()
    full_rows = (1 << a.rows) - 1
    full_cols = (1 << a.cols) - 1
    # vertices sorted by degree in the compatibility graph, highest first
    row_mask = [0] * a.rows
    col_mask = [0] * a.cols
    for idx, (r, c) in enumerate(verts):
        row_mask[r] |= 1 << idx
        col_mask[c] |= 1 << idx
    compat = []
    for r, c in verts:
        zr = full_rows & ~at.bits[c] & ~(1 << r)
        zc = full_cols & ~a.bits[r] & ~(1 << c)
        rm = 0
        for x in _bits(zr):
            rm |= row_mask[x]
        cm = 0
        for y in _bits(zc):
            cm |= col_mask[y]
        compat.append(rm & cm)
    order = sorted(range(len(verts)), key=lambda i: (-compat[i].bit_count(), i))
    pos = {v: i for i, v in enumerate(order)}
    adj = []
    for v in order:
        m = 0
        for u in _bits(compat[v]):
            m |= 1 << pos[u]
        adj.append(m)
    # greedy start: take vertices in order while compatible
    greedy, cand = [], (1 << len(adj)) - 1
    while cand:
        low = cand & -cand
        v = low.bit_length() - 1
        greedy.append(v)
        cand &= adj[v]
    clique = _max_clique(adj, greedy)
    pairs = sorted(verts[order[v]] for v in clique)
    w = MimWitness(tuple(r for r, _ in pairs), tuple(c for _, c in pairs))
    return len(pairs), w


# ------------------------------------------------------------------ him


def him_exact(a: BoolMatrix, caps: Caps | None = None) -> tuple[int, HimWitness]:
    """Largest triangular submatrix with unit diagonal.

    Appending a pair ``(row, col)`` only requires ``col`` to be zero on every
    earlier row, so the search state is the set of still-admissible columns.
    """
    caps = caps or get_caps()
    caps.check("mim_entries", a.entries, "him_exact")
    rep: dict[int, int] = {}
    for r, b in enumerate(a.bits):
        if b:
            rep.setdefault(b, r)
    rows = list(rep.items())
    memo: dict[int, tuple[int, tuple[int, int] | None]] = {}

    def best(C: int) -> int:
        if C in memo:
            return memo[C][0]
        cands: dict[int, int] = {}
        for b, r in rows:
            x = b & C
            if x and x not in cands:
                cands[x] = r
        keys = sorted(cands, key=int.bit_count)
        minimal = []
        for x in keys:
            if not any(y & x == y for y in minimal):
                minimal.append(x)
        val, arg = 0, None
        for x in minimal:
            rest = C & ~x
            if 1 + rest.bit_count() <= val:
                continue
            v = 1 + best(rest)
            if v > val:
                val, arg = v, (cands[x], x)
        memo[C] = (val, arg)
        return val

    full = (1 << a.cols) - 1
    value = best(full)
    rs, cs = [], []
    C = full
    while memo[C][1] is not None:
        r, x = memo[C][1]
        rs.append(r)
        cs.append((x & -x).bit_length() - 1)
        C &= ~x
    w = HimWitness(tuple(rs), tuple(cs))
    assert len(w) == value and is_him_witness(a, w)
    return value, w


# ------------------------------------------------------------------ witness constructions


def him_to_mim2_witness(a: BoolMatrix, w: HimWitness) -> MimWitness:
    """Induced matching of size |w| in the Kronecker square: pair sequence j with i+1-j."""
    if not is_him_witness(a, w):
        raise InvalidWitness("input is not a half-induced matching of A")
    i = len(w)
    rows = tuple(encode_tuple((w.rows[j], w.rows[i - 1 - j]), a.rows) for j in range(i))
    cols = tuple(encode_tuple((w.cols[j], w.cols[i - 1 - j]), a.cols) for j in range(i))
    out = MimWitness(rows, cols)
    if not is_mim_witness(a, out, power=2):
        raise InvalidWitness("constructed square witness failed validation")
    return out


@dataclass
class BalancedWitness:
    witness: MimWitness
    power: int
    checked_pairs: int
    valid: bool


def balanced_power_witness(
    a: BoolMatrix,
    w: HimWitness,
    s: int,
    *,
    samples: int = 256,
    full: bool = False,
    seed: int = 0,
    caps: Caps | None = None,
) -> BalancedWitness:
    """Induced matching in ``A^{(x) i*s}`` from sequences using each witness pair ``s`` times."""
    caps = caps or get_caps()
    if not is_him_witness(a, w):
        raise InvalidWitness("input is not a half-induced matching of A")
    if s < 1:
        raise ValueError("s must be >= 1")
    i = len(w)
    k = i * s
    caps.check("tuple_arity", k, "balanced witness arity")
    count = math.factorial(k) // math.factorial(s) ** i
    caps.check("witness_count", count, "balanced witness size")
    rows, cols = [], []
    for seq in multiset_permutations([j for j in range(i) for _ in range(s)]):
        rows.append(encode_tuple([w.rows[j] for j in seq], a.rows))
        cols.append(encode_tuple([w.cols[j] for j in seq], a.cols))
    out = MimWitness(tuple(rows), tuple(cols))
    if full:
        return BalancedWitness(out, k, count * count, is_mim_witness(a, out, power=k))
    rng = Xoshiro256(seed)
    valid = True
    for _ in range(samples):
        x, y = rng.below(count), rng.below(count)
        if _power_entry(a, k, rows[x], cols[y]) != (x == y):
            valid = False
            break
    return BalancedWitness(out, k, samples, valid)


def has_zero_block(a: BoolMatrix, size: int) -> bool:
    """Whether some ``size x size`` submatrix is entirely zero."""
    if size <= 0:
        return True
    if size > a.rows or size > a.cols:
        return False
    full = (1 << a.cols) - 1
    zeros = [full & ~b for b in a.bits]

    def rec(start: int, count: int, mask: int) -> bool:
        if count == size:
            return True
        for r in range(start, a.rows - (size - count) + 1):
            nm = mask & zeros[r]
            if nm.bit_count() >= size and rec(r + 1, count + 1, nm):
                return True
        return False

    return rec(0, 0, full)


@dataclass
class SeparationInstance:
    h: int
    seed: int
    matrix: BoolMatrix
    witness: MimWitness
    witness_valid: bool
    block_size: int
    zero_block_free: bool
    attempts: int

    def to_json(self) -> dict:
        return {
            "h": self.h,
            "seed": self.seed,
            "matrix": [''.join(str(x) for x in r) for r in self.matrix.to_lists()],
            "witness": self.witness.to_json(),
            "witness_size": len(self.witness),
            "witness_valid": self.witness_valid,
            "zero_block": {
                "block_size": self.block_size,
                "free": self.zero_block_free,
                "attempts": self.attempts,
            },
        }


def separation_instance(h: int, seed: int, retries: int = 32) -> SeparationInstance:
    """Symmetric ``2h x 2h`` matrix ``[[M, M'], [M', M]]`` with an h-matching in its square.

    ``M`` is random symmetric with unit diagonal, ``M'`` flips its off-diagonal
    entries, so the Hadamard product of ``M`` and ``M'`` is the identity and sits
    inside ``A (x) A`` on rows ``(i, i)`` and columns ``(j, h + j)``.
    """
    if h < 2:
        raise ValueError("h must be >= 2")
    rng = Xoshiro256(seed)
    block = 2 * math.ceil(2 * math.log2(h))
    best = None
    for attempt in range(1, retries + 1):
        m = [[0] * h for _ in range(h)]
        for i in range(h):
            m[i][i] = 1
            for j in range(i):
                m[i][j] = m[j][i] = rng.next_u64() >> 63
        mc = [[1 if i == j else 1 - m[i][j] for j in range(h)] for i in range(h)]
        rows = [m[i] + mc[i] for i in range(h)] + [mc[i] + m[i] for i in range(h)]
        a = BoolMatrix.from_lists(rows)
        n = 2 * h
        w = MimWitness(tuple(i * n + i for i in range(h)), tuple(j * n + h + j for j in range(h)))
        free = not has_zero_block(a, block)
        best = SeparationInstance(h, seed, a, w, is_mim_witness(a, w, power=2), block, free, attempt)
        if free:
            return best
    raise RetryLimit(f"zero-block clause failed {retries} times", best=best, attempts=retries)


# ------------------------------------------------------------------ biclique covers


@dataclass(frozen=True)
class BicliqueCover:
    """Bicliques covering the zero entries of a matrix (rows = left copies, cols = right copies)."""

    bicliques: tuple[tuple[frozenset, frozenset], ...]
    r: int
    exact: bool = True

    def memberships(self, rows: int, cols: int) -> tuple[list[list[int]], list[list[int]]]:
        sigma = [[] for _ in range(rows)]
        delta = [[] for _ in range(cols)]
        for t, (left, right) in enumerate(self.bicliques):
            for u in sorted(left):
                sigma[u].append(t)
            for v in sorted(right):
                delta[v].append(t)
        return sigma, delta

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "exact": self.exact,
            "bicliques": [
                {"left": sorted(x + 1 for x in l), "right": sorted(x + 1 for x in rr)}
                for l, rr in self.bicliques
            ],
        }


def is_valid_cover(m: BoolMatrix, cover: BicliqueCover) -> bool:
    covered = set()
    for left, right in cover.bicliques:
        for u in left:
            for v in right:
                if m[u, v]:
                    return False
                covered.add((u, v))
    zeros = {(u, v) for u in range(m.rows) for v in range(m.cols) if not m[u, v]}
    if covered != zeros:
        return False
    sigma, delta = cover.memberships(m.rows, m.cols)
    return max((len(x) for x in sigma + delta), default=0) <= cover.r


def _cover_from_labels(row_labels, col_labels, exact) -> BicliqueCover:
    ids: dict[int, int] = {}
    for lab in row_labels + col_labels:
        for t in _bits(lab):
            ids.setdefault(t, len(ids))
    groups = {}
    for kind, labels in ((0, row_labels), (1, col_labels)):
        for v, lab in enumerate(labels):
            for t in _bits(lab):
                groups.setdefault(ids[t], (set(), set()))[kind].add(v)
    bicliques = tuple(
        (frozenset(l), frozenset(r)) for _, (l, r) in sorted(groups.items()) if l and r
    )
    cover = BicliqueCover(bicliques, 0, exact)
    sigma, delta = cover.memberships(len(row_labels), len(col_labels))
    return BicliqueCover(bicliques, max((len(x) for x in sigma + delta), default=0), exact)


class _Budget(Exception):
    pass


def _exact_cover(m: BoolMatrix, r: int, budget: int) -> BicliqueCover | None:
    """Search label sets (size <= r) per vertex so that labels meet exactly on zero cells."""
    R, C = m.rows, m.cols
    full_c, full_r = (1 << C) - 1, (1 << R) - 1
    zr = [full_c & ~b for b in m.bits]
    mt = m.transpose()
    zc = [full_r & ~b for b in mt.bits]
    verts = sorted(
        [(0, i) for i in range(R)] + [(1, j) for j in range(C)],
        key=lambda x: -(zr[x[1]] if x[0] == 0 else zc[x[1]]).bit_count(),
    )
    # interleave sides so constraints appear early
    left = [v for v in verts if v[0] == 0]
    right = [v for v in verts if v[0] == 1]
    order = []
    while left or right:
        if left:
            order.append(left.pop(0))
        if right:
            order.append(right.pop(0))
    labels = {0: [None] * R, 1: [None] * C}
    placed_rows = placed_cols = 0
    nodes = 0

    def rec(idx: int, used: int) -> bool:
        nonlocal nodes, placed_rows, placed_cols
        nodes += 1
        if nodes > budget:
            raise _Budget
        if idx == len(order):
            return True
        side, x = order[idx]
        if side == 0:
            zeros, placed, other = zr[x], placed_cols, labels[1]
            future_zero = bool(zeros & ~placed_cols)
        else:
            zeros, placed, other = zc[x], placed_rows, labels[0]
            future_zero = bool(zeros & ~placed_rows)
        required = [other[y] for y in _bits(zeros & placed)]
        forbidden = 0
        for y in _bits(placed & ~zeros):
            forbidden |= other[y]
        if any(req & ~forbidden == 0 for req in required):
            return False
        options = []
        if not zeros:
            options = [(0, used)]
        else:
            allowed = _bits(used & ~forbidden)
            nxt = used.bit_length()
            for size in range(0, r + 1):
                for combo in combinations(allowed, size):
                    s = 0
                    for t in combo:
                        s |= 1 << t
                    if not all(s & req for req in required):
                        continue
                    for extra in range(0, r - size + 1) if future_zero else (0,):
                        if size + extra == 0:
                            continue
                        new = 0
                        for e in range(extra):
                            new |= 1 << (nxt + e)
                        options.append((s | new, used | new))
        for lab, new_used in options:
            labels[side][x] = lab
            if side == 0:
                placed_rows |= 1 << x
            else:
                placed_cols |= 1 << x
            ok = rec(idx + 1, new_used)
            if side == 0:
                placed_rows &= ~(1 << x)
            else:
                placed_cols &= ~(1 << x)
            if ok:
                return True
            labels[side][x] = None
        return False

    if not rec(0, 0):
        return None
    return _cover_from_labels(labels[0], labels[1], True)


def _greedy_cover(m: BoolMatrix) -> BicliqueCover:
    """Best of row stars, column stars and greedy maximal rectangles."""
    R, C = m.rows, m.cols
    full_c, full_r = (1 << C) - 1, (1 << R) - 1
    zr = [full_c & ~b for b in m.bits]
    zc = [full_r & ~b for b in m.transpose().bits]
    options = []
    options.append(tuple((frozenset([i]), frozenset(_bits(zr[i]))) for i in range(R) if zr[i]))
    options.append(tuple((frozenset(_bits(zc[j])), frozenset([j])) for j in range(C) if zc[j]))
    uncovered = {(i, j) for i in range(R) for j in _bits(zr[i])}
    rects = []
    while uncovered:
        i, j = min(uncovered)
        cols = zr[i]
        rows = full_r
        for c in _bits(cols):
            rows &= zc[c]
        rects.append((frozenset(_bits(rows)), frozenset(_bits(cols))))
        uncovered -= {(x, y) for x in _bits(rows) for y in _bits(cols)}
    options.append(tuple(rects))
    best = None
    for bicliques in options:
        cover = BicliqueCover(bicliques, 0, False)
        sigma, delta = cover.memberships(R, C)
        r = max((len(x) for x in sigma + delta), default=0)
        if best is None or r < best.r:
            best = BicliqueCover(bicliques, r, False)
    return best


def cover_zeros(
    m: BoolMatrix, r_max: int | None = None, exact: bool | None = None, caps: Caps | None = None
) -> BicliqueCover:
    """Local biclique cover of the zero entries of ``m`` with few bicliques per vertex.

    Exact mode returns a cover with the minimum ``r <= r_max`` (NotFound if none);
    greedy mode (large matrices, or exact search out of budget) returns any valid cover.
    """
    caps = caps or get_caps()
    if r_max is None:
        r_max = max(m.rows, m.cols)
    if all(b == (1 << m.cols) - 1 for b in m.bits):
        return BicliqueCover((), 0, True)
    if exact is None:
        exact = max(m.rows, m.cols) <= caps.cov_exact_vertices
    if exact:
        try:
            for r in range(1, r_max + 1):
                found = _exact_cover(m, r, caps.cov_nodes)
                if found is not None:
                    return found
        except _Budget:
            pass
        else:
            raise NotFound(f"no cover with r <= {r_max}")
    cover = _greedy_cover(m)
    if cover.r > r_max:
        raise NotFound(f"greedy cover needs r = {cover.r} > {r_max}")
    return cover


def cov_search(h: Graph, r_max: int | None = None, caps: Caps | None = None) -> BicliqueCover:
    """Cover of the bipartite complement of H*, i.e. of the zero entries of ``A_H``."""
    return cover_zeros(h.adjacency_matrix(), r_max, caps=caps)


def support_matrix_from_zero_cover(m: BoolMatrix, cover: BicliqueCover, p: int = DEFAULT_PRIME) -> FieldMatrix:
    """Entry ``(u, v)`` is the product over ``i, j <= r`` of ``sigma_i(u) - delta_j(v)`` mod p.

    ``sigma_i(u)`` is the (1-based) index of the i-th biclique containing row ``u``,
    padded with ``s + 1``; columns use ``delta`` padded with ``s + 2``.
    """
    if not is_valid_cover(m, cover):
        raise InvalidWitness("cover does not cover the zero entries of the matrix")
    s, r = len(cover.bicliques), cover.r
    sigma, delta = cover.memberships(m.rows, m.cols)
    sig = [[t + 1 for t in x] + [s + 1] * (r - len(x)) for x in sigma]
    dlt = [[t + 1 for t in x] + [s + 2] * (r - len(x)) for x in delta]
    rows = []
    for u in range(m.rows):
        row = []
        for v in range(m.cols):
            val = 1
            for a in sig[u]:
                for b in dlt[v]:
                    val = val * (a - b) % p
            row.append(val)
        rows.append(row)
    out = FieldMatrix.from_rows(rows, p)
    if not out.same_support(m):
        raise SupportMismatch(f"reduction mod {p} changed the support; retry with another prime")
    return out


def support_matrix_from_cover(h: Graph, cover: BicliqueCover, p: int = DEFAULT_PRIME) -> FieldMatrix:
    return support_matrix_from_zero_cover(h.adjacency_matrix(), cover, p)


def clique_support_matrix(h: int, p: int = DEFAULT_PRIME) -> FieldMatrix:
    """``B[i][j] = i - j``: a rank-2 matrix with the support of ``J - I``."""
    return FieldMatrix.from_rows([[i - j for j in range(h)] for i in range(h)], p)


def is_clique_pattern(a: BoolMatrix) -> bool:
    full = (1 << a.cols) - 1
    return a.rows == a.cols and all(b == full & ~(1 << i) for i, b in enumerate(a.bits))


@lru_cache(maxsize=256)
def best_support_matrix(a: BoolMatrix, p: int = DEFAULT_PRIME, caps: Caps | None = None):
    """Lowest-rank same-support matrix among the built-in constructions.

    Returns ``(matrix, source, rank)``.
    """
    caps = caps or get_caps()
    cands = [("adjacency", FieldMatrix.from_bool(a, p))]
    if is_clique_pattern(a) and a.rows >= 2:
        cands.append(("clique", clique_support_matrix(a.rows, p)))
    try:
        cover = cover_zeros(a, caps=caps)
        cands.append(("cover", support_matrix_from_zero_cover(a, cover, p)))
    except (NotFound, SupportMismatch):
        pass
    scored = [(rank(b), i, tag, b) for i, (tag, b) in enumerate(cands)]
    r, _, tag, b = min(scored)
    return b, tag, r


# ------------------------------------------------------------------ mimsup bracket


def param_matrix(h: Graph) -> BoolMatrix:
    """``A_H`` for non-bipartite or edgeless H, a bi-adjacency matrix otherwise."""
    if h.m == 0 or not h.is_bipartite:
        return h.adjacency_matrix()
    return h.biadjacency()


def _root(m: int, k: int) -> float:
    if m <= 0:
        return 0.0
    r = round(m ** (1.0 / k))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**k == m:
            return float(cand)
    return m ** (1.0 / k)


@dataclass
class MimsupBracket:
    lower: float
    upper: float
    evidence: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "evidence": self.evidence}


def mimsup_bracket(
    h: Graph | BoolMatrix,
    max_power: int = 2,
    fields: Sequence[int] = (2, DEFAULT_PRIME),
    caps: Caps | None = None,
) -> MimsupBracket:
    """Certified interval around mimsup; never claims exactness."""
    caps = caps or get_caps()
    a = h if isinstance(h, BoolMatrix) else param_matrix(h)
    ev: list[dict] = []

    def add(kind, source, value, note=None, **extra):
        item = {"bound": kind, "source": source, "value": value, **extra}
        if note:
            item["note"] = note
        ev.append(item)

    try:
        him, _ = him_exact(a, caps)
        add("lower", "him", float(him))
    except Exception as exc:  # caps only
        add("skipped", "him", None, str(exc))
    for k in range(1, max_power + 1):
        try:
            caps.check("mim_entries", a.entries**k, f"mim of power {k}")
            m, _ = mim_exact(kron_power(a, k, caps), caps)
            add("lower", "mim_power", _root(m, k), k=k, mim=m)
        except Exception as exc:
            add("skipped", "mim_power", None, str(exc), k=k)
    add("upper", "dimension", float(min(a.rows, a.cols)))
    for p in fields:
        add("upper", "rank_of_matrix", float(rank(FieldMatrix.from_bool(a, p))), field=p)
    if is_clique_pattern(a) and a.rows >= 2:
        add("upper", "clique_builtin", float(rank(clique_support_matrix(a.rows))), field=DEFAULT_PRIME)
    try:
        cover = cover_zeros(a, caps=caps)
        r = cover.r
        add("upper", "cover_bound", float((r + 1) ** r), r=r, exact_cover=cover.exact)
        for p in fields:
            try:
                b = support_matrix_from_zero_cover(a, cover, p)
                add("upper", "cover_matrix_rank", float(rank(b)), field=p, r=r)
            except SupportMismatch as exc:
                add("skipped", "cover_matrix_rank", None, str(exc), field=p)
    except NotFound as exc:
        add("skipped", "cover_bound", None, str(exc))
    lows = [e["value"] for e in ev if e["bound"] == "lower"]
    ups = [e["value"] for e in ev if e["bound"] == "upper"]
    lower = max(lows, default=0.0)
    upper = min(ups)
    return MimsupBracket(lower, upper, ev)


def prague_dim_upper(h: Graph, caps: Caps | None = None) -> tuple[int, BicliqueCover]:
    """Upper bound ``r**2 + 2`` on the Prague dimension of a bipartite graph."""
    if not h.is_bipartite:
        raise NotApplicable("Prague dimension bound needs a bipartite graph")
    if h.m == 0:
        # bipartite complement relative to the BFS sides
        parts = h.bipartition()
        b = h.adjacency_matrix().submatrix(*parts) if parts[1] else BoolMatrix.ones(1, 1)
    else:
        b = h.biadjacency()
    cover = cover_zeros(b, caps=caps)
    return cover.r**2 + 2, cover
