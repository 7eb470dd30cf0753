"""Exact linear algebra over prime fields GF(p).

Small dense matrices live in :class:`FieldMatrix` (tuples of Python ints).
Row-basis extraction for Kronecker-power rows is vectorized with numpy; it uses
int64 arithmetic when ``p < 2**31`` (products stay below 2**62) and Python-int
object arrays otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from sympy import isprime

from homcut.caps import Caps, get_caps
from homcut.errors import ParseError

DEFAULT_PRIME = (1 << 61) - 1
FAST_PRIME = (1 << 31) - 1


@lru_cache(maxsize=64)
def _checked_prime(p: int) -> int:
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    return p


@dataclass(frozen=True)
class FieldMatrix:
    p: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        _checked_prime(self.p)
        width = len(self.entries[0]) if self.entries else 0
        for row in self.entries:
            if len(row) != width:
                raise ValueError("ragged matrix")
            for x in row:
                if not 0 <= x < self.p:
                    raise ValueError(f"entry {x} not reduced mod {self.p}")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], p: int = DEFAULT_PRIME) -> "FieldMatrix":
        return cls(p, tuple(tuple(int(x) % p for x in r) for r in rows))

    @classmethod
    def from_bool(cls, a, p: int = DEFAULT_PRIME) -> "FieldMatrix":
        return cls(p, tuple(tuple(r) for r in a.to_lists()))

    @classmethod
    def identity(cls, n: int, p: int = DEFAULT_PRIME) -> "FieldMatrix":
        return cls(p, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def support(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(x != 0) for x in r) for r in self.entries)

    def same_support(self, a) -> bool:
        """True iff the nonzero pattern equals the 0/1 matrix ``a``."""
        return a.rows == self.rows and a.cols == self.cols and [list(r) for r in self.support()] == a.to_lists()

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.p != other.p or self.cols != other.rows:
            raise ValueError("incompatible matrices")
        p = self.p
        cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return FieldMatrix(
            p,
            tuple(tuple(sum(a * b for a, b in zip(r, c)) % p for c in cols) for r in self.entries),
        )

    def kron(self, other: "FieldMatrix") -> "FieldMatrix":
        p = self.p
        return FieldMatrix(
            p,
            tuple(
                tuple(a * b % p for a in ra for b in rb)
                for ra in self.entries
                for rb in other.entries
            ),
        )


@dataclass(frozen=True)
class LRFactorization:
    L: FieldMatrix
    R: FieldMatrix

    @property
    def r(self) -> int:
        return self.L.cols


def rref(m: FieldMatrix) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; first nonzero pivot, row swaps only."""
    p = m.p
    a = [list(r) for r in m.entries]
    pivots: list[int] = []
    row = 0
    for col in range(m.cols):
        piv = next((i for i in range(row, m.rows) if a[i][col]), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv = pow(a[row][col], p - 2, p)
        a[row] = [x * inv % p for x in a[row]]
        for i in range(m.rows):
            if i != row and a[i][col]:
                f = a[i][col]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[row])]
        pivots.append(col)
        row += 1
        if row == m.rows:
            break
    return a, pivots


def rank(m: FieldMatrix) -> int:
    return len(rref(m)[1])


def lr_factor(m: FieldMatrix) -> LRFactorization:
    """``m = L @ R`` with inner dimension ``rank(m)``.

    ``L`` holds the pivot columns of ``m`` and ``R`` the nonzero rows of its RREF.
    """
    a, pivots = rref(m)
    r = len(pivots)
    L = FieldMatrix(m.p, tuple(tuple(row[c] for c in pivots) for row in m.entries))
    R = FieldMatrix(m.p, tuple(tuple(a[i]) for i in range(r)))
    if r == 0:
        # keep shapes meaningful for a zero matrix: h x 0 and 0 x h
        L = FieldMatrix(m.p, tuple(() for _ in range(m.rows)))
    return LRFactorization(L, R)


def in_row_span(rows: Sequence[Sequence[int]], v: Sequence[int], p: int) -> bool:
    """Whether ``v`` is a GF(p)-combination of ``rows`` (used to check bases)."""
    if not rows:
        return not any(x % p for x in v)
    base = rank(FieldMatrix.from_rows(rows, p))
    return rank(FieldMatrix.from_rows(list(rows) + [list(v)], p)) == base


def _kron_rows(L: np.ndarray, tuples: np.ndarray, p: int) -> np.ndarray:
    """Rows of L^{(x)ell} for the given tuples: entry y is prod_i L[x_i, y_i]."""
    out = L[tuples[:, 0]]
    for i in range(1, tuples.shape[1]):
        nxt = L[tuples[:, i]]
        out = (out[:, :, None] * nxt[:, None, :]).reshape(out.shape[0], -1) % p
    return out


def streamed_row_basis(
    L: FieldMatrix,
    tuples: Sequence[Sequence[int]],
    ell: int,
    caps: Caps | None = None,
) -> list[tuple[int, ...]]:
    """Tuples whose rows of ``L^{(x)ell}`` form a basis of the span of all input rows.

    Rows are generated a chunk at a time, reduced against the basis found so far,
    and kept greedily in input order, so the answer is the lexicographically
    earliest basis with respect to that order.
    """
    caps = caps or get_caps()
    if ell < 1:
        raise ValueError("ell must be >= 1")
    width = L.cols**ell
    caps.check("rowbasis_width", width, "row width rank^ell")
    tuples = [tuple(t) for t in tuples]
    if not tuples or width == 0:
        return []
    for t in tuples:
        if len(t) != ell or not all(0 <= x < L.rows for x in t):
            raise ValueError(f"tuple {t} does not match arity {ell} / alphabet {L.rows}")
    p = L.p
    dtype = np.int64 if p < (1 << 31) else object
    Lnp = np.array(L.entries, dtype=dtype).reshape(L.rows, L.cols)
    chunk = max(1, caps.rowbasis_cells // width)
    basis = np.zeros((0, width), dtype=dtype)
    pivots: list[int] = []
    chosen: list[tuple[int, ...]] = []
    for start in range(0, len(tuples), chunk):
        if len(pivots) == width:
            break
        block = tuples[start : start + chunk]
        R = _kron_rows(Lnp, np.array(block, dtype=np.int64), p)
        for j, col in enumerate(pivots):
            f = R[:, col]
            if f.any():
                R = (R - f[:, None] * basis[j][None, :]) % p
        new_rows = []
        for t in range(len(block)):
            nz = np.flatnonzero(R[t])
            if nz.size == 0:
                continue
            col = int(nz[0])
            inv = pow(int(R[t, col]), p - 2, p)
            row = (R[t] * inv) % p
            if t + 1 < len(block):
                f = R[t + 1 :, col]
                if f.any():
                    R[t + 1 :] = (R[t + 1 :] - f[:, None] * row[None, :]) % p
            pivots.append(col)
            new_rows.append(row)
            chosen.append(block[t])
        if new_rows:
            basis = np.vstack([basis, np.array(new_rows, dtype=dtype)])
    return chosen


# ---------------------------------------------------------------- file I/O


def parse_field_matrix(text: str) -> FieldMatrix:
    lines = [
        (n, l.strip())
        for n, l in enumerate(text.splitlines(), start=1)
        if l.strip() and not l.strip().startswith("#")
    ]
    if not lines:
        raise ParseError("empty matrix file", 1)
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 3:
        raise ParseError("expected '<rows> <cols> <p>'", lineno)
    try:
        rows, cols, p = (int(x) for x in parts)
    except ValueError:
        raise ParseError("header values must be integers", lineno) from None
    if not isprime(p):
        raise ParseError(f"modulus {p} is not prime", lineno)
    body = lines[1:]
    if len(body) != rows:
        raise ParseError(f"expected {rows} rows, found {len(body)}", body[-1][0] if body else lineno)
    data = []
    for lineno, line in body:
        try:
            vals = [int(x) for x in line.split()]
        except ValueError:
            raise ParseError("entries must be integers", lineno) from None
        if len(vals) != cols:
            raise ParseError(f"expected {cols} entries", lineno)
        data.append(vals)
    return FieldMatrix.from_rows(data, p)


def format_field_matrix(m: FieldMatrix) -> str:
    out = [f"{m.rows} {m.cols} {m.p}"]
    out += [" ".join(str(x) for x in r) for r in m.entries]
    return "\n".join(out) + "\n"


def read_field_matrix(path) -> FieldMatrix:
    return parse_field_matrix(Path(path).read_text(encoding="utf-8"))


def write_field_matrix(m: FieldMatrix, path) -> None:
    Path(path).write_text(format_field_matrix(m), encoding="utf-8")
