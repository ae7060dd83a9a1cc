"""Decorated matrices (A, Delta): the labels of every basis in this package.

Indices are 1-based throughout, including in serialized form.  A matrix may
be rectangular (n rows, m columns); the square case is the Schur algebra, the
n x d case with unit column sums labels the bimodule.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

Cell = tuple  # (i, j), 1-based


def _as_delta(delta) -> tuple:
    cells = tuple(sorted((int(i), int(j)) for i, j in delta))
    return cells


@dataclass(frozen=True)
class DecoratedMatrix:
    a: tuple
    delta: tuple = ()

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.a)
        object.__setattr__(self, "a", rows)
        object.__setattr__(self, "delta", _as_delta(self.delta))

    @classmethod
    def make(cls, a: Sequence[Sequence[int]], delta=()) -> "DecoratedMatrix":
        return cls(tuple(tuple(r) for r in a), tuple(delta))

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def m(self) -> int:
        return len(self.a[0]) if self.a else 0

    def __getitem__(self, ij) -> int:
        i, j = ij
        return self.a[i - 1][j - 1]

    def entry(self, i: int, j: int) -> int:
        """Entry a_ij, 0 outside the matrix."""
        if 1 <= i <= self.n and 1 <= j <= self.m:
            return self.a[i - 1][j - 1]
        return 0

    @cached_property
    def ro(self) -> tuple:
        return tuple(sum(r) for r in self.a)

    @cached_property
    def co(self) -> tuple:
        return tuple(sum(self.a[i][j] for i in range(self.n)) for j in range(self.m))

    @cached_property
    def total(self) -> int:
        return sum(self.ro)

    def with_delta(self, delta) -> "DecoratedMatrix":
        return DecoratedMatrix(self.a, tuple(delta))

    def plus(self, changes: dict, delta=None) -> "DecoratedMatrix":
        """Add {(i, j): increment} to the matrix; keep or replace the decoration."""
        rows = [list(r) for r in self.a]
        for (i, j), x in changes.items():
            rows[i - 1][j - 1] += x
        return DecoratedMatrix(tuple(map(tuple, rows)), self.delta if delta is None else tuple(delta))

    def row_of(self, i: int):
        """The decorated cell in row i, or None."""
        for c in self.delta:
            if c[0] == i:
                return c
        return None

    def to_json(self) -> dict:
        return {"n": self.n, "a": [list(r) for r in self.a], "delta": [list(c) for c in self.delta]}

    @classmethod
    def from_json(cls, obj: dict) -> "DecoratedMatrix":
        return cls.make(obj["a"], [tuple(c) for c in obj.get("delta", [])])

    def __str__(self) -> str:
        rows = "; ".join(" ".join(str(x) for x in r) for r in self.a)
        dec = ",".join(f"({i},{j})" for i, j in self.delta)
        return f"[{rows}]{{{dec}}}"

    def __lt__(self, other: "DecoratedMatrix") -> bool:
        return (self.a, self.delta) < (other.a, other.delta)


def parse_decorated(text: str) -> DecoratedMatrix:
    """'[1 1; 0 2]{(1,2)}' (the str() form) or '1,1;0,2|1,2' (rows by ';', cells after '|')."""
    s = text.strip()
    if s.startswith("{"):
        import json
        return DecoratedMatrix.from_json(json.loads(s))
    if s.startswith("["):
        body, _, dec = s[1:].partition("]")
        rows = [[int(x) for x in r.split()] for r in body.split(";")]
        dec = dec.strip().strip("{}").replace(" ", "")
        cells = [tuple(int(x) for x in c.strip("()").split(",")) for c in dec.split("),(") if c]
        return DecoratedMatrix.make(rows, cells)
    body, _, dec = s.partition("|")
    rows = [[int(x) for x in r.split(",")] for r in body.split(";")]
    cells = [tuple(int(x) for x in c.split(",")) for c in dec.split(";") if c]
    return DecoratedMatrix.make(rows, cells)


def diagonal(entries: Sequence[int], delta=()) -> DecoratedMatrix:
    k = len(entries)
    return DecoratedMatrix(tuple(tuple(entries[i] if i == j else 0 for j in range(k)) for i in range(k)), tuple(delta))


def identity(k: int) -> DecoratedMatrix:
    return diagonal([1] * k)


def is_antichain(delta: Sequence[Cell]) -> bool:
    """Rows strictly increasing and columns strictly decreasing."""
    cells = sorted(delta)
    for (i1, j1), (i2, j2) in zip(cells, cells[1:]):
        if not (i1 < i2 and j1 > j2):
            return False
    return True


def validate(m: DecoratedMatrix, mode: str = "xi") -> tuple:
    """Return (ok, reason).  mode is 'xi' or 'xi_tilde'."""
    if mode not in ("xi", "xi_tilde"):
        raise ValueError(f"unknown mode {mode!r}")
    if any(len(r) != m.m for r in m.a):
        return False, "ragged"
    for i in range(1, m.n + 1):
        for j in range(1, m.m + 1):
            x = m[i, j]
            if x < 0 and not (mode == "xi_tilde" and i == j):
                return False, "negative-entry"
    if not is_antichain(m.delta):
        return False, "delta-not-staircase"
    for i, j in m.delta:
        if not (1 <= i <= m.n and 1 <= j <= m.m):
            return False, "delta-out-of-range"
        if m[i, j] <= 0 and not (mode == "xi_tilde" and i == j):
            return False, "delta-on-zero-entry"
    return True, "ok"


def is_valid(m: DecoratedMatrix, mode: str = "xi") -> bool:
    return validate(m, mode)[0]


def ro_co(m: DecoratedMatrix) -> tuple:
    return m.ro, m.co


def cell_leq_delta(cell: Cell, delta: Sequence[Cell]) -> bool:
    i, j = cell
    return any(i <= k and j <= l for k, l in delta)


def delta_leq(d1: Sequence[Cell], d2: Sequence[Cell]) -> bool:
    return all(cell_leq_delta(c, d2) for c in d1)


def down_set(m: DecoratedMatrix, delta=None) -> list:
    """Cells (i, j) of m with {(i, j)} <= delta."""
    delta = m.delta if delta is None else delta
    return [(i, j) for i in range(1, m.n + 1) for j in range(1, m.m + 1) if cell_leq_delta((i, j), delta)]


def decoration_weight(m: DecoratedMatrix, delta=None) -> int:
    """Sum of a_ij over cells below the decoration."""
    return sum(m[c] for c in down_set(m, delta))


def blm_excess(m: DecoratedMatrix) -> int:
    """Sum over i >= k, j < l of a_ij a_kl."""
    cells = [(i, j, m[i, j]) for i in range(1, m.n + 1) for j in range(1, m.m + 1) if m[i, j]]
    tot = 0
    for i, j, x in cells:
        for k, l, y in cells:
            if i >= k and j < l:
                tot += x * y
    return tot


def r_stat(m: DecoratedMatrix) -> int:
    ro = m.ro
    s = sum(ro)
    return (s * s - sum(x * x for x in ro)) // 2


def dim_stats(m: DecoratedMatrix) -> tuple:
    """(d(A, Delta), r(A, Delta)): orbit dimension and dimension of the first flag variety."""
    ok, why = validate(m, "xi")
    if not ok:
        raise ValueError(f"invalid decorated matrix: {why}")
    cells = [(i, j, m[i, j]) for i in range(1, m.n + 1) for j in range(1, m.m + 1) if m[i, j]]
    d = 0
    for i, j, x in cells:
        for k, l, y in cells:
            if i < k or j < l:
                d += x * y
    return d + decoration_weight(m), r_stat(m)


def normalization_exponent(m: DecoratedMatrix) -> int:
    """d(A, Delta) - r(A, Delta); valid for integer (possibly negative) diagonals too."""
    return blm_excess(m) + decoration_weight(m)


def corner_leq(a1: DecoratedMatrix, a2: DecoratedMatrix) -> bool:
    """Corner-sum comparison of the underlying matrices (ignores decorations)."""
    n = a1.n
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i < j:
                s1 = sum(a1[r, s] for r in range(1, i + 1) for s in range(j, n + 1))
                s2 = sum(a2[r, s] for r in range(1, i + 1) for s in range(j, n + 1))
            elif i > j:
                s1 = sum(a1[r, s] for r in range(i, n + 1) for s in range(1, j + 1))
                s2 = sum(a2[r, s] for r in range(i, n + 1) for s in range(1, j + 1))
            else:
                continue
            if s1 > s2:
                return False
    return True


def decorated_leq(m1: DecoratedMatrix, m2: DecoratedMatrix) -> bool:
    """(A', Delta') <= (A, Delta) for m1 = (A', Delta'), m2 = (A, Delta)."""
    if m1.ro != m2.ro or m1.co != m2.co:
        raise ValueError("decorated_leq needs equal row and column sums")
    if m1.a == m2.a:
        return delta_leq(m1.delta, m2.delta)
    return corner_leq(m1, m2)


def transpose(m: DecoratedMatrix) -> DecoratedMatrix:
    a = tuple(tuple(m.a[i][j] for i in range(m.n)) for j in range(m.m))
    return DecoratedMatrix(a, tuple((j, i) for i, j in m.delta))


def antichains(cells: Sequence[Cell]) -> Iterator[tuple]:
    """All staircase subsets of the given cells, sorted by row, including the empty one."""
    cells = sorted(cells)

    def rec(start, last):
        yield ()
        for idx in range(start, len(cells)):
            i, j = cells[idx]
            if last is None or (i > last[0] and j < last[1]):
                for rest in rec(idx + 1, (i, j)):
                    yield ((i, j),) + rest

    yield from rec(0, None)


def decorations(a: Sequence[Sequence[int]]) -> list:
    n, m = len(a), len(a[0]) if a else 0
    pos = [(i + 1, j + 1) for i in range(n) for j in range(m) if a[i][j] > 0]
    return sorted(antichains(pos))


def compositions(total: int, parts: int) -> Iterator[tuple]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def matrices(n: int, m: int, d: int) -> Iterator[tuple]:
    for flat in compositions(d, n * m):
        yield tuple(tuple(flat[i * m:(i + 1) * m]) for i in range(n))


def enumerate_basis(n: int, d: int, mode: str = "all", m: int | None = None) -> list:
    """All of Xi_{n|m,d} in lexicographic order (matrix, then decoration)."""
    m = n if m is None else m
    out = []
    for a in sorted(matrices(n, m, d)):
        if mode == "diagonal_only":
            if any(a[i][j] for i in range(n) for j in range(m) if i != j):
                continue
            out.append(DecoratedMatrix(a, ()))
            continue
        for dl in decorations(a):
            out.append(DecoratedMatrix(a, dl))
    return out


def diagonals(n: int, d: int) -> list:
    return [diagonal(c) for c in compositions(d, n)]
