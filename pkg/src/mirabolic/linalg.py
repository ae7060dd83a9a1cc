"""Exact linear algebra over Q on lists of Fractions."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class RowSpace:
    """Incrementally maintained echelon basis of a span of vectors."""

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list = []  # (pivot, vector) with vector[pivot] == 1
        self.originals: list = []

    def reduce(self, vec: Sequence) -> list:
        w = [Fraction(x) for x in vec]
        for p, r in self.rows:
            c = w[p]
            if c:
                for k in range(p, self.dim):
                    if r[k]:
                        w[k] -= c * r[k]
        return w

    def add(self, vec: Sequence) -> bool:
        """Insert vec; True if it enlarged the span."""
        w = self.reduce(vec)
        p = next((k for k, x in enumerate(w) if x), None)
        if p is None:
            return False
        inv = 1 / w[p]
        w = [x * inv for x in w]
        # keep rows fully reduced at their pivots so later reductions stay one pass
        for i, (q, r) in enumerate(self.rows):
            c = r[p]
            if c:
                self.rows[i] = (q, [a - c * b for a, b in zip(r, w)])
        self.rows.append((p, w))
        self.rows.sort(key=lambda t: t[0])
        self.originals.append(list(vec))
        return True

    def __len__(self) -> int:
        return len(self.rows)


def rank(vectors: Sequence[Sequence]) -> int:
    vs = list(vectors)
    if not vs:
        return 0
    rs = RowSpace(len(vs[0]))
    for x in vs:
        rs.add(x)
    return len(rs)


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list:
    n, m, p = len(a), len(b), len(b[0]) if b else 0
    out = [[Fraction(0)] * p for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for k in range(m):
            c = ai[k]
            if c:
                bk = b[k]
                for j in range(p):
                    if bk[j]:
                        oi[j] += c * bk[j]
    return out


def identity(n: int) -> list:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def flatten(m: Sequence[Sequence]) -> list:
    return [x for row in m for x in row]


def unflatten(vec: Sequence, n: int) -> list:
    return [list(vec[i * n:(i + 1) * n]) for i in range(n)]


def commutant_dim(mats: Sequence[Sequence[Sequence]], n: int) -> int:
    """dim {Y : XY = YX for every X in mats}, by the rank of the Sylvester system."""
    rs = RowSpace(n * n)
    # unknown Y[k][l] has index k*n + l; equation (XY - YX)[i][j] = 0
    for X in mats:
        for i in range(n):
            for j in range(n):
                row = [Fraction(0)] * (n * n)
                for k in range(n):
                    if X[i][k]:
                        row[k * n + j] += X[i][k]
                    if X[k][j]:
                        row[i * n + k] -= X[k][j]
                rs.add(row)
    return n * n - len(rs)


def generated_algebra(gens: Sequence[Sequence[Sequence]], n: int, max_rounds: int = 1000) -> tuple:
    """Basis of the unital algebra generated by gens (span of all words), and the word-length reached."""
    rs = RowSpace(n * n)
    frontier = [identity(n)]
    rs.add(flatten(frontier[0]))
    length = 0
    while frontier and length < max_rounds:
        length += 1
        nxt = []
        for w in frontier:
            for g in gens:
                p = matmul(g, w)
                if rs.add(flatten(p)):
                    nxt.append(p)
        frontier = nxt
    if frontier:
        raise RuntimeError("span did not stabilize")
    return [unflatten(v, n) for v in rs.originals], length
