"""Flags and vectors over a prime field: the counting oracle.

Vectors of F_q^d are encoded as integers in base q.  Every subspace of the
ambient space is enumerated once (by reduced row-echelon form) and carries the
bitmask of its members, so intersection is a bitwise AND and membership is a
bit test.  Flags are tuples of subspace ids.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from . import budget as _budget
from .decorated import DecoratedMatrix, antichains, enumerate_basis, r_stat
from .laurent import LaurentPoly


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    return all(q % k for k in range(2, int(q ** 0.5) + 1))


def next_prime(q: int) -> int:
    q += 1
    while not is_prime(q):
        q += 1
    return q


def rref(rows: Sequence[Sequence[int]], q: int) -> tuple:
    """Reduced row-echelon form over F_q, zero rows dropped."""
    m = [list(r) for r in rows]
    if not m:
        return ()
    ncol = len(m[0])
    out = []
    piv_row = 0
    for c in range(ncol):
        sel = None
        for r in range(piv_row, len(m)):
            if m[r][c] % q:
                sel = r
                break
        if sel is None:
            continue
        m[piv_row], m[sel] = m[sel], m[piv_row]
        inv = pow(m[piv_row][c], q - 2, q)
        m[piv_row] = [(x * inv) % q for x in m[piv_row]]
        for r in range(len(m)):
            if r != piv_row and m[r][c] % q:
                f = m[r][c]
                m[r] = [(x - f * y) % q for x, y in zip(m[r], m[piv_row])]
        piv_row += 1
        if piv_row == len(m):
            break
    for r in m[:piv_row]:
        out.append(tuple(x % q for x in r))
    return tuple(out)


@dataclass(frozen=True)
class FqSubspace:
    q: int
    d: int
    basis: tuple  # rref rows

    @property
    def dim(self) -> int:
        return len(self.basis)


class FqSpace:
    """All subspaces of F_q^d, with cached lattice operations."""

    def __init__(self, q: int, d: int):
        if not is_prime(q):
            raise ValueError(f"q={q} is not prime (only prime fields are supported)")
        self.q, self.d = q, d
        self.size = q ** d
        self.full_mask = (1 << self.size) - 1
        self.vecs = [self._digits(x) for x in range(self.size)]
        self.subspaces: list = []  # FqSubspace
        self.masks: list = []
        self.by_mask: dict = {}
        self.by_basis: dict = {}
        for k in range(d + 1):
            for basis in self._rrefs(k):
                self._register(basis)
        self.dims = [s.dim for s in self.subspaces]
        self.zero = self.by_basis[()]
        self.full = self.by_mask[self.full_mask]
        self._sum: dict = {}
        self.supersets = [
            [t for t in range(len(self.masks)) if self.masks[t] & self.masks[s] == self.masks[s]]
            for s in range(len(self.masks))
        ]

    def _digits(self, x: int) -> tuple:
        out = []
        for _ in range(self.d):
            out.append(x % self.q)
            x //= self.q
        return tuple(out)

    def encode(self, vec: Sequence[int]) -> int:
        x = 0
        for c in reversed(vec):
            x = x * self.q + (c % self.q)
        return x

    def add(self, x: int, y: int) -> int:
        q = self.q
        return self.encode([(a + b) % q for a, b in zip(self.vecs[x], self.vecs[y])])

    def sub(self, x: int, y: int) -> int:
        q = self.q
        return self.encode([(a - b) % q for a, b in zip(self.vecs[x], self.vecs[y])])

    def _rrefs(self, k: int) -> Iterator[tuple]:
        q, d = self.q, self.d
        for pivots in itertools.combinations(range(d), k):
            free = [(r, c) for r, p in enumerate(pivots) for c in range(p + 1, d) if c not in pivots]
            for vals in itertools.product(range(q), repeat=len(free)):
                rows = [[0] * d for _ in range(k)]
                for r, p in enumerate(pivots):
                    rows[r][p] = 1
                for (r, c), x in zip(free, vals):
                    rows[r][c] = x
                yield tuple(tuple(r) for r in rows)

    def _span_mask(self, basis: tuple) -> int:
        q = self.q
        mask = 0
        for coeffs in itertools.product(range(q), repeat=len(basis)):
            vec = [0] * self.d
            for c, row in zip(coeffs, basis):
                if c:
                    for t in range(self.d):
                        vec[t] += c * row[t]
            mask |= 1 << self.encode(vec)
        return mask

    def _register(self, basis: tuple) -> int:
        mask = self._span_mask(basis)
        sid = len(self.subspaces)
        self.subspaces.append(FqSubspace(self.q, self.d, basis))
        self.masks.append(mask)
        self.by_mask[mask] = sid
        self.by_basis[basis] = sid
        return sid

    def span(self, vectors: Sequence[Sequence[int]]) -> int:
        rows = [list(v) for v in vectors]
        return self.by_basis[rref(rows, self.q)] if rows else self.zero

    def span_ids(self, xs: Sequence[int]) -> int:
        return self.span([self.vecs[x] for x in xs])

    def meet(self, s: int, t: int) -> int:
        return self.by_mask[self.masks[s] & self.masks[t]]

    def join(self, s: int, t: int) -> int:
        if s == t:
            return s
        key = (s, t) if s < t else (t, s)
        hit = self._sum.get(key)
        if hit is None:
            rows = list(self.subspaces[s].basis) + list(self.subspaces[t].basis)
            hit = self.span(rows)
            self._sum[key] = hit
        return hit

    def contains(self, s: int, x: int) -> bool:
        return (self.masks[s] >> x) & 1 == 1

    def subspace_id(self, sub: FqSubspace) -> int:
        if (sub.q, sub.d) != (self.q, self.d):
            raise ValueError("mismatched ambient space")
        return self.by_basis[sub.basis]

    def apply(self, g: Sequence[Sequence[int]], x: int) -> int:
        vec = self.vecs[x]
        q = self.q
        return self.encode([sum(g[r][c] * vec[c] for c in range(self.d)) % q for r in range(self.d)])

    def apply_subspace(self, g, s: int) -> int:
        q = self.q
        imgs = [[sum(g[r][c] * row[c] for c in range(self.d)) % q for r in range(self.d)] for row in self.subspaces[s].basis]
        return self.span(imgs)

    def random_gl(self, rng: random.Random) -> list:
        while True:
            g = [[rng.randrange(self.q) for _ in range(self.d)] for _ in range(self.d)]
            if len(rref(g, self.q)) == self.d:
                return g


@lru_cache(maxsize=None)
def fq_space(q: int, d: int) -> FqSpace:
    return FqSpace(q, d)


def subspace_ops(a: FqSubspace, b: FqSubspace) -> dict:
    """Sum, intersection and dimensions of two subspaces of the same ambient space."""
    if (a.q, a.d) != (b.q, b.d):
        raise ValueError("mismatched ambient space")
    sp = fq_space(a.q, a.d)
    s, t = sp.subspace_id(a), sp.subspace_id(b)
    return {
        "sum": sp.subspaces[sp.join(s, t)],
        "intersection": sp.subspaces[sp.meet(s, t)],
        "dim_a": a.dim,
        "dim_b": b.dim,
    }


def contains(a: FqSubspace, vec: Sequence[int]) -> bool:
    sp = fq_space(a.q, a.d)
    return sp.contains(sp.subspace_id(a), sp.encode(vec))


@dataclass(frozen=True)
class FqTriple:
    q: int
    d: int
    f: tuple  # subspace ids V_0..V_n
    f2: tuple
    w: int


class FlagOracle:
    """Enumeration of n-step flags in F_q^d and classification of triples."""

    def __init__(self, n: int, d: int, q: int, m: int | None = None):
        self.n, self.d, self.q = n, d, q
        self.m = n if m is None else m
        self.space = fq_space(q, d)
        self._flags: dict = {}
        self._pair: dict = {}
        self.steps = 0

    def flags(self, dims: Sequence[int] | None = None, steps: int | None = None) -> list:
        """Flags with the given step dimensions (all flags if dims is None)."""
        steps = self.n if steps is None else steps
        key = (steps, None if dims is None else tuple(dims))
        hit = self._flags.get(key)
        if hit is not None:
            return hit
        sp = self.space
        out = []

        def rec(prefix):
            k = len(prefix) - 1
            if k == steps:
                if prefix[-1] == sp.full:
                    out.append(tuple(prefix))
                return
            cur = prefix[-1]
            for t in sp.supersets[cur]:
                if dims is not None and sp.dims[t] - sp.dims[cur] != dims[k]:
                    continue
                if k == steps - 1 and t != sp.full:
                    continue
                rec(prefix + [t])

        if dims is None or sum(dims) == self.d:
            rec([sp.zero])
        self._flags[key] = out
        return out

    def flag_dims(self, f: tuple) -> tuple:
        return tuple(self.space.dims[b] - self.space.dims[a] for a, b in zip(f, f[1:]))

    def classify_pair(self, f: tuple, g: tuple):
        """(matrix, [(delta, member-mask)]) for the pair of flags (f, g)."""
        key = (f, g)
        hit = self._pair.get(key)
        if hit is not None:
            return hit
        sp = self.space
        nf, ng = len(f) - 1, len(g) - 1
        inter = [[sp.meet(f[i], g[j]) for j in range(ng + 1)] for i in range(nf + 1)]
        dim = [[sp.dims[inter[i][j]] for j in range(ng + 1)] for i in range(nf + 1)]
        a = tuple(
            tuple(dim[i][j] - dim[i - 1][j] - dim[i][j - 1] + dim[i - 1][j - 1] for j in range(1, ng + 1))
            for i in range(1, nf + 1)
        )
        pos = [(i, j) for i in range(1, nf + 1) for j in range(1, ng + 1) if a[i - 1][j - 1] > 0]
        classes = []
        covered = 0
        total = 0
        for cand in antichains(pos):
            w_mask = sp.masks[self._join_cells(inter, cand)]
            for c in cand:
                rest = [x for x in cand if x != c]
                i, j = c
                excl = self._join_cells(inter, rest)
                excl = sp.join(excl, inter[i - 1][j])
                excl = sp.join(excl, inter[i][j - 1])
                w_mask &= ~sp.masks[excl]
            if w_mask:
                classes.append((cand, w_mask))
                if covered & w_mask:
                    raise RuntimeError("orbit classification ambiguous")
                covered |= w_mask
                total += bin(w_mask).count("1")
        if covered != sp.full_mask:
            raise RuntimeError("orbit classification ambiguous")
        self.steps += len(pos) + len(classes)
        res = (a, classes)
        self._pair[key] = res
        return res

    def _join_cells(self, inter, cells) -> int:
        sp = self.space
        acc = sp.zero
        for i, j in cells:
            acc = sp.join(acc, inter[i][j])
        return acc

    def classify(self, t: FqTriple) -> DecoratedMatrix:
        a, classes = self.classify_pair(t.f, t.f2)
        for dl, mask in classes:
            if (mask >> t.w) & 1:
                return DecoratedMatrix(a, dl)
        raise RuntimeError("orbit classification ambiguous")

    def canonical_triple(self, mat: DecoratedMatrix) -> FqTriple:
        if mat.total != self.d:
            raise ValueError("matrix total does not match the ambient dimension")
        sp = self.space
        coords: dict = {}
        nxt = 0
        for i in range(1, mat.n + 1):
            for j in range(1, mat.m + 1):
                coords[(i, j)] = list(range(nxt, nxt + mat[i, j]))
                nxt += mat[i, j]

        def unit(k):
            return [1 if t == k else 0 for t in range(self.d)]

        def span_cells(pred):
            vs = [unit(k) for c, ks in coords.items() if pred(c) for k in ks]
            return sp.span(vs)

        f = tuple(span_cells(lambda c, i=i: c[0] <= i) for i in range(mat.n + 1))
        f2 = tuple(span_cells(lambda c, j=j: c[1] <= j) for j in range(mat.m + 1))
        w = [0] * self.d
        for c in mat.delta:
            w[coords[c][0]] += 1
        return FqTriple(self.q, self.d, f, f2, sp.encode(w))

    def convolution_count(self, left: DecoratedMatrix, right: DecoratedMatrix, target: DecoratedMatrix) -> int:
        """Number of (f'', mu) with (f, f'', mu) in the left orbit and (f'', f', w - mu) in the right one."""
        if left.ro != target.ro or right.co != target.co or left.co != right.ro:
            return 0
        t = self.canonical_triple(target)
        sp = self.space
        mids = self.flags(left.co, steps=left.m)
        _budget.check(self.steps + len(mids) * sp.size, "convolution count")
        total = 0
        for g in mids:
            a1, cl1 = self.classify_pair(t.f, g)
            if a1 != left.a:
                continue
            a2, cl2 = self.classify_pair(g, t.f2)
            if a2 != right.a:
                continue
            m1 = next((mk for dl, mk in cl1 if dl == left.delta), 0)
            m2 = next((mk for dl, mk in cl2 if dl == right.delta), 0)
            if not m1 or not m2:
                continue
            x = m1
            while x:
                low = x & -x
                mu = low.bit_length() - 1
                x ^= low
                if (m2 >> sp.sub(t.w, mu)) & 1:
                    total += 1
        return total

    def product_counts(self, left: DecoratedMatrix, right: DecoratedMatrix) -> dict:
        """All nonzero structure constants of e_left * e_right at this q."""
        out = {}
        for tgt in enumerate_basis(left.n, self.d, m=right.m):
            if tgt.ro != left.ro or tgt.co != right.co:
                continue
            c = self.convolution_count(left, right, tgt)
            if c:
                out[tgt] = c
        return out

    def census(self) -> dict:
        """Class sizes of all orbits on (flags x flags x vectors)."""
        fl = self.flags()
        fl2 = self.flags(steps=self.m)
        _budget.check(len(fl) * len(fl2) * 4, "census")
        out: dict = {}
        for f in fl:
            for g in fl2:
                a, classes = self.classify_pair(f, g)
                for dl, mask in classes:
                    key = DecoratedMatrix(a, dl)
                    out[key] = out.get(key, 0) + bin(mask).count("1")
        return out

    def fiber_count(self, mat: DecoratedMatrix) -> int:
        """#{(f', w) : (f0, f', w) lies in the orbit}, for one fixed f0 of the right type."""
        t = self.canonical_triple(mat)
        tot = 0
        for g in self.flags(mat.co, steps=mat.m):
            a, classes = self.classify_pair(t.f, g)
            if a != mat.a:
                continue
            for dl, mask in classes:
                if dl == mat.delta:
                    tot += bin(mask).count("1")
        return tot

    def random_triple(self, rng: random.Random) -> FqTriple:
        fl = self.flags()
        fl2 = self.flags(steps=self.m)
        return FqTriple(self.q, self.d, rng.choice(fl), rng.choice(fl2), rng.randrange(self.space.size))

    def act(self, g, t: FqTriple) -> FqTriple:
        sp = self.space
        return FqTriple(
            t.q, t.d,
            tuple(sp.apply_subspace(g, s) for s in t.f),
            tuple(sp.apply_subspace(g, s) for s in t.f2),
            sp.apply(g, t.w),
        )


@lru_cache(maxsize=None)
def oracle(n: int, d: int, q: int, m: int | None = None) -> FlagOracle:
    return FlagOracle(n, d, q, m)


def enumerate_flags(n: int, d: int, q: int) -> list:
    est = (q + 1) ** (d * d) * n
    _budget.check(est, "flag enumeration")
    return oracle(n, d, q).flags()


def canonical_triple(m: DecoratedMatrix, q: int) -> FqTriple:
    return oracle(m.n, m.total, q, m.m).canonical_triple(m)


def orbit_invariant(t: FqTriple, n: int | None = None) -> DecoratedMatrix:
    n = len(t.f) - 1
    return oracle(n, t.d, t.q, len(t.f2) - 1).classify(t)


def convolution_count(left: DecoratedMatrix, right: DecoratedMatrix, target: DecoratedMatrix, q: int) -> int:
    return oracle(left.n, target.total, q, right.m).convolution_count(left, right, target)


def interpolate(points: Sequence[tuple]) -> list:
    """Coefficients (low to high) of the unique polynomial through the points."""
    xs = [Fraction(x) for x, _ in points]
    ys = [Fraction(y) for _, y in points]
    k = len(xs)
    # Newton divided differences
    coef = list(ys)
    for j in range(1, k):
        for i in range(k - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * k
    for i in range(k - 1, -1, -1):
        # poly = poly * (x - xs[i]) + coef[i]
        new = [Fraction(0)] * k
        for t, c in enumerate(poly):
            if c:
                if t + 1 < k:
                    new[t + 1] += c
                new[t] -= c * xs[i]
        new[0] += coef[i]
        poly = new
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return poly


def _eval(poly: Sequence[Fraction], x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(poly):
        acc = acc * x + c
    return acc


def _integral(poly) -> list:
    out = []
    for c in poly:
        if c.denominator != 1:
            raise ValueError("non-polynomial fit: non-integral coefficient")
        out.append(int(c))
    return out


def flag_count_poly(dims: Sequence[int]) -> LaurentPoly:
    """Number of flags of the given type, as a polynomial in v^2 = q."""
    from .laurent import ONE, qbinom

    out = ONE
    rest = sum(dims)
    for x in dims:
        out = out * qbinom(rest, x)
        rest -= x
    return out


def orbit_dimension_fit(mat: DecoratedMatrix, primes: Sequence[int]) -> dict:
    """Fit the point count of the orbit as a polynomial in q and report its degree.

    The count factors as (#flags of type ro) x (fiber over one flag); the first
    factor is a known Gaussian multinomial, the fiber is interpolated.
    """
    bound = r_stat_cols(mat) + mat.total
    if len(primes) < bound + 1:
        raise ValueError(f"need at least {bound + 1} primes for fiber degree bound {bound}")
    pts = []
    base = flag_count_poly(mat.ro)
    for q in primes:
        orc = oracle(mat.n, mat.total, q, mat.m)
        nflags = len(orc.flags(mat.ro))
        if Fraction(nflags) != base.at_v2(q):
            raise RuntimeError("flag count disagrees with the Gaussian multinomial")
        pts.append((q, orc.fiber_count(mat)))
    fiber = _integral(interpolate(pts))
    base_deg = base.max_exp() // 2
    deg = base_deg + (len(fiber) - 1 if any(fiber) else 0)
    return {"degree": deg, "fiber": fiber, "counts": {q: c for q, c in pts}}


def r_stat_cols(mat: DecoratedMatrix) -> int:
    co = mat.co
    s = sum(co)
    return (s * s - sum(x * x for x in co)) // 2


def structure_constant_interpolated(left, right, target, primes: Sequence[int], holdout: Sequence[int] | None = None) -> LaurentPoly:
    """Interpolate the structure constant in q = v^2 through the given primes."""
    primes = list(primes)
    if holdout is None:
        holdout = [next_prime(max(primes))]
    pts = [(q, convolution_count(left, right, target, q)) for q in primes]
    poly = _integral(interpolate(pts))
    for q in holdout:
        if _eval([Fraction(c) for c in poly], q) != convolution_count(left, right, target, q):
            raise ValueError("degree bound too small")
    return LaurentPoly({2 * k: c for k, c in enumerate(poly) if c})


def gl_invariance_check(n: int, d: int, q: int, samples: int, seed: int = 0) -> int:
    """Number of random (g, triple) samples whose orbit label changed under g (should be 0)."""
    rng = random.Random(seed)
    orc = oracle(n, d, q)
    bad = 0
    for _ in range(samples):
        t = orc.random_triple(rng)
        g = orc.space.random_gl(rng)
        if orc.classify(t) != orc.classify(orc.act(g, t)):
            bad += 1
    return bad


# ---------------------------------------------------------------------------
# Rank-based oracle for generator-type left factors.
#
# Subspaces are explicit bases over F_q, so nothing is tabulated and much
# larger ambient dimensions are reachable.  The middle flags are enumerated
# directly as the fiber of the left orbit over the first flag.


def _reduce(vec, piv: list, q: int) -> list:
    """Reduce vec against an RREF basis given as [(pivot column, row)]."""
    x = list(vec)
    for c, row in piv:
        if x[c] % q:
            f = x[c]
            x = [(a - f * b) % q for a, b in zip(x, row)]
    return x


def _pivots(basis: Sequence[Sequence[int]], q: int) -> list:
    out = []
    for row in rref(basis, q):
        c = next(i for i, x in enumerate(row) if x)
        out.append((c, row))
    return out


def _in_span(vec, piv: list, q: int) -> bool:
    return not any(_reduce(vec, piv, q))


def _intersect(b1: Sequence, b2: Sequence, q: int, d: int) -> tuple:
    """Zassenhaus: basis of span(b1) meet span(b2)."""
    if not b1 or not b2:
        return ()
    rows = [list(x) + list(x) for x in b1] + [list(x) + [0] * d for x in b2]
    out = []
    for row in rref(rows, q):
        if not any(row[:d]):
            out.append(tuple(row[d:]))
    return tuple(out)


def _sum_basis(*bases) -> tuple:
    out = []
    for b in bases:
        out.extend(b)
    return tuple(out)


def _rank(basis, q: int) -> int:
    return len(rref(basis, q)) if basis else 0


def _subspaces_rref(k: int, dim: int, q: int) -> Iterator[tuple]:
    """All dim-dimensional subspaces of F_q^k as RREF row tuples."""
    for cols in itertools.combinations(range(k), dim):
        free = [(r, c) for r in range(dim) for c in range(k) if c > cols[r] and c not in cols]
        for vals in itertools.product(range(q), repeat=len(free)):
            rows = [[0] * k for _ in range(dim)]
            for r, c in enumerate(cols):
                rows[r][c] = 1
            for (r, c), x in zip(free, vals):
                rows[r][c] = x
            yield tuple(tuple(r) for r in rows)


class RankOracle:
    """Convolution counts e_L * e_R for L = diagonal + R E_{h,h+1}, diagonal + R E_{h+1,h},
    diagonal, or diagonal decorated at (h, h); rank computations only."""

    def __init__(self, q: int):
        if not is_prime(q):
            raise ValueError("q must be prime")
        self.q = q

    def canonical(self, mat: DecoratedMatrix):
        d = mat.total
        coords = {}
        nxt = 0
        for i in range(1, mat.n + 1):
            for j in range(1, mat.m + 1):
                coords[(i, j)] = list(range(nxt, nxt + mat[i, j]))
                nxt += mat[i, j]

        def unit(k):
            return tuple(1 if t == k else 0 for t in range(d))

        f = [tuple(unit(k) for c, ks in coords.items() if c[0] <= i for k in ks) for i in range(mat.n + 1)]
        g = [tuple(unit(k) for c, ks in coords.items() if c[1] <= j for k in ks) for j in range(mat.m + 1)]
        w = [0] * d
        for c in mat.delta:
            w[coords[c][0]] += 1
        return f, g, tuple(w)

    def pair_data(self, f, g, d: int):
        """Matrix of the pair and, per candidate decoration, the membership tests."""
        q = self.q
        nf, ng = len(f) - 1, len(g) - 1
        inter = [[_intersect(f[i], g[j], q, d) if i and j else () for j in range(ng + 1)] for i in range(nf + 1)]
        dim = [[len(inter[i][j]) for j in range(ng + 1)] for i in range(nf + 1)]
        a = tuple(
            tuple(dim[i][j] - dim[i - 1][j] - dim[i][j - 1] + dim[i - 1][j - 1] for j in range(1, ng + 1))
            for i in range(1, nf + 1)
        )
        pos = [(i, j) for i in range(1, nf + 1) for j in range(1, ng + 1) if a[i - 1][j - 1] > 0]
        tests = []
        for cand in antichains(pos):
            span = _pivots(_sum_basis(*(inter[i][j] for i, j in cand)), q)
            excl = []
            for c in cand:
                i, j = c
                rest = [inter[x][y] for x, y in cand if (x, y) != c]
                excl.append(_pivots(_sum_basis(*rest, inter[i - 1][j], inter[i][j - 1]), q))
            tests.append((cand, span, excl))
        return a, tests

    def classify_with(self, data, w) -> DecoratedMatrix:
        a, tests = data
        hits = []
        for cand, span, excl in tests:
            if _in_span(w, span, self.q) and not any(_in_span(w, e, self.q) for e in excl):
                hits.append(cand)
        if len(hits) != 1:
            raise RuntimeError("orbit classification ambiguous")
        return DecoratedMatrix(a, hits[0])

    def classify(self, f, g, w) -> DecoratedMatrix:
        return self.classify_with(self.pair_data(f, g, len(w)), w)

    def _middle_flags(self, left: DecoratedMatrix, f, d: int):
        """Flags g with (f, g) of matrix type left (left is diagonal plus one off-diagonal block)."""
        q = self.q
        n = left.n
        off = [(i, j, left[i, j]) for i in range(1, n + 1) for j in range(1, n + 1) if i != j and left[i, j]]
        if not off:
            yield tuple(f)
            return
        if len(off) != 1 or abs(off[0][0] - off[0][1]) != 1:
            raise ValueError("unsupported left factor")
        i, j, R = off[0]
        h = min(i, j)
        if j == h + 1:
            # V''_h: codim R in V_h, containing V_{h-1}
            lo, hi = f[h - 1], f[h]
            k = len(hi) - len(lo)
            target = k - R
        else:
            # V''_h: V_h inside it with codim R, inside V_{h+1}
            lo, hi = f[h], f[h + 1]
            k = len(hi) - len(lo)
            target = R
        lo_piv = _pivots(lo, q)
        # complement of lo inside hi
        comp = []
        cur = list(lo)
        for x in hi:
            if _rank(cur + [x], q) > len(cur):
                cur.append(x)
                comp.append(x)
        if len(comp) != k:
            raise RuntimeError("bad flag")
        for sub in _subspaces_rref(k, target, q):
            extra = [tuple(sum(c * comp[t][s] for t, c in enumerate(row)) % q for s in range(d)) for row in sub]
            g = list(f)
            g[h] = tuple(lo) + tuple(extra)
            yield tuple(g)

    def count(self, left: DecoratedMatrix, right: DecoratedMatrix, target: DecoratedMatrix) -> int:
        if left.ro != target.ro or right.co != target.co or left.co != right.ro:
            return 0
        q = self.q
        f, f2, w = self.canonical(target)
        d = target.total
        if left.delta:
            (h, hh), = left.delta
            if h != hh or any(left[i, j] for i in range(1, left.n + 1) for j in range(1, left.n + 1) if i != j):
                raise ValueError("unsupported left factor")
        total = 0
        for g in self._middle_flags(left, f, d):
            if self.classify(f, g, (0,) * d).a != left.a:
                raise RuntimeError("middle flag of the wrong type")
            data_r = self.pair_data(g, f2, d)
            if data_r[0] != right.a:
                continue
            if not left.delta:
                mus = [(0,) * d]
            else:
                data_l = self.pair_data(f, g, d)
                span = list(f[h])
                mus = [mu for mu in itertools.product(range(q), repeat=len(span))]
                mus = [tuple(sum(c * span[t][s] for t, c in enumerate(mu)) % q for s in range(d)) for mu in mus]
                mus = [mu for mu in mus if self.classify_with(data_l, mu) == left]
            for mu in mus:
                rest = tuple((x - y) % q for x, y in zip(w, mu))
                if self.classify_with(data_r, rest) == right:
                    total += 1
        return total

    def product_counts(self, left: DecoratedMatrix, right: DecoratedMatrix, targets: Sequence[DecoratedMatrix]) -> dict:
        out = {}
        for t in targets:
            c = self.count(left, right, t)
            if c:
                out[t] = c
        return out
