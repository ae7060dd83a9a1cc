"""Closed-form products of a generator-type basis element with a basis element.

Each kernel takes the right factor (A, Delta) and returns {label: coefficient}.
The left factor is determined by the margins of A:

* raise(h, R):   diagonal + R E_{h,h+1}
* lower(h, R):   diagonal + R E_{h+1,h}
* dec(h):        diagonal with the cell (h, h) decorated

"e" kernels work in the characteristic-function basis, "bracket" kernels in the
rescaled basis [A] = v^{-(d - r)} e_A.  With stable=True the bracket kernels
work over integer diagonals (the stabilized algebra) and drop every domain
constraint that only involves a diagonal entry.
"""

from __future__ import annotations

import itertools

from .decorated import DecoratedMatrix, cell_leq_delta, is_valid, normalization_exponent
from .laurent import ONE, ZERO, LaurentPoly, qbinom, v


# ---------------------------------------------------------------- helpers

def _add(acc: dict, label: DecoratedMatrix, c: LaurentPoly) -> None:
    if c.is_zero():
        return
    old = acc.get(label)
    s = c if old is None else old + c
    if s.is_zero():
        acc.pop(label, None)
    else:
        acc[label] = s


def _clean(acc: dict, mode: str = "xi") -> dict:
    return {k: c for k, c in acc.items() if not c.is_zero() and is_valid(k, mode)}


def _row(A: DecoratedMatrix, i: int) -> list:
    return [A.entry(i, j) for j in range(1, A.m + 1)]


def _sum(A: DecoratedMatrix, i: int, lo: int, hi: int) -> int:
    """Sum of a_ij over lo <= j <= hi."""
    return sum(A.entry(i, j) for j in range(max(lo, 1), min(hi, A.m) + 1))


def qb1(N: int) -> LaurentPoly:
    return qbinom(N, 1)


def bqb(N: int, t: int) -> LaurentPoly:
    return qbinom(N, t).bar()


class Touch:
    """Position of the decoration relative to rows h, h+1.

    kind is 'none', 'top' (row h only), 'bottom' (row h+1 only) or 'both'.
    For 'top' and 'both' m indexes the row-h pair; for 'bottom' the row-h+1 pair.
    col(k) returns j_k with sentinels j_{k+1} = 0 past the end and j_0 = m+1.
    """

    def __init__(self, A: DecoratedMatrix, h: int):
        self.dl = list(A.delta)
        self.ncols = A.m
        rows = [c[0] for c in self.dl]
        top = rows.index(h) if h in rows else None
        bot = rows.index(h + 1) if h + 1 in rows else None
        if top is None and bot is None:
            self.kind, self.m = "none", None
        elif bot is None:
            self.kind, self.m = "top", top
        elif top is None:
            self.kind, self.m = "bottom", bot
        else:
            assert bot == top + 1
            self.kind, self.m = "both", top

    def col(self, k: int) -> int:
        if k < 0:
            return self.ncols + 1
        if k >= len(self.dl):
            return 0
        return self.dl[k][1]

    def replaced(self, drop, add) -> tuple:
        cells = [c for c in self.dl if c not in drop] + list(add)
        return tuple(sorted(cells))


def _margin_ok(A: DecoratedMatrix, h: int) -> bool:
    return 1 <= h < A.n


# ------------------------------------------------- e-basis, raising, R = 1

def e_raise(A: DecoratedMatrix, h: int) -> dict:
    """e_B * e_{A,Delta} with B - E_{h,h+1} diagonal."""
    acc: dict = {}
    T = Touch(A, h)
    ncol = A.m

    def X(p, delta=None):
        return A.plus({(h, p): 1, (h + 1, p): -1}, delta)

    def base(p):
        return qb1(A.entry(h, p) + 1).shift(2 * _sum(A, h, p + 1, ncol))

    ps = [p for p in range(1, ncol + 1) if A.entry(h + 1, p) >= 1]
    if T.kind == "none":
        for p in ps:
            _add(acc, X(p), base(p))
    elif T.kind == "top":
        jm, jm1 = T.col(T.m), T.col(T.m + 1)
        for p in ps:
            if jm1 < p < jm:
                c = qb1(A.entry(h, p) + 1).shift(2 * (_sum(A, h, p + 1, ncol) - 1))
            elif p == jm:
                c = qb1(A.entry(h, p)).shift(2 * _sum(A, h, p + 1, ncol))
            else:
                c = base(p)
            _add(acc, X(p), c)
    elif T.kind == "bottom":
        jm, jm1 = T.col(T.m), T.col(T.m + 1)
        for p in ps:
            _add(acc, X(p), base(p))
        if A.entry(h + 1, jm) >= 1:
            c = v(2 * _sum(A, h, jm, ncol))
            _add(acc, X(jm, T.replaced([(h + 1, jm)], [(h, jm)])), c)
            for t in range(jm1 + 1, jm):
                _add(acc, X(jm, T.replaced([(h + 1, jm)], [(h, jm), (h + 1, t)])), c)
    else:
        jm, jm1, jm2 = T.col(T.m), T.col(T.m + 1), T.col(T.m + 2)
        for p in ps:
            if jm1 < p < jm:
                c = qb1(A.entry(h, p) + 1).shift(2 * (_sum(A, h, p + 1, ncol) - 1))
            elif p == jm:
                c = qb1(A.entry(h, p)).shift(2 * _sum(A, h, p + 1, ncol))
            else:
                c = base(p)
            _add(acc, X(p), c)
        p = jm1
        if A.entry(h + 1, p) >= 1:
            c = v(2 * _sum(A, h, p, ncol)) - v(2 * (_sum(A, h, p + 1, ncol) - 1))
            _add(acc, X(p, T.replaced([(h + 1, jm1)], [])), c)
            for t in range(jm2 + 1, jm1):
                _add(acc, X(p, T.replaced([(h + 1, jm1)], [(h + 1, t)])), c)
    return _clean(acc)


# ------------------------------------------------- e-basis, lowering, R = 1

def e_lower(A: DecoratedMatrix, h: int) -> dict:
    """e_C * e_{A,Delta} with C - E_{h+1,h} diagonal."""
    acc: dict = {}
    T = Touch(A, h)
    ncol = A.m

    def X(p, delta=None):
        return A.plus({(h, p): -1, (h + 1, p): 1}, delta)

    def base(p):
        return qb1(A.entry(h + 1, p) + 1).shift(2 * _sum(A, h + 1, 1, p - 1))

    ps = [p for p in range(1, ncol + 1) if A.entry(h, p) >= 1]
    if T.kind == "none":
        for p in ps:
            _add(acc, X(p), base(p))
    elif T.kind == "top":
        jm, jm1 = T.col(T.m), T.col(T.m + 1)
        for p in ps:
            _add(acc, X(p), base(p))
        c = v(2 * _sum(A, h + 1, 1, jm1))
        for t in range(jm1 + 1, jm):
            if A.entry(h, t) >= 1:
                _add(acc, X(t, T.replaced([], [(h + 1, t)])), c)
        if A.entry(h, jm) >= 1:
            _add(acc, X(jm, T.replaced([(h, jm)], [(h + 1, jm)])), c)
    elif T.kind == "bottom":
        jm = T.col(T.m)
        for p in ps:
            if p == jm:
                c = qb1(A.entry(h + 1, p)).shift(2 * (_sum(A, h + 1, 1, p - 1) + 1))
            else:
                c = base(p)
            _add(acc, X(p), c)
    else:
        jm, jm1 = T.col(T.m), T.col(T.m + 1)
        for p in ps:
            if p == jm1:
                c = qb1(A.entry(h + 1, p)).shift(2 * (_sum(A, h + 1, 1, p - 1) + 1))
            else:
                c = base(p)
            _add(acc, X(p), c)
        c = v(2 * _sum(A, h + 1, 1, jm1)) - v(2 * _sum(A, h + 1, 1, jm1 - 1))
        if A.entry(h, jm) >= 1:
            _add(acc, X(jm, T.replaced([(h, jm), (h + 1, jm1)], [(h + 1, jm)])), c)
        for t in range(jm1 + 1, jm):
            if A.entry(h, t) >= 1:
                _add(acc, X(t, T.replaced([(h + 1, jm1)], [(h + 1, t)])), c)
    return _clean(acc)


# --------------------------------------------- decorated diagonal generator

def _cells(A: DecoratedMatrix) -> list:
    return [(i, j) for i in range(1, A.n + 1) for j in range(1, A.m + 1)]


def _fixed_count(A: DecoratedMatrix, src: tuple, tgt: tuple, fixed) -> LaurentPoly:
    """Vectors u with decoration src whose components on `fixed` cells equal
    those of the canonical vector of decoration tgt, as a polynomial in v^2."""
    out = ONE
    for c in _cells(A):
        in_src = c in src
        below = cell_leq_delta(c, src)
        if fixed(c):
            w_nonzero = c in tgt
            if in_src and not w_nonzero:
                return ZERO
            if not below and w_nonzero:
                return ZERO
            continue
        a = A[c]
        if in_src:
            out = out * (v(2 * a) - ONE)
        elif below and a:
            out = out.shift(2 * a)
    return out


def dec_coefficient(A: DecoratedMatrix, h: int, src: tuple, tgt: tuple) -> LaurentPoly:
    """Coefficient of e_{A,tgt} in e_{D,{(h,h)}} * e_{A,src}.

    Counts mu in V_h minus V_{h-1} with w - mu of decoration src, w of decoration
    tgt: vectors agreeing with w below row h, minus those agreeing through row h.
    """
    upto = _fixed_count(A, src, tgt, lambda c: c[0] > h)
    through = _fixed_count(A, src, tgt, lambda c: c[0] >= h)
    return upto - through


def _all_decorations(A: DecoratedMatrix, mode: str) -> list:
    from .decorated import antichains

    if mode == "xi":
        pos = [c for c in _cells(A) if A[c] > 0]
    else:
        pos = [c for c in _cells(A) if A[c] > 0 or c[0] == c[1]]
    return list(antichains(pos))


def e_dec(A: DecoratedMatrix, h: int) -> dict:
    """e_{D,{(h,h)}} * e_{A,Delta}."""
    acc: dict = {}
    if A.ro[h - 1] <= 0:
        return acc
    for tgt in _all_decorations(A, "xi"):
        c = dec_coefficient(A, h, A.delta, tgt)
        _add(acc, A.with_delta(tgt), c)
    return _clean(acc)


# --------------------------------------------------------- basis changes

def rescale_e_to_bracket(left_excess: int, A: DecoratedMatrix, out: dict) -> dict:
    """Turn e_L * e_A = sum c e_X into [L] * [A] = sum c' [X]."""
    base = -left_excess - normalization_exponent(A)
    return {X: c.shift(base + normalization_exponent(X)) for X, c in out.items()}


def raise_left_excess(A: DecoratedMatrix, h: int, R: int = 1) -> int:
    """d - r of diag + R E_{h,h+1} with column sums ro(A)."""
    return R * A.ro[h - 1]


def lower_left_excess(A: DecoratedMatrix, h: int, R: int = 1) -> int:
    return R * A.ro[h]


def dec_left_excess(A: DecoratedMatrix, h: int) -> int:
    return sum(A.ro[:h])


# ------------------------------------------------ bracket basis, general R

def _pvectors(A: DecoratedMatrix, R: int, row: int, stable: bool, diag_col: int) -> list:
    """p in N^m with sum R and p_u <= a_{row,u} (the diagonal cell is free when stable)."""
    caps = []
    for u in range(1, A.m + 1):
        if stable and u == diag_col:
            caps.append(R)
        else:
            caps.append(max(0, min(R, A.entry(row, u))))
    out = []

    def rec(u, left, cur):
        if u == A.m:
            if left == 0:
                out.append(tuple(cur))
            return
        for x in range(min(left, caps[u]), -1, -1):
            rec(u + 1, left - x, cur + [x])

    rec(0, R, [])
    return out


def _pairs(p) -> int:
    s = 0
    tot = 0
    for x in p:
        tot += s * x
        s += x
    return tot


def bracket_raise(A: DecoratedMatrix, h: int, R: int = 1, stable: bool = False) -> dict:
    """[B] * [A]_Delta with B - R E_{h,h+1} diagonal."""
    mode = "xi_tilde" if stable else "xi"
    acc: dict = {}
    if R == 0:
        return {A: ONE}
    T = Touch(A, h)
    ncol = A.m
    a = lambda i, j: A.entry(i, j)

    def X(p, delta=None):
        ch = {}
        for u, x in enumerate(p, 1):
            if x:
                ch[(h, u)] = ch.get((h, u), 0) + x
                ch[(h + 1, u)] = ch.get((h + 1, u), 0) - x
        return A.plus(ch, delta)

    def kappa(p):
        k = _pairs(p)
        for u, x in enumerate(p, 1):
            if x:
                k += x * (_sum(A, h, u, ncol) - _sum(A, h + 1, u + 1, ncol))
        return k

    def prod(p, shift_col=None, lower_col=None):
        out = ONE
        for u, x in enumerate(p, 1):
            top = a(h, u) + x - (1 if u == shift_col else 0)
            bot = x - (1 if u == lower_col else 0)
            out = out * bqb(top, bot)
            if out.is_zero():
                break
        return out

    for p in _pvectors(A, R, h + 1, stable, h + 1):
        k = kappa(p)
        if T.kind == "none":
            _add(acc, X(p), prod(p).shift(k))
        elif T.kind == "top":
            jm, jm1 = T.col(T.m), T.col(T.m + 1)
            e = k - sum(p[u - 1] for u in range(jm1 + 1, jm + 1))
            _add(acc, X(p), prod(p, shift_col=jm).shift(e))
        elif T.kind == "bottom":
            jm, jm1 = T.col(T.m), T.col(T.m + 1)
            _add(acc, X(p), prod(p).shift(k))
            if p[jm - 1] > 0:
                pr = prod(p, shift_col=jm, lower_col=jm)
                e = k - sum(a(h + 1, j) - p[j - 1] for j in range(jm1 + 1, jm + 1))
                _add(acc, X(p, T.replaced([(h + 1, jm)], [(h, jm)])), pr.shift(e))
                for t in range(jm1 + 1, jm):
                    e = k - sum(a(h + 1, j) - p[j - 1] for j in range(t + 1, jm + 1))
                    _add(acc, X(p, T.replaced([(h + 1, jm)], [(h, jm), (h + 1, t)])), pr.shift(e))
        else:
            jm, jm1, jm2 = T.col(T.m), T.col(T.m + 1), T.col(T.m + 2)
            e = k - sum(p[u - 1] for u in range(jm1 + 1, jm + 1))
            _add(acc, X(p), prod(p, shift_col=jm).shift(e))
            x = p[jm1 - 1]
            if x > 0:
                f = ONE - v(-2 * x)
                pr = prod(p, shift_col=jm) * f
                sp = sum(p[u - 1] for u in range(jm1 + 1, jm + 1))
                e = k - sp - sum(a(h + 1, j) - p[j - 1] for j in range(jm2 + 1, jm1 + 1))
                _add(acc, X(p, T.replaced([(h + 1, jm1)], [])), pr.shift(e))
                for t in range(jm2 + 1, jm1):
                    e = k - sp - sum(a(h + 1, j) - p[j - 1] for j in range(t + 1, jm1 + 1))
                    _add(acc, X(p, T.replaced([(h + 1, jm1)], [(h + 1, t)])), pr.shift(e))
    return _clean(acc, mode)


def bracket_lower(A: DecoratedMatrix, h: int, R: int = 1, stable: bool = False) -> dict:
    """[C] * [A]_Delta with C - R E_{h+1,h} diagonal."""
    mode = "xi_tilde" if stable else "xi"
    acc: dict = {}
    if R == 0:
        return {A: ONE}
    T = Touch(A, h)
    ncol = A.m
    a = lambda i, j: A.entry(i, j)

    def X(p, delta=None):
        ch = {}
        for u, x in enumerate(p, 1):
            if x:
                ch[(h, u)] = ch.get((h, u), 0) - x
                ch[(h + 1, u)] = ch.get((h + 1, u), 0) + x
        return A.plus(ch, delta)

    def kappa(p):
        k = _pairs(p)
        for u, x in enumerate(p, 1):
            if x:
                k += x * (_sum(A, h + 1, 1, u) - _sum(A, h, 1, u - 1))
        return k

    def prod(p, shift_col=None, lower_col=None):
        out = ONE
        for u, x in enumerate(p, 1):
            top = a(h + 1, u) + x - (1 if u == shift_col else 0)
            bot = x - (1 if u == lower_col else 0)
            out = out * bqb(top, bot)
            if out.is_zero():
                break
        return out

    for p in _pvectors(A, R, h, stable, h):
        k = kappa(p)
        if T.kind == "none":
            _add(acc, X(p), prod(p).shift(k))
        elif T.kind == "top":
            jm, jm1 = T.col(T.m), T.col(T.m + 1)
            e = k - sum(p[u - 1] for u in range(jm1 + 1, jm + 1))
            _add(acc, X(p), prod(p).shift(e))
            if p[jm - 1] > 0:
                e = k - _sum(A, h + 1, jm1 + 1, jm)
                pr = prod(p, shift_col=jm, lower_col=jm)
                _add(acc, X(p, T.replaced([(h, jm)], [(h + 1, jm)])), pr.shift(e))
            for t in range(jm1 + 1, jm):
                if p[t - 1] > 0:
                    e = k - _sum(A, h + 1, jm1 + 1, t) - sum(p[u - 1] for u in range(t + 1, jm + 1))
                    pr = prod(p, shift_col=t, lower_col=t)
                    _add(acc, X(p, T.replaced([], [(h + 1, t)])), pr.shift(e))
        elif T.kind == "bottom":
            jm = T.col(T.m)
            _add(acc, X(p), prod(p, shift_col=jm).shift(k))
        else:
            jm, jm1 = T.col(T.m), T.col(T.m + 1)
            e = k - sum(p[u - 1] for u in range(jm1 + 1, jm + 1))
            _add(acc, X(p), prod(p, shift_col=jm1).shift(e))
            f = ONE - v(-2 * a(h + 1, jm1))
            if p[jm - 1] > 0:
                e = k - _sum(A, h + 1, jm1 + 1, jm)
                pr = prod(p, shift_col=jm, lower_col=jm) * f
                _add(acc, X(p, T.replaced([(h, jm), (h + 1, jm1)], [(h + 1, jm)])), pr.shift(e))
            for t in range(jm1 + 1, jm):
                if p[t - 1] > 0:
                    e = k - _sum(A, h + 1, jm1 + 1, t) - sum(p[u - 1] for u in range(t + 1, jm + 1))
                    pr = prod(p, shift_col=t, lower_col=t) * f
                    _add(acc, X(p, T.replaced([(h + 1, jm1)], [(h + 1, t)])), pr.shift(e))
    return _clean(acc, mode)


def bracket_dec(A: DecoratedMatrix, h: int, stable: bool = False) -> dict:
    """[D]_{(h,h)} * [A]_Delta."""
    mode = "xi_tilde" if stable else "xi"
    acc: dict = {}
    if not stable and A.ro[h - 1] <= 0:
        return acc
    src_w = normalization_exponent(A)
    left = dec_left_excess(A, h)
    for tgt in _all_decorations(A, mode):
        c = dec_coefficient(A, h, A.delta, tgt)
        if c.is_zero():
            continue
        X = A.with_delta(tgt)
        _add(acc, X, c.shift(normalization_exponent(X) - src_w - left))
    return _clean(acc, mode)
