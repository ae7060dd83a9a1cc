"""The bimodule MV: basis keys (r, j), left MS(n, d) action, right MH_d action.

A key (r, j) corresponds to the n x d decorated matrix with a_{r_c, c} = 1 and
decoration {(r_{j_t}, j_t)}; MV is spanned by the e-basis elements of these.
Both actions are computed through that dictionary with the closed-form kernels
(act_left, act_right).  Case-by-case transcriptions of the (r, j) formulas are
kept in act_left_printed / act_right_printed for comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from . import hecke
from . import linalg
from .decorated import DecoratedMatrix, enumerate_basis, is_valid, transpose
from .laurent import ONE, ZERO, LaurentPoly, v
from .schur import (
    H_SIGN,
    LGEN,
    AlgebraElement,
    E,
    F,
    GeneratorSpec,
    Hm,
    Hp,
    apply_word,
    from_bracket,
    relation_battery,
)


@dataclass(frozen=True, order=True)
class MVBasisKey:
    r: tuple
    j: tuple = ()

    def __str__(self) -> str:
        return f"({','.join(map(str, self.r))}|{','.join(map(str, self.j))})"

    def to_json(self) -> dict:
        return {"r": list(self.r), "j": list(self.j)}


def is_key(key: MVBasisKey, n: int) -> bool:
    r, j = key.r, key.j
    if any(not 1 <= x <= n for x in r) or len(j) > n:
        return False
    if any(not 1 <= p <= len(r) for p in j):
        return False
    if any(a <= b for a, b in zip(j, j[1:])):
        return False
    rows = [r[p - 1] for p in j]
    return all(a < b for a, b in zip(rows, rows[1:]))


def enumerate_mv_basis(n: int, d: int) -> list:
    out = []
    for r in product(range(1, n + 1), repeat=d):
        for k in range(0, min(n, d) + 1):
            for pos in combinations(range(d, 0, -1), k):
                key = MVBasisKey(tuple(r), tuple(pos))
                if is_key(key, n):
                    out.append(key)
    return out


def mv_dimension(n: int, d: int) -> int:
    from math import comb

    return sum(comb(n, k) * comb(d, k) * n ** (d - k) for k in range(0, min(n, d) + 1))


def xi1_dictionary(key: MVBasisKey, n: int) -> DecoratedMatrix:
    if not is_key(key, n):
        raise ValueError(f"invalid key {key}")
    d = len(key.r)
    a = [[0] * d for _ in range(n)]
    for c, row in enumerate(key.r, start=1):
        a[row - 1][c - 1] = 1
    return DecoratedMatrix(tuple(map(tuple, a)), tuple((key.r[p - 1], p) for p in key.j))


def xi1_inverse(m: DecoratedMatrix) -> MVBasisKey:
    if any(c != 1 for c in m.co) or not is_valid(m):
        raise ValueError(f"{m} is not in Xi^1")
    r = tuple(next(i for i in range(1, m.n + 1) if m[i, c]) for c in range(1, m.m + 1))
    j = tuple(sorted((c for _, c in m.delta), reverse=True))
    return MVBasisKey(r, j)


def xi1_set(n: int, d: int) -> list:
    """Xi^1 listed directly from the decorated-matrix enumeration."""
    return [m for m in enumerate_basis(n, d, m=d) if all(c == 1 for c in m.co)]


@dataclass(frozen=True)
class MVElement:
    n: int
    d: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {k: LaurentPoly.coerce(c) for k, c in self.terms.items()}
        object.__setattr__(self, "terms", {k: c for k, c in clean.items() if not c.is_zero()})

    @classmethod
    def basis(cls, n: int, key: MVBasisKey, coeff=ONE) -> "MVElement":
        return cls(n, len(key.r), {key: coeff})

    def __add__(self, other: "MVElement") -> "MVElement":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, ZERO) + c
        return MVElement(self.n, self.d, out)

    def __neg__(self) -> "MVElement":
        return MVElement(self.n, self.d, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "MVElement") -> "MVElement":
        return self + (-other)

    def scale(self, c) -> "MVElement":
        c = LaurentPoly.coerce(c)
        return MVElement(self.n, self.d, {k: c * x for k, x in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, MVElement) and (self.n, self.d) == (other.n, other.d) and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, self.d, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, key: MVBasisKey) -> LaurentPoly:
        return self.terms.get(key, ZERO)

    def sorted_terms(self) -> list:
        return sorted(self.terms.items())

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "terms": [{"key": k.to_json(), "coeff": c.to_json()} for k, c in self.sorted_terms()]}

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*e{k}" for k, c in self.sorted_terms())


def to_algebra(x: MVElement) -> AlgebraElement:
    return AlgebraElement(x.n, x.d, "e", {xi1_dictionary(k, x.n): c for k, c in x.terms.items()})


def from_algebra(y: AlgebraElement, n: int) -> MVElement:
    y = from_bracket(y)
    return MVElement(n, y.d, {xi1_inverse(m): c for m, c in y.terms.items()})


def _transpose_el(y: AlgebraElement, rows: int) -> AlgebraElement:
    return AlgebraElement(rows, y.d, y.basis, {transpose(m): c for m, c in y.terms.items()})


# ------------------------------------------------------------ actions

def act_left(g: GeneratorSpec, x: MVElement, h_sign: int = H_SIGN) -> MVElement:
    """g * x for a generator E_i, F_i, H_a^{+-}, L."""
    if x.is_zero():
        return x
    y = apply_word([g], to_algebra(x), "bracket", h_sign=h_sign)
    return from_algebra(y, x.n)


def act_right(x: MVElement, t: int) -> MVElement:
    """x * tau_t, as the transpose of tau_t * (transpose of x) inside MS(d, d)."""
    hecke._check(x.d, t)
    if x.is_zero():
        return x
    y = _transpose_el(to_algebra(x), x.d)
    z = hecke._left_tau(x.d, t, y)
    return from_algebra(_transpose_el(z, x.n), x.n)


# ------------------------------------------------------- printed formulas

def _cnt(r: Sequence[int], row: int, positions) -> int:
    return sum(1 for p in positions if r[p - 1] == row)


def _with_row(r: tuple, p: int, delta: int) -> tuple:
    out = list(r)
    out[p - 1] += delta
    return tuple(out)


def _jset(j: Sequence[int]) -> tuple:
    return tuple(sorted(set(j), reverse=True))


def act_left_printed(g: GeneratorSpec, key: MVBasisKey, n: int, variant: str = "row_h") -> dict:
    """The case formulas for generators on e_{r,j}, as printed (variant 'row_h' or 'row_h1' in case (f)).

    Returns {key: coeff}; keys are not validated.
    """
    r, j = key.r, key.j
    d = len(r)
    k = len(j)
    allp = range(1, d + 1)
    out: dict = {}

    def add(rr, jj, c):
        kk = MVBasisKey(tuple(rr), tuple(jj))
        out[kk] = out.get(kk, ZERO) + c

    if g.kind in ("Hplus", "Hminus"):
        s = -1 if g.kind == "Hplus" else 1
        add(r, j, v(s * _cnt(r, g.index, allp)))
        return out
    if g.kind == "L":
        s1 = _cnt(r, 1, allp)
        if not j:
            add(r, j, v(-s1))
            for p in allp:
                if r[p - 1] == 1:
                    add(r, (p,), v(-s1))
            return out
        j1 = j[0]
        below = _cnt(r, 1, range(1, j1))
        upto = _cnt(r, 1, range(1, j1 + 1))
        if r[j1 - 1] == 1:
            add(r, j[1:], v(-2 * s1 + 2 * below) * (v(2) - 1))
            for p in range(j1 + 1, d + 1):
                if r[p - 1] == 1:
                    add(r, (p,) + j[1:], v(-2 * s1 + 2 * below) * (v(2) - 1))
            add(r, j, v(-2 * s1) * (v(2 * upto) - 1))
        else:
            add(r, j, v(-s1 + 2 * upto))
            for p in range(j1 + 1, d + 1):
                if r[p - 1] == 1:
                    add(r, (p,) + j, v(-s1 + 2 * upto))
        return out

    h = g.index
    rows = [r[p - 1] for p in j]
    jm = lambda m: j[m - 1] if 1 <= m <= k else (0 if m > k else d + 1)
    m_h = next((t for t in range(1, k + 1) if rows[t - 1] == h), None)
    m_h1 = next((t for t in range(1, k + 1) if rows[t - 1] == h + 1), None)
    if m_h is None and m_h1 is None:
        case = "e"
    elif m_h is not None and m_h1 == m_h + 1:
        case, m = "h", m_h
    elif m_h is not None:
        case, m = "f", m_h
    else:
        case, m = "g", m_h1
    sh = _cnt(r, h, allp)
    sh1 = _cnt(r, h + 1, allp)
    above = lambda p: _cnt(r, h, range(p + 1, d + 1))  # sum_{j>p} delta_{h r_j}
    before = lambda p: _cnt(r, h + 1, range(1, p))  # sum_{j<p} delta_{h+1, r_j}

    if g.kind == "E":
        pre = v(-sh)
        if case in ("e", "g"):
            for p in allp:
                if r[p - 1] == h + 1 and not (case == "g" and p == jm(m)):
                    add(_with_row(r, p, -1), j, pre * v(2 * above(p)))
            if case == "g":
                p = jm(m)
                c = pre * v(2 * above(p))
                rr = _with_row(r, p, -1)
                add(rr, j[:m - 1] + j[m:], c)
                add(rr, j, c)
                for t in range(jm(m + 1) + 1, jm(m)):
                    if r[t - 1] == h + 1:
                        add(rr, _jset(j + (t,)), c)
            return out
        lo, hi = jm(m + 1), jm(m)
        for p in allp:
            if r[p - 1] != h + 1:
                continue
            inner = lo + 1 <= p <= hi - 1
            add(_with_row(r, p, -1), j, pre * v(2 * above(p) - (1 if inner else 0)))
        if case == "h":
            p = jm(m + 1)
            c = pre * v(2 * before(p)) * (1 - v(-2))
            rr = _with_row(r, p, -1)
            add(rr, j[:m] + j[m + 1:], c)
            for t in range(jm(m + 2) + 1, jm(m + 1)):
                if r[t - 1] == h + 1:
                    add(rr, _jset(j[:m] + (t,) + j[m + 1:]), c)
        return out

    if g.kind == "F":
        pre = v(-sh1)
        if case in ("e", "g"):
            for p in allp:
                if r[p - 1] == h:
                    add(_with_row(r, p, 1), j, pre * v(2 * before(p)))
            return out
        jmm = jm(m)
        for p in allp:
            if r[p - 1] == h and p != jmm:
                add(_with_row(r, p, 1), j, pre * v(2 * before(p)))
        if case == "f":
            add(_with_row(r, jmm, 1), j[:m - 1] + j[m:], pre * v(2 * before(jmm)))
            row = h if variant == "row_h" else h + 1
            e2 = 2 * _cnt(r, row, range(1, jm(m + 1) + 1))
            add(_with_row(r, jmm, 1), j, pre * v(e2))
            for t in range(jm(m + 1) + 1, jmm):
                if r[t - 1] == h:
                    add(_with_row(r, t, 1), _jset(j + (t,)), pre * v(e2))
            return out
        # case h
        c = pre * v(2 * before(jm(m + 1))) * (v(2) - 1)
        add(_with_row(r, jmm, 1), j[:m] + j[m + 1:], c)
        for t in range(jm(m + 1) + 1, jmm):
            if r[t - 1] == h:
                add(_with_row(r, t, 1), _jset(j[:m] + (t,) + j[m + 1:]), c)
        return out
    raise ValueError("unsupported left factor")


def _swap(r: tuple, t: int) -> tuple:
    out = list(r)
    out[t - 1], out[t] = out[t], out[t - 1]
    return tuple(out)


def _sj(j: Sequence[int], t: int) -> tuple:
    return _jset(t + 1 if p == t else t if p == t + 1 else p for p in j)


def act_right_printed(key: MVBasisKey, t: int) -> dict:
    """The case formulas for e_{r,j} tau, as printed; keys are not validated."""
    r, j = key.r, key.j
    out: dict = {}

    def add(rr, jj, c):
        kk = MVBasisKey(tuple(rr), tuple(jj))
        out[kk] = out.get(kk, ZERO) + LaurentPoly.coerce(c)

    q = v(2)
    if t == 0:
        if j and j[-1] == 1:
            add(r, j, q - 2)
            return out
        last = r[j[-1] - 1] if j else 0
        add(r, j, v(2 * (1 if r[0] <= last else 0)) - 1)
        if r[0] > last:
            add(r, j + (1,), ONE)
        return out
    a, b = r[t - 1], r[t]
    sr = _swap(r, t)
    drop = lambda *ps: tuple(p for p in j if p not in ps)
    if t not in j and t + 1 not in j:
        if a < b:
            add(sr, j, ONE)
        elif a == b:
            add(r, j, q)
        else:
            add(r, j, q - 1)
            add(sr, j, q)
    elif t in j and t + 1 not in j:
        if a < b:
            add(sr, _sj(j, t), ONE)
            add(sr, drop(t), ONE)
        elif a == b:
            add(r, _sj(j, t), ONE)
        else:
            add(r, _jset(j + (t + 1,)), ONE)
            add(sr, _sj(j, t), ONE)
            add(sr, drop(t), ONE)
    elif t not in j:
        if a < b:
            add(sr, drop(t + 1), 2)
            add(sr, _sj(j, t), ONE)
            add(sr, _jset(j + (t,)), ONE)
            add(r, drop(t + 1), ONE)
        elif a == b:
            add(r, _sj(j, t), q)
            add(r, drop(t + 1), q)
            add(r, j, q - 1)
        else:
            add(r, j, q - 1)
            add(r, drop(t + 1), q * 2)
            add(sr, _sj(j, t), q)
            add(sr, drop(t + 1), q)
    else:
        add(r, j, (q - 1) * 2)
        add(r, drop(t + 1), q * 2 - 1)
        add(sr, drop(t, t + 1), q * 2 - 1)
        add(sr, drop(t), q * 2 - 1)
    return out


def compare_printed(n: int, d: int, side: str = "left", variant: str = "row_h") -> dict:
    """Count keys where the printed formulas disagree with the kernel route; first few examples."""
    keys = enumerate_mv_basis(n, d)
    if side == "left":
        gens = [Hp(a) for a in range(1, n + 1)] + [LGEN] + [E(i) for i in range(1, n)] + [F(i) for i in range(1, n)]
        items = [(str(g), lambda key, g=g: act_left_printed(g, key, n, variant), lambda x, g=g: act_left(g, x, h_sign=-1))
                 for g in gens]
    else:
        items = [(f"t{t}", lambda key, t=t: act_right_printed(key, t), lambda x, t=t: act_right(x, t)) for t in range(d)]
    total = bad = 0
    examples = []
    by_gen: dict = {}
    for name, printed, truth in items:
        for key in keys:
            total += 1
            want = truth(MVElement.basis(n, key)).terms
            got = {kk: c for kk, c in printed(key).items() if not c.is_zero()}
            if got != want:
                bad += 1
                by_gen[name] = by_gen.get(name, 0) + 1
                if len(examples) < 8:
                    examples.append({
                        "generator": name,
                        "key": str(key),
                        "printed": {str(kk): str(c) for kk, c in sorted(got.items())},
                        "kernel": {str(kk): str(c) for kk, c in sorted(want.items())},
                    })
    return {"n": n, "d": d, "side": side, "variant": variant, "checked": total, "mismatches": bad,
            "by_generator": by_gen, "examples": examples}


# ------------------------------------------------------------ operators

@dataclass(frozen=True)
class MVOperator:
    """A linear map on MV, stored as the images of the basis keys."""

    n: int
    d: int
    images: tuple  # tuple of MVElement in enumerate_mv_basis order

    def __add__(self, other):
        return MVOperator(self.n, self.d, tuple(a + b for a, b in zip(self.images, other.images)))

    def __sub__(self, other):
        return MVOperator(self.n, self.d, tuple(a - b for a, b in zip(self.images, other.images)))

    def scale(self, c):
        return MVOperator(self.n, self.d, tuple(a.scale(c) for a in self.images))

    def zero(self):
        return MVOperator(self.n, self.d, tuple(MVElement(self.n, self.d) for _ in self.images))

    def __eq__(self, other):
        return isinstance(other, MVOperator) and self.images == other.images

    def __hash__(self):
        return hash(self.images)


def left_word_operator(word: Sequence[GeneratorSpec], n: int, d: int, h_sign: int = H_SIGN) -> MVOperator:
    imgs = []
    for key in enumerate_mv_basis(n, d):
        x = MVElement.basis(n, key)
        for g in reversed(list(word)):
            x = act_left(g, x, h_sign)
        imgs.append(x)
    return MVOperator(n, d, tuple(imgs))


def _op_diff(lhs: MVOperator, rhs: MVOperator):
    keys = enumerate_mv_basis(lhs.n, lhs.d)
    for key, a, b in zip(keys, lhs.images, rhs.images):
        if a != b:
            diff = (a - b).sorted_terms()[0][0]
            return {"label": f"e{key} -> e{diff}", "lhs": str(a.coefficient(diff)), "rhs": str(b.coefficient(diff))}
    return None


def mu_battery(n: int, d: int, h_sign: int = H_SIGN) -> list:
    """The quantum-group relations evaluated on the operators of the left action on MV."""
    one = left_word_operator([], n, d, h_sign)
    return relation_battery(n, d, lambda *gs: left_word_operator(gs, n, d, h_sign), one, _op_diff)


def _parse_action(action) -> tuple:
    """('left', GeneratorSpec) or ('right', tau index)."""
    if isinstance(action, GeneratorSpec):
        return "left", action
    if isinstance(action, int):
        return "right", action
    if isinstance(action, tuple) and action[0] in ("left", "right"):
        return action
    raise ValueError(f"unknown action {action!r}")


def operator_matrix(action, n: int, d: int, v0) -> list:
    """Matrix (target rows, source columns) of an action in enumerate_mv_basis order at v = v0."""
    v0 = Fraction(v0)
    if v0 == 0:
        raise ValueError("v0 must be nonzero")
    side, g = _parse_action(action)
    keys = enumerate_mv_basis(n, d)
    idx = {k: i for i, k in enumerate(keys)}
    N = len(keys)
    M = [[Fraction(0)] * N for _ in range(N)]
    for c, key in enumerate(keys):
        x = MVElement.basis(n, key)
        y = act_left(g, x) if side == "left" else act_right(x, g)
        for kk, coeff in y.terms.items():
            M[idx[kk]][c] = coeff.specialize(v0)
    return M


def left_generators(n: int) -> list:
    gens = [LGEN]
    for a in range(1, n + 1):
        gens += [Hp(a), Hm(a)]
    for i in range(1, n):
        gens += [E(i), F(i)]
    return gens


def double_centralizer_check(n: int, d: int, v0=2, check_v0=Fraction(7, 3)) -> dict:
    """dim Commutant(H) = dim S and dim Commutant(S) = dim H for the two action algebras at v = v0."""
    if n < d:
        raise ValueError("double centralizer needs n >= d")
    v0 = Fraction(v0)
    if v0 == 0 or v0 * v0 == 1:
        raise ValueError("v0 must be generic: v0 != 0 and v0^2 != 1")
    N = mv_dimension(n, d)

    def dims(w):
        Lm = [operator_matrix(g, n, d, w) for g in left_generators(n)]
        Rm = [operator_matrix(("right", t), n, d, w) for t in range(d)]
        S, ls = linalg.generated_algebra(Lm, N)
        H, lh = linalg.generated_algebra(Rm, N)
        return Lm, Rm, len(S), len(H), ls, lh

    Lm, Rm, dS, dH, ls, lh = dims(v0)
    ref = dims(Fraction(check_v0))
    if (dS, dH) != (ref[2], ref[3]):
        raise ValueError(f"nongeneric specialization v0={v0}: span dimensions {(dS, dH)} differ from {(ref[2], ref[3])}; try another v0")
    cH = linalg.commutant_dim(Rm, N)
    cS = linalg.commutant_dim(Lm, N)
    xi = len(enumerate_basis(n, d))
    commute = all(linalg.matmul(a, b) == linalg.matmul(b, a) for a in Lm for b in Rm)
    return {
        "n": n, "d": d, "v0": str(v0), "mv_dim": N,
        "dim_S": dS, "dim_H": dH, "dim_commutant_H": cH, "dim_commutant_S": cS,
        "dim_MS": xi, "word_length_S": ls, "word_length_H": lh,
        "generators_commute": commute,
        "passed": commute and cH == dS and cS == dH and dS == xi,
    }
