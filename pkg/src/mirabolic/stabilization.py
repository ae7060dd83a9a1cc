"""The stabilized algebra K over integer diagonals, the map eta to MS(n, d),
stabilization fits in (v, v') and window checks of the quantum-group relations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from . import kernels as K
from .decorated import DecoratedMatrix, diagonal, is_valid, validate
from .laurent import ONE, ZERO, InexactDivision, LaurentPoly, TwoVarLaurent, qint, v
from .schur import AlgebraElement, classify_left, mul_bracket


def shift(m: DecoratedMatrix, p: int) -> DecoratedMatrix:
    """(A + pI, Delta)."""
    return m.plus({(i, i): p for i in range(1, m.n + 1)}) if p else m


@dataclass(frozen=True)
class StableElement:
    n: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for k, c in self.terms.items():
            ok, why = validate(k, "xi_tilde")
            if not ok:
                raise ValueError(f"{k} is not in the stable index set: {why}")
            c = LaurentPoly.coerce(c)
            if not c.is_zero():
                clean[k] = c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def basis(cls, m: DecoratedMatrix, coeff=ONE) -> "StableElement":
        return cls(m.n, {m: coeff})

    def __add__(self, other: "StableElement") -> "StableElement":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, ZERO) + c
        return StableElement(self.n, out)

    def __neg__(self) -> "StableElement":
        return StableElement(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "StableElement") -> "StableElement":
        return self + (-other)

    def scale(self, c) -> "StableElement":
        c = LaurentPoly.coerce(c)
        return StableElement(self.n, {k: c * x for k, x in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, StableElement) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: (kv[0].a, kv[0].delta))

    def to_json(self) -> dict:
        return {"n": self.n, "terms": [{"matrix": m.to_json(), "coeff": c.to_json()} for m, c in self.sorted_terms()]}

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{m}" for m, c in self.sorted_terms())


def _stable_kernel(L: DecoratedMatrix, A: DecoratedMatrix) -> dict:
    kind, h, R = classify_left(L)
    if kind == "D":
        return {A: ONE}
    if kind == "D_dec":
        return K.bracket_dec(A, h, stable=True)
    if kind == "B":
        return K.bracket_raise(A, h, R, stable=True)
    return K.bracket_lower(A, h, R, stable=True)


def k_mul(left: DecoratedMatrix, right: StableElement) -> StableElement:
    """[left] . right in K for a generator-type left factor over integer diagonals."""
    ok, why = validate(left, "xi_tilde")
    if not ok:
        raise ValueError(f"left factor not in the stable index set: {why}")
    out: dict = {}
    for A, c in right.terms.items():
        if left.co != A.ro:
            continue
        for X, x in _stable_kernel(left, A).items():
            s = out.get(X, ZERO) + c * x
            if s.is_zero():
                out.pop(X, None)
            else:
                out[X] = s
    return StableElement(right.n, out)


def k_word(word: Sequence[DecoratedMatrix], right: StableElement | None = None) -> StableElement:
    """[w_1] ... [w_k] (. right), all but the last factor of generator type."""
    word = list(word)
    if right is None:
        if not word:
            raise ValueError("empty word")
        right = StableElement.basis(word[-1])
        word = word[:-1]
    for L in reversed(word):
        right = k_mul(L, right)
    return right


def eta(x: StableElement, d: int) -> AlgebraElement:
    """Keep the terms lying in Xi_{n|n,d}, drop the rest."""
    return AlgebraElement(x.n, d, "bracket", {m: c for m, c in x.terms.items() if m.total == d and is_valid(m, "xi")})


def eta_compatibility(n: int, d: int) -> dict:
    """eta(g . [A]) = eta(g) * eta([A]) for every generator-type g with co(g) = ro(A), A in Xi_{n|n,d}."""
    from .decorated import enumerate_basis

    checked = 0
    fails = []
    for A in enumerate_basis(n, d):
        ro = A.ro
        gens = [diagonal(ro), diagonal(ro, [(1, 1)])]
        for h in range(1, n):
            b = list(ro)
            b[h] -= 1
            gens.append(diagonal(b).plus({(h, h + 1): 1}))
            c = list(ro)
            c[h - 1] -= 1
            gens.append(diagonal(c).plus({(h + 1, h): 1}))
        for g in gens:
            if not is_valid(g, "xi_tilde"):
                continue
            checked += 1
            lhs = eta(k_mul(g, StableElement.basis(A)), d)
            if is_valid(g, "xi"):
                rhs = mul_bracket(g, AlgebraElement.basis_element(A))
            else:
                rhs = AlgebraElement(n, d, "bracket", {})
            if lhs != rhs:
                fails.append({"generator": str(g), "right": str(A), "lhs": str(lhs), "rhs": str(rhs)})
    return {"n": n, "d": d, "checked": checked, "passed": not fails, "failures": fails[:10]}


# ------------------------------------------------------------- fitting

@dataclass(frozen=True)
class StableFit:
    """G_Z(v, v') = terms[Z] / denominators[Z], valid for all p >= p0."""

    terms: dict
    p0: int
    degree: int
    denominators: dict = field(default_factory=dict)

    def den(self, Z) -> LaurentPoly:
        return self.denominators.get(Z, ONE)

    def at(self, p: int) -> dict:
        """Coefficients predicted for the shift p (labels unshifted)."""
        out = {}
        for Z, g in self.terms.items():
            c = g.substitute(p).exact_div(self.den(Z))
            if not c.is_zero():
                out[Z] = c
        return out

    def k_product(self, n: int) -> StableElement:
        return StableElement(n, {Z: g.at_vprime_one().exact_div(self.den(Z)) for Z, g in self.terms.items()})

    def to_json(self) -> dict:
        out = []
        for Z, g in sorted(self.terms.items(), key=lambda kv: (kv[0].a, kv[0].delta)):
            dz = self.den(Z)
            text = str(g) if dz == ONE else f"({g}) / ({dz})"
            out.append({"matrix": Z.to_json(), "numerator": g.to_json(), "denominator": dz.to_json(), "text": text})
        return {"p0": self.p0, "degree": self.degree, "terms": out}


def _divide_two(g: TwoVarLaurent, f: LaurentPoly) -> TwoVarLaurent:
    out = {}
    for b in g.vprime_degrees():
        for a, x in g.coefficient(b).exact_div(f).items():
            out[(a, b)] = x
    return TwoVarLaurent(out)


def _reduce(g: TwoVarLaurent, factors: list) -> tuple:
    """Cancel as many denominator factors as divide the numerator exactly."""
    den = ONE
    for f in factors:
        try:
            g = _divide_two(g, f)
        except InexactDivision:
            den = den * f
    return g, den


class FitError(RuntimeError):
    pass


def _min_shift(word: Sequence[DecoratedMatrix]) -> int:
    p = 0
    for m in word:
        ok, why = validate(m, "xi_tilde")
        if not ok:
            raise ValueError(f"{m} is not in the stable index set: {why}")
        p = max(p, max(-m[i, i] + (1 if (i, i) in m.delta else 0) for i in range(1, m.n + 1)))
    return p


def shifted_product(word: Sequence[DecoratedMatrix], p: int) -> dict:
    """[_pA_1] * ... * [_pA_k] in MS via the kernels, labels shifted back by -p."""
    ws = [shift(m, p) for m in word]
    n = ws[-1].n
    x = AlgebraElement.basis_element(ws[-1])
    for L in reversed(ws[:-1]):
        x = mul_bracket(L, x)
    return {shift(Z, -p): c for Z, c in x.terms.items()}


def _interpolate(points: list, degree: int) -> TwoVarLaurent:
    """Find sum_{b=-degree..degree} g_b(v) v'^b through (p, c_p), v' = v^-p, by Newton divided differences."""
    # P(x) = x^degree * G(x) with x = v^-p is a polynomial of degree 2*degree in x
    xs = [v(-p) for p, _ in points]
    ys = [c.shift(-p * degree) for p, c in points]
    coef = list(ys)
    m = len(xs)
    for j in range(1, m):
        for i in range(m - 1, j - 1, -1):
            num = coef[i] - coef[i - 1]
            den = xs[i] - xs[i - j]
            coef[i] = num.exact_div(den)
    # expand the Newton form into powers of x
    poly = [ZERO]  # poly[k] = coefficient of x^k
    for i in range(m - 1, -1, -1):
        # poly = poly * (x - xs[i]) + coef[i]
        new = [ZERO] * (len(poly) + 1)
        for k, c in enumerate(poly):
            new[k + 1] = new[k + 1] + c
            new[k] = new[k] - c * xs[i]
        new[0] = new[0] + coef[i]
        poly = new
    out: dict = {}
    for k, c in enumerate(poly):
        b = k - degree
        for a, x in c.items():
            out[(a, b)] = out.get((a, b), 0) + x
    return TwoVarLaurent(out)


def stabilize_fit(word: Sequence[DecoratedMatrix], p_start: int | None = None, degree: int | None = None,
                  holdout: int = 2, max_degree: int = 16, p_max: int | None = None) -> StableFit:
    """Fit [_pA_1]...[_pA_k] = sum G_Z(v, v^-p) [_pZ] across consecutive p, validated on held-out p.

    p_max, if given, bounds every shift used (fit points and held-out points).
    """
    word = list(word)
    if not word:
        raise ValueError("empty word")
    for a, b in zip(word, word[1:]):
        if a.co != b.ro:
            raise ValueError("margins are not chain-compatible")
    touches = sum(1 for m in word if m.delta or any(m[i, i] for i in range(1, m.n + 1)))
    # q-binomials in a shifted entry have denominators (1 - v^-2)...(1 - v^-2R); clear them
    factors = []
    for m in word:
        R = sum(m[i, j] for i in range(1, m.n + 1) for j in range(1, m.n + 1) if i != j)
        factors += [ONE - v(-2 * i) for i in range(1, R + 1)]
    degree = max(1, 2 * touches) if degree is None else degree
    p0 = _min_shift(word) if p_start is None else p_start
    cache: dict = {}

    def prod_at(p):
        if p not in cache:
            cache[p] = shifted_product(word, p)
        return cache[p]

    while degree <= max_degree:
        npts = 2 * degree + 1
        for start in range(p0, p0 + 4):
            if p_max is not None and start + npts + holdout - 1 > p_max:
                break
            fit = _try_fit(prod_at, start, degree, npts, holdout, factors)
            if fit is not None:
                return fit
        degree *= 2
    raise FitError("p0 too small or v'-degree bound exceeded; retry with a larger p_start")


def _try_fit(prod_at, p0: int, degree: int, npts: int, holdout: int, factors: list):
    den = ONE
    for f in factors:
        den = den * f
    ps = list(range(p0, p0 + npts))
    labels = set()
    for p in ps:
        labels |= set(prod_at(p))
    try:
        terms = {}
        for Z in labels:
            g = _interpolate([(p, prod_at(p).get(Z, ZERO) * den) for p in ps], degree)
            if g.coeffs:
                terms[Z] = g
    except InexactDivision:
        return None
    dens = {}
    for Z in list(terms):
        terms[Z], dz = _reduce(terms[Z], factors)
        if dz != ONE:
            dens[Z] = dz
    fit = StableFit(terms, p0, degree, dens)
    try:
        for p in range(p0 + npts, p0 + npts + holdout):
            if fit.at(p) != prod_at(p):
                return None
        fit.k_product(1 if not terms else next(iter(terms)).n)
    except InexactDivision:
        return None
    return fit


# ------------------------------------------------------- window battery

class _Gen:
    """An infinite sum sum_Z coeff(Z) [A + Z]_Delta over diagonal Z, possibly several (A, Delta) parts."""

    def __init__(self, n: int, parts: list, name: str):
        self.n = n
        self.parts = parts  # list of (A0 off-diagonal matrix, delta, coeff function of z)
        self.name = name

    def slice(self, co: tuple):
        """The terms with column sums co: list of (matrix, coefficient, z)."""
        out = []
        for A0, delta, f in self.parts:
            c0 = A0.co
            z = tuple(co[i] - c0[i] for i in range(self.n))
            m = A0.plus({(i + 1, i + 1): z[i] for i in range(self.n) if z[i]})
            m = m.with_delta(delta)
            if not is_valid(m, "xi_tilde"):
                continue
            c = f(z)
            if c is not None and not c.is_zero():
                out.append((m, c, z))
        return out


def mu_generators(n: int, include_nonpositive: bool = True) -> dict:
    zero = DecoratedMatrix(tuple((0,) * n for _ in range(n)))
    g = {}
    for a in range(1, n + 1):
        g[f"K{a}"] = _Gen(n, [(zero, (), lambda z, a=a: v(z[a - 1]))], f"0(j{a})")
        g[f"K{a}^-1"] = _Gen(n, [(zero, (), lambda z, a=a: v(-z[a - 1]))], f"0(-j{a})")
    g["L"] = _Gen(n, [
        (zero, (), lambda z: v(-2 * z[0])),
        (zero, ((1, 1),), lambda z: v(-z[0]) if include_nonpositive or z[0] > 0 else None),
    ], "L")
    for i in range(1, n):
        g[f"E{i}"] = _Gen(n, [(zero.plus({(i, i + 1): 1}), (), lambda z: ONE)], f"E{i}")
        g[f"F{i}"] = _Gen(n, [(zero.plus({(i + 1, i): 1}), (), lambda z: ONE)], f"F{i}")
    return g


def _apply_word_slice(word: Sequence[_Gen], co: tuple, W: int):
    """The column-co slice of the product of the word; None if some factor leaves the window."""
    if not word:
        return {diagonal(list(co)): ONE} if all(abs(c) <= W for c in co) else None
    last = word[-1]
    cur: dict = {}
    for m, c, z in last.slice(co):
        if any(abs(x) > W for x in z):
            return None
        cur[m] = cur.get(m, ZERO) + c
    for g in reversed(word[:-1]):
        ros = {m.ro for m in cur}
        nxt: dict = {}
        for ro in ros:
            for L, c, z in g.slice(ro):
                if any(abs(x) > W for x in z):
                    return None
                part = StableElement(g.n, {m: x for m, x in cur.items() if m.ro == ro})
                for X, y in k_mul(L, part).terms.items():
                    nxt[X] = nxt.get(X, ZERO) + c * y
        cur = {k: x for k, x in nxt.items() if not x.is_zero()}
    return cur


def mu_window_check(n: int, W: int = 3, include_nonpositive: bool = True) -> dict:
    """Relations of the stabilized generators, compared slice by slice on column weights |c_i| <= W."""
    if W < 2:
        raise ValueError("window bound must be at least 2")
    G = mu_generators(n, include_nonpositive)
    q2 = qint(2)
    vm = v(1) - v(-1)
    rels: dict = {}

    def R(key, name, lhs, rhs):
        rels.setdefault(key, []).append((name, lhs, rhs))

    for a in range(1, n + 1):
        R("a", f"K{a}K{a}^-1 = 1", [(ONE, [f"K{a}", f"K{a}^-1"])], [(ONE, [])])
        R("i", f"K{a}L = LK{a}", [(ONE, [f"K{a}", "L"])], [(ONE, ["L", f"K{a}"])])
        for i in range(1, n):
            ex = (1 if a == i else 0) - (1 if a == i + 1 else 0)
            R("f", f"K{a}E{i}", [(ONE, [f"K{a}", f"E{i}"])], [(v(ex), [f"E{i}", f"K{a}"])])
            R("g", f"K{a}F{i}", [(ONE, [f"K{a}", f"F{i}"])], [(v(-ex), [f"F{i}", f"K{a}"])])
    for i in range(1, n - 1):
        for key, X, Y in (("b", "E", None), ("c", "E", 1), ("d", "F", None), ("e", "F", 1)):
            x, y = (f"{X}{i}", f"{X}{i+1}") if Y is None else (f"{X}{i+1}", f"{X}{i}")
            R(key, f"{x}^2{y} + {y}{x}^2 = [2]{x}{y}{x}", [(ONE, [x, x, y]), (ONE, [y, x, x])], [(q2, [x, y, x])])
    for i in range(1, n):
        for j in range(1, n):
            lhs = [(vm, [f"E{i}", f"F{j}"]), (-vm, [f"F{j}", f"E{i}"])]
            rhs = [(ONE, [f"K{i}", f"K{i+1}^-1"]), (-ONE, [f"K{i}^-1", f"K{i+1}"])] if i == j else []
            R("h", f"E{i}F{j} - F{j}E{i}", lhs, rhs)
        R("k", f"LE{i} = LE{i}L", [(ONE, ["L", f"E{i}"])], [(ONE, ["L", f"E{i}", "L"])])
        R("l", f"LF{i} = LF{i}L", [(ONE, ["L", f"F{i}"])], [(ONE, ["L", f"F{i}", "L"])])
        R("m", f"[2]E{i}LE{i}", [(q2, [f"E{i}", "L", f"E{i}"])],
          [(v(-1), [f"E{i}", f"E{i}", "L"]), (v(1), ["L", f"E{i}", f"E{i}"])])
        R("n", f"[2]F{i}LF{i}", [(q2, [f"F{i}", "L", f"F{i}"])],
          [(v(1), [f"F{i}", f"F{i}", "L"]), (v(-1), ["L", f"F{i}", f"F{i}"])])
    R("j", "L^2 = L", [(ONE, ["L", "L"])], [(ONE, ["L"])])
    # supplementary: the transpose image of (k)
    for i in range(1, n):
        R("l*", f"F{i}L = LF{i}L", [(ONE, [f"F{i}", "L"])], [(ONE, ["L", f"F{i}", "L"])])

    cols = list(product(range(-W, W + 1), repeat=n))

    def side(terms, co):
        tot: dict = {}
        for c, w in terms:
            s = _apply_word_slice([G[x] for x in w], co, W)
            if s is None:
                return None
            for k, x in s.items():
                tot[k] = tot.get(k, ZERO) + c * x
        return {k: x for k, x in tot.items() if not x.is_zero()}

    report = []
    for key in sorted(rels, key=lambda k: (k.rstrip("*"), k)):
        compared = excluded = 0
        fails = []
        for name, lhs, rhs in rels[key]:
            for co in cols:
                a = side(lhs, co)
                b = side(rhs, co) if a is not None else None
                if a is None or b is None:
                    excluded += 1
                    continue
                compared += 1
                if a != b:
                    if len(fails) < 5:
                        lab = sorted(set(a) ^ set(b) | {k for k in a if k in b and a[k] != b[k]},
                                     key=lambda m: (m.a, m.delta))[0]
                        fails.append({"instance": name, "column_weight": list(co), "label": str(lab),
                                      "lhs": str(a.get(lab, ZERO)), "rhs": str(b.get(lab, ZERO))})
                    else:
                        fails.append(None)
        rec = {"relation": key, "compared": compared, "boundary_excluded": excluded, "passed": not fails and compared > 0,
               "failures": [f for f in fails if f is not None], "failure_count": len(fails)}
        if key.endswith("*"):
            rec["supplementary"] = True
        report.append(rec)
    return {"n": n, "window": W, "include_nonpositive": include_nonpositive, "relations": report}


def random_generator_word(n: int, length: int, rng: random.Random, d_hint: int = 2) -> list:
    """A chain-compatible word of generator-type labels over integer diagonals."""
    co = tuple(rng.randint(0, d_hint) for _ in range(n))
    word = []
    for _ in range(length):
        kind = rng.choice(["B", "C", "Ddec", "D"] if n > 1 else ["Ddec", "D"])
        if kind == "D":
            m = diagonal(list(co))
        elif kind == "Ddec":
            m = diagonal(list(co), [(1, 1)])
        else:
            h = rng.randint(1, n - 1)
            dd = list(co)
            if kind == "B":
                dd[h] -= 1
                m = diagonal(dd).plus({(h, h + 1): 1})
            else:
                dd[h - 1] -= 1
                m = diagonal(dd).plus({(h + 1, h): 1})
        word.insert(0, m)
        co = m.ro
    return word
