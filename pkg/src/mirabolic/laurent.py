"""Exact Laurent polynomials in v, and a two-variable variant in (v, v').

Coefficients are Python ints, so nothing ever overflows.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping


class InexactDivision(ArithmeticError):
    pass


class LaurentPoly:
    """An element of Z[v, v^-1] stored as {exponent: coefficient}."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        c = {}
        if coeffs:
            for k, x in coeffs.items():
                if x:
                    c[int(k)] = int(x)
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c: dict) -> "LaurentPoly":
        p = cls.__new__(cls)
        p._c = c
        p._hash = None
        return p

    @classmethod
    def const(cls, x: int) -> "LaurentPoly":
        return cls._raw({0: x} if x else {})

    @classmethod
    def mono(cls, k: int, x: int = 1) -> "LaurentPoly":
        return cls._raw({k: x} if x else {})

    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    def items(self):
        return self._c.items()

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def min_exp(self) -> int:
        return min(self._c)

    def max_exp(self) -> int:
        return max(self._c)

    def __getitem__(self, k: int) -> int:
        return self._c.get(k, 0)

    @staticmethod
    def coerce(x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, int):
            return LaurentPoly.const(x)
        return NotImplemented

    def __eq__(self, other) -> bool:
        other = LaurentPoly.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __add__(self, other):
        other = LaurentPoly.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._c:
            return self
        if not self._c:
            return other
        c = dict(self._c)
        for k, x in other._c.items():
            y = c.get(k, 0) + x
            if y:
                c[k] = y
            else:
                c.pop(k, None)
        return LaurentPoly._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({k: -x for k, x in self._c.items()})

    def __sub__(self, other):
        other = LaurentPoly.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = LaurentPoly.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._c or not other._c:
            return LaurentPoly._raw({})
        c: dict = {}
        for k1, x1 in self._c.items():
            for k2, x2 in other._c.items():
                k = k1 + k2
                c[k] = c.get(k, 0) + x1 * x2
        return LaurentPoly._raw({k: x for k, x in c.items() if x})

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            if len(self._c) == 1:
                (k, x), = self._c.items()
                if x in (1, -1):
                    return LaurentPoly.mono(-k * (-e), x ** (-e))
            raise InexactDivision("inexact division")
        out = LaurentPoly.const(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by v^k."""
        if k == 0:
            return self
        return LaurentPoly._raw({e + k: x for e, x in self._c.items()})

    def scale(self, x: int) -> "LaurentPoly":
        if x == 0:
            return LaurentPoly._raw({})
        return LaurentPoly._raw({k: x * y for k, y in self._c.items()})

    def exact_div(self, other) -> "LaurentPoly":
        """Divide exactly; raise InexactDivision if a remainder is left."""
        other = LaurentPoly.coerce(other)
        if not other._c:
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if not self._c:
            return self
        # strip powers of v, then ordinary long division from the top
        a0, b0 = self.min_exp(), other.min_exp()
        num = [0] * (self.max_exp() - a0 + 1)
        for k, x in self._c.items():
            num[k - a0] = x
        den = [0] * (other.max_exp() - b0 + 1)
        for k, x in other._c.items():
            den[k - b0] = x
        lead = den[-1]
        dq = len(num) - len(den)
        if dq < 0:
            raise InexactDivision("inexact division")
        quot = [0] * (dq + 1)
        for i in range(dq, -1, -1):
            top = num[i + len(den) - 1]
            if top == 0:
                continue
            if top % lead:
                raise InexactDivision("inexact division")
            qi = top // lead
            quot[i] = qi
            for j, y in enumerate(den):
                num[i + j] -= qi * y
        if any(num):
            raise InexactDivision("inexact division")
        return LaurentPoly({i + a0 - b0: x for i, x in enumerate(quot) if x})

    def bar(self) -> "LaurentPoly":
        return LaurentPoly._raw({-k: x for k, x in self._c.items()})

    def specialize(self, v0) -> Fraction:
        v0 = Fraction(v0)
        if v0 == 0:
            raise ValueError("invalid specialization")
        return sum((x * v0 ** k for k, x in self._c.items()), Fraction(0))

    def at_v2(self, q) -> Fraction:
        """Evaluate a polynomial in v^2 at v^2 = q (odd exponents are an error)."""
        q = Fraction(q)
        if q == 0:
            raise ValueError("invalid specialization")
        tot = Fraction(0)
        for k, x in self._c.items():
            if k % 2:
                raise ValueError("odd power of v cannot be evaluated at v^2 = q")
            tot += x * q ** (k // 2)
        return tot

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for k in sorted(self._c):
            x = self._c[k]
            sign = "-" if x < 0 else "+"
            a = abs(x)
            if k == 0:
                body = str(a)
            else:
                mon = "v" if k == 1 else f"v^{k}"
                body = mon if a == 1 else f"{a}*{mon}"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def to_json(self) -> dict:
        return {str(k): str(self._c[k]) for k in sorted(self._c)}

    @classmethod
    def from_json(cls, obj: Mapping) -> "LaurentPoly":
        return cls({int(k): int(x) for k, x in obj.items()})


ZERO = LaurentPoly()
ONE = LaurentPoly.const(1)
V = LaurentPoly.mono(1)


def v(k: int = 1) -> LaurentPoly:
    return LaurentPoly.mono(k)


def lsum(items: Iterable[LaurentPoly]) -> LaurentPoly:
    c: dict = {}
    for p in items:
        for k, x in p.items():
            c[k] = c.get(k, 0) + x
    return LaurentPoly({k: x for k, x in c.items() if x})


def _v2m_minus_1(m: int) -> LaurentPoly:
    if m == 0:
        return ZERO
    return LaurentPoly({2 * m: 1, 0: -1})


_QB: dict = {}


def qbinom(N: int, t: int) -> LaurentPoly:
    """Gaussian binomial [N, t] = prod_{i=1..t} (v^{2(N-i+1)} - 1)/(v^{2i} - 1).

    Valid for every integer N; for N < 0 the literal product still cancels to a
    Laurent polynomial.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    key = (N, t)
    hit = _QB.get(key)
    if hit is not None:
        return hit
    if t == 0:
        res = ONE
    elif 0 <= N < t:
        res = ZERO
    else:
        num = ONE
        den = ONE
        for i in range(1, t + 1):
            num = num * _v2m_minus_1(N - i + 1)
            den = den * _v2m_minus_1(i)
        res = num.exact_div(den)
    _QB[key] = res
    return res


def qint(N: int) -> LaurentPoly:
    """Symmetric quantum integer (v^N - v^-N)/(v - v^-1)."""
    if N == 0:
        return ZERO
    num = LaurentPoly({N: 1, -N: -1})
    return num.exact_div(LaurentPoly({1: 1, -1: -1}))


def qfactorial(N: int) -> LaurentPoly:
    out = ONE
    for k in range(1, N + 1):
        out = out * qint(k)
    return out


def parse_laurent(text: str) -> LaurentPoly:
    """Parse the text form produced by str(), e.g. '1 + v^2' or '-3*v^-1 + v'."""
    s = text.replace(" ", "")
    if s in ("", "0"):
        return ZERO
    terms = []
    cur = ""
    for i, ch in enumerate(s):
        if ch in "+-" and i > 0 and s[i - 1] != "^":
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    terms.append(cur)
    out: dict = {}
    for t in terms:
        if not t:
            continue
        sign = -1 if t[0] == "-" else 1
        t = t.lstrip("+-")
        if "v" in t:
            coef, _, mon = t.partition("v")
            coef = coef.rstrip("*")
            c = int(coef) if coef else 1
            k = int(mon[1:]) if mon.startswith("^") else 1
        else:
            c, k = int(t), 0
        out[k] = out.get(k, 0) + sign * c
    return LaurentPoly(out)


class TwoVarLaurent:
    """An element of Z[v, v^-1, v', v'^-1] stored as {(exp_v, exp_v'): coefficient}."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[tuple, int] | None = None):
        self._c = {(int(a), int(b)): int(x) for (a, b), x in (coeffs or {}).items() if x}

    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    def __eq__(self, other) -> bool:
        return isinstance(other, TwoVarLaurent) and self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __add__(self, other: "TwoVarLaurent") -> "TwoVarLaurent":
        c = dict(self._c)
        for k, x in other._c.items():
            c[k] = c.get(k, 0) + x
        return TwoVarLaurent(c)

    def __mul__(self, other: "TwoVarLaurent") -> "TwoVarLaurent":
        c: dict = {}
        for (a1, b1), x1 in self._c.items():
            for (a2, b2), x2 in other._c.items():
                k = (a1 + a2, b1 + b2)
                c[k] = c.get(k, 0) + x1 * x2
        return TwoVarLaurent(c)

    def vprime_degrees(self) -> set:
        return {b for _, b in self._c}

    def substitute(self, p: int) -> LaurentPoly:
        """Set v' = v^-p."""
        out: dict = {}
        for (a, b), x in self._c.items():
            k = a - p * b
            out[k] = out.get(k, 0) + x
        return LaurentPoly(out)

    def at_vprime_one(self) -> LaurentPoly:
        return self.substitute(0)

    def coefficient(self, b: int) -> LaurentPoly:
        """The coefficient of v'^b, a Laurent polynomial in v."""
        return LaurentPoly({a: x for (a, bb), x in self._c.items() if bb == b})

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for b in sorted(self.vprime_degrees()):
            c = self.coefficient(b)
            mon = "" if b == 0 else ("*w" if b == 1 else f"*w^{b}")
            parts.append(f"({c}){mon}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"TwoVarLaurent({self})"

    def to_json(self) -> dict:
        return {f"{a},{b}": str(x) for (a, b), x in sorted(self._c.items())}
