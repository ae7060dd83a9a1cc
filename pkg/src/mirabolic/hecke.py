"""The mirabolic Hecke algebra MH_d inside MS(d, d).

MH_d is the corner e_{I,0} MS(d, d) e_{I,0}, I the identity matrix.  Elements are
stored extensionally as e-basis elements of MS(d, d) supported on decorated
matrices with all row and column sums 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .decorated import DecoratedMatrix, identity, transpose
from .laurent import ONE, LaurentPoly, v
from .schur import AlgebraElement, from_bracket, mul_e_basis


@dataclass(frozen=True)
class HeckeElement:
    d: int
    payload: AlgebraElement

    def __post_init__(self):
        p = from_bracket(self.payload)
        ones = (1,) * self.d
        for m in p.terms:
            if m.ro != ones or m.co != ones:
                raise ValueError(f"{m} lies outside the corner e_I MS(d,d) e_I")
        object.__setattr__(self, "payload", p)

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        return HeckeElement(self.d, self.payload + other.payload)

    def __sub__(self, other: "HeckeElement") -> "HeckeElement":
        return HeckeElement(self.d, self.payload - other.payload)

    def __neg__(self) -> "HeckeElement":
        return HeckeElement(self.d, -self.payload)

    def scale(self, c) -> "HeckeElement":
        return HeckeElement(self.d, self.payload.scale(c))

    def __eq__(self, other) -> bool:
        return isinstance(other, HeckeElement) and self.d == other.d and self.payload == other.payload

    def __hash__(self):
        return hash((self.d, self.payload))

    def is_zero(self) -> bool:
        return self.payload.is_zero()

    def to_json(self) -> dict:
        return {"d": self.d, "payload": self.payload.to_json()}

    def __str__(self) -> str:
        return str(self.payload)


def _check(d: int, i: int) -> None:
    if d < 1 or not 0 <= i <= d - 1:
        raise ValueError(f"tau index {i} out of range for d={d}")


def B_mat(d: int, i: int) -> DecoratedMatrix:
    """I + E_{i,i+1} - E_{i+1,i+1}."""
    return identity(d).plus({(i, i + 1): 1, (i + 1, i + 1): -1})


def C_mat(d: int, i: int) -> DecoratedMatrix:
    """I + E_{i+1,i} - E_{i+1,i+1}."""
    return identity(d).plus({(i + 1, i): 1, (i + 1, i + 1): -1})


def one(d: int) -> HeckeElement:
    return HeckeElement(d, AlgebraElement.basis_element(identity(d), "e"))


def _left_tau(d: int, i: int, y: AlgebraElement) -> AlgebraElement:
    """tau_i * y for y in the corner (e-basis)."""
    if i == 0:
        return mul_e_basis(identity(d).with_delta([(1, 1)]), y)
    return mul_e_basis(C_mat(d, i), mul_e_basis(B_mat(d, i), y)) - y


def tau(d: int, i: int) -> HeckeElement:
    _check(d, i)
    return HeckeElement(d, _left_tau(d, i, one(d).payload))


def _transpose(x: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(x.n, x.d, x.basis, {transpose(m): c for m, c in x.terms.items()})


def right_tau(x: HeckeElement, i: int) -> HeckeElement:
    """x * tau_i, via the transpose anti-automorphism (tau_i is transpose invariant)."""
    _check(x.d, i)
    return HeckeElement(x.d, _transpose(_left_tau(x.d, i, _transpose(x.payload))))


def left_tau(i: int, x: HeckeElement) -> HeckeElement:
    _check(x.d, i)
    return HeckeElement(x.d, _left_tau(x.d, i, x.payload))


def parse_word(text: str) -> list:
    """'t0 t1 t0' -> [0, 1, 0]."""
    out = []
    for tok in text.split():
        if not tok.startswith("t") or not tok[1:].isdigit():
            raise ValueError(f"bad tau-word token {tok!r}")
        out.append(int(tok[1:]))
    return out


def word(d: int, w: Sequence[int]) -> HeckeElement:
    x = one(d)
    for i in w:
        x = right_tau(x, i)
    return x


def hecke_mul(a: HeckeElement, w: Sequence[int] | str) -> HeckeElement:
    """a * tau_{w_1} ... tau_{w_k}."""
    if isinstance(w, str):
        w = parse_word(w)
    for i in w:
        a = right_tau(a, i)
    return a


def hecke_relation_suite(d: int) -> list:
    """The defining relations of MH_d, evaluated on the images of the tau_i."""
    W = lambda *w: word(d, w)
    I = one(d)
    q = v(2)
    checks: dict = {k: [] for k in ("quadratic", "quadratic0", "braid", "commute", "mixed", "commute0")}
    checks["quadratic0"].append(("t0^2 = (v^2-2)t0 + (v^2-1)", W(0, 0), W(0).scale(q - 2) + I.scale(q - 1)))
    for i in range(1, d):
        checks["quadratic"].append((f"t{i}^2 = (v^2-1)t{i} + v^2", W(i, i), W(i).scale(q - 1) + I.scale(q)))
        if i + 1 <= d - 1:
            checks["braid"].append((f"t{i}t{i+1}t{i}", W(i, i + 1, i), W(i + 1, i, i + 1)))
        for j in range(i + 2, d):
            checks["commute"].append((f"t{i}t{j} = t{j}t{i}", W(i, j), W(j, i)))
        if i >= 2:
            checks["commute0"].append((f"t0t{i} = t{i}t0", W(0, i), W(i, 0)))
    if d >= 2:
        lhs = W(0, 1, 0, 1)
        rhs = (W(1, 0, 1) + W(1, 0)).scale(q - 1) - W(0, 1, 0)
        checks["mixed"].append(("t0t1t0t1 = (v^2-1)(t1t0t1+t1t0) - t0t1t0", lhs, rhs))
        lhs = W(1, 0, 1, 0)
        rhs = (W(1, 0, 1) + W(0, 1)).scale(q - 1) - W(0, 1, 0)
        checks["mixed"].append(("t1t0t1t0 = (v^2-1)(t1t0t1+t0t1) - t0t1t0", lhs, rhs))
    report = []
    for key, items in checks.items():
        fails = []
        for name, lhs, rhs in items:
            if lhs != rhs:
                diff = (lhs - rhs).payload.sorted_terms()[0]
                fails.append({"instance": name, "label": str(diff[0]), "difference": str(diff[1])})
        report.append({"relation": key, "instances": len(items), "passed": not fails, "failures": fails})
    return report
