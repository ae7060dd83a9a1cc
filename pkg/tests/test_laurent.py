from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import laurent
from mirabolic.laurent import (
    ONE, ZERO, InexactDivision, LaurentPoly, TwoVarLaurent, parse_laurent, qbinom, qfactorial, qint, v,
)


@given(laurent, laurent, laurent)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO
    assert a * ONE == a


@given(laurent, laurent)
def test_bar_is_a_ring_involution(a, b):
    assert a.bar().bar() == a
    assert (a * b).bar() == a.bar() * b.bar()


@given(laurent, st.integers(-3, 3).filter(bool))
def test_specialize_is_a_homomorphism(a, v0):
    b = a * a + v(1)
    assert (a * b).specialize(v0) == a.specialize(v0) * b.specialize(v0)


@given(laurent, laurent.filter(lambda x: not x.is_zero()))
def test_exact_division_recovers_factor(a, b):
    assert (a * b).exact_div(b) == a


def test_inexact_division_raises():
    with pytest.raises(InexactDivision):
        (v(2) + ONE).exact_div(v(1) + ONE)


@given(laurent)
def test_text_round_trip(a):
    assert parse_laurent(str(a)) == a


@given(st.integers(0, 7), st.integers(0, 7))
def test_qbinom_symmetry_and_pascal(N, t):
    if t <= N:
        assert qbinom(N, t) == qbinom(N, N - t)
    if N >= 1 and t >= 1:
        # [N, t] = [N-1, t-1] + v^{2t} [N-1, t]
        assert qbinom(N, t) == qbinom(N - 1, t - 1) + qbinom(N - 1, t).shift(2 * t)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_qbinom_counts_subspaces(q):
    # number of 2-dimensional subspaces of F_q^4
    assert qbinom(4, 2).at_v2(q) == (q ** 4 - 1) * (q ** 3 - 1) // ((q ** 2 - 1) * (q - 1))


def test_qbinom_negative_top_is_polynomial():
    # [-1, 1] = (v^-2 - 1)/(v^2 - 1) = -v^-2
    assert qbinom(-1, 1) == LaurentPoly({-2: -1})


def test_quantum_integers():
    assert qint(2) == v(1) + v(-1)
    assert qfactorial(3) == qint(1) * qint(2) * qint(3)
    assert qint(3).bar() == qint(3)


def test_at_v2_rejects_odd_powers():
    with pytest.raises(ValueError):
        v(1).at_v2(2)
    assert (v(2) - ONE).at_v2(3) == Fraction(2)


@given(st.dictionaries(st.tuples(st.integers(-4, 4), st.integers(-3, 3)), st.integers(-4, 4), max_size=5),
       st.integers(-5, 5))
def test_two_variable_substitution(coeffs, p):
    g = TwoVarLaurent(coeffs)
    want = LaurentPoly({})
    for (a, b), x in coeffs.items():
        want = want + LaurentPoly({a - p * b: x})
    assert g.substitute(p) == want
    assert g.at_vprime_one() == g.substitute(0)
