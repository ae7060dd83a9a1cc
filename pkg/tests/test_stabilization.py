import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import basis_label
from mirabolic.decorated import DecoratedMatrix, diagonal
from mirabolic.laurent import ONE, TwoVarLaurent, v
from mirabolic.schur import AlgebraElement, mul_bracket
from mirabolic.stabilization import (
    FitError, StableElement, eta, eta_compatibility, k_mul, k_word, mu_window_check, random_generator_word,
    shift, shifted_product, stabilize_fit,
)


def test_eta_drops_labels_outside():
    x = StableElement(2, {diagonal([-1, 3]): ONE, diagonal([1, 1]): v(1)})
    assert eta(x, 2) == AlgebraElement(2, 2, "bracket", {diagonal([1, 1]): v(1)})


@given(basis_label(2, 2))
def test_eta_is_identity_inside(m):
    assert eta(StableElement.basis(m), 2) == AlgebraElement.basis_element(m)


@pytest.mark.parametrize("n,d", [(2, 2), (2, 3), (3, 2)])
def test_eta_is_compatible_with_products(n, d):
    r = eta_compatibility(n, d)
    assert r["passed"], r["failures"][:2]


def test_diagonal_left_factor_filters_margins():
    A = DecoratedMatrix.make([[-2, 1], [0, 4]], [(1, 2)])
    assert k_mul(diagonal(list(A.ro)), StableElement.basis(A)) == StableElement.basis(A)
    assert k_mul(diagonal([0, 0]), StableElement.basis(A)).is_zero()


@given(basis_label(2, 3))
def test_k_mul_matches_schur_for_large_shifts(A):
    big = shift(A, 4)
    for L in (diagonal(list(big.ro), [(1, 1)]), diagonal(list(big.ro), [(2, 2)])):
        got = k_mul(L, StableElement.basis(big))
        want = mul_bracket(L, AlgebraElement.basis_element(big))
        assert got.terms == want.terms


def test_length_one_word_is_constant_in_vprime():
    m = DecoratedMatrix.make([[0, 1], [2, -1]], [(1, 2)])
    fit = stabilize_fit([m])
    assert fit.terms == {m: TwoVarLaurent({(0, 0): 1})}


def test_decorating_an_undecorated_label_fit():
    A = DecoratedMatrix.make([[2, 1, 0], [1, 1, 1], [0, 1, 1]])
    fit = stabilize_fit([diagonal(list(A.ro), [(1, 1)]), A])
    want = {A.with_delta([(1, t)]): TwoVarLaurent({(-sum(A[1, j] for j in range(t + 1, 4)), 0): 1})
            for t in (1, 2)}
    assert fit.terms == want


def test_fit_reproduces_products_beyond_the_fitting_range():
    A = DecoratedMatrix.make([[1, 1, 1], [0, 1, 2], [1, 0, 1]], [(2, 2)])
    word = [diagonal(list(A.ro), [(1, 1)]), A]
    fit = stabilize_fit(word)
    for p in (fit.p0 + 12, fit.p0 + 15):
        assert fit.at(p) == shifted_product(word, p)


def test_decorated_first_row_fit():
    A = DecoratedMatrix.make([[0, 1], [1, 0]], [(1, 2), (2, 1)])
    fit = stabilize_fit([diagonal(list(A.ro), [(1, 1)]), A])
    assert fit.terms[A] == TwoVarLaurent({(1, -1): 1, (-1, -1): -1, (-1, 1): -1})
    assert fit.terms[A.with_delta([(2, 1)])] == TwoVarLaurent({(0, -1): 1, (-2, -1): -1})


def test_fit_failure_with_too_narrow_a_range():
    A = DecoratedMatrix.make([[1, 1], [0, 1]])
    with pytest.raises(FitError):
        stabilize_fit([diagonal(list(A.ro), [(1, 1)]), A], p_start=0, p_max=3)


def test_invalid_labels_are_rejected():
    with pytest.raises(ValueError):
        stabilize_fit([DecoratedMatrix.make([[1, 0], [0, 1]], [(1, 2)])])
    with pytest.raises(ValueError):
        stabilize_fit([diagonal([1, 1]), diagonal([2, 0])])


@settings(max_examples=25)
@given(st.integers(2, 3), st.integers(1, 4), st.integers(0, 10 ** 6))
def test_fit_at_vprime_one_is_the_k_product(n, length, seed):
    w = random_generator_word(n, length, random.Random(seed))
    assert stabilize_fit(w).k_product(n) == k_word(w)


def test_window_relations_n2():
    rep = {r["relation"]: r for r in mu_window_check(2, 3)["relations"]}
    for key in ("a", "f", "g", "h", "i", "j", "k", "m", "n", "l*"):
        assert rep[key]["passed"], key
        assert rep[key]["compared"] > 0
    assert not rep["l"]["passed"]
    assert rep["h"]["boundary_excluded"] > 0


def test_window_bound():
    with pytest.raises(ValueError):
        mu_window_check(2, 1)
