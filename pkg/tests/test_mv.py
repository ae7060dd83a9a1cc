from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mirabolic import linalg
from mirabolic.laurent import ONE, v
from mirabolic.mv import (
    MVBasisKey, MVElement, act_left, act_right, compare_printed, double_centralizer_check, enumerate_mv_basis,
    left_generators, mu_battery, mv_dimension, operator_matrix, xi1_dictionary, xi1_inverse, xi1_set,
)
from mirabolic.schur import LGEN, E, F, Hm, Hp


@pytest.mark.parametrize("n,d,size", [(2, 2, 13), (1, 1, 2), (1, 0, 1), (3, 2, 30), (2, 3, 38)])
def test_dimension(n, d, size):
    assert len(enumerate_mv_basis(n, d)) == size == mv_dimension(n, d)


def test_keys_with_nonempty_j_at_22():
    assert sum(1 for k in enumerate_mv_basis(2, 2) if k.j) == 9


def test_dictionary_example():
    m = xi1_dictionary(MVBasisKey((2, 1), (2,)), 2)
    assert m.a == ((0, 1), (1, 0)) and m.delta == ((1, 2),)


@pytest.mark.parametrize("n,d", [(2, 2), (3, 2), (2, 3)])
def test_dictionary_is_a_bijection(n, d):
    keys = enumerate_mv_basis(n, d)
    images = [xi1_dictionary(k, n) for k in keys]
    assert all(xi1_inverse(m) == k for k, m in zip(keys, images))
    assert all(c == 1 for m in images for c in m.co)
    assert set(images) == set(xi1_set(n, d))


def test_h_acts_diagonally():
    for key in enumerate_mv_basis(2, 2):
        x = MVElement.basis(2, key)
        for a in (1, 2):
            cnt = sum(1 for r in key.r if r == a)
            assert act_left(Hp(a), x) == x.scale(v(cnt))
            assert act_left(Hm(a), x) == x.scale(v(-cnt))


def test_l_on_an_undecorated_key():
    # the prefactor is v^{-2 #(r_c = 1)}
    key = MVBasisKey((1, 2))
    got = act_left(LGEN, MVElement.basis(2, key))
    want = MVElement(2, 2, {key: v(-2), MVBasisKey((1, 2), (1,)): v(-2)})
    assert got == want


@pytest.mark.parametrize("n,d", [(2, 2), (3, 2), (2, 3)])
def test_left_and_right_actions_commute(n, d):
    keys = enumerate_mv_basis(n, d)
    for g in left_generators(n):
        for t in range(d):
            for key in keys:
                x = MVElement.basis(n, key)
                assert act_right(act_left(g, x), t) == act_left(g, act_right(x, t))


def test_right_quadratic_relations_as_operators():
    q = v(2)
    for key in enumerate_mv_basis(2, 2):
        x = MVElement.basis(2, key)
        assert act_right(act_right(x, 1), 1) == act_right(x, 1).scale(q - 1) + x.scale(q)
        assert act_right(act_right(x, 0), 0) == act_right(x, 0).scale(q - 2) + x.scale(q - 1)


def test_decorated_last_position_under_tau0():
    # j_k = 1: e_{r,j} tau_0 = (v^2 - 2) e_{r,j} + (v^2 - 1) e_{r, j minus 1}
    x = MVElement.basis(2, MVBasisKey((1, 2), (1,)))
    assert act_right(x, 0) == MVElement(2, 2, {MVBasisKey((1, 2), (1,)): v(2) - 2, MVBasisKey((1, 2)): v(2) - 1})


def test_operator_matrices():
    H = operator_matrix(Hp(1), 2, 2, 2)
    assert all(H[i][j] == 0 for i in range(13) for j in range(13) if i != j)
    for v0 in (2, Fraction(5, 3)):
        Lm = operator_matrix(LGEN, 2, 2, v0)
        assert linalg.matmul(Lm, Lm) == Lm
    with pytest.raises(ValueError):
        operator_matrix(LGEN, 2, 2, 0)


def test_relation_families_on_mv():
    rep = {r["relation"]: r["passed"] for r in mu_battery(2, 2)}
    assert all(ok for key, ok in rep.items() if key != "m")
    assert not rep["m"]


def test_double_centralizer_22():
    r = double_centralizer_check(2, 2)
    assert r["passed"]
    assert (r["dim_S"], r["dim_H"], r["dim_commutant_H"], r["dim_commutant_S"]) == (27, 7, 27, 7)


def test_double_centralizer_11_and_preconditions():
    assert double_centralizer_check(1, 1)["passed"]
    with pytest.raises(ValueError):
        double_centralizer_check(1, 2)
    with pytest.raises(ValueError):
        double_centralizer_check(2, 2, v0=1)


def test_printed_formula_report_shape():
    r = compare_printed(2, 2, "right")
    assert r["checked"] == 26 and r["mismatches"] == 12


@pytest.mark.parametrize("n,d,q", [(2, 2, 2), (2, 2, 3), (3, 2, 2)])
def test_left_kernels_on_xi1_match_rectangular_counts(n, d, q):
    from mirabolic.geometry import oracle
    from mirabolic.verify import E_KERNELS, KINDS, left_generator

    checked = 0
    for A in xi1_set(n, d):
        for kind in KINDS:
            for h in (range(1, n + 1) if kind == "dec" else range(1, n)):
                L = left_generator(kind, A, h)
                if L is None:
                    continue
                got = {X: c.at_v2(q) for X, c in E_KERNELS[kind](A, h).items()}
                got = {X: c for X, c in got.items() if c}
                assert got == oracle(n, d, q, m=d).product_counts(L, A), (kind, h, A)
                checked += 1
    assert checked > 0
