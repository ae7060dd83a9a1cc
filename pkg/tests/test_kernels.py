import pytest
from hypothesis import given, strategies as st

from conftest import basis
from mirabolic.geometry import RankOracle, oracle
from mirabolic.verify import E_KERNELS, generator_pairs, left_generator, normalized_consistency, oracle_verify


@pytest.mark.parametrize("q", [2, 3])
def test_formulas_match_counts_exhaustively_22(q):
    r = oracle_verify(2, 2, q)
    assert r["passed"], r["failures"][:2]
    assert r["checked"] == 80


@pytest.mark.parametrize("n,d", [(2, 3), (3, 2)])
def test_formulas_match_counts_23_32(n, d):
    assert oracle_verify(n, d, 2)["passed"]


@pytest.mark.parametrize("n,d", [(2, 2), (2, 3), (3, 2)])
def test_bracket_kernels_are_rescaled_e_kernels(n, d):
    r = normalized_consistency(n, d, max_R=3)
    assert r["passed"], r["failures"][:2]


_PAIRS = generator_pairs(3, 3)


@given(st.integers(0, len(_PAIRS) - 1))
def test_two_oracles_agree(i):
    kind, h, A = _PAIRS[i]
    L = left_generator(kind, A, h)
    targets = [t for t in basis(3, 3) if t.ro == L.ro and t.co == A.co]
    assert RankOracle(2).product_counts(L, A, targets) == oracle(3, 3, 2).product_counts(L, A)


@given(st.integers(0, len(_PAIRS) - 1))
def test_sampled_formula_against_rank_oracle_at_q3(i):
    kind, h, A = _PAIRS[i]
    L = left_generator(kind, A, h)
    targets = [t for t in basis(3, 3) if t.ro == L.ro and t.co == A.co]
    got = {X: c.at_v2(3) for X, c in E_KERNELS[kind](A, h).items()}
    want = RankOracle(3).product_counts(L, A, targets)
    assert {k: x for k, x in got.items() if x} == {k: x for k, x in want.items() if x}
