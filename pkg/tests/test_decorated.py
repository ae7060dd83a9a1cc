import json

import pytest
from hypothesis import given

from conftest import basis, basis_label
from mirabolic.decorated import (
    DecoratedMatrix, decorated_leq, diagonal, enumerate_basis, is_valid, parse_decorated, transpose, validate,
)
from mirabolic.stabilization import shift

REM = DecoratedMatrix.make([[0, 0, 1], [2, 1, 1], [1, 1, 0]], [(1, 3), (2, 1)])


def test_three_by_three_example_is_valid():
    assert is_valid(REM, "xi")
    assert REM.ro == (1, 4, 2)
    assert REM.co == (3, 2, 2)


def test_transpose_resorts_the_decoration():
    t = transpose(REM)
    assert t.delta == ((1, 2), (3, 1))
    assert transpose(t) == REM


def test_invalid_labels():
    # decorated zero entry
    assert not is_valid(DecoratedMatrix.make([[1, 0], [0, 1]], [(1, 2)]))
    # not an antichain: rows must increase while columns decrease
    assert not is_valid(DecoratedMatrix.make([[1, 1], [1, 1]], [(1, 1), (2, 2)]))
    ok, why = validate(DecoratedMatrix.make([[1, -1], [0, 1]]), "xi")
    assert not ok and why


def test_stable_index_set_allows_nonpositive_decorated_diagonal():
    m = diagonal([-1, 2], [(1, 1)])
    assert is_valid(m, "xi_tilde")
    assert not is_valid(m, "xi")
    assert is_valid(shift(m, 2), "xi")


@pytest.mark.parametrize("n,d,size", [(1, 1, 2), (2, 1, 8), (2, 2, 27)])
def test_basis_sizes(n, d, size):
    assert len(enumerate_basis(n, d)) == size


@given(basis_label(3, 2))
def test_labels_round_trip_through_text_and_json(m):
    assert parse_decorated(str(m)) == m
    assert DecoratedMatrix.from_json(json.loads(json.dumps(m.to_json()))) == m


@given(basis_label(2, 3))
def test_shift_is_invertible(m):
    assert shift(shift(m, 3), -3) == m
    assert shift(DecoratedMatrix.make([[0, 0], [0, 0]]), 3) == diagonal([3, 3])


@given(basis_label(2, 2), basis_label(2, 2))
def test_order_is_antisymmetric(a, b):
    if (a.ro, a.co) == (b.ro, b.co) and decorated_leq(a, b) and decorated_leq(b, a):
        assert a == b


def test_order_is_reflexive():
    assert all(decorated_leq(m, m) for m in basis(2, 2))
