import random

import pytest
from hypothesis import given, strategies as st

from conftest import basis
from mirabolic.decorated import DecoratedMatrix, diagonal, dim_stats
from mirabolic.geometry import (
    FqSubspace, canonical_triple, contains, convolution_count, enumerate_flags, fq_space, gl_invariance_check,
    oracle, orbit_dimension_fit, orbit_invariant, structure_constant_interpolated, subspace_ops,
)
from mirabolic.laurent import v


@pytest.mark.parametrize("q,count", [(2, 5), (3, 6)])
def test_flag_counts(q, count):
    assert len(enumerate_flags(2, 2, q)) == count
    assert len(enumerate_flags(1, 1, q)) == 1


def test_subspace_lattice_dimensions():
    sp = fq_space(2, 4)
    rng = random.Random(0)
    def rand_sub():
        vecs = [[rng.randrange(2) for _ in range(4)] for _ in range(rng.randint(0, 3))]
        return sp.subspaces[sp.span(vecs)]

    subs = [rand_sub() for _ in range(200)]
    for a, b in zip(subs, subs[1:]):
        ops = subspace_ops(a, b)
        assert ops["sum"].dim + ops["intersection"].dim == a.dim + b.dim
        assert subspace_ops(a, a)["intersection"] == a
    e1, e2 = sp.subspaces[sp.span([[1, 0, 0, 0]])], sp.subspaces[sp.span([[0, 1, 0, 0]])]
    ops = subspace_ops(e1, e2)
    assert ops["sum"].dim == 2 and ops["intersection"].dim == 0
    assert contains(ops["sum"], [1, 1, 0, 0]) and not contains(ops["sum"], [0, 0, 1, 0])
    with pytest.raises(ValueError):
        subspace_ops(e1, fq_space(3, 4).subspaces[0])


def test_canonical_triples():
    t = canonical_triple(diagonal([1, 1], [(1, 1)]), 2)
    assert orbit_invariant(t) == diagonal([1, 1], [(1, 1)])
    assert orbit_invariant(canonical_triple(diagonal([2]), 3)) == diagonal([2])


@pytest.mark.parametrize("n,d,q", [(2, 2, 2), (2, 2, 3), (3, 2, 2)])
def test_round_trip_exhaustive(n, d, q):
    for m in basis(n, d):
        assert orbit_invariant(canonical_triple(m, q), n) == m


def test_invariance_under_random_group_elements():
    assert gl_invariance_check(2, 3, 2, 300, seed=1) == 0
    assert gl_invariance_check(3, 2, 3, 300, seed=2) == 0


def test_convolution_unit_and_mismatch():
    A = DecoratedMatrix.make([[0, 1], [1, 0]], [(1, 2)])
    assert convolution_count(diagonal(list(A.ro)), A, A, 2) == 1
    assert convolution_count(diagonal([2, 0]), A, A, 2) == 0


@pytest.mark.parametrize("n,d,q", [(2, 2, 2), (2, 2, 3), (3, 3, 2)])
def test_orbit_partition_total(n, d, q):
    o = oracle(n, d, q)
    nf = len(o.flags())
    assert sum(o.census().values()) == nf * nf * q ** d


def test_orbit_dimensions_match_point_count_degrees():
    for m in basis(2, 2):
        assert orbit_dimension_fit(m, (2, 3, 5, 7))["degree"] == dim_stats(m)[0]


def test_interpolated_structure_constant_of_the_unit():
    L = DecoratedMatrix.make([[1, 1], [0, 0]], [(1, 2)])
    assert structure_constant_interpolated(diagonal(list(L.ro)), L, L, [2, 3, 5]) == v(0)


def test_interpolation_matches_formulas():
    from mirabolic.schur import AlgebraElement, mul_e_basis
    from mirabolic.verify import left_generator

    rng = random.Random(3)
    for A in rng.sample(basis(2, 2), 8):
        for kind in ("raise", "lower", "dec"):
            L = left_generator(kind, A, 1)
            if L is None:
                continue
            y = mul_e_basis(L, AlgebraElement.basis_element(A, "e"))
            for X, c in y.terms.items():
                assert structure_constant_interpolated(L, A, X, [2, 3, 5]) == c
