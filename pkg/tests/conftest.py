import random

from hypothesis import settings, strategies as st

from mirabolic.decorated import enumerate_basis
from mirabolic.laurent import LaurentPoly

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

laurent = st.dictionaries(st.integers(-6, 6), st.integers(-5, 5), max_size=5).map(LaurentPoly)

_BASES = {}


def basis(n, d):
    if (n, d) not in _BASES:
        _BASES[(n, d)] = enumerate_basis(n, d)
    return _BASES[(n, d)]


def basis_label(n, d):
    return st.integers(0, len(basis(n, d)) - 1).map(lambda i: basis(n, d)[i])


def seeded_rng(seed=0):
    return random.Random(seed)
