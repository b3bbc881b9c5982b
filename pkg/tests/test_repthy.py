"""Kostka numbers and invariant-dimension decomposition."""

from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import hook_dim_oracle, kostka_oracle
from wss.repthy import (
    KostkaSystem,
    dominates,
    kostka,
    kostka_system,
    multiplicities,
    partitions,
    schur_string,
)


def test_partition_order_refines_dominance():
    for n in range(1, 9):
        parts = partitions(n)
        assert parts[0] == (n,)
        assert parts[-1] == (1,) * n
        for i, mu in enumerate(parts):
            for j, lam in enumerate(parts):
                if dominates(mu, lam) and mu != lam:
                    assert i < j


def test_kostka_hand_values():
    assert kostka((2,), (2,)) == 1
    assert kostka((1, 1), (2,)) == 0
    assert kostka((2,), (1, 1)) == 1
    assert kostka((1, 1), (1, 1)) == 1
    assert kostka((2, 1), (2, 1)) == 1
    assert kostka((2, 1), (1, 1, 1)) == 2


def test_kostka_against_tableau_oracle():
    for n in range(1, 7):
        for mu in partitions(n):
            for lam in partitions(n):
                assert kostka(mu, lam) == kostka_oracle(mu, lam)


def test_kostka_unitriangular():
    for n in range(1, 8):
        for mu in partitions(n):
            assert kostka(mu, mu) == 1
            for lam in partitions(n):
                if kostka(mu, lam):
                    assert dominates(mu, lam)


def test_trivial_row_all_ones():
    for n in range(1, 8):
        assert all(kostka((n,), lam) == 1 for lam in partitions(n))


def test_system_dims_are_standard_tableau_counts():
    sys6 = kostka_system(6)
    assert isinstance(sys6, KostkaSystem)
    for mu in sys6.parts:
        assert sys6.dim_irrep(mu) == hook_dim_oracle(mu)
    assert sum(sys6.dim_irrep(mu) ** 2 for mu in sys6.parts) == factorial(6)


def test_kostka_system_rejects_nonpositive():
    with pytest.raises(ValueError):
        kostka_system(0)


def test_regular_representation_decomposes_into_all_irreducibles():
    for n in range(1, 7):
        dims = {}
        for lam in partitions(n):
            d = factorial(n)
            for p in lam:
                d //= factorial(p)
            dims[lam] = d
        m = multiplicities(dims)
        for mu in partitions(n):
            assert m[mu] == hook_dim_oracle(mu)


def test_trivial_representation():
    for n in range(2, 7):
        m = multiplicities({lam: 1 for lam in partitions(n)})
        assert m[(n,)] == 1
        assert all(v == 0 for k, v in m.items() if k != (n,))


def test_weight2_three_pointed_genus3_sector():
    # invariant dims 2 / 3 / 4 decompose as two copies of the trivial
    # representation plus the standard one
    m = multiplicities({(3,): 2, (2, 1): 3, (1, 1, 1): 4})
    assert m == {(3,): 2, (2, 1): 1, (1, 1, 1): 0}
    assert schur_string(m, 1) == "(2*s[3] + s[2,1])*L^1"


def test_multiplicities_flags_bad_input():
    with pytest.raises(ValueError):
        multiplicities({(2,): 1, (1, 1): 0})  # forces negative m
    with pytest.raises(ValueError):
        multiplicities({(2,): 1})  # missing partition


def test_total_dimension_identity():
    dims = {(3,): 2, (2, 1): 3, (1, 1, 1): 4}
    m = multiplicities(dims)
    sys3 = kostka_system(3)
    assert sum(m[mu] * sys3.dim_irrep(mu) for mu in sys3.parts) == dims[(1, 1, 1)]


def test_schur_rendering():
    assert schur_string({(3,): 1}) == "s[3]"
    assert schur_string({(3,): 1}, 2) == "(s[3])*L^2"
    assert schur_string({(2, 1): 3}, 0) == "3*s[2,1]"
    assert schur_string({}, 1) == "0"
    assert schur_string({(2,): 0, (1, 1): 0}, 1) == "0"


@st.composite
def _multiplicity_vectors(draw):
    n = draw(st.integers(min_value=1, max_value=8))
    parts = partitions(n)
    vals = draw(
        st.lists(
            st.integers(min_value=0, max_value=6),
            min_size=len(parts),
            max_size=len(parts),
        )
    )
    return dict(zip(parts, vals))


@settings(max_examples=60, deadline=None)
@given(_multiplicity_vectors())
def test_multiplicities_round_trip(want):
    n = sum(next(iter(want)))
    parts = partitions(n)
    dims = {
        lam: sum(want[mu] * kostka(mu, lam) for mu in parts) for lam in parts
    }
    assert multiplicities(dims) == want
