"""Exact and modular linear algebra."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from wss.linalg import (
    PRIMES,
    Echelon,
    independent_rows,
    is_zero,
    matmul,
    rank,
    rank_exact,
    rank_mod,
    row_from_list,
    solve,
    solve_left,
)

from oracles import dense_rank_oracle


def rows_of(matrix):
    return [row_from_list(r) for r in matrix]


class TestRank:
    def test_simple(self):
        m = rows_of([[1, 2], [2, 4], [0, 1]])
        assert rank_exact(m, 2) == 2

    def test_zero(self):
        assert rank_exact(rows_of([[0, 0], [0, 0]]), 2) == 0
        assert rank_exact([], 5) == 0

    def test_fractions(self):
        # [3/2, 1] is three times [1/2, 1/3]
        m = rows_of([[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), 1]])
        assert rank_exact(m, 2) == 1
        m = rows_of([[Fraction(1, 2), Fraction(1, 3)], [Fraction(1), Fraction(1)]])
        assert rank_exact(m, 2) == 2

    def test_modes_agree(self):
        m = rows_of([[3, 1, 4, 1], [5, 9, 2, 6], [8, 10, 6, 8], [0, 0, 0, 0]])
        assert rank(m, 4, "exact") == rank(m, 4, "modular") == 3

    def test_mod_single_prime(self):
        m = rows_of([[1, 1], [1, -1]])
        for p in PRIMES[:3]:
            assert rank_mod(m, 2, p) == 2


class TestSolve:
    def test_unique(self):
        a = rows_of([[2, 1], [1, 3]])
        x = solve(a, 2, [Fraction(5), Fraction(10)])
        assert x == [Fraction(1), Fraction(3)]

    def test_inconsistent(self):
        a = rows_of([[1, 1], [2, 2]])
        assert solve(a, 2, [Fraction(1), Fraction(3)]) is None

    def test_underdetermined_deterministic(self):
        a = rows_of([[1, 1, 0]])
        x = solve(a, 3, [Fraction(2)])
        assert x is not None
        assert x[0] + x[1] == 2
        assert solve(a, 3, [Fraction(2)]) == x

    def test_solve_left(self):
        basis = rows_of([[1, 0, 1], [0, 1, 1]])
        c = solve_left(basis, 3, row_from_list([2, 3, 5]))
        assert c == [Fraction(2), Fraction(3)]
        assert solve_left(basis, 3, row_from_list([0, 0, 1])) is None


class TestIndependentRows:
    def test_greedy_in_order(self):
        m = rows_of([[1, 0], [2, 0], [0, 1]])
        assert independent_rows(m, 2) == [0, 2]

    def test_skips_zero(self):
        m = rows_of([[0, 0], [1, 1]])
        assert independent_rows(m, 2) == [1]

    def test_modular_matches_exact(self):
        m = rows_of(
            [
                [1, 2, 3, 4],
                [2, 4, 6, 8],
                [1, 0, 0, 1],
                [0, 2, 3, 3],
                [5, 5, 5, 5],
            ]
        )
        assert independent_rows(m, 4, "exact") == independent_rows(m, 4, "modular")


class TestMatmul:
    def test_product(self):
        a = rows_of([[1, 2], [0, 1]])
        b = rows_of([[1, 0], [1, 1]])
        c = matmul(a, b)
        assert c == rows_of([[3, 2], [1, 1]])

    def test_zero_detection(self):
        a = rows_of([[1, -1]])
        b = rows_of([[1, 1], [1, 1]])
        assert is_zero(matmul(a, b))


@st.composite
def random_matrix(draw):
    nr = draw(st.integers(1, 6))
    nc = draw(st.integers(1, 6))
    vals = st.fractions(min_value=-9, max_value=9, max_denominator=4)
    return [[draw(vals) for _ in range(nc)] for _ in range(nr)], nc


@settings(max_examples=80, deadline=None)
@given(random_matrix())
def test_rank_matches_oracle(data):
    matrix, nc = data
    assert rank_exact(rows_of(matrix), nc) == dense_rank_oracle(matrix)


@settings(max_examples=60, deadline=None)
@given(random_matrix())
def test_modular_rank_certified(data):
    matrix, nc = data
    m = rows_of(matrix)
    assert rank(m, nc, "modular") == rank_exact(m, nc)


@settings(max_examples=60, deadline=None)
@given(random_matrix())
def test_independent_rows_maximal_and_valid(data):
    matrix, nc = data
    m = rows_of(matrix)
    sel = independent_rows(m, nc, "exact")
    assert rank_exact([m[i] for i in sel], nc) == len(sel)
    assert len(sel) == rank_exact(m, nc)


@st.composite
def large_entry_matrix(draw):
    nr = draw(st.integers(2, 9))
    nc = draw(st.integers(2, 6))
    vals = st.integers(min_value=-(2**40), max_value=2**40)
    base = [[draw(vals) for _ in range(nc)] for _ in range(nr)]
    for _ in range(draw(st.integers(0, 3))):
        picks = draw(st.lists(st.integers(0, len(base) - 1), min_size=1, max_size=3))
        base.append([sum(base[i][j] for i in picks) for j in range(nc)])
    return base, nc


@settings(max_examples=60, deadline=None)
@given(large_entry_matrix())
def test_modular_selection_large_entries(data):
    # residues near the prime must not wrap in int64 once several pivots
    # stack up; a wrong selection here used to ship a singular basis
    matrix, nc = data
    m = rows_of(matrix)
    sel = independent_rows(m, nc, "modular")
    assert rank_exact([m[i] for i in sel], nc) == len(sel)
    assert len(sel) == rank_exact(m, nc)


@settings(max_examples=40, deadline=None)
@given(random_matrix())
def test_solve_consistency(data):
    matrix, nc = data
    m = rows_of(matrix)
    rhs = [sum(r.values(), Fraction(0)) for r in m]  # rhs = A . ones
    x = solve(m, nc, rhs)
    assert x is not None
    for r, b in zip(m, rhs):
        assert sum(Fraction(v) * x[c] for c, v in r.items()) == b


@settings(max_examples=60, deadline=None)
@given(random_matrix(), st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=3), min_size=1, max_size=6))
def test_echelon_reconstructs(data, coeffs):
    matrix, nc = data
    m = rows_of(matrix)
    ech = Echelon(m, nc)
    target: dict = {}
    for c, r in zip(coeffs, m):
        for col, v in r.items():
            cur = target.get(col, Fraction(0)) + c * v
            target[col] = cur
    target = {c: v for c, v in target.items() if v}
    got = ech.solve(target)
    assert got is not None
    # solution need not equal coeffs when rows are dependent, but it must
    # rebuild the target exactly
    rebuilt: dict = {}
    for c, r in zip(got, m):
        for col, v in r.items():
            rebuilt[col] = rebuilt.get(col, Fraction(0)) + c * v
    assert {c: v for c, v in rebuilt.items() if v} == target


@settings(max_examples=60, deadline=None)
@given(random_matrix())
def test_echelon_rejects_outside_span(data):
    matrix, nc = data
    m = rows_of(matrix)
    ech = Echelon(m, nc)
    probe = row_from_list([1] * nc + [0])  # extra column is outside any row
    extended = Echelon(m, nc + 1)
    if rank_exact(m + [probe], nc + 1) > rank_exact(m, nc + 1):
        assert extended.solve(probe) is None
    else:
        assert extended.solve(probe) is not None
