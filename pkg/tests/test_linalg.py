from __future__ import annotations

import numpy as np

from linalg import as_matrix, in_row_space, matmul_mod, nullspace_mod, rank_mod, row_space_mod, rref_mod


def test_rank_and_nullspace_of_dependent_rows():
    A = as_matrix([[1, 2], [2, 4]], 2, 5)
    assert rank_mod(A, 5) == 1
    assert nullspace_mod(A, 5) == [[3, 1]]


def test_rank_depends_on_the_prime():
    rows = [[1, 1], [1, 4]]
    assert rank_mod(as_matrix(rows, 2, 5), 5) == 2
    assert rank_mod(as_matrix(rows, 2, 3), 3) == 1


def test_nullspace_vectors_are_killed():
    p = 7
    A = as_matrix([[1, 2, 3, 4], [2, 4, 6, 1], [0, 0, 1, 5]], 4, p)
    for x in nullspace_mod(A, p):
        assert not np.any((A @ np.array(x, dtype=np.int64)) % p)
    assert rank_mod(A, p) + len(nullspace_mod(A, p)) == 4


def test_empty_shapes():
    assert rank_mod(as_matrix([], 3, 5), 5) == 0
    assert nullspace_mod(as_matrix([], 2, 5), 5) == [[1, 0], [0, 1]]
    assert nullspace_mod(np.zeros((2, 0), dtype=np.int64), 5) == []
    assert nullspace_mod(as_matrix([[1, 0], [0, 1]], 2, 5), 5) == []


def test_rref_pivots_and_row_space():
    R, pivots = rref_mod(as_matrix([[0, 2, 4], [3, 0, 3]], 3, 7), 7)
    assert pivots == [0, 1]
    assert R.tolist() == [[1, 0, 1], [0, 1, 2]]
    assert row_space_mod(as_matrix([[2, 4], [1, 2]], 2, 5), 5) == [[1, 2]]


def test_row_space_membership():
    assert in_row_space([2, 4], [[1, 2]], 5)
    assert not in_row_space([1, 0], [[1, 2]], 5)
    assert in_row_space([0, 5], [], 5)
    assert not in_row_space([1, 0], [], 5)


def test_matmul_mod_is_exact_for_large_primes():
    p = 2147483647
    A = as_matrix([[p - 1, p - 2, p - 3]], 3, p)
    B = as_matrix([[p - 1], [p - 1], [p - 1]], 1, p)
    expected = ((p - 1) ** 2 + (p - 2) * (p - 1) + (p - 3) * (p - 1)) % p
    assert matmul_mod(A, B, p).tolist() == [[expected]]
    assert expected == 6
