"""Row reduction, rank and nullspace over GF(p) on numpy int64 arrays."""

import numpy as np


def mod_p(A, p: int) -> np.ndarray:
    return np.asarray(np.asarray(A, dtype=np.int64) % p, dtype=np.int64)


def matmul_mod(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """A @ B mod p with exact integer sums; int64 products overflow once p nears 2**31."""
    return np.asarray((A.astype(object) @ B.astype(object)) % p, dtype=np.int64)


def as_matrix(rows: list[list[int]], ncols: int, p: int) -> np.ndarray:
    if not rows:
        return np.zeros((0, ncols), dtype=np.int64)
    return mod_p(np.array(rows, dtype=np.int64).reshape(len(rows), ncols), p)


def rref_mod(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; pivot is the first nonzero entry scanning down each column."""
    A = mod_p(A.copy(), p)
    m, n = A.shape
    r = c = 0
    pivots: list[int] = []
    while r < m and c < n:
        nonzero = np.nonzero(A[r:, c])[0]
        if nonzero.size == 0:
            c += 1
            continue
        piv = r + int(nonzero[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r, :] = mod_p(A[r, :] * inv, p)
        for i in range(m):
            if i != r and A[i, c]:
                A[i, :] = mod_p(A[i, :] - int(A[i, c]) * A[r, :], p)
        pivots.append(c)
        r += 1
        c += 1
    return A, pivots


def rank_mod(A: np.ndarray, p: int) -> int:
    if A.size == 0:
        return 0
    _, pivots = rref_mod(A, p)
    return len(pivots)


def nullspace_mod(A: np.ndarray, p: int) -> list[list[int]]:
    """Basis of {x : A x = 0}, one free column per basis vector, in column order."""
    m, n = A.shape
    if n == 0:
        return []
    if m == 0:
        return [[1 if j == f else 0 for j in range(n)] for f in range(n)]
    R, pivots = rref_mod(A, p)
    free = [j for j in range(n) if j not in set(pivots)]
    basis = []
    for f in free:
        x = [0] * n
        x[f] = 1
        for row, pc in enumerate(pivots):
            x[pc] = int(-R[row, f]) % p
        basis.append(x)
    return basis


def row_space_mod(A: np.ndarray, p: int) -> list[list[int]]:
    """Nonzero rows of the RREF: a canonical basis of the row space."""
    if A.size == 0:
        return []
    R, pivots = rref_mod(A, p)
    return [[int(v) for v in R[i]] for i in range(len(pivots))]


def in_row_space(vector: list[int], rows: list[list[int]], p: int) -> bool:
    if not any(v % p for v in vector):
        return True
    if not rows:
        return False
    n = len(vector)
    base = rank_mod(as_matrix(rows, n, p), p)
    return rank_mod(as_matrix(rows + [vector], n, p), p) == base
