"""Small exact-rational matrix helpers (numpy object arrays of Fraction)."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import NotInvertible


def frac_array(rows) -> np.ndarray:
    a = np.array(rows, dtype=object)
    flat = a.reshape(-1)
    for i, v in enumerate(flat):
        flat[i] = Fraction(v)
    return a


def frac_eye(n: int) -> np.ndarray:
    return frac_array(np.eye(n, dtype=int))


def frac_inv(m: np.ndarray) -> np.ndarray:
    """Gauss-Jordan inverse over the rationals."""
    n = m.shape[0]
    aug = [[Fraction(m[i, j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise NotInvertible("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return frac_array([row[n:] for row in aug])


def is_exact(m: np.ndarray) -> bool:
    return m.dtype == object


def to_complex(m: np.ndarray) -> np.ndarray:
    if m.dtype == object:
        return np.array([[complex(v) for v in row] for row in np.atleast_2d(m)],
                        dtype=complex).reshape(m.shape)
    return np.asarray(m, dtype=complex)


def exact_equal(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and all(x == y for x, y in zip(a.reshape(-1), b.reshape(-1)))


def signature(gram: np.ndarray) -> tuple[int, int, int]:
    """Exact (n_plus, n_zero, n_minus) by congruence diagonalisation."""
    a = [[Fraction(v) for v in row] for row in gram]
    n = len(a)
    diag: list[Fraction] = []
    k = 0
    while k < n:
        size = n - k
        piv = next((i for i in range(k, n) if a[i][i] != 0), None)
        if piv is None:
            # all diagonal entries zero: create one from an off-diagonal pair
            pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if a[i][j] != 0),
                        None)
            if pair is None:
                diag.extend([Fraction(0)] * size)
                break
            i, j = pair
            # row_i += row_j, col_i += col_j  ->  a_ii becomes 2 a_ij != 0
            for c in range(n):
                a[i][c] += a[j][c]
            for r in range(n):
                a[r][i] += a[r][j]
            piv = i
        a[k], a[piv] = a[piv], a[k]
        for row in a:
            row[k], row[piv] = row[piv], row[k]
        p = a[k][k]
        for r in range(k + 1, n):
            f = a[r][k] / p
            if f:
                for c in range(k, n):
                    a[r][c] -= f * a[k][c]
                for rr in range(k, n):
                    a[rr][r] -= f * a[rr][k]
        diag.append(p)
        k += 1
    return (sum(d > 0 for d in diag), sum(d == 0 for d in diag), sum(d < 0 for d in diag))
