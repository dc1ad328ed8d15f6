"""Exact integer linear algebra for rank decisions on rational Gram matrices."""

from __future__ import annotations

import numpy as np

MAX_DENOMINATOR_FACTOR = 4


def integer_scale(X: np.ndarray, tol: float = 1e-9) -> tuple[int, np.ndarray] | None:
    """Smallest s such that s * X is (within ``tol``) an integer matrix.

    Only real matrices qualify; the search stops at s = 4 * dim.
    """
    if np.iscomplexobj(X):
        if np.any(np.abs(X.imag) > tol):
            return None
        X = X.real
    limit = MAX_DENOMINATOR_FACTOR * max(X.shape)
    for s in range(1, limit + 1):
        scaled = s * X
        rounded = np.rint(scaled)
        if np.max(np.abs(scaled - rounded)) < tol * s:
            return s, rounded.astype(np.int64)
    return None


def det_bareiss(M) -> int:
    """Exact determinant of a square integer matrix (fraction-free elimination)."""
    A = [[int(x) for x in row] for row in M]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if pivot is None:
                return 0
            A[k], A[pivot] = A[pivot], A[k]
            sign = -sign
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


_INT64_SAFE = 2.0**62


def det_bareiss_batch(M: np.ndarray, minor_bound: float | None = None) -> np.ndarray:
    """Exact determinants of a stack of integer matrices, shape (m, n, n).

    Bareiss elimination is vectorised over the stack in int64 when every
    intermediate product provably fits: intermediates are minors, so it is
    enough that 2 * bound^2 < 2^62 for a bound on all minors.  ``minor_bound``
    may supply a sharper bound (for a PSD Gram matrix, max(diag)^n works);
    the default is Hadamard's bound from the row norms.  Otherwise Python
    integers are used.
    """
    M = np.asarray(M)
    m, n, _ = M.shape
    if n == 0:
        return np.ones(m, dtype=object)
    if minor_bound is None:
        norms = np.maximum(np.linalg.norm(M.astype(float), axis=2), 1.0)
        minor_bound = float(np.max(np.prod(norms, axis=1))) if m else 1.0
    dtype = np.int64 if 2.0 * minor_bound**2 < _INT64_SAFE else object
    A = M.astype(dtype).copy()
    sign = np.ones(m, dtype=np.int64)
    prev = np.ones(m, dtype=dtype)
    singular = np.zeros(m, dtype=bool)
    rows = np.arange(m)
    for k in range(n - 1):
        nonzero = A[:, k:, k] != 0
        has = nonzero.any(axis=1)
        singular |= ~has
        piv = k + np.argmax(nonzero, axis=1)
        swap = np.flatnonzero(has & (piv != k))
        if len(swap):
            top = A[swap, k].copy()
            A[swap, k] = A[swap, piv[swap]]
            A[swap, piv[swap]] = top
            sign[swap] = -sign[swap]
        # singular entries get a dummy pivot; their results are discarded
        A[rows[~has], k, k] = 1
        akk = A[:, k, k].copy()
        A[:, k + 1:, k + 1:] = (
            A[:, k + 1:, k + 1:] * akk[:, None, None] - A[:, k + 1:, k:k + 1] * A[:, k:k + 1, k + 1:]
        ) // prev[:, None, None]
        prev = akk
    det = A[:, n - 1, n - 1] * sign
    det[singular] = 0
    return det
