"""Symmetric eigensolver (cyclic Jacobi) and exact rational helpers."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .core import to_float_array

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
RANK_RTOL = 1e-8


class EigenError(ArithmeticError):
    """Raised when the Jacobi iteration fails to converge."""


def jacobi_eigh(a, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Sweeps visit pivots (p, q), p < q, in row order.  Iteration stops once the
    off-diagonal Frobenius norm drops below ``tol * ||a||_F``.

    Returns ``(w, V)`` with eigenvalues ascending and ``a @ V = V @ diag(w)``.
    """
    A = np.array(to_float_array(np.asarray(a)), dtype=float, copy=True)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("jacobi_eigh expects a square matrix")
    m = A.shape[0]
    V = np.eye(m)
    norm = float(np.linalg.norm(A))
    if norm == 0.0:
        return np.zeros(m), V
    threshold = tol * norm

    for _ in range(max_sweeps):
        off = float(np.linalg.norm(A - np.diag(np.diag(A))))
        if off < threshold:
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                diff = A[q, q] - A[p, p]
                if abs(apq) < 1e-300 * max(1.0, abs(diff)) or abs(diff) > 1e150 * abs(apq):
                    # theta would overflow; t ~ 1 / (2 theta)
                    t = apq / diff
                else:
                    theta = diff / (2.0 * apq)
                    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                col_p = A[:, p].copy()
                col_q = A[:, q].copy()
                A[:, p] = c * col_p - s * col_q
                A[:, q] = s * col_p + c * col_q
                row_p = A[p, :].copy()
                row_q = A[q, :].copy()
                A[p, :] = c * row_p - s * row_q
                A[q, :] = s * row_p + c * row_q
                A[p, q] = A[q, p] = 0.0
                v_p = V[:, p].copy()
                v_q = V[:, q].copy()
                V[:, p] = c * v_p - s * v_q
                V[:, q] = s * v_p + c * v_q
    else:
        raise EigenError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")

    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def numeric_rank(eigenvalues, rtol: float = RANK_RTOL) -> int:
    """Number of eigenvalues with |lambda| > rtol * max |lambda|."""
    w = np.abs(np.asarray(eigenvalues, dtype=float))
    if w.size == 0 or w.max() == 0.0:
        return 0
    return int(np.sum(w > rtol * w.max()))


def is_diagonal(a: np.ndarray) -> bool:
    off = a - np.diag(np.diag(a)) if a.dtype != object else None
    if off is not None:
        return not np.any(off)
    m = a.shape[0]
    return all(a[i, j] == 0 for i in range(m) for j in range(m) if i != j)


def exact_rank(a: np.ndarray) -> int:
    """Rank over the rationals by fraction-exact Gaussian elimination."""
    rows = [[Fraction(v) for v in row] for row in a.tolist()]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        for r in range(rank + 1, len(rows)):
            f = rows[r][col]
            if f != 0:
                factor = f / pv
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def charpoly(a: np.ndarray) -> list:
    """Exact coefficients c_0..c_m of det(xI - a) via Faddeev-LeVerrier.

    Denominators are cleared first so the recursion runs on Python ints:
    for B = L a, coefficient j of a is coefficient j of B times L^(j - m).
    """
    m = a.shape[0]
    fracs = [Fraction(v) for v in a.ravel().tolist()]
    L = math.lcm(*(f.denominator for f in fracs)) if fracs else 1
    B = np.empty((m, m), dtype=object)
    B.ravel()[:] = [f.numerator * (L // f.denominator) for f in fracs]
    coeffs = [0] * (m + 1)
    coeffs[m] = 1
    M = np.zeros((m, m), dtype=object)
    M[:] = 0
    for k in range(1, m + 1):
        M = B @ M
        M[np.diag_indices(m)] += coeffs[m - k + 1]
        trace = sum((B @ M).diagonal().tolist(), 0)
        q, r = divmod(-trace, k)
        assert r == 0, "integer matrix must have integer characteristic coefficients"
        coeffs[m - k] = q
    return [Fraction(c, L ** (m - j)) for j, c in enumerate(coeffs)]
