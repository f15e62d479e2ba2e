"""Generators of quadratic harmonic morphisms.

* standard multiplications of R, C, H and O (orthogonal multiplications),
* Hopf construction maps F(X, Y) = (|X|^2 - |Y|^2, 2 f(X, Y)),
* complete lifts (X, Y) -> J_phi(X) Y.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import QuadraticMap, exact_zeros
from .verify import require_harmonic_morphism

SUPPORTED_DIMENSIONS = (1, 2, 4, 8)


class UnsupportedDimension(ValueError):
    pass


def _check_dimension(n: int) -> None:
    if n not in SUPPORTED_DIMENSIONS:
        raise UnsupportedDimension(
            f"no standard orthogonal multiplication on R^{n}: "
            "only n = 1, 2, 4, 8 (real, complex, quaternion, octonion) exist"
        )


def _multiply(table: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.einsum("ijk,i,j->k", table, x, y)


def _conj(x: np.ndarray) -> np.ndarray:
    out = -x
    out[0] = x[0]
    return out


@lru_cache(maxsize=None)
def _cayley_dickson(n: int) -> np.ndarray:
    # Doubling rule (a, b)(c, d) = (ac - conj(d) b, d a + b conj(c)).
    if n == 1:
        return np.ones((1, 1, 1), dtype=np.int64)
    half = n // 2
    base = _cayley_dickson(half)
    table = np.zeros((n, n, n), dtype=np.int64)
    eye = np.eye(n, dtype=np.int64)
    for p in range(n):
        a, b = eye[p, :half], eye[p, half:]
        for q in range(n):
            c, d = eye[q, :half], eye[q, half:]
            first = _multiply(base, a, c) - _multiply(base, _conj(d), b)
            second = _multiply(base, d, a) + _multiply(base, b, _conj(c))
            table[p, q] = np.concatenate([first, second])
    table.flags.writeable = False
    return table


@dataclass(frozen=True)
class OrthogonalMultiplication:
    """Bilinear f: R^n x R^n -> R^n with f(x, y)_k = sum_ij c[i, j, k] x_i y_j."""

    n: int
    table: np.ndarray

    def __call__(self, x, y) -> np.ndarray:
        return _multiply(self.table, np.asarray(x), np.asarray(y))

    def left(self, i: int) -> np.ndarray:
        """Matrix of y -> f(e_i, y)."""
        return np.array(self.table[i].T)


def orth_mult(n: int) -> OrthogonalMultiplication:
    """Standard multiplication of the reals, complexes, quaternions or octonions."""
    _check_dimension(n)
    return OrthogonalMultiplication(n=n, table=_cayley_dickson(n))


def hopf_construction(n: int) -> QuadraticMap:
    """F: R^{2n} -> R^{n+1}, F(X, Y) = (|X|^2 - |Y|^2, 2 f(X, Y)), exact integer components."""
    f = orth_mult(n)
    first = exact_zeros((2 * n, 2 * n))
    for i in range(n):
        first[i, i] = 1
        first[n + i, n + i] = -1
    comps = [first]
    for k in range(n):
        C = exact_zeros((2 * n, 2 * n))
        for i in range(n):
            for j in range(n):
                c = int(f.table[i, j, k])
                if c:
                    C[i, n + j] = c
                    C[n + j, i] = c
        comps.append(C)
    return QuadraticMap.from_arrays(comps)


def complete_lift(qmap: QuadraticMap) -> QuadraticMap:
    """Lift R^m -> R^n to R^{2m} -> R^n, (X, Y) -> J_phi(X) Y.

    Component i becomes [[0, A_i], [A_i, 0]], whose quadratic form is 2 X^t A_i Y.
    """
    require_harmonic_morphism(qmap)
    m = qmap.m
    comps = []
    for a in qmap.arrays:
        C = exact_zeros((2 * m, 2 * m)) if qmap.exact else np.zeros((2 * m, 2 * m))
        C[:m, m:] = a
        C[m:, :m] = a
        comps.append(C)
    return QuadraticMap.from_arrays(comps)
