"""Worked examples of quadratic harmonic morphisms used as golden references."""

from __future__ import annotations

import numpy as np

from .core import QuadraticMap, exact_zeros, from_monomials


def nonumbilical_r8_r3() -> QuadraticMap:
    """R^8 -> R^3 harmonic morphism whose positive eigenvalues are 2, 2, 3, 3."""
    return from_monomials(
        8,
        [
            {(1, 1): 2, (2, 2): 2, (3, 3): 3, (4, 4): 3, (5, 5): -2, (6, 6): -2, (7, 7): -3, (8, 8): -3},
            {(1, 5): 4, (2, 6): 4, (3, 8): 6, (4, 7): -6},
            {(1, 6): -4, (2, 5): 4, (3, 7): 6, (4, 8): 6},
        ],
    )


def _umbilical_terms(last_x2y3: int) -> list[dict]:
    # Coordinates (x1..x4, y1..y4) are indices 1..8.
    x = {i: i for i in range(1, 5)}
    y = {i: i + 4 for i in range(1, 5)}
    first = {(x[i], x[i]): 3 for i in range(1, 5)}
    first.update({(y[i], y[i]): -3 for i in range(1, 5)})
    return [
        first,
        {(x[1], y[1]): 6, (x[2], y[2]): -6, (x[3], y[3]): -6, (x[4], y[4]): -6},
        {(x[1], y[2]): 6, (x[2], y[1]): 6, (x[3], y[4]): 6, (x[4], y[3]): -6},
        {(x[1], y[3]): 6, (x[3], y[1]): 6, (x[4], y[2]): 6, (x[2], y[4]): -6},
        {(x[1], y[4]): 6, (x[4], y[1]): 6, (x[2], y[3]): last_x2y3, (x[3], y[2]): -6},
    ]


def umbilical_r8_r5() -> QuadraticMap:
    """Umbilical R^8 -> R^5 harmonic morphism with every positive eigenvalue equal to 3.

    The last component is 6x1y4 + 6x4y1 + 6x2y3 - 6x3y2; with -6x2y3 instead the
    map is not horizontally weakly conformal.
    """
    return from_monomials(8, _umbilical_terms(6))


def umbilical_r8_r5_misprint() -> QuadraticMap:
    """The same map with the sign of x2y3 flipped in the last component (not a morphism)."""
    return from_monomials(8, _umbilical_terms(-6))


def zero_padded(qmap: QuadraticMap, extra: int) -> QuadraticMap:
    """Precompose with the projection R^{m+extra} -> R^m dropping the last coordinates."""
    m = qmap.m
    comps = []
    for a in qmap.arrays:
        C = exact_zeros((m + extra, m + extra)) if qmap.exact else np.zeros((m + extra, m + extra))
        C[:m, :m] = a
        comps.append(C)
    return QuadraticMap.from_arrays(comps)
