"""Quadratic harmonic morphisms R^4 -> R^3.

Every such map is bi-equivalent to a multiple of the standard Hopf map

    lambda * phi_0(X) = lambda * (x1^2 + x2^2 - x3^2 - x4^2,
                                  2 x1 x3 + 2 x2 x4,
                                  -2 x1 x4 + 2 x2 x3),

and domain-equivalent to a member of the family phi_t.  :func:`classify`
recovers lambda, a representative angle t and explicit orthogonal witnesses
P (domain) and G (codomain) with  map = G^{-1} o (lambda phi_0) o P.

Angles may be given as a real number or as an exact ``(cos t, sin t)`` pair;
see :func:`rational_angle` for rational points on the unit circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .clifford import CliffordSystem
from .core import (
    QuadraticMap,
    Scalar,
    as_array,
    evaluate,
    exact_zeros,
    near_zero,
    rtol,
    to_float_array,
    to_scalar,
)
from .spectral import normal_form
from .verify import require_harmonic_morphism, sample_points

TWO_PI = 2.0 * math.pi
ANGLE_TOL = 1e-9


class WrongShape(ValueError):
    pass


class ClassificationError(AssertionError):
    """Internal contradiction: the input violates a structural fact about R^4 -> R^3 maps."""


def _cos_sin(t) -> tuple[Scalar, Scalar]:
    if isinstance(t, tuple):
        c, s = to_scalar(t[0]), to_scalar(t[1])
        if not near_zero(c * c + s * s - 1, 1.0):
            raise ValueError(f"(cos, sin) = ({c}, {s}) is not on the unit circle")
        return c, s
    t = to_scalar(t)
    if t == 0:
        return 1, 0
    return math.cos(float(t)), math.sin(float(t))


def rational_angle(t: float, max_denominator: int = 1000) -> tuple[Fraction, Fraction]:
    """Exact rational point (cos, sin) on the unit circle close to angle ``t``.

    Uses the rational parametrisation u = tan(t/2), (1-u^2, 2u)/(1+u^2).
    """
    half = (float(t) % TWO_PI) / 2.0
    if abs(math.cos(half)) < 1e-12:
        return Fraction(-1), Fraction(0)
    u = Fraction(math.tan(half)).limit_denominator(max_denominator)
    den = 1 + u * u
    return (1 - u * u) / den, 2 * u / den


def _block(B) -> np.ndarray:
    exact = all(isinstance(v, (int, Fraction)) for v in np.asarray(B, dtype=object).ravel())
    M = exact_zeros((4, 4)) if exact else np.zeros((4, 4))
    M[:2, 2:] = B
    M[2:, :2] = np.asarray(B, dtype=object if exact else float).T
    return M


def phi_t(lam, t=0) -> QuadraticMap:
    """The family lambda * phi_t; exact when lambda and (cos t, sin t) are exact."""
    lam = to_scalar(lam)
    if lam == 0:
        raise ValueError("lambda must be non-zero (lambda = 0 gives the constant map)")
    c, s = _cos_sin(t)
    first = _block([[0, 0], [0, 0]])
    for i, d in enumerate((1, 1, -1, -1)):
        first[i, i] = d
    second = _block([[c, s], [-s, c]])
    third = _block([[s, -c], [c, s]])
    return QuadraticMap.from_arrays([first * lam, second * lam, third * lam])


def hopf_standard(lam=1) -> QuadraticMap:
    """lambda * phi_0, the standard Hopf construction map R^4 -> R^3."""
    return phi_t(lam, 0)


def rotation_G(t) -> np.ndarray:
    """[[1, 0, 0], [0, cos t, sin t], [0, -sin t, cos t]]; lambda phi_t = G^{-1} o lambda phi_0."""
    c, s = _cos_sin(t)
    exact = isinstance(c, (int, Fraction)) and isinstance(s, (int, Fraction))
    G = np.empty((3, 3), dtype=object) if exact else np.zeros((3, 3))
    G[...] = [[1, 0, 0], [0, c, s], [0, -s, c]]
    return G


def hopf_clifford_system(t=0) -> CliffordSystem:
    """Irreducible Clifford system on R^4 whose map is phi_t with lambda = 1."""
    return CliffordSystem(phi_t(1, t).components)


# -- classification ---------------------------------------------------------


@dataclass(frozen=True)
class Classification43:
    lam: Scalar
    t: float
    P: np.ndarray  # domain witness
    G: np.ndarray  # codomain witness
    orientation_flipped: bool
    residual: float  # max pointwise |map(X) - G^{-1} lambda phi_0(P X)| on samples

    def reconstructed(self) -> QuadraticMap:
        """G^{-1} o (lambda phi_0) o P."""
        return hopf_standard(self.lam).precompose(self.P).postcompose(self.G.T)


def _require_43(qmap: QuadraticMap) -> None:
    if (qmap.m, qmap.n) != (4, 3):
        raise WrongShape(f"expected a map R^4 -> R^3, got R^{qmap.m} -> R^{qmap.n}")
    require_harmonic_morphism(qmap)


def pointwise_residual(qmap: QuadraticMap, other: QuadraticMap, samples: int = 50, seed: int = 0) -> float:
    f, g = qmap.to_float(), other.to_float()
    worst = 0.0
    for X in sample_points(qmap.m, samples, seed):
        worst = max(worst, float(np.max(np.abs(evaluate(f, X) - evaluate(g, X)))))
    return worst


def classify(qmap: QuadraticMap, samples: int = 50, seed: int = 0) -> Classification43:
    """Find lambda > 0, t and orthogonal P, G with map = G^{-1} o lambda phi_0 o P."""
    _require_43(qmap)
    nf = normal_form(qmap)
    if nf.r != 0:
        raise ClassificationError("harmonic morphism R^4 -> R^3 must be Q-nonsingular")
    d1, d2 = nf.D
    if not near_zero(d1 - d2, abs(d1)):
        raise ClassificationError(f"harmonic morphism R^4 -> R^3 must be umbilical, got D = {nf.D}")
    lam = d1
    if nf.exact:
        b1 = nf.blocks[0] * (Fraction(1) / Fraction(lam))
        b2 = nf.blocks[1] * (Fraction(1) / Fraction(lam))
        P = np.array(nf.P.T)
    else:
        lam = float(lam)
        b1, b2 = nf.blocks[0] / lam, nf.blocks[1] / lam
        P = np.array(nf.P.T, dtype=float)

    # det b1 = -1: swap x3 <-> x4, which right-multiplies both blocks by [[0, 1], [1, 0]].
    det = b1[0, 0] * b1[1, 1] - b1[0, 1] * b1[1, 0]
    if det < 0:
        b1 = b1[:, ::-1]
        b2 = b2[:, ::-1]
        P = P[[0, 1, 3, 2], :]
    c, s = b1[0, 0], b1[0, 1]
    t = math.atan2(float(s), float(c)) % TWO_PI
    if abs(t - TWO_PI) < ANGLE_TOL:
        t = 0.0
    # b2 is +/- [[s, -c], [c, s]]; the sign separates the two families.
    along = b2[0, 0] * s - b2[0, 1] * c + b2[1, 0] * c + b2[1, 1] * s
    flipped = along < 0

    exact = nf.exact
    G = rotation_G((c, s)) if exact else rotation_G((float(c), float(s)))
    if flipped:
        G = G.copy()
        G[:, 2] = -G[:, 2]
    result = Classification43(
        lam=lam, t=t, P=P, G=G, orientation_flipped=bool(flipped), residual=0.0
    )
    residual = pointwise_residual(qmap, result.reconstructed(), samples, seed)
    return Classification43(
        lam=lam, t=t, P=P, G=G, orientation_flipped=bool(flipped), residual=residual
    )


def sphere_restriction_check(qmap: QuadraticMap, samples: int = 100, seed: int = 0) -> bool:
    """True iff |map(X)| = lambda |X|^2 on samples, so map/lambda sends S^3 to S^2."""
    _require_43(qmap)
    lam = float(normal_form(qmap).D[0])
    fmap = qmap.to_float()
    tol = rtol()
    for X in sample_points(4, samples, seed):
        target = lam * float(X @ X)
        value = float(np.linalg.norm(evaluate(fmap, X)))
        if abs(value - target) > tol * (1.0 + target):
            return False
    return True
