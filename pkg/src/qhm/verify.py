"""Harmonicity, horizontal weak conformality and the harmonic-morphism test.

A quadratic map with component matrices A_i is

* harmonic iff tr A_i = 0 for every i,
* horizontally weakly conformal iff A_i A_j + A_j A_i = 0 (i != j) and
  A_i^2 = A_j^2 for all i, j,
* a harmonic morphism iff both hold and the map is not constant.

Indices in violation lists are 1-based, matching the usual A_1..A_n labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    QuadraticMap,
    Scalar,
    as_array,
    gram_gradients,
    max_abs,
    near_zero,
    rtol,
    to_float_array,
)


class NotAHarmonicMorphism(ValueError):
    """Raised when an operation requires a (weakly conformal) harmonic morphism."""


@dataclass(frozen=True)
class HMReport:
    is_harmonic: bool
    is_hwc: bool
    is_harmonic_morphism: bool
    is_constant: bool
    trace_violations: list = field(default_factory=list)  # (i, tr A_i)
    anticommute_violations: list = field(default_factory=list)  # (i, j, max|A_iA_j + A_jA_i|)
    square_violations: list = field(default_factory=list)  # (i, j, max|A_i^2 - A_j^2|)


def _scale(qmap: QuadraticMap) -> Scalar:
    return max(max_abs(a) for a in qmap.arrays)


def check_harmonic(qmap: QuadraticMap) -> tuple[bool, list]:
    scale = _scale(qmap)
    violations = []
    for i, comp in enumerate(qmap.components, start=1):
        tr = comp.trace()
        if not near_zero(tr, scale):
            violations.append((i, tr))
    return not violations, violations


def check_hwc(qmap: QuadraticMap) -> tuple[bool, list, list]:
    arrays = qmap.arrays
    scale2 = _scale(qmap) ** 2
    squares = [a @ a for a in arrays]
    anticommute, square = [], []
    for i in range(len(arrays)):
        for j in range(i + 1, len(arrays)):
            ac = max_abs(arrays[i] @ arrays[j] + arrays[j] @ arrays[i])
            if not near_zero(ac, scale2):
                anticommute.append((i + 1, j + 1, ac))
    for j in range(1, len(arrays)):
        diff = max_abs(squares[0] - squares[j])
        if not near_zero(diff, scale2):
            square.append((1, j + 1, diff))
    return not (anticommute or square), anticommute, square


def check_harmonic_morphism(qmap: QuadraticMap) -> HMReport:
    harmonic, traces = check_harmonic(qmap)
    hwc, anti, sq = check_hwc(qmap)
    constant = qmap.is_constant
    return HMReport(
        is_harmonic=harmonic,
        is_hwc=hwc,
        is_harmonic_morphism=harmonic and hwc and not constant,
        is_constant=constant,
        trace_violations=traces,
        anticommute_violations=anti,
        square_violations=sq,
    )


def require_harmonic_morphism(qmap: QuadraticMap) -> HMReport:
    report = check_harmonic_morphism(qmap)
    if not report.is_harmonic_morphism:
        raise NotAHarmonicMorphism(describe_failure(report))
    return report


def describe_failure(report: HMReport) -> str:
    if report.is_constant:
        return "map is constant (all component matrices vanish)"
    parts = []
    if report.trace_violations:
        parts.append("non-zero traces at " + ", ".join(str(i) for i, _ in report.trace_violations))
    if report.anticommute_violations:
        pairs = ", ".join(f"({i},{j})" for i, j, _ in report.anticommute_violations)
        parts.append("non-anticommuting pairs " + pairs)
    if report.square_violations:
        pairs = ", ".join(f"({i},{j})" for i, j, _ in report.square_violations)
        parts.append("unequal squares " + pairs)
    return "not a harmonic morphism: " + "; ".join(parts)


def sample_points(m: int, count: int, seed: int) -> np.ndarray:
    """``count`` points uniform on [-1, 1]^m, deterministic in ``seed``."""
    rng = np.random.default_rng(seed)
    return rng.uniform(-1.0, 1.0, size=(count, m))


def conformality_oracle(qmap: QuadraticMap, sample_count: int = 100, seed: int = 0) -> bool:
    """Pointwise check that the gradient Gram matrix is a multiple of the identity.

    Independent of :func:`check_hwc`: works only from sampled gradients.  At each
    point lambda^2 is the mean of the Gram diagonal, and every entry must lie
    within tol * (1 + lambda^2) of lambda^2 * I.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be at least 1")
    fmap = qmap.to_float()
    tol = rtol()
    eye = np.eye(fmap.n)
    for X in sample_points(fmap.m, sample_count, seed):
        G = to_float_array(gram_gradients(fmap, X).array)
        lam2 = float(np.mean(np.diag(G)))
        if lam2 < 0:
            return False
        if np.max(np.abs(G - lam2 * eye)) > tol * (1.0 + lam2):
            return False
    return True


def dilation(qmap: QuadraticMap, X) -> Scalar:
    """lambda^2(X) = 4 X^t A_1^2 X for a horizontally weakly conformal map."""
    ok, _, _ = check_hwc(qmap)
    if not ok:
        raise NotAHarmonicMorphism("dilation is only defined for horizontally weakly conformal maps")
    x = as_array(X) if not isinstance(X, np.ndarray) else X
    a = qmap.arrays[0]
    if not (qmap.exact and x.dtype == object):
        x, a = to_float_array(x), to_float_array(a)
    if x.shape != (qmap.m,):
        raise ValueError(f"point must be a vector of length {qmap.m}")
    y = a @ x
    return 4 * (y @ y)
