"""Spectra, Q-rank and the canonical normal form of a quadratic harmonic morphism.

For a harmonic morphism with components A_1..A_n there is an orthogonal P with

    P^t A_1 P     = diag(D, -D, 0_r)
    P^t A_{i+1} P = [[0, B_i, 0], [B_i^t, 0, 0], [0, 0, 0_r]]

where D is the k x k diagonal of positive eigenvalues (descending) and the
k x k blocks satisfy D B_i = B_i D, B_i^t B_i = D^2 and
B_i^t B_j = -B_j^t B_i for i != j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (
    QuadraticMap,
    Scalar,
    exact_identity,
    exact_zeros,
    is_exact_array,
    max_abs,
    near_zero,
    rtol,
    to_float_array,
)
from .linalg import charpoly, exact_rank, is_diagonal, jacobi_eigh, numeric_rank
from .verify import require_harmonic_morphism


class NormalFormError(ArithmeticError):
    """The eigen-structure has unpaired or unequal eigenvalues (should not happen for valid input)."""


def _eigensystem(a: np.ndarray):
    """Eigenvalues ascending and eigenvectors; exact when ``a`` is an exact diagonal matrix."""
    if is_exact_array(a) and is_diagonal(a):
        diag = list(a.diagonal())
        order = sorted(range(len(diag)), key=lambda i: (diag[i], i))
        V = exact_identity(len(diag))[:, order]
        return [diag[i] for i in order], V
    w, V = jacobi_eigh(a)
    return list(w), V


def exact_sqrt(q) -> Fraction | None:
    """Rational square root of a non-negative rational, or None if irrational."""
    q = Fraction(q)
    if q < 0:
        return None
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


# -- spectrum --------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumReport:
    spectra: list  # per component, eigenvalues ascending (float)
    ranks: list
    common_rank: int | None
    rank_is_even: bool
    spectra_equal: bool
    plus_minus_paired: bool
    exact: bool  # flags decided by exact arithmetic


def _paired_charpoly(coeffs: list) -> bool:
    m = len(coeffs) - 1
    return all(c == 0 for k, c in enumerate(coeffs) if (m - k) % 2 == 1)


def spectrum_report(qmap: QuadraticMap) -> SpectrumReport:
    spectra = [tuple(sorted(float(v) for v in _eigensystem(a)[0])) for a in qmap.arrays]
    if qmap.exact:
        ranks = [exact_rank(a) for a in qmap.arrays]
        polys = [charpoly(a) for a in qmap.arrays]
        spectra_equal = all(p == polys[0] for p in polys)
        paired = all(_paired_charpoly(p) for p in polys)
    else:
        ranks = [numeric_rank(w) for w in spectra]
        scale = max(max(abs(v) for v in w) for w in spectra)
        tol = max(rtol() * scale, 1e-12)
        first = np.array(spectra[0])
        spectra_equal = all(np.max(np.abs(np.array(w) - first)) <= tol for w in spectra)
        paired = all(
            np.max(np.abs(np.array(w) + np.array(w)[::-1])) <= tol for w in spectra
        )
    common = ranks[0] if all(r == ranks[0] for r in ranks) else None
    return SpectrumReport(
        spectra=spectra,
        ranks=ranks,
        common_rank=common,
        rank_is_even=common is not None and common % 2 == 0,
        spectra_equal=spectra_equal,
        plus_minus_paired=paired,
        exact=qmap.exact,
    )


def q_rank(qmap: QuadraticMap) -> int:
    """Common rank of the component matrices of a harmonic morphism."""
    require_harmonic_morphism(qmap)
    a = qmap.arrays[0]
    if qmap.exact:
        return exact_rank(a)
    return numeric_rank(jacobi_eigh(a)[0])


# -- normal form -----------------------------------------------------------


@dataclass(frozen=True)
class NormalForm:
    P: np.ndarray  # columns form the adapted orthonormal basis
    k: int
    r: int
    D: tuple  # positive eigenvalues, descending
    blocks: tuple  # B_1..B_{n-1}, each k x k
    exact: bool

    @property
    def m(self) -> int:
        return 2 * self.k + self.r

    @property
    def q_rank(self) -> int:
        return 2 * self.k

    def canonical_components(self) -> list:
        """The matrices P^t A_i P in block form, m x m each."""
        k, m = self.k, self.m
        zeros = exact_zeros if self.exact else np.zeros
        first = zeros((m, m))
        for i, d in enumerate(self.D):
            first[i, i] = d
            first[k + i, k + i] = -d
        out = [first]
        for B in self.blocks:
            C = zeros((m, m))
            C[:k, k : 2 * k] = B
            C[k : 2 * k, :k] = B.T
            out.append(C)
        return out

    def constraint_residuals(self) -> dict:
        """Max-entry residuals of orthogonality and the block relations."""
        P = self.P
        eye = exact_identity(self.m) if self.exact else np.eye(self.m)
        Dm = np.diag(np.array(self.D, dtype=object if self.exact else float))
        if self.k == 0:
            Dm = (exact_zeros if self.exact else np.zeros)((0, 0))
        D2 = Dm @ Dm
        res = {
            "orthogonality": max_abs(P.T @ P - eye),
            "commute": 0,
            "norm": 0,
            "anticommute": 0,
        }
        for B in self.blocks:
            res["commute"] = max(res["commute"], max_abs(Dm @ B - B @ Dm))
            res["norm"] = max(res["norm"], max_abs(B.T @ B - D2))
        for i, Bi in enumerate(self.blocks):
            for Bj in self.blocks[i + 1 :]:
                res["anticommute"] = max(res["anticommute"], max_abs(Bi.T @ Bj + Bj.T @ Bi))
        return res


def normal_form(qmap: QuadraticMap) -> NormalForm:
    """Orthogonal change of basis bringing a harmonic morphism to block normal form.

    Positive eigenvalues of A_1 come first (descending), then the matching
    negative ones (descending in absolute value, paired positionally), then
    the kernel.  Ties keep the eigensolver's column order.
    """
    require_harmonic_morphism(qmap)
    arrays = qmap.arrays
    w, V = _eigensystem(arrays[0])
    exact = is_exact_array(V)
    if not exact:
        arrays = [to_float_array(a) for a in arrays]
        scale = max(abs(float(v)) for v in w)
        is_zero = [abs(float(v)) <= 1e-8 * scale for v in w]
    else:
        is_zero = [v == 0 for v in w]

    pos = sorted((i for i, v in enumerate(w) if not is_zero[i] and v > 0), key=lambda i: (-w[i], i))
    neg = sorted((i for i, v in enumerate(w) if not is_zero[i] and v < 0), key=lambda i: (w[i], i))
    ker = [i for i in range(len(w)) if is_zero[i]]
    if len(pos) != len(neg):
        raise NormalFormError(
            f"{len(pos)} positive vs {len(neg)} negative eigenvalues; expected them paired"
        )
    for i, j in zip(pos, neg):
        if not near_zero(w[i] + w[j], max(abs(w[i]), 1)):
            raise NormalFormError(f"eigenvalues {w[i]} and {w[j]} do not pair as +/-lambda")

    order = pos + neg + ker
    P = V[:, order]
    k = len(pos)
    D = tuple(w[i] for i in pos)
    blocks = []
    for a in arrays[1:]:
        N = P.T @ a @ P
        blocks.append(np.array(N[:k, k : 2 * k]))
    return NormalForm(P=P, k=k, r=len(ker), D=D, blocks=tuple(blocks), exact=exact)


def reconstruct(nf: NormalForm, n: int) -> QuadraticMap:
    """Inverse of :func:`normal_form`: components P C_i P^t."""
    if n != len(nf.blocks) + 1:
        raise ValueError(f"normal form carries {len(nf.blocks) + 1} components, not {n}")
    if len(nf.D) != nf.k:
        raise ValueError("D must have k entries")
    if nf.P.shape != (nf.m, nf.m):
        raise ValueError(f"P must be {nf.m} x {nf.m}")
    for B in nf.blocks:
        if B.shape != (nf.k, nf.k):
            raise ValueError(f"block of shape {B.shape}, expected {(nf.k, nf.k)}")
    P = nf.P
    return QuadraticMap.from_arrays([P @ C @ P.T for C in nf.canonical_components()])


def split_singular(qmap: QuadraticMap) -> tuple[np.ndarray, QuadraticMap]:
    """Factor phi = core o projection with core Q-nonsingular on R^{2k}.

    The projection's rows are orthonormal and span the orthogonal complement
    of the common kernel of the component matrices.
    """
    nf = normal_form(qmap)
    two_k = 2 * nf.k
    projection = np.array(nf.P[:, :two_k].T)
    core = QuadraticMap.from_arrays([C[:two_k, :two_k] for C in nf.canonical_components()])
    return projection, core


def is_umbilical(qmap: QuadraticMap) -> tuple[bool, tuple]:
    """Whether all positive eigenvalues coincide; also returns them, descending."""
    require_harmonic_morphism(qmap)
    a = qmap.arrays[0]
    w, _ = _eigensystem(a)
    if qmap.exact:
        rank = exact_rank(a)
        a2 = a @ a
        c = Fraction(sum(a2.diagonal().tolist(), 0)) / rank
        # A^3 = c A with c = tr(A^2)/rank holds iff the non-zero spectrum is {+-sqrt(c)}.
        umbilical = all(v == 0 for v in (a2 @ a - a * c).ravel())
        if not any(isinstance(v, float) for v in w):
            positives = sorted((v for v in w if v > 0), reverse=True)
        elif umbilical and exact_sqrt(c) is not None:
            root = exact_sqrt(c)
            positives = [int(root) if root.denominator == 1 else root] * (rank // 2)
        else:
            positives = sorted((float(v) for v in w), reverse=True)[: rank // 2]
        return umbilical, tuple(positives)
    scale = max(abs(float(v)) for v in w)
    positives = sorted((float(v) for v in w if float(v) > 1e-8 * scale), reverse=True)
    spread = positives[0] - positives[-1]
    return spread <= max(rtol() * positives[0], 1e-12), tuple(positives)
