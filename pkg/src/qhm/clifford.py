"""Clifford systems and their link with umbilical quadratic harmonic morphisms.

A Clifford system on R^{2m} is a tuple (P_0, ..., P_n) of symmetric matrices
with P_i P_j + P_j P_i = 2 delta_ij I.  Its quadratic forms X -> <P_i X, X>
give a harmonic morphism R^{2m} -> R^{n+1} with dilation 4|X|^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .core import (
    QuadraticMap,
    Scalar,
    SymMatrix,
    as_array,
    exact_identity,
    exact_zeros,
    max_abs,
    near_zero,
    to_float_array,
)
from .spectral import is_umbilical, normal_form
from .verify import NotAHarmonicMorphism, require_harmonic_morphism

_DELTA_TABLE = (1, 2, 4, 4, 8, 8, 8, 8)

# 2x2 seeds: Z symmetric, X symmetric, J skew with J^2 = -I.
_SEEDS = {
    "I": np.array([[1, 0], [0, 1]], dtype=np.int64),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.int64),
    "X": np.array([[0, 1], [1, 0]], dtype=np.int64),
    "J": np.array([[0, -1], [1, 0]], dtype=np.int64),
}

# Mutually anticommuting skew complex structures on R^4 and R^8, as tensor words.
_WORDS_4 = ("JI", "ZJ", "XJ")
_WORDS_8 = ("IIJ", "IJX", "XJZ", "ZJZ", "JIZ", "JXX", "JZX")


class CliffordError(ValueError):
    pass


def _word(w: str) -> np.ndarray:
    out = np.array([[1]], dtype=np.int64)
    for ch in w:
        out = np.kron(out, _SEEDS[ch])
    return out


@lru_cache(maxsize=None)
def _complex_structures(k: int) -> tuple:
    """k anticommuting skew integer matrices squaring to -I, of minimal size."""
    if k == 0:
        return (), 1
    if k == 1:
        return (_SEEDS["J"],), 2
    if k <= 3:
        return tuple(_word(w) for w in _WORDS_4[:k]), 4
    if k <= 7:
        return tuple(_word(w) for w in _WORDS_8[:k]), 8
    # Eight generators on R^16 by doubling the seven on R^8, then 8-periodicity:
    # F_i (x) I together with w (x) E_j, where w = F_1...F_8 anticommutes with every F_i.
    seven = [_word(w) for w in _WORDS_8]
    eight = [np.kron(_SEEDS["J"], np.eye(8, dtype=np.int64))]
    eight += [np.kron(_SEEDS["Z"], E) for E in seven]
    omega = np.eye(16, dtype=np.int64)
    for F in eight:
        omega = omega @ F
    rest, d = _complex_structures(k - 8)
    if k == 8:
        return tuple(eight), 16
    eye_d = np.eye(d, dtype=np.int64)
    return tuple(np.kron(F, eye_d) for F in eight) + tuple(np.kron(omega, E) for E in rest), 16 * d


def delta(n: int) -> int:
    """Half the dimension of an irreducible Clifford system with n+1 members."""
    if n < 1:
        raise ValueError("delta(n) is defined for n >= 1")
    q, r = divmod(n - 1, 8)
    return _DELTA_TABLE[r] * 16**q


# -- systems ---------------------------------------------------------------


def _as_sym_list(matrices: Sequence) -> list[SymMatrix]:
    mats = [m if isinstance(m, SymMatrix) else SymMatrix(m) for m in matrices]
    if not mats:
        raise CliffordError("a Clifford system needs at least one matrix")
    dims = {m.dim for m in mats}
    if len(dims) != 1:
        raise CliffordError(f"matrices have differing dimensions {sorted(dims)}")
    if mats[0].dim % 2:
        raise CliffordError(f"Clifford systems live on even-dimensional spaces, got {mats[0].dim}")
    if not all(m.exact for m in mats):
        mats = [m.to_float() for m in mats]
    return mats


def _clifford_residual(arrays: list) -> Scalar:
    dim = arrays[0].shape[0]
    exact = arrays[0].dtype == object
    eye2 = exact_identity(dim) * 2 if exact else 2 * np.eye(dim)
    worst = 0
    for i, a in enumerate(arrays):
        worst = max(worst, max_abs(a @ a + a @ a - eye2))
        for b in arrays[i + 1 :]:
            worst = max(worst, max_abs(a @ b + b @ a))
    return worst


def check_clifford(matrices: Sequence) -> bool:
    """True iff P_i P_j + P_j P_i = 2 delta_ij I (exactly, or within tolerance)."""
    mats = _as_sym_list(matrices)
    return near_zero(_clifford_residual([m.array for m in mats]), 1.0)


class CliffordSystem:
    """Validated Clifford system (P_0, ..., P_n) on R^{2m}."""

    __slots__ = ("_matrices",)

    def __init__(self, matrices: Sequence):
        mats = _as_sym_list(matrices)
        if not near_zero(_clifford_residual([m.array for m in mats]), 1.0):
            raise CliffordError("matrices do not satisfy P_iP_j + P_jP_i = 2 delta_ij I")
        self._matrices = tuple(mats)

    @property
    def matrices(self) -> tuple[SymMatrix, ...]:
        return self._matrices

    @property
    def arrays(self) -> list[np.ndarray]:
        return [m.array for m in self._matrices]

    @property
    def count(self) -> int:
        return len(self._matrices)

    @property
    def n(self) -> int:
        return self.count - 1

    @property
    def dim(self) -> int:
        return self._matrices[0].dim

    @property
    def exact(self) -> bool:
        return self._matrices[0].exact

    def __eq__(self, other) -> bool:
        if not isinstance(other, CliffordSystem):
            return NotImplemented
        return self._matrices == other._matrices

    def __hash__(self):
        return hash(self._matrices)

    def __repr__(self) -> str:
        return f"CliffordSystem(count={self.count}, dim={self.dim})"


def direct_sum(s1: CliffordSystem, s2: CliffordSystem) -> CliffordSystem:
    if s1.count != s2.count:
        raise CliffordError(f"cannot sum systems with {s1.count} and {s2.count} members")
    exact = s1.exact and s2.exact
    d1, d2 = s1.dim, s2.dim
    out = []
    for a, b in zip(s1.arrays, s2.arrays):
        M = exact_zeros((d1 + d2, d1 + d2)) if exact else np.zeros((d1 + d2, d1 + d2))
        M[:d1, :d1] = a if exact else to_float_array(a)
        M[d1:, d1:] = b if exact else to_float_array(b)
        out.append(M)
    return CliffordSystem(out)


def irreducible(n: int) -> CliffordSystem:
    """An irreducible Clifford system with n+1 members on R^{2 delta(n)}.

    Built as P_0 = diag(I, -I), P_1 = [[0, I], [I, 0]] and P_{i+1} = J (x) E_i for
    n-1 anticommuting complex structures E_i on R^{delta(n)}.
    """
    if n < 1:
        raise ValueError("irreducible(n) needs n >= 1")
    structures, d = _complex_structures(n - 1)
    eye = np.eye(d, dtype=np.int64)
    mats = [np.kron(_SEEDS["Z"], eye), np.kron(_SEEDS["X"], eye)]
    mats += [np.kron(_SEEDS["J"], E) for E in structures]
    assert d == delta(n), (d, delta(n))
    return CliffordSystem(mats)


def support_components(system: CliffordSystem) -> list[list[int]]:
    """Connected components of the union of the matrices' non-zero patterns."""
    dim = system.dim
    support = np.zeros((dim, dim), dtype=bool)
    for a in system.arrays:
        support |= to_float_array(a) != 0
    seen = [False] * dim
    comps = []
    for start in range(dim):
        if seen[start]:
            continue
        stack, comp = [start], []
        seen[start] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in np.nonzero(support[v])[0]:
                if not seen[u]:
                    seen[u] = True
                    stack.append(int(u))
        comps.append(sorted(comp))
    return comps


def has_coordinate_splitting(system: CliffordSystem) -> bool:
    """True if some coordinate subspace is invariant under every P_i.

    A True answer proves reducibility; False is inconclusive.
    """
    return len(support_components(system)) > 1


# -- bridge to harmonic morphisms -----------------------------------------


def qhm_from_clifford(system: CliffordSystem) -> QuadraticMap:
    """X -> (<P_0 X, X>, ..., <P_n X, X>)."""
    if not isinstance(system, CliffordSystem):
        system = CliffordSystem(system)
    if system.count < 2:
        raise CliffordError("need at least two Clifford matrices for a harmonic morphism")
    return QuadraticMap(system.matrices)


@dataclass(frozen=True)
class UmbilicalDecomposition:
    """phi(X) = scale * F(P^t X) with F the map of ``system``."""

    scale: Scalar
    system: CliffordSystem
    P: np.ndarray


def clifford_from_umbilical(qmap: QuadraticMap) -> UmbilicalDecomposition:
    require_harmonic_morphism(qmap)
    umbilical, _ = is_umbilical(qmap)
    if not umbilical:
        raise NotAHarmonicMorphism("map is not umbilical; it does not come from a Clifford system")
    nf = normal_form(qmap)
    if nf.r:
        raise NotAHarmonicMorphism(
            f"map is Q-singular (kernel dimension {nf.r}); split off the kernel first"
        )
    scale = nf.D[0]
    if nf.exact:
        inv = Fraction(1) / Fraction(scale)
        mats = [C * inv for C in nf.canonical_components()]
    else:
        scale = float(scale)
        mats = [C / scale for C in nf.canonical_components()]
    return UmbilicalDecomposition(scale=scale, system=CliffordSystem(mats), P=nf.P)


# -- equivalence -----------------------------------------------------------


def equivalence_witness_check(P_sys: CliffordSystem, Q_sys: CliffordSystem, A) -> bool:
    """True iff A is orthogonal and Q_i = A P_i A^t for every i."""
    if P_sys.count != Q_sys.count or P_sys.dim != Q_sys.dim:
        raise CliffordError("systems differ in size")
    A = as_array(A) if not isinstance(A, np.ndarray) else A
    if A.shape != (P_sys.dim, P_sys.dim):
        raise CliffordError(f"witness must be {P_sys.dim} x {P_sys.dim}")
    exact = P_sys.exact and Q_sys.exact and A.dtype == object
    if exact:
        eye = exact_identity(A.shape[0])
        pairs = zip(P_sys.arrays, Q_sys.arrays)
    else:
        A = to_float_array(A)
        eye = np.eye(A.shape[0])
        pairs = ((to_float_array(p), to_float_array(q)) for p, q in zip(P_sys.arrays, Q_sys.arrays))
    if not near_zero(max_abs(A @ A.T - eye), 1.0):
        return False
    return all(near_zero(max_abs(A @ p @ A.T - q), 1.0) for p, q in pairs)


@dataclass(frozen=True)
class EquivalenceInvariants:
    dim: int
    count: int
    multiplicity: int
    product_trace: Scalar


def equivalence_invariants(system: CliffordSystem) -> EquivalenceInvariants:
    """Size data plus tr(P_0 P_1 ... P_n), which separates the two classes when n = 0 mod 4."""
    unit = 2 * delta(system.n) if system.n >= 1 else 2
    if system.dim % unit:
        raise CliffordError(f"dimension {system.dim} is not a multiple of 2*delta(n) = {unit}")
    arrays = system.arrays
    prod = arrays[0]
    for a in arrays[1:]:
        prod = prod @ a
    trace = sum(prod.diagonal().tolist(), 0 if system.exact else 0.0)
    return EquivalenceInvariants(
        dim=system.dim,
        count=system.count,
        multiplicity=system.dim // unit,
        product_trace=trace,
    )


def are_equivalent(s1: CliffordSystem, s2: CliffordSystem) -> bool:
    """Decide algebraic equivalence from invariants.

    Exact for irreducible systems.  For reducible ones it only checks a
    necessary condition.
    """
    a, b = equivalence_invariants(s1), equivalence_invariants(s2)
    if (a.dim, a.count, a.multiplicity) != (b.dim, b.count, b.multiplicity):
        return False
    if s1.n % 4 == 0:
        scale = max(abs(float(a.product_trace)), abs(float(b.product_trace)), 1.0)
        return near_zero(a.product_trace - b.product_trace, scale)
    return True
