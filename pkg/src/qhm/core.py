"""Scalars, symmetric component matrices and quadratic maps.

A quadratic map phi: R^m -> R^n is stored as n symmetric m x m component
matrices A_i with phi(X)_i = X^t A_i X.  Every object is either wholly exact
(entries are ``int`` or ``fractions.Fraction`` held in numpy object arrays) or
wholly float (``float64`` arrays).  Exact mode is chosen whenever every input
entry is an integer or a rational.
"""

from __future__ import annotations

import math
import os
from contextlib import contextmanager
from contextvars import ContextVar
from fractions import Fraction
from numbers import Integral, Rational, Real
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

Scalar = Union[int, Fraction, float]

ABS_FLOOR = 1e-12
DEFAULT_RTOL = 1e-9
TOL_ENV_VAR = "QHM_TOL"


def _default_rtol() -> float:
    raw = os.environ.get(TOL_ENV_VAR)
    if raw is None:
        return DEFAULT_RTOL
    value = float(raw)
    if not (value > 0 and math.isfinite(value)):
        raise ValueError(f"{TOL_ENV_VAR} must be a positive finite number, got {raw!r}")
    return value


_rtol: ContextVar[float] = ContextVar("qhm_rtol", default=_default_rtol())


def rtol() -> float:
    """Relative tolerance used by every float-mode equality test."""
    return _rtol.get()


@contextmanager
def tolerance(value: float) -> Iterator[float]:
    """Temporarily override the relative tolerance (context-local)."""
    if not (value > 0 and math.isfinite(value)):
        raise ValueError("tolerance must be positive and finite")
    token = _rtol.set(float(value))
    try:
        yield value
    finally:
        _rtol.reset(token)


def near_zero(x, scale: float = 1.0) -> bool:
    """True if ``x`` is zero: exactly for exact scalars, else relative to ``scale``."""
    if isinstance(x, (int, Fraction)):
        return x == 0
    return abs(float(x)) <= max(rtol() * float(scale), ABS_FLOOR)


# -- scalars ---------------------------------------------------------------


class ParseError(ValueError):
    pass


def _normalize(q: Fraction) -> Scalar:
    return int(q.numerator) if q.denominator == 1 else q


def to_scalar(x) -> Scalar:
    """Convert ``x`` to an exact (int/Fraction) or float scalar.

    Strings holding an integer or ``p/q`` are exact; strings with a decimal
    point or exponent are floats.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, Integral):
        return int(x)
    if isinstance(x, Fraction):
        return _normalize(x)
    if isinstance(x, Rational):
        return _normalize(Fraction(int(x.numerator), int(x.denominator)))
    if isinstance(x, str):
        s = x.strip()
        try:
            if "/" in s:
                num, den = s.split("/")
                if not num.strip().lstrip("+-").isdigit() or not den.strip().isdigit():
                    raise ValueError(s)
                return _normalize(Fraction(int(num), int(den)))
            if s.lstrip("+-").isdigit():
                return int(s)
            value = float(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a number: {x!r}") from exc
        if not math.isfinite(value):
            raise ParseError(f"non-finite number: {x!r}")
        return value
    if isinstance(x, Real):
        value = float(x)
        if not math.isfinite(value):
            raise ValueError(f"non-finite scalar: {x!r}")
        return value
    raise TypeError(f"cannot interpret {type(x).__name__} as a scalar")


def is_exact_scalar(x) -> bool:
    return isinstance(x, (int, Fraction))


def format_scalar(x: Scalar) -> str:
    """Text form that parses back bit-exactly through :func:`to_scalar`."""
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    s = format(float(x), ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


# -- arrays ----------------------------------------------------------------


def as_array(data, exact: bool | None = None) -> np.ndarray:
    """Coerce nested sequences or ndarrays to an exact object array or float64 array.

    With ``exact=None`` the mode is inferred from the entries.  Requesting
    ``exact=True`` for float data raises.
    """
    if isinstance(data, np.ndarray) and data.dtype.kind == "f":
        arr = np.asarray(data, dtype=float)
        if not np.all(np.isfinite(arr)):
            raise ValueError("non-finite entries")
        if exact:
            raise ValueError("float data cannot be used in exact mode")
        return arr
    if isinstance(data, np.ndarray) and data.dtype.kind in "iu":
        if exact is False:
            return data.astype(float)
        return np.vectorize(int, otypes=[object])(data) if data.size else data.astype(object)
    raw = np.asarray(data, dtype=object)
    flat = [to_scalar(v) for v in raw.ravel()]
    all_exact = all(is_exact_scalar(v) for v in flat)
    if exact is None:
        exact = all_exact
    if exact:
        if not all_exact:
            raise ValueError("float data cannot be used in exact mode")
        out = np.empty(len(flat), dtype=object)
        out[:] = flat
        return out.reshape(raw.shape)
    return np.array([float(v) for v in flat], dtype=float).reshape(raw.shape)


def is_exact_array(a: np.ndarray) -> bool:
    return a.dtype == object


def to_float_array(a: np.ndarray) -> np.ndarray:
    return a.astype(float) if a.dtype == object else a


def max_abs(a: np.ndarray) -> Scalar:
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(abs(v) for v in a.ravel())
    return float(np.max(np.abs(a)))


def exact_identity(m: int) -> np.ndarray:
    out = np.zeros((m, m), dtype=object)
    out[:] = 0
    for i in range(m):
        out[i, i] = 1
    return out


def exact_zeros(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out[...] = 0
    return out


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


def _simplify(a: np.ndarray) -> np.ndarray:
    # Fractions with unit denominator are stored as int to keep exact products fast.
    if a.dtype != object:
        return a
    out = np.empty(a.shape, dtype=object)
    out.ravel()[:] = [_normalize(v) if isinstance(v, Fraction) else v for v in a.ravel()]
    return out


# -- symmetric matrices ----------------------------------------------------


class SymMatrix:
    """Immutable symmetric matrix, exact or float.

    Float input is accepted when it is symmetric to within the relative
    tolerance and is then symmetrized; exact input must be exactly symmetric.
    """

    __slots__ = ("_a",)

    def __init__(self, entries, exact: bool | None = None):
        if isinstance(entries, SymMatrix):
            a = entries._a
            if exact is False and a.dtype == object:
                a = a.astype(float)
            elif exact and a.dtype != object:
                raise ValueError("float data cannot be used in exact mode")
            self._a = _frozen(a)
            return
        a = as_array(entries, exact)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise ValueError(f"component matrix must be square and non-empty, got shape {a.shape}")
        if a.dtype == object:
            if not np.array_equal(a, a.T):
                raise ValueError("exact matrix is not symmetric")
            a = _simplify(a)
        else:
            asym = float(np.max(np.abs(a - a.T)))
            if asym > max(rtol() * max_abs(a), ABS_FLOOR):
                raise ValueError(f"matrix is not symmetric (max asymmetry {asym:.3g})")
            a = a + (a.T - a) / 2
        self._a = _frozen(a)

    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def dim(self) -> int:
        return self._a.shape[0]

    @property
    def exact(self) -> bool:
        return self._a.dtype == object

    def to_float(self) -> "SymMatrix":
        return self if not self.exact else SymMatrix(self._a.astype(float))

    def is_zero(self) -> bool:
        if self.exact:
            return all(v == 0 for v in self._a.ravel())
        return not np.any(self._a)

    def trace(self) -> Scalar:
        return sum(self._a.diagonal().tolist(), 0 if self.exact else 0.0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymMatrix):
            return NotImplemented
        return self._a.shape == other._a.shape and bool(np.all(self._a == other._a))

    def __hash__(self):
        return hash((self._a.shape, tuple(self._a.ravel().tolist())))

    def __repr__(self) -> str:
        mode = "exact" if self.exact else "float"
        return f"SymMatrix({mode}, dim={self.dim})"


# -- quadratic maps --------------------------------------------------------


class QuadraticMap:
    """phi(X) = (X^t A_1 X, ..., X^t A_n X) for symmetric component matrices A_i."""

    __slots__ = ("_components",)

    def __init__(self, components: Iterable):
        comps = [c if isinstance(c, SymMatrix) else SymMatrix(c) for c in components]
        if not comps:
            raise ValueError("a quadratic map needs at least one component")
        dims = {c.dim for c in comps}
        if len(dims) != 1:
            raise ValueError(f"components have differing dimensions {sorted(dims)}")
        if not all(c.exact for c in comps):
            comps = [c.to_float() for c in comps]
        self._components = tuple(comps)

    @classmethod
    def from_arrays(cls, arrays: Sequence) -> "QuadraticMap":
        return cls(SymMatrix(a) for a in arrays)

    @property
    def components(self) -> tuple[SymMatrix, ...]:
        return self._components

    @property
    def arrays(self) -> list[np.ndarray]:
        return [c.array for c in self._components]

    @property
    def m(self) -> int:
        return self._components[0].dim

    @property
    def n(self) -> int:
        return len(self._components)

    @property
    def exact(self) -> bool:
        return self._components[0].exact

    @property
    def is_constant(self) -> bool:
        return all(c.is_zero() for c in self._components)

    def to_float(self) -> "QuadraticMap":
        return self if not self.exact else QuadraticMap(c.to_float() for c in self._components)

    def scaled(self, c) -> "QuadraticMap":
        c = to_scalar(c)
        return QuadraticMap.from_arrays([a * c for a in self.arrays])

    def precompose(self, L) -> "QuadraticMap":
        """The map X -> phi(L X) for a (k x m) matrix L; components L^t A_i L."""
        L = as_array(L) if not isinstance(L, np.ndarray) else L
        if L.ndim != 2 or L.shape[0] != self.m:
            raise ValueError(f"precomposition matrix must have {self.m} rows")
        if self.exact and L.dtype == object:
            arrays = [L.T @ a @ L for a in self.arrays]
        else:
            Lf = to_float_array(L)
            arrays = [Lf.T @ to_float_array(a) @ Lf for a in self.arrays]
        return QuadraticMap.from_arrays(arrays)

    def postcompose(self, G) -> "QuadraticMap":
        """The map X -> G phi(X) for an (k x n) matrix G."""
        G = as_array(G) if not isinstance(G, np.ndarray) else G
        if G.ndim != 2 or G.shape[1] != self.n:
            raise ValueError(f"postcomposition matrix must have {self.n} columns")
        exact = self.exact and G.dtype == object
        arrays = self.arrays if exact else [to_float_array(a) for a in self.arrays]
        out = []
        for row in (G if exact else to_float_array(G)):
            acc = arrays[0] * row[0]
            for coef, a in zip(row[1:], arrays[1:]):
                acc = acc + a * coef
            out.append(acc)
        return QuadraticMap.from_arrays(out)

    def max_difference(self, other: "QuadraticMap") -> float:
        """Largest entrywise difference between corresponding component matrices."""
        if (self.m, self.n) != (other.m, other.n):
            raise ValueError("maps have different shapes")
        if self.exact and other.exact:
            return float(max(max_abs(a - b) for a, b in zip(self.arrays, other.arrays)))
        return max(
            float(np.max(np.abs(to_float_array(a) - to_float_array(b))))
            for a, b in zip(self.arrays, other.arrays)
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuadraticMap):
            return NotImplemented
        return self._components == other._components

    def __hash__(self):
        return hash(self._components)

    def __repr__(self) -> str:
        mode = "exact" if self.exact else "float"
        return f"QuadraticMap(R^{self.m} -> R^{self.n}, {mode})"


# -- evaluation ------------------------------------------------------------


def _point(qmap: QuadraticMap, X) -> tuple[np.ndarray, list[np.ndarray]]:
    x = as_array(X) if not isinstance(X, np.ndarray) or X.dtype == object else X
    if x.dtype.kind in "iu":
        x = as_array(x)
    if x.ndim != 1 or x.shape[0] != qmap.m:
        raise ValueError(f"point must be a vector of length {qmap.m}, got shape {x.shape}")
    if qmap.exact and x.dtype == object:
        return x, qmap.arrays
    return to_float_array(x), [to_float_array(a) for a in qmap.arrays]


def _result(values: list, exact: bool) -> np.ndarray:
    if exact:
        out = np.empty(len(values), dtype=object)
        out[:] = [_normalize(v) if isinstance(v, Fraction) else v for v in values]
        return out
    return np.array(values, dtype=float)


def evaluate(qmap: QuadraticMap, X) -> np.ndarray:
    """phi(X); exact when both the map and X are exact."""
    x, arrays = _point(qmap, X)
    return _result([x @ a @ x for a in arrays], x.dtype == object)


def jacobian(qmap: QuadraticMap, X) -> np.ndarray:
    """n x m Jacobian at X, row i being 2 X^t A_i."""
    x, arrays = _point(qmap, X)
    rows = [2 * (x @ a) for a in arrays]
    J = np.array(rows, dtype=x.dtype)
    if J.dtype == object:
        J = _simplify(J)
    return J


def gram_gradients(qmap: QuadraticMap, X) -> SymMatrix:
    """Gram matrix of component gradients, J(X) J(X)^t (entries 4 X^t A_i A_j X)."""
    J = jacobian(qmap, X)
    return SymMatrix(J @ J.T)


def from_monomials(m: int, polynomials: Sequence[dict]) -> QuadraticMap:
    """Build a map from quadratic polynomials given as {(i, j): coefficient}.

    Indices are 1-based; the key (i, j) stands for the monomial x_i x_j.
    """
    comps = []
    for poly in polynomials:
        A = exact_zeros((m, m))
        for (i, j), coef in poly.items():
            if not (1 <= i <= m and 1 <= j <= m):
                raise ValueError(f"monomial x{i} x{j} outside R^{m}")
            coef = to_scalar(coef)
            if i == j:
                A[i - 1, i - 1] += coef
            else:
                half = coef / 2 if isinstance(coef, float) else Fraction(coef, 2)
                A[i - 1, j - 1] += half
                A[j - 1, i - 1] += half
        comps.append(A)
    return QuadraticMap.from_arrays(comps)
