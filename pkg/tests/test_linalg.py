from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qhm.core import as_array
from qhm.linalg import charpoly, exact_rank, jacobi_eigh, numeric_rank


def random_symmetric(rng, m, scale=1.0):
    a = rng.normal(size=(m, m)) * scale
    return (a + a.T) / 2


@pytest.mark.parametrize("m", [1, 2, 3, 5, 8, 16, 32])
def test_jacobi_matches_numpy(rng, m):
    for _ in range(5):
        a = random_symmetric(rng, m)
        w, V = jacobi_eigh(a)
        np.testing.assert_allclose(w, np.linalg.eigvalsh(a), atol=1e-12 * max(1, np.abs(a).max()))
        np.testing.assert_allclose(V.T @ V, np.eye(m), atol=1e-12)
        np.testing.assert_allclose(a @ V, V * w, atol=1e-11)


def test_jacobi_degenerate_and_zero():
    w, V = jacobi_eigh(np.zeros((3, 3)))
    assert not w.any() and np.array_equal(V, np.eye(3))
    w, V = jacobi_eigh(np.diag([2.0, -1.0, 2.0]))
    assert w.tolist() == [-1.0, 2.0, 2.0]


def test_jacobi_rejects_non_square():
    with pytest.raises(ValueError):
        jacobi_eigh(np.zeros((2, 3)))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 7), st.integers(0, 7), st.integers(0, 10_000))
def test_rank_of_square_equals_rank(m, r, seed):
    rng = np.random.default_rng(seed)
    r = min(r, m)
    Q, _ = np.linalg.qr(rng.normal(size=(m, m)))
    d = np.zeros(m)
    d[:r] = rng.uniform(0.5, 3.0, r) * rng.choice([-1, 1], r)
    a = (Q * d) @ Q.T
    assert numeric_rank(jacobi_eigh(a @ a)[0]) == numeric_rank(jacobi_eigh(a)[0]) == r


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 6), st.integers(0, 10_000))
def test_exact_rank_of_square(m, seed):
    rng = np.random.default_rng(seed)
    b = rng.integers(-3, 4, size=(m, max(1, m - 2)))
    a = as_array(b @ b.T * rng.choice([-1, 1]))
    assert exact_rank(a @ a) == exact_rank(a) == np.linalg.matrix_rank(b @ b.T)


def test_charpoly_matches_numpy(rng):
    for m in range(1, 7):
        b = rng.integers(-4, 5, size=(m, m))
        a = b + b.T
        coeffs = charpoly(as_array(a))
        expected = np.poly(a.astype(float))[::-1]
        np.testing.assert_allclose([float(c) for c in coeffs], expected, atol=1e-6 * max(1, np.abs(expected).max()))
        assert all(isinstance(c, Fraction) for c in coeffs)


def test_charpoly_exact_example():
    # diag(1, 2): (x - 1)(x - 2) = x^2 - 3x + 2
    assert charpoly(as_array([[1, 0], [0, 2]])) == [2, -3, 1]
