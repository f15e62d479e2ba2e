import numpy as np
import pytest

from qhm.classify43 import hopf_standard
from qhm.constructions import UnsupportedDimension, complete_lift, hopf_construction, orth_mult
from qhm.core import QuadraticMap, evaluate
from qhm.verify import NotAHarmonicMorphism, check_harmonic_morphism

from conftest import golden_maps

DIMS = (1, 2, 4, 8)


class TestOrthMult:
    def test_reals(self):
        assert orth_mult(1)([3], [-2]).tolist() == [-6]

    def test_complex(self, rng):
        f = orth_mult(2)
        for _ in range(20):
            a, b, c, d = rng.integers(-9, 10, 4)
            assert f([a, b], [c, d]).tolist() == [a * c - b * d, a * d + b * c]

    def test_quaternion_units(self):
        f = orth_mult(4)
        e = np.eye(4, dtype=int)
        # i j = k, j i = -k
        assert f(e[1], e[2]).tolist() == e[3].tolist()
        assert f(e[2], e[1]).tolist() == (-e[3]).tolist()

    @pytest.mark.parametrize("n", DIMS)
    def test_norm_multiplicative(self, n, rng):
        f = orth_mult(n)
        for _ in range(50):
            x, y = rng.normal(size=n), rng.normal(size=n)
            assert np.linalg.norm(f(x, y)) == pytest.approx(np.linalg.norm(x) * np.linalg.norm(y), rel=1e-12)

    @pytest.mark.parametrize("n", DIMS)
    def test_unit_and_left_matrices(self, n, rng):
        f = orth_mult(n)
        e0 = np.eye(n)[0]
        y = rng.normal(size=n)
        np.testing.assert_allclose(f(e0, y), y)
        np.testing.assert_allclose(f(y, e0), y)
        for i in range(n):
            L = f.left(i)
            assert np.array_equal(L.T @ L, np.eye(n, dtype=int))
            np.testing.assert_allclose(L @ y, f(np.eye(n)[i], y))

    def test_octonions_not_associative(self):
        f = orth_mult(8)
        e = np.eye(8, dtype=int)
        assert not np.array_equal(f(f(e[1], e[2]), e[4]), f(e[1], f(e[2], e[4])))

    @pytest.mark.parametrize("n", [0, 3, 5, 16])
    def test_unsupported(self, n):
        with pytest.raises(UnsupportedDimension, match="1, 2, 4"):
            orth_mult(n)


class TestHopf:
    def test_complex_squaring(self):
        assert hopf_construction(1) == QuadraticMap([[[1, 0], [0, -1]], [[0, 1], [1, 0]]])

    def test_n2_is_standard_up_to_relabeling(self):
        flip = np.diag([1, 1, 1, -1]).astype(object)
        assert hopf_construction(2).precompose(flip) == hopf_standard(1)

    @pytest.mark.parametrize("n", DIMS)
    def test_morphism_and_norm_identity(self, n, rng):
        F = hopf_construction(n)
        assert (F.m, F.n) == (2 * n, n + 1) and F.exact
        assert check_harmonic_morphism(F).is_harmonic_morphism
        f = orth_mult(n)
        for _ in range(20):
            X, Y = rng.normal(size=n), rng.normal(size=n)
            value = evaluate(F, np.concatenate([X, Y]))
            np.testing.assert_allclose(value, np.concatenate([[X @ X - Y @ Y], 2 * f(X, Y)]), atol=1e-12)
            assert value @ value == pytest.approx((X @ X + Y @ Y) ** 2, rel=1e-12)


class TestLift:
    def test_hopf_lift(self):
        lift = complete_lift(hopf_standard(1))
        assert (lift.m, lift.n) == (8, 3)
        assert check_harmonic_morphism(lift).is_harmonic_morphism

    def test_n1_lift(self):
        lift = complete_lift(hopf_construction(1))
        assert (lift.m, lift.n) == (4, 2)
        assert check_harmonic_morphism(lift).is_harmonic_morphism

    @pytest.mark.parametrize("name", sorted(golden_maps()))
    def test_diagonal_doubles(self, name, rng):
        qmap = golden_maps()[name]
        lift = complete_lift(qmap)
        for _ in range(10):
            X = rng.uniform(-1, 1, qmap.m)
            np.testing.assert_allclose(evaluate(lift, np.concatenate([X, X])), 2 * evaluate(qmap, X), atol=1e-12)

    def test_rejects_non_morphism(self):
        with pytest.raises(NotAHarmonicMorphism):
            complete_lift(QuadraticMap([[[1, 0], [0, 1]]]))
