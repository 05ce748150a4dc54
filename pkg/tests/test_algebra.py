import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from tensorkit import (
    frobenius_norm,
    hadamard,
    khatri_rao,
    kronecker,
    mode_dot,
    moment3,
    multi_mode_dot,
    outer,
    unfold,
)
from helpers import khatri_rao_bruteforce, outer_bruteforce


@pytest.fixture
def cube():
    return np.arange(8, dtype=float).reshape(2, 2, 2)


class TestModeDot:
    def test_identity_matrix(self, cube):
        assert_allclose(mode_dot(cube, np.eye(2), 0), cube)

    def test_ones_row_sums_slices(self, cube):
        res = mode_dot(cube, np.ones((1, 2)), 0)
        assert res.shape == (1, 2, 2)
        assert_allclose(res[0], [[4.0, 6.0], [8.0, 10.0]])

    def test_defining_identity_randomized(self):
        rng = np.random.default_rng(21)
        for _ in range(30):
            shape = tuple(rng.integers(2, 6, size=3))
            x = rng.standard_normal(shape)
            mode = int(rng.integers(0, 3))
            u = rng.standard_normal((int(rng.integers(1, 7)), shape[mode]))
            lhs = unfold(mode_dot(x, u, mode), mode)
            rhs = u @ unfold(x, mode)
            assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-12)

    def test_distinct_modes_commute(self):
        rng = np.random.default_rng(22)
        for _ in range(10):
            x = rng.standard_normal((3, 4, 5))
            a = rng.standard_normal((6, 3))
            b = rng.standard_normal((2, 4))
            ab = mode_dot(mode_dot(x, a, 0), b, 1)
            ba = mode_dot(mode_dot(x, b, 1), a, 0)
            assert_allclose(ab, ba, atol=1e-10)

    def test_vector_extracts_slice(self, cube):
        assert_allclose(mode_dot(cube, np.array([1.0, 0.0]), 2), [[0.0, 2.0], [4.0, 6.0]])
        assert_allclose(mode_dot(cube, np.array([1.0, 0.0]), 0), cube[0])

    def test_vector_on_order1_gives_scalar(self):
        t = np.array([1.0, 2.0, 3.0])
        v = np.array([4.0, 5.0, 6.0])
        res = mode_dot(t, v, 0)
        assert res.shape == ()
        assert float(res) == pytest.approx(t @ v)

    def test_dimension_mismatch(self, cube):
        with pytest.raises(ValueError):
            mode_dot(cube, np.ones((2, 3)), 0)
        with pytest.raises(ValueError):
            mode_dot(cube, np.ones(3), 1)


class TestMultiModeDot:
    def test_identities_leave_unchanged(self, cube):
        res = multi_mode_dot(cube, [np.eye(2)] * 3)
        assert_allclose(res, cube)

    def test_matches_nested_calls(self):
        rng = np.random.default_rng(23)
        x = rng.standard_normal((3, 4, 5))
        ms = [rng.standard_normal((2, 3)), rng.standard_normal((6, 4)),
              rng.standard_normal((3, 5))]
        expected = mode_dot(mode_dot(mode_dot(x, ms[0], 0), ms[1], 1), ms[2], 2)
        assert_allclose(multi_mode_dot(x, ms), expected, rtol=1e-12, atol=1e-12)

    def test_subset_and_order_independence(self):
        rng = np.random.default_rng(24)
        x = rng.standard_normal((3, 4, 5))
        a = rng.standard_normal((2, 4))
        b = rng.standard_normal((2, 5))
        res = multi_mode_dot(x, [b, a], modes=[2, 1])
        expected = mode_dot(mode_dot(x, a, 1), b, 2)
        assert_allclose(res, expected, atol=1e-10)

    def test_transpose_projection_nonexpansive(self):
        rng = np.random.default_rng(25)
        x = rng.standard_normal((5, 6, 7))
        us = [np.linalg.qr(rng.standard_normal((s, 3)))[0] for s in x.shape]
        compressed = multi_mode_dot(x, us, transpose=True)
        projected = multi_mode_dot(compressed, us)
        assert frobenius_norm(projected) <= frobenius_norm(x) + 1e-12
        # projecting twice is idempotent
        again = multi_mode_dot(multi_mode_dot(projected, us, transpose=True), us)
        assert_allclose(again, projected, atol=1e-10)

    def test_duplicate_mode_rejected(self, cube):
        with pytest.raises(ValueError, match="distinct"):
            multi_mode_dot(cube, [np.eye(2), np.eye(2)], modes=[1, 1])


class TestKronecker:
    def test_identity(self):
        assert_array_equal(kronecker([np.eye(2), np.eye(2)]), np.eye(4))

    def test_definition_expansion(self):
        a = np.array([[1.0, 2.0], [3.0, 4.0]])
        b = np.array([[0.0, 1.0], [1.0, 0.0]])
        expected = [[0, 1, 0, 2], [1, 0, 2, 0], [0, 3, 0, 4], [3, 0, 4, 0]]
        assert_array_equal(kronecker([a, b]), expected)

    def test_mixed_product_property(self):
        rng = np.random.default_rng(26)
        for _ in range(10):
            a = rng.standard_normal((3, 4))
            b = rng.standard_normal((2, 5))
            u = rng.standard_normal((4, 2))
            v = rng.standard_normal((5, 3))
            lhs = kronecker([a, b]) @ kronecker([u, v])
            rhs = kronecker([a @ u, b @ v])
            assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-12)

    def test_variadic_left_to_right(self):
        rng = np.random.default_rng(27)
        ms = [rng.standard_normal((2, 2)) for _ in range(3)]
        assert_allclose(kronecker(ms), np.kron(np.kron(ms[0], ms[1]), ms[2]))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            kronecker([])


class TestKhatriRao:
    def test_single_input_unchanged(self):
        a = np.arange(6.0).reshape(3, 2)
        assert_array_equal(khatri_rao([a]), a)

    def test_hand_example(self):
        a = np.array([[1.0, 2.0], [3.0, 4.0]])
        b = np.array([[0.0, 1.0], [1.0, 0.0]])
        assert_array_equal(khatri_rao([a, b]), [[0, 2], [1, 0], [0, 4], [3, 0]])

    def test_column_vectors_reduce_to_kronecker(self):
        rng = np.random.default_rng(28)
        a = rng.standard_normal((3, 1))
        b = rng.standard_normal((4, 1))
        assert_allclose(khatri_rao([a, b]), kronecker([a, b]))

    def test_matches_bruteforce(self):
        rng = np.random.default_rng(29)
        for _ in range(10):
            ms = [rng.standard_normal((int(rng.integers(1, 5)), 3)) for _ in range(3)]
            assert_allclose(khatri_rao(ms), khatri_rao_bruteforce(ms), rtol=1e-14)

    def test_gram_identity(self):
        rng = np.random.default_rng(30)
        for _ in range(10):
            a = rng.standard_normal((4, 3))
            b = rng.standard_normal((5, 3))
            kr = khatri_rao([a, b])
            assert_allclose(kr.T @ kr, (a.T @ a) * (b.T @ b), rtol=1e-10, atol=1e-12)

    def test_mismatched_columns(self):
        with pytest.raises(ValueError):
            khatri_rao([np.ones((2, 2)), np.ones((2, 3))])
        with pytest.raises(ValueError):
            khatri_rao([])


class TestHadamard:
    def test_ones_neutral(self):
        a = np.arange(6.0).reshape(2, 3)
        assert_array_equal(hadamard([a, np.ones((2, 3))]), a)

    def test_zeros_absorbing(self):
        a = np.arange(6.0).reshape(2, 3)
        assert_array_equal(hadamard([a, np.zeros((2, 3))]), np.zeros((2, 3)))

    def test_khatri_rao_gram_identity(self):
        rng = np.random.default_rng(31)
        a = rng.standard_normal((6, 4))
        b = rng.standard_normal((3, 4))
        kr = khatri_rao([a, b])
        assert_allclose(hadamard([a.T @ a, b.T @ b]), kr.T @ kr, rtol=1e-12, atol=1e-12)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            hadamard([np.ones((2, 2)), np.ones((3, 2))])


class TestOuter:
    def test_basis_vectors(self):
        e0 = np.array([1.0, 0.0])
        t = outer([e0, e0, e0])
        expected = np.zeros((2, 2, 2))
        expected[0, 0, 0] = 1.0
        assert_array_equal(t, expected)

    def test_hand_example(self):
        assert_array_equal(outer([[1.0, 2.0], [1.0, 1.0]]), [[1.0, 1.0], [2.0, 2.0]])

    def test_norm_multiplicativity(self):
        rng = np.random.default_rng(32)
        vs = [rng.standard_normal(int(rng.integers(1, 6))) for _ in range(4)]
        expected = np.prod([np.linalg.norm(v) for v in vs])
        assert frobenius_norm(outer(vs)) == pytest.approx(expected, rel=1e-12)

    def test_matches_bruteforce(self):
        rng = np.random.default_rng(33)
        vs = [rng.standard_normal(3), rng.standard_normal(2), rng.standard_normal(4)]
        assert_allclose(outer(vs), outer_bruteforce(vs), rtol=1e-14)


class TestMoment3:
    def test_two_basis_samples(self):
        samples = [[1.0, 0.0], [0.0, 1.0]]
        t = moment3(samples)
        expected = np.zeros((2, 2, 2))
        expected[0, 0, 0] = 0.5
        expected[1, 1, 1] = 0.5
        assert_array_equal(t, expected)

    def test_single_sample_is_outer_cube(self):
        rng = np.random.default_rng(34)
        x = rng.standard_normal(4)
        assert_allclose(moment3([x]), outer([x, x, x]), rtol=1e-12, atol=1e-14)

    def test_exact_permutation_symmetry(self):
        rng = np.random.default_rng(35)
        t = moment3(rng.standard_normal((20, 5)))
        for perm in [(0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]:
            assert_array_equal(t, np.transpose(t, perm))

    def test_matches_average_of_outers(self):
        rng = np.random.default_rng(36)
        xs = rng.standard_normal((7, 3))
        expected = sum(outer_bruteforce([x, x, x]) for x in xs) / 7
        assert_allclose(moment3(xs), expected, rtol=1e-12, atol=1e-14)

    def test_empty_or_ragged(self):
        with pytest.raises(ValueError):
            moment3([])
        with pytest.raises(ValueError):
            moment3([[1.0, 2.0], [1.0]])
