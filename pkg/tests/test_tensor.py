import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from tproduct.algebra import inner_product, spectral_norm, tprod
from tproduct.errors import DimensionMismatch
from tproduct.oracle import spectral_norm_bcirc, tprod_bcirc
from tproduct.tensor import (Tensor3, add, bcirc, fold, frobenius_norm, identity, scale, sub,
                             transpose, unfold, zeros)

from conftest import rand_tensor, rel

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
dim = st.integers(1, 4)


@st.composite
def tensor_pair(draw):
    n1, n2, n3, n4 = draw(dim), draw(dim), draw(dim), draw(dim)
    A = draw(arrays(np.float64, (n1, n2, n3), elements=finite))
    B = draw(arrays(np.float64, (n2, n4, n3), elements=finite))
    return Tensor3(A), Tensor3(B)


class TestConstruction:
    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            Tensor3(np.array([[[np.nan]]]))
        with pytest.raises(ValueError):
            Tensor3(np.full((2, 2, 2), np.inf))

    def test_rejects_bad_rank_and_empty(self):
        with pytest.raises(DimensionMismatch):
            Tensor3(np.zeros(3))
        with pytest.raises(DimensionMismatch):
            Tensor3(np.zeros((2, 0, 2)))

    def test_matrix_is_lifted(self):
        A = Tensor3(np.arange(6.0).reshape(2, 3))
        assert A.shape == (2, 3, 1)

    def test_immutable_and_copied(self):
        raw = np.ones((2, 2, 2))
        A = Tensor3(raw)
        raw[0, 0, 0] = 5.0
        assert A.data[0, 0, 0] == 1.0
        with pytest.raises(ValueError):
            A.data[0, 0, 0] = 3.0

    def test_flat_order_is_slice_major(self):
        A = Tensor3.from_flat((2, 2, 2), np.arange(8.0))
        np.testing.assert_array_equal(A.frontal(0), [[0, 2], [1, 3]])
        np.testing.assert_array_equal(A.frontal(1), [[4, 6], [5, 7]])
        np.testing.assert_array_equal(A.to_flat(), np.arange(8.0))

    def test_from_flat_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            Tensor3.from_flat((2, 2, 2), np.arange(7.0))

    def test_lateral_slice(self, rng):
        A = rand_tensor(rng, 3, 4, 2)
        L = A.lateral(2)
        assert L.shape == (3, 1, 2)
        np.testing.assert_array_equal(L.data[:, 0, :], A.data[:, 2, :])


class TestBcirc:
    def test_identity_gives_identity_matrix(self):
        np.testing.assert_array_equal(bcirc(identity(2, 3)), np.eye(6))

    def test_single_slice(self, rng):
        A = rand_tensor(rng, 3, 2, 1)
        np.testing.assert_array_equal(bcirc(A), A.frontal(0))

    def test_two_by_two_by_two_layout(self, rng):
        A = rand_tensor(rng, 2, 2, 2)
        A1, A2 = A.frontal(0), A.frontal(1)
        np.testing.assert_array_equal(bcirc(A), np.block([[A1, A2], [A2, A1]]))

    def test_index_formula(self, rng):
        A = rand_tensor(rng, 2, 3, 4)
        M = bcirc(A)
        for i in range(4):
            for j in range(4):
                np.testing.assert_array_equal(M[2 * i:2 * i + 2, 3 * j:3 * j + 3],
                                              A.frontal((i - j) % 4))

    @settings(max_examples=60, deadline=None)
    @given(tensor_pair())
    def test_homomorphism(self, pair):
        A, B = pair
        lhs = bcirc(tprod(A, B))
        rhs = bcirc(A) @ bcirc(B)
        assert np.linalg.norm(lhs - rhs) <= 1e-12 * max(1.0, np.linalg.norm(rhs))


class TestFoldUnfold:
    def test_round_trip(self, rng):
        A = rand_tensor(rng, 3, 2, 4)
        assert fold(unfold(A), A.shape) == A

    def test_identity_unfold(self):
        expected = np.vstack([np.eye(2), np.zeros((2, 2)), np.zeros((2, 2))])
        np.testing.assert_array_equal(unfold(identity(2, 3)), expected)

    def test_unfold_is_first_block_column(self, rng):
        A = rand_tensor(rng, 3, 2, 4)
        np.testing.assert_array_equal(unfold(A), bcirc(A)[:, :2])

    def test_fold_rejects_wrong_shape(self):
        with pytest.raises(DimensionMismatch):
            fold(np.zeros((5, 2)), (2, 2, 2))


class TestTprod:
    def test_identity_both_sides(self, rng):
        A = rand_tensor(rng, 3, 4, 5)
        assert rel(tprod(A, identity(4, 5)), A) < 1e-15
        assert rel(tprod(identity(3, 5), A), A) < 1e-15

    def test_matrix_case(self, rng):
        A, B = rng.standard_normal((3, 4)), rng.standard_normal((4, 2))
        np.testing.assert_allclose(tprod(Tensor3(A), Tensor3(B)).data[:, :, 0], A @ B,
                                   rtol=1e-14)

    def test_against_oracle(self, rng):
        A, B = rand_tensor(rng, 3, 4, 5), rand_tensor(rng, 4, 2, 5)
        assert rel(tprod(A, B), tprod_bcirc(A, B)) < 1e-13

    def test_operator(self, rng):
        A, B = rand_tensor(rng, 2, 3, 4), rand_tensor(rng, 3, 2, 4)
        assert (A @ B) == tprod(A, B)

    def test_shape_mismatch(self, rng):
        with pytest.raises(DimensionMismatch):
            tprod(rand_tensor(rng, 2, 3, 4), rand_tensor(rng, 2, 3, 4))
        with pytest.raises(DimensionMismatch):
            tprod(rand_tensor(rng, 2, 3, 4), rand_tensor(rng, 3, 3, 5))

    @settings(max_examples=40, deadline=None)
    @given(tensor_pair(), st.integers(1, 3))
    def test_associative(self, pair, n5):
        A, B = pair
        C = Tensor3(np.random.default_rng(n5).standard_normal((B.n2, n5, B.n3)))
        lhs, rhs = tprod(tprod(A, B), C), tprod(A, tprod(B, C))
        scale_ = max(1.0, frobenius_norm(A) * frobenius_norm(B) * frobenius_norm(C))
        assert frobenius_norm(lhs - rhs) <= 1e-12 * scale_


class TestTranspose:
    def test_matrix_case(self, rng):
        A = rand_tensor(rng, 2, 3, 1)
        np.testing.assert_array_equal(transpose(A).frontal(0), A.frontal(0).T)

    def test_slice_order(self, rng):
        A = rand_tensor(rng, 2, 3, 4)
        At = transpose(A)
        for k in range(4):
            np.testing.assert_array_equal(At.frontal(k), A.frontal((-k) % 4).T)

    def test_bcirc_commutes(self, rng):
        A = rand_tensor(rng, 2, 3, 4)
        np.testing.assert_array_equal(bcirc(transpose(A)), bcirc(A).T)

    @settings(max_examples=60, deadline=None)
    @given(tensor_pair())
    def test_involution_and_product_rule(self, pair):
        A, B = pair
        assert transpose(transpose(A)) == A
        lhs, rhs = transpose(tprod(A, B)), tprod(transpose(B), transpose(A))
        assert frobenius_norm(lhs - rhs) <= 1e-12 * max(1.0, frobenius_norm(lhs))

    def test_property_alias(self, rng):
        A = rand_tensor(rng, 2, 3, 3)
        assert A.T == transpose(A)


class TestNormsAndArithmetic:
    def test_identity_norms(self):
        assert frobenius_norm(identity(4, 3)) == 2.0
        assert spectral_norm(identity(4, 3)) == pytest.approx(1.0, abs=1e-15)

    def test_zero_norms(self):
        assert frobenius_norm(zeros(2, 3, 4)) == 0.0
        assert spectral_norm(zeros(2, 3, 4)) == 0.0

    def test_spectral_matches_bcirc(self, rng):
        A = rand_tensor(rng, 3, 5, 4)
        assert spectral_norm(A) == pytest.approx(spectral_norm_bcirc(A), rel=1e-12)

    def test_add_sub_scale(self, rng):
        A = rand_tensor(rng, 2, 3, 4)
        assert add(A, zeros(2, 3, 4)) == A
        assert sub(A, A) == zeros(2, 3, 4)
        assert frobenius_norm(scale(A, 2)) == pytest.approx(2 * frobenius_norm(A))
        assert (A + A) == 2 * A
        assert (A / 2) == scale(A, 0.5)
        assert -A == scale(A, -1.0)

    def test_add_shape_mismatch(self, rng):
        with pytest.raises(DimensionMismatch):
            add(rand_tensor(rng, 2, 3, 4), rand_tensor(rng, 3, 2, 4))

    def test_identity_rejects_bad_sizes(self):
        with pytest.raises(DimensionMismatch):
            identity(0, 2)


class TestInnerProduct:
    def test_zero(self, rng):
        X = rand_tensor(rng, 4, 1, 3)
        assert frobenius_norm(inner_product(X, zeros(4, 1, 3))) == 0.0

    def test_dot_product_when_n3_is_one(self, rng):
        x, y = rng.standard_normal(4), rng.standard_normal(4)
        got = inner_product(Tensor3(x[:, None, None]), Tensor3(y[:, None, None]))
        assert got.shape == (1, 1, 1)
        assert got.data[0, 0, 0] == pytest.approx(x @ y)

    def test_against_oracle(self, rng):
        X, Y = rand_tensor(rng, 4, 1, 3), rand_tensor(rng, 4, 1, 3)
        ref = tprod_bcirc(transpose(X), Y)
        assert rel(inner_product(X, Y), ref) < 1e-13

    def test_requires_lateral_slices(self, rng):
        with pytest.raises(DimensionMismatch):
            inner_product(rand_tensor(rng, 4, 2, 3), rand_tensor(rng, 4, 2, 3))

    def test_orthogonal_slices_are_pythagorean(self, rng):
        # X in one coordinate block, Y in another: <X, Y> = 0 exactly
        X = Tensor3(np.concatenate([rng.standard_normal((2, 1, 3)), np.zeros((2, 1, 3))]))
        Y = Tensor3(np.concatenate([np.zeros((2, 1, 3)), rng.standard_normal((2, 1, 3))]))
        assert np.max(np.abs(inner_product(X, Y).data)) <= 1e-12
        lhs = frobenius_norm(X + Y) ** 2
        assert lhs == pytest.approx(frobenius_norm(X) ** 2 + frobenius_norm(Y) ** 2, rel=1e-10)
