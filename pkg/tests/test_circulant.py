import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circnorm.circulant import (
    Circulant,
    dense,
    dft_matrix,
    eigenvalues,
    eigenvalues_direct,
    make_two_param,
    matvec,
    matvec_direct,
    shift_matrix,
    two_param_spectrum,
    verify_factorization,
)


def hand_eigs(row):
    """Independent oracle: one root-of-unity sum per k, scalar arithmetic."""
    n = len(row)
    w = cmath.exp(2j * math.pi / n)
    return [sum(row[j] * w ** (j * k) for j in range(n)) for k in range(n)]


rows = st.lists(st.floats(-10, 10, allow_nan=False), min_size=1, max_size=64)


class TestConstruction:
    @pytest.mark.parametrize("n,a,b,row", [
        (3, 1, 1, [1, 1, 1]),
        (4, -2, 1, [-2, 1, 1, 1]),
        (1, 5, 0, [5]),
    ])
    def test_make_two_param(self, n, a, b, row):
        assert list(make_two_param(n, a, b).to_circulant().first_row) == row

    @pytest.mark.parametrize("args", [(0, 1, 1), (3, 1, -1), (3, math.inf, 1), (3, 1, math.nan), (2.5, 1, 1)])
    def test_rejects(self, args):
        with pytest.raises(ValueError):
            make_two_param(*args)

    def test_empty_and_nonfinite_rows(self):
        with pytest.raises(ValueError):
            Circulant(())
        with pytest.raises(ValueError):
            Circulant((1.0, math.nan))

    def test_symmetry_flag(self):
        assert Circulant((1, 2, 3, 2)).is_symmetric()
        assert not Circulant((1, 2, 3)).is_symmetric()


class TestDense:
    def test_layouts(self):
        assert dense(Circulant((4, 7))).tolist() == [[4, 7], [7, 4]]
        assert dense(Circulant((1, 2, 3))).tolist() == [[1, 2, 3], [3, 1, 2], [2, 3, 1]]
        assert dense(make_two_param(3, -2, 1)).tolist() == [[-2, 1, 1], [1, -2, 1], [1, 1, -2]]

    def test_each_row_is_right_shift(self):
        A = dense(Circulant(tuple(range(1, 8))))
        for r in range(1, 7):
            assert np.array_equal(A[r], np.roll(A[r - 1], 1))

    def test_guard(self):
        with pytest.raises(ValueError):
            dense(Circulant((0.0,) * 4097))


class TestEigenvalues:
    def test_one_by_one(self):
        assert eigenvalues(Circulant((5,))).eigenvalues.tolist() == [5]

    @pytest.mark.parametrize("c", [make_two_param(3, 1, 1), make_two_param(4, 2, 1)])
    def test_against_hand_sums(self, c):
        got = eigenvalues(c).eigenvalues
        np.testing.assert_allclose(got, hand_eigs(c.first_row), atol=1e-12)

    def test_values(self):
        s = eigenvalues(make_two_param(4, 2, 1))
        np.testing.assert_allclose(s.eigenvalues, [5, 1, 1, 1], atol=1e-12)
        assert s.max_abs == pytest.approx(5)
        s = eigenvalues(make_two_param(3, 1, 1))
        np.testing.assert_allclose(s.eigenvalues, [3, 0, 0], atol=1e-12)

    @pytest.mark.parametrize("c,want", [
        (make_two_param(3, 1, 1), [3, 0, 0]),
        (make_two_param(3, -2, 1), [0, -3, -3]),
        (make_two_param(4, -1, 1), [2, -2, -2, -2]),
    ])
    def test_two_param_closed_form(self, c, want):
        s = two_param_spectrum(c)
        assert s.eigenvalues.tolist() == want
        np.testing.assert_allclose(s.eigenvalues, hand_eigs(c.first_row), atol=1e-12)
        assert s.max_abs == max(abs(v) for v in want)

    def test_two_param_single(self):
        assert two_param_spectrum(make_two_param(1, -4, 3)).max_abs == 4

    @settings(max_examples=60, deadline=None)
    @given(rows)
    def test_diagonalizes(self, row):
        c = Circulant(tuple(row))
        n = c.n
        F = dft_matrix(n)
        diag = np.diag(F.entries @ dense(c) @ F.adjoint)
        tol = 1e-9 * n * max(max(abs(v) for v in row), 1e-300)
        assert np.max(np.abs(eigenvalues_direct(c).eigenvalues - diag)) <= tol

    @settings(max_examples=60, deadline=None)
    @given(rows)
    def test_fft_path_matches_direct(self, row):
        c = Circulant(tuple(row))
        d = eigenvalues(c, "direct").eigenvalues
        f = eigenvalues(c, "fft").eigenvalues
        assert np.max(np.abs(d - f)) <= 1e-9 * c.n * (max(abs(v) for v in row) + 1e-300)

    def test_auto_uses_fft_beyond_limit(self):
        rng = np.random.default_rng(3)
        c = Circulant(tuple(rng.uniform(-1, 1, 300)))
        np.testing.assert_allclose(eigenvalues(c).eigenvalues, eigenvalues_direct(c).eigenvalues, atol=1e-9)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 40), st.floats(-10, 10), st.floats(0, 10))
    def test_closed_form_magnitudes(self, n, a, b):
        c = make_two_param(n, a, b)
        closed = np.sort(np.abs(two_param_spectrum(c).eigenvalues))
        numeric = np.sort(np.abs(eigenvalues(c).eigenvalues))
        assert np.all(np.abs(closed - numeric) <= 1e-10 * (abs(a) + n * b) + 1e-300)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(-10, 10), min_size=1, max_size=20))
    def test_symmetric_has_real_spectrum(self, half):
        row = half + half[1:][::-1]
        c = Circulant(tuple(row))
        assert c.is_symmetric()
        assert np.max(np.abs(eigenvalues(c).eigenvalues.imag)) <= 1e-9 * len(row) * 10


class TestMatvec:
    def test_examples(self):
        np.testing.assert_allclose(matvec(make_two_param(3, 1, 1), [1, 1, 1]), [3, 3, 3])
        np.testing.assert_allclose(matvec(make_two_param(3, -2, 1), [-1, 1, 0]), [3, -3, 0], atol=1e-14)
        x = np.array([0.3, -2.0, 7.5])
        np.testing.assert_allclose(matvec(Circulant((1, 0, 0)), x), x, atol=1e-14)

    @pytest.mark.parametrize("n", list(range(1, 65)))
    def test_matches_dense_all_sizes(self, n):
        rng = np.random.default_rng(n)
        c = Circulant(tuple(rng.uniform(-10, 10, n)))
        x = rng.standard_normal(n)
        ref = dense(c) @ x
        scale = max(np.max(np.abs(ref)), 1.0)
        assert np.max(np.abs(matvec(c, x) - ref)) <= 1e-10 * scale
        assert np.max(np.abs(matvec_direct(c, x) - ref)) <= 1e-10 * scale

    def test_block_input(self):
        rng = np.random.default_rng(0)
        c = Circulant(tuple(rng.uniform(-1, 1, 9)))
        X = rng.standard_normal((9, 4))
        np.testing.assert_allclose(matvec(c, X), dense(c) @ X, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            matvec(Circulant((1, 2, 3)), [1, 2])
        with pytest.raises(ValueError):
            matvec_direct(Circulant((1, 2, 3)), [1, 2])


class TestDFT:
    def test_small(self):
        assert dft_matrix(1).entries.tolist() == [[1]]
        np.testing.assert_allclose(dft_matrix(2).adjoint, np.array([[1, 1], [1, -1]]) / math.sqrt(2), atol=1e-15)
        assert dft_matrix(4).adjoint[1, 1] == pytest.approx(0.5j, abs=1e-15)

    def test_forward_entries(self):
        F = dft_matrix(5).entries
        w = cmath.exp(2j * math.pi / 5)
        for j in range(5):
            for k in range(5):
                assert F[j, k] == pytest.approx(w ** (-j * k) / math.sqrt(5), abs=1e-14)

    @pytest.mark.parametrize("n", [1, 2, 3, 7, 16, 31, 100])
    def test_unitary(self, n):
        assert dft_matrix(n).unitarity_residual() <= 1e-12 * n

    @settings(max_examples=50, deadline=None)
    # squares of tiny entries go subnormal and lose the relative precision
    @given(st.lists(st.floats(-1e3, 1e3).filter(lambda v: v == 0 or abs(v) > 1e-100), min_size=1, max_size=50))
    def test_plancherel(self, x):
        x = np.asarray(x)
        lhs = np.linalg.norm(dft_matrix(x.size).entries @ x)
        assert lhs == pytest.approx(np.linalg.norm(x), rel=1e-12, abs=1e-300)


class TestShiftAndFactorization:
    def test_shift_examples(self):
        assert shift_matrix(2).tolist() == [[0, 1], [1, 0]]
        assert shift_matrix(3).tolist() == [[0, 1, 0], [0, 0, 1], [1, 0, 0]]

    @pytest.mark.parametrize("n", [1, 2, 5, 12])
    def test_shift_order(self, n):
        P = shift_matrix(n)
        assert np.array_equal(np.linalg.matrix_power(P, n), np.eye(n, dtype=P.dtype))

    def test_single(self):
        r = verify_factorization(Circulant((3.5,)))
        assert r.max() == 0

    @pytest.mark.parametrize("c", [Circulant((1, 2, 3, 4)), make_two_param(8, -3, 2)])
    def test_residuals_small(self, c):
        r = verify_factorization(c)
        assert r.shift < 1e-12 and r.shift_sum < 1e-12 and r.spectral < 1e-12

    def test_sum_of_powers_is_exact(self):
        # integer coefficients times 0/1 permutation matrices
        assert verify_factorization(Circulant((1, -2, 3, 5, 8))).shift_sum == 0
