import numpy as np
import pytest

from quatpaint.clinalg import (DimensionMismatch, NotPositiveDefinite,
                               cholesky_lower, frobenius, hermitian,
                               hpd_solve, matmul, random_complex, solve_right)


def naive_matmul(a, b):
    m, k = a.shape
    _, n = b.shape
    out = np.zeros((m, n), dtype=complex)
    for i in range(m):
        for j in range(n):
            for t in range(k):
                out[i, j] += a[i, t] * b[t, j]
    return out


def gaussian_elimination_solve(a, b):
    """Independent oracle: partial-pivoting elimination, no factorization."""
    a = np.array(a, dtype=complex)
    b = np.array(b, dtype=complex)
    n = a.shape[0]
    for col in range(n):
        pivot = col + np.argmax(np.abs(a[col:, col]))
        if pivot != col:
            a[[col, pivot]] = a[[pivot, col]]
            b[[col, pivot]] = b[[pivot, col]]
        for row in range(col + 1, n):
            factor = a[row, col] / a[col, col]
            a[row, col:] -= factor * a[col, col:]
            b[row] -= factor * b[col]
    x = np.zeros_like(b)
    for row in range(n - 1, -1, -1):
        x[row] = (b[row] - a[row, row + 1:] @ x[row + 1:]) / a[row, row]
    return x


def random_hpd(gen, n, ridge=1.0):
    v = gen.normal(size=(n, n)) + 1j * gen.normal(size=(n, n))
    return v @ v.conj().T + ridge * np.eye(n)


class TestMatmul:
    def test_identity(self, gen):
        a = gen.normal(size=(3, 3)) + 1j * gen.normal(size=(3, 3))
        assert np.array_equal(matmul(a, np.eye(3)), a)

    def test_i_squared(self):
        assert matmul(np.array([[1j]]), np.array([[1j]])) == [[-1]]

    def test_against_naive_loops(self, gen):
        a = gen.normal(size=(3, 4)) + 1j * gen.normal(size=(3, 4))
        b = gen.normal(size=(4, 2)) + 1j * gen.normal(size=(4, 2))
        assert np.allclose(matmul(a, b), naive_matmul(a, b),
                           rtol=1e-12, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            matmul(np.zeros((2, 3)), np.zeros((2, 3)))


class TestHermitian:
    def test_scalar(self):
        assert hermitian(np.array([[1 + 2j]])) == [[1 - 2j]]

    def test_real_symmetric_fixed(self):
        a = np.array([[1.0, 2.0], [2.0, 5.0]])
        assert np.array_equal(hermitian(a), a)

    def test_involution(self, gen):
        a = gen.normal(size=(3, 4)) + 1j * gen.normal(size=(3, 4))
        assert np.array_equal(hermitian(hermitian(a)), a)

    def test_product_rule(self, gen):
        a = gen.normal(size=(3, 4)) + 1j * gen.normal(size=(3, 4))
        b = gen.normal(size=(4, 2)) + 1j * gen.normal(size=(4, 2))
        lhs = hermitian(a @ b)
        rhs = hermitian(b) @ hermitian(a)
        assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-12)


class TestHpdSolve:
    def test_identity_system(self, gen):
        b = gen.normal(size=(3, 2)) + 1j * gen.normal(size=(3, 2))
        assert np.allclose(hpd_solve(np.eye(3), b), b, rtol=1e-14)

    def test_scaled_identity(self):
        x = hpd_solve(2.0 * np.eye(3), np.eye(3))
        assert np.allclose(x, 0.5 * np.eye(3), rtol=1e-15)

    def test_against_elimination_oracle(self, gen):
        a = random_hpd(gen, 6, ridge=1.0)
        b = gen.normal(size=(6, 3)) + 1j * gen.normal(size=(6, 3))
        got = hpd_solve(a, b)
        expect = gaussian_elimination_solve(a, b)
        assert np.linalg.norm(got - expect) <= 1e-9 * np.linalg.norm(expect)

    def test_residual_bound(self, gen):
        a = random_hpd(gen, 8)
        b = gen.normal(size=(8, 4)) + 1j * gen.normal(size=(8, 4))
        x = hpd_solve(a, b)
        assert np.linalg.norm(a @ x - b) <= 1e-8 * np.linalg.norm(b)

    def test_recovers_known_solution(self, gen):
        a = random_hpd(gen, 8)
        x0 = gen.normal(size=(8, 3)) + 1j * gen.normal(size=(8, 3))
        x = hpd_solve(a, a @ x0)
        assert np.linalg.norm(x - x0) <= 1e-8 * np.linalg.norm(x0)

    def test_not_positive_definite(self, gen):
        # rank-one Gram with zero ridge: second pivot collapses
        v = gen.normal(size=(4, 1)) + 1j * gen.normal(size=(4, 1))
        with pytest.raises(NotPositiveDefinite):
            hpd_solve(v @ v.conj().T, np.eye(4))

    def test_non_hermitian_rejected(self, gen):
        a = gen.normal(size=(3, 3)) + 1j * gen.normal(size=(3, 3))
        with pytest.raises(ValueError):
            hpd_solve(a + 3 * np.eye(3), np.eye(3))

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            hpd_solve(np.eye(3), np.zeros((4, 2)))

    def test_solve_right(self, gen):
        a = random_hpd(gen, 5)
        b = gen.normal(size=(3, 5)) + 1j * gen.normal(size=(3, 5))
        got = solve_right(b, a)
        assert np.linalg.norm(got @ a - b) <= 1e-8 * np.linalg.norm(b)


class TestCholesky:
    def test_factor_residual(self, gen):
        a = random_hpd(gen, 10)
        low = cholesky_lower(a)
        assert np.allclose(np.triu(low, 1), 0)
        assert np.linalg.norm(low @ low.conj().T - a) \
            <= 1e-10 * np.linalg.norm(a)

    def test_non_square_rejected(self):
        with pytest.raises(DimensionMismatch):
            cholesky_lower(np.zeros((2, 3)))


class TestFrobeniusNorm:
    def test_zero(self):
        assert frobenius(np.zeros((3, 3))) == 0.0

    def test_three_four(self):
        assert frobenius(np.array([[3.0, 4.0j]])) == pytest.approx(5.0)

    def test_unitary_invariance(self, gen):
        a = gen.normal(size=(5, 5)) + 1j * gen.normal(size=(5, 5))
        q, _ = np.linalg.qr(gen.normal(size=(5, 5))
                            + 1j * gen.normal(size=(5, 5)))
        assert frobenius(q @ a) == pytest.approx(frobenius(a), rel=1e-10)


class TestRandomComplex:
    def test_determinism(self):
        a = random_complex(7, 4, 5, 0.0, 255.0)
        b = random_complex(7, 4, 5, 0.0, 255.0)
        assert np.array_equal(a, b)

    def test_degenerate_range(self):
        assert np.all(random_complex(0, 3, 3, 0.0, 0.0) == 0)

    def test_sample_mean(self):
        a = random_complex(11, 250, 200, 0.0, 255.0)  # 1e5 draws
        assert np.mean(a.real) == pytest.approx(127.5, abs=1.0)
        assert np.mean(a.imag) == pytest.approx(127.5, abs=1.0)

    def test_bad_range(self):
        with pytest.raises(ValueError):
            random_complex(0, 2, 2, 1.0, 0.0)
