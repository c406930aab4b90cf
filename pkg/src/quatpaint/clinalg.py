"""Dense complex matrix helpers and Hermitian positive definite solves.

The solver only ever inverts Gram matrices plus a positive ridge, so
every solve goes through an unpivoted Cholesky factorization; an explicit
inverse is never formed.  Matrices are plain ``numpy`` complex arrays.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_triangular


class DimensionMismatch(ValueError):
    pass


class NotPositiveDefinite(ValueError):
    """A Cholesky pivot fell below the positivity threshold."""


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Complex matrix product with an explicit shape check."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(
            f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def hermitian(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(a).conj().T


def frobenius(a: np.ndarray) -> float:
    """Frobenius norm: sqrt of the sum of squared moduli."""
    return float(np.linalg.norm(a))


def cholesky_lower(a: np.ndarray) -> np.ndarray:
    """Unpivoted lower Cholesky factor of a Hermitian PD matrix.

    Raises :class:`NotPositiveDefinite` when a pivot drops below
    1e-14 * trace(A) / n, which in this codebase means the ridge weight
    was (near) zero.
    """
    a = np.asarray(a)
    n = a.shape[0]
    if a.shape != (n, n):
        raise DimensionMismatch("matrix must be square")
    thresh = 1e-14 * float(np.trace(a).real) / max(n, 1)
    low = np.zeros((n, n), dtype=np.complex128)
    for j in range(n):
        pivot = a[j, j].real - np.real(low[j, :j] @ low[j, :j].conj())
        if pivot < thresh:
            raise NotPositiveDefinite(
                f"pivot {pivot:.3e} at column {j} below threshold "
                f"{thresh:.3e}")
        ljj = np.sqrt(pivot)
        low[j, j] = ljj
        if j + 1 < n:
            low[j + 1:, j] = (a[j + 1:, j]
                              - low[j + 1:, :j] @ low[j, :j].conj()) / ljj
    return low


def hpd_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve A X = B for Hermitian positive definite A via Cholesky.

    A must be Hermitian to within 1e-10 relative Frobenius deviation.
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(
            f"incompatible shapes {a.shape} and {b.shape}")
    scale = np.linalg.norm(a)
    if scale > 0 and np.linalg.norm(a - a.conj().T) > 1e-10 * scale:
        raise ValueError("matrix is not Hermitian")
    low = cholesky_lower(a)
    y = solve_triangular(low, b, lower=True)
    return solve_triangular(low.conj().T, y, lower=False)


def solve_right(b: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Compute B A^{-1} for Hermitian positive definite A.

    Uses B A^{-1} = (A^{-1} B^H)^H so the same Cholesky path serves both
    factor updates.
    """
    return hermitian(hpd_solve(a, hermitian(b)))


def random_complex(rng, rows: int, cols: int,
                   lo: float, hi: float) -> np.ndarray:
    """Complex matrix with real and imaginary parts i.i.d. uniform [lo, hi].

    ``rng`` is either a seed or a ``numpy.random.Generator``; identical
    seeds give bit-identical matrices.
    """
    if lo > hi:
        raise ValueError(f"lo={lo} exceeds hi={hi}")
    gen = rng if isinstance(rng, np.random.Generator) \
        else np.random.default_rng(rng)
    re = gen.uniform(lo, hi, size=(rows, cols))
    im = gen.uniform(lo, hi, size=(rows, cols))
    return re + 1j * im
