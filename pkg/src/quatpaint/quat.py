"""Quaternion scalars, quaternion matrices, and the complex adjoint embedding.

A quaternion q = w + x*i + y*j + z*k is stored as four real numbers; a
quaternion matrix is stored as four real planes of identical shape.  The
complex adjoint embedding maps an M x N quaternion matrix to a 2M x 2N
complex matrix that preserves sums, products and the conjugate transpose,
so all heavy arithmetic can run on ordinary complex matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class StructureViolation(ValueError):
    """A complex matrix does not have the adjoint block structure."""


@dataclass(frozen=True)
class Quaternion:
    """Scalar quaternion w + x*i + y*j + z*k."""

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __mul__(self, other: "Quaternion") -> "Quaternion":
        # Hamilton product: i^2 = j^2 = k^2 = ijk = -1, ij = k = -ji, etc.
        p, q = self, other
        return Quaternion(
            w=p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            x=p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            y=p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            z=p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
        )

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.w + other.w, self.x + other.x,
                          self.y + other.y, self.z + other.z)

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> float:
        return float(np.sqrt(self.w ** 2 + self.x ** 2
                             + self.y ** 2 + self.z ** 2))


def quat_mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product of two scalar quaternions (non-commutative)."""
    return p * q


class QuatMatrix:
    """Dense quaternion matrix held as four real planes (w, x, y, z).

    Instances are immutable after construction: the planes are copied in
    and marked read-only, so values can be shared freely.
    """

    __slots__ = ("w", "x", "y", "z")

    def __init__(self, w, x, y, z):
        planes = []
        for p in (w, x, y, z):
            a = np.array(p, dtype=np.float64)
            if a.ndim != 2:
                raise ValueError("quaternion matrix planes must be 2-D")
            a.setflags(write=False)
            planes.append(a)
        if len({p.shape for p in planes}) != 1:
            raise ValueError("all four planes must share one shape")
        object.__setattr__(self, "w", planes[0])
        object.__setattr__(self, "x", planes[1])
        object.__setattr__(self, "y", planes[2])
        object.__setattr__(self, "z", planes[3])

    def __setattr__(self, name, value):
        raise AttributeError("QuatMatrix is immutable")

    @property
    def shape(self) -> tuple[int, int]:
        return self.w.shape

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QuatMatrix":
        z = np.zeros((rows, cols))
        return cls(z, z, z, z)

    @classmethod
    def from_real(cls, a) -> "QuatMatrix":
        a = np.asarray(a, dtype=np.float64)
        z = np.zeros_like(a)
        return cls(a, z, z, z)

    def planes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        return self.w, self.x, self.y, self.z

    def __add__(self, other: "QuatMatrix") -> "QuatMatrix":
        return QuatMatrix(self.w + other.w, self.x + other.x,
                          self.y + other.y, self.z + other.z)

    def __sub__(self, other: "QuatMatrix") -> "QuatMatrix":
        return QuatMatrix(self.w - other.w, self.x - other.x,
                          self.y - other.y, self.z - other.z)

    def conj_transpose(self) -> "QuatMatrix":
        return QuatMatrix(self.w.T, -self.x.T, -self.y.T, -self.z.T)

    def allclose(self, other: "QuatMatrix", rtol=1e-12, atol=0.0) -> bool:
        return all(np.allclose(a, b, rtol=rtol, atol=atol)
                   for a, b in zip(self.planes(), other.planes()))

    def equal(self, other: "QuatMatrix") -> bool:
        return all(np.array_equal(a, b)
                   for a, b in zip(self.planes(), other.planes()))


def to_complex_adjoint(q: QuatMatrix) -> np.ndarray:
    """Embed an M x N quaternion matrix as its 2M x 2N complex adjoint.

    With Qa = W + X*i and Qb = Y + Z*i the result is the block matrix
    [[Qa, Qb], [-conj(Qb), conj(Qa)]].
    """
    qa = q.w + 1j * q.x
    qb = q.y + 1j * q.z
    return np.block([[qa, qb], [-qb.conj(), qa.conj()]])


def from_complex_adjoint(c: np.ndarray, tol: float = 1e-8) -> QuatMatrix:
    """Invert the adjoint embedding, checking the block structure.

    The blocks must satisfy TL = conj(BR) and TR = -conj(BL) within a
    relative Frobenius deviation of ``tol``; larger deviations signal
    solver corruption or misuse and raise :class:`StructureViolation`.
    Reconstruction averages the redundant blocks, so exactly-structured
    inputs round-trip bit-exactly.
    """
    c = np.asarray(c)
    two_m, two_n = c.shape
    if two_m % 2 or two_n % 2:
        raise ValueError("adjoint matrix dimensions must be even")
    m, n = two_m // 2, two_n // 2
    tl, tr = c[:m, :n], c[:m, n:]
    bl, br = c[m:, :n], c[m:, n:]

    scale = np.linalg.norm(c)
    dev = np.sqrt(np.linalg.norm(tl - br.conj()) ** 2
                  + np.linalg.norm(tr + bl.conj()) ** 2)
    if dev > tol * max(scale, 1e-300):
        raise StructureViolation(
            f"adjoint block structure violated: relative deviation "
            f"{dev / max(scale, 1e-300):.3e} exceeds tol {tol:.3e}")

    qa = (tl + br.conj()) / 2
    qb = (tr - bl.conj()) / 2
    return QuatMatrix(qa.real, qa.imag, qb.real, qb.imag)


def quat_frobenius(q: QuatMatrix) -> float:
    """Frobenius norm: sqrt of the sum of squares over all four planes.

    Satisfies ||adjoint(Q)||_F = sqrt(2) * ||Q||_F, since every component
    appears twice in the embedding.
    """
    return float(np.sqrt(sum(np.sum(p * p) for p in q.planes())))


def quat_matmul(p: QuatMatrix, q: QuatMatrix) -> QuatMatrix:
    """Quaternion matrix product, computed through the adjoint embedding.

    One code path for all products; the structure check in
    :func:`from_complex_adjoint` doubles as a self-check.
    """
    if p.shape[1] != q.shape[0]:
        raise ValueError(f"inner dimensions differ: {p.shape} vs {q.shape}")
    return from_complex_adjoint(to_complex_adjoint(p) @ to_complex_adjoint(q),
                                tol=1e-6)
