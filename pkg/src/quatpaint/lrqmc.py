"""Low-rank quaternion matrix completion via alternating minimization.

Minimizes, over factors fU (2M x 2K), fV (2K x 2N) and the quaternion
matrix X:

    0.5 * ||fU fV - adj(X)||_F^2 + 0.5 * ridge * (||fU||_F^2 + ||fV||_F^2)

subject to X agreeing with the observation Y on the mask support, where
adj() is the complex adjoint embedding.  Each block update is the exact
minimizer of a convex subproblem, so the objective never increases.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import clinalg
from .quat import QuatMatrix, from_complex_adjoint, to_complex_adjoint


class NonFiniteObjective(RuntimeError):
    """The objective became NaN or infinite during iteration."""


def validate_mask(mask, shape=None) -> np.ndarray:
    """Coerce to a binary float mask, rejecting non-{0,1} entries."""
    b = np.asarray(mask, dtype=np.float64)
    if b.ndim != 2:
        raise ValueError("mask must be 2-D")
    if not np.all((b == 0.0) | (b == 1.0)):
        raise ValueError("mask entries must be exactly 0 or 1")
    if shape is not None and b.shape != shape:
        raise clinalg.DimensionMismatch(
            f"mask shape {b.shape} does not match image shape {shape}")
    return b


@dataclass(frozen=True)
class SolverParams:
    """Knobs for one completion run.

    rank is the factorization size K; ridge is the weight on the factor
    norms and must stay strictly positive so the Gram solves remain
    positive definite.
    """

    rank: int = 80
    ridge: float = 1.0
    max_iters: int = 200
    rel_tol: float = 1e-4
    seed: int = 0

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be >= 1")
        if not self.ridge > 0:
            raise ValueError("ridge must be > 0")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.rel_tol < 0:
            raise ValueError("rel_tol must be >= 0")


@dataclass
class SolverTrace:
    """Per-iteration diagnostics of one completion run."""

    objectives: list[float] = field(default_factory=list)
    rel_changes: list[float] = field(default_factory=list)
    structure_devs: list[float] = field(default_factory=list)
    iterations: int = 0
    wall_time: float = 0.0

    def as_dict(self) -> dict:
        return {
            "objectives": self.objectives,
            "rel_changes": self.rel_changes,
            "structure_devs": self.structure_devs,
            "iterations": self.iterations,
            "wall_time": self.wall_time,
        }


@dataclass(frozen=True)
class FactorPair:
    """Embedded factors; both carry the adjoint block structure."""

    fu: np.ndarray
    fv: np.ndarray


def project_mask(x: QuatMatrix, mask) -> QuatMatrix:
    """Keep entries on the mask support, zero the rest (all four planes)."""
    b = validate_mask(mask, x.shape)
    return QuatMatrix(*(b * p for p in x.planes()))


def objective(fu: np.ndarray, fv: np.ndarray, x: QuatMatrix,
              ridge: float) -> float:
    """Regularized fit 0.5*||fU fV - adj(X)||_F^2 + ridge/2 * factor norms."""
    fit = clinalg.frobenius(fu @ fv - to_complex_adjoint(x))
    return 0.5 * fit ** 2 + 0.5 * ridge * (
        clinalg.frobenius(fu) ** 2 + clinalg.frobenius(fv) ** 2)


def update_u(fv: np.ndarray, fx: np.ndarray, ridge: float) -> np.ndarray:
    """Exact minimizer over fU: fX fV^H (fV fV^H + ridge*I)^{-1}."""
    gram = fv @ fv.conj().T
    gram += ridge * np.eye(gram.shape[0])
    return clinalg.solve_right(fx @ fv.conj().T, gram)


def update_v(fu: np.ndarray, fx: np.ndarray, ridge: float) -> np.ndarray:
    """Exact minimizer over fV: (fU^H fU + ridge*I)^{-1} fU^H fX."""
    gram = fu.conj().T @ fu
    gram += ridge * np.eye(gram.shape[0])
    return clinalg.hpd_solve(gram, fu.conj().T @ fx)


def update_x(pair: FactorPair, y: QuatMatrix, mask) -> QuatMatrix:
    """Exact minimizer over X: observed entries from Y, the rest from fU fV."""
    b = validate_mask(mask, y.shape)
    low_rank = from_complex_adjoint(pair.fu @ pair.fv, tol=1e-6)
    keep = b == 1.0
    return QuatMatrix(*(np.where(keep, yp, zp)
                        for yp, zp in zip(y.planes(), low_rank.planes())))


def _structure_deviation(c: np.ndarray) -> float:
    """Relative Frobenius deviation from the adjoint block structure."""
    m, n = c.shape[0] // 2, c.shape[1] // 2
    dev = np.sqrt(np.linalg.norm(c[:m, :n] - c[m:, n:].conj()) ** 2
                  + np.linalg.norm(c[:m, n:] + c[m:, :n].conj()) ** 2)
    return dev / max(np.linalg.norm(c), 1e-300)


def _resymmetrize(c: np.ndarray) -> np.ndarray:
    """Snap a near-structured matrix back onto exact adjoint structure."""
    return to_complex_adjoint(from_complex_adjoint(c, tol=1e-6))


def init_fv(params: SolverParams, cols: int) -> np.ndarray:
    """Random initial fV: all four quaternion components of the K x N
    factor drawn i.i.d. uniform on [0, 255], then embedded."""
    gen = np.random.default_rng(params.seed)
    planes = gen.uniform(0.0, 255.0, size=(4, params.rank, cols))
    return to_complex_adjoint(QuatMatrix(*planes))


def run_lrqmc(y: QuatMatrix, mask, params: SolverParams,
              fixed_real: np.ndarray | None = None,
              ) -> tuple[QuatMatrix, SolverTrace]:
    """Alternating-minimization completion of the observation ``y``.

    Starts from X = Y and a random fV, then repeats the fU / fV / X
    block updates until the relative Frobenius change of X drops below
    ``params.rel_tol`` or ``params.max_iters`` is reached.  Observed
    entries of the output equal ``y`` exactly.

    ``fixed_real`` optionally clamps the real plane of X to the given
    values everywhere after each X update (used when a depth plane is
    treated as known at every pixel).
    """
    b = validate_mask(mask, y.shape)
    if fixed_real is not None:
        fixed_real = np.asarray(fixed_real, dtype=np.float64)
        if fixed_real.shape != y.shape:
            raise clinalg.DimensionMismatch(
                "fixed_real shape does not match the observation")
        y = QuatMatrix(fixed_real, y.x, y.y, y.z)

    start = time.perf_counter()
    trace = SolverTrace()
    x = y
    fv = init_fv(params, y.shape[1])

    for _ in range(params.max_iters):
        fx = to_complex_adjoint(x)
        fu = update_u(fv, fx, params.ridge)
        fv = update_v(fu, fx, params.ridge)
        trace.structure_devs.append(
            max(_structure_deviation(fu), _structure_deviation(fv)))
        # drift elimination: factors stay exactly structured between iters
        fu = _resymmetrize(fu)
        fv = _resymmetrize(fv)

        x_new = update_x(FactorPair(fu, fv), y, b)
        if fixed_real is not None:
            x_new = QuatMatrix(fixed_real, x_new.x, x_new.y, x_new.z)

        g = objective(fu, fv, x_new, params.ridge)
        if not np.isfinite(g):
            raise NonFiniteObjective(f"objective became {g}")
        trace.objectives.append(g)

        diff = np.sqrt(sum(np.sum((a - c) ** 2) for a, c
                           in zip(x_new.planes(), x.planes())))
        denom = np.sqrt(sum(np.sum(p ** 2) for p in x.planes()))
        rel = diff / max(denom, 1e-300)
        trace.rel_changes.append(float(rel))
        trace.iterations += 1
        x = x_new
        if rel < params.rel_tol:
            break

    trace.wall_time = time.perf_counter() - start
    return x, trace
