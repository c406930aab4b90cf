import numpy as np
import pytest

from quatpaint.quat import QuatMatrix


def random_quat_matrix(gen, rows, cols, lo=-1.0, hi=1.0) -> QuatMatrix:
    return QuatMatrix(*gen.uniform(lo, hi, size=(4, rows, cols)))


def random_low_rank(gen, rows, cols, rank, scale=255.0) -> QuatMatrix:
    """Exact-rank quaternion matrix scaled so max |component| = scale.

    Scaling is multiplicative only; shifting into [0, scale] would add a
    rank-one offset and break the rank.
    """
    from quatpaint.quat import quat_matmul
    u = random_quat_matrix(gen, rows, rank)
    v = random_quat_matrix(gen, rank, cols)
    prod = quat_matmul(u, v)
    planes = np.stack(prod.planes())
    planes = planes / np.abs(planes).max() * scale
    return QuatMatrix(*planes)


@pytest.fixture
def gen():
    return np.random.default_rng(12345)
