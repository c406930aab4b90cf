"""Low-rank quaternion matrix completion for color image inpainting.

Color pixels live on the three imaginary axes of a quaternion; the
completion runs on the complex adjoint embedding of the quaternion
image.  The depth-aided variant inserts an estimated depth map into the
real plane between two completion passes.
"""

from .depth import (DepthMap, DepthProviderSpec, Polarity, ProviderFailure,
                    apply_polarity, estimate_depth, heuristic_depth)
from .imaging import (apply_mask, decode_image, delta_scores, encode_image,
                      gen_mask, load_image, psnr, save_image, ssim)
from .lrqmc import (FactorPair, NonFiniteObjective, SolverParams, SolverTrace,
                    project_mask, run_lrqmc)
from .pipeline import (DlrqmcResult, StageFailure, compose_xr, decode_final,
                       run_dlrqmc)
from .quat import (Quaternion, QuatMatrix, StructureViolation,
                   from_complex_adjoint, quat_frobenius, quat_matmul,
                   quat_mul, to_complex_adjoint)

__all__ = [
    "DepthMap", "DepthProviderSpec", "Polarity", "ProviderFailure",
    "apply_polarity", "estimate_depth", "heuristic_depth",
    "apply_mask", "decode_image", "delta_scores", "encode_image",
    "gen_mask", "load_image", "psnr", "save_image", "ssim",
    "FactorPair", "NonFiniteObjective", "SolverParams", "SolverTrace",
    "project_mask", "run_lrqmc",
    "DlrqmcResult", "StageFailure", "compose_xr", "decode_final",
    "run_dlrqmc",
    "Quaternion", "QuatMatrix", "StructureViolation",
    "from_complex_adjoint", "quat_frobenius", "quat_matmul", "quat_mul",
    "to_complex_adjoint",
]

__version__ = "0.1.0"
