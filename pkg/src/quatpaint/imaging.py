"""Image I/O, quaternion encode/decode, masks, and quality metrics.

Images are float64 arrays of shape (M, N, 3) with values in [0, 255];
quantization to 8 bits happens only when writing files (round half up,
then clamp).  Mask PNGs use 0 = missing, 255 = observed.
"""

from __future__ import annotations

import math

import numpy as np
from PIL import Image
from scipy.signal import convolve2d

from .clinalg import DimensionMismatch
from .lrqmc import validate_mask
from .quat import QuatMatrix


class TooSmall(ValueError):
    """Image smaller than the metric's window."""


def validate_image(img) -> np.ndarray:
    a = np.asarray(img, dtype=np.float64)
    if a.ndim != 3 or a.shape[2] != 3:
        raise ValueError(f"expected an (M, N, 3) image, got shape {a.shape}")
    if a.min() < 0 or a.max() > 255:
        raise ValueError("image values must lie in [0, 255]")
    return a


# ---------------------------------------------------------------------------
# file I/O

def quantize(img: np.ndarray) -> np.ndarray:
    """Round half up and clamp to 8-bit."""
    return np.clip(np.floor(np.asarray(img) + 0.5), 0, 255).astype(np.uint8)


def load_image(path) -> np.ndarray:
    """Read an 8-bit RGB image (PNG, or binary PPM) as float64 [0,255]."""
    with Image.open(path) as im:
        return np.asarray(im.convert("RGB"), dtype=np.float64)


def save_image(path, img) -> None:
    Image.fromarray(quantize(img), mode="RGB").save(path)


def load_gray(path) -> np.ndarray:
    """Read a single-channel PNG; 16-bit images are rescaled to [0, 255]."""
    with Image.open(path) as im:
        if im.mode == "I;16" or im.mode == "I":
            a = np.asarray(im, dtype=np.float64)
            return a / 65535.0 * 255.0
        return np.asarray(im.convert("L"), dtype=np.float64)


def save_gray(path, values) -> None:
    Image.fromarray(np.clip(np.floor(np.asarray(values) + 0.5), 0, 255)
                    .astype(np.uint8), mode="L").save(path)


def load_mask(path) -> np.ndarray:
    """Read a mask PNG (0 = missing, anything else = observed)."""
    gray = load_gray(path)
    return (gray > 0).astype(np.float64)


def save_mask(path, mask) -> None:
    b = validate_mask(mask)
    save_gray(path, b * 255.0)


# ---------------------------------------------------------------------------
# quaternion encoding

def encode_image(img) -> QuatMatrix:
    """Color image -> quaternion matrix: zero real part, RGB on i/j/k."""
    a = validate_image(img)
    zero = np.zeros(a.shape[:2])
    return QuatMatrix(zero, a[:, :, 0], a[:, :, 1], a[:, :, 2])


def decode_image(q: QuatMatrix) -> np.ndarray:
    """Quaternion matrix -> color image; real plane discarded, clamp."""
    return np.clip(np.stack([q.x, q.y, q.z], axis=-1), 0.0, 255.0)


# ---------------------------------------------------------------------------
# masking

def gen_mask(seed, rows: int, cols: int, missing_fraction: float) -> np.ndarray:
    """Binary mask with exactly round(fraction * M * N) zeros, uniformly
    placed without replacement; deterministic per seed."""
    if not 0.0 <= missing_fraction <= 1.0:
        raise ValueError("missing_fraction must be in [0, 1]")
    total = rows * cols
    n_missing = round(missing_fraction * total)
    gen = np.random.default_rng(seed)
    flat = np.ones(total)
    flat[gen.choice(total, size=n_missing, replace=False)] = 0.0
    return flat.reshape(rows, cols)


def apply_mask(img, mask) -> np.ndarray:
    """Zero masked pixels in all three channels."""
    a = validate_image(img)
    b = validate_mask(mask, a.shape[:2])
    return a * b[:, :, None]


# ---------------------------------------------------------------------------
# metrics

def psnr(ref, test) -> float:
    """Peak signal-to-noise ratio in dB with MAX = 255, MSE pooled over
    all three channels.  Returns +inf for identical inputs."""
    a = validate_image(ref)
    b = validate_image(test)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    mse = np.mean((a - b) ** 2)
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0 ** 2 / mse)


def gaussian_window(size: int = 11, sigma: float = 1.5) -> np.ndarray:
    offsets = np.arange(size) - (size - 1) / 2.0
    g = np.exp(-offsets ** 2 / (2.0 * sigma ** 2))
    window = np.outer(g, g)
    return window / window.sum()


def ssim(ref, test, size: int = 11, sigma: float = 1.5,
         k1: float = 0.01, k2: float = 0.03, data_range: float = 255.0
         ) -> float:
    """Mean structural similarity with a Gaussian window, averaged over
    the three channels.  Windows are taken fully inside the image
    ('valid' convolution), so both dimensions must be >= the window size.
    """
    a = validate_image(ref)
    b = validate_image(test)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    if a.shape[0] < size or a.shape[1] < size:
        raise TooSmall(f"image smaller than the {size}x{size} window")

    window = gaussian_window(size, sigma)
    c1 = (k1 * data_range) ** 2
    c2 = (k2 * data_range) ** 2

    def smooth(x):
        return convolve2d(x, window, mode="valid")

    per_channel = []
    for c in range(3):
        x, y = a[:, :, c], b[:, :, c]
        mu_x = smooth(x)
        mu_y = smooth(y)
        var_x = smooth(x * x) - mu_x * mu_x
        var_y = smooth(y * y) - mu_y * mu_y
        cov = smooth(x * y) - mu_x * mu_y
        num = (2 * mu_x * mu_y + c1) * (2 * cov + c2)
        den = (mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2)
        per_channel.append(np.mean(num / den))
    return float(np.mean(per_channel))


def delta_scores(lrqmc_scores: tuple[float, float],
                 dlrqmc_scores: tuple[float, float]
                 ) -> tuple[float, float]:
    """Score differences (depth-aided minus plain); positive means the
    depth-aided result is better."""
    return (dlrqmc_scores[0] - lrqmc_scores[0],
            dlrqmc_scores[1] - lrqmc_scores[1])
