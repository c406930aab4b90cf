"""Synthetic layered scenes with ground-truth depth.

Each scene is a stack of axis-aligned colored rectangles over a colored
background.  Layer colors are tied to layer depth (nearer layers are
brighter), so the color planes and the depth plane share structure; the
scenes are used to exercise the depth-aided pipeline without the
external estimator or any dataset.
"""

from __future__ import annotations

import numpy as np

from .depth import DepthMap, Polarity


def make_layered_scene(seed, rows: int = 64, cols: int = 64,
                       n_layers: int = 5) -> tuple[np.ndarray, DepthMap]:
    """Piecewise-constant scene plus its exact white-background depth.

    Returns (image, depth); image is (rows, cols, 3) in [0, 255].
    """
    gen = np.random.default_rng(seed)
    img = np.empty((rows, cols, 3))
    dep = np.empty((rows, cols))

    # background is the farthest layer
    depths = np.linspace(230.0, 40.0, n_layers + 1)
    bg_hue = gen.uniform(0.3, 1.0, size=3)
    img[:] = bg_hue * (255.0 - depths[0]) * gen.uniform(0.8, 1.2)
    dep[:] = depths[0]

    for layer in range(1, n_layers + 1):
        h = gen.integers(rows // 6, rows // 2)
        w = gen.integers(cols // 6, cols // 2)
        r0 = gen.integers(0, rows - h)
        c0 = gen.integers(0, cols - w)
        hue = gen.uniform(0.3, 1.0, size=3)
        # brightness increases as depth decreases (nearer = brighter)
        color = hue * (255.0 - depths[layer])
        img[r0:r0 + h, c0:c0 + w] = color
        dep[r0:r0 + h, c0:c0 + w] = depths[layer]

    img = np.clip(img, 0.0, 255.0)
    return img, DepthMap(dep, Polarity.WHITE_BACKGROUND)
