# -*- coding: utf-8 -*-
"""
    motkit.augment
    ~~~~~~~~~~~~~~

    Hand-designed low-light enhancement: contrast, brightness, Gaussian
    blur, gamma and additive Gaussian noise, applied in that order to an
    8-bit RGB image (``numpy`` array of shape ``(height, width, 3)``).

    :copyright: (c) 2026 by the crtrack authors.
    :license: MIT, see LICENSE for more details.
"""

import collections
import math

import numpy as np
from scipy.ndimage import correlate1d

AugmentRanges = collections.namedtuple(
    'AugmentRanges', [
        'contrast', 'brightness_min', 'brightness_max', 'blur_min',
        'blur_max', 'gamma', 'noise_min', 'noise_max'
    ],
    defaults=(0.7, 0.2, 0.5, 0.5, 2.0, 2.2, 2.0, 15.0)
)
AugmentRanges.__doc__ = """Fixed contrast and gamma plus the sampling
ranges of brightness scale, blur sigma and noise sigma (8-bit units).
These are calibration values chosen to darken visibly."""

AugmentParams = collections.namedtuple(
    'AugmentParams', [
        'contrast', 'brightness_scale', 'blur_sigma', 'gamma', 'noise_sigma',
        'seed'
    ]
)

IDENTITY = AugmentParams(1.0, 1.0, 0.0, 1.0, 0.0, 0)

LUMA = np.array([0.299, 0.587, 0.114])


def sample_params(seed, ranges=AugmentRanges()):
    """Draw enhancement parameters; the same seed gives the same params."""
    rng = np.random.default_rng(seed)
    return AugmentParams(
        contrast=ranges.contrast,
        brightness_scale=float(
            rng.uniform(ranges.brightness_min, ranges.brightness_max)
        ),
        blur_sigma=float(rng.uniform(ranges.blur_min, ranges.blur_max)),
        gamma=ranges.gamma,
        noise_sigma=float(rng.uniform(ranges.noise_min, ranges.noise_max)),
        seed=int(seed)
    )


def gamma_correct(value, gamma):
    """``value ** gamma`` for a value in [0, 1]."""
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"value must lie in [0, 1], got {value}")
    if gamma <= 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    return value**gamma


def mean_luminance(img):
    return float(np.mean(np.asarray(img, dtype=float) @ LUMA))


def gaussian_kernel(sigma):
    radius = int(math.ceil(3 * sigma))
    t = np.arange(-radius, radius + 1, dtype=float)
    kernel = np.exp(-t**2 / (2 * sigma**2))
    return kernel / kernel.sum()


def _check_image(img):
    img = np.asarray(img)
    if img.ndim != 3 or img.shape[2] != 3 or img.shape[0] < 1 \
            or img.shape[1] < 1:
        raise ValueError(f"expected an (h, w, 3) image, got {img.shape}")
    return img


def enhance(img, p):
    """Apply the low-light transform.

    Each stage clamps to [0, 255]; the result is rounded to 8 bits once
    at the end. A non-positive blur or noise sigma skips that stage.
    Noise comes from a Philox counter-based generator keyed by
    ``p.seed``, one draw per pixel channel in row-major order.

    :param numpy.ndarray img: ``uint8`` array of shape ``(h, w, 3)``
    :param AugmentParams p: parameters
    :rtype: numpy.ndarray

    """
    img = _check_image(img)
    x = img.astype(float)

    mean = mean_luminance(x)
    x = np.clip(mean + p.contrast * (x - mean), 0.0, 255.0)
    x = np.clip(x * p.brightness_scale, 0.0, 255.0)
    if p.blur_sigma > 0:
        kernel = gaussian_kernel(p.blur_sigma)
        x = correlate1d(x, kernel, axis=0, mode='nearest')
        x = correlate1d(x, kernel, axis=1, mode='nearest')
        x = np.clip(x, 0.0, 255.0)
    x = np.clip(255.0 * (x / 255.0)**p.gamma, 0.0, 255.0)
    if p.noise_sigma > 0:
        rng = np.random.Generator(np.random.Philox(key=p.seed % 2**64))
        x = np.clip(x + rng.normal(0.0, p.noise_sigma, x.shape), 0.0, 255.0)
    return np.rint(x).astype(np.uint8)
