"""Colour rendering of complex fields: phase as hue, modulus as lightness."""

from __future__ import annotations

import numpy as np
from PIL import Image

PERCENTILE = 99.0


def complex_to_rgb(field) -> np.ndarray:
    """(ny, nx, 3) uint8 image of a complex field.

    Hue is arg(z) in [0, 2 pi) on the HSL colour wheel (0 is red, 2 pi / 3
    green, 4 pi / 3 blue) at full saturation.  Lightness is 0.5 |z| / m,
    clipped at 0.5, where m is the 99th percentile of |z|; so the field is
    black where z = 0 and fully saturated where |z| >= m.
    """
    z = np.asarray(field, dtype=complex)
    if z.ndim != 2:
        raise ValueError("field must be a 2D array")
    mod = np.abs(z)
    ref = float(np.percentile(mod, PERCENTILE)) if mod.size else 0.0
    level = np.clip(mod / ref, 0.0, 1.0) if ref > 0 else np.zeros_like(mod)
    hue = np.mod(np.angle(z), 2 * np.pi) / (np.pi / 3)  # sextant coordinate in [0, 6)
    # fully saturated hue colour; HSL with S = 1 and L <= 1/2 has chroma 2L
    channels = [
        np.clip(np.abs(hue - 3.0) - 1.0, 0.0, 1.0),
        np.clip(2.0 - np.abs(hue - 2.0), 0.0, 1.0),
        np.clip(2.0 - np.abs(hue - 4.0), 0.0, 1.0),
    ]
    rgb = np.stack(channels, axis=-1) * level[..., None]
    return np.round(rgb * 255.0).astype(np.uint8)


def render_complex_png(field, path) -> None:
    """Write ``complex_to_rgb(field)`` as an 8-bit RGB PNG (no metadata)."""
    Image.fromarray(complex_to_rgb(field)).save(path, format="PNG")
