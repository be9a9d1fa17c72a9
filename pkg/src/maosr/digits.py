"""Grayscale digit image pools.

Two sources are supported: the IDX files of the original handwritten-digit
corpus (when the user has them on disk) and a built-in synthetic renderer that
rasterizes digit glyphs from system fonts under randomized affine distortion,
stroke thickness, blur and contrast. The synthetic pool keeps the benchmark
self-contained: digit shape stays the harder-to-decode attribute while color
remains trivially decodable.
"""

from __future__ import annotations

import glob
import os
import struct
from dataclasses import dataclass
from typing import Mapping

import numpy as np
from PIL import Image, ImageDraw, ImageFilter, ImageFont

from .errors import GenerationError

DIGITS = tuple(str(d) for d in range(10))

# Glyph styles drawn from fonts that ship with matplotlib / the base system.
_FONT_BASENAMES = (
    "DejaVuSans.ttf",
    "DejaVuSans-Bold.ttf",
    "DejaVuSans-Oblique.ttf",
    "DejaVuSans-BoldOblique.ttf",
    "DejaVuSerif.ttf",
    "DejaVuSerif-Bold.ttf",
    "DejaVuSerif-Italic.ttf",
    "DejaVuSansMono.ttf",
    "DejaVuSansMono-Bold.ttf",
    "DejaVuSansMono-Oblique.ttf",
    "STIXGeneral.ttf",
    "STIXGeneralBol.ttf",
    "STIXGeneralItalic.ttf",
    "cmr10.ttf",
    "cmb10.ttf",
    "cmss10.ttf",
    "cmtt10.ttf",
)


def _font_paths() -> list[str]:
    roots = []
    try:
        import matplotlib

        roots.append(os.path.join(os.path.dirname(matplotlib.__file__), "mpl-data", "fonts", "ttf"))
    except ImportError:
        pass
    roots.append("/usr/share/fonts/truetype/dejavu")
    found = {}
    for root in roots:
        for path in glob.glob(os.path.join(root, "*.ttf")):
            found.setdefault(os.path.basename(path), path)
    paths = [found[name] for name in _FONT_BASENAMES if name in found]
    if not paths:
        raise GenerationError("no usable TTF fonts found for the synthetic digit renderer")
    return paths


def _render_glyph(
    digit: str,
    font: ImageFont.FreeTypeFont,
    rng: np.random.Generator,
    image_size: int,
) -> np.ndarray:
    # Render at 2x resolution, distort, then downsample with antialiasing.
    hi = image_size * 2
    canvas = Image.new("L", (hi, hi), 0)
    draw = ImageDraw.Draw(canvas)
    left, top, right, bottom = draw.textbbox((0, 0), digit, font=font)
    x = (hi - (right - left)) / 2 - left
    y = (hi - (bottom - top)) / 2 - top
    draw.text((x, y), digit, fill=255, font=font)

    # Random affine: rotation, shear and anisotropic scale around the center.
    theta = rng.uniform(-0.22, 0.22)
    shear = rng.uniform(-0.22, 0.22)
    sx = rng.uniform(0.80, 1.10)
    sy = rng.uniform(0.80, 1.10)
    tx = rng.uniform(-3.0, 3.0)
    ty = rng.uniform(-3.0, 3.0)
    c, s = np.cos(theta), np.sin(theta)
    fwd = np.array([[sx * c, -sy * (s + shear * c)], [sx * s, sy * (c - shear * s)]])
    inv = np.linalg.inv(fwd)
    cx = cy = hi / 2
    a, b = inv[0]
    d, e = inv[1]
    coeffs = (
        a,
        b,
        cx - a * (cx + tx) - b * (cy + ty),
        d,
        e,
        cy - d * (cx + tx) - e * (cy + ty),
    )
    canvas = canvas.transform((hi, hi), Image.AFFINE, coeffs, resample=Image.BILINEAR)

    # Stroke thickness jitter.
    r = rng.random()
    if r < 0.30:
        canvas = canvas.filter(ImageFilter.MaxFilter(3))
    elif r < 0.50:
        canvas = canvas.filter(ImageFilter.MinFilter(3))
    blur = rng.uniform(0.0, 1.3)
    if blur > 0.05:
        canvas = canvas.filter(ImageFilter.GaussianBlur(blur))

    canvas = canvas.resize((image_size, image_size), Image.LANCZOS)
    arr = np.asarray(canvas, dtype=np.float32)
    peak = arr.max()
    if peak > 0:
        arr = arr * (255.0 / peak)
    arr *= rng.uniform(0.65, 1.0)
    return np.clip(np.rint(arr), 0, 255).astype(np.uint8)


def synthetic_digit_pool(
    n_per_digit: int,
    seed: int,
    image_size: int = 28,
) -> dict[str, np.ndarray]:
    """Render `n_per_digit` grayscale images for each digit 0-9.

    Deterministic in (n_per_digit, seed, image_size); every digit draws from
    its own random stream so pools of different sizes share a common prefix.
    """
    paths = _font_paths()
    fonts: dict[tuple[int, int], ImageFont.FreeTypeFont] = {}
    pool: dict[str, np.ndarray] = {}
    for digit in DIGITS:
        rng = np.random.default_rng([seed, int(digit), 0x12D])
        images = np.empty((n_per_digit, image_size, image_size), dtype=np.uint8)
        for i in range(n_per_digit):
            font_ix = int(rng.integers(len(paths)))
            size = int(rng.integers(int(image_size * 1.3), int(image_size * 1.9)))
            key = (font_ix, size)
            if key not in fonts:
                fonts[key] = ImageFont.truetype(paths[font_ix], size)
            images[i] = _render_glyph(digit, fonts[key], rng, image_size)
        pool[digit] = images
    return pool


def load_idx_images(path) -> np.ndarray:
    """Read an IDX3 image file (optionally gzip-compressed)."""
    opener = __import__("gzip").open if str(path).endswith(".gz") else open
    with opener(path, "rb") as fh:
        magic, n, rows, cols = struct.unpack(">IIII", fh.read(16))
        if magic != 0x00000803:
            raise GenerationError(f"{path}: not an IDX3 image file (magic {magic:#x})")
        data = np.frombuffer(fh.read(n * rows * cols), dtype=np.uint8)
    return data.reshape(n, rows, cols)


def load_idx_labels(path) -> np.ndarray:
    opener = __import__("gzip").open if str(path).endswith(".gz") else open
    with opener(path, "rb") as fh:
        magic, n = struct.unpack(">II", fh.read(8))
        if magic != 0x00000801:
            raise GenerationError(f"{path}: not an IDX1 label file (magic {magic:#x})")
        return np.frombuffer(fh.read(n), dtype=np.uint8)


def idx_digit_pool(images_path, labels_path) -> dict[str, np.ndarray]:
    """Group an IDX image/label file pair into a per-digit pool."""
    images = load_idx_images(images_path)
    labels = load_idx_labels(labels_path)
    if len(images) != len(labels):
        raise GenerationError("IDX image and label files disagree on sample count")
    return {d: images[labels == int(d)] for d in DIGITS}


@dataclass
class DigitPool:
    """Disjoint train- and test-side pools of grayscale digit images."""

    train: Mapping[str, np.ndarray]
    test: Mapping[str, np.ndarray]

    def __post_init__(self):
        for side, pool in (("train", self.train), ("test", self.test)):
            missing = [d for d in DIGITS if d not in pool or len(pool[d]) == 0]
            if missing:
                raise GenerationError(f"{side} digit pool is missing digits {missing}")

    @classmethod
    def synthetic(
        cls,
        n_train_per_digit: int,
        n_test_per_digit: int,
        seed: int,
        image_size: int = 28,
    ) -> "DigitPool":
        full = synthetic_digit_pool(n_train_per_digit + n_test_per_digit, seed, image_size)
        return cls(
            train={d: imgs[:n_train_per_digit] for d, imgs in full.items()},
            test={d: imgs[n_train_per_digit:] for d, imgs in full.items()},
        )

    @classmethod
    def from_idx(cls, train_images, train_labels, test_images, test_labels) -> "DigitPool":
        return cls(
            train=idx_digit_pool(train_images, train_labels),
            test=idx_digit_pool(test_images, test_labels),
        )
