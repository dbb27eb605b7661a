"""LBP and WLD texture histograms over quantized 2D matrices.

Both descriptors read 3x3 patches around every interior cell. The local
binary pattern thresholds the 8 neighbors against the center and packs the
bits into a code 0..255. The Weber local descriptor pairs a differential
excitation (arctangent of the summed relative neighbor deviations) with the
gradient orientation of the vertical/horizontal difference vector; the two
are jointly binned into a 256-bin histogram.

Border cells are skipped rather than padded, so a raw histogram's total is
exactly (rows-2)*(cols-2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidConfig, OutOfInterior
from .transform2d import Matrix2D

HISTOGRAM_BINS = 256
TWO_PI = 2.0 * math.pi
HALF_PI = math.pi / 2.0

# 3x3 neighbor ring, clockwise from the top-left neighbor. Bit n of the LBP
# code and position n of the WLD ring sum both follow this order. The ring
# places top/bottom at positions 1/5 and right/left at 3/7, so the gradient
# differences below are bottom-minus-top and left-minus-right.
NEIGHBOR_OFFSETS = (
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
    (0, -1),
)


@dataclass(frozen=True)
class DescriptorConfig:
    """Patch geometry and WLD binning parameters.

    Only the 3x3 patch (8 neighbors) is implemented; multi-scale variants are
    out of scope. ``orientation_bins * excitation_bins`` must equal 256 so the
    joint WLD histogram matches the LBP histogram length. ``epsilon`` guards
    the excitation ratio when a quantized center cell is 0.
    """

    patch_size: int = 3
    neighbor_count: int = 8
    orientation_bins: int = 8
    excitation_bins: int = 32
    epsilon: float = 1.0

    def __post_init__(self) -> None:
        if self.patch_size % 2 == 0 or self.patch_size < 3:
            raise InvalidConfig("patch_size must be an odd integer >= 3")
        if self.patch_size != 3:
            raise InvalidConfig("only patch_size 3 is supported")
        if self.neighbor_count != 8:
            raise InvalidConfig("neighbor_count is fixed at 8 for 3x3 patches")
        if self.orientation_bins < 1 or self.excitation_bins < 1:
            raise InvalidConfig("bin counts must be positive")
        if self.orientation_bins * self.excitation_bins != HISTOGRAM_BINS:
            raise InvalidConfig(
                "orientation_bins * excitation_bins must equal "
                f"{HISTOGRAM_BINS}, got "
                f"{self.orientation_bins}*{self.excitation_bins}"
            )
        if not self.epsilon > 0:
            raise InvalidConfig("epsilon must be positive")


@dataclass
class DescriptorHistogram:
    """256-bin descriptor histogram.

    ``bins`` holds raw integer counts straight out of extraction (one vote per
    interior cell) or non-negative reals after normalization elsewhere.
    """

    bins: np.ndarray
    kind: str
    total: float = field(init=False)

    def __post_init__(self) -> None:
        self.bins = np.asarray(self.bins)
        if self.bins.shape != (HISTOGRAM_BINS,):
            raise ValueError(f"histogram must have exactly {HISTOGRAM_BINS} bins")
        if self.kind not in ("lbp", "wld"):
            raise ValueError("kind must be 'lbp' or 'wld'")
        if not np.all(np.isfinite(self.bins)) or self.bins.min() < 0:
            raise ValueError("bins must be finite and non-negative")
        self.total = float(self.bins.sum())


@dataclass(frozen=True)
class WldResponse:
    """Per-cell WLD measurements, in radians.

    ``excitation`` lies in (-pi/2, pi/2), ``orientation`` in [0, 2*pi).
    """

    excitation: float
    orientation: float


def _require_interior(m: Matrix2D, r: int, c: int) -> None:
    if not (1 <= r <= m.rows - 2 and 1 <= c <= m.cols - 2):
        raise OutOfInterior(
            f"cell ({r}, {c}) is not interior to a {m.rows}x{m.cols} matrix"
        )


def lbp_code(m: Matrix2D, r: int, c: int) -> int:
    """Local binary pattern code of an interior cell, in [0, 255].

    Neighbor n contributes bit n when its value is >= the center (ties count
    as 1), walking the ring clockwise from the top-left neighbor.
    """
    _require_interior(m, r, c)
    g = m.cells
    center = g[r, c]
    code = 0
    for bit, (dr, dc) in enumerate(NEIGHBOR_OFFSETS):
        if g[r + dr, c + dc] - center >= 0:
            code |= 1 << bit
    return code


def lbp_histogram(m: Matrix2D) -> DescriptorHistogram:
    """Histogram of LBP codes over all interior cells."""
    g = m.cells
    center = g[1:-1, 1:-1]
    codes = np.zeros(center.shape, dtype=np.int64)
    for bit, (dr, dc) in enumerate(NEIGHBOR_OFFSETS):
        nb = g[1 + dr : g.shape[0] - 1 + dr, 1 + dc : g.shape[1] - 1 + dc]
        codes |= ((nb - center) >= 0).astype(np.int64) << bit
    bins = np.bincount(codes.ravel(), minlength=HISTOGRAM_BINS)
    return DescriptorHistogram(bins=bins, kind="lbp")


def gradient_orientation(vertical_diff: float, horizontal_diff: float) -> float:
    """Quadrant-aware angle of the difference vector, mapped to [0, 2*pi).

    The zero vector maps to 0 by convention. Adding 2*pi to a tiny negative
    arctangent can round to exactly 2*pi, which the final wrap folds back to 0
    to keep the half-open range.
    """
    theta = math.atan2(vertical_diff, horizontal_diff)
    if theta < 0.0:
        theta += TWO_PI
    if theta >= TWO_PI:
        theta = 0.0
    return theta


def wld_response(m: Matrix2D, r: int, c: int, cfg: DescriptorConfig) -> WldResponse:
    """Differential excitation and gradient orientation at an interior cell.

    Excitation is arctan(sum(neighbor - center) / max(center, epsilon)); the
    epsilon guard is needed because quantization can produce centers of 0 even
    after zero repair. Orientation is the angle of (bottom-minus-top,
    left-minus-right).
    """
    _require_interior(m, r, c)
    g = m.cells
    center = int(g[r, c])
    ring = sum(int(g[r + dr, c + dc]) for dr, dc in NEIGHBOR_OFFSETS)
    excitation = math.atan((ring - 8 * center) / max(center, cfg.epsilon))
    vertical = int(g[r + 1, c]) - int(g[r - 1, c])
    horizontal = int(g[r, c - 1]) - int(g[r, c + 1])
    return WldResponse(excitation, gradient_orientation(vertical, horizontal))


def wld_histogram(m: Matrix2D, cfg: DescriptorConfig) -> DescriptorHistogram:
    """Joint orientation-by-excitation WLD histogram, flattened to 256 bins.

    Orientation is cut into ``cfg.orientation_bins`` uniform bins over
    [0, 2*pi) and excitation into ``cfg.excitation_bins`` uniform bins over
    [-pi/2, pi/2]; the joint cell votes at index
    ``orientation_bin * excitation_bins + excitation_bin``.
    """
    g = m.cells
    center = g[1:-1, 1:-1]
    ring = np.zeros(center.shape, dtype=np.int64)
    for dr, dc in NEIGHBOR_OFFSETS:
        ring += g[1 + dr : g.shape[0] - 1 + dr, 1 + dc : g.shape[1] - 1 + dc]
    denom = np.maximum(center.astype(np.float64), cfg.epsilon)
    excitation = np.arctan((ring - 8 * center) / denom)

    vertical = (g[2:, 1:-1] - g[:-2, 1:-1]).astype(np.float64)
    horizontal = (g[1:-1, :-2] - g[1:-1, 2:]).astype(np.float64)
    orientation = np.arctan2(vertical, horizontal)
    orientation = np.where(orientation < 0.0, orientation + TWO_PI, orientation)
    orientation = np.where(orientation >= TWO_PI, 0.0, orientation)

    t = np.minimum(
        (orientation / TWO_PI * cfg.orientation_bins).astype(np.int64),
        cfg.orientation_bins - 1,
    )
    e = np.clip(
        ((excitation + HALF_PI) / math.pi * cfg.excitation_bins).astype(np.int64),
        0,
        cfg.excitation_bins - 1,
    )
    bins = np.bincount(
        (t * cfg.excitation_bins + e).ravel(), minlength=HISTOGRAM_BINS
    )
    return DescriptorHistogram(bins=bins, kind="wld")
