"""1D event windows to quantized 2D matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import MatrixTooSmall, WindowTooShort
from .signals import EventWindow

QUANT_LEVELS = 256


@dataclass
class Matrix2D:
    """Grid of 8-bit quantized power levels, the substrate for descriptors."""

    cells: np.ndarray

    def __post_init__(self) -> None:
        cells = np.asarray(self.cells)
        if cells.dtype.kind == "f":
            if not np.all(np.mod(cells, 1.0) == 0.0):
                raise ValueError("cells must hold integers")
        self.cells = cells.astype(np.int64)
        if self.cells.ndim != 2:
            raise ValueError("cells must be a 2D grid")
        if min(self.cells.shape) < 3:
            raise MatrixTooSmall(
                f"matrix is {self.cells.shape[0]}x{self.cells.shape[1]}; "
                "descriptors need at least 3x3"
            )
        if self.cells.min() < 0 or self.cells.max() > QUANT_LEVELS - 1:
            raise ValueError("cells must lie in [0, 255]")

    @property
    def rows(self) -> int:
        return self.cells.shape[0]

    @property
    def cols(self) -> int:
        return self.cells.shape[1]


def reshape(window: EventWindow) -> Matrix2D:
    """Min-max quantize a window to 8 bits and fill a near-square grid.

    Quantization is round-half-up onto [0, 255]; a flat window maps to all
    zeros. The grid side is ceil(sqrt(L)), filled row-major, and cells past
    the window's end repeat the last quantized sample. Because of the min-max
    step the result is invariant under positive affine rescaling of the
    window.
    """
    x = window.samples
    n = x.size
    if n < 9:
        raise WindowTooShort(f"window has {n} samples; at least 9 required")
    lo = float(x.min())
    hi = float(x.max())
    if hi > lo:
        q = np.floor((x - lo) / (hi - lo) * (QUANT_LEVELS - 1) + 0.5).astype(np.int64)
    else:
        q = np.zeros(n, dtype=np.int64)
    side = math.isqrt(n - 1) + 1  # ceil(sqrt(n)) in exact integer arithmetic
    cells = np.full(side * side, q[-1], dtype=np.int64)
    cells[:n] = q
    return Matrix2D(cells.reshape(side, side))
