"""Raster containers for the five label maps and bilinear field sampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RasterMap:
    """A finite float32 grid of shape (height, width, channels).

    ``data`` is stored row-major; channels is 1 (segmentation, distances)
    or 2 (transfer offsets dx, dy).
    """

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float32)
        if arr.ndim == 2:
            arr = arr[:, :, None]
        if arr.ndim != 3:
            raise ValueError("map data must be 2-D or 3-D (H, W, C)")
        if arr.shape[2] not in (1, 2):
            raise ValueError("maps carry 1 or 2 channels")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("map dimensions must be positive")
        if not np.all(np.isfinite(arr)):
            raise ValueError("map values must be finite")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def channels(self) -> int:
        return self.data.shape[2]

    @staticmethod
    def zeros(height: int, width: int, channels: int = 1) -> "RasterMap":
        if height < 1 or width < 1:
            raise ValueError("map dimensions must be positive")
        return RasterMap(np.zeros((height, width, channels), dtype=np.float32))

    def plane(self, c: int = 0) -> np.ndarray:
        """Single channel as a read-only (H, W) view."""
        return self.data[:, :, c]


@dataclass(frozen=True)
class LabelBundle:
    """The five-map set produced by the encoder and consumed by the decoder:
    segmentation, forward/backward transfer offsets, forward/backward
    distances to the lane ends."""

    seg: RasterMap
    transfer_f: RasterMap
    transfer_b: RasterMap
    dist_f: RasterMap
    dist_b: RasterMap

    def __post_init__(self):
        dims = (self.seg.height, self.seg.width)
        wanted = {
            "seg": (self.seg, 1),
            "transfer_f": (self.transfer_f, 2),
            "transfer_b": (self.transfer_b, 2),
            "dist_f": (self.dist_f, 1),
            "dist_b": (self.dist_b, 1),
        }
        for name, (m, channels) in wanted.items():
            if (m.height, m.width) != dims:
                raise ValueError(f"{name}: dimensions differ from seg map {dims}")
            if m.channels != channels:
                raise ValueError(f"{name}: expected {channels} channel(s), got {m.channels}")

    @property
    def height(self) -> int:
        return self.seg.height

    @property
    def width(self) -> int:
        return self.seg.width


def sample_field(m: RasterMap, p) -> float | np.ndarray:
    """Bilinear sample of a map at a continuous position, clamping to the
    grid edges; at integer pixel centers this is the stored value exactly.

    Returns a float for single-channel maps, an (dx, dy) array otherwise.
    """
    x, y = float(p[0]), float(p[1])
    h, w = m.height, m.width
    x = min(max(x, 0.0), w - 1.0)
    y = min(max(y, 0.0), h - 1.0)
    x0 = int(np.floor(x))
    y0 = int(np.floor(y))
    x1 = min(x0 + 1, w - 1)
    y1 = min(y0 + 1, h - 1)
    fx = x - x0
    fy = y - y0
    d = m.data
    top = (1.0 - fx) * d[y0, x0] + fx * d[y0, x1]
    bot = (1.0 - fx) * d[y1, x0] + fx * d[y1, x1]
    val = (1.0 - fy) * top + fy * bot
    if m.channels == 1:
        return float(val[0])
    return val.astype(float)
