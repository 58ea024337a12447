"""Polyline geometry primitives shared by the label encoder, decoder and metrics.

All coordinates are continuous pixels in image convention: x grows rightward,
y grows downward.  A lane's *forward* end is the vertex nearest the image top
(minimum y), its *backward* end the vertex nearest the bottom (maximum y).
Ties on y are broken so that near-horizontal lanes keep a deterministic
orientation: the forward end prefers smaller x, the backward end larger x,
and both fall back to the lower vertex index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

FORWARD = "forward"
BACKWARD = "backward"


def _as_point(p) -> np.ndarray:
    q = np.asarray(p, dtype=float).reshape(2)
    if not np.all(np.isfinite(q)):
        raise ValueError(f"point has non-finite coordinates: {p!r}")
    return q


def point_distance(a, b) -> float:
    """Euclidean distance between two points."""
    a = _as_point(a)
    b = _as_point(b)
    return float(np.hypot(a[0] - b[0], a[1] - b[1]))


class LanePolyline:
    """An ordered open polyline representing one lane instance.

    By convention points run from the backward end (image bottom) to the
    forward end (image top).  The constructor checks shape only; use
    :meth:`from_points` to auto-orient raw vertices, and :func:`endpoints`
    to resolve the forward/backward ends of any polyline.
    """

    __slots__ = ("points", "id", "cum_lengths")

    def __init__(self, points, id: str = "lane"):
        pts = np.array(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
            raise ValueError("a lane needs at least two 2-D points")
        if not np.all(np.isfinite(pts)):
            raise ValueError("lane points must be finite")
        seg = np.diff(pts, axis=0)
        seglen = np.hypot(seg[:, 0], seg[:, 1])
        if np.any(seglen == 0.0):
            raise ValueError("consecutive lane points must be distinct")
        pts.setflags(write=False)
        self.points = pts
        self.id = id
        cum = np.concatenate(([0.0], np.cumsum(seglen)))
        cum.setflags(write=False)
        self.cum_lengths = cum

    @classmethod
    def from_points(cls, points, id: str = "lane") -> "LanePolyline":
        """Build a lane, reversing the vertex order if the endpoint rule says
        the forward end currently sits at index 0."""
        lane = cls(points, id)
        fwd_i, bwd_i = _endpoint_indices(lane.points)
        n = lane.points.shape[0]
        if fwd_i == 0 and bwd_i == n - 1:
            return cls(lane.points[::-1], id)
        return lane

    @property
    def n_points(self) -> int:
        return self.points.shape[0]

    @property
    def arc_length(self) -> float:
        return float(self.cum_lengths[-1])

    def is_end_oriented(self) -> bool:
        """True when index 0 is the backward end and the last index the
        forward end under the endpoint tie rules."""
        fwd_i, bwd_i = _endpoint_indices(self.points)
        return fwd_i == self.n_points - 1 and bwd_i == 0

    def __repr__(self) -> str:  # pragma: no cover
        return f"LanePolyline(id={self.id!r}, n={self.n_points}, length={self.arc_length:.1f})"


@dataclass(frozen=True)
class Projection:
    """Closest point of a polyline to a query point."""

    distance: float
    foot: np.ndarray
    segment_index: int
    arc_offset: float


def _endpoint_indices(pts: np.ndarray) -> tuple[int, int]:
    n = pts.shape[0]
    idx = np.arange(n)
    fwd = int(np.lexsort((idx, pts[:, 0], pts[:, 1]))[0])
    bwd = int(np.lexsort((idx, -pts[:, 0], -pts[:, 1]))[0])
    return fwd, bwd


def endpoints(lane: LanePolyline) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(forward_end, backward_end)`` vertices of a lane.

    Forward end: minimum y, ties by smaller x then lower index.  Backward
    end: maximum y, ties by larger x then lower index (mirrored so a
    horizontal lane still gets two distinct, deterministic ends).
    """
    fwd_i, bwd_i = _endpoint_indices(lane.points)
    return lane.points[fwd_i].copy(), lane.points[bwd_i].copy()


def project_to_polyline(p, lane: LanePolyline) -> Projection:
    """Minimum-distance projection of ``p`` onto the closed segments of
    ``lane``; ties resolved toward the smallest segment index."""
    q = _as_point(p)
    pts = lane.points
    a = pts[:-1]
    b = pts[1:]
    ab = b - a
    denom = np.einsum("ij,ij->i", ab, ab)
    t = np.einsum("ij,ij->i", q - a, ab) / denom
    np.clip(t, 0.0, 1.0, out=t)
    feet = a + t[:, None] * ab
    d2 = np.einsum("ij,ij->i", feet - q, feet - q)
    i = int(np.argmin(d2))
    seglen = lane.cum_lengths[i + 1] - lane.cum_lengths[i]
    return Projection(
        distance=float(np.sqrt(d2[i])),
        foot=feet[i].copy(),
        segment_index=i,
        arc_offset=float(lane.cum_lengths[i] + t[i] * seglen),
    )


def _segment_circle_crossing(a, b, center, radius, tlo, thi, pick_max):
    """First parameter t in [tlo, thi] where |a + t*(b-a) - center| = radius,
    scanning forward (smallest t) or backward (largest t when pick_max)."""
    ab = b - a
    ac = a - center
    qa = float(ab @ ab)
    if qa == 0.0:
        return None
    qb = 2.0 * float(ab @ ac)
    qc = float(ac @ ac) - radius * radius
    disc = qb * qb - 4.0 * qa * qc
    if disc < 0.0:
        return None
    s = np.sqrt(disc)
    eps = 1e-12
    roots = [(-qb - s) / (2.0 * qa), (-qb + s) / (2.0 * qa)]
    valid = [t for t in roots if tlo - eps <= t <= thi + eps]
    if not valid:
        return None
    t = max(valid) if pick_max else min(valid)
    return min(max(t, tlo), thi)


def _chord_point(
    lane: LanePolyline,
    center: np.ndarray,
    start_segment: int,
    start_t: float,
    d: float,
    increasing: bool,
) -> tuple[np.ndarray, float] | None:
    """Scan from an anchor arc position for the nearest (in arc length) point
    of the polyline at Euclidean distance ``d`` from ``center``."""
    pts = lane.points
    cum = lane.cum_lengths
    n_seg = pts.shape[0] - 1
    if increasing:
        seg, tlo = start_segment, start_t
        while seg < n_seg:
            a, b = pts[seg], pts[seg + 1]
            t = _segment_circle_crossing(a, b, center, d, tlo, 1.0, pick_max=False)
            if t is not None:
                q = a + t * (b - a)
                return q, float(cum[seg] + t * (cum[seg + 1] - cum[seg]))
            seg += 1
            tlo = 0.0
        return None
    seg, thi = start_segment, start_t
    while seg >= 0:
        a, b = pts[seg], pts[seg + 1]
        t = _segment_circle_crossing(a, b, center, d, 0.0, thi, pick_max=True)
        if t is not None:
            q = a + t * (b - a)
            return q, float(cum[seg] + t * (cum[seg + 1] - cum[seg]))
        seg -= 1
        thi = 1.0
    return None


def _forward_is_increasing(lane: LanePolyline) -> bool:
    fwd_i, bwd_i = _endpoint_indices(lane.points)
    n = lane.points.shape[0]
    if fwd_i == n - 1 and bwd_i == 0:
        return True
    if fwd_i == 0 and bwd_i == n - 1:
        return False
    raise ValueError(
        "lane ends are not its extreme vertices; orient the polyline "
        "(e.g. via LanePolyline.from_points) before asking for neighbors"
    )


def neighbor_at_chord(p, lane: LanePolyline, d: float, direction: str) -> np.ndarray | None:
    """Point of ``lane`` at straight-line distance ``d`` from the projection
    foot of ``p``, on the requested side of the foot.

    When the radius-``d`` circle crosses the polyline several times on that
    side, the crossing nearest the foot in arc length wins.  Returns ``None``
    when the whole side stays within distance ``d`` of the foot.
    """
    if d <= 0:
        raise ValueError("chord distance d must be positive")
    if direction not in (FORWARD, BACKWARD):
        raise ValueError(f"direction must be {FORWARD!r} or {BACKWARD!r}")
    q = _as_point(p)
    proj = project_to_polyline(q, lane)
    increasing = _forward_is_increasing(lane) == (direction == FORWARD)
    i = proj.segment_index
    seglen = lane.cum_lengths[i + 1] - lane.cum_lengths[i]
    t = (proj.arc_offset - lane.cum_lengths[i]) / seglen
    hit = _chord_point(lane, proj.foot, i, float(t), d, increasing)
    if hit is None:
        return None
    return hit[0]


def resample(lane: LanePolyline, spacing: float) -> LanePolyline:
    """Arc-length uniform resampling that preserves both endpoints; every
    output gap equals ``spacing`` except possibly the final one."""
    if spacing <= 0:
        raise ValueError("spacing must be positive")
    total = lane.arc_length
    n_steps = int(np.floor(total / spacing + 1e-9))
    arcs = spacing * np.arange(n_steps + 1, dtype=float)
    if total - arcs[-1] > 1e-9 * max(total, 1.0):
        arcs = np.append(arcs, total)
    else:
        arcs[-1] = total
    xs = np.interp(arcs, lane.cum_lengths, lane.points[:, 0])
    ys = np.interp(arcs, lane.cum_lengths, lane.points[:, 1])
    out = np.column_stack([xs, ys])
    out[0] = lane.points[0]
    out[-1] = lane.points[-1]
    return LanePolyline(out, id=lane.id)
