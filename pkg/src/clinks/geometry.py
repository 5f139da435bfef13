"""Planar polyline geometry: intersections, winding, areas, turning numbers.

Closed polylines are arrays of shape (n, 2) without a duplicated endpoint;
segment i runs from vertex i to vertex (i+1) mod n.
"""

from __future__ import annotations

import numpy as np

PAIR_CHUNK = 400_000


def shoelace_area(pts: np.ndarray) -> float:
    """Signed area; positive for counter-clockwise curves."""
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def turning_number(pts: np.ndarray, max_kink: float = 2.96) -> float:
    """Total signed exterior angle / 2pi of a closed polyline.

    Raises when a kink exceeds ``max_kink`` radians (roughly 170 degrees):
    the discrete Gauss degree is unreliable there and the curve should be
    resampled instead of guessed at.
    """
    v = np.roll(pts, -1, axis=0) - pts
    ang = np.arctan2(v[:, 1], v[:, 0])
    ext = np.diff(np.concatenate([ang, ang[:1]]))
    ext = (ext + np.pi) % (2 * np.pi) - np.pi
    worst = np.abs(ext).max() if len(ext) else 0.0
    if worst > max_kink:
        raise ValueError(f"kink of {worst:.3f} rad; resample the polyline")
    return float(ext.sum() / (2 * np.pi))


def winding_number(pts: np.ndarray, q: np.ndarray) -> int:
    """Winding of a closed polyline around the point q."""
    d = pts - q
    ang = np.arctan2(d[:, 1], d[:, 0])
    ext = np.diff(np.concatenate([ang, ang[:1]]))
    ext = (ext + np.pi) % (2 * np.pi) - np.pi
    return int(round(ext.sum() / (2 * np.pi)))


def point_in_polygon(pts: np.ndarray, q: np.ndarray) -> bool:
    return winding_number(pts, q) != 0


def crossing_sign(over_dir: np.ndarray, under_dir: np.ndarray) -> int:
    """+1 when (over, under) is a positively oriented frame."""
    cross = over_dir[0] * under_dir[1] - over_dir[1] * under_dir[0]
    return 1 if cross > 0 else -1


def _segment_hits(a0, a1, b0, b1, eps=1e-9):
    """Vectorized proper intersections of two segment batches.

    Returns index pairs and parameters (s on A, u on B), interior only.
    """
    d1 = a1 - a0
    d2 = b1 - b0
    den = d1[:, None, 0] * d2[None, :, 1] - d1[:, None, 1] * d2[None, :, 0]
    dp = b0[None, :, :] - a0[:, None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        s = (dp[..., 0] * d2[None, :, 1] - dp[..., 1] * d2[None, :, 0]) / den
        u = (dp[..., 0] * d1[:, None, 1] - dp[..., 1] * d1[:, None, 0]) / den
    mask = (s > eps) & (s < 1 - eps) & (u > eps) & (u < 1 - eps)
    return mask, s, u


def polyline_intersections(
    a: np.ndarray, b: np.ndarray, same: bool = False, eps: float = 1e-9
) -> list[tuple[int, float, int, float]]:
    """All interior crossings between closed polylines a and b.

    With ``same=True`` the polylines are one curve and adjacent segments are
    excluded.  Works in bounding-box-filtered chunks to bound memory.
    """
    na, nb = len(a), len(b)
    a0, a1 = a, np.roll(a, -1, axis=0)
    b0, b1 = b, np.roll(b, -1, axis=0)
    amin = np.minimum(a0, a1) - eps
    amax = np.maximum(a0, a1) + eps
    bmin = np.minimum(b0, b1) - eps
    bmax = np.maximum(b0, b1) + eps
    hits: list[tuple[int, float, int, float]] = []
    rows_per_chunk = max(1, PAIR_CHUNK // max(nb, 1))
    for start in range(0, na, rows_per_chunk):
        stop = min(na, start + rows_per_chunk)
        box = (
            (amin[start:stop, None, 0] <= bmax[None, :, 0])
            & (bmin[None, :, 0] <= amax[start:stop, None, 0])
            & (amin[start:stop, None, 1] <= bmax[None, :, 1])
            & (bmin[None, :, 1] <= amax[start:stop, None, 1])
        )
        if same:
            ii = np.arange(start, stop)
            jj = np.arange(nb)
            diff = (jj[None, :] - ii[:, None]) % na
            box &= (diff != 0) & (diff != 1) & (diff != na - 1)
            box &= jj[None, :] > ii[:, None]
        if not box.any():
            continue
        mask, s, u = _segment_hits(a0[start:stop], a1[start:stop], b0, b1, eps)
        mask &= box
        for i, j in np.argwhere(mask):
            hits.append((start + int(i), float(s[i, j]), int(j), float(u[i, j])))
    return hits


def interpolate(pts: np.ndarray, pos: float) -> np.ndarray:
    """Point at fractional position ``pos`` along a closed polyline."""
    n = len(pts)
    i = int(np.floor(pos)) % n
    frac = pos - np.floor(pos)
    return pts[i] + frac * (pts[(i + 1) % n] - pts[i])


def direction_at(pts: np.ndarray, pos: float) -> np.ndarray:
    n = len(pts)
    i = int(np.floor(pos)) % n
    d = pts[(i + 1) % n] - pts[i]
    return d / np.linalg.norm(d)
