"""Synthetic diagram surgery used by tests: circles, kinks, slide bulges."""

import numpy as np


def circle(center, radius, ccw=True, n=80, z=0.0):
    th = np.linspace(0, 2 * np.pi, n, endpoint=False)
    if not ccw:
        th = th[::-1]
    pts = np.stack([center[0] + radius * np.cos(th), center[1] + radius * np.sin(th)], axis=1)
    return pts, np.full(n, z)


def add_kink(pts, z, at, scale=0.2, ccw=True, first_over=True, samples=40):
    """Insert a small loop into segment ``at`` of a closed polyline.

    The loop is the curve s -> (s^2 - 1, s^3 - s) in a local frame; it
    crosses itself once, transversally.  ``ccw`` picks the loop orientation,
    ``first_over`` which passage of the crossing lies above.
    """
    n = len(pts)
    p = pts[at % n]
    q = pts[(at + 1) % n]
    d = (q - p) / np.linalg.norm(q - p)
    nrm = np.array([-d[1], d[0]])
    if not ccw:
        nrm = -nrm
    s = np.linspace(-1.35, 1.35, samples)
    local_x = (s**2 - 1.0) * 0.6
    local_y = s**3 - s
    mid = 0.5 * (p + q)
    span = np.linalg.norm(q - p)
    kink = mid[None, :] + scale * span * (local_y[:, None] * d[None, :] + local_x[:, None] * nrm[None, :])
    zk = np.zeros(samples)
    bump = np.exp(-((np.abs(s) - 1.0) ** 2) / 0.02)
    zk += np.where(s < 0, 1.0 if first_over else -1.0, -1.0 if first_over else 1.0) * bump
    new_pts = np.vstack([pts[: at % n + 1], kink, pts[(at % n) + 1 :]])
    new_z = np.concatenate([z[: at % n + 1], zk + np.interp(0.5, [0, 1], [z[at % n], z[(at + 1) % n]]), z[(at % n) + 1 :]])
    return new_pts, new_z


def add_slide_bulge(pts, z, at, target_pts, over=True, samples=60):
    """Replace segment ``at`` by a bulge that crosses the target circle twice.

    Simulates one second Reidemeister move; the two new crossings have
    opposite signs.
    """
    n = len(pts)
    p = pts[at % n]
    q = pts[(at + 1) % n]
    center = target_pts.mean(axis=0)
    deep = center + (center - 0.5 * (p + q)) * 0.0  # reach just past the center
    t = np.linspace(0, 1, samples)
    base = p[None, :] * (1 - t[:, None]) + q[None, :] * t[:, None]
    lift = np.sin(np.pi * t)[:, None] * (deep - 0.5 * (p + q))[None, :] * 1.15
    bulge = base + lift
    zb = np.full(samples, 1.0 if over else -1.0) * np.sin(np.pi * t) ** 0.25
    new_pts = np.vstack([pts[: at % n + 1], bulge[1:-1], pts[(at % n) + 1 :]])
    new_z = np.concatenate([z[: at % n + 1], zb[1:-1], z[(at % n) + 1 :]])
    return new_pts, new_z
