"""Bundled inputs: reference curves, random generic cubics, braid layouts.

The cubic below is the standard worked example for comparing the two
stereographic projections; its coefficients are fixed project-wide so runs
are reproducible.
"""

from __future__ import annotations

import numpy as np

from .curves import ImplicitCurve, JetKind, ParametricCurve, classify_jet, critical_radii, local_jet

#: f = y; cuts every sphere in a round unknot.
LINE_THROUGH_ORIGIN = ImplicitCurve({(0, 1): 1.0})

#: f = x + y + 1; a single birth at radius 1/sqrt(2).
AFFINE_LINE = ImplicitCurve({(1, 0): 1.0, (0, 1): 1.0, (0, 0): 1.0})

#: Parametric cubic whose diagrams differ sharply between the complex and
#: the coordinate-wise stereographic projections (two positive crossings,
#: three Seifert circuits with one reversed, under the latter).
PAPER_CUBIC = ParametricCurve(
    (-0.2052 + 0.0618j, -0.2986 - 0.4498j, -0.1048 + 0.0393j, 0.2563 - 0.1587j),
    (-0.244 + 0.3914j, -0.4694 - 0.1366j, 0.0099 + 0.1586j, -0.4786 - 0.2976j),
)


def cubic_node(curve: ParametricCurve) -> tuple[complex, complex] | None:
    """Self-intersection parameters (t1, t2) of a parametric cubic, if any.

    Writing s = t1 + t2 and p = t1 t2, the divided differences of x and y
    are linear in p, so the node has a closed form.
    """
    a = np.zeros(4, dtype=complex)
    b = np.zeros(4, dtype=complex)
    a[: len(curve.x_coeffs)] = curve.x_coeffs
    b[: len(curve.y_coeffs)] = curve.y_coeffs
    a3, a2, a1 = a[3], a[2], a[1]
    b3, b2, b1 = b[3], b[2], b[1]
    den = a3 * b2 - b3 * a2
    if abs(den) < 1e-14:
        return None
    s = -(a3 * b1 - b3 * a1) / den
    if abs(a3) > abs(b3):
        p = s * s + (a2 * s + a1) / a3
    else:
        p = s * s + (b2 * s + b1) / b3
    disc = np.sqrt(s * s - 4 * p)
    t1, t2 = (s + disc) / 2, (s - disc) / 2
    if abs(t1 - t2) < 1e-9:
        return None
    return complex(t1), complex(t2)


def random_generic_cubic(
    rng: np.random.Generator,
    r_hi: float = 1.0,
    coeff_scale: float = 0.5,
    max_draws: int = 400,
) -> ParametricCurve:
    """Draw a parametric cubic that is generic inside the ball of radius r_hi.

    Rejected draws: curves through the origin, nodes inside the ball (the
    handle bookkeeping needs an embedded curve piece), degenerate or crowded
    tangency radii, and tangency points too close to the sweep boundary.
    """
    for _ in range(max_draws):
        coeffs = coeff_scale * (rng.standard_normal(8) + 1j * rng.standard_normal(8))
        curve = ParametricCurve(tuple(coeffs[:4]), tuple(coeffs[4:]))
        x_roots = np.polynomial.polynomial.polyroots(curve.x_coeffs)
        if len(x_roots) and min(abs(curve.point(t)[1]) for t in x_roots) < 5e-3:
            continue  # passes (almost) through the origin
        node = cubic_node(curve)
        if node is not None:
            x, y = curve.point(node[0])
            if np.sqrt(abs(x) ** 2 + abs(y) ** 2) < 1.25 * r_hi:
                continue
        records = critical_radii(curve, 1.25 * r_hi)
        if not records:
            continue
        if any(rec.kind is JetKind.DEGENERATE for rec in records):
            continue
        radii = [rec.radius for rec in records]
        if min(radii) > 0.75 * r_hi:
            continue  # nearly empty sweep; dull and slow to trace
        spaced = all(b - a > 0.015 for a, b in zip(radii, radii[1:]))
        away = all(abs(r - r_hi) > 0.02 and r > 0.05 for r in radii)
        if spaced and away:
            return curve
    raise RuntimeError("no generic cubic found; widen the rejection budget")


def braid_closure_polylines(
    word: list[int],
    strands: int,
    samples_per_sector: int = 14,
    z_bump: float = 1.0,
) -> list[tuple[np.ndarray, np.ndarray]]:
    """Geometric annular closure of a braid word.

    Letters are nonzero integers: +i / -i for the generator joining strand
    positions i and i+1 (1-based), positive meaning the strand moving
    outward passes over.  Returns (vertices, z) pairs, one per component,
    all oriented counter-clockwise.
    """
    if strands < 1:
        raise ValueError("need at least one strand")
    if any(abs(g) < 1 or abs(g) >= strands for g in word):
        raise ValueError("generator index out of range")
    sectors = len(word) + 1
    radius = lambda track: 1.0 + 0.5 * track

    def sector_arc(k_sector, track_in, track_out, over: bool | None):
        th0 = 2 * np.pi * k_sector / sectors
        th1 = 2 * np.pi * (k_sector + 1) / sectors
        ths = np.linspace(th0, th1, samples_per_sector, endpoint=False)
        # half-sample phase keeps the two swap arcs of a sector from
        # sharing the mid-radius vertex exactly
        frac = (np.arange(samples_per_sector) + 0.5) / samples_per_sector
        blend = 0.5 - 0.5 * np.cos(np.pi * frac)
        rr = radius(track_in) + (radius(track_out) - radius(track_in)) * blend
        pts = np.stack([rr * np.cos(ths), rr * np.sin(ths)], axis=1)
        z = np.zeros(samples_per_sector)
        if over is not None:
            mid = samples_per_sector // 2
            lo, hi = max(0, mid - 3), min(samples_per_sector, mid + 4)
            z[lo:hi] = z_bump if over else -z_bump
        return pts, z

    total_perm = list(range(strands))
    perms = []
    for g in word:
        i = abs(g) - 1
        perm = list(range(strands))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        perms.append(perm)
    perms.append(list(range(strands)))

    def one_revolution(start_track):
        pts_chunks, z_chunks = [], []
        track = start_track
        for k, perm in enumerate(perms):
            if k < len(word):
                g = word[k]
                i = abs(g) - 1
                if track == i:
                    over = g > 0  # outward-moving strand is over for positive letters
                    c_pts, c_z = sector_arc(k, i, i + 1, over)
                    track = i + 1
                elif track == i + 1:
                    c_pts, c_z = sector_arc(k, i + 1, i, g < 0)
                    track = i
                else:
                    c_pts, c_z = sector_arc(k, track, track, None)
            else:
                c_pts, c_z = sector_arc(k, track, track, None)
            pts_chunks.append(c_pts)
            z_chunks.append(c_z)
        return np.vstack(pts_chunks), np.concatenate(z_chunks), track

    out = []
    seen = set()
    for start in range(strands):
        if start in seen:
            continue
        pts_all, z_all = [], []
        track = start
        while True:
            seen.add(track)
            pts, z, track = one_revolution(track)
            pts_all.append(pts)
            z_all.append(z)
            if track == start:
                break
        out.append((np.vstack(pts_all), np.concatenate(z_all)))
    return out


def torus_diagram_polylines(delta: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Standard diagram of the (delta, delta) torus link as a closed braid."""
    word = []
    for _ in range(delta):
        word.extend(range(1, delta))
    return braid_closure_polylines(word, delta)
