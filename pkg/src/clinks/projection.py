"""Stereographic projections of sphere links and the self-linking number.

The complex stereographic projection sends (x, y) on the sphere of radius r
(minus the pole y = -r) to

    (X + iY, Z) = (x / (r+y),  r Im(y) / |r+y|^2)

and carries the sphere's standard contact structure to ker(dZ - Y dX + X dY).
The classical coordinate-wise stereographic projection is provided for
comparison; it enjoys no such compatibility.  The self-linking number of a
traced link is the linking number with its push-off along the tangent field
j(x, y) = (-conj y, conj x), computed from signed crossings between the two
projected curves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AtPole, PushOffCollision
from .geometry import crossing_sign, polyline_intersections
from .tracing import SpatialLoop, TracedLink

POLE_TOL = 1e-9


def complex_stereographic(point: tuple[complex, complex], r: float) -> tuple[float, float, float]:
    x, y = point
    den = r + y
    if abs(den) < POLE_TOL * r:
        raise AtPole(f"point with y = -r (|r+y| = {abs(den):.2e})")
    w = x / den
    z = r * y.imag / abs(den) ** 2
    return (w.real, w.imag, z)


def complex_stereographic_inverse(image: tuple[float, float, float], r: float) -> tuple[complex, complex]:
    """Inverse of the complex stereographic projection, onto the sphere."""
    X, Y, Z = image
    w2 = X * X + Y * Y
    rho2 = r * r / ((1 + w2) ** 2 / 4 + Z * Z)
    u = rho2 * (1 + w2) / (2 * r) + 1j * (Z * rho2 / r)
    y = u - r
    x = complex(X, Y) * u
    return (x, y)


def plane_projection(point: tuple[complex, complex], r: float) -> tuple[float, float]:
    X, Y, _ = complex_stereographic(point, r)
    return (X, Y)


def standard_stereographic(point: tuple[complex, complex], r: float) -> tuple[float, float, float]:
    x, y = point
    den = y.real + r
    if abs(den) < POLE_TOL * r:
        raise AtPole(f"point with y1 = -r (|y1+r| = {abs(den):.2e})")
    return (x.real / den, x.imag / den, y.imag / den)


def j_field(point: tuple[complex, complex]) -> tuple[complex, complex]:
    x, y = point
    return (-np.conj(y), np.conj(x))


@dataclass
class ProjectedLoop:
    """Image of one link component in R^3, as an (n, 3) sample array."""

    points: np.ndarray
    source: int
    kind: str = "complex"

    def __len__(self) -> int:
        return len(self.points)

    def plane(self) -> np.ndarray:
        return self.points[:, :2]

    def heights(self) -> np.ndarray:
        return self.points[:, 2]


def project_loop(loop: SpatialLoop, r: float, kind: str = "complex", source: int = 0) -> ProjectedLoop:
    fn = complex_stereographic if kind == "complex" else standard_stereographic
    pts = np.array([fn((x, y), r) for x, y in zip(loop.xs, loop.ys)])
    return ProjectedLoop(pts, source, kind)


def project_link(link: TracedLink, kind: str = "complex") -> list[ProjectedLoop]:
    return [project_loop(loop, link.radius, kind, i) for i, loop in enumerate(link.loops)]


def contact_pullback_min(loop3d: ProjectedLoop) -> float:
    """min over the loop of (dZ - (Y dX - X dY)) / ds.

    Positive along images of correctly oriented sphere links under the
    complex projection.
    """
    p = loop3d.points
    nxt = np.roll(p, -1, axis=0)
    mid = 0.5 * (p + nxt)
    d = nxt - p
    beta = d[:, 2] - (mid[:, 1] * d[:, 0] - mid[:, 0] * d[:, 1])
    speed = np.linalg.norm(d, axis=1)
    return float((beta / np.maximum(speed, 1e-300)).min())


def psi_jacobian_sign(point: tuple[complex, complex], r: float, h: float = 1e-6) -> int:
    """Sign of det dPsi on an oriented tangent frame of the sphere.

    The frame (e1, e2, e3) is chosen so that (outward normal, e1, e2, e3) is
    a positive basis of R^4.
    """
    x, y = point
    z = np.array([x.real, x.imag, y.real, y.imag])
    n = z / np.linalg.norm(z)
    basis = []
    for seed in np.eye(4):
        v = seed - np.dot(seed, n) * n
        for b in basis:
            v = v - np.dot(v, b) * b
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            basis.append(v / norm)
        if len(basis) == 3:
            break
    frame = np.stack([n, *basis])
    if np.linalg.det(frame) < 0:
        basis[0], basis[1] = basis[1], basis[0]

    def psi_of(vec4):
        p = (complex(vec4[0], vec4[1]), complex(vec4[2], vec4[3]))
        return np.array(complex_stereographic(p, r))

    cols = []
    for e in basis:
        plus = z + h * e
        minus = z - h * e
        plus = plus / np.linalg.norm(plus) * r
        minus = minus / np.linalg.norm(minus) * r
        cols.append((psi_of(plus) - psi_of(minus)) / (2 * h))
    det = np.linalg.det(np.stack(cols, axis=1))
    return 1 if det > 0 else -1


def _signed_crossings_between(a: np.ndarray, b: np.ndarray) -> int:
    """Sum of crossing signs between two closed space curves' projections."""
    total = 0
    for i, s, j, u in polyline_intersections(a[:, :2], b[:, :2]):
        za = a[i, 2] + s * (a[(i + 1) % len(a), 2] - a[i, 2])
        zb = b[j, 2] + u * (b[(j + 1) % len(b), 2] - b[j, 2])
        da = a[(i + 1) % len(a), :2] - a[i, :2]
        db = b[(j + 1) % len(b), :2] - b[j, :2]
        over, under = (da, db) if za > zb else (db, da)
        total += crossing_sign(over, under)
    return total


def _linking_number(curves_a: list[np.ndarray], curves_b: list[np.ndarray], rng: np.random.Generator) -> int:
    """Linking number of two disjoint unions of closed curves in R^3.

    Counts signed crossings between the families in two independently
    rotated generic plane projections and insists the counts agree.
    """
    results = []
    for _ in range(2):
        q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        if np.linalg.det(q) < 0:
            q[:, 0] = -q[:, 0]
        total = 0
        for a in curves_a:
            for b in curves_b:
                total += _signed_crossings_between(a @ q.T, b @ q.T)
        if total % 2:
            raise ArithmeticError("odd crossing sum between closed curves")
        results.append(total // 2)
    if results[0] != results[1]:
        raise ArithmeticError(f"linking count disagrees between projections: {results}")
    return results[0]


def self_linking(link: TracedLink, epsilon: float = 1e-2, seed: int = 7) -> int:
    """Linking number of the link with its j-field push-off.

    ``epsilon`` scales the push-off; it must be small enough that the pushed
    link stays embedded and disjoint from the original.
    """
    r = link.radius
    originals = []
    pushed = []
    pushed_r4 = []
    for loop in link.loops:
        xs, ys = loop.xs, loop.ys
        jx, jy = -np.conj(ys), np.conj(xs)
        scale = np.sqrt(1 + epsilon**2)
        px = (xs + epsilon * jx) / scale
        py = (ys + epsilon * jy) / scale
        originals.append(np.array([complex_stereographic((x, y), r) for x, y in zip(xs, ys)]))
        pushed.append(np.array([complex_stereographic((x, y), r) for x, y in zip(px, py)]))
        pushed_r4.append(np.stack([px.real, px.imag, py.real, py.imag], axis=1))
    all_base = np.vstack([loop.r4() for loop in link.loops])
    all_pushed = np.vstack(pushed_r4)
    gap = min(np.min(np.linalg.norm(all_base - row, axis=1)) for row in all_pushed)
    if gap < 0.05 * epsilon * r:
        raise PushOffCollision(
            f"pushed link nearly touches the original (gap {gap:.2e}); decrease epsilon"
        )
    rng = np.random.default_rng(seed)
    return _linking_number(originals, pushed, rng)
