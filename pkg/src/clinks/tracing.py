"""Numerical tracing of the oriented link cut out of a curve by a sphere.

The link is the intersection of the curve with the sphere of radius r.  For a
parametric curve it is traced as the level set |x(t)|^2 + |y(t)|^2 = r^2 in
the t-plane; for an implicit curve as the 1-manifold {f = 0, |z|^2 = r^2} in
R^4, following the null space of the 3x4 real Jacobian.  Loops are oriented
positively transverse: the contact form

    alpha(v) = x1 v_x2 - x2 v_x1 + y1 v_y2 - y2 v_y1

is positive along every forward tangent.  For the parametric chart the
positive direction is dt = i * conj(conj(x) x' + conj(y) y').
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .curves import (
    CriticalRadiusRecord,
    CurveModel,
    ImplicitCurve,
    ParametricCurve,
    critical_radii,
    evaluate,
    rotate_curve,
    su2_matrix,
    tangency_det,
)
from .errors import (
    ContactDegeneracy,
    NonTransverseRadius,
    SolverDidNotConverge,
    StepCollapse,
)

DEFAULT_STEP = 0.02
DEFAULT_RAYS = 64
MIN_STEP_FACTOR = 1e-5


@dataclass
class SpatialLoop:
    """One closed component, sampled without a duplicated endpoint."""

    xs: np.ndarray  # complex, shape (n,)
    ys: np.ndarray  # complex, shape (n,)
    ts: np.ndarray | None = None  # parameter values for parametric curves
    closed: bool = True
    orientation_checked: bool = False

    def __len__(self) -> int:
        return len(self.xs)

    def r4(self) -> np.ndarray:
        """Samples as rows (x1, x2, y1, y2) of R^4."""
        return np.stack([self.xs.real, self.xs.imag, self.ys.real, self.ys.imag], axis=1)

    def reversed(self) -> "SpatialLoop":
        return SpatialLoop(
            self.xs[::-1].copy(),
            self.ys[::-1].copy(),
            None if self.ts is None else self.ts[::-1].copy(),
            self.closed,
            self.orientation_checked,
        )

    def contact_values(self) -> np.ndarray:
        """alpha(v)/|v| for each sample's forward difference."""
        x1, x2 = self.xs.real, self.xs.imag
        y1, y2 = self.ys.real, self.ys.imag
        vx = np.roll(self.xs, -1) - self.xs
        vy = np.roll(self.ys, -1) - self.ys
        alpha = x1 * vx.imag - x2 * vx.real + y1 * vy.imag - y2 * vy.real
        speed = np.sqrt(np.abs(vx) ** 2 + np.abs(vy) ** 2)
        return alpha / np.maximum(speed, 1e-300)


@dataclass
class TracedLink:
    loops: list[SpatialLoop]
    radius: float
    transversality_margin: float
    rotation: np.ndarray | None = None  # SU(2) applied to the curve, if any

    def __len__(self) -> int:
        return len(self.loops)

    def to_dict(self) -> dict:
        out: dict = {
            "radius": self.radius,
            "transversality_margin": self.transversality_margin,
            "loops": [
                [[float(a) for a in row] for row in loop.r4()] for loop in self.loops
            ],
        }
        if self.rotation is not None:
            out["rotation"] = [[[c.real, c.imag] for c in row] for row in self.rotation]
        return out


def _margin_sample(curve: CurveModel, x: complex, y: complex, t: complex | None) -> float:
    """|tangency det| / (|grad| |z|), a transversality measure in [0, 1]."""
    znorm = np.sqrt(abs(x) ** 2 + abs(y) ** 2)
    if isinstance(curve, ParametricCurve):
        xd, yd = curve.velocity(t)
        gnorm = np.sqrt(abs(xd) ** 2 + abs(yd) ** 2)
        val = abs(np.conj(x) * xd + np.conj(y) * yd)
    else:
        _, fx, fy = evaluate(curve, (x, y))
        gnorm = np.sqrt(abs(fx) ** 2 + abs(fy) ** 2)
        val = abs(fx * np.conj(y) - fy * np.conj(x))
    if gnorm * znorm == 0:
        return 0.0
    return float(val / (gnorm * znorm))


# ---------------------------------------------------------------------------
# parametric tracing: level curves in the t-plane


def _param_correct(curve: ParametricCurve, t: complex, r2: float) -> complex | None:
    for _ in range(60):
        val = curve.dist2(t) - r2
        if abs(val) < 1e-13 * max(1.0, r2):
            return t
        grad = 2.0 * np.conj(curve.radial_derivative(t))
        g2 = abs(grad) ** 2
        if g2 < 1e-30:
            return None
        t = t - val * grad / g2
    return None


def _param_seeds(curve: ParametricCurve, r: float, rays: int,
                 hints: list[CriticalRadiusRecord] | None) -> list[complex]:
    r2 = r * r
    seeds: list[complex] = []
    reach = 1.0
    while min(curve.dist2(reach * np.exp(1j * th)) for th in np.linspace(0, 2 * np.pi, 8)) < 4 * r2:
        reach *= 1.4
        if reach > 1e6:
            break
    for th in np.linspace(0, 2 * np.pi, rays, endpoint=False):
        d = np.exp(1j * th)
        ss = np.linspace(1e-9, reach, 40 * max(1, int(np.sqrt(rays))))
        vals = np.array([curve.dist2(s * d) for s in ss]) - r2
        signs = np.sign(vals)
        for i in np.flatnonzero(signs[:-1] * signs[1:] < 0):
            lo, hi = ss[i], ss[i + 1]
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                if (curve.dist2(lo * d) - r2) * (curve.dist2(mid * d) - r2) <= 0:
                    hi = mid
                else:
                    lo = mid
            seeds.append(0.5 * (lo + hi) * d)
    # make sure components born at inner critical points are represented
    for rec in hints or []:
        if rec.parameter is None or rec.radius >= r:
            continue
        for phase in np.linspace(0, 2 * np.pi, 8, endpoint=False):
            probe = _param_correct(curve, rec.parameter + 1e-3 * (1 + abs(rec.parameter)) * np.exp(1j * phase), r2)
            if probe is not None:
                seeds.append(probe)
    return seeds


def _trim_closure(pts: list, start, h: float, dist) -> list:
    """Drop trailing samples that crowd or overshoot the starting sample."""
    while len(pts) > 4 and dist(pts[-1], start) < 0.6 * h:
        pts.pop()
    return pts


def _param_trace_loop(curve: ParametricCurve, t0: complex, r: float, step: float) -> np.ndarray:
    r2 = r * r
    start = _param_correct(curve, t0, r2)
    if start is None:
        raise SolverDidNotConverge("could not project seed onto the level set")

    def direction(t: complex) -> complex:
        d = 1j * np.conj(curve.radial_derivative(t))
        a = abs(d)
        if a < 1e-18:
            raise NonTransverseRadius(f"radial derivative vanishes near t={t}")
        return d / a

    pts = [start]
    t = start
    h = step
    min_h = step * MIN_STEP_FACTOR
    budget = 200000
    for n in range(budget):
        d1 = direction(t)
        mid = _param_correct(curve, t + 0.5 * h * d1, r2)
        if mid is None:
            h *= 0.5
            if h < min_h:
                raise StepCollapse("parametric corrector failed at the minimum step")
            continue
        d2 = direction(mid)
        nxt = _param_correct(curve, t + h * d2, r2)
        if nxt is None or abs(nxt - t) > 2.5 * h:
            h *= 0.5
            if h < min_h:
                raise StepCollapse("parametric corrector failed at the minimum step")
            continue
        turn = abs(np.angle(d2 / d1))
        if turn > 0.4 and h > 2 * min_h:
            h *= 0.5
            continue
        pts.append(nxt)
        t = nxt
        if n > 3 and abs(t - start) < 0.75 * h:
            direction_ok = (direction(t) / direction(start)).real > 0
            if direction_ok:
                _trim_closure(pts, start, h, lambda a, b: abs(a - b))
                return np.array(pts)
        if turn < 0.05 and h < step:
            h = min(step, 1.6 * h)
    raise SolverDidNotConverge("loop did not close within the step budget")


def _trace_parametric(curve: ParametricCurve, r: float, step: float, rays: int,
                      hints) -> list[SpatialLoop]:
    seeds = _param_seeds(curve, r, rays, hints)
    loops: list[SpatialLoop] = []
    remaining = list(seeds)
    while remaining:
        ts = _param_trace_loop(curve, remaining[0], r, step * max(r, 0.1))
        loops.append(SpatialLoop(
            xs=np.array([curve.point(t)[0] for t in ts]),
            ys=np.array([curve.point(t)[1] for t in ts]),
            ts=ts,
        ))
        span = max(np.ptp(ts.real), np.ptp(ts.imag), step)
        keep = []
        for s in remaining[1:]:
            if np.min(np.abs(ts - s)) > max(2 * step * max(r, 0.1), 0.02 * span):
                keep.append(s)
        remaining = keep
    return loops


# ---------------------------------------------------------------------------
# implicit tracing: continuation in R^4


def _implicit_residual(curve: ImplicitCurve, z: np.ndarray, r2: float):
    x, y = z
    f, fx, fy = evaluate(curve, (x, y))
    rho = abs(x) ** 2 + abs(y) ** 2 - r2
    vals = np.array([f.real, f.imag, rho])
    jac = np.array([
        [fx.real, -fx.imag, fy.real, -fy.imag],
        [fx.imag, fx.real, fy.imag, fy.real],
        [2 * x.real, 2 * x.imag, 2 * y.real, 2 * y.imag],
    ])
    return vals, jac


def _implicit_correct(curve: ImplicitCurve, z: np.ndarray, r2: float, scale: float):
    for _ in range(60):
        vals, jac = _implicit_residual(curve, z, r2)
        if np.linalg.norm(vals) < 1e-12 * scale:
            return z
        try:
            delta, *_ = np.linalg.lstsq(jac, -vals, rcond=None)
        except np.linalg.LinAlgError:
            return None
        z = z + np.array([delta[0] + 1j * delta[1], delta[2] + 1j * delta[3]])
    return None


def _implicit_tangent(curve: ImplicitCurve, z: np.ndarray, r2: float) -> np.ndarray:
    _, jac = _implicit_residual(curve, z, r2)
    _, _, vt = np.linalg.svd(jac)
    v = vt[-1]
    return np.array([v[0] + 1j * v[1], v[2] + 1j * v[3]])


def _alpha_of(z: np.ndarray, v: np.ndarray) -> float:
    x, y = z
    vx, vy = v
    return x.real * vx.imag - x.imag * vx.real + y.real * vy.imag - y.imag * vy.real


def _implicit_seeds(curve: ImplicitCurve, r: float, slices: int,
                    hints) -> list[np.ndarray]:
    scale = 1.0 + curve.coeff_norm()
    from numpy.polynomial import polynomial as npoly

    seeds: list[np.ndarray] = []
    axis = np.linspace(-r, r, max(8, slices // 4))
    band = 0.35 * r
    for swap in (False, True):
        cc = curve._c.T if swap else curve._c
        for re in axis:
            for im in axis:
                w = complex(re, im)
                if abs(w) > r:
                    continue
                pows = w ** np.arange(cc.shape[0])
                poly = np.trim_zeros(pows @ cc, "b")
                if len(poly) <= 1:
                    continue
                for root in npoly.polyroots(poly):
                    p = np.array([root, w] if swap else [w, root])
                    dist = np.sqrt(abs(p[0]) ** 2 + abs(p[1]) ** 2)
                    if abs(dist - r) < band:
                        fixed = _implicit_correct(curve, p, r * r, scale)
                        if fixed is not None:
                            seeds.append(fixed)
    for rec in hints or []:
        if rec.parameter is not None or rec.radius >= r:
            continue
        base = np.array([rec.point[0], rec.point[1]])
        for k in range(8):
            off = 1e-3 * (1 + r) * np.exp(2j * np.pi * k / 8)
            fixed = _implicit_correct(curve, base + np.array([off, off * 1j]), r * r, scale)
            if fixed is not None:
                seeds.append(fixed)
    return seeds


def _implicit_trace_loop(curve: ImplicitCurve, z0: np.ndarray, r: float, step: float) -> list[np.ndarray]:
    scale = 1.0 + curve.coeff_norm()
    r2 = r * r
    start = _implicit_correct(curve, z0, r2, scale)
    if start is None:
        raise SolverDidNotConverge("could not project seed onto the link")
    tan = _implicit_tangent(curve, start, r2)
    if _alpha_of(start, tan) < 0:
        tan = -tan
    pts = [start]
    z = start
    h = step
    min_h = step * MIN_STEP_FACTOR
    for n in range(200000):
        cand = _implicit_correct(curve, z + h * tan, r2, scale)
        if cand is None or np.linalg.norm(cand - z) > 2.5 * h:
            h *= 0.5
            if h < min_h:
                raise StepCollapse("implicit corrector failed at the minimum step")
            continue
        new_tan = _implicit_tangent(curve, cand, r2)
        if np.real(np.vdot(tan, new_tan)) < 0:
            new_tan = -new_tan
        cosang = np.real(np.vdot(tan, new_tan)) / (np.linalg.norm(tan) * np.linalg.norm(new_tan))
        if cosang < 0.92 and h > 2 * min_h:
            h *= 0.5
            continue
        pts.append(cand)
        z, tan = cand, new_tan
        if n > 3 and np.linalg.norm(z - start) < 0.75 * h:
            start_tan = _implicit_tangent(curve, start, r2)
            if _alpha_of(start, start_tan) < 0:
                start_tan = -start_tan
            if np.real(np.vdot(tan, start_tan)) > 0:
                _trim_closure(pts, start, h, lambda a, b: np.linalg.norm(a - b))
                return pts
        if cosang > 0.999 and h < step:
            h = min(step, 1.6 * h)
    raise SolverDidNotConverge("loop did not close within the step budget")


def _trace_implicit(curve: ImplicitCurve, r: float, step: float, slices: int,
                    hints) -> list[SpatialLoop]:
    seeds = _implicit_seeds(curve, r, slices, hints)
    loops: list[SpatialLoop] = []
    remaining = seeds
    h = step * r
    while remaining:
        pts = _implicit_trace_loop(curve, remaining[0], r, h)
        arr = np.array(pts)
        loops.append(SpatialLoop(xs=arr[:, 0], ys=arr[:, 1]))
        keep = []
        for s in remaining[1:]:
            if np.min(np.linalg.norm(arr - s, axis=1)) > 2 * h:
                keep.append(s)
        remaining = keep
    return loops


# ---------------------------------------------------------------------------
# public interface


def seed_points(curve: CurveModel, r: float, density: int = DEFAULT_RAYS,
                hints: list[CriticalRadiusRecord] | None = None) -> list[tuple[complex, complex]]:
    """Points on the link, at least one per component (best effort).

    Returns an empty list when the sphere misses the curve.
    """
    if r <= 0:
        raise ValueError("radius must be positive")
    if isinstance(curve, ParametricCurve):
        ts = _param_seeds(curve, r, density, hints)
        return [curve.point(t) for t in ts]
    return [tuple(z) for z in _implicit_seeds(curve, r, density, hints)]


def trace_link(
    curve: CurveModel,
    r: float,
    step: float = DEFAULT_STEP,
    density: int = DEFAULT_RAYS,
    hints: list[CriticalRadiusRecord] | None = None,
    verify_seeding: bool = False,
    margin_floor: float = 1e-7,
) -> TracedLink:
    """Trace, orient, and sanity-check the link at radius r.

    ``verify_seeding`` retraces at doubled seed density and fails loudly when
    the component count changes.  ``hints`` (critical radius records) make the
    default density reliable near birth radii.
    """
    if isinstance(curve, ParametricCurve):
        loops = _trace_parametric(curve, r, step, density, hints)
        if verify_seeding:
            again = _trace_parametric(curve, r, step, 2 * density, hints)
            if len(again) != len(loops):
                loops = _trace_parametric(curve, r, step, 4 * density, hints)
                again = _trace_parametric(curve, r, step, 8 * density, hints)
                if len(again) != len(loops):
                    raise SolverDidNotConverge("component count unstable under seeding density")
                loops = again
    else:
        loops = _trace_implicit(curve, r, step, density, hints)
        if verify_seeding:
            again = _trace_implicit(curve, r, step, 2 * density, hints)
            if len(again) != len(loops):
                raise SolverDidNotConverge("component count unstable under seeding density")
    margin = 1.0
    for loop in loops:
        for x, y, t in zip(loop.xs, loop.ys, loop.ts if loop.ts is not None else [None] * len(loop)):
            margin = min(margin, _margin_sample(curve, x, y, t))
    link = TracedLink(loops, r, margin if loops else 0.0)
    if loops and margin < margin_floor:
        raise NonTransverseRadius(f"margin {margin:.2e} below floor at r={r}")
    return orient_link(link, curve)


def orient_link(link: TracedLink, curve: CurveModel) -> TracedLink:
    """Flip loops so the contact form is positive along forward tangents."""
    oriented = []
    for loop in link.loops:
        vals = loop.contact_values()
        if np.all(vals > 0):
            loop.orientation_checked = True
            oriented.append(loop)
        elif np.all(vals < 0):
            rev = loop.reversed()
            rev.orientation_checked = True
            oriented.append(rev)
        else:
            raise ContactDegeneracy(
                f"contact form changes sign along a loop at r={link.radius} "
                f"(min {vals.min():.3e}, max {vals.max():.3e})"
            )
    return TracedLink(oriented, link.radius, link.transversality_margin, link.rotation)


def transversality_margin(curve: CurveModel, r: float, density: int = 32) -> float:
    """min |tangency det| / (|grad| |z|) over the link; 0 if non-transverse."""
    try:
        link = trace_link(curve, r, step=0.05, density=density, margin_floor=0.0)
    except (StepCollapse, SolverDidNotConverge, NonTransverseRadius):
        return 0.0
    if not link.loops:
        raise ValueError(f"link is empty at r={r}")
    return link.transversality_margin


def axis_clearance(link: TracedLink) -> float:
    """Distance from the samples to the half-line {x=0, y real <= 0}, over r."""
    best = np.inf
    for loop in link.loops:
        y1 = loop.ys.real
        d2 = np.abs(loop.xs) ** 2 + loop.ys.imag**2 + np.maximum(y1, 0.0) ** 2
        best = min(best, float(np.sqrt(d2.min())))
    return best / link.radius


def ensure_axis_clear(
    curve: CurveModel,
    radii: list[float],
    rng: np.random.Generator,
    threshold: float = 0.05,
    attempts: int = 12,
) -> tuple[CurveModel, np.ndarray | None]:
    """Rotate the curve by SU(2) until traced samples avoid the projection axis.

    The same rotation is used for a whole radius sweep so diagrams at nearby
    radii stay comparable.
    """
    rotation = None
    current = curve
    for _ in range(attempts):
        clear = np.inf
        for r in radii:
            try:
                link = trace_link(current, r, step=0.05, density=24, margin_floor=0.0)
            except (StepCollapse, SolverDidNotConverge, NonTransverseRadius):
                continue
            if link.loops:
                clear = min(clear, axis_clearance(link))
        if clear > threshold:
            return current, rotation
        rotation = su2_matrix(rng.uniform(0, 2 * np.pi, 3))
        current = rotate_curve(curve, rotation)
    raise SolverDidNotConverge("no rotation cleared the projection axis")
