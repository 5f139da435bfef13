"""Complex plane curves and their sphere-tangency structure.

A curve lives in C^2 with coordinates (x, y), given either implicitly as the
zero set of a bivariate polynomial f or parametrically by a pair of univariate
polynomials t -> (x(t), y(t)).  The central objects computed here are the
critical radii: values of r where the sphere S_r of radius r fails to meet the
curve transversally.  On the implicit side these are cut out by f = 0 together
with the vanishing of the tangency determinant

    det | df/dx  df/dy |
        | conj x conj y |

and on the parametric side by the Wirtinger derivative of |x(t)|^2 + |y(t)|^2.
Each critical point is classified as elliptic (local minimum of the distance
function, a component is born there) or hyperbolic (saddle, a one-handle is
attached) through the second-order jet of a local parametrization.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import DegenerateCurve, SingularPointOfCurve, SolverDidNotConverge
from .numerics import newton_complex

ON_CURVE_TOL = 1e-10
DEGENERATE_BAND = 1e-8


class JetKind(Enum):
    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"
    DEGENERATE = "degenerate"


class HandleMove(Enum):
    O_PLUS = "O+"
    I_PLUS = "I+"


@dataclass(frozen=True)
class ImplicitCurve:
    """Zero set of f(x, y) = sum c_ij x^i y^j with complex coefficients.

    The polynomial is used as given; reducedness is the caller's concern.
    """

    coefficients: dict[tuple[int, int], complex]

    def __post_init__(self):
        if not any(abs(c) > 0 for c in self.coefficients.values()):
            raise ValueError("implicit curve needs a nonzero coefficient")
        for c in self.coefficients.values():
            if not np.isfinite(c):
                raise ValueError("non-finite coefficient")
        deg_x = max(i for (i, j), c in self.coefficients.items() if abs(c) > 0)
        deg_y = max(j for (i, j), c in self.coefficients.items() if abs(c) > 0)
        grid = np.zeros((deg_x + 1, deg_y + 1), dtype=complex)
        for (i, j), c in self.coefficients.items():
            grid[i, j] = c
        object.__setattr__(self, "_c", grid)
        object.__setattr__(self, "_cx", npoly.polyder(grid, axis=0))
        object.__setattr__(self, "_cy", npoly.polyder(grid, axis=1))
        object.__setattr__(self, "_cxx", npoly.polyder(grid, 2, axis=0))
        object.__setattr__(self, "_cyy", npoly.polyder(grid, 2, axis=1))
        object.__setattr__(self, "_cxy", npoly.polyder(npoly.polyder(grid, axis=0), axis=1))

    @property
    def degree(self) -> int:
        return max(i + j for (i, j), c in self.coefficients.items() if abs(c) > 0)

    def coeff_norm(self) -> float:
        return float(sum(abs(c) for c in self.coefficients.values()))


@dataclass(frozen=True)
class ParametricCurve:
    """Image of t -> (x(t), y(t)) for univariate complex polynomials."""

    x_coeffs: tuple[complex, ...]
    y_coeffs: tuple[complex, ...]

    def __post_init__(self):
        xs = np.trim_zeros(np.asarray(self.x_coeffs, dtype=complex), "b")
        ys = np.trim_zeros(np.asarray(self.y_coeffs, dtype=complex), "b")
        if len(xs) <= 1 and len(ys) <= 1:
            raise ValueError("parametric curve must not be constant")
        xp = npoly.Polynomial(self.x_coeffs)
        yp = npoly.Polynomial(self.y_coeffs)
        object.__setattr__(self, "_x", xp)
        object.__setattr__(self, "_y", yp)
        object.__setattr__(self, "_xd", xp.deriv())
        object.__setattr__(self, "_yd", yp.deriv())
        object.__setattr__(self, "_xdd", xp.deriv(2))
        object.__setattr__(self, "_ydd", yp.deriv(2))

    def point(self, t: complex) -> tuple[complex, complex]:
        return self._x(t), self._y(t)

    def velocity(self, t: complex) -> tuple[complex, complex]:
        return self._xd(t), self._yd(t)

    def acceleration(self, t: complex) -> tuple[complex, complex]:
        return self._xdd(t), self._ydd(t)

    def dist2(self, t: complex):
        x, y = self._x(t), self._y(t)
        return abs(x) ** 2 + abs(y) ** 2

    def radial_derivative(self, t: complex) -> complex:
        """Wirtinger d/dt of |x|^2 + |y|^2: conj(x) x' + conj(y) y'."""
        return np.conj(self._x(t)) * self._xd(t) + np.conj(self._y(t)) * self._yd(t)

    def coeff_norm(self) -> float:
        return float(sum(abs(c) for c in self.x_coeffs) + sum(abs(c) for c in self.y_coeffs))


CurveModel = ImplicitCurve | ParametricCurve


def evaluate(curve: ImplicitCurve, point: tuple[complex, complex]):
    """Value and first partials (f, fx, fy) at a point."""
    x, y = point
    f = npoly.polyval2d(x, y, curve._c)
    fx = npoly.polyval2d(x, y, curve._cx)
    fy = npoly.polyval2d(x, y, curve._cy)
    return complex(f), complex(fx), complex(fy)


def second_derivatives(curve: ImplicitCurve, point: tuple[complex, complex]):
    x, y = point
    return (
        complex(npoly.polyval2d(x, y, curve._cxx)),
        complex(npoly.polyval2d(x, y, curve._cxy)),
        complex(npoly.polyval2d(x, y, curve._cyy)),
    )


def milnor_gradient(curve: ImplicitCurve, point: tuple[complex, complex]) -> tuple[complex, complex]:
    """Conjugated gradient (conj fx, conj fy); normal to the curve for <.|.>_C."""
    _, fx, fy = evaluate(curve, point)
    return np.conj(fx), np.conj(fy)


def tangency_det(curve: ImplicitCurve, point: tuple[complex, complex]) -> complex:
    """fx * conj(y) - fy * conj(x); zero exactly at sphere-tangency points."""
    x, y = point
    _, fx, fy = evaluate(curve, point)
    return fx * np.conj(y) - fy * np.conj(x)


@dataclass(frozen=True)
class LocalJet:
    """Second-order data of a local parametrization t -> z0 + t(a,b) + t^2(g,d).

    h, k, l are the Hessian entries of the squared-distance function in the
    t-chart: H = [[h+2k, -2l], [-2l, h-2k]].  k and l use the raw coefficients
    (k + i l = conj(x0) gamma + conj(y0) delta); at sphere-tangency points this
    matches Re/Im(beta gamma - alpha delta) after the canonical rescaling of t,
    which `normalized` produces.
    """

    base_point: tuple[complex, complex]
    alpha: complex
    beta: complex
    gamma: complex
    delta: complex

    @property
    def h(self) -> float:
        return abs(self.alpha) ** 2 + abs(self.beta) ** 2

    @property
    def k(self) -> float:
        x0, y0 = self.base_point
        return (np.conj(x0) * self.gamma + np.conj(y0) * self.delta).real

    @property
    def l(self) -> float:
        x0, y0 = self.base_point
        return (np.conj(x0) * self.gamma + np.conj(y0) * self.delta).imag

    def det_hessian(self) -> float:
        return self.h**2 - 4.0 * (self.k**2 + self.l**2)

    def radial_pairing(self) -> complex:
        """conj(x0) alpha + conj(y0) beta; zero exactly at tangency points."""
        x0, y0 = self.base_point
        return np.conj(x0) * self.alpha + np.conj(y0) * self.beta

    def normalized(self) -> "LocalJet":
        """Rescale t so that conj(x0) = beta and conj(y0) = -alpha.

        Only meaningful where the radial pairing vanishes (the rescaling
        exists exactly there); classification quantities are invariant.
        """
        x0, y0 = self.base_point
        lam = np.conj(x0) / self.beta if abs(self.beta) > abs(self.alpha) else -np.conj(y0) / self.alpha
        return LocalJet(
            base_point=self.base_point,
            alpha=lam * self.alpha,
            beta=lam * self.beta,
            gamma=lam * lam * self.gamma,
            delta=lam * lam * self.delta,
        )


def local_jet(curve: CurveModel, at) -> LocalJet:
    """Second-order local parametrization of the curve.

    For a parametric curve ``at`` is the parameter t; for an implicit curve it
    is a point (x, y) on the curve.  Raises SingularPointOfCurve when the
    gradient vanishes.
    """
    if isinstance(curve, ParametricCurve):
        t = at
        x0, y0 = curve.point(t)
        xd, yd = curve.velocity(t)
        xdd, ydd = curve.acceleration(t)
        if abs(xd) == 0 and abs(yd) == 0:
            raise SingularPointOfCurve(f"velocity vanishes at t={t}")
        return LocalJet((x0, y0), xd, yd, xdd / 2.0, ydd / 2.0)

    x0, y0 = at
    f, fx, fy = evaluate(curve, (x0, y0))
    scale = 1.0 + curve.coeff_norm()
    if abs(f) > 1e-6 * scale:
        raise ValueError(f"point not on curve: |f| = {abs(f):.3e}")
    if abs(fx) ** 2 + abs(fy) ** 2 < 1e-24 * scale**2:
        raise SingularPointOfCurve(f"gradient vanishes at {(x0, y0)}")
    fxx, fxy, fyy = second_derivatives(curve, (x0, y0))
    a, b = fx, fy
    c, d, e = fxx / 2.0, fxy, fyy / 2.0
    alpha, beta = b, -a
    # a gamma + b delta = -(c a^2 + d a b + e b^2); gauge: (g,d) Hermitian-
    # orthogonal to (a,b).  The gauge term is invisible at tangency points.
    rhs = -(c * alpha**2 + d * alpha * beta + e * beta**2)
    mat = np.array([[a, b], [np.conj(alpha), np.conj(beta)]], dtype=complex)
    gamma, delta = np.linalg.solve(mat, np.array([rhs, 0.0], dtype=complex))
    return LocalJet((x0, y0), alpha, beta, complex(gamma), complex(delta))


def classify_jet(jet: LocalJet, degenerate_band: float = DEGENERATE_BAND) -> JetKind:
    det = jet.det_hessian()
    if abs(det) < degenerate_band * jet.h**2:
        return JetKind.DEGENERATE
    return JetKind.ELLIPTIC if det > 0 else JetKind.HYPERBOLIC


@dataclass(frozen=True)
class CriticalRadiusRecord:
    point: tuple[complex, complex]
    radius: float
    kind: JetKind
    move: HandleMove | None
    jet: LocalJet
    parameter: complex | None = None  # t for parametric curves
    note: str = ""


def _classify_record(curve: CurveModel, point, parameter) -> CriticalRadiusRecord:
    jet = local_jet(curve, parameter if isinstance(curve, ParametricCurve) else point)
    kind = classify_jet(jet)
    move = {JetKind.ELLIPTIC: HandleMove.O_PLUS, JetKind.HYPERBOLIC: HandleMove.I_PLUS}.get(kind)
    note = "degenerate tangency: perturb the curve" if kind is JetKind.DEGENERATE else ""
    radius = float(np.sqrt(abs(point[0]) ** 2 + abs(point[1]) ** 2))
    return CriticalRadiusRecord(point, radius, kind, move, jet, parameter, note)


def _parametric_domain_bound(curve: ParametricCurve, r_max: float) -> float:
    """Radius T in the t-plane so that |t| > T implies distance > r_max."""
    t_bound = 1.0
    for _ in range(200):
        on_rays = min(
            curve.dist2(t_bound * np.exp(1j * th)) for th in np.linspace(0, 2 * np.pi, 16, endpoint=False)
        )
        if on_rays > (1.5 * r_max) ** 2 and t_bound > 2.0:
            break
        t_bound *= 1.3
    return t_bound


def _critical_radii_parametric(curve: ParametricCurve, r_max: float, grid: int) -> list[CriticalRadiusRecord]:
    t_bound = _parametric_domain_bound(curve, r_max)

    def system(u):
        t = u[0]
        x, y = curve.point(t)
        xd, yd = curve.velocity(t)
        xdd, ydd = curve.acceleration(t)
        val = np.conj(x) * xd + np.conj(y) * yd
        dt = np.conj(x) * xdd + np.conj(y) * ydd
        dtbar = abs(xd) ** 2 + abs(yd) ** 2
        return np.array([val]), [[(dt, dtbar)]]

    roots: list[complex] = []
    axis = np.linspace(-t_bound, t_bound, grid)
    for re in axis:
        for im in axis:
            sol = newton_complex(system, [complex(re, im)])
            if sol is None:
                continue
            t = complex(sol[0])
            if abs(t) > 3 * t_bound:
                continue
            if all(abs(t - s) > 1e-7 * (1 + abs(t)) for s in roots):
                roots.append(t)
    records = []
    for t in roots:
        point = curve.point(t)
        rec = _classify_record(curve, point, t)
        if 1e-9 < rec.radius <= r_max:
            records.append(rec)
    records.sort(key=lambda rec: rec.radius)
    return records


def _implicit_curve_samples(curve: ImplicitCurve, r_max: float, grid: int):
    """Points of {f=0} inside the ball, found by slicing coordinate lines."""
    samples = []
    axis = np.linspace(-1.2 * r_max, 1.2 * r_max, grid)
    c = curve._c
    for swap in (False, True):
        cc = c.T if swap else c
        # cc[i, j]: coefficient of fixed^i * solved^j
        for re in axis:
            for im in axis:
                w = complex(re, im)
                pows = w ** np.arange(cc.shape[0])
                poly = pows @ cc
                poly = np.trim_zeros(poly, "b")
                if len(poly) <= 1:
                    continue
                for root in npoly.polyroots(poly):
                    point = (root, w) if swap else (w, root)
                    if abs(point[0]) ** 2 + abs(point[1]) ** 2 <= (1.4 * r_max) ** 2:
                        samples.append(point)
    return samples


def _critical_radii_implicit(curve: ImplicitCurve, r_max: float, grid: int) -> list[CriticalRadiusRecord]:
    samples = _implicit_curve_samples(curve, r_max, grid)
    if not samples:
        return []
    scale = 1.0 + curve.coeff_norm()
    normalized = []
    for p in samples:
        _, fx, fy = evaluate(curve, p)
        gnorm = np.sqrt(abs(fx) ** 2 + abs(fy) ** 2)
        znorm = np.sqrt(abs(p[0]) ** 2 + abs(p[1]) ** 2)
        if gnorm < 1e-12 * scale or znorm < 1e-12:
            continue
        det = fx * np.conj(p[1]) - fy * np.conj(p[0])
        normalized.append((abs(det) / (gnorm * znorm), p))
    if not normalized:
        return []
    if max(v for v, _ in normalized) < 1e-10:
        raise DegenerateCurve("tangency determinant vanishes along the sampled curve")
    normalized.sort(key=lambda vp: vp[0])
    starts = [p for _, p in normalized[: max(200, grid)]]

    def system(u):
        x, y = u
        f, fx, fy = evaluate(curve, (x, y))
        fxx, fxy, fyy = second_derivatives(curve, (x, y))
        det = fx * np.conj(y) - fy * np.conj(x)
        rows = [
            [(fx, 0.0), (fy, 0.0)],
            [
                (fxx * np.conj(y) - fxy * np.conj(x), -fy),
                (fxy * np.conj(y) - fyy * np.conj(x), fx),
            ],
        ]
        return np.array([f, det]), rows

    roots: list[np.ndarray] = []
    for p in starts:
        sol = newton_complex(system, p)
        if sol is None:
            continue
        if all(np.linalg.norm(sol - q) > 1e-7 * (1 + np.linalg.norm(sol)) for q in roots):
            roots.append(sol)
    records = []
    for z in roots:
        point = (complex(z[0]), complex(z[1]))
        try:
            rec = _classify_record(curve, point, None)
        except SingularPointOfCurve:
            continue
        if 1e-9 < rec.radius <= r_max:
            records.append(rec)
    records.sort(key=lambda rec: rec.radius)
    return records


def critical_radii(curve: CurveModel, r_max: float, grid: int = 41) -> list[CriticalRadiusRecord]:
    """All sphere-tangency points with radius in (0, r_max], classified.

    Multistart damped Newton seeded from a subdivision of the parameter
    domain (parametric) or from coordinate-line slices of the curve
    (implicit).  Records are sorted by radius.
    """
    if r_max <= 0:
        raise ValueError("r_max must be positive")
    if isinstance(curve, ParametricCurve):
        return _critical_radii_parametric(curve, r_max, grid)
    return _critical_radii_implicit(curve, r_max, grid)


def su2_matrix(angles: np.ndarray) -> np.ndarray:
    """SU(2) matrix [[a, b], [-conj b, conj a]] from three angles."""
    th, ph, ps = angles
    a = np.cos(th) * np.exp(1j * ph)
    b = np.sin(th) * np.exp(1j * ps)
    return np.array([[a, b], [-np.conj(b), np.conj(a)]])


def rotate_curve(curve: CurveModel, matrix: np.ndarray) -> CurveModel:
    """Curve whose points are matrix @ (x, y) for points of the input curve."""
    a, b = matrix[0]
    c, d = matrix[1]
    if isinstance(curve, ParametricCurve):
        xs = np.zeros(max(len(curve.x_coeffs), len(curve.y_coeffs)), dtype=complex)
        ys = np.zeros_like(xs)
        xs[: len(curve.x_coeffs)] = curve.x_coeffs
        ys[: len(curve.y_coeffs)] = curve.y_coeffs
        return ParametricCurve(tuple(a * xs + b * ys), tuple(c * xs + d * ys))
    # f'(z) = f(M^-1 z) so that {f'=0} = M {f=0}
    inv = np.linalg.inv(matrix)
    (ia, ib), (ic, id_) = inv
    new: dict[tuple[int, int], complex] = {}
    for (i, j), coef in curve.coefficients.items():
        if abs(coef) == 0:
            continue
        # (ia x + ib y)^i (ic x + id y)^j expanded by convolution
        term = np.zeros((i + j + 1, i + j + 1), dtype=complex)
        base = np.array([[1.0]], dtype=complex)
        first = np.array([[0, ib], [ia, 0]], dtype=complex)  # [x power, y power]
        second = np.array([[0, id_], [ic, 0]], dtype=complex)
        acc = base
        for _ in range(i):
            acc = _poly2_mul(acc, first)
        for _ in range(j):
            acc = _poly2_mul(acc, second)
        term[: acc.shape[0], : acc.shape[1]] = acc * coef
        for (pi, pj), val in np.ndenumerate(term):
            if abs(val) > 0:
                new[(pi, pj)] = new.get((pi, pj), 0.0) + val
    cleaned = {k: v for k, v in new.items() if abs(v) > 1e-15}
    return ImplicitCurve(cleaned)


def _poly2_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1), dtype=complex)
    for (i, j), va in np.ndenumerate(a):
        if abs(va) == 0:
            continue
        out[i : i + b.shape[0], j : j + b.shape[1]] += va * b
    return out


def perturb_curve(curve: CurveModel, rng: np.random.Generator, scale: float = 1e-4) -> CurveModel:
    """Tiny coordinate translation plus constant shift, restoring genericity."""
    shift = scale * (rng.standard_normal(2) + 1j * rng.standard_normal(2))
    if isinstance(curve, ParametricCurve):
        xs = list(curve.x_coeffs)
        ys = list(curve.y_coeffs)
        xs[0] += shift[0]
        ys[0] += shift[1]
        return ParametricCurve(tuple(xs), tuple(ys))
    new = dict(curve.coefficients)
    eps = scale * (rng.standard_normal() + 1j * rng.standard_normal())
    new[(0, 0)] = new.get((0, 0), 0.0) + eps
    translated: dict[tuple[int, int], complex] = {}
    for (i, j), coef in new.items():
        # substitute x -> x + s0, y -> y + s1
        for pi in range(i + 1):
            for pj in range(j + 1):
                val = (
                    coef
                    * _binom(i, pi)
                    * _binom(j, pj)
                    * shift[0] ** (i - pi)
                    * shift[1] ** (j - pj)
                )
                if abs(val) > 0:
                    translated[(pi, pj)] = translated.get((pi, pj), 0.0) + val
    return ImplicitCurve(translated)


def _binom(n: int, k: int) -> int:
    from math import comb

    return comb(n, k)


def load_curve(path: str | Path) -> CurveModel:
    """Read a curve spec file; see README for the JSON schema."""
    data = json.loads(Path(path).read_text())
    return curve_from_dict(data)


def curve_from_dict(data: dict) -> CurveModel:
    kind = data.get("kind")
    if kind == "implicit":
        coeffs = {(int(i), int(j)): complex(re, im) for i, j, re, im in data["coefficients"]}
        return ImplicitCurve(coeffs)
    if kind == "parametric":
        def unpack(rows):
            deg = max(int(k) for k, _, _ in rows) if rows else 0
            out = [0j] * (deg + 1)
            for k, re, im in rows:
                out[int(k)] = complex(re, im)
            return tuple(out)

        return ParametricCurve(unpack(data["x"]), unpack(data["y"]))
    raise ValueError(f"unknown curve kind: {kind!r}")


def curve_to_dict(curve: CurveModel) -> dict:
    if isinstance(curve, ImplicitCurve):
        rows = [[i, j, c.real, c.imag] for (i, j), c in sorted(curve.coefficients.items())]
        return {"kind": "implicit", "coefficients": rows}
    return {
        "kind": "parametric",
        "x": [[k, c.real, c.imag] for k, c in enumerate(curve.x_coeffs)],
        "y": [[k, c.real, c.imag] for k, c in enumerate(curve.y_coeffs)],
    }
