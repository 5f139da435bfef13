"""Small numeric helpers: Wirtinger-calculus Newton steps and dedup utilities.

Maps C^n -> C^n that mix holomorphic and antiholomorphic terms are treated
as real maps R^{2n} -> R^{2n}.  A function reports its Wirtinger derivatives
(dE/du_k, dE/du_k-bar) and the real Jacobian is assembled column by column.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np


def real_jacobian(wirtinger: Sequence[Sequence[tuple[complex, complex]]]) -> np.ndarray:
    """Assemble the real 2m x 2n Jacobian from Wirtinger pairs.

    ``wirtinger[i][k]`` is ``(dE_i/du_k, dE_i/du_k_bar)``.
    Real coordinates are ordered (Re u_0, Im u_0, Re u_1, ...).
    """
    m = len(wirtinger)
    n = len(wirtinger[0])
    jac = np.empty((2 * m, 2 * n))
    for i, row in enumerate(wirtinger):
        for k, (a, b) in enumerate(row):
            # delta u_k = p + i q  ->  delta E_i = (a + b) p + i (a - b) q
            jac[2 * i, 2 * k] = (a + b).real
            jac[2 * i + 1, 2 * k] = (a + b).imag
            jac[2 * i, 2 * k + 1] = (1j * (a - b)).real
            jac[2 * i + 1, 2 * k + 1] = (1j * (a - b)).imag
    return jac


def newton_complex(
    func: Callable[[np.ndarray], tuple[np.ndarray, list[list[tuple[complex, complex]]]]],
    start: Sequence[complex],
    tol: float = 1e-12,
    max_iter: int = 80,
) -> np.ndarray | None:
    """Damped Newton for a square system of complex equations.

    ``func(u)`` returns (values, wirtinger rows).  Returns the root or None.
    """
    u = np.asarray(start, dtype=complex)
    vals, rows = func(u)
    res = np.linalg.norm(vals)
    for _ in range(max_iter):
        if res < tol:
            return u
        jac = real_jacobian(rows)
        rhs = np.empty(2 * len(vals))
        rhs[0::2] = -vals.real
        rhs[1::2] = -vals.imag
        try:
            step = np.linalg.solve(jac, rhs)
        except np.linalg.LinAlgError:
            return None
        du = step[0::2] + 1j * step[1::2]
        lam = 1.0
        while lam > 1e-6:
            cand = u + lam * du
            cvals, crows = func(cand)
            cres = np.linalg.norm(cvals)
            if cres < res or cres < tol:
                u, vals, rows, res = cand, cvals, crows, cres
                break
            lam *= 0.5
        else:
            return None
        if np.linalg.norm(lam * du) < 1e-15 * (1.0 + np.linalg.norm(u)):
            break
    return u if res < max(tol, 1e-10) else None


def dedup_points(points: list[np.ndarray], radius: float) -> list[np.ndarray]:
    """Drop points closer than ``radius`` to an earlier point."""
    kept: list[np.ndarray] = []
    for p in points:
        if all(np.linalg.norm(p - q) > radius for q in kept):
            kept.append(p)
    return kept
