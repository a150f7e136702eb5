from __future__ import annotations

from typing import Callable

import numpy as np
from scipy import optimize


def grid_maximize(
    fun: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    grid: int = 2001,
    xatol: float = 1e-10,
) -> tuple[float, float]:
    """Global maximum of a vectorized ``fun`` on [a, b].

    Evaluates an equispaced grid, then refines every grid-local maximum by a
    bounded Brent search over its two neighbouring cells. A plateau counts
    as one local maximum, at its left end.
    """
    xs = np.linspace(a, b, grid)
    ms = np.asarray(fun(xs), dtype=float)
    padded = np.concatenate(([-np.inf], ms, [-np.inf]))
    peaks = np.flatnonzero((padded[1:-1] > padded[:-2]) & (padded[1:-1] >= padded[2:]))
    k = int(np.argmax(ms))
    best_x, best_m = float(xs[k]), float(ms[k])
    for i in peaks:
        lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, grid - 1)]
        res = optimize.minimize_scalar(
            lambda u: -float(np.asarray(fun(np.array([u])), dtype=float)[0]),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": xatol},
        )
        if -res.fun > best_m:
            best_x, best_m = float(res.x), float(-res.fun)
    return best_x, best_m
