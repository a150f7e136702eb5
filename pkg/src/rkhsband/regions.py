"""Global confidence bands ``f_hat(x) +/- z_alpha sqrt(C(x))`` and coverage checks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ._optim import grid_maximize
from .design import Design
from .interpolate import Interpolant, fit_interpolant
from .kernels import KernelSpec
from .rng import uniform_design

# margins are squared errors; this absorbs interpolation round-off at the design
MARGIN_ATOL = 1e-12


@dataclass(frozen=True)
class RegionBand:
    interpolant: Interpolant
    z_alpha: float

    def __post_init__(self):
        if not self.z_alpha >= 0:
            raise ValueError("z_alpha must be nonnegative")

    def half_width(self, x: ArrayLike) -> NDArray[np.float64]:
        c = self.interpolant.power(x)
        if math.isinf(self.z_alpha):
            return np.where(c > 0, np.inf, 0.0)
        return self.z_alpha * np.sqrt(c)


def band_at(region: RegionBand, x: ArrayLike) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Lower and upper band edges at ``x``."""
    center = region.interpolant(x)
    hw = region.half_width(x)
    return center - hw, center + hw


@dataclass(frozen=True)
class Containment:
    contained: bool
    margin: float
    argmax: float


def contains_function(
    region: RegionBand,
    g: Callable[[NDArray[np.float64]], NDArray[np.float64]],
    grid: int = 2001,
    domain: tuple[float, float] | None = None,
    atol: float = MARGIN_ATOL,
) -> Containment:
    """Whether ``g`` stays inside the band on ``domain``.

    Maximizes ``m(x) = (g(x) - f_hat(x))^2 - z^2 C(x)`` on an equispaced grid
    and refines every grid-local maximum with a bounded Brent search over its
    two neighbouring cells. ``margin`` is the largest value found; the function
    is contained when ``margin <= atol``.
    """
    if grid < 2:
        raise ValueError("grid must have at least two points")
    interp = region.interpolant
    a, b = domain or interp.spec.domain
    if math.isinf(region.z_alpha):
        return Containment(True, -math.inf, float("nan"))
    z2 = region.z_alpha**2

    def m(x):
        x = np.asarray(x, dtype=float)
        return (np.asarray(g(x), dtype=float) - interp(x)) ** 2 - z2 * interp.power(x)

    best_x, best_m = grid_maximize(m, a, b, grid)
    return Containment(best_m <= atol, best_m, best_x)


Certifier = Callable[[NDArray[np.float64], NDArray[np.float64]], float]


def empirical_coverage(
    f: Callable[[NDArray[np.float64]], NDArray[np.float64]],
    norm: float,
    spec: KernelSpec,
    certify: Certifier,
    n: int,
    replicates: int,
    seed: int,
    event: Literal["norm", "region"] = "norm",
    grid: int = 2001,
) -> float:
    """Fraction of seeded replicates where the event holds.

    Each replicate draws ``n`` uniform design points from its own stream,
    observes ``f`` and calls ``certify(x, f(x))`` for ``z_alpha``. The norm
    event is ``norm <= z_alpha``; the region event is `contains_function`.
    """
    if replicates < 1:
        raise ValueError("replicates must be at least 1")
    hits = 0
    for r in range(replicates):
        x = uniform_design(seed, r, n)
        y = np.asarray(f(x), dtype=float)
        z = certify(x, y)
        if event == "norm":
            hits += norm <= z
        elif event == "region":
            region = RegionBand(fit_interpolant(spec, Design.from_points(x), y), z)
            hits += contains_function(region, f, grid).contained
        else:
            raise ValueError(f"unknown event {event!r}")
    return hits / replicates
