"""Minimal-norm kernel interpolation and the power function.

For a design ``X`` and observations ``f(X)`` the interpolant is
``f_hat(x) = K(x, X) K(X, X)^{-1} f(X)``, and the power function
``C(x) = K(x, x) - K(x, X) K(X, X)^{-1} K(X, x)`` is the squared RKHS distance
between ``K(x, .)`` and the span of the design kernels, so that
``|f(x) - f_hat(x)| <= ||f|| sqrt(C(x))``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .design import Design, as_design
from .kernels import (
    SOBOLEV_H1,
    GramMatrix,
    JitterPolicy,
    KernelSpec,
    TridiagonalInverse,
    gram,
    h1_gram_inverse_tridiagonal,
)

logger = logging.getLogger(__name__)

# above this size H1 solves go through the closed-form tridiagonal inverse
TRIDIAGONAL_MIN_N = 64

Solver = Literal["auto", "dense", "tridiagonal"]


@dataclass(frozen=True)
class Interpolant:
    """Minimal-norm interpolant of ``observations`` on ``design``.

    ``weights`` and ``observations`` follow the order of ``design.raw``.
    """

    spec: KernelSpec
    design: Design
    weights: NDArray[np.float64]
    observations: NDArray[np.float64]
    solver: str
    _gram: GramMatrix | None = field(default=None, repr=False)
    _tri: TridiagonalInverse | None = field(default=None, repr=False)

    def __call__(self, x: ArrayLike) -> NDArray[np.float64]:
        x = np.asarray(x, dtype=float)
        if self.design.n == 0:
            self.spec.check_domain(x)
            return np.zeros(x.shape)
        Kx = self.spec.matrix(x.ravel(), self.design.raw)
        return (Kx @ self.weights).reshape(x.shape)

    def power(self, x: ArrayLike, clip: bool = True) -> NDArray[np.float64]:
        """Power function of the design at ``x`` (see `power_function`)."""
        x = np.asarray(x, dtype=float)
        xf = x.ravel()
        c = self.spec.diag(xf)
        if self.design.n:
            if self._tri is not None:
                Kx = self.spec.matrix(self.design.sorted, xf)
                c = c - np.einsum("ij,ij->j", Kx, self._tri.matvec(Kx))
            else:
                V = self._gram.half_solve(self.spec.matrix(self.design.raw, xf))
                c = c - np.einsum("ij,ij->j", V, V)
        c = c.reshape(x.shape)
        if clip:
            neg = np.minimum(c, 0.0)
            if np.any(neg < 0):
                logger.debug("power function clipped by up to %.3g", -float(neg.min()))
            c = np.maximum(c, 0.0)
        return c


def _solver_for(spec: KernelSpec, n: int, solver: Solver) -> str:
    if solver == "auto":
        return "tridiagonal" if spec.kind == SOBOLEV_H1 and n > TRIDIAGONAL_MIN_N else "dense"
    if solver == "tridiagonal" and spec.kind != SOBOLEV_H1:
        raise ValueError("the tridiagonal solver only applies to the H1 kernel")
    if solver not in ("dense", "tridiagonal"):
        raise ValueError(f"unknown solver {solver!r}")
    return solver


def fit_interpolant(
    spec: KernelSpec,
    design: Design | ArrayLike,
    values: ArrayLike,
    *,
    solver: Solver = "auto",
    jitter_policy: JitterPolicy | None = None,
) -> Interpolant:
    """Fit the minimal-norm interpolant; ``values`` are in sampling order."""
    design = as_design(design)
    y = design.take(values)
    spec.check_domain(design.raw)
    method = _solver_for(spec, design.n, solver)
    if design.n == 0:
        return Interpolant(spec, design, np.zeros(0), y, method)
    if method == "tridiagonal":
        tri = h1_gram_inverse_tridiagonal(design)
        order = design.order
        w = np.empty(design.n)
        w[order] = tri.matvec(y[order])
        return Interpolant(spec, design, w, y, method, _tri=tri)
    G = gram(spec, design, jitter_policy)
    return Interpolant(spec, design, G.solve(y), y, method, _gram=G)


def eval_interpolant(interp: Interpolant, x: ArrayLike) -> NDArray[np.float64]:
    return interp(x)


def _conditioning(spec: KernelSpec, design: Design | ArrayLike, solver: Solver, jitter_policy) -> Interpolant:
    design = as_design(design)
    return fit_interpolant(spec, design, np.zeros(design.n_input), solver=solver, jitter_policy=jitter_policy)


def power_function(
    spec: KernelSpec,
    design: Design | ArrayLike,
    x: ArrayLike,
    *,
    solver: Solver = "auto",
    jitter_policy: JitterPolicy | None = None,
) -> NDArray[np.float64]:
    """``C(x)``, clipped below at zero (round-off can make it slightly negative)."""
    return _conditioning(spec, design, solver, jitter_policy).power(x)


def power_function_unclipped(
    spec: KernelSpec,
    design: Design | ArrayLike,
    x: ArrayLike,
    *,
    solver: Solver = "auto",
    jitter_policy: JitterPolicy | None = None,
) -> NDArray[np.float64]:
    return _conditioning(spec, design, solver, jitter_policy).power(x, clip=False)
