"""Point estimators of the squared RKHS norm.

These are diagnostics: none of them comes with a concentration guarantee, so
they never feed a `NormBound` (see `rkhsband.bounds` for the certified ones).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike

from .design import Design, as_design
from .kernels import JitterPolicy, KernelSpec, gram

Method = Literal["L2MC", "H1WithDer", "H1FiniteDiff", "GramProjection", "H1Explicit"]


@dataclass(frozen=True)
class NormEstimate:
    value: float
    method: Method
    n: int


def _vector(values: ArrayLike, name: str = "values") -> np.ndarray:
    v = np.atleast_1d(np.asarray(values, dtype=float))
    if v.ndim != 1 or v.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-d sequence")
    return v


def l2_mc_norm_sq(values: ArrayLike) -> NormEstimate:
    """Empirical mean of ``f(X_j)^2``."""
    v = _vector(values)
    return NormEstimate(float(np.mean(v * v)), "L2MC", v.size)


def h1_mc_norm_sq_with_der(values: ArrayLike, ders: ArrayLike) -> NormEstimate:
    """Monte-Carlo H1 norm from function and derivative values."""
    v = _vector(values)
    d = _vector(ders, "ders")
    if v.shape != d.shape:
        raise ValueError("values and ders must have the same length")
    return NormEstimate(float(np.mean(v * v) + np.mean(d * d)), "H1WithDer", v.size)


def h1_fd_norm_sq(design: Design | ArrayLike, values: ArrayLike) -> NormEstimate:
    """Finite-difference H1 estimator.

    Derivatives are replaced by ``n (f(X_(i)) - f(X_(i-1)))``, i.e. the
    spacing of the sorted uniform sample is taken to be ``1/n``.
    """
    design = as_design(design)
    if design.n < 2:
        raise ValueError("need at least two distinct design points")
    y = design.sorted_values(values)
    n = y.size
    value = np.mean(y * y) + n * np.sum(np.diff(y) ** 2)
    return NormEstimate(float(value), "H1FiniteDiff", n)


def projection_norm_sq_gram(
    spec: KernelSpec,
    design: Design | ArrayLike,
    values: ArrayLike,
    jitter_policy: JitterPolicy | None = None,
) -> NormEstimate:
    """``f(X)^T K(X, X)^{-1} f(X)``: squared norm of the projection of f onto
    the span of the design kernels. Never exceeds the true squared norm."""
    design = as_design(design)
    y = design.take(values)
    G = gram(spec, design, jitter_policy)
    return NormEstimate(max(G.quad_form(y), 0.0), "GramProjection", design.n)


def h1_projection_norm_sq_explicit(design: Design | ArrayLike, values: ArrayLike) -> NormEstimate:
    """Closed form of the H1 projection norm for a sorted design.

    Uses the mirrored end points ``x_0 = -x_1`` and ``x_{n+1} = 2 - x_n``.
    """
    design = as_design(design)
    if design.n == 0:
        raise ValueError("empty design")
    x = design.sorted
    KernelSpec.sobolev_h1().check_domain(x)
    y = design.sorted_values(values)
    ext = np.concatenate(([design.ghost_left], x, [design.ghost_right]))
    half_gaps = np.tanh(np.diff(ext) / 2.0)
    weights = half_gaps[1:] + half_gaps[:-1]
    gaps = np.diff(x)
    value = weights @ (y * y) + np.sum(np.diff(y) ** 2 / np.sinh(gaps))
    return NormEstimate(float(value), "H1Explicit", design.n)
