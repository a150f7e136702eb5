"""High-probability upper bounds ``z_alpha`` on the RKHS norm.

Each certificate satisfies ``P(||f|| <= z_alpha) >= 1 - alpha`` under its
assumptions. All functions here are deterministic in their inputs; the
thresholds are taken at the boundary of the admissible range, which is where
the bound is tightest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import InfeasibleBound
from .kernels import KernelSpec
from .norm_est import h1_mc_norm_sq_with_der, l2_mc_norm_sq
from .poincare import (
    BiasModel,
    Eigenpair,
    RegularityModel,
    SupNormPair,
    coef_upper_bound,
    eigenvalue,
    helltilde_upper_bound,
    sup_norm_bounds_from_regularity,
)

BoundMethod = Literal["PaleyWienerL2", "H1WithDerivatives", "Agnostic", "Regular"]

# relative slack when checking observed values against a declared range
_RANGE_RTOL = 1e-9


@dataclass(frozen=True)
class NormBound:
    """A ``z_alpha`` certificate and the pieces it was assembled from.

    ``z_alpha`` is None when the bound is infeasible for the given inputs.
    """

    method: BoundMethod
    alpha: float
    estimate: float
    threshold_t: float
    z_alpha: float | None
    feasible: bool = True
    bias_terms: dict = field(default_factory=dict)


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")


def hoeffding_threshold(n: int, alpha: float, range_: float) -> float:
    """Deviation ``t`` with ``exp(-2 n t^2 / range^2) = alpha`` for a mean of
    ``n`` independent variables with range ``range_``."""
    _check_alpha(alpha)
    if n < 1:
        raise ValueError("n must be at least 1")
    return range_ * math.sqrt(-math.log(alpha) / (2.0 * n))


def ustat_hoeffding_threshold(n: int, alpha: float, range_: float) -> float:
    """Same as `hoeffding_threshold` for an order-2 U-statistic, which
    behaves like a mean of ``floor(n/2)`` independent terms."""
    _check_alpha(alpha)
    if n < 2:
        raise ValueError("a U-statistic of order 2 needs n >= 2")
    return range_ * math.sqrt(-math.log(alpha) / (2.0 * (n // 2)))


def pw_norm_bound(
    values: ArrayLike,
    C1: float,
    delta0: float,
    alpha: float,
    hoeffding_range: Literal["squared", "linear"] = "squared",
) -> NormBound:
    """Paley-Wiener bound from the empirical mean of ``f(X_j)^2``.

    ``C1`` bounds ``|f|`` on [0, 1] and ``delta0`` bounds the L2 mass of f
    outside [0, 1]. The squared values lie in ``[0, C1^2]``, so the Hoeffding
    range is ``C1^2``; ``hoeffding_range="linear"`` uses ``C1`` instead, which
    is only guaranteed when ``C1 <= 1``.
    """
    _check_alpha(alpha)
    v = np.atleast_1d(np.asarray(values, dtype=float))
    if np.any(np.abs(v) > C1 * (1 + _RANGE_RTOL)):
        raise ValueError(f"observed |f| = {np.max(np.abs(v)):.6g} exceeds C1 = {C1:.6g}")
    if delta0 < 0:
        raise ValueError("delta0 must be nonnegative")
    if hoeffding_range == "squared":
        span = C1 * C1
    elif hoeffding_range == "linear":
        span = C1
    else:
        raise ValueError(f"unknown hoeffding_range {hoeffding_range!r}")
    est = l2_mc_norm_sq(v).value
    t = hoeffding_threshold(v.size, alpha, span)
    z = math.sqrt(est + t + delta0)
    return NormBound("PaleyWienerL2", alpha, est, t, z, True, {"delta0": delta0, "range": span})


def h1_norm_bound_with_der(values: ArrayLike, ders: ArrayLike, b: float, alpha: float) -> NormBound:
    """H1 bound from function and derivative observations, with
    ``f^2 + f'^2 <= b`` on the support of the design."""
    _check_alpha(alpha)
    v = np.atleast_1d(np.asarray(values, dtype=float))
    d = np.atleast_1d(np.asarray(ders, dtype=float))
    if np.any(v * v + d * d > b * (1 + _RANGE_RTOL)):
        raise ValueError(f"observed f^2 + f'^2 = {np.max(v * v + d * d):.6g} exceeds b = {b:.6g}")
    est = h1_mc_norm_sq_with_der(v, d).value
    t = hoeffding_threshold(v.size, alpha, b)
    return NormBound("H1WithDerivatives", alpha, est, t, math.sqrt(est + t), True, {"b": b})


def bias_complement(N: int, bias: BiasModel) -> float:
    """``1 - bias_zeta(N)``: certified fraction of the squared norm captured
    by the first N+1 spectral terms."""
    z = bias.bias_zeta(N)
    if z >= 1.0:
        raise InfeasibleBound(f"bias_zeta({N}) = {z:.4g} >= 1")
    return 1.0 - z


def default_k_inf(use_csch: bool = False) -> float:
    """sup of the H1 kernel diagonal (coth 1); ``use_csch`` gives the smaller 1/sh(1)."""
    if use_csch:
        return 1.0 / math.sinh(1.0)
    return KernelSpec.sobolev_h1().sup_diagonal()


def agnostic_range(N: int, K_inf: float) -> float:
    """``c = 2 K_inf sum_{l<=N} (1+lambda_l) ||phi_l||_inf^2``."""
    w = [(1.0 + Eigenpair(ell).lam) * Eigenpair(ell).phi_sup ** 2 for ell in range(N + 1)]
    return 2.0 * K_inf * math.fsum(w)


def agnostic_min_sample_size(N: int, alpha: float, bias: BiasModel, K_inf: float | None = None) -> int:
    """Smallest even ``n`` for which the agnostic threshold is below ``zeta_bar_N``."""
    _check_alpha(alpha)
    K_inf = default_k_inf() if K_inf is None else K_inf
    zb = bias.zeta_bar(N)
    if zb <= 0:
        raise InfeasibleBound(f"zeta_bar({N}) = {zb:.4g} <= 0")
    c = agnostic_range(N, K_inf)
    ratio = -math.log(alpha) * c * c / (zb * zb)
    return 2 * (math.floor(ratio / 2.0) + 1)


def agnostic_norm_bound(
    s_hat: float,
    n: int,
    N: int,
    bias: BiasModel,
    alpha: float,
    K_inf: float | None = None,
) -> NormBound:
    """Bound assuming only the remainder model; usable for large n only.

    Infeasible (``z_alpha`` None) when the U-statistic threshold ``t`` does not
    fall below ``zeta_bar_N``.
    """
    K_inf = default_k_inf() if K_inf is None else K_inf
    c = agnostic_range(N, K_inf)
    t = ustat_hoeffding_threshold(n, alpha, c)
    zb = bias.zeta_bar(N)
    terms = {"zeta_bar": zb, "c": c, "K_inf": K_inf}
    if not t < zb:
        return NormBound("Agnostic", alpha, s_hat, t, None, False, terms)
    z = math.sqrt(max(s_hat, 0.0) / (zb - t))
    return NormBound("Agnostic", alpha, s_hat, t, z, True, terms)


@dataclass(frozen=True)
class WBoundComponents:
    """Range bound ``s_ub`` and mean bound ``delta_ub`` of the first-order
    terms ``W_j`` of the spectral U-statistic, with per-term ingredients."""

    s_ub: float
    delta_ub: float
    f_sup: float
    df_sup: float
    c_ub: NDArray[np.float64]
    helltilde_ub: NDArray[np.float64]


def w_bound_components(
    n: int,
    N: int,
    model: RegularityModel,
    coef_mode: Literal["regularity", "min"] = "regularity",
) -> WBoundComponents:
    """``s_ub`` and ``delta_ub`` from the decay model.

    ``coef_mode="min"`` also caps each ``c_l`` bound by the sup-norm bound
    ``min(||f||, ||f'|| / sqrt(lambda_l))``.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    f_sup, df_sup = sup_norm_bounds_from_regularity(model)
    ells = range(N + 1)
    c_ub = np.array([coef_upper_bound(ell, model) for ell in ells])
    if coef_mode == "min":
        sup = SupNormPair(f_sup, df_sup)
        c_ub = np.minimum(c_ub, [coef_upper_bound(ell, sup) for ell in ells])
    elif coef_mode != "regularity":
        raise ValueError(f"unknown coef_mode {coef_mode!r}")
    h_ub = np.array([helltilde_upper_bound(ell, f_sup, df_sup, c) for ell, c in zip(ells, c_ub)])
    weight = 1.0 + eigenvalue(np.arange(N + 1))
    s_ub = 4.0 * np.sum(weight * c_ub * h_ub) + 2.0 / (n - 1) * np.sum(weight * h_ub**2)
    delta_ub = 2.0 * f_sup**2 / (n - 1) * np.sum(weight)
    return WBoundComponents(float(s_ub), float(delta_ub), f_sup, df_sup, c_ub, h_ub)


def regular_norm_bound(
    s_hat: float,
    n: int,
    N: int,
    model: RegularityModel,
    bias: BiasModel,
    alpha: float,
    coef_mode: Literal["regularity", "min"] = "regularity",
) -> NormBound:
    """Bound under coefficient decay and the remainder model:
    ``z^2 = max(S_hat + t + delta_ub, 0) / zeta_bar_N``."""
    _check_alpha(alpha)
    comp = w_bound_components(n, N, model, coef_mode)
    t = hoeffding_threshold(n, alpha, comp.s_ub)
    zb = bias.zeta_bar(N)
    terms = {"delta_ub": comp.delta_ub, "s_ub": comp.s_ub, "zeta_bar": zb}
    if zb <= 0:
        return NormBound("Regular", alpha, s_hat, t, None, False, terms)
    z = math.sqrt(max(s_hat + t + comp.delta_ub, 0.0) / zb)
    return NormBound("Regular", alpha, s_hat, t, z, True, terms)


def best_truncation(bound_for: Callable[[int], NormBound], N_max: int) -> tuple[int, NormBound]:
    """Truncation order in 1..N_max with the smallest feasible ``z_alpha``
    (earliest on ties)."""
    if N_max < 1:
        raise ValueError("N_max must be at least 1")
    best: tuple[int, NormBound] | None = None
    for N in range(1, N_max + 1):
        b = bound_for(N)
        if not b.feasible:
            continue
        if best is None or b.z_alpha < best[1].z_alpha:
            best = (N, b)
    if best is None:
        raise InfeasibleBound(f"no feasible truncation order in 1..{N_max}")
    return best


def sum_of_squares_ustat_decomposition(g: ArrayLike, mu: ArrayLike) -> dict[str, object]:
    """Split ``U = (2/(n(n-1))) sum_l sum_{j<j'} g_l(X_j) g_l(X_j')`` as
    ``U = theta + mean(W) + Delta`` with ``theta = sum_l mu_l^2``.

    ``g`` holds ``g_l(X_j)`` with shape (L, n) and ``mu`` the true means.
    ``Delta`` is nonnegative for any sample.
    """
    g = np.atleast_2d(np.asarray(g, dtype=float))
    mu = np.asarray(mu, dtype=float).reshape(-1, 1)
    n = g.shape[1]
    if n < 2:
        raise ValueError("need n >= 2")
    s = g.sum(axis=1)
    U = float(np.sum(s * s - np.sum(g * g, axis=1)) / (n * (n - 1)))
    theta = float(np.sum(mu * mu))
    d = g - mu
    W = 2.0 * np.sum(mu * d - d * d / (n - 1), axis=0)
    return {"U": U, "theta": theta, "W": W, "Delta": U - theta - float(np.mean(W))}
