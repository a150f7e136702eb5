"""Poincare (Neumann cosine) basis of H1(0, 1) and the spectral norm estimator.

The basis ``phi_0 = 1``, ``phi_l(x) = sqrt(2) cos(pi l x)`` is orthonormal in
L2(0, 1) and orthogonal in H1, with ``||phi_l||_{H1}^2 = 1 + lambda_l`` and
``lambda_l = (pi l)^2``. Hence ``||f||_{H1}^2 = sum_l (1 + lambda_l) c_l^2``
with ``c_l = <f, phi_l>``. The truncated sum is estimated without bias by a
second-order U-statistic.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import integrate

from .design import Design, as_design
from .errors import QuadratureError
from .kernels import KernelSpec

SQRT2 = math.sqrt(2.0)


def eigenvalue(ell: int | ArrayLike) -> NDArray[np.float64] | float:
    ell = np.asarray(ell, dtype=float)
    return (np.pi * ell) ** 2


@dataclass(frozen=True)
class Eigenpair:
    index: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("eigen-index must be nonnegative")

    @property
    def lam(self) -> float:
        return (math.pi * self.index) ** 2

    @property
    def phi_sup(self) -> float:
        return 1.0 if self.index == 0 else SQRT2

    @property
    def dphi_sup(self) -> float:
        return SQRT2 * math.pi * self.index

    def phi(self, x: ArrayLike) -> NDArray[np.float64]:
        x = np.asarray(x, dtype=float)
        if self.index == 0:
            return np.ones_like(x)
        return SQRT2 * np.cos(math.pi * self.index * x)

    def dphi(self, x: ArrayLike) -> NDArray[np.float64]:
        x = np.asarray(x, dtype=float)
        return -SQRT2 * math.pi * self.index * np.sin(math.pi * self.index * x)


def eigenpair(ell: int) -> Eigenpair:
    return Eigenpair(int(ell))


def basis_matrix(x: ArrayLike, N: int) -> NDArray[np.float64]:
    """``phi_l(x_j)`` for l = 0..N as an (N+1, len(x)) array."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    ell = np.arange(N + 1)[:, None]
    out = SQRT2 * np.cos(np.pi * ell * x[None, :])
    out[0] = 1.0
    return out


def basis_derivative_matrix(x: ArrayLike, N: int) -> NDArray[np.float64]:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    ell = np.arange(N + 1)[:, None]
    return -SQRT2 * np.pi * ell * np.sin(np.pi * ell * x[None, :])


@dataclass(frozen=True)
class SpectralEstimate:
    """U-statistic estimate of the truncated series ``sum_{l<=N} (1+lambda_l) c_l^2``.

    ``per_ell[l]`` is the unbiased estimate of ``c_l^2``.
    """

    N: int
    per_ell: NDArray[np.float64]
    n: int

    @property
    def value(self) -> float:
        return float(np.sum((1.0 + eigenvalue(np.arange(self.N + 1))) * self.per_ell))


def spectral_ustat(design: Design | ArrayLike, values: ArrayLike, N: int, *, pairwise: bool = False) -> SpectralEstimate:
    """Spectral U-statistic from function values at a uniform sample.

    The default path uses ``sum_{j<j'} a_j a_j' = ((sum a)^2 - sum a^2) / 2``;
    ``pairwise=True`` evaluates the double sum directly (O(n^2 N), for checks).
    """
    if N < 0:
        raise ValueError("truncation order must be nonnegative")
    design = as_design(design)
    n = design.n
    if n < 2:
        raise ValueError("the U-statistic needs at least two sample points")
    x = KernelSpec.sobolev_h1().check_domain(design.raw)
    h = basis_matrix(x, N) * design.take(values)[None, :]
    if pairwise:
        iu = np.triu_indices(n, k=1)
        T = np.array([np.sum(np.outer(row, row)[iu]) for row in h]) * 2.0 / (n * (n - 1))
    else:
        s = h.sum(axis=1)
        T = (s * s - np.sum(h * h, axis=1)) / (n * (n - 1))
    return SpectralEstimate(int(N), T, n)


def h1_norm_sq_from_coefficients(coef: ArrayLike) -> float:
    c = np.asarray(coef, dtype=float)
    return float(np.sum((1.0 + eigenvalue(np.arange(c.size))) * c * c))


def coefficients_quadrature(f: Callable[[float], float], L: int, epsabs: float = 1e-10) -> NDArray[np.float64]:
    """``c_l = int_0^1 f phi_l`` for l = 0..L by adaptive Gauss-Kronrod.

    Each integrand is split at the zeros of ``cos(pi l x)``.
    """
    out = np.empty(L + 1)
    for ell in range(L + 1):
        pair = Eigenpair(ell)
        breaks = (np.arange(ell) + 0.5) / ell if ell else None
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, err, info = integrate.quad(
                lambda t: f(t) * pair.phi(t),
                0.0,
                1.0,
                points=breaks,
                epsabs=epsabs,
                epsrel=0.0,
                limit=200 + 4 * ell,
                full_output=True,
            )[:3]
        if err > epsabs:
            raise QuadratureError(f"coefficient {ell}: estimated error {err:.2e} above {epsabs:.1e}")
        out[ell] = val
    return out


def riemann_zeta(s: float) -> float:
    """Riemann zeta for real ``s > 1`` by Euler-Maclaurin summation.

    A partial sum up to M-1 plus the integral tail ``M^{1-s}/(s-1)``, the
    half end term and three Bernoulli corrections; the neglected term is
    below 1e-15 for s > 1 with M = 64.
    """
    if not s > 1.0:
        raise ValueError("zeta(s) diverges for s <= 1")
    M = 64
    k = np.arange(1, M, dtype=float)
    head = math.fsum(k ** (-s))
    tail = M ** (1.0 - s) / (s - 1.0) + 0.5 * M ** (-s)
    # B2/2!, B4/4!, B6/6! times rising factorials of s
    coefs = (1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0)
    rising = s
    for j, c in enumerate(coefs):
        tail += c * rising * M ** (-s - 2 * j - 1)
        rising *= (s + 2 * j + 1) * (s + 2 * j + 2)
    return head + tail


@dataclass(frozen=True)
class RegularityModel:
    """Coefficient decay ``|c_l| <= A lambda_l^{-p}`` for l >= 1.

    ``centered`` means ``c_0 = 0`` is assumed.
    """

    A: float
    p: float
    centered: bool = True

    def __post_init__(self):
        if self.A < 0:
            raise ValueError("A must be nonnegative")
        if not self.p > 1:
            raise ValueError("the decay exponent p must exceed 1")

    @classmethod
    def unit_sup_norm(cls, p: float, centered: bool = True) -> RegularityModel:
        """The model whose sup-norm bound on f equals 1."""
        return cls(1.0 / (SQRT2 * riemann_zeta(2 * p) / math.pi ** (2 * p)), p, centered)


@dataclass(frozen=True)
class BiasModel:
    """Relative remainder ``R_N(f) <= bias_zeta(N) ||f||^2`` with
    ``bias_zeta(N) = beta (N+1)^{-q}``."""

    beta: float
    q: float

    def __post_init__(self):
        if self.beta < 0 or self.q <= 0:
            raise ValueError("need beta >= 0 and q > 0")

    @classmethod
    def half_at_one(cls, q: float) -> BiasModel:
        """``beta = 2^{q-1}``, so that ``bias_zeta(1) = 1/2``."""
        return cls(2.0 ** (q - 1.0), q)

    def bias_zeta(self, N: int) -> float:
        return self.beta * (N + 1.0) ** (-self.q)

    def zeta_bar(self, N: int) -> float:
        return 1.0 - self.bias_zeta(N)


@dataclass(frozen=True)
class SupNormPair:
    """Known bounds on ``||f||_inf``, ``||f'||_inf`` and optionally ``||f''||_inf``."""

    f_sup: float
    df_sup: float
    d2f_sup: float | None = None


def sup_norm_bounds_from_regularity(model: RegularityModel) -> tuple[float, float]:
    """Bounds on ``||f||_inf`` and ``||f'||_inf`` implied by the decay model.

    They cover ``sum_{l>=1} c_l phi_l``; a non-centered function adds ``|c_0|``
    to the first bound.
    """
    A, p = model.A, model.p
    f_sup = A * SQRT2 * riemann_zeta(2 * p) / math.pi ** (2 * p)
    df_sup = A * SQRT2 * riemann_zeta(2 * p - 1) / math.pi ** (2 * p - 1)
    return f_sup, df_sup


def coef_upper_bound(ell: int, model: RegularityModel | SupNormPair) -> float:
    """Upper bound on ``|c_l|``.

    With a `RegularityModel` this is ``A lambda_l^{-p}`` (for l = 0: zero if
    centered, else the sup-norm bound). With a `SupNormPair` it is
    ``min(||f||, ||f'|| / sqrt(lambda))`` and, when ``d2f_sup`` is known,
    also ``(2 sqrt 2 ||f'|| + ||f''||) / lambda``.
    """
    if ell < 0:
        raise ValueError("eigen-index must be nonnegative")
    lam = (math.pi * ell) ** 2
    if isinstance(model, RegularityModel):
        if ell == 0:
            return 0.0 if model.centered else sup_norm_bounds_from_regularity(model)[0]
        return model.A * lam ** (-model.p)
    if ell == 0:
        return model.f_sup
    bound = min(model.f_sup, model.df_sup / math.sqrt(lam))
    if model.d2f_sup is not None:
        bound = min(bound, (2 * SQRT2 * model.df_sup + model.d2f_sup) / lam)
    return bound


def helltilde_upper_bound(ell: int, f_sup: float, df_sup: float, c_ub: float) -> float:
    """Bound on ``||f phi_l - c_l||_inf``: the smaller of the direct bound and
    the Lipschitz bound (the centered function vanishes somewhere)."""
    pair = Eigenpair(ell)
    direct = f_sup * pair.phi_sup + c_ub
    lipschitz = f_sup * pair.dphi_sup + df_sup * pair.phi_sup
    return min(direct, lipschitz)


def variance_upper_bound(f_sup: float) -> float:
    """``Var(f phi_l) <= E[f^2 phi_l^2] <= ||f||_inf^2``, uniformly in l."""
    if f_sup < 0:
        raise ValueError("f_sup must be nonnegative")
    return f_sup * f_sup
