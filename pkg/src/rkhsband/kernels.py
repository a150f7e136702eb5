"""Reproducing kernels, Gram matrices and the tridiagonal H1 Gram inverse.

Two kernels are supported:

* the Paley-Wiener (band-limited) kernel on the real line,
  ``K(x, y) = (eta/pi) sin(eta (x - y)) / (eta (x - y))``, whose RKHS norm is
  the L2(R) norm;
* the Sobolev H1 kernel on [0, 1] for the norm ``int f^2 + int f'^2``,
  ``K(x, y) = ch(min(x, y)) ch(1 - max(x, y)) / sh(1)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg

from .design import DUPLICATE_TOL, Design
from .errors import DegenerateDesign, DomainError, IllConditioned

logger = logging.getLogger(__name__)

PALEY_WIENER = "paley_wiener"
SOBOLEV_H1 = "sobolev_h1"

SH1 = np.sinh(1.0)
COTH1 = np.cosh(1.0) / SH1


@dataclass(frozen=True)
class KernelSpec:
    """Which RKHS: Paley-Wiener with bandwidth ``eta`` or Sobolev H1 on [0, 1]."""

    kind: Literal["paley_wiener", "sobolev_h1"]
    eta: float | None = None

    def __post_init__(self):
        if self.kind == PALEY_WIENER:
            if self.eta is None or not np.isfinite(self.eta) or self.eta <= 0:
                raise ValueError("Paley-Wiener kernel needs a finite eta > 0")
        elif self.kind == SOBOLEV_H1:
            if self.eta is not None:
                raise ValueError("the H1 kernel takes no bandwidth")
        else:
            raise ValueError(f"unknown kernel kind {self.kind!r}")

    @classmethod
    def paley_wiener(cls, eta: float) -> KernelSpec:
        return cls(PALEY_WIENER, float(eta))

    @classmethod
    def sobolev_h1(cls) -> KernelSpec:
        return cls(SOBOLEV_H1)

    @property
    def domain(self) -> tuple[float, float]:
        """Interval carrying the sampling measure (and the H1 kernel)."""
        return (0.0, 1.0)

    def check_domain(self, x: ArrayLike) -> NDArray[np.float64]:
        x = np.asarray(x, dtype=float)
        if not np.all(np.isfinite(x)):
            raise DomainError("kernel arguments must be finite")
        if self.kind == SOBOLEV_H1 and (np.any(x < 0.0) or np.any(x > 1.0)):
            raise DomainError("H1 kernel arguments must lie in [0, 1]")
        return x

    def __call__(self, x: ArrayLike, y: ArrayLike) -> NDArray[np.float64]:
        """Elementwise K(x, y) with numpy broadcasting."""
        x = self.check_domain(x)
        y = self.check_domain(y)
        if self.kind == PALEY_WIENER:
            return _pw(x, y, self.eta)
        return _h1(x, y)

    def matrix(self, x: ArrayLike, y: ArrayLike) -> NDArray[np.float64]:
        """Cross-kernel matrix ``K(x_i, y_j)``."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        y = np.atleast_1d(np.asarray(y, dtype=float))
        return self(x[:, None], y[None, :])

    def diag(self, x: ArrayLike) -> NDArray[np.float64]:
        """K(x, x) for each entry of ``x``."""
        x = self.check_domain(x)
        if self.kind == PALEY_WIENER:
            return np.full(x.shape, self.eta / np.pi)
        return np.cosh(x) * np.cosh(1.0 - x) / SH1

    def sup_diagonal(self, grid: int = 10001) -> float:
        """sup of K(x, x) over the domain, taken on an equispaced grid."""
        return float(np.max(self.diag(np.linspace(0.0, 1.0, grid))))


def _pw(x, y, eta):
    # np.sinc(u) = sin(pi u) / (pi u), with the removable singularity handled
    return (eta / np.pi) * np.sinc(eta * (x - y) / np.pi)


def _h1(x, y):
    return np.cosh(np.minimum(x, y)) * np.cosh(1.0 - np.maximum(x, y)) / SH1


def pw_kernel(x: float, y: float, eta: float) -> float:
    """Paley-Wiener kernel; equals eta/pi on the diagonal."""
    return float(KernelSpec.paley_wiener(eta)(x, y))


def h1_kernel(x: float, y: float) -> float:
    """Sobolev H1 kernel on [0, 1]."""
    return float(KernelSpec.sobolev_h1()(x, y))


@dataclass(frozen=True)
class JitterPolicy:
    """Diagonal loading used when a Gram matrix fails to factorize.

    The loading is ``lam * trace / n``; ``lam`` starts at ``start`` and is
    multiplied by ``factor`` until ``cap``. A zero-jitter attempt comes first.
    """

    start: float = 1e-12
    factor: float = 10.0
    cap: float = 1e-6
    try_exact: bool = True

    def levels(self):
        if self.try_exact:
            yield 0.0
        lam = self.start
        while lam <= self.cap * (1 + 1e-9):
            yield lam
            lam *= self.factor


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric positive definite ``K(X, X)`` plus its Cholesky factor."""

    entries: NDArray[np.float64]
    jitter_applied: float
    chol: NDArray[np.float64] = field(repr=False)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def solve(self, b: ArrayLike) -> NDArray[np.float64]:
        """``K(X, X)^{-1} b`` (b may be a vector or a matrix of columns)."""
        return linalg.cho_solve((self.chol, True), np.asarray(b, dtype=float))

    def half_solve(self, b: ArrayLike) -> NDArray[np.float64]:
        """``L^{-1} b`` where ``K = L L^T``; ``|L^{-1} b|^2 = b^T K^{-1} b``."""
        return linalg.solve_triangular(self.chol, np.asarray(b, dtype=float), lower=True)

    def quad_form(self, b: ArrayLike) -> float:
        v = self.half_solve(b)
        return float(v @ v)


def _points(design: Design | ArrayLike) -> NDArray[np.float64]:
    if isinstance(design, Design):
        return design.raw
    x = np.atleast_1d(np.asarray(design, dtype=float))
    if x.size > 1:
        xs = np.sort(x)
        if np.any(np.diff(xs) < DUPLICATE_TOL):
            raise DegenerateDesign("design contains duplicated points")
    return x


def gram(spec: KernelSpec, design: Design | ArrayLike, jitter_policy: JitterPolicy | None = None) -> GramMatrix:
    """Assemble and factorize the Gram matrix of ``spec`` on ``design``."""
    policy = jitter_policy or JitterPolicy()
    x = _points(design)
    K = spec.matrix(x, x)
    K = 0.5 * (K + K.T)
    n = x.size
    if n == 0:
        return GramMatrix(K, 0.0, np.zeros((0, 0)))
    scale = np.trace(K) / n
    for lam in policy.levels():
        jitter = lam * scale
        Kj = K + jitter * np.eye(n)
        try:
            L = linalg.cholesky(Kj, lower=True)
        except linalg.LinAlgError:
            continue
        if jitter > 0:
            logger.debug("Gram matrix of size %d needed jitter %.3g", n, jitter)
        return GramMatrix(Kj, float(jitter), L)
    raise IllConditioned(f"Gram matrix of size {n} not positive definite with jitter up to {policy.cap:g}*trace/n")


@dataclass(frozen=True)
class TridiagonalInverse:
    """Explicit inverse of the H1 Gram matrix for a strictly sorted design.

    ``alpha`` is the diagonal and ``beta`` the (negative) off-diagonal.
    """

    alpha: NDArray[np.float64]
    beta: NDArray[np.float64]

    @property
    def n(self) -> int:
        return self.alpha.size

    def to_dense(self) -> NDArray[np.float64]:
        return np.diag(self.alpha) + np.diag(self.beta, 1) + np.diag(self.beta, -1)

    def matvec(self, y: ArrayLike) -> NDArray[np.float64]:
        y = np.asarray(y, dtype=float)
        shape = (-1,) + (1,) * (y.ndim - 1)
        a = self.alpha.reshape(shape)
        b = self.beta.reshape(shape)
        out = a * y
        out[:-1] += b * y[1:]
        out[1:] += b * y[:-1]
        return out

    def quad_form(self, y: ArrayLike) -> float:
        y = np.asarray(y, dtype=float)
        return float(self.alpha @ (y * y) + 2.0 * self.beta @ (y[:-1] * y[1:]))


def _coth(u):
    return 1.0 / np.tanh(u)


def h1_gram_inverse_tridiagonal(sorted_design: Design | ArrayLike) -> TridiagonalInverse:
    """Closed-form tridiagonal inverse of the H1 Gram matrix.

    Accepts a `Design` (its sorted view is used) or an explicitly sorted array;
    arrays must be strictly increasing and lie in [0, 1].
    """
    if isinstance(sorted_design, Design):
        x = sorted_design.sorted
    else:
        x = np.atleast_1d(np.asarray(sorted_design, dtype=float))
        if np.any(np.diff(x) <= 0):
            raise ValueError("design must be sorted strictly ascending")
    KernelSpec.sobolev_h1().check_domain(x)
    n = x.size
    if n == 0:
        raise ValueError("empty design")
    if n == 1:
        return TridiagonalInverse(np.array([np.tanh(x[0]) + np.tanh(1.0 - x[0])]), np.empty(0))
    gaps = np.diff(x)
    cg = _coth(gaps)
    alpha = np.empty(n)
    alpha[0] = np.tanh(x[0]) + cg[0]
    alpha[1:-1] = cg[1:] + cg[:-1]
    alpha[-1] = cg[-1] + np.tanh(1.0 - x[-1])
    beta = -1.0 / np.sinh(gaps)
    return TridiagonalInverse(alpha, beta)
