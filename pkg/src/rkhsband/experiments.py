"""Seeded test functions and the coverage / truncation-table experiments.

Every experiment is a pure function of its `ExperimentConfig`: test-function
coefficients and each replicate's design come from separate Philox streams
keyed by the master seed (see `rkhsband.rng`).
"""

from __future__ import annotations

import csv
import dataclasses
import io
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Literal, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import integrate

from ._optim import grid_maximize
from .bounds import (
    NormBound,
    best_truncation,
    h1_norm_bound_with_der,
    pw_norm_bound,
    regular_norm_bound,
)
from .design import Design
from .interpolate import fit_interpolant
from .kernels import KernelSpec
from .poincare import (
    BiasModel,
    RegularityModel,
    basis_derivative_matrix,
    basis_matrix,
    coef_upper_bound,
    eigenvalue,
    spectral_ustat,
)
from .regions import RegionBand, contains_function
from .rng import stream, uniform_design

SUP_GRID = 20001

Experiment = Literal["pw-coverage", "pw-region", "h1-der-coverage", "h1-der-region", "h1-table"]


@dataclass(frozen=True)
class TestFunction:
    """A test function with its exact RKHS norm and sup-norm information.

    ``extras`` holds the kind-specific constants: ``C1`` and ``delta0`` for the
    Paley-Wiener mixture, ``b = max(f^2 + f'^2)`` for the cosine expansion.
    """

    __test__ = False  # not a pytest class

    kind: Literal["PWMixture", "PoincareExpansion"]
    weights: NDArray[np.float64]
    exact_norm_sq: float
    f_sup: float
    df_sup: float
    centers: NDArray[np.float64] | None = None
    eta: float | None = None
    extras: dict = field(default_factory=dict)

    @property
    def norm(self) -> float:
        return math.sqrt(self.exact_norm_sq)

    @property
    def spec(self) -> KernelSpec:
        if self.kind == "PWMixture":
            return KernelSpec.paley_wiener(self.eta)
        return KernelSpec.sobolev_h1()

    def __call__(self, x: ArrayLike) -> NDArray[np.float64]:
        x = np.asarray(x, dtype=float)
        xf = np.atleast_1d(x).ravel()
        if self.kind == "PWMixture":
            out = self.spec.matrix(xf, self.centers) @ self.weights
        else:
            out = self.weights @ basis_matrix(xf, self.weights.size - 1)
        return out.reshape(x.shape)

    def derivative(self, x: ArrayLike) -> NDArray[np.float64]:
        x = np.asarray(x, dtype=float)
        xf = np.atleast_1d(x).ravel()
        if self.kind == "PWMixture":
            u = xf[:, None] - self.centers[None, :]
            e = self.eta
            with np.errstate(invalid="ignore", divide="ignore"):
                d = (np.cos(e * u) * e * u - np.sin(e * u)) / (np.pi * u * u)
            d = np.where(np.abs(u) < 1e-8, -(e**3) * u / (3 * np.pi), d)
            out = d @ self.weights
        else:
            out = self.weights @ basis_derivative_matrix(xf, self.weights.size - 1)
        return out.reshape(x.shape)


def _sup_abs(fun: Callable, grid: int = SUP_GRID) -> float:
    return grid_maximize(lambda x: np.abs(fun(x)), 0.0, 1.0, grid)[1]


def make_pw_test_function(seed: int, M: int = 20, eta: float = 30.0, weights: ArrayLike | None = None) -> TestFunction:
    """Sum of ``M`` Paley-Wiener kernels centred at ``(i - 1/2)/M`` with
    weights uniform on [-0.1, 0.1].

    ``C1`` is the refined grid maximum of ``|f|`` on [0, 1]. ``delta0``, the
    L2 mass outside [0, 1], is the exact squared norm minus the quadrature of
    ``f^2`` over [0, 1].
    """
    if M < 1:
        raise ValueError("M must be at least 1")
    if weights is None:
        w = stream(seed, "pw-weights").uniform(-0.1, 0.1, size=M)
    else:
        w = np.asarray(weights, dtype=float)
        if w.shape != (M,):
            raise ValueError(f"expected {M} weights")
    spec = KernelSpec.paley_wiener(eta)
    centers = (np.arange(1, M + 1) - 0.5) / M
    norm_sq = float(w @ spec.matrix(centers, centers) @ w)
    tf = TestFunction("PWMixture", w, norm_sq, 0.0, 0.0, centers, float(eta))
    C1 = _sup_abs(tf)
    breaks = np.linspace(0.0, 1.0, int(eta) + 2)[1:-1]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        inside = integrate.quad(lambda x: float(tf(x)) ** 2, 0.0, 1.0, points=breaks, limit=500, epsabs=1e-13, epsrel=1e-12)[0]
    delta0 = max(norm_sq - inside, 0.0)
    return dataclasses.replace(tf, f_sup=C1, df_sup=_sup_abs(tf.derivative), extras={"C1": C1, "delta0": delta0})


def make_h1_test_function(
    seed: int,
    L: int = 20,
    weights: ArrayLike | None = None,
    regularity: RegularityModel | None = None,
) -> TestFunction:
    """Cosine expansion ``sum_{l<L} w_l phi_l`` with ``w_l = eps_l / (l+1)^2``.

    With ``regularity`` the coefficients are made to satisfy the decay model:
    ``w_0`` is zeroed for a centered model and every ``w_l`` exceeding
    ``A lambda_l^{-p}`` in magnitude is clipped to it. The number of clipped
    coefficients is recorded in ``extras["clipped"]``.
    """
    if L < 1:
        raise ValueError("L must be at least 1")
    if weights is None:
        eps = stream(seed, "h1-weights").standard_normal(L)
        w = eps / (np.arange(L) + 1.0) ** 2
    else:
        w = np.array(weights, dtype=float)
        if w.shape != (L,):
            raise ValueError(f"expected {L} weights")
    extras: dict = {}
    if regularity is not None:
        if regularity.centered:
            w[0] = 0.0
        cap = np.array([coef_upper_bound(ell, regularity) if ell else np.inf for ell in range(L)])
        over = np.abs(w) > cap
        w[over] = np.sign(w[over]) * cap[over]
        extras["clipped"] = int(over[1:].sum())
    norm_sq = float(np.sum((1.0 + eigenvalue(np.arange(L))) * w * w))
    tf = TestFunction("PoincareExpansion", w, norm_sq, 0.0, 0.0)
    b = grid_maximize(lambda x: tf(x) ** 2 + tf.derivative(x) ** 2, 0.0, 1.0, SUP_GRID)[1]
    extras["b"] = b
    return dataclasses.replace(tf, f_sup=_sup_abs(tf), df_sup=_sup_abs(tf.derivative), extras=extras)


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str = "pw-coverage"
    seed: int = 0
    n: int = 10
    alpha: float = 0.25
    replicates: int = 200
    # Paley-Wiener mixture
    eta: float = 30.0
    M: int = 20
    pw_range: str = "squared"
    # cosine expansion
    L: int = 20
    # truncation table
    p: float = 2.5
    q_list: tuple[float, ...] = (1.0, 4.0)
    n_list: tuple[int, ...] = (10, 100, 1000)
    N_max: int = 10
    coef_mode: str = "regularity"
    # regions
    grid: int = 2001
    alphas: tuple[float, ...] = (0.1, 0.5)
    replicate: int = 0
    force_infinite_z: bool = False
    out: str | None = None

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if not 0 < self.alpha < 1 or not all(0 < a < 1 for a in self.alphas):
            raise ValueError("alpha values must lie in (0, 1)")
        if self.replicates < 1:
            raise ValueError("replicates must be at least 1")
        if self.seed < 0 or self.seed >= 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.pw_range not in ("squared", "linear"):
            raise ValueError("pw_range must be 'squared' or 'linear'")


def pw_certifier(tf: TestFunction, alpha: float, pw_range: str = "squared") -> Callable:
    C1, delta0 = tf.extras["C1"], tf.extras["delta0"]
    return lambda x, y: pw_norm_bound(y, C1, delta0, alpha, pw_range).z_alpha


def h1_der_certifier(tf: TestFunction, alpha: float) -> Callable:
    b = tf.extras["b"]
    return lambda x, y: h1_norm_bound_with_der(y, tf.derivative(x), b, alpha).z_alpha


COVERAGE_HEADER = ("replicate", "z_alpha", "norm_true", "norm_covered", "region_margin", "region_covered")


@dataclass(frozen=True)
class CoverageResult:
    rows: list[dict]
    norm_coverage: float
    region_coverage: float
    test_function: TestFunction


def _setup(config: ExperimentConfig) -> tuple[TestFunction, Callable[[float], Callable]]:
    if config.experiment.startswith("pw"):
        tf = make_pw_test_function(config.seed, config.M, config.eta)
        return tf, lambda a: pw_certifier(tf, a, config.pw_range)
    if config.experiment.startswith("h1-der"):
        tf = make_h1_test_function(config.seed, config.L)
        return tf, lambda a: h1_der_certifier(tf, a)
    raise ValueError(f"{config.experiment!r} is not a coverage/region experiment")


def run_coverage_experiment(config: ExperimentConfig) -> CoverageResult:
    """One row per replicate: ``z_alpha``, whether ``||f|| <= z_alpha``, and
    the band-containment margin of the true function."""
    tf, certifier = _setup(config)
    certify = certifier(config.alpha)
    rows = []
    for r in range(config.replicates):
        x = uniform_design(config.seed, r, config.n)
        y = tf(x)
        z = math.inf if config.force_infinite_z else certify(x, y)
        region = RegionBand(fit_interpolant(tf.spec, Design.from_points(x), y), z)
        cont = contains_function(region, tf, config.grid)
        rows.append(
            {
                "replicate": r,
                "z_alpha": z,
                "norm_true": tf.norm,
                "norm_covered": tf.norm <= z,
                "region_margin": cont.margin,
                "region_covered": cont.contained,
            }
        )
    norm_cov = sum(r["norm_covered"] for r in rows) / len(rows)
    region_cov = sum(r["region_covered"] for r in rows) / len(rows)
    return CoverageResult(rows, norm_cov, region_cov, tf)


TABLE_HEADER = ("n", "q", "N", "z_alpha_UB", "S_hat", "t", "delta_UB", "zeta_bar", "optimal")


def table_test_function(config: ExperimentConfig) -> TestFunction:
    model = RegularityModel.unit_sup_norm(config.p)
    return make_h1_test_function(config.seed, config.L, regularity=model)


def run_table_experiment(config: ExperimentConfig, alpha: float | None = None) -> list[dict]:
    """Regular-method bounds for every (n, q, N); the optimal N is flagged.

    ``t``, ``delta_UB`` and ``zeta_bar`` do not depend on the seed; ``S_hat``
    comes from one seeded sample per ``n`` shared by both bias models.
    """
    alpha = 0.1 if alpha is None else alpha
    model = RegularityModel.unit_sup_norm(config.p)
    tf = table_test_function(config)
    rows = []
    for n in config.n_list:
        x = uniform_design(config.seed, n, n, tag="table-design")
        y = tf(x)
        s_hat = {N: spectral_ustat(x, y, N).value for N in range(1, config.N_max + 1)}
        for q in config.q_list:
            bias = BiasModel.half_at_one(q)

            def bound_for(N: int) -> NormBound:
                return regular_norm_bound(s_hat[N], n, N, model, bias, alpha, config.coef_mode)

            n_star, _ = best_truncation(bound_for, config.N_max)
            for N in range(1, config.N_max + 1):
                b = bound_for(N)
                rows.append(
                    {
                        "n": n,
                        "q": q,
                        "N": N,
                        "z_alpha_UB": b.z_alpha,
                        "S_hat": b.estimate,
                        "t": b.threshold_t,
                        "delta_UB": b.bias_terms["delta_ub"],
                        "zeta_bar": b.bias_terms["zeta_bar"],
                        "optimal": N == n_star,
                    }
                )
    return rows


def region_bands(config: ExperimentConfig) -> tuple[TestFunction, list[tuple[float, RegionBand]]]:
    """Bands at each level of ``config.alphas`` for the design of replicate
    ``config.replicate``."""
    tf, certifier = _setup(config)
    x = uniform_design(config.seed, config.replicate, config.n)
    y = tf(x)
    interp = fit_interpolant(tf.spec, Design.from_points(x), y)
    bands = [(a, RegionBand(interp, certifier(a)(x, y))) for a in sorted(config.alphas)]
    return tf, bands


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def csv_text(header: Sequence[str], rows: Sequence[dict]) -> str:
    """Comma-separated with a header line; floats with 17 significant digits."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(row.get(k, "")) for k in header])
    return buf.getvalue()


def write_csv(path: str | Path, header: Sequence[str], rows: Sequence[dict]) -> None:
    try:
        Path(path).write_text(csv_text(header, rows))
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc
