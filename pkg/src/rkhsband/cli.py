"""Command-line entry point: ``rkhsband <subcommand> [flags]``.

Coverage and table experiments write CSV (stdout unless ``--out``); region
experiments write an SVG. A ``--config`` file holds ``key = value`` lines
using the long flag names; explicit flags override it.
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import RKHSBandError
from .experiments import (
    COVERAGE_HEADER,
    TABLE_HEADER,
    ExperimentConfig,
    csv_text,
    region_bands,
    run_coverage_experiment,
    run_table_experiment,
    write_csv,
)
from .kernels import KernelSpec
from .norm_est import (
    h1_fd_norm_sq,
    h1_mc_norm_sq_with_der,
    h1_projection_norm_sq_explicit,
    l2_mc_norm_sq,
    projection_norm_sq_gram,
)
from .poincare import spectral_ustat
from .svgplot import render_region_plot

log = logging.getLogger("rkhsband")

EXPERIMENTS = ("pw-coverage", "pw-region", "h1-der-coverage", "h1-der-region", "h1-table")
NORM_HEADER = ("method", "value", "n")


def _floats(s: str) -> tuple[float, ...]:
    return tuple(float(v) for v in s.replace(",", " ").split())


def _ints(s: str) -> tuple[int, ...]:
    return tuple(int(v) for v in s.replace(",", " ").split())


def _bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


# config key -> (type, help); every key is also a --flag
OPTIONS = {
    "seed": (int, "master seed (64-bit unsigned)"),
    "n": (int, "design size"),
    "alpha": (float, "confidence level parameter in (0, 1)"),
    "replicates": (int, "number of seeded replicates"),
    "eta": (float, "Paley-Wiener bandwidth"),
    "M": (int, "number of kernel atoms of the Paley-Wiener test function"),
    "pw_range": (str, "Hoeffding range for the Paley-Wiener bound: squared or linear"),
    "L": (int, "number of cosine terms of the H1 test function"),
    "p": (float, "coefficient decay exponent"),
    "q_list": (_floats, "bias exponents, comma separated"),
    "n_list": (_ints, "sample sizes, comma separated"),
    "N_max": (int, "largest truncation order"),
    "coef_mode": (str, "coefficient bound: regularity or min"),
    "grid": (int, "grid size for the containment check"),
    "alphas": (_floats, "alpha levels drawn in region plots, comma separated"),
    "replicate": (int, "replicate index used for region plots"),
    "force_infinite_z": (_bool, "replace z_alpha by +inf (diagnostics)"),
}


def read_config(path: str | Path) -> dict[str, object]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror}") from exc
    out: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in OPTIONS:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = OPTIONS[key][0](value)
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: bad value for {key}: {exc}") from None
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    for key, (typ, help_) in OPTIONS.items():
        common.add_argument("--" + key.replace("_", "-"), dest=key, type=typ, default=None, help=help_)
    common.add_argument("--out", default=None, help="output file (CSV or SVG)")
    common.add_argument("--config", default=None, help="key = value configuration file")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="rkhsband", description="Global confidence bands for RKHS interpolation.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in EXPERIMENTS:
        sub.add_parser(name, parents=[common])
    ne = sub.add_parser("norm-estimate", parents=[common], help="norm estimates from a CSV of x,value[,derivative]")
    ne.add_argument("--input", required=True, help="CSV with columns x,value and optionally derivative")
    ne.add_argument("--kernel", choices=("h1", "pw"), default="h1")
    ne.add_argument("--N", dest="N", type=int, default=None, help="spectral truncation order (h1)")
    return parser


def make_config(args: argparse.Namespace) -> ExperimentConfig:
    values: dict[str, object] = read_config(args.config) if args.config else {}
    for key in OPTIONS:
        v = getattr(args, key)
        if v is not None:
            values[key] = v
    if args.command in EXPERIMENTS:
        values["experiment"] = args.command
    values["out"] = args.out
    return ExperimentConfig(**values)


def read_samples(path: str | Path) -> tuple[np.ndarray, np.ndarray, np.ndarray | None]:
    """Read ``x,value[,derivative]`` with an optional header line."""
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror}") from exc
    if rows and not _is_number(rows[0][0]):
        rows = rows[1:]
    if not rows:
        raise ValueError(f"{path}: no samples")
    width = {len(r) for r in rows}
    if len(width) != 1 or width.pop() not in (2, 3):
        raise ValueError(f"{path}: every row needs 2 or 3 columns")
    data = np.array(rows, dtype=float)
    return data[:, 0], data[:, 1], (data[:, 2] if data.shape[1] == 3 else None)


def _is_number(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def norm_estimates(args: argparse.Namespace, config: ExperimentConfig) -> list[dict]:
    x, y, d = read_samples(args.input)
    if args.kernel == "pw":
        spec = KernelSpec.paley_wiener(config.eta)
        ests = [l2_mc_norm_sq(y), projection_norm_sq_gram(spec, x, y)]
    else:
        spec = KernelSpec.sobolev_h1()
        ests = [projection_norm_sq_gram(spec, x, y), h1_projection_norm_sq_explicit(x, y)]
        if x.size >= 2:
            ests.append(h1_fd_norm_sq(x, y))
        if d is not None:
            ests.append(h1_mc_norm_sq_with_der(y, d))
    rows = [{"method": e.method, "value": e.value, "n": e.n} for e in ests]
    if args.kernel == "h1" and args.N is not None:
        s = spectral_ustat(x, y, args.N)
        rows.append({"method": f"spectral_ustat_N{args.N}", "value": s.value, "n": s.n})
    return rows


def _emit(out: str | None, header, rows) -> None:
    if out is None:
        sys.stdout.write(csv_text(header, rows))
    else:
        write_csv(out, header, rows)


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    config = make_config(args)
    cmd = args.command
    if cmd == "norm-estimate":
        _emit(config.out, NORM_HEADER, norm_estimates(args, config))
    elif cmd == "h1-table":
        _emit(config.out, TABLE_HEADER, run_table_experiment(config, config.alpha if args.alpha is not None else None))
    elif cmd.endswith("-coverage"):
        res = run_coverage_experiment(config)
        summary = {"replicate": "summary", "z_alpha": math.nan, "norm_true": res.test_function.norm,
                   "norm_covered": res.norm_coverage, "region_margin": math.nan,
                   "region_covered": res.region_coverage}
        _emit(config.out, COVERAGE_HEADER, res.rows + [summary])
        log.info("norm coverage %.4f, region coverage %.4f", res.norm_coverage, res.region_coverage)
    else:
        tf, bands = region_bands(config)
        out = config.out or f"{cmd}.svg"
        render_region_plot(bands, tf, out)
        sys.stdout.write(out + "\n")
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    try:
        return run(argv)
    except (RKHSBandError, ValueError, OSError) as exc:
        sys.stderr.write(f"rkhsband: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
