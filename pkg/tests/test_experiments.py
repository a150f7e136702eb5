import math

import numpy as np
import pytest
from scipy import integrate

from rkhsband import ExperimentConfig, RegularityModel, make_h1_test_function, make_pw_test_function
from rkhsband.experiments import (
    COVERAGE_HEADER,
    TABLE_HEADER,
    csv_text,
    run_coverage_experiment,
    run_table_experiment,
    write_csv,
)


class TestPaleyWienerFunction:
    def test_zero_weights(self):
        tf = make_pw_test_function(0, weights=np.zeros(20))
        assert tf.exact_norm_sq == 0
        assert np.all(tf(np.linspace(0, 1, 11)) == 0)

    def test_single_atom(self):
        tf = make_pw_test_function(0, M=1, eta=30.0, weights=[1.0])
        assert tf.centers[0] == 0.5
        assert tf.exact_norm_sq == pytest.approx(30 / math.pi, rel=1e-14)

    def test_reproducible(self):
        a, b = make_pw_test_function(123), make_pw_test_function(123)
        assert a.exact_norm_sq == b.exact_norm_sq
        assert np.array_equal(a.weights, b.weights)
        assert not np.array_equal(a.weights, make_pw_test_function(124).weights)

    def test_weights_range_and_centers(self):
        tf = make_pw_test_function(9)
        assert np.all(np.abs(tf.weights) <= 0.1)
        np.testing.assert_allclose(tf.centers, (np.arange(1, 21) - 0.5) / 20)

    def test_sup_norm_covers_dense_grid(self):
        tf = make_pw_test_function(1)
        x = np.linspace(0, 1, 200_001)
        assert np.max(np.abs(tf(x))) <= tf.extras["C1"] + 1e-12

    def test_derivative(self):
        tf = make_pw_test_function(2)
        x = np.array([0.0, 0.1234, 0.5, 0.525, 0.999])
        h = 1e-6
        fd = (tf(x + h) - tf(x - h)) / (2 * h)
        np.testing.assert_allclose(tf.derivative(x), fd, atol=1e-5)

    def test_outside_mass_matches_tail_quadrature(self):
        tf = make_pw_test_function(3)
        T = 60.0
        f2 = lambda x: float(tf(x)) ** 2  # noqa: E731
        tail = 0.0
        for a, b in ((-T, 0.0), (1.0, 1.0 + T)):
            pts = np.linspace(a, b, int(T) * 4 + 1)
            tail += sum(integrate.quad(f2, u, v, epsabs=1e-14, epsrel=1e-12, limit=200)[0] for u, v in zip(pts[:-1], pts[1:]))
        # |f(x)| <= sum|w| / (pi d) at distance d from the centers
        s = np.sum(np.abs(tf.weights)) / math.pi
        remainder = 2 * s * s / T
        assert 0 <= tf.extras["delta0"] - tail <= remainder + 1e-9


class TestH1Function:
    def test_single_eigenfunction(self):
        w = np.zeros(20)
        w[1] = 1.0
        tf = make_h1_test_function(0, weights=w)
        assert tf.exact_norm_sq == pytest.approx(1 + np.pi**2, rel=1e-14)
        assert tf.exact_norm_sq == pytest.approx(10.8696, abs=1e-4)

    def test_constant(self):
        w = np.zeros(20)
        w[0] = 1.0
        tf = make_h1_test_function(0, weights=w)
        assert tf.norm == 1.0
        assert np.all(tf.derivative(np.linspace(0, 1, 7)) == 0)

    def test_weights_decay(self):
        tf = make_h1_test_function(5, 20)
        eps = tf.weights * (np.arange(20) + 1.0) ** 2
        assert np.all(np.abs(eps) < 6)

    def test_derivative(self):
        tf = make_h1_test_function(6, 20)
        x = np.linspace(0.01, 0.99, 9)
        h = 1e-6
        np.testing.assert_allclose(tf.derivative(x), (tf(x + h) - tf(x - h)) / (2 * h), atol=1e-5)

    def test_b_is_sup(self):
        tf = make_h1_test_function(7, 20)
        x = np.linspace(0, 1, 200_001)
        assert np.max(tf(x) ** 2 + tf.derivative(x) ** 2) <= tf.extras["b"] + 1e-12

    def test_regularity_clipping(self):
        model = RegularityModel.unit_sup_norm(2.5)
        tf = make_h1_test_function(0, 20, regularity=model)
        assert tf.weights[0] == 0
        lam = (np.pi * np.arange(1, 20)) ** 2
        assert np.all(np.abs(tf.weights[1:]) <= model.A * lam ** (-2.5) * (1 + 1e-15))
        assert tf.extras["clipped"] >= 1


class TestCoverageExperiment:
    def test_forced_infinite(self):
        res = run_coverage_experiment(ExperimentConfig(experiment="pw-coverage", replicates=1, force_infinite_z=True))
        assert len(res.rows) == 1
        assert res.rows[0]["norm_covered"] and res.rows[0]["region_covered"]
        assert res.norm_coverage == res.region_coverage == 1.0

    def test_deterministic_csv(self, tmp_path):
        cfg = ExperimentConfig(experiment="h1-der-coverage", replicates=5)
        a = csv_text(COVERAGE_HEADER, run_coverage_experiment(cfg).rows)
        b = csv_text(COVERAGE_HEADER, run_coverage_experiment(cfg).rows)
        assert a == b
        assert a.splitlines()[0] == ",".join(COVERAGE_HEADER)

    @pytest.mark.slow
    def test_pw_default_coverage(self):
        res = run_coverage_experiment(ExperimentConfig(experiment="pw-coverage", alpha=0.25, replicates=200))
        assert res.norm_coverage == pytest.approx(0.98, abs=0.03)
        assert res.norm_coverage >= 0.75

    @pytest.mark.slow
    def test_h1_der_coverage(self):
        res = run_coverage_experiment(ExperimentConfig(experiment="h1-der-coverage", alpha=0.25, replicates=200))
        assert res.norm_coverage == pytest.approx(1.0, abs=0.01)

    def test_rejects_table_experiment(self):
        with pytest.raises(ValueError):
            run_coverage_experiment(ExperimentConfig(experiment="h1-table", replicates=1))

    @pytest.mark.parametrize(
        "field,value", [("n", 1), ("alpha", 1.0), ("replicates", 0), ("seed", -1), ("pw_range", "cubic")]
    )
    def test_config_validation(self, field, value):
        with pytest.raises(ValueError):
            ExperimentConfig(**{field: value})


# reference deterministic columns, rounded to two decimals
REFERENCE = {
    (10, 1): (24.84, 2.64, 0.50),
    (10, 2): (32.81, 11.63, 0.67),
    (100, 1): (6.78, 0.24, 0.50),
    (100, 2): (7.49, 1.06, 0.67),
    (1000, 1): (2.11, 0.02, 0.50),
    (1000, 2): (2.29, 0.10, 0.67),
    (1000, 3): (2.35, 0.28, 0.75),
    (1000, 10): (2.89, 7.63, 0.91),
}


@pytest.fixture(scope="module")
def rows():
    return run_table_experiment(ExperimentConfig(experiment="h1-table", seed=0))


class TestTable:
    def test_shape(self, rows):
        assert len(rows) == 3 * 2 * 10
        assert set(rows[0]) == set(TABLE_HEADER)

    def test_bias_only_changes_zeta_bar(self, rows):
        by = {(r["n"], r["q"], r["N"]): r for r in rows}
        for n in (10, 100, 1000):
            for N in range(1, 11):
                a, b = by[(n, 1.0, N)], by[(n, 4.0, N)]
                assert (a["S_hat"], a["t"], a["delta_UB"]) == (b["S_hat"], b["t"], b["delta_UB"])

    def test_deterministic_columns_seed_free(self, rows):
        other = run_table_experiment(ExperimentConfig(experiment="h1-table", seed=77))
        for a, b in zip(rows, other):
            assert (a["t"], a["delta_UB"], a["zeta_bar"]) == (b["t"], b["delta_UB"], b["zeta_bar"])

    def test_one_optimum_per_block(self, rows):
        for n in (10, 100, 1000):
            for q in (1.0, 4.0):
                block = [r for r in rows if r["n"] == n and r["q"] == q]
                best = [r for r in block if r["optimal"]]
                assert len(best) == 1
                assert best[0]["z_alpha_UB"] == min(r["z_alpha_UB"] for r in block)

    def test_matches_reference_after_rounding(self, rows):
        by = {(r["n"], r["N"]): r for r in rows if r["q"] == 1.0}
        for key, (t, d, z) in REFERENCE.items():
            r = by[key]
            for got, want in ((r["t"], t), (r["delta_UB"], d), (r["zeta_bar"], z)):
                assert abs(got - want) <= 0.01 * want or round(got, 2) == want

    def test_csv_roundtrip(self, rows, tmp_path):
        p = tmp_path / "table.csv"
        write_csv(p, TABLE_HEADER, rows)
        lines = p.read_text().splitlines()
        assert lines[0] == ",".join(TABLE_HEADER)
        first = lines[1].split(",")
        assert float(first[5]) == rows[0]["t"]
        assert first[-1] in ("true", "false")

    def test_write_error_names_path(self, rows, tmp_path):
        bad = tmp_path / "missing" / "t.csv"
        with pytest.raises(OSError, match="missing"):
            write_csv(bad, TABLE_HEADER, rows)
