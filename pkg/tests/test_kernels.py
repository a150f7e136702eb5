import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rkhsband import (
    DegenerateDesign,
    Design,
    IllConditioned,
    JitterPolicy,
    KernelSpec,
    gram,
    h1_gram_inverse_tridiagonal,
    h1_kernel,
    pw_kernel,
)

unit = st.floats(0.0, 1.0, allow_nan=False)


def h1_oracle(x, y):
    lo, hi = min(x, y), max(x, y)
    return math.cosh(lo) * math.cosh(1 - hi) / math.sinh(1)


class TestPaleyWiener:
    def test_diagonal_is_eta_over_pi(self):
        assert pw_kernel(0.3, 0.3, 30.0) == pytest.approx(30 / math.pi, rel=1e-15)

    def test_zero_of_sinc(self):
        assert pw_kernel(0.0, math.pi / 30, 30.0) == pytest.approx(0.0, abs=1e-14)

    def test_hand_value(self):
        assert pw_kernel(0.0, 0.5, math.pi) == pytest.approx(2 / math.pi, rel=1e-14)

    def test_continuous_at_diagonal(self):
        assert abs(pw_kernel(0.4, 0.4 + 1e-8, 30.0) - 30 / math.pi) < 1e-9

    @given(st.floats(-5, 5), st.floats(-5, 5), st.floats(0.1, 50))
    def test_bounded_by_peak(self, x, y, eta):
        assert abs(pw_kernel(x, y, eta)) <= eta / math.pi * (1 + 1e-14)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            pw_kernel(float("nan"), 0.0, 1.0)
        with pytest.raises(ValueError):
            KernelSpec.paley_wiener(30.0).matrix([np.inf], [0.0])

    def test_eta_positive(self):
        with pytest.raises(ValueError):
            KernelSpec.paley_wiener(0.0)


class TestSobolevH1:
    def test_corner_values(self):
        assert h1_kernel(0.0, 1.0) == pytest.approx(1 / math.sinh(1), rel=1e-14)
        assert h1_kernel(0.0, 0.0) == pytest.approx(1 / math.tanh(1), rel=1e-14)

    @given(unit, unit)
    def test_symmetric_and_matches_formula(self, x, y):
        assert h1_kernel(x, y) == h1_kernel(y, x)
        assert h1_kernel(x, y) == pytest.approx(h1_oracle(x, y), rel=1e-13)

    def test_domain(self):
        with pytest.raises(ValueError):
            h1_kernel(-0.1, 0.5)
        with pytest.raises(ValueError):
            h1_kernel(0.5, 1.2)

    def test_sup_diagonal_is_coth1(self):
        assert KernelSpec.sobolev_h1().sup_diagonal() == pytest.approx(1 / math.tanh(1), rel=1e-12)

    def test_positive_diagonal(self):
        x = np.linspace(0, 1, 101)
        assert np.all(KernelSpec.sobolev_h1().diag(x) > 0)


class TestGram:
    def test_single_point(self):
        G = gram(KernelSpec.sobolev_h1(), [0.5])
        assert G.entries.shape == (1, 1)
        assert G.entries[0, 0] == pytest.approx(math.cosh(0.5) ** 2 / math.sinh(1), rel=1e-14)
        assert G.jitter_applied == 0.0

    def test_symmetric(self, rng):
        for spec in (KernelSpec.sobolev_h1(), KernelSpec.paley_wiener(30.0)):
            G = gram(spec, rng.uniform(0, 1, 7))
            assert np.array_equal(G.entries, G.entries.T)

    def test_pw_factorizes_with_bounded_jitter(self, rng):
        x = rng.uniform(0, 1, 10)
        G = gram(KernelSpec.paley_wiener(30.0), x)
        assert G.jitter_applied <= 1e-6 * np.trace(G.entries) / 10
        eig = np.linalg.eigvalsh(G.entries)
        assert eig.min() > 0

    def test_solve_matches_dense(self, rng):
        spec = KernelSpec.sobolev_h1()
        x = rng.uniform(0, 1, 6)
        b = rng.normal(size=6)
        G = gram(spec, x)
        np.testing.assert_allclose(G.solve(b), np.linalg.solve(spec.matrix(x, x), b), rtol=1e-9)
        assert G.quad_form(b) == pytest.approx(b @ np.linalg.solve(spec.matrix(x, x), b), rel=1e-9)

    def test_duplicate_array_rejected(self):
        with pytest.raises(DegenerateDesign):
            gram(KernelSpec.sobolev_h1(), [0.2, 0.5, 0.2])

    def test_design_collapses_duplicates(self):
        G = gram(KernelSpec.sobolev_h1(), Design.from_points([0.2, 0.5, 0.2]))
        assert G.n == 2

    def test_ill_conditioned_raises(self):
        x = np.linspace(0.5, 0.5 + 1e-9, 8)
        with pytest.raises(IllConditioned):
            gram(KernelSpec.paley_wiener(30.0), x, JitterPolicy(start=1e-18, cap=1e-17))

    def test_jitter_escalates_on_near_singular(self):
        x = np.linspace(0.5, 0.5 + 1e-5, 6)
        G = gram(KernelSpec.paley_wiener(30.0), x)
        assert G.jitter_applied > 0
        assert np.allclose(np.diag(G.entries), 30 / math.pi + G.jitter_applied)


class TestTridiagonal:
    def test_single_point(self):
        T = h1_gram_inverse_tridiagonal([0.5])
        assert T.alpha[0] == pytest.approx(2 * math.tanh(0.5), rel=1e-14)
        assert T.alpha[0] == pytest.approx(1 / h1_kernel(0.5, 0.5), rel=1e-14)

    def test_offdiagonal_value(self):
        T = h1_gram_inverse_tridiagonal([0.25, 0.75])
        assert T.beta[0] == pytest.approx(-1 / math.sinh(0.5), rel=1e-14)
        assert T.beta[0] == pytest.approx(-1.9190347, abs=1e-6)

    @settings(max_examples=60, deadline=None)
    @given(st.lists(unit, min_size=1, max_size=8, unique=True))
    def test_inverse_of_dense_gram(self, pts):
        x = np.sort(np.array(pts))
        if x.size > 1 and np.min(np.diff(x)) < 1e-3:
            x = np.linspace(0.05, 0.95, x.size)
        K = KernelSpec.sobolev_h1().matrix(x, x)
        T = h1_gram_inverse_tridiagonal(x)
        assert np.all(T.beta < 0)
        np.testing.assert_allclose(T.to_dense() @ K, np.eye(x.size), atol=1e-8)

    def test_endpoints_allowed(self):
        x = np.array([0.0, 0.3, 1.0])
        K = KernelSpec.sobolev_h1().matrix(x, x)
        np.testing.assert_allclose(h1_gram_inverse_tridiagonal(x).to_dense() @ K, np.eye(3), atol=1e-10)

    def test_matvec_and_quad_form(self, rng):
        x = np.sort(rng.uniform(0, 1, 9))
        T = h1_gram_inverse_tridiagonal(x)
        y = rng.normal(size=9)
        Y = rng.normal(size=(9, 4))
        np.testing.assert_allclose(T.matvec(y), T.to_dense() @ y, rtol=1e-12)
        np.testing.assert_allclose(T.matvec(Y), T.to_dense() @ Y, rtol=1e-12)
        assert T.quad_form(y) == pytest.approx(y @ T.to_dense() @ y, rel=1e-12)

    def test_rejects_unsorted(self):
        with pytest.raises(ValueError):
            h1_gram_inverse_tridiagonal([0.5, 0.2])
        with pytest.raises(ValueError):
            h1_gram_inverse_tridiagonal([0.2, 0.2])
