"""Tests for recurrence tables, weighted functions and CD kernels.

Classical oracles: monic Hermite under e^{-N x^2/2} has a_k = k/N via the
substitution x -> x sqrt(N), and monic Laguerre under x^a e^{-N x} has
b_k = (2k + 1 + a)/N, a_k = k(k + a)/N^2; both follow from the textbook
recurrences by rescaling.  Quadrature oracles check orthonormality and the
projection identities.
"""

import math

import numpy as np
import pytest

from rmtlab import equilibrium as eq
from rmtlab import kernels as kr
from rmtlab import orthopoly as op
from rmtlab.equilibrium import Potential

HERMITE = Potential((0.0, 0.0, 0.5))


@pytest.fixture(scope="module")
def herm16():
    w = op.WeightSpec(HERMITE, N=16)
    return w, op.recurrence_table(w, 40)


@pytest.fixture(scope="module")
def herm64():
    w = op.WeightSpec(HERMITE, N=64)
    return w, op.recurrence_table(w, 64)


@pytest.fixture(scope="module")
def semicircle():
    return eq.solve_equilibrium(HERMITE)


def gauss_window(table):
    lo, hi = table.window
    t, qw = np.polynomial.legendre.leggauss(500)
    return 0.5 * (hi - lo) * t + 0.5 * (hi + lo), 0.5 * (hi - lo) * qw


class TestRecurrenceTable:
    def test_hermite_coefficients(self, herm16):
        _, t = herm16
        ks = np.arange(1, 31)
        assert np.abs(t.a[:30] - ks / 16.0).max() <= 1e-11
        assert np.abs(t.b).max() <= 1e-12

    def test_hermite_norm(self, herm16):
        _, t = herm16
        assert t.gamma_sq[0] == pytest.approx(math.sqrt(2.0 * math.pi / 16.0), abs=1e-11)

    def test_laguerre_coefficients(self):
        w = op.WeightSpec(Potential((0.0, 1.0), hard_edge=True), N=8)
        t = op.recurrence_table(w, 24)
        k0, k1 = np.arange(21), np.arange(1, 21)
        assert np.abs(t.b[:21] - (2 * k0 + 1) / 8.0).max() <= 1e-10
        assert np.abs(t.a[:20] - k1 ** 2 / 64.0).max() <= 1e-10

    def test_laguerre_alpha_coefficients(self):
        # weight x e^{-8x}: b_k = (2k + 2)/8, a_k = k(k+1)/64
        w = op.WeightSpec(Potential((0.0, 1.0), hard_edge=True, singularity_alpha=1.0), N=8)
        t = op.recurrence_table(w, 20)
        k0, k1 = np.arange(16), np.arange(1, 16)
        assert np.abs(t.b[:16] - (2 * k0 + 2) / 8.0).max() <= 1e-10
        assert np.abs(t.a[:15] - k1 * (k1 + 1) / 64.0).max() <= 1e-10

    def test_positive_invariants(self, herm64):
        _, t = herm64
        assert np.all(t.a > 0)
        assert np.all(t.gamma_sq > 0)

    def test_even_weight_symmetric(self):
        w = op.WeightSpec(Potential((0.0, 0.0, 0.0, 0.0, 0.25)), N=12)
        t = op.recurrence_table(w, 24)
        assert np.abs(t.b).max() <= 1e-12

    def test_nmax_cap(self, herm16):
        w, _ = herm16
        with pytest.raises(ValueError):
            op.recurrence_table(w, 513)

    def test_serialization_roundtrip(self, herm16):
        _, t = herm16
        back = op.RecurrenceTable.from_text(t.to_text())
        assert back.N == t.N and back.n_max == t.n_max
        assert np.array_equal(back.a, t.a)
        assert np.array_equal(back.b, t.b)
        assert np.array_equal(back.gamma_sq, t.gamma_sq)

    def test_cache_roundtrip(self, tmp_path, monkeypatch):
        monkeypatch.setenv("RMTLAB_CACHE", str(tmp_path))
        w = op.WeightSpec(HERMITE, N=4)
        t1 = op.recurrence_table(w, 8)
        assert len(list(tmp_path.iterdir())) == 1
        t2 = op.recurrence_table(w, 8)
        assert np.array_equal(t1.a, t2.a)

    def test_explicit_truncation_validated(self):
        with pytest.raises(ValueError):
            op.WeightSpec(HERMITE, N=4, truncation=0.5).window(8)


class TestWeightedPolys:
    def test_phi0(self, herm16):
        w, t = herm16
        x = 0.7
        want = math.exp(-16.0 * HERMITE(x) / 2.0) / math.sqrt(t.gamma_sq[0])
        assert op.weighted_polys(t, w, x, 1)[0] == pytest.approx(want, rel=1e-12)

    def test_orthonormality(self, herm16):
        w, t = herm16
        x, qw = gauss_window(t)
        phi = op.weighted_polys(t, w, x, 11)
        gram = (phi * qw) @ phi.T
        assert np.abs(gram - np.eye(11)).max() <= 1e-9

    def test_diagonal_sum_equals_kernel(self, herm16):
        w, t = herm16
        vals = op.weighted_polys(t, w, 0.3, 24)
        assert sum(v * v for v in vals) == pytest.approx(
            op.cd_kernel(t, w, 24, 0.3, 0.3), abs=1e-9)

    def test_no_overflow_large_n(self):
        w = op.WeightSpec(HERMITE, N=256)
        t = op.recurrence_table(w, 256)
        phi = op.weighted_polys(t, w, np.linspace(-2.2, 2.2, 7), 256)
        assert np.isfinite(phi).all()


class TestCdKernel:
    def test_n1_product(self, herm16):
        w, t = herm16
        x, y = 0.4, -0.9
        p0x = op.weighted_polys(t, w, x, 1)[0]
        p0y = op.weighted_polys(t, w, y, 1)[0]
        assert op.cd_kernel_sum(t, w, 1, x, y) == pytest.approx(p0x * p0y, rel=1e-12)

    def test_cd_equals_sum(self, herm16):
        w, t = herm16
        rng = np.random.default_rng(4)
        for n in [2, 7, 24, 30]:
            for _ in range(6):
                x, y = rng.uniform(-2.5, 2.5, 2)
                assert abs(op.cd_kernel(t, w, n, x, y)
                           - op.cd_kernel_sum(t, w, n, x, y)) <= 1e-10

    def test_trace_is_n(self, herm16):
        w, t = herm16
        x, qw = gauss_window(t)
        diag = op.cd_kernel_grid(t, w, 16, x, x).diagonal()
        assert np.sum(diag * qw) == pytest.approx(16.0, abs=1e-8)

    def test_reproducing_property(self, herm16):
        w, t = herm16
        x, qw = gauss_window(t)
        row = op.cd_kernel_grid(t, w, 12, np.array([0.1]), x)[0]
        col = op.cd_kernel_grid(t, w, 12, x, np.array([-0.4]))[:, 0]
        assert np.sum(row * col * qw) == pytest.approx(
            op.cd_kernel(t, w, 12, 0.1, -0.4), abs=1e-8)

    def test_grid_matches_scalar(self, herm16):
        w, t = herm16
        xs = np.array([-1.0, 0.0, 0.5])
        grid = op.cd_kernel_grid(t, w, 10, xs, xs)
        for i, xv in enumerate(xs):
            for j, yv in enumerate(xs):
                assert grid[i, j] == pytest.approx(op.cd_kernel(t, w, 10, xv, yv), rel=1e-11)

    def test_positive_definite_random_points(self, herm64):
        w, t = herm64
        rng = np.random.default_rng(8)
        for k in [3, 5]:
            pts = rng.uniform(-1.8, 1.8, k)
            mat = op.cd_kernel_grid(t, w, 48, pts, pts)
            assert np.linalg.eigvalsh(mat).min() >= -1e-9

    def test_gaussian_density_n1(self):
        # K_1(x,x) for V = x^2/2, N = 1 is the standard normal density
        w = op.WeightSpec(HERMITE, N=1)
        t = op.recurrence_table(w, 2)
        for x in [-1.3, 0.0, 0.8]:
            want = math.exp(-x * x / 2.0) / math.sqrt(2.0 * math.pi)
            assert op.cd_kernel(t, w, 1, x, x) == pytest.approx(want, abs=1e-10)

    def test_density_convergence(self, semicircle):
        sups = {}
        for n in [64, 128]:
            w = op.WeightSpec(HERMITE, N=n)
            t = op.recurrence_table(w, n)
            xs = np.linspace(-1.8, 1.8, 41)
            diag = op.cd_kernel_grid(t, w, n, xs, xs).diagonal() / n
            sups[n] = np.abs(diag - eq.density(semicircle, xs)).max()
        assert sups[128] / sups[64] <= 0.7

    def test_spectral_singularity_neutral(self):
        # |x|^2 factor leaves the global density alone away from 0
        n = 128
        vals = {}
        for alpha in [0.0, 1.0]:
            pot = Potential((0.0, 0.0, 0.5), singularity_alpha=alpha)
            w = op.WeightSpec(pot, N=n)
            t = op.recurrence_table(w, n)
            xs = 1.0 + np.linspace(-0.06, 0.06, 7)
            diag = op.cd_kernel_grid(t, w, n, xs, xs).diagonal() / n
            vals[alpha] = diag.mean()
        assert abs(vals[1.0] - vals[0.0]) <= 2e-2


class TestScalingWindows:
    def test_validation(self):
        with pytest.raises(ValueError):
            op.ScalingWindow(0.0, 0.5, 1.0, np.array([0.0]))
        with pytest.raises(ValueError):
            op.ScalingWindow(0.0, 1.0, 1.0, np.array([0.0]), orientation=2)

    def test_identity_rescaling(self, herm64):
        # c = 1/n makes c_n = 1 and returns raw kernel values
        w, t = herm64
        grid = np.array([-0.3, 0.2, 0.9])
        win = op.ScalingWindow(0.0, 1.0, 1.0 / 64.0, grid)
        K = op.rescaled_kernel(t, w, 64, win)
        assert K[0, 1] == pytest.approx(op.cd_kernel(t, w, 64, -0.3, 0.2), rel=1e-11)

    def test_bulk_converges_to_sine(self, semicircle):
        grid = np.linspace(-2.0, 2.0, 21)
        ks = np.array([[kr.sine_kernel(u, v) for v in grid] for u in grid])
        sups = {}
        for n in [64, 128]:
            w = op.WeightSpec(HERMITE, N=n)
            t = op.recurrence_table(w, n)
            win = op.bulk_window(semicircle, 0.0, grid)
            sups[n] = np.abs(op.rescaled_kernel(t, w, n, win) - ks).max()
        assert sups[64] <= 0.03
        assert sups[128] / sups[64] <= 0.65

    def test_hard_edge_alpha0_matches_bessel(self, semicircle):
        n = 128
        pot = Potential((0.0, 1.0), hard_edge=True)
        w = op.WeightSpec(pot, N=n)
        t = op.recurrence_table(w, n)
        mu = eq.solve_equilibrium(pot)
        win = op.hard_edge_window(mu, np.array([1.0]))
        assert win.c == pytest.approx(2.0, abs=1e-10)
        got = op.rescaled_kernel(t, w, n, win)[0, 0]
        assert got == pytest.approx(kr.bessel_hard_kernel(0.0, 1.0, 1.0), abs=0.05)

    def test_window_outside_truncation(self, herm64):
        w, t = herm64
        win = op.ScalingWindow(0.0, 1.0, 1.0 / 64.0, np.array([0.0, 100.0]))
        with pytest.raises(ValueError):
            op.rescaled_kernel(t, w, 64, win)

    def test_left_edge_orientation(self, semicircle):
        grid = np.linspace(-2.0, 2.0, 9)
        n = 64
        w = op.WeightSpec(HERMITE, N=n)
        t = op.recurrence_table(w, n)
        right = op.rescaled_kernel(t, w, n, op.soft_edge_window(semicircle, grid))
        left = op.rescaled_kernel(t, w, n, op.soft_edge_window(semicircle, grid, side="left"))
        # even potential: the two edges agree exactly
        assert np.abs(left - right).max() <= 1e-9
