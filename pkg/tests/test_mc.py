"""Tests for the Monte Carlo ensembles and empirical statistics."""

import math

import numpy as np
import pytest

from rmtlab import equilibrium as eq
from rmtlab import mc
from rmtlab import orthopoly as op
from rmtlab.equilibrium import Potential

HERMITE = Potential((0.0, 0.0, 0.5))


@pytest.fixture(scope="module")
def semicircle():
    return eq.solve_equilibrium(HERMITE)


@pytest.fixture(scope="module")
def gue128():
    return mc.sample_gaussian(2, 128, 400, seed=42)


class TestGaussianEnsembles:
    def test_n1_standard_gaussian(self):
        b = mc.sample_gaussian(2, 1, 4000, seed=3)
        v = b.eigenvalue_sets.ravel()
        assert abs(v.mean()) <= 3.0 / math.sqrt(len(v))
        assert abs(v.var() - 1.0) <= 5.0 / math.sqrt(len(v))

    def test_sign_symmetry(self, gue128):
        v = gue128.eigenvalue_sets
        assert abs(v.mean()) <= 3.0 * v.std() / math.sqrt(v.size)

    def test_gse_kramers_pairs(self):
        # duplication is verified inside the sampler; a crash would fail this
        b = mc.sample_gaussian(4, 16, 50, seed=9)
        assert b.eigenvalue_sets.shape == (50, 16)

    def test_sorted_rows(self, gue128):
        assert np.all(np.diff(gue128.eigenvalue_sets, axis=1) >= 0.0)

    def test_reproducible(self):
        a = mc.sample_gaussian(1, 24, 20, seed=5)
        b = mc.sample_gaussian(1, 24, 20, seed=5)
        assert np.array_equal(a.eigenvalue_sets, b.eigenvalue_sets)
        c = mc.sample_gaussian(1, 24, 20, seed=6)
        assert not np.array_equal(a.eigenvalue_sets, c.eigenvalue_sets)

    def test_density_against_semicircle(self, gue128, semicircle):
        h = mc.empirical_density(gue128, 25, (-2.125, 2.125))
        sup, _ = mc.compare_to_kernel(h, eq.density(semicircle, h.centers))
        assert sup <= 0.05

    def test_edge_confinement(self, gue128):
        outside = (np.abs(gue128.eigenvalue_sets) > 2.1).mean()
        assert outside <= 0.01

    def test_center_bin_value(self, gue128):
        h = mc.empirical_density(gue128, 21, (-2.1, 2.1))
        mid = h.density[10]
        assert mid == pytest.approx(1.0 / math.pi, abs=0.05)


class TestEmpiricalDensity:
    def test_mass_one(self, gue128):
        h = mc.empirical_density(gue128, 40, (-2.5, 2.5))
        assert h.mass == pytest.approx(1.0, abs=1e-12)

    def test_bins_cap(self, gue128):
        with pytest.raises(ValueError):
            mc.empirical_density(gue128, 1001, (-2, 2))

    def test_compare_calibration(self, gue128):
        h = mc.empirical_density(gue128, 20, (-2, 2))
        sup, l1 = mc.compare_to_kernel(h, h.density.copy())
        assert sup == 0.0 and l1 == 0.0
        sup, l1 = mc.compare_to_kernel(h, h.density + 0.1)
        assert sup >= 0.1 - 1e-12
        with pytest.raises(ValueError):
            mc.compare_to_kernel(h, h.density[:-1])


class TestSpacings:
    def test_unfolded_mean_one(self, gue128):
        s = mc.local_statistics(gue128, (0.0, 0.5, 1.0 / math.pi))
        assert len(s) >= 200
        assert s.mean() == pytest.approx(1.0, abs=0.05)

    def test_window_as_scaling_window(self, gue128, semicircle):
        win = op.bulk_window(semicircle, 0.0, np.linspace(-0.5 / math.pi * 128, 0.5 / math.pi * 128, 5))
        s = mc.local_statistics(gue128, win)
        assert s.mean() == pytest.approx(1.0, abs=0.05)

    def test_empty_window(self, gue128):
        with pytest.raises(ValueError):
            mc.local_statistics(gue128, (10.0, 0.1, 1.0))

    def test_repulsion_vs_poisson(self, gue128):
        win = (0.0, 0.5, 1.0 / math.pi)
        s = mc.local_statistics(gue128, win)
        p = mc.poisson_contrast(gue128, win)
        assert (s < 0.05).mean() <= 0.001
        assert (p < 0.05).mean() >= 0.02

    def test_beta_ordering_small_s(self):
        fr = {}
        for beta in (1, 2, 4):
            b = mc.sample_gaussian(beta, 64, 300, seed=11)
            s = mc.local_statistics(b, (0.0, 0.5, 1.0 / math.pi))
            fr[beta] = (s < 0.2).mean()
        assert fr[1] > fr[2] > fr[4]

    def test_gse_gue_histogram_crossing(self):
        b2 = mc.sample_gaussian(2, 64, 500, seed=21)
        b4 = mc.sample_gaussian(4, 64, 500, seed=22)
        win = (0.0, 0.5, 1.0 / math.pi)
        s2 = mc.local_statistics(b2, win)
        s4 = mc.local_statistics(b4, win)
        assert (s4 < 0.3).mean() < (s2 < 0.3).mean()
        assert ((0.8 < s4) & (s4 < 1.2)).mean() > ((0.8 < s2) & (s2 < 1.2)).mean()


class TestMetropolis:
    def test_density_matches_semicircle(self, semicircle):
        b = mc.sample_invariant(HERMITE, 2, 32, 32, 3200, 400, seed=5)
        assert b.count * b.n >= 1e5
        h = mc.empirical_density(b, 30, (-2.2, 2.2))
        sup, _ = mc.compare_to_kernel(h, eq.density(semicircle, h.centers))
        assert sup <= 0.08

    def test_log_density_permutation_invariant(self):
        x = np.sort(np.random.default_rng(0).uniform(-1.5, 1.5, 8))
        a = mc.log_density(HERMITE, 2, 8, 8, x)
        b = mc.log_density(HERMITE, 2, 8, 8, x[::-1].copy())
        assert a == pytest.approx(b, abs=1e-10)

    def test_no_tiny_spacings(self):
        b = mc.sample_invariant(HERMITE, 2, 16, 16, 800, 100, seed=8)
        spac = np.diff(b.eigenvalue_sets, axis=1)
        global_spacing = 4.0 / 16
        assert (spac < 1e-4 * global_spacing).sum() == 0

    def test_reproducible(self):
        a = mc.sample_invariant(HERMITE, 2, 8, 8, 200, 60, seed=4)
        b = mc.sample_invariant(HERMITE, 2, 8, 8, 200, 60, seed=4)
        assert np.array_equal(a.eigenvalue_sets, b.eigenvalue_sets)

    def test_detailed_balance_occupancy(self):
        # two-particle chain: occupancy ratio of two state boxes matches
        # the box-integrated density ratio within 3 sigma (chain means are
        # independent across the parallel walkers)
        pot = HERMITE
        beta, n, N = 2, 2, 2
        b = mc.sample_invariant(pot, beta, n, N, count=6000, steps=800, seed=13)
        lo_box = np.array([-1.1, 0.9])
        hi_box = np.array([-0.4, 1.6])

        def occupancy(sets, center):
            return np.all(np.abs(sets - center) < 0.25, axis=1).mean()

        state_a = np.array([-0.8, 1.2])
        state_b = np.array([-0.2, 0.4])
        occ_a = occupancy(b.eigenvalue_sets, state_a)
        occ_b = occupancy(b.eigenvalue_sets, state_b)

        # quadrature of the two box probabilities (up to one normalization)
        from scipy.integrate import dblquad

        def dens(x2, x1):
            pts = np.array([x1, x2])
            return math.exp(mc.log_density(pot, beta, n, N, pts))

        pa = dblquad(dens, state_a[0] - 0.25, state_a[0] + 0.25,
                     state_a[1] - 0.25, state_a[1] + 0.25, epsrel=1e-8)[0]
        pb = dblquad(dens, state_b[0] - 0.25, state_b[0] + 0.25,
                     state_b[1] - 0.25, state_b[1] + 0.25, epsrel=1e-8)[0]
        # sorted states: each unordered box counted once on each side
        want = pb / pa
        got = occ_b / occ_a
        sigma = got * math.sqrt(1.0 / (occ_a * 6000) + 1.0 / (occ_b * 6000))
        assert abs(got - want) <= 3.0 * sigma + 0.05 * want

    def test_gue_n2_one_point_function(self):
        # R_1(x) = K_2(x, x); histogram of 1e5 eigenvalues against the
        # finite-n kernel from the orthogonal polynomials (several batches,
        # respecting the per-batch count cap)
        sets = np.concatenate([
            mc.sample_gaussian(2, 2, 10_000, seed=17 + i).eigenvalue_sets
            for i in range(5)])
        b = mc.SampleBatch(beta=2, n=2, N=2, seed=17, eigenvalue_sets=sets)
        w = op.WeightSpec(HERMITE, N=2)
        t = op.recurrence_table(w, 4)
        h = mc.empirical_density(b, 30, (-3.0, 3.0))
        pred = op.cd_kernel_grid(t, w, 2, h.centers, h.centers).diagonal() / 2.0
        sup, _ = mc.compare_to_kernel(h, pred)
        assert sup <= 0.03


class TestSerialization:
    def test_binary_roundtrip(self, gue128):
        back = mc.SampleBatch.from_bytes(gue128.to_bytes())
        assert back.beta == 2 and back.n == 128 and back.seed == 42
        assert np.array_equal(back.eigenvalue_sets, gue128.eigenvalue_sets)

    def test_csv_export(self):
        b = mc.sample_gaussian(2, 3, 2, seed=1)
        text = b.to_csv()
        lines = text.strip().splitlines()
        assert lines[0] == "set_index,eigenvalue"
        assert len(lines) == 1 + 6

    def test_histogram_csv(self, gue128):
        h = mc.empirical_density(gue128, 5, (-2, 2))
        lines = h.to_csv().strip().splitlines()
        assert lines[0] == "bin_center,density"
        assert len(lines) == 6
