"""Monte Carlo eigenvalue ensembles.

Dense Gaussian ensembles (GOE / GUE / GSE via the 2n x 2n complex
embedding of quaternion self-dual matrices) and a Metropolis random-walk
sampler for general invariant eigenvalue densities

    p(x) ~ prod_{i<j} |x_i - x_j|^beta  prod_j w(x_j)^{beta/2-ish},

together with the empirical statistics (histograms, unfolded spacings,
Poisson contrast) used to cross-check the kernel predictions.

Entry variances are normalized so every Gaussian ensemble has limiting
density supported on [-2, 2]; that keeps the beta in {1, 2, 4} spacing
comparisons on a common local density.

Reproducibility: each matrix draw / chain owns a child of
numpy.random.SeedSequence(seed), so batches are byte-identical for a fixed
seed and independent of any worker partitioning.
"""

from __future__ import annotations

import io
import math
import struct
from dataclasses import dataclass

import numpy as np

from . import equilibrium as eqm
from .equilibrium import Potential

__all__ = [
    "SampleBatch",
    "Histogram",
    "AcceptanceRateError",
    "sample_gaussian",
    "sample_invariant",
    "empirical_density",
    "local_statistics",
    "poisson_contrast",
    "compare_to_kernel",
]


class AcceptanceRateError(RuntimeError):
    """Metropolis proposal tuning left the [0.1, 0.6] band."""


@dataclass
class SampleBatch:
    """Sorted eigenvalue sets drawn from one ensemble."""

    beta: int
    n: int
    N: int
    seed: int
    eigenvalue_sets: np.ndarray  # shape (count, n), each row sorted

    @property
    def count(self) -> int:
        return self.eigenvalue_sets.shape[0]

    def to_bytes(self) -> bytes:
        head = struct.pack("<4sHiiiqi", b"RMTB", 1, self.beta, self.n, self.N,
                           self.seed, self.count)
        body = self.eigenvalue_sets.astype("<f8").tobytes()
        return head + body

    @classmethod
    def from_bytes(cls, blob: bytes) -> "SampleBatch":
        magic, ver, beta, n, bign, seed, count = struct.unpack_from("<4sHiiiqi", blob)
        if magic != b"RMTB" or ver != 1:
            raise ValueError("unrecognized sample batch record")
        off = struct.calcsize("<4sHiiiqi")
        data = np.frombuffer(blob, dtype="<f8", offset=off).reshape(count, n)
        return cls(beta=beta, n=n, N=bign, seed=seed,
                   eigenvalue_sets=data.copy())

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("set_index,eigenvalue\n")
        for i, row in enumerate(self.eigenvalue_sets):
            for v in row:
                buf.write(f"{i},{float(v)!r}\n")
        return buf.getvalue()


@dataclass
class Histogram:
    centers: np.ndarray
    density: np.ndarray
    edges: np.ndarray

    @property
    def mass(self) -> float:
        return float(np.sum(self.density * np.diff(self.edges)))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("bin_center,density\n")
        for c, d in zip(self.centers, self.density):
            buf.write(f"{float(c)!r},{float(d)!r}\n")
        return buf.getvalue()


# ---------------------------------------------------------------------------
# dense Gaussian ensembles

def _goe_matrix(rng, n):
    a = rng.normal(scale=math.sqrt(2.0 / n), size=(n, n))
    return (a + a.T) / 2.0


def _gue_matrix(rng, n):
    re = rng.normal(scale=math.sqrt(1.0 / n), size=(n, n))
    im = rng.normal(scale=math.sqrt(1.0 / n), size=(n, n))
    a = re + 1j * im
    return (a + a.conj().T) / 2.0


def _gse_matrix(rng, n):
    """Complex 2n x 2n embedding [[A, B], [-conj B, conj A]] with A
    Hermitian and B antisymmetric; every eigenvalue appears twice."""
    re = rng.normal(scale=math.sqrt(0.5 / n), size=(n, n))
    im = rng.normal(scale=math.sqrt(0.5 / n), size=(n, n))
    a = (re + 1j * im)
    a = (a + a.conj().T) / 2.0
    re = rng.normal(scale=math.sqrt(0.5 / n), size=(n, n))
    im = rng.normal(scale=math.sqrt(0.5 / n), size=(n, n))
    b = re + 1j * im
    b = (b - b.T) / 2.0
    top = np.hstack([a, b])
    bot = np.hstack([-b.conj(), a.conj()])
    return np.vstack([top, bot])


def _gaussian_draws(beta, n, children):
    out = np.empty((len(children), n))
    for i, child in enumerate(children):
        rng = np.random.default_rng(child)
        if beta == 1:
            ev = np.linalg.eigvalsh(_goe_matrix(rng, n))
        elif beta == 2:
            ev = np.linalg.eigvalsh(_gue_matrix(rng, n))
        else:
            full = np.linalg.eigvalsh(_gse_matrix(rng, n))
            pairs = full.reshape(n, 2)
            if np.abs(pairs[:, 0] - pairs[:, 1]).max() > 1e-10:
                raise AssertionError("GSE spectrum not doubly degenerate")
            ev = pairs.mean(axis=1)
        out[i] = np.sort(ev)
    return out


def _gaussian_draws_star(args):
    return _gaussian_draws(*args)


def sample_gaussian(beta: int, n: int, count: int, seed: int,
                    workers: int = 1) -> SampleBatch:
    """Eigenvalue batches of dense GOE (beta 1), GUE (2) or GSE (4)
    matrices, scaled so the limiting density is the semicircle on [-2, 2].

    The GSE spectrum is computed from the 2n x 2n complex embedding and
    deduplicated (Kramers pairs verified to 1e-10).  Each draw owns a
    spawned substream, so the batch does not depend on `workers`."""
    if beta not in (1, 2, 4):
        raise ValueError("beta must be 1, 2 or 4")
    if n > 512 or count > 10_000:
        raise ValueError("supported ranges: n <= 512, count <= 1e4")
    children = np.random.SeedSequence(seed).spawn(count)
    if workers > 1 and count > 8:
        from concurrent.futures import ProcessPoolExecutor

        blocks = np.array_split(np.arange(count), min(workers, count))
        args = [(beta, n, [children[i] for i in blk]) for blk in blocks if len(blk)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            out = np.concatenate(list(pool.map(_gaussian_draws_star, args)), axis=0)
    else:
        out = _gaussian_draws(beta, n, children)
    return SampleBatch(beta=beta, n=n, N=n, seed=seed, eigenvalue_sets=out)


# ---------------------------------------------------------------------------
# Metropolis sampler for invariant densities

def log_density(V: Potential, beta: int, n: int, N: int, x: np.ndarray):
    """log of the unnormalized eigenvalue density
    beta sum_{i<j} log|x_i-x_j| - N sum V(x_j) (+ singularity factors)."""
    x = np.asarray(x, dtype=float)
    d = np.abs(x[:, None] - x[None, :])
    iu = np.triu_indices(n, 1)
    lp = beta * np.sum(np.log(d[iu]))
    lp -= N * np.sum(V(x))
    al = V.singularity_alpha
    if al != 0.0:
        lp += (al if V.hard_edge else 2.0 * al) * np.sum(np.log(np.abs(x)))
    return lp


def _run_chains(V: Potential, beta: int, n: int, N: int, seeds, per: int,
                burn: int, spacing: int, support):
    """Advance a block of independent Metropolis chains (one spawned seed
    each, proposal width tuned per chain) and record `per` sorted states
    per chain at the given sweep spacing."""
    chains = len(seeds)
    rngs = [np.random.default_rng(s) for s in seeds]
    a, b = support
    base = np.linspace(a + 0.05 * (b - a), b - 0.05 * (b - a), n)
    x = np.stack([base + 0.01 * (b - a) * r.standard_normal(n) for r in rngs])
    if V.hard_edge:
        x = np.abs(x) + 1e-6
    width = np.full(chains, 0.5 * (b - a) / math.sqrt(n))

    def sweep(tune_step=None):
        accepted = np.zeros(chains)
        for i in range(n):
            prop = np.array([r.normal(0.0, wi) for r, wi in zip(rngs, width)])
            u = np.array([r.uniform() for r in rngs])
            xi_new = x[:, i] + prop
            delta = -N * (V(xi_new) - V(x[:, i]))
            others = np.delete(np.arange(n), i)
            dnew = np.abs(xi_new[:, None] - x[:, others])
            dold = np.abs(x[:, i][:, None] - x[:, others])
            with np.errstate(divide="ignore"):
                delta += beta * (np.sum(np.log(dnew), axis=1)
                                 - np.sum(np.log(dold), axis=1))
                al = V.singularity_alpha
                if al != 0.0:
                    fac = al if V.hard_edge else 2.0 * al
                    delta += fac * (np.log(np.abs(xi_new)) - np.log(np.abs(x[:, i])))
            if V.hard_edge:
                delta = np.where(xi_new > 0.0, delta, -np.inf)
            take = np.log(u) < delta
            x[take, i] = xi_new[take]
            accepted += take
        rate = accepted / n
        if tune_step is not None:
            width[:] = width * np.exp((rate - 0.3) / math.sqrt(1.0 + tune_step))
        return rate

    for t in range(burn):
        sweep(tune_step=t)
    # frozen-rate check averaged over enough sweeps to beat binomial noise
    check_sweeps = max(8, 256 // n)
    rate = np.mean([sweep() for _ in range(check_sweeps)], axis=0)
    if rate.min() < 0.1 or rate.max() > 0.6:
        raise AcceptanceRateError(
            f"tuned acceptance rate in [{rate.min():.3f}, {rate.max():.3f}] "
            "leaves the [0.1, 0.6] band")
    records = []
    for _ in range(per):
        for _ in range(spacing):
            sweep()
        records.append(np.sort(x, axis=1).copy())
    # (chain, record) ordering so chain blocks concatenate cleanly
    return np.stack(records, axis=1).reshape(chains * per, n)


def sample_invariant(V: Potential, beta: int, n: int, N: int, count: int,
                     steps: int, seed: int, workers: int = 1) -> SampleBatch:
    """Metropolis random-walk sampling of the invariant eigenvalue density
    with log-density beta sum log|x_i - x_j| - N sum V.

    Per-coordinate Gaussian proposals across independent parallel chains,
    each owning a spawned substream and its own Robbins-Monro width tuning
    (target acceptance 0.3 during the burn-in of steps/2 sweeps, frozen
    after; AcceptanceRateError if a frozen rate leaves [0.1, 0.6]).
    Records are spaced over the remaining sweep budget.  Chain blocks may
    be distributed over processes; results are independent of `workers`."""
    if beta not in (1, 2, 4):
        raise ValueError("beta must be 1, 2 or 4")
    if n > 128:
        raise ValueError("sample_invariant supports n <= 128")
    chains = min(count, 64)
    per = -(-count // chains)
    seeds = np.random.SeedSequence(seed).spawn(chains)
    mu = eqm.solve_equilibrium(V)
    burn = max(steps // 2, 20)
    spacing = max(1, (steps - burn) // max(per, 1))
    if workers > 1 and chains > 1:
        from concurrent.futures import ProcessPoolExecutor

        blocks = np.array_split(np.arange(chains), min(workers, chains))
        args = [(V, beta, n, N, [seeds[i] for i in blk], per, burn, spacing,
                 mu.support) for blk in blocks if len(blk)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_chains_star, args))
        sets = np.concatenate(parts, axis=0)
    else:
        sets = _run_chains(V, beta, n, N, seeds, per, burn, spacing, mu.support)
    # chain-major order: records of chain c sit at rows [c*per, (c+1)*per)
    sets = sets[:count] if per == 1 else _interleave_trim(sets, chains, per, count)
    return SampleBatch(beta=beta, n=n, N=N, seed=seed, eigenvalue_sets=sets)


def _run_chains_star(args):
    return _run_chains(*args)


def _interleave_trim(sets, chains, per, count):
    """Take records round-robin across chains so truncation to `count`
    drops late records evenly."""
    idx = [c * per + r for r in range(per) for c in range(chains)]
    return sets[np.array(idx[:count])]


# ---------------------------------------------------------------------------
# empirical statistics

def empirical_density(batch: SampleBatch, bins: int, range_: tuple) -> Histogram:
    """Normalized histogram of all eigenvalues (integrates to 1 over the
    range)."""
    if bins > 1000:
        raise ValueError("bins must not exceed 1000")
    counts, edges = np.histogram(batch.eigenvalue_sets.ravel(), bins=bins,
                                 range=range_, density=True)
    centers = 0.5 * (edges[:-1] + edges[1:])
    return Histogram(centers=centers, density=counts, edges=edges)


def local_statistics(batch: SampleBatch, window) -> np.ndarray:
    """Consecutive spacings inside a window around a bulk point, unfolded
    by the local density so the mean spacing is 1.

    window: an orthopoly.ScalingWindow (x_star, c = local density, grid
    extent interpreted at scale c*n) or a plain (x_star, half_width,
    density) triple."""
    if hasattr(window, "x_star"):
        c = window.c
        x0 = window.x_star
        half = float(np.max(np.abs(window.grid))) / window.c_n(batch.n)
    else:
        x0, half, c = window
    lo, hi = x0 - half, x0 + half
    out = []
    for row in batch.eigenvalue_sets:
        sel = row[(row >= lo) & (row <= hi)]
        if len(sel) >= 2:
            out.append(np.diff(sel) * batch.n * c)
    if not out:
        raise ValueError("no eigenvalues found in the window")
    return np.concatenate(out)


def poisson_contrast(batch: SampleBatch, window, seed: int = 0) -> np.ndarray:
    """Unfolded spacings of a Poisson resample: per set, the same number
    of points dropped uniformly in the window (the null model against
    which eigenvalue repulsion is judged)."""
    if hasattr(window, "x_star"):
        c = window.c
        x0 = window.x_star
        half = float(np.max(np.abs(window.grid))) / window.c_n(batch.n)
    else:
        x0, half, c = window
    lo, hi = x0 - half, x0 + half
    rng = np.random.default_rng(np.random.SeedSequence([seed, batch.seed & 0x7FFFFFFF]))
    out = []
    for row in batch.eigenvalue_sets:
        k = int(((row >= lo) & (row <= hi)).sum())
        if k >= 2:
            pts = np.sort(rng.uniform(lo, hi, k))
            out.append(np.diff(pts) * batch.n * c)
    return np.concatenate(out)


def compare_to_kernel(empirical: Histogram, predicted: np.ndarray):
    """Sup and integrated-L1 distances between an empirical histogram and
    a prediction evaluated on the same bin centers."""
    predicted = np.asarray(predicted, dtype=float)
    if predicted.shape != empirical.density.shape:
        raise ValueError("prediction grid does not match the histogram bins")
    diff = np.abs(empirical.density - predicted)
    widths = np.diff(empirical.edges)
    return float(diff.max()), float(np.sum(diff * widths))
