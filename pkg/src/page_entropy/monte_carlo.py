"""Monte-Carlo sampling of uniformly random pure states.

A state is an ``n x m`` matrix of i.i.d. standard complex Gaussians
(real and imaginary parts ``N(0, 1/2)``, so ``E|z|^2 = 1``) divided by its
Frobenius norm, which is uniform on the unit sphere of ``C^m (x) C^n``.

Work is split into fixed chunks of 4096 samples.  Chunk ``c`` draws from
its own PCG64 stream seeded by ``SeedSequence(seed, spawn_key=(c,))``, and
per-chunk statistics are combined in chunk order, so results are
bit-identical for any number of workers.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .canonical_svd import schmidt_probabilities
from .entropy_core import entropy_rows
from .errors import DomainError
from .page_exact import PageParams

CHUNK_SIZE = 4096
GENERATOR_NAME = "numpy.random.PCG64"
MIN_SAMPLES = 100


def generator_version() -> str:
    return f"{GENERATOR_NAME} (numpy {np.__version__})"


@dataclass(frozen=True)
class RngStreamSpec:
    seed: int
    stream: int = 0

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2**64:
            raise DomainError(f"seed must fit in 64 unsigned bits, got {self.seed}")
        if int(self.stream) < 0:
            raise DomainError(f"stream index must be non-negative, got {self.stream}")

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream),))
        return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int
    elapsed: float


def sample_states(m: int, n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``count`` unit states as an array of shape ``(count, n, m)``."""
    p = PageParams(m, n)
    scale = math.sqrt(0.5)
    z = rng.standard_normal((count, p.n, p.m, 2))
    states = scale * (z[..., 0] + 1j * z[..., 1])
    norms = np.linalg.norm(states.reshape(count, -1), axis=1)
    bad = norms < 1e-300
    while np.any(bad):  # probability zero; redraw for safety
        k = int(bad.sum())
        z = rng.standard_normal((k, p.n, p.m, 2))
        states[bad] = scale * (z[..., 0] + 1j * z[..., 1])
        norms[bad] = np.linalg.norm(states[bad].reshape(k, -1), axis=1)
        bad = norms < 1e-300
    return states / norms[:, None, None]


def sample_state(m: int, n: int, rng: RngStreamSpec) -> np.ndarray:
    """The first state of stream ``rng``; an ``n x m`` complex matrix."""
    return sample_states(m, n, 1, rng.generator())[0]


def entropy_functional(p: np.ndarray) -> np.ndarray:
    return entropy_rows(p)


def purity_functional(p: np.ndarray) -> np.ndarray:
    return np.sum(np.asarray(p) ** 2, axis=-1)


def max_probability_functional(p: np.ndarray) -> np.ndarray:
    return np.max(p, axis=-1)


def one_functional(p: np.ndarray) -> np.ndarray:
    return np.ones(np.shape(p)[:-1])


FUNCTIONALS = {
    "entropy": entropy_functional,
    "purity": purity_functional,
    "maxp": max_probability_functional,
    "one": one_functional,
}


def _chunk_stats(m, n, f, seed, chunk, count):
    rng = RngStreamSpec(seed, chunk).generator()
    states = sample_states(m, n, count, rng)
    values = np.asarray(f(schmidt_probabilities(states)), dtype=float)
    total = math.fsum(values)
    mean = total / count
    m2 = math.fsum((values - mean) ** 2)
    return count, total, m2


def mc_expectation(m: int, n: int, f, samples: int, seed: int, workers: int = 1) -> McEstimate:
    """Estimate the sphere average of a functional of the Schmidt spectrum.

    ``f`` maps an array of ascending probability vectors (last axis) to
    per-sample values.  The result depends only on ``(m, n, f, samples,
    seed)``; ``workers`` changes wall time, not the numbers.
    """
    p = PageParams(m, n)
    samples = int(samples)
    if samples < 2:
        raise DomainError("need at least two samples for a standard error")
    if workers < 1:
        raise DomainError("workers must be >= 1")
    seed = int(seed)
    RngStreamSpec(seed)
    t0 = time.perf_counter()
    counts = [CHUNK_SIZE] * (samples // CHUNK_SIZE)
    if samples % CHUNK_SIZE:
        counts.append(samples % CHUNK_SIZE)
    jobs = [(p.m, p.n, f, seed, c, cnt) for c, cnt in enumerate(counts)]
    if workers == 1:
        stats = [_chunk_stats(*job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            stats = list(pool.map(lambda job: _chunk_stats(*job), jobs))
    mean = math.fsum(s[1] for s in stats) / samples
    # Chan et al. pairwise combination, evaluated in fixed chunk order
    m2 = math.fsum(s[2] + s[0] * (s[1] / s[0] - mean) ** 2 for s in stats)
    var = m2 / (samples - 1)
    se = math.sqrt(var / samples)
    return McEstimate(mean=mean, std_error=se, samples=samples, seed=seed, elapsed=time.perf_counter() - t0)


def mc_average_entropy(m: int, n: int, samples: int, seed: int, workers: int = 1) -> McEstimate:
    """Monte-Carlo estimate of the average entanglement entropy."""
    if samples < MIN_SAMPLES:
        raise DomainError(f"mc_average_entropy needs at least {MIN_SAMPLES} samples")
    return mc_expectation(m, n, entropy_functional, samples, seed, workers)
