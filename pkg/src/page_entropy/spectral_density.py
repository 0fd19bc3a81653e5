"""Joint density of reduced-density eigenvalues and deterministic averages.

Up to normalisation the eigenvalues ``q`` of the reduced density matrix of
a uniformly random pure state have density

    Delta(q)^2 * prod_j q_j^(n - m)

on the probability simplex ``F_m``; the radial variables cancel in every
ratio, so no normalising constant is needed.  :func:`simplex_expectation`
integrates a functional against this density with tensor Gauss-Legendre
rules.

Because both the density and the admissible functionals are symmetric, the
integral is taken over the ordered chamber ``q_1 <= ... <= q_m`` (a simplex
itself) with the functional averaged over all coordinate permutations.
Functionals such as ``max(q)`` are smooth there, so quadrature converges
quickly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .monte_carlo import mc_expectation
from .page_exact import PageParams

MIN_RESOLUTION = 8
CONVERGENCE_TOL = 1e-4


def vandermonde_sq(p) -> float:
    """``prod_{j<k} (p_k - p_j)^2``."""
    arr = np.asarray(p, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("non-finite entries")
    return float(_vandermonde_sq_rows(arr[None, :])[0])


def _vandermonde_sq_rows(P: np.ndarray) -> np.ndarray:
    m = P.shape[-1]
    out = np.ones(P.shape[:-1])
    for j in range(m):
        for k in range(j + 1, m):
            out = out * (P[..., k] - P[..., j]) ** 2
    return out


def eigen_density_unnormalized(p, m: int, n: int) -> float:
    """``Delta(p)^2 prod p_j^(n-m)`` at a point of ``T_m``; ``0^0 = 1``."""
    params = PageParams(m, n)
    arr = np.asarray(p, dtype=float)
    if arr.shape != (params.m,):
        raise DomainError(f"expected a point with {params.m} coordinates, got shape {arr.shape}")
    if np.any(arr < 0):
        raise DomainError("eigenvalue density is defined for non-negative coordinates only")
    if arr.sum() > 1 + 1e-12:
        raise DomainError("point lies outside T_m (coordinates sum above 1)")
    return float(_density_rows(arr[None, :], params.n - params.m)[0])


def _density_rows(P: np.ndarray, power: int) -> np.ndarray:
    w = _vandermonde_sq_rows(P)
    if power:
        w = w * np.prod(P**power, axis=-1)
    return w


@lru_cache(maxsize=64)
def _chamber_rule(m: int, resolution: int) -> tuple[np.ndarray, np.ndarray]:
    """Points (ascending probability vectors) and weights on the ordered chamber."""
    x, w = np.polynomial.legendre.leggauss(resolution)
    x = 0.5 * (x + 1.0)
    w = 0.5 * w
    if m == 2:
        q1 = 0.5 * x
        pts = np.stack([q1, 1.0 - q1], axis=-1)
        wts = 0.5 * w
    elif m == 3:
        # chamber vertices: A = centroid, B = (0, 1/2, 1/2), C = (0, 0, 1)
        A = np.array([1 / 3, 1 / 3, 1 / 3])
        B = np.array([0.0, 0.5, 0.5])
        C = np.array([0.0, 0.0, 1.0])
        u, v = np.meshgrid(x, x, indexing="ij")
        wu, wv = np.meshgrid(w, w, indexing="ij")
        # Duffy collapse at A: point = A + u (B - A) + u v (C - B), jacobian ~ u
        pts = A + u[..., None] * (B - A) + (u * v)[..., None] * (C - B)
        pts = pts.reshape(-1, 3)
        wts = (wu * wv * u).reshape(-1)
    else:
        raise DomainError(f"deterministic quadrature supports m in {{2, 3}}, got m={m}")
    pts = np.clip(pts, 0.0, 1.0)
    pts.setflags(write=False)
    wts.setflags(write=False)
    return pts, wts


def _symmetrized(f, pts: np.ndarray) -> np.ndarray:
    perms = list(itertools.permutations(range(pts.shape[-1])))
    acc = np.zeros(pts.shape[0])
    for perm in perms:
        acc = acc + np.asarray(f(pts[:, perm]), dtype=float)
    return acc / len(perms)


def _ratio(f, m: int, n: int, resolution: int) -> float:
    pts, wts = _chamber_rule(m, resolution)
    dens = wts * _density_rows(pts, n - m)
    return math.fsum(dens * _symmetrized(f, pts)) / math.fsum(dens)


@dataclass(frozen=True)
class SimplexExpectation:
    value: float
    error_estimate: float
    resolution: int
    converged: bool


def simplex_expectation(f, m: int, n: int, resolution: int = 48) -> SimplexExpectation:
    """Average of ``f`` over the eigenvalue density on ``F_m`` (``m`` in {2, 3}).

    ``f`` takes an array of probability vectors (last axis) and returns one
    value per row.  The rule is evaluated at ``resolution`` and
    ``2 * resolution`` nodes per axis; the finer value is returned and the
    absolute difference is the error estimate.
    """
    params = PageParams(m, n)
    if params.m not in (2, 3):
        raise DomainError(f"simplex quadrature supports m in {{2, 3}}, got m={params.m}")
    if resolution < MIN_RESOLUTION:
        raise DomainError(f"resolution must be at least {MIN_RESOLUTION} nodes per axis")
    coarse = _ratio(f, params.m, params.n, resolution)
    fine = _ratio(f, params.m, params.n, 2 * resolution)
    err = abs(fine - coarse)
    return SimplexExpectation(
        value=fine, error_estimate=err, resolution=2 * resolution, converged=err <= CONVERGENCE_TOL
    )


@dataclass(frozen=True)
class DensityCheckReport:
    m: int
    n: int
    functional: str
    quadrature: float
    quadrature_error: float
    converged: bool
    mc_mean: float
    mc_std_error: float
    samples: int
    seed: int
    z_score: float
    passed: bool


def density_vs_sphere_check(
    m: int,
    n: int,
    f,
    samples: int = 100_000,
    seed: int = 0,
    resolution: int = 48,
    name: str | None = None,
    workers: int = 1,
) -> DensityCheckReport:
    """Compare the eigenvalue-density average of ``f`` with sphere Monte Carlo.

    Passes when the two agree within four Monte-Carlo standard errors plus
    the quadrature error estimate.
    """
    quad = simplex_expectation(f, m, n, resolution)
    mc = mc_expectation(m, n, f, samples, seed, workers)
    diff = abs(quad.value - mc.mean)
    allowed = 4.0 * mc.std_error + quad.error_estimate
    z = diff / mc.std_error if mc.std_error > 0 else (0.0 if diff <= 1e-12 else math.inf)
    return DensityCheckReport(
        m=m,
        n=n,
        functional=name or getattr(f, "__name__", "f"),
        quadrature=quad.value,
        quadrature_error=quad.error_estimate,
        converged=quad.converged,
        mc_mean=mc.mean,
        mc_std_error=mc.std_error,
        samples=mc.samples,
        seed=mc.seed,
        z_score=z,
        passed=diff <= allowed + 1e-12,
    )
