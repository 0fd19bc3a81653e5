"""Canonical ("modified") singular value decomposition of state matrices.

A vector ``v`` in ``C^m (x) C^n`` is stored as its ``n x m`` coefficient
matrix ``A`` (``m <= n``).  Any thin SVD ``A = U diag(sigma) V^*`` can be
changed by a common phase on matching columns of ``U`` and ``V``.  Fixing

* ``sigma`` ascending, and
* every diagonal entry of ``V`` real and non-negative

removes that freedom when the singular values are distinct.  The squared,
normalised singular values are the spectrum of the reduced density matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError

_JACOBI_TOL = 1e-15
_MAX_SWEEPS = 80
_PHASE_ZERO = 1e-14
_TIE_RTOL = 1e-12


@dataclass(frozen=True)
class ModifiedSvd:
    U: np.ndarray  # n x m, orthonormal columns
    sigma: np.ndarray  # ascending
    V: np.ndarray  # m x m unitary, real non-negative diagonal

    def reconstruct(self) -> np.ndarray:
        return (self.U * self.sigma) @ self.V.conj().T


@dataclass(frozen=True)
class SchmidtSpectrum:
    sigma: np.ndarray
    p: np.ndarray


def as_state_matrix(A) -> np.ndarray:
    """Validate ``A`` as an ``n x m`` complex state matrix with ``m <= n``."""
    arr = np.asarray(A)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.size == 0:
        raise DomainError("state matrix must be a non-empty 2-d array")
    arr = arr.astype(complex)
    if not np.all(np.isfinite(arr)):
        raise DomainError("state matrix has non-finite entries")
    n, m = arr.shape
    if m > n:
        raise DomainError(f"state matrix has m={m} columns > n={n} rows; transpose it first")
    return arr


def jacobi_svd(A) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD by one-sided (Hestenes) Jacobi rotations.

    Returns ``(U, sigma, V)`` with ``A = U diag(sigma) V^*``, in no
    particular order and with no phase convention.  Columns of ``U`` that
    belong to zero singular values are completed to an orthonormal set.
    """
    W = as_state_matrix(A).copy()
    n, m = W.shape
    V = np.eye(m, dtype=complex)
    for _ in range(_MAX_SWEEPS):
        rotated = False
        for i in range(m - 1):
            for j in range(i + 1, m):
                wi, wj = W[:, i], W[:, j]
                alpha = np.vdot(wi, wi).real
                beta = np.vdot(wj, wj).real
                g = np.vdot(wi, wj)
                ag = abs(g)
                if ag <= _JACOBI_TOL * math.sqrt(alpha * beta) or ag == 0.0:
                    continue
                rotated = True
                phase = g / ag
                zeta = (beta - alpha) / (2.0 * ag)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.hypot(1.0, zeta))
                c = 1.0 / math.hypot(1.0, t)
                s = c * t
                # columns (i, j) <- (c a_i - s e^{-i phi} a_j, s a_i + c e^{-i phi} a_j)
                for M in (W, V):
                    mi = M[:, i].copy()
                    mj = M[:, j] * np.conj(phase)
                    M[:, i] = c * mi - s * mj
                    M[:, j] = s * mi + c * mj
        if not rotated:
            break
    else:
        raise ConvergenceError(f"one-sided Jacobi did not converge in {_MAX_SWEEPS} sweeps")
    sigma = np.linalg.norm(W, axis=0)
    scale = sigma.max() if sigma.size else 0.0
    U = np.zeros((n, m), dtype=complex)
    live = sigma > scale * 1e-14 * max(n, m) if scale > 0 else np.zeros(m, dtype=bool)
    U[:, live] = W[:, live] / sigma[live]
    sigma = np.where(live, sigma, 0.0)
    if not np.all(live):
        U = _complete_columns(U, live)
    return U, sigma, V


def _complete_columns(U: np.ndarray, live: np.ndarray) -> np.ndarray:
    # Gram-Schmidt standard basis vectors against the columns fixed so far
    n, m = U.shape
    out = U.copy()
    basis = [out[:, k] for k in range(m) if live[k]]
    candidates = iter(np.eye(n, dtype=complex).T)
    for k in range(m):
        if live[k]:
            continue
        for e in candidates:
            w = e.copy()
            for _ in range(2):
                for b in basis:
                    w -= np.vdot(b, w) * b
            nw = np.linalg.norm(w)
            if nw > 1e-8:
                out[:, k] = w / nw
                basis.append(out[:, k])
                break
    return out


def canonicalize(U, sigma, V) -> ModifiedSvd:
    """Bring any thin SVD ``(U, sigma, V)`` of a matrix into canonical form.

    Sorts singular values ascending and rotates each column pair of
    ``U``/``V`` by the phase that makes ``V[j, j]`` real and non-negative
    (phase 1 when ``V[j, j]`` vanishes).  Equal singular values are
    ordered by the real parts of the corresponding ``V`` columns,
    lexicographically descending, so the identity stays the identity.
    """
    U = np.array(U, dtype=complex)
    V = np.array(V, dtype=complex)
    sigma = np.array(sigma, dtype=float)
    m = sigma.size
    if U.shape[1] != m or V.shape != (m, m):
        raise DomainError("inconsistent SVD factor shapes")
    order = np.argsort(sigma, kind="stable")
    U, sigma, V = U[:, order], sigma[order], V[:, order]
    U, V = _fix_phases(U, V)
    # tie-breaking among equal singular values, then re-fix phases
    tol = _TIE_RTOL * (sigma[-1] if m else 0.0)
    start = 0
    changed = False
    perm = list(range(m))
    while start < m:
        stop = start + 1
        while stop < m and sigma[stop] - sigma[start] <= tol:
            stop += 1
        if stop - start > 1:
            block = sorted(
                range(start, stop),
                key=lambda k: tuple(np.round(V[:, k].real, 12)),
                reverse=True,
            )
            if block != list(range(start, stop)):
                perm[start:stop] = block
                changed = True
        start = stop
    if changed:
        U, V = U[:, perm], V[:, perm]
        U, V = _fix_phases(U, V)
    return ModifiedSvd(U=U, sigma=sigma, V=V)


def _fix_phases(U: np.ndarray, V: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d = np.diag(V).copy()
    mag = np.abs(d)
    phase = np.where(mag > _PHASE_ZERO, d / np.where(mag > 0, mag, 1.0), 1.0)
    V = V * np.conj(phase)
    U = U * np.conj(phase)
    idx = np.arange(V.shape[0])
    V[idx, idx] = np.where(mag > _PHASE_ZERO, mag, V[idx, idx])
    return U, V


def canonical_svd(A) -> ModifiedSvd:
    """Unique ("modified") SVD of an ``n x m`` matrix with ``m <= n``."""
    return canonicalize(*jacobi_svd(A))


def schmidt_spectrum(A) -> SchmidtSpectrum:
    """Ascending Schmidt coefficients and reduced-density eigenvalues of ``A``.

    ``A`` need not be normalised; the probabilities are
    ``sigma_j^2 / sum_k sigma_k^2``.
    """
    sigma = canonical_svd(A).sigma
    s2 = sigma**2
    total = math.fsum(s2)
    if total == 0.0:
        raise DomainError("zero state has no Schmidt spectrum")
    return SchmidtSpectrum(sigma=sigma, p=s2 / total)


def schmidt_probabilities(states: np.ndarray) -> np.ndarray:
    """Ascending reduced-density spectra for a stack of shape ``(..., n, m)``.

    Uses LAPACK singular values; this is the throughput path for Monte
    Carlo and is cross-checked against :func:`canonical_svd` in tests.
    """
    s = np.linalg.svd(states, compute_uv=False)
    s2 = np.sort(s * s, axis=-1)
    return s2 / s2.sum(axis=-1, keepdims=True)
