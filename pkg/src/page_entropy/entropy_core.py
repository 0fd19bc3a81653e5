"""Scalar entropy and special-function kernel.

Everything here works in nats.  The digamma function is implemented
directly (upward recurrence followed by the Stirling-type asymptotic
series) so that the harmonic-sum identities used elsewhere in the package
can be checked against an independent route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError

# 30 significant digits; more than binary64 can hold, kept for documentation value.
EULER_GAMMA = float("0.577215664901532860606512090082")

BERNOULLI_DEPTH = 10
DIRECT_SUM_LIMIT = 10**8
_CHUNK = 1 << 20
_SERIES_THRESHOLD = 10.0
PROBABILITY_TOLERANCE = 1e-9


@dataclass(frozen=True)
class BernoulliTable:
    """Even Bernoulli numbers ``B_2, B_4, ..., B_2K``.

    ``exact[k-1]`` holds ``B_2k`` as a :class:`~fractions.Fraction` and
    ``values[k-1]`` its binary64 rounding.
    """

    exact: tuple[Fraction, ...]
    values: tuple[float, ...]

    @property
    def depth(self) -> int:
        return len(self.exact)

    def b2k(self, k: int) -> Fraction:
        if not 1 <= k <= self.depth:
            raise DomainError(f"B_2k requested for k={k}, table depth is {self.depth}")
        return self.exact[k - 1]


def _bernoulli_all(n_max: int) -> list[Fraction]:
    # sum_{j=0}^{n} C(n+1, j) B_j = 0 for n >= 1, B_0 = 1
    b = [Fraction(1)]
    for n in range(1, n_max + 1):
        acc = sum(math.comb(n + 1, j) * b[j] for j in range(n))
        b.append(-acc / (n + 1))
    return b


def check_bernoulli_recurrence(values: list[Fraction]) -> bool:
    """Return True when ``values`` (B_0..B_n) satisfy the defining recurrence."""
    for n in range(1, len(values)):
        if sum(math.comb(n + 1, j) * values[j] for j in range(n + 1)) != 0:
            return False
    return True


@lru_cache(maxsize=None)
def bernoulli_table(depth: int = BERNOULLI_DEPTH) -> BernoulliTable:
    """Build (and cache) the table of ``B_2k`` for ``k = 1..depth``."""
    if depth < 1:
        raise DomainError("Bernoulli table depth must be at least 1")
    allb = _bernoulli_all(2 * depth)
    if not check_bernoulli_recurrence(allb):  # pragma: no cover - exact arithmetic
        raise RuntimeError("Bernoulli recurrence self-check failed")
    exact = tuple(allb[2 * k] for k in range(1, depth + 1))
    if exact[0] != Fraction(1, 6) or (depth > 1 and exact[1] != Fraction(-1, 30)):
        raise RuntimeError("Bernoulli table self-check failed")  # pragma: no cover
    return BernoulliTable(exact=exact, values=tuple(float(v) for v in exact))


def _validate_probabilities(p) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise DomainError("probability vector must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(arr)):
        raise DomainError("probability vector has non-finite entries")
    if np.any(arr < 0):
        raise DomainError(f"probability vector has negative entry {arr.min()!r}")
    total = math.fsum(arr)
    if abs(total - 1.0) > PROBABILITY_TOLERANCE:
        raise DomainError(f"probabilities sum to {total!r}, not 1")
    return arr / total


def shannon_entropy(p) -> float:
    """Shannon entropy ``-sum p_j ln p_j`` in nats, with ``0 ln 0 = 0``.

    The input is validated (non-negative, sums to 1 within 1e-9) and then
    renormalised, so vectors produced by floating-point pipelines are
    accepted.
    """
    q = _validate_probabilities(p)
    nz = q[q > 0]
    h = -math.fsum(nz * np.log(nz))
    return max(h, 0.0)


def entropy_rows(p: np.ndarray) -> np.ndarray:
    """Vectorised Shannon entropy over the last axis; no validation."""
    p = np.asarray(p, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, p * np.log(np.where(p > 0, p, 1.0)), 0.0)
    return np.maximum(-terms.sum(axis=-1), 0.0)


def digamma(x: float) -> float:
    """Digamma function for real ``x > 0``.

    Shifts the argument upward with ``psi(x) = psi(x + 1) - 1/x`` until it
    is at least 10, then sums the asymptotic series
    ``ln x - 1/(2x) - sum_k B_2k / (2k x^2k)`` with ten Bernoulli terms.
    """
    x = float(x)
    if not math.isfinite(x) or x <= 0:
        raise DomainError(f"digamma is only supported for finite x > 0, got {x!r}")
    shift = []
    while x < _SERIES_THRESHOLD:
        shift.append(1.0 / x)
        x += 1.0
    inv2 = 1.0 / (x * x)
    table = bernoulli_table()
    series = []
    power = 1.0
    for k, b in enumerate(table.values, start=1):
        power *= inv2
        series.append(b / (2 * k) * power)
    value = math.fsum([math.log(x), -0.5 / x] + [-s for s in series])
    if shift:
        value = math.fsum([value] + [-s for s in shift])
    return value


def _direct_harmonic(a: int, b: int) -> float:
    if b - a < 64:
        return math.fsum(1.0 / k for k in range(a, b + 1))
    partials = []
    for lo in range(a, b + 1, _CHUNK):
        hi = min(lo + _CHUNK, b + 1)
        partials.append(math.fsum(1.0 / np.arange(lo, hi, dtype=float)))
    return math.fsum(partials)


def harmonic_range(a: int, b: int) -> float:
    """Return ``sum_{k=a}^{b} 1/k``.

    ``b = a - 1`` is the empty sum.  Up to ``10**8`` terms are summed
    directly with :func:`math.fsum`; longer ranges use
    ``psi(b + 1) - psi(a)``.
    """
    a, b = int(a), int(b)
    if a < 1:
        raise DomainError(f"harmonic_range needs a >= 1, got a={a}")
    if b < a - 1:
        raise DomainError(f"harmonic_range needs b >= a - 1, got a={a}, b={b}")
    if b == a - 1:
        return 0.0
    if b - a + 1 > DIRECT_SUM_LIMIT:
        return digamma(b + 1) - digamma(a)
    return _direct_harmonic(a, b)


def harmonic_range_exact(a: int, b: int) -> Fraction:
    """Exact rational ``sum_{k=a}^{b} 1/k``; intended for small ranges."""
    a, b = int(a), int(b)
    if a < 1 or b < a - 1:
        raise DomainError(f"invalid harmonic range a={a}, b={b}")
    # common denominator first: summing Fractions pairwise is quadratic in digits
    den = 1
    for k in range(a, b + 1):
        den = den * k // math.gcd(den, k)
    return Fraction(sum(den // k for k in range(a, b + 1)), den)
