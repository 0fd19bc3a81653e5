"""Exact average entanglement entropy of uniformly random pure states.

For ``H_1 (x) H_2`` with ``dim H_1 = m <= n = dim H_2`` the sphere average
of the entanglement entropy is

    <E(m, n)> = sum_{k=n+1}^{mn} 1/k - (m - 1)/(2n).

It splits as ``I1 - I2`` with ``I1 = psi(mn + 1)`` and ``I2`` a sum over
Laguerre integrals, which lets the closed form be checked against two
independent routes.

Sign note: the formula with ``+ (m-1)/(2n)`` is also available
(:func:`page_average_entropy_plus`) only so that reports can show both and
so the Monte-Carlo tests can rule it out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .entropy_core import digamma, harmonic_range, harmonic_range_exact
from .errors import ConsistencyError, DomainError
from .laguerre import laguerre_I, laguerre_I_bracket, laguerre_norm

EXACT_RATIONAL_LIMIT = 10**4


@dataclass(frozen=True)
class PageParams:
    m: int
    n: int

    def __post_init__(self):
        for name in ("m", "n"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v:
                raise DomainError(f"{name} must be an integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        if self.m < 1:
            raise DomainError(f"m must be >= 1, got {self.m}")
        if self.n < self.m:
            raise DomainError(f"need m <= n, got m={self.m}, n={self.n}")
        if self.m * self.n > 2**62:
            raise DomainError("m*n exceeds 2**62")

    @property
    def dim(self) -> int:
        return self.m * self.n


def page_average_entropy(m: int, n: int) -> float:
    """Average entanglement entropy (nats) over the unit sphere of ``C^m (x) C^n``."""
    p = PageParams(m, n)
    return harmonic_range(p.n + 1, p.dim) - (p.m - 1) / (2 * p.n)


def page_average_entropy_plus(m: int, n: int) -> float:
    """The same sum with ``+ (m-1)/(2n)``; kept for comparison only."""
    p = PageParams(m, n)
    return harmonic_range(p.n + 1, p.dim) + (p.m - 1) / (2 * p.n)


def page_average_entropy_exact(m: int, n: int) -> Fraction:
    """Exact rational value of :func:`page_average_entropy` for ``m*n <= 10**4``."""
    p = PageParams(m, n)
    if p.dim > EXACT_RATIONAL_LIMIT:
        raise DomainError(f"exact mode needs m*n <= {EXACT_RATIONAL_LIMIT}, got {p.dim}")
    return harmonic_range_exact(p.n + 1, p.dim) - Fraction(p.m - 1, 2 * p.n)


def page_I1(m: int, n: int) -> float:
    p = PageParams(m, n)
    return digamma(p.dim + 1)


def page_I2(m: int, n: int) -> float:
    p = PageParams(m, n)
    return digamma(p.dim + 1) - harmonic_range(p.n + 1, p.dim) + (p.m - 1) / (2 * p.n)


def page_I2_via_laguerre(m: int, n: int) -> float:
    """``I2`` assembled from the Laguerre integrals, ``(1/mn) sum_k I_k / norm_k``."""
    p = PageParams(m, n)
    alpha = p.n - p.m
    terms = []
    for k in range(p.m):
        try:
            num, den = laguerre_I(k, alpha), laguerre_norm(k, alpha)
        except OverflowError:
            num = den = math.inf
        if math.isfinite(num) and math.isfinite(den):
            terms.append(num / den)
        else:
            # Gamma(k+alpha+1)/k! overflows; the ratio is the bracket itself
            terms.append(laguerre_I_bracket(k, alpha))
    return math.fsum(terms) / p.dim


@dataclass(frozen=True)
class ConsistencyReport:
    m: int
    n: int
    entropy: float
    entropy_plus_variant: float
    I1: float
    I2: float
    I2_laguerre: float
    residuals: dict = field(default_factory=dict)


def page_consistency(m: int, n: int, split_tol: float = 1e-12, laguerre_rtol: float = 1e-9) -> ConsistencyReport:
    """Cross-check the closed form against ``I1 - I2`` and the Laguerre route.

    Raises :class:`ConsistencyError` carrying the residuals when either
    identity fails.
    """
    p = PageParams(m, n)
    e = page_average_entropy(p.m, p.n)
    i1 = page_I1(p.m, p.n)
    i2 = page_I2(p.m, p.n)
    i2l = page_I2_via_laguerre(p.m, p.n)
    residuals = {
        "split": abs(e - (i1 - i2)),
        "laguerre_rel": abs(i2 - i2l) / max(abs(i2), 1e-300),
    }
    if residuals["split"] > split_tol or residuals["laguerre_rel"] > laguerre_rtol:
        raise ConsistencyError(f"page consistency failed for (m, n) = ({p.m}, {p.n})", residuals)
    return ConsistencyReport(
        m=p.m,
        n=p.n,
        entropy=e,
        entropy_plus_variant=page_average_entropy_plus(p.m, p.n),
        I1=i1,
        I2=i2,
        I2_laguerre=i2l,
        residuals=residuals,
    )
