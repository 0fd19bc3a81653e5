"""Euler-Maclaurin expansion of the Page sum and semiclassical predictions.

Applying Euler-Maclaurin to ``f(x) = 1/x`` on ``[n, mn]`` gives

    <E(m, n)> = ln m + 1/(2mn) - m/(2n)
                + sum_{k=1}^{p/2} B_2k/(2k) (n^-2k - (mn)^-2k) + R_p,
    |R_p| <= 2 zeta(p)/(2 pi)^p * (p-1)! (n^-p - (mn)^-p).

When the factor dimensions are section-space dimensions
``m(N) ~ V1 N^d1`` and ``n(N) ~ V2 N^d2`` (``d1 <= d2``), the average
entropy behaves as ``d1 ln N + ln V1 - V1/(2 V2) + O(1/N)`` if
``d1 == d2`` and ``d1 ln N + ln V1 + O(1/N)`` otherwise.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from .entropy_core import bernoulli_table
from .errors import ConfigurationError, DomainError
from .page_exact import PageParams, page_average_entropy

SUPPORTED_ORDERS = (2, 4, 6, 8)

ZETA_EVEN = {
    2: math.pi**2 / 6,
    4: math.pi**4 / 90,
    6: math.pi**6 / 945,
    8: math.pi**8 / 9450,
}


def zeta_even_series(p: int, terms: int = 64) -> float:
    """``zeta(p)`` from a truncated series plus its Euler-Maclaurin tail.

    Used to cross-check the pinned constants in :data:`ZETA_EVEN`.
    """
    if p < 2:
        raise DomainError("zeta series needs p >= 2")
    N = terms
    head = math.fsum(k ** (-p) for k in range(1, N))
    # sum_{k>=N} k^-p = N^(1-p)/(p-1) + N^-p/2 + sum_j B_2j/(2j)! * (p)_(2j-1) N^(-p-2j+1)
    tail = [N ** (1 - p) / (p - 1), 0.5 * N ** (-p)]
    table = bernoulli_table()
    for j in range(1, table.depth + 1):
        # rising factorial p (p+1) ... (p+2j-2)
        rising = math.prod(range(p, p + 2 * j - 1))
        tail.append(table.values[j - 1] / math.factorial(2 * j) * rising * N ** (-p - 2 * j + 1))
    return math.fsum([head] + tail)


@dataclass(frozen=True)
class EmExpansion:
    value: float
    order: int
    remainder_bound: float


def _check_order(order: int) -> int:
    if int(order) != order or order % 2:
        raise DomainError(f"Euler-Maclaurin order must be even, got {order!r}")
    if order not in SUPPORTED_ORDERS:
        raise DomainError(f"order must be one of {SUPPORTED_ORDERS}, got {order}")
    return int(order)


def _bernoulli_terms(n: int, mn: int, order: int) -> list[float]:
    table = bernoulli_table()
    return [
        table.values[k - 1] / (2 * k) * (float(n) ** (-2 * k) - float(mn) ** (-2 * k))
        for k in range(1, order // 2 + 1)
    ]


def _remainder_bound(n: int, mn: int, order: int) -> float:
    scale = 2 * ZETA_EVEN[order] / (2 * math.pi) ** order
    return scale * math.factorial(order - 1) * (float(n) ** (-order) - float(mn) ** (-order))


def euler_maclaurin_page_sum(m: int, n: int, order: int = 2) -> EmExpansion:
    """Euler-Maclaurin approximation of ``sum_{k=n+1}^{mn} 1/k``."""
    p = PageParams(m, n)
    order = _check_order(order)
    if p.m < 2:
        raise DomainError("the Page sum is empty for m = 1")
    mn = p.dim
    terms = [math.log(p.m), 0.5 / mn, -0.5 / p.n] + _bernoulli_terms(p.n, mn, order)
    return EmExpansion(math.fsum(terms), order, _remainder_bound(p.n, mn, order))


def avg_entropy_expansion(m: int, n: int, order: int = 2) -> EmExpansion:
    """``ln m + 1/(2mn) - m/(2n) +`` Bernoulli terms, with the same remainder bound."""
    p = PageParams(m, n)
    order = _check_order(order)
    if p.m < 2:
        raise DomainError("the expansion needs m >= 2")
    mn = p.dim
    terms = [math.log(p.m), 0.5 / mn, -p.m / (2 * p.n)] + _bernoulli_terms(p.n, mn, order)
    return EmExpansion(math.fsum(terms), order, _remainder_bound(p.n, mn, order))


@dataclass(frozen=True)
class GeometrySpec:
    """Dimension data of a positive line bundle ``L -> M``.

    ``kind == "proj"``: ``M = P^d`` with ``O(1)``, ``dim H^0 = C(N+d, d)``.
    ``kind == "poly"``: ``dim H^0 = round(sum coeffs[i] N^(d-i))`` with
    ``coeffs[0] = volume``.
    """

    d: int
    volume: float
    kind: str = "poly"
    coeffs: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise ConfigurationError(f"complex dimension must be an integer >= 1, got {self.d!r}")
        if not (math.isfinite(self.volume) and self.volume > 0):
            raise ConfigurationError(f"volume must be positive, got {self.volume!r}")
        if self.kind not in ("proj", "poly"):
            raise ConfigurationError(f"unknown geometry kind {self.kind!r}")
        if self.kind == "poly":
            coeffs = tuple(float(c) for c in self.coeffs) or (float(self.volume),)
            if len(coeffs) > self.d + 1:
                raise ConfigurationError(f"too many coefficients for degree {self.d}: {coeffs}")
            if coeffs[0] != self.volume:
                raise ConfigurationError("leading coefficient must equal the volume")
            object.__setattr__(self, "coeffs", coeffs + (0.0,) * (self.d + 1 - len(coeffs)))

    @classmethod
    def projective(cls, d: int) -> "GeometrySpec":
        return cls(d=d, volume=1.0 / math.factorial(d), kind="proj")

    @classmethod
    def polynomial(cls, d: int, coeffs) -> "GeometrySpec":
        coeffs = tuple(float(c) for c in coeffs)
        if not coeffs:
            raise ConfigurationError("polynomial geometry needs a leading coefficient")
        return cls(d=d, volume=coeffs[0], kind="poly", coeffs=coeffs)

    @classmethod
    def parse(cls, text: str) -> "GeometrySpec":
        """Parse ``proj:d`` or ``poly:d:V[,c_{d-1},...,c_0]``."""
        parts = text.strip().split(":")
        kind = parts[0]
        if kind == "proj":
            if len(parts) != 2:
                raise ConfigurationError(f"expected 'proj:d', got {text!r}")
            return cls.projective(_parse_int(parts[1], text))
        if kind == "poly":
            if len(parts) != 3:
                raise ConfigurationError(f"expected 'poly:d:V[,c...]', got {text!r}")
            d = _parse_int(parts[1], text)
            coeffs = []
            for tok in parts[2].split(","):
                try:
                    coeffs.append(float(tok))
                except ValueError:
                    raise ConfigurationError(f"bad coefficient {tok!r} in geometry {text!r}") from None
            return cls.polynomial(d, coeffs)
        raise ConfigurationError(f"unknown geometry kind {kind!r} in {text!r}")

    def label(self) -> str:
        if self.kind == "proj":
            return f"proj:{self.d}"
        return f"poly:{self.d}:" + ",".join(repr(c) for c in self.coeffs)


def _parse_int(tok: str, text: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ConfigurationError(f"bad integer {tok!r} in geometry {text!r}") from None


def section_dimension(geom: GeometrySpec, N: int) -> int:
    """``dim H^0(M, L^N)`` for the modelled geometry."""
    if int(N) != N or N < 1:
        raise ConfigurationError(f"N must be an integer >= 1, got {N!r}")
    N = int(N)
    if geom.kind == "proj":
        return math.comb(N + geom.d, geom.d)
    value = math.fsum(c * float(N) ** (geom.d - i) for i, c in enumerate(geom.coeffs))
    dim = round(value)
    if dim < 1:
        raise ConfigurationError(f"geometry {geom.label()} gives dimension {dim} < 1 at N={N}")
    return dim


@dataclass(frozen=True)
class AsymptoteConstants:
    A1: float
    A2: float | None


def _ordered(geom1: GeometrySpec, geom2: GeometrySpec) -> tuple[GeometrySpec, GeometrySpec]:
    if geom1.d > geom2.d or (geom1.d == geom2.d and geom1.volume > geom2.volume):
        warnings.warn(
            "swapping geometries so that the first factor is the smaller one", stacklevel=3
        )
        return geom2, geom1
    return geom1, geom2


def asymptote_constants(geom1: GeometrySpec, geom2: GeometrySpec) -> AsymptoteConstants:
    g1, g2 = _ordered(geom1, geom2)
    a1 = math.log(g1.volume)
    a2 = -g1.volume / (2 * g2.volume) if g1.d == g2.d else None
    return AsymptoteConstants(a1, a2)


def predicted_entropy_asymptote(geom1: GeometrySpec, geom2: GeometrySpec, N: int) -> float:
    """Leading large-``N`` behaviour ``d1 ln N + A1 (+ A2)``."""
    g1, g2 = _ordered(geom1, geom2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        c = asymptote_constants(g1, g2)
    value = g1.d * math.log(N) + c.A1
    if c.A2 is not None:
        value += c.A2
    return value


@dataclass(frozen=True)
class ConvergenceRow:
    N: int
    m: int | None
    n: int | None
    swapped: bool
    exact: float
    asymptote: float
    diff: float
    n_diff: float
    expansion: float = math.nan
    remainder_bound: float = math.nan
    error: str | None = None


TABLE_COLUMNS = (
    "N", "m", "n", "swapped", "exact", "asymptote", "diff", "n_diff",
    "expansion", "remainder_bound", "error",
)


def convergence_table(geom1: GeometrySpec, geom2: GeometrySpec, N_list, order: int | None = None) -> list[ConvergenceRow]:
    """Exact average entropy against the semiclassical prediction, one row per ``N``.

    Rows with ``m(N) > n(N)`` are swapped and flagged.  A failing row is
    reported in its ``error`` field; the rest of the table is still built.
    """
    if order is not None:
        order = _check_order(order)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        g1, g2 = _ordered(geom1, geom2)
    rows = []
    for N in sorted(int(x) for x in N_list):
        try:
            m = section_dimension(g1, N)
            n = section_dimension(g2, N)
            swapped = m > n
            if swapped:
                m, n = n, m
            exact = page_average_entropy(m, n)
            asym = predicted_entropy_asymptote(g1, g2, N)
            diff = exact - asym
            expansion = bound = math.nan
            if order is not None and m >= 2:
                em = avg_entropy_expansion(m, n, order)
                expansion, bound = em.value, em.remainder_bound
            rows.append(ConvergenceRow(N, m, n, swapped, exact, asym, diff, N * diff, expansion, bound))
        except (ConfigurationError, DomainError) as exc:
            nan = math.nan
            rows.append(ConvergenceRow(N, None, None, False, nan, nan, nan, nan, error=str(exc)))
    return rows
