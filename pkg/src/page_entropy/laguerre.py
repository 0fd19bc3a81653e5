"""Generalized Laguerre polynomials and their closed-form integrals.

The polynomials ``L_k^(alpha)`` are orthogonal for the weight
``x^alpha e^{-x}`` on ``[0, inf)``.  Three integrals against that family
enter the Page formula derivation:

* the norm ``int x^a e^-x L_k^2 = Gamma(k+a+1)/k!``,
* ``J_k(a) = int x^(a+1) e^-x L_k^2 = (2k+a+1) Gamma(k+a+1)/k!``,
* ``I_k(a) = int x^(a+1) ln x e^-x L_k^2
  = Gamma(k+a+1)/k! [1 + 2k + (2k+a+1) psi(k+a+1)]``.

``I_k`` follows from differentiating ``J_k`` in ``a``, using
``d Gamma/d a = Gamma psi``, together with
``dL_k/da = sum_{j<k} L_j/(k-j)``.

Gauss-Laguerre quadrature is provided as an independent check on all
three closed forms.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_genlaguerre

from .entropy_core import digamma
from .errors import ConvergenceError, DomainError


@dataclass(frozen=True)
class LaguerreParams:
    k: int
    alpha: float

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 0:
            raise DomainError(f"Laguerre degree must be a non-negative integer, got {self.k!r}")
        if not self.alpha > -1:
            raise DomainError(f"Laguerre parameter must satisfy alpha > -1, got {self.alpha!r}")


def _check(k, alpha) -> LaguerreParams:
    return LaguerreParams(int(k) if int(k) == k else k, float(alpha))


def laguerre_eval(k: int, alpha: float, x):
    """Evaluate ``L_k^(alpha)(x)`` by the three-term recurrence.

    ``(j+1) L_{j+1} = (2j + alpha + 1 - x) L_j - (j + alpha) L_{j-1}``.
    Accepts scalars or arrays; returns the same shape.
    """
    _check(k, alpha)
    xa = np.asarray(x, dtype=float)
    prev = np.zeros_like(xa)
    cur = np.ones_like(xa)
    for j in range(int(k)):
        prev, cur = cur, ((2 * j + alpha + 1 - xa) * cur - (j + alpha) * prev) / (j + 1)
    if np.ndim(x) == 0:
        return float(cur)
    return cur


def laguerre_family(kmax: int, alpha: float, x) -> np.ndarray:
    """Stack ``[L_0, ..., L_kmax]`` evaluated at ``x``; shape ``(kmax+1,) + x.shape``."""
    _check(kmax, alpha)
    xa = np.asarray(x, dtype=float)
    out = np.empty((kmax + 1,) + xa.shape)
    out[0] = 1.0
    if kmax >= 1:
        out[1] = alpha + 1 - xa
    for j in range(1, kmax):
        out[j + 1] = ((2 * j + alpha + 1 - xa) * out[j] - (j + alpha) * out[j - 1]) / (j + 1)
    return out


def log_laguerre_norm(k: int, alpha: float) -> float:
    """``ln(Gamma(k+alpha+1)/k!)``."""
    _check(k, alpha)
    return math.lgamma(k + alpha + 1) - math.lgamma(k + 1)


def laguerre_norm(k: int, alpha: float) -> float:
    """Squared norm ``Gamma(k+alpha+1)/k!`` of ``L_k^(alpha)``."""
    return math.exp(log_laguerre_norm(k, alpha))


def laguerre_J(k: int, alpha: float) -> float:
    """``int_0^inf x^(alpha+1) [L_k^(alpha)]^2 e^-x dx``."""
    return (2 * k + alpha + 1) * laguerre_norm(k, alpha)


def laguerre_I_bracket(k: int, alpha: float) -> float:
    """``laguerre_I(k, alpha) / laguerre_norm(k, alpha)``, free of overflow."""
    _check(k, alpha)
    return 1 + 2 * k + (2 * k + alpha + 1) * digamma(k + alpha + 1)


def laguerre_I(k: int, alpha: float) -> float:
    """``int_0^inf x^(alpha+1) ln(x) [L_k^(alpha)]^2 e^-x dx``."""
    return laguerre_norm(k, alpha) * laguerre_I_bracket(k, alpha)


_rule_cache: dict[tuple[float, int], tuple[np.ndarray, np.ndarray]] = {}
_rule_lock = threading.Lock()


def gauss_laguerre_rule(alpha: float, nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for ``int_0^inf x^alpha e^-x f(x) dx``.

    Rules are cached per ``(alpha, nodes)``; the returned arrays are
    read-only.
    """
    if nodes < 1:
        raise DomainError("quadrature needs at least one node")
    if not alpha > -1:
        raise DomainError(f"Gauss-Laguerre weight needs alpha > -1, got {alpha!r}")
    key = (float(alpha), int(nodes))
    with _rule_lock:
        rule = _rule_cache.get(key)
        if rule is None:
            x, w = roots_genlaguerre(int(nodes), float(alpha))
            x = np.asarray(x, dtype=float)
            w = np.asarray(w, dtype=float)
            if not (np.all(np.isfinite(x)) and np.all(np.isfinite(w))) or np.any(np.diff(x) <= 0):
                raise ConvergenceError(
                    f"Gauss-Laguerre node computation failed for alpha={alpha}, nodes={nodes}"
                )
            x.setflags(write=False)
            w.setflags(write=False)
            rule = _rule_cache[key] = (x, w)
    return rule


def gauss_laguerre_quadrature(f, alpha: float = 0.0, nodes: int = 200) -> float:
    """Approximate ``int_0^inf x^alpha e^-x f(x) dx`` with ``sum w_i f(x_i)``.

    ``f`` must accept a numpy array of nodes.  Exact for polynomials of
    degree up to ``2 * nodes - 1``.
    """
    x, w = gauss_laguerre_rule(alpha, nodes)
    fx = np.broadcast_to(np.asarray(f(x), dtype=float), x.shape)
    return math.fsum(w * fx)


def split_laguerre_quadrature(f, alpha: float = 0.0, nodes: int = 200, split: float = 1.0) -> float:
    """Approximate ``int_0^inf x^alpha e^-x f(x) dx`` when ``f`` is singular at 0.

    Plain Gauss-Laguerre converges only algebraically for integrands such
    as ``x ln x``.  Here ``[0, split]`` is mapped by ``x = split * t^4`` and
    integrated with Gauss-Legendre (the substitution buries the endpoint
    singularity under a high power of ``t``), and ``[split, inf)`` is
    shifted onto a Gauss-Laguerre rule.  Half the nodes go to each piece.
    """
    if nodes < 2:
        raise DomainError("split quadrature needs at least two nodes")
    if not alpha > -1:
        raise DomainError(f"weight needs alpha > -1, got {alpha!r}")
    n_head = nodes // 2
    t, wt = np.polynomial.legendre.leggauss(n_head)
    t = 0.5 * (t + 1.0)
    x = split * t**4
    head_w = 0.5 * wt * 4.0 * split * t**3 * x**alpha * np.exp(-x)
    head = math.fsum(head_w * np.asarray(f(x), dtype=float))
    y, wy = gauss_laguerre_rule(0.0, nodes - n_head)
    xt = split + y
    tail = math.exp(-split) * math.fsum(wy * xt**alpha * np.asarray(f(xt), dtype=float))
    return head + tail
