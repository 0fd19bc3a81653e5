"""Reduced-scale versions of the package's invariant checks.

Each check returns ``(passed, detail)``.  The whole suite runs in well
under a minute and backs the ``selftest`` CLI command.
"""

from __future__ import annotations

import numpy as np

from . import asymptotics as asy
from .canonical_svd import canonical_svd, canonicalize
from .entropy_core import EULER_GAMMA, digamma, harmonic_range
from .laguerre import (
    gauss_laguerre_quadrature,
    laguerre_eval,
    laguerre_I,
    laguerre_J,
    laguerre_norm,
    split_laguerre_quadrature,
)
from .monte_carlo import FUNCTIONALS, mc_average_entropy
from .page_exact import page_average_entropy, page_average_entropy_plus, page_I2, page_I2_via_laguerre, page_consistency
from .spectral_density import density_vs_sphere_check, simplex_expectation


def check_svd():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(20):
        A = rng.normal(size=(5, 3)) + 1j * rng.normal(size=(5, 3))
        c = canonical_svd(A)
        u, s, vh = np.linalg.svd(A, full_matrices=False)
        other = canonicalize(u, s, vh.conj().T)
        worst = max(worst, np.abs(c.reconstruct() - A).max(), np.abs(other.U - c.U).max())
    return worst < 1e-9, f"max deviation {worst:.2e}"


def check_digamma():
    worst = max(abs(digamma(N + 1) - (-EULER_GAMMA + harmonic_range(1, N))) for N in (0, 1, 10, 1000, 10**5))
    return worst < 1e-12, f"max |psi(N+1) + gamma - H_N| = {worst:.2e}"


def check_laguerre():
    worst = 0.0
    for a in (0.0, 1.0, 3.5):
        for k in range(5):
            for j in range(5):
                q = gauss_laguerre_quadrature(lambda x: laguerre_eval(j, a, x) * laguerre_eval(k, a, x), a, 200)
                ref = laguerre_norm(k, a) if j == k else 0.0
                worst = max(worst, abs(q - ref) / max(1.0, abs(ref)))
            qj = split_laguerre_quadrature(lambda x: x * laguerre_eval(k, a, x) ** 2, a)
            qi = split_laguerre_quadrature(lambda x: x * np.log(x) * laguerre_eval(k, a, x) ** 2, a)
            worst = max(worst, abs(qj / laguerre_J(k, a) - 1), abs(qi / laguerre_I(k, a) - 1))
    return worst < 1e-7, f"worst relative deviation {worst:.2e}"


def check_i2_dual():
    worst = max(
        abs(page_I2_via_laguerre(m, n) / page_I2(m, n) - 1) for n in range(1, 13) for m in range(1, n + 1)
    )
    return worst < 1e-9, f"worst relative deviation {worst:.2e}"


def check_consistency():
    for m, n in ((1, 7), (2, 2), (4, 16), (8, 64)):
        page_consistency(m, n)
    return True, "page_consistency passed for 4 cases"


def check_mc():
    details = []
    ok = True
    for m, n in ((2, 2), (3, 3)):
        est = mc_average_entropy(m, n, 20_000, seed=11)
        z = (est.mean - page_average_entropy(m, n)) / est.std_error
        ok &= abs(z) <= 4
        details.append(f"({m},{n}) z={z:+.2f}")
    est = mc_average_entropy(2, 2, 20_000, seed=11)
    z_plus = (est.mean - page_average_entropy_plus(2, 2)) / est.std_error
    ok &= abs(z_plus) > 10
    details.append(f"plus-variant z={z_plus:+.1f}")
    return ok, "; ".join(details)


def check_density():
    quad = simplex_expectation(FUNCTIONALS["entropy"], 3, 3, resolution=32)
    ok = abs(quad.value - page_average_entropy(3, 3)) <= max(1e-4, quad.error_estimate)
    rep = density_vs_sphere_check(2, 2, FUNCTIONALS["maxp"], samples=20_000, seed=3, resolution=32, name="maxp")
    return ok and rep.passed, f"(3,3) quad={quad.value:.8f}; (2,2) maxp z={rep.z_score:.2f}"


def check_euler_maclaurin():
    worst = 0.0
    for n in range(2, 33):
        for m in range(2, n + 1):
            exact = page_average_entropy(m, n)
            for order in (2, 4):
                em = asy.avg_entropy_expansion(m, n, order)
                worst = max(worst, abs(em.value - exact) / em.remainder_bound)
    return worst <= 1.0, f"max |error| / bound = {worst:.3f}"


def check_theorem_bracket():
    g = asy.GeometrySpec.projective(1)
    rows = asy.convergence_table(g, g, [10, 20, 40, 80, 160])
    worst = max(abs(r.n_diff) for r in rows)
    return worst <= 2, f"max |N diff| = {worst:.4f}"


CHECKS = {
    "canonical_svd": check_svd,
    "digamma": check_digamma,
    "laguerre_identities": check_laguerre,
    "I2_dual_route": check_i2_dual,
    "page_consistency": check_consistency,
    "monte_carlo_vs_closed_form": check_mc,
    "density_vs_sphere": check_density,
    "euler_maclaurin_bound": check_euler_maclaurin,
    "semiclassical_bracket": check_theorem_bracket,
}


def run_selftest():
    results = []
    for name, fn in CHECKS.items():
        try:
            passed, detail = fn()
        except Exception as exc:  # report, don't abort the suite
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append({"name": name, "passed": bool(passed), "detail": detail})
    return results
