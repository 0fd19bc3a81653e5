import math
import warnings
from functools import lru_cache

import pytest
from hypothesis import given
from hypothesis import strategies as st

from page_entropy.asymptotics import (
    SUPPORTED_ORDERS,
    ZETA_EVEN,
    GeometrySpec,
    asymptote_constants,
    avg_entropy_expansion,
    convergence_table,
    euler_maclaurin_page_sum,
    predicted_entropy_asymptote,
    section_dimension,
    zeta_even_series,
)
from page_entropy.entropy_core import digamma, harmonic_range
from page_entropy.errors import ConfigurationError, DomainError
from page_entropy.page_exact import page_average_entropy

EPS = 2.0**-52
cached_page = lru_cache(maxsize=None)(page_average_entropy)


class TestZeta:
    @pytest.mark.parametrize("p", SUPPORTED_ORDERS)
    def test_pinned_constants_agree_with_series(self, p):
        assert zeta_even_series(p) == pytest.approx(ZETA_EVEN[p], rel=1e-15)

    def test_bad_argument(self):
        with pytest.raises(DomainError):
            zeta_even_series(1)


class TestEulerMaclaurin:
    def test_ten_ten(self):
        em = euler_maclaurin_page_sum(10, 10, 2)
        expected = math.log(10) + (1 / 100 - 1 / 10) / 2 + (1 / 12) * (-1 / 100**2 + 1 / 10**2)
        assert em.value == pytest.approx(expected, abs=1e-15)
        assert abs(em.value - harmonic_range(11, 100)) <= em.remainder_bound
        assert abs(em.value - 2.2584092635) <= em.remainder_bound

    def test_bound_shrinks_with_order(self):
        bounds = [euler_maclaurin_page_sum(50, 50, p).remainder_bound for p in (2, 4, 6)]
        assert bounds[0] > bounds[1] > bounds[2] > 0

    def test_huge_n_against_digamma(self):
        em = euler_maclaurin_page_sum(2, 10**6, 4)
        exact = digamma(2 * 10**6 + 1) - digamma(10**6 + 1)
        # the analytic bound is ~1e-26, far below the rounding of either side
        assert abs(em.value - exact) <= em.remainder_bound + 8 * EPS * abs(exact)

    @pytest.mark.parametrize("order", [3, 1, 0, 10, 2.5])
    def test_order_validation(self, order):
        with pytest.raises(DomainError):
            euler_maclaurin_page_sum(3, 4, order)

    def test_needs_nonempty_sum(self):
        with pytest.raises(DomainError):
            euler_maclaurin_page_sum(1, 4)
        with pytest.raises(DomainError):
            avg_entropy_expansion(1, 4)

    @given(st.integers(2, 300).flatmap(lambda n: st.tuples(st.integers(2, n), st.just(n))), st.sampled_from(SUPPORTED_ORDERS))
    def test_sum_within_bound(self, mn, order):
        m, n = mn
        em = euler_maclaurin_page_sum(m, n, order)
        exact = harmonic_range(n + 1, m * n)
        assert abs(em.value - exact) <= em.remainder_bound + 8 * EPS * exact


class TestEntropyExpansion:
    def test_small_cases(self):
        for (m, n), p in [((2, 2), 2), ((8, 8), 4)]:
            em = avg_entropy_expansion(m, n, p)
            assert abs(em.value - page_average_entropy(m, n)) <= em.remainder_bound

    def test_hundred(self):
        em = avg_entropy_expansion(100, 100, 2)
        assert em.value == pytest.approx(math.log(100) - 0.5, abs=1e-4)

    def test_differs_from_sum_expansion_by_correction(self):
        a = avg_entropy_expansion(7, 11, 4).value
        b = euler_maclaurin_page_sum(7, 11, 4).value
        assert a - b == pytest.approx(-(7 - 1) / (2 * 11), abs=1e-14)

    def test_bound_holds_up_to_128(self):
        worst = 0.0
        for n in range(2, 129):
            for m in range(2, n + 1):
                exact = cached_page(m, n)
                for p in (2, 4):
                    em = avg_entropy_expansion(m, n, p)
                    worst = max(worst, abs(em.value - exact) - em.remainder_bound)
        assert worst <= 0.0


class TestGeometry:
    def test_projective_dimensions(self):
        assert section_dimension(GeometrySpec.projective(1), 5) == 6
        assert section_dimension(GeometrySpec.projective(2), 3) == 10

    def test_polynomial(self):
        assert section_dimension(GeometrySpec.polynomial(1, [2, 0]), 7) == 14
        assert section_dimension(GeometrySpec.parse("poly:2:0.5,1.5,1"), 4) == 15

    def test_parse_roundtrip(self):
        for text in ("proj:1", "proj:3"):
            assert GeometrySpec.parse(text).label() == text
        g = GeometrySpec.parse("poly:1:2,1")
        assert GeometrySpec.parse(g.label()) == g

    @pytest.mark.parametrize(
        "text,token",
        [("proj:x", "'x'"), ("poly:1:a", "'a'"), ("sphere:2", "'sphere'"), ("proj", "proj"), ("poly:1", "poly:1")],
    )
    def test_parse_errors_name_token(self, text, token):
        with pytest.raises(ConfigurationError, match=token):
            GeometrySpec.parse(text)

    @pytest.mark.parametrize("kwargs", [dict(d=0, volume=1.0), dict(d=1, volume=-1.0), dict(d=1, volume=1.0, kind="x")])
    def test_invalid_spec(self, kwargs):
        with pytest.raises(ConfigurationError):
            GeometrySpec(**kwargs)

    def test_nonpositive_dimension(self):
        with pytest.raises(ConfigurationError, match="N=1"):
            section_dimension(GeometrySpec.polynomial(1, [1, -5]), 1)

    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_projective_volume(self, d):
        g = GeometrySpec.projective(d)
        assert section_dimension(g, 100) / 100**d == pytest.approx(g.volume, rel=0.1)


class TestAsymptote:
    def test_equal_dimension(self):
        g = GeometrySpec.polynomial(1, [1])
        assert predicted_entropy_asymptote(g, g, 50) == pytest.approx(math.log(50) - 0.5)

    def test_unequal_dimension(self):
        g1, g2 = GeometrySpec.polynomial(1, [2]), GeometrySpec.polynomial(2, [1])
        assert predicted_entropy_asymptote(g1, g2, 50) == pytest.approx(math.log(50) + math.log(2))
        assert asymptote_constants(g1, g2).A2 is None

    def test_two_dimensional(self):
        g = GeometrySpec.polynomial(2, [0.5])
        assert predicted_entropy_asymptote(g, g, 9) == pytest.approx(2 * math.log(9) + math.log(0.5) - 0.5)

    def test_swap_warns(self):
        g1, g2 = GeometrySpec.projective(2), GeometrySpec.projective(1)
        with pytest.warns(UserWarning, match="swapping"):
            a = predicted_entropy_asymptote(g1, g2, 30)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            assert a == predicted_entropy_asymptote(g2, g1, 30)

    @given(st.floats(0.1, 10), st.floats(0.1, 10))
    def test_A2_negative(self, v1, v2):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            c = asymptote_constants(GeometrySpec.polynomial(1, [v1]), GeometrySpec.polynomial(1, [v2]))
        assert c.A2 < 0

    def test_increasing_in_N(self):
        g1, g2 = GeometrySpec.projective(1), GeometrySpec.projective(2)
        vals = [predicted_entropy_asymptote(g1, g2, N) for N in range(1, 200)]
        assert all(b > a for a, b in zip(vals, vals[1:]))


class TestConvergenceTable:
    def test_p1_p1_bracket(self):
        g = GeometrySpec.projective(1)
        rows = convergence_table(g, g, [10, 20, 40, 80, 160, 320])
        assert all(abs(r.n_diff) <= 2 for r in rows)
        assert all(r.m == r.n == r.N + 1 for r in rows)

    def test_p1_p2_decreasing(self):
        rows = convergence_table(GeometrySpec.projective(1), GeometrySpec.projective(2), [10, 20, 40, 80, 160])
        diffs = [abs(r.diff) for r in rows]
        assert all(b < a for a, b in zip(diffs, diffs[1:]))

    def test_degenerate_row(self):
        g = GeometrySpec.polynomial(1, [1e-9, 1])
        rows = convergence_table(g, GeometrySpec.projective(1), [3])
        assert rows[0].m == 1 and rows[0].exact == 0.0

    def test_row_level_errors(self):
        g = GeometrySpec.polynomial(1, [1, -3])
        rows = convergence_table(g, GeometrySpec.polynomial(1, [2]), [1, 2, 10])
        assert rows[0].error and rows[1].error and rows[2].error is None
        assert math.isnan(rows[0].exact)

    def test_per_row_swap(self):
        # m(N) = 2N + 5 beats n(N) = 3N - 1 for small N only
        rows = convergence_table(GeometrySpec.polynomial(1, [2, 5]), GeometrySpec.polynomial(1, [3, -1]), [2, 20])
        assert rows[0].swapped and not rows[1].swapped
        assert rows[0].m <= rows[0].n

    def test_expansion_columns(self):
        g = GeometrySpec.projective(1)
        rows = convergence_table(g, g, [10, 40], order=4)
        for r in rows:
            assert abs(r.expansion - r.exact) <= r.remainder_bound
        with pytest.raises(DomainError):
            convergence_table(g, g, [10], order=3)
