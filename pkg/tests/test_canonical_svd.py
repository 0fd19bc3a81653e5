import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from page_entropy.canonical_svd import (
    as_state_matrix,
    canonical_svd,
    canonicalize,
    jacobi_svd,
    schmidt_probabilities,
    schmidt_spectrum,
)
from page_entropy.errors import DomainError


def random_state(rng, n, m):
    return rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))


def assert_canonical(svd, A, tol=1e-10):
    n, m = np.shape(A)
    assert np.all(np.diff(svd.sigma) >= 0)
    d = np.diag(svd.V)
    assert np.all(np.abs(d.imag) < 1e-12) and np.all(d.real >= 0)
    np.testing.assert_allclose(svd.V.conj().T @ svd.V, np.eye(m), atol=tol)
    np.testing.assert_allclose(svd.U.conj().T @ svd.U, np.eye(m), atol=tol)
    assert np.abs(svd.reconstruct() - A).max() < tol * max(1.0, np.abs(A).max())


class TestCanonicalSvd:
    def test_identity(self):
        s = canonical_svd(np.eye(2))
        np.testing.assert_allclose(s.sigma, [1, 1])
        np.testing.assert_allclose(s.U, np.eye(2), atol=1e-15)
        np.testing.assert_allclose(s.V, np.eye(2), atol=1e-15)

    def test_diagonal_swap(self):
        A = np.diag([2.0, 1.0])
        s = canonical_svd(A)
        swap = np.array([[0, 1], [1, 0]])
        np.testing.assert_allclose(s.sigma, [1, 2])
        np.testing.assert_allclose(s.U, swap, atol=1e-15)
        np.testing.assert_allclose(s.V, swap, atol=1e-15)
        np.testing.assert_allclose(s.reconstruct(), A, atol=1e-15)

    def test_random_4x3_against_gram_eigenvalues(self):
        A = random_state(np.random.default_rng(2024), 4, 3)
        s = canonical_svd(A)
        assert_canonical(s, A)
        gram = np.linalg.eigvalsh(A.conj().T @ A)
        np.testing.assert_allclose(s.sigma**2, gram, rtol=1e-10)

    @pytest.mark.parametrize("n,m", [(1, 1), (5, 1), (3, 3), (8, 5), (64, 64), (64, 17)])
    def test_reconstruction_sizes(self, n, m):
        A = random_state(np.random.default_rng(n * 100 + m), n, m)
        assert_canonical(canonical_svd(A), A)

    def test_uniqueness_under_random_phases(self):
        rng = np.random.default_rng(5)
        worst = 0.0
        for _ in range(200):
            n = int(rng.integers(1, 7))
            m = int(rng.integers(1, n + 1))
            A = random_state(rng, n, m)
            ref = canonical_svd(A)
            phases = np.exp(2j * np.pi * rng.random(m))
            other = canonicalize(ref.U * phases, ref.sigma, ref.V * phases)
            worst = max(worst, np.abs(other.U - ref.U).max(), np.abs(other.V - ref.V).max())
        assert worst < 1e-9

    def test_lapack_svd_canonicalizes_to_same_triple(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            A = random_state(rng, 6, 4)
            u, s, vh = np.linalg.svd(A, full_matrices=False)
            a = canonicalize(u, s, vh.conj().T)
            b = canonical_svd(A)
            np.testing.assert_allclose(a.U, b.U, atol=1e-9)
            np.testing.assert_allclose(a.V, b.V, atol=1e-9)
            np.testing.assert_allclose(a.sigma, b.sigma, atol=1e-12)

    def test_zero_diagonal_phase_is_one(self):
        # V = swap: both diagonal entries vanish, so the phase convention leaves columns untouched
        A = np.diag([3.0, 1.0]).astype(complex)
        s = canonical_svd(A * 1j)
        np.testing.assert_allclose(s.reconstruct(), A * 1j, atol=1e-14)
        assert np.all(np.abs(np.diag(s.V)) < 1e-14)

    def test_rank_deficient_completion(self):
        A = np.zeros((4, 3), dtype=complex)
        A[0, 0] = 1.0
        A[1, 2] = 2.0
        s = canonical_svd(A)
        np.testing.assert_allclose(s.sigma, [0, 1, 2], atol=1e-15)
        assert_canonical(s, A)

    @pytest.mark.parametrize("bad", [np.ones((2, 3)), np.array([[np.nan, 1.0]]).T, np.zeros((0, 0))])
    def test_rejects_bad_input(self, bad):
        with pytest.raises(DomainError):
            canonical_svd(bad)

    def test_column_vector(self):
        assert as_state_matrix([1, 0, 0]).shape == (3, 1)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 6), st.integers(0, 5), st.integers(0, 2**32 - 1))
    def test_property_reconstruction(self, m, extra, seed):
        A = random_state(np.random.default_rng(seed), m + extra, m)
        assert_canonical(canonical_svd(A), A)

    def test_jacobi_matches_lapack_values(self):
        A = random_state(np.random.default_rng(3), 10, 7)
        _, s, _ = jacobi_svd(A)
        np.testing.assert_allclose(np.sort(s), np.sort(np.linalg.svd(A, compute_uv=False)), rtol=1e-12)


class TestSchmidtSpectrum:
    def test_uniform(self):
        np.testing.assert_allclose(schmidt_spectrum(np.eye(2) / np.sqrt(2)).p, [0.5, 0.5], atol=1e-15)

    def test_product_state(self):
        np.testing.assert_allclose(schmidt_spectrum(np.array([[1.0], [0.0], [0.0]])).p, [1.0])

    def test_three_by_two(self):
        np.testing.assert_allclose(schmidt_spectrum([[1, 0], [0, 2], [0, 0]]).p, [0.2, 0.8], atol=1e-15)

    def test_zero_state(self):
        with pytest.raises(DomainError, match="zero state has no Schmidt spectrum"):
            schmidt_spectrum(np.zeros((3, 2)))

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3))
    def test_scale_invariance_and_consistency(self, seed, c):
        A = random_state(np.random.default_rng(seed), 5, 3)
        s = schmidt_spectrum(A)
        assert abs(s.p.sum() - 1) < 1e-12 and np.all(s.p >= 0) and np.all(np.diff(s.p) >= 0)
        np.testing.assert_allclose(schmidt_spectrum(c * A).p, s.p, atol=1e-12)
        np.testing.assert_allclose(s.sigma, canonical_svd(A).sigma, atol=1e-10)
        ev = np.linalg.eigvalsh(A.conj().T @ A)
        np.testing.assert_allclose(s.sigma**2, ev, atol=1e-10 * ev.max())

    def test_batched_path_matches(self):
        rng = np.random.default_rng(4)
        states = np.stack([random_state(rng, 7, 3) for _ in range(20)])
        batched = schmidt_probabilities(states)
        for k in range(20):
            np.testing.assert_allclose(batched[k], schmidt_spectrum(states[k]).p, atol=1e-13)
