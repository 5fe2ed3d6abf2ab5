import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from fwexact import (
    BlockOperator,
    DomainError,
    EigendecompositionError,
    Metric,
    MetricViolationError,
    SpectralGapError,
    arcsin_herm,
    beta_matrix,
    decompose,
    exp_i,
    feshbach_villars,
    free_dirac,
    inv_sqrt_spd,
    sign_of,
    sqrt_spd,
)


def hermitian_operator(seed, side=4, gap=0.5):
    """Random Hermitian matrix with |spectrum| >= gap (seeded oracle input)."""
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(side, side)) + 1j * rng.normal(size=(side, side))
    a = (a + a.conj().T) / 2
    w, v = np.linalg.eigh(a)
    w = np.where(w >= 0, w + gap, w - gap)
    return BlockOperator((v * w) @ v.conj().T, side, 1)


class TestDecompose:
    def test_sorted_ascending(self):
        a = BlockOperator(np.diag([2.0, -1.0]).astype(complex), 2, 1)
        dec = decompose(a, Metric.HERMITIAN)
        assert_allclose(dec.eigenvalues.real, [-1.0, 2.0], atol=0)

    def test_free_dirac_eigenvalues(self):
        # sqrt(1 + 0.75^2) = sqrt(1.5625) = 1.25 exactly
        h = free_dirac(1.0, (0.0, 0.0, 0.75)).total
        dec = decompose(h, Metric.HERMITIAN)
        assert_allclose(dec.eigenvalues.real, [-1.25, -1.25, 1.25, 1.25], atol=1e-14)

    def test_feshbach_villars_real_spectrum(self):
        # characteristic polynomial by hand: E^2 = m^2 + p^2
        h = feshbach_villars(1.0, 0.75).total
        dec = decompose(h, Metric.BETA_PSEUDO)
        assert_allclose(dec.eigenvalues.real, [-1.25, 1.25], atol=1e-12)
        assert np.abs(dec.eigenvalues.imag).max() <= 1e-12

    def test_reconstruction(self):
        a = hermitian_operator(5)
        dec = decompose(a, Metric.HERMITIAN)
        assert np.linalg.norm(dec.reconstruct() - a.data) <= 1e-11 * np.linalg.norm(
            a.data
        )
        assert_allclose(dec.inverse_vectors, dec.right_vectors.conj().T, atol=0)

    def test_non_hermitian_rejected(self):
        a = BlockOperator(np.array([[0, 1], [0, 0]], dtype=complex), 2, 1)
        with pytest.raises(MetricViolationError):
            decompose(a, Metric.HERMITIAN)

    def test_broken_pseudo_hermiticity(self):
        # tau3-pseudo-Hermitian with eigenvalues +-i
        a = BlockOperator(np.array([[0, 1], [-1, 0]], dtype=complex), 2, 1)
        with pytest.raises(EigendecompositionError, match="broken pseudo-Hermiticity"):
            decompose(a, Metric.BETA_PSEUDO)

    def test_ill_conditioned_eigenbasis(self):
        a = BlockOperator(np.array([[1.0, 1.0], [0.0, 1.0 + 1e-12]], dtype=complex), 2, 1)
        with pytest.raises(EigendecompositionError, match="ill-conditioned"):
            decompose(a, Metric.BETA_PSEUDO)

    def test_deterministic_output(self):
        a = hermitian_operator(9)
        one = decompose(a, Metric.HERMITIAN)
        two = decompose(a, Metric.HERMITIAN)
        assert np.array_equal(one.right_vectors, two.right_vectors)
        assert np.array_equal(one.eigenvalues, two.eigenvalues)


class TestSign:
    def test_pure_mass_gives_beta(self):
        beta = beta_matrix(4, 1)
        h = BlockOperator(3.0 * beta.data, 4, 1)
        assert_allclose(sign_of(h, Metric.HERMITIAN).data, beta.data, atol=1e-15)

    def test_diagonal(self):
        h = BlockOperator(np.diag([3.0, -0.5]).astype(complex), 2, 1)
        assert_allclose(
            sign_of(h, Metric.HERMITIAN).data, np.diag([1.0, -1.0]), atol=1e-15
        )

    def test_free_dirac_sign(self):
        h = free_dirac(1.0, (0.0, 0.0, 0.75)).total
        lam = sign_of(h, Metric.HERMITIAN)
        assert_allclose(lam.data, h.data / 1.25, atol=1e-14)
        assert np.linalg.norm(lam.data @ lam.data - np.eye(4)) <= 1e-10

    def test_gap_violation(self):
        h = BlockOperator(np.diag([1e-12, 1.0]).astype(complex), 2, 1)
        with pytest.raises(SpectralGapError, match="spectral gap violation"):
            sign_of(h, Metric.HERMITIAN)

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2**31 - 1))
    def test_sign_properties(self, seed):
        h = hermitian_operator(seed)
        lam = sign_of(h, Metric.HERMITIAN)
        n = h.side
        assert np.linalg.norm(lam.data @ lam.data - np.eye(n)) <= 1e-10 * np.sqrt(n)
        assert np.linalg.norm(
            lam.data @ h.data - h.data @ lam.data
        ) <= 1e-10 * np.linalg.norm(h.data)
        assert np.linalg.norm(lam.data - lam.data.conj().T) <= 1e-12


class TestSqrt:
    def test_scalar_case(self):
        a = BlockOperator(4.0 * np.eye(2), 2, 1)
        assert_allclose(sqrt_spd(a, Metric.HERMITIAN).data, 2.0 * np.eye(2), atol=1e-15)

    def test_eriksen_denominator_at_rest(self):
        # at p = 0 the sign operator is beta, so 2 + beta^2 + beta^2 = 4
        beta = beta_matrix(4, 1)
        b = beta.data
        a = BlockOperator(2 * np.eye(4) + b @ b + b @ b, 4, 1)
        assert_allclose(sqrt_spd(a, Metric.HERMITIAN).data, 2.0 * np.eye(4), atol=1e-15)

    def test_eriksen_denominator_residual(self):
        h = free_dirac(1.0, (0.0, 0.0, 0.75)).total
        lam = sign_of(h, Metric.HERMITIAN).data
        b = beta_matrix(4, 1).data
        a = BlockOperator(2 * np.eye(4) + b @ lam + lam @ b, 4, 1)
        root = sqrt_spd(a, Metric.HERMITIAN)
        assert np.linalg.norm(root.data @ root.data - a.data) <= 1e-12

    def test_not_positive_definite(self):
        a = BlockOperator(np.diag([1.0, -1.0]).astype(complex), 2, 1)
        with pytest.raises(DomainError, match="not positive definite"):
            sqrt_spd(a, Metric.HERMITIAN)

    def test_inverse_root(self):
        a = hermitian_operator(13)
        spd = BlockOperator(a.data @ a.data.conj().T + np.eye(4), 4, 1)
        inv_root = inv_sqrt_spd(spd, Metric.HERMITIAN)
        root = sqrt_spd(spd, Metric.HERMITIAN)
        assert_allclose(inv_root.data @ root.data, np.eye(4), atol=1e-12)

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2**31 - 1))
    def test_root_squares_back(self, seed):
        rng = np.random.default_rng(seed)
        g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        spd = BlockOperator(g @ g.conj().T + 0.1 * np.eye(4), 4, 1)
        root = sqrt_spd(spd, Metric.HERMITIAN)
        assert np.linalg.norm(
            root.data @ root.data - spd.data
        ) <= 1e-10 * np.linalg.norm(spd.data)


class TestArcsin:
    def test_zero(self):
        a = BlockOperator(np.zeros((2, 2)), 2, 1)
        assert_allclose(arcsin_herm(a).data, np.zeros((2, 2)), atol=0)

    def test_scalar_oracle(self):
        a = BlockOperator(np.diag([0.6, -0.6]).astype(complex), 2, 1)
        expected = math.asin(0.6)
        assert_allclose(
            arcsin_herm(a).data, np.diag([expected, -expected]), atol=1e-15
        )

    def test_boundary(self):
        a = BlockOperator(np.eye(2), 2, 1)
        assert_allclose(arcsin_herm(a).data, (np.pi / 2) * np.eye(2), atol=1e-15)

    def test_clamp_band(self):
        a = BlockOperator((1.0 + 5e-11) * np.eye(2), 2, 1)
        assert_allclose(arcsin_herm(a).data, (np.pi / 2) * np.eye(2), atol=1e-15)

    def test_domain_violation(self):
        a = BlockOperator(1.1 * np.eye(2), 2, 1)
        with pytest.raises(DomainError, match="arcsin domain violation"):
            arcsin_herm(a)

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2**31 - 1))
    def test_arcsin_inverts_sin(self, seed):
        rng = np.random.default_rng(seed)
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        a = (a + a.conj().T) / 2
        # squash the spectrum into (-pi/2, pi/2)
        a = BlockOperator(a / (np.linalg.norm(a, 2) / 1.4), 4, 1)
        w, v = np.linalg.eigh(a.data)
        sin_a = BlockOperator((v * np.sin(w)) @ v.conj().T, 4, 1)
        recovered = arcsin_herm(sin_a)
        assert np.linalg.norm(recovered.data - a.data) <= 1e-10 * np.linalg.norm(a.data)


class TestExpI:
    def test_zero_gives_identity(self):
        s = BlockOperator(np.zeros((2, 2)), 2, 1)
        assert_allclose(exp_i(s, Metric.HERMITIAN).data, np.eye(2), atol=0)

    def test_pi_rotation(self):
        s = BlockOperator(np.diag([np.pi, -np.pi]).astype(complex), 2, 1)
        assert_allclose(exp_i(s, Metric.HERMITIAN).data, -np.eye(2), atol=1e-15)

    def test_unitary_and_unimodular(self):
        s = hermitian_operator(21)
        u = exp_i(s, Metric.HERMITIAN)
        assert np.linalg.norm(u.data @ u.data.conj().T - np.eye(4)) <= 1e-10
        assert abs(abs(np.linalg.det(u.data)) - 1.0) <= 1e-8

    def test_non_self_adjoint_rejected(self):
        s = BlockOperator(np.array([[0, 1], [0, 0]], dtype=complex), 2, 1)
        with pytest.raises(MetricViolationError):
            exp_i(s, Metric.HERMITIAN)
