import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from fwexact import (
    DomainError,
    Metric,
    SpectralGapError,
    StructureError,
    TimePeriodicHamiltonian,
    build_extended,
    central_odd_norm,
    demonstrate_nonevenness,
    floquet_dirac_scalar,
    floquet_dirac_vector,
    lambda_capital,
    lambda_naive,
    sign_of,
    transform_nonstationary,
)
from fwexact.blockop import BlockOperator
from fwexact.models import BETA4

# reference drive for the naive-vs-extended comparison: an odd (vector)
# drive at a frequency low enough that no ladder copy crosses the gap
# (nf * omega < sqrt(m^2 + p^2) up to nf = 12)
REFERENCE = dict(m=1.0, p=(0.0, 0.0, 0.5), a1=0.2, omega=0.08)

# frozen fixtures, computed once by this pipeline at nf=8, window=4
FROZEN_ODD_NAIVE = 3.728348852591401e-03
FROZEN_ODD_LAMBDA_BOUND = 1e-10


def reference_model():
    return floquet_dirac_vector(
        REFERENCE["m"], REFERENCE["p"], REFERENCE["a1"], REFERENCE["omega"]
    )


def block(extended_data, d, i, j):
    return extended_data[i * d : (i + 1) * d, j * d : (j + 1) * d]


class TestBuildExtended:
    def test_static_model_is_block_diagonal_ladder(self):
        model = floquet_dirac_scalar(1.0, (0, 0, 0.5), 0.0, 0.3)
        k = build_extended(model, 1)
        h0 = model.mode(0)
        d = 4
        assert_allclose(block(k.op.data, d, 0, 0), h0 + 0.3 * np.eye(4), atol=1e-15)
        assert_allclose(block(k.op.data, d, 1, 1), h0, atol=1e-15)
        assert_allclose(block(k.op.data, d, 2, 2), h0 - 0.3 * np.eye(4), atol=1e-15)
        assert np.linalg.norm(block(k.op.data, d, 0, 1)) == 0.0

    def test_scalar_drive_band_structure(self):
        model = floquet_dirac_scalar(1.0, (0, 0, 0.5), 0.2, 0.3)
        k = build_extended(model, 2)
        data = k.op.data
        assert np.linalg.norm(data - data.conj().T) <= 1e-14 * np.linalg.norm(data)
        d = 4
        for i in range(5):
            for j in range(5):
                if abs(i - j) > 1:
                    assert np.linalg.norm(block(data, d, i, j)) == 0.0
                elif abs(i - j) == 1:
                    assert_allclose(block(data, d, i, j), 0.1 * np.eye(4), atol=0)

    def test_static_spectrum_is_shifted_ladder(self):
        # independent oracle: eigenvalues +-sqrt(m^2+p^2) - m*omega per copy
        m, pz, omega, nf = 1.0, 0.5, 0.1, 3
        model = floquet_dirac_scalar(m, (0, 0, pz), 0.0, omega)
        k = build_extended(model, nf)
        e = math.sqrt(m * m + pz * pz)
        expected = sorted(
            sign * e - copy * omega
            for copy in range(-nf, nf + 1)
            for sign in (1.0, -1.0)
            for _ in range(2)
        )
        assert_allclose(np.linalg.eigvalsh(k.op.data), expected, atol=1e-12)

    def test_ladder_commutes_with_grading(self):
        model = floquet_dirac_scalar(1.0, (0, 0, 0.5), 0.2, 0.3)
        nf = 2
        k = build_extended(model, nf)
        ladder = np.kron(
            np.diag([-m * model.omega for m in range(-nf, nf + 1)]), np.eye(4)
        )
        b = k.beta.data
        assert np.linalg.norm(b @ ladder - ladder @ b) == 0.0

    def test_mode_beyond_truncation_rejected(self):
        h0 = BETA4.copy()
        mode3 = 0.05 * np.eye(4, dtype=complex)
        model = TimePeriodicHamiltonian(
            ((0, h0), (3, mode3), (-3, mode3)), 1.0, 4
        )
        with pytest.raises(StructureError, match="truncation too small"):
            build_extended(model, 1)


class TestLambdaCapital:
    def test_static_blocks_reproduce_shifted_signs(self):
        # per copy m the extended sign operator is sign(H0 - m omega),
        # including copies where the whole block has flipped sign
        m, pz, omega, nf = 1.0, 0.5, 0.3, 4
        model = floquet_dirac_scalar(m, (0, 0, pz), 0.0, omega)
        k = build_extended(model, nf)
        lam = lambda_capital(k)
        h0 = model.mode(0)
        d = 4
        for i, copy in enumerate(range(-nf, nf + 1)):
            shifted = BlockOperator(h0 - copy * omega * np.eye(4), 4, 1)
            expected = sign_of(shifted, Metric.HERMITIAN).data
            assert_allclose(block(lam.data, d, i, i), expected, atol=1e-12)
        flipped = block(lam.data, d, 8, 8)  # copy m = +4: 4*0.3 > sqrt(1.25)
        assert_allclose(flipped, -np.eye(4), atol=1e-12)

    def test_involution_for_driven_model(self):
        model = floquet_dirac_scalar(1.0, (0, 0, 0.5), 0.2, 0.1)
        k = build_extended(model, 8)
        lam = lambda_capital(k)
        n = lam.side
        assert np.linalg.norm(lam.data @ lam.data - np.eye(n)) <= 1e-10 * np.sqrt(n)

    def test_quasienergy_resonance_raises(self):
        # omega = E/2 puts the copy m = 2 block H0 - 2 omega exactly at
        # zero energy for the positive branch
        model = floquet_dirac_scalar(1.0, (0, 0, 0.0), 0.0, 0.5)
        k = build_extended(model, 2)
        with pytest.raises(SpectralGapError, match="quasienergy resonance"):
            lambda_capital(k)


class TestLambdaNaive:
    def test_static_model_is_toeplitz_diagonal(self):
        model = floquet_dirac_scalar(1.0, (0, 0, 0.5), 0.0, 0.3)
        nf = 3
        lam = lambda_naive(model, nf)
        lam0 = sign_of(BlockOperator(model.mode(0), 4, 1), Metric.HERMITIAN).data
        expected = np.kron(np.eye(2 * nf + 1), lam0)
        assert_allclose(lam.data, expected, atol=1e-13)

    def test_scalar_drive_bands_vanish(self):
        # independent Fourier oracle: a uniform scalar drive shifts both
        # energy branches without mixing them, so the instantaneous sign
        # operator is constant in time and every off-diagonal band is zero
        model = floquet_dirac_scalar(1.0, (0, 0, 0.5), 0.2, 0.1)
        nf = 4
        lam = lambda_naive(model, nf)
        d = 4
        for q in (1, -1, 2):
            assert np.linalg.norm(block(lam.data, d, nf, nf - q)) <= 1e-12

    def test_vector_drive_bands_scale_linearly(self):
        d, nf = 4, 4
        norms = {}
        for a1 in (0.2, 0.1):
            model = floquet_dirac_vector(1.0, (0, 0, 0.5), a1, 0.1)
            lam = lambda_naive(model, nf)
            norms[a1] = np.linalg.norm(block(lam.data, d, nf, nf - 1))
        assert norms[0.2] > 0.1
        assert abs(norms[0.2] / norms[0.1] - 2.0) < 0.05

    def test_instantaneous_gap_closing(self):
        # V1 = sqrt(m^2 + p^2) makes the lower branch touch zero at t = 0
        e = math.sqrt(1.25)
        model = floquet_dirac_scalar(1.0, (0, 0, 0.5), e, 0.1)
        with pytest.raises(SpectralGapError, match="adiabatic sign undefined"):
            lambda_naive(model, 2)


class TestDemonstrateNonevenness:
    def test_static_model_both_clean(self):
        model = floquet_dirac_scalar(1.0, (0, 0, 0.5), 0.0, 0.1)
        rep = demonstrate_nonevenness(model, nf=8, window=4)
        assert rep.odd_norm_lambda_naive <= 1e-10
        assert rep.odd_norm_lambda <= 1e-10

    def test_reference_separation(self):
        rep = demonstrate_nonevenness(reference_model(), nf=8, window=4)
        assert rep.odd_norm_lambda <= FROZEN_ODD_LAMBDA_BOUND
        assert rep.odd_norm_lambda_naive > 10.0 * rep.odd_norm_lambda
        assert rep.odd_norm_lambda_naive == pytest.approx(FROZEN_ODD_NAIVE, rel=1e-6)

    def test_decay_table_orders_and_cleanliness(self):
        rep = demonstrate_nonevenness(
            reference_model(), nf=8, window=4, decay_nfs=[4, 6, 8]
        )
        assert [n for n, _ in rep.decay_table] == [4, 6, 8]
        assert all(v <= FROZEN_ODD_LAMBDA_BOUND for _, v in rep.decay_table)

    def test_window_equals_truncation_warns(self):
        model = floquet_dirac_scalar(1.0, (0, 0, 0.5), 0.0, 0.1)
        rep = demonstrate_nonevenness(model, nf=1, window=1)
        assert any("window equals truncation" in note for note in rep.notes)

    def test_scalar_reference_parameters_are_degenerate(self):
        # at omega = 0.3 the ladder pushes every copy with |m| >= 4 past
        # the spectral gap, the sign pairing with the upper block breaks
        # and the exact unitary stops existing on the raw extended space
        model = floquet_dirac_scalar(1.0, (0, 0, 0.5), 0.2, 0.3)
        with pytest.raises(DomainError, match="eriksen denominator degenerate"):
            demonstrate_nonevenness(model, nf=8, window=4)


class TestTransformNonstationary:
    def test_static_reduction(self):
        m, pz, omega, nf = 1.0, 0.5, 0.1, 3
        model = floquet_dirac_scalar(m, (0, 0, pz), 0.0, omega)
        res = transform_nonstationary(model, nf)
        e = math.sqrt(m * m + pz * pz)
        d = 4
        for i, copy in enumerate(range(-nf, nf + 1)):
            expected = e * BETA4 - copy * omega * np.eye(4)
            assert_allclose(block(res.h_fw.data, d, i, i), expected, atol=1e-12)
        assert res.diagnostics["odd_norm"] <= 1e-12

    def test_vector_drive_full_pipeline(self):
        res = transform_nonstationary(reference_model(), nf=6)
        diag = res.diagnostics
        assert diag["odd_norm"] <= 1e-10
        assert diag["spectrum_defect"] <= 1e-9
        assert diag["unitarity_defect"] <= 1e-10
        assert diag["exp_equivalence_defect"] <= 1e-9
        assert diag["form_agreement_defect"] <= 1e-9
        assert res.s is not None
        assert diag["oddness_defect"] <= 1e-10
        assert diag["hermiticity_defect"] <= 1e-10

    def test_central_window_restriction(self):
        model = floquet_dirac_scalar(1.0, (0, 0, 0.5), 0.0, 0.1)
        k = build_extended(model, 2)
        full = central_odd_norm(k.op, 2)
        inner = central_odd_norm(k.op, 1)
        assert full >= 0.0 and inner >= 0.0
        with pytest.raises(StructureError):
            central_odd_norm(k.op, 3)
