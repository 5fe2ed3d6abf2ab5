"""Exact exponential generator of the block-diagonalizing unitary.

With lambda the (possibly extended-space) sign operator, the doubling
identities

    sin 2S = -i (beta lambda - lambda beta) / 2
    cos 2S =    (beta lambda + lambda beta) / 2

pin down an odd, metric-self-adjoint generator S with exp(iS) = U.  The
best-conditioned route is the half-angle arcsine of the doubling
argument

    M = i (beta lambda - lambda beta) / 2,      S = -(1/2) arcsin(M),

which is exactly Hermitian in the Hermitian metric; it is the canonical
form here.  Two cross-checks are computed alongside:

* form A: full-angle arcsine with the square-root denominator,
  S = -arcsin(D^{-1/2} i(beta lambda - lambda beta) D^{-1/2}) with
  D = 2 sqrt(2 + beta lambda + lambda beta), evaluated symmetrically
  (numerator and denominator commute; the residual commutator is
  recorded, not assumed);
* the beta-factored variant, which pulls beta out of the odd arcsine
  series: the argument i(lambda - beta lambda beta)/2 equals beta M, so
  the series evaluates to beta arcsin(M) in the eigenbasis of the
  companion M, and the leading beta cancels it back to -(1/2) arcsin of
  the companion computed through the independent lambda - beta lambda
  beta path.

In the beta-pseudo metric the doubling argument has an imaginary
spectrum (arcsin(ix) = i arcsinh x), so the general-eigenbasis arcsine
is used there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blockop import BetaMatrix, BlockOperator, Metric, adjoint_m
from .errors import DomainError
from .matfun import (
    arcsin_general,
    arcsin_herm,
    decompose,
    exp_i,
    sqrt_spd,
)
from .tolerances import EPS_CLAMP


@dataclass(frozen=True)
class GeneratorResult:
    """Canonical generator, both cross-forms, and defect norms."""

    s: BlockOperator
    s_form_a: BlockOperator
    s_form_b: BlockOperator
    diagnostics: dict[str, float]


def _identity_defect(x: np.ndarray) -> float:
    return float(np.linalg.norm(x)) / np.sqrt(x.shape[0])


def _arcsin(m: BlockOperator, metric: Metric, eps_clamp: float) -> BlockOperator:
    if metric is Metric.HERMITIAN:
        return arcsin_herm(m, eps_clamp)
    return arcsin_general(m, eps_clamp)


def generator_from_lambda(
    lam: BlockOperator,
    beta: BetaMatrix,
    metric: Metric,
    *,
    eps_clamp: float = EPS_CLAMP,
    lambda_sq_tol: float = 1e-8,
) -> GeneratorResult:
    """Compute S from the sign operator through all three routes.

    Diagnostics: oddness_defect (beta S + S beta), hermiticity_defect
    (S - S^adj), form_agreement_defect (largest pairwise disagreement of
    the three forms, scaled by max(1, ||S||_F)), sin2s_defect /
    cos2s_defect (doubling identities), denominator_commutator_defect
    (form A symmetrization assumption) and clamp_excess (how far the
    doubling argument's spectral radius pokes past 1; positive values
    mean the arcsine clamp was active).
    """
    eye = np.eye(lam.side)
    involution = _identity_defect(lam.data @ lam.data - eye)
    if involution > lambda_sq_tol:
        raise DomainError(
            f"sign operator is not an involution: defect {involution:.3e}"
        )
    b = beta.data
    bl, lb = b @ lam.data, lam.data @ b

    # canonical route: half-angle arcsine of the doubling argument
    doubling = lam.like(0.5j * (bl - lb))
    s_form_b = lam.like(-0.5 * _arcsin(doubling, metric, eps_clamp).data)

    # beta-factored variant: same half-angle formula reached through the
    # independent lambda - beta lambda beta path (beta from the odd
    # series cancels the prefactor)
    companion = lam.like(b @ (0.5j * (lam.data - b @ lam.data @ b)))
    s = lam.like(-0.5 * _arcsin(companion, metric, eps_clamp).data)

    # form A: full-angle arcsine with the square-root denominator,
    # evaluated as D^{-1/2} (2M) D^{-1/2}
    anticomm = lam.like(2.0 * eye + bl + lb)
    root = sqrt_spd(anticomm, metric)
    d_op = lam.like(2.0 * root.data)
    half = decompose(d_op, metric).apply(lambda w: 1.0 / np.sqrt(w.real))
    arg_a = lam.like(half @ (2.0 * doubling.data) @ half)
    s_form_a = lam.like(-_arcsin(arg_a, metric, eps_clamp).data)

    radius = float(np.linalg.norm(doubling.data, 2))
    s_scale = max(1.0, s.norm())
    dec_s = (
        decompose(s, metric, allow_complex=True)
        if metric is Metric.BETA_PSEUDO
        else decompose(s, metric)
    )
    sin_2s = dec_s.apply(lambda w: np.sin(2.0 * w))
    cos_2s = dec_s.apply(lambda w: np.cos(2.0 * w))
    diagnostics = {
        "oddness_defect": float(
            np.linalg.norm(b @ s.data + s.data @ b) / s_scale
        ),
        "hermiticity_defect": float(
            np.linalg.norm(s.data - adjoint_m(s, metric).data) / s_scale
        ),
        "form_agreement_defect": float(
            max(
                np.linalg.norm(s_form_a.data - s_form_b.data),
                np.linalg.norm(s.data - s_form_b.data),
                np.linalg.norm(s_form_a.data - s.data),
            )
            / s_scale
        ),
        "sin2s_defect": _identity_defect(sin_2s + doubling.data),
        "cos2s_defect": _identity_defect(cos_2s - 0.5 * (bl + lb)),
        "denominator_commutator_defect": float(
            np.linalg.norm(doubling.data @ d_op.data - d_op.data @ doubling.data)
            / max(float(np.linalg.norm(d_op.data)), 1e-300)
        ),
        "clamp_excess": max(0.0, radius - 1.0),
    }
    return GeneratorResult(s=s, s_form_a=s_form_a, s_form_b=s_form_b, diagnostics=diagnostics)


def verify_trig_identities(
    g: GeneratorResult,
    lam: BlockOperator,
    beta: BetaMatrix,
    metric: Metric = Metric.HERMITIAN,
) -> dict[str, float]:
    """Recompute the doubling identities from g.s alone.

    Returns sin2s_defect and cos2s_defect: norms of
    sin 2S + i(beta lambda - lambda beta)/2 and
    cos 2S - (beta lambda + lambda beta)/2, scaled by sqrt(n).
    """
    b = beta.data
    dec = (
        decompose(g.s, metric, allow_complex=True)
        if metric is Metric.BETA_PSEUDO
        else decompose(g.s, metric)
    )
    sin_2s = dec.apply(lambda w: np.sin(2.0 * w))
    cos_2s = dec.apply(lambda w: np.cos(2.0 * w))
    return {
        "sin2s_defect": _identity_defect(
            sin_2s + 0.5j * (b @ lam.data - lam.data @ b)
        ),
        "cos2s_defect": _identity_defect(
            cos_2s - 0.5 * (b @ lam.data + lam.data @ b)
        ),
    }


def verify_exp_equivalence(
    g: GeneratorResult, u: BlockOperator, metric: Metric
) -> float:
    """Relative disagreement ||exp(iS) - U||_F / ||U||_F."""
    exponential = exp_i(g.s, metric)
    return float(np.linalg.norm(exponential.data - u.data) / max(u.norm(), 1e-300))
