"""Floquet extended-space representation and the nonstationary sign operator.

For a time-periodic H(t) = sum_n H_n exp(-i n w t), the operator
H(t) - i d/dt acts on the Fourier components exp(-i m w t) as the block
matrix

    K[m, n] = H_{m-n} - m w delta_{mn},     m, n in [-nf, nf],

truncated at order nf.  The diagonal ladder -m w realizes -i d/dt and
commutes with the extended grading matrix, so K carries the same
even/odd structure as a stationary Hamiltonian and the whole stationary
machinery applies with the sign operator

    Lambda = K / sqrt(K^2)

of the full extended operator.  The "naive" alternative transplants the
stationary recipe: the instantaneous sign operator lambda(t) =
H(t)/sqrt(H(t)^2) sampled over one period and Fourier-transformed into a
block-Toeplitz extended operator.  Transforming K with the unitary built
from Lambda produces an even operator; with the naive operator the
time-derivative picks up terms proportional to d(lambda)/dt that are not
even, and the demonstration below measures exactly that.

Odd-part norms are measured on a central window of Fourier copies; the
edge copies of the truncated ladder are excluded as truncation
artifacts.  No quasienergy folding is applied: if the raw ladder closes
the spectral gap (a quasienergy resonance) this surfaces as an error.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .blockop import BetaMatrix, BlockOperator, Metric, adjoint_m, beta_matrix, odd_part
from .errors import SpectralGapError, StructureError
from .eriksen import FWResult, eriksen_unitary, verify_eriksen_identities
from .expgen import generator_from_lambda, verify_exp_equivalence
from .matfun import sign_of
from .models import TimePeriodicHamiltonian
from .tolerances import GAP_TOL


@dataclass(frozen=True)
class ExtendedOperator:
    """H(t) - i d/dt truncated to 2*nf + 1 Fourier copies."""

    op: BlockOperator
    omega: float
    nf: int

    @property
    def internal_dim(self) -> int:
        return self.op.internal_dim

    @property
    def beta(self) -> BetaMatrix:
        return beta_matrix(self.op.internal_dim, self.op.floquet_copies)


@dataclass(frozen=True)
class FloquetReport:
    """Central-window odd norms for the naive and extended sign operators.

    ``decay_table`` holds (nf, odd norm with Lambda) pairs at strictly
    increasing truncation orders.  ``notes`` carries configuration
    warnings (e.g. a window as wide as the truncation itself).
    """

    odd_norm_lambda_naive: float
    odd_norm_lambda: float
    window: int
    decay_table: tuple[tuple[int, float], ...]
    notes: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.odd_norm_lambda_naive < 0 or self.odd_norm_lambda < 0:
            raise StructureError("odd norms must be nonnegative")
        orders = [nf for nf, _ in self.decay_table]
        if any(b <= a for a, b in zip(orders, orders[1:])):
            raise StructureError("decay table truncation orders must strictly increase")


def build_extended(model: TimePeriodicHamiltonian, nf: int) -> ExtendedOperator:
    """Assemble the truncated extended-space matrix of H(t) - i d/dt."""
    if nf < 1:
        raise StructureError(f"truncation order must be >= 1, got {nf}")
    if model.max_mode > 2 * nf:
        raise StructureError(
            f"truncation too small: model has Fourier mode {model.max_mode}, "
            f"representable range is |n| <= {2 * nf}"
        )
    d = model.internal_dim
    copies = 2 * nf + 1
    data = np.zeros((d * copies, d * copies), dtype=complex)
    for i, m in enumerate(range(-nf, nf + 1)):
        for j, n in enumerate(range(-nf, nf + 1)):
            block = model.mode(m - n)
            if m == n:
                block = block - m * model.omega * np.eye(d)
            data[i * d : (i + 1) * d, j * d : (j + 1) * d] = block
    return ExtendedOperator(BlockOperator(data, d, copies), model.omega, nf)


def lambda_capital(
    k: ExtendedOperator, gap_tol: float = GAP_TOL, metric: Metric = Metric.HERMITIAN
) -> BlockOperator:
    """Sign operator of the extended operator, Lambda = K / sqrt(K^2)."""
    try:
        return sign_of(k.op, metric, gap_tol)
    except SpectralGapError as exc:
        raise SpectralGapError(
            f"{exc} [quasienergy resonance: adjust omega or add detuning]"
        ) from exc


def lambda_naive(
    model: TimePeriodicHamiltonian, nf: int, gap_tol: float = GAP_TOL
) -> BlockOperator:
    """Instantaneous sign operator, Fourier-transformed to the extended space.

    lambda(t) = H(t)/sqrt(H(t)^2) is evaluated on 4*(2*nf+1) uniform
    samples over one period (oversampled Nyquist for the bands kept) and
    assembled into the block-Toeplitz extended operator with bands
    lambda_q for |q| <= 2*nf.  The result squares to one only up to the
    truncation error, which is the point of keeping it.
    """
    if nf < 1:
        raise StructureError(f"truncation order must be >= 1, got {nf}")
    d = model.internal_dim
    copies = 2 * nf + 1
    samples = 4 * copies
    period = 2.0 * np.pi / model.omega
    times = np.arange(samples) * (period / samples)
    signs = []
    for t in times:
        h_t = BlockOperator(model.at_time(t), d, 1)
        try:
            signs.append(sign_of(h_t, model.metric, gap_tol).data)
        except SpectralGapError as exc:
            raise SpectralGapError(
                f"adiabatic sign undefined: instantaneous spectrum closes at "
                f"t = {t:.6g} ({exc})"
            ) from exc
    bands = {}
    for q in range(-2 * nf, 2 * nf + 1):
        phases = np.exp(1j * q * model.omega * times)
        bands[q] = sum(s * ph for s, ph in zip(signs, phases)) / samples
    data = np.zeros((d * copies, d * copies), dtype=complex)
    for i, m in enumerate(range(-nf, nf + 1)):
        for j, n in enumerate(range(-nf, nf + 1)):
            data[i * d : (i + 1) * d, j * d : (j + 1) * d] = bands[m - n]
    return BlockOperator(data, d, copies)


def central_window(a: BlockOperator, window: int) -> BlockOperator:
    """Restriction to the |m| <= window Fourier copies."""
    copies = a.floquet_copies
    nf = (copies - 1) // 2
    if window < 0 or window > nf:
        raise StructureError(f"window must be in [0, {nf}], got {window}")
    d = a.internal_dim
    lo = (nf - window) * d
    hi = (nf + window + 1) * d
    return BlockOperator(a.data[lo:hi, lo:hi], d, 2 * window + 1)


def central_odd_norm(a: BlockOperator, window: int) -> float:
    """Relative odd-part norm on the central window of Fourier copies."""
    sub = central_window(a, window)
    beta = beta_matrix(sub.internal_dim, sub.floquet_copies)
    return odd_part(sub, beta).norm() / max(sub.norm(), 1e-300)


def _transformed_odd_norm(
    model: TimePeriodicHamiltonian,
    nf: int,
    window: int,
    gap_tol: float,
    naive: bool,
) -> float:
    k = build_extended(model, nf)
    beta = k.beta
    if naive:
        lam = lambda_naive(model, nf, gap_tol)
        u = eriksen_unitary(lam, beta, model.metric, lambda_sq_tol=None)
    else:
        lam = lambda_capital(k, gap_tol, model.metric)
        u = eriksen_unitary(lam, beta, model.metric)
    u_inv = adjoint_m(u, model.metric)
    transformed = k.op.like(u.data @ k.op.data @ u_inv.data)
    return central_odd_norm(transformed, window)


def demonstrate_nonevenness(
    model: TimePeriodicHamiltonian,
    nf: int,
    window: int,
    gap_tol: float = GAP_TOL,
    decay_nfs: Optional[Iterable[int]] = None,
) -> FloquetReport:
    """Compare the naive and extended sign operators on one model.

    Transforms K with the unitary built from each operator and measures
    the central-window relative odd norm of the result.  The involution
    pre-check is disabled on the naive branch: its failure to square to
    one is part of what is being demonstrated.  ``decay_nfs`` adds a
    table of Lambda-branch odd norms over extra truncation orders (the
    window is clamped to each order).
    """
    notes: list[str] = []
    w = min(window, nf)
    if w != window:
        notes.append(f"window {window} clamped to truncation order {nf}")
    if w == nf:
        notes.append("window equals truncation; edge effects dominate")
    odd_naive = _transformed_odd_norm(model, nf, w, gap_tol, naive=True)
    odd_lam = _transformed_odd_norm(model, nf, w, gap_tol, naive=False)
    orders = sorted(set(decay_nfs)) if decay_nfs is not None else [nf]
    table = []
    for order in orders:
        w_i = min(window, order)
        if order == nf and w_i == w:
            table.append((order, odd_lam))
        else:
            table.append(
                (order, _transformed_odd_norm(model, order, w_i, gap_tol, naive=False))
            )
    return FloquetReport(
        odd_norm_lambda_naive=odd_naive,
        odd_norm_lambda=odd_lam,
        window=w,
        decay_table=tuple(table),
        notes=tuple(notes),
    )


def transform_nonstationary(
    model: TimePeriodicHamiltonian,
    nf: int,
    gap_tol: float = GAP_TOL,
    window: Optional[int] = None,
) -> FWResult:
    """Full nonstationary pipeline on the extended space.

    Builds K, the extended sign operator Lambda, the unitary, the
    transformed extended operator and the exponential generator; the
    diagnostics merge the unitary identities, the central-window odd
    norm, the spectrum displacement and the generator defects.
    """
    if window is None:
        window = max(nf // 2, 1)
    window = min(window, nf)
    k = build_extended(model, nf)
    beta, metric = k.beta, model.metric
    lam = lambda_capital(k, gap_tol, metric)
    u = eriksen_unitary(lam, beta, metric)
    u_inverse = adjoint_m(u, metric)
    h_fw = k.op.like(u.data @ k.op.data @ u_inverse.data)
    generator = generator_from_lambda(lam, beta, metric)
    result = FWResult(
        sign_op=lam,
        u=u,
        u_inverse=u_inverse,
        h_fw=h_fw,
        diagnostics={},
        s=generator.s,
    )
    diagnostics = verify_eriksen_identities(result, beta, metric)
    diagnostics["odd_norm"] = central_odd_norm(h_fw, window)
    before = np.sort(np.linalg.eigvalsh(k.op.data))
    after = np.sort(np.linalg.eigvalsh(h_fw.data))
    scale = max(float(np.linalg.norm(k.op.data, 2)), 1e-300)
    diagnostics["spectrum_defect"] = float(np.abs(before - after).max()) / scale
    diagnostics.update(generator.diagnostics)
    diagnostics["exp_equivalence_defect"] = verify_exp_equivalence(generator, u, metric)
    result.diagnostics.update(diagnostics)
    return result
