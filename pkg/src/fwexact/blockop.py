"""Block-operator algebra for two-spinor graded Hamiltonians.

Wave functions carry an upper and a lower spinor-like block of equal
size; the grading matrix ``beta`` is +1 on the upper block and -1 on the
lower.  Any operator splits into an even part (commutes with beta,
block-diagonal) and an odd part (anticommutes, block-antidiagonal).
Fermionic Hamiltonians are self-adjoint under the plain Hermitian
metric; bosonic first-order wave equations are self-adjoint under the
beta-weighted metric, A -> beta A^dag beta.

Everything here is a pure function of immutable inputs; matrices are
dense complex throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import MetricViolationError, StructureError
from .tolerances import TOL_STRUCT


class Metric(Enum):
    """Adjoint convention: plain Hermitian or beta-pseudo-Hermitian."""

    HERMITIAN = "hermitian"
    BETA_PSEUDO = "beta-pseudo"


@dataclass(frozen=True)
class BlockOperator:
    """Square complex matrix tagged with its block structure.

    Parameters
    ----------
    data : ndarray
        Square complex matrix of side ``internal_dim * floquet_copies``.
    internal_dim : int
        Dimension of one time-Fourier copy.  Always even: the upper and
        lower spinor-like blocks have ``internal_dim // 2`` components
        each (for a grid model the grid factor is folded in here).
    floquet_copies : int
        Number of Fourier copies in the extended space; 1 when
        stationary.
    """

    data: np.ndarray
    internal_dim: int
    floquet_copies: int = 1

    def __post_init__(self) -> None:
        data = np.array(self.data, dtype=complex)
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise StructureError(f"operator must be square, got shape {data.shape}")
        if self.internal_dim < 2 or self.internal_dim % 2 != 0:
            raise StructureError(
                f"internal dimension must be even and >= 2, got {self.internal_dim}"
            )
        if self.floquet_copies < 1:
            raise StructureError(f"floquet_copies must be >= 1, got {self.floquet_copies}")
        if data.shape[0] != self.internal_dim * self.floquet_copies:
            raise StructureError(
                f"side {data.shape[0]} != internal_dim {self.internal_dim} "
                f"x floquet_copies {self.floquet_copies}"
            )
        object.__setattr__(self, "data", data)

    @property
    def side(self) -> int:
        return self.internal_dim * self.floquet_copies

    def like(self, data: np.ndarray) -> "BlockOperator":
        """New operator with the same block tags."""
        return BlockOperator(data, self.internal_dim, self.floquet_copies)

    def norm(self, ord: str | int = "fro") -> float:
        return float(np.linalg.norm(self.data, ord))


class BetaMatrix(BlockOperator):
    """The grading matrix: diag(+1 on upper block, -1 on lower block),
    replicated identically in every Fourier copy."""


def beta_matrix(internal_dim: int, floquet_copies: int = 1) -> BetaMatrix:
    """Build the grading matrix for the given block structure.

    beta is diagonal with entries +-1, beta^2 = 1 and beta = beta^dag
    hold exactly.
    """
    if internal_dim < 2 or internal_dim % 2 != 0:
        raise StructureError(
            f"internal dimension must be even and >= 2, got {internal_dim}"
        )
    half = internal_dim // 2
    block = np.concatenate([np.ones(half), -np.ones(half)])
    diag = np.tile(block, max(floquet_copies, 1))
    return BetaMatrix(np.diag(diag).astype(complex), internal_dim, floquet_copies)


def _check_same_shape(a: BlockOperator, b: BlockOperator) -> None:
    if (a.internal_dim, a.floquet_copies) != (b.internal_dim, b.floquet_copies):
        raise StructureError(
            f"block structure mismatch: ({a.internal_dim}, {a.floquet_copies}) "
            f"vs ({b.internal_dim}, {b.floquet_copies})"
        )


def even_part(a: BlockOperator, beta: BetaMatrix) -> BlockOperator:
    """Projection onto the beta-commuting part, (A + beta A beta) / 2.

    Since beta is a +-1 diagonal, the projection zeroes the
    block-antidiagonal entries exactly; even_part + odd_part reproduces
    the input bit for bit.
    """
    _check_same_shape(a, beta)
    b = beta.data
    return a.like((a.data + b @ a.data @ b) / 2.0)


def odd_part(a: BlockOperator, beta: BetaMatrix) -> BlockOperator:
    """Projection onto the beta-anticommuting part, (A - beta A beta) / 2."""
    _check_same_shape(a, beta)
    b = beta.data
    return a.like((a.data - b @ a.data @ b) / 2.0)


def adjoint_m(a: BlockOperator, metric: Metric) -> BlockOperator:
    """Metric adjoint: A^dag for the Hermitian metric, beta A^dag beta
    for the beta-pseudo metric.  An involution for both."""
    if metric is Metric.HERMITIAN:
        return a.like(a.data.conj().T)
    b = beta_matrix(a.internal_dim, a.floquet_copies).data
    return a.like(b @ a.data.conj().T @ b)


def is_self_adjoint(a: BlockOperator, metric: Metric, tol: float = TOL_STRUCT) -> bool:
    defect = np.linalg.norm(a.data - adjoint_m(a, metric).data)
    return defect <= tol * max(np.linalg.norm(a.data), 1e-300)


@dataclass(frozen=True)
class SplitHamiltonian:
    """Hamiltonian split H = beta*mass + even + odd.

    ``mass`` is the even operator multiplying beta (declared by the
    model; the split of the even content between beta*mass and the even
    term is not unique when mass is a nonconstant operator, so it is
    never inferred).  ``even`` commutes with beta, ``odd`` anticommutes,
    and the total is self-adjoint under ``metric``.
    """

    mass: BlockOperator
    even: BlockOperator
    odd: BlockOperator
    beta: BetaMatrix
    metric: Metric

    def __post_init__(self) -> None:
        for part in (self.mass, self.even, self.odd):
            _check_same_shape(part, self.beta)

    @property
    def total(self) -> BlockOperator:
        """beta*mass + even + odd."""
        return self.beta.like(
            self.beta.data @ self.mass.data + self.even.data + self.odd.data
        )

    def validate(self, tol: float = TOL_STRUCT) -> dict[str, float]:
        """Relative defect norms of the structural invariants.

        Raises StructureError / MetricViolationError when any defect
        exceeds ``tol``.
        """
        b = self.beta.data
        scale = max(self.total.norm(), 1e-300)
        defects = {
            "mass_even_defect": np.linalg.norm(b @ self.mass.data - self.mass.data @ b)
            / max(self.mass.norm(), 1e-300),
            "even_defect": np.linalg.norm(b @ self.even.data - self.even.data @ b)
            / max(self.even.norm(), scale * tol, 1e-300),
            "odd_defect": np.linalg.norm(b @ self.odd.data + self.odd.data @ b)
            / max(self.odd.norm(), scale * tol, 1e-300),
            "self_adjoint_defect": np.linalg.norm(
                self.total.data - adjoint_m(self.total, self.metric).data
            )
            / scale,
        }
        if defects["mass_even_defect"] > tol:
            raise StructureError(
                f"mass operator is not even: defect {defects['mass_even_defect']:.3e}"
            )
        if defects["even_defect"] > tol or defects["odd_defect"] > tol:
            raise StructureError(
                "even/odd split violates the beta grading: "
                f"even {defects['even_defect']:.3e}, odd {defects['odd_defect']:.3e}"
            )
        if defects["self_adjoint_defect"] > tol:
            raise MetricViolationError(
                "metric violation: total Hamiltonian is not self-adjoint "
                f"under {self.metric.value}: defect {defects['self_adjoint_defect']:.3e}"
            )
        return defects


def split(
    h: BlockOperator,
    mass: BlockOperator,
    beta: BetaMatrix,
    metric: Metric,
    tol: float = TOL_STRUCT,
) -> SplitHamiltonian:
    """Split a self-adjoint H into beta*mass + even + odd.

    The even term is even_part(H) - beta*mass and the odd term is
    odd_part(H).  The declared mass operator must commute with beta and
    H must be self-adjoint under ``metric``, both to ``tol`` relative.
    """
    _check_same_shape(h, beta)
    _check_same_shape(mass, beta)
    b = beta.data
    mass_defect = np.linalg.norm(b @ mass.data - mass.data @ b)
    if mass_defect > tol * max(mass.norm(), 1e-300):
        raise StructureError(f"mass operator is not even: defect {mass_defect:.3e}")
    if not is_self_adjoint(h, metric, tol):
        defect = np.linalg.norm(h.data - adjoint_m(h, metric).data) / max(h.norm(), 1e-300)
        raise MetricViolationError(
            f"metric violation: H is not self-adjoint under {metric.value}: "
            f"defect {defect:.3e}"
        )
    even = h.like(even_part(h, beta).data - b @ mass.data)
    odd = odd_part(h, beta)
    result = SplitHamiltonian(mass=mass, even=even, odd=odd, beta=beta, metric=metric)
    result.validate(tol)
    return result
