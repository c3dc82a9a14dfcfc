"""Exact and least-squares solvers for ``A * X = D`` built on the pseudoinverse."""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import tprod
from .errors import DimensionMismatch
from .inverse import pinv
from .tensor import Tensor3, frobenius_norm, identity

__all__ = ["SolveResult", "solve_exact", "lstsq_min_norm", "CONSISTENCY_RTOL"]

CONSISTENCY_RTOL = 1e-9


@dataclass(frozen=True)
class SolveResult:
    """Outcome of :func:`solve_exact`.

    ``particular`` is the minimal-norm candidate ``A^+ * D``; ``solution``
    adds ``(I - A^+ * A) * free``.  When ``consistent`` is false neither
    solves the system exactly (they are then least-squares solutions).
    """

    solution: Tensor3
    particular: Tensor3
    consistent: bool
    consistency_residual: float
    homogeneous_projector: Tensor3


def _check(A: Tensor3, D: Tensor3) -> None:
    if A.n1 != D.n1 or A.n3 != D.n3:
        raise DimensionMismatch(f"system {A.shape} * X = {D.shape} is ill-shaped")


def solve_exact(A: Tensor3, D: Tensor3, free: Tensor3 | None = None) -> SolveResult:
    """General solution of ``A * X = D``.

    The system is consistent iff ``A * A^+ * D = D``; the test is
    ``||A A^+ D - D||_F <= 1e-9 ||D||_F`` (``D = 0`` is always consistent).
    ``free`` is the arbitrary ``n2 x n4 x n3`` tensor of the general
    solution and defaults to zero, which gives the minimal-norm solution.
    """
    _check(A, D)
    Ap = pinv(A)
    X0 = tprod(Ap, D)
    dnorm = frobenius_norm(D)
    res = frobenius_norm(tprod(A, X0) - D)
    rel = res / dnorm if dnorm > 0 else 0.0
    P_null = identity(A.n2, A.n3) - tprod(Ap, A)
    if free is None:
        X = X0
    else:
        if free.shape != (A.n2, D.n2, A.n3):
            raise DimensionMismatch(
                f"free tensor must be {(A.n2, D.n2, A.n3)}, got {free.shape}"
            )
        X = X0 + tprod(P_null, free)
    return SolveResult(X, X0, rel <= CONSISTENCY_RTOL, rel, P_null)


def lstsq_min_norm(A: Tensor3, B: Tensor3) -> Tensor3:
    """Minimal-Frobenius-norm minimizer of ``||A * X - B||_F``."""
    _check(A, B)
    return tprod(pinv(A), B)
