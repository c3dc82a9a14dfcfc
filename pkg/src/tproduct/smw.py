"""Sherman-Morrison-Woodbury updates for ``M = A + U * B * V``.

Two formulas are provided: :func:`smw_inverse` for invertible ``A`` and
``B``, and :func:`smw_pinv`, which expresses ``M^+`` through ``A^+`` when
the update is split against the ranges of ``A`` and ``A^T`` and six
structural identities hold (see :func:`check_smw_conditions`).

Shapes: ``A`` is ``n1 x n2``, ``U`` is ``n1 x k``, ``B`` is ``k x k`` and
``V`` is ``k x n2`` (all with ``n3`` frontal slices).  ``X1, Y1, E1`` are
``n1 x k``; ``X2, Y2, E2`` are ``n2 x k`` and split ``V^T``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import spectral_norm, tprod, tprod_chain
from .errors import ConditionsNotSatisfied, DimensionMismatch, InfeasibleDims, SingularTensor
from .fourier import from_half_faces
from .instances import conditioned, face_is_real, random_rank_profile, random_unitary
from .inverse import inv, pinv, split_against_range
from .tensor import Tensor3, frobenius_norm, identity, transpose

__all__ = [
    "SmwFactors",
    "ConditionReport",
    "CONDITION_THRESHOLD",
    "smw_inverse",
    "build_smw_factors",
    "check_smw_conditions",
    "smw_pinv",
    "construct_conditioned_instance",
]

CONDITION_THRESHOLD = 1e-8
NOISE_FACTOR = 1e3
EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class SmwFactors:
    U: Tensor3
    B: Tensor3
    V: Tensor3
    X1: Tensor3
    Y1: Tensor3
    X2: Tensor3
    Y2: Tensor3
    E1: Tensor3
    E2: Tensor3

    @property
    def width(self) -> int:
        return self.B.n1

    def update(self) -> Tensor3:
        """The perturbation ``U * B * V``."""
        return tprod_chain(self.U, self.B, self.V)


@dataclass(frozen=True)
class ConditionReport:
    """Relative Frobenius residuals of the SMW structural identities.

    ``residuals`` holds the six algebraic identities, keyed by the left-hand
    side they test.  ``structure`` holds the split and range-membership
    checks that need ``A``; it is empty when ``A`` was not supplied.
    """

    residuals: dict[str, float]
    structure: dict[str, float] = field(default_factory=dict)
    threshold: float = CONDITION_THRESHOLD

    def all_residuals(self) -> dict[str, float]:
        return {**self.residuals, **self.structure}

    @property
    def satisfied(self) -> bool:
        return all(v <= self.threshold for v in self.all_residuals().values())


def _prod_norm(factors) -> float:
    return float(np.prod([frobenius_norm(f) for f in factors]))


def _identity_residual(lhs: list[Tensor3], rhs: list[Tensor3], floor: float = 0.0) -> float:
    """``||lhs - rhs||_F`` relative to the natural scale of both sides.

    The scale is the largest of the two sides, of the products of their
    factor norms and of ``floor``, so sides that vanish only up to rounding
    do not blow up.
    """
    L = tprod_chain(*lhs)
    R = tprod_chain(*rhs)
    if L.shape != R.shape:
        raise DimensionMismatch(f"identity sides have shapes {L.shape} and {R.shape}")
    diff = frobenius_norm(L - R)
    scale = max(frobenius_norm(L), frobenius_norm(R), _prod_norm(lhs), _prod_norm(rhs), floor)
    return diff / scale if scale > 0 else 0.0


def _rel(num: float, den: float) -> float:
    return num / den if den > 0 else (0.0 if num == 0 else float("inf"))


def aux_from_y(Y: Tensor3, ref: float) -> Tensor3:
    """``Y * (Y^T * Y)^+``, evaluated as ``(Y^+)^T``.

    Singular values of ``Y`` below ``NOISE_FACTOR * max(n1, k) * n3 * eps *
    ref`` are treated as zero, with ``ref`` the spectral norm of the tensor
    that was split.  Rounding left behind by the range split is then not
    mistaken for a genuine orthogonal component.
    """
    n1, k, n3 = Y.shape
    tol = NOISE_FACTOR * max(n1, k) * n3 * EPS * max(ref, spectral_norm(Y))
    if tol == 0.0:
        return Y
    return transpose(pinv(Y, tol=tol))


def smw_inverse(A: Tensor3, U: Tensor3, B: Tensor3, V: Tensor3) -> Tensor3:
    """``(A + U*B*V)^-1 = A^-1 - A^-1*U*(B^-1 + V*A^-1*U)^-1*V*A^-1``.

    Raises :class:`SingularTensor` with ``which`` set to ``"A"``, ``"B"`` or
    ``"B^-1 + V*A^-1*U"`` for whichever precondition fails first.
    """
    if not (A.n1 == A.n2 == U.n1 == V.n2 and U.n2 == B.n1 == B.n2 == V.n1):
        raise DimensionMismatch(
            f"smw_inverse shapes incompatible: A{A.shape} U{U.shape} B{B.shape} V{V.shape}"
        )
    try:
        Ainv = inv(A)
    except SingularTensor as exc:
        raise exc.named("A") from None
    try:
        Binv = inv(B)
    except SingularTensor as exc:
        raise exc.named("B") from None
    AiU = tprod(Ainv, U)
    VAi = tprod(V, Ainv)
    try:
        Sinv = inv(Binv + tprod(V, AiU))
    except SingularTensor as exc:
        raise exc.named("B^-1 + V*A^-1*U") from None
    return Ainv - tprod_chain(AiU, Sinv, VAi)


def build_smw_factors(A: Tensor3, U: Tensor3, B: Tensor3, V: Tensor3) -> SmwFactors:
    """Split ``U`` against R(A) and ``V^T`` against R(A^T); form ``E1, E2``."""
    n1, n2, n3 = A.shape
    k = B.n1
    if B.n2 != k or U.shape != (n1, k, n3) or V.shape != (k, n2, n3):
        raise DimensionMismatch(
            f"build_smw_factors shapes incompatible: A{A.shape} U{U.shape} B{B.shape} V{V.shape}"
        )
    s1 = split_against_range(A, U)
    s2 = split_against_range(transpose(A), transpose(V))
    E1 = aux_from_y(s1.Y, spectral_norm(U))
    E2 = aux_from_y(s2.Y, spectral_norm(V))
    return SmwFactors(U, B, V, s1.X, s1.Y, s2.X, s2.Y, E1, E2)


def check_smw_conditions(f: SmwFactors, A: Tensor3 | None = None) -> ConditionReport:
    """Evaluate the six identities (and, given ``A``, the range splits).

    The identities are::

        E2 * B^+ * E1^T * Y1 * B  = E2
        X1 * E1^T * Y1 * B        = X1 * B
        Y1 * E1^T * Y1            = Y1
        B * Y2^T * E2 * B^+ * E1^T = E1^T
        B * Y2^T * E2 * X2^T      = B * X2^T
        E2 * Y2^T * E2            = E2

    Shape inconsistencies surface as :class:`DimensionMismatch`.
    """
    Bp = pinv(f.B)
    E1t, E2 = transpose(f.E1), f.E2
    Y1, Y2t, X1, X2t, B = f.Y1, transpose(f.Y2), f.X1, transpose(f.X2), f.B
    residuals = {
        "e2_bp_e1t_y1_b": _identity_residual([E2, Bp, E1t, Y1, B], [E2]),
        "x1_e1t_y1_b": _identity_residual([X1, E1t, Y1, B], [X1, B]),
        # Y1 is measured against U: a Y1 that is pure rounding must not fail
        "y1_e1t_y1": _identity_residual([Y1, E1t, Y1], [Y1], frobenius_norm(f.U)),
        "b_y2t_e2_bp_e1t": _identity_residual([B, Y2t, E2, Bp, E1t], [E1t]),
        "b_y2t_e2_x2t": _identity_residual([B, Y2t, E2, X2t], [B, X2t]),
        "e2_y2t_e2": _identity_residual([E2, Y2t, E2], [E2]),
    }
    structure: dict[str, float] = {}
    if A is not None:
        Ap = pinv(A)
        P_col = tprod(A, Ap)
        P_row = tprod(Ap, A)
        Vt = transpose(f.V)
        nu, nv = frobenius_norm(f.U), frobenius_norm(Vt)
        structure = {
            "u_split": _rel(frobenius_norm(f.U - f.X1 - f.Y1), nu),
            "vt_split": _rel(frobenius_norm(Vt - f.X2 - f.Y2), nv),
            "x1_in_range": _rel(frobenius_norm(tprod(P_col, X1) - X1), nu),
            "y1_orthogonal": _rel(frobenius_norm(tprod(P_col, Y1)), nu),
            "x2_in_row_range": _rel(frobenius_norm(tprod(P_row, f.X2) - f.X2), nv),
            "y2_orthogonal": _rel(frobenius_norm(tprod(P_row, f.Y2)), nv),
            "e1_consistent": _rel(
                frobenius_norm(aux_from_y(Y1, spectral_norm(f.U)) - f.E1),
                max(frobenius_norm(f.E1), 1.0),
            ),
            "e2_consistent": _rel(
                frobenius_norm(aux_from_y(f.Y2, spectral_norm(f.V)) - f.E2),
                max(frobenius_norm(f.E2), 1.0),
            ),
        }
    return ConditionReport(residuals, structure)


def smw_pinv(A: Tensor3, f: SmwFactors, report: ConditionReport | None = None) -> Tensor3:
    """Moore-Penrose inverse of ``M = A + U*B*V`` through ``A^+``::

        M^+ = A^+ - E2*X2^T*A^+ - A^+*X1*E1^T + E2*(B^+ + X2^T*A^+*X1)*E1^T

    Refuses (raises :class:`ConditionsNotSatisfied`) unless every structural
    condition holds; it never returns the formula's value outside its
    domain of validity.
    """
    if report is None:
        report = check_smw_conditions(f, A)
    if not report.satisfied:
        raise ConditionsNotSatisfied(report)
    Ap = pinv(A)
    X2t, E1t = transpose(f.X2), transpose(f.E1)
    inner = pinv(f.B) + tprod_chain(X2t, Ap, f.X1)
    return (
        Ap
        - tprod_chain(f.E2, X2t, Ap)
        - tprod_chain(Ap, f.X1, E1t)
        + tprod_chain(f.E2, inner, E1t)
    )


def _face_block(n: int, r: int, rng, real: bool, lo: float = 0.5, hi: float = 2.0):
    U = random_unitary(n, rng, real)[:, :r]
    V = random_unitary(n, rng, real)[:, :r]
    s = rng.uniform(lo, hi, size=r)
    return (U * s) @ np.conj(V).T


def construct_conditioned_instance(dims, seed, family: str = "lifted",
                                   orthonormal: bool = True,
                                   cols: int | None = None) -> tuple[Tensor3, SmwFactors]:
    """Random ``(A, factors)`` that satisfies every SMW condition.

    ``dims = (n1, k, n3)``: ``A`` is ``n1 x n1`` (``n1 x cols`` if ``cols``
    is given) and the update has width ``k``.

    ``family="lifted"`` builds each Fourier face from orthonormal bases so
    that ``Y1, Y2`` have full column rank inside the orthogonal complements
    of the face ranges and ``B`` is invertible; it needs ``min(n1, cols) >
    k``.  With ``orthonormal=False`` the ``Y`` columns are mixed by a
    random invertible matrix, so ``E != Y``.

    ``family="trivial"`` has ``Y1 = Y2 = 0`` and a rank-deficient ``B``
    with ``X1 * B = 0`` and ``B * X2^T = 0``; the update vanishes.
    """
    n1, k, n3 = (int(d) for d in dims)
    n2 = n1 if cols is None else int(cols)
    if min(n1, n2, k, n3) < 1:
        raise InfeasibleDims(f"dimensions must be positive: {dims}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)

    if family == "lifted":
        if min(n1, n2) < k + 1:
            raise InfeasibleDims(
                f"A of size {n1}x{n2} leaves no room for a rank >= 1 range plus "
                f"{k} orthogonal columns"
            )
        top = min(n1, n2) - k
        h = n3 // 2 + 1
        fA = np.zeros((h, n1, n2), complex)
        fU = np.zeros((h, n1, k), complex)
        fV = np.zeros((h, k, n2), complex)
        fB = np.zeros((h, k, k), complex)
        for i in range(h):
            real = face_is_real(i, n3)
            r = int(rng.integers(1, top + 1))
            Q = random_unitary(n1, rng, real)
            P = random_unitary(n2, rng, real)
            fA[i] = Q[:, :r] @ _face_block(r, r, rng, real) @ np.conj(P[:, :r]).T
            if orthonormal:
                W1, W2 = random_unitary(k, rng, real), random_unitary(k, rng, real)
            else:
                W1, W2 = _face_block(k, k, rng, real), _face_block(k, k, rng, real)
            G1 = rng.standard_normal((r, k)) + (0 if real else 1j * rng.standard_normal((r, k)))
            G2 = rng.standard_normal((r, k)) + (0 if real else 1j * rng.standard_normal((r, k)))
            fU[i] = Q[:, :r] @ G1 + Q[:, r : r + k] @ W1
            fV[i] = np.conj(P[:, :r] @ G2 + P[:, r : r + k] @ W2).T
            fB[i] = _face_block(k, k, rng, real)
        A = from_half_faces(fA, n3)
        U = from_half_faces(fU, n3)
        V = from_half_faces(fV, n3)
        B = from_half_faces(fB, n3)
    elif family == "trivial":
        A = conditioned(n1, n2, n3, rng,
                        ranks=random_rank_profile(n1, n2, n3, rng, deficient=False, min_rank=1))
        rb = [int(rng.integers(0, k)) for _ in range(n3 // 2 + 1)]
        B = conditioned(k, k, n3, rng, ranks=[rb[min(i, n3 - i)] for i in range(n3)],
                        sv_range=(0.5, 2.0))
        Bp = pinv(B)
        Ik = identity(k, n3)
        Ap = pinv(A)
        Z1 = Tensor3._wrap(rng.standard_normal((n1, k, n3)))
        Z2 = Tensor3._wrap(rng.standard_normal((n2, k, n3)))
        X1 = tprod_chain(A, Ap, Z1, Ik - tprod(B, Bp))
        X2 = tprod_chain(Ap, A, Z2, Ik - tprod(Bp, B))
        U, V = X1, transpose(X2)
    else:
        raise ValueError(f"unknown family {family!r}")

    factors = build_smw_factors(A, U, B, V)
    report = check_smw_conditions(factors, A)
    if not report.satisfied:
        raise RuntimeError(f"constructed instance violates SMW conditions: {report}")
    return A, factors
