"""Perturbation bounds for inverses, pseudoinverses and tensor equations.

Every calculator evaluates a theoretical upper bound *and* the error it
bounds, in both the Frobenius norm (``_F``) and the spectral norm (``_2``),
and returns them together in a :class:`BoundReport`.  A failed hypothesis is
reported through ``applicability``; it never raises.

Norm conventions: ``||A||_F`` is the Frobenius norm of the tensor entries
and ``||A||_2`` the largest singular value over all Fourier faces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .algebra import spectral_norm, tprod
from .errors import DimensionMismatch, SingularTensor
from .inverse import MultiRank, inv, multirank, pinv
from .smw import SmwFactors, check_smw_conditions, smw_pinv
from .solve import solve_exact
from .tensor import Tensor3, frobenius_norm, transpose

__all__ = [
    "Applicability",
    "Check",
    "BoundReport",
    "MuLambdaCase",
    "MuLambda",
    "mu_lambda",
    "inv_perturb_posterior",
    "inv_perturb_prior",
    "equation_perturb",
    "pinv_perturb_general",
    "pinv_perturb_rank_preserving",
    "pinv_perturb_relative",
    "lstsq_perturb",
    "multilinear_smw_perturb",
    "dominated",
    "REL_SLACK",
    "ABS_SLACK",
]

REL_SLACK = 1e-9
ABS_SLACK = 1e-12
GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0
NAN = float("nan")


def dominated(actual: float, bound: float) -> bool:
    """``actual <= bound * (1 + 1e-9) + 1e-12``."""
    return bool(actual <= bound * (1.0 + REL_SLACK) + ABS_SLACK)


def _ratio(num: float, den: float) -> float:
    if den > 0:
        return num / den
    return 0.0 if num == 0 else math.inf


class Applicability(Enum):
    APPLICABLE = "applicable"
    HYPOTHESIS_VIOLATED = "hypothesis_violated"


@dataclass(frozen=True)
class Check:
    """A secondary inequality ``actual <= bound`` reported alongside the main one."""

    bound: float
    actual: float

    @property
    def holds(self) -> bool:
        return dominated(self.actual, self.bound)


@dataclass(frozen=True)
class BoundReport:
    """Theoretical bound paired with the measured error, per norm.

    ``extra`` carries further inequalities of the same result (size bounds,
    corollary forms, specializations); ``holds`` requires all of them.
    ``notes`` carries diagnostic values that are *not* asserted.
    """

    theorem: str
    bound_F: float
    bound_2: float
    actual_F: float
    actual_2: float
    kappa_F: float = NAN
    kappa_2: float = NAN
    gamma_F: float | None = None
    gamma_2: float | None = None
    mu: float | None = None
    lam: float | None = None
    applicability: Applicability = Applicability.APPLICABLE
    reason: str | None = None
    extra: dict[str, Check] = field(default_factory=dict)
    notes: dict[str, float] = field(default_factory=dict)

    @property
    def applicable(self) -> bool:
        return self.applicability is Applicability.APPLICABLE

    @property
    def holds_F(self) -> bool | None:
        return dominated(self.actual_F, self.bound_F) if self.applicable else None

    @property
    def holds_2(self) -> bool | None:
        return dominated(self.actual_2, self.bound_2) if self.applicable else None

    @property
    def holds_pair(self) -> tuple[bool | None, bool | None]:
        return self.holds_F, self.holds_2

    @property
    def holds(self) -> bool | None:
        if not self.applicable:
            return None
        return bool(self.holds_F and self.holds_2
                    and all(c.holds for c in self.extra.values()))

    @property
    def ratio_F(self) -> float:
        return _ratio(self.actual_F, self.bound_F)

    @property
    def ratio_2(self) -> float:
        return _ratio(self.actual_2, self.bound_2)

    def failing_checks(self) -> list[str]:
        out = []
        if self.holds_F is False:
            out.append("F")
        if self.holds_2 is False:
            out.append("2")
        out.extend(k for k, c in self.extra.items() if not c.holds)
        return out


def _violated(theorem: str, reason: str, **known) -> BoundReport:
    return BoundReport(theorem, NAN, NAN, NAN, NAN,
                       applicability=Applicability.HYPOTHESIS_VIOLATED,
                       reason=reason, **known)


class MuLambdaCase(Enum):
    DEFICIENT = "deficient"
    FULL_NON_SQUARE = "full_non_square"
    FULL_SQUARE = "full_square"


@dataclass(frozen=True)
class MuLambda:
    mu: float
    lam: float
    case: MuLambdaCase


def mu_lambda(ranks, dims) -> MuLambda:
    """Constants of the rank-preserving pseudoinverse bound.

    With ``s`` the total multirank: ``s < min(n3 n1, n3 n2)`` gives
    ``(sqrt 2, golden ratio)``; ``s`` equal to that minimum gives ``(1,
    sqrt 2)`` when ``n1 != n2`` and ``(1, 1)`` when ``n1 == n2``.
    """
    n1, n2, n3 = (int(d) for d in dims[:3])
    r = tuple(ranks.ranks if isinstance(ranks, MultiRank) else ranks)
    if len(r) != n3 or any(x < 0 or x > min(n1, n2) for x in r):
        raise DimensionMismatch(f"rank vector {r} inconsistent with dims {(n1, n2, n3)}")
    total = sum(r)
    if total < min(n3 * n1, n3 * n2):
        return MuLambda(math.sqrt(2.0), GOLDEN, MuLambdaCase.DEFICIENT)
    if n1 != n2:
        return MuLambda(1.0, math.sqrt(2.0), MuLambdaCase.FULL_NON_SQUARE)
    return MuLambda(1.0, 1.0, MuLambdaCase.FULL_SQUARE)


def _norms(T: Tensor3) -> tuple[float, float]:
    return frobenius_norm(T), spectral_norm(T)


def _same_shape(theorem: str, A: Tensor3, E: Tensor3) -> None:
    if A.shape != E.shape:
        raise DimensionMismatch(f"{theorem}: perturbation {E.shape} does not match {A.shape}")


# ---------------------------------------------------------------- inverses


def inv_perturb_posterior(A: Tensor3, E: Tensor3) -> BoundReport:
    """A-posteriori bound on ``||A^-1 - B^-1|| / ||A^-1||`` with ``B = A + E``.

    ``kappa_F = ||A||_F ||B^-1||_2`` and ``kappa_2 = ||A||_2 ||B^-1||_2``;
    the bounds are ``kappa ||E||_2 / ||A||`` in the matching norm.  The
    extra check ``sqrt(n3) ||E||_2 ||B^-1||_F`` is the variant produced by
    the usual derivation through the Frobenius norm of ``B^-1``.
    """
    th = "T3_1"
    _same_shape(th, A, E)
    try:
        Ai = inv(A)
    except SingularTensor as exc:
        return _violated(th, f"A is singular: {exc}")
    B = A + E
    try:
        Bi = inv(B)
    except SingularTensor as exc:
        return _violated(th, f"A + E is singular: {exc}")
    aF, a2 = _norms(A)
    aiF, ai2 = _norms(Ai)
    biF, bi2 = _norms(Bi)
    e2 = spectral_norm(E)
    dF, d2 = _norms(Ai - Bi)
    kF, k2 = aF * bi2, a2 * bi2
    actual_F = _ratio(dF, aiF)
    return BoundReport(
        th,
        bound_F=kF * _ratio(e2, aF),
        bound_2=k2 * _ratio(e2, a2),
        actual_F=actual_F,
        actual_2=_ratio(d2, ai2),
        kappa_F=kF,
        kappa_2=k2,
        extra={"sqrt_n3_variant_F": Check(math.sqrt(A.n3) * e2 * biF, actual_F)},
    )


def inv_perturb_prior(A: Tensor3, E: Tensor3) -> BoundReport:
    """A-priori bounds needing only ``A^-1``; requires ``||A^-1||_2 ||E||_2 < 1``.

    Main bounds are the relative errors ``(kappa / gamma) ||E||_2 / ||A||``
    with ``kappa_F = ||A||_F ||A^-1||_2``, ``kappa_2 = ||A||_2 ||A^-1||_2``
    and ``gamma = 1 - kappa ||E||_2 / ||A||``.  The size bounds
    ``||B^-1|| <= ||A^-1|| / gamma`` are the extras ``size_F``/``size_2``.
    """
    th = "T3_2"
    _same_shape(th, A, E)
    try:
        Ai = inv(A)
    except SingularTensor as exc:
        return _violated(th, f"A is singular: {exc}")
    aF, a2 = _norms(A)
    aiF, ai2 = _norms(Ai)
    e2 = spectral_norm(E)
    if not ai2 * e2 < 1.0:
        return _violated(th, f"||A^-1||_2 ||E||_2 = {ai2 * e2:.6g} >= 1")
    try:
        Bi = inv(A + E)
    except SingularTensor as exc:
        return _violated(th, f"A + E numerically singular despite the hypothesis: {exc}")
    biF, bi2 = _norms(Bi)
    dF, d2 = _norms(Bi - Ai)
    kF, k2 = aF * ai2, a2 * ai2
    gF = 1.0 - kF * _ratio(e2, aF)
    g2 = 1.0 - k2 * _ratio(e2, a2)
    return BoundReport(
        th,
        bound_F=kF / gF * _ratio(e2, aF),
        bound_2=k2 / g2 * _ratio(e2, a2),
        actual_F=_ratio(dF, aiF),
        actual_2=_ratio(d2, ai2),
        kappa_F=kF,
        kappa_2=k2,
        gamma_F=gF,
        gamma_2=g2,
        extra={"size_F": Check(aiF / gF, biF), "size_2": Check(ai2 / g2, bi2)},
    )


def equation_perturb(A: Tensor3, E: Tensor3, B_rhs: Tensor3, K: Tensor3) -> BoundReport:
    """Relative error of ``X`` when ``A * X = B`` becomes ``(A+E) * (X+H) = B+K``.

    Frobenius bound ``(kappa_F/gamma_F)(||E||_2/||A||_F + sqrt(n3)||K||_F/||B||_F)``;
    the spectral bound has no ``sqrt(n3)``.  Requires invertible ``A``,
    ``||A^-1||_2 ||E||_2 < 1`` and ``B != 0``.
    """
    th = "T3_3"
    _same_shape(th, A, E)
    if B_rhs.shape != K.shape or B_rhs.n1 != A.n1 or B_rhs.n3 != A.n3:
        raise DimensionMismatch(f"{th}: right-hand sides {B_rhs.shape}, {K.shape} vs A {A.shape}")
    bF, b2 = _norms(B_rhs)
    if bF == 0:
        return _violated(th, "right-hand side B is zero")
    try:
        Ai = inv(A)
    except SingularTensor as exc:
        return _violated(th, f"A is singular: {exc}")
    ai2 = spectral_norm(Ai)
    e2 = spectral_norm(E)
    if not ai2 * e2 < 1.0:
        return _violated(th, f"||A^-1||_2 ||E||_2 = {ai2 * e2:.6g} >= 1")
    try:
        Mi = inv(A + E)
    except SingularTensor as exc:
        return _violated(th, f"A + E numerically singular despite the hypothesis: {exc}")
    X = tprod(Ai, B_rhs)
    H = tprod(Mi, B_rhs + K) - X
    aF, a2 = _norms(A)
    kF_, k2_ = _norms(K)
    xF, x2 = _norms(X)
    hF, h2 = _norms(H)
    kF, k2 = aF * ai2, a2 * ai2
    gF = 1.0 - kF * _ratio(e2, aF)
    g2 = 1.0 - k2 * _ratio(e2, a2)
    return BoundReport(
        th,
        bound_F=kF / gF * (_ratio(e2, aF) + math.sqrt(A.n3) * kF_ / bF),
        bound_2=k2 / g2 * (_ratio(e2, a2) + k2_ / b2),
        actual_F=_ratio(hF, xF),
        actual_2=_ratio(h2, x2),
        kappa_F=kF,
        kappa_2=k2,
        gamma_F=gF,
        gamma_2=g2,
    )


# ---------------------------------------------------------- pseudoinverses


def pinv_perturb_general(A: Tensor3, E: Tensor3) -> BoundReport:
    """``||B^+ - A^+|| <= c max(||A^+||_2^2, ||B^+||_2^2) ||E||`` with no rank
    hypothesis; ``c = sqrt 2`` (Frobenius) or the golden ratio (spectral)."""
    th = "T4_1"
    _same_shape(th, A, E)
    Ap, Bp = pinv(A), pinv(A + E)
    m = max(spectral_norm(Ap), spectral_norm(Bp)) ** 2
    eF, e2 = _norms(E)
    dF, d2 = _norms(Bp - Ap)
    return BoundReport(
        th,
        bound_F=math.sqrt(2.0) * m * eF,
        bound_2=GOLDEN * m * e2,
        actual_F=dF,
        actual_2=d2,
        mu=math.sqrt(2.0),
        lam=GOLDEN,
    )


def _rank_check(th: str, A: Tensor3, B: Tensor3) -> tuple[MultiRank, str | None]:
    ra, rb = multirank(A), multirank(B)
    if ra != rb:
        return ra, f"multirank changes from {list(ra.ranks)} to {list(rb.ranks)}"
    return ra, None


def pinv_perturb_rank_preserving(A: Tensor3, E: Tensor3) -> BoundReport:
    """``||B^+ - A^+||_F <= mu ||A^+||_2 ||B^+||_2 ||E||_F`` and the spectral
    analogue with ``lambda``, for ``multirank(A) = multirank(A + E)``.

    The extras ``cor_F``/``cor_2`` are the relative forms
    ``||B^+ - A^+|| / ||B^+||_2 <= mu kappa ||E|| / ||A||_2`` with
    ``kappa = ||A^+||_2 ||A||_2``.
    """
    th = "T4_2"
    _same_shape(th, A, E)
    B = A + E
    ranks, why = _rank_check(th, A, B)
    if why:
        return _violated(th, why)
    ml = mu_lambda(ranks, A.shape)
    Ap, Bp = pinv(A), pinv(B)
    ap2, bp2 = spectral_norm(Ap), spectral_norm(Bp)
    a2 = spectral_norm(A)
    eF, e2 = _norms(E)
    dF, d2 = _norms(Bp - Ap)
    kappa = ap2 * a2
    return BoundReport(
        th,
        bound_F=ml.mu * ap2 * bp2 * eF,
        bound_2=ml.lam * ap2 * bp2 * e2,
        actual_F=dF,
        actual_2=d2,
        kappa_F=kappa,
        kappa_2=kappa,
        mu=ml.mu,
        lam=ml.lam,
        extra={
            "cor_F": Check(ml.mu * kappa * _ratio(eF, a2), _ratio(dF, bp2)),
            "cor_2": Check(ml.lam * kappa * _ratio(e2, a2), _ratio(d2, bp2)),
        },
    )


def pinv_perturb_relative(A: Tensor3, E: Tensor3) -> BoundReport:
    """Bounds on ``||B^+ - A^+|| / ||A^+||_2`` using only ``A^+``.

    Requires preserved multirank and ``||A^+||_2 ||E||_2 < 1``.  With
    ``gamma = 1 - ||A^+||_2 ||E||_2``, ``kappa_F = ||A^+||_2 ||A||_F`` and
    ``kappa_2 = ||A^+||_2 ||A||_2`` the bounds are
    ``mu kappa_F / gamma * ||E||_F / ||A||_F`` and
    ``lambda kappa_2 / gamma * ||E||_2 / ||A||_2``.

    The spectral bound uses ``lambda``: with ``mu`` in its place (kept as
    ``notes["printed_bound_2"]``) it can fail, because ``mu`` is only the
    Frobenius constant.  The extra ``size_2`` is
    ``||B^+||_2 <= ||A^+||_2 / gamma``.
    """
    th = "T4_3"
    _same_shape(th, A, E)
    B = A + E
    ranks, why = _rank_check(th, A, B)
    if why:
        return _violated(th, why)
    if frobenius_norm(A) == 0:
        return _violated(th, "A is zero, relative bounds are undefined")
    Ap = pinv(A)
    ap2 = spectral_norm(Ap)
    eF, e2 = _norms(E)
    if not ap2 * e2 < 1.0:
        return _violated(th, f"||A^+||_2 ||E||_2 = {ap2 * e2:.6g} >= 1")
    ml = mu_lambda(ranks, A.shape)
    Bp = pinv(B)
    aF, a2 = _norms(A)
    dF, d2 = _norms(Bp - Ap)
    gamma = 1.0 - ap2 * e2
    kF, k2 = ap2 * aF, ap2 * a2
    return BoundReport(
        th,
        bound_F=ml.mu * kF / gamma * _ratio(eF, aF),
        bound_2=ml.lam * k2 / gamma * _ratio(e2, a2),
        actual_F=_ratio(dF, ap2),
        actual_2=_ratio(d2, ap2),
        kappa_F=kF,
        kappa_2=k2,
        gamma_F=gamma,
        gamma_2=gamma,
        mu=ml.mu,
        lam=ml.lam,
        extra={"size_2": Check(ap2 / gamma, spectral_norm(Bp))},
        notes={"printed_bound_2": ml.mu * k2 / gamma * _ratio(e2, a2)},
    )


def lstsq_perturb(A: Tensor3, E: Tensor3, B_rhs: Tensor3, K: Tensor3) -> BoundReport:
    """Error ``||H||`` of the minimal-norm least-squares solution.

    ``X = A^+ * B`` and ``X + H = (A+E)^+ * (B+K)``.  With ``R = B - A*X``,
    ``Y = (A^+)^T`` and ``kappa, gamma`` as in :func:`pinv_perturb_relative`::

        ||H||_F <= kappa_F/gamma * ( ||E||_2/||A||_F ||X||_F + ||K||_F/||A||_F
                   + kappa_F/gamma ||E||_2/||A||_F ||R||_F/||A||_F
                   + sqrt(n3) ||E||_2 ||Y*X||_F )

    and the spectral form without ``sqrt(n3)``.  When every face of ``A``
    (and of ``A + E``) has full column rank the last term is dropped; those
    three-term forms are reported as the extras ``full_col_F``/``full_col_2``.
    """
    th = "T4_4"
    _same_shape(th, A, E)
    if B_rhs.shape != K.shape or B_rhs.n1 != A.n1 or B_rhs.n3 != A.n3:
        raise DimensionMismatch(f"{th}: right-hand sides {B_rhs.shape}, {K.shape} vs A {A.shape}")
    At = A + E
    ranks, why = _rank_check(th, A, At)
    if why:
        return _violated(th, why)
    if frobenius_norm(A) == 0:
        return _violated(th, "A is zero, relative bounds are undefined")
    Ap = pinv(A)
    ap2 = spectral_norm(Ap)
    e2 = spectral_norm(E)
    if not ap2 * e2 < 1.0:
        return _violated(th, f"||A^+||_2 ||E||_2 = {ap2 * e2:.6g} >= 1")
    X = tprod(Ap, B_rhs)
    H = tprod(pinv(At), B_rhs + K) - X
    R = B_rhs - tprod(A, X)
    YX = tprod(transpose(Ap), X)
    aF, a2 = _norms(A)
    xF, x2 = _norms(X)
    kkF, kk2 = _norms(K)
    rF, r2 = _norms(R)
    yxF, yx2 = _norms(YX)
    hF, h2 = _norms(H)
    gamma = 1.0 - ap2 * e2
    kF, k2 = ap2 * aF, ap2 * a2
    cF, c2 = kF / gamma, k2 / gamma
    uF, u2 = _ratio(e2, aF), _ratio(e2, a2)
    threeF = cF * (uF * xF + _ratio(kkF, aF) + cF * uF * _ratio(rF, aF))
    three2 = c2 * (u2 * x2 + _ratio(kk2, a2) + c2 * u2 * _ratio(r2, a2))
    extra = {}
    if all(r == A.n2 for r in ranks):
        extra = {"full_col_F": Check(threeF, hF), "full_col_2": Check(three2, h2)}
    return BoundReport(
        th,
        bound_F=threeF + cF * math.sqrt(A.n3) * e2 * yxF,
        bound_2=three2 + c2 * e2 * yx2,
        actual_F=hF,
        actual_2=h2,
        kappa_F=kF,
        kappa_2=k2,
        gamma_F=gamma,
        gamma_2=gamma,
        extra=extra,
    )


# ------------------------------------------------------- multilinear SMW


def _eps_a_terms(A: Tensor3, f: SmwFactors, norm) -> dict[str, float]:
    return {
        "X1": norm(f.X1),
        "X2": norm(f.X2),
        "E1": norm(f.E1),
        "E2": norm(f.E2),
        "B^+": norm(pinv(f.B)),
    }


def multilinear_smw_perturb(A: Tensor3, factors: SmwFactors, D: Tensor3, H: Tensor3,
                            eps_A: float | None = None,
                            eps_D: float | None = None) -> BoundReport:
    """Error of the solution of ``A * X = D`` under ``E = U * B * V`` and ``D + H``.

    ``X = A^+ * D`` and ``Y = (A + E)^+ * (D + H)``, with ``(A + E)^+``
    evaluated by :func:`tproduct.smw.smw_pinv`.  ``D`` must be nonzero and
    consistent, and the SMW conditions must hold.

    ``eps_A`` must satisfy ``||X_i||, ||E_i||, ||B^+|| <= eps_A ||A||`` and
    ``eps_D`` must satisfy ``||H|| <= eps_D ||D||``, in both norms.  When
    omitted they default to the smallest admissible value, computed
    separately for each norm.  With ``a = ||A||`` and ``p = ||A^+||``::

        bound_F = (1 + eps_D) (2 n3^2 eps_A^2 a^3 p + n3^2 eps_A^3 a^4
                               + n3^3 eps_A^4 a^5 p) + n3 eps_D a p

    The spectral bound has the same shape without the powers of ``n3``.
    ``notes`` holds the form with a leading ``||D||^3 ||X||`` factor and no
    powers of ``||A||`` (``printed_bound_F``/``printed_bound_2``).  That
    form is not scale invariant, and shrinking ``D`` and ``H`` makes it
    fail.  ``reduced_bound_F``/``reduced_bound_2`` hold the form without
    that factor but also without the powers of ``||A||`` in the bracket;
    enlarging ``A`` with the update held fixed makes that one fail too.
    """
    th = "T5_2"
    _same_shape(th, A, factors.update())
    if D.shape != H.shape or D.n1 != A.n1 or D.n3 != A.n3:
        raise DimensionMismatch(f"{th}: right-hand sides {D.shape}, {H.shape} vs A {A.shape}")
    dF, d2 = _norms(D)
    if dF == 0:
        return _violated(th, "right-hand side D is zero")
    if not solve_exact(A, D).consistent:
        return _violated(th, "A * X = D is inconsistent")
    report = check_smw_conditions(factors, A)
    if not report.satisfied:
        bad = [k for k, v in report.all_residuals().items() if not v <= report.threshold]
        return _violated(th, "SMW conditions fail: " + ", ".join(bad))

    aF, a2 = _norms(A)
    hF, h2 = _norms(H)
    termsF = _eps_a_terms(A, factors, frobenius_norm)
    terms2 = _eps_a_terms(A, factors, spectral_norm)
    if eps_A is None:
        epsAF, epsA2 = max(termsF.values()) / aF, max(terms2.values()) / a2
    else:
        for tag, terms, a in (("F", termsF, aF), ("2", terms2, a2)):
            for name, val in terms.items():
                if not dominated(val, eps_A * a):
                    return _violated(th, f"||{name}||_{tag} = {val:.6g} > eps_A ||A||_{tag}"
                                         f" = {eps_A * a:.6g}")
        epsAF = epsA2 = float(eps_A)
    if eps_D is None:
        epsDF, epsD2 = hF / dF, h2 / d2
    else:
        for tag, hv, dv in (("F", hF, dF), ("2", h2, d2)):
            if not dominated(hv, eps_D * dv):
                return _violated(th, f"||H||_{tag} = {hv:.6g} > eps_D ||D||_{tag}"
                                     f" = {eps_D * dv:.6g}")
        epsDF = epsD2 = float(eps_D)

    Ap = pinv(A)
    apF, ap2 = _norms(Ap)
    X = tprod(Ap, D)
    Y = tprod(smw_pinv(A, factors, report), D + H)
    xF, x2 = _norms(X)
    errF, err2 = _norms(Y - X)
    n3 = A.n3

    def corrected(eA, eD, a, p, c1, c2, c3, c4):
        return ((1 + eD) * (2 * c1 * eA**2 * a**3 * p + c2 * eA**3 * a**4
                            + c3 * eA**4 * a**5 * p) + c4 * eD * a * p)

    def printed(eA, eD, a, p, d, x, c1, c2, c3, c4):
        return ((1 + eD) * d**3 * x * (2 * c1 * eA**2 * p + c2 * eA**3 * a
                                       + c3 * eA**4 * a**2 * p) + c4 * eD * a * p)

    def reduced(eA, eD, a, p, c1, c2, c3, c4):
        return ((1 + eD) * (2 * c1 * eA**2 * p + c2 * eA**3 * a + c3 * eA**4 * a**2 * p)
                + c4 * eD * a * p)

    kF, k2 = aF * apF, a2 * ap2
    return BoundReport(
        th,
        bound_F=corrected(epsAF, epsDF, aF, apF, n3**2, n3**2, n3**3, n3),
        bound_2=corrected(epsA2, epsD2, a2, ap2, 1, 1, 1, 1),
        actual_F=_ratio(errF, xF),
        actual_2=_ratio(err2, x2),
        kappa_F=kF,
        kappa_2=k2,
        notes={
            "eps_A_F": epsAF,
            "eps_A_2": epsA2,
            "eps_D_F": epsDF,
            "eps_D_2": epsD2,
            "printed_bound_F": printed(epsAF, epsDF, aF, apF, dF, xF, n3**2, n3**2, n3**3, n3),
            "printed_bound_2": printed(epsA2, epsD2, a2, ap2, d2, x2, 1, 1, 1, 1),
            "reduced_bound_F": reduced(epsAF, epsDF, aF, apF, n3**2, n3**2, n3**3, n3),
            "reduced_bound_2": reduced(epsA2, epsD2, a2, ap2, 1, 1, 1, 1),
        },
    )
