"""Face-wise inverse, Moore-Penrose inverse, multirank and range splits."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import tprod
from .errors import DimensionMismatch, SingularTensor
from .fourier import from_half_faces, full_from_half, half_faces
from .tensor import Tensor3

__all__ = [
    "MultiRank",
    "RangeSplit",
    "rank_tolerance",
    "inv",
    "pinv",
    "multirank",
    "range_projectors",
    "split_against_range",
]

EPS = np.finfo(np.float64).eps
INV_SAFETY = 1e3


@dataclass(frozen=True)
class MultiRank:
    """Per-face numerical ranks together with the threshold used."""

    ranks: tuple[int, ...]
    tol: float

    @property
    def total(self) -> int:
        return sum(self.ranks)

    def __iter__(self):
        return iter(self.ranks)

    def __len__(self):
        return len(self.ranks)

    def __eq__(self, other):
        if isinstance(other, MultiRank):
            return self.ranks == other.ranks
        if isinstance(other, (tuple, list)):
            return self.ranks == tuple(other)
        return NotImplemented

    __hash__ = None


@dataclass(frozen=True)
class RangeSplit:
    """``U = X + Y`` with lateral slices of X in R(A) and of Y orthogonal to it."""

    X: Tensor3
    Y: Tensor3


def rank_tolerance(A: Tensor3, sigma_max: float | None = None) -> float:
    """Default numerical-rank threshold.

    Scaled by the largest singular value over *all* faces: FFT rounding in
    a face is relative to the whole tensor, not to that face.
    """
    if sigma_max is None:
        sigma_max = float(np.linalg.svd(half_faces(A), compute_uv=False).max(initial=0.0))
    n1, n2, n3 = A.shape
    return max(n1, n2) * n3 * EPS * sigma_max


def _svd_faces(A: Tensor3):
    faces = half_faces(A)
    u, s, vh = np.linalg.svd(faces, full_matrices=False)
    return u, s, vh


def inv(A: Tensor3) -> Tensor3:
    """Tensor inverse, computed as the inverse of every Fourier face.

    Raises :class:`SingularTensor` when some face has smallest singular
    value at or below ``n * eps * sigma_max * 1e3``.
    """
    n1, n2, n3 = A.shape
    if n1 != n2:
        raise DimensionMismatch(f"inv needs square faces, got {A.shape}")
    faces = half_faces(A)
    s = np.linalg.svd(faces, compute_uv=False)
    smax = float(s.max(initial=0.0))
    tol = n1 * EPS * smax * INV_SAFETY
    smin = s[:, -1]
    bad = np.flatnonzero(smin <= tol)
    if bad.size:
        i = int(bad[0])
        raise SingularTensor(i, float(smin[i]))
    return from_half_faces(np.linalg.inv(faces), n3)


def pinv(A: Tensor3, tol: float | None = None) -> Tensor3:
    """Moore-Penrose inverse via per-face truncated SVD."""
    n1, n2, n3 = A.shape
    u, s, vh = _svd_faces(A)
    if tol is None:
        tol = rank_tolerance(A, float(s.max(initial=0.0)))
    keep = s > tol
    sinv = np.where(keep, 1.0 / np.where(keep, s, 1.0), 0.0)
    faces = np.matmul(np.conj(vh).swapaxes(1, 2) * sinv[:, None, :], np.conj(u).swapaxes(1, 2))
    return from_half_faces(faces, n3)


def multirank(A: Tensor3, tol: float | None = None) -> MultiRank:
    if tol is not None and not tol > 0:
        raise ValueError("rank tolerance must be positive")
    s = np.linalg.svd(half_faces(A), compute_uv=False)
    if tol is None:
        tol = rank_tolerance(A, float(s.max(initial=0.0)))
    half = (s > tol).sum(axis=1)
    ranks = full_from_half(half, A.n3)
    return MultiRank(tuple(int(r) for r in ranks), float(tol))


def range_projectors(A: Tensor3) -> tuple[Tensor3, Tensor3]:
    """``(A * A^+, A^+ * A)``: projectors onto R(A) and R(A^T)."""
    Ap = pinv(A)
    return tprod(A, Ap), tprod(Ap, A)


def split_against_range(A: Tensor3, U: Tensor3) -> RangeSplit:
    """Split the lateral slices of ``U`` into parts in and orthogonal to R(A).

    To split against R(A^T) pass ``transpose(A)``.
    """
    if U.n1 != A.n1 or U.n3 != A.n3:
        raise DimensionMismatch(f"cannot split {U.shape} against the range of {A.shape}")
    P = tprod(A, pinv(A))
    X = tprod(P, U)
    return RangeSplit(X, U - X)
