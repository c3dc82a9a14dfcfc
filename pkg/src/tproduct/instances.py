"""Seeded random and structured tensor generators.

Structured tensors are assembled face by face in the Fourier domain.  Only
faces ``0 .. n3//2`` are generated; face 0 (and face ``n3/2`` for even
``n3``) is drawn real so the inverse transform is exactly real.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch
from .fourier import from_half_faces, half_faces
from .algebra import spectral_norm
from .tensor import Tensor3

__all__ = [
    "face_is_real",
    "random_unitary",
    "gaussian",
    "conditioned",
    "random_rank_profile",
    "check_rank_profile",
    "unit_tensor",
    "truncate_faces",
    "rank_preserving_perturbation",
]


def face_is_real(i: int, n3: int) -> bool:
    return i == 0 or 2 * i == n3


def _gauss(shape, rng, real: bool) -> np.ndarray:
    if real:
        return rng.standard_normal(shape)
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_unitary(n: int, rng: np.random.Generator, real: bool = True) -> np.ndarray:
    """Haar-distributed orthogonal (``real``) or unitary matrix."""
    q, r = np.linalg.qr(_gauss((n, n), rng, real))
    d = np.diagonal(r)
    phase = np.where(d == 0, 1.0, d / np.abs(np.where(d == 0, 1.0, d)))
    return q * phase[None, :]


def gaussian(dims, rng: np.random.Generator) -> Tensor3:
    return Tensor3._wrap(rng.standard_normal(tuple(dims)))


def check_rank_profile(ranks, n1: int, n2: int, n3: int) -> tuple[int, ...]:
    ranks = tuple(int(r) for r in ranks)
    if len(ranks) != n3:
        raise DimensionMismatch(f"rank profile needs {n3} entries, got {len(ranks)}")
    if any(r < 0 or r > min(n1, n2) for r in ranks):
        raise ValueError(f"ranks must lie in [0, {min(n1, n2)}]: {ranks}")
    for i in range(n3):
        if ranks[i] != ranks[(-i) % n3]:
            raise ValueError(
                f"rank profile {ranks} is not conjugate symmetric "
                f"(face {i} vs face {(-i) % n3})"
            )
    return ranks


def random_rank_profile(n1: int, n2: int, n3: int, rng: np.random.Generator,
                        deficient: bool = True, min_rank: int = 0,
                        nonzero: bool = False) -> tuple[int, ...]:
    """Conjugate-symmetric rank vector; with ``deficient`` at least one face
    is rank deficient, with ``nonzero`` at least one face has positive rank."""
    top = min(n1, n2)
    if deficient and top <= min_rank:
        raise ValueError("no room for a deficient face")
    h = n3 // 2 + 1
    half = rng.integers(min_rank, top + 1, size=h)
    if deficient and np.all(half == top):
        half[rng.integers(h)] = rng.integers(min_rank, top)
    if nonzero and not half.any():
        # a single face must stay below ``top`` to keep the profile deficient
        upper = top - 1 if deficient and h == 1 else top
        if upper < 1:
            raise ValueError("no rank profile is both deficient and nonzero here")
        half[rng.integers(h)] = rng.integers(1, upper + 1)
    return tuple(int(half[min(i, n3 - i)]) for i in range(n3))


def conditioned(n1: int, n2: int, n3: int, rng: np.random.Generator, ranks=None,
                sv_range: tuple[float, float] = (0.2, 5.0)) -> Tensor3:
    """Random tensor with prescribed multirank and nonzero face singular
    values log-uniform in ``sv_range``."""
    if ranks is None:
        ranks = (min(n1, n2),) * n3
    ranks = check_rank_profile(ranks, n1, n2, n3)
    lo, hi = np.log(sv_range[0]), np.log(sv_range[1])
    h = n3 // 2 + 1
    faces = np.zeros((h, n1, n2), dtype=complex)
    for i in range(h):
        real = face_is_real(i, n3)
        r = ranks[i]
        if r == 0:
            continue
        U = random_unitary(n1, rng, real)[:, :r]
        V = random_unitary(n2, rng, real)[:, :r]
        s = np.exp(rng.uniform(lo, hi, size=r))
        faces[i] = (U * s) @ np.conj(V).T
    return from_half_faces(faces, n3)


def unit_tensor(dims, rng: np.random.Generator, norm: str = "2") -> Tensor3:
    """Gaussian direction normalized to unit spectral (``"2"``) or
    Frobenius (``"F"``) norm."""
    W = gaussian(dims, rng)
    size = spectral_norm(W) if norm == "2" else float(np.linalg.norm(W.data))
    return W / size


def truncate_faces(T: Tensor3, ranks) -> Tensor3:
    """Best per-face approximation of ``T`` with the given multirank."""
    n1, n2, n3 = T.shape
    ranks = check_rank_profile(ranks, n1, n2, n3)
    faces = half_faces(T)
    u, s, vh = np.linalg.svd(faces, full_matrices=False)
    for i in range(faces.shape[0]):
        s[i, ranks[i]:] = 0.0
    return from_half_faces(np.matmul(u * s[:, None, :], vh), n3)


def rank_preserving_perturbation(A: Tensor3, size: float, rng: np.random.Generator,
                                 ranks=None) -> Tensor3:
    """Perturbation ``E`` such that ``A + E`` keeps the multirank of ``A``.

    A Gaussian direction of spectral norm ``size`` is added to ``A`` and the
    sum is truncated face-wise back to ``ranks``; ``E`` is the difference.
    """
    if ranks is None:
        from .inverse import multirank

        ranks = multirank(A).ranks
    W = unit_tensor(A.shape, rng) * size
    return truncate_faces(A + W, ranks) - A
