"""Mode-3 DFT transport between spatial tensors and Fourier faces.

The forward transform is unnormalized and the inverse carries ``1/n3``, so
``||A||_F == ||faces||_F / sqrt(n3)`` holds exactly.

Face-wise algorithms in this package work on the half spectrum
(faces ``0 .. n3//2``) and rebuild the rest by conjugation, which keeps
results exactly real.  :class:`FourierFaces` always carries all ``n3``
faces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ImaginaryResidualExceeded
from .tensor import Tensor3

__all__ = [
    "FourierFaces",
    "to_faces",
    "from_faces",
    "dft_matrix",
    "half_faces",
    "from_half_faces",
    "mirror_index",
]

IMAG_RTOL = 1e-10


@dataclass(frozen=True)
class FourierFaces:
    """``faces[i]`` is the i-th diagonal block of the DFT-diagonalized bcirc."""

    faces: np.ndarray  # complex, shape (n3, n1, n2)

    @property
    def dims(self) -> tuple[int, int, int]:
        n3, n1, n2 = self.faces.shape
        return (n1, n2, n3)

    def __len__(self):
        return self.faces.shape[0]

    def __getitem__(self, i):
        return self.faces[i]

    def symmetry_residual(self) -> float:
        """Largest entrywise gap between face i and conj(face n3-i)."""
        n3 = self.faces.shape[0]
        mirrored = np.conj(self.faces[(-np.arange(n3)) % n3])
        return float(np.max(np.abs(self.faces - mirrored), initial=0.0))


def mirror_index(i: int, n3: int) -> int:
    """Index of the face conjugate to face ``i``."""
    return (-i) % n3


def to_faces(A: Tensor3) -> FourierFaces:
    faces = np.fft.fft(A.data, axis=2).transpose(2, 0, 1)
    return FourierFaces(np.ascontiguousarray(faces))


def from_faces(F: FourierFaces | np.ndarray) -> Tensor3:
    """Inverse mode-3 DFT; the imaginary residual is checked, then dropped."""
    faces = F.faces if isinstance(F, FourierFaces) else np.asarray(F)
    if faces.ndim != 3:
        raise DimensionMismatch("faces must be an array of shape (n3, n1, n2)")
    n3 = faces.shape[0]
    spatial = np.fft.ifft(faces, axis=0)
    residual = float(np.max(np.abs(spatial.imag), initial=0.0))
    scale = np.linalg.norm(faces.ravel()) / np.sqrt(n3)
    limit = IMAG_RTOL * (1.0 + scale)
    if residual > limit:
        raise ImaginaryResidualExceeded(residual, limit)
    return Tensor3._wrap(np.ascontiguousarray(spatial.real.transpose(1, 2, 0)))


def dft_matrix(n: int) -> np.ndarray:
    """``F[j, k] = exp(-2 pi i j k / n)``; an O(n^2) oracle, not a transform."""
    if n < 1:
        raise ValueError("dft_matrix needs n >= 1")
    jk = np.outer(np.arange(n), np.arange(n)) % n
    return np.exp(-2j * np.pi * jk / n)


def half_faces(A: Tensor3) -> np.ndarray:
    """Faces ``0 .. n3//2`` as a complex array of shape (n3//2 + 1, n1, n2)."""
    return np.ascontiguousarray(np.fft.rfft(A.data, axis=2).transpose(2, 0, 1))


def from_half_faces(faces: np.ndarray, n3: int) -> Tensor3:
    """Real tensor whose faces ``0 .. n3//2`` are ``faces``.

    The DC face (and the Nyquist face for even ``n3``) must be real up to
    rounding; their imaginary parts are discarded.
    """
    if faces.shape[0] != n3 // 2 + 1:
        raise DimensionMismatch(f"expected {n3 // 2 + 1} half faces, got {faces.shape[0]}")
    arr = np.fft.irfft(faces, n=n3, axis=0)
    return Tensor3._wrap(np.ascontiguousarray(arr.transpose(1, 2, 0)))


def full_from_half(values: np.ndarray, n3: int) -> np.ndarray:
    """Expand per-half-face values (first axis) to all ``n3`` faces."""
    idx = np.arange(n3)
    idx = np.minimum(idx, n3 - idx)
    return values[idx]
