"""Slow reference routes used to cross-check the FFT face-wise code.

Everything here goes through dense ``bcirc`` matrices or the explicit DFT
matrix.  Nothing in the library calls into this module.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch
from .fourier import dft_matrix
from .tensor import Tensor3, bcirc, fold, unfold

__all__ = [
    "tprod_bcirc",
    "diagonalize_bcirc",
    "faces_from_diagonalization",
    "spectral_norm_bcirc",
    "pinv_bcirc",
]


def tprod_bcirc(A: Tensor3, B: Tensor3) -> Tensor3:
    """``fold(bcirc(A) @ unfold(B))``."""
    if A.n2 != B.n1 or A.n3 != B.n3:
        raise DimensionMismatch(f"tprod: cannot multiply {A.shape} by {B.shape}")
    return fold(bcirc(A) @ unfold(B), (A.n1, B.n2, A.n3))


def diagonalize_bcirc(A: Tensor3) -> np.ndarray:
    """``(F kron I_n1) bcirc(A) (F^-1 kron I_n2)`` as a dense complex matrix."""
    n1, n2, n3 = A.shape
    F = dft_matrix(n3)
    Finv = np.conj(F) / n3
    return np.kron(F, np.eye(n1)) @ bcirc(A) @ np.kron(Finv, np.eye(n2))


def faces_from_diagonalization(A: Tensor3) -> tuple[np.ndarray, float]:
    """Diagonal blocks of :func:`diagonalize_bcirc` and the relative
    Frobenius mass left off the block diagonal."""
    n1, n2, n3 = A.shape
    D = diagonalize_bcirc(A)
    blocks = D.reshape(n3, n1, n3, n2).transpose(0, 2, 1, 3)
    faces = blocks[np.arange(n3), np.arange(n3)].copy()
    total = np.linalg.norm(D)
    mask = ~np.eye(n3, dtype=bool)
    off = float(np.linalg.norm(blocks[mask]))
    return faces, (off / total if total > 0 else 0.0)


def spectral_norm_bcirc(A: Tensor3) -> float:
    return float(np.linalg.norm(bcirc(A), 2))


def pinv_bcirc(A: Tensor3, rcond: float = 1e-12) -> np.ndarray:
    """Dense pseudoinverse of ``bcirc(A)``."""
    return np.linalg.pinv(bcirc(A), rcond=rcond)
