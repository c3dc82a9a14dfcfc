"""t-product, inner product and spectral norm (FFT face-wise route)."""

from __future__ import annotations

from functools import reduce

import numpy as np

from .errors import DimensionMismatch
from .fourier import from_half_faces, half_faces
from .tensor import Tensor3, transpose

__all__ = ["tprod", "tprod_chain", "inner_product", "spectral_norm", "face_singular_values"]


def tprod(A: Tensor3, B: Tensor3) -> Tensor3:
    """t-product ``A * B``: face-wise matrix products in the Fourier domain."""
    if A.n2 != B.n1 or A.n3 != B.n3:
        raise DimensionMismatch(f"tprod: cannot multiply {A.shape} by {B.shape}")
    if A.n3 == 1:
        return Tensor3._wrap((A.data[:, :, 0] @ B.data[:, :, 0])[:, :, None])
    faces = np.matmul(half_faces(A), half_faces(B))
    return from_half_faces(faces, A.n3)


def tprod_chain(*tensors: Tensor3) -> Tensor3:
    """Left-to-right t-product of several operands."""
    return reduce(tprod, tensors)


def inner_product(X: Tensor3, Y: Tensor3) -> Tensor3:
    """Tubal scalar ``X^T * Y`` for two lateral slices (``n1 x 1 x n3``)."""
    if X.n2 != 1 or Y.n2 != 1 or X.shape != Y.shape:
        raise DimensionMismatch(
            f"inner_product needs two n1 x 1 x n3 operands, got {X.shape} and {Y.shape}"
        )
    return tprod(transpose(X), Y)


def face_singular_values(A: Tensor3) -> np.ndarray:
    """Singular values of faces ``0 .. n3//2``, shape (n3//2 + 1, min(n1, n2))."""
    return np.linalg.svd(half_faces(A), compute_uv=False)


def spectral_norm(A: Tensor3) -> float:
    """``||bcirc(A)||_2``, i.e. the largest singular value over all faces."""
    return float(face_singular_values(A).max(initial=0.0))
