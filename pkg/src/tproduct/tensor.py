"""Dense real third-order tensors and their block-circulant machinery.

A :class:`Tensor3` wraps a read-only ``float64`` array of shape
``(n1, n2, n3)``; ``A[i, j, k]`` is row ``i``, column ``j`` of frontal
slice ``k``.  The flat serialization order is *slice-major*: the frontal
slice index varies slowest, then the column, then the row (i.e. Fortran
order of the ``(n1, n2, n3)`` array).
"""

from __future__ import annotations

import numbers

import numpy as np

from .errors import DimensionMismatch

__all__ = [
    "Tensor3",
    "identity",
    "zeros",
    "bcirc",
    "unfold",
    "fold",
    "transpose",
    "add",
    "sub",
    "scale",
    "frobenius_norm",
]


class Tensor3:
    """Immutable dense real tensor of order three."""

    __slots__ = ("_data",)
    __array_priority__ = 1000  # keep ndarray from hijacking binary operators

    def __init__(self, data):
        arr = np.array(data, dtype=np.float64, copy=True)
        if arr.ndim == 2:
            arr = arr[:, :, None]
        if arr.ndim != 3:
            raise DimensionMismatch(f"expected a 3-way array, got ndim={arr.ndim}")
        if min(arr.shape) < 1:
            raise DimensionMismatch(f"all dimensions must be positive, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("tensor entries must be finite")
        arr.flags.writeable = False
        self._data = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "Tensor3":
        # arr must be a fresh float64 array owned by the caller
        if not np.all(np.isfinite(arr)):
            raise FloatingPointError("non-finite values produced")
        obj = cls.__new__(cls)
        arr.flags.writeable = False
        obj._data = arr
        return obj

    @classmethod
    def from_flat(cls, dims, flat) -> "Tensor3":
        """Build from slice-major flat data."""
        n1, n2, n3 = (int(d) for d in dims)
        flat = np.asarray(flat, dtype=np.float64).ravel()
        if flat.size != n1 * n2 * n3:
            raise DimensionMismatch(
                f"data length {flat.size} does not match dims {(n1, n2, n3)}"
            )
        return cls(flat.reshape((n1, n2, n3), order="F"))

    def to_flat(self) -> np.ndarray:
        """Slice-major flat copy of the entries."""
        return self._data.ravel(order="F").copy()

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def shape(self) -> tuple[int, int, int]:
        return self._data.shape

    dims = shape

    @property
    def n1(self) -> int:
        return self._data.shape[0]

    @property
    def n2(self) -> int:
        return self._data.shape[1]

    @property
    def n3(self) -> int:
        return self._data.shape[2]

    def frontal(self, k: int) -> np.ndarray:
        return self._data[:, :, k]

    def lateral(self, j: int) -> "Tensor3":
        return Tensor3(self._data[:, j : j + 1, :])

    @property
    def T(self) -> "Tensor3":
        return transpose(self)

    def __matmul__(self, other):
        if not isinstance(other, Tensor3):
            return NotImplemented
        from .algebra import tprod

        return tprod(self, other)

    def __add__(self, other):
        if not isinstance(other, Tensor3):
            return NotImplemented
        return add(self, other)

    def __sub__(self, other):
        if not isinstance(other, Tensor3):
            return NotImplemented
        return sub(self, other)

    def __neg__(self):
        return Tensor3._wrap(-self._data)

    def __mul__(self, alpha):
        if not isinstance(alpha, numbers.Real):
            return NotImplemented
        return scale(self, alpha)

    __rmul__ = __mul__

    def __truediv__(self, alpha):
        if not isinstance(alpha, numbers.Real):
            return NotImplemented
        return scale(self, 1.0 / alpha)

    def __eq__(self, other):
        if not isinstance(other, Tensor3):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._data, other._data))

    __hash__ = None

    def __repr__(self):
        return f"Tensor3(dims={self.shape}, fro={frobenius_norm(self):.4g})"


def _check_same(A: Tensor3, B: Tensor3, op: str) -> None:
    if A.shape != B.shape:
        raise DimensionMismatch(f"{op}: dims {A.shape} and {B.shape} differ")


def identity(n: int, n3: int) -> Tensor3:
    """Identity tensor: first frontal slice ``I_n``, remaining slices zero."""
    if n < 1 or n3 < 1:
        raise DimensionMismatch("identity needs n >= 1 and n3 >= 1")
    arr = np.zeros((n, n, n3))
    arr[:, :, 0] = np.eye(n)
    return Tensor3._wrap(arr)


def zeros(n1: int, n2: int, n3: int) -> Tensor3:
    return Tensor3._wrap(np.zeros((n1, n2, n3)))


def add(A: Tensor3, B: Tensor3) -> Tensor3:
    _check_same(A, B, "add")
    return Tensor3._wrap(A.data + B.data)


def sub(A: Tensor3, B: Tensor3) -> Tensor3:
    _check_same(A, B, "sub")
    return Tensor3._wrap(A.data - B.data)


def scale(A: Tensor3, alpha: float) -> Tensor3:
    return Tensor3._wrap(float(alpha) * A.data)


def unfold(A: Tensor3) -> np.ndarray:
    """Stack the frontal slices into an ``(n1*n3, n2)`` block column."""
    n1, n2, n3 = A.shape
    return np.ascontiguousarray(A.data.transpose(2, 0, 1)).reshape(n3 * n1, n2)


def fold(M, dims) -> Tensor3:
    """Inverse of :func:`unfold` for a tensor of the given ``dims``."""
    n1, n2, n3 = (int(d) for d in dims)
    M = np.asarray(M, dtype=np.float64)
    if M.shape != (n1 * n3, n2):
        raise DimensionMismatch(
            f"fold: matrix shape {M.shape} incompatible with dims {(n1, n2, n3)}"
        )
    return Tensor3(M.reshape(n3, n1, n2).transpose(1, 2, 0))


def bcirc(A: Tensor3) -> np.ndarray:
    """Block-circulant matrix of size ``(n1*n3, n2*n3)``.

    Block ``(i, j)`` (0-based) holds frontal slice ``(i - j) mod n3``.
    """
    n1, n2, n3 = A.shape
    idx = (np.arange(n3)[:, None] - np.arange(n3)[None, :]) % n3
    blocks = A.data.transpose(2, 0, 1)[idx]  # (n3, n3, n1, n2)
    return blocks.transpose(0, 2, 1, 3).reshape(n3 * n1, n3 * n2)


def transpose(A: Tensor3) -> Tensor3:
    """Transpose every frontal slice, then reverse slices 2..n3."""
    n3 = A.n3
    order = (-np.arange(n3)) % n3
    return Tensor3._wrap(np.ascontiguousarray(A.data[:, :, order].transpose(1, 0, 2)))


def frobenius_norm(A: Tensor3) -> float:
    return float(np.linalg.norm(A.data.ravel()))
