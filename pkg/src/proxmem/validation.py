"""Input validation helpers, sklearn check_array style.

Every public entry point funnels its array inputs through one of these so
error messages are uniform and downstream code can assume clean dtypes.
"""

from __future__ import annotations

import numpy as np

from .errors import NotSymmetric, SizeMismatch


def check_rng(seed) -> np.random.Generator:
    """Return a numpy Generator for ``seed``.

    Accepts None (fresh OS entropy), an int, a SeedSequence, or an existing
    Generator (passed through unchanged).
    """
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def check_coords(coords) -> np.ndarray:
    """Validate an (n, 3) integer coordinate array."""
    arr = np.asarray(coords)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise SizeMismatch(f"coordinates must be (n, 3), got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise SizeMismatch("at least one neuron is required")
    if not np.issubdtype(arr.dtype, np.integer):
        rounded = np.rint(arr)
        if not np.array_equal(rounded, arr):
            raise SizeMismatch("coordinates must be integers")
        arr = rounded
    return arr.astype(np.int64)


def check_bipolar_matrix(X, n_columns: int | None = None) -> np.ndarray:
    """Validate an (m, n) matrix with entries in {-1, +1}."""
    arr = np.asarray(X)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise SizeMismatch(f"memory set must be 2-D, got shape {arr.shape}")
    if arr.size == 0:
        raise SizeMismatch("memory set must be non-empty")
    if not np.isin(arr, (-1, 1)).all():
        raise SizeMismatch("memory entries must be exactly -1 or +1")
    if n_columns is not None and arr.shape[1] != n_columns:
        raise SizeMismatch(
            f"memory vectors have length {arr.shape[1]}, expected {n_columns}"
        )
    return arr.astype(np.int64)


def check_bipolar_vector(v, n: int | None = None) -> np.ndarray:
    arr = np.asarray(v).ravel()
    if not np.isin(arr, (-1, 1)).all():
        raise SizeMismatch("vector entries must be exactly -1 or +1")
    if n is not None and arr.shape[0] != n:
        raise SizeMismatch(f"vector has length {arr.shape[0]}, expected {n}")
    return arr.astype(np.int64)


def check_tri_state(v, n: int | None = None) -> np.ndarray:
    """Validate a vector with entries in {-1, 0, +1} (0 = not yet clamped)."""
    arr = np.asarray(v).ravel()
    if not np.isin(arr, (-1, 0, 1)).all():
        raise SizeMismatch("tri-state entries must be -1, 0 or +1")
    if n is not None and arr.shape[0] != n:
        raise SizeMismatch(f"state has length {arr.shape[0]}, expected {n}")
    return arr.astype(np.int64)


def check_symmetric_zero_diagonal(T) -> np.ndarray:
    """Validate a square symmetric matrix with an all-zero diagonal."""
    arr = np.asarray(T)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise SizeMismatch(f"weight matrix must be square, got shape {arr.shape}")
    if not np.array_equal(arr, arr.T):
        raise NotSymmetric("weight matrix is not symmetric")
    if np.any(np.diag(arr) != 0):
        raise NotSymmetric("weight matrix diagonal must be zero")
    return arr


def check_sign_value(value, name: str = "init") -> int:
    v = int(value)
    if v not in (-1, 1):
        raise SizeMismatch(f"{name} must be +1 or -1, got {value!r}")
    return v
