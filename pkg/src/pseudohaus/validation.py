"""Input validation helpers shared by the functional API and the estimators."""

import numbers

import numpy as np

from .exceptions import ContractError, InputError

MAX_DIM = 2048


def check_matrix(a, square=False, name="matrix"):
    """Return ``a`` as a finite 2-D complex128 array.

    Accepts anything ``np.asarray`` understands plus the ``{"rows", "cols",
    "re", "im"}`` mapping used by the matrix file format.
    """
    if isinstance(a, dict):
        from .io import matrix_from_dict

        a = matrix_from_dict(a)
    arr = np.asarray(a)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2:
        raise InputError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InputError(f"{name} must be non-empty, got shape {arr.shape}")
    if max(arr.shape) > MAX_DIM:
        raise InputError(f"{name} exceeds {MAX_DIM} rows/cols: {arr.shape}")
    try:
        arr = arr.astype(np.complex128, copy=False)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{name} is not numeric") from exc
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} has non-finite entries")
    if square and arr.shape[0] != arr.shape[1]:
        raise ContractError(f"{name} must be square, got shape {arr.shape}")
    return arr


def check_points(points, name="points"):
    """Coerce a point collection to a 1-D complex array.

    Accepts complex sequences, ``(k, 2)`` real arrays of ``[re, im]`` pairs
    and any object with a ``points`` attribute (e.g. a region sample).
    """
    if hasattr(points, "points"):
        points = points.points
    arr = np.asarray(points)
    if arr.size == 0:
        return np.zeros(0, dtype=np.complex128)
    if arr.ndim == 2 and arr.shape[1] == 2 and not np.iscomplexobj(arr):
        arr = arr[:, 0] + 1j * arr[:, 1]
    arr = np.ravel(arr).astype(np.complex128)
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} has non-finite entries")
    return arr


def check_positive(value, name):
    if not isinstance(value, numbers.Real) or not np.isfinite(value) or value <= 0:
        raise ContractError(f"{name} must be a positive real, got {value!r}")
    return float(value)


def check_eps_list(eps_list):
    eps = [check_positive(e, "eps") for e in np.atleast_1d(eps_list).tolist()]
    if not eps:
        raise ContractError("eps list is empty")
    return eps
