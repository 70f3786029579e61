"""Input validation helpers shared by the simulation modules and the estimator."""

import math

import numpy as np


def check_unit_interval(name, value, *, open_right=False):
    """Return ``value`` as a float after checking it lies in [0, 1] (or [0, 1)).

    Raises:
        ValueError: if the value is not finite or falls outside the interval.
    """
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ValueError(f"{name} must be a real number, got {value!r}") from None
    upper_ok = value < 1.0 if open_right else value <= 1.0
    if not math.isfinite(value) or value < 0.0 or not upper_ok:
        bound = "[0, 1)" if open_right else "[0, 1]"
        raise ValueError(f"{name} must lie in {bound}, got {value!r}")
    return value


def check_pair(name, value, *, open_right=False):
    """Accept a scalar or a 2-sequence of strengths and return a float pair.

    A scalar ``x`` means the symmetric pair ``(x, x)``.
    """
    if np.ndim(value) == 0:
        v = check_unit_interval(name, value, open_right=open_right)
        return v, v
    if len(value) != 2:
        raise ValueError(f"{name} must be a scalar or a pair, got {value!r}")
    return (
        check_unit_interval(f"{name}[0]", value[0], open_right=open_right),
        check_unit_interval(f"{name}[1]", value[1], open_right=open_right),
    )


def check_square(name, mat, dim=None):
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {mat.shape}")
    if dim is not None and mat.shape[0] != dim:
        raise ValueError(f"{name} must be {dim}x{dim}, got {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise ValueError(f"{name} contains non-finite entries")
    return mat


def check_state_vector(name, vec, dim=None, *, normalized=True, atol=1e-12):
    vec = np.asarray(vec, dtype=complex)
    if vec.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {vec.shape}")
    if dim is not None and vec.shape[0] != dim:
        raise ValueError(f"{name} must have length {dim}, got {vec.shape[0]}")
    if not np.all(np.isfinite(vec)):
        raise ValueError(f"{name} contains non-finite entries")
    if normalized and abs(np.vdot(vec, vec).real - 1.0) > atol:
        raise ValueError(f"{name} is not normalized (norm^2 = {np.vdot(vec, vec).real!r})")
    return vec


def check_states(X, dim=3, atol=1e-10):
    """Validate a batch of pure states given as rows of amplitudes.

    Returns a complex array of shape ``(n_samples, dim)``.
    """
    X = np.asarray(X, dtype=complex)
    if X.ndim == 1:
        X = X[np.newaxis, :]
    if X.ndim != 2 or X.shape[1] != dim:
        raise ValueError(f"expected states of shape (n_samples, {dim}), got {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("states contain non-finite amplitudes")
    norms = np.einsum("ij,ij->i", X.conj(), X).real
    if np.any(np.abs(norms - 1.0) > atol):
        raise ValueError("every state must be normalized")
    return X
