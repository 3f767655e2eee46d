"""Pure-numpy kernel backend.

Broadcasting-based Gram construction.  Differences are squared before
summation, so Gram matrices come out exactly symmetric in IEEE arithmetic
(``(a-b)**2 == (b-a)**2`` bitwise).  The compiled backend in ``_gramc``
implements the same six entry points with identical semantics.
"""

import numpy as np

BACKEND = "numpy"


def _scaled_sq(X1, X2, lengthscales):
    """Per-dimension squared scaled differences, shape (N1, N2, D)."""
    d = (X1[:, None, :] - X2[None, :, :]) / lengthscales
    return d * d


def se_gram(X, amplitude, lengthscales, noise):
    q = _scaled_sq(X, X, lengthscales).sum(axis=2)
    K = amplitude * np.exp(-0.5 * q)
    if noise != 0.0:
        idx = np.arange(X.shape[0])
        K[idx, idx] += noise
    return K


def se_cross(X1, X2, amplitude, lengthscales):
    q = _scaled_sq(X1, X2, lengthscales).sum(axis=2)
    return amplitude * np.exp(-0.5 * q)


def se_gram_grads(X, amplitude, lengthscales, noise, with_noise):
    """Gram matrix and its gradients with respect to log hyperparameters.

    Gradient order: log amplitude, log lengthscale per dimension, then
    (if `with_noise`) log noise.
    """
    n, d = X.shape
    sq = _scaled_sq(X, X, lengthscales)
    base = amplitude * np.exp(-0.5 * sq.sum(axis=2))
    p = 1 + d + (1 if with_noise else 0)
    grads = np.empty((p, n, n))
    grads[0] = base
    for k in range(d):
        grads[1 + k] = base * sq[:, :, k]
    K = base.copy()
    if noise != 0.0:
        idx = np.arange(n)
        K[idx, idx] += noise
    if with_noise:
        grads[1 + d] = noise * np.eye(n)
    return K, grads


def m52_gram(X, amplitude, lengthscales, noise):
    q = _scaled_sq(X, X, lengthscales).sum(axis=2)
    s = np.sqrt(5.0 * q)
    K = amplitude * (1.0 + s) * np.exp(-s)
    if noise != 0.0:
        idx = np.arange(X.shape[0])
        K[idx, idx] += noise
    return K


def m52_cross(X1, X2, amplitude, lengthscales):
    q = _scaled_sq(X1, X2, lengthscales).sum(axis=2)
    s = np.sqrt(5.0 * q)
    return amplitude * (1.0 + s) * np.exp(-s)


def m52_gram_grads(X, amplitude, lengthscales, noise, with_noise):
    n, d = X.shape
    sq = _scaled_sq(X, X, lengthscales)
    s = np.sqrt(5.0 * sq.sum(axis=2))
    decay = np.exp(-s)
    base = amplitude * (1.0 + s) * decay
    factor = 5.0 * amplitude * decay
    p = 1 + d + (1 if with_noise else 0)
    grads = np.empty((p, n, n))
    grads[0] = base
    for k in range(d):
        grads[1 + k] = factor * sq[:, :, k]
    K = base.copy()
    if noise != 0.0:
        idx = np.arange(n)
        K[idx, idx] += noise
    if with_noise:
        grads[1 + d] = noise * np.eye(n)
    return K, grads
