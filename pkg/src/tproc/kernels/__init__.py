"""Stationary covariance kernels with interchangeable backends.

Two families are provided, both with per-dimension (ARD) lengthscales:

* ``squared_exponential_ard``:  k(x, x') = a * exp(-0.5 * sum_d (dx_d/l_d)^2)
* ``matern52_ard``:             k(x, x') = a * (1 + s) * exp(-s),
  with s = sqrt(5 * sum_d (dx_d/l_d)^2)

An optional observation-noise term adds ``noise`` to the Gram diagonal
(never to cross-covariances).  Gradients are taken with respect to the
*logs* of the hyperparameters, which is the scale the model optimizes on.

The inner loops exist twice: a compiled Cython extension (``_gramc``) and
a pure-numpy fallback (``_numpy_impl``).  The backend is chosen once at
import time; set ``TPROC_KERNEL_BACKEND`` to ``compiled``, ``numpy`` or
``auto`` (default) to override.  Both backends produce exactly symmetric
Gram matrices and agree to floating-point roundoff.
"""

import os
from dataclasses import dataclass

import numpy as np

from ..exceptions import DimensionMismatch, DomainError
from . import _numpy_impl

SQUARED_EXPONENTIAL = "squared_exponential_ard"
MATERN52 = "matern52_ard"
FAMILIES = (SQUARED_EXPONENTIAL, MATERN52)


def _select_backend():
    requested = os.environ.get("TPROC_KERNEL_BACKEND", "auto").strip().lower()
    if requested not in ("auto", "compiled", "numpy"):
        raise DomainError(
            f"TPROC_KERNEL_BACKEND must be auto, compiled or numpy, got {requested!r}"
        )
    if requested == "numpy":
        return _numpy_impl
    try:
        from . import _gramc
        return _gramc
    except ImportError:
        if requested == "compiled":
            raise DomainError(
                "TPROC_KERNEL_BACKEND=compiled but the extension is not built"
            ) from None
        return _numpy_impl


_impl = _select_backend()


def backend_name():
    """Name of the active backend: 'compiled' or 'numpy'."""
    return _impl.BACKEND


@dataclass(frozen=True)
class KernelParams:
    """Hyperparameters of one kernel instance.

    `lengthscales` must list one positive value per input dimension.
    `noise` is the variance added to Gram diagonals when `include_noise`
    is set; it must then be strictly positive so its log is defined.
    """

    family: str
    amplitude: float
    lengthscales: np.ndarray
    noise: float = 0.0
    include_noise: bool = False

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown kernel family {self.family!r}; expected one of {FAMILIES}")
        object.__setattr__(self, "amplitude", float(self.amplitude))
        ls = np.atleast_1d(np.asarray(self.lengthscales, dtype=np.float64))
        if ls.ndim != 1 or ls.size == 0:
            raise DimensionMismatch("lengthscales must be a non-empty 1-D sequence")
        object.__setattr__(self, "lengthscales", ls)
        object.__setattr__(self, "noise", float(self.noise))
        object.__setattr__(self, "include_noise", bool(self.include_noise))
        if not (np.isfinite(self.amplitude) and self.amplitude > 0.0):
            raise DomainError(f"amplitude must be positive and finite, got {self.amplitude}")
        if not (np.all(np.isfinite(ls)) and np.all(ls > 0.0)):
            raise DomainError("lengthscales must all be positive and finite")
        if not np.isfinite(self.noise) or self.noise < 0.0:
            raise DomainError(f"noise must be non-negative and finite, got {self.noise}")
        if self.include_noise and self.noise <= 0.0:
            raise DomainError("include_noise requires strictly positive noise")

    @property
    def input_dim(self):
        return self.lengthscales.shape[0]


def hyper_names(params):
    """Names of the log-scale gradient coordinates, in gradient order."""
    names = ["log_amplitude"]
    names += [f"log_lengthscale_{d}" for d in range(params.input_dim)]
    if params.include_noise:
        names.append("log_noise")
    return names


def n_hyper(params):
    return 1 + params.input_dim + (1 if params.include_noise else 0)


def _check_inputs(params, X, name="X"):
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D (points, dims), got shape {X.shape}")
    if X.shape[1] != params.input_dim:
        raise DimensionMismatch(
            f"{name} has {X.shape[1]} columns but kernel expects {params.input_dim}"
        )
    if not np.all(np.isfinite(X)):
        raise DomainError(f"{name} contains non-finite entries")
    return X


def _effective_noise(params):
    return params.noise if params.include_noise else 0.0


def gram(params, X):
    """Gram matrix of `X` against itself, exactly symmetric.

    Observation noise is added down the diagonal when the kernel carries it.
    """
    X = _check_inputs(params, X)
    noise = _effective_noise(params)
    if params.family == SQUARED_EXPONENTIAL:
        return _impl.se_gram(X, params.amplitude, params.lengthscales, noise)
    return _impl.m52_gram(X, params.amplitude, params.lengthscales, noise)


def gram_cross(params, X1, X2):
    """Cross-covariance of two point sets; noise is never added here."""
    X1 = _check_inputs(params, X1, "X1")
    X2 = _check_inputs(params, X2, "X2")
    if params.family == SQUARED_EXPONENTIAL:
        return _impl.se_cross(X1, X2, params.amplitude, params.lengthscales)
    return _impl.m52_cross(X1, X2, params.amplitude, params.lengthscales)


def gram_grad(params, X):
    """Gram matrix and stacked gradients with respect to log hyperparameters.

    Returns (K, G) with G of shape (P, N, N); the coordinate order is given
    by :func:`hyper_names`.
    """
    X = _check_inputs(params, X)
    noise = _effective_noise(params)
    if params.family == SQUARED_EXPONENTIAL:
        return _impl.se_gram_grads(
            X, params.amplitude, params.lengthscales, noise, params.include_noise
        )
    return _impl.m52_gram_grads(
        X, params.amplitude, params.lengthscales, noise, params.include_noise
    )


def kernel_eval(params, x1, x2, same_point=False):
    """Covariance between two single points.

    `same_point=True` marks x1 and x2 as the same observation, which adds
    the noise variance when the kernel carries one.
    """
    x1 = np.atleast_2d(np.asarray(x1, dtype=np.float64))
    x2 = np.atleast_2d(np.asarray(x2, dtype=np.float64))
    value = float(gram_cross(params, x1, x2)[0, 0])
    if same_point:
        value += _effective_noise(params)
    return value
