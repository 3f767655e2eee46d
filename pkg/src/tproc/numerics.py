"""Shared numerical utilities: seeded RNG streams and dense linear algebra.

All stochastic code in the package draws from :class:`RngHandle` streams so
that a single integer seed fixes every random quantity.  The linear-algebra
helpers wrap LAPACK's Cholesky routines with a conservative jitter ladder
and raise package exceptions instead of returning invalid results.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lapack

from .exceptions import DimensionMismatch, DomainError, NotPositiveDefinite

# Relative jitter levels tried, in order, when a Cholesky factorization
# fails.  Each level multiplies the mean diagonal of the matrix.
JITTER_LADDER = (1e-10, 1e-8, 1e-6)

# Relative tolerance used when checking that a matrix is symmetric.
_SYMMETRY_RTOL = 1e-8


class RngHandle:
    """A named, reproducible random stream.

    Wraps ``numpy.random.Generator`` seeded through ``SeedSequence`` so that
    (a) the same seed always produces the same stream and (b) independent
    substreams can be derived deterministically by name via :meth:`derive`.
    """

    def __init__(self, seed, _spawn_key=()):
        if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool):
            raise DomainError(f"seed must be an integer, got {seed!r}")
        if seed < 0:
            raise DomainError(f"seed must be non-negative, got {seed}")
        self.seed = int(seed)
        self._spawn_key = tuple(int(k) for k in _spawn_key)
        self.generator = np.random.default_rng(
            np.random.SeedSequence(entropy=self.seed, spawn_key=self._spawn_key)
        )

    def derive(self, *key):
        """Return an independent substream identified by integer key(s).

        Deriving the same key from the same handle always yields a stream
        with the same state, regardless of how much the parent has been used.
        """
        for k in key:
            if not isinstance(k, (int, np.integer)) or isinstance(k, bool):
                raise DomainError(f"derive keys must be integers, got {k!r}")
        return RngHandle(self.seed, self._spawn_key + tuple(int(k) for k in key))

    def __repr__(self):
        return f"RngHandle(seed={self.seed}, spawn_key={self._spawn_key})"


def _as_square_float(values, name="matrix"):
    a = np.asarray(values, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"{name} must be square 2-D, got shape {a.shape}")
    if a.shape[0] == 0:
        raise DimensionMismatch(f"{name} must be non-empty")
    if not np.all(np.isfinite(a)):
        raise DomainError(f"{name} contains non-finite entries")
    return a


def check_symmetric(values, name="matrix"):
    """Validate (shape, finiteness, symmetry) and return a float64 copy."""
    a = _as_square_float(values, name)
    scale = np.max(np.abs(a))
    tol = _SYMMETRY_RTOL * max(scale, 1.0)
    if np.max(np.abs(a - a.T)) > tol:
        raise DomainError(f"{name} is not symmetric within tolerance {tol:g}")
    return a


@dataclass(frozen=True)
class SpdMatrix:
    """A validated symmetric matrix intended to be positive definite.

    Construction checks shape, finiteness and symmetry; positive
    definiteness itself is only established when a Cholesky factorization
    is requested (that is the cheapest complete test).
    """

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", check_symmetric(self.values))

    @property
    def dim(self):
        return self.values.shape[0]


def matrix_values(m, name="matrix"):
    """Return the ndarray behind an SpdMatrix, or validate a raw array."""
    if isinstance(m, SpdMatrix):
        return m.values
    return check_symmetric(m, name)


@dataclass(frozen=True)
class CholFactor:
    """Lower-triangular Cholesky factor plus the jitter that produced it."""

    lower: np.ndarray
    jitter: float = 0.0

    @property
    def dim(self):
        return self.lower.shape[0]

    def log_det(self):
        """log det of the factored matrix (twice the log-diagonal sum)."""
        return 2.0 * float(np.sum(np.log(np.diagonal(self.lower))))


def _chol_raw(a):
    """Cholesky with jitter ladder; `a` is trusted to be symmetric float64.

    Returns (lower, jitter_added).  Raises NotPositiveDefinite if the
    factorization fails at every jitter level.
    """
    c, info = lapack.dpotrf(a, lower=1, clean=1, overwrite_a=0)
    if info == 0:
        return c, 0.0
    if info < 0:
        raise NotPositiveDefinite(f"dpotrf: illegal argument {-info}")
    mean_diag = float(np.mean(np.diagonal(a)))
    if mean_diag > 0.0:
        n = a.shape[0]
        idx = np.arange(n)
        for eps in JITTER_LADDER:
            jitter = eps * mean_diag
            aj = a.copy()
            aj[idx, idx] += jitter
            c, info = lapack.dpotrf(aj, lower=1, clean=1, overwrite_a=1)
            if info == 0:
                return c, jitter
    raise NotPositiveDefinite(
        "matrix is not positive definite (jitter ladder "
        f"{JITTER_LADDER} relative to mean diagonal exhausted)"
    )


def cholesky(m):
    """Lower Cholesky factor of a symmetric positive definite matrix.

    Accepts an :class:`SpdMatrix` or a raw array (validated).  On failure
    a small multiple of the mean diagonal is added and the factorization
    retried over :data:`JITTER_LADDER`; the jitter actually used is
    recorded on the returned :class:`CholFactor`.
    """
    a = matrix_values(m)
    lower, jitter = _chol_raw(a)
    return CholFactor(lower=lower, jitter=jitter)


def chol_solve(factor, b):
    """Solve A x = b given the Cholesky factor of A.

    `b` may be a vector or a matrix of right-hand sides; the result has
    the same shape.
    """
    lower = factor.lower if isinstance(factor, CholFactor) else np.asarray(factor)
    b = np.asarray(b, dtype=np.float64)
    squeeze = b.ndim == 1
    if squeeze:
        b = b[:, None]
    if b.ndim != 2 or b.shape[0] != lower.shape[0]:
        raise DimensionMismatch(
            f"right-hand side shape {b.shape} incompatible with factor dim {lower.shape[0]}"
        )
    x, info = lapack.dpotrs(lower, b, lower=1)
    if info != 0:
        raise NotPositiveDefinite(f"dpotrs failed with info={info}")
    return x[:, 0] if squeeze else x


def solve_lower(lower, b):
    """Solve L x = b for lower-triangular L (forward substitution)."""
    b = np.asarray(b, dtype=np.float64)
    squeeze = b.ndim == 1
    if squeeze:
        b = b[:, None]
    if b.shape[0] != lower.shape[0]:
        raise DimensionMismatch(
            f"right-hand side shape {b.shape} incompatible with factor dim {lower.shape[0]}"
        )
    x, info = lapack.dtrtrs(lower, b, lower=1, trans=0)
    if info != 0:
        raise NotPositiveDefinite(f"dtrtrs failed with info={info}")
    return x[:, 0] if squeeze else x


def sym_eigen(m):
    """Eigendecomposition of a symmetric matrix with a deterministic layout.

    Returns (eigenvalues, eigenvectors) with eigenvalues sorted in
    descending order and each eigenvector's sign fixed so that its first
    entry of non-negligible magnitude is positive.  Ties in the
    eigenvalues keep LAPACK's (stable-sorted) vector order.
    """
    a = matrix_values(m)
    w, v = np.linalg.eigh(a)
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = v[:, order]
    # Sign convention: first entry with magnitude above a relative floor
    # is made positive, so repeated calls agree bit-for-bit.
    absv = np.abs(v)
    floor = 1e-12 * np.max(absv, axis=0)
    for j in range(v.shape[1]):
        nz = np.nonzero(absv[:, j] > floor[j])[0]
        lead = nz[0] if nz.size else 0
        if v[lead, j] < 0.0:
            v[:, j] = -v[:, j]
    return w, v


def haar_orthogonal(dim, rng, size=None):
    """Draw orthogonal matrices from the Haar measure on O(dim).

    Uses the QR factorization of a standard Gaussian matrix with the R
    diagonal's signs folded into Q, which makes the distribution exactly
    rotation invariant.  With `size=None` returns one (dim, dim) matrix,
    otherwise an array of shape (size, dim, dim).
    """
    if dim < 1:
        raise DomainError(f"dim must be >= 1, got {dim}")
    gen = rng.generator if isinstance(rng, RngHandle) else rng
    shape = (dim, dim) if size is None else (size, dim, dim)
    g = gen.standard_normal(shape)
    q, r = np.linalg.qr(g)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    signs = np.where(d >= 0.0, 1.0, -1.0)
    return q * signs[..., None, :]


def log1p_ratio(beta, nu):
    """Numerically careful log(1 + beta / (nu - 2)) for beta >= 0, nu > 2."""
    return float(np.log1p(beta / (nu - 2.0)))
