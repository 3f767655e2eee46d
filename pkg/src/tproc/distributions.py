"""Multivariate Student-t and inverse Wishart machinery.

Parameterizations
-----------------
The multivariate Student-t here uses the *covariance* parameterization:
``MVT(nu, phi, K)`` with nu > 2 has mean ``phi`` and covariance exactly
``K`` (not ``nu/(nu-2) * K``).  Its density is

    p(y) = G((nu+n)/2) / ( ((nu-2) pi)^(n/2) G(nu/2) ) * |K|^(-1/2)
           * (1 + beta/(nu-2))^(-(nu+n)/2),
    beta = (y-phi)' K^{-1} (y-phi).

The inverse Wishart uses the parameterization whose degree-of-freedom
parameter is unchanged under marginalization to diagonal blocks:

    p(S) = c |S|^(-(nu+2n)/2) exp(-0.5 tr(K S^{-1})),
    c = |K|^((nu+n-1)/2) / ( 2^((nu+n-1)n/2) G_n((nu+n-1)/2) ),

so E[S] = K / (nu - 2) and any principal r x r block of S is again
inverse Wishart with the same nu.  ``S ~ IW_n(nu, K)`` is equivalent to
``S^{-1} ~ W_n(nu + n - 1, K^{-1})`` in the classical Wishart convention,
which is how sampling is implemented (Bartlett factorization).
"""

from dataclasses import dataclass

import numpy as np
from scipy import special, stats

from .exceptions import DimensionMismatch, DomainError
from .numerics import (
    RngHandle,
    _chol_raw,
    chol_solve,
    check_symmetric,
    haar_orthogonal,
    log1p_ratio,
    matrix_values,
    solve_lower,
)


def _gen(rng):
    return rng.generator if isinstance(rng, RngHandle) else rng


def _check_dof(nu, name="nu"):
    try:
        nu = float(nu)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a real number, got {nu!r}") from None
    if not np.isfinite(nu) or nu <= 2.0:
        raise DomainError(f"{name} must be finite and > 2, got {nu}")
    return nu


# ---------------------------------------------------------------------------
# multivariate Student-t


@dataclass(frozen=True)
class MvtParams:
    """Parameters of a multivariate Student-t in covariance form.

    `scale` is the covariance matrix itself (requires nu > 2).
    """

    nu: float
    phi: np.ndarray
    scale: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "nu", _check_dof(self.nu))
        phi = np.asarray(self.phi, dtype=np.float64)
        if phi.ndim != 1 or phi.size == 0:
            raise DimensionMismatch(f"phi must be a non-empty vector, got shape {phi.shape}")
        if not np.all(np.isfinite(phi)):
            raise DomainError("phi contains non-finite entries")
        scale = check_symmetric(self.scale, "scale")
        if scale.shape[0] != phi.shape[0]:
            raise DimensionMismatch(
                f"scale dim {scale.shape[0]} does not match phi dim {phi.shape[0]}"
            )
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "scale", scale)

    @property
    def dim(self):
        return self.phi.shape[0]


def _check_obs(params, y):
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (params.dim,):
        raise DimensionMismatch(f"observation shape {y.shape} does not match dim {params.dim}")
    if not np.all(np.isfinite(y)):
        raise DomainError("observation contains non-finite entries")
    return y


def mvt_log_pdf(params, y):
    """Log density of `y` under the Student-t law `params`."""
    y = _check_obs(params, y)
    n = params.dim
    nu = params.nu
    lower, _ = _chol_raw(params.scale)
    half_logdet = float(np.sum(np.log(np.diagonal(lower))))
    v = solve_lower(lower, y - params.phi)
    beta = float(v @ v)
    return (
        special.gammaln(0.5 * (nu + n))
        - special.gammaln(0.5 * nu)
        - 0.5 * n * np.log((nu - 2.0) * np.pi)
        - half_logdet
        - 0.5 * (nu + n) * log1p_ratio(beta, nu)
    )


def mvt_condition(params, n1, y1):
    """Condition a joint Student-t on its first `n1` coordinates.

    Returns the exact conditional law of the remaining coordinates given
    ``y[:n1] = y1``; degrees of freedom grow to ``nu + n1`` and the
    covariance picks up the data-dependent factor
    ``(nu + beta1 - 2) / (nu + n1 - 2)`` on the Schur complement, where
    ``beta1`` is the Mahalanobis norm of the observed block.
    """
    n = params.dim
    if not 0 < n1 < n:
        raise DimensionMismatch(f"n1 must be in (0, {n}), got {n1}")
    y1 = np.asarray(y1, dtype=np.float64)
    if y1.shape != (n1,):
        raise DimensionMismatch(f"y1 shape {y1.shape} does not match n1={n1}")
    if not np.all(np.isfinite(y1)):
        raise DomainError("y1 contains non-finite entries")

    K = params.scale
    K11 = K[:n1, :n1]
    K12 = K[:n1, n1:]
    K22 = K[n1:, n1:]
    r1 = y1 - params.phi[:n1]

    lower, _ = _chol_raw(K11)
    v = solve_lower(lower, r1)
    beta1 = float(v @ v)
    alpha = chol_solve(lower, r1)
    cond_mean = K12.T @ alpha + params.phi[n1:]
    w = solve_lower(lower, K12)
    schur = K22 - w.T @ w
    schur = 0.5 * (schur + schur.T)
    factor = (params.nu + beta1 - 2.0) / (params.nu + n1 - 2.0)
    return MvtParams(nu=params.nu + n1, phi=cond_mean, scale=factor * schur)


def mvt_marginal(params, indices):
    """Marginal law of a subset of coordinates (same degrees of freedom)."""
    idx = np.asarray(indices, dtype=np.intp)
    if idx.ndim != 1 or idx.size == 0:
        raise DimensionMismatch("indices must be a non-empty 1-D integer sequence")
    if np.unique(idx).size != idx.size:
        raise DomainError("indices contain duplicates")
    if idx.min() < 0 or idx.max() >= params.dim:
        raise DomainError(f"indices out of range for dim {params.dim}")
    return MvtParams(
        nu=params.nu,
        phi=params.phi[idx],
        scale=params.scale[np.ix_(idx, idx)],
    )


def mvt_sample(params, count, rng):
    """Draw `count` vectors via the inverse-gamma scale mixture.

    With ``r^{-1} ~ Gamma(nu/2, rate 1/2)`` and ``y | r ~ N(phi,
    r (nu-2) K)`` the marginal of ``y`` is exactly ``MVT(nu, phi, K)``.
    """
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    gen = _gen(rng)
    lower, _ = _chol_raw(params.scale)
    r_inv = gen.gamma(0.5 * params.nu, 2.0, size=count)
    z = gen.standard_normal((count, params.dim))
    scale = np.sqrt((params.nu - 2.0) / r_inv)
    return params.phi + scale[:, None] * (z @ lower.T)


# ---------------------------------------------------------------------------
# unit-variance univariate Student-t (covariance parameterization)


def _check_scalar_dof(nu):
    nu = float(nu)
    if not np.isfinite(nu) or nu <= 2.0:
        raise DomainError(f"degrees of freedom must be finite and > 2, got {nu}")
    return nu


def student1_log_pdf(nu, z):
    """Log density of the unit-variance Student-t at `z` (vectorized)."""
    nu = _check_scalar_dof(nu)
    z = np.asarray(z, dtype=np.float64)
    out = (
        special.gammaln(0.5 * (nu + 1.0))
        - special.gammaln(0.5 * nu)
        - 0.5 * np.log((nu - 2.0) * np.pi)
        - 0.5 * (nu + 1.0) * np.log1p(z * z / (nu - 2.0))
    )
    return out if out.ndim else float(out)


def student1_pdf(nu, z):
    out = np.exp(student1_log_pdf(nu, z))
    return out if np.ndim(out) else float(out)


def student1_cdf(nu, z):
    """CDF of the unit-variance Student-t (vectorized).

    A classical t variate with nu dof scaled by sqrt((nu-2)/nu) has unit
    variance, so the CDF is the classical one at z * sqrt(nu/(nu-2)).
    """
    nu = _check_scalar_dof(nu)
    z = np.asarray(z, dtype=np.float64)
    out = special.stdtr(nu, z * np.sqrt(nu / (nu - 2.0)))
    return out if out.ndim else float(out)


def student1_ppf(nu, q):
    """Quantile function of the unit-variance Student-t (vectorized)."""
    nu = _check_scalar_dof(nu)
    q = np.asarray(q, dtype=np.float64)
    if np.any((q <= 0.0) | (q >= 1.0)):
        raise DomainError("quantile levels must lie strictly in (0, 1)")
    out = special.stdtrit(nu, q) * np.sqrt((nu - 2.0) / nu)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Wishart / inverse Wishart


def mv_gamma_ln(dim, a):
    """Log of the multivariate gamma function G_n(a).

    G_n(a) = pi^(n(n-1)/4) * prod_{j=1..n} G(a + (1-j)/2), defined for
    a > (n-1)/2.
    """
    if dim < 1:
        raise DomainError(f"dim must be >= 1, got {dim}")
    a = float(a)
    if not np.isfinite(a) or a <= 0.5 * (dim - 1):
        raise DomainError(f"mv_gamma_ln requires a > (dim-1)/2 = {0.5 * (dim - 1)}, got {a}")
    j = np.arange(1, dim + 1)
    return float(0.25 * dim * (dim - 1) * np.log(np.pi) + np.sum(special.gammaln(a + 0.5 * (1 - j))))


@dataclass(frozen=True)
class IwParams:
    """Inverse Wishart parameters (marginalization-consistent form).

    `base` plays the role of the location matrix: E[S] = base / (nu - 2).
    """

    nu: float
    base: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "nu", _check_dof(self.nu))
        object.__setattr__(self, "base", check_symmetric(self.base, "base"))

    @property
    def dim(self):
        return self.base.shape[0]


def iw_log_pdf(params, sigma):
    """Log density of `sigma` under the inverse Wishart law `params`."""
    sigma = check_symmetric(sigma, "sigma")
    n = params.dim
    if sigma.shape[0] != n:
        raise DimensionMismatch(f"sigma dim {sigma.shape[0]} does not match base dim {n}")
    nu = params.nu
    lower_k, _ = _chol_raw(params.base)
    lower_s, _ = _chol_raw(sigma)
    logdet_k = 2.0 * float(np.sum(np.log(np.diagonal(lower_k))))
    logdet_s = 2.0 * float(np.sum(np.log(np.diagonal(lower_s))))
    trace = float(np.trace(chol_solve(lower_s, params.base)))
    half = 0.5 * (nu + n - 1.0)
    log_norm = half * logdet_k - half * n * np.log(2.0) - mv_gamma_ln(n, half)
    return log_norm - 0.5 * (nu + 2.0 * n) * logdet_s - 0.5 * trace


def _bartlett(df, dim, gen, size):
    """Lower-triangular Bartlett factors A with A A' ~ W_n(df, I)."""
    k = 1 if size is None else int(size)
    a = np.zeros((k, dim, dim))
    ii = np.arange(dim)
    a[:, ii, ii] = np.sqrt(gen.chisquare(df - ii, size=(k, dim)))
    rows, cols = np.tril_indices(dim, -1)
    if rows.size:
        a[:, rows, cols] = gen.standard_normal((k, rows.size))
    return a


def wishart_sample(df, scale, rng, size=None):
    """Classical Wishart draws W_n(df, scale) with E[W] = df * scale.

    Requires df > dim - 1.  Returns shape (dim, dim) or (size, dim, dim).
    """
    scale = matrix_values(scale, "scale")
    dim = scale.shape[0]
    df = float(df)
    if not np.isfinite(df) or df <= dim - 1:
        raise DomainError(f"Wishart requires df > dim - 1 = {dim - 1}, got {df}")
    if size is not None and size < 1:
        raise DomainError(f"size must be >= 1, got {size}")
    gen = _gen(rng)
    lower, _ = _chol_raw(scale)
    a = _bartlett(df, dim, gen, size)
    m = lower @ a  # batched: (k, dim, dim)
    w = m @ m.transpose(0, 2, 1)
    w = 0.5 * (w + w.transpose(0, 2, 1))
    return w[0] if size is None else w


def iw_sample(params, rng, size=None):
    """Inverse Wishart draws with E[S] = base / (nu - 2).

    Draws W ~ W_n(nu + n - 1, base^{-1}) by Bartlett factorization and
    returns W^{-1}, formed stably as (L A^{-T})(L A^{-T})' where
    base = L L' and A is the Bartlett factor.
    """
    if size is not None and size < 1:
        raise DomainError(f"size must be >= 1, got {size}")
    gen = _gen(rng)
    dim = params.dim
    lower, _ = _chol_raw(params.base)
    a = _bartlett(params.nu + dim - 1.0, dim, gen, size)
    a_inv = np.linalg.inv(a)
    m = lower @ a_inv.transpose(0, 2, 1)
    s = m @ m.transpose(0, 2, 1)
    s = 0.5 * (s + s.transpose(0, 2, 1))
    return s[0] if size is None else s


# ---------------------------------------------------------------------------
# eigendecomposition sampler for the inverse Wishart with identity base


@dataclass(frozen=True)
class EigenIwSample:
    """Inverse Wishart draw(s) in factored form S = Q diag(lam) Q'."""

    q: np.ndarray
    lam: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=np.float64)
        lam = np.asarray(self.lam, dtype=np.float64)
        if q.ndim < 2 or q.shape[-1] != q.shape[-2]:
            raise DimensionMismatch(f"q must be square in its last two axes, got {q.shape}")
        if lam.shape != q.shape[:-1]:
            raise DimensionMismatch(
                f"lam shape {lam.shape} does not match q batch/dim {q.shape[:-1]}"
            )
        if not (np.all(np.isfinite(q)) and np.all(np.isfinite(lam))):
            raise DomainError("q or lam contains non-finite entries")
        if np.any(lam <= 0.0):
            raise DomainError("eigenvalues must be strictly positive")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "lam", lam)

    @property
    def dim(self):
        return self.q.shape[-1]

    def reconstruct(self):
        """Assemble S = Q diag(lam) Q' (exactly symmetrized)."""
        s = np.einsum("...ij,...j,...kj->...ik", self.q, self.lam, self.q)
        return 0.5 * (s + np.swapaxes(s, -1, -2))


def iwp_eigen_sample(nu, dim, rng, size=None):
    """Sample IW_n(nu, I) through its eigendecomposition.

    The orthogonal factor of an identity-base inverse Wishart is Haar
    distributed and independent of the eigenvalues, so the draw combines
    a fresh Haar orthogonal matrix with the sorted eigenvalues of an
    ordinary inverse Wishart draw.
    """
    nu = _check_dof(nu)
    if dim < 1:
        raise DomainError(f"dim must be >= 1, got {dim}")
    rng_lam = rng.derive(0) if isinstance(rng, RngHandle) else rng
    rng_q = rng.derive(1) if isinstance(rng, RngHandle) else rng
    s = iw_sample(IwParams(nu=nu, base=np.eye(dim)), rng_lam, size=size)
    lam = np.linalg.eigvalsh(s)
    lam = lam[..., ::-1].copy()  # descending
    q = haar_orthogonal(dim, rng_q, size=size)
    return EigenIwSample(q=q, lam=lam)


def theta_eigen_log_density(nu, lam):
    """Unnormalized log density of the eigenvalues of IW_n(nu, I).

    Change of variables of the inverse Wishart density to eigenvalue
    coordinates: each eigenvalue contributes
    ``-(nu + 2n)/2 * log(l) - 1/(2 l)`` and the spectral Jacobian
    contributes ``log |l_i - l_j|`` once per unordered pair.
    """
    nu = _check_dof(nu)
    lam = np.asarray(lam, dtype=np.float64)
    if lam.ndim != 1 or lam.size == 0:
        raise DimensionMismatch("lam must be a non-empty vector")
    if not np.all(np.isfinite(lam)) or np.any(lam <= 0.0):
        raise DomainError("eigenvalues must be positive and finite")
    n = lam.size
    value = float(np.sum(-0.5 * (nu + 2.0 * n) * np.log(lam) - 0.5 / lam))
    for i in range(n):
        for j in range(i + 1, n):
            gap = abs(lam[i] - lam[j])
            if gap == 0.0:
                return -np.inf
            value += np.log(gap)
    return value


# ---------------------------------------------------------------------------
# elliptical constructions


@dataclass(frozen=True)
class EllipticalSpec:
    """Radial-mixture specification y = mu + R * Omega u.

    `u` is uniform on the unit sphere.  kind 'gaussian' uses R^2 ~
    chi-square(n); kind 'student' uses R^2 = (nu-2) R1 R2 with R1 ~
    chi-square(n) and 1/R2 ~ Gamma(nu/2, rate 1/2), which yields a
    Student-t with covariance Omega Omega'.
    """

    kind: str
    mu: np.ndarray
    omega: np.ndarray
    nu: float = None

    def __post_init__(self):
        if self.kind not in ("gaussian", "student"):
            raise DomainError(f"kind must be 'gaussian' or 'student', got {self.kind!r}")
        mu = np.asarray(self.mu, dtype=np.float64)
        omega = np.asarray(self.omega, dtype=np.float64)
        if mu.ndim != 1 or mu.size == 0:
            raise DimensionMismatch("mu must be a non-empty vector")
        if omega.ndim != 2 or omega.shape != (mu.size, mu.size):
            raise DimensionMismatch(
                f"omega must be square with dim {mu.size}, got shape {omega.shape}"
            )
        if not (np.all(np.isfinite(mu)) and np.all(np.isfinite(omega))):
            raise DomainError("mu or omega contains non-finite entries")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "omega", omega)
        if self.kind == "student":
            object.__setattr__(self, "nu", _check_dof(self.nu))
        elif self.nu is not None:
            raise DomainError("nu is only meaningful for kind='student'")

    @property
    def dim(self):
        return self.mu.shape[0]


def elliptical_sample(spec, count, rng):
    """Draw `count` vectors from an elliptical radial mixture."""
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    gen = _gen(rng)
    n = spec.dim
    z = gen.standard_normal((count, n))
    norms = np.linalg.norm(z, axis=1)
    norms = np.where(norms == 0.0, 1.0, norms)
    u = z / norms[:, None]
    r1 = gen.chisquare(n, size=count)
    if spec.kind == "gaussian":
        radius = np.sqrt(r1)
    else:
        r2 = 1.0 / gen.gamma(0.5 * spec.nu, 2.0, size=count)
        radius = np.sqrt((spec.nu - 2.0) * r1 * r2)
    return spec.mu + radius[:, None] * (u @ spec.omega.T)


# ---------------------------------------------------------------------------
# distributional verification helpers


@dataclass(frozen=True)
class KsCheck:
    """One Kolmogorov-Smirnov comparison with its pass threshold."""

    name: str
    statistic: float
    pvalue: float
    threshold: float

    @property
    def passed(self):
        return bool(self.pvalue > self.threshold)


@dataclass(frozen=True)
class PriorEquivalenceReport:
    """KS comparisons between alternative constructions of one MVT law."""

    nu: float
    dim: int
    count: int
    checks: tuple

    @property
    def all_passed(self):
        return all(c.passed for c in self.checks)


def _mahalanobis_sq(y, lower):
    v = solve_lower(lower, y.T)
    return np.sum(v * v, axis=0)


def verify_prior_equivalence(nu, base, count, rng, threshold=0.01, include_direct=True):
    """Check that three constructions of MVT(nu, 0, base) agree in law.

    Constructions: (a) the scalar inverse-gamma mixture, (b) a Wishart
    draw on the precision, ``P ~ W_n(nu + n - 1, base^{-1})`` followed by
    ``y | P ~ N(0, (nu-2) P^{-1})``, and optionally (c) the packaged
    sampler.  Every pair is compared coordinate-wise and on the
    Mahalanobis radius with two-sample KS tests.
    """
    nu = _check_dof(nu)
    base = matrix_values(base, "base")
    if count < 100:
        raise DomainError(f"count must be >= 100 for a meaningful KS test, got {count}")
    if not isinstance(rng, RngHandle):
        raise DomainError("rng must be an RngHandle so substreams are reproducible")
    n = base.shape[0]
    lower, _ = _chol_raw(base)

    # (a) scalar inverse-gamma mixture
    gen_a = rng.derive(0).generator
    r = 1.0 / gen_a.gamma(0.5 * nu, 2.0, size=count)
    z = gen_a.standard_normal((count, n))
    y_mix = np.sqrt((nu - 2.0) * r)[:, None] * (z @ lower.T)

    # (b) Wishart-precision hierarchy
    rng_b = rng.derive(1)
    base_inv = chol_solve(lower, np.eye(n))
    base_inv = 0.5 * (base_inv + base_inv.T)
    prec = wishart_sample(nu + n - 1.0, base_inv, rng_b, size=count)
    cov = np.linalg.inv(prec)
    cov = 0.5 * (cov + cov.transpose(0, 2, 1))
    lower_cov = np.linalg.cholesky(cov)
    z2 = rng_b.derive(0).generator.standard_normal((count, n))
    y_wis = np.sqrt(nu - 2.0) * np.einsum("kij,kj->ki", lower_cov, z2)

    draws = {"mixture": y_mix, "wishart": y_wis}
    if include_direct:
        params = MvtParams(nu=nu, phi=np.zeros(n), scale=base)
        draws["direct"] = mvt_sample(params, count, rng.derive(2))

    checks = []
    names = list(draws)
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            a, b = names[i], names[j]
            for d in range(n):
                res = stats.ks_2samp(draws[a][:, d], draws[b][:, d])
                checks.append(
                    KsCheck(
                        name=f"coord{d}:{a}_vs_{b}",
                        statistic=float(res.statistic),
                        pvalue=float(res.pvalue),
                        threshold=threshold,
                    )
                )
            res = stats.ks_2samp(_mahalanobis_sq(draws[a], lower), _mahalanobis_sq(draws[b], lower))
            checks.append(
                KsCheck(
                    name=f"radius:{a}_vs_{b}",
                    statistic=float(res.statistic),
                    pvalue=float(res.pvalue),
                    threshold=threshold,
                )
            )
    return PriorEquivalenceReport(nu=nu, dim=n, count=count, checks=tuple(checks))


def verify_eigen_sampler(nu, dim, count, rng, threshold=0.01):
    """KS checks for the eigendecomposition-based inverse Wishart sampler.

    Any quadratic form u' S u of an identity-base draw with a fixed unit
    vector u is inverse gamma with shape nu/2 and scale 1/2; this is
    checked for a coordinate direction (the leading diagonal entry, i.e.
    the 1 x 1 marginal) and for an oblique direction (the radial
    statistic of the factored form).
    """
    nu = _check_dof(nu)
    if not isinstance(rng, RngHandle):
        raise DomainError("rng must be an RngHandle so substreams are reproducible")
    draw = iwp_eigen_sample(nu, dim, rng, size=count)
    s = draw.reconstruct()
    marginal = s[:, 0, 0]
    u = np.full(dim, 1.0 / np.sqrt(dim))
    proj = draw.q.transpose(0, 2, 1) @ u
    radial = np.einsum("kj,kj->k", proj * draw.lam, proj)
    ig = stats.invgamma(a=0.5 * nu, scale=0.5)
    checks = []
    for name, sample in (("eigen:diag_marginal", marginal), ("eigen:radial", radial)):
        res = stats.ks_1samp(sample, ig.cdf)
        checks.append(
            KsCheck(
                name=name,
                statistic=float(res.statistic),
                pvalue=float(res.pvalue),
                threshold=threshold,
            )
        )
    return PriorEquivalenceReport(nu=nu, dim=dim, count=count, checks=tuple(checks))
