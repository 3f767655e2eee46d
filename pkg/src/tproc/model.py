"""Student-t process and Gaussian process regression with exact inference.

Both models share kernel hyperparameters (on log scale) and a constant
mean; the Student-t process ("tp") additionally carries degrees of
freedom nu > 2, optimized through the substitution nu = 2 + exp(nu_tilde)
so the constraint can never be violated.  Marginal likelihoods, their
analytic gradients, and predictive laws are all closed form; no
approximate inference is involved.  Hyperparameters can be point-fitted
(MAP / maximum marginal likelihood via L-BFGS-B with restarts) or
sampled with a coordinate-wise slice sampler under normal priors.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

from . import kernels
from .distributions import MvtParams, mvt_log_pdf, student1_log_pdf
from .exceptions import (
    AllRestartsFailed,
    DimensionMismatch,
    DomainError,
    NonFiniteDensity,
    NotPositiveDefinite,
)
from .numerics import RngHandle, _chol_raw, chol_solve, solve_lower

MODELS = ("tp", "gp")

# Hard floor used when an optimizer step lands on a non-factorizable
# Gram matrix; large but finite so line searches can recover.
_BAD_OBJECTIVE = 1e25


def _check_model(model):
    if model not in MODELS:
        raise DomainError(f"model must be one of {MODELS}, got {model!r}")


@dataclass(frozen=True)
class Dataset:
    """Regression data: inputs `x` of shape (n, d) and targets `y` of (n,)."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.ascontiguousarray(self.x, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.float64)
        if x.ndim != 2:
            raise DimensionMismatch(f"x must be 2-D (points, dims), got shape {x.shape}")
        if y.ndim != 1 or y.shape[0] != x.shape[0]:
            raise DimensionMismatch(
                f"y must be 1-D with length {x.shape[0]}, got shape {y.shape}"
            )
        if x.shape[0] < 1:
            raise DimensionMismatch("dataset must contain at least one point")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise DomainError("dataset contains non-finite values")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self):
        return self.x.shape[0]

    @property
    def input_dim(self):
        return self.x.shape[1]


@dataclass(frozen=True)
class HyperParams:
    """One hyperparameter setting; `nu` is None for the Gaussian model."""

    kernel: kernels.KernelParams
    nu: float = None
    mean_mu: float = 0.0

    def __post_init__(self):
        if self.nu is not None:
            nu = float(self.nu)
            if not np.isfinite(nu) or nu <= 2.0:
                raise DomainError(f"nu must be finite and > 2 (or None), got {nu}")
            object.__setattr__(self, "nu", nu)
        mu = float(self.mean_mu)
        if not np.isfinite(mu):
            raise DomainError(f"mean_mu must be finite, got {mu}")
        object.__setattr__(self, "mean_mu", mu)


def _require_nu(hp):
    if hp.nu is None:
        raise DomainError("the tp model requires hyperparameters with nu set")
    return hp.nu


# ---------------------------------------------------------------------------
# packing between HyperParams and unconstrained vectors


def hyper_vector_names(template, model):
    """Coordinate names of the unconstrained hyperparameter vector."""
    _check_model(model)
    names = list(kernels.hyper_names(template.kernel))
    if model == "tp":
        names.append("nu_tilde")
    names.append("mean_mu")
    return names


def pack_hypers(hp, model):
    """Map hyperparameters to the unconstrained optimization vector.

    Kernel parameters enter as logs and nu as log(nu - 2), so every
    coordinate ranges over the whole real line.
    """
    _check_model(model)
    k = hp.kernel
    vec = [math.log(k.amplitude)]
    vec += [math.log(l) for l in k.lengthscales]
    if k.include_noise:
        vec.append(math.log(k.noise))
    if model == "tp":
        vec.append(math.log(_require_nu(hp) - 2.0))
    vec.append(hp.mean_mu)
    return np.array(vec, dtype=np.float64)


def unpack_hypers(vec, template, model):
    """Inverse of :func:`pack_hypers`; `template` fixes the structure."""
    _check_model(model)
    vec = np.asarray(vec, dtype=np.float64)
    k = template.kernel
    expected = kernels.n_hyper(k) + (1 if model == "tp" else 0) + 1
    if vec.shape != (expected,):
        raise DimensionMismatch(f"expected vector of length {expected}, got shape {vec.shape}")
    if not np.all(np.isfinite(vec)):
        raise DomainError("hyperparameter vector contains non-finite values")
    pos = 0
    amplitude = math.exp(vec[pos])
    pos += 1
    d = k.input_dim
    lengthscales = np.exp(vec[pos : pos + d])
    pos += d
    noise = k.noise
    if k.include_noise:
        noise = math.exp(vec[pos])
        pos += 1
    nu = None
    if model == "tp":
        nu = 2.0 + math.exp(vec[pos])
        pos += 1
    mean_mu = float(vec[pos])
    new_kernel = kernels.KernelParams(
        family=k.family,
        amplitude=amplitude,
        lengthscales=lengthscales,
        noise=noise,
        include_noise=k.include_noise,
    )
    return HyperParams(kernel=new_kernel, nu=nu, mean_mu=mean_mu)


# ---------------------------------------------------------------------------
# marginal likelihoods and gradients


def _factored(data, hp):
    """Gram Cholesky plus residual quantities shared by all formulas."""
    gram = kernels.gram(hp.kernel, data.x)
    lower, _ = _chol_raw(gram)
    resid = data.y - hp.mean_mu
    white = solve_lower(lower, resid)
    beta = float(white @ white)
    logdet = 2.0 * float(np.sum(np.log(np.diagonal(lower))))
    return lower, resid, beta, logdet


def tp_log_marginal(data, hp):
    """Exact log marginal likelihood of the Student-t process."""
    nu = _require_nu(hp)
    n = data.n
    _, _, beta, logdet = _factored(data, hp)
    return (
        special.gammaln(0.5 * (nu + n))
        - special.gammaln(0.5 * nu)
        - 0.5 * n * math.log((nu - 2.0) * math.pi)
        - 0.5 * logdet
        - 0.5 * (nu + n) * math.log1p(beta / (nu - 2.0))
    )


def gp_log_marginal(data, hp):
    """Exact log marginal likelihood of the Gaussian process."""
    n = data.n
    _, _, beta, logdet = _factored(data, hp)
    return -0.5 * (n * math.log(2.0 * math.pi) + logdet + beta)


def log_marginal(data, hp, model):
    _check_model(model)
    return tp_log_marginal(data, hp) if model == "tp" else gp_log_marginal(data, hp)


def _grad_common(data, hp):
    gram, grads = kernels.gram_grad(hp.kernel, data.x)
    lower, _ = _chol_raw(gram)
    resid = data.y - hp.mean_mu
    white = solve_lower(lower, resid)
    beta = float(white @ white)
    logdet = 2.0 * float(np.sum(np.log(np.diagonal(lower))))
    alpha = chol_solve(lower, resid)
    gram_inv = chol_solve(lower, np.eye(data.n))
    quad = np.einsum("pij,i,j->p", grads, alpha, alpha)
    trace = np.einsum("pij,ij->p", grads, gram_inv)
    return beta, logdet, alpha, quad, trace


def tp_log_marginal_grad(data, hp):
    """Log marginal of the tp model and its gradient.

    The gradient is with respect to the unconstrained vector of
    :func:`pack_hypers` (log kernel parameters, nu_tilde, mean_mu).
    """
    nu = _require_nu(hp)
    n = data.n
    beta, logdet, alpha, quad, trace = _grad_common(data, hp)
    value = (
        special.gammaln(0.5 * (nu + n))
        - special.gammaln(0.5 * nu)
        - 0.5 * n * math.log((nu - 2.0) * math.pi)
        - 0.5 * logdet
        - 0.5 * (nu + n) * math.log1p(beta / (nu - 2.0))
    )
    shrink = (nu + n) / (nu + beta - 2.0)
    kernel_grad = 0.5 * (shrink * quad - trace)
    dlik_dnu = (
        -0.5 * n / (nu - 2.0)
        + 0.5 * special.psi(0.5 * (nu + n))
        - 0.5 * special.psi(0.5 * nu)
        - 0.5 * math.log1p(beta / (nu - 2.0))
        + 0.5 * (nu + n) * beta / ((nu - 2.0) * (nu - 2.0 + beta))
    )
    grad_nu_tilde = dlik_dnu * (nu - 2.0)  # chain rule through nu = 2 + exp(nu_tilde)
    grad_mu = shrink * float(np.sum(alpha))
    grad = np.concatenate([kernel_grad, [grad_nu_tilde, grad_mu]])
    return value, grad


def gp_log_marginal_grad(data, hp):
    """Log marginal of the gp model and its gradient (same vector layout)."""
    n = data.n
    beta, logdet, alpha, quad, trace = _grad_common(data, hp)
    value = -0.5 * (n * math.log(2.0 * math.pi) + logdet + beta)
    kernel_grad = 0.5 * (quad - trace)
    grad_mu = float(np.sum(alpha))
    grad = np.concatenate([kernel_grad, [grad_mu]])
    return value, grad


def log_marginal_grad(data, hp, model):
    _check_model(model)
    return tp_log_marginal_grad(data, hp) if model == "tp" else gp_log_marginal_grad(data, hp)


# ---------------------------------------------------------------------------
# predictive laws


@dataclass(frozen=True)
class PredictiveDist:
    """Student-t predictive: MVT(dof, mean, scale) in covariance form.

    `beta1` records the Mahalanobis norm of the training residual that
    produced the data-dependent scale factor (useful for diagnostics).
    """

    dof: float
    mean: np.ndarray
    scale: np.ndarray
    beta1: float

    @property
    def dim(self):
        return self.mean.shape[0]


@dataclass(frozen=True)
class GaussianPredictive:
    """Gaussian predictive law with mean vector and covariance matrix."""

    mean: np.ndarray
    cov: np.ndarray

    @property
    def dim(self):
        return self.mean.shape[0]


def _check_query(data, x_star):
    x_star = np.ascontiguousarray(x_star, dtype=np.float64)
    if x_star.ndim != 2 or x_star.shape[1] != data.input_dim:
        raise DimensionMismatch(
            f"query points must have shape (m, {data.input_dim}), got {x_star.shape}"
        )
    return x_star


def _predictive_parts(data, hp, x_star, include_observation_noise):
    """Schur-complement pieces shared by both predictive laws."""
    x_star = _check_query(data, x_star)
    k = hp.kernel
    lower, resid, beta, _ = _factored(data, hp)
    cross = kernels.gram_cross(k, data.x, x_star)
    star = kernels.gram_cross(k, x_star, x_star)
    if include_observation_noise and k.include_noise:
        idx = np.arange(x_star.shape[0])
        star[idx, idx] += k.noise
    alpha = chol_solve(lower, resid)
    mean = cross.T @ alpha + hp.mean_mu
    w = solve_lower(lower, cross)
    cov = star - w.T @ w
    cov = 0.5 * (cov + cov.T)
    return mean, cov, beta


def tp_predict(data, hp, x_star, include_observation_noise=True):
    """Exact Student-t predictive law at the query points.

    The returned degrees of freedom are nu + n and the covariance is the
    Gaussian Schur complement rescaled by (nu + beta1 - 2)/(nu + n - 2);
    this factor is what makes the predictive spread grow or shrink with
    the observed data, unlike the Gaussian case.
    """
    nu = _require_nu(hp)
    mean, cov, beta = _predictive_parts(data, hp, x_star, include_observation_noise)
    factor = (nu + beta - 2.0) / (nu + data.n - 2.0)
    return PredictiveDist(dof=nu + data.n, mean=mean, scale=factor * cov, beta1=beta)


def gp_predict(data, hp, x_star, include_observation_noise=True):
    """Exact Gaussian predictive law at the query points."""
    mean, cov, _ = _predictive_parts(data, hp, x_star, include_observation_noise)
    return GaussianPredictive(mean=mean, cov=cov)


def predict_marginals(data, hp, x_star, model, include_observation_noise=True):
    """Per-point predictive means and variances without the full covariance.

    Returns (mean, var, dof, beta1); dof and beta1 are None for the gp
    model.  Stationary kernels make the prior variance a constant, so
    only the cross-covariance block is ever formed — this is the fast
    path used by acquisition evaluation over large candidate sets.
    """
    _check_model(model)
    x_star = _check_query(data, x_star)
    k = hp.kernel
    lower, resid, beta, _ = _factored(data, hp)
    cross = kernels.gram_cross(k, data.x, x_star)
    prior_var = k.amplitude
    if include_observation_noise and k.include_noise:
        prior_var += k.noise
    white = solve_lower(lower, cross)
    var = prior_var - np.einsum("ij,ij->j", white, white)
    var = np.maximum(var, 0.0)
    alpha = chol_solve(lower, resid)
    mean = cross.T @ alpha + hp.mean_mu
    if model == "gp":
        return mean, var, None, None
    nu = _require_nu(hp)
    factor = (nu + beta - 2.0) / (nu + data.n - 2.0)
    return mean, factor * var, nu + data.n, beta


# ---------------------------------------------------------------------------
# evaluation metrics


@dataclass(frozen=True)
class Metrics:
    """Test-set summary: squared error and predictive log likelihoods.

    `log_likelihood` sums the per-point marginal predictive log
    densities; `joint_log_likelihood` scores the test vector under the
    full joint predictive (these differ for correlated predictions).
    """

    mse: float
    log_likelihood: float
    mean_log_likelihood: float
    joint_log_likelihood: float
    n_test: int


def evaluate_predictions(pred, y_test):
    """Compute :class:`Metrics` for a predictive law on held-out targets."""
    y_test = np.asarray(y_test, dtype=np.float64)
    if y_test.shape != (pred.dim,):
        raise DimensionMismatch(
            f"y_test shape {y_test.shape} does not match predictive dim {pred.dim}"
        )
    if not np.all(np.isfinite(y_test)):
        raise DomainError("y_test contains non-finite values")
    resid = y_test - pred.mean
    mse = float(np.mean(resid * resid))
    if isinstance(pred, PredictiveDist):
        var = np.diagonal(pred.scale)
        z = resid / np.sqrt(var)
        point_ll = student1_log_pdf(pred.dof, z) - 0.5 * np.log(var)
        joint = MvtParams(nu=pred.dof, phi=pred.mean, scale=pred.scale)
        joint_ll = mvt_log_pdf(joint, y_test)
    else:
        var = np.diagonal(pred.cov)
        point_ll = -0.5 * (np.log(2.0 * np.pi * var) + resid * resid / var)
        lower, _ = _chol_raw(pred.cov)
        white = solve_lower(lower, resid)
        joint_ll = -0.5 * (
            pred.dim * math.log(2.0 * math.pi)
            + 2.0 * float(np.sum(np.log(np.diagonal(lower))))
            + float(white @ white)
        )
    total = float(np.sum(point_ll))
    return Metrics(
        mse=mse,
        log_likelihood=total,
        mean_log_likelihood=total / pred.dim,
        joint_log_likelihood=float(joint_ll),
        n_test=pred.dim,
    )


# ---------------------------------------------------------------------------
# target standardization (affine transport of predictive laws)


def standardize_targets(y):
    """Center and scale targets; returns (scaled, shift, factor).

    The factor is floored so constant targets do not divide by zero.
    """
    y = np.asarray(y, dtype=np.float64)
    shift = float(np.mean(y))
    factor = float(np.std(y))
    if not np.isfinite(factor) or factor < 1e-12:
        factor = 1.0
    return (y - shift) / factor, shift, factor


def rescale_predictive(pred, shift, factor):
    """Map a predictive law through y -> factor * y + shift."""
    if factor <= 0.0 or not np.isfinite(factor) or not np.isfinite(shift):
        raise DomainError("factor must be positive and both arguments finite")
    if isinstance(pred, PredictiveDist):
        return PredictiveDist(
            dof=pred.dof,
            mean=pred.mean * factor + shift,
            scale=pred.scale * factor**2,
            beta1=pred.beta1,
        )
    return GaussianPredictive(mean=pred.mean * factor + shift, cov=pred.cov * factor**2)


# ---------------------------------------------------------------------------
# MAP fitting


@dataclass(frozen=True)
class MapConfig:
    """Settings for maximum-marginal-likelihood fitting."""

    restarts: int = 5
    maxiter: int = 200
    gtol: float = 1e-6
    perturb_scale: float = 0.5
    log_bound: float = 20.0
    nu_tilde_bounds: tuple = (-10.0, 20.0)

    def __post_init__(self):
        if self.restarts < 1:
            raise DomainError(f"restarts must be >= 1, got {self.restarts}")
        if self.maxiter < 1:
            raise DomainError(f"maxiter must be >= 1, got {self.maxiter}")


@dataclass(frozen=True)
class FitResult:
    """Best hyperparameters found plus optimizer diagnostics."""

    hyperparams: HyperParams
    log_marginal: float
    model: str
    iterations: int
    grad_norm: float
    restart_values: tuple
    converged: bool


def _vector_bounds(names, config):
    bounds = []
    for name in names:
        if name == "nu_tilde":
            bounds.append(config.nu_tilde_bounds)
        elif name == "mean_mu":
            bounds.append((None, None))
        else:
            bounds.append((-config.log_bound, config.log_bound))
    return bounds


def fit_map(data, template, model="tp", config=None, rng=None, priors=None):
    """Fit hyperparameters by maximizing the exact log marginal likelihood.

    With `priors` given the objective is the unnormalized log posterior
    (marginal likelihood plus prior density on the unconstrained
    coordinates), i.e. a true MAP fit; otherwise plain type-II maximum
    likelihood.  Runs L-BFGS-B from the template's packed vector plus
    ``config.restarts - 1`` Gaussian perturbations of it, and keeps the
    best finite optimum.  Gram matrices that fail to factorize during a
    line search contribute a large finite penalty so the search backs off
    instead of aborting.

    Raises AllRestartsFailed when no restart produces a finite optimum.
    """
    _check_model(model)
    config = config or MapConfig()
    names = hyper_vector_names(template, model)
    x0 = pack_hypers(template, model)
    bounds = _vector_bounds(names, config)
    if config.restarts > 1 and not isinstance(rng, RngHandle):
        raise DomainError("rng must be an RngHandle when restarts > 1")

    def objective(vec):
        try:
            hp = unpack_hypers(vec, template, model)
            value, grad = log_marginal_grad(data, hp, model)
        except (NotPositiveDefinite, OverflowError, DomainError):
            return _BAD_OBJECTIVE, np.zeros(len(vec))
        if priors is not None:
            value += priors.log_pdf(vec, names)
            grad = grad + priors.grad_log_pdf(vec, names)
        if not np.isfinite(value) or not np.all(np.isfinite(grad)):
            return _BAD_OBJECTIVE, np.zeros(len(vec))
        return -value, -grad

    best = None
    restart_values = []
    for k in range(config.restarts):
        if k == 0:
            start = x0
        else:
            noise = rng.derive(k).generator.standard_normal(x0.shape)
            start = x0 + config.perturb_scale * noise
        start = np.clip(
            start,
            [b[0] if b[0] is not None else -np.inf for b in bounds],
            [b[1] if b[1] is not None else np.inf for b in bounds],
        )
        result = optimize.minimize(
            objective,
            start,
            jac=True,
            method="L-BFGS-B",
            bounds=bounds,
            options={"maxiter": config.maxiter, "gtol": config.gtol},
        )
        if np.isfinite(result.fun) and result.fun < 0.5 * _BAD_OBJECTIVE:
            restart_values.append(float(-result.fun))
            if best is None or -result.fun > -best.fun:
                best = result
        else:
            restart_values.append(float("nan"))
    if best is None:
        raise AllRestartsFailed(
            f"all {config.restarts} optimizer restarts failed to find a finite optimum"
        )
    hp = unpack_hypers(best.x, template, model)
    return FitResult(
        hyperparams=hp,
        log_marginal=float(-best.fun),
        model=model,
        iterations=int(best.nit),
        grad_norm=float(np.max(np.abs(best.jac))),
        restart_values=tuple(restart_values),
        converged=bool(best.success),
    )


# ---------------------------------------------------------------------------
# slice sampling


@dataclass(frozen=True)
class NormalPrior:
    mean: float
    std: float

    def __post_init__(self):
        if not np.isfinite(self.mean) or not np.isfinite(self.std) or self.std <= 0.0:
            raise DomainError(f"invalid prior N({self.mean}, {self.std}^2)")

    def log_pdf(self, value):
        z = (value - self.mean) / self.std
        return -0.5 * z * z - math.log(self.std) - 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class HyperPriors:
    """Independent normal priors on the unconstrained coordinates."""

    log_amplitude: NormalPrior = NormalPrior(0.0, 1.0)
    log_lengthscale: NormalPrior = NormalPrior(0.0, 1.0)
    log_noise: NormalPrior = NormalPrior(0.0, 1.0)
    nu_tilde: NormalPrior = NormalPrior(0.0, 1.0)
    mean_mu: NormalPrior = NormalPrior(0.0, 10.0)

    def for_name(self, name):
        if name.startswith("log_lengthscale"):
            return self.log_lengthscale
        if name == "log_amplitude":
            return self.log_amplitude
        if name == "log_noise":
            return self.log_noise
        if name == "nu_tilde":
            return self.nu_tilde
        if name == "mean_mu":
            return self.mean_mu
        raise DomainError(f"no prior defined for coordinate {name!r}")

    def log_pdf(self, vec, names):
        return sum(self.for_name(n).log_pdf(v) for n, v in zip(names, vec))

    def grad_log_pdf(self, vec, names):
        priors = [self.for_name(n) for n in names]
        return np.array([-(v - p.mean) / p.std**2 for p, v in zip(priors, vec)])

    def widths(self, names):
        return np.array([self.for_name(n).std for n in names])


@dataclass(frozen=True)
class SliceDiagnostics:
    n_sweeps: int
    n_evals: int
    n_expansions: int
    n_shrinks: int


@dataclass(frozen=True)
class PosteriorSamples:
    """Hyperparameter draws plus the raw vectors and sampler diagnostics."""

    model: str
    names: tuple
    vectors: np.ndarray
    samples: tuple
    diagnostics: SliceDiagnostics


def slice_sample(log_density, x0, widths, count, rng, burn_in=0, thin=1, max_stepout=10):
    """Coordinate-wise slice sampler with linear step-out and shrinkage.

    `log_density` may return -inf (region of zero mass) but never NaN.
    Returns (samples, diagnostics) with samples of shape (count, dim).
    """
    x = np.array(x0, dtype=np.float64)
    widths = np.asarray(widths, dtype=np.float64)
    if widths.shape != x.shape or np.any(widths <= 0.0):
        raise DomainError("widths must be positive and match the state dimension")
    if count < 1 or burn_in < 0 or thin < 1:
        raise DomainError("count >= 1, burn_in >= 0, thin >= 1 required")
    gen = rng.generator if isinstance(rng, RngHandle) else rng

    evals = expansions = shrinks = 0

    def f(vec):
        nonlocal evals
        evals += 1
        value = log_density(vec)
        if math.isnan(value):
            raise NonFiniteDensity(f"log density returned NaN at {vec}")
        return value

    current = f(x)
    if not np.isfinite(current):
        raise DomainError("initial point has zero density")

    samples = np.empty((count, x.size))
    kept = 0
    total_sweeps = burn_in + count * thin
    for sweep in range(total_sweeps):
        for i in range(x.size):
            level = current + math.log(gen.uniform())
            w = widths[i]
            left = x[i] - w * gen.uniform()
            right = left + w
            trial = x.copy()
            for _ in range(max_stepout):
                trial[i] = left
                if f(trial) <= level:
                    break
                left -= w
                expansions += 1
            for _ in range(max_stepout):
                trial[i] = right
                if f(trial) <= level:
                    break
                right += w
                expansions += 1
            while True:
                candidate = gen.uniform(left, right)
                trial[i] = candidate
                value = f(trial)
                if value > level:
                    x[i] = candidate
                    current = value
                    break
                if candidate < x[i]:
                    left = candidate
                else:
                    right = candidate
                shrinks += 1
                if right - left < 1e-300:
                    break  # interval collapsed onto the current point
        if sweep >= burn_in and (sweep - burn_in) % thin == 0:
            samples[kept] = x
            kept += 1
    diag = SliceDiagnostics(
        n_sweeps=total_sweeps, n_evals=evals, n_expansions=expansions, n_shrinks=shrinks
    )
    return samples[:kept], diag


def sample_posterior(
    data,
    template,
    model="tp",
    priors=None,
    count=10,
    rng=None,
    burn_in=50,
    thin=2,
    include_likelihood=True,
    init=None,
):
    """Draw hyperparameter samples from the (log-space) posterior.

    With `include_likelihood=False` the sampler targets the prior alone,
    which is the standard self-check that the chain is correct.  Gram
    matrices that fail to factorize are treated as zero-density points.
    """
    _check_model(model)
    priors = priors or HyperPriors()
    if not isinstance(rng, RngHandle):
        raise DomainError("rng must be an RngHandle")
    names = hyper_vector_names(template, model)

    def log_density(vec):
        value = priors.log_pdf(vec, names)
        if include_likelihood:
            try:
                hp = unpack_hypers(vec, template, model)
                value += log_marginal(data, hp, model)
            except (NotPositiveDefinite, OverflowError, DomainError):
                return -np.inf
        return value

    x0 = pack_hypers(template, model) if init is None else np.asarray(init, dtype=np.float64)
    widths = priors.widths(names)
    vectors, diag = slice_sample(
        log_density, x0, widths, count, rng, burn_in=burn_in, thin=thin
    )
    hypers = tuple(unpack_hypers(v, template, model) for v in vectors)
    return PosteriorSamples(
        model=model, names=tuple(names), vectors=vectors, samples=hypers, diagnostics=diag
    )


# ---------------------------------------------------------------------------
# synthetic regression data


def generate_synthetic(kind, n_train, n_test, rng, input_dim=1, domain=(0.0, 10.0),
                       amplitude=1.0, lengthscale=1.0, noise_scale=0.1, t_dof=3.0):
    """Draw a latent function from a squared-exponential Gaussian process
    and corrupt it with either Gaussian noise ('a') or scaled Student-t
    noise with `t_dof` degrees of freedom ('b').

    Returns (train, test) datasets over uniformly random inputs.
    """
    if kind not in ("a", "b"):
        raise DomainError(f"kind must be 'a' or 'b', got {kind!r}")
    if n_train < 1 or n_test < 1:
        raise DomainError("n_train and n_test must be >= 1")
    gen = rng.generator if isinstance(rng, RngHandle) else rng
    total = n_train + n_test
    x = gen.uniform(domain[0], domain[1], size=(total, input_dim))
    k = kernels.KernelParams(
        family=kernels.SQUARED_EXPONENTIAL,
        amplitude=amplitude,
        lengthscales=np.full(input_dim, lengthscale),
    )
    gram = kernels.gram(k, x)
    idx = np.arange(total)
    gram[idx, idx] += 1e-10 * amplitude
    lower, _ = _chol_raw(gram)
    f = lower @ gen.standard_normal(total)
    if kind == "a":
        noise = noise_scale * gen.standard_normal(total)
    else:
        noise = noise_scale * gen.standard_t(t_dof, size=total)
    y = f + noise
    train = Dataset(x=x[:n_train], y=y[:n_train])
    test = Dataset(x=x[n_train:], y=y[n_train:])
    return train, test
