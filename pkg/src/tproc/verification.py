"""Distributional and analytical self-checks.

Each check compares a packaged computation against an independent oracle:
central finite differences for gradients, adaptive quadrature for expected
improvement, exact algebraic identities for the multivariate gamma
function, the Gaussian formulas for the large-dof limit, and
Kolmogorov-Smirnov tests for the sampling constructions.  Checks return
:class:`CheckResult` rows; the command-line `verify` command assembles
them into a report and the same functions back the acceptance tests.
"""

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import gammaln, multigammaln

from . import kernels, model
from .bayesopt import expected_improvement_gaussian, expected_improvement_student
from .distributions import (
    MvtParams,
    mv_gamma_ln,
    mvt_condition,
    mvt_log_pdf,
    mvt_marginal,
    student1_pdf,
    verify_eigen_sampler,
    verify_prior_equivalence,
)
from .exceptions import DomainError
from .numerics import RngHandle, _chol_raw


@dataclass(frozen=True)
class CheckResult:
    """One verification row: worst observed statistic against its threshold.

    `pvalue` is set only for KS-based checks; analytic checks pass when
    `statistic <= threshold`, KS checks when `pvalue > threshold`.
    """

    name: str
    statistic: float
    threshold: float
    passed: bool
    pvalue: float = None
    elapsed: float = 0.0


def _random_problem(rng, key, n_min=8, n_span=12):
    """A random kernel/data instance for gradient-style checks."""
    gen = rng.derive(key).generator
    family = kernels.SQUARED_EXPONENTIAL if key % 2 == 0 else kernels.MATERN52
    d = 1 + key % 3
    with_noise = bool(key % 4 != 0)
    amplitude = float(np.exp(0.3 * gen.standard_normal()))
    lengthscales = np.exp(0.3 * gen.standard_normal(d))
    if with_noise:
        n = n_min + int(gen.integers(n_span))
        x = gen.uniform(-2.0, 2.0, size=(n, d))
    else:
        # a noiseless Gram goes numerically singular when points nearly
        # collide, which poisons the finite-difference comparison; keep
        # the design small and pick the most spread-out draw
        n = 3 + key % 3
        x, best_sep = None, -np.inf
        for _ in range(200):
            trial = gen.uniform(-2.0, 2.0, size=(n, d))
            diff = (trial[:, None, :] - trial[None, :, :]) / lengthscales
            dist = np.sqrt(np.sum(diff * diff, axis=-1))
            sep = float(np.min(dist[np.triu_indices(n, 1)]))
            if sep > best_sep:
                x, best_sep = trial, sep
            if sep >= 0.5:
                break
    kp = kernels.KernelParams(
        family=family,
        amplitude=amplitude,
        lengthscales=lengthscales,
        noise=float(np.exp(0.3 * gen.standard_normal() - 2.0)) if with_noise else 0.0,
        include_noise=with_noise,
    )
    y = 2.0 * gen.standard_normal(n)
    nu = 2.0 + float(np.exp(0.5 * gen.standard_normal() + 0.8))
    mu = 0.5 * float(gen.standard_normal())
    data = model.Dataset(x=x, y=y)
    hp = model.HyperParams(kernel=kp, nu=nu, mean_mu=mu)
    return data, hp


def check_gradients(rng, problems=20, tolerance=1e-5, fd_step=1e-6):
    """Analytic log-marginal gradients against central finite differences."""
    start = time.time()
    worst = 0.0
    for key in range(problems):
        data, hp = _random_problem(rng, key)
        for mdl in ("tp", "gp"):
            _, grad = model.log_marginal_grad(data, hp, mdl)
            vec = model.pack_hypers(hp, mdl)
            for i in range(vec.size):
                vp, vm = vec.copy(), vec.copy()
                vp[i] += fd_step
                vm[i] -= fd_step
                fp = model.log_marginal(data, model.unpack_hypers(vp, hp, mdl), mdl)
                fm = model.log_marginal(data, model.unpack_hypers(vm, hp, mdl), mdl)
                fd = (fp - fm) / (2.0 * fd_step)
                rel = abs(fd - grad[i]) / max(1e-8, abs(fd), abs(grad[i]))
                worst = max(worst, rel)
    return CheckResult(
        name="gradient_vs_finite_difference",
        statistic=worst,
        threshold=tolerance,
        passed=worst <= tolerance,
        elapsed=time.time() - start,
    )


def check_chain_rule(rng, instances=100, tolerance=1e-8):
    """log p(y) == log p(y1) + log p(y2 | y1) for random joints and splits."""
    start = time.time()
    worst = 0.0
    for key in range(instances):
        gen = rng.derive(key).generator
        n = 2 + int(gen.integers(5))
        a = gen.standard_normal((n, n + 2))
        scale = a @ a.T / (n + 2) + 0.5 * np.eye(n)
        scale = 0.5 * (scale + scale.T)
        params = MvtParams(
            nu=2.0 + float(np.exp(gen.standard_normal())),
            phi=gen.standard_normal(n),
            scale=scale,
        )
        y = params.phi + gen.standard_normal(n)
        n1 = 1 + int(gen.integers(n - 1))
        joint = mvt_log_pdf(params, y)
        marginal = mvt_log_pdf(mvt_marginal(params, np.arange(n1)), y[:n1])
        conditional = mvt_log_pdf(mvt_condition(params, n1, y[:n1]), y[n1:])
        worst = max(worst, abs(joint - (marginal + conditional)))
    return CheckResult(
        name="conditional_chain_rule",
        statistic=worst,
        threshold=tolerance,
        passed=worst <= tolerance,
        elapsed=time.time() - start,
    )


def check_gp_limit(rng, problems=100, nu=1e6, tolerance=1e-3):
    """tp quantities converge to the gp ones as nu grows.

    Targets are drawn from the kernel's own prior so the Mahalanobis norm
    stays near n and the O(1/nu) error term stays small.
    """
    start = time.time()
    worst = 0.0
    for key in range(problems):
        data0, hp = _random_problem(rng, key)
        gen = rng.derive(10_000 + key).generator
        gram = kernels.gram(hp.kernel, data0.x)
        lower, _ = _chol_raw(gram)
        y = hp.mean_mu + lower @ gen.standard_normal(data0.n)
        data = model.Dataset(x=data0.x, y=y)
        hp_tp = model.HyperParams(kernel=hp.kernel, nu=nu, mean_mu=hp.mean_mu)
        hp_gp = model.HyperParams(kernel=hp.kernel, nu=None, mean_mu=hp.mean_mu)
        gap = abs(model.tp_log_marginal(data, hp_tp) - model.gp_log_marginal(data, hp_gp))
        x_star = gen.uniform(-2.0, 2.0, size=(4, data.input_dim))
        pt = model.tp_predict(data, hp_tp, x_star)
        pg = model.gp_predict(data, hp_gp, x_star)
        gap = max(
            gap,
            float(np.max(np.abs(pt.mean - pg.mean))),
            float(np.max(np.abs(pt.scale - pg.cov))),
        )
        worst = max(worst, gap)
    return CheckResult(
        name="gp_limit",
        statistic=worst,
        threshold=tolerance,
        passed=worst <= tolerance,
        elapsed=time.time() - start,
    )


def check_ei_quadrature(rng, cases=200, tolerance=1e-6, gaussian_limit_tolerance=1e-5,
                        corrupt_sign=False):
    """Closed-form expected improvement against adaptive quadrature.

    `corrupt_sign` deliberately negates the closed form; it exists so the
    report machinery itself can be shown to catch a failure.
    """
    start = time.time()
    gen = rng.generator
    worst = 0.0
    for _ in range(cases):
        best = float(gen.standard_normal())
        mean = float(gen.standard_normal())
        var = float(np.exp(gen.standard_normal()))
        dof = 3.2 + float(np.exp(1.5 * gen.standard_normal()))
        ei = float(expected_improvement_student(best, np.array([mean]), np.array([var]), dof)[0])
        if corrupt_sign:
            ei = -ei
        tau = math.sqrt(var)

        def integrand(y):
            return (best - y) * student1_pdf(dof, (y - mean) / tau) / tau

        target, _ = integrate.quad(integrand, -np.inf, best, limit=200)
        worst = max(worst, abs(ei - target) / max(abs(target), 1e-300))
    limit_worst = 0.0
    for _ in range(20):
        best = float(gen.standard_normal())
        mean = float(gen.standard_normal())
        var = float(np.exp(gen.standard_normal()))
        es = float(expected_improvement_student(best, np.array([mean]), np.array([var]), 1e6)[0])
        eg = float(expected_improvement_gaussian(best, np.array([mean]), np.array([var]))[0])
        limit_worst = max(limit_worst, abs(es - eg))
    elapsed = time.time() - start
    return [
        CheckResult(
            name="ei_vs_quadrature",
            statistic=worst,
            threshold=tolerance,
            passed=worst <= tolerance,
            elapsed=elapsed,
        ),
        CheckResult(
            name="ei_gaussian_limit",
            statistic=limit_worst,
            threshold=gaussian_limit_tolerance,
            passed=limit_worst <= gaussian_limit_tolerance,
            elapsed=0.0,
        ),
    ]


def check_mv_gamma(rng, max_dim=10, values=100, tolerance=1e-10):
    """Multivariate gamma identities and a library cross-check.

    Verifies the dimension recursion
    ``G_n(a) = pi^((n-1)/2) G(a) G_{n-1}(a - 1/2)``, the ratio identity
    ``G_n(a) - G_n(a - 1/2) = G(a) - G(a - n/2)`` (in logs), and
    agreement with scipy's multigammaln.
    """
    start = time.time()
    gen = rng.generator
    worst = 0.0
    for _ in range(values):
        n = 1 + int(gen.integers(max_dim))
        a = 0.5 * (n - 1) + 0.6 + float(np.exp(gen.standard_normal()))
        err = abs(mv_gamma_ln(n, a) - multigammaln(a, n))
        if n > 1:
            recursion = (
                0.5 * (n - 1) * math.log(math.pi)
                + float(gammaln(a))
                + mv_gamma_ln(n - 1, a - 0.5)
            )
            err = max(err, abs(mv_gamma_ln(n, a) - recursion))
        if a - 0.5 > 0.5 * (n - 1) and a - 0.5 * n > 0:
            ratio_mine = mv_gamma_ln(n, a) - mv_gamma_ln(n, a - 0.5)
            ratio_plain = float(gammaln(a) - gammaln(a - 0.5 * n))
            err = max(err, abs(ratio_mine - ratio_plain))
        worst = max(worst, err)
    return CheckResult(
        name="mv_gamma_identities",
        statistic=worst,
        threshold=tolerance,
        passed=worst <= tolerance,
        elapsed=time.time() - start,
    )


def check_prior_equivalence(rng, nu=5.0, dim=2, count=100_000, threshold=0.01):
    """KS agreement of the three MVT prior constructions."""
    start = time.time()
    report = verify_prior_equivalence(nu, np.eye(dim), count, rng, threshold=threshold)
    elapsed = time.time() - start
    return [
        CheckResult(
            name=f"prior_equivalence:{c.name}",
            statistic=c.statistic,
            threshold=c.threshold,
            passed=c.passed,
            pvalue=c.pvalue,
            elapsed=elapsed if i == 0 else 0.0,
        )
        for i, c in enumerate(report.checks)
    ]


def check_eigen_sampler(rng, nu=5.0, dim=4, count=10_000, threshold=0.01):
    """KS checks of the eigendecomposition inverse Wishart sampler."""
    start = time.time()
    report = verify_eigen_sampler(nu, dim, count, rng, threshold=threshold)
    elapsed = time.time() - start
    return [
        CheckResult(
            name=f"eigen_sampler:{c.name}",
            statistic=c.statistic,
            threshold=c.threshold,
            passed=c.passed,
            pvalue=c.pvalue,
            elapsed=elapsed if i == 0 else 0.0,
        )
        for i, c in enumerate(report.checks)
    ]


CHECK_NAMES = (
    "gradients",
    "chain_rule",
    "gp_limit",
    "ei_quadrature",
    "mv_gamma",
    "prior_equivalence",
    "eigen_sampler",
)


def run_battery(rng, settings):
    """Run the named checks and return their CheckResult rows.

    `settings` maps check names to keyword-argument dictionaries; every
    check gets its own derived substream so adding or removing one never
    shifts another's randomness.
    """
    unknown = set(settings) - set(CHECK_NAMES)
    if unknown:
        raise DomainError(f"unknown verification checks: {sorted(unknown)}")
    dispatch = {
        "gradients": check_gradients,
        "chain_rule": check_chain_rule,
        "gp_limit": check_gp_limit,
        "ei_quadrature": check_ei_quadrature,
        "mv_gamma": check_mv_gamma,
        "prior_equivalence": check_prior_equivalence,
        "eigen_sampler": check_eigen_sampler,
    }
    results = []
    for index, name in enumerate(CHECK_NAMES):
        if name not in settings:
            continue
        out = dispatch[name](rng.derive(100 + index), **settings[name])
        results.extend(out if isinstance(out, list) else [out])
    return results
