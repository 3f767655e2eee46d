"""Tests for MVT, Student-t, (inverse) Wishart and elliptical machinery.

Monte-Carlo assertions use fixed seeds so runs are reproducible; KS
thresholds are chosen loose enough that the pinned seeds pass with wide
margin.
"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import integrate, special, stats

from tproc.distributions import (
    EllipticalSpec,
    IwParams,
    MvtParams,
    elliptical_sample,
    iw_log_pdf,
    iw_sample,
    iwp_eigen_sample,
    mv_gamma_ln,
    mvt_condition,
    mvt_log_pdf,
    mvt_marginal,
    mvt_sample,
    student1_cdf,
    student1_log_pdf,
    student1_pdf,
    student1_ppf,
    theta_eigen_log_density,
    verify_eigen_sampler,
    verify_prior_equivalence,
    wishart_sample,
)
from tproc.exceptions import DimensionMismatch, DomainError
from tproc.numerics import RngHandle


def _random_spd(gen, n):
    a = gen.standard_normal((n, n))
    return a @ a.T + n * np.eye(n)


# ---------------------------------------------------------------------------
# mvt_log_pdf


def test_mvt_density_at_mode_nu3():
    # Univariate, unit variance, nu=3: density at the mean is 2/pi.
    p = MvtParams(3.0, np.zeros(1), np.eye(1))
    assert mvt_log_pdf(p, np.zeros(1)) == pytest.approx(math.log(2.0 / math.pi), rel=1e-14)


def test_mvt_matches_classical_parameterization():
    # With covariance K the classical shape matrix is (nu-2)/nu * K.
    gen = RngHandle(0).generator
    for _ in range(5):
        n = int(gen.integers(1, 5))
        K = _random_spd(gen, n)
        phi = gen.standard_normal(n)
        nu = float(gen.uniform(2.5, 15.0))
        y = gen.standard_normal(n)
        ours = mvt_log_pdf(MvtParams(nu, phi, K), y)
        ref = stats.multivariate_t(loc=phi, shape=(nu - 2.0) / nu * K, df=nu).logpdf(y)
        assert ours == pytest.approx(ref, abs=1e-12)


def test_mvt_matches_scale_mixture_quadrature():
    # Gaussian mixed over an inverse-gamma scale: y | r ~ N(0, r (nu-2) K),
    # r ~ InvGamma(nu/2, rate 1/2), here with K = I in two dimensions.
    nu = 5.0
    y = np.array([0.7, -1.2])

    def integrand(r):
        norm = math.exp(-float(y @ y) / (2.0 * (nu - 2.0) * r)) / (2.0 * math.pi * (nu - 2.0) * r)
        return norm * stats.invgamma.pdf(r, a=nu / 2.0, scale=0.5)

    target, err = integrate.quad(integrand, 0.0, np.inf, limit=200)
    assert err < 1e-7
    got = math.exp(mvt_log_pdf(MvtParams(nu, np.zeros(2), np.eye(2)), y))
    assert got == pytest.approx(target, rel=1e-6)


def test_mvt_gaussian_limit():
    gen = RngHandle(1).generator
    K = _random_spd(gen, 3)
    phi = gen.standard_normal(3)
    y = gen.standard_normal(3)
    big = mvt_log_pdf(MvtParams(1e8, phi, K), y)
    gauss = stats.multivariate_normal(mean=phi, cov=K).logpdf(y)
    assert big == pytest.approx(gauss, abs=1e-5)


def test_mvt_params_validation():
    with pytest.raises(DomainError):
        MvtParams(2.0, np.zeros(1), np.eye(1))
    with pytest.raises(DomainError):
        MvtParams(float("nan"), np.zeros(1), np.eye(1))
    with pytest.raises(DimensionMismatch):
        MvtParams(3.0, np.zeros(2), np.eye(3))
    with pytest.raises(DimensionMismatch):
        MvtParams(3.0, np.zeros(0), np.eye(0))


def test_mvt_log_pdf_observation_validation():
    p = MvtParams(3.0, np.zeros(2), np.eye(2))
    with pytest.raises(DimensionMismatch):
        mvt_log_pdf(p, np.zeros(3))
    with pytest.raises(DomainError):
        mvt_log_pdf(p, np.array([np.nan, 0.0]))


# ---------------------------------------------------------------------------
# mvt_condition


def test_condition_hand_case():
    K = np.array([[2.0, 0.3, 0.1], [0.3, 1.5, 0.4], [0.1, 0.4, 1.2]])
    phi = np.array([0.5, -1.0, 2.0])
    p = MvtParams(5.0, phi, K)
    y1 = np.array([1.3])
    cond = mvt_condition(p, 1, y1)

    K11, K21, K22 = K[:1, :1], K[1:, :1], K[1:, 1:]
    resid = y1 - phi[:1]
    beta1 = float(resid @ np.linalg.solve(K11, resid))
    schur = K22 - K21 @ np.linalg.solve(K11, K21.T)
    assert cond.nu == pytest.approx(6.0)
    assert_allclose(cond.phi, phi[1:] + (K21 @ np.linalg.solve(K11, resid)).ravel(), rtol=1e-14)
    assert_allclose(cond.scale, (5.0 + beta1 - 2.0) / (5.0 + 1.0 - 2.0) * schur, rtol=1e-13)


def test_condition_unit_mahalanobis_gives_schur_exactly():
    # When beta1 equals n1 the scale factor is exactly one.
    K = np.array([[2.0, 0.3], [0.3, 1.5]])
    p = MvtParams(5.0, np.zeros(2), K)
    y1 = np.array([math.sqrt(2.0)])
    cond = mvt_condition(p, 1, y1)
    schur = K[1:, 1:] - K[1:, :1] @ np.linalg.solve(K[:1, :1], K[:1, 1:])
    assert_allclose(cond.scale, schur, rtol=1e-13)


def test_condition_block_diagonal_keeps_mean():
    K = np.diag([2.0, 3.0, 4.0])
    phi = np.array([1.0, -2.0, 0.5])
    p = MvtParams(4.0, phi, K)
    cond = mvt_condition(p, 1, np.array([2.0]))
    assert_allclose(cond.phi, phi[1:], atol=0.0)
    beta1 = (2.0 - 1.0) ** 2 / 2.0
    factor = (4.0 + beta1 - 2.0) / (4.0 + 1.0 - 2.0)
    assert_allclose(cond.scale, factor * K[1:, 1:], rtol=1e-14)


def test_condition_chain_rule():
    # Conditioning on (y1, y2) jointly equals conditioning sequentially.
    gen = RngHandle(2).generator
    for _ in range(20):
        n = int(gen.integers(3, 7))
        K = _random_spd(gen, n)
        phi = gen.standard_normal(n)
        nu = float(gen.uniform(2.5, 12.0))
        y = gen.standard_normal(n)
        p = MvtParams(nu, phi, K)
        joint = mvt_condition(p, 2, y[:2])
        step = mvt_condition(mvt_condition(p, 1, y[:1]), 1, y[1:2])
        assert joint.nu == pytest.approx(step.nu, rel=1e-12)
        assert_allclose(joint.phi, step.phi, rtol=1e-8, atol=1e-10)
        assert_allclose(joint.scale, step.scale, rtol=1e-8, atol=1e-10)


def test_condition_validation():
    p = MvtParams(5.0, np.zeros(3), np.eye(3))
    with pytest.raises(DimensionMismatch):
        mvt_condition(p, 0, np.zeros(0))
    with pytest.raises(DimensionMismatch):
        mvt_condition(p, 3, np.zeros(3))
    with pytest.raises(DimensionMismatch):
        mvt_condition(p, 1, np.zeros(2))
    with pytest.raises(DomainError):
        mvt_condition(p, 1, np.array([np.inf]))


# ---------------------------------------------------------------------------
# mvt_marginal


def test_marginal_selects_blocks():
    K = np.array([[2.0, 0.3, 0.1], [0.3, 1.5, 0.4], [0.1, 0.4, 1.2]])
    phi = np.array([0.5, -1.0, 2.0])
    p = MvtParams(5.0, phi, K)
    marg = mvt_marginal(p, [0, 2])
    assert marg.nu == 5.0
    assert_allclose(marg.phi, phi[[0, 2]], atol=0.0)
    assert_allclose(marg.scale, K[np.ix_([0, 2], [0, 2])], atol=0.0)


def test_marginal_full_is_identity():
    p = MvtParams(4.0, np.array([1.0, 2.0]), np.array([[2.0, 0.5], [0.5, 1.0]]))
    marg = mvt_marginal(p, [0, 1])
    assert_allclose(marg.phi, p.phi, atol=0.0)
    assert_allclose(marg.scale, p.scale, atol=0.0)


def test_marginal_coordinate_distribution():
    # A coordinate of a joint draw follows the univariate marginal.
    K = np.array([[2.0, 0.8], [0.8, 1.0]])
    p = MvtParams(5.0, np.array([0.5, -0.5]), K)
    ys = mvt_sample(p, 4000, RngHandle(3))
    z = (ys[:, 0] - 0.5) / math.sqrt(K[0, 0])
    res = stats.ks_1samp(z, lambda t: np.array([student1_cdf(5.0, v) for v in np.atleast_1d(t)]))
    assert res.pvalue > 0.01


def test_marginal_validation():
    p = MvtParams(5.0, np.zeros(3), np.eye(3))
    with pytest.raises(DomainError):
        mvt_marginal(p, [0, 0])
    with pytest.raises(DomainError):
        mvt_marginal(p, [0, 3])
    with pytest.raises(DimensionMismatch):
        mvt_marginal(p, [])


# ---------------------------------------------------------------------------
# mvt_sample


def test_mvt_sample_moments():
    gen = RngHandle(4).generator
    K = _random_spd(gen, 3)
    phi = np.array([1.0, -2.0, 0.0])
    p = MvtParams(8.0, phi, K)
    ys = mvt_sample(p, 200_000, RngHandle(5))
    assert ys.shape == (200_000, 3)
    scale = math.sqrt(float(np.max(K)))
    assert np.max(np.abs(ys.mean(axis=0) - phi)) < 0.02 * scale
    emp = np.cov(ys.T)
    assert np.max(np.abs(emp - K)) / np.max(np.abs(K)) < 0.05


def test_mvt_sample_mahalanobis_mean():
    # E[(y-phi)^T K^-1 (y-phi)] = n under the covariance parameterization.
    p = MvtParams(20.0, np.zeros(4), np.eye(4))
    ys = mvt_sample(p, 20_000, RngHandle(5))
    beta = np.sum(ys * ys, axis=1)
    assert abs(beta.mean() - 4.0) < 0.08


def test_mvt_sample_gaussian_limit():
    p = MvtParams(1e7, np.zeros(1), np.eye(1))
    ys = mvt_sample(p, 4000, RngHandle(6))
    res = stats.ks_1samp(ys[:, 0], stats.norm.cdf)
    assert res.pvalue > 0.01


def test_mvt_sample_deterministic():
    p = MvtParams(5.0, np.zeros(2), np.eye(2))
    a = mvt_sample(p, 16, RngHandle(7))
    b = mvt_sample(p, 16, RngHandle(7))
    assert np.array_equal(a, b)
    with pytest.raises(DomainError):
        mvt_sample(p, 0, RngHandle(7))


# ---------------------------------------------------------------------------
# univariate student helpers


def test_student1_density_at_zero_nu3():
    assert student1_pdf(3.0, 0.0) == pytest.approx(2.0 / math.pi, rel=1e-14)
    assert student1_log_pdf(3.0, 0.0) == pytest.approx(math.log(2.0 / math.pi), rel=1e-14)


def test_student1_cdf_center_and_symmetry():
    assert student1_cdf(5.0, 0.0) == pytest.approx(0.5, rel=1e-14)
    for z in (0.3, 1.7, 4.0):
        assert student1_cdf(5.0, -z) == pytest.approx(1.0 - student1_cdf(5.0, z), rel=1e-12)
        assert student1_pdf(5.0, -z) == pytest.approx(student1_pdf(5.0, z), rel=1e-14)


def test_student1_density_normalized_with_unit_variance():
    for nu in (2.5, 4.0, 30.0):
        mass, err = integrate.quad(lambda z: student1_pdf(nu, z), -np.inf, np.inf)
        assert mass == pytest.approx(1.0, abs=1e-8)
        var, err = integrate.quad(lambda z: z * z * student1_pdf(nu, z), -np.inf, np.inf)
        assert var == pytest.approx(1.0, abs=1e-7)


def test_student1_cdf_derivative_is_pdf():
    h = 1e-6
    for z in (-2.0, -0.4, 0.0, 0.9, 3.1):
        fd = (student1_cdf(4.0, z + h) - student1_cdf(4.0, z - h)) / (2.0 * h)
        assert fd == pytest.approx(student1_pdf(4.0, z), rel=1e-6)


def test_student1_ppf_roundtrip():
    for q in (0.01, 0.25, 0.5, 0.9, 0.975, 0.999):
        z = student1_ppf(6.0, q)
        assert student1_cdf(6.0, z) == pytest.approx(q, abs=1e-12)


def test_student1_domain_errors():
    with pytest.raises(DomainError):
        student1_pdf(2.0, 0.0)
    with pytest.raises(DomainError):
        student1_ppf(5.0, 0.0)
    with pytest.raises(DomainError):
        student1_ppf(5.0, 1.0)


# ---------------------------------------------------------------------------
# inverse Wishart density


def test_iw_log_pdf_univariate_is_inverse_gamma():
    # 1x1 case: sigma ~ InvGamma(shape nu/2, scale k/2).
    nu, k = 5.0, 1.7
    params = IwParams(nu, np.array([[k]]))
    for sig in (0.3, 1.0, 2.5):
        ours = iw_log_pdf(params, np.array([[sig]]))
        ref = stats.invgamma.logpdf(sig, a=nu / 2.0, scale=k / 2.0)
        assert ours == pytest.approx(ref, abs=1e-10)


def test_iw_log_pdf_univariate_mode():
    nu, k = 6.0, 2.0
    params = IwParams(nu, np.array([[k]]))
    mode = k / (nu + 2.0)
    at_mode = iw_log_pdf(params, np.array([[mode]]))
    for eps in (0.9, 1.1):
        assert iw_log_pdf(params, np.array([[mode * eps]])) < at_mode


def test_iw_log_pdf_univariate_normalized():
    nu, k = 5.0, 1.3
    params = IwParams(nu, np.array([[k]]))
    mass, err = integrate.quad(lambda s: math.exp(iw_log_pdf(params, np.array([[s]]))), 0.0, np.inf)
    assert mass == pytest.approx(1.0, abs=1e-6)


def test_iw_validation():
    with pytest.raises(DomainError):
        IwParams(2.0, np.eye(2))
    p = IwParams(5.0, np.eye(2))
    with pytest.raises(DimensionMismatch):
        iw_log_pdf(p, np.eye(3))


# ---------------------------------------------------------------------------
# Wishart sampling


def test_wishart_mean():
    gen = RngHandle(8).generator
    scale = _random_spd(gen, 2)
    draws = wishart_sample(6.0, scale, RngHandle(9), size=20_000)
    assert draws.shape == (20_000, 2, 2)
    assert np.max(np.abs(draws.mean(axis=0) - 6.0 * scale)) / np.max(np.abs(scale)) < 0.05 * 6.0


def test_wishart_univariate_is_scaled_chi2():
    draws = wishart_sample(7.0, np.array([[2.0]]), RngHandle(3), size=4000)
    res = stats.ks_1samp(draws[:, 0, 0], lambda x: stats.chi2.cdf(x / 2.0, df=7.0))
    assert res.pvalue > 0.01


def test_wishart_draws_are_spd():
    draws = wishart_sample(5.0, np.eye(3), RngHandle(10), size=200)
    for m in draws[:20]:
        assert np.all(np.linalg.eigvalsh(m) > 0.0)
        assert_allclose(m, m.T, atol=0.0)


def test_wishart_validation():
    with pytest.raises(DomainError):
        wishart_sample(1.0, np.eye(2), RngHandle(0))
    with pytest.raises(DomainError):
        wishart_sample(5.0, np.eye(2), RngHandle(0), size=0)


# ---------------------------------------------------------------------------
# inverse Wishart sampling


def test_iw_sample_univariate_matches_inverse_gamma():
    draws = iw_sample(IwParams(5.0, np.array([[1.7]])), RngHandle(6), size=4000)
    res = stats.ks_1samp(draws[:, 0, 0], stats.invgamma(a=2.5, scale=0.85).cdf)
    assert res.pvalue > 0.01


def test_iw_sample_mean_is_base_over_nu_minus_two():
    base = np.array([[2.0, 0.6], [0.6, 1.0]])
    draws = iw_sample(IwParams(6.0, base), RngHandle(4), size=30_000)
    assert np.max(np.abs(draws.mean(axis=0) - base / 4.0)) / np.max(base / 4.0) < 0.05


def test_iw_sample_marginal_consistency():
    # The (0,0) entry of a 2x2 draw matches a 1x1 draw with base k00.
    base = np.array([[2.0, 0.6], [0.6, 1.0]])
    joint = iw_sample(IwParams(5.0, base), RngHandle(11), size=4000)
    single = iw_sample(IwParams(5.0, base[:1, :1]), RngHandle(12), size=4000)
    res = stats.ks_2samp(joint[:, 0, 0], single[:, 0, 0])
    assert res.pvalue > 0.01


def test_iw_sample_deterministic():
    p = IwParams(5.0, np.eye(2))
    a = iw_sample(p, RngHandle(13), size=5)
    b = iw_sample(p, RngHandle(13), size=5)
    assert np.array_equal(a, b)
    single = iw_sample(p, RngHandle(13))
    assert single.shape == (2, 2)


# ---------------------------------------------------------------------------
# eigen-decomposition IWP sampler


def test_iwp_eigen_structure():
    out = iwp_eigen_sample(5.0, 3, RngHandle(7), size=64)
    assert out.q.shape == (64, 3, 3)
    assert out.lam.shape == (64, 3)
    assert np.all(out.lam > 0.0)
    assert np.all(np.diff(out.lam, axis=1) <= 0.0)
    prods = out.q @ np.transpose(out.q, (0, 2, 1))
    assert_allclose(prods, np.broadcast_to(np.eye(3), (64, 3, 3)), atol=1e-10)


def test_iwp_eigen_reconstruction_matches_iw():
    out = iwp_eigen_sample(5.0, 3, RngHandle(7), size=3000)
    sigma = np.einsum("kij,kj,klj->kil", out.q, out.lam, out.q)
    direct = iw_sample(IwParams(5.0, np.eye(3)), RngHandle(8), size=3000)
    res = stats.ks_2samp(sigma[:, 0, 0], direct[:, 0, 0])
    assert res.pvalue > 0.01


def test_iwp_eigen_diagonal_exchangeable():
    # Haar rotation makes every diagonal entry identically distributed.
    out = iwp_eigen_sample(5.0, 3, RngHandle(7), size=3000)
    sigma = np.einsum("kij,kj,klj->kil", out.q, out.lam, out.q)
    res = stats.ks_2samp(sigma[:, 0, 0], sigma[:, 1, 1])
    assert res.pvalue > 0.01


def test_iwp_eigen_univariate_is_inverse_gamma():
    out = iwp_eigen_sample(5.0, 1, RngHandle(14), size=4000)
    res = stats.ks_1samp(out.lam[:, 0], stats.invgamma(a=2.5, scale=0.5).cdf)
    assert res.pvalue > 0.01


def test_iwp_eigen_validation():
    with pytest.raises(DomainError):
        iwp_eigen_sample(5.0, 0, RngHandle(0))
    with pytest.raises(DomainError):
        iwp_eigen_sample(2.0, 2, RngHandle(0))


# ---------------------------------------------------------------------------
# joint eigenvalue density


def test_theta_eigen_ties_have_zero_density():
    assert theta_eigen_log_density(5.0, np.array([1.0, 1.0])) == -np.inf


def test_theta_eigen_matches_iw_density_with_repulsion():
    # theta(lam) = iw_log_pdf(diag lam; nu, I) + sum log|lam_i - lam_j| + const,
    # so the difference of the two paths is constant in lam.
    gen = RngHandle(0).generator
    nu = 5.0
    offsets = []
    for _ in range(6):
        lam = np.sort(gen.uniform(0.1, 3.0, size=3))[::-1]
        rep = sum(
            math.log(abs(lam[i] - lam[j])) for i in range(3) for j in range(i + 1, 3)
        )
        diff = theta_eigen_log_density(nu, lam) - rep - iw_log_pdf(IwParams(nu, np.eye(3)), np.diag(lam))
        offsets.append(diff)
    assert np.max(offsets) - np.min(offsets) < 1e-10


def test_theta_eigen_validation():
    with pytest.raises(DomainError):
        theta_eigen_log_density(5.0, np.array([1.0, -1.0]))
    with pytest.raises(DimensionMismatch):
        theta_eigen_log_density(5.0, np.zeros((2, 2)))


# ---------------------------------------------------------------------------
# elliptical construction


def test_elliptical_gaussian_matches_normal():
    spec = EllipticalSpec("gaussian", np.zeros(1), np.eye(1))
    draws = elliptical_sample(spec, 4000, RngHandle(11))
    res = stats.ks_1samp(draws[:, 0], stats.norm.cdf)
    assert res.pvalue > 0.01


def test_elliptical_student_radii_match_mvt():
    spec = EllipticalSpec("student", np.zeros(2), np.eye(2), nu=5.0)
    ell = elliptical_sample(spec, 4000, RngHandle(9))
    mvt = mvt_sample(MvtParams(5.0, np.zeros(2), np.eye(2)), 4000, RngHandle(10))
    res = stats.ks_2samp(np.sum(ell**2, axis=1), np.sum(mvt**2, axis=1))
    assert res.pvalue > 0.01


def test_elliptical_location_shift():
    mu = np.array([3.0, -2.0])
    spec = EllipticalSpec("student", mu, np.eye(2), nu=6.0)
    draws = elliptical_sample(spec, 50_000, RngHandle(15))
    assert np.max(np.abs(draws.mean(axis=0) - mu)) < 0.05


def test_elliptical_spec_validation():
    with pytest.raises(DomainError):
        EllipticalSpec("cauchy", np.zeros(1), np.eye(1))
    with pytest.raises(DomainError):
        EllipticalSpec("student", np.zeros(1), np.eye(1))  # missing nu
    with pytest.raises(DomainError):
        EllipticalSpec("gaussian", np.zeros(1), np.eye(1), nu=5.0)
    with pytest.raises(DimensionMismatch):
        EllipticalSpec("gaussian", np.zeros(2), np.eye(3))


# ---------------------------------------------------------------------------
# multivariate gamma


def test_mv_gamma_dim_one_is_lgamma():
    for a in (0.7, 1.0, 3.5, 10.0):
        assert mv_gamma_ln(1, a) == pytest.approx(math.lgamma(a), rel=1e-14)


def test_mv_gamma_dim_two_hand_formula():
    a = 2.5
    expected = 0.5 * math.log(math.pi) + math.lgamma(a) + math.lgamma(a - 0.5)
    assert mv_gamma_ln(2, a) == pytest.approx(expected, rel=1e-14)


def test_mv_gamma_recursion():
    # Gamma_n(a) = pi^{(n-1)/2} Gamma(a) Gamma_{n-1}(a - 1/2).
    for n in range(2, 9):
        for a in (0.5 * (n - 1) + 0.3, 0.5 * n, 4.0 + n):
            lhs = mv_gamma_ln(n, a)
            rhs = 0.5 * (n - 1) * math.log(math.pi) + math.lgamma(a) + mv_gamma_ln(n - 1, a - 0.5)
            assert lhs == pytest.approx(rhs, abs=1e-10)


def test_mv_gamma_matches_scipy():
    for n in (1, 2, 5, 10):
        for a in (0.5 * (n - 1) + 0.25, 3.0 + n):
            assert mv_gamma_ln(n, a) == pytest.approx(special.multigammaln(a, n), abs=1e-12)


def test_mv_gamma_validation():
    with pytest.raises(DomainError):
        mv_gamma_ln(0, 1.0)
    with pytest.raises(DomainError):
        mv_gamma_ln(3, 1.0)  # needs a > 1


# ---------------------------------------------------------------------------
# distributional verifiers


def test_verify_prior_equivalence_bivariate():
    report = verify_prior_equivalence(5.0, np.eye(2), 20_000, RngHandle(2))
    assert report.dim == 2
    assert len(report.checks) == 9
    assert all(c.passed for c in report.checks)
    assert all(c.pvalue > c.threshold for c in report.checks)


def test_verify_prior_equivalence_univariate():
    report = verify_prior_equivalence(5.0, np.array([[2.0]]), 20_000, RngHandle(2))
    assert len(report.checks) == 6
    assert all(c.passed for c in report.checks)


def test_verify_prior_equivalence_validation():
    with pytest.raises(DomainError):
        verify_prior_equivalence(5.0, np.eye(2), 50, RngHandle(0))
    with pytest.raises(DomainError):
        verify_prior_equivalence(5.0, np.eye(2), 1000, np.random.default_rng(0))


def test_verify_eigen_sampler():
    report = verify_eigen_sampler(5.0, 4, 5000, RngHandle(2))
    names = [c.name for c in report.checks]
    assert names == ["eigen:diag_marginal", "eigen:radial"]
    assert all(c.passed for c in report.checks)
