"""Configuration loading and strict materialization.

Configs are YAML mappings.  Materialization fills in every default, type-
checks every value, and rejects unknown keys outright (a misspelled key
silently falling back to a default is the classic way to invalidate an
experiment).  The materialized dictionary is what gets echoed next to the
outputs and hashed into every file preamble, so a run is fully described
by (materialized config, seed).
"""

import numpy as np
import yaml

from . import kernels
from .exceptions import ConfigError
from .model import MODELS
from .verification import CHECK_NAMES

COMMANDS = ("regress", "optimize", "sample", "verify")


def load_config(path):
    """Parse a YAML config file into a mapping."""
    try:
        with open(path) as handle:
            raw = yaml.safe_load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {path} is not valid YAML: {exc}") from None
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path} must be a mapping, got {type(raw).__name__}")
    return raw


class _Section:
    """A mapping being consumed key by key; leftovers are errors."""

    def __init__(self, mapping, context):
        if mapping is None:
            mapping = {}
        if not isinstance(mapping, dict):
            raise ConfigError(f"{context} must be a mapping, got {type(mapping).__name__}")
        self._data = dict(mapping)
        self._context = context

    def child(self, key):
        return _Section(self._data.pop(key, {}), f"{self._context}.{key}")

    def take(self, key, default, kind):
        if key not in self._data:
            value = default
        else:
            value = self._data.pop(key)
        return _coerce(value, kind, f"{self._context}.{key}")

    def finish(self):
        if self._data:
            unknown = ", ".join(sorted(self._data))
            raise ConfigError(f"unknown key(s) in {self._context}: {unknown}")


def _coerce(value, kind, context):
    if kind == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{context} must be an integer, got {value!r}")
        return int(value)
    if kind == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{context} must be a number, got {value!r}")
        value = float(value)
        if not np.isfinite(value):
            raise ConfigError(f"{context} must be finite, got {value!r}")
        return value
    if kind == "bool":
        if not isinstance(value, bool):
            raise ConfigError(f"{context} must be true or false, got {value!r}")
        return value
    if kind == "str":
        if not isinstance(value, str):
            raise ConfigError(f"{context} must be a string, got {value!r}")
        return value
    if kind == "str_or_none":
        if value is not None and not isinstance(value, str):
            raise ConfigError(f"{context} must be a string or null, got {value!r}")
        return value
    if kind == "str_list":
        if isinstance(value, str):
            value = [value]
        if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
            raise ConfigError(f"{context} must be a list of strings, got {value!r}")
        return list(value)
    if kind == "pair":
        if (
            not isinstance(value, (list, tuple))
            or len(value) != 2
            or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in value)
        ):
            raise ConfigError(f"{context} must be a [number, number] pair, got {value!r}")
        return [float(value[0]), float(value[1])]
    if kind == "float_or_list":
        if isinstance(value, bool):
            raise ConfigError(f"{context} must be a number or list, got {value!r}")
        if isinstance(value, (int, float)):
            return float(value)
        if isinstance(value, list) and value and all(
            not isinstance(v, bool) and isinstance(v, (int, float)) for v in value
        ):
            return [float(v) for v in value]
        raise ConfigError(f"{context} must be a number or list of numbers, got {value!r}")
    raise ValueError(f"unknown coercion kind {kind}")


def _positive(value, context):
    if value <= 0:
        raise ConfigError(f"{context} must be positive, got {value}")
    return value


def _choice(value, allowed, context):
    if value not in allowed:
        raise ConfigError(f"{context} must be one of {sorted(allowed)}, got {value!r}")
    return value


def _priors_section(section, defaults):
    out = {}
    for name, default in defaults.items():
        pair = section.take(name, list(default), "pair")
        if pair[1] <= 0:
            raise ConfigError(f"prior {name} must have positive std, got {pair[1]}")
        out[name] = pair
    section.finish()
    return out


_REGRESS_PRIORS = {
    "log_amplitude": (0.0, 1.0),
    "log_lengthscale": (0.0, 1.0),
    "log_noise": (0.0, 1.0),
    "nu_tilde": (0.0, 1.0),
    "mean_mu": (0.0, 10.0),
}

_BO_PRIORS = {
    "log_amplitude": (0.0, 1.0),
    "log_lengthscale": (-1.0, 1.0),
    "log_noise": (-6.0, 1.0),
    "nu_tilde": (0.0, 1.0),
    "mean_mu": (0.0, 1.0),
}


def _kernel_section(section, default_family, amplitude=1.0, lengthscales=1.0,
                    noise=0.1, include_noise=True):
    out = {
        "family": _choice(
            section.take("family", default_family, "str"), kernels.FAMILIES, "kernel.family"
        ),
        "amplitude": _positive(section.take("amplitude", amplitude, "float"), "kernel.amplitude"),
        "lengthscales": section.take("lengthscales", lengthscales, "float_or_list"),
        "noise": section.take("noise", noise, "float"),
        "include_noise": section.take("include_noise", include_noise, "bool"),
    }
    ls = out["lengthscales"]
    for v in ls if isinstance(ls, list) else [ls]:
        _positive(v, "kernel.lengthscales")
    if out["include_noise"]:
        _positive(out["noise"], "kernel.noise")
    elif out["noise"] < 0:
        raise ConfigError("kernel.noise must be >= 0")
    section.finish()
    return out


def materialize_regress(raw):
    top = _Section(raw, "regress config")
    seed = top.take("seed", 0, "int")
    if seed < 0:
        raise ConfigError("seed must be >= 0")

    data = top.child("data")
    source = _choice(
        data.take("source", "synthetic_b", "str"),
        ("synthetic_a", "synthetic_b", "csv"),
        "data.source",
    )
    data_out = {
        "source": source,
        "path": data.take("path", None, "str_or_none"),
        "n_train": _positive(data.take("n_train", 80, "int"), "data.n_train"),
        "n_test": _positive(data.take("n_test", 20, "int"), "data.n_test"),
        "replications": _positive(data.take("replications", 100, "int"), "data.replications"),
        "input_dim": _positive(data.take("input_dim", 1, "int"), "data.input_dim"),
        "domain": data.take("domain", [0.0, 10.0], "pair"),
        "amplitude": _positive(data.take("amplitude", 1.0, "float"), "data.amplitude"),
        "lengthscale": _positive(data.take("lengthscale", 1.0, "float"), "data.lengthscale"),
        "noise_scale": _positive(data.take("noise_scale", 0.1, "float"), "data.noise_scale"),
        "t_dof": _positive(data.take("t_dof", 3.0, "float"), "data.t_dof"),
        "test_fraction": data.take("test_fraction", 0.2, "float"),
    }
    if data_out["domain"][0] >= data_out["domain"][1]:
        raise ConfigError("data.domain must be [low, high] with low < high")
    if not 0.0 < data_out["test_fraction"] < 1.0:
        raise ConfigError("data.test_fraction must lie in (0, 1)")
    if source == "csv" and not data_out["path"]:
        raise ConfigError("data.path is required when data.source is csv")
    data.finish()

    models = top.take("models", ["tp", "gp"], "str_list")
    for m in models:
        _choice(m, MODELS, "models")
    if len(set(models)) != len(models) or not models:
        raise ConfigError("models must be a non-empty list without duplicates")

    kernel = _kernel_section(top.child("kernel"), kernels.SQUARED_EXPONENTIAL)

    inference = top.child("inference")
    method = _choice(inference.take("method", "map", "str"), ("map", "slice"), "inference.method")
    inference_out = {
        "method": method,
        "use_priors": inference.take("use_priors", True, "bool"),
        "restarts": _positive(inference.take("restarts", 5, "int"), "inference.restarts"),
        "maxiter": _positive(inference.take("maxiter", 200, "int"), "inference.maxiter"),
        "h_samples": _positive(inference.take("h_samples", 10, "int"), "inference.h_samples"),
        "burn_in": inference.take("burn_in", 50, "int"),
        "thin": _positive(inference.take("thin", 2, "int"), "inference.thin"),
    }
    if inference_out["burn_in"] < 0:
        raise ConfigError("inference.burn_in must be >= 0")
    inference.finish()

    priors = _priors_section(top.child("priors"), _REGRESS_PRIORS)

    out = {
        "seed": seed,
        "data": data_out,
        "models": models,
        "kernel": kernel,
        "inference": inference_out,
        "priors": priors,
        "standardize": top.take("standardize", True, "bool"),
        "include_observation_noise": top.take("include_observation_noise", True, "bool"),
    }
    top.finish()
    return out


def materialize_optimize(raw):
    top = _Section(raw, "optimize config")
    seed = top.take("seed", 0, "int")
    if seed < 0:
        raise ConfigError("seed must be >= 0")
    problem = _choice(
        top.take("problem", "sinusoidal", "str"),
        ("sinusoidal", "branin", "hartmann6"),
        "problem",
    )
    surrogates = top.take("surrogates", ["tp", "gp"], "str_list")
    for s in surrogates:
        _choice(s, MODELS, "surrogates")
    if len(set(surrogates)) != len(surrogates) or not surrogates:
        raise ConfigError("surrogates must be a non-empty list without duplicates")

    bo = top.child("bo")
    bo_out = {
        "kernel_family": _choice(
            bo.take("kernel_family", kernels.MATERN52, "str"), kernels.FAMILIES, "bo.kernel_family"
        ),
        "include_noise": bo.take("include_noise", True, "bool"),
        "h_samples": _positive(bo.take("h_samples", 10, "int"), "bo.h_samples"),
        "burn_in": bo.take("burn_in", 50, "int"),
        "thin": _positive(bo.take("thin", 5, "int"), "bo.thin"),
        "standardize_targets": bo.take("standardize_targets", True, "bool"),
        "priors": _priors_section(bo.child("priors"), _BO_PRIORS),
    }
    if bo_out["burn_in"] < 0:
        raise ConfigError("bo.burn_in must be >= 0")
    bo.finish()

    search = top.child("search")
    search_out = {
        "candidates_per_dim": _positive(
            search.take("candidates_per_dim", 1000, "int"), "search.candidates_per_dim"
        ),
        "top_k": _positive(search.take("top_k", 10, "int"), "search.top_k"),
        "refine_steps": search.take("refine_steps", 100, "int"),
        "initial_step": _positive(search.take("initial_step", 0.05, "float"), "search.initial_step"),
        "fd_step": _positive(search.take("fd_step", 1e-5, "float"), "search.fd_step"),
    }
    if search_out["refine_steps"] < 0:
        raise ConfigError("search.refine_steps must be >= 0")
    search.finish()

    out = {
        "seed": seed,
        "problem": problem,
        "surrogates": surrogates,
        "budget": _positive(top.take("budget", 20, "int"), "budget"),
        "runs": _positive(top.take("runs", 50, "int"), "runs"),
        "rel_tol": _positive(top.take("rel_tol", 1e-3, "float"), "rel_tol"),
        "bo": bo_out,
        "search": search_out,
    }
    top.finish()
    return out


def materialize_sample(raw):
    top = _Section(raw, "sample config")
    seed = top.take("seed", 0, "int")
    if seed < 0:
        raise ConfigError("seed must be >= 0")
    sampler = _choice(
        top.take("sampler", "mvt", "str"),
        ("mvt", "iw", "iwp_eigen", "elliptical", "prior_functions"),
        "sampler",
    )
    out = {"seed": seed, "sampler": sampler}
    if sampler == "prior_functions":
        # Prior function draws on a grid (five curves plus 95% bands by
        # default); the kernel defaults reproduce 0.01*exp(-20 d^2).
        out.update(
            {
                "count": _positive(top.take("count", 5, "int"), "count"),
                "nu": top.take("nu", 5.0, "float"),
                "grid_points": _positive(top.take("grid_points", 200, "int"), "grid_points"),
                "domain": top.take("domain", [0.0, 10.0], "pair"),
                "mean": _choice(top.take("mean", "cosine", "str"), ("cosine", "zero"), "mean"),
                "kernel": _kernel_section(top.child("kernel"), kernels.SQUARED_EXPONENTIAL,
                                          amplitude=0.01, lengthscales=0.15811388300841897,
                                          include_noise=False, noise=0.0),
            }
        )
        if out["domain"][0] >= out["domain"][1]:
            raise ConfigError("domain must be [low, high] with low < high")
        if out["grid_points"] < 2:
            raise ConfigError("grid_points must be >= 2")
    else:
        out.update(
            {
                "count": _positive(top.take("count", 1000, "int"), "count"),
                "nu": top.take("nu", 5.0, "float"),
                "dim": _positive(top.take("dim", 2, "int"), "dim"),
            }
        )
        if sampler == "elliptical":
            out["kind"] = _choice(
                top.take("kind", "student", "str"), ("gaussian", "student"), "kind"
            )
    needs_nu = sampler != "elliptical" or out.get("kind") == "student"
    if needs_nu and out["nu"] <= 2.0:
        raise ConfigError(f"nu must be > 2, got {out['nu']}")
    top.finish()
    return out


def materialize_verify(raw):
    top = _Section(raw, "verify config")
    seed = top.take("seed", 0, "int")
    if seed < 0:
        raise ConfigError("seed must be >= 0")
    checks = top.take("checks", list(CHECK_NAMES), "str_list")
    for c in checks:
        _choice(c, CHECK_NAMES, "checks")
    if len(set(checks)) != len(checks) or not checks:
        raise ConfigError("checks must be a non-empty list without duplicates")

    grad = top.child("gradients")
    grad_out = {
        "problems": _positive(grad.take("problems", 20, "int"), "gradients.problems"),
        "tolerance": _positive(grad.take("tolerance", 1e-5, "float"), "gradients.tolerance"),
        "fd_step": _positive(grad.take("fd_step", 1e-6, "float"), "gradients.fd_step"),
    }
    grad.finish()

    chain = top.child("chain_rule")
    chain_out = {
        "instances": _positive(chain.take("instances", 100, "int"), "chain_rule.instances"),
        "tolerance": _positive(chain.take("tolerance", 1e-8, "float"), "chain_rule.tolerance"),
    }
    chain.finish()

    limit = top.child("gp_limit")
    limit_out = {
        "problems": _positive(limit.take("problems", 100, "int"), "gp_limit.problems"),
        "nu": _positive(limit.take("nu", 1e6, "float"), "gp_limit.nu"),
        "tolerance": _positive(limit.take("tolerance", 1e-3, "float"), "gp_limit.tolerance"),
    }
    limit.finish()

    ei = top.child("ei_quadrature")
    ei_out = {
        "cases": _positive(ei.take("cases", 200, "int"), "ei_quadrature.cases"),
        "tolerance": _positive(ei.take("tolerance", 1e-6, "float"), "ei_quadrature.tolerance"),
        "gaussian_limit_tolerance": _positive(
            ei.take("gaussian_limit_tolerance", 1e-5, "float"),
            "ei_quadrature.gaussian_limit_tolerance",
        ),
        "corrupt_sign": ei.take("corrupt_sign", False, "bool"),
    }
    ei.finish()

    gamma = top.child("mv_gamma")
    gamma_out = {
        "max_dim": _positive(gamma.take("max_dim", 10, "int"), "mv_gamma.max_dim"),
        "values": _positive(gamma.take("values", 100, "int"), "mv_gamma.values"),
        "tolerance": _positive(gamma.take("tolerance", 1e-10, "float"), "mv_gamma.tolerance"),
    }
    gamma.finish()

    prior = top.child("prior_equivalence")
    prior_out = {
        "nu": _positive(prior.take("nu", 5.0, "float"), "prior_equivalence.nu"),
        "dim": _positive(prior.take("dim", 2, "int"), "prior_equivalence.dim"),
        "count": _positive(prior.take("count", 100_000, "int"), "prior_equivalence.count"),
        "threshold": _positive(prior.take("threshold", 0.01, "float"), "prior_equivalence.threshold"),
    }
    if prior_out["nu"] <= 2.0:
        raise ConfigError("prior_equivalence.nu must be > 2")
    prior.finish()

    eigen = top.child("eigen_sampler")
    eigen_out = {
        "nu": _positive(eigen.take("nu", 5.0, "float"), "eigen_sampler.nu"),
        "dim": _positive(eigen.take("dim", 4, "int"), "eigen_sampler.dim"),
        "count": _positive(eigen.take("count", 10_000, "int"), "eigen_sampler.count"),
        "threshold": _positive(eigen.take("threshold", 0.01, "float"), "eigen_sampler.threshold"),
    }
    if eigen_out["nu"] <= 2.0:
        raise ConfigError("eigen_sampler.nu must be > 2")
    eigen.finish()

    out = {
        "seed": seed,
        "checks": checks,
        "gradients": grad_out,
        "chain_rule": chain_out,
        "gp_limit": limit_out,
        "ei_quadrature": ei_out,
        "mv_gamma": gamma_out,
        "prior_equivalence": prior_out,
        "eigen_sampler": eigen_out,
    }
    top.finish()
    return out


_MATERIALIZERS = {
    "regress": materialize_regress,
    "optimize": materialize_optimize,
    "sample": materialize_sample,
    "verify": materialize_verify,
}


def materialize(command, raw):
    """Fill defaults, validate, and return the canonical config mapping."""
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}")
    return _MATERIALIZERS[command](dict(raw))


def resolve(command, config_path, seed_override):
    """Load (or default) a config, apply a --seed override, materialize."""
    raw = load_config(config_path) if config_path else {}
    if seed_override is not None:
        raw = dict(raw)
        raw["seed"] = seed_override
    return materialize(command, raw)
