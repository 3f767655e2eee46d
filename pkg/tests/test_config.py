"""Tests for config materialization, validation and the io helpers."""

import math

import numpy as np
import pytest

from tproc import io
from tproc.config import CHECK_NAMES, load_config, materialize, resolve
from tproc.exceptions import ConfigError, DataError


# ---------------------------------------------------------------------------
# materialize: defaults


def test_regress_defaults():
    out = materialize("regress", {})
    assert out["seed"] == 0
    assert out["data"]["source"] == "synthetic_b"
    assert out["data"]["n_train"] == 80
    assert out["data"]["n_test"] == 20
    assert out["data"]["replications"] == 100
    assert out["data"]["t_dof"] == 3.0
    assert out["models"] == ["tp", "gp"]
    assert out["kernel"]["family"] == "squared_exponential_ard"
    assert out["kernel"]["include_noise"] is True
    assert out["inference"]["method"] == "map"
    assert out["inference"]["use_priors"] is True
    assert out["inference"]["restarts"] == 5
    assert out["standardize"] is True
    assert out["priors"]["mean_mu"] == [0.0, 10.0]


def test_optimize_defaults():
    out = materialize("optimize", {})
    assert out["problem"] == "sinusoidal"
    assert out["surrogates"] == ["tp", "gp"]
    assert out["budget"] == 20
    assert out["runs"] == 50
    assert out["rel_tol"] == 1e-3
    assert out["bo"]["kernel_family"] == "matern52_ard"
    assert out["bo"]["h_samples"] == 10
    assert out["bo"]["burn_in"] == 50
    assert out["bo"]["thin"] == 5
    assert out["bo"]["standardize_targets"] is True
    assert out["bo"]["priors"]["log_lengthscale"] == [-1.0, 1.0]
    assert out["bo"]["priors"]["log_noise"] == [-6.0, 1.0]
    assert out["search"]["candidates_per_dim"] == 1000
    assert out["search"]["fd_step"] == 1e-5


def test_sample_defaults_by_sampler():
    out = materialize("sample", {})
    assert out == {"seed": 0, "sampler": "mvt", "count": 1000, "nu": 5.0, "dim": 2}

    ell = materialize("sample", {"sampler": "elliptical"})
    assert ell["kind"] == "student"

    pf = materialize("sample", {"sampler": "prior_functions"})
    assert pf["count"] == 5
    assert pf["grid_points"] == 200
    assert pf["domain"] == [0.0, 10.0]
    assert pf["mean"] == "cosine"
    assert pf["kernel"]["amplitude"] == 0.01
    assert pf["kernel"]["lengthscales"] == pytest.approx(1.0 / math.sqrt(40.0))
    assert pf["kernel"]["include_noise"] is False


def test_verify_defaults_cover_all_checks():
    out = materialize("verify", {})
    assert out["checks"] == list(CHECK_NAMES)
    assert out["gradients"] == {"problems": 20, "tolerance": 1e-5, "fd_step": 1e-6}
    assert out["chain_rule"] == {"instances": 100, "tolerance": 1e-8}
    assert out["gp_limit"] == {"problems": 100, "nu": 1e6, "tolerance": 1e-3}
    assert out["ei_quadrature"]["cases"] == 200
    assert out["ei_quadrature"]["corrupt_sign"] is False
    assert out["prior_equivalence"]["count"] == 100_000
    assert out["eigen_sampler"]["dim"] == 4
    assert out["mv_gamma"]["tolerance"] == 1e-10


def test_materialize_rejects_unknown_command():
    with pytest.raises(ConfigError):
        materialize("train", {})


# ---------------------------------------------------------------------------
# materialize: validation


def test_unknown_keys_rejected():
    with pytest.raises(ConfigError, match="unknown key"):
        materialize("regress", {"bogus": 1})
    with pytest.raises(ConfigError, match=r"config\.data"):
        materialize("regress", {"data": {"bogus": 1}})
    with pytest.raises(ConfigError, match=r"config\.bo\.priors"):
        materialize("optimize", {"bo": {"priors": {"log_scale": [0, 1]}}})


def test_type_coercion_errors():
    with pytest.raises(ConfigError, match="integer"):
        materialize("regress", {"data": {"n_train": "many"}})
    with pytest.raises(ConfigError, match="number"):
        materialize("optimize", {"rel_tol": "tight"})
    with pytest.raises(ConfigError, match="true or false"):
        materialize("regress", {"standardize": "yes please"})


def test_choice_validation():
    with pytest.raises(ConfigError, match="source must be one of"):
        materialize("regress", {"data": {"source": "synthetic_c"}})
    with pytest.raises(ConfigError):
        materialize("optimize", {"problem": "rosenbrock"})
    with pytest.raises(ConfigError):
        materialize("regress", {"models": ["vgp"]})
    with pytest.raises(ConfigError):
        materialize("sample", {"sampler": "copula"})


def test_range_validation():
    with pytest.raises(ConfigError, match="low < high"):
        materialize("regress", {"data": {"domain": [10.0, 0.0]}})
    with pytest.raises(ConfigError, match="positive std"):
        materialize("regress", {"priors": {"log_noise": [0.0, -1.0]}})
    with pytest.raises(ConfigError, match="budget"):
        materialize("optimize", {"budget": 0})
    with pytest.raises(ConfigError):
        materialize("regress", {"data": {"replications": 0}})
    with pytest.raises(ConfigError):
        materialize("sample", {"sampler": "prior_functions", "grid_points": 1})


def test_verify_check_subset_and_unknown():
    out = materialize("verify", {"checks": ["mv_gamma"]})
    assert out["checks"] == ["mv_gamma"]
    with pytest.raises(ConfigError, match="checks must be one of"):
        materialize("verify", {"checks": ["gradients", "nope"]})


def test_overrides_flow_through():
    out = materialize(
        "regress",
        {"seed": 17, "data": {"n_train": 10, "replications": 3}, "models": ["tp"]},
    )
    assert out["seed"] == 17
    assert out["data"]["n_train"] == 10
    assert out["data"]["replications"] == 3
    assert out["models"] == ["tp"]
    # untouched defaults survive
    assert out["inference"]["restarts"] == 5


# ---------------------------------------------------------------------------
# load_config / resolve


def test_resolve_reads_file_and_applies_override(tmp_path):
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text("budget: 5\nseed: 9\n")
    out = resolve("optimize", str(cfg), None)
    assert out["budget"] == 5
    assert out["seed"] == 9
    assert resolve("optimize", str(cfg), 33)["seed"] == 33
    assert resolve("optimize", None, None)["budget"] == 20


def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(str(tmp_path / "missing.yaml"))
    bad = tmp_path / "bad.yaml"
    bad.write_text("- a\n- list\n")
    with pytest.raises(ConfigError, match="mapping"):
        load_config(str(bad))


# ---------------------------------------------------------------------------
# io helpers


def test_fmt_float_round_trips():
    for v in (0.1, 1.0 / 3.0, 1e-300, 1e300, -0.0, 123456.789):
        assert float(io.fmt_float(v)) == v
    assert io.fmt_float(float("nan")) == "nan"
    assert io.fmt_float(float("inf")) == "inf"


def test_config_hash_order_independent():
    h1 = io.config_hash({"a": 1, "b": [1, 2]})
    h2 = io.config_hash({"b": [1, 2], "a": 1})
    assert h1 == h2
    assert len(h1) == 64
    assert io.config_hash({"a": 2, "b": [1, 2]}) != h1


def test_preamble_contains_seed_and_digest():
    line = io.preamble(3, "abc123")
    assert line.startswith("#")
    assert "seed=3" in line
    assert "abc123" in line


def test_write_yaml_format(tmp_path):
    path = tmp_path / "out.yaml"
    io.write_yaml(str(path), {"b": 2, "a": [1.5, float("nan")], "c": "x"}, 7, "d1g3st")
    text = path.read_text()
    lines = text.splitlines()
    assert lines[0] == "# seed=7 config_sha256=d1g3st"
    # keys sorted, NaN written in YAML spelling
    assert lines[1].startswith("a:")
    assert ".nan" in text
    import yaml

    loaded = yaml.safe_load(text)
    assert loaded["b"] == 2
    assert math.isnan(loaded["a"][1])


def test_write_csv_format(tmp_path):
    path = tmp_path / "out.csv"
    io.write_csv(str(path), ["x", "y"], [[0.1, 1.0], [0.2, float("inf")]], 7, "d1g3st")
    lines = path.read_text().splitlines()
    assert lines[0] == "# seed=7 config_sha256=d1g3st"
    assert lines[1] == "x,y"
    assert lines[2].split(",")[0] == io.fmt_float(0.1)
    assert lines[3].split(",")[1] == "inf"


def test_read_dataset_csv_roundtrip(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("# comment\nx0,y\n0.0,1.0\n2.0,3.0\n")
    dataset, columns = io.read_dataset_csv(str(path))
    assert columns == ["x0", "y"]
    assert dataset.x.shape == (2, 1)
    assert np.array_equal(dataset.y, [1.0, 3.0])


def test_read_dataset_csv_errors_cite_location(tmp_path):
    cases = {
        "no data rows": "x0,y\n",
        "need at least one feature": "y\n1.0\n",
        "expected 2 fields, got 1": "x0,y\n1.0,2.0\n3.0\n",
        "not numeric": "x0,y\n1.0,two\n",
        "not finite": "x0,y\n1.0,nan\n",
    }
    for fragment, text in cases.items():
        path = tmp_path / "bad.csv"
        path.write_text(text)
        with pytest.raises(DataError, match=fragment) as excinfo:
            io.read_dataset_csv(str(path))
        assert "bad.csv" in str(excinfo.value)
    # line numbers are cited for row-level problems
    path = tmp_path / "bad.csv"
    path.write_text("x0,y\n1.0,2.0\n3.0\n")
    with pytest.raises(DataError, match=r"bad\.csv:3"):
        io.read_dataset_csv(str(path))
