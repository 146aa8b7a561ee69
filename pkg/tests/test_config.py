import pytest

from kernelcut.config import DEFAULTS, load_config
from kernelcut.errors import ConfigError


def test_defaults_without_file_or_flags():
    config = load_config(env={})
    assert config.batching.max_fprs == 5
    assert config.ga.population_size == 1000
    assert config.pallet_limit == 7
    assert config.alpha == 1.0
    assert config.beta is None
    assert config.ga.seed == DEFAULTS["seed"]


def test_auto_beta_resolves_to_batch_count():
    config = load_config(env={})
    weights = config.weights_for(12)
    assert weights.beta == 12.0
    pinned = load_config(env={}, overrides={"beta": 3.0})
    assert pinned.weights_for(12).beta == 3.0


def test_zero_weights_rejected():
    with pytest.raises(ConfigError, match="alpha \\+ beta > 0"):
        load_config(env={}, overrides={"alpha": 0.0, "beta": 0.0})


def test_flag_overrides_file(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("generations=50\n")
    config = load_config(path=str(path), env={}, overrides={"generations": 80})
    assert config.ga.generations == 80


def test_file_overrides_env_seed(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("seed=7\n")
    config = load_config(path=str(path), env={"KERNELCUT_SEED": "99"})
    assert config.ga.seed == 7


def test_env_seed_overrides_default():
    config = load_config(env={"KERNELCUT_SEED": "99"})
    assert config.ga.seed == 99


def test_key_value_file_with_comments(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("# plant defaults\npopulation_size = 200\npallet_limit=6\n\nbeta=auto\n")
    config = load_config(path=str(path), env={})
    assert config.ga.population_size == 200
    assert config.pallet_limit == 6
    assert config.beta is None


def test_json_config_file(tmp_path):
    path = tmp_path / "run.json"
    path.write_text('{"max_fprs": 4, "stagnation_patience": null}')
    config = load_config(path=str(path), env={})
    assert config.batching.max_fprs == 4
    assert config.ga.stagnation_patience is None


def test_unknown_key_rejected(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("velocity=9\n")
    with pytest.raises(ConfigError, match="unknown configuration key"):
        load_config(path=str(path), env={})


def test_out_of_range_values_name_the_constraint():
    with pytest.raises(ConfigError, match="population_size >= 2"):
        load_config(env={}, overrides={"population_size": 1})
    with pytest.raises(ConfigError, match="elite_fraction"):
        load_config(env={}, overrides={"elite_fraction": 0.0})
    with pytest.raises(ConfigError, match="64-bit"):
        load_config(env={}, overrides={"seed": 2**64})
    with pytest.raises(ConfigError, match="neighbour_mutation_rate"):
        load_config(env={}, overrides={"neighbour_mutation_rate": 1.5})


def test_non_numeric_value_rejected(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("generations=fast\n")
    with pytest.raises(ConfigError, match="not an integer"):
        load_config(path=str(path), env={})
