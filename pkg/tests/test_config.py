import pytest

from elfilter.config import ConfigError, EngineConfig, coerce, dump_toml, load_config_file, resolve


def test_defaults():
    cfg = EngineConfig()
    assert (cfg.alpha, cfg.beta, cfg.rho, cfg.min_lp, cfg.method) == (1.0, 0.0, 0.1, 0.2, "exp2")


def test_fingerprint_tracks_settings():
    assert EngineConfig().fingerprint() == EngineConfig().fingerprint()
    assert EngineConfig(eta=0.5).fingerprint() != EngineConfig().fingerprint()
    assert len(EngineConfig().fingerprint()) == 16


def test_precedence():
    cfg = resolve({"eta": 0.3, "beta": 0.5}, {"eta": 0.7, "beta": None})
    assert (cfg.eta, cfg.beta) == (0.7, 0.5)


@pytest.mark.parametrize("kwargs", [{"eta": 1.2}, {"rho": -0.1}, {"method": "exp4"}, {"unjudged": "tp"}, {"workers": 0}])
def test_validation(kwargs):
    with pytest.raises(ConfigError):
        EngineConfig(**kwargs).validate()


def test_required_paths(tmp_path):
    with pytest.raises(ConfigError, match="corpus"):
        EngineConfig().validate(("corpus",))
    with pytest.raises(ConfigError, match="not found"):
        EngineConfig(corpus=str(tmp_path / "x.jsonl")).validate()


def test_coerce():
    assert coerce("url_gate", "false") is False
    assert coerce("eta", "0.5") == 0.5
    with pytest.raises(ConfigError):
        coerce("url_gate", "maybe")


def test_toml_round_trip(tmp_path):
    path = tmp_path / "c.toml"
    path.write_text(dump_toml({"eta": 0.4, "url_gate": False, "method": "exp3"}) + "[grid]\nbeta = [0.0, 0.5]\n")
    settings, grid = load_config_file(path)
    assert settings == {"eta": 0.4, "url_gate": False, "method": "exp3"}
    assert grid == {"beta": [0.0, 0.5]}
