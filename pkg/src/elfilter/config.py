"""Engine configuration: defaults, TOML config files, validation, fingerprints.

Config files are flat TOML key/value pairs using the field names of
:class:`EngineConfig`; ``tune`` also reads an optional ``[grid]`` table of
lists keyed by the tunable fields.
"""

from __future__ import annotations

import hashlib
import json
import os
import sys
from dataclasses import asdict, dataclass, fields, replace

from elfilter.linker import METHODS, ExpansionConfig

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class EngineConfig:
    alpha: float = 1.0
    beta: float = 0.0
    eta: float = 0.85
    method: str = "exp2"
    rho: float = 0.1
    min_lp: float = 0.2
    url_gate: bool = True
    corpus: str | None = None
    topics: str | None = None
    qrels: str | None = None
    kb: str | None = None
    stopwords: str | None = None
    unigrams: str | None = None
    rules: str | None = None
    queries: str | None = None
    unjudged: str = "fp"
    exclude_no_relevant: bool = True
    workers: int = 1
    seed: int = 13

    def expansion(self) -> ExpansionConfig:
        return ExpansionConfig(self.method, self.rho, self.min_lp)

    def fingerprint(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]

    def validate(self, required_paths=()) -> "EngineConfig":
        for name in ("eta", "rho", "min_lp"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1], got {value}")
        if self.alpha < 0 or self.beta < 0:
            raise ConfigError("alpha and beta must be non-negative")
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}; expected one of {', '.join(METHODS)}")
        if self.unjudged not in ("fp", "skip"):
            raise ConfigError(f"unjudged must be 'fp' or 'skip', got {self.unjudged!r}")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        for name in ("corpus", "topics", "qrels", "kb", "stopwords", "unigrams", "rules", "queries"):
            path = getattr(self, name)
            if path is None:
                if name in required_paths:
                    raise ConfigError(f"missing required path --{name}")
                continue
            if not os.path.isfile(path):
                raise ConfigError(f"{name} file not found: {path}")
        return self


FIELD_TYPES = {f.name: f.type for f in fields(EngineConfig)}
TUNABLE = ("alpha", "beta", "eta", "rho", "min_lp", "method", "url_gate")


def coerce(name: str, value):
    """Convert a config-file or command-line value to the field's type."""
    kind = FIELD_TYPES[name]
    if value is None:
        return None
    if kind == "float":
        return float(value)
    if kind == "int":
        return int(value)
    if kind == "bool":
        if isinstance(value, bool):
            return value
        text = str(value).strip().lower()
        if text in ("1", "true", "yes", "on"):
            return True
        if text in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{name}: expected a boolean, got {value!r}")
    return str(value)


def load_config_file(path) -> tuple[dict, dict]:
    """Return (settings, grid) from a TOML file."""
    try:
        with open(path, "rb") as f:
            data = tomllib.load(f)
    except FileNotFoundError as e:
        raise ConfigError(f"config file not found: {path}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"{path}: {e}") from e
    grid = data.pop("grid", {}) or {}
    unknown = sorted(set(data) - set(FIELD_TYPES))
    if unknown:
        raise ConfigError(f"{path}: unknown keys {', '.join(unknown)}")
    bad = sorted(set(grid) - set(TUNABLE))
    if bad:
        raise ConfigError(f"{path}: grid keys must be among {', '.join(TUNABLE)}, got {', '.join(bad)}")
    settings = {k: coerce(k, v) for k, v in data.items()}
    grid = {k: [coerce(k, v) for v in (vs if isinstance(vs, list) else [vs])] for k, vs in grid.items()}
    return settings, grid


def resolve(file_settings: dict, cli_settings: dict) -> EngineConfig:
    """Defaults, overridden by the config file, overridden by flags."""
    cfg = replace(EngineConfig(), **file_settings)
    return replace(cfg, **{k: v for k, v in cli_settings.items() if v is not None})


def _toml_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return repr(value)
    return json.dumps(value)


def dump_toml(settings: dict) -> str:
    return "".join(f"{k} = {_toml_value(v)}\n" for k, v in settings.items() if v is not None)
