"""Configuration loading and discovery.

Policy lives in `.sciwrite-lint.toml`, discovered upward from the manuscript
directory. Command-line flags override file values; the cache directory can
also come from the SCIWRITE_LINT_CACHE_DIR environment variable.
"""

import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

try:
    import tomllib
except ModuleNotFoundError:  # 3.10
    import tomli as tomllib

from sciwrite_lint.findings import CHECK_CATALOG, LEVELS
from sciwrite_lint.scoring import CONTRIBUTION_AXES, DEFAULT_BETA

CONFIG_FILENAME = ".sciwrite-lint.toml"

CACHE_DIR_ENV = "SCIWRITE_LINT_CACHE_DIR"

_SCALAR_KEYS = {
    "match_threshold": float,
    "title_error_threshold": float,
    "unreliable_threshold": float,
    "oversize_pages": int,
    "rate_limit_rps": float,
    "parallelism": int,
    "fail_on_warnings": bool,
    "cache_dir": str,
    "user_agent": str,
}


class ConfigError(Exception):
    """Invalid or unreadable configuration."""


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_DIR_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "sciwrite-lint"


@dataclass(frozen=True)
class Config:
    enabled_checks: dict = field(default_factory=dict)  # absent check ids default to enabled
    severity_overrides: dict = field(default_factory=dict)
    match_threshold: float = 0.70
    title_error_threshold: float = 0.80
    unreliable_threshold: float = 0.5
    oversize_pages: int = 50
    rate_limit_rps: float = 5.0
    parallelism: int = 8
    beta: dict = field(default_factory=lambda: dict(DEFAULT_BETA))
    cache_dir: Path = field(default_factory=default_cache_dir)
    fail_on_warnings: bool = True
    user_agent: Optional[str] = None

    def __post_init__(self):
        for name in ("match_threshold", "title_error_threshold", "unreliable_threshold"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {value}")
        if self.parallelism < 1:
            raise ConfigError("parallelism must be >= 1")
        if self.rate_limit_rps <= 0:
            raise ConfigError("rate_limit_rps must be positive")
        if self.oversize_pages < 1:
            raise ConfigError("oversize_pages must be >= 1")
        for check_id in list(self.enabled_checks) + list(self.severity_overrides):
            if check_id not in CHECK_CATALOG:
                raise ConfigError(f"unknown check id in config: {check_id!r}")
        for check_id, level in self.severity_overrides.items():
            if level not in LEVELS:
                raise ConfigError(f"invalid severity {level!r} for {check_id}")
        if set(self.beta) != set(CONTRIBUTION_AXES):
            raise ConfigError(f"beta must define exactly the axes {CONTRIBUTION_AXES}")

    def check_enabled(self, check_id: str) -> bool:
        return self.enabled_checks.get(check_id, True)

    def severity_for(self, check_id: str, default: str) -> str:
        return self.severity_overrides.get(check_id, default)


def discover_config(start_dir) -> Optional[Path]:
    """Nearest config file at or above start_dir."""
    directory = Path(start_dir).resolve()
    for candidate_dir in (directory, *directory.parents):
        candidate = candidate_dir / CONFIG_FILENAME
        if candidate.is_file():
            return candidate
    return None


def _parse_toml(path: Path) -> dict:
    try:
        with open(path, "rb") as handle:
            return tomllib.load(handle)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


def load_config(path: Optional[Path] = None, start_dir: Optional[Path] = None, **overrides) -> Config:
    """Config from an explicit file, discovery, or defaults; overrides win last."""
    if path is None and start_dir is not None:
        path = discover_config(start_dir)
    values = {}
    if path is not None:
        data = _parse_toml(Path(path))
        for key, value in data.items():
            if key in _SCALAR_KEYS:
                expected = _SCALAR_KEYS[key]
                if expected is float and isinstance(value, int) and not isinstance(value, bool):
                    value = float(value)
                if not isinstance(value, expected):
                    raise ConfigError(f"{key} must be {expected.__name__}, got {type(value).__name__}")
                values[key] = Path(value) if key == "cache_dir" else value
            elif key == "checks":
                values["enabled_checks"] = dict(value)
            elif key == "severity":
                values["severity_overrides"] = dict(value)
            elif key == "beta":
                beta = dict(DEFAULT_BETA)
                for axis, weight in value.items():
                    if axis not in beta:
                        raise ConfigError(f"unknown contribution axis in beta: {axis!r}")
                    beta[axis] = float(weight)
                values["beta"] = beta
            else:
                raise ConfigError(f"unknown config key: {key!r}")
    config = Config(**values)
    cleaned = {k: v for k, v in overrides.items() if v is not None}
    if cleaned:
        config = replace(config, **cleaned)
    return config
