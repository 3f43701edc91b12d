"""Configuration file parsing, discovery, and override precedence."""

import textwrap
from pathlib import Path

import pytest

from sciwrite_lint.config import (
    CACHE_DIR_ENV,
    CONFIG_FILENAME,
    Config,
    ConfigError,
    default_cache_dir,
    discover_config,
    load_config,
)


def write_config(directory, body):
    path = Path(directory) / CONFIG_FILENAME
    path.write_text(textwrap.dedent(body))
    return path


def test_defaults():
    config = load_config()
    assert config.match_threshold == 0.70
    assert config.title_error_threshold == 0.80
    assert config.unreliable_threshold == 0.5
    assert config.oversize_pages == 50
    assert config.rate_limit_rps == 5.0
    assert config.parallelism == 8
    assert config.fail_on_warnings is True
    assert config.check_enabled("dangling-cite")
    assert sum(config.beta.values()) == pytest.approx(1.0)


def test_full_file(tmp_path):
    path = write_config(tmp_path, """
        match_threshold = 0.8
        rate_limit_rps = 2
        parallelism = 4
        fail_on_warnings = false
        user_agent = "lab-linter/9"

        [checks]
        "unreferenced-figure" = false

        [severity]
        "reference-unreliable" = "info"

        [beta]
        empirical = 0.4
        severity = 0.1
    """)
    config = load_config(path=path)
    assert config.match_threshold == 0.8
    assert config.rate_limit_rps == 2.0  # int coerced to float
    assert config.parallelism == 4
    assert config.fail_on_warnings is False
    assert config.user_agent == "lab-linter/9"
    assert not config.check_enabled("unreferenced-figure")
    assert config.check_enabled("dangling-cite")
    assert config.severity_for("reference-unreliable", "warning") == "info"
    assert config.severity_for("dangling-cite", "error") == "error"
    # unlisted axes keep their defaults
    assert config.beta == {
        "empirical": 0.4,
        "progressiveness": 0.2,
        "unification": 0.2,
        "problem_solving": 0.2,
        "severity": 0.1,
    }


def test_unknown_key_rejected(tmp_path):
    path = write_config(tmp_path, "match_treshold = 0.8\n")
    with pytest.raises(ConfigError, match="unknown config key"):
        load_config(path=path)


def test_unknown_check_id_rejected(tmp_path):
    path = write_config(tmp_path, "[checks]\n'no-such-check' = false\n")
    with pytest.raises(ConfigError, match="unknown check id"):
        load_config(path=path)


def test_bad_severity_rejected(tmp_path):
    path = write_config(tmp_path, "[severity]\n'dangling-cite' = 'fatal'\n")
    with pytest.raises(ConfigError, match="invalid severity"):
        load_config(path=path)


def test_bad_axis_rejected(tmp_path):
    path = write_config(tmp_path, "[beta]\nboldness = 0.5\n")
    with pytest.raises(ConfigError, match="unknown contribution axis"):
        load_config(path=path)


def test_type_errors(tmp_path):
    path = write_config(tmp_path, "parallelism = 'many'\n")
    with pytest.raises(ConfigError, match="parallelism must be int"):
        load_config(path=path)


def test_malformed_toml(tmp_path):
    path = write_config(tmp_path, "match_threshold = = 1\n")
    with pytest.raises(ConfigError):
        load_config(path=path)


def test_range_validation():
    with pytest.raises(ConfigError):
        Config(match_threshold=1.2)
    with pytest.raises(ConfigError):
        Config(parallelism=0)
    with pytest.raises(ConfigError):
        Config(rate_limit_rps=0.0)


def test_discovery_walks_upward(tmp_path):
    config_path = write_config(tmp_path, "match_threshold = 0.9\n")
    nested = tmp_path / "a" / "b"
    nested.mkdir(parents=True)
    assert discover_config(nested) == config_path
    config = load_config(start_dir=nested)
    assert config.match_threshold == 0.9


def test_discovery_prefers_nearest(tmp_path):
    write_config(tmp_path, "match_threshold = 0.9\n")
    nested = tmp_path / "sub"
    nested.mkdir()
    write_config(nested, "match_threshold = 0.6\n")
    config = load_config(start_dir=nested)
    assert config.match_threshold == 0.6


def test_no_config_anywhere(tmp_path):
    assert discover_config(tmp_path) is None
    config = load_config(start_dir=tmp_path)
    assert config.match_threshold == 0.70


def test_overrides_win_over_file(tmp_path):
    path = write_config(tmp_path, "match_threshold = 0.9\nparallelism = 2\n")
    config = load_config(path=path, match_threshold=0.75, fail_on_warnings=False)
    assert config.match_threshold == 0.75
    assert config.parallelism == 2
    assert config.fail_on_warnings is False


def test_none_overrides_are_ignored(tmp_path):
    path = write_config(tmp_path, "match_threshold = 0.9\n")
    config = load_config(path=path, match_threshold=None)
    assert config.match_threshold == 0.9


def test_cache_dir_from_environment(monkeypatch, tmp_path):
    monkeypatch.setenv(CACHE_DIR_ENV, str(tmp_path / "cachehome"))
    assert default_cache_dir() == tmp_path / "cachehome"
    monkeypatch.delenv(CACHE_DIR_ENV)
    assert default_cache_dir() == Path.home() / ".cache" / "sciwrite-lint"
