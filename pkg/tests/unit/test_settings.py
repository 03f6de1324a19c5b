"""
Unit tests for the settings loader.
"""
import pytest
import sys
from pathlib import Path

# Add project root to path
sys.path.append(str(Path(__file__).parent.parent.parent))

from services.settings import CACHE_DIR_ENV, DEFAULT_SETTINGS, get_data_path, get_setting, load_settings


@pytest.fixture(autouse=True)
def no_cache_env(monkeypatch):
    monkeypatch.delenv(CACHE_DIR_ENV, raising=False)


def test_shipped_defaults():
    """data/defaults.yaml matches the built-in defaults."""
    assert (get_data_path() / "defaults.yaml").exists()
    settings = load_settings()
    assert settings["search"]["max_candidates"] == 100_000_000
    assert settings["cache"]["revalidate_members"] == 10
    assert settings["wilson"]["max_exhaustive_q"] == 7
    for section, values in DEFAULT_SETTINGS.items():
        assert set(values) <= set(settings[section])


def test_missing_file_uses_defaults(tmp_path):
    settings = load_settings(tmp_path / "absent.yaml")
    assert settings == DEFAULT_SETTINGS


def test_partial_file_keeps_other_keys(tmp_path):
    path = tmp_path / "settings.yaml"
    path.write_text("search:\n  max_candidates: 1000\n")
    settings = load_settings(path)
    assert settings["search"]["max_candidates"] == 1000
    assert settings["search"]["block_rows"] == DEFAULT_SETTINGS["search"]["block_rows"]
    assert settings["cache"] == DEFAULT_SETTINGS["cache"]


def test_defaults_not_mutated(tmp_path):
    path = tmp_path / "settings.yaml"
    path.write_text("cache:\n  dir: elsewhere\n")
    load_settings(path)
    assert DEFAULT_SETTINGS["cache"]["dir"] == ".permpoly-cache"


def test_environment_cache_dir(tmp_path, monkeypatch):
    monkeypatch.setenv(CACHE_DIR_ENV, str(tmp_path))
    assert load_settings()["cache"]["dir"] == str(tmp_path)


def test_get_setting():
    settings = {"search": {"max_candidates": 5}}
    assert get_setting("search.max_candidates", settings=settings) == 5
    assert get_setting("search.missing", 7, settings=settings) == 7
    assert get_setting("search.max_candidates.deeper", "x", settings=settings) == "x"
