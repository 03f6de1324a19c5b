"""
Configuration loader for data/defaults.yaml.
"""
import os
from pathlib import Path
from typing import Any, Optional

import yaml

CACHE_DIR_ENV = "PERMPOLY_CACHE_DIR"

DEFAULT_SETTINGS = {
    "field": {"table_cap": 4096, "max_order": 65536},
    "search": {
        "max_candidates": 100_000_000,
        "chunk_target": 1 << 22,
        "block_rows": 1 << 16,
        "default_jobs": None,
    },
    "cache": {"dir": ".permpoly-cache", "schema": 1, "revalidate_members": 10},
    "audits": {"criteria_samples": 10000, "seed": 0},
    "orthomorphism": {"max_bound_q": 9},
    "wilson": {"max_exhaustive_q": 7},
}


def get_data_path() -> Path:
    """Get the path to the data directory."""
    return Path(__file__).parent.parent / "data"


def load_settings(path: Optional[Path] = None) -> dict:
    """Load settings from YAML, falling back to the built-in defaults."""
    data_path = path or get_data_path() / "defaults.yaml"

    try:
        with open(data_path, 'r') as f:
            loaded = yaml.safe_load(f) or {}
    except FileNotFoundError:
        loaded = {}

    # Sections missing from the file keep their defaults
    settings = {section: dict(values) for section, values in DEFAULT_SETTINGS.items()}
    for section, values in loaded.items():
        if isinstance(values, dict):
            settings.setdefault(section, {}).update(values)
        else:
            settings[section] = values

    env_dir = os.environ.get(CACHE_DIR_ENV)
    if env_dir:
        settings["cache"]["dir"] = env_dir
    return settings


def get_setting(key: str, default: Any = None, settings: Optional[dict] = None) -> Any:
    """
    Dotted lookup, e.g. get_setting("search.max_candidates").

    Args:
        key: Section and name separated by dots
        default: Returned when any part of the key is missing
        settings: Already loaded settings (loads from disk when None)
    """
    node: Any = settings if settings is not None else load_settings()
    for part in key.split("."):
        if not isinstance(node, dict) or part not in node:
            return default
        node = node[part]
    return node
