import os
from pathlib import Path
from typing import Any, Optional

import yaml

REPO_ROOT = Path(__file__).resolve().parents[2]
DEFAULT_CONFIG_PATH = REPO_ROOT / 'config' / 'ltk_config.yaml'


def load_yaml_config(path: str | Path) -> dict[str, Any]:
    with open(path, 'r') as f:
        return yaml.safe_load(f) or {}


def get_env_variable(key: str, default: Any = None) -> Any:
    return os.getenv(key, default)


def load_tool_config(path: Optional[str | Path] = None) -> dict[str, Any]:
    """
    Load the tool defaults and apply environment overrides.

    Args:
        path: Config file to read. Defaults to LTK_CONFIG, then config/ltk_config.yaml.

    Returns:
        The config dictionary with `jobs` overridden by LTK_JOBS when set.
    """
    config_path = path or get_env_variable('LTK_CONFIG') or DEFAULT_CONFIG_PATH
    config = load_yaml_config(config_path)

    jobs = get_env_variable('LTK_JOBS')
    if jobs:
        config['jobs'] = jobs
    return config


def config_section(config: dict[str, Any], name: str) -> dict[str, Any]:
    return config.get(name) or {}
