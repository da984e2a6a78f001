import logging
import logging.config
from typing import Optional

import yaml

from src.utils.config_loader import REPO_ROOT, get_env_variable

LOGGING_CONFIG_PATH = REPO_ROOT / 'config' / 'logging_config.yaml'

logger = logging.getLogger("ltk")


def setup_logging(level: Optional[str] = None) -> None:
    """Configure logging from config/logging_config.yaml; LTK_LOG_LEVEL or `level` overrides the root level."""
    with open(LOGGING_CONFIG_PATH, 'r') as f:
        config = yaml.safe_load(f)
    logging.config.dictConfig(config)

    override = level or get_env_variable('LTK_LOG_LEVEL')
    if override:
        logging.getLogger().setLevel(override.upper())
