import logging
import sys

from dotenv import load_dotenv

from src.cli.app import run
from src.utils.logger import setup_logging

# Load LTK_JOBS, LTK_LOG_LEVEL and LTK_CONFIG from .env if present
load_dotenv()
setup_logging()
logger = logging.getLogger(__name__)


def main() -> int:
    """Run one `ltk` command and return its exit code."""
    try:
        return run(sys.argv[1:])
    except KeyboardInterrupt:
        logger.warning("Interrupted")
        return 2
    except Exception as e:
        logger.error(f"Unexpected failure: {e}", exc_info=True)
        return 2


if __name__ == '__main__':
    sys.exit(main())
