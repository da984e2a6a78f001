import logging
from typing import Sequence

from src.utils.errors import ConfigError

logger = logging.getLogger(__name__)


class ClusterComparator:
    """Decides whether the labeled last main cluster is isomorphic to the one-point model at @."""
    mode = None

    def isomorphic(self, lits: Sequence[int], partitions, top: int) -> bool:
        raise NotImplementedError


class ModelComparator(ClusterComparator):
    """Compares models: worlds, agent partitions and the valuation of the rule's variables."""
    mode = 'model'

    def isomorphic(self, lits, partitions, top):
        return len(lits) == 1 and lits[0] == top


class FrameComparator(ClusterComparator):
    """Compares frames only: any one-world cluster is isomorphic to @."""
    mode = 'frame'

    def isomorphic(self, lits, partitions, top):
        return len(lits) == 1


def get_comparator(mode: str) -> ClusterComparator:
    mode = (mode or 'model').lower()
    if mode == 'model':
        return ModelComparator()
    elif mode == 'frame':
        return FrameComparator()
    else:
        logger.error(f"Unsupported isomorphism mode '{mode}'.")
        raise ConfigError(f"Unsupported iso mode: {mode}")
