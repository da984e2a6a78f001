"""Single-cluster models over p1..pn, one per isomorphism class, up to a size cap."""
import logging
from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Tuple

from src.kripke.canonical import canonical_cluster_model, cluster_shapes
from src.kripke.frame import ClusterShape, Partition
from src.utils.errors import ConfigError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CatalogueEntry:
    """A valued cluster in canonical form; labels[w] has bit j-1 set iff p_j holds at local world w."""
    size: int
    labels: Tuple[int, ...]
    partitions: Tuple[Partition, ...]

    @property
    def shape(self) -> ClusterShape:
        return ClusterShape(self.size, self.partitions)

    def to_dict(self) -> Dict:
        return {'size': self.size, 'labels': list(self.labels),
                'partitions': [[list(b) for b in p] for p in self.partitions]}


@dataclass(frozen=True)
class ClusterCatalogue:
    var_count: int
    size_cap: int
    agents: int
    entries: Tuple[CatalogueEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def build_catalogue(var_count: int, size_cap: int, agents: int) -> ClusterCatalogue:
    """
    All valued clusters with at most `size_cap` worlds, pairwise non-isomorphic.

    Entries are ordered by size, then by canonical key.
    """
    if size_cap < 1:
        raise ConfigError(f"Cluster size cap must be at least 1, got {size_cap}")
    if var_count < 0 or agents < 0:
        raise ConfigError("Variable and agent counts cannot be negative")
    entries: List[CatalogueEntry] = []
    for size in range(1, size_cap + 1):
        keys = set()
        for shape in cluster_shapes(size, agents):
            for labels in product(range(1 << var_count), repeat=size):
                keys.add(canonical_cluster_model(labels, shape))
        entries.extend(CatalogueEntry(*key) for key in sorted(keys))
    logger.info(f"Catalogue for n={var_count}, cap={size_cap}, k={agents}: {len(entries)} clusters")
    return ClusterCatalogue(var_count, size_cap, agents, tuple(entries))
