"""Canonical forms of clusters up to renaming of worlds."""
import logging
from functools import lru_cache
from itertools import permutations, product
from typing import Iterator, List, Sequence, Tuple

from src.kripke.frame import ClusterShape, Partition, normalize_partition

logger = logging.getLogger(__name__)


def set_partitions(n: int) -> Iterator[Partition]:
    """All partitions of range(n) in restricted-growth order."""
    def grow(i: int, blocks: List[List[int]]):
        if i == n:
            yield normalize_partition(blocks)
            return
        for block in blocks:
            block.append(i)
            yield from grow(i + 1, blocks)
            block.pop()
        blocks.append([i])
        yield from grow(i + 1, blocks)
        blocks.pop()

    yield from grow(0, [])


def _relabel(partition: Partition, perm: Sequence[int]) -> Partition:
    return normalize_partition((perm[w] for w in block) for block in partition)


def canonical_cluster(size: int, partitions: Tuple[Partition, ...],
                      labels: Sequence = ()) -> Tuple[tuple, Tuple[Partition, ...]]:
    """
    Least (labels, partitions) over all renamings of range(size).

    Args:
        size: Number of worlds.
        partitions: One partition of range(size) per agent.
        labels: Optional per-world labels (for example valuation masks).

    Returns:
        The canonical (labels, partitions) pair; two valued clusters are isomorphic iff these agree.
    """
    best = None
    for perm in permutations(range(size)):
        moved = [None] * size
        for old, new in enumerate(perm):
            moved[new] = labels[old] if labels else None
        key = (tuple(moved) if labels else (), tuple(_relabel(p, perm) for p in partitions))
        if best is None or key < best:
            best = key
    return best


@lru_cache(maxsize=None)
def cluster_shapes(size: int, agents: int) -> Tuple[ClusterShape, ...]:
    """Agent-partition tuples on `size` worlds, one per isomorphism class, in canonical order."""
    seen = set()
    for partitions in product(list(set_partitions(size)), repeat=agents):
        _, canonical = canonical_cluster(size, tuple(partitions))
        seen.add(canonical)
    shapes = tuple(ClusterShape(size, p) for p in sorted(seen))
    logger.debug(f"{len(shapes)} cluster shapes of size {size} for {agents} agents")
    return shapes


def canonical_cluster_model(labels: Sequence[int], shape: ClusterShape) -> Tuple[int, tuple, Tuple[Partition, ...]]:
    """Canonical key of a valued cluster: size, then the least labels/partitions pair."""
    labels_key, partitions_key = canonical_cluster(shape.size, shape.partitions, tuple(labels))
    return shape.size, labels_key, partitions_key
