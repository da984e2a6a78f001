"""Finite LTK_r frames represented as clusters joined by a cluster successor map.

R_T and R_~ are never stored: a world sees its own cluster and, through R_T,
the whole successor cluster. Chain frames, SP-frames and slice forests all use
the same representation.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from src.utils.errors import FrameError, UnknownWorldError

logger = logging.getLogger(__name__)

Block = Tuple[int, ...]
Partition = Tuple[Block, ...]


class ClusterShape(NamedTuple):
    """A cluster up to world names: size and, per agent, a partition of range(size)."""
    size: int
    partitions: Tuple[Partition, ...]


def normalize_partition(blocks: Iterable[Iterable[int]]) -> Partition:
    return tuple(sorted(tuple(sorted(block)) for block in blocks))


@dataclass(frozen=True)
class Cluster:
    worlds: Tuple[int, ...]
    partitions: Tuple[Partition, ...]

    def __post_init__(self):
        worlds = tuple(self.worlds)
        if not worlds:
            raise FrameError("A cluster needs at least one world")
        if len(set(worlds)) != len(worlds):
            raise FrameError(f"Duplicate worlds in cluster {worlds}")
        partitions = tuple(normalize_partition(p) for p in self.partitions)
        for agent, partition in enumerate(partitions, start=1):
            covered = [w for block in partition for w in block]
            if any(not block for block in partition):
                raise FrameError(f"Agent {agent} has an empty block in cluster {worlds}")
            if sorted(covered) != sorted(worlds):
                raise FrameError(f"Agent {agent} blocks {partition} do not partition cluster {worlds}")
        object.__setattr__(self, 'worlds', worlds)
        object.__setattr__(self, 'partitions', partitions)

    @classmethod
    def trivial(cls, worlds: Sequence[int], agents: int) -> 'Cluster':
        return cls(tuple(worlds), tuple((tuple(worlds),) for _ in range(agents)))

    @classmethod
    def discrete(cls, worlds: Sequence[int], agents: int) -> 'Cluster':
        return cls(tuple(worlds), tuple(tuple((w,) for w in worlds) for _ in range(agents)))

    @classmethod
    def from_shape(cls, shape: ClusterShape, first_id: int) -> 'Cluster':
        worlds = tuple(range(first_id, first_id + shape.size))
        return cls(worlds, tuple(tuple(tuple(worlds[i] for i in block) for block in partition)
                                 for partition in shape.partitions))

    @property
    def agents(self) -> int:
        return len(self.partitions)

    def block_of(self, agent: int, world: int) -> Block:
        for block in self.partitions[agent - 1]:
            if world in block:
                return block
        raise UnknownWorldError(f"World {world} is not in cluster {self.worlds}")

    def shape(self) -> ClusterShape:
        """The cluster's shape with worlds numbered by their position in `worlds`."""
        local = {w: i for i, w in enumerate(self.worlds)}
        return ClusterShape(len(self.worlds), tuple(
            normalize_partition((local[w] for w in block) for block in partition)
            for partition in self.partitions))


@dataclass(frozen=True)
class ClusterFrame:
    """Clusters plus, for each cluster, the index of its R_T-successor cluster (or None)."""
    clusters: Tuple[Cluster, ...]
    successors: Tuple[Optional[int], ...]
    agents: int

    def __post_init__(self):
        object.__setattr__(self, 'clusters', tuple(self.clusters))
        object.__setattr__(self, 'successors', tuple(self.successors))
        if len(self.clusters) != len(self.successors):
            raise FrameError("Every cluster needs a successor entry")
        seen = set()
        for cluster in self.clusters:
            if cluster.agents != self.agents:
                raise FrameError(f"Cluster {cluster.worlds} has partitions for {cluster.agents} agents, "
                                 f"expected {self.agents}")
            overlap = seen.intersection(cluster.worlds)
            if overlap:
                raise FrameError(f"Clusters overlap on worlds {sorted(overlap)}")
            seen.update(cluster.worlds)
        for index, succ in enumerate(self.successors):
            if succ is not None and not (0 <= succ < len(self.clusters) and succ != index):
                raise FrameError(f"Cluster {index} has invalid successor {succ}")

    @cached_property
    def world_ids(self) -> Tuple[int, ...]:
        return tuple(w for cluster in self.clusters for w in cluster.worlds)

    @cached_property
    def position(self) -> Dict[int, int]:
        return {w: i for i, w in enumerate(self.world_ids)}

    @cached_property
    def cluster_of(self) -> Tuple[int, ...]:
        return tuple(c for c, cluster in enumerate(self.clusters) for _ in cluster.worlds)

    @cached_property
    def cluster_masks(self) -> Tuple[int, ...]:
        return tuple(self.mask_of(cluster.worlds) for cluster in self.clusters)

    @cached_property
    def full_mask(self) -> int:
        return (1 << len(self.world_ids)) - 1

    @cached_property
    def e_masks(self) -> Tuple[int, ...]:
        return tuple(self.cluster_masks[c] for c in self.cluster_of)

    @cached_property
    def rt_masks(self) -> Tuple[int, ...]:
        masks = []
        for c in self.cluster_of:
            succ = self.successors[c]
            masks.append(self.cluster_masks[c] | (self.cluster_masks[succ] if succ is not None else 0))
        return tuple(masks)

    @cached_property
    def agent_masks(self) -> Tuple[Tuple[int, ...], ...]:
        """agent_masks[l - 1][pos]: mask of the agent-l block containing the world at pos."""
        result = []
        for agent in range(1, self.agents + 1):
            per_world = [0] * len(self.world_ids)
            for cluster in self.clusters:
                for block in cluster.partitions[agent - 1]:
                    mask = self.mask_of(block)
                    for w in block:
                        per_world[self.position[w]] = mask
            result.append(tuple(per_world))
        return tuple(result)

    @cached_property
    def predecessors(self) -> Tuple[Tuple[int, ...], ...]:
        preds: List[List[int]] = [[] for _ in self.clusters]
        for index, succ in enumerate(self.successors):
            if succ is not None:
                preds[succ].append(index)
        return tuple(tuple(p) for p in preds)

    def mask_of(self, worlds: Iterable[int]) -> int:
        mask = 0
        for w in worlds:
            mask |= 1 << self.locate(w)
        return mask

    def worlds_of(self, mask: int) -> FrozenSet[int]:
        return frozenset(w for i, w in enumerate(self.world_ids) if mask >> i & 1)

    def locate(self, world: int) -> int:
        try:
            return self.position[world]
        except KeyError:
            raise UnknownWorldError(f"World {world} is not part of the frame") from None

    def cluster_index_of(self, world: int) -> int:
        return self.cluster_of[self.locate(world)]

    @property
    def size(self) -> int:
        return len(self.world_ids)


@dataclass(frozen=True)
class ChainFrame(ClusterFrame):
    """A linear chain C_0 R_T C_1 ... R_T C_L."""

    @classmethod
    def of(cls, clusters: Sequence[Cluster], agents: int) -> 'ChainFrame':
        count = len(clusters)
        return cls(tuple(clusters), tuple(i + 1 if i + 1 < count else None for i in range(count)), agents)

    @classmethod
    def from_shapes(cls, shapes: Sequence[ClusterShape], agents: int) -> 'ChainFrame':
        clusters = []
        next_id = 0
        for shape in shapes:
            clusters.append(Cluster.from_shape(shape, next_id))
            next_id += shape.size
        return cls.of(clusters, agents)


def rt_successors(frame, world: int) -> FrozenSet[int]:
    """R_T-successors of a world: its cluster plus the next cluster. Accepts frames, SP-frames and models."""
    frame = getattr(frame, 'frame', frame)
    return frame.worlds_of(frame.rt_masks[frame.locate(world)])
