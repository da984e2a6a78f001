"""SP-frames: a main chain C_0 ... C_d, a top point @ after C_d, and a singleton tail into each C_i."""
import logging
from dataclasses import dataclass
from itertools import product
from typing import Any, Dict, Iterator, Sequence, Tuple

from src.kripke.canonical import cluster_shapes
from src.kripke.frame import Cluster, ClusterFrame, ClusterShape
from src.utils.errors import ConfigError, FrameError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchBounds:
    max_d: int
    max_cluster_size: int
    max_tail_len: int

    def __post_init__(self):
        if self.max_d < 0:
            raise ConfigError(f"max_d must be non-negative, got {self.max_d}")
        if self.max_cluster_size < 1:
            raise ConfigError(f"max_cluster_size must be positive, got {self.max_cluster_size}")
        if self.max_tail_len < 2:
            raise ConfigError(f"max_tail_len must be at least 2, got {self.max_tail_len}")

    @classmethod
    def from_theta_count(cls, s: int) -> 'SearchBounds':
        return cls(s + 2, max(s, 1), s + 2)

    def clip(self, other: 'SearchBounds') -> 'SearchBounds':
        return SearchBounds(min(self.max_d, other.max_d), min(self.max_cluster_size, other.max_cluster_size),
                            min(self.max_tail_len, other.max_tail_len))

    def to_dict(self) -> Dict[str, int]:
        return {'max_d': self.max_d, 'max_cluster_size': self.max_cluster_size, 'max_tail_len': self.max_tail_len}


@dataclass(frozen=True)
class SpFrame:
    frame: ClusterFrame
    main: Tuple[int, ...]
    tails: Tuple[Tuple[int, ...], ...]
    top: int

    @property
    def d(self) -> int:
        return len(self.main) - 1

    @property
    def agents(self) -> int:
        return self.frame.agents

    def main_cluster(self, i: int) -> Cluster:
        return self.frame.clusters[self.main[i]]

    @property
    def last_cluster(self) -> Cluster:
        return self.main_cluster(self.d)

    @property
    def dimensions(self) -> SearchBounds:
        return SearchBounds(self.d, max(len(self.main_cluster(i).worlds) for i in range(self.d + 1)),
                            max(len(t) for t in self.tails))

    def to_dict(self) -> Dict[str, Any]:
        return {'d': self.d, 'main': list(self.main), 'tails': [list(t) for t in self.tails], 'top': self.top}


def build_sp_frame(shapes: Sequence[ClusterShape], tail_lengths: Sequence[int], agents: int) -> SpFrame:
    """
    Lay out an SP-frame. World ids: main clusters C_0..C_d first, then @, then the tails in order.

    Args:
        shapes: Shapes of C_0 .. C_d.
        tail_lengths: J_i >= 2 for each main cluster.
        agents: Number of agents.
    """
    if len(shapes) != len(tail_lengths) or not shapes:
        raise FrameError("An SP-frame needs one tail length per main cluster")
    if any(length < 2 for length in tail_lengths):
        raise FrameError("Tails need at least two worlds")
    d = len(shapes) - 1
    clusters = []
    successors = []
    next_id = 0
    for i, shape in enumerate(shapes):
        clusters.append(Cluster.from_shape(shape, next_id))
        next_id += shape.size
        successors.append(i + 1)
    top = next_id
    clusters.append(Cluster.trivial((top,), agents))
    successors.append(None)
    next_id += 1
    tails = []
    for i, length in enumerate(tail_lengths):
        worlds = tuple(range(next_id, next_id + length))
        next_id += length
        for j, w in enumerate(worlds):
            clusters.append(Cluster.trivial((w,), agents))
            successors.append(len(clusters) if j + 1 < length else i)
        tails.append(worlds)
    frame = ClusterFrame(tuple(clusters), tuple(successors), agents)
    return SpFrame(frame, tuple(range(d + 1)), tuple(tails), top)


def sp_frame_from_dict(frame: ClusterFrame, data: Dict[str, Any]) -> SpFrame:
    try:
        sp = SpFrame(frame, tuple(data['main']), tuple(tuple(t) for t in data['tails']), int(data['top']))
    except (KeyError, TypeError) as e:
        raise FrameError(f"Malformed SP structure: {e}") from e
    if len(sp.tails) != len(sp.main):
        raise FrameError("An SP-frame needs one tail per main cluster")
    return sp


def enumerate_sp_frames(bounds: SearchBounds, agents: int) -> Iterator[SpFrame]:
    """
    All SP-frames within bounds, one per isomorphism class, ordered by d, then the sizes of
    C_0..C_d, then tail lengths, then partition shapes.
    """
    for d in range(bounds.max_d + 1):
        for sizes in product(range(1, bounds.max_cluster_size + 1), repeat=d + 1):
            for tail_lengths in product(range(2, bounds.max_tail_len + 1), repeat=d + 1):
                for shapes in product(*(cluster_shapes(size, agents) for size in sizes)):
                    yield build_sp_frame(shapes, tail_lengths, agents)
