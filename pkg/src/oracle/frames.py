"""Chain frames up to isomorphism and brute-force refutation of formulas on them."""
import logging
from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterator, Optional

from src.kripke.canonical import cluster_shapes
from src.kripke.frame import ChainFrame
from src.kripke.model import Countermodel, Model, Valuation
from src.kripke.semantics import extension_mask
from src.syntax.formula import Formula, max_agent, variables
from src.utils.errors import ConfigError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FrameBounds:
    max_clusters: int
    max_cluster_size: int
    agents: int

    def __post_init__(self):
        for name in ('max_clusters', 'max_cluster_size', 'agents'):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")

    def to_dict(self) -> Dict[str, int]:
        return {'max_clusters': self.max_clusters, 'max_cluster_size': self.max_cluster_size,
                'agents': self.agents}


def enumerate_chain_frames(bounds: FrameBounds) -> Iterator[ChainFrame]:
    """
    Every chain frame within the bounds, once per isomorphism class.

    Frames come by cluster count, then by the shape sequence. A chain has a unique first
    cluster, so two chains are isomorphic exactly when their shape sequences agree.
    """
    shapes = [shape for size in range(1, bounds.max_cluster_size + 1)
              for shape in cluster_shapes(size, bounds.agents)]
    for length in range(1, bounds.max_clusters + 1):
        for sequence in product(shapes, repeat=length):
            yield ChainFrame.from_shapes(sequence, bounds.agents)


def refute_on_frame(frame: ChainFrame, f: Formula) -> Optional[Countermodel]:
    """First valuation (mask order) and first world where `f` fails on this frame."""
    indices = sorted(variables(f))
    full = frame.full_mask
    for assignment in product(range(full + 1), repeat=len(indices)):
        masks = dict(zip(indices, assignment))
        holds = extension_mask(frame, masks, f)
        if holds != full:
            pos = (~holds & full & -(~holds & full)).bit_length() - 1
            valuation = Valuation.of({i: frame.worlds_of(m) for i, m in masks.items()})
            return Countermodel(Model(frame, valuation), frame.world_ids[pos], f)
    return None


def refute_formula(f: Formula, bounds: FrameBounds) -> Optional[Countermodel]:
    """
    A countermodel for `f` within the bounds, searching frames, then valuations, then worlds.

    None means no countermodel at these bounds, which does not make `f` a theorem.
    """
    if max_agent(f) > bounds.agents:
        raise ConfigError(f"Formula mentions agent {max_agent(f)} but bounds allow {bounds.agents}")
    for examined, frame in enumerate(enumerate_chain_frames(bounds), start=1):
        countermodel = refute_on_frame(frame, f)
        if countermodel is not None:
            logger.debug(f"Refuted on frame #{examined} at world {countermodel.world}")
            return countermodel
    return None
