"""Layered slices of the characterizing model and experiments on them.

Layer 1 holds one copy of every catalogue cluster. Each cluster of layer j gets
catalogue copies as immediate R_T-predecessors in layer j+1: at layer 2 only the
entries other than its own, from layer 3 on all of them.
"""
import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Dict, FrozenSet, List, Optional, Tuple

from src.charmodel.catalogue import ClusterCatalogue
from src.kripke.frame import Cluster, ClusterFrame
from src.kripke.model import Model, Valuation
from src.kripke.semantics import extension
from src.syntax.formula import Formula, time_degree, variables
from src.utils.errors import ConfigError, UncoveredVariableError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SliceModel:
    model: Model
    layers: Tuple[int, ...]
    parents: Tuple[Optional[int], ...]
    entries: Tuple[int, ...]
    catalogue: ClusterCatalogue
    depth: int
    step2_all: bool

    @property
    def frame(self) -> ClusterFrame:
        return self.model.frame

    def cluster_tags(self) -> List[Dict[str, Any]]:
        return [{'layer': layer, 'parent': parent, 'entry': entry}
                for layer, parent, entry in zip(self.layers, self.parents, self.entries)]

    def layer_of(self, world: int) -> int:
        return self.layers[self.frame.cluster_index_of(world)]

    def label_of(self, world: int) -> int:
        label = 0
        for index, worlds in self.model.valuation.assignments:
            if world in worlds:
                label |= 1 << (index - 1)
        return label


class SliceReport:
    def __init__(self, holds_at: FrozenSet[int], refuted_at: FrozenSet[int], evaluable_at: FrozenSet[int]):
        self.holds_at = holds_at
        self.refuted_at = refuted_at
        self.evaluable_at = evaluable_at

    def to_dict(self) -> Dict[str, List[int]]:
        return {'holds_at': sorted(self.holds_at), 'refuted_at': sorted(self.refuted_at),
                'evaluable_at': sorted(self.evaluable_at)}


def build_slices(catalogue: ClusterCatalogue, depth: int, step2_all: bool = False) -> SliceModel:
    """
    Build layers 1..depth.

    Args:
        catalogue: The clusters to adjoin.
        depth: Number of layers, at least 1.
        step2_all: Adjoin every entry at layer 2 as well, instead of only the entries
            different from the cluster being extended.
    """
    if depth < 1:
        raise ConfigError(f"Slice depth must be at least 1, got {depth}")
    agents = catalogue.agents
    clusters: List[Cluster] = []
    successors: List[Optional[int]] = []
    layers: List[int] = []
    entries: List[int] = []
    truth: Dict[int, List[int]] = {j: [] for j in range(1, catalogue.var_count + 1)}
    next_id = 0

    def adjoin(entry_index: int, successor: Optional[int], layer: int):
        nonlocal next_id
        entry = catalogue.entries[entry_index]
        cluster = Cluster.from_shape(entry.shape, next_id)
        for local, world in enumerate(cluster.worlds):
            for j in truth:
                if entry.labels[local] >> (j - 1) & 1:
                    truth[j].append(world)
        next_id += entry.size
        clusters.append(cluster)
        successors.append(successor)
        layers.append(layer)
        entries.append(entry_index)

    for e in range(len(catalogue)):
        adjoin(e, None, 1)
    previous = range(len(clusters))
    for layer in range(2, depth + 1):
        start = len(clusters)
        for parent in previous:
            for e in range(len(catalogue)):
                if layer == 2 and not step2_all and e == entries[parent]:
                    continue
                adjoin(e, parent, layer)
        previous = range(start, len(clusters))

    frame = ClusterFrame(tuple(clusters), tuple(successors), agents)
    model = Model(frame, Valuation.of(truth))
    logger.info(f"Built {depth} slice layers: {len(clusters)} clusters, {frame.size} worlds")
    return SliceModel(model, tuple(layers), tuple(successors), tuple(entries), catalogue, depth, step2_all)


def mc_on_slices(sm: SliceModel, f: Formula) -> SliceReport:
    """
    Evaluate `f` at the worlds whose forward chain covers its time degree.

    A world in layer j has j-1 clusters after it, so it is evaluable when j-1 >= td(f).
    """
    for index in sorted(variables(f)):
        if not 1 <= index <= sm.catalogue.var_count:
            raise UncoveredVariableError(
                f"p{index} is outside p1..p{sm.catalogue.var_count} of this slice model")
    td = time_degree(f)
    frame = sm.frame
    evaluable = frozenset(w for cluster, layer in zip(frame.clusters, sm.layers) if layer - 1 >= td
                          for w in cluster.worlds)
    holds = extension(sm.model, f)
    return SliceReport(holds & evaluable, evaluable - holds, evaluable)


def _bits(mask: int) -> List[int]:
    positions = []
    while mask:
        low = mask & -mask
        positions.append(low.bit_length() - 1)
        mask ^= low
    return positions


def bounded_bisim_classes(sm: SliceModel, t: int) -> Tuple[FrozenSet[int], ...]:
    """
    Worlds grouped by t rounds of back-and-forth refinement over R_T, R_~ and every R_i.

    Round 0 groups by valuation. Classes are listed by their least world.
    """
    frame = sm.frame
    worlds = frame.world_ids
    colors = [sm.label_of(w) for w in worlds]
    relations = [frame.rt_masks, frame.e_masks] + list(frame.agent_masks)
    neighbours = [[_bits(masks[pos]) for masks in relations] for pos in range(len(worlds))]
    for _ in range(t):
        signatures = [(colors[pos], tuple(tuple(sorted({colors[q] for q in seen})) for seen in neighbours[pos]))
                      for pos in range(len(worlds))]
        ranks = {sig: n for n, sig in enumerate(sorted(set(signatures)))}
        refined = [ranks[sig] for sig in signatures]
        stable = len(set(refined)) == len(set(colors))
        colors = refined
        if stable:
            break
    groups: Dict[int, List[int]] = {}
    for world, color in zip(worlds, colors):
        groups.setdefault(color, []).append(world)
    return tuple(sorted((frozenset(g) for g in groups.values()), key=min))


def singleton_classes(sm: SliceModel, t: int) -> FrozenSet[int]:
    """Worlds that are alone in their depth-t class."""
    return frozenset(w for group in bounded_bisim_classes(sm, t) if len(group) == 1 for w in group)


def duplicate_world_pairs(sm: SliceModel) -> Tuple[Tuple[int, int], ...]:
    """
    Pairs of worlds in one cluster that swap by an automorphism fixing everything else.

    They carry the same valuation and, for each agent, share a block or both sit in
    singleton blocks.
    """
    pairs = []
    for cluster in sm.frame.clusters:
        for a, b in combinations(cluster.worlds, 2):
            if sm.label_of(a) != sm.label_of(b):
                continue
            swappable = True
            for agent in range(1, cluster.agents + 1):
                block_a = cluster.block_of(agent, a)
                block_b = cluster.block_of(agent, b)
                if block_a != block_b and not (len(block_a) == 1 and len(block_b) == 1):
                    swappable = False
                    break
            if swappable:
                pairs.append((a, b))
    return tuple(pairs)


def duplicate_disagreements(sm: SliceModel, formulas) -> List[Tuple[Tuple[int, int], Formula]]:
    """Duplicate pairs told apart by one of `formulas`; expected to be empty."""
    pairs = duplicate_world_pairs(sm)
    found = []
    for f in formulas:
        holds = extension(sm.model, f)
        found.extend(((a, b), f) for a, b in pairs if (a in holds) != (b in holds))
    return found


def layer_sizes(sm: SliceModel) -> Tuple[int, ...]:
    counts = [0] * sm.depth
    for layer in sm.layers:
        counts[layer - 1] += 1
    return tuple(counts)


def expected_layer_sizes(c: int, depth: int, step2_all: bool = False) -> Tuple[int, ...]:
    sizes = [c]
    for layer in range(2, depth + 1):
        factor = c - 1 if layer == 2 and not step2_all else c
        sizes.append(sizes[-1] * factor)
    return tuple(sizes)
