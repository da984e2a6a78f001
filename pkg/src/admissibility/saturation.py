"""Exhaustive search over abstract SP-frame labelings.

A main cluster is summarized by the union of its literal vectors; which unions
can follow which depends only on the unions, so the reachable summaries form a
finite graph. Walking it from C_d downwards either reaches a summary with a
world refuting x0, from which a concrete witness is assembled, or proves that
no SP-frame of any size has a witness.
"""
import logging
from collections import deque
from typing import Dict, List, Optional, Sequence, Tuple

from src.admissibility.comparators import ClusterComparator
from src.admissibility.sp_frame import build_sp_frame
from src.admissibility.tails import TailPlan, shortest_tails
from src.admissibility.witness import Witness, make_witness
from src.kripke.frame import ClusterShape, normalize_partition
from src.normal_form.labeling import LabelingEngine, WorldType, prune_types
from src.normal_form.reduce import ReducedRule

logger = logging.getLogger(__name__)

State = Tuple[int, bool]


def types_shape(types: Sequence[WorldType], agents: int) -> ClusterShape:
    """A cluster with one world per type; agent blocks group the worlds with equal block unions."""
    partitions = []
    for agent in range(agents):
        groups: Dict[int, List[int]] = {}
        for w, (_, blocks) in enumerate(types):
            groups.setdefault(blocks[agent], []).append(w)
        partitions.append(normalize_partition(groups.values()))
    return ClusterShape(len(types), tuple(partitions))


def _any_refutes(types: Sequence[WorldType]) -> bool:
    return any(not v & 1 for v, _ in types)


class WitnessAnalysis:
    def __init__(self, rr: ReducedRule, engine: LabelingEngine, comparator: ClusterComparator):
        self.rr = rr
        self.engine = engine
        self.comparator = comparator
        self._tails: Dict[Tuple[int, int], Tuple[Optional[TailPlan], Optional[TailPlan]]] = {}

    def tails(self, a: int, union: int) -> Tuple[Optional[TailPlan], Optional[TailPlan]]:
        key = (a, union)
        if key not in self._tails:
            self._tails[key] = shortest_tails(self.engine, a, union)
        return self._tails[key]

    def _top_ok(self, types: Sequence[WorldType], a: int) -> bool:
        shape = types_shape(types, self.engine.agents)
        return not self.comparator.isomorphic([v for v, _ in types], shape.partitions, a)

    def _step(self, a: int, union: int, next_union: int, top: bool) -> Optional[Tuple[tuple, bool]]:
        types = self.engine.cluster_types(union, next_union)
        if types is None or (top and not self._top_ok(types, a)):
            return None
        plain, flagged = self.tails(a, union)
        if plain is None:
            return None
        return types, _any_refutes(types) or flagged is not None

    def _path_for(self, a: int) -> Optional[List[int]]:
        """Unions of C_d, C_(d-1), ..., C_0 along a shortest walk to a refuting summary."""
        parent: Dict[State, Optional[State]] = {}
        queue = deque()
        for union in self.engine.unions():
            step = self._step(a, union, a, top=True)
            if step is None:
                continue
            state = (union, (not a & 1) or step[1])
            if state not in parent:
                parent[state] = None
                queue.append(state)
        while queue:
            state = queue.popleft()
            if state[1]:
                path = []
                while state is not None:
                    path.append(state[0])
                    state = parent[state]
                return path[::-1]
            for union in self.engine.unions():
                step = self._step(a, union, state[0], top=False)
                if step is None:
                    continue
                following = (union, step[1])
                if following not in parent:
                    parent[following] = state
                    queue.append(following)
        return None

    def _minimal(self, types: Sequence[WorldType], union: int, a: int, top: bool, refute: bool) -> Tuple[WorldType, ...]:
        def valid(candidate: List[WorldType]) -> bool:
            if not candidate:
                return False
            covered = 0
            for v, _ in candidate:
                covered |= v
            if covered != union or prune_types(candidate, self.engine.agents) != set(candidate):
                return False
            if refute and not _any_refutes(candidate):
                return False
            return not top or self._top_ok(candidate, a)

        current = list(types)
        for t in reversed(list(types)):
            trial = [x for x in current if x != t]
            if valid(trial):
                current = trial
        return tuple(current)

    def construct(self) -> Optional[Witness]:
        """A witness built from the first top vector whose summary graph reaches a refutation, or None."""
        for a in self.engine.top_candidates():
            path = self._path_for(a)
            if path is not None:
                witness = self._assemble(a, path)
                logger.info(f"Abstract search found a witness: d={witness.sp.d}, "
                            f"dimensions {witness.sp.dimensions.to_dict()}")
                return witness
        logger.info("Abstract search found no SP-frame witness")
        return None

    def _assemble(self, a: int, path: List[int]) -> Witness:
        agents = self.engine.agents
        source = None
        if a & 1:
            next_union = a
            for p, union in enumerate(path):
                types = self.engine.cluster_types(union, next_union)
                if _any_refutes(types):
                    source = ('cluster', p)
                    break
                if self.tails(a, union)[1] is not None:
                    source = ('tail', p)
                    break
                next_union = union

        clusters = []
        plans = []
        next_union = a
        for p, union in enumerate(path):
            types = self.engine.cluster_types(union, next_union)
            clusters.append(self._minimal(types, union, a, top=(p == 0), refute=(source == ('cluster', p))))
            plain, flagged = self.tails(a, union)
            plans.append(flagged if source == ('tail', p) else plain)
            next_union = union

        clusters.reverse()
        plans.reverse()
        sp = build_sp_frame([types_shape(c, agents) for c in clusters], [plan.length for plan in plans], agents)
        lits: Dict[int, int] = {sp.top: a}
        for i, types in enumerate(clusters):
            for w, (v, _) in zip(sp.main_cluster(i).worlds, types):
                lits[w] = v
            tail = sp.tails[i]
            lits[tail[0]] = a
            lits[tail[1]] = a
            for w, v in zip(tail[2:], plans[i].lits):
                lits[w] = v
        return make_witness(self.rr, sp, lits)
