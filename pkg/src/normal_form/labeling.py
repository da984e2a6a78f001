"""Labeling search: assigning literal vectors to worlds so that every world carries a theta.

A world's theta is fixed by the literal vectors around it: <T> atoms are the
union over its cluster and the successor cluster, <E> atoms the union over its
cluster, <A_l> atoms the union over its agent-l block. Clusters are therefore
labeled one at a time given the union of their successor cluster.
"""
import logging
from itertools import product
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Sequence, Tuple

from src.kripke.frame import ClusterFrame, ClusterShape
from src.normal_form.reduce import ReducedRule
from src.normal_form.theta import PatternKey, ThetaSet

logger = logging.getLogger(__name__)

WorldType = Tuple[int, Tuple[int, ...]]


class ClusterLabeling(NamedTuple):
    lits: Tuple[int, ...]
    blocks: Tuple[Tuple[int, ...], ...]
    union: int
    refutes: bool


def block_unions(shape: ClusterShape, lits: Sequence[int]) -> Tuple[Tuple[int, ...], ...]:
    """Per world, the union of literal vectors over each of its agent blocks."""
    result = [[0] * len(shape.partitions) for _ in range(shape.size)]
    for agent, partition in enumerate(shape.partitions):
        for block in partition:
            union = 0
            for w in block:
                union |= lits[w]
            for w in block:
                result[w][agent] = union
    return tuple(tuple(r) for r in result)


def is_subset(small: int, large: int) -> bool:
    return small & ~large == 0


class LabelingEngine:
    """
    Labeling search over a theta set.

    Args:
        thetas: The theta set of a reduced rule.
        patterns: Accepted pattern keys; defaults to all patterns of `thetas`.
        lits: Candidate literal vectors; defaults to those occurring in `patterns`.
    """

    def __init__(self, thetas: ThetaSet, patterns: Optional[FrozenSet[PatternKey]] = None,
                 lits: Optional[Sequence[int]] = None):
        self.thetas = thetas
        self.agents = thetas.agents
        self.patterns = thetas.patterns if patterns is None else patterns
        self.lits = tuple(sorted(set(lits) if lits is not None else {v for v, _ in self.patterns}))
        self._outcomes: Dict[tuple, List[ClusterLabeling]] = {}
        self._types: Dict[Tuple[int, int], Optional[Tuple[WorldType, ...]]] = {}
        self._unions: Optional[Tuple[int, ...]] = None

    def accepts(self, lits: int, dt: int, de: int, dag: Sequence[int]) -> bool:
        return self.thetas.key_of(lits, dt, de, dag) in self.patterns

    def singleton_ok(self, lits: int, next_union: int) -> bool:
        """Can a one-world cluster with these literals precede a cluster with union `next_union`?"""
        return self.accepts(lits, lits | next_union, lits, (lits,) * self.agents)

    def top_candidates(self) -> Tuple[int, ...]:
        """Literal vectors a one-world cluster without successor can carry."""
        return tuple(v for v in self.lits if self.singleton_ok(v, 0))

    def _labelings(self, shape: ClusterShape, next_union: int) -> List[ClusterLabeling]:
        result = []
        for lits in product(self.lits, repeat=shape.size):
            union = 0
            for v in lits:
                union |= v
            blocks = block_unions(shape, lits)
            dt = union | next_union
            if all(self.accepts(v, dt, union, blocks[w]) for w, v in enumerate(lits)):
                result.append(ClusterLabeling(lits, blocks, union, any(not v & 1 for v in lits)))
        return result

    def cluster_outcomes(self, shape: ClusterShape, next_union: int, top: Optional[int] = None,
                         comparator=None) -> List[ClusterLabeling]:
        """
        Least labeling of the cluster for each reachable (union, refutes) outcome, in labeling order.

        When `top` is given the cluster is the last main cluster of an SP-frame: worlds must carry
        distinct thetas and the labeled cluster must not be isomorphic to the top point.
        """
        key = (shape, next_union, top, getattr(comparator, 'mode', None))
        if key in self._outcomes:
            return self._outcomes[key]
        seen = set()
        outcomes = []
        for labeling in self._labelings(shape, next_union):
            if top is not None:
                types = list(zip(labeling.lits, labeling.blocks))
                if len(set(types)) != len(types):
                    continue
                if comparator is not None and comparator.isomorphic(labeling.lits, shape.partitions, top):
                    continue
            outcome = (labeling.union, labeling.refutes)
            if outcome not in seen:
                seen.add(outcome)
                outcomes.append(labeling)
        self._outcomes[key] = outcomes
        return outcomes

    def unions(self) -> Tuple[int, ...]:
        """All unions of nonempty sets of candidate literal vectors."""
        if self._unions is None:
            found = set(self.lits)
            frontier = list(found)
            while frontier:
                fresh = []
                for u in frontier:
                    for v in self.lits:
                        w = u | v
                        if w not in found:
                            found.add(w)
                            fresh.append(w)
                frontier = fresh
            self._unions = tuple(sorted(found))
        return self._unions

    def cluster_types(self, union: int, next_union: int) -> Optional[Tuple[WorldType, ...]]:
        """
        Largest set of world types (literals, block unions) that labels a cluster with this union.

        Any labeled cluster with this union and successor union uses only these types, and the
        set itself is a labeling when it is returned. None when no cluster has this union.
        """
        key = (union, next_union)
        if key in self._types:
            return self._types[key]
        inside = [v for v in self.lits if is_subset(v, union)]
        block_choices = [u for u in self.unions() if is_subset(u, union)]
        dt = union | next_union
        types = set()
        for v in inside:
            options = [u for u in block_choices if is_subset(v, u)]
            for blocks in product(options, repeat=self.agents):
                if self.accepts(v, dt, union, blocks):
                    types.add((v, blocks))
        types = prune_types(types, self.agents)
        result = tuple(sorted(types)) if types and _union_of(types) == union else None
        self._types[key] = result
        return result

    def refutation(self, frame: ClusterFrame) -> Optional[Dict[int, int]]:
        """
        Literal vectors for every world such that all worlds carry accepted thetas and x0 fails
        somewhere, or None. Requires every cluster to have at most one successor.
        """
        memo: Dict[Tuple[int, int, bool], Optional[Dict[int, int]]] = {}

        def solve(index: int, next_union: int, need: bool) -> Optional[Dict[int, int]]:
            key = (index, next_union, need)
            if key in memo:
                return memo[key]
            cluster = frame.clusters[index]
            result = None
            for labeling in self.cluster_outcomes(cluster.shape(), next_union):
                assignment = dict(zip(cluster.worlds, labeling.lits))
                still_needed = need and not labeling.refutes
                parts = []
                for pred in frame.predecessors[index]:
                    part = solve(pred, labeling.union, False)
                    if part is None:
                        break
                    parts.append(part)
                else:
                    if still_needed:
                        for n, pred in enumerate(frame.predecessors[index]):
                            part = solve(pred, labeling.union, True)
                            if part is not None:
                                parts[n] = part
                                still_needed = False
                                break
                    if not still_needed:
                        for part in parts:
                            assignment.update(part)
                        result = assignment
                        break
            memo[key] = result
            return result

        roots = [i for i, succ in enumerate(frame.successors) if succ is None]
        assignment: Dict[int, int] = {}
        plain = []
        for root in roots:
            part = solve(root, 0, False)
            if part is None:
                return None
            plain.append(part)
        for n, root in enumerate(roots):
            part = solve(root, 0, True)
            if part is not None:
                plain[n] = part
                for p in plain:
                    assignment.update(p)
                return assignment
        return None


def _union_of(types) -> int:
    union = 0
    for v, _ in types:
        union |= v
    return union


def prune_types(types, agents: int) -> set:
    """Drop types whose agent-block union is not covered by the types sharing it, until stable."""
    types = set(types)
    changed = True
    while changed:
        changed = False
        for agent in range(agents):
            cover: Dict[int, int] = {}
            for v, blocks in types:
                cover[blocks[agent]] = cover.get(blocks[agent], 0) | v
            bad = {t for t in types if cover[t[1][agent]] != t[1][agent]}
            if bad:
                types -= bad
                changed = True
    return types


def reduced_rule_valid_on_frame(frame: ClusterFrame, rr: ReducedRule) -> bool:
    """Frame validity of eps / x0 decided by labeling search instead of a valuation sweep."""
    frame = getattr(frame, 'frame', frame)
    return LabelingEngine(rr.thetas).refutation(frame) is None
