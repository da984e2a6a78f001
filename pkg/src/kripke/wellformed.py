"""Well-formedness checks for explicit relational frames.

Cluster frames satisfy every condition by construction; the checks matter for
frames imported from JSON and serve as a regression test for the constructors.
"""
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Set, Tuple, Union

from src.kripke.frame import ChainFrame, ClusterFrame

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


class Violation(NamedTuple):
    condition: str
    message: str


@dataclass(frozen=True)
class RelationalFrame:
    worlds: Tuple[int, ...]
    rt: FrozenSet[Pair]
    re: FrozenSet[Pair]
    agent_relations: Tuple[FrozenSet[Pair], ...]
    clusters: Optional[Tuple[FrozenSet[int], ...]] = None


def relational_view(frame: ClusterFrame) -> RelationalFrame:
    rt: Set[Pair] = set()
    re: Set[Pair] = set()
    agents = [set() for _ in range(frame.agents)]
    for index, cluster in enumerate(frame.clusters):
        inside = {(w, z) for w in cluster.worlds for z in cluster.worlds}
        re |= inside
        rt |= inside
        succ = frame.successors[index]
        if succ is not None:
            rt |= {(w, z) for w in cluster.worlds for z in frame.clusters[succ].worlds}
        for agent, partition in enumerate(cluster.partitions):
            for block in partition:
                agents[agent] |= {(w, z) for w in block for z in block}
    return RelationalFrame(frame.world_ids, frozenset(rt), frozenset(re),
                           tuple(frozenset(a) for a in agents),
                           tuple(frozenset(c.worlds) for c in frame.clusters))


def _mutual_classes(worlds: Tuple[int, ...], rt: FrozenSet[Pair]) -> Tuple[FrozenSet[int], ...]:
    parent = {w: w for w in worlds}

    def find(w):
        while parent[w] != w:
            parent[w] = parent[parent[w]]
            w = parent[w]
        return w

    for w, z in rt:
        if w != z and (z, w) in rt and w in parent and z in parent:
            parent[find(w)] = find(z)
    groups: Dict[int, Set[int]] = {}
    for w in worlds:
        groups.setdefault(find(w), set()).add(w)
    return tuple(sorted((frozenset(g) for g in groups.values()), key=min))


def _is_equivalence(worlds: Tuple[int, ...], relation: FrozenSet[Pair]) -> List[str]:
    problems = []
    if any((w, w) not in relation for w in worlds):
        problems.append("not reflexive")
    if any((z, w) not in relation for w, z in relation):
        problems.append("not symmetric")
    successors: Dict[int, Set[int]] = {}
    for w, z in relation:
        successors.setdefault(w, set()).add(z)
    if any((w, y) not in relation for w, z in relation for y in successors.get(z, ())):
        problems.append("not transitive")
    return problems


def _check_time(frame: RelationalFrame, clusters, cluster_of, linear: bool) -> List[Violation]:
    violations = []
    worlds = frame.worlds
    if any((w, w) not in frame.rt for w in worlds):
        violations.append(Violation('b', "R_T is not reflexive"))
    for cluster in clusters:
        if any((w, z) not in frame.rt for w in cluster for z in cluster):
            violations.append(Violation('b', f"cluster {sorted(cluster)} is not R_T-complete"))

    edges: Dict[int, Set[int]] = {i: set() for i in range(len(clusters))}
    for w, z in frame.rt:
        if w in cluster_of and z in cluster_of and cluster_of[w] != cluster_of[z]:
            edges[cluster_of[w]].add(cluster_of[z])
    for source, targets in edges.items():
        for target in targets:
            if any((w, z) not in frame.rt for w in clusters[source] for z in clusters[target]):
                violations.append(Violation('b', f"R_T edge from cluster {sorted(clusters[source])} to "
                                                 f"{sorted(clusters[target])} is not complete"))
        if len(targets) > 1:
            violations.append(Violation('b', f"cluster {sorted(clusters[source])} has "
                                             f"{len(targets)} successor clusters"))
        for middle in targets:
            for skipped in edges[middle]:
                if skipped in targets and skipped != source:
                    violations.append(Violation('b', f"R_T edge from {sorted(clusters[source])} skips "
                                                     f"cluster {sorted(clusters[middle])}"))

    state: Dict[int, int] = {}

    def has_cycle(node: int) -> bool:
        state[node] = 1
        for nxt in edges[node]:
            if state.get(nxt) == 1 or (nxt not in state and has_cycle(nxt)):
                return True
        state[node] = 2
        return False

    if any(node not in state and has_cycle(node) for node in edges):
        violations.append(Violation('b', "R_T has a cycle through distinct clusters"))

    if linear:
        indegree = {i: 0 for i in edges}
        for targets in edges.values():
            for target in targets:
                indegree[target] += 1
        starts = [i for i, d in indegree.items() if d == 0]
        if any(d > 1 for d in indegree.values()) or len(starts) != 1:
            violations.append(Violation('b', "clusters do not form a single linear chain"))
    return violations


def check_well_formed(frame: Union[ClusterFrame, RelationalFrame],
                      linear: Optional[bool] = None) -> List[Violation]:
    """
    Check the frame conditions (a)-(d) and PM.1-PM.3.

    Args:
        frame: A cluster frame or an explicit relational frame.
        linear: Require the clusters to form one chain. Defaults to True for chain frames.

    Returns:
        Violations found; an empty list means the frame is well formed.
    """
    if linear is None:
        linear = isinstance(frame, ChainFrame)
    if isinstance(frame, ClusterFrame):
        frame = relational_view(frame)

    worlds = frame.worlds
    clusters = frame.clusters if frame.clusters is not None else _mutual_classes(worlds, frame.rt)
    violations: List[Violation] = []

    cluster_of: Dict[int, int] = {}
    for index, cluster in enumerate(clusters):
        if not cluster:
            violations.append(Violation('a', f"cluster {index} is empty"))
        for w in cluster:
            if w in cluster_of:
                violations.append(Violation('a', f"world {w} lies in two clusters"))
            cluster_of[w] = index
    uncovered = set(worlds) - set(cluster_of)
    if uncovered:
        violations.append(Violation('a', f"worlds {sorted(uncovered)} lie in no cluster"))
    extra = set(cluster_of) - set(worlds)
    if extra:
        violations.append(Violation('a', f"clusters mention unknown worlds {sorted(extra)}"))

    violations.extend(_check_time(frame, clusters, cluster_of, linear))

    within = {(w, z) for cluster in clusters for w in cluster for z in cluster}
    if set(frame.re) != within:
        violations.append(Violation('c', "R_~ is not the universal relation on each cluster"))

    for agent, relation in enumerate(frame.agent_relations, start=1):
        for problem in _is_equivalence(worlds, relation):
            violations.append(Violation('d', f"R_{agent} is {problem}"))

    mutual = {(w, z) for w, z in frame.rt if (z, w) in frame.rt}
    if not frame.re <= mutual:
        violations.append(Violation('PM.1', "R_~ is not contained in R_T and its converse"))
    for agent, relation in enumerate(frame.agent_relations, start=1):
        if not relation <= frame.re:
            violations.append(Violation('PM.2', f"R_{agent} is not contained in R_~"))
    if not mutual <= frame.re:
        violations.append(Violation('PM.3', "R_T and its converse meet outside R_~"))

    if violations:
        logger.debug(f"Frame has {len(violations)} well-formedness violations")
    return violations
