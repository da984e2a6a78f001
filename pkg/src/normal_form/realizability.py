"""Elimination of patterns that no world of a cluster frame can carry.

A pattern survives only if it respects reflexivity (a false diamond forces a
false literal), the inclusions R_l within R_~ within R_T, and has a witness
pattern for every true diamond over a false literal: inside its cluster, inside
its agent block, or in the next cluster. Elimination runs to the greatest
fixpoint, so the result is a superset of the patterns any labeled frame uses.
"""
import logging
from dataclasses import dataclass
from itertools import product
from typing import Dict, FrozenSet, List, Optional, Tuple

from src.normal_form.theta import DIAMOND_E, DIAMOND_T, PatternKey, ThetaSet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Realizability:
    patterns: FrozenSet[PatternKey]
    lits: Tuple[int, ...]
    theta_count: int
    refutable: bool


class _Layout:
    def __init__(self, thetas: ThetaSet):
        self.agents = thetas.agents
        self.var_count = thetas.var_count
        self.constrained = thetas.constrained
        self.slots: Dict[Tuple[int, int], int] = {atom: t for t, atom in enumerate(self.constrained)}
        self.cluster_mask = sum(1 << t for t, (_, z) in enumerate(self.constrained) if z in (DIAMOND_T, DIAMOND_E))
        self.block_masks = [self.cluster_mask | sum(1 << t for t, (_, z) in enumerate(self.constrained) if z == 2 + l)
                            for l in range(1, self.agents + 1)]

    def value(self, bits: int, i: int, z: int) -> Optional[int]:
        t = self.slots.get((i, z))
        return None if t is None else bits >> t & 1

    def locally_consistent(self, key: PatternKey) -> bool:
        lits, bits = key
        for i in range(self.var_count):
            values = [self.value(bits, i, z) for z in range(1, 3 + self.agents)]
            if lits >> i & 1 and 0 in values:
                return False
            t_value, e_value, agent_values = values[0], values[1], values[2:]
            if e_value == 1 and t_value == 0:
                return False
            if any(a == 1 and (e_value == 0 or t_value == 0) for a in agent_values):
                return False
        return True

    def next_cluster_ok(self, key: PatternKey, other: PatternKey) -> bool:
        """Can `other` sit in the successor cluster of a world carrying `key`?"""
        lits, bits = key
        other_lits, other_bits = other
        for i in range(self.var_count):
            if self.value(bits, i, DIAMOND_T) != 0:
                continue
            if other_lits >> i & 1:
                return False
            for z in range(DIAMOND_E, 3 + self.agents):
                if self.value(other_bits, i, z) == 1:
                    return False
        return True

    def completions(self, key: PatternKey, i: int) -> int:
        lits, bits = key
        fixed = [self.value(bits, i, z) for z in range(1, 3 + self.agents)]
        free = [n for n, v in enumerate(fixed) if v is None]
        count = 0
        for choice in product((0, 1), repeat=len(free)):
            values = list(fixed)
            for n, v in zip(free, choice):
                values[n] = v
            t_value, e_value, agent_values = values[0], values[1], values[2:]
            if lits >> i & 1 and 0 in values:
                continue
            if e_value > t_value or any(a > e_value for a in agent_values):
                continue
            count += 1
        return count


def _has_witnesses(layout: _Layout, key: PatternKey, alive: List[PatternKey],
                   cluster_lits: Dict[int, int], block_lits: List[Dict[int, int]]) -> bool:
    lits, bits = key
    next_union = None
    for i in range(layout.var_count):
        if lits >> i & 1:
            continue
        for l in range(1, layout.agents + 1):
            if layout.value(bits, i, 2 + l) == 1:
                if not block_lits[l - 1].get(bits & layout.block_masks[l - 1], 0) >> i & 1:
                    return False
        if layout.value(bits, i, DIAMOND_E) == 1:
            if not cluster_lits.get(bits & layout.cluster_mask, 0) >> i & 1:
                return False
        if layout.value(bits, i, DIAMOND_T) == 1:
            if cluster_lits.get(bits & layout.cluster_mask, 0) >> i & 1:
                continue
            if next_union is None:
                next_union = 0
                for other in alive:
                    if layout.next_cluster_ok(key, other):
                        next_union |= other[0]
            if not next_union >> i & 1:
                return False
    return True


def realizable_patterns(thetas: ThetaSet) -> Realizability:
    """Greatest set of patterns closed under the local and witness conditions."""
    layout = _Layout(thetas)
    alive = sorted(key for key in thetas.patterns if layout.locally_consistent(key))
    while True:
        cluster_lits: Dict[int, int] = {}
        block_lits: List[Dict[int, int]] = [{} for _ in range(layout.agents)]
        for lits, bits in alive:
            sig = bits & layout.cluster_mask
            cluster_lits[sig] = cluster_lits.get(sig, 0) | lits
            for l in range(layout.agents):
                block_sig = bits & layout.block_masks[l]
                block_lits[l][block_sig] = block_lits[l].get(block_sig, 0) | lits
        kept = [key for key in alive if _has_witnesses(layout, key, alive, cluster_lits, block_lits)]
        if len(kept) == len(alive):
            break
        alive = kept

    count = 0
    for key in alive:
        product_count = 1
        for i in range(layout.var_count):
            product_count *= layout.completions(key, i)
        count += product_count
    refutable = any(not lits & 1 for lits, _ in alive)
    logger.info(f"{len(alive)} of {len(thetas.patterns)} patterns realizable, "
                f"{count} realizable thetas, refutable={refutable}")
    return Realizability(frozenset(alive), tuple(sorted({lits for lits, _ in alive})), count, refutable)
