"""Labelings of the singleton tails w_1 ... w_J feeding a main cluster.

w_1 and w_2 carry the literal vector a of the top point; the worlds w_3 ... w_J
each see themselves and the next world, and w_J sees the main cluster. w_3 must
stay inside a, otherwise the <T> atoms of w_2 would differ from those of @.
"""
import logging
from collections import deque
from typing import Dict, List, NamedTuple, Optional, Tuple

from src.normal_form.labeling import LabelingEngine, is_subset

logger = logging.getLogger(__name__)


class TailPlan(NamedTuple):
    lits: Tuple[int, ...]
    refutes: bool

    @property
    def length(self) -> int:
        return len(self.lits) + 2


def _refutes(v: int) -> bool:
    return not v & 1


def shortest_tails(engine: LabelingEngine, a: int, union: int) -> Tuple[Optional[TailPlan], Optional[TailPlan]]:
    """Shortest tail of any kind and shortest tail containing a world where x0 fails."""
    plain = TailPlan((), False) if is_subset(union, a) else None
    flagged = None
    parent: Dict[Tuple[int, bool], Optional[Tuple[int, bool]]] = {}
    queue = deque()
    for v in engine.lits:
        if engine.singleton_ok(v, union):
            state = (v, _refutes(v))
            if state not in parent:
                parent[state] = None
                queue.append(state)

    def path(state) -> Tuple[int, ...]:
        lits = []
        while state is not None:
            lits.append(state[0])
            state = parent[state]
        return tuple(lits)

    while queue and (plain is None or flagged is None):
        state = queue.popleft()
        v, refutes = state
        if is_subset(v, a):
            if plain is None:
                plain = TailPlan(path(state), refutes)
            if refutes and flagged is None:
                flagged = TailPlan(path(state), True)
        for w in engine.lits:
            if engine.singleton_ok(w, v):
                following = (w, refutes or _refutes(w))
                if following not in parent:
                    parent[following] = state
                    queue.append(following)
    if plain is not None and plain.refutes and flagged is None:
        flagged = plain
    return plain, flagged


def fixed_length_tails(engine: LabelingEngine, a: int, union: int, length: int) -> List[TailPlan]:
    """
    The least tail of the given length and, if that one keeps x0 true throughout, the least tail
    that refutes x0. Tails are ordered lexicographically by w_3 ... w_J.
    """
    if length == 2:
        return [TailPlan((), False)] if is_subset(union, a) else []
    n = length - 2
    feasible: List[Dict[bool, set]] = [dict() for _ in range(n)]
    last = {v for v in engine.lits if engine.singleton_ok(v, union)}
    feasible[n - 1] = {False: last, True: {v for v in last if _refutes(v)}}
    for k in range(n - 2, -1, -1):
        feasible[k] = {
            need: {v for v in engine.lits
                   if any(engine.singleton_ok(v, w) for w in feasible[k + 1][need and not _refutes(v)])}
            for need in (False, True)
        }

    def pick(need: bool) -> Optional[TailPlan]:
        options = [v for v in feasible[0][need] if is_subset(v, a)]
        if not options:
            return None
        chosen = [min(options)]
        need = need and not _refutes(chosen[0])
        for k in range(1, n):
            v = min(w for w in feasible[k][need] if engine.singleton_ok(chosen[-1], w))
            chosen.append(v)
            need = need and not _refutes(v)
        return TailPlan(tuple(chosen), any(_refutes(v) for v in chosen))

    plain = pick(False)
    if plain is None:
        return []
    result = [plain]
    if not plain.refutes:
        flagged = pick(True)
        if flagged is not None:
            result.append(flagged)
    return result
