"""Model checking over finite cluster frames, with world sets packed into int bitmasks."""
import logging
from itertools import product
from typing import Dict, FrozenSet, Optional

from src.kripke.frame import ClusterFrame
from src.kripke.model import Model, Valuation
from src.syntax.formula import (And, Bottom, BoxAgent, BoxE, BoxT, Formula, Implies, Not, Or,
                                Rule, Top, Var, rule_variables)
from src.utils.errors import UncoveredVariableError

logger = logging.getLogger(__name__)


def _box(relation_masks, extension: int) -> int:
    result = 0
    for pos, seen in enumerate(relation_masks):
        if seen & ~extension == 0:
            result |= 1 << pos
    return result


def extension_mask(frame: ClusterFrame, masks: Dict[int, int], f: Formula,
                   cache: Optional[Dict[Formula, int]] = None) -> int:
    """Bitmask of the frame positions where `f` holds under the variable masks."""
    if cache is None:
        cache = {}
    if f in cache:
        return cache[f]
    if isinstance(f, Var):
        if f.index not in masks:
            raise UncoveredVariableError(f"Valuation does not cover p{f.index}")
        result = masks[f.index]
    elif isinstance(f, Top):
        result = frame.full_mask
    elif isinstance(f, Bottom):
        result = 0
    elif isinstance(f, Not):
        result = frame.full_mask & ~extension_mask(frame, masks, f.sub, cache)
    elif isinstance(f, And):
        result = extension_mask(frame, masks, f.left, cache) & extension_mask(frame, masks, f.right, cache)
    elif isinstance(f, Or):
        result = extension_mask(frame, masks, f.left, cache) | extension_mask(frame, masks, f.right, cache)
    elif isinstance(f, Implies):
        left = extension_mask(frame, masks, f.left, cache)
        result = (frame.full_mask & ~left) | extension_mask(frame, masks, f.right, cache)
    elif isinstance(f, BoxT):
        result = _box(frame.rt_masks, extension_mask(frame, masks, f.sub, cache))
    elif isinstance(f, BoxE):
        result = _box(frame.e_masks, extension_mask(frame, masks, f.sub, cache))
    elif isinstance(f, BoxAgent):
        if not 1 <= f.agent <= frame.agents:
            raise ValueError(f"Agent {f.agent} does not exist in a frame with {frame.agents} agents")
        result = _box(frame.agent_masks[f.agent - 1], extension_mask(frame, masks, f.sub, cache))
    else:
        raise TypeError(f"Not a formula: {f!r}")
    cache[f] = result
    return result


def extension(model: Model, f: Formula) -> FrozenSet[int]:
    frame = model.frame
    return frame.worlds_of(extension_mask(frame, model.valuation.masks(frame), f))


def satisfies(model: Model, world: int, f: Formula) -> bool:
    frame = model.frame
    pos = frame.locate(world)
    return bool(extension_mask(frame, model.valuation.masks(frame), f) >> pos & 1)


def formula_valid_on_model(model: Model, f: Formula) -> bool:
    frame = model.frame
    return extension_mask(frame, model.valuation.masks(frame), f) == frame.full_mask


def refute_rule_on_frame(frame: ClusterFrame, rule: Rule) -> Optional[Valuation]:
    """
    First valuation (in mask order) making every premise globally true and the conclusion not.

    Only the rule's own variables are assigned.
    """
    indices = sorted(rule_variables(rule))
    full = frame.full_mask
    for assignment in product(range(full + 1), repeat=len(indices)):
        masks = dict(zip(indices, assignment))
        cache: Dict[Formula, int] = {}
        if all(extension_mask(frame, masks, p, cache) == full for p in rule.premises):
            if extension_mask(frame, masks, rule.conclusion, cache) != full:
                return Valuation.of({i: frame.worlds_of(m) for i, m in masks.items()})
    return None


def rule_valid_on_frame(frame: ClusterFrame, rule: Rule) -> bool:
    frame = getattr(frame, 'frame', frame)
    return refute_rule_on_frame(frame, rule) is None
