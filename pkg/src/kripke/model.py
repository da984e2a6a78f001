import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Mapping, Tuple

from src.kripke.frame import ChainFrame, ClusterFrame
from src.syntax.formula import Formula
from src.utils.errors import UncoveredVariableError, UnknownWorldError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Valuation:
    """Variable index -> set of worlds where the variable holds."""
    assignments: Tuple[Tuple[int, FrozenSet[int]], ...]

    @classmethod
    def of(cls, mapping: Mapping[int, Iterable[int]]) -> 'Valuation':
        return cls(tuple(sorted((i, frozenset(ws)) for i, ws in mapping.items())))

    def as_dict(self) -> Dict[int, FrozenSet[int]]:
        return dict(self.assignments)

    def variables(self) -> FrozenSet[int]:
        return frozenset(i for i, _ in self.assignments)

    def get(self, index: int) -> FrozenSet[int]:
        for i, worlds in self.assignments:
            if i == index:
                return worlds
        raise UncoveredVariableError(f"Valuation does not cover p{index}")

    def masks(self, frame: ClusterFrame) -> Dict[int, int]:
        return {i: frame.mask_of(ws) for i, ws in self.assignments}


@dataclass(frozen=True)
class Model:
    frame: ClusterFrame
    valuation: Valuation

    def __post_init__(self):
        known = set(self.frame.world_ids)
        for index, worlds in self.valuation.assignments:
            missing = worlds - known
            if missing:
                raise UnknownWorldError(f"Valuation of p{index} mentions unknown worlds {sorted(missing)}")


@dataclass(frozen=True)
class Countermodel:
    """A model and a world where `formula` is false."""
    model: Model
    world: int
    formula: Formula

    def verify(self) -> bool:
        from src.kripke.semantics import satisfies
        return not satisfies(self.model, self.world, self.formula)


def generated_chain(model: Model, world: int) -> Model:
    """
    The submodel generated by `world` in a frame where every cluster has at most one successor.

    Truth at every world of the result equals truth in the original model.
    """
    frame = model.frame
    index = frame.cluster_index_of(world)
    chain = []
    seen = set()
    while index is not None and index not in seen:
        seen.add(index)
        chain.append(frame.clusters[index])
        index = frame.successors[index]
    sub_frame = ChainFrame.of(chain, frame.agents)
    kept = set(sub_frame.world_ids)
    valuation = Valuation(tuple((i, ws & kept) for i, ws in model.valuation.assignments))
    return Model(sub_frame, valuation)
