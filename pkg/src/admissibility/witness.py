"""Witness certificates for non-admissibility and their independent re-verification."""
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, NamedTuple, Optional, Tuple

from src.admissibility.comparators import get_comparator
from src.admissibility.sp_frame import SearchBounds, SpFrame, sp_frame_from_dict
from src.kripke.frame import ClusterFrame
from src.kripke.model import Model, Valuation
from src.kripke.semantics import satisfies
from src.kripke.serialization import model_from_dict, model_to_dict
from src.kripke.wellformed import Violation, check_well_formed
from src.normal_form.reduce import ReducedRule, theta_satisfied
from src.normal_form.theta import Theta
from src.syntax.formula import Var
from src.utils.errors import WitnessError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Witness:
    sp: SpFrame
    labeling: Tuple[Tuple[int, int], ...]
    failing_world: int
    theta_a: int

    def label_of(self, world: int) -> int:
        return dict(self.labeling)[world]


class WitnessReport(NamedTuple):
    ok: bool
    violations: Tuple[Violation, ...]


def world_thetas(rr: ReducedRule, frame: ClusterFrame, lits_by_world: Mapping[int, int]) -> Dict[int, Theta]:
    """The theta each world carries when the literal vectors are `lits_by_world`."""
    lits = [lits_by_world[w] for w in frame.world_ids]

    def union(mask: int) -> int:
        result = 0
        for pos, v in enumerate(lits):
            if mask >> pos & 1:
                result |= v
        return result

    thetas = {}
    for pos, w in enumerate(frame.world_ids):
        dag = tuple(union(frame.agent_masks[l][pos]) for l in range(frame.agents))
        thetas[w] = rr.thetas.theta_of(lits[pos], union(frame.rt_masks[pos]), union(frame.e_masks[pos]), dag)
    return thetas


def make_witness(rr: ReducedRule, sp: SpFrame, lits_by_world: Mapping[int, int]) -> Witness:
    """Label an SP-frame from literal vectors. Raises WitnessError if some world's theta is not in the set."""
    labeling = []
    for w, theta in sorted(world_thetas(rr, sp.frame, lits_by_world).items()):
        if theta not in rr.thetas:
            raise WitnessError(f"World {w} carries {theta.describe()}, which is not a theta of the rule")
        labeling.append((w, rr.thetas.index(theta)))
    failing = [w for w in sorted(lits_by_world) if not lits_by_world[w] & 1]
    if not failing:
        raise WitnessError("x0 holds at every world")
    labels = dict(labeling)
    return Witness(sp, tuple(labeling), failing[0], labels[sp.top])


def induced_valuation(rr: ReducedRule, witness: Witness) -> Valuation:
    labels = dict(witness.labeling)
    frame = witness.sp.frame
    missing = set(frame.world_ids) - set(labels)
    if missing:
        raise WitnessError(f"Labeling misses worlds {sorted(missing)}")
    unknown = set(labels) - set(frame.world_ids)
    if unknown:
        raise WitnessError(f"Labeling mentions unknown worlds {sorted(unknown)}")
    count = rr.thetas.count
    thetas = {}
    for w, index in labels.items():
        if not 0 <= index < count:
            raise WitnessError(f"World {w} is labeled with missing theta {index}")
        thetas[w] = rr.thetas[index]
    return Valuation.of({i: [w for w, t in thetas.items() if t.sign(i, 0) == 0] for i in range(rr.var_count)})


def check_witness(rr: ReducedRule, witness: Witness, iso_mode: str = 'model') -> WitnessReport:
    """
    Re-check a witness with the model checker.

    Conditions: (1) x0 fails somewhere, at the failing world in particular; (2) every world
    satisfies its theta; (3) the first two worlds of every tail and @ carry theta_a; (4) the
    worlds of C_d carry distinct thetas; (5) C_d is not isomorphic to the one-point model at @.

    Raises:
        WitnessError: When the labeling misses worlds or names a theta outside the set.
    """
    sp = witness.sp
    frame = sp.frame
    labels = dict(witness.labeling)
    model = Model(frame, induced_valuation(rr, witness))
    violations: List[Violation] = [Violation('frame', v.message) for v in check_well_formed(frame, linear=False)]

    for w in frame.world_ids:
        if not theta_satisfied(model, w, rr.thetas[labels[w]]):
            violations.append(Violation('2', f"world {w} does not satisfy theta {labels[w]}"))

    refuting = [w for w in frame.world_ids if not satisfies(model, w, Var(0))]
    if not refuting:
        violations.append(Violation('1', "x0 holds at every world"))
    elif witness.failing_world not in refuting:
        violations.append(Violation('1', f"x0 holds at the failing world {witness.failing_world}"))

    for w in [t[0] for t in sp.tails] + [t[1] for t in sp.tails] + [sp.top]:
        if labels[w] != witness.theta_a:
            violations.append(Violation('3', f"world {w} carries theta {labels[w]} instead of {witness.theta_a}"))

    last = sp.last_cluster
    last_labels = [labels[w] for w in last.worlds]
    if len(set(last_labels)) != len(last_labels):
        violations.append(Violation('4', f"worlds of C_d share a theta: {last_labels}"))

    def lit_vector(w: int) -> int:
        return sum(1 << i for i in range(rr.var_count) if satisfies(model, w, Var(i)))

    comparator = get_comparator(iso_mode)
    if comparator.isomorphic([lit_vector(w) for w in last.worlds], last.shape().partitions, lit_vector(sp.top)):
        violations.append(Violation('5', f"C_d is isomorphic to the point @ ({comparator.mode} reading)"))

    if violations:
        logger.info(f"Witness rejected: {[v.condition for v in violations]}")
    return WitnessReport(not violations, tuple(violations))


def witness_to_dict(rr: ReducedRule, witness: Witness, rule_text: str, bounds: Optional[SearchBounds] = None,
                    iso_mode: str = 'model') -> Dict[str, Any]:
    model = Model(witness.sp.frame, induced_valuation(rr, witness))
    return {
        'rule': rule_text,
        'agents': rr.agents,
        'frame': model_to_dict(model, sp=witness.sp.to_dict(), var_prefix='x'),
        'labeling': {str(w): index for w, index in witness.labeling},
        'failing_world': witness.failing_world,
        'theta_a': witness.theta_a,
        'bounds': bounds.to_dict() if bounds else None,
        'iso_mode': iso_mode,
    }


def witness_from_dict(data: Dict[str, Any]) -> Tuple[Witness, str, int, str]:
    """Returns (witness, rule text, agents, iso mode)."""
    try:
        loaded = model_from_dict(data['frame'])
        if loaded.sp is None:
            raise WitnessError("Witness frame has no SP structure")
        sp = sp_frame_from_dict(loaded.model.frame, loaded.sp)
        labeling = tuple(sorted((int(w), int(i)) for w, i in data['labeling'].items()))
        witness = Witness(sp, labeling, int(data['failing_world']), int(data['theta_a']))
        return witness, data['rule'], int(data['agents']), data.get('iso_mode', 'model')
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, WitnessError):
            raise
        raise WitnessError(f"Malformed witness JSON: {e}") from e
