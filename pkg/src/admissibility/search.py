"""Admissibility and theoremhood decisions via SP-frame witnesses."""
import logging
from dataclasses import dataclass, field, replace
from functools import partial
from typing import Dict, List, Optional, Tuple, Union

from src.admissibility.comparators import ClusterComparator, get_comparator
from src.admissibility.saturation import WitnessAnalysis
from src.admissibility.sp_frame import SearchBounds, SpFrame, enumerate_sp_frames
from src.admissibility.tails import TailPlan, fixed_length_tails
from src.admissibility.witness import Witness, check_witness, induced_valuation, make_witness
from src.kripke.model import Countermodel, Model, Valuation, generated_chain
from src.normal_form.labeling import LabelingEngine
from src.normal_form.realizability import realizable_patterns
from src.normal_form.reduce import ReducedRule, reduce, with_fresh_tautology
from src.syntax.formula import Formula, Rule, Top, variables
from src.syntax.printer import format_rule
from src.utils.parallel import first_hit

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Admissible:
    bounds_used: SearchBounds
    frames_examined: int
    reason: str
    theta_count: int
    reduced: ReducedRule = field(compare=False, repr=False)


@dataclass(frozen=True)
class NotAdmissible:
    """`rule` is the rule the witness labels: the input, or the input with a fresh tautology premise."""
    rule: Rule
    witness: Witness
    bounds_used: SearchBounds
    frames_examined: int
    theta_count: int
    within_bounds: bool
    reduced: ReducedRule = field(compare=False, repr=False)


@dataclass(frozen=True)
class Theorem:
    bounds_used: SearchBounds
    reason: str
    theta_count: int


@dataclass(frozen=True)
class NotTheorem:
    witness: Witness
    countermodel: Countermodel
    bounds_used: SearchBounds
    frames_examined: int
    reduced: ReducedRule = field(compare=False, repr=False)


Verdict = Union[Admissible, NotAdmissible]


class SearchContext:
    """Everything a worker needs to search one SP-frame."""

    def __init__(self, rr: ReducedRule, engine: LabelingEngine, comparator: ClusterComparator):
        self.rr = rr
        self.engine = engine
        self.comparator = comparator
        self._tails: Dict[Tuple[int, int, int], List[TailPlan]] = {}

    def tails(self, a: int, union: int, length: int) -> List[TailPlan]:
        key = (a, union, length)
        if key not in self._tails:
            self._tails[key] = fixed_length_tails(self.engine, a, union, length)
        return self._tails[key]


def _search_with_top(context: SearchContext, sp: SpFrame, a: int) -> Optional[Witness]:
    engine = context.engine
    d = sp.d
    shapes = [sp.main_cluster(i).shape() for i in range(d + 1)]
    lengths = [len(t) for t in sp.tails]
    memo: Dict[Tuple[int, int, bool], Optional[list]] = {}

    def rest(i: int, next_union: int, need: bool) -> Optional[list]:
        if i < 0:
            return None if need else []
        key = (i, next_union, need)
        if key in memo:
            return memo[key]
        result = None
        top = a if i == d else None
        for labeling in engine.cluster_outcomes(shapes[i], next_union, top=top,
                                                comparator=context.comparator if top is not None else None):
            still_needed = need and not labeling.refutes
            for tail in context.tails(a, labeling.union, lengths[i]):
                below = rest(i - 1, labeling.union, still_needed and not tail.refutes)
                if below is not None:
                    result = [(labeling, tail)] + below
                    break
            if result is not None:
                break
        memo[key] = result
        return result

    plan = rest(d, a, bool(a & 1))
    if plan is None:
        return None
    lits = {sp.top: a}
    for n, (labeling, tail) in enumerate(plan):
        i = d - n
        lits.update(zip(sp.main_cluster(i).worlds, labeling.lits))
        worlds = sp.tails[i]
        lits[worlds[0]] = a
        lits[worlds[1]] = a
        lits.update(zip(worlds[2:], tail.lits))
    return make_witness(context.rr, sp, lits)


def search_frame(context: SearchContext, sp: SpFrame) -> Optional[Witness]:
    """The least witness on one SP-frame: top vectors ascending, then C_d down to C_0 with their tails."""
    for a in context.engine.top_candidates():
        witness = _search_with_top(context, sp, a)
        if witness is not None:
            return witness
    return None


def _decide_once(rule: Rule, agents: int, bounds: Optional[SearchBounds], jobs: int, iso_mode: str,
                 batch_size: int, bound_overrides: Optional[Dict[str, int]]) -> Verdict:
    rr = reduce(rule, agents)
    realizability = realizable_patterns(rr.thetas)
    s = realizability.theta_count
    bounds_used = bounds or SearchBounds.from_theta_count(s)
    if bound_overrides:
        bounds_used = replace(bounds_used, **bound_overrides)
    if not realizability.refutable:
        logger.info("No realizable theta falsifies x0: admissible")
        return Admissible(bounds_used, 0, 'no-realizable-refutation', s, rr)

    comparator = get_comparator(iso_mode)
    engine = LabelingEngine(rr.thetas, realizability.patterns, realizability.lits)
    constructed = WitnessAnalysis(rr, engine, comparator).construct()
    if constructed is None:
        return Admissible(bounds_used, 0, 'exhausted', s, rr)

    effective = bounds_used.clip(constructed.sp.dimensions)
    logger.info(f"Searching SP-frames up to {effective.to_dict()} with {jobs} job(s)")
    context = SearchContext(rr, engine, comparator)
    examined, witness = first_hit(partial(search_frame, context), enumerate_sp_frames(effective, agents),
                                  jobs=jobs, batch_size=batch_size)
    within_bounds = witness is not None
    if witness is None:
        logger.warning(f"No witness within bounds {bounds_used.to_dict()}; reporting one of dimensions "
                       f"{constructed.sp.dimensions.to_dict()}")
        witness = constructed

    report = check_witness(rr, witness, iso_mode)
    if not report.ok:
        logger.error(f"Search produced a witness that fails re-verification: {report.violations}")
        raise RuntimeError(f"Witness failed re-verification: {report.violations}")
    logger.info(f"Not admissible: witness with d={witness.sp.d} after {examined} frames")
    return NotAdmissible(rule, witness, bounds_used, examined, s, within_bounds, rr)


def decide_admissible(rule: Rule, agents: int, bounds: Optional[SearchBounds] = None, jobs: int = 1,
                      iso_mode: str = 'model', batch_size: int = 64,
                      bound_overrides: Optional[Dict[str, int]] = None) -> Verdict:
    """
    Decide admissibility of a rule.

    When the witness search is exhausted, it is repeated once on the rule with a fresh
    tautology premise. That rule is admissible iff the input is, and its literal vectors can
    differ, which the last-cluster conditions need when the input forces a single vector.

    Args:
        rule: The rule.
        agents: Number of agents k.
        bounds: SP-frame bounds for the witness search; derived from the realizable theta count when None.
        jobs: Worker processes for the frame search.
        iso_mode: Reading of the non-isomorphism condition, 'model' or 'frame'.
        batch_size: Frames handed to each worker per round.
        bound_overrides: Individual bound fields replacing the derived or given ones.

    Returns:
        Admissible, or NotAdmissible with the least witness in frame enumeration order.
        A NotAdmissible found on the padded rule names that rule in its `rule` field.
    """
    verdict = _decide_once(rule, agents, bounds, jobs, iso_mode, batch_size, bound_overrides)
    if not isinstance(verdict, Admissible) or verdict.reason != 'exhausted':
        return verdict
    vectors = len(verdict.reduced.thetas.lit_vectors())
    padded = with_fresh_tautology(rule)
    logger.info(f"Search exhausted over {vectors} literal vector(s); retrying as {format_rule(padded)}")
    retry = _decide_once(padded, agents, bounds, jobs, iso_mode, batch_size, bound_overrides)
    if isinstance(retry, NotAdmissible):
        return retry
    return verdict


def countermodel_from_witness(rr: ReducedRule, witness: Witness, f: Formula) -> Countermodel:
    """Chain model generated by the failing world, valued on the original variables of `f`."""
    valuation = induced_valuation(rr, witness)
    sources = rr.source_variables()
    original = Valuation.of({j: valuation.get(sources[j]) for j in sorted(variables(f))})
    model = generated_chain(Model(witness.sp.frame, original), witness.failing_world)
    return Countermodel(model, witness.failing_world, f)


def decide_theorem(f: Formula, agents: int, bounds: Optional[SearchBounds] = None, jobs: int = 1,
                   iso_mode: str = 'model', batch_size: int = 64,
                   bound_overrides: Optional[Dict[str, int]] = None) -> Union[Theorem, NotTheorem]:
    """A formula is a theorem iff the rule T / f is admissible."""
    verdict = decide_admissible(Rule((Top(),), f), agents, bounds, jobs, iso_mode, batch_size, bound_overrides)
    if isinstance(verdict, Admissible):
        return Theorem(verdict.bounds_used, verdict.reason, verdict.theta_count)
    countermodel = countermodel_from_witness(verdict.reduced, verdict.witness, f)
    if not countermodel.verify():
        raise RuntimeError("Countermodel extracted from the witness does not refute the formula")
    return NotTheorem(verdict.witness, countermodel, verdict.bounds_used, verdict.frames_examined, verdict.reduced)
