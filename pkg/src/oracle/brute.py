"""Substitution-based admissibility checks and normal-form equivalidity sweeps."""
import logging
from dataclasses import dataclass
from itertools import product
from typing import Dict, Optional

from src.kripke.model import Countermodel
from src.kripke.semantics import rule_valid_on_frame
from src.normal_form.labeling import reduced_rule_valid_on_frame
from src.normal_form.reduce import from_rule, materialize, reduce
from src.oracle.formulas import enumerate_formulas
from src.oracle.frames import FrameBounds, enumerate_chain_frames, refute_formula
from src.syntax.formula import (Formula, Rule, Substitution, apply_substitution,
                                apply_substitution_to_rule, rule_variables)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AdmissibilityCounterexample:
    """A substitution turning every premise into an unrefuted formula and the conclusion into a refuted one."""
    rule: Rule
    substitution: Substitution
    countermodel: Countermodel
    bounds: FrameBounds

    def verify(self) -> bool:
        instance = apply_substitution_to_rule(self.substitution, self.rule)
        if self.countermodel.formula != instance.conclusion or not self.countermodel.verify():
            return False
        return all(refute_formula(p, self.bounds) is None for p in instance.premises)


def brute_not_admissible(rule: Rule, subst_depth: int, subst_vars: int,
                         bounds: FrameBounds) -> Optional[AdmissibilityCounterexample]:
    """
    Search substitutions over enumerated formulas for a certified non-admissibility witness.

    Substitutions are tried in product order of the formula enumeration. None is
    inconclusive: premises are only checked for countermodels within the bounds.
    """
    indices = sorted(rule_variables(rule))
    candidates = enumerate_formulas(subst_depth, subst_vars, bounds.agents)
    refuted: Dict[Formula, object] = {}

    def refutation(f: Formula):
        if f not in refuted:
            refuted[f] = refute_formula(f, bounds)
        return refuted[f]

    tried = 0
    for images in product(candidates, repeat=len(indices)):
        tried += 1
        substitution = Substitution.of(dict(zip(indices, images)))
        conclusion = apply_substitution(substitution, rule.conclusion)
        countermodel = refutation(conclusion)
        if countermodel is None:
            continue
        if all(refutation(apply_substitution(substitution, p)) is None for p in rule.premises):
            logger.info(f"Substitution #{tried} {substitution} certifies non-admissibility")
            return AdmissibilityCounterexample(rule, substitution, countermodel, bounds)
    logger.info(f"No certifying substitution among {tried} candidates")
    return None


def equivalid_nf(rule: Rule, bounds: FrameBounds, agents: int, max_materialized: int = 4096,
                 sweep_budget: int = 1 << 16) -> bool:
    """
    True iff the rule and its reduced normal form are valid on exactly the same enumerated frames.

    The reduced side is checked by labeling search. When the theta set is small enough to
    write out, the materialized rule must parse back to the same thetas and, on frames
    where a valuation sweep of that formula is affordable, its swept validity must agree too.
    """
    rr = reduce(rule, agents)
    materialized = None
    if rr.thetas.count <= max_materialized:
        materialized = materialize(rr)
        if sorted(from_rule(materialized, agents).thetas) != sorted(rr.thetas):
            logger.warning(f"Materialized normal form of {rule} does not read back to the same thetas")
            return False
    for frame in enumerate_chain_frames(bounds):
        expected = rule_valid_on_frame(frame, rule)
        if reduced_rule_valid_on_frame(frame, rr) != expected:
            logger.warning(f"{rule} and its normal form disagree on a frame of {frame.size} worlds")
            return False
        if materialized is not None and rr.thetas.count << (frame.size * rr.var_count) <= sweep_budget:
            if rule_valid_on_frame(frame, materialized) != expected:
                logger.warning(f"{rule} and its materialized normal form disagree on a frame")
                return False
    return True
