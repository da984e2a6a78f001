#!/usr/bin/env python3
"""
Acceptance report

Runs the desk-scale acceptance checks and tabulates them with pandas:
1. Normal-form equivalidity on random rules
2. The theorem suite
3. The admissibility catalogue
4. Decider/oracle agreement
5. Slice layer sizes and duplicate-world indistinguishability
"""

import argparse
import logging
import os
import random
import sys
import time
from typing import Any, Callable, Dict, List

import pandas as pd

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.admissibility.search import Admissible, NotAdmissible, Theorem, decide_admissible, decide_theorem
from src.charmodel.catalogue import build_catalogue
from src.charmodel.slices import build_slices, duplicate_disagreements, expected_layer_sizes, layer_sizes
from src.oracle.brute import brute_not_admissible, equivalid_nf
from src.oracle.formulas import random_formula, random_rule
from src.oracle.frames import FrameBounds
from src.syntax.parser import parse_formula, parse_rule
from src.utils.logger import setup_logging

logger = logging.getLogger(__name__)

THEOREMS = ["[T] p1 -> p1", "[E] p1 -> p1", "[A1] p1 -> p1", "[T] p1 -> [E] p1",
            "[E] p1 -> [A1] p1", "<E> p1 -> [E] <E> p1"]
NON_THEOREMS = ["[T] p1 -> [T] [T] p1", "[E] p1 -> [T] [T] p1"]
CATALOGUE = {"x1 | ~x1 / F": False, "F / x1": True, "x1 / x1": True, "x1 / [E] x1": True,
             "T / F": False, "x1 / F": False, "[E] x1 / F": False}


class AcceptanceRun:
    """Collects one row per check."""

    def __init__(self, seed: int, random_rules: int):
        self.rng = random.Random(seed)
        self.random_rules = random_rules
        self.rows: List[Dict[str, Any]] = []

    def record(self, criterion: str, case: str, check: Callable[[], bool]) -> None:
        start = time.perf_counter()
        try:
            passed = bool(check())
            error = ""
        except Exception as e:
            logger.error(f"{criterion} {case}: {e}", exc_info=True)
            passed, error = False, str(e)
        self.rows.append({'criterion': criterion, 'case': case, 'passed': passed,
                          'seconds': round(time.perf_counter() - start, 3), 'error': error})

    def equivalidity(self) -> None:
        bounds = FrameBounds(3, 2, 1)
        for _ in range(self.random_rules):
            rule = random_rule(self.rng, 2, 2, 1)
            self.record('nf-equivalid', str(rule), lambda r=rule: equivalid_nf(r, bounds, 1))

    def theorem_suite(self) -> None:
        for text in THEOREMS:
            self.record('theorem-suite', text,
                        lambda t=text: isinstance(decide_theorem(parse_formula(t, 1), 1), Theorem))
        for text in NON_THEOREMS:
            def refuted(t=text):
                verdict = decide_theorem(parse_formula(t, 1), 1)
                return not isinstance(verdict, Theorem) and verdict.countermodel.verify()
            self.record('theorem-suite', text, refuted)

    def admissibility_catalogue(self) -> None:
        for text, admissible in CATALOGUE.items():
            self.record('admissibility', text,
                        lambda t=text, a=admissible: isinstance(decide_admissible(parse_rule(t, 1), 1), Admissible) == a)

    def oracle_agreement(self) -> None:
        bounds = FrameBounds(3, 1, 1)
        rules = [parse_rule(t, 1) for t in CATALOGUE]
        rules += [random_rule(self.rng, 1, 1, 1, max_premises=1) for _ in range(self.random_rules)]
        for rule in rules:
            def agrees(r=rule):
                found = brute_not_admissible(r, 1, 1, bounds)
                return found is None or not found.verify() or isinstance(decide_admissible(r, 1), NotAdmissible)
            self.record('oracle-agreement', str(rule), agrees)

    def characterizing_model(self) -> None:
        sm = build_slices(build_catalogue(1, 2, 1), 3)
        self.record('charmodel', 'layer sizes',
                    lambda: layer_sizes(sm) == expected_layer_sizes(len(sm.catalogue), 3))
        formulas = [random_formula(self.rng, 4, 1, 1) for _ in range(500)]
        self.record('charmodel', 'duplicate indistinguishability',
                    lambda: not duplicate_disagreements(sm, formulas))

    def report(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=['criterion', 'case', 'passed', 'seconds', 'error'])


def main():
    parser = argparse.ArgumentParser(description="Desk-scale acceptance report")
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--random-rules', type=int, default=50)
    parser.add_argument('--out', help="Write the table to this CSV file")
    args = parser.parse_args()

    setup_logging()
    run = AcceptanceRun(args.seed, args.random_rules)
    run.equivalidity()
    run.theorem_suite()
    run.admissibility_catalogue()
    run.oracle_agreement()
    run.characterizing_model()

    table = run.report()
    summary = table.groupby('criterion').agg(cases=('passed', 'size'), passed=('passed', 'sum'),
                                             seconds=('seconds', 'sum'))
    print(summary.to_string())
    if args.out:
        table.to_csv(args.out, index=False)
        logger.info(f"Wrote {len(table)} rows to {args.out}")
    if not table['passed'].all():
        print(table[~table['passed']].to_string(index=False))
        sys.exit(1)


if __name__ == '__main__':
    main()
