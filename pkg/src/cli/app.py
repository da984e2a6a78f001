"""Command-line front end: `ltk <command> ...`.

Exit codes: 0 for a positive answer (admissible, theorem, valid, well formed),
1 for a negative one, 2 for usage and input errors.
"""
import argparse
import json
import logging
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from src.admissibility.search import Admissible, Theorem, decide_admissible, decide_theorem
from src.admissibility.witness import check_witness, witness_from_dict, witness_to_dict
from src.charmodel.catalogue import build_catalogue
from src.charmodel.slices import (bounded_bisim_classes, build_slices, duplicate_world_pairs,
                                  expected_layer_sizes, layer_sizes, mc_on_slices, singleton_classes)
from src.kripke.semantics import extension
from src.kripke.serialization import dump_model, load_model, load_relational_frame, model_from_dict, model_to_dict
from src.kripke.wellformed import check_well_formed
from src.normal_form.reduce import reduce
from src.oracle.brute import brute_not_admissible, equivalid_nf
from src.oracle.formulas import random_rule
from src.oracle.frames import FrameBounds, refute_formula
from src.syntax.formula import Rule
from src.syntax.parser import parse_formula, parse_rule
from src.syntax.printer import format_formula, format_rule
from src.utils.config_loader import config_section, load_tool_config
from src.utils.errors import ConfigError, LtkError

logger = logging.getLogger(__name__)

OUTPUT_FORMATS = ('text', 'json')
ISO_MODES = ('model', 'frame')


@dataclass
class Config:
    agents: int
    output_format: str
    quiet: bool
    jobs: int
    iso_mode: str
    batch_size: int
    seed: Optional[int] = None
    bound_overrides: Dict[str, int] = field(default_factory=dict)
    frame_bounds: Optional[FrameBounds] = None
    settings: Dict[str, Any] = field(default_factory=dict)

    def validate(self) -> None:
        if self.agents < 0:
            raise ConfigError(f"--agents must be non-negative, got {self.agents}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"Unsupported output format '{self.output_format}'")
        if self.jobs < 1:
            raise ConfigError(f"--jobs must be at least 1, got {self.jobs}")
        if self.iso_mode not in ISO_MODES:
            raise ConfigError(f"Unsupported iso mode '{self.iso_mode}'")
        if self.batch_size < 1:
            raise ConfigError(f"Batch size must be positive, got {self.batch_size}")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> 'Config':
        settings = load_tool_config(args.config)
        search = config_section(settings, 'search')
        oracle = config_section(settings, 'oracle')

        def pick(flag, default):
            return flag if flag is not None else default

        try:
            agents = int(pick(args.agents, settings.get('agents', 1)))
            overrides = {name: int(getattr(args, name)) for name in ('max_d', 'max_cluster_size', 'max_tail_len')
                         if getattr(args, name) is not None}
            config = cls(
                agents=agents,
                output_format=pick(args.format, settings.get('output_format', 'text')),
                quiet=bool(args.quiet),
                jobs=int(pick(args.jobs, settings.get('jobs', 1))),
                iso_mode=pick(args.iso_mode, search.get('iso_mode', 'model')),
                batch_size=int(search.get('batch_size', 64)),
                seed=args.seed,
                bound_overrides=overrides,
                settings=settings,
            )
            config.frame_bounds = FrameBounds(int(pick(getattr(args, 'max_clusters', None), oracle.get('max_clusters', 3))),
                                              int(pick(getattr(args, 'frame_cluster_size', None),
                                                       oracle.get('max_cluster_size', 2))),
                                              max(agents, 1))
        except (TypeError, ValueError) as e:
            if isinstance(e, LtkError):
                raise
            raise ConfigError(f"Invalid configuration value: {e}") from e
        config.validate()
        return config


def read_text(value: str) -> str:
    """Inline text, or the contents of a file when written as @path."""
    if value.startswith('@'):
        return Path(value[1:]).read_text().strip()
    return value


def _emit(config: Config, payload: Dict[str, Any], text: str) -> None:
    if config.quiet:
        return
    if config.output_format == 'json':
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(text)


def cmd_nf(args, config: Config) -> int:
    rule = parse_rule(read_text(args.rule), config.agents)
    rr = reduce(rule, config.agents)
    limit = int(config_section(config.settings, 'normal_form').get('max_listed_thetas', 4096))
    listed = [t for _, t in zip(range(limit), rr.thetas)]
    variables = {f"x{i}": format_formula(f, 'x') for i, f in enumerate(rr.origin)}
    payload = {'m': rr.var_count, 'k': rr.agents, 's': rr.thetas.count,
               'thetas': [list(t.signs) for t in listed], 'truncated': rr.thetas.count > limit,
               'variables': variables}
    lines = [f"m={rr.var_count} k={rr.agents} s={rr.thetas.count}"]
    lines += [f"{name} := {text}" for name, text in variables.items()]
    lines += [f"theta[{j}]: {t.describe()}" for j, t in enumerate(listed)]
    if payload['truncated']:
        lines.append(f"... {rr.thetas.count - limit} more")
    _emit(config, payload, "\n".join(lines))
    return 0


def cmd_theorem(args, config: Config) -> int:
    f = parse_formula(read_text(args.formula), config.agents)
    verdict = decide_theorem(f, config.agents, jobs=config.jobs, iso_mode=config.iso_mode,
                             batch_size=config.batch_size, bound_overrides=config.bound_overrides)
    payload: Dict[str, Any] = {'formula': format_formula(f), 'agents': config.agents,
                               'bounds': verdict.bounds_used.to_dict()}
    if isinstance(verdict, Theorem):
        payload.update(verdict='theorem', reason=verdict.reason)
        _emit(config, payload, f"Theorem ({verdict.reason})")
        return 0
    countermodel = verdict.countermodel
    payload.update(verdict='not-theorem', frames_examined=verdict.frames_examined,
                   countermodel={'world': countermodel.world, 'model': model_to_dict(countermodel.model)})
    _emit(config, payload, f"Not a theorem: refuted at world {countermodel.world} of a "
                           f"{len(countermodel.model.frame.clusters)}-cluster chain")
    return 1


def cmd_admissible(args, config: Config) -> int:
    text = read_text(args.rule)
    rule = parse_rule(text, config.agents)
    verdict = decide_admissible(rule, config.agents, jobs=config.jobs, iso_mode=config.iso_mode,
                                batch_size=config.batch_size, bound_overrides=config.bound_overrides)
    payload: Dict[str, Any] = {'rule': format_rule(rule), 'agents': config.agents,
                               'bounds': verdict.bounds_used.to_dict(), 'theta_count': verdict.theta_count,
                               'frames_examined': verdict.frames_examined}
    if isinstance(verdict, Admissible):
        payload.update(verdict='admissible', reason=verdict.reason)
        _emit(config, payload, f"Admissible ({verdict.reason}, {verdict.frames_examined} frames examined)")
        return 0
    witness = witness_to_dict(verdict.reduced, verdict.witness, format_rule(verdict.rule), verdict.bounds_used,
                              config.iso_mode)
    payload.update(verdict='not-admissible', within_bounds=verdict.within_bounds, witness=witness)
    if args.witness_out:
        with open(args.witness_out, 'w') as f:
            json.dump(witness, f, sort_keys=True, indent=2)
        logger.info(f"Wrote witness to {args.witness_out}")
    sp = verdict.witness.sp
    _emit(config, payload, f"Not admissible: witness with d={sp.d}, |C_d|={len(sp.last_cluster.worlds)}, "
                           f"failing world {verdict.witness.failing_world}")
    return 1


def cmd_check_witness(args, config: Config) -> int:
    with open(args.witness) as f:
        data = json.load(f)
    witness, rule_text, agents, iso_mode = witness_from_dict(data)
    rr = reduce(parse_rule(rule_text, agents), agents)
    report = check_witness(rr, witness, iso_mode)
    violations = [{'condition': v.condition, 'message': v.message} for v in report.violations]
    text = "Witness verified" if report.ok else "\n".join(f"condition {v['condition']}: {v['message']}"
                                                          for v in violations)
    _emit(config, {'ok': report.ok, 'violations': violations}, text)
    return 0 if report.ok else 1


def cmd_mc(args, config: Config) -> int:
    loaded = load_model(args.model)
    model = loaded.model
    f = parse_formula(read_text(args.formula), model.frame.agents)
    holds = extension(model, f)
    refuted = set(model.frame.world_ids) - holds
    payload = {'formula': format_formula(f), 'holds_at': sorted(holds), 'refuted_at': sorted(refuted),
               'valid': not refuted}
    _emit(config, payload, f"holds at {sorted(holds)}; refuted at {sorted(refuted)}")
    return 0 if not refuted else 1


def cmd_wellformed(args, config: Config) -> int:
    with open(args.model) as f:
        data = json.load(f)
    frame = load_relational_frame(data) if 'rt' in data else model_from_dict(data).model.frame
    violations = check_well_formed(frame)
    payload = {'ok': not violations,
               'violations': [{'condition': v.condition, 'message': v.message} for v in violations]}
    text = "Well formed" if not violations else "\n".join(f"{v.condition}: {v.message}" for v in violations)
    _emit(config, payload, text)
    return 0 if not violations else 1


def _slices(args, config: Config):
    step2_all = args.step2_all or bool(config_section(config.settings, 'charmodel').get('step2_all', False))
    catalogue = build_catalogue(args.vars, args.max_cluster, config.agents)
    return build_slices(catalogue, args.depth, step2_all)


def _slice_summary(sm) -> Dict[str, Any]:
    return {'vars': sm.catalogue.var_count, 'max_cluster': sm.catalogue.size_cap, 'agents': sm.catalogue.agents,
            'depth': sm.depth, 'step2_all': sm.step2_all, 'catalogue_size': len(sm.catalogue),
            'layer_sizes': list(layer_sizes(sm))}


def cmd_charmodel_build(args, config: Config) -> int:
    sm = _slices(args, config)
    summary = _slice_summary(sm)
    summary['expected_layer_sizes'] = list(expected_layer_sizes(len(sm.catalogue), sm.depth, sm.step2_all))
    if args.out:
        dump_model(args.out, sm.model, cluster_tags=sm.cluster_tags())
    _emit(config, summary, f"{summary['catalogue_size']} catalogue clusters, layers {summary['layer_sizes']}, "
                           f"{sm.frame.size} worlds")
    return 0


def cmd_charmodel_bisim(args, config: Config) -> int:
    sm = _slices(args, config)
    classes = bounded_bisim_classes(sm, args.t)
    payload = _slice_summary(sm)
    payload.update(t=args.t, classes=[sorted(c) for c in classes],
                   singletons=sorted(singleton_classes(sm, args.t)),
                   duplicate_pairs=[list(p) for p in duplicate_world_pairs(sm)])
    _emit(config, payload, f"{len(classes)} classes at depth {args.t}; "
                           f"{len(payload['singletons'])} singleton classes; "
                           f"{len(payload['duplicate_pairs'])} duplicate pairs")
    return 0


def cmd_charmodel_mc(args, config: Config) -> int:
    sm = _slices(args, config)
    f = parse_formula(read_text(args.formula), config.agents)
    report = mc_on_slices(sm, f)
    payload = _slice_summary(sm)
    payload.update(formula=format_formula(f), **report.to_dict())
    _emit(config, payload, f"evaluable at {len(report.evaluable_at)} worlds; "
                           f"refuted at {sorted(report.refuted_at)}")
    return 0 if not report.refuted_at else 1


def cmd_oracle_refute(args, config: Config) -> int:
    f = parse_formula(read_text(args.formula), config.agents)
    countermodel = refute_formula(f, config.frame_bounds)
    payload: Dict[str, Any] = {'formula': format_formula(f), 'bounds': config.frame_bounds.to_dict(),
                               'refuted': countermodel is not None}
    if countermodel is None:
        _emit(config, payload, "No countermodel within bounds")
        return 0
    payload['countermodel'] = {'world': countermodel.world, 'model': model_to_dict(countermodel.model)}
    _emit(config, payload, f"Refuted at world {countermodel.world}")
    return 1


def cmd_oracle_admissible(args, config: Config) -> int:
    oracle = config_section(config.settings, 'oracle')
    depth = args.subst_depth if args.subst_depth is not None else int(oracle.get('subst_depth', 1))
    count = args.subst_vars if args.subst_vars is not None else int(oracle.get('subst_vars', 1))
    rule = parse_rule(read_text(args.rule), config.agents)
    found = brute_not_admissible(rule, depth, count, config.frame_bounds)
    payload: Dict[str, Any] = {'rule': format_rule(rule), 'bounds': config.frame_bounds.to_dict(),
                               'subst_depth': depth, 'subst_vars': count, 'certified': found is not None}
    if found is None:
        _emit(config, payload, "No certifying substitution within bounds")
        return 0
    payload['substitution'] = {f"x{i}": format_formula(f) for i, f in found.substitution.mapping}
    payload['countermodel'] = {'world': found.countermodel.world, 'model': model_to_dict(found.countermodel.model)}
    _emit(config, payload, f"Not admissible: {found.substitution}")
    return 1


def cmd_oracle_equivalid(args, config: Config) -> int:
    limit = int(config_section(config.settings, 'normal_form').get('max_materialized_thetas', 4096))
    rules: List[Rule] = []
    if args.rule:
        rules.append(parse_rule(read_text(args.rule), config.agents))
    if args.random:
        rng = random.Random(config.seed if config.seed is not None else 0)
        rules.extend(random_rule(rng, 2, 2, config.agents) for _ in range(args.random))
    if not rules:
        raise ConfigError("oracle equivalid needs a rule or --random N")
    results = [{'rule': format_rule(r), 'equivalid': equivalid_nf(r, config.frame_bounds, config.agents, limit)}
               for r in rules]
    failures = [r['rule'] for r in results if not r['equivalid']]
    payload = {'bounds': config.frame_bounds.to_dict(), 'seed': config.seed, 'results': results}
    text = f"{len(results) - len(failures)}/{len(results)} rules equivalid with their normal form"
    if failures:
        text += "\n" + "\n".join(f"disagrees: {r}" for r in failures)
    _emit(config, payload, text)
    return 0 if not failures else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--agents', type=int, help="Number of agents k")
    common.add_argument('--format', choices=OUTPUT_FORMATS)
    common.add_argument('--quiet', action='store_true', help="Print nothing; report through the exit code")
    common.add_argument('--jobs', type=int, help="Worker processes (default LTK_JOBS or config)")
    common.add_argument('--max-d', dest='max_d', type=int)
    common.add_argument('--max-cluster-size', dest='max_cluster_size', type=int)
    common.add_argument('--max-tail-len', dest='max_tail_len', type=int)
    common.add_argument('--iso-mode', dest='iso_mode', choices=ISO_MODES)
    common.add_argument('--seed', type=int)
    common.add_argument('--config', help="YAML file replacing config/ltk_config.yaml")

    frames = argparse.ArgumentParser(add_help=False)
    frames.add_argument('--max-clusters', dest='max_clusters', type=int)
    frames.add_argument('--frame-cluster-size', dest='frame_cluster_size', type=int)

    slices = argparse.ArgumentParser(add_help=False)
    slices.add_argument('--vars', type=int, default=1)
    slices.add_argument('--max-cluster', dest='max_cluster', type=int, default=2)
    slices.add_argument('--depth', type=int, default=2)
    slices.add_argument('--step2-all', dest='step2_all', action='store_true')

    parser = argparse.ArgumentParser(prog='ltk', description="Decision tools for the logic LTK_r")
    commands = parser.add_subparsers(dest='command', required=True, metavar='command')

    nf = commands.add_parser('nf', parents=[common], help="Reduced normal form of a rule")
    nf.add_argument('rule')
    nf.set_defaults(handler=cmd_nf)

    theorem = commands.add_parser('theorem', parents=[common], help="Decide theoremhood")
    theorem.add_argument('formula')
    theorem.set_defaults(handler=cmd_theorem)

    admissible = commands.add_parser('admissible', parents=[common], help="Decide admissibility of a rule")
    admissible.add_argument('rule')
    admissible.add_argument('--witness-out', dest='witness_out')
    admissible.set_defaults(handler=cmd_admissible)

    mc = commands.add_parser('mc', parents=[common], help="Model check a formula on a JSON model")
    mc.add_argument('model')
    mc.add_argument('formula')
    mc.set_defaults(handler=cmd_mc)

    wellformed = commands.add_parser('wellformed', parents=[common], help="Check frame conditions of a JSON frame")
    wellformed.add_argument('model')
    wellformed.set_defaults(handler=cmd_wellformed)

    check = commands.add_parser('check-witness', parents=[common])
    check.add_argument('witness')
    check.set_defaults(handler=cmd_check_witness)

    charmodel = commands.add_parser('charmodel', help="Slices of the characterizing model")
    charmodel_commands = charmodel.add_subparsers(dest='charmodel_command', required=True, metavar='command')
    build = charmodel_commands.add_parser('build', parents=[common, slices])
    build.add_argument('--out')
    build.set_defaults(handler=cmd_charmodel_build)
    bisim = charmodel_commands.add_parser('bisim', parents=[common, slices])
    bisim.add_argument('--t', type=int, default=1)
    bisim.set_defaults(handler=cmd_charmodel_bisim)
    slice_mc = charmodel_commands.add_parser('mc', parents=[common, slices])
    slice_mc.add_argument('formula')
    slice_mc.set_defaults(handler=cmd_charmodel_mc)

    oracle = commands.add_parser('oracle', help="Brute-force baselines")
    oracle_commands = oracle.add_subparsers(dest='oracle_command', required=True, metavar='command')
    refute = oracle_commands.add_parser('refute', parents=[common, frames])
    refute.add_argument('formula')
    refute.set_defaults(handler=cmd_oracle_refute)
    brute = oracle_commands.add_parser('admissible', parents=[common, frames])
    brute.add_argument('rule')
    brute.add_argument('--subst-depth', dest='subst_depth', type=int)
    brute.add_argument('--subst-vars', dest='subst_vars', type=int)
    brute.set_defaults(handler=cmd_oracle_admissible)
    equivalid = oracle_commands.add_parser('equivalid', parents=[common, frames])
    equivalid.add_argument('rule', nargs='?')
    equivalid.add_argument('--random', type=int, default=0)
    equivalid.set_defaults(handler=cmd_oracle_equivalid)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse `argv`, dispatch, and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    try:
        config = Config.from_args(args)
        return args.handler(args, config)
    except (LtkError, OSError, json.JSONDecodeError) as e:
        logger.error(f"{args.command}: {e}")
        if not args.quiet:
            print(f"error: {e}", file=sys.stderr)
        return 2
