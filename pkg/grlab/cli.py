#!/usr/bin/env python3
"""
grlab command-line front end.

Verbs: construct, verify, decompose, search, table, pin. Results go to stdout,
logging to stderr. Exit codes:

    0  pass / found
    1  violated / unavoidable
    2  resource or format problem (budget, malformed file, missing fixture)
    3  usage error
"""

import argparse
import logging
import os
import sys
from typing import List, Optional, Sequence

from dotenv import load_dotenv

# Add module directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from catalog import AmbiguousAliasError, TargetGraph, UnknownPatternError, catalog_graph
from coloring import ColoredCompleteGraph
from config_loader import get_config
from constructions import BaseWitnessUnavailable, evaluate_recipe, recipe_for_target
from detect import audit_facts, check_forbid
from fixture_store import FixtureStore
from formulas import check_constructions, format_table
from gallai import (RainbowTriangleError, find_gallai_partition, minimize_parts, partition_to_json,
                    verify_partition)
from gcg_codec import GcgFormatError, decode_gcg, encode_gcg
from presets import pin_presets, write_pin_result
from search import Forbid, SearchConfig, find_free_coloring, format_certificate, prove_unavoidable

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_RESOURCE = 2
EXIT_USAGE = 3

LOG_FORMAT = '[%(asctime)s] [%(levelname)-8s] [%(name)s] %(message)s'
LOG_DATEFMT = '%Y-%m-%d %H:%M:%S'


class UsageError(Exception):
    """Bad arguments detected after parsing."""


class GrlabArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with code 3 on one line."""

    def error(self, message: str):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    try:
        value = int(float(text)) if 'e' in text.lower() else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got '{text}'")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def build_parser() -> GrlabArgumentParser:
    parser = GrlabArgumentParser(prog='grlab', description='Gallai-Ramsey laboratory')
    parser.add_argument('--log-level', default=None,
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='Logging level (default from config.json)')
    verbs = parser.add_subparsers(dest='verb', metavar='VERB')
    verbs.required = True

    p = verbs.add_parser('construct', help='Build a lower-bound witness colouring')
    p.add_argument('--target', required=True, help='f9|f10|f11|f12|f13|banner|k3|f2n:n|star:n')
    p.add_argument('--k', type=_positive, required=True, help='Number of colours')
    p.add_argument('-o', '--output', help='Output .gcg file (stdout when omitted)')
    p.add_argument('--trace', action='store_true', help='Print the recipe trace')

    p = verbs.add_parser('verify', help='Check a .gcg colouring against constraints')
    p.add_argument('--forbid-rainbow-k3', action='store_true')
    p.add_argument('--forbid-mono', action='append', default=[], metavar='PATTERN')
    p.add_argument('--decompose', action='store_true', help='Also find and verify a Gallai partition')
    p.add_argument('--audit', metavar='FAMILY', choices=['f9', 'f10', 'f12', 'f13'],
                   help='Audit the partition facts of FAMILY (implies --decompose)')
    p.add_argument('file')

    p = verbs.add_parser('decompose', help='Print a Gallai partition as JSON')
    p.add_argument('--minimize', action='store_true', help='Fewest parts over the colour-pair family')
    p.add_argument('file')

    p = verbs.add_parser('search', help='Search for a colouring avoiding constraints')
    p.add_argument('--n', type=_positive, required=True)
    p.add_argument('--colors', type=_positive, required=True)
    p.add_argument('--forbid-mono', action='append', default=[], metavar='PATTERN')
    p.add_argument('--forbid-rainbow-k3', action='store_true')
    p.add_argument('--prove', action='store_true', help='Proof mode (vertex symmetry on by default)')
    p.add_argument('--budget', type=_positive)
    p.add_argument('--threads', type=_positive)
    p.add_argument('--split-depth', type=_positive)
    p.add_argument('--vertex-symmetry', choices=['on', 'off'])
    p.add_argument('-o', '--output', help='Write a found colouring here')
    p.add_argument('--certificate', help='Write the run certificate here')

    p = verbs.add_parser('table', help='Print gr_k values for a family')
    p.add_argument('--family', required=True, help='f9|f10|f11|f12|f13|banner|k3|f2n:n')
    p.add_argument('--k-max', type=_positive, required=True)
    p.add_argument('--check-constructions', action='store_true')

    p = verbs.add_parser('pin', help='Pin the f9/f10/f12/f13 presets and write the table')
    p.add_argument('--n-max', type=_positive)
    p.add_argument('--budget', type=_positive)
    p.add_argument('--data-dir', help='Data directory to write into')
    return parser


def _configure_logging(level: Optional[str]) -> None:
    level = level or get_config().log_level
    logging.basicConfig(level=level, format=LOG_FORMAT, datefmt=LOG_DATEFMT, stream=sys.stderr)
    logging.getLogger().setLevel(level)


def _patterns(ids: Sequence[str]) -> List[TargetGraph]:
    patterns = []
    for text in ids:
        try:
            patterns.append(catalog_graph(text))
        except AmbiguousAliasError as e:
            raise UsageError(f"{e}; run 'grlab pin' or name a pattern directly")
        except UnknownPatternError as e:
            raise UsageError(str(e))
    return patterns


def _read_gcg(path: str) -> ColoredCompleteGraph:
    with open(path, 'rb') as f:
        return decode_gcg(f.read())


def _write(path: str, data: bytes) -> None:
    with open(path, 'wb') as f:
        f.write(data)
    logger.info(f"Wrote {path}")


def cmd_construct(args) -> int:
    try:
        recipe = recipe_for_target(args.target, args.k)
    except (UnknownPatternError, ValueError) as e:
        raise UsageError(str(e))
    graph = evaluate_recipe(recipe)
    if args.trace:
        for line in recipe.trace_lines():
            print(line)
    comments = [f"grlab construct --target {args.target} --k {args.k}",
                f"order {graph.n} colors {len(graph.colors_used)}"]
    data = encode_gcg(graph, comments)
    if args.output:
        _write(args.output, data)
        print(f"constructed n={graph.n} k={graph.k} path={args.output}")
    else:
        sys.stdout.write(data.decode('utf-8'))
    return EXIT_OK


def cmd_verify(args) -> int:
    """One summary line per check; exit 1 if any check fails."""
    patterns = _patterns(args.forbid_mono)
    graph = _read_gcg(args.file)
    print(f"graph n={graph.n} k={graph.k} colors={len(graph.colors_used)}")

    failed = False
    violations = check_forbid(graph, args.forbid_rainbow_k3, patterns)
    broken = {v.embedding.pattern.label() if v.embedding else 'rainbow_k3': v for v in violations}
    checks = (['rainbow_k3'] if args.forbid_rainbow_k3 else []) + [h.label() for h in patterns]
    for name in checks:
        violation = broken.get(name)
        label = name if name == 'rainbow_k3' else f"mono:{name}"
        if violation is None:
            print(f"check {label} pass")
        else:
            failed = True
            print(f"check {label} fail {violation.describe()}")

    if args.decompose or args.audit:
        try:
            partition = find_gallai_partition(graph)
        except RainbowTriangleError as e:
            print(f"check decompose fail {e}")
            return EXIT_VIOLATED
        report = verify_partition(graph, partition)
        if report.holds:
            print(f"check decompose pass m={partition.m} sizes={','.join(map(str, partition.sizes))}"
                  f" between={','.join(map(str, sorted(partition.between_colors)))}")
        else:
            failed = True
            print(f"check decompose fail {'; '.join(report.problems)}")
        if args.audit and report.holds:
            for fact in audit_facts(graph, partition, family=args.audit):
                failed = failed or not fact.holds
                print(f"check {fact.summary()}")
    return EXIT_VIOLATED if failed else EXIT_OK


def cmd_decompose(args) -> int:
    graph = _read_gcg(args.file)
    try:
        partition = minimize_parts(graph) if args.minimize else find_gallai_partition(graph)
    except RainbowTriangleError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VIOLATED
    print(partition_to_json(partition))
    return EXIT_OK


def cmd_search(args) -> int:
    patterns = _patterns(args.forbid_mono)
    if not patterns and not args.forbid_rainbow_k3:
        raise UsageError("search needs --forbid-mono or --forbid-rainbow-k3")
    symmetry = None if args.vertex_symmetry is None else args.vertex_symmetry == 'on'
    config = SearchConfig.from_settings(args.prove, budget=args.budget, threads=args.threads,
                                        split_depth=args.split_depth, vertex_symmetry=symmetry)
    forbid = Forbid(args.forbid_rainbow_k3, tuple(patterns))
    run = prove_unavoidable if args.prove else find_free_coloring
    outcome = run(args.n, args.colors, forbid, config=config)

    print(f"verdict {outcome.verdict_name} n={args.n} k={args.colors} forbid={forbid.describe()}"
          f" nodes={outcome.nodes_visited} budget={config.budget} threads={config.threads}"
          f" vertex_symmetry={'on' if config.vertex_symmetry else 'off'}")
    if args.certificate:
        _write(args.certificate, format_certificate(outcome).encode('utf-8'))
    if outcome.found:
        if args.output:
            comments = [f"grlab search --n {args.n} --colors {args.colors} forbid {forbid.describe()}"]
            _write(args.output, encode_gcg(outcome.graph, comments))
        return EXIT_OK
    if outcome.exhausted:
        return EXIT_VIOLATED
    return EXIT_RESOURCE


def cmd_table(args) -> int:
    try:
        checks = check_constructions(args.family, args.k_max) if args.check_constructions else None
        print(format_table(args.family, args.k_max, checks))
    except UnknownPatternError as e:
        raise UsageError(str(e))
    if checks is not None and not all(c.ok for c in checks):
        return EXIT_VIOLATED
    return EXIT_OK


def cmd_pin(args) -> int:
    store = FixtureStore(args.data_dir)
    result = pin_presets(args.n_max, args.budget)
    presets_path, evidence_path = write_pin_result(result, store)
    for alias, label in sorted(result.pinned.items()):
        print(f"pinned {alias} {label}")
    for alias, labels in sorted(result.table['candidates'].items()):
        print(f"candidates {alias} {','.join(labels)}")
    print(f"assignments {len(result.assignments)} table={presets_path} evidence={evidence_path}")
    return EXIT_OK if result.consistent else EXIT_VIOLATED


COMMANDS = {
    'construct': cmd_construct,
    'verify': cmd_verify,
    'decompose': cmd_decompose,
    'search': cmd_search,
    'table': cmd_table,
    'pin': cmd_pin,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, dispatch to the verb and map failures to exit codes"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    _configure_logging(args.log_level)
    try:
        return COMMANDS[args.verb](args)
    except UsageError as e:
        print(f"grlab {args.verb}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (GcgFormatError, OSError) as e:
        logger.debug("Input/output failure", exc_info=True)
        print(f"grlab {args.verb}: error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (BaseWitnessUnavailable, OverflowError) as e:
        print(f"grlab {args.verb}: error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as e:
        logger.error(f"Error running {args.verb}: {e}", exc_info=True)
        print(f"grlab {args.verb}: error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main() -> int:
    load_dotenv()
    return run()


if __name__ == "__main__":
    sys.exit(main())
