#!/usr/bin/env python3
"""
Base Witness Regeneration Script

Rebuilds the two-colour base witnesses the even-k towers start from: a K8
avoiding the f9/f10 patterns and a K9 avoiding the f12/f13 patterns. Each file
is written with '#' provenance lines echoing the search configuration.

Each alias contributes its pinned pattern, else its candidate list from the
preset table, else the candidates the current fixture already avoids, and
with no fixture at all its structural candidates.

Example:
    cd grlab && python3 regenerate_fixtures.py --budget 100000000
"""

import argparse
import logging
import os
import sys
from typing import List, Optional, Set, Tuple

from dotenv import load_dotenv

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from catalog import AmbiguousAliasError, named, resolve_alias
from constructions import F9_F10_BASE, F12_F13_BASE
from fixture_store import FixtureStore
from presets import fixture_consistent_candidates, structural_candidates
from search import Forbid, SearchConfig, find_free_coloring

logging.basicConfig(
    level=logging.INFO,
    format='[%(asctime)s] [%(levelname)-8s] [%(name)s] %(message)s',
    datefmt='%Y-%m-%d %H:%M:%S'
)
logger = logging.getLogger(__name__)

BASES = {
    F9_F10_BASE: (8, ('f9', 'f10')),
    F12_F13_BASE: (9, ('f12', 'f13')),
}


def _labels_for(alias: str, name: str, table, store: FixtureStore) -> Tuple[List[str], str]:
    try:
        return [resolve_alias(alias, table)], 'pinned presets'
    except AmbiguousAliasError as e:
        if e.candidates:
            return list(e.candidates), 'preset candidates'
    if store.has_fixture(name):
        return fixture_consistent_candidates(alias, store), 'candidates avoided by the current fixture'
    return structural_candidates(alias), 'structural candidates'


def patterns_to_avoid(name: str, store: FixtureStore) -> Tuple[List[str], str]:
    """Labels the base must avoid and where they came from"""
    _, aliases = BASES[name]
    table = store.load_presets()
    labels: Set[str] = set()
    sources: List[str] = []
    for alias in aliases:
        found, source = _labels_for(alias, name, table, store)
        labels.update(found)
        if source not in sources:
            sources.append(source)
    return sorted(labels), ' + '.join(sources)


def regenerate(name: str, store: FixtureStore, config: SearchConfig) -> bool:
    order, aliases = BASES[name]
    labels, source = patterns_to_avoid(name, store)
    logger.info(f"Regenerating {name}: K{order}, avoiding {', '.join(labels)} ({source})")

    forbid = Forbid(False, tuple(named(label) for label in labels))
    outcome = find_free_coloring(order, 2, forbid, config=config)
    if not outcome.found:
        logger.error(f"No base for {name}: search ended with verdict {outcome.verdict_name}"
                     f" after {outcome.nodes_visited} nodes")
        return False

    provenance = [
        f"base witness {name} for {'/'.join(aliases)}",
        f"generated by regenerate_fixtures.py: find_free_coloring n={order} k=2",
        f"forbid mono {' '.join(labels)} ({source})",
        f"budget {config.budget} threads {config.threads} split_depth {config.split_depth}"
        f" vertex_symmetry {'on' if config.vertex_symmetry else 'off'}",
        f"verdict {outcome.verdict_name} nodes_visited {outcome.nodes_visited}",
    ]
    store.save_fixture(name, outcome.graph, provenance)
    return True


def main(argv: Optional[List[str]] = None) -> int:
    """Main function to regenerate base witnesses"""
    parser = argparse.ArgumentParser(description='Regenerate two-colour base witnesses')
    parser.add_argument('names', nargs='*', metavar='NAME',
                        help=f"Fixtures to rebuild: {', '.join(sorted(BASES))} (default: all)")
    parser.add_argument('--budget', type=int, help='Search node budget')
    parser.add_argument('--data-dir', help='Data directory to write into')
    args = parser.parse_args(argv)
    unknown = [name for name in args.names if name not in BASES]
    if unknown:
        parser.error(f"unknown fixture(s): {', '.join(unknown)}")

    try:
        logger.info("=" * 60)
        logger.info("Starting base witness regeneration")
        load_dotenv()

        store = FixtureStore(args.data_dir)
        config = SearchConfig.from_settings(False, budget=args.budget)
        results = [regenerate(name, store, config) for name in (args.names or sorted(BASES))]
        return 0 if all(results) else 1

    except Exception as e:
        logger.error(f"Error regenerating base witnesses: {e}", exc_info=True)
        return 1
    finally:
        logger.info("Base witness regeneration completed")
        logger.info("=" * 60)


if __name__ == "__main__":
    sys.exit(main())
