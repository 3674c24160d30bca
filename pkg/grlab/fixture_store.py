"""
Data directory access: committed .gcg base witnesses, the alias preset table
and the pinning evidence file.
"""

import json
import logging
import os
from threading import Lock
from typing import Any, Dict, Iterable, List, Optional

from coloring import ColoredCompleteGraph
from config_loader import get_config
from gcg_codec import decode_gcg, encode_gcg, read_comments

logger = logging.getLogger(__name__)

DEFAULT_PRESETS: Dict[str, Any] = {'aliases': {'f11': 'banner'}, 'candidates': {}}


class FixtureStore:
    """Reads and writes everything under the data directory."""

    def __init__(self, data_dir: Optional[str] = None):
        """Initialize fixture store.

        Args:
            data_dir: Data directory; defaults to the configured one, which the
                GRLAB_DATA_DIR environment variable overrides
        """
        self.config = get_config()
        self.data_dir = os.path.abspath(data_dir) if data_dir else self.config.data_directory
        self.fixtures_dir = os.path.join(self.data_dir, self.config.fixtures_subdir)
        self._lock = Lock()
        self._cache: Dict[str, ColoredCompleteGraph] = {}
        logger.debug(f"FixtureStore initialized at {self.data_dir}")

    def _ensure_directory(self, directory: str) -> None:
        """Create directory if it doesn't exist."""
        if not os.path.exists(directory):
            os.makedirs(directory)
            logger.info(f"Created data directory: {directory}")

    def fixture_path(self, name: str) -> str:
        filename = name if name.endswith('.gcg') else f"{name}.gcg"
        return os.path.join(self.fixtures_dir, filename)

    def has_fixture(self, name: str) -> bool:
        return os.path.exists(self.fixture_path(name))

    def list_fixtures(self) -> List[str]:
        if not os.path.isdir(self.fixtures_dir):
            return []
        return sorted(f[:-4] for f in os.listdir(self.fixtures_dir) if f.endswith('.gcg'))

    def load_fixture(self, name: str) -> ColoredCompleteGraph:
        """Decode a fixture, caching the result.

        Raises:
            FileNotFoundError: If the fixture is missing
            GcgFormatError: If the file is malformed
        """
        with self._lock:
            if name in self._cache:
                logger.debug(f"Cache hit for fixture {name}")
                return self._cache[name]
        path = self.fixture_path(name)
        with open(path, 'rb') as f:
            graph = decode_gcg(f.read())
        with self._lock:
            self._cache[name] = graph
        logger.debug(f"Loaded fixture {name}: n={graph.n} k={graph.k}")
        return graph

    def fixture_provenance(self, name: str) -> List[str]:
        with open(self.fixture_path(name), 'rb') as f:
            return read_comments(f.read())

    def save_fixture(self, name: str, graph: ColoredCompleteGraph, provenance: Iterable[str] = ()) -> str:
        """Write a fixture with '#' provenance lines; returns its path"""
        path = self.fixture_path(name)
        with self._lock:
            self._ensure_directory(self.fixtures_dir)
            with open(path, 'wb') as f:
                f.write(encode_gcg(graph, provenance))
            self._cache[name] = graph
        logger.info(f"Saved fixture {name} ({graph.n} vertices) to {path}")
        return path

    @property
    def presets_path(self) -> str:
        return os.path.join(self.data_dir, self.config.presets_file)

    @property
    def evidence_path(self) -> str:
        return os.path.join(self.data_dir, self.config.evidence_file)

    def load_presets(self) -> Dict[str, Any]:
        """Preset table; the f11 entry is always present"""
        if not os.path.exists(self.presets_path):
            logger.debug(f"No preset table at {self.presets_path}, using defaults")
            return json.loads(json.dumps(DEFAULT_PRESETS))
        with open(self.presets_path, 'r', encoding='utf-8') as f:
            table = json.load(f)
        table.setdefault('aliases', {})['f11'] = 'banner'
        table.setdefault('candidates', {})
        return table

    def save_presets(self, table: Dict[str, Any]) -> str:
        with self._lock:
            self._ensure_directory(self.data_dir)
            with open(self.presets_path, 'w', encoding='utf-8') as f:
                f.write(json.dumps(table, indent=2, sort_keys=True) + '\n')
        logger.info(f"Preset table written to {self.presets_path}")
        return self.presets_path

    def save_evidence(self, text: str) -> str:
        with self._lock:
            self._ensure_directory(self.data_dir)
            with open(self.evidence_path, 'w', encoding='utf-8') as f:
                f.write(text)
        logger.info(f"Pinning evidence written to {self.evidence_path}")
        return self.evidence_path

    def load_evidence(self) -> Optional[str]:
        if not os.path.exists(self.evidence_path):
            return None
        with open(self.evidence_path, 'r', encoding='utf-8') as f:
            return f.read()
