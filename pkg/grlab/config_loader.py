"""
Configuration loader utility
Loads and provides access to grlab settings from config.json
"""

import json
import os
from typing import Any, Optional

from dotenv import load_dotenv


class Config:
    """Configuration singleton"""
    _instance = None
    _config_data = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._load_config()
        return cls._instance

    def _load_config(self) -> None:
        """Load configuration from config.json"""
        config_path = os.path.join(os.path.dirname(__file__), 'config.json')

        if not os.path.exists(config_path):
            raise FileNotFoundError(f"Configuration file not found: {config_path}")

        with open(config_path, 'r', encoding='utf-8') as f:
            self._config_data = json.load(f)

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value by dot-notation key (e.g., 'search.default_budget')"""
        keys = key.split('.')
        value = self._config_data

        for k in keys:
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default

        return value

    @property
    def data_env_var(self) -> str:
        """Name of the environment variable overriding the data directory"""
        return self.get('data.env_override', 'GRLAB_DATA_DIR')

    @property
    def data_directory(self) -> str:
        """Resolve the data directory.

        The environment variable (also read from a .env file) wins; otherwise
        the configured directory, relative to this module.
        """
        load_dotenv()
        override: Optional[str] = os.environ.get(self.data_env_var)
        if override:
            return os.path.abspath(override)
        directory = self.get('data.directory', 'data')
        return os.path.join(os.path.dirname(os.path.abspath(__file__)), directory)

    @property
    def fixtures_subdir(self) -> str:
        return self.get('data.fixtures_subdir', 'fixtures')

    @property
    def presets_file(self) -> str:
        return self.get('data.presets_file', 'presets.json')

    @property
    def evidence_file(self) -> str:
        return self.get('data.evidence_file', 'pin_evidence.json')

    @property
    def search_budget(self) -> int:
        """Default node budget for exhaustive searches"""
        return int(self.get('search.default_budget', 10 ** 9))

    @property
    def search_threads(self) -> int:
        return int(self.get('search.threads', 1))

    @property
    def search_split_depth(self) -> int:
        """Number of edges fixed before subtrees are farmed out to workers"""
        return int(self.get('search.split_depth', 6))

    @property
    def vertex_symmetry_proofs(self) -> bool:
        return bool(self.get('search.vertex_symmetry_proofs', True))

    @property
    def vertex_symmetry_witness(self) -> bool:
        return bool(self.get('search.vertex_symmetry_witness', False))

    @property
    def pinning_n_max(self) -> int:
        return int(self.get('pinning.n_max', 10))

    @property
    def pinning_budget(self) -> int:
        return int(self.get('pinning.budget', 10 ** 9))

    @property
    def pinning_seed(self) -> int:
        return int(self.get('pinning.seed', 0))

    @property
    def max_pattern_order(self) -> int:
        """Largest pattern order accepted by containment checks"""
        return int(self.get('patterns.max_order', 12))

    @property
    def formulas_max_k(self) -> int:
        return int(self.get('formulas.max_k', 40))

    @property
    def table_check_max_vertices(self) -> int:
        """Skip construction cross-checks for witnesses larger than this"""
        return int(self.get('table.check_max_vertices', 2000))

    @property
    def log_level(self) -> str:
        return str(self.get('logging.level', 'INFO')).upper()

    def reload(self) -> None:
        """Reload configuration from file"""
        self._load_config()


def get_config() -> Config:
    """Get configuration instance"""
    return Config()
