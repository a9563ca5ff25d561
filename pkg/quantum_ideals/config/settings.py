"""
Runtime configuration for quantum_ideals: environment-backed engine settings
and the validated request built by the command line
"""
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from dotenv import load_dotenv

DATA_DIR = Path(__file__).resolve().parent.parent / 'data'
DEFAULT_CATALOG_DIR = DATA_DIR / 'catalog'
DEFAULT_TABLE_FILE = DATA_DIR / 'table_i5.json'

OUTPUT_FORMATS = ('json', 'csv', 'pretty')
THEORIES = ('SO3', 'SU2')


class ConfigError(ValueError):
    """Invalid configuration value"""
    pass


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw == '':
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}")


def _env_bool(name: str, default: bool) -> bool:
    raw = os.getenv(name)
    if raw is None or raw == '':
        return default
    if raw.lower() in ('1', 'true', 'yes', 'on'):
        return True
    if raw.lower() in ('0', 'false', 'no', 'off'):
        return False
    raise ConfigError(f"{name} must be a boolean, got {raw!r}")


@dataclass(frozen=True)
class EngineConfig:
    frontier_cap: int = 24
    jobs: int = 1
    cache_enabled: bool = True
    catalog_dir: Path = DEFAULT_CATALOG_DIR
    table_file: Path = DEFAULT_TABLE_FILE
    log_level: str = 'WARNING'

    @classmethod
    def from_env(cls, dotenv: bool = True) -> 'EngineConfig':
        """Read FKB_* variables, loading a .env file first when present"""
        if dotenv:
            load_dotenv()
        config = cls(
            frontier_cap=_env_int('FKB_FRONTIER_CAP', 24),
            jobs=_env_int('FKB_JOBS', 1),
            cache_enabled=_env_bool('FKB_CACHE', True),
            catalog_dir=Path(os.getenv('FKB_CATALOG_DIR') or DEFAULT_CATALOG_DIR),
            table_file=Path(os.getenv('FKB_TABLE_FILE') or DEFAULT_TABLE_FILE),
            log_level=(os.getenv('FKB_LOG_LEVEL') or 'WARNING').upper(),
        )
        if config.frontier_cap < 2:
            raise ConfigError("FKB_FRONTIER_CAP must be at least 2")
        if config.jobs < 1:
            raise ConfigError("FKB_JOBS must be at least 1")
        return config


def parse_range(text: str) -> Tuple[int, int]:
    """'A..B' -> (A, B), inclusive"""
    try:
        lo, hi = text.split('..')
        start, stop = int(lo), int(hi)
    except ValueError:
        raise ConfigError(f"Range must look like A..B, got {text!r}")
    if stop < start:
        raise ConfigError(f"Empty range {text!r}")
    return start, stop


def parse_int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(',') if x.strip()]
    except ValueError:
        raise ConfigError(f"Expected comma-separated integers, got {text!r}")


@dataclass
class RunConfig:
    """A validated command-line request"""
    command: str
    p: int = 5
    theory: str = 'SO3'
    catalog: Optional[str] = None
    pd_text: Optional[str] = None
    pd_file: Optional[str] = None
    unknots: int = 0
    unknot_framing: Optional[int] = None
    framings: Optional[List[int]] = None
    surgery_component: str = 'K'
    framing: int = 0
    scan_k: Optional[Tuple[int, int]] = None
    check_period: bool = False
    check_all: bool = False
    candidates: List[str] = field(default_factory=list)
    output_format: str = 'json'
    jobs: int = 1
    frontier_cap: int = 24
    catalog_dir: Path = DEFAULT_CATALOG_DIR
    table_file: Path = DEFAULT_TABLE_FILE

    def validate(self) -> 'RunConfig':
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"Unknown format {self.output_format!r}")
        if self.theory not in THEORIES:
            raise ConfigError(f"Unknown theory {self.theory!r}")
        if self.theory == 'SO3':
            if self.p < 5 or any(self.p % q == 0 for q in range(2, int(self.p ** 0.5) + 1)):
                raise ConfigError(f"--p must be a prime >= 5, got {self.p}")
        if self.jobs < 1:
            raise ConfigError("--jobs must be at least 1")
        if self.frontier_cap < 2:
            raise ConfigError("--frontier-cap must be at least 2")
        sources = [x for x in (self.catalog, self.pd_text, self.pd_file, self.unknot_framing) if x is not None]
        if self.command in ('invariant', 'ideal') and len(sources) != 1:
            raise ConfigError("Give exactly one of --catalog, --pd, --pd-file or --unknot-framing")
        if self.command == 'ideal' and self.unknot_framing is not None:
            raise ConfigError("The ideal command needs a two-component link")
        return self

    def metadata(self) -> Dict[str, Any]:
        """Defaults and conventions recorded alongside every result"""
        data = asdict(self)
        data['catalog_dir'] = str(self.catalog_dir)
        data['table_file'] = str(self.table_file)
        return data
