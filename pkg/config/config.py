"""
Configuration Manager
Centralized configuration management for the hecke toolkit
"""
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

import yaml
from dotenv import dotenv_values, load_dotenv

from hecke.exceptions import ConfigError

# Load environment variables
load_dotenv()

# Settings that failed to parse at import; reported by Config.validate()
_INVALID: Dict[str, str] = {}


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        return int(raw)
    except ValueError:
        _INVALID[name] = raw
        return default


class Config:
    """Configuration class to manage all toolkit settings"""

    # Project paths
    BASE_DIR = Path(__file__).resolve().parent.parent
    LOG_DIR = BASE_DIR / os.getenv('LOG_DIR', 'logs')
    REPORT_DIR = BASE_DIR / os.getenv('REPORT_DIR', 'reports')
    OUTPUT_DIR = BASE_DIR / os.getenv('OUTPUT_DIR', 'output')

    # Environment
    ENVIRONMENT = os.getenv('ENVIRONMENT', 'dev')

    # Logging Configuration
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')

    # Parallelism (HECKE_THREADS is read per job through env_threads)
    THREADS = 1

    # Size guardrails
    MAX_RANK = _env_int('HECKE_MAX_RANK', 6)
    MAX_GROUP_ORDER = _env_int('HECKE_MAX_GROUP_ORDER', 51840)
    MAX_INDEX_SET = _env_int('HECKE_MAX_INDEX_SET', 1000000)
    MAX_FIELD_CHAR = _env_int('HECKE_MAX_FIELD_CHAR', 101)

    # Output
    DEFAULT_FORMAT = os.getenv('HECKE_FORMAT', 'json').lower()
    SCHEMA_VERSION = 1

    @classmethod
    def ensure_directories(cls):
        """Ensure all required directories exist"""
        cls.LOG_DIR.mkdir(parents=True, exist_ok=True)
        cls.REPORT_DIR.mkdir(parents=True, exist_ok=True)
        cls.OUTPUT_DIR.mkdir(parents=True, exist_ok=True)

    @classmethod
    def validate(cls):
        """Raise ConfigError for any integer setting that did not parse"""
        if _INVALID:
            details = ", ".join(f"{name}={raw!r}" for name, raw in sorted(_INVALID.items()))
            raise ConfigError(f"settings must be integers: {details}")

    @classmethod
    def env_threads(cls) -> Optional[int]:
        """HECKE_THREADS as currently set, or None when absent"""
        raw = os.getenv('HECKE_THREADS')
        if raw is None or raw.strip() == '':
            return None
        try:
            return int(raw)
        except ValueError as e:
            raise ConfigError(f"HECKE_THREADS must be an integer, got {raw!r}") from e

    @classmethod
    def get_all_config(cls) -> Dict[str, Any]:
        """Get all configuration as dictionary"""
        return {
            'environment': cls.ENVIRONMENT,
            'log_level': cls.LOG_LEVEL,
            'threads': cls.THREADS,
            'max_rank': cls.MAX_RANK,
            'max_group_order': cls.MAX_GROUP_ORDER,
            'max_index_set': cls.MAX_INDEX_SET,
            'max_field_char': cls.MAX_FIELD_CHAR,
            'default_format': cls.DEFAULT_FORMAT,
        }


FORMATS = ('json', 'csv', 'text')
SUITES = ('braid', 'quadratic', 'oracle', 'bar', 'canonical', 'v1', 'sign', 'bijection', 'lv_sector')


@dataclass(frozen=True)
class JobConfig:
    """One command-line job: which module to build and what to do with it"""
    cartan_type: str = 'A1'
    m: int = 1
    denominator: int = 1
    orbit: Optional[str] = None
    output_format: str = 'json'
    suites: Tuple[str, ...] = SUITES
    threads: int = 1
    q: int = 3
    gen: Optional[str] = None
    out: Optional[str] = None
    extra: Mapping[str, str] = field(default_factory=dict, compare=False)

    def validate(self) -> 'JobConfig':
        """
        Check the invariants of a job

        Returns:
            JobConfig: self, for chaining

        Raises:
            ConfigError: on the first invalid field
        """
        if self.m < 1:
            raise ConfigError(f"m must be >= 1, got {self.m}")
        if self.denominator < 1:
            raise ConfigError(f"denominator must be >= 1, got {self.denominator}")
        if self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")
        if self.output_format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.output_format!r}")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ConfigError(f"unknown verification suites: {unknown}")
        if self.orbit is not None:
            from hecke.coeff import parse_rational
            try:
                coords = [parse_rational(c) for c in self.orbit.split(',')]
            except (ValueError, ZeroDivisionError) as e:
                raise ConfigError(f"orbit base point {self.orbit!r} is not a list of rationals") from e
            for c in coords:
                if self.denominator % c.denominator:
                    raise ConfigError(
                        f"orbit coordinate {c} has denominator not dividing N={self.denominator}"
                    )
        return self


_INT_KEYS = {'m', 'denominator', 'threads', 'q'}
_KEY_ALIASES = {'type': 'cartan_type', 'format': 'output_format', 'n': 'denominator'}


def read_config_file(path: Path) -> Dict[str, str]:
    """
    Read a flat key/value configuration file

    Args:
        path: .env-style file, or .yaml/.yml holding a flat mapping

    Returns:
        Dict[str, str]: raw values keyed by lower-cased key
    """
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    if path.suffix in ('.yaml', '.yml'):
        with path.open() as fh:
            data = yaml.safe_load(fh) or {}
        if not isinstance(data, dict) or any(isinstance(v, (dict, list)) for v in data.values()):
            raise ConfigError(f"config file {path} must be a flat key/value mapping")
        raw = {str(k): '' if v is None else str(v) for k, v in data.items()}
    else:
        raw = {k: v or '' for k, v in dotenv_values(path).items()}
    return {k.strip().lower(): v.strip() for k, v in raw.items()}


def _coerce(values: Mapping[str, str]) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    for key, value in values.items():
        key = _KEY_ALIASES.get(key, key)
        if key in _INT_KEYS:
            try:
                out[key] = int(value)
            except ValueError as e:
                raise ConfigError(f"{key} must be an integer, got {value!r}") from e
        elif key == 'suites':
            out[key] = tuple(s.strip() for s in value.split(',') if s.strip())
        elif key in JobConfig.__dataclass_fields__ and key != 'extra':
            out[key] = value
        else:
            out.setdefault('extra', {})[key] = value
    return out


def load_job_config(flags: Mapping[str, Any], config_file: Optional[Path] = None) -> JobConfig:
    """
    Merge defaults, config file, environment and flags into a JobConfig

    Args:
        flags: values given on the command line (None means "not given")
        config_file: optional flat key/value file

    Returns:
        JobConfig: validated job configuration
    """
    Config.validate()
    job = JobConfig(output_format=Config.DEFAULT_FORMAT, threads=Config.THREADS)
    if config_file is not None:
        job = replace(job, **_coerce(read_config_file(Path(config_file))))
    env_threads = Config.env_threads()
    if env_threads is not None:
        job = replace(job, threads=env_threads)
    given = {k: v for k, v in flags.items() if v is not None and k in JobConfig.__dataclass_fields__}
    job = replace(job, **given)
    return job.validate()


# Initialize directories on import
Config.ensure_directories()
