import logging
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any

import yaml

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_NAME = "permcirc.yml"


@dataclass(frozen=True)
class Settings:
    """Tunable limits and constants; every field may be set from YAML."""

    enumeration_limit: int = 26
    naive_cap: int = 10
    ryser_cap: int = 32
    sv_qubit_cap: int = 20
    verify_matrix_cap: int = 30
    betas: tuple[int, int, int] = (-2, 1, 1)
    default_mode: str = "graph-fix"
    mc_streams: int = 16
    norm_tol: float = 1e-10
    norm_max_iter: int = 10_000
    ryser_low_bits: int = 16
    gap_chunk_bits: int = 20


DEFAULTS = Settings()


def _coerce(name: str, value: Any) -> Any:
    if name == "betas":
        if not isinstance(value, (list, tuple)) or len(value) != 3:
            raise ValueError("betas must be a list of three integers")
        return tuple(int(b) for b in value)
    if name == "default_mode":
        if value not in ("graph-fix", "subst"):
            raise ValueError(f"default_mode must be 'graph-fix' or 'subst', not {value!r}")
        return value
    if name in ("norm_tol",):
        return float(value)
    return int(value)


def settings_from_mapping(data: dict[str, Any], base: Settings = DEFAULTS) -> Settings:
    known = {f.name for f in fields(Settings)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ValueError(f"Unknown configuration keys: {', '.join(unknown)}")
    return replace(base, **{key: _coerce(key, value) for key, value in data.items()})


def load_settings(path: Path | None = None) -> Settings:
    """Load settings from ``path``, or from ``permcirc.yml`` in the working
    directory when it exists; fall back to the defaults otherwise."""
    if path is None:
        candidate = Path.cwd() / DEFAULT_CONFIG_NAME
        if not candidate.exists():
            return DEFAULTS
        path = candidate

    logger.info(f"Using configuration: {path}")
    with path.open(encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a mapping at the top level")
    return settings_from_mapping(data)
