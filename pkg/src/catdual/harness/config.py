"""
Run Configuration

Loads and validates JSON run configurations. Defaults come from
``catdual_config.json`` at the project root; a run file only needs the
fields it changes.
"""

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

from ..core.errors import ConfigError

logger = logging.getLogger(__name__)

# Project root directory
PROJECT_ROOT = Path(__file__).parent.parent.parent.parent

SCHEMA_VERSION = 1

COMMANDS = (
    "check-pentagon", "build-hamiltonian", "spectrum", "verify-mpo", "verify-duality",
    "structure-constants", "gauge-map", "list-models", "apply-intertwiner", "export-matrix",
)


@dataclass
class Tolerances:
    """Consistency checks (pentagon, MPO, algebra) and spectral comparisons."""
    consistency: float = 1e-10
    spectral: float = 1e-8


@dataclass
class Couplings:
    J: float = 1.0
    g: float = 1.0
    q: Optional[float] = None
    n: Optional[int] = None

    def as_params(self) -> Dict[str, float]:
        return {k: v for k, v in asdict(self).items() if v is not None}


@dataclass
class RunConfig:
    """One fully resolved CLI run."""
    command: str
    model: Optional[str] = None
    model_b: Optional[str] = None
    category: Optional[str] = None
    module: Optional[str] = None
    N: int = 6
    couplings: Couplings = field(default_factory=Couplings)
    twist: Optional[Any] = None
    depth: int = 3
    tolerances: Tolerances = field(default_factory=Tolerances)
    out: Optional[str] = None
    report: Optional[str] = None
    input: Optional[str] = None
    hamiltonian: Optional[Dict[str, Any]] = None
    group: str = "Z2"

    @classmethod
    def default(cls) -> "RunConfig":
        return cls(command="spectrum", model="tfim")

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["schema"] = SCHEMA_VERSION
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any], defaults: Optional["RunConfig"] = None) -> "RunConfig":
        """Validate ``data`` field by field on top of ``defaults``."""
        _validate(data)
        base = (defaults or cls.default()).to_dict()
        base.pop("schema", None)
        merged = {**base, **{k: v for k, v in data.items() if k != "schema"}}
        merged["couplings"] = {**base["couplings"], **(data.get("couplings") or {})}
        merged["tolerances"] = {**base["tolerances"], **(data.get("tolerances") or {})}
        return cls(
            command=merged["command"],
            model=merged.get("model"),
            model_b=merged.get("model_b"),
            category=merged.get("category"),
            module=merged.get("module"),
            N=int(merged["N"]),
            couplings=Couplings(**merged["couplings"]),
            twist=merged.get("twist"),
            depth=int(merged.get("depth", 3)),
            tolerances=Tolerances(**merged["tolerances"]),
            out=merged.get("out"),
            report=merged.get("report"),
            input=merged.get("input"),
            hamiltonian=merged.get("hamiltonian"),
            group=merged.get("group", "Z2"),
        )


_TYPES = {
    "command": str, "model": str, "model_b": str, "category": str, "module": str,
    "N": int, "depth": int, "out": str, "report": str, "input": str, "group": str,
    "hamiltonian": dict, "couplings": dict, "tolerances": dict,
}
_NUMBERS = {"couplings": ("J", "g", "q", "n"), "tolerances": ("consistency", "spectral")}


def _validate(data: Any) -> None:
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a JSON object", field_path="$")
    if data.get("schema", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema {data.get('schema')!r}, expected {SCHEMA_VERSION}", field_path="schema")
    unknown = set(data) - set(_TYPES) - {"schema", "twist"}
    if unknown:
        raise ConfigError(f"unknown field(s) {sorted(unknown)}", field_path=sorted(unknown)[0])
    for key, typ in _TYPES.items():
        value = data.get(key)
        if value is None:
            continue
        if typ is int and (isinstance(value, bool) or not isinstance(value, int)):
            raise ConfigError(f"expected an integer, got {value!r}", field_path=key)
        if typ is not int and not isinstance(value, typ):
            raise ConfigError(f"expected {typ.__name__}, got {type(value).__name__}", field_path=key)
    if "command" in data and data["command"] not in COMMANDS:
        raise ConfigError(f"unknown command {data['command']!r}; expected one of {', '.join(COMMANDS)}",
                          field_path="command")
    if "N" in data and data["N"] < 1:
        raise ConfigError("chain length must be positive", field_path="N")
    if "depth" in data and data["depth"] < 1:
        raise ConfigError("depth must be at least 1", field_path="depth")
    for block, names in _NUMBERS.items():
        sub = data.get(block) or {}
        for k, v in sub.items():
            if k not in names:
                raise ConfigError(f"unknown field {k!r}", field_path=f"{block}.{k}")
            if v is not None and (isinstance(v, bool) or not isinstance(v, (int, float))):
                raise ConfigError(f"expected a number, got {v!r}", field_path=f"{block}.{k}")
        for k in ("consistency", "spectral"):
            if block == "tolerances" and k in sub and sub[k] <= 0:
                raise ConfigError("tolerances must be positive", field_path=f"{block}.{k}")
    ham = data.get("hamiltonian")
    if ham is not None:
        if "chain" not in ham:
            raise ConfigError("inline Hamiltonian needs a chain block", field_path="hamiltonian.chain")
        if not isinstance(ham.get("terms"), list) or not ham["terms"]:
            raise ConfigError("inline Hamiltonian needs a non-empty term list", field_path="hamiltonian.terms")
        for n, term in enumerate(ham["terms"]):
            if "bond" not in term:
                raise ConfigError("term has no bond rows", field_path=f"hamiltonian.terms[{n}].bond")
        if not data.get("category"):
            raise ConfigError("inline Hamiltonian needs a category address", field_path="category")


def load_config(path: Any, defaults: Optional[RunConfig] = None) -> RunConfig:
    """Read a run file; missing fields fall back to the project defaults."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file {path} does not exist", field_path="$")
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON: {e}", field_path="$") from None
    config = RunConfig.from_dict(data, defaults or get_config_manager().defaults)
    logger.debug(f"🔧 loaded {config.command} config from {path}")
    return config


class ConfigManager:
    """Project-wide run defaults persisted next to the sources."""

    CONFIG_FILENAME = "catdual_config.json"

    def __init__(self, config_dir: Optional[Path] = None):
        self.config_dir = config_dir or PROJECT_ROOT
        self.config_path = self.config_dir / self.CONFIG_FILENAME
        self._defaults: Optional[RunConfig] = None
        self._load()

    def _load(self) -> None:
        if not self.config_path.exists():
            self._defaults = RunConfig.default()
            return
        try:
            with open(self.config_path, "r", encoding="utf-8") as f:
                data = json.load(f)
            self._defaults = RunConfig.from_dict(data)
            logger.debug(f"✅ loaded run defaults from {self.config_path}")
        except (ConfigError, json.JSONDecodeError) as e:
            logger.warning(f"⚠️ ignoring {self.config_path}: {e}")
            self._defaults = RunConfig.default()

    @property
    def defaults(self) -> RunConfig:
        if self._defaults is None:
            self._defaults = RunConfig.default()
        return self._defaults

    def save(self) -> None:
        with open(self.config_path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(self.defaults.to_dict(), f, indent=2)
        logger.info(f"✅ saved run defaults to {self.config_path}")

    def reload(self) -> None:
        self._load()


_config_manager: Optional[ConfigManager] = None


def get_config_manager() -> ConfigManager:
    """Get the global configuration manager."""
    global _config_manager
    if _config_manager is None:
        _config_manager = ConfigManager()
    return _config_manager
