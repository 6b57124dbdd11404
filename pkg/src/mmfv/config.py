"""Run configuration: a flat key/value text format with [section] headers.

Grammar (UTF-8): blank lines and lines starting with '#' are ignored;
'[name]' opens a section; 'key = value' assigns within the current
section. Unknown sections or keys are errors, as are missing mandatory
keys. Every RunConfig field has a key; see README for the full table.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import ConfigError

PROBLEMS = ("advection_quadratic", "euler_sine", "blast", "shu_osher", "riemann2d", "dmr")
MODES = ("tpe2", "gcl", "nongcl")
REZONERS = ("none", "random", "lagrangian_smooth")
BOUNDARY_KINDS = ("periodic", "exact", "reflective", "outflow", "default")


@dataclass
class RunConfig:
    problem: str = "advection_quadratic"
    nx: int = 40
    ny: int = 40
    xmin: float = 0.0
    xmax: float = 1.0
    ymin: float = 0.0
    ymax: float = 1.0
    final_time: float = 0.1
    geometry_mode: str = "tpe2"
    seed: int = 123456789
    relax_iters: int = 0
    model_kind: str = "advection"
    ax: float = 1.0
    ay: float = 1.0
    gamma: float = 1.4
    coeffs: tuple = (1.0, 2.0, 3.0, 1.0, -1.0, 1.0)
    cfl_physical: float = 0.25
    cfl_pseudo: float = 0.5
    forced_levels: Optional[int] = None
    rezoner: str = "random"
    cr: float = 0.5
    bx: float = -0.6
    by: float = -0.8
    passes: int = 2
    boundary: str = "default"
    error_csv: str = ""
    diagnostics_csv: str = ""
    snapshot_every: int = 0
    snapshot_dir: str = ""

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise ConfigError(f"unknown problem id: {self.problem}")
        if self.geometry_mode not in MODES:
            raise ConfigError(f"unknown geometry mode: {self.geometry_mode}")
        if self.rezoner not in REZONERS:
            raise ConfigError(f"unknown rezoner: {self.rezoner}")
        if abs(self.cr) > 0.5:
            raise ConfigError(f"|cr| must not exceed 0.5, got {self.cr}")
        if not 0.0 < self.cfl_pseudo <= 1.0:
            raise ConfigError("cfl_pseudo must lie in (0, 1]")
        if self.cfl_physical <= 0.0 or self.cfl_physical > 1.0:
            raise ConfigError("cfl_physical must lie in (0, 1]")
        if self.boundary not in BOUNDARY_KINDS:
            raise ConfigError(f"unknown boundary override: {self.boundary}")
        if len(self.coeffs) != 6:
            raise ConfigError("coeffs needs exactly six values")

    @property
    def bounds(self):
        return (self.xmin, self.xmax, self.ymin, self.ymax)


# section -> key -> (attribute, converter)
_FLOAT_KEYS = {
    "xmin", "xmax", "ymin", "ymax", "final_time", "ax", "ay", "gamma",
    "cfl_physical", "cfl_pseudo", "cr", "bx", "by",
}
_INT_KEYS = {"nx", "ny", "seed", "relax_iters", "passes", "snapshot_every", "forced_levels"}

_SCHEMA = {
    "run": {
        "problem": "problem",
        "final_time": "final_time",
        "geometry_mode": "geometry_mode",
        "seed": "seed",
        "relax_iters": "relax_iters",
    },
    "mesh": {
        "nx": "nx", "ny": "ny",
        "xmin": "xmin", "xmax": "xmax", "ymin": "ymin", "ymax": "ymax",
    },
    "model": {"kind": "model_kind", "ax": "ax", "ay": "ay", "gamma": "gamma"},
    "problem": {"coeffs": "coeffs"},
    "time": {
        "cfl_physical": "cfl_physical",
        "cfl_pseudo": "cfl_pseudo",
        "forced_levels": "forced_levels",
    },
    "rezoner": {"kind": "rezoner", "cr": "cr", "bx": "bx", "by": "by", "passes": "passes"},
    "boundary": {"all": "boundary"},
    "output": {
        "error_csv": "error_csv",
        "diagnostics_csv": "diagnostics_csv",
        "snapshot_every": "snapshot_every",
        "snapshot_dir": "snapshot_dir",
    },
}


def _convert(attr: str, raw: str, where: str):
    try:
        if attr == "coeffs":
            parts = raw.replace(",", " ").split()
            return tuple(float(p) for p in parts)
        if attr in _INT_KEYS:
            return int(raw)
        if attr in _FLOAT_KEYS:
            return float(raw)
        return raw
    except ValueError as exc:
        raise ConfigError(f"{where}: cannot parse value {raw!r}") from exc


def parse_config_text(text: str, source: str = "<string>") -> RunConfig:
    values = {}
    section = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        where = f"{source}:{lineno}"
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.startswith("[") and stripped.endswith("]"):
            section = stripped[1:-1].strip()
            if section not in _SCHEMA:
                raise ConfigError(f"{where}: unknown section [{section}]")
            continue
        if "=" not in stripped:
            raise ConfigError(f"{where}: expected 'key = value', got {line!r}")
        if section is None:
            raise ConfigError(f"{where}: key outside of any [section]")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in _SCHEMA[section]:
            raise ConfigError(f"{where}: unknown key '{key}' in section [{section}]")
        attr = _SCHEMA[section][key]
        values[attr] = _convert(attr, raw, where)
    try:
        return RunConfig(**values)
    except ConfigError:
        raise
    except TypeError as exc:
        raise ConfigError(f"{source}: {exc}") from exc


def load_config(path: str) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config_text(fh.read(), source=path)


def format_config(cfg: RunConfig) -> str:
    """Serialize a RunConfig in the file grammar (round-trips via parse)."""
    lines = []
    for section, keys in _SCHEMA.items():
        lines.append(f"[{section}]")
        for key, attr in keys.items():
            val = getattr(cfg, attr)
            if val is None:
                continue
            if attr == "coeffs":
                val = " ".join(repr(v) for v in val)
            lines.append(f"{key} = {val}")
        lines.append("")
    return "\n".join(lines)
