"""mmfv: a third-order finite-volume rezoning moving-mesh solver.

Quadrilateral meshes, evolved geometric moments for exact polynomial
transport under arbitrary mesh motion, 2-exact hybrid WENO
reconstruction, and SSPRK3 time stepping in both physical and
pseudo-time.
"""

from .config import RunConfig, load_config, parse_config_text
from .driver import FieldState, RunResult, run
from .equations import Advection, Euler, make_model
from .errors import (
    ConfigError,
    NegativeVolume,
    RegularityError,
    SingularStencil,
    SolverError,
    StateError,
    UnsupportedDegree,
)
from .remap import RemapConfig, remap, ssprk3

__version__ = "0.1.0"

__all__ = [
    "Advection",
    "ConfigError",
    "Euler",
    "FieldState",
    "NegativeVolume",
    "RegularityError",
    "RemapConfig",
    "RunConfig",
    "RunResult",
    "SingularStencil",
    "SolverError",
    "StateError",
    "UnsupportedDegree",
    "load_config",
    "make_model",
    "parse_config_text",
    "remap",
    "run",
    "ssprk3",
]
