"""Exception types shared across the solver."""


class SolverError(Exception):
    """Base class for all solver failures."""


class RegularityError(SolverError):
    """A cell violates the mesh regularity assumption (degenerate,
    clockwise, or non-convex). Carries whatever context the caller has:
    cell index, pseudo-time, RK stage."""


class StateError(SolverError):
    """A physical state is inadmissible (non-positive density or pressure)."""


class SingularStencil(SolverError):
    """The least-squares reconstruction system is rank deficient,
    which signals pathological stencil geometry."""


class UnsupportedDegree(SolverError):
    """A basis integral of degree s + r > 2 was requested."""


class NegativeVolume(SolverError):
    """An evolved cell volume became non-positive; the pseudo-time step
    violated the CFL positivity bound."""


class ConfigError(SolverError):
    """A run configuration file is malformed or inconsistent."""
