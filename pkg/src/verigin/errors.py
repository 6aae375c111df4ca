"""Exception types shared across the package."""


class VeriginError(Exception):
    """Base class for all package-specific errors."""


class DensityOutOfRange(VeriginError):
    """Density argument lies outside the declared valid density window."""


class PressureOutOfRange(VeriginError):
    """Pressure has no preimage under the equation of state on the valid window."""


class NoConvergence(VeriginError):
    """An iterative solve exhausted its iteration budget."""


class NonMonotoneDrag(VeriginError):
    """The drag law s -> s*g(s) is not increasing near the requested sample."""


class GeometryDegenerate(VeriginError):
    """Interface radii lost their strict ordering / separation."""


class DensityJumpVanishes(VeriginError):
    """The density jump across an interface is (numerically) zero."""


class DegenerateEquilibrium(VeriginError):
    """Equilibrium state violates the non-degeneracy assumptions."""


class EigensolverFailure(VeriginError):
    """The dense generalized eigensolver failed or returned garbage."""


class SingularSystem(VeriginError):
    """A discrete elliptic solve hit a singular matrix."""


class BranchCut(VeriginError):
    """Square-root argument sits on the negative real axis; branch ambiguous."""


class NewtonDiverged(VeriginError):
    """The implicit-step Newton iteration failed to reach tolerance."""


class EventTriggered(VeriginError):
    """A blow-up obstruction fired during time stepping.

    ``kind`` is one of: InterfaceCollision, InterfaceAtBoundary,
    InterfaceCollapsed, DensityJumpVanished, NormBlowup.
    """

    def __init__(self, kind, message=""):
        self.kind = kind
        super().__init__(f"{kind}: {message}" if message else kind)


class ConfigError(VeriginError):
    """Configuration file failed to parse or validate.

    ``issues`` is a list of (json_pointer, message) pairs.
    """

    def __init__(self, issues):
        self.issues = list(issues)
        lines = "; ".join(f"{ptr}: {msg}" for ptr, msg in self.issues)
        super().__init__(lines)
