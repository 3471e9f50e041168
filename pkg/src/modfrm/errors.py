"""Exception hierarchy shared by the design modules and the CLI."""


class ModFrmError(Exception):
    """Base class for all errors raised by this package."""


class SpecError(ModFrmError, ValueError):
    """Invalid or unachievable design specification / configuration."""


class AllocationError(SpecError):
    """Channel allocation inconsistent with the uniform bank."""


class AlignmentError(ModFrmError):
    """Branch delays cannot be equalised with an integer delay."""


class DesignError(ModFrmError, RuntimeError):
    """A numerical design step failed (no convergence, cap exceeded, ...)."""


class ConvergenceError(DesignError):
    """The Remez exchange did not converge within the iteration budget."""


class SchemaError(ModFrmError, ValueError):
    """A design file could not be parsed or has the wrong schema."""
