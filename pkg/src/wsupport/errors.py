"""Exception types raised across the package."""


class WSupportError(Exception):
    """Base class for domain failures (CLI exit code 1)."""


class GroupTooLarge(WSupportError):
    pass


class SingularPoint(WSupportError, ValueError):
    pass


class SingularGridPoint(SingularPoint):
    pass


class InsufficientPower(WSupportError):
    pass


class MissingFactorization(WSupportError):
    pass


class PointInsideBody(WSupportError, ValueError):
    pass


class NoExteriorPoint(WSupportError):
    pass


class GenericityFailure(WSupportError):
    pass


class NotInvariant(WSupportError):
    pass


class BodyNotInRegion(WSupportError):
    pass


class BodyNotInvariant(WSupportError):
    pass


class QuadratureError(WSupportError):
    pass


class UnknownScenario(WSupportError, KeyError):
    pass


class ConfigError(ValueError):
    """Bad user configuration (CLI exit code 2)."""
