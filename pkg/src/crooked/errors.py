"""Exception hierarchy for the crooked-plane kernel."""


class CrookedError(Exception):
    """Base class for all errors raised by this package."""


class NotSpacelike(CrookedError):
    pass


class NotUnitSpacelike(CrookedError):
    pass


class NotConsistentlyOriented(CrookedError):
    pass


class InvalidParams(CrookedError):
    pass


class InvalidEndpoints(CrookedError):
    pass


class QuadratureFailure(CrookedError):
    pass


class Infeasible(CrookedError):
    pass


class PreconditionFailed(CrookedError):
    pass


class NotDisjoint(CrookedError):
    pass


class DegenerateCase(CrookedError):
    pass


class OutOfRange(CrookedError):
    pass


class ParseError(CrookedError):
    pass


class SchemaError(CrookedError):
    pass


class GeometryError(CrookedError):
    pass
