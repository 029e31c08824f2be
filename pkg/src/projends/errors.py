"""Exception hierarchy.

``InputError`` subclasses signal malformed input (CLI exit code 2); every
other ``ProjEndsError`` is a mathematical failure (exit code 1).
"""


class ProjEndsError(Exception):
    pass


class InputError(ProjEndsError):
    pass


# projective core
class NotCollinear(InputError):
    pass


class DegenerateConfig(InputError):
    pass


class SingularMatrix(InputError):
    pass


# convex bodies
class IdenticalPoints(InputError):
    pass


class NotInterior(InputError):
    pass


class DegenerateBody(ProjEndsError):
    pass


class NotProperlyConvex(ProjEndsError):
    pass


class NotInAmbient(InputError):
    pass


class NotIndependent(InputError):
    pass


class NotStrictlyConvexInput(InputError):
    pass


class NotOnBoundary(InputError):
    pass


# holonomy
class EigenFailure(ProjEndsError):
    pass


class NotProximal(ProjEndsError):
    pass


class NotSemiproximal(ProjEndsError):
    pass


class ZeroGap(ProjEndsError):
    pass


class NotFixed(InputError):
    pass


class BallExplosion(ProjEndsError):
    pass


class NotInBall(InputError):
    pass


class EmptySample(ProjEndsError):
    pass


# ends
class AtVertex(InputError):
    pass


class NotBoundaryPreserving(InputError):
    pass


class NoProximalElements(ProjEndsError):
    pass


class UMECFailed(ProjEndsError):
    pass


class DegenerateHull(ProjEndsError):
    pass


class OrbitEscape(ProjEndsError):
    pass


class WrongBlockPattern(ProjEndsError):
    pass


class HullTouchesAntipode(ProjEndsError):
    pass


# flow
class NotStrictlyConvex(InputError):
    pass


class RecenterFailure(ProjEndsError):
    pass


# io
class SchemaError(InputError):
    pass


class DeterminantZero(InputError):
    pass
