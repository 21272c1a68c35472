"""Exception hierarchy shared by every module."""


class RigidFoldError(ValueError):
    """Base class for all rigidfold errors."""


class DuplicateCrease(RigidFoldError):
    pass


class TooFewCreases(RigidFoldError):
    pass


class PartialAssignment(RigidFoldError):
    pass


class InexactAngle(RigidFoldError):
    """A float or decimal angle that is not an integer number of milli-degrees."""


class DegreeLimitExceeded(RigidFoldError):
    pass


class NotFoldable(RigidFoldError):
    pass


class DegenerateGeometry(RigidFoldError):
    pass


class CreaseCollision(RigidFoldError):
    pass


class RefinementFailed(RigidFoldError):
    pass


class SolverDiverged(RefinementFailed):
    pass


class SignViolation(RefinementFailed):
    pass


class SubdivisionLimit(RigidFoldError):
    pass


class ParseError(RigidFoldError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
