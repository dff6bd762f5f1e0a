"""Exception types shared across the package.

Every error carries an ``exit_code`` used by the command line front end:
1 condition violation, 2 parse error, 3 degenerate point, 4 numerical
failure, 5 not congruent / not canonical.
"""


class MinkError(Exception):
    exit_code = 1


# parse errors (exit 2)

class ParseError(MinkError):
    exit_code = 2


class ExprSyntaxError(ParseError):
    """Malformed expression; ``offset`` is the 0-based byte offset of the problem."""

    def __init__(self, message, offset, text=""):
        self.offset = offset
        self.text = text
        super().__init__(f"{message} at offset {offset}")


class UnknownFunction(ExprSyntaxError):
    pass


class NonIntegerExponent(ExprSyntaxError):
    pass


class SurfaceFileError(ParseError):
    pass


class SingularMatrix(ParseError):
    pass


# condition violations (exit 1)

class DomainError(MinkError):
    """Evaluation hit a singularity of a principal-branch function."""

    def __init__(self, subexpr, t):
        self.subexpr = subexpr
        self.t = complex(t)
        super().__init__(f"{subexpr} undefined at t={self.t}")


class ConditionViolated(MinkError):
    pass


class NotIsothermal(ConditionViolated):
    pass


class DegenerateMetric(ConditionViolated):
    pass


class SingularRecovery(ConditionViolated):
    pass


class NeedsLogBranch(ConditionViolated):
    pass


class UnsupportedDirection(MinkError):
    pass


# degenerate points (exit 3)

class DegeneratePoint(MinkError):
    exit_code = 3

    def __init__(self, t, order):
        self.t = complex(t)
        self.order = order
        super().__init__(f"degenerate point at t={self.t} (zero of order {order} of Phi'^2)")


class CanonicalBranchError(MinkError):
    exit_code = 3


# numerical failures (exit 4)

class NumericalFailure(MinkError):
    exit_code = 4


class QuadratureFailure(NumericalFailure):
    pass


class NewtonDivergence(NumericalFailure):
    def __init__(self, s, message="Newton iteration did not converge"):
        self.s = complex(s)
        super().__init__(f"{message} at s={self.s}")


# congruence / canonicity (exit 5)

class NotCongruent(MinkError):
    exit_code = 5

    def __init__(self, residual, message="surfaces are not congruent"):
        self.residual = residual
        super().__init__(f"{message} (max residual {residual:.3e})")


class NotCanonical(MinkError):
    exit_code = 5


class NotUnimodular(MinkError):
    exit_code = 5
