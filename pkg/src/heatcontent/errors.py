"""Exception hierarchy. Math-domain failures map to CLI exit code 3."""


class MathDomainError(ArithmeticError):
    """Base class for failures where the mathematical hypotheses break down."""


class ImaginaryAxisEigenvalue(MathDomainError):
    pass


class NonConvergence(MathDomainError):
    pass


class SingularConstraint(MathDomainError):
    pass


class IllConditioned(MathDomainError):
    pass


class BoundaryIncompatible(ValueError):
    """A field fails the boundary condition required by an identity."""
