# -*- coding: utf-8 -*-
"""All dinc errors that are worth processing. Every error carries the exit code
the command line front end terminates with, so a failing run always ends with
one of the documented codes.
"""

__author__ = 'pydinc developers'
__all__ = [
    # Base Exception
    'InclusionError',

    # Input errors
    'ParseError',
    'ValidationError',
    'InvalidSign',
    'AdmissibilityViolation',
    'OutOfRange',
    'DimensionMismatch',
    'NotSymmetric',
    'NotPositiveDefinite',
    'InvalidNonlinearity',
    'UndeclaredAsymptotics',
    'InconsistentDeclaration',
    'TooLarge',
    'InvalidConfig',

    # Hypothesis errors
    'HypothesisNotSatisfied',
    'NonpositivePotential',

    # Solver errors
    'SolverError',
    'ConvergenceFailure',
    'DidNotConverge',
    'PathCollapse',

    'InternalConsistencyError',
]


class InclusionError(Exception):
    """Base Exception type for dinc module"""

    exit_code = 1
    message = None

    def __init__(self, details=None):
        super().__init__(details)
        self.details = details

    def __str__(self):
        if self.details:
            return f'{self.message}: {self.details}'
        return self.message


class ParseError(InclusionError):
    """Raised when a scenario file could not be decoded"""

    exit_code = 64
    message = "Parse Error - scenario could not be parsed"


class ValidationError(InclusionError):
    """Raised when an input violates the preconditions of an operation"""

    exit_code = 65
    message = "Validation Error - invalid input"


class InvalidSign(ValidationError):
    """Raised when tridiagonal coefficients are not in the negative/positive
    quadrant (a < 0 < b)
    """

    message = "Invalid Sign - expected a < 0 and b > 0"


class AdmissibilityViolation(ValidationError):
    """Raised when cos(pi/(T+1)) < -b/(2a) fails for a tridiagonal matrix"""

    message = "Admissibility Violation - matrix is not guaranteed SPD"


class OutOfRange(ValidationError):
    """Raised when an index lies outside its admissible range"""

    message = "Out Of Range - index outside the admissible range"


class DimensionMismatch(ValidationError):
    """Raised when vector or list lengths do not match the matrix order"""

    message = "Dimension Mismatch - lengths do not match the matrix order"


class NotSymmetric(ValidationError):
    """Raised when matrix entries are not bit-equal to their transpose"""

    message = "Not Symmetric - matrix must equal its transpose"


class NotPositiveDefinite(ValidationError):
    """Raised when the symmetric factorization of a matrix fails"""

    message = "Not Positive Definite - symmetric factorization failed"


class InvalidNonlinearity(ValidationError):
    """Raised when breakpoints or segments of a nonlinearity are malformed"""

    message = "Invalid Nonlinearity - malformed breakpoints or segments"


class UndeclaredAsymptotics(ValidationError):
    """Raised when an asymptotic bound is needed but was never declared"""

    message = "Undeclared Asymptotics - no asymptotic bound declared"


class InconsistentDeclaration(ValidationError):
    """Raised when sampling contradicts a declared asymptotic bound"""

    message = "Inconsistent Declaration - samples exceed the declared bound"

    def __init__(self, details=None, sample=None):
        super().__init__(details)
        self.sample = sample


class TooLarge(ValidationError):
    """Raised when the brute force oracle is asked for more than 3 unknowns"""

    message = "Too Large - brute force oracle supports T <= 3"


class InvalidConfig(ValidationError):
    """Raised when a solver configuration violates its invariants"""

    message = "Invalid Config - solver configuration is inconsistent"


class HypothesisNotSatisfied(InclusionError):
    """Raised when an interval is requested but its hypotheses fail"""

    exit_code = 2
    message = "Hypothesis Not Satisfied - admissible interval is empty"


class NonpositivePotential(InclusionError):
    """Raised when H(delta) <= 0 so the threshold is undefined"""

    exit_code = 2
    message = "Nonpositive Potential - H(delta) must be positive"


class SolverError(InclusionError):
    """Base type for numerical failures"""

    exit_code = 3
    message = "Solver Error"


class ConvergenceFailure(SolverError):
    """Raised when the eigenvalue iteration exhausts its sweep budget"""

    message = "Convergence Failure - iteration budget exhausted"


class DidNotConverge(SolverError):
    """Raised when a descent run ends above the residual tolerance. The best
    point reached is available as :attr:`best`
    """

    message = "Did Not Converge - residual above tolerance at iteration cap"

    def __init__(self, details=None, best=None):
        super().__init__(details)
        self.best = best


class PathCollapse(SolverError):
    """Raised when a mountain pass path collapses onto one of its endpoints"""

    message = "Path Collapse - no separating barrier found"


class InternalConsistencyError(InclusionError):
    """Raised when a generic quantity disagrees with its closed form"""

    exit_code = 70
    message = "Internal Consistency Error - generic and closed form disagree"
