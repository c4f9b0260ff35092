"""
Exception hierarchy for the LTONP toolkit.

Every failure raised by the package derives from LtonpError so callers can
catch the whole family with one clause.
"""


class LtonpError(Exception):
    """Base class for all toolkit errors"""


class InvalidProblem(LtonpError):
    """Problem data failed construction-time validation"""


class DimensionMismatch(LtonpError):
    """Operands have incompatible shapes"""


class NotHermitian(LtonpError):
    """Symmetry residual of a matrix exceeds the tolerance"""


class NotPSD(LtonpError):
    """A Hermitian matrix has an eigenvalue below the negative tolerance"""


class EigenFailure(LtonpError):
    """The eigenvalue solver did not converge"""


class NotConvergent(LtonpError):
    """Stein equation operands are not jointly stable"""


class IterationLimit(LtonpError):
    """The doubling iteration stalled before reaching the tolerance"""


class OrderOverflow(LtonpError):
    """Requested truncation order exceeds the configured cap"""


class PNotStrictlyPositive(LtonpError):
    """The Gramian P is singular"""


class LambdaNotStrictlyPositive(LtonpError):
    """The Pick operator is not strictly positive"""

    def __init__(self, classification, min_eigenvalue: float):
        self.classification = classification
        self.min_eigenvalue = min_eigenvalue
        super().__init__(
            f"Pick operator is {classification.value} "
            f"(smallest eigenvalue {min_eigenvalue:.3e})"
        )


class ResolventSingular(LtonpError):
    """I - lambda*A is numerically singular at the requested point"""


class ParameterNotContractive(LtonpError):
    """Schur parameter has no contractive realization at hand"""


class FeedbackSingular(LtonpError):
    """The Redheffer feedback loop I - lambda*G22 cannot be inverted"""


class NoConvergence(LtonpError):
    """Entropy section doubling exceeded its cap"""


class QuadratureDegenerate(LtonpError):
    """det(I - F*F) is not positive at a quadrature node"""


class NotCoisometricPair(LtonpError):
    """Commutant lifting data violate Z Z* + B B* = I"""
