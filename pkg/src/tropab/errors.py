"""Exception hierarchy shared across the package.

Every domain error carries a stable ``code`` string so the CLI can emit
structured error objects without string-matching messages.
"""


class DomainError(Exception):
    """Base class for all domain-level failures (CLI exit code 1)."""

    code = "DomainError"

    def __init__(self, message="", field=None):
        super().__init__(message or self.code)
        self.field = field


# --- exact_linalg ---------------------------------------------------------

class NotSkew(DomainError):
    code = "NotSkew"


class Degenerate(DomainError):
    code = "Degenerate"


class NotInjective(DomainError):
    code = "NotInjective"


class NotInGLXY(DomainError):
    code = "NotInGLXY"


class NotUnimodular(DomainError):
    code = "NotUnimodular"


# --- quadform_delaunay ----------------------------------------------------

class NotPositiveDefinite(DomainError):
    code = "NotPositiveDefinite"


class WindowTooSmall(DomainError):
    code = "WindowTooSmall"


class InvalidPaving(DomainError):
    code = "InvalidPaving"


# --- pavings_pwl ----------------------------------------------------------

class NonMatchingFaces(DomainError):
    code = "NonMatchingFaces"


class RankMismatch(DomainError):
    code = "RankMismatch"


class NotQuasiperiodic(DomainError):
    code = "NotQuasiperiodic"


class NotSimplicial(DomainError):
    code = "NotSimplicial"


class MissingVertexValue(DomainError):
    code = "MissingVertexValue"


class NotConvex(DomainError):
    code = "NotConvex"


class Unbounded(DomainError):
    code = "Unbounded"


# --- degeneration_monoids -------------------------------------------------

class OutsideSupport(DomainError):
    code = "OutsideSupport"


class NotInvariant(DomainError):
    code = "NotInvariant"


class NotAFace(DomainError):
    code = "NotAFace"


class InconsistentData(DomainError):
    code = "InconsistentData"


# --- siegel_trop ----------------------------------------------------------

class NotSymplectic(DomainError):
    code = "NotSymplectic"


class NearSingularDenominator(DomainError):
    code = "NearSingularDenominator"


class IllConditionedBlock(DomainError):
    code = "IllConditionedBlock"


# --- theta_heisenberg -----------------------------------------------------

class BadModulus(DomainError):
    code = "BadModulus"


class BadLift(DomainError):
    code = "BadLift"


class TooLarge(DomainError):
    code = "TooLarge"


class BadTwistPair(DomainError):
    code = "BadTwistPair"


class EmptyComponent(DomainError):
    code = "EmptyComponent"
