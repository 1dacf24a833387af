"""Exception hierarchy for arcwa.

Input problems (bad structure documents) and numeric failures are kept on
separate branches so callers (notably the CLI) can map them to distinct
exit codes.
"""

from __future__ import annotations


class ArcwaError(Exception):
    """Base class for all arcwa errors."""


class StructureError(ArcwaError):
    """A structure document could not be turned into a valid specification."""


class SpecSyntaxError(StructureError):
    """Malformed structure document (reports the offending position)."""


class SpecSemanticError(StructureError):
    """Well-formed document violating a structural invariant."""


class NumericalError(ArcwaError):
    """Base class for numeric failures during solving."""


class SingularOperatorError(NumericalError):
    """A permittivity Toeplitz matrix is singular or too ill-conditioned."""


class EigendecompositionError(NumericalError):
    """The dense eigensolver failed to converge."""


class CutoffModeError(NumericalError):
    """An eigenmode sits at cutoff (effective index ~ 0).

    The magnetic basis V scales with 1/lambda, so a cutoff mode makes the
    basis meaningless. Adding a small material loss (e.g. Im(eps) ~ 1e-6)
    moves the eigenvalue off the real axis and resolves this.
    """


class NearDefectiveBasisError(NumericalError):
    """Eigenvector matrix too ill-conditioned to define a usable basis."""


class ProjectionBreakdownError(NumericalError):
    """Interface reprojection system (X - R_L Y) is numerically singular."""


class ResonanceError(NumericalError):
    """Redheffer composition hit a near-singular (I - R R) inversion."""


class BasisMismatchError(ArcwaError):
    """Scattering matrices with incompatible bases were combined.

    This is a programming error in the calling code, never a property of
    the physical problem; it is deliberately not a NumericalError.
    """


class MaxDepthExceededError(NumericalError):
    """Adaptive subdivision hit the recursion limit before meeting alpha."""
