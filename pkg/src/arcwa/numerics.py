"""Shared numeric guards for dense linear algebra.

Every inversion in the scattering pipeline goes through a conditioning
check with a single shared threshold, so "numerically singular" means the
same thing in operator assembly, basis construction, reprojection and
Redheffer composition.
"""

from __future__ import annotations

import numpy as np

from .errors import NumericalError

# Condition-number threshold beyond which an inversion is refused.
COND_LIMIT = 1e12


def condition_number(a: np.ndarray) -> float:
    """2-norm condition number; inf for a singular matrix."""
    try:
        return float(np.linalg.cond(a))
    except np.linalg.LinAlgError:
        return float("inf")


def checked_inv(a: np.ndarray, error_cls: type[NumericalError], what: str) -> np.ndarray:
    """Invert ``a`` after verifying it is well-conditioned."""
    cond = condition_number(a)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise error_cls(f"{what}: condition number {cond:.3e} exceeds {COND_LIMIT:.0e}")
    return np.linalg.inv(a)


def checked_solve(
    a: np.ndarray, b: np.ndarray, error_cls: type[NumericalError], what: str
) -> np.ndarray:
    """Solve ``a x = b`` after verifying ``a`` is well-conditioned."""
    cond = condition_number(a)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise error_cls(f"{what}: condition number {cond:.3e} exceeds {COND_LIMIT:.0e}")
    return np.linalg.solve(a, b)


def max_abs(a: np.ndarray) -> float:
    """Largest absolute entry (the max norm used for scattering matrices)."""
    return float(np.max(np.abs(a))) if a.size else 0.0
