"""Cross-section operators P(z) and Q(z) from a permittivity slice.

Fields on the periodic transverse line are expanded in 2M+1 Fourier
harmonics (m = -M..M, ascending). The first-order field equations read

    de/dz = j k0 P h,    dh/dz = j k0 Q e,

with dimensionless P, Q: the vacuum wavenumber is absorbed so that the
eigenvalues of P Q are effective indices squared and propagation phases
are exp(j * lambda * k0 * dz).

Concrete fillings, normal incidence, nonmagnetic media:

    TE:  P = I,                 Q = E - K^2
    TM:  P = K E^-1 K - I,      Q = -inv(Toeplitz(1/eps))

where E = Toeplitz(eps coefficients), K = diag(m * wavelength / period).
The TM sign fold makes vacuum satisfy P*Q = I, matching TE; the inverse
rule for Q keeps TM convergence correct across material steps. Both
fillings are pinned by the vacuum spectrum check and the analytic slab
oracle in the validation suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import toeplitz

from .errors import SingularOperatorError
from .geometry import PermittivitySlice, Polarization, StructureSpec
from .numerics import checked_inv


@dataclass(frozen=True)
class FourierEps:
    """Fourier coefficients of eps(x) and 1/eps(x) over one period.

    ``coeffs[i]`` is c_m with m = i - (len-1)//2; the index range covers
    m in [-2*order, 2*order], enough to fill a (2*order+1)-square Toeplitz
    matrix. For real eps the sequence satisfies c_{-m} = conj(c_m) and c_0
    is the spatial average.
    """

    coeffs: np.ndarray
    coeffs_inv: np.ndarray


@dataclass(frozen=True)
class OperatorPair:
    """Dense cross-section operators at one z."""

    P: np.ndarray
    Q: np.ndarray
    z: float
    polarization: Polarization
    k0: float

    @property
    def n(self) -> int:
        return int(self.P.shape[0])


def _piecewise_coefficients(
    intervals: tuple[tuple[float, float, complex], ...], period: float, order: int
) -> np.ndarray:
    """Closed-form Fourier coefficients of a piecewise-constant function.

    c_m = (1/period) * integral f(x) exp(-2j*pi*m*x/period) dx, evaluated
    exactly per interval; m runs over [-2*order, 2*order].
    """
    m = np.arange(-2 * order, 2 * order + 1)
    coeffs = np.zeros(m.size, dtype=np.complex128)
    nonzero = m != 0
    mk = m[nonzero]
    for x0, x1, value in intervals:
        coeffs[~nonzero] += value * (x1 - x0) / period
        phase1 = np.exp(-2j * np.pi * mk * x1 / period)
        phase0 = np.exp(-2j * np.pi * mk * x0 / period)
        coeffs[nonzero] += value * (phase1 - phase0) / (-2j * np.pi * mk)
    return coeffs


def fourier_eps(slc: PermittivitySlice, order: int) -> FourierEps:
    """Exact Fourier coefficients of a slice's eps(x) and 1/eps(x)."""
    if order < 0:
        raise ValueError(f"order must be >= 0, got {order}")
    inv_intervals = tuple((x0, x1, 1.0 / eps) for x0, x1, eps in slc.intervals)
    return FourierEps(
        coeffs=_piecewise_coefficients(slc.intervals, slc.period_x, order),
        coeffs_inv=_piecewise_coefficients(inv_intervals, slc.period_x, order),
    )


def _toeplitz_from(coeffs: np.ndarray, order: int) -> np.ndarray:
    """Toeplitz matrix T[p, q] = c_{p-q} for p, q in [-order, order]."""
    center = coeffs.size // 2
    if center < 2 * order:
        raise ValueError(f"need coefficients up to |m| = {2 * order}, got {center}")
    col = coeffs[center : center + 2 * order + 1]
    row = coeffs[center - 2 * order : center + 1][::-1]
    return toeplitz(col, row).astype(np.complex128)


def assemble_operators(slc: PermittivitySlice, spec: StructureSpec) -> OperatorPair:
    """Build the dense P, Q pair of a slice for the spec's polarization.

    Pure function; raises SingularOperatorError (with a condition estimate)
    if a permittivity Toeplitz matrix cannot be inverted, which requires a
    pathological eps distribution.
    """
    order = spec.truncation_order
    fe = fourier_eps(slc, order)
    eps_toeplitz = _toeplitz_from(fe.coeffs, order)
    m = np.arange(-order, order + 1, dtype=np.float64)
    kt = m * spec.wavelength_um / spec.period_x_um  # transverse wavevector / k0
    n = 2 * order + 1

    if spec.polarization is Polarization.TE:
        p = np.eye(n, dtype=np.complex128)
        q = eps_toeplitz - np.diag(kt**2).astype(np.complex128)
    else:
        eps_inv = checked_inv(eps_toeplitz, SingularOperatorError, "Toeplitz(eps)")
        p = kt[:, None] * eps_inv * kt[None, :] - np.eye(n, dtype=np.complex128)
        inv_toeplitz = _toeplitz_from(fe.coeffs_inv, order)
        q = -checked_inv(inv_toeplitz, SingularOperatorError, "Toeplitz(1/eps)")

    return OperatorPair(P=p, Q=q, z=slc.z, polarization=spec.polarization, k0=spec.k0)
