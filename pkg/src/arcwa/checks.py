"""Built-in analytic oracles for the `validate` command.

Each check compares a pipeline result against a value known in closed form
(vacuum spectra, two-interface slab formulas) or against an exact identity
(round trips, the star identity element). Together they pin every sign
convention in the operator assembly, the modal branch rule, the interface
projection and the composition order.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import cascade, modal, operators, sections
from .geometry import PermittivitySlice, Polarization, StructureSpec
from .numerics import max_abs


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def airy_slab_coefficients(n_slab: complex, thickness_um: float, wavelength_um: float) -> tuple[complex, complex]:
    """Closed-form reflection/transmission of vacuum | slab | vacuum.

    Amplitude convention: forward fields go as exp(+j n k0 z); t is the
    field ratio across the slab span (no vacuum padding), r the reflected
    amplitude at the entry plane.
    """
    k0 = 2.0 * np.pi / wavelength_um
    beta = n_slab * k0 * thickness_um
    r12 = (1.0 - n_slab) / (1.0 + n_slab)
    r23 = -r12
    t12 = 2.0 / (1.0 + n_slab)
    t23 = 2.0 * n_slab / (1.0 + n_slab)
    phase = cmath.exp(1j * beta)
    denom = 1.0 + r12 * r23 * phase**2
    return (r12 + r23 * phase**2) / denom, t12 * t23 * phase / denom


def _uniform_spec(eps: complex, thickness: float, wavelength: float, polarization: Polarization, order: int) -> StructureSpec:
    return StructureSpec(
        wavelength_um=wavelength,
        polarization=polarization,
        period_x_um=1.0,
        z_min=0.0,
        z_max=thickness,
        truncation_order=order,
        background_eps=complex(eps),
        regions=(),
    )


def _uniform_slice(eps: complex, period: float = 1.0) -> PermittivitySlice:
    return PermittivitySlice(z=0.0, period_x=period, intervals=((0.0, period, complex(eps)),))


@dataclass(frozen=True)
class ScatteringMatrixPorts:
    """A scattering matrix together with the bases its sides live in."""

    smat: sections.ScatteringMatrix
    left_basis: modal.ModalBasis
    right_basis: modal.ModalBasis


def slab_sandwich_smatrix(
    eps_slab: complex,
    thickness_um: float,
    wavelength_um: float,
    polarization: Polarization,
    order: int = 0,
) -> ScatteringMatrixPorts:
    """Scattering matrix of a uniform slab between semi-infinite vacuum ports.

    Built from the primitive pipeline: eigenbases of vacuum and slab, the
    slab's diagonal propagation matrix, and an interface reprojection at
    each face. Returns the matrix together with the two port bases so
    callers can identify modes.
    """
    spec = _uniform_spec(eps_slab, thickness_um, wavelength_um, polarization, order)
    vac_ops = operators.assemble_operators(_uniform_slice(1.0), spec)
    slab_ops = operators.assemble_operators(_uniform_slice(eps_slab), spec)
    vac_basis = modal.eigen_basis(vac_ops)
    slab_basis = modal.eigen_basis(slab_ops)

    s_slab = sections.zeroth_order_smatrix(slab_basis, 0.0, thickness_um)
    into_slab = cascade.projection_pair(vac_basis, slab_basis)
    s_left = cascade.project_left(s_slab, into_slab, vac_basis.basis_id)

    ident = sections.zeroth_order_smatrix(vac_basis, 0.0, 0.0)
    out_of_slab = cascade.projection_pair(slab_basis, vac_basis)
    s_exit = cascade.project_left(ident, out_of_slab, slab_basis.basis_id)

    return ScatteringMatrixPorts(cascade.star(s_left, s_exit), vac_basis, vac_basis)


# ---------------------------------------------------------------------------
# Individual checks
# ---------------------------------------------------------------------------


def _check_vacuum_te_spectrum() -> tuple[bool, str]:
    spec = _uniform_spec(1.0, 1.0, 1.55, Polarization.TE, order=3)
    ops = operators.assemble_operators(_uniform_slice(1.0), spec)
    m = np.arange(-3, 4)
    expected = np.sort(1.0 - (m * 1.55) ** 2)
    got = np.sort(np.linalg.eigvals(ops.P @ ops.Q).real)
    err = float(np.max(np.abs(got - expected)))
    return err < 1e-10, f"max eigenvalue deviation {err:.2e}"


def _check_vacuum_tm_unit_index() -> tuple[bool, str]:
    spec = _uniform_spec(1.0, 1.0, 1.55, Polarization.TM, order=0)
    ops = operators.assemble_operators(_uniform_slice(1.0), spec)
    err = abs((ops.P @ ops.Q)[0, 0] - 1.0)
    return err < 1e-12, f"|PQ - 1| = {err:.2e}"


def _check_slab_airy(polarization: Polarization) -> tuple[bool, str]:
    wavelength = 1.55
    worst = 0.0
    for thickness in (wavelength / 2.0, wavelength / 8.0):
        r_ref, t_ref = airy_slab_coefficients(2.0, thickness, wavelength)
        result = slab_sandwich_smatrix(4.0, thickness, wavelength, polarization)
        s = result.smat
        worst = max(
            worst,
            abs(s.T_LR[0, 0] - t_ref),
            abs(s.R_L[0, 0] - r_ref),
            abs(s.T_RL[0, 0] - t_ref),
            abs(s.R_R[0, 0] - r_ref),
        )
    return worst < 1e-10, f"max |S - analytic| = {worst:.2e}"


def _check_mode_roundtrip() -> tuple[bool, str]:
    rng = np.random.default_rng(20240811)
    spec = _uniform_spec(2.25, 1.0, 1.55, Polarization.TE, order=2)
    ops = operators.assemble_operators(_uniform_slice(2.25), spec)
    basis = modal.eigen_basis(ops)
    worst = 0.0
    for _ in range(20):
        e = rng.standard_normal(basis.n) + 1j * rng.standard_normal(basis.n)
        h = rng.standard_normal(basis.n) + 1j * rng.standard_normal(basis.n)
        state = modal.mode_coefficients(e, h, basis)
        e2, h2 = modal.reconstruct_fields(state, basis)
        worst = max(worst, max_abs(e2 - e), max_abs(h2 - h))
    return worst < 1e-12, f"max round-trip residual {worst:.2e}"


def _random_passive_smatrix(rng: np.random.Generator, n: int, basis_id: int) -> sections.ScatteringMatrix:
    def block(scale):
        raw = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        return scale * raw / np.linalg.norm(raw, 2)

    return sections.ScatteringMatrix(
        T_LR=block(0.9),
        R_R=block(0.3),
        R_L=block(0.3),
        T_RL=block(0.9),
        left_basis_id=basis_id,
        right_basis_id=basis_id,
    )


def _check_star_identity() -> tuple[bool, str]:
    rng = np.random.default_rng(7)
    n = 5
    s = _random_passive_smatrix(rng, n, basis_id=0)
    eye = np.eye(n, dtype=np.complex128)
    zero = np.zeros((n, n), dtype=np.complex128)
    ident = sections.ScatteringMatrix(eye, zero, zero, eye.copy(), 0, 0)
    left = cascade.star(s, ident)
    right = cascade.star(ident, s)
    worst = max(
        max_abs(left.T_LR - s.T_LR), max_abs(left.R_L - s.R_L),
        max_abs(left.R_R - s.R_R), max_abs(left.T_RL - s.T_RL),
        max_abs(right.T_LR - s.T_LR), max_abs(right.R_L - s.R_L),
        max_abs(right.R_R - s.R_R), max_abs(right.T_RL - s.T_RL),
    )
    return worst < 1e-12, f"max |S * I - S| = {worst:.2e}"


def _check_projection_identity() -> tuple[bool, str]:
    spec = _uniform_spec(2.25, 1.0, 1.55, Polarization.TE, order=2)
    ops = operators.assemble_operators(_uniform_slice(2.25), spec)
    basis = modal.eigen_basis(ops)
    pp = cascade.projection_pair(basis, basis)
    eye = np.eye(basis.n)
    err = max(max_abs(pp.X - eye), max_abs(pp.Y))
    rng = np.random.default_rng(11)
    s = _random_passive_smatrix(rng, basis.n, basis.basis_id)
    projected = cascade.project_left(s, pp, basis.basis_id)
    err = max(
        err,
        max_abs(projected.T_LR - s.T_LR), max_abs(projected.R_L - s.R_L),
        max_abs(projected.R_R - s.R_R), max_abs(projected.T_RL - s.T_RL),
    )
    return err < 1e-12, f"identity-projection residual {err:.2e}"


def _check_constant_section_orders() -> tuple[bool, str]:
    spec = _uniform_spec(6.25, 0.8, 1.55, Polarization.TE, order=2)
    ops = operators.assemble_operators(_uniform_slice(6.25), spec)
    basis = modal.eigen_basis(ops)
    first = sections.first_order_smatrix(spec, 0.0, 0.8, basis, ops)
    zeroth = sections.zeroth_order_smatrix(basis, 0.0, 0.8)
    worst = max(
        max_abs(first.smat.T_LR - zeroth.T_LR),
        max_abs(first.smat.R_L - zeroth.R_L),
        max_abs(first.smat.R_R - zeroth.R_R),
        max_abs(first.smat.T_RL - zeroth.T_RL),
        first.est_error,
    )
    return worst < 1e-12, f"order-0/order-1 gap {worst:.2e}"


_CHECKS: dict[str, Callable[[], tuple[bool, str]]] = {
    "vacuum-te-spectrum": _check_vacuum_te_spectrum,
    "vacuum-tm-unit-index": _check_vacuum_tm_unit_index,
    "slab-airy-te": lambda: _check_slab_airy(Polarization.TE),
    "slab-airy-tm": lambda: _check_slab_airy(Polarization.TM),
    "mode-roundtrip": _check_mode_roundtrip,
    "star-identity": _check_star_identity,
    "projection-identity": _check_projection_identity,
    "constant-section-order-equivalence": _check_constant_section_orders,
}


def check_names() -> list[str]:
    return list(_CHECKS)


def run_checks() -> list[CheckResult]:
    """Run every built-in check; a crash counts as a failure of that check."""
    results = []
    for name, fn in _CHECKS.items():
        try:
            passed, detail = fn()
        except Exception as exc:  # noqa: BLE001 - report, don't abort the suite
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append(CheckResult(name=name, passed=passed, detail=detail))
    return results
