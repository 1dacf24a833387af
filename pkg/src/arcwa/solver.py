"""Structure solvers: fixed-resolution cascades and adaptive subdivision.

Both solvers cut [z_min, z_max] into sections, solve each in the eigenbasis
of its reference position, reproject every section onto its left
neighbour's basis and fold the results with the Redheffer star product.

``solve_adaptive`` starts from the whole structure as a single section and
recursively subdivides evenly into M subsections whenever the section's
estimated error reaches the user bound alpha. With the midpoint reference
rule and M = 3, the middle subsection's reference coincides with its
parent's, so the parent's eigendecomposition is reused there;
``total_eig_count`` reflects that reuse. With the endpoint rule the last
subsection reuses the parent's decomposition (the natural pairing is
M = 2).

The final scattering matrix is re-expressed in the eigenbases of the end
cross-sections (the slices at z_min and z_max). Those "port" bases depend
only on the structure, never on the discretization, which makes scattering
matrices from different methods and resolutions directly comparable. The
two port eigendecompositions are a fixed overhead shared by every method
and are not charged to ``total_eig_count``.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, replace
from functools import lru_cache

from . import cascade, geometry, modal, operators, sections
from .errors import MaxDepthExceededError
from .geometry import StructureSpec
from .modal import ModalBasis
from .operators import OperatorPair
from .sections import ScatteringMatrix, SectionResult


class ReferenceRule(enum.Enum):
    """Where a section samples its reference operators."""

    MIDPOINT = "midpoint"
    ENDPOINT = "endpoint"


@dataclass(frozen=True)
class SolverConfig:
    """Adaptive solver knobs.

    ``alpha`` is the per-section error bound the estimate is compared
    against. The natural pairings are midpoint with M = 3 and endpoint
    with M = 2 (only those reuse the parent decomposition), but any
    combination is accepted.
    """

    alpha: float
    subdivision_m: int = 3
    reference_rule: ReferenceRule = ReferenceRule.MIDPOINT
    max_depth: int = 20
    order: int = 1

    def __post_init__(self) -> None:
        if self.alpha < 0.0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha!r}")
        if self.subdivision_m not in (2, 3):
            raise ValueError(f"subdivision_m must be 2 or 3, got {self.subdivision_m!r}")
        if self.max_depth < 1:
            raise ValueError(f"max_depth must be >= 1, got {self.max_depth!r}")
        if self.order not in (0, 1):
            raise ValueError(f"order must be 0 or 1, got {self.order!r}")


@dataclass(frozen=True)
class SolveReport:
    """Outcome of one solve: scattering matrix plus observability data.

    ``sections`` lists the solved leaf sections as (z_L, z_R, est_error),
    tiling [z_min, z_max] exactly in order. ``sections_solved`` counts
    every section evaluation including interior nodes that were later
    subdivided; ``total_eig_count`` counts eigendecompositions actually
    performed (reused bases count once).
    """

    smat: ScatteringMatrix
    sections: tuple[tuple[float, float, float], ...]
    total_eig_count: int
    total_wall_time: float
    sections_solved: int


@dataclass
class _Composite:
    """Accumulated scattering matrix with its live boundary bases."""

    smat: ScatteringMatrix
    left_basis: ModalBasis
    right_basis: ModalBasis


def _reference_z(z_l: float, z_r: float, rule: ReferenceRule) -> float:
    return 0.5 * (z_l + z_r) if rule is ReferenceRule.MIDPOINT else z_r


def _build_basis(spec: StructureSpec, z: float) -> tuple[OperatorPair, ModalBasis]:
    ops = operators.assemble_operators(geometry.slice_at(spec, z), spec)
    return ops, modal.eigen_basis(ops)


@lru_cache(maxsize=32)
def port_bases(spec: StructureSpec) -> tuple[ModalBasis, ModalBasis]:
    """End cross-section bases; cached so equal specs share basis ids."""
    _, left = _build_basis(spec, spec.z_min)
    _, right = _build_basis(spec, spec.z_max)
    return left, right


def _attach_right(acc: _Composite, piece: _Composite) -> _Composite:
    """Project a piece onto the accumulated right basis and star it on."""
    pp = cascade.projection_pair(acc.right_basis, piece.left_basis)
    projected = cascade.project_left(piece.smat, pp, acc.right_basis.basis_id)
    return _Composite(
        smat=cascade.star(acc.smat, projected),
        left_basis=acc.left_basis,
        right_basis=piece.right_basis,
    )


def _normalize_to_ports(spec: StructureSpec, comp: _Composite) -> ScatteringMatrix:
    left_port, right_port = port_bases(spec)
    pp_left = cascade.projection_pair(left_port, comp.left_basis)
    smat = cascade.project_left(comp.smat, pp_left, left_port.basis_id)
    ident = sections.zeroth_order_smatrix(right_port, right_port.z_ref, right_port.z_ref)
    pp_right = cascade.projection_pair(comp.right_basis, right_port)
    iface = cascade.project_left(ident, pp_right, comp.right_basis.basis_id)
    return cascade.star(smat, iface)


def _solve_section(
    spec: StructureSpec,
    z_l: float,
    z_r: float,
    basis: ModalBasis,
    ops: OperatorPair,
    order: int,
    eig_count: int,
) -> SectionResult:
    """One section at the requested order; order 0 skips the estimator."""
    if order == 1:
        return sections.first_order_smatrix(spec, z_l, z_r, basis, ops, eig_count=eig_count)
    smat = sections.zeroth_order_smatrix(basis, z_l, z_r)
    return SectionResult(smat=smat, est_error=0.0, eig_count=eig_count, z_L=z_l, z_R=z_r, order=0)


def solve_uniform(
    spec: StructureSpec,
    n_sections: int,
    order: int = 0,
    reference_rule: ReferenceRule = ReferenceRule.MIDPOINT,
) -> SolveReport:
    """Fixed-resolution cascade: N equal sections at the requested order.

    Every section gets its own reference basis (one eigendecomposition
    each); the result is expressed in the end cross-section port bases.
    """
    if n_sections < 1:
        raise ValueError(f"n_sections must be >= 1, got {n_sections}")
    if order not in (0, 1):
        raise ValueError(f"order must be 0 or 1, got {order!r}")
    started = time.perf_counter()

    span = spec.z_max - spec.z_min
    comp: _Composite | None = None
    solved: list[SectionResult] = []
    for i in range(n_sections):
        z_l = spec.z_min + span * i / n_sections
        z_r = spec.z_max if i == n_sections - 1 else spec.z_min + span * (i + 1) / n_sections
        ops, basis = _build_basis(spec, _reference_z(z_l, z_r, reference_rule))
        result = _solve_section(spec, z_l, z_r, basis, ops, order, eig_count=1)
        solved.append(result)
        piece = _Composite(result.smat, basis, basis)
        comp = piece if comp is None else _attach_right(comp, piece)

    smat = _normalize_to_ports(spec, comp)
    return SolveReport(
        smat=smat,
        sections=tuple((r.z_L, r.z_R, r.est_error) for r in solved),
        total_eig_count=n_sections,
        total_wall_time=time.perf_counter() - started,
        sections_solved=n_sections,
    )


def solve_adaptive(spec: StructureSpec, config: SolverConfig) -> SolveReport:
    """Recursive adaptive subdivision down to the error bound alpha.

    A section whose estimated error stays below alpha is accepted as a
    leaf; otherwise it is split evenly into ``subdivision_m`` subsections
    that are solved recursively, reprojected left-to-right and composed.
    The estimate is always the first-order one; ``config.order`` selects
    which scattering matrix a leaf contributes. Raises
    MaxDepthExceededError when the recursion limit is hit, which signals a
    structure too singular for the requested alpha.

    Caveat: each section inspects the cross-section only at its endpoints,
    midpoint and reference position. A modulation that vanishes at all of
    those (e.g. a sinusoid with exactly one period over the span) yields a
    zero estimate and is accepted unrefined. Keep modulation periods
    non-commensurate with the span, or start from solve_uniform at a
    resolution finer than the modulation, when in doubt.
    """
    started = time.perf_counter()
    counters = {"eig": 0, "solved": 0}
    rule = config.reference_rule
    if rule is ReferenceRule.MIDPOINT and config.subdivision_m % 2 == 1:
        reuse_index = config.subdivision_m // 2
    elif rule is ReferenceRule.ENDPOINT:
        reuse_index = config.subdivision_m - 1
    else:
        reuse_index = None

    def solve_node(
        z_l: float,
        z_r: float,
        depth: int,
        inherited: tuple[OperatorPair, ModalBasis] | None,
    ) -> tuple[_Composite, list[SectionResult]]:
        if inherited is None:
            ops, basis = _build_basis(spec, _reference_z(z_l, z_r, rule))
            local_eigs = 1
        else:
            ops, basis = inherited
            local_eigs = 0
        counters["eig"] += local_eigs
        counters["solved"] += 1
        result = sections.first_order_smatrix(spec, z_l, z_r, basis, ops, eig_count=local_eigs)

        if result.est_error < config.alpha:
            if config.order == 0:
                result = replace(
                    result, smat=sections.zeroth_order_smatrix(basis, z_l, z_r), order=0
                )
            return _Composite(result.smat, basis, basis), [result]

        if depth >= config.max_depth:
            raise MaxDepthExceededError(
                f"section [{z_l:g}, {z_r:g}] still has estimated error "
                f"{result.est_error:.3e} >= alpha = {config.alpha:.3e} at depth {depth}; "
                "the structure is too singular for this accuracy"
            )

        comp: _Composite | None = None
        leaves: list[SectionResult] = []
        m = config.subdivision_m
        for i in range(m):
            child_l = z_l + (z_r - z_l) * i / m
            child_r = z_r if i == m - 1 else z_l + (z_r - z_l) * (i + 1) / m
            child_inherited = (ops, basis) if i == reuse_index else None
            child_comp, child_leaves = solve_node(child_l, child_r, depth + 1, child_inherited)
            leaves.extend(child_leaves)
            comp = child_comp if comp is None else _attach_right(comp, child_comp)
        return comp, leaves

    comp, leaves = solve_node(spec.z_min, spec.z_max, 0, None)
    smat = _normalize_to_ports(spec, comp)
    return SolveReport(
        smat=smat,
        sections=tuple((r.z_L, r.z_R, r.est_error) for r in leaves),
        total_eig_count=counters["eig"],
        total_wall_time=time.perf_counter() - started,
        sections_solved=counters["solved"],
    )
