"""Structure parsing and slicing."""

import math

import pytest

from arcwa.errors import SpecSemanticError, SpecSyntaxError
from arcwa.geometry import (
    ConstantProfile,
    Polarization,
    parse_structure,
    slice_at,
)

from conftest import CONSTANT_DOC, TAPER_DOC

MINIMAL_DOC = """
wavelength_um: 1.0
polarization: TM
period_x_um: 2.0
z_range_um: [0.0, 0.5]
truncation_order: 0
background_eps: [1.0, 0.0]
regions:
  - eps: [2.25, 0.0]
    center_x: 1.0
    profile: {kind: constant, value: 0.5}
"""


def test_parse_minimal_document():
    spec = parse_structure(MINIMAL_DOC)
    assert len(spec.regions) == 1
    assert spec.polarization is Polarization.TM
    assert spec.truncation_order == 0
    assert spec.background_eps == 1.0 + 0.0j
    assert isinstance(spec.regions[0].width, ConstantProfile)
    assert spec.k0 == pytest.approx(2.0 * math.pi)


def test_parse_linear_taper_widths():
    spec = parse_structure(TAPER_DOC)
    region = spec.regions[0]
    assert region.width.at(0.0) == pytest.approx(0.26, abs=1e-15)
    assert region.width.at(1.0) == pytest.approx(0.37, abs=1e-15)
    assert region.width.at(0.5) == pytest.approx((0.26 + 0.37) / 2.0, abs=1e-15)
    assert region.eps == 12.25 + 0.0j


def test_negative_width_rejected():
    doc = MINIMAL_DOC.replace(
        "{kind: constant, value: 0.5}", "{kind: linear, start: 0.5, end: -0.1}"
    )
    with pytest.raises(SpecSemanticError, match="width"):
        parse_structure(doc)


def test_region_leaving_domain_rejected():
    doc = MINIMAL_DOC.replace("center_x: 1.0", "center_x: 1.9")
    with pytest.raises(SpecSemanticError, match="domain"):
        parse_structure(doc)


def test_unknown_profile_kind_rejected():
    doc = MINIMAL_DOC.replace("kind: constant", "kind: parabolic")
    with pytest.raises(SpecSemanticError, match="parabolic"):
        parse_structure(doc)


def test_syntax_error_reports_position():
    with pytest.raises(SpecSyntaxError, match="line"):
        parse_structure("wavelength_um: 1.0\npolarization: [unclosed")


def test_missing_and_unknown_keys_rejected():
    with pytest.raises(SpecSemanticError, match="missing"):
        parse_structure("wavelength_um: 1.0")
    with pytest.raises(SpecSemanticError, match="unknown"):
        parse_structure(MINIMAL_DOC + "\nextra_key: 1\n")


def test_gain_medium_rejected():
    doc = MINIMAL_DOC.replace("eps: [2.25, 0.0]", "eps: [2.25, -0.1]")
    with pytest.raises(SpecSemanticError, match="passive"):
        parse_structure(doc)


def test_piecewise_breakpoints_must_increase():
    doc = MINIMAL_DOC.replace(
        "{kind: constant, value: 0.5}",
        "{kind: piecewise_linear, points: [[0.0, 0.3], [0.4, 0.2], [0.4, 0.5]]}",
    )
    with pytest.raises(SpecSemanticError, match="increasing"):
        parse_structure(doc)


def test_constant_profile_slices_identical():
    spec = parse_structure(CONSTANT_DOC)
    s1 = slice_at(spec, 0.1)
    s2 = slice_at(spec, 0.9)
    assert s1.intervals == s2.intervals


def test_linear_taper_midpoint_width_is_mean():
    spec = parse_structure(TAPER_DOC)
    mid = slice_at(spec, 0.5)
    core = [iv for iv in mid.intervals if iv[2] == 12.25 + 0j]
    assert len(core) == 1
    x0, x1, _ = core[0]
    assert x1 - x0 == pytest.approx((0.26 + 0.37) / 2.0, abs=1e-14)


def test_sinusoidal_quarter_period_width():
    doc = MINIMAL_DOC.replace(
        "{kind: constant, value: 0.5}",
        "{kind: sinusoidal, mean: 0.5, amplitude: 0.2, period_z: 0.4}",
    )
    spec = parse_structure(doc)
    # Closed form: width(z_min + period_z/4) = mean + amplitude.
    slc = slice_at(spec, 0.1)
    core = [iv for iv in slc.intervals if iv[2] == 2.25 + 0j][0]
    assert core[1] - core[0] == pytest.approx(0.7, abs=1e-14)


def test_slice_out_of_range():
    spec = parse_structure(MINIMAL_DOC)
    with pytest.raises(ValueError, match="outside"):
        slice_at(spec, 0.6)


def test_slice_covers_domain_exactly():
    spec = parse_structure(TAPER_DOC)
    for z in (0.0, 0.37, 1.0):
        slc = slice_at(spec, z)
        assert slc.intervals[0][0] == 0.0
        assert slc.intervals[-1][1] == spec.period_x_um
        for (_, e0, _), (s1, _, _) in zip(slc.intervals, slc.intervals[1:]):
            assert e0 == s1


def test_overlap_last_region_wins():
    doc = MINIMAL_DOC.replace(
        "regions:",
        "regions:\n  - eps: [9.0, 0.0]\n    center_x: 1.0\n    profile: {kind: constant, value: 1.2}",
    )
    spec = parse_structure(doc)
    assert len(spec.regions) == 2
    slc = slice_at(spec, 0.2)
    # Inner (later) region overwrites the middle of the wide first region.
    values = [iv[2] for iv in slc.intervals]
    assert values == [1.0 + 0j, 9.0 + 0j, 2.25 + 0j, 9.0 + 0j, 1.0 + 0j]


def test_zero_width_region_leaves_background():
    doc = MINIMAL_DOC.replace("{kind: constant, value: 0.5}", "{kind: constant, value: 0.0}")
    spec = parse_structure(doc)
    slc = slice_at(spec, 0.25)
    assert slc.intervals == ((0.0, 2.0, 1.0 + 0j),)


def test_slice_continuity_in_z():
    spec = parse_structure(TAPER_DOC)
    z0 = 0.4
    base = slice_at(spec, z0)
    previous = None
    for delta in (1e-3, 1e-5, 1e-7):
        moved = slice_at(spec, z0 + delta)
        assert len(moved.intervals) == len(base.intervals)
        displacement = max(
            max(abs(a[0] - b[0]), abs(a[1] - b[1]))
            for a, b in zip(base.intervals, moved.intervals)
        )
        if previous is not None:
            assert displacement < previous
        previous = displacement
    assert previous < 1e-6


def test_json_document_accepted():
    doc = (
        '{"wavelength_um": 1.0, "polarization": "TE", "period_x_um": 1.0,'
        ' "z_range_um": [0.0, 1.0], "truncation_order": 1, "background_eps": [1.0, 0.0],'
        ' "regions": [{"eps": [4.0, 0.0], "center_x": 0.5, "profile": {"kind": "constant", "value": 0.25}}]}'
    )
    spec = parse_structure(doc)
    assert spec.n_harmonics == 3


def test_varying_center_profile():
    doc = MINIMAL_DOC.replace(
        "center_x: 1.0",
        "center_x: {kind: linear, start: 0.8, end: 1.2}",
    )
    spec = parse_structure(doc)
    s0 = slice_at(spec, 0.0)
    s1 = slice_at(spec, 0.5)
    c0 = [iv for iv in s0.intervals if iv[2] == 2.25 + 0j][0]
    c1 = [iv for iv in s1.intervals if iv[2] == 2.25 + 0j][0]
    assert (c0[0] + c0[1]) / 2.0 == pytest.approx(0.8, abs=1e-14)
    assert (c1[0] + c1[1]) / 2.0 == pytest.approx(1.2, abs=1e-14)
