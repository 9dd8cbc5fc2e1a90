import numpy as np
import pytest

from graspsyn.errors import CalibrationRejectedError, DomainError, GapClosureError, OutOfRangeError
from graspsyn.sensors import (
    FLEX_PRESETS,
    CapacitiveSensorModel,
    FlexCalibration,
    ForceCalibration,
    VoltageDividerConfig,
    adc_quantize,
    adc_to_voltage,
    angle_to_resistance,
    capacitance_of_force,
    divider_output,
    fit_force_calibration,
    force_from_capacitance,
    force_ramp,
    resistance_from_voltage,
    resistance_to_angle,
)

CFG = VoltageDividerConfig()


@pytest.mark.parametrize("r, v", [(47e3, 2.5), (0.0, 5.0), (94e3, 5 * 47 / 141)])
def test_divider_examples(r, v):
    assert divider_output(CFG, r) == pytest.approx(v, rel=1e-12)


def test_divider_inverse_examples():
    assert resistance_from_voltage(CFG, 2.5) == pytest.approx(47e3)
    assert resistance_from_voltage(CFG, 5.0) == 0.0
    assert resistance_from_voltage(CFG, 1.6667) == pytest.approx(94e3, rel=1e-3)


def test_divider_domain():
    with pytest.raises(DomainError):
        divider_output(CFG, -1.0)
    for v in (0.0, -1.0, 5.01):
        with pytest.raises(DomainError):
            resistance_from_voltage(CFG, v)
    with pytest.raises(DomainError):
        VoltageDividerConfig(0.0, 47e3)


def test_divider_monotone():
    r = np.linspace(0, 1e6, 1001)
    assert np.all(np.diff(divider_output(CFG, r)) < 0)


def test_adc_round_trip_within_one_count():
    v = np.linspace(0, 5, 57)
    back = adc_to_voltage(CFG, adc_quantize(CFG, v))
    assert np.max(np.abs(back - v)) <= 5 / 1023 / 2 + 1e-12


@pytest.mark.parametrize("r, angle", [(25e3, 0.0), (100e3, 90.0), (62.5e3, 45.0)])
def test_flex_map(r, angle):
    reading = resistance_to_angle(FlexCalibration(), r)
    assert reading.angle == pytest.approx(angle)
    assert not reading.clamped


def test_flex_clamps_with_flag():
    lo = resistance_to_angle(FlexCalibration(), 10e3)
    hi = resistance_to_angle(FlexCalibration(), 200e3)
    assert (lo.angle, lo.clamped) == (0.0, True)
    assert (hi.angle, hi.clamped) == (90.0, True)


def test_flex_presets_and_inverse():
    cal = FLEX_PRESETS["datasheet"]
    assert (cal.r_flat, cal.r_full) == (10e3, 110e3)
    assert resistance_to_angle(cal, angle_to_resistance(cal, 33.0)).angle == pytest.approx(33.0)
    with pytest.raises(DomainError):
        FlexCalibration(100e3, 25e3)


def test_capacitance_examples():
    m = CapacitiveSensorModel()
    assert capacitance_of_force(m, 0.0) == m.c0
    assert capacitance_of_force(m, m.closing_force / 2) == pytest.approx(2 * m.c0)
    with pytest.raises(GapClosureError):
        capacitance_of_force(m, m.closing_force)
    with pytest.raises(DomainError):
        capacitance_of_force(m, -1.0)


def test_from_geometry():
    m = CapacitiveSensorModel.from_geometry(8.854e-12 * 3, 1e-4, 5e-4, 1e5)
    assert m.c0 == pytest.approx(8.854e-12 * 3 * 1e-4 / 5e-4)


def test_two_knot_passthrough():
    c0 = 1e-11
    cal = fit_force_calibration([(2 * c0, 10.0), (c0, 0.0)])
    assert cal.knots == [(c0, 0.0), (2 * c0, 10.0)]
    assert force_from_capacitance(cal, 1.5 * c0).force == pytest.approx(5.0)
    assert force_from_capacitance(cal, c0).force == 0.0
    with pytest.raises(OutOfRangeError):
        force_from_capacitance(cal, 3 * c0)
    assert not cal.covers_protocol_range


def test_extrapolation_flag():
    c0 = 1e-11
    cal = ForceCalibration((c0, 2 * c0), (0.0, 10.0))
    r = force_from_capacitance(cal, 2.04 * c0)
    assert r.extrapolated and r.force == pytest.approx(10.4)
    with pytest.raises(OutOfRangeError):
        force_from_capacitance(cal, 2.06 * c0)


def test_rejects_decreasing_force():
    with pytest.raises(CalibrationRejectedError):
        fit_force_calibration([(1e-11, 5.0), (2e-11, 3.0)])
    with pytest.raises(CalibrationRejectedError):
        fit_force_calibration([(1e-11, 5.0), (1e-11, 6.0)])
    with pytest.raises(CalibrationRejectedError):
        fit_force_calibration([(1e-11, 5.0)])


def test_21_point_ramp_recovers_seven_newtons():
    m = CapacitiveSensorModel()
    cal = fit_force_calibration(force_ramp(m, 20.0, 21))
    assert force_from_capacitance(cal, capacitance_of_force(m, 7.0)).force == pytest.approx(7.0, abs=1e-6)
    assert cal.covers_protocol_range


def test_knots_reproduced_exactly():
    m = CapacitiveSensorModel()
    ramp = force_ramp(m, 20.0, 50)
    cal = fit_force_calibration(ramp)
    for c, f in ramp:
        assert force_from_capacitance(cal, c).force == pytest.approx(f, abs=1e-6)


from hypothesis import given, settings, strategies as st

resistance = st.floats(0.0, 1e6)


@settings(max_examples=300)
@given(resistance, resistance)
def test_divider_strictly_decreasing(r1, r2):
    lo, hi = sorted((r1, r2))
    if hi - lo > 1e-9 * max(hi, 1.0):  # below this the outputs round to the same double
        assert divider_output(CFG, lo) > divider_output(CFG, hi)


@settings(max_examples=300)
@given(resistance)
def test_divider_round_trip(r):
    back = resistance_from_voltage(CFG, divider_output(CFG, r))
    assert abs(back - r) <= 1e-9 * max(r, 1.0)


@settings(max_examples=300)
@given(st.floats(0.0, 1e7))
def test_angle_always_in_range(r):
    assert 0.0 <= resistance_to_angle(FlexCalibration(), r).angle <= 90.0


@settings(max_examples=300)
@given(st.floats(0.0, 39.0), st.floats(0.0, 39.0))
def test_capacitance_increasing(f1, f2):
    m = CapacitiveSensorModel()
    lo, hi = sorted((f1, f2))
    if hi - lo > 1e-9:
        assert capacitance_of_force(m, lo) < capacitance_of_force(m, hi)
