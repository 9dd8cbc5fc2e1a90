"""From raw glove electronics to joint angles and fingertip forces.

A flex sensor sits in a voltage divider read by a 10-bit ADC.  We push a
few bend angles through the forward model, read them back, and split the
combined reading into MCP/PIP/DIP.  Then a capacitive force sensor is
calibrated against a load-cell ramp and used to read forces back.
"""

import numpy as np

from graspsyn.hand import FingerId, decompose_flex_angle
from graspsyn.sensors import (
    FLEX_PRESETS,
    CapacitiveSensorModel,
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

divider = VoltageDividerConfig()
flex = FLEX_PRESETS["glove"]

print("bend -> counts -> angle back (10-bit ADC)")
for bend in (0.0, 22.5, 45.0, 67.5, 90.0):
    r = angle_to_resistance(flex, bend)
    counts = adc_quantize(divider, divider_output(divider, r))
    r_back = resistance_from_voltage(divider, adc_to_voltage(divider, counts))
    angle = resistance_to_angle(flex, r_back).angle
    print(f"  {bend:5.1f} deg  {int(counts):4d}  {angle:6.2f} deg")

# quantisation costs a fraction of a degree; anything past the anchors saturates
print("200 kOhm reads as", resistance_to_angle(flex, 200e3))

# the combined index reading splits 12:9:8 over MCP, PIP and DIP
joints = decompose_flex_angle(FingerId.INDEX, 87.0)
print("index at 87 deg ->", {k: round(v, 2) for k, v in joints._asdict().items() if v is not None})

# force sensor: parallel-plate capacitor on a spring
model = CapacitiveSensorModel()
cal = fit_force_calibration(force_ramp(model, f_max=20.0, n=21))
print("calibration spans the protocol range:", cal.covers_protocol_range)

true_f = np.array([0.5, 3.0, 7.5, 12.0, 19.0])
read = force_from_capacitance(cal, capacitance_of_force(model, true_f))
err = np.abs(read.force - true_f)
print("force readback error [N]:", np.round(err, 4), "max", f"{err.max():.4f}")
