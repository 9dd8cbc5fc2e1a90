"""Finding the reach-to-grasp phases in a single trial.

The simulator plants the approach, grasp, lift and hold boundaries, so the
detector can be scored against the truth.  We also show what the detector
sees: total force and mean flexion over time.
"""

import numpy as np

from graspsyn import SyntheticConfig, generate_synthetic_trial, hold_features, segment_phases
from graspsyn.hand import builtin_catalog

cfg = SyntheticConfig(seed=42, timing_jitter=15)
names = ("approach", "grasp", "lift", "hold")

for obj in builtin_catalog()[::5]:
    trial, truth = generate_synthetic_trial(cfg, "S01", obj)
    found = segment_phases(trial)
    diff = np.subtract(found.as_tuple()[:4], truth.boundaries[:4])
    print(f"{obj.name:>14} ({obj.grasp_type.value}):", dict(zip(names, diff.tolist())))

# a closer look at one trial
trial, truth = generate_synthetic_trial(cfg, "S01", builtin_catalog()[0])
phases = segment_phases(trial)
total = trial.forces.sum(axis=1)
flexion = trial.angles.mean(axis=1)
for name, t in zip(names, phases.as_tuple()):
    print(f"{name:>8} at {t / trial.meta.scan_rate_hz:5.2f} s  "
          f"total force {total[t]:6.3f} N  mean flexion {flexion[t]:5.1f} deg")

feats = hold_features(trial, phases)
print("hold means [N]:", np.round(feats.mean_forces, 3), "total", round(feats.total_force, 3))
