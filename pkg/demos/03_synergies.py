"""Synergies across a small synthetic cohort.

Three subjects grasp the whole object catalog.  Hold-phase means feed the
correlation, PCA, force-mass and t-SNE analyses.  The generator plants a
rank-3 structure, so three components should carry nearly everything.
"""

import numpy as np

from graspsyn import Dataset, SyntheticConfig, extract_features, feature_matrix, generate_synthetic_trial
from graspsyn.hand import GraspType
from graspsyn.synergy import (
    correlation_extrema,
    elbow_select,
    force_mass_eval,
    force_mass_fit,
    grasp_type_correlations,
    pca_fit,
    radar_area,
    radar_profiles,
    tsne_embed,
)
from graspsyn.synthetic import iter_grid

cfg = SyntheticConfig(seed=7, n_subjects=3)
trials = [generate_synthetic_trial(cfg, s, obj, k)[0] for s, obj, k in iter_grid(cfg)]
records = extract_features(Dataset(trials))
print(len(records), "trials segmented")

# finger coupling: which grasp types tie finger pairs together most and least
mats = grasp_type_correlations(records, "force", window="hold")
ext = correlation_extrema(mats)
for domain, (a, b), e in ext.rows():
    print(f"  {a.label}-{b.label}: max {e.max_r:+.2f} ({e.max_type.value}), "
          f"min {e.min_r:+.2f} ({e.min_type.value})")

for domain in ("posture", "force"):
    m = pca_fit(feature_matrix(records, domain))
    print(f"{domain} PCA: top-3 {m.cumulative[2]:.4f}, elbow at {elbow_select(m.explained)}")

# power grasps load the fingertips over a larger area than precision grasps
force_radar = radar_profiles(records)["force"]
for gt, prof in force_radar.items():
    print(f"  {gt.value:>14}: force area {radar_area(prof):7.2f}")

model = force_mass_fit(records, GraspType.CG)
print("CG hold force at 300 g:", force_mass_eval(model, 300.0))

emb = tsne_embed(feature_matrix(records, "posture"), perplexity=10.0, seed=0, iterations=500)
print(f"t-SNE final KL {emb.final_kl:.3f}, spread {np.ptp(emb.points, axis=0).round(1)}")
