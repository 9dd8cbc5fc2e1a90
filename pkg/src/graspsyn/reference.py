"""Summary values reported for the original 10-subject glove recordings.

These come from human data that is not distributed, so nothing in this
package tries to reproduce them; they are kept for side-by-side comparison
with results on other datasets.
"""

# cumulative explained variance of the first three principal components [%]
POSTURE_CUMULATIVE_PCT = (90.14, 94.39, 97.59)
FORCE_CUMULATIVE_PCT = (63.87, 79.42, 91.31)
SELECTED_COMPONENTS = 3

# largest finger-pair correlation coefficients quoted for the recordings
MAX_CORRELATIONS = (0.95, 0.969, 0.740, 0.686)
THUMB_PAIR_CORRELATION_RANGE = (0.868, 0.889)

# (grasp type, total hold force [N], object mass [g])
PEAK_HOLD_FORCES = (("SG", 9.96, 158.0), ("LP", 1.97, 167.0))
