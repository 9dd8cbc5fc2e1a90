"""Synergy analysis on hold-phase features: correlation, radar, force-mass, PCA, t-SNE."""

from .correlation import (
    FINGER_PAIRS,
    CorrelationExtrema,
    CorrelationMatrix,
    PairExtrema,
    correlation_extrema,
    correlation_matrix,
    cross_domain_correlations,
    grasp_type_correlations,
    pearson,
)
from .forcemass import ForceMassModel, Interpolated, force_mass_eval, force_mass_fit
from .pca import PcaModel, elbow_select, pca_fit, pca_project, pca_reconstruct
from .radar import RadarProfile, radar_area, radar_profiles
from .tsne import Embedding, tsne_embed

__all__ = [
    "FINGER_PAIRS",
    "CorrelationExtrema",
    "CorrelationMatrix",
    "PairExtrema",
    "correlation_extrema",
    "correlation_matrix",
    "cross_domain_correlations",
    "grasp_type_correlations",
    "pearson",
    "ForceMassModel",
    "Interpolated",
    "force_mass_eval",
    "force_mass_fit",
    "PcaModel",
    "elbow_select",
    "pca_fit",
    "pca_project",
    "pca_reconstruct",
    "RadarProfile",
    "radar_area",
    "radar_profiles",
    "Embedding",
    "tsne_embed",
]
