"""CA-GALT and MFA-GALT: factor analysis of open-ended answers in several
languages jointly with closed-ended contextual variables."""

__version__ = "0.1.0"

from .association import anova_association, build_occurrence_table, chi2_association
from .ca_galt import build_galt, ca_galt
from .context import VariableSpec, center_contextual, encode_contextual, impute_missing
from .corpus import TokenizerConfig, VocabularyFilter, build_lexical_table, compute_weights, tokenize
from .mfa_galt import (
    MultiSample,
    group_coordinates,
    mfa_galt,
    partial_column_factors,
    project_supplementary_categories,
    rv_matrix,
)
from .numcore import generalized_pca, psd_pseudo_inverse

__all__ = [
    "TokenizerConfig",
    "VocabularyFilter",
    "VariableSpec",
    "MultiSample",
    "tokenize",
    "build_lexical_table",
    "compute_weights",
    "encode_contextual",
    "impute_missing",
    "center_contextual",
    "psd_pseudo_inverse",
    "generalized_pca",
    "build_galt",
    "ca_galt",
    "mfa_galt",
    "partial_column_factors",
    "group_coordinates",
    "rv_matrix",
    "project_supplementary_categories",
    "build_occurrence_table",
    "anova_association",
    "chi2_association",
]
