from app.spectral.CoercivityLemma import (
    LemmaCaseReport,
    LemmaReport,
    coercivity_pairing,
    eigen_expansion_pairing,
    quadrature_pairing,
    verify_lemma,
)
from app.spectral.NumericalRange import (
    NumericalRangeSample,
    RangeInclusionReport,
    holder_pair,
    range_sample,
    verify_range_inclusion,
)

__all__ = [
    "LemmaCaseReport",
    "LemmaReport",
    "coercivity_pairing",
    "eigen_expansion_pairing",
    "quadrature_pairing",
    "verify_lemma",
    "NumericalRangeSample",
    "RangeInclusionReport",
    "holder_pair",
    "range_sample",
    "verify_range_inclusion",
]
