"""Dynamical and arithmetic degrees and the end-to-end equality check."""

from .growth import (
    AlphaEstimate,
    GrowthProfile,
    arithmetic_degree_estimate,
    estimate_from_heights,
    growth_profile,
    height_sequence,
    minimal_recurrence,
)
from .spectral import (
    SpectralCertificate,
    dynamical_degree,
    frobenius_norms,
    gelfand_oracle,
    root_modulus_enclosure,
    spectral_radius_certified,
)
from .theorem import DegreeReport, TheoremOptions, special_case_check, verify_composite, verify_theorem

__all__ = [
    "AlphaEstimate",
    "DegreeReport",
    "GrowthProfile",
    "SpectralCertificate",
    "TheoremOptions",
    "arithmetic_degree_estimate",
    "dynamical_degree",
    "estimate_from_heights",
    "frobenius_norms",
    "gelfand_oracle",
    "growth_profile",
    "height_sequence",
    "minimal_recurrence",
    "root_modulus_enclosure",
    "special_case_check",
    "spectral_radius_certified",
    "verify_composite",
    "verify_theorem",
]
