"""Entropy-based dimension profiles and Knapp-example experiments for spherical maximal functions over restricted dilation sets."""

__version__ = "0.1.0"

from .setgen import (Cantor, ExplicitPoints, FullInterval, FullRay, Lacunary, Periodize, Scale,
                     SequenceSet, SetSpec, Union, WindowRestrict, parse_set_spec, sample,
                     window_restrict)
from .entropy import check_mainassu, count_table, cover_count, scan_sup
from .dimension import (assouad_spectrum, beta_estimate, closed_form_profile, gamma_estimate,
                        known_profile, nu_sharp_estimate, rho_star, union_profile)
from .typeset import (L, U, contains, convexity_check, dagger, explicit_contains, region_boundary,
                      theta, verify_equivalence)

__all__ = [
    "__version__",
    "SetSpec", "FullRay", "FullInterval", "Lacunary", "SequenceSet", "Cantor", "ExplicitPoints",
    "Union", "Scale", "Periodize", "WindowRestrict", "parse_set_spec", "sample", "window_restrict",
    "cover_count", "scan_sup", "count_table", "check_mainassu",
    "beta_estimate", "assouad_spectrum", "nu_sharp_estimate", "gamma_estimate", "rho_star",
    "closed_form_profile", "union_profile", "known_profile",
    "dagger", "U", "L", "theta", "contains", "explicit_contains", "region_boundary",
    "verify_equivalence", "convexity_check",
]
