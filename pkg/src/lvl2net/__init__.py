"""Exact enumeration and certified asymptotics for level-2 phylogenetic networks."""

from .numerics import Interval, Polynomial, Rational
from .series import TruncatedSeries, fixed_point_solve, parse_prefix, X, U
from .netclass import (REGISTRY, NetworkClassSpec, RationalFunction, derive_phi, lookup,
                       phi_series, tree_child_equation, catalan_equation)
from .inversion import (AsymptoticProfile, HypothesisReport, compute_profile,
                        convergence_report, counts_from_series, lagrange_coefficients,
                        verify_hypotheses)
from .oracle import (ClassFlags, PhyloNetwork, canonical_certificate, classify, count_class,
                     generate_networks, is_outerplanar)

__all__ = [
    "Interval", "Polynomial", "Rational",
    "TruncatedSeries", "fixed_point_solve", "parse_prefix", "X", "U",
    "REGISTRY", "NetworkClassSpec", "RationalFunction", "derive_phi", "lookup", "phi_series",
    "tree_child_equation", "catalan_equation",
    "AsymptoticProfile", "HypothesisReport", "compute_profile", "convergence_report",
    "counts_from_series", "lagrange_coefficients", "verify_hypotheses",
    "ClassFlags", "PhyloNetwork", "canonical_certificate", "classify", "count_class",
    "generate_networks", "is_outerplanar",
]

__version__ = "0.1.0"
