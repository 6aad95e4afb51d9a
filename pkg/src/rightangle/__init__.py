"""Toolkit for manifolds with right-angled corners.

Builds corner complexes from catalogued right-angled polytopes, colours
their facets, assembles the associated closed covers as CW complexes,
computes cellular homology over GF(2) and the rationals, and verifies
L-space certificates based on Dehn-filling interval arithmetic.
"""

from .colouring import (adjacency_graph, find_colouring,
                        find_symmetric_colouring, is_orientable,
                        reduce_colouring, symmetrize, validate_generalised)
from .corners import (Gluing, build, facet_count_prediction, mirror,
                      parse_tessellation, thicken, write_tessellation)
from .homology import (betti, rank_gf2, rank_rational, smith_normal_form)
from .orbit import (build_quotient, euler_characteristic_weighted,
                    separation_check)
from .polytopes import FaceIso, catalog_load, extend_facet_iso
from .slopes import (Slope, candidate_intervals, d_tau_positive, longitude,
                     slope_in_interval)
from .certificates import parse_log, verify_certificate

__version__ = "0.1.0"

__all__ = [
    "FaceIso", "Gluing", "Slope", "adjacency_graph", "betti", "build",
    "build_quotient", "candidate_intervals", "catalog_load",
    "d_tau_positive", "euler_characteristic_weighted",
    "extend_facet_iso", "facet_count_prediction", "find_colouring",
    "find_symmetric_colouring", "is_orientable", "longitude", "mirror",
    "parse_log", "parse_tessellation", "rank_gf2", "rank_rational",
    "reduce_colouring", "separation_check", "slope_in_interval",
    "smith_normal_form", "symmetrize", "thicken", "validate_generalised",
    "verify_certificate", "write_tessellation",
]
