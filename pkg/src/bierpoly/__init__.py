"""Bier spheres of simplicial complexes, weighted games and convex realizations."""
from .bier import BierSphere, BierVertex, bier_sphere, orient, retriangulate, ridges
from .classify import classify_game, is_threshold, threshold_certificate
from .complex import SimplicialComplex, alexander_dual, build, parse_cmplx
from .geom import PointConfiguration, convex_hull, lattice_isomorphism, realizes, threshold_realization
from .realize import realize_bier

__all__ = [
    "BierSphere",
    "BierVertex",
    "PointConfiguration",
    "SimplicialComplex",
    "alexander_dual",
    "bier_sphere",
    "build",
    "classify_game",
    "convex_hull",
    "is_threshold",
    "lattice_isomorphism",
    "orient",
    "parse_cmplx",
    "realize_bier",
    "realizes",
    "retriangulate",
    "ridges",
    "threshold_certificate",
    "threshold_realization",
]

__version__ = "0.1.0"
