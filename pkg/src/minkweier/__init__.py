"""Minimal space-like surfaces in Minkowski space R^4_1 from Weierstrass data."""

from .errors import MinkError
from .weier import (
    Affine, GForm, GFormCanonical, GridSpec, Hyperbolic, Trig, WForm, build_phi, convert, validate,
)
from .surface import sample
from .canonical import canonize
from .motions import apply_motion, verify_congruence
from .family import associate, conjugate

__all__ = [
    "Affine", "GForm", "GFormCanonical", "GridSpec", "Hyperbolic", "MinkError", "Trig", "WForm",
    "apply_motion", "associate", "build_phi", "canonize", "conjugate", "convert", "sample",
    "validate", "verify_congruence",
]
