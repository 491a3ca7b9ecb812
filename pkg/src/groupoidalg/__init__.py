"""Exact computational algebra for twisted convolution algebras of finite groupoids.

The package computes, over the rationals or a prime field: the twisted
convolution algebra of a finite groupoid, its inverse semigroup of
normalizers, isotropy algebras and their identification with twisted
group algebras, imprimitivity bimodules, induction and restriction of
finite-dimensional modules, germ-space disintegration, and the
decomposition of (primitive) ideals into induced ideals.
"""

from .errors import GroupoidAlgError
from .groupoid import (
    FiniteGroupoid,
    action_groupoid,
    disjoint_union,
    group_bundle,
    group_groupoid,
    pair_groupoid,
)
from .linalg import GF, QQ, Field, QuotientSpace, Subspace, quotient, span
from .twist import Cocycle, coboundary, validate_cocycle
from .steinberg import (
    AlgebraElement,
    AlgebraPresentation,
    convolve,
    delta,
    delta_section,
    partial_inverse,
    presentation_of_B,
)
from .isotropy import Inclusion

__all__ = [
    "AlgebraElement",
    "AlgebraPresentation",
    "Cocycle",
    "Field",
    "FiniteGroupoid",
    "GF",
    "GroupoidAlgError",
    "Inclusion",
    "QQ",
    "QuotientSpace",
    "Subspace",
    "action_groupoid",
    "coboundary",
    "convolve",
    "delta",
    "delta_section",
    "disjoint_union",
    "group_bundle",
    "group_groupoid",
    "pair_groupoid",
    "partial_inverse",
    "presentation_of_B",
    "quotient",
    "span",
    "validate_cocycle",
]

__version__ = "0.1.0"
