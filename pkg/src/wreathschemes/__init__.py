"""Finite association schemes: wreath and direct products, Bose-Mesner
spectra, automorphism groups, S-rings and wreath towers."""

from .products import (
    class_one,
    direct_product,
    kernel_scheme,
    one_point,
    projection_morphism,
    wreath_power,
    wreath_product,
)
from .scheme import Morphism, Scheme, check_morphism, parse, serialize, validate

__all__ = [
    "Scheme",
    "Morphism",
    "validate",
    "check_morphism",
    "parse",
    "serialize",
    "one_point",
    "class_one",
    "direct_product",
    "wreath_product",
    "wreath_power",
    "kernel_scheme",
    "projection_morphism",
]
