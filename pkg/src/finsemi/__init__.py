"""Finite semigroups, omega-identities, and the pseudovariety toolkit around them."""

from .semigroup import FiniteSemigroup, closure, hom_check, validate
from .green import green

__all__ = ["FiniteSemigroup", "closure", "hom_check", "validate", "green"]
__version__ = "0.1.0"
