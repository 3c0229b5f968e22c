"""Exact lattice computations for monodromy groups of elliptic surfaces."""
from .errors import (ContainmentError, IsotropicRootError, LatticeError, NotIntegralReflectionError,
                     ParameterError, ParseError, PreconditionError, UnsupportedError, UsageError)
from .lattice import (Lattice, LatticeVector, Signature, direct_sum, direct_sum_all, discriminant,
                      enumerate_roots, inner_product, is_even, is_unimodular, make_standard,
                      orthogonal_complement, radical_basis, signature)

__all__ = [
    "ContainmentError", "IsotropicRootError", "LatticeError", "NotIntegralReflectionError",
    "ParameterError", "ParseError", "PreconditionError", "UnsupportedError", "UsageError",
    "Lattice", "LatticeVector", "Signature", "direct_sum", "direct_sum_all", "discriminant",
    "enumerate_roots", "inner_product", "is_even", "is_unimodular", "make_standard",
    "orthogonal_complement", "radical_basis", "signature",
]

__version__ = "0.1.0"
