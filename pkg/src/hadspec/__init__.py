"""Exact toolkit for canonical spectral pairs of Hadamard triples."""

from .errors import (
    ConfigError,
    CoprimalityError,
    DomainError,
    HadspecError,
    NotMemberError,
    ResourceError,
    SizeMismatchError,
)
from .hadamard import HadamardTriple, verify
from .selfsimilar import DigitSystem, lattice_points, member
from .spectrum import canonical_levels, extreme_cycles, is_spectral_eigenvalue

__version__ = "0.1.0"
