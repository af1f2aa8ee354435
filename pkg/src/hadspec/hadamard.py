"""Hadamard triples (N, B, L) and the mask m_B.

A triple is Hadamard when the matrix exp(2πi bℓ/N)/sqrt(#B), rows b ∈ B and
columns ℓ ∈ L, is unitary.  Row orthogonality for b ≠ b' is the vanishing
of a sum of N-th roots of unity, decided exactly through
:func:`hadspec.foundation.root_of_unity_sum_is_zero`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations
from typing import Iterable

import mpmath

from .errors import CoprimalityError, DomainError, SizeMismatchError
from .foundation import as_rational, root_of_unity_sum_is_zero


@dataclass(frozen=True)
class TripleVerdict:
    is_hadamard: bool
    failing_pair: tuple[int, int] | None = None

    def as_dict(self) -> dict:
        return {
            "is_hadamard": self.is_hadamard,
            "failing_pair": list(self.failing_pair) if self.failing_pair else None,
        }


def verify(N: int, B: Iterable[int], L: Iterable[int]) -> TripleVerdict:
    B, L = sorted(set(B)), sorted(set(L))
    if N < 2:
        raise DomainError(f"a Hadamard triple needs N >= 2, got N={N}")
    if not B or not L:
        raise DomainError("digit sets must be nonempty")
    if len(B) != len(L):
        raise SizeMismatchError(f"#B={len(B)} differs from #L={len(L)}")
    for b, b2 in combinations(B, 2):
        if not root_of_unity_sum_is_zero(((b - b2) * ell for ell in L), N):
            return TripleVerdict(False, (b, b2))
    return TripleVerdict(True)


@dataclass(frozen=True)
class HadamardTriple:
    """A verified Hadamard triple with 0 in both digit sets.

    Build through :meth:`create`; the constructor trusts its arguments.
    """

    N: int
    B: tuple[int, ...]
    L: tuple[int, ...]

    @classmethod
    def create(cls, N: int, B: Iterable[int], L: Iterable[int]) -> HadamardTriple:
        N = int(N)
        B = tuple(sorted({int(b) for b in B}))
        L = tuple(sorted({int(ell) for ell in L}))
        if 0 not in B or 0 not in L:
            raise DomainError("canonical spectral pairs need 0 in B and 0 in L")
        if len(B) < 2:
            raise DomainError("need #B >= 2")
        verdict = verify(N, B, L)
        if not verdict.is_hadamard:
            raise DomainError(
                f"({N}, {list(B)}, {list(L)}) is not a Hadamard triple: "
                f"rows {verdict.failing_pair} are not orthogonal"
            )
        return cls(N, B, L)

    @property
    def d(self) -> int:
        """gcd of the nonzero elements of B."""
        return reduce(math.gcd, (abs(b) for b in self.B if b), 0)

    def as_dict(self) -> dict:
        return {"N": self.N, "B": list(self.B), "L": list(self.L)}

    def __str__(self):
        return f"({self.N}, {{{', '.join(map(str, self.B))}}}, {{{', '.join(map(str, self.L))}}})"


@dataclass(frozen=True)
class MaskValue:
    value: complex  # mpmath.mpc when more than 53 bits were requested
    exact_zero: bool


def mask_is_zero(B: Iterable[int], x: Fraction) -> bool:
    """m_B(x) == 0 exactly."""
    x = as_rational(x)
    v, u = x.numerator, x.denominator
    return root_of_unity_sum_is_zero((b * v for b in B), u)


def mask_value(t: HadamardTriple, x, precision: int = 53) -> MaskValue:
    """m_B(x) = (1/#B) Σ_b exp(2πi b x) for rational x.

    Phases are reduced mod 1 exactly before any rounding, so large arguments
    lose no accuracy.  ``precision`` is the working precision in bits.
    """
    x = as_rational(x)
    if mask_is_zero(t.B, x):
        return MaskValue(0j, True)
    phases = [(b * x) % 1 for b in t.B]
    if precision <= 53:
        acc = sum(cmath.exp(2j * math.pi * float(ph)) for ph in phases)
        return MaskValue(acc / len(t.B), False)
    with mpmath.workprec(int(precision)):
        acc = mpmath.mpc(0)
        for ph in phases:
            acc += mpmath.expjpi(2 * mpmath.mpf(ph.numerator) / ph.denominator)
        return MaskValue(acc / len(t.B), False)


def is_extremal(t: HadamardTriple, x) -> bool:
    """|m_B(x)| == 1, i.e. every phase b·x is an integer, i.e. den(x) | d."""
    x = as_rational(x)
    return t.d % x.denominator == 0


def scaled_triple(t: HadamardTriple, q: int) -> HadamardTriple:
    """(N, B, qL) for q coprime to N."""
    if q < 2:
        raise DomainError(f"scaling factor must be >= 2, got {q}")
    if math.gcd(q, t.N) != 1:
        raise CoprimalityError(
            f"scaled_triple needs gcd(q, N) = 1 for (N, B, qL) to stay Hadamard; "
            f"gcd({q}, {t.N}) = {math.gcd(q, t.N)}"
        )
    return HadamardTriple.create(t.N, t.B, (q * ell for ell in t.L))
