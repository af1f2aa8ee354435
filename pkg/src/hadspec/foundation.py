"""Exact arithmetic substrate.

Rationals are plain :class:`fractions.Fraction` values (always reduced,
positive denominator).  Integer polynomials are stored lowest degree first
and are only ever divided by monic polynomials, so all division is exact
over the integers.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .numtheory import factorize

ExactRational = Fraction


def as_rational(x) -> Fraction:
    """Coerce ints, decimal strings and fractions to a reduced Fraction.

    Floats are rejected: they have no business in set-theoretic code.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def _trim(coeffs: list[int]) -> tuple[int, ...]:
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


class IntPolynomial:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        self.coeffs = _trim([int(c) for c in coeffs])

    @classmethod
    def monomial(cls, power: int, coeff: int = 1) -> IntPolynomial:
        return cls([0] * power + [coeff])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)})"

    def __add__(self, other: IntPolynomial) -> IntPolynomial:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPolynomial(out)

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial([-c for c in self.coeffs])

    def __sub__(self, other: IntPolynomial) -> IntPolynomial:
        return self + (-other)

    def __mul__(self, other: IntPolynomial) -> IntPolynomial:
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPolynomial()
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return IntPolynomial(out)

    def divmod_monic(self, divisor: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial]:
        d = divisor.coeffs
        if not d or d[-1] != 1:
            raise ValueError("divisor must be monic")
        rem = list(self.coeffs)
        dd = len(d) - 1
        if len(rem) <= dd:
            return IntPolynomial(), IntPolynomial(rem)
        quot = [0] * (len(rem) - dd)
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i]
            if c:
                quot[i - dd] = c
                for j in range(dd + 1):
                    rem[i - dd + j] -= c * d[j]
        return IntPolynomial(quot), IntPolynomial(rem[:dd])

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def _divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


@lru_cache(maxsize=512)
def cyclotomic(n: int) -> IntPolynomial:
    """Φ_n by exact division of x^n - 1 by Φ_d for the proper divisors d."""
    if n < 1:
        raise ValueError("cyclotomic index must be >= 1")
    poly = IntPolynomial.monomial(n) - IntPolynomial([1])
    for d in _divisors(n)[:-1]:
        poly, rem = poly.divmod_monic(cyclotomic(d))
        assert rem.is_zero()
    return poly


def _divisible_by_cyclotomic(coeffs: dict[int, int], n: int) -> bool:
    # coeffs: exponent (already mod n) -> integer multiplicity
    dense = [0] * n
    for e, c in coeffs.items():
        dense[e] += c
    _, rem = IntPolynomial(dense).divmod_monic(cyclotomic(n))
    return rem.is_zero()


def _vanishes(coeffs: dict[int, int], n: int, primes: Sequence[int]) -> bool:
    coeffs = {e: c for e, c in coeffs.items() if c}
    if not coeffs:
        return True
    if n == 1:
        return sum(coeffs.values()) == 0
    if len(coeffs) == 1:
        return False
    for p in primes:
        if n % (p * p) == 0:
            # Q(ζ_n) has basis 1, ζ_n, ..., ζ_n^{p-1} over Q(ζ_{n/p}) when p | n/p,
            # so the sum vanishes iff each residue class mod p vanishes on its own.
            groups: dict[int, dict[int, int]] = {}
            for e, c in coeffs.items():
                r = e % p
                g = groups.setdefault(r, {})
                g[(e - r) // p] = g.get((e - r) // p, 0) + c
            m = n // p
            return all(_vanishes(g, m, primes) for g in groups.values())
    return _divisible_by_cyclotomic(coeffs, n)


def root_of_unity_sum_is_zero(exponents: Iterable[int], n: int) -> bool:
    """Decide exactly whether sum(exp(2πi e/n) for e in exponents) == 0.

    Equivalent to Φ_n dividing Σ x^e mod (x^n - 1).  Large square-full moduli
    are first reduced through the tower Q(ζ_{n/p}) ⊂ Q(ζ_n); only the
    squarefree remainder goes through polynomial division.
    """
    if n < 1:
        raise ValueError("modulus must be >= 1")
    counts = Counter(e % n for e in exponents)
    primes = sorted(factorize(n))
    return _vanishes(dict(counts), n, primes)
