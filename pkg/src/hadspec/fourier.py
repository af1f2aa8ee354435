"""Fourier-side diagnostics for μ_{N,B}.

The measure is only ever touched through its transform, the infinite
product Π_{k>=1} m_B(ξ/N^k), truncated at a finite depth.  Each omitted
factor has modulus <= 1, so truncation can only overestimate |μ̂|.  Exact
zeros are detected algebraically at any depth.  Nothing here produces a
verdict; the exact lattice criterion in :mod:`hadspec.spectrum` does that.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, ResourceError
from .foundation import as_rational
from .hadamard import HadamardTriple, mask_is_zero

DEFAULT_DEPTH = 30
WORD_BUDGET = 2 * 10**6


@dataclass(frozen=True)
class TransformValue:
    value: complex
    exact_zero: bool
    depth: int


def _mask_float(B: Sequence[int], x: Fraction) -> complex:
    # phases reduced mod 1 exactly, then rounded once
    return sum(cmath.exp(2j * math.pi * float((b * x) % 1)) for b in B) / len(B)


def mu_hat(t: HadamardTriple, xi, depth: int = DEFAULT_DEPTH) -> TransformValue:
    """Π_{k=1}^{depth} m_B(ξ/N^k) for rational ξ."""
    if depth < 1:
        raise DomainError("depth must be >= 1")
    xi = as_rational(xi)
    acc = 1 + 0j
    for k in range(1, depth + 1):
        arg = xi / t.N**k
        if mask_is_zero(t.B, arg):
            return TransformValue(0j, True, depth)
        acc *= _mask_float(t.B, arg)
    return TransformValue(acc, False, depth)


def level_parseval(t: HadamardTriple, t0: float, n: int, budget: int = WORD_BUDGET) -> float:
    """Σ_{words in L^n} Π_{k=1}^{n} |m_B((t0 + λ_word)/N^k)|², which should equal 1.

    λ_word = Σ ℓ_k N^(k-1).  Column orthonormality of the Hadamard matrix
    makes each level sum to one.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if len(t.L) ** n > budget:
        raise ResourceError(f"{len(t.L)}^{n} words exceed the budget {budget}")
    lam = np.zeros(1, dtype=np.float64)
    for k in range(n):
        lam = (lam[:, None] + np.asarray(t.L, dtype=np.float64)[None, :] * float(t.N) ** k).ravel()
    B = np.asarray(t.B, dtype=np.float64)
    total = np.ones_like(lam)
    for k in range(1, n + 1):
        # reduce (t0 + λ)/N^k mod 1 per digit before exponentiating
        arg = (t0 + lam) / float(t.N) ** k
        ph = np.multiply.outer(arg, B) % 1.0
        m = np.exp(2j * np.pi * ph).mean(axis=-1)
        total *= np.abs(m) ** 2
    return float(total.sum())


@dataclass(frozen=True)
class GramReport:
    max_abs: float
    pairs: dict[tuple[Fraction, Fraction], TransformValue]

    @property
    def all_exact_zero(self) -> bool:
        return all(v.exact_zero for v in self.pairs.values())


def gram_offdiag(t: HadamardTriple, points: Iterable, depth: int = DEFAULT_DEPTH) -> GramReport:
    """Largest |⟨e_λ, e_λ'⟩| = |μ̂(λ - λ')| over distinct pairs of points."""
    pts = sorted({as_rational(x) for x in points})
    pairs = {}
    worst = 0.0
    for a, b in combinations(pts, 2):
        v = mu_hat(t, b - a, depth)
        pairs[(a, b)] = v
        if not v.exact_zero:
            worst = max(worst, abs(v.value))
    return GramReport(worst, pairs)


def _q_at(args) -> float:
    t, pts, t0, depth = args
    t0 = Fraction(t0) if not isinstance(t0, Fraction) else t0
    return sum(abs(mu_hat(t, t0 + lam, depth).value) ** 2 for lam in pts)


def completeness_Q(
    t: HadamardTriple,
    spectrum_points: Iterable,
    grid: Sequence[float],
    depth: int = DEFAULT_DEPTH,
    workers: int = 1,
) -> list[float]:
    """Q(t0) = Σ_λ |μ̂(t0 + λ)|² at each grid point, in grid order.

    A spectrum drives Q to 1 everywhere as the point set grows; a persistent
    gap below 1 signals an incomplete family.
    """
    if depth < 1:
        raise DomainError("depth must be >= 1")
    pts = sorted({as_rational(x) for x in spectrum_points})
    # grid floats are converted exactly (binary fractions), so exact zeros still show up
    jobs = [(t, pts, Fraction(float(g)), depth) for g in grid]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_q_at, jobs))
    return [_q_at(j) for j in jobs]
