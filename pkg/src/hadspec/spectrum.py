"""Canonical spectra of Hadamard triples and their integer eigenvalues.

For a triple (N, B, L) with d = gcd(B), the canonical spectrum is built from
the seed Λ_0 = -(K(N, L) ∩ Z/d) by Λ_n = N Λ_{n-1} + L.  An integer q coprime
to N scales it to another spectrum exactly when K(N, L) gains no new points
between Z/d and Z/(qd).  Equivalently, K(N, dL) gains none between Z and
Z/q.  Both forms are evaluated and must agree.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

import networkx as nx

from .errors import CoprimalityError, DomainError, ResourceError
from .hadamard import HadamardTriple, is_extremal, scaled_triple
from .numtheory import exceeds_power, is_prime, multiplicative_order, sieve_primes
from .selfsimilar import DigitSystem, dp_intersection, lattice_points, similarity_dimension

DEFAULT_LEVEL_BUDGET = 10**6
SCAN_DELTAS = (Fraction(1, 2), Fraction(677, 1000))


def dual_system(t: HadamardTriple, scale: int = 1) -> DigitSystem:
    """K(N, scale·L)."""
    return DigitSystem.create(t.N, (scale * ell for ell in t.L))


# ------------------------------------------------------------ extreme cycles


@dataclass(frozen=True)
class ExtremeCycle:
    points: tuple[Fraction, ...]
    labels: tuple[int, ...]  # labels[j] maps points[j] to points[j+1 mod k]

    def as_dict(self) -> dict:
        return {"points": [str(x) for x in self.points], "labels": list(self.labels)}


def extreme_cycles(t: HadamardTriple) -> list[ExtremeCycle]:
    """All cycles of x -> (x + ℓ)/N on K(N, L) ∩ Z/d on which |m_B| = 1."""
    cands = lattice_points(dual_system(t), t.d)
    cset = set(cands)
    g = nx.DiGraph()
    g.add_nodes_from(cands)
    for x in cands:
        for ell in t.L:
            y = (x + ell) / t.N
            if y in cset:
                g.add_edge(x, y, label=ell)
    out = []
    for cyc in nx.simple_cycles(g):
        if not all(is_extremal(t, x) for x in cyc):
            continue
        k = cyc.index(min(cyc))
        pts = tuple(cyc[k:] + cyc[:k])
        labels = tuple(g.edges[pts[j], pts[(j + 1) % len(pts)]]["label"] for j in range(len(pts)))
        out.append(ExtremeCycle(pts, labels))
    out.sort(key=lambda c: (len(c.points), c.points))
    return out


# ---------------------------------------------------------- spectrum levels


@dataclass(frozen=True)
class SpectrumLevels:
    triple: HadamardTriple
    levels: tuple[tuple[Fraction, ...], ...]

    def __getitem__(self, n: int) -> tuple[Fraction, ...]:
        return self.levels[n]

    def union(self) -> list[Fraction]:
        return sorted(set().union(*self.levels))

    def is_nested(self) -> bool:
        """Λ_n ⊆ Λ_{n+1} for the computed levels (checked, never assumed)."""
        return all(set(a) <= set(b) for a, b in zip(self.levels, self.levels[1:]))


def canonical_levels(
    t: HadamardTriple, n: int, budget: int = DEFAULT_LEVEL_BUDGET
) -> SpectrumLevels:
    if n < 0:
        raise DomainError("level index must be >= 0")
    seed = sorted(-x for x in lattice_points(dual_system(t), t.d))
    if len(seed) * len(t.L) ** n > budget:
        raise ResourceError(
            f"Λ_{n} may hold {len(seed)}·{len(t.L)}^{n} points, over the budget {budget}"
        )
    levels = [tuple(seed)]
    for _ in range(n):
        prev = levels[-1]
        levels.append(tuple(sorted({t.N * x + ell for x in prev for ell in t.L})))
    return SpectrumLevels(t, tuple(levels))


def lambda_NL(N: int, L: Iterable[int], n: int) -> list[int]:
    """{Σ_{k<=m} ℓ_k N^k : m <= n, ℓ_k ∈ L}."""
    L = sorted(set(L))
    if 0 not in L:
        raise DomainError("lambda_NL needs 0 in L")
    sums = {0}
    out = set()
    for k in range(n + 1):
        sums = {s + ell * N**k for s in sums for ell in L}
        out |= sums
    return sorted(out)


# ------------------------------------------------------------- eigenvalues


@dataclass(frozen=True)
class EigenvalueVerdict:
    q: int
    is_eigenvalue: bool
    witness: Fraction | None = None
    methods_agreed: bool = True

    def as_dict(self) -> dict:
        return {
            "q": self.q,
            "is_eigenvalue": self.is_eigenvalue,
            "witness": None if self.witness is None else str(self.witness),
            "methods_agreed": self.methods_agreed,
        }


class MethodDisagreement(AssertionError):
    pass


def _check_q(t: HadamardTriple, q: int) -> None:
    if q < 1:
        raise DomainError(f"eigenvalue candidates must be positive integers, got {q}")
    if math.gcd(q, t.N) != 1:
        raise CoprimalityError(
            f"the eigenvalue criterion K(N,L) ∩ Z/(qd) = K(N,L) ∩ Z/d assumes gcd(q, N) = 1; "
            f"gcd({q}, {t.N}) = {math.gcd(q, t.N)}"
        )


def is_spectral_eigenvalue(t: HadamardTriple, q: int) -> EigenvalueVerdict:
    """Is q·Λ again a spectrum of μ_{N,B}?  Exact, for q coprime to N."""
    q = int(q)
    _check_q(t, q)
    if q == 1:
        return EigenvalueVerdict(1, True)
    d = t.d
    base = dual_system(t)
    fine, coarse = lattice_points(base, q * d), lattice_points(base, d)
    extra = sorted(set(fine) - set(coarse), key=lambda x: (x.denominator, abs(x.numerator), x.numerator))
    first = not extra

    scaled = dual_system(t, d)
    second = set(lattice_points(scaled, q)) == set(lattice_points(scaled, 1))

    if first != second:
        raise MethodDisagreement(f"lattice forms disagree for {t} at q={q}")
    return EigenvalueVerdict(q, first, None if first else extra[0], True)


# ------------------------------------------------------------------ scans


@dataclass(frozen=True)
class ScanRow:
    p: int
    verdict: EigenvalueVerdict
    ord_N_p: int
    in_A: dict[Fraction, bool]


@dataclass
class ScanReport:
    triple: HadamardTriple
    x: int
    rows: list[ScanRow]
    similarity_dimension: float
    violations: dict[Fraction, list[int]] = field(default_factory=dict)

    @property
    def eigenvalue_fraction(self) -> float:
        if not self.rows:
            return 0.0
        return sum(r.verdict.is_eigenvalue for r in self.rows) / len(self.rows)

    def largest_violation(self, delta) -> int | None:
        v = self.violations.get(Fraction(delta), [])
        return max(v) if v else None

    def violations_above_largest(self, delta) -> int:
        """Non-eigenvalue primes of A_N(delta) beyond the largest recorded violation.

        Recomputed from the rows rather than from the violation list, so a
        bookkeeping slip cannot make this vacuous.
        """
        delta = Fraction(delta)
        top = self.largest_violation(delta)
        if top is None:
            top = 0
        return sum(
            1
            for r in self.rows
            if r.p > top and r.in_A[delta] and not r.verdict.is_eigenvalue
        )

    def summary(self) -> dict:
        return {
            "triple": self.triple.as_dict(),
            "x": self.x,
            "primes_scanned": len(self.rows),
            "eigenvalues": sum(r.verdict.is_eigenvalue for r in self.rows),
            "eigenvalue_fraction": self.eigenvalue_fraction,
            "similarity_dimension": self.similarity_dimension,
            "large_eigenvalue_check": {
                str(delta): {
                    "applies": float(delta) > self.similarity_dimension,
                    "violations": self.violations[delta],
                    "largest_violation": self.largest_violation(delta),
                    "violations_above_largest": self.violations_above_largest(delta),
                }
                for delta in self.violations
            },
        }


def _scan_one(args) -> ScanRow:
    t, p, deltas = args
    ordp = multiplicative_order(t.N, p)
    return ScanRow(
        p,
        is_spectral_eigenvalue(t, p),
        ordp,
        {delta: exceeds_power(ordp, p, delta) for delta in deltas},
    )


def eigenvalue_scan(
    t: HadamardTriple, x: int, deltas: Sequence = SCAN_DELTAS, workers: int = 1
) -> ScanReport:
    """Eigenvalue verdicts for every prime p <= x coprime to N.

    The violation lists hold primes of A_N(δ) that are not eigenvalues, for each
    δ.  Past some threshold these lists should stop growing whenever δ exceeds
    the similarity dimension of K(N, L).
    """
    if x < 2:
        raise DomainError("eigenvalue_scan needs x >= 2")
    deltas = tuple(Fraction(d) if not isinstance(d, float) else Fraction(repr(d)) for d in deltas)
    primes = [p for p in sieve_primes(x) if t.N % p]
    jobs = [(t, p, deltas) for p in primes]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_scan_one, jobs, chunksize=16))
    else:
        rows = [_scan_one(j) for j in jobs]
    rows.sort(key=lambda r: r.p)
    dim = similarity_dimension(dual_system(t))
    violations = {
        delta: [r.p for r in rows if r.in_A[delta] and not r.verdict.is_eigenvalue]
        for delta in deltas
    }
    return ScanReport(t, int(x), rows, dim, violations)


# ------------------------------------------------------ power closure check


@dataclass
class PowerClosureReport:
    primes: tuple[int, ...]
    M: int
    n0: int | None
    dp_levels: dict[int, list[Fraction]]
    hypothesis_q: int | None
    hypothesis_holds: bool | None
    verified: dict[int, bool] = field(default_factory=dict)

    @property
    def conclusion_holds(self) -> bool | None:
        if not self.hypothesis_holds:
            return None
        return all(self.verified.values())

    def as_dict(self) -> dict:
        return {
            "primes": list(self.primes),
            "M": self.M,
            "n0_empirical": self.n0,
            "dp_levels": {str(m): [str(x) for x in v] for m, v in self.dp_levels.items()},
            "hypothesis_q": self.hypothesis_q,
            "hypothesis_holds": self.hypothesis_holds,
            "verified": {str(k): v for k, v in sorted(self.verified.items())},
            "conclusion_holds": self.conclusion_holds,
        }


def _exponent_vectors(k: int, budget: int):
    for exps in product(range(budget + 1), repeat=k):
        if sum(exps) <= budget:
            yield exps


def power_closure_check(
    t: HadamardTriple,
    primes: Sequence[int],
    M: int,
    exponent_budget: int,
    max_products: int = 10_000,
) -> PowerClosureReport:
    """Run the stabilization argument for composite eigenvalues.

    Finds the empirical level n0 at which K(N, dL) ∩ D_P stops growing
    (P = p_1⋯p_k, scan limited to level M).  Tests whether P^n0 is an
    eigenvalue.  If so, checks every p_1^n_1⋯p_k^n_k with Σn_i <= budget.
    """
    primes = tuple(sorted(int(p) for p in primes))
    if not primes or len(set(primes)) != len(primes) or not all(is_prime(p) for p in primes):
        raise DomainError(f"power_closure_check needs distinct primes, got {list(primes)}")
    P = math.prod(primes)
    if math.gcd(P, t.N) != 1:
        raise CoprimalityError(
            f"composite eigenvalue closure needs gcd(p_1⋯p_k, N) = 1; gcd({P}, {t.N}) = {math.gcd(P, t.N)}"
        )
    n_products = sum(1 for _ in _exponent_vectors(len(primes), exponent_budget))
    if n_products > max_products:
        raise ResourceError(f"{n_products} exponent vectors exceed the limit {max_products}")
    dp = dp_intersection(dual_system(t, t.d), P, M)
    report = PowerClosureReport(
        primes, M, dp.stabilization_index, {m: list(v) for m, v in enumerate(dp.levels)}, None, None
    )
    if dp.stabilization_index is None:
        return report
    report.hypothesis_q = P**dp.stabilization_index
    report.hypothesis_holds = is_spectral_eigenvalue(t, report.hypothesis_q).is_eigenvalue
    if report.hypothesis_holds:
        for exps in _exponent_vectors(len(primes), exponent_budget):
            q = math.prod(p**e for p, e in zip(primes, exps))
            report.verified[q] = is_spectral_eigenvalue(t, q).is_eigenvalue
    return report


def scaled_levels_contain(t: HadamardTriple, q: int, n: int) -> bool:
    """q·Λ_n(N, B, L) ⊆ Λ_n(N, B, qL): the inclusion behind the eigenvalue criterion."""
    base = canonical_levels(t, n)
    big = canonical_levels(scaled_triple(t, q), n)
    return all({q * x for x in base[k]} <= set(big[k]) for k in range(n + 1))
