"""Prime statistics engine.

Sieving, factorization, multiplicative orders, the order sets
A_a(δ) = {p : p ∤ a, Ord_a(p) > p^δ}, largest prime factors of shifted
primes, progression counts and the Dickman function.

All comparisons of the form ``m > n**delta`` are exact: a float log test is
trusted only outside a narrow band, and ties fall back to integer powers of
the rational value of ``delta``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import numpy as np

from .errors import DomainError, ResourceError

TRIAL_LIMIT = 10**6
DEFAULT_SEED = 0x5EED
DICKMAN_STEPS = 10_000


# ---------------------------------------------------------------- sieving


def sieve_primes(x: int) -> list[int]:
    """Sorted list of primes <= x."""
    return _prime_array(int(x)).tolist()


@lru_cache(maxsize=8)
def _prime_array(x: int) -> np.ndarray:
    if x < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(x + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(x) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    out = np.flatnonzero(flags).astype(np.int64)
    out.flags.writeable = False
    return out


@lru_cache(maxsize=4)
def _spf_table(x: int) -> np.ndarray:
    """Smallest prime factor for every n <= x (0 and 1 map to themselves)."""
    spf = np.arange(x + 1, dtype=np.int64)
    for p in range(2, math.isqrt(x) + 1):
        if spf[p] == p:
            block = spf[p * p :: p]
            mask = block == np.arange(p * p, x + 1, p)
            block[mask] = p
    spf.flags.writeable = False
    return spf


def _factor_with_spf(n: int, spf: np.ndarray) -> dict[int, int]:
    out: dict[int, int] = {}
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out[p] = e
    return out


# ---------------------------------------------------------- factorization

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24, probabilistic beyond."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int, rng: random.Random) -> int:
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int, seed: int = DEFAULT_SEED) -> dict[int, int]:
    """Prime factorization as {prime: exponent}, sorted by prime.

    Trial division handles everything below 10^6; larger cofactors go to a
    seeded Brent-Pollard rho so results never depend on global RNG state.
    """
    n = int(n)
    if n < 1:
        raise DomainError("factorize needs n >= 1")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n and p < 1000:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1 and n < TRIAL_LIMIT:
        # remaining cofactor below 10^6 with no factor < 1000 is prime
        out[n] = out.get(n, 0) + 1
        n = 1
    if n > 1:
        rng = random.Random(seed)
        stack = [n]
        while stack:
            m = stack.pop()
            if m == 1:
                continue
            if is_prime(m):
                out[m] = out.get(m, 0) + 1
                continue
            f = _pollard_brent(m, rng)
            stack.extend((f, m // f))
    return dict(sorted(out.items()))


def largest_prime_factor(n: int) -> int:
    """P^+(n), with P^+(1) = 1."""
    if n < 1:
        raise DomainError("largest_prime_factor needs n >= 1")
    if n == 1:
        return 1
    return max(factorize(n))


def euler_phi(n: int) -> int:
    if n < 1:
        raise DomainError("euler_phi needs n >= 1")
    out = n
    for p in factorize(n):
        out = out // p * (p - 1)
    return out


# ----------------------------------------------------------------- orders


def _order_from_factors(a: int, p: int, pm1_factors: dict[int, int]) -> int:
    order = p - 1
    for r in pm1_factors:
        while order % r == 0 and pow(a, order // r, p) == 1:
            order //= r
    return order


def multiplicative_order(a: int, p: int) -> int:
    """Ord_a(p): least n >= 1 with a^n = 1 (mod p), for prime p not dividing a."""
    if a % p == 0:
        raise DomainError(f"Ord_a(p) undefined: p={p} divides a={a}")
    if p == 2:
        return 1
    return _order_from_factors(a % p, p, factorize(p - 1))


def _as_fraction(delta) -> Fraction:
    if isinstance(delta, Fraction):
        return delta
    if isinstance(delta, float):
        # decimal literal semantics: 0.677 means 677/1000
        return Fraction(repr(delta))
    return Fraction(delta)


def exceeds_power(m: int, n: int, delta) -> bool:
    """Exact test of m > n**delta for positive integers m, n and real delta >= 0."""
    if m <= 0:
        return False
    lhs, rhs = math.log(m), float(delta) * math.log(n)
    if abs(lhs - rhs) > 1e-9 * max(1.0, abs(rhs)):
        return lhs > rhs
    frac = _as_fraction(delta)
    return m**frac.denominator > n**frac.numerator


def in_A(a: int, delta, p: int) -> bool:
    """Membership of the prime p in A_a(delta)."""
    return exceeds_power(multiplicative_order(a, p), p, delta)


def artin_decompose(N: int) -> tuple[int, int]:
    """Write N = a^(2^k) with a not a perfect square."""
    if N < 2:
        raise DomainError("artin_decompose needs N >= 2")
    a, k = N, 0
    while True:
        r = math.isqrt(a)
        if r * r != a:
            return a, k
        a, k = r, k + 1


# ---------------------------------------------------------------- records


@dataclass(frozen=True)
class PrimeRecord:
    p: int
    factorization_pm1: dict[int, int]
    ord: dict[int, int] = field(default_factory=dict)
    pplus: int = 1


@dataclass(frozen=True)
class DensityReport:
    x: int
    numerator: int
    denominator: int
    label: str = ""

    @property
    def ratio(self) -> float:
        return self.numerator / self.denominator if self.denominator else 0.0

    def as_dict(self) -> dict:
        return {
            "x": self.x,
            "numerator": self.numerator,
            "denominator": self.denominator,
            "ratio": self.ratio,
            "label": self.label,
        }


def prime_records(x: int, bases: Iterable[int] = ()) -> list[PrimeRecord]:
    """PrimeRecord for every prime p <= x; ord only for bases not divisible by p."""
    bases = tuple(bases)
    spf = _spf_table(max(int(x), 2))
    out = []
    for p in _prime_array(int(x)).tolist():
        fac = _factor_with_spf(p - 1, spf)
        ords = {}
        for a in bases:
            if a % p:
                ords[a] = 1 if p == 2 else _order_from_factors(a % p, p, fac)
        out.append(PrimeRecord(p, fac, ords, max(fac) if fac else 1))
    return out


@lru_cache(maxsize=4)
def _pplus_array(x: int) -> tuple[np.ndarray, np.ndarray]:
    primes = _prime_array(x)
    spf = _spf_table(max(x, 2))
    pplus = np.ones(len(primes), dtype=np.int64)
    for i, p in enumerate(primes.tolist()):
        n = p - 1
        big = 1
        while n > 1:
            f = int(spf[n])
            big = f
            while n % f == 0:
                n //= f
        pplus[i] = big
    return primes, pplus


def order_density(a: int, delta, x: int) -> DensityReport:
    """#(A_a(delta) ∩ [0, x]) / π(x)."""
    if x < 2:
        raise DomainError("order_density needs x >= 2")
    recs = prime_records(x, (a,))
    hits = sum(1 for r in recs if a in r.ord and exceeds_power(r.ord[a], r.p, delta))
    return DensityReport(x, hits, len(recs), f"A_{a}({delta})")


def pplus_density(x: int, delta) -> DensityReport:
    """#{p <= x : P^+(p-1) > x^delta} / π(x)."""
    if x < 3:
        raise DomainError("pplus_density needs x >= 3")
    primes, pplus = _pplus_array(int(x))
    # float screen with exact tie-break for values near the threshold
    thresh = float(x) ** float(delta)
    near = np.abs(pplus - thresh) <= 1e-6 * thresh + 1
    hits = int(np.count_nonzero((pplus > thresh) & ~near))
    hits += sum(1 for v in pplus[near].tolist() if exceeds_power(v, x, delta))
    return DensityReport(int(x), hits, len(primes), f"P+(p-1)>x^{delta}")


def goldfeld_exceptions(a: int, x: int) -> DensityReport:
    """Share of p <= x with a prime q > sqrt(x), q | p-1, q not dividing Ord_a(p).

    Since p - 1 < x, at most one prime above sqrt(x) divides p - 1, namely P^+(p-1).
    """
    if x < 3:
        raise DomainError("goldfeld_exceptions needs x >= 3")
    recs = prime_records(x, (a,))
    bad = 0
    for r in recs:
        q = r.pplus
        if a in r.ord and q * q > x and r.ord[a] % q:
            bad += 1
    return DensityReport(x, bad, len(recs), f"goldfeld_exceptions(a={a})")


def primitive_root_primes(a: int, x: int) -> list[int]:
    """Primes p <= x with p ∤ a and Ord_a(p) = p - 1."""
    return [r.p for r in prime_records(x, (a,)) if r.ord.get(a) == r.p - 1]


# ------------------------------------------------------------ progressions


def prime_count_progression(x: int, q: int, a: int) -> int:
    """π(x; q, a)."""
    if q < 1 or math.gcd(a, q) != 1:
        raise DomainError(f"progression needs gcd(a, q) = 1, got a={a}, q={q}")
    primes = _prime_array(max(int(x), 0))
    return int(np.count_nonzero(primes % q == a % q))


def _max_q(x: int, theta) -> int:
    q = int(math.floor(float(x) ** float(theta)))
    while q >= 1 and exceeds_power(q, x, theta):
        q -= 1
    while not exceeds_power(q + 1, x, theta):
        q += 1
    return max(q, 1)


def eh_discrepancy(x: int, theta, budget: int = 2 * 10**8) -> float:
    """Σ_{q <= x^θ} max_{y <= x} max_{gcd(a,q)=1} |π(y;q,a) - π(y)/φ(q)|.

    Both counting functions only move at primes, so y runs over the primes
    up to x (plus y < 2, where everything is zero).
    """
    if x < 3:
        raise DomainError("eh_discrepancy needs x >= 3")
    primes = _prime_array(int(x))
    Q = _max_q(int(x), theta)
    if Q * len(primes) > budget:
        raise ResourceError(f"eh_discrepancy: {Q} moduli x {len(primes)} primes exceeds budget {budget}")
    pi_y = np.arange(1, len(primes) + 1, dtype=np.float64)
    total = 0.0
    for q in range(1, Q + 1):
        phi = euler_phi(q)
        res = primes % q
        worst = 0.0
        for a in range(q):
            if math.gcd(a, q) != 1:
                continue
            counts = np.cumsum(res == a)
            if len(counts):
                worst = max(worst, float(np.max(np.abs(counts - pi_y / phi))))
        total += worst
    return total


# ---------------------------------------------------------------- Dickman


@lru_cache(maxsize=8)
def _dickman_table(steps: int, units: int) -> np.ndarray:
    h = 1.0 / steps
    rho = np.ones(units * steps + 1)
    t = np.arange(units * steps + 1) * h
    for k in range(1, units):
        lo, hi = k * steps, (k + 1) * steps
        g = rho[lo - steps : hi - steps + 1] / t[lo : hi + 1]
        trap = 0.5 * h * (g[:-1] + g[1:])
        rho[lo + 1 : hi + 1] = rho[lo] - np.cumsum(trap)
    rho.flags.writeable = False
    return rho


def dickman(u: float, steps: int = DICKMAN_STEPS) -> float:
    """Dickman's ρ(u) by segment-wise trapezoidal integration of the delay equation.

    ``steps`` is the number of grid points per unit interval; the delayed
    value ρ(t-1) lands exactly on the previous segment's grid.  Two grids
    (h and h/2) are combined by Richardson extrapolation: plain trapezoid
    leaves an O(h^2) absolute error that swamps ρ(u) beyond u ~ 8.
    """
    if u < 0:
        raise DomainError("dickman needs u >= 0")
    if u <= 1:
        return 1.0
    steps = int(steps)
    units = int(math.floor(u)) + 1
    coarse = _dickman_table(steps, units)
    fine = _dickman_table(2 * steps, units)[::2]
    table = (4.0 * fine - coarse) / 3.0
    pos = u * steps
    j = min(int(math.floor(pos)), len(table) - 2)
    frac = pos - j
    return float(table[j] * (1 - frac) + table[j + 1] * frac)
