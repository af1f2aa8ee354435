"""Rational points of self-similar sets K(q, A) = {Σ_{k>=1} a_k q^-k : a_k ∈ A}.

Everything runs on a finite state graph.  After rescaling by the common
denominator w of the digits, the digits are integers and the inverse branch
y -> q*y - a never grows the denominator of y.  So all points reachable from
n/u stay on the grid Z/u inside the hull [min A, max A]/(q-1).  A point lies in K
iff it has an infinite path that never leaves the hull.  That is the greatest
fixed point of "has a surviving successor", computed by repeated pruning.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable

import numpy as np

from .errors import CoprimalityError, DomainError, NotMemberError, ResourceError
from .foundation import as_rational

MAX_GRID = 20_000_000
_INT64_SAFE = 2**62


@dataclass(frozen=True)
class DigitSystem:
    q: int
    A: tuple[Fraction, ...]

    @classmethod
    def create(cls, q: int, A: Iterable) -> DigitSystem:
        digits = tuple(sorted({as_rational(a) for a in A}))
        if int(q) < 2:
            raise DomainError(f"base must be >= 2, got {q}")
        if not digits:
            raise DomainError("digit set must be nonempty")
        return cls(int(q), digits)

    @property
    def w(self) -> int:
        return reduce(math.lcm, (a.denominator for a in self.A), 1)

    @property
    def int_digits(self) -> tuple[int, ...]:
        w = self.w
        return tuple(int(a * w) for a in self.A)

    @property
    def hull(self) -> tuple[Fraction, Fraction]:
        return self.A[0] / (self.q - 1), self.A[-1] / (self.q - 1)

    def scaled(self, factor) -> DigitSystem:
        return DigitSystem.create(self.q, (factor * a for a in self.A))

    def __str__(self):
        return f"K({self.q}, {{{', '.join(map(str, self.A))}}})"


@dataclass(frozen=True)
class CodingCertificate:
    """Eventually periodic coding preperiod · period^∞ of a point."""

    preperiod: tuple[Fraction, ...]
    period: tuple[Fraction, ...]

    def value(self, q: int) -> Fraction:
        head = sum((a / Fraction(q) ** (k + 1) for k, a in enumerate(self.preperiod)), Fraction(0))
        m = len(self.period)
        cyc = sum((a / Fraction(q) ** (k + 1) for k, a in enumerate(self.period)), Fraction(0))
        tail = cyc * Fraction(q**m, q**m - 1)
        return head + tail / Fraction(q) ** len(self.preperiod)

    def as_dict(self) -> dict:
        return {
            "preperiod": [str(a) for a in self.preperiod],
            "period": [str(a) for a in self.period],
        }


@dataclass(frozen=True)
class Membership:
    is_member: bool
    certificate: CodingCertificate | None = None

    def __bool__(self):
        return self.is_member


# ------------------------------------------------------------ grid engine


def _grid_bounds(digits: tuple[int, ...], q: int, u: int) -> tuple[int, int]:
    lo = -((-digits[0] * u) // (q - 1))  # ceil
    hi = (digits[-1] * u) // (q - 1)
    return lo, hi


def _prune_numpy(q: int, digits: tuple[int, ...], u: int, lo: int, hi: int) -> np.ndarray:
    size = hi - lo + 1
    n = np.arange(lo, hi + 1, dtype=np.int64)
    targets = []
    for a in digits:
        idx = q * n - (a * u + lo)
        ok = (idx >= 0) & (idx < size)
        targets.append((np.where(ok, idx, 0), ok))
    alive = np.ones(size, dtype=bool)
    while True:
        nxt = np.zeros(size, dtype=bool)
        for idx, ok in targets:
            nxt |= ok & alive[idx]
        nxt &= alive
        if np.array_equal(nxt, alive):
            return alive
        alive = nxt


def _prune_python(q: int, digits: tuple[int, ...], u: int, lo: int, hi: int) -> list[bool]:
    # worklist version for grids whose numerators overflow int64
    size = hi - lo + 1
    preds: list[list[int]] = [[] for _ in range(size)]
    outdeg = [0] * size
    for i in range(size):
        n = lo + i
        for a in digits:
            j = q * n - a * u - lo
            if 0 <= j < size:
                outdeg[i] += 1
                preds[j].append(i)
    alive = [True] * size
    queue = deque(i for i in range(size) if outdeg[i] == 0)
    while queue:
        i = queue.popleft()
        if not alive[i]:
            continue
        alive[i] = False
        for k in preds[i]:
            outdeg[k] -= 1
            if outdeg[k] == 0 and alive[k]:
                queue.append(k)
    return alive


@lru_cache(maxsize=4096)
def _alive_grid(q: int, digits: tuple[int, ...], u: int) -> tuple[int, tuple[int, ...]]:
    """Numerators n (over u) of the surviving grid points, for integer digits."""
    lo, hi = _grid_bounds(digits, q, u)
    if hi < lo:
        return lo, ()
    size = hi - lo + 1
    if size > MAX_GRID:
        raise ResourceError(f"state grid of {size} points exceeds the limit {MAX_GRID}")
    big = max(abs(lo), abs(hi)) * q + max(abs(a) for a in digits) * u
    if big < _INT64_SAFE:
        alive = _prune_numpy(q, digits, u, lo, hi)
        return lo, tuple((np.flatnonzero(alive) + lo).tolist())
    alive = _prune_python(q, digits, u, lo, hi)
    return lo, tuple(lo + i for i, ok in enumerate(alive) if ok)


def lattice_points(sys: DigitSystem, u: int) -> list[Fraction]:
    """K(q, A) ∩ Z/u, sorted."""
    if u < 1:
        raise DomainError(f"lattice denominator must be >= 1, got {u}")
    w = sys.w
    _, alive = _alive_grid(sys.q, sys.int_digits, int(u))
    # rescaled point n/u is x = n/(w u); x ∈ Z/u iff w | n
    return [Fraction(n // w, u) for n in alive if n % w == 0]


# --------------------------------------------------------- single queries


def _reachable(sys: DigitSystem, x: Fraction):
    """Reachable hull states from x and their surviving subgraph.

    Returns (start, u, succ, alive) with states as numerators over u in the
    rescaled system and succ[n] = [(digit index, successor numerator), ...].
    """
    digits, q = sys.int_digits, sys.q
    y = x * sys.w
    u = y.denominator
    lo, hi = _grid_bounds(digits, q, u)
    start = y.numerator
    succ: dict[int, list[tuple[int, int]]] = {}
    if not (lo <= start <= hi):
        return start, u, succ, set()
    queue = deque([start])
    succ[start] = []
    while queue:
        n = queue.popleft()
        for i, a in enumerate(digits):
            m = q * n - a * u
            if lo <= m <= hi:
                succ[n].append((i, m))
                if m not in succ:
                    succ[m] = []
                    queue.append(m)
    preds: dict[int, list[int]] = {n: [] for n in succ}
    outdeg = {n: len(e) for n, e in succ.items()}
    for n, edges in succ.items():
        for _, m in edges:
            preds[m].append(n)
    alive = set(succ)
    queue = deque(n for n, k in outdeg.items() if k == 0)
    while queue:
        n = queue.popleft()
        if n not in alive:
            continue
        alive.discard(n)
        for k in preds[n]:
            outdeg[k] -= 1
            if outdeg[k] == 0:
                queue.append(k)
    return start, u, succ, alive


def _bfs_paths(start: int, adj: dict[int, list[tuple[int, int]]]):
    parent: dict[int, tuple[int, int] | None] = {start: None}
    order = deque([start])
    while order:
        n = order.popleft()
        for i, m in adj[n]:
            if m not in parent:
                parent[m] = (n, i)
                order.append(m)
    return parent


def _word(parent, node) -> list[int]:
    out = []
    while parent[node] is not None:
        node, i = parent[node]
        out.append(i)
    return out[::-1]


def _certificate(sys: DigitSystem, start: int, succ, alive) -> CodingCertificate:
    adj = {n: sorted((i, m) for i, m in succ[n] if m in alive) for n in alive}
    from_start = _bfs_paths(start, adj)
    best = None
    for y in from_start:
        # shortest cycle through y: BFS from y's successors back to y
        cyc = None
        for i, m in adj[y]:
            if m == y:
                cyc = [i]
                break
        if cyc is None:
            parent = {}
            order = deque()
            for i, m in adj[y]:
                if m not in parent:
                    parent[m] = (y, i)
                    order.append(m)
            while order and y not in parent:
                n = order.popleft()
                for i, m in adj[n]:
                    if m not in parent:
                        parent[m] = (n, i)
                        order.append(m)
            if y not in parent:
                continue
            # rebuild y -> ... -> y
            word, node = [], y
            while True:
                prev, i = parent[node]
                word.append(i)
                node = prev
                if node == y:
                    break
            cyc = word[::-1]
        pre = _word(from_start, y)
        key = (len(cyc), len(pre), pre, cyc)
        if best is None or key < best:
            best = key
    assert best is not None, "alive start state must reach a cycle"
    _, _, pre, cyc = best
    return CodingCertificate(tuple(sys.A[i] for i in pre), tuple(sys.A[i] for i in cyc))


def member(sys: DigitSystem, x, certify: bool = True) -> Membership:
    """Decide x ∈ K(q, A); members come with a coding certificate."""
    x = as_rational(x)
    start, _, succ, alive = _reachable(sys, x)
    if start not in alive:
        return Membership(False)
    cert = _certificate(sys, start, succ, alive) if certify else None
    return Membership(True, cert)


def coding(sys: DigitSystem, x) -> CodingCertificate:
    """Eventually periodic coding of x with the shortest period reachable from x.

    Ties break on shorter preperiod, then on the digit words in digit order.
    The period never exceeds the number of surviving states.
    """
    x = as_rational(x)
    start, _, succ, alive = _reachable(sys, x)
    if start not in alive:
        raise NotMemberError(f"{x} is not in {sys}; it has no coding")
    return _certificate(sys, start, succ, alive)


def alive_state_count(sys: DigitSystem, x) -> int:
    _, _, _, alive = _reachable(sys, as_rational(x))
    return len(alive)


# ------------------------------------------------------------- D_p slices


def _p_level(den: int, p: int) -> int:
    k = 0
    while den % p == 0:
        den //= p
        k += 1
    return k


@dataclass(frozen=True)
class DpIntersection:
    p: int
    M: int
    levels: tuple[tuple[Fraction, ...], ...]
    stabilization_index: int | None  # empirical, valid only up to M

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "M": self.M,
            "levels": {str(m): [str(x) for x in pts] for m, pts in enumerate(self.levels)},
            "stabilization_index": self.stabilization_index,
            "stabilization_is_empirical": True,
        }


def dp_intersection(sys: DigitSystem, p: int, M: int) -> DpIntersection:
    """Split K ∩ (Z/p^M)(1/w) by exact p-power level of the denominator.

    The stabilization index is the last nonempty level.  It is None when
    level M itself is still populated, because then the scan shows no
    stabilization at all.
    """
    if p < 2 or M < 0:
        raise DomainError("dp_intersection needs p >= 2 and M >= 0")
    if math.gcd(p, sys.q) != 1:
        raise CoprimalityError(
            f"D_p slices need gcd(p, q) = 1 so the shift preserves p-adic level; "
            f"gcd({p}, {sys.q}) = {math.gcd(p, sys.q)}"
        )
    pts = lattice_points(sys, p**M * sys.w)
    levels: list[list[Fraction]] = [[] for _ in range(M + 1)]
    for x in pts:
        m = _p_level(x.denominator, p)
        if m <= M:
            levels[m].append(x)
    nonempty = [m for m, lv in enumerate(levels) if lv]
    last = nonempty[-1] if nonempty else 0
    index = None if (last == M and M > 0) else last
    return DpIntersection(p, M, tuple(tuple(lv) for lv in levels), index)


def similarity_dimension(sys: DigitSystem) -> float:
    return math.log(len(sys.A)) / math.log(sys.q)
