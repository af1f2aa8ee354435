import random
from fractions import Fraction

import mpmath
import pytest

from hadspec.errors import DomainError, ResourceError
from hadspec.fourier import completeness_Q, gram_offdiag, level_parseval, mu_hat
from hadspec.hadamard import HadamardTriple
from hadspec.spectrum import canonical_levels

F = Fraction
T42 = HadamardTriple.create(4, [0, 2], [0, 1])
T6 = HadamardTriple.create(6, [0, 1], [0, 3])
T8 = HadamardTriple.create(8, [0, 2, 4, 6], [0, 1, 2, 3])
T9 = HadamardTriple.create(9, [0, 3, 6], [0, 1, 2])


def mp_product(t, xi, depth, dps=60):
    with mpmath.workdps(dps):
        acc = mpmath.mpc(1)
        for k in range(1, depth + 1):
            arg = F(xi) / t.N**k
            phases = [(b * arg) % 1 for b in t.B]
            m = sum(mpmath.expjpi(2 * mpmath.mpf(ph.numerator) / ph.denominator) for ph in phases) / len(t.B)
            acc *= m
        return abs(acc)


def test_mu_hat_examples():
    v = mu_hat(T42, 0, 7)
    assert v.value == 1 and not v.exact_zero
    assert mu_hat(T42, 1, 1).exact_zero
    v = mu_hat(T42, 4, 3)
    assert v.exact_zero and v.value == 0
    with pytest.raises(DomainError):
        mu_hat(T42, 1, 0)


def test_mu_hat_matches_high_precision():
    rng = random.Random(3)
    for t in (T42, T6, T8):
        for _ in range(40):
            xi = F(rng.randint(-300, 300), rng.randint(1, 12))
            v = mu_hat(t, xi, 12)
            assert abs(abs(v.value) - float(mp_product(t, xi, 12))) < 1e-12


def test_parseval_examples():
    assert abs(level_parseval(T42, 0.0, 1) - 1) < 1e-12
    assert abs(level_parseval(T42, 0.37, 4) - 1) < 1e-10
    assert abs(level_parseval(T6, -1.5, 3) - 1) < 1e-10
    with pytest.raises(ResourceError):
        level_parseval(T8, 0.1, 12, budget=1000)


@pytest.mark.parametrize("t", [T42, T6, T8, T9], ids=str)
def test_parseval_random_draws(t):
    rng = random.Random(11)
    for _ in range(100):
        t0 = rng.uniform(-50, 50)
        n = rng.randint(1, 6)
        assert abs(level_parseval(t, t0, n) - 1) < 1e-9


def test_gram_examples():
    pts = canonical_levels(T42, 2)[2]
    rep = gram_offdiag(T42, pts, 6)
    assert rep.max_abs == 0 and rep.all_exact_zero and len(rep.pairs) == 6
    rep = gram_offdiag(T42, [0, F(1, 2)], 40)
    assert rep.max_abs > 0.1 and not rep.all_exact_zero
    rep = gram_offdiag(T42, [0], 5)
    assert rep.max_abs == 0 and rep.pairs == {}


@pytest.mark.parametrize("t", [T42, T6, T8, T9], ids=str)
def test_exact_zero_soundness(t):
    pts = canonical_levels(t, 2)[2]
    depth = 8
    rep = gram_offdiag(t, pts, depth)
    for (a, b), v in rep.pairs.items():
        if v.exact_zero:
            assert mp_product(t, b - a, 2 * depth) < 1e-15


@pytest.mark.parametrize("t", [T42, T6, T8], ids=str)
def test_canonical_levels_are_orthogonal(t):
    assert gram_offdiag(t, canonical_levels(t, 3)[3], 10).all_exact_zero


def test_Q_examples():
    assert abs(completeness_Q(T42, [0], [0.0])[0] - 1) < 1e-9
    lam6 = canonical_levels(T42, 6)[6]
    q = completeness_Q(T42, lam6, [0.25])[0]
    assert 0.95 <= q <= 1.001
    q3 = completeness_Q(T42, [3 * x for x in lam6], [0.25])[0]
    assert q3 <= 0.9


def test_Q_monotone_in_levels():
    lv = canonical_levels(T42, 6)
    grid = [-0.7, 0.0, 0.25, 0.5, 1.3]
    prev = [0.0] * len(grid)
    for n in range(7):
        cur = completeness_Q(T42, lv[n], grid, depth=20)
        assert all(c >= p - 1e-12 for c, p in zip(cur, prev))
        assert all(c <= 1 + 1e-9 for c in cur)
        prev = cur


def test_Q_parallel_preserves_order():
    pts = canonical_levels(T6, 4)[4]
    grid = [0.1 * k for k in range(-10, 11)]
    assert completeness_Q(T6, pts, grid, workers=4) == completeness_Q(T6, pts, grid)


def test_Q_gap_trend_for_non_eigenvalue():
    # diagnostic only: the q = 3 family stays visibly short of 1
    lv = canonical_levels(T42, 6)
    vals = [completeness_Q(T42, [3 * x for x in lv[n]], [0.25])[0] for n in (4, 5, 6)]
    assert max(vals) < 0.95
