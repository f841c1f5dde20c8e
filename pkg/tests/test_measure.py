import random
from math import gcd

import pytest

from padic_k2.arith import is_squarefree, padic_valuation
from padic_k2.bernoulli import generalized_bernoulli
from padic_k2.characters import candidate_cubic_characters, order_p_characters, quadratic_character
from padic_k2.cyclo import rational_norm
from padic_k2.errors import BelowPrecision, NotCoprime, PrecisionOverflow, Unstable
from padic_k2 import measure
from padic_k2.measure import (
    MeasureParams,
    choose_c,
    default_schedule,
    l_value_valuation,
    lambda_twist,
    norm_compatibility_check,
    twisted_sum,
)


def test_lambda_twist_definition():
    f_n, c = 4 * 2 ** 5 * 15, 13
    for a in range(1, 200):
        if gcd(a, f_n) != 1:
            continue
        lam = lambda_twist(a, c, f_n)
        ap = (a + lam * f_n) // c
        assert (a + lam * f_n) % c == 0 and 1 <= ap <= f_n
        assert 0 <= lam < c
        # the vectorized form used inside the sum
        assert lam == (-a * pow(f_n, -1, c)) % c
    with pytest.raises(NotCoprime):
        lambda_twist(3, 6, 30)


def test_choose_c_matches_table_twists():
    # twists printed next to each row of the quadratic p = 2 table
    want = {7: 5, 14: 3, 15: 13, 21: 11, 31: 7, 41: 3, 1005: 29, 1015: 17}
    for m, c in want.items():
        assert choose_c(quadratic_character(m), 2) == c


def test_params_validation():
    chi = quadratic_character(5)
    with pytest.raises(NotCoprime):
        MeasureParams.for_character(chi, 2, 4, 5)
    with pytest.raises(ValueError):
        MeasureParams(2, 4, 5, 4, 999, 3)
    big = MeasureParams.for_character(order_p_characters(101, 5)[0], 5, 14, 3)
    with pytest.raises(PrecisionOverflow):
        twisted_sum(order_p_characters(101, 5)[0], big, 1)


def _unit_index(f_n, rng):
    while True:
        a = rng.randrange(1, f_n // 2)
        if gcd(a, f_n) == 1:
            return a


def _random_fields(count, seed=2024):
    rng = random.Random(seed)
    out = []
    ms = [m for m in range(5, 600) if is_squarefree(m)]
    fs = [f for f in range(7, 400) if candidate_cubic_characters(f) and f != 9]
    while len(out) < count:
        kind = rng.choice(["q2", "q3", "c3", "c2", "d5"])
        if kind in ("q2", "q3"):
            out.append((quadratic_character(rng.choice(ms)), 2 if kind == "q2" else 3))
        elif kind in ("c3", "c2"):
            out.append((candidate_cubic_characters(rng.choice(fs))[0][0], 3 if kind == "c3" else 2))
        else:
            ell = rng.choice([11, 31, 41, 61, 71, 101, 131, 151, 181, 191])
            out.append((order_p_characters(ell, 5)[0], 5))
    return out


FIELDS = _random_fields(50)


def _level(chi, p):
    n0, _, _ = default_schedule(chi, p)
    return max(n0 - 2, 3) if p == 2 else max(n0 - 1, 2)


@pytest.mark.parametrize("chi,p", FIELDS, ids=lambda x: getattr(x, "label", str(x)))
def test_level_compatibility_and_mutation(chi, p):
    n = _level(chi, p)
    c = choose_c(chi, p)
    assert norm_compatibility_check(chi, p, c, n)
    hi = MeasureParams.for_character(chi, p, n + 1, c)
    rng = random.Random(chi.conductor)
    a = _unit_index(hi.f_n, rng)
    while chi.exponent(a) is None or a % p == 0:
        a = _unit_index(hi.f_n, rng)
    assert not norm_compatibility_check(chi, p, c, n, _perturb=a)


def _other_twist(chi, p, c0):
    c = c0 + 1
    while gcd(c, 2 * p * chi.conductor) != 1 or chi.exponent(c) in (0, None):
        c += 1
    return c


@pytest.mark.parametrize("chi,p", FIELDS[::2], ids=lambda x: getattr(x, "label", str(x)))
def test_twist_independence(chi, p):
    c0 = choose_c(chi, p)
    c1 = _other_twist(chi, p, c0)
    for s in (1, -1):
        assert l_value_valuation(chi, p, s, c=c0).valuation == l_value_valuation(chi, p, s, c=c1).valuation


@pytest.mark.parametrize("m", [m for m in range(5, 150) if is_squarefree(m)])
def test_quadratic_minus_one_matches_bernoulli(m):
    chi = quadratic_character(m)
    B = generalized_bernoulli(chi, 2)[0]
    # 1/2 L_p(-1) = -(1 - chi(p) p) B_2 / 4
    assert l_value_valuation(chi, 2, -1).valuation == padic_valuation(B, 2) - 2
    assert l_value_valuation(chi, 3, -1).valuation == padic_valuation(B, 3)


@pytest.mark.parametrize("f", [f for f in range(7, 300) if candidate_cubic_characters(f) and f != 9])
def test_cubic_minus_one_matches_bernoulli(f):
    for chi, _ in candidate_cubic_characters(f):
        N = rational_norm(generalized_bernoulli(chi, 2), 3)
        assert l_value_valuation(chi, 3, -1).valuation == padic_valuation(N, 3)
        assert l_value_valuation(chi, 2, -1).valuation == padic_valuation(N, 2) - 4


@pytest.mark.parametrize("ell,p", [(11, 5), (101, 5), (151, 5), (251, 5), (401, 5), (29, 7), (127, 7), (23, 11)])
def test_raw_weights_match_bernoulli(ell, p):
    # weights a^{-s} without the Teichmuller factor give L(-1, chi) itself
    chi = order_p_characters(ell, p)[0]
    N = rational_norm(generalized_bernoulli(chi, 2), p)
    assert l_value_valuation(chi, p, -1, raw=True).valuation == padic_valuation(N, p)


def test_precision_errors(monkeypatch):
    chi = quadratic_character(1022)
    with pytest.raises(BelowPrecision):
        l_value_valuation(chi, 2, -1, schedule=(3, 5, 2))
    calls = iter(range(100))

    def flaky(chi, params, s, raw=False, _perturb=None):
        return None, next(calls) % 2, 0

    monkeypatch.setattr(measure, "reading", flaky)
    with pytest.raises(Unstable):
        l_value_valuation(quadratic_character(7), 2, 1, schedule=(8, 12, 2))


def test_uint64_wraparound_is_exact():
    chi = quadratic_character(15)
    p = MeasureParams.for_character(chi, 2, 6, 13)
    H = twisted_sum(chi, p, -1)
    # direct Python-int sum of the same half range
    Q = p.modulus
    total = 0
    finv = pow(p.f_n, -1, 13)
    for a in range(1, p.f_n // 2 + 1):
        k = chi.exponent(a)
        if a % 2 == 0 or k is None:
            continue
        lam = (-a * finv) % 13
        total += (1 if k == 0 else -1) * (lam - 6) * a
    assert H.coeffs[0] == total % Q
