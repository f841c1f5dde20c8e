from fractions import Fraction
from math import isqrt

import pytest
import sympy

from padic_k2.arith import (
    bernoulli_numbers,
    bernoulli_polynomial,
    discrete_log,
    euler_phi,
    factorize,
    fundamental_unit,
    is_prime,
    is_squarefree,
    jacobi,
    kronecker,
    multiplicative_order,
    padic_valuation,
    primitive_root,
    require_squarefree,
    sqrt_cf_period,
    vp_or_none,
)
from padic_k2.errors import NotCoprime, NotPrime, NotSquarefree, ZeroValuation


def test_is_prime_matches_sympy():
    assert [n for n in range(2000) if is_prime(n)] == list(sympy.primerange(0, 2000))
    for n in (2 ** 61 - 1, 2 ** 64 - 59, 3215031751, 341550071728321):
        assert is_prime(n) == sympy.isprime(n)


def test_factorize_matches_sympy():
    for n in list(range(1, 3000)) + [2 ** 40 - 1, 990015, 600851475143]:
        assert factorize(n) == sympy.factorint(n)
    with pytest.raises(ValueError):
        factorize(0)


def test_squarefree():
    assert is_squarefree(30) and not is_squarefree(12)
    with pytest.raises(NotSquarefree):
        require_squarefree(4)
    with pytest.raises(NotSquarefree):
        require_squarefree(1)


def test_jacobi_against_euler_criterion():
    for ell in sympy.primerange(3, 200):
        for a in range(-50, 50):
            euler = pow(a % ell, (ell - 1) // 2, ell)
            want = 0 if a % ell == 0 else (1 if euler == 1 else -1)
            assert jacobi(a, ell) == want


def test_kronecker_matches_sympy_and_bigints():
    for a in range(-40, 41):
        for n in range(1, 80, 2):
            assert kronecker(a, n) == sympy.jacobi_symbol(a, n)
    # (a/2) by the mod 8 rule, negative n by the sign rule
    assert [kronecker(a, 2) for a in (1, 3, 5, 7, 4)] == [1, -1, -1, 1, 0]
    assert kronecker(-1, -1) == -1 and kronecker(5, -1) == 1
    big = 2 ** 127 - 1
    assert kronecker(3, big) == sympy.jacobi_symbol(3, big)


def test_padic_valuation():
    assert padic_valuation(48, 2) == 4
    assert padic_valuation(Fraction(9, 8), 2) == -3
    assert padic_valuation(-27, 3) == 3
    assert vp_or_none(0, 5) is None
    with pytest.raises(ZeroValuation):
        padic_valuation(0, 2)


def test_orders_and_roots():
    for ell in sympy.primerange(3, 400):
        g = primitive_root(ell)
        assert g == sympy.primitive_root(ell)
        assert multiplicative_order(g, ell) == ell - 1
        for a in (2, 5, ell - 1):
            if a % ell == 0:
                continue
            k = discrete_log(a, g, ell)
            assert pow(g, k, ell) == a % ell
    assert euler_phi(9) == 6
    with pytest.raises(NotPrime):
        primitive_root(15)
    with pytest.raises(NotCoprime):
        multiplicative_order(6, 9)


def test_bernoulli_against_sympy():
    B = bernoulli_numbers(30)
    for n in range(31):
        ref = sympy.bernoulli(n)
        if n == 1:
            assert B[1] == Fraction(-1, 2)
        else:
            assert B[n] == Fraction(int(ref.p), int(ref.q))
    x = sympy.Symbol("x")
    for m in range(1, 9):
        ref = sympy.Poly(sympy.bernoulli(m, x), x).all_coeffs()[::-1]
        ours = bernoulli_polynomial(m)
        # sympy uses B_1 = +1/2; only the x^{m-1} coefficient depends on it
        for j, (c, r) in enumerate(zip(ours, ref)):
            r = Fraction(int(sympy.Rational(r).p), int(sympy.Rational(r).q))
            assert c == (r if j != m - 1 else -abs(r))


def _pell_brute(m, ymax=10 ** 6):
    for y in range(1, ymax):
        for n in (-1, 1):
            x = isqrt(m * y * y + n)
            if x * x == m * y * y + n:
                return x, y, n
    return None


def test_fundamental_unit_against_search():
    for m in [2, 3, 5, 6, 7, 10, 13, 14, 15, 19, 21, 22, 23, 29, 31, 46, 58, 61, 94]:
        u = fundamental_unit(m)
        ref = _pell_brute(m)
        assert ref is not None
        assert (u.a, u.b, u.norm) == ref


def test_fundamental_unit_large():
    u = fundamental_unit(7215)
    assert u.a ** 2 - 7215 * u.b ** 2 == 1
    u = fundamental_unit(990015)
    assert u.norm == 1 and u.b % 2 == 1
    assert sqrt_cf_period(7) == [2, 1, 1, 1, 4]
    with pytest.raises(ValueError):
        sqrt_cf_period(49)
