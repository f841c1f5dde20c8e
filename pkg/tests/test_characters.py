from math import gcd

import numpy as np
import pytest
import sympy

from padic_k2.arith import is_squarefree, kronecker
from padic_k2.characters import (
    RAMIFIED,
    candidate_cubic_characters,
    cubic_discriminant,
    cubic_field_instances,
    cubic_has_root,
    evaluate,
    format_poly,
    order_p_characters,
    quadratic_character,
    quadratic_discriminant,
)
from padic_k2.cyclo import CycloElt
from padic_k2.errors import BadCongruence, NotPrime, NotSquarefree


def _value(chi, a):
    k = chi.exponent(a)
    return None if k is None else k


@pytest.mark.parametrize("m", [m for m in range(2, 400) if is_squarefree(m)])
def test_quadratic_character_is_kronecker(m):
    chi = quadratic_character(m)
    D = quadratic_discriminant(m)
    assert chi.conductor == D and chi.is_primitive() and chi.is_even
    for a in range(D):
        k = kronecker(D, a)
        assert _value(chi, a) == (None if k == 0 else (0 if k == 1 else 1))


def test_quadratic_rejects_non_squarefree():
    with pytest.raises(NotSquarefree):
        quadratic_character(12)


def test_evaluate():
    chi = quadratic_character(5)
    assert evaluate(chi, 5) is RAMIFIED
    assert evaluate(chi, 2) == CycloElt.constant(2, -1)


@pytest.mark.parametrize("ell,p", [(7, 3), (11, 5), (29, 7), (101, 5), (23, 11), (53, 13)])
def test_order_p_characters(ell, p):
    chars = order_p_characters(ell, p)
    assert len(chars) == p - 1
    units = list(range(1, ell))
    for chi in chars:
        assert chi.is_primitive() and chi.is_even
        # multiplicative, and of exact order p
        for a in units[:30]:
            for b in units[:30]:
                assert chi.exponent(a * b) == (chi.exponent(a) + chi.exponent(b)) % p
        assert len({chi.exponent(a) for a in units}) == p
    # distinct characters
    assert len({tuple(c.table.tolist()) for c in chars}) == p - 1
    with pytest.raises(BadCongruence):
        order_p_characters(13, 5)
    with pytest.raises(NotPrime):
        order_p_characters(15, 7)


def _cyclic_cubic_conductors(bound):
    """Brute force: f = product of distinct primes 1 mod 3, times 1 or 9."""
    out = []
    for f in range(7, bound + 1):
        fac = sympy.factorint(f)
        h = fac.pop(3, 0)
        if h in (0, 2) and fac and all(e == 1 and ell % 3 == 1 for ell, e in fac.items()):
            out.append(f)
        elif f == 9:
            out.append(f)
    return out


def test_cubic_conductor_list():
    ours = [f for f in range(7, 400) if candidate_cubic_characters(f)]
    assert ours == _cyclic_cubic_conductors(399)


def _roots_mod(poly, r):
    _, a, b, c = poly
    x = np.arange(r, dtype=np.int64)
    return int(np.count_nonzero((((x + a) * x % r + b) * x + c) % r == 0))


@pytest.mark.parametrize("f", _cyclic_cubic_conductors(200))
def test_cubic_instances_against_splitting_oracle(f):
    insts = cubic_field_instances(f)
    k = len([q for q in sympy.factorint(f) if q != 3]) + (1 if f % 9 == 0 else 0)
    assert len(insts) == 2 ** (k - 1)
    for inst in insts:
        disc = cubic_discriminant(inst.poly)
        assert disc > 0 and sympy.sqrt(disc).is_integer and disc % (f * f) == 0
        chi, chi2 = inst.characters
        assert chi.order == 3 and chi.is_primitive() and chi.conductor == f
        assert chi2.kernel() == chi.kernel()
        # kernel is an index-3 subgroup of (Z/f)^*
        ker = chi.kernel()
        units = [a for a in range(1, f) if gcd(a, f) == 1]
        assert 3 * len(ker) == len(units)
        assert all(a * b % f in ker for a in list(ker)[:20] for b in list(ker)[:20])
        # a prime r not dividing 3 f disc splits completely iff chi(r) = 1
        for r in sympy.primerange(5, 1500):
            if (3 * f * disc) % r == 0:
                continue
            n = _roots_mod(inst.poly, r)
            assert n in (0, 3)
            assert (n == 3) == (chi.exponent(r) == 0)
            assert cubic_has_root(inst.poly, r) == (n == 3)


def test_cubic_polynomial_strings():
    assert [i.poly_string() for i in cubic_field_instances(7)] == ["x^3+x^2-2*x-1"]
    assert [i.poly_string() for i in cubic_field_instances(91)] == ["x^3+x^2-30*x-64", "x^3+x^2-30*x+27"]
    assert [i.poly_string() for i in cubic_field_instances(63)] == ["x^3-21*x-35", "x^3-21*x+28"]
    assert cubic_field_instances(10) == []
    assert format_poly((1, 0, -1, 0)) == "x^3-x"
