
import numpy as np
import pytest
import sympy

from padic_k2.arith import is_squarefree
from padic_k2.characters import cubic_field_instances, quadratic_character
from padic_k2.errors import ContradictionDetected, OutOfScope
from padic_k2.invariants import (
    EQUALITY,
    INEQUALITY,
    FieldDescriptor,
    analyze,
    birch_tate_exact,
    classify,
    continuity_congruence_check,
    genus_constant,
    higher_k_valuation,
    k2_valuation,
    torsion_valuation,
    w2,
)


def _genus_reference(m):
    """The constant as the scanning program computes it: omega, minus 1 if even, minus 1 unless m = -1 mod 8."""
    D = len(sympy.primefactors(m))
    if m % 2 == 0:
        D -= 1
    return D if m % 8 == 7 else D - 1


@pytest.mark.parametrize("m", [m for m in range(3, 300) if is_squarefree(m)])
def test_quadratic_genus_constant(m):
    assert genus_constant(FieldDescriptor.quadratic(m), 2).C == _genus_reference(m)


def test_cubic_genus_constant():
    C = {63: 0, 91: 1, 171: 0, 7 * 13 * 19: 2}
    for f, want in C.items():
        for inst in cubic_field_instances(f):
            assert genus_constant(FieldDescriptor.cubic(inst), 3).C == want


def test_classify_dichotomy_and_contradictions():
    fd = FieldDescriptor.quadratic(15)  # C = 2
    assert classify(fd, 2, vT=2, vK2=4).verdict == EQUALITY
    cl = classify(fd, 2, vT=3, vK2=6)
    assert cl.verdict == INEQUALITY and cl.lower_bound == 4
    with pytest.raises(ContradictionDetected):
        classify(fd, 2, vT=1, vK2=4)  # below C
    with pytest.raises(ContradictionDetected):
        classify(fd, 2, vT=2, vK2=5)  # equality needs vK2 = C + 2
    with pytest.raises(ContradictionDetected):
        classify(fd, 2, vT=3, vK2=4)  # inequality needs vK2 > C + 2


def _w2_brute(chi, bound=1500):
    best = 1
    for N in range(1, bound):
        a = np.arange(1, N + 1)
        u = a[np.gcd(a, N) == 1]
        if chi is not None and N % chi.conductor == 0:
            u = u[chi.table[u % chi.conductor] == 0]
        if np.all((u * u) % N == 1 % N):
            best = N
    return best


@pytest.mark.parametrize("m,want", [(None, 24), (2, 48), (3, 24), (5, 120), (7, 24), (13, 24)])
def test_w2(m, want):
    chi = None if m is None else quadratic_character(m)
    assert w2(chi) == want == _w2_brute(chi)


def test_w2_cubic():
    assert w2(cubic_field_instances(7)[0].chi) == 168 == _w2_brute(cubic_field_instances(7)[0].chi)
    assert w2(cubic_field_instances(9)[0].chi) == 72


def test_birch_tate_values():
    assert birch_tate_exact(1).value == 2
    got = {m: birch_tate_exact(m).value for m in (2, 3, 5, 6, 7)}
    assert got == {2: 4, 3: 4, 5: 4, 6: 12, 7: 16}


@pytest.mark.parametrize("m", [m for m in range(2, 80) if is_squarefree(m)])
def test_birch_tate_against_measure(m):
    bt = birch_tate_exact(m)
    fd = FieldDescriptor.quadratic(m)
    assert bt.v2 == k2_valuation(fd, 2)
    assert bt.v3 == k2_valuation(fd, 3)


@pytest.mark.parametrize("ell,want", [(101, 3), (151, 2), (251, 2), (401, 3)])
def test_higher_k_two_routes(ell, want):
    assert higher_k_valuation(ell, 5, 2, "bernoulli") == want
    assert higher_k_valuation(ell, 5, 2, "measure") == want
    with pytest.raises(OutOfScope):
        higher_k_valuation(7, 3, 1)
    with pytest.raises(ValueError):
        higher_k_valuation(ell, 5, 2, "other")


def test_continuity_congruence():
    for m in (6, 15, 29, 42):
        assert continuity_congruence_check(FieldDescriptor.quadratic(m), 3)
    for f in (7, 31, 277):
        assert continuity_congruence_check(FieldDescriptor.cubic(cubic_field_instances(f)[0]), 2)
    with pytest.raises(OutOfScope):
        continuity_congruence_check(FieldDescriptor.quadratic(6), 2)


def test_analyze_row_schema():
    row = analyze(FieldDescriptor.quadratic(15), 2).to_json()
    assert list(row) == ["field", "p", "vT", "vK2", "vR2", "C", "verdict", "n_used", "stable", "source_checks"]
    assert row["field"] == {"kind": "quadratic", "m": 15}
    assert (row["vT"], row["vK2"], row["vR2"], row["C"], row["verdict"]) == (2, 4, 2, 2, "equality")
    cubic = analyze(FieldDescriptor.cubic(cubic_field_instances(91)[0]), 3).to_json()
    assert cubic["field"] == {"kind": "cubic", "f": 91, "poly": [1, 1, -30, -64]}
    deg = analyze(FieldDescriptor.degree_p(101, 5), 5).to_json()
    assert deg["field"] == {"kind": "degree_p", "ell": 101} and deg["vK2"] == 1


def test_exceptional_fields():
    row = analyze(FieldDescriptor.quadratic(2), 2)
    assert row.vK2 == 2 and row.verdict == "na" and row.source_checks["exceptional"]
    assert k2_valuation(FieldDescriptor.cubic(cubic_field_instances(9)[0]), 3) == 0
    with pytest.raises(OutOfScope):
        torsion_valuation(FieldDescriptor.quadratic(2), 2)
    # m = 3 follows the generic rule at both primes
    assert analyze(FieldDescriptor.quadratic(3), 2).vT is not None


def test_scope():
    with pytest.raises(OutOfScope):
        analyze(FieldDescriptor.quadratic(5), 5)
    with pytest.raises(OutOfScope):
        FieldDescriptor.degree_p(7, 2)
    with pytest.raises(OutOfScope):
        analyze(FieldDescriptor.degree_p(11, 5), 3)
