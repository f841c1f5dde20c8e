"""Arithmetic invariants read off from measure valuations and exact Bernoulli values.

Valuation rules, with v(s) = v_p(1/2 L_p(s, chi)) in norm form (see measure):

    quadratic, p = 2   v(#R2) = v(-1),     v(#K2) = v(#R2) + 2,  v(#T) = v(1)
    quadratic, p = 3   v(#K2) = v(-1),                           v(#T) = v(1)
    cubic,     p = 3   v(#K2) = v(-1),                           v(#T) = v(1)
    cubic,     p = 2   v(#R2) = v(-1),     v(#K2) = v(#R2) + 3,  v(#T) = v(1)
    degree p,  p >= 3  v(#K2) = v_p(N(B_{2,chi})),               v(#T) = v(1)

Only orders are computed; group structures are out of reach here.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import lcm

import numpy as np

from .arith import factorize, padic_valuation, require_squarefree
from .bernoulli import generalized_bernoulli
from .characters import (
    CubicFieldInstance,
    order_p_characters,
    quadratic_character,
)
from .cyclo import rational_norm
from .errors import ContradictionDetected, OutOfScope
from .measure import l_value_valuation, normalized_value

EQUALITY = "equality"
INEQUALITY = "inequality"
NOT_APPLICABLE = "na"

STRUCTURE_NOTE = "orders only; group structure of T is not computed"


@dataclass(frozen=True)
class FieldDescriptor:
    kind: str  # "quadratic" | "cubic" | "degree_p"
    m: int | None = None
    instance: CubicFieldInstance | None = None
    ell: int | None = None
    p: int | None = None

    @classmethod
    def quadratic(cls, m):
        require_squarefree(m)
        return cls("quadratic", m=m)

    @classmethod
    def cubic(cls, instance):
        if instance.characters is None:
            raise ValueError("cubic instance needs its character pair")
        return cls("cubic", instance=instance)

    @classmethod
    def degree_p(cls, ell, p):
        if p < 3:
            raise OutOfScope("degree-p fields need p >= 3")
        order_p_characters(ell, p)  # validates ell = 1 mod p
        return cls("degree_p", ell=ell, p=p)

    @property
    def chi(self):
        """One character per Galois orbit; norms cover the conjugates."""
        if self.kind == "quadratic":
            return quadratic_character(self.m)
        if self.kind == "cubic":
            return self.instance.chi
        return order_p_characters(self.ell, self.p)[0]

    @property
    def conductor(self):
        if self.kind == "quadratic":
            return self.chi.conductor
        if self.kind == "cubic":
            return self.instance.f
        return self.ell

    @property
    def degree(self):
        return {"quadratic": 2, "cubic": 3}.get(self.kind, self.p)

    def to_json(self):
        if self.kind == "quadratic":
            return {"kind": "quadratic", "m": self.m}
        if self.kind == "cubic":
            return {"kind": "cubic", "f": self.instance.f, "poly": list(self.instance.poly)}
        return {"kind": "degree_p", "ell": self.ell}

    def label(self):
        if self.kind == "quadratic":
            return f"m={self.m}"
        if self.kind == "cubic":
            return f"f={self.instance.f} P={self.instance.poly_string()}"
        return f"ell={self.ell}"


@dataclass(frozen=True)
class GenusReport:
    D: int
    C: int
    case: str
    epsilon: int = 1


@dataclass(frozen=True)
class Classification:
    verdict: str
    C: int
    vT: int
    vK2: int
    predicted_vK2: int | None  # exact value for equality
    lower_bound: int | None  # strict lower bound for inequality


@dataclass
class InvariantRow:
    field: FieldDescriptor
    p: int
    vT: int | None = None
    vK2: int | None = None
    vR2: int | None = None
    genus: GenusReport | None = None
    verdict: str = NOT_APPLICABLE
    w2_exponent: int = 0
    n_used: int = 0
    stable: bool = True
    source_checks: dict = field(default_factory=dict)

    @property
    def C(self):
        return None if self.genus is None else self.genus.C

    def to_json(self):
        return {
            "field": self.field.to_json(),
            "p": self.p,
            "vT": self.vT,
            "vK2": self.vK2,
            "vR2": self.vR2,
            "C": self.C,
            "verdict": self.verdict,
            "n_used": self.n_used,
            "stable": self.stable,
            "source_checks": self.source_checks,
        }


def _is_exceptional(field, p):
    if field.kind == "quadratic" and p == 2 and field.m == 2:
        return True
    if field.kind == "cubic" and p == 3 and field.instance.f == 9:
        return True
    return False


def _check_scope(field, p):
    ok = (
        (field.kind == "quadratic" and p in (2, 3))
        or (field.kind == "cubic" and p in (2, 3))
        or (field.kind == "degree_p" and p == field.p)
    )
    if not ok:
        raise OutOfScope(f"{field.kind} field with p={p} is out of scope")


def genus_constant(field, p):
    if field.kind == "quadratic" and p == 2:
        if field.m == 2:
            raise OutOfScope("conductor 8 is handled separately")
        D = sum(1 for ell in factorize(field.m) if ell != 2)
        if field.m % 8 == 7:
            return GenusReport(D, D, "iii_2")
        return GenusReport(D, D - 1, "ii_2")
    if field.kind == "cubic" and p == 3:
        f = field.instance.f
        if f == 9:
            raise OutOfScope("conductor 9 is handled separately")
        D = sum(1 for ell in factorize(f) if ell != 3)
        return GenusReport(D, D - 1, "i_p")
    raise OutOfScope(f"no genus formula for {field.kind} field at p={p}")


def measure_at(field, p, s, schedule=None, c=None):
    _check_scope(field, p)
    return l_value_valuation(field.chi, p, s, schedule, c)


def torsion_valuation(field, p, schedule=None):
    """v_p(#T_{K,p}) from the s = 1 measure value."""
    if _is_exceptional(field, p):
        raise OutOfScope("K meets the cyclotomic Z_p-extension")
    return measure_at(field, p, 1, schedule).valuation


def _k2_shift(field, p):
    if p == 2:
        return 2 if field.kind == "quadratic" else 3
    return 0


def bernoulli_k2_valuation(ell, p):
    """v_p(#K2) of the degree-p field of conductor ell, from B_{2,chi}."""
    chi = order_p_characters(ell, p)[0]
    return padic_valuation(rational_norm(generalized_bernoulli(chi, 2), p), p)


def k2_valuation(field, p, schedule=None):
    _check_scope(field, p)
    if field.kind == "quadratic" and p == 2 and field.m == 2:
        return 2
    if field.kind == "cubic" and p == 3 and field.instance.f == 9:
        return 0
    if field.kind == "degree_p":
        return bernoulli_k2_valuation(field.ell, p)
    return measure_at(field, p, -1, schedule).valuation + _k2_shift(field, p)


def r2_valuation(m, schedule=None):
    if m in (2,):
        raise OutOfScope("m=2 is outside the regular-kernel formula")
    return k2_valuation(FieldDescriptor.quadratic(m), 2, schedule) - 2


def classify(field, p, vT=None, vK2=None, schedule=None):
    genus = genus_constant(field, p)
    if vT is None:
        vT = torsion_valuation(field, p, schedule)
    if vK2 is None:
        vK2 = k2_valuation(field, p, schedule)
    shift = 2 if p == 2 else 0
    C = genus.C
    if vT < C:
        raise ContradictionDetected(f"{field.label()}: v(T)={vT} below C={C}")
    if vT == C:
        if vK2 != C + shift:
            raise ContradictionDetected(f"{field.label()}: equality case but v(K2)={vK2} != {C + shift}")
        return Classification(EQUALITY, C, vT, vK2, C + shift, None)
    if vK2 <= C + shift:
        raise ContradictionDetected(f"{field.label()}: inequality case but v(K2)={vK2} <= {C + shift}")
    return Classification(INEQUALITY, C, vT, vK2, None, C + shift)


# w_2 and Birch-Tate


def _w2_candidates(d):
    caps = {2: 6, 3: 3, 5: 2, 7: 2}
    primes = [ell for ell in caps if ell <= 2 * d + 1]
    ranges = [[ell ** k for k in range(caps[ell] + 1)] for ell in primes]
    for combo in product(*ranges):
        N = 1
        for x in combo:
            N *= x
        yield N


def _exponent_divides_2(N, chi):
    """Gal(K(zeta_N)/K) killed by 2, as a subgroup of (Z/N)^*."""
    a = np.arange(1, N + 1, dtype=np.int64)
    units = np.gcd(a, N) == 1
    if chi is not None and N % chi.conductor == 0:
        units &= chi.table[a % chi.conductor] == 0
    x = a[units]
    return bool(np.all((x * x) % N == 1 % N))


def w2(chi=None):
    """Largest N with Gal(K(zeta_N)/K) of exponent dividing 2; chi None means K = Q.

    Only primes ell <= 2d+1 can divide N: (Z/ell)^* is cyclic of order ell-1 and
    the subgroup fixing K has index at most d, so ell-1 <= 2d.
    """
    d = 1 if chi is None else chi.order
    good = [N for N in _w2_candidates(d) if _exponent_divides_2(N, chi)]
    N = lcm(*good)
    assert _exponent_divides_2(N, chi), "w2 candidates are not closed under lcm"
    return N


@dataclass(frozen=True)
class BirchTate:
    m: int
    w2: int
    value: Fraction

    @property
    def v2(self):
        return padic_valuation(self.value, 2)

    @property
    def v3(self):
        return padic_valuation(self.value, 3)


def birch_tate_exact(m):
    """w2(K) |zeta_K(-1)| for K = Q(sqrt m); m = 1 gives Q itself."""
    if m == 1:
        w = w2(None)
        return BirchTate(1, w, Fraction(w, 12))
    chi = quadratic_character(m)
    B2 = generalized_bernoulli(chi, 2)[0]
    w = w2(chi)
    # zeta_K(-1) = zeta(-1) L(-1, chi) = (-1/12)(-B_{2,chi}/2)
    return BirchTate(m, w, w * abs(B2) / 24)


# higher K-groups


def higher_k_valuation(ell, p, n, method="bernoulli", schedule=None):
    """v_p(#K_{2m-2}) + ... for m = 2 + (p-3) p^n, via B_{m,chi} or the measure at s = 1-m."""
    if p < 5:
        raise OutOfScope("higher K valuations need p >= 5")
    m = 2 + (p - 3) * p ** n
    chi = order_p_characters(ell, p)[0]
    if method == "bernoulli":
        Bm = [x / m for x in generalized_bernoulli(chi, m)]
        return padic_valuation(rational_norm(Bm, p), p) + 1
    if method == "measure":
        return l_value_valuation(chi, p, 1 - m, schedule).valuation + 1
    raise ValueError(f"unknown method {method!r}")


# continuity congruence


def continuity_modulus(p):
    q = 4 if p == 2 else p
    return p ** padic_valuation(2 * q, p)


def continuity_congruence_check(field, p, schedule=None, values=None):
    """1/2 L_p(1) = 1/2 L_p(-1) mod 2q, for quadratic p=3 and cubic p=2."""
    if not ((field.kind == "quadratic" and p == 3) or (field.kind == "cubic" and p == 2)):
        raise OutOfScope("congruence implemented for quadratic p=3 and cubic p=2")
    chi = field.chi
    if values is None:
        values = (measure_at(field, p, 1, schedule), measure_at(field, p, -1, schedule))
    M = continuity_modulus(p)
    v1, vm1 = (normalized_value(mv, chi) for mv in values)
    return all((x - y) % M == 0 for x, y in zip(v1.coeffs, vm1.coeffs))


# full rows


def analyze(field, p, schedule=None, higher_n=None):
    """Every invariant of one (field, p) pair as an InvariantRow."""
    _check_scope(field, p)
    row = InvariantRow(field, p)
    row.w2_exponent = _k2_shift(field, p)
    row.source_checks["note"] = STRUCTURE_NOTE
    if _is_exceptional(field, p):
        row.vK2 = k2_valuation(field, p)
        row.source_checks["exceptional"] = True
        return row
    mv1 = measure_at(field, p, 1, schedule)
    row.vT = mv1.valuation
    row.source_checks["c"] = mv1.params.c
    used = [mv1]
    if field.kind == "degree_p":
        row.vK2 = bernoulli_k2_valuation(field.ell, p)
        if higher_n is not None:
            row.source_checks["higher_k"] = higher_k_valuation(field.ell, p, higher_n)
    else:
        mvm1 = measure_at(field, p, -1, schedule)
        used.append(mvm1)
        row.vK2 = mvm1.valuation + _k2_shift(field, p)
        if p == 2:
            row.vR2 = mvm1.valuation
        if (field.kind, p) in (("quadratic", 2), ("cubic", 3)):
            row.genus = genus_constant(field, p)
            cl = classify(field, p, row.vT, row.vK2)
            row.verdict = cl.verdict
        else:
            row.source_checks["congruence"] = continuity_congruence_check(
                field, p, values=(mv1, mvm1)
            )
    row.n_used = max(mv.n_used for mv in used)
    row.stable = all(mv.stable for mv in used)
    return row
