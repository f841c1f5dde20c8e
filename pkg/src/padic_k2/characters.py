"""Even Dirichlet characters of the fields in scope, stored as exponent tables.

A character of order d and conductor f is a numpy array ``table`` of length f:
``table[a] = k`` means chi(a) = zeta_d^k, and ``table[a] = -1`` marks gcd(a, f) > 1.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, isqrt

import numpy as np

from .arith import (
    factorize,
    is_prime,
    kronecker,
    primitive_root,
    primitive_root_mod,
    require_squarefree,
)
from .cyclo import CycloElt
from .errors import BadCongruence, NotPrime, NotPrimitive, SieveExhausted

RAMIFIED = None


@dataclass(frozen=True, eq=False)
class DirichletCharacter:
    conductor: int
    order: int
    table: np.ndarray = field(repr=False)
    label: str = ""

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int16)
        t.setflags(write=False)
        object.__setattr__(self, "table", t)
        if t.shape != (self.conductor,):
            raise ValueError("exponent table must have one entry per residue")

    @property
    def is_even(self):
        return self.conductor <= 2 or int(self.table[self.conductor - 1]) == 0

    def exponent(self, a):
        """k with chi(a) = zeta_d^k, or None when gcd(a, f) > 1."""
        k = int(self.table[a % self.conductor])
        return None if k < 0 else k

    def power(self, j):
        t = self.table.astype(np.int32)
        out = np.where(t < 0, -1, (t * j) % self.order)
        return DirichletCharacter(self.conductor, self.order, out, f"{self.label}^{j}")

    def kernel(self):
        return set(np.flatnonzero(self.table == 0).tolist())

    def is_primitive(self):
        f = self.conductor
        if f == 1 or not np.any(self.table > 0):
            return False
        for ell in factorize(f):
            g = f // ell
            # chi factors through f/ell iff it is trivial on units = 1 mod f/ell
            a = np.arange(1, f, g)
            vals = self.table[a]
            if np.all(vals[vals >= 0] == 0):
                return False
        return True

    def __repr__(self):
        return f"DirichletCharacter(f={self.conductor}, d={self.order}, {self.label})"


def evaluate(chi, a):
    """chi(a) as a CycloElt of order chi.order, or RAMIFIED (None)."""
    k = chi.exponent(a)
    if k is None:
        return RAMIFIED
    return CycloElt.zeta_power(chi.order, k)


def quadratic_discriminant(m):
    return m if m % 4 == 1 else 4 * m


@lru_cache(maxsize=256)
def _legendre_table(ell):
    t = -np.ones(ell, dtype=np.int8)
    t[0] = 0
    t[(np.arange(1, ell, dtype=np.int64) ** 2) % ell] = 1
    return t


def quadratic_character(m):
    """kronecker(disc, .) for Q(sqrt m), m squarefree > 1."""
    require_squarefree(m)
    disc = quadratic_discriminant(m)
    a = np.arange(disc, dtype=np.int64)
    sign = np.ones(disc, dtype=np.int8)
    prod = 1
    for ell in factorize(m):
        if ell == 2:
            continue
        sign *= _legendre_table(ell)[a % ell]
        prod *= ell if ell % 4 == 1 else -ell
    d2 = disc // prod
    odd = (a % 2 == 1).astype(np.int8)
    chi4 = np.where(a % 4 == 1, 1, -1).astype(np.int8)
    chi8 = np.where((a % 8 == 1) | (a % 8 == 7), 1, -1).astype(np.int8)
    if d2 == -4:
        sign *= chi4 * odd
    elif d2 == 8:
        sign *= chi8 * odd
    elif d2 == -8:
        sign *= chi4 * chi8 * odd
    elif d2 != 1:
        raise AssertionError(f"unexpected 2-part {d2}")
    table = np.where(sign == 1, 0, np.where(sign == -1, 1, -1))
    chi = DirichletCharacter(disc, 2, table, f"kron({disc},.)")
    assert chi.is_even
    return chi


@lru_cache(maxsize=512)
def dlog_table(n, g):
    """t[g^k mod n] = k for a cyclic (Z/n)^* with generator g; -1 off the units."""
    t = -np.ones(n, dtype=np.int64)
    x = 1
    for k in range(_phi_cyclic(n)):
        t[x] = k
        x = x * g % n
    t.setflags(write=False)
    return t


def _phi_cyclic(n):
    out = n
    for q in factorize(n):
        out = out // q * (q - 1)
    return out


def order_p_characters(ell, p):
    """The p-1 characters of order p and prime conductor ell, chi_j(g) = zeta_p^j."""
    if not is_prime(ell):
        raise NotPrime(f"{ell} is not prime")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if ell % p != 1:
        raise BadCongruence(f"{ell} is not 1 mod {p}")
    g = primitive_root(ell)
    logs = dlog_table(ell, g)
    out = []
    for j in range(1, p):
        table = np.where(logs < 0, -1, (logs * j) % p)
        chi = DirichletCharacter(ell, p, table, f"ell={ell},g={g},j={j}")
        assert chi.is_even, "order-p characters of odd p are even"
        out.append(chi)
    return out


# cyclic cubic fields


@dataclass(frozen=True, eq=False)
class CubicFieldInstance:
    f: int
    a: int
    b: int
    poly: tuple  # (1, c2, c1, c0), highest degree first
    characters: tuple | None = None

    def poly_string(self):
        return format_poly(self.poly)

    @property
    def chi(self):
        return self.characters[0]


def format_poly(coeffs, var="x"):
    """Render integer coefficients (highest degree first) in PARI/GP style."""
    deg = len(coeffs) - 1
    out = ""
    for i, c in enumerate(coeffs):
        e = deg - i
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if e == 0:
            term = str(mag)
        else:
            mono = var if e == 1 else f"{var}^{e}"
            term = mono if mag == 1 else f"{mag}*{mono}"
        out += (sign if out or c < 0 else "") + term
    return out or "0"


def cubic_conductor_parts(f):
    """Component moduli (9 and primes) of a cyclic cubic conductor, or None."""
    if f < 7:
        return None
    fac = factorize(f)
    h = fac.get(3, 0)
    if h not in (0, 2):
        return None
    parts = []
    for ell, e in sorted(fac.items()):
        if ell == 3:
            parts.append(9)
        elif e != 1 or ell % 3 != 1:
            return None
        else:
            parts.append(ell)
    return parts


def _component_tables(f, parts):
    a = np.arange(f, dtype=np.int64)
    comps = []
    for q in parts:
        g = primitive_root_mod(q) if q == 9 else primitive_root(q)
        comps.append(dlog_table(q, g)[a % q])
    return comps


def candidate_cubic_characters(f):
    """One representative per conjugate pair of primitive order-3 characters mod f.

    The representative takes exponent 1 on the canonical generator of the
    first component (9 if present, else the smallest prime).
    """
    parts = cubic_conductor_parts(f)
    if parts is None:
        return []
    comps = _component_tables(f, parts)
    unit = np.all([c >= 0 for c in comps], axis=0)
    out = []
    k = len(parts)
    for mask in range(2 ** (k - 1)):
        es = [1] + [1 + ((mask >> i) & 1) for i in range(k - 1)]
        total = sum(e * c for e, c in zip(es, comps)) % 3
        table = np.where(unit, total, -1)
        chi = DirichletCharacter(f, 3, table, f"f={f},e={es}")
        out.append((chi, chi.power(2)))
    return out


def _cubic_polys(f):
    h = 2 if f % 9 == 0 else 0
    out = []
    for b in range(1, isqrt(4 * f // 27) + 1):
        if h == 2 and b % 3 == 0:
            continue
        A = 4 * f - 27 * b * b
        if A < 0:
            break
        a = isqrt(A)
        if a * a != A:
            continue
        if h == 0:
            if a % 3 == 1:
                a = -a
            poly = (1, 1, (1 - f) // 3, (f * (a - 3) + 1) // 27)
        else:
            if a % 9 == 3:
                a = -a
            poly = (1, 0, -f // 3, -f * a // 27)
        out.append((a, b, poly))
    return out


def cubic_field_instances(f, search_bound=None):
    """All cyclic cubic fields of conductor exactly f, characters attached."""
    if cubic_conductor_parts(f) is None:
        return []
    out = []
    for a, b, poly in _cubic_polys(f):
        inst = CubicFieldInstance(f, a, b, poly)
        pair = artin_kernel_match(inst, search_bound)
        out.append(CubicFieldInstance(f, a, b, poly, pair))
    expected = len(candidate_cubic_characters(f))
    if len(out) != expected:
        raise AssertionError(f"f={f}: {len(out)} polynomials for {expected} fields")
    return out


def cubic_discriminant(poly):
    _, a, b, c = poly
    return a * a * b * b - 4 * b ** 3 - 4 * a ** 3 * c - 27 * c * c + 18 * a * b * c


def _mulmod_cubic(u, v, c2, c1, c0, r):
    # u, v are (u0, u1, u2) modulo x^3 + c2 x^2 + c1 x + c0 over F_r
    w = [0] * 5
    for i in range(3):
        if u[i]:
            for j in range(3):
                w[i + j] += u[i] * v[j]
    for k in (4, 3):
        t = w[k] % r
        if t:
            w[k - 1] -= t * c2
            w[k - 2] -= t * c1
            w[k - 3] -= t * c0
    return (w[0] % r, w[1] % r, w[2] % r)


def cubic_has_root(poly, r):
    """True iff the monic cubic has a root mod the prime r (gcd with x^r - x)."""
    _, c2, c1, c0 = (x % r for x in poly)
    if r <= 3:
        return any((x ** 3 + c2 * x * x + c1 * x + c0) % r == 0 for x in range(r))
    result = (1, 0, 0)
    base = (0, 1, 0)
    e = r
    while e:
        if e & 1:
            result = _mulmod_cubic(result, base, c2, c1, c0, r)
        e >>= 1
        if e:
            base = _mulmod_cubic(base, base, c2, c1, c0, r)
    # x^r - x mod P, then gcd with P over F_r
    g = [result[0] % r, (result[1] - 1) % r, result[2] % r]
    return _gcd_degree([c0, c1, c2, 1], g, r) > 0


def _gcd_degree(f, g, r):
    def strip(p):
        p = [x % r for x in p]
        while p and p[-1] == 0:
            p.pop()
        return p

    f, g = strip(f), strip(g)
    while g:
        inv = pow(g[-1], -1, r)
        while len(f) >= len(g) and f:
            q = f[-1] * inv % r
            s = len(f) - len(g)
            for i, x in enumerate(g):
                f[s + i] = (f[s + i] - q * x) % r
            f = strip(f)
        f, g = g, f
    return len(f) - 1


@lru_cache(maxsize=8)
def prime_sieve(bound):
    s = np.ones(bound + 1, dtype=bool)
    s[:2] = False
    for i in range(2, int(bound ** 0.5) + 1):
        if s[i]:
            s[i * i :: i] = False
    out = np.flatnonzero(s)
    out.setflags(write=False)
    return out


def artin_kernel_match(instance, search_bound=None):
    """Match a defining polynomial to its conjugate character pair.

    Every unit residue s mod f gets a prime r = s (mod f) with r prime to
    3 f disc(P); the cubic splits at r iff it has a root mod r.  The split
    residues form the kernel of the field's characters.
    """
    f = instance.f
    if search_bound is None:
        search_bound = max(200_000, 400 * f)
    bad = 3 * f * abs(cubic_discriminant(instance.poly))
    units = [s for s in range(1, f) if gcd(s, f) == 1]
    decided = {}
    for r in prime_sieve(search_bound).tolist():
        if bad % r == 0:
            continue
        s = r % f
        if s in decided:
            continue
        decided[s] = cubic_has_root(instance.poly, r)
        if len(decided) == len(units):
            break
    if len(decided) < len(units):
        missing = [s for s in units if s not in decided][:5]
        raise SieveExhausted(f"f={f}: residues {missing} undecided below {search_bound}")
    split = {s for s, v in decided.items() if v}
    matches = [pair for pair in candidate_cubic_characters(f) if pair[0].kernel() == split]
    if len(matches) != 1:
        raise AssertionError(f"f={f}: kernel matches {len(matches)} character pairs")
    return matches[0]


def check_primitive(chi):
    if not chi.is_primitive():
        raise NotPrimitive(f"{chi!r} is not primitive")


def kronecker_character_value(m, a):
    """Scalar reference evaluation of the quadratic character (used by tests)."""
    return kronecker(quadratic_discriminant(m), a)
