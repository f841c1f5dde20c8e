"""Arithmetic in Z[Y]/(Phi_d(Y)) for a prime d, with an optional coefficient modulus.

Elements use the power basis 1, Y, ..., Y^(d-2).  For d = 2 the ring is Z and
an element is a single integer.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .arith import is_prime, padic_valuation


def _reduce_power(d, k):
    """Coefficient vector of Y^k in Z[Y]/Phi_d."""
    k %= d
    v = [0] * (d - 1)
    if k == d - 1:
        return [-1] * (d - 1)
    v[k] = 1
    return v


def reduce_exponent_sums(sums):
    """Fold sum_k S_k Y^k (k = 0..d-1) into the power basis: c_j = S_j - S_{d-1}."""
    d = len(sums)
    if d == 2:
        return [sums[0] - sums[1]]
    top = sums[d - 1]
    return [sums[j] - top for j in range(d - 1)]


@dataclass(frozen=True)
class CycloElt:
    p: int
    coeffs: tuple
    modulus: int | None = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError("cyclotomic order must be prime")
        c = tuple(int(x) for x in self.coeffs)
        if len(c) != self.p - 1:
            raise ValueError(f"need {self.p - 1} coefficients, got {len(c)}")
        if self.modulus is not None:
            c = tuple(x % self.modulus for x in c)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zeta_power(cls, d, k, modulus=None):
        if d == 2:
            return cls(2, ((-1) ** (k % 2),), modulus)
        return cls(d, _reduce_power(d, k), modulus)

    @classmethod
    def constant(cls, d, value, modulus=None):
        return cls(d, (value,) + (0,) * (d - 2), modulus)

    def _mod(self, other):
        if isinstance(other, CycloElt):
            if other.p != self.p:
                raise ValueError("mixed cyclotomic orders")
            ms = [x for x in (self.modulus, other.modulus) if x is not None]
            return gcd(*ms) if ms else None
        return self.modulus

    def _coerce(self, other):
        if isinstance(other, CycloElt):
            return other
        return CycloElt.constant(self.p, other)

    def __add__(self, other):
        o = self._coerce(other)
        return CycloElt(self.p, [x + y for x, y in zip(self.coeffs, o.coeffs)], self._mod(o))

    __radd__ = __add__

    def __neg__(self):
        return CycloElt(self.p, [-x for x in self.coeffs], self.modulus)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        d = self.p
        if d == 2:
            return CycloElt(2, [self.coeffs[0] * o.coeffs[0]], self._mod(o))
        prod = [0] * d
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(o.coeffs):
                    prod[(i + j) % d] += x * y
        return CycloElt(d, reduce_exponent_sums(prod), self._mod(o))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, CycloElt):
            other = CycloElt.constant(self.p, other, self.modulus)
        if other.p != self.p:
            return False
        m = self._mod(other)
        if m is None:
            return self.coeffs == other.coeffs
        return all((x - y) % m == 0 for x, y in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.p, self.coeffs, self.modulus))

    def lift(self):
        """Same coefficients with the modulus dropped."""
        return CycloElt(self.p, self.coeffs)

    def conjugate(self, j):
        """Image under Y -> Y^j."""
        d = self.p
        sums = [0] * d
        for i, x in enumerate(self.coeffs):
            sums[(i * j) % d] += x
        return CycloElt(d, reduce_exponent_sums(sums), self.modulus)

    def is_zero(self):
        return all(x == 0 for x in self.coeffs)

    def content_valuation(self, p):
        """min v_p over the coefficients (None if every coefficient is 0)."""
        vs = [padic_valuation(x, p) for x in self.coeffs if x]
        return min(vs) if vs else None


def poly_resultant(f, g):
    """Resultant of two polynomials (coefficient lists, low degree first) over Q.

    Euclidean remainder sequence in exact rationals.
    """
    f = _strip([Fraction(x) for x in f])
    g = _strip([Fraction(x) for x in g])
    if not f or not g:
        return Fraction(0)
    res = Fraction(1)
    while True:
        df, dg = len(f) - 1, len(g) - 1
        if dg == 0:
            return res * g[0] ** df
        if df < dg:
            if (df * dg) % 2:
                res = -res
            f, g = g, f
            continue
        r = _polyrem(f, g)
        if not r:
            return Fraction(0)
        dr = len(r) - 1
        # Res(f, g) = (-1)^(df dg) lc(g)^(df - dr) Res(g, r)
        if (df * dg) % 2:
            res = -res
        res *= g[-1] ** (df - dr)
        f, g = g, r


def _strip(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _polyrem(f, g):
    r = list(f)
    lg = g[-1]
    dg = len(g) - 1
    while len(r) - 1 >= dg and r:
        q = r[-1] / lg
        shift = len(r) - 1 - dg
        for i, x in enumerate(g):
            r[shift + i] -= q * x
        r.pop()
        _strip(r)
    return r


def cyclotomic_poly(d):
    """Phi_d for prime d, low degree first."""
    return [1] * d


def cyclo_norm(x):
    """Norm from Q(zeta_d) to Q, as Res(Phi_d, x(Y)); for d = 2 the value itself."""
    if x.p == 2:
        return x.coeffs[0]
    r = poly_resultant(cyclotomic_poly(x.p), list(x.coeffs))
    # Phi_d is monic and x has integer coefficients, so the resultant is integral
    assert r.denominator == 1
    return r.numerator


def rational_norm(vec, d):
    """Norm of sum vec[j] Y^j with rational coordinates."""
    den = lcm(*[Fraction(x).denominator for x in vec])
    ints = [int(Fraction(x) * den) for x in vec]
    n = cyclo_norm(CycloElt(d, ints))
    return Fraction(n, den ** (d - 1))


def norm_valuation(x, p):
    """v_p(cyclo_norm(x)), None when the norm vanishes."""
    n = cyclo_norm(x.lift() if x.modulus is not None else x)
    return None if n == 0 else padic_valuation(n, p)


def inverse_mod(x, modulus):
    """Inverse of a unit x modulo `modulus` (coefficientwise), via conjugates / norm."""
    d = x.p
    xl = CycloElt(d, x.coeffs)
    if d == 2:
        return CycloElt(2, [pow(x.coeffs[0], -1, modulus)], modulus)
    prod = CycloElt.constant(d, 1)
    for j in range(2, d):
        prod = prod * xl.conjugate(j)
    n = cyclo_norm(xl)
    inv_n = pow(n, -1, modulus)
    return CycloElt(d, [c * inv_n for c in prod.coeffs], modulus)
