"""Integer, modular and rational primitives.

Rationals are ``fractions.Fraction`` throughout (always reduced, positive
denominator).
"""
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd, isqrt

from .errors import NotCoprime, NotPrime, NotSquarefree, ZeroValuation

Rational = Fraction

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    """Deterministic Miller-Rabin for n < 3.3e24 (covers every 64-bit input)."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for b in _MR_BASES:
        x = pow(b, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n):
    """Trial division; returns {prime: exponent} for |n|."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p, step = 5, 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += step
        step = 6 - step
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_divisors(n):
    return sorted(factorize(n))


def is_squarefree(n):
    return n != 0 and all(e == 1 for e in factorize(n).values())


def require_squarefree(m):
    if m <= 1 or not is_squarefree(m):
        raise NotSquarefree(f"{m} is not a squarefree integer > 1")


def jacobi(a, n):
    if n <= 0 or n % 2 == 0:
        raise ValueError("jacobi needs odd positive n")
    a %= n
    t = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                t = -t
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            t = -t
        a %= n
    return t if n == 1 else 0


def kronecker(a, n):
    """Kronecker symbol (a/n), full extension to every integer n."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    t = 1
    if n < 0:
        n = -n
        if a < 0:
            t = -1
    e = 0
    while n % 2 == 0:
        n //= 2
        e += 1
    if e:
        if a % 2 == 0:
            return 0
        if e % 2 and a % 8 in (3, 5):
            t = -t
    return t * jacobi(a, n) if n > 1 else t


def padic_valuation(x, p):
    """Largest e with p^e | x; rationals give v(num) - v(den)."""
    if x == 0:
        raise ZeroValuation("valuation of 0 is infinite")
    if isinstance(x, Fraction):
        return padic_valuation(x.numerator, p) - padic_valuation(x.denominator, p)
    x = abs(x)
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def vp_or_none(x, p):
    """Valuation, with None standing for x == 0."""
    return None if x == 0 else padic_valuation(x, p)


def multiplicative_order(a, n):
    if gcd(a, n) != 1:
        raise NotCoprime(f"{a} is not a unit mod {n}")
    phi = euler_phi(n)
    order = phi
    for q in factorize(phi):
        while order % q == 0 and pow(a, order // q, n) == 1:
            order //= q
    return order


def euler_phi(n):
    out = n
    for q in factorize(n):
        out = out // q * (q - 1)
    return out


def primitive_root(ell):
    """Smallest generator of (Z/ell)^* for an odd prime ell."""
    if ell < 3 or not is_prime(ell):
        raise NotPrime(f"{ell} is not an odd prime")
    qs = prime_divisors(ell - 1)
    g = 2
    while any(pow(g, (ell - 1) // q, ell) == 1 for q in qs):
        g += 1
    return g


def primitive_root_mod(n):
    """Smallest generator of a cyclic (Z/n)^* (used for n = 9)."""
    phi = euler_phi(n)
    for g in range(2, n):
        if gcd(g, n) == 1 and multiplicative_order(g, n) == phi:
            return g
    raise ValueError(f"(Z/{n})^* is not cyclic")


def discrete_log(a, g, ell):
    """k in [0, ell-2] with g^k = a mod ell (baby-step giant-step)."""
    a %= ell
    if a == 0:
        raise NotCoprime(f"{ell} divides the argument")
    order = ell - 1
    step = isqrt(order) + 1
    baby = {}
    x = 1
    for j in range(step):
        baby.setdefault(x, j)
        x = x * g % ell
    giant = pow(g, -step, ell)
    y = a
    for i in range(step + 1):
        j = baby.get(y)
        if j is not None:
            return (i * step + j) % order
        y = y * giant % ell
    raise ValueError(f"{g} does not generate (Z/{ell})^*")


def bernoulli_numbers(upto):
    """[B_0, ..., B_upto] with B_1 = -1/2, from sum_{j<n} C(n,j) B_j = 0."""
    B = [Fraction(1)]
    for n in range(2, upto + 2):
        s = sum(comb(n, j) * B[j] for j in range(n - 1))
        B.append(-s / n)
    return B[: upto + 1]


def bernoulli_polynomial(m, B=None):
    """Coefficients c_0..c_m of B_m(x) = sum_j C(m,j) B_j x^{m-j}, low degree first."""
    if B is None:
        B = bernoulli_numbers(m)
    coeffs = [Fraction(0)] * (m + 1)
    for j in range(m + 1):
        coeffs[m - j] = comb(m, j) * B[j]
    return coeffs


@dataclass(frozen=True)
class ContinuedFractionUnit:
    m: int
    a: int
    b: int
    norm: int
    period: int

    def __post_init__(self):
        if self.a * self.a - self.m * self.b * self.b != self.norm:
            raise ValueError("not a unit")


def sqrt_cf_period(m):
    """Partial quotients [a0; a1, ..., a_r] of sqrt(m), one full period."""
    a0 = isqrt(m)
    if a0 * a0 == m:
        raise ValueError("m is a square")
    out = [a0]
    mm, d, a = 0, 1, a0
    while a != 2 * a0:
        mm = d * a - mm
        d = (m - mm * mm) // d
        a = (a0 + mm) // d
        out.append(a)
    return out


def fundamental_unit(m):
    """Minimal unit a + b*sqrt(m) > 1 of the order Z[sqrt(m)].

    For m = 1 mod 4 the maximal order can hold a smaller half-integral unit;
    that one is not returned here.
    """
    require_squarefree(m)
    quotients = sqrt_cf_period(m)
    r = len(quotients) - 1
    p0, p1 = 1, quotients[0]
    q0, q1 = 0, 1
    for a in quotients[1:r]:
        p0, p1 = p1, a * p1 + p0
        q0, q1 = q1, a * q1 + q0
    return ContinuedFractionUnit(m, p1, q1, p1 * p1 - m * q1 * q1, r)
