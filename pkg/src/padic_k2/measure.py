"""Twisted Stickelberger sums and the p-adic valuations read off from them.

For an even character chi of prime order d, a prime p, a level n and a twist c,
the half-range sum

    H = sum_{a <= f_n/2, gcd(a, p f) = 1} (lambda_a + (1-c)/2) a^{-1} <a>^{1-s} chi(a)

is computed modulo Q = q p^n, where f_n = q p^n f, f is the prime-to-p part of
the conductor and lambda_a = (a'c - a)/f_n.  Dividing by the twist factor
1 - chi(c) <c>^{1-s} gives (1/2) L_p(s, chi) mod Q, so

    v(1/2 L_p(s, chi)) = v_p(N(H)) - v_p(N(1 - chi(c) <c>^{1-s}))

with N the norm from Q(zeta_d); for d = 2 the norm is the value itself.

Everything is vectorized with numpy uint64.  For p = 2 the arithmetic wraps
mod 2^64, which is exact because Q divides 2^64.  For odd p the modulus stays
below 2^32 so products of two residues fit in 64 bits.
"""
from dataclasses import dataclass
from math import gcd

import numpy as np

from .arith import padic_valuation
from .cyclo import CycloElt, cyclo_norm, inverse_mod, reduce_exponent_sums
from .errors import BelowPrecision, NoValidTwist, NotCoprime, PrecisionOverflow, Unstable

BLOCK = 1 << 20

# (order of chi, p) -> (n0, n_max, guard)
DEFAULT_SCHEDULES = {
    (2, 2): (8, 16, 2),
    (2, 3): (4, 12, 2),
    (3, 3): (3, 6, 2),
    (3, 2): (8, 12, 2),
}
DEGREE_P_SCHEDULE = (2, 6, 2)


def default_schedule(chi, p):
    if chi.order == p and p > 2:
        return DEGREE_P_SCHEDULE
    return DEFAULT_SCHEDULES.get((chi.order, p), (3, 8, 2))


def split_conductor(cond, p):
    """(prime-to-p part, p-part) of a conductor."""
    pp = 1
    while cond % p == 0:
        cond //= p
        pp *= p
    return cond, pp


@dataclass(frozen=True)
class MeasureParams:
    p: int
    q: int
    f: int
    n: int
    f_n: int
    c: int

    def __post_init__(self):
        if self.f_n != self.q * self.p ** self.n * self.f:
            raise ValueError("f_n must equal q p^n f")
        if gcd(self.c, 2 * self.p * self.f) != 1:
            raise NotCoprime(f"twist c={self.c} is not prime to 2 p f")

    @property
    def modulus(self):
        return self.q * self.p ** self.n

    @property
    def e(self):
        return padic_valuation(self.modulus, self.p)

    @classmethod
    def for_character(cls, chi, p, n, c):
        f, pp = split_conductor(chi.conductor, p)
        q = 4 if p == 2 else p
        if (q * p ** n) % pp:
            raise ValueError(f"level n={n} too small for the {p}-part {pp} of the conductor")
        return cls(p, q, f, n, q * p ** n * f, c)


@dataclass(frozen=True)
class MeasureValue:
    value: CycloElt
    s: int
    params: MeasureParams
    valuation: int
    stable: bool
    twist_valuation: int
    raw: bool = False

    @property
    def n_used(self):
        return self.params.n


def lambda_twist(a, c, f_n):
    """(a' c - a) / f_n with a' in [1, f_n] and a' c = a mod f_n."""
    if gcd(a, f_n) != 1 or gcd(c, f_n) != 1:
        raise NotCoprime("a and c must be units mod f_n")
    ap = a * pow(c, -1, f_n) % f_n or f_n
    lam, r = divmod(ap * c - a, f_n)
    assert r == 0
    return lam


def choose_c(chi, p):
    """Smallest c >= 2 prime to 2 p f with chi(c) != 1."""
    bound = 2 * p * chi.conductor
    for c in range(2, 100 * bound + 3):
        if gcd(c, bound) == 1 and chi.exponent(c) not in (0, None):
            return c
    raise NoValidTwist(f"no twist for {chi!r}")


# vectorized modular helpers


def _mulmod(x, y, Q):
    if Q is None:
        return x * y
    return (x * y) % np.uint64(Q)


def _powmod(x, k, Q):
    out = np.ones_like(x)
    base = x.copy()
    while k:
        if k & 1:
            out = _mulmod(out, base, Q)
        k >>= 1
        if k:
            base = _mulmod(base, base, Q)
    return out


def _inverse(x, p, Q, e):
    """Inverse of units mod Q (Q = p^e) by Newton lifting; Q None means 2^64."""
    if p == 2:
        y = x.copy()
        two = np.uint64(2)
        for _ in range(5):
            y = y * (two - x * y)
        return y
    Qu = np.uint64(Q)
    inv_p = np.array([0] + [pow(i, -1, p) for i in range(1, p)], dtype=np.uint64)
    y = inv_p[(x % np.uint64(p)).astype(np.int64)]
    prec = 1
    while prec < e:
        t = (np.uint64(2) + Qu - (x * y) % Qu) % Qu
        y = (y * t) % Qu
        prec *= 2
    return y


def _teichmuller(x, p, Q, e):
    """omega(x) mod p^e."""
    return _powmod(x, p ** (e - 1), Q)


def _weights(a, p, s, Q, e, raw):
    """a^{-1} <a>^{1-s} mod Q (mod 2^64 for p = 2) as uint64."""
    if p == 2:
        am = a.astype(np.uint64)
        Qm = None
    else:
        am = (a % Q).astype(np.uint64)
        Qm = Q
    if s == -1 and (raw or p in (2, 3)):
        return am
    if s == 1:
        return _inverse(am, p, Qm, e)
    if raw:
        br = am
    elif p == 2:
        theta = np.where(a % 4 == 1, 1, -1).astype(np.int64)
        br = (a * theta).view(np.uint64)
    elif p == 3:
        br = np.where(a % 3 == 1, am, (np.uint64(Q) - am) % np.uint64(Q))
    else:
        om = _teichmuller(am, p, Qm, e)
        br = _mulmod(am, _powmod(om, p - 2, Qm), Qm)
    k = 1 - s
    if k >= 0:
        pw = _powmod(br, k, Qm)
    else:
        pw = _powmod(_inverse(br, p, Qm, e), -k, Qm)
    return _mulmod(_inverse(am, p, Qm, e), pw, Qm)


def _twist_scalar(c, p, s, Q, e, raw):
    """<c>^{1-s} mod Q as a Python int."""
    if raw:
        br = c % Q
    elif p == 2:
        br = c if c % 4 == 1 else -c
    else:
        om = pow(c, p ** (e - 1), Q)
        br = c * pow(om, -1, Q)
    return pow(br % Q, 1 - s, Q)


def twisted_sum(chi, params, s, raw=False, _perturb=None):
    """Half-range sum H mod q p^n as a CycloElt of order chi.order.

    ``raw`` drops the Teichmuller factor from <a> (weights a^{-s}).
    ``_perturb`` adds 1 to lambda at one index (tests only).
    """
    p, c, f_n = params.p, params.c, params.f_n
    Q, e = params.modulus, params.e
    if p != 2 and Q >= 1 << 32:
        raise PrecisionOverflow(f"modulus {Q} too large for 64-bit products")
    d, cond = chi.order, chi.conductor
    table = chi.table
    finv = pow(f_n % c, -1, c) if c > 1 else 0
    half = f_n // 2
    g = (1 - c) // 2
    sums = [0] * d
    for a0 in range(1, half + 1, BLOCK):
        a = np.arange(a0, min(a0 + BLOCK, half + 1), dtype=np.int64)
        cls = table[a % cond]
        keep = (cls >= 0) & (a % p != 0)
        a = a[keep]
        cls = cls[keep]
        lam = ((-(a % c)) * finv) % c
        if _perturb is not None and len(a) and a0 <= _perturb < a0 + BLOCK:
            lam = lam + (a == _perturb)
        coef = lam + g
        w = _weights(a, p, s, Q, e, raw)
        if p == 2:
            prod = coef.astype(np.int64).view(np.uint64) * w
        else:
            prod = ((coef % Q).astype(np.uint64) * w) % np.uint64(Q)
        for k in range(d):
            sums[k] += int(prod[cls == k].sum())
    sums = [x % Q for x in sums]
    return CycloElt(d, reduce_exponent_sums(sums), Q)


def twist_factor(chi, params, s, raw=False):
    Q, e = params.modulus, params.e
    t = _twist_scalar(params.c, params.p, s, Q, e, raw)
    z = CycloElt.zeta_power(chi.order, chi.exponent(params.c), Q)
    return CycloElt.constant(chi.order, 1, Q) - z * t


def _norm_val(x, d, e):
    """v_p(N(x)) when it is determined by x mod p^e, else None."""
    n = cyclo_norm(x.lift())
    if n == 0:
        return None
    v = padic_valuation(n, _prime_of(x.modulus))
    return v if v < (d - 1) * e else None


def _prime_of(Q):
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
        if Q % p == 0:
            return p
    raise ValueError("modulus has no small prime factor")


def reading(chi, params, s, raw=False, _perturb=None):
    """(H, reported valuation or None, twist valuation) at one level."""
    H = twisted_sum(chi, params, s, raw, _perturb)
    tf = twist_factor(chi, params, s, raw)
    d, e = chi.order, params.e
    vh = _norm_val(H, d, e)
    vt = _norm_val(tf, d, e)
    if vt is None:
        raise NoValidTwist(f"twist factor for c={params.c} is not invertible enough")
    return H, (None if vh is None else vh - vt), vt


def l_value_valuation(chi, p, s, schedule=None, c=None, raw=False):
    """Stable v(1/2 L_p(s, chi)) (norm form for d > 2) as a MeasureValue."""
    n0, n_max, guard = schedule or default_schedule(chi, p)
    if c is None:
        c = choose_c(chi, p)
    d = chi.order
    prev = None
    last = None
    for n in range(max(n0 - 1, 0), n_max + 1):
        try:
            params = MeasureParams.for_character(chi, p, n, c)
        except ValueError:
            continue
        H, v, vt = reading(chi, params, s, raw)
        ok = v is not None and v <= (d - 1) * n - guard
        if n >= n0 and ok and v == prev:
            return MeasureValue(H, s, params, v, True, vt, raw)
        prev = v if ok else None
        last = v
    if last is None or last > (d - 1) * n_max - guard:
        raise BelowPrecision(f"valuation exceeds the precision of level n_max={n_max}")
    raise Unstable(n_max)


def normalized_value(mv, chi):
    """H / twist factor mod Q; needs a unit twist factor."""
    if mv.twist_valuation:
        raise ValueError("twist factor is not a unit")
    tf = twist_factor(chi, mv.params, mv.s, mv.raw)
    return mv.value * inverse_mod(tf, mv.params.modulus)


def norm_compatibility_check(chi, p, c, n, s_values=(-1, 0, 1, 2), _perturb=None):
    """Level n+1 full sum reduces to the level-n full sum mod q p^n, for each s."""
    lo = MeasureParams.for_character(chi, p, n, c)
    hi = MeasureParams.for_character(chi, p, n + 1, c)
    Q = lo.modulus
    for s in s_values:
        a = twisted_sum(chi, lo, s)
        b = twisted_sum(chi, hi, s, _perturb=_perturb)
        # the full range is twice the half range for even chi
        if any((2 * x - 2 * y) % Q for x, y in zip(a.coeffs, b.coeffs)):
            return False
    return True
