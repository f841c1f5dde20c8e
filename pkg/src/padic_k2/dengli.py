"""Oracles for real quadratic fields and the Deng-Li family verifier.

A Deng-Li modulus is m = l1 l2 ... ln, n even, with l1 = 3 mod 8, every other
li = 5 mod 8, (l1/l2) = -1, (l1/lj) = 1 for j >= 3 and (li/lj) = -1 for
2 <= i < j.  Primes are always returned in that order: l1, l2, then the rest
ascending.
"""
from dataclasses import dataclass, field
from math import gcd, isqrt

import mpmath
import numpy as np

from .arith import (
    factorize,
    fundamental_unit,
    is_prime,
    jacobi,
    padic_valuation,
    require_squarefree,
)
from .characters import quadratic_character
from .errors import LemmaViolated, NotDengLi, PrecisionTooLow, SearchExhausted
from .invariants import EQUALITY, FieldDescriptor, classify, measure_at


def legendre(a, ell):
    return jacobi(a % ell, ell)


def parse_dengli(m):
    """Ordered primes (l1, l2, l3, ...) of a Deng-Li modulus, else NotDengLi."""
    if m < 2 or m % 2 == 0:
        raise NotDengLi(f"{m} is not odd")
    fac = factorize(m)
    if any(e > 1 for e in fac.values()):
        raise NotDengLi(f"{m} is not squarefree")
    primes = sorted(fac)
    n = len(primes)
    if n % 2:
        raise NotDengLi(f"{m} has an odd number {n} of prime factors")
    threes = [ell for ell in primes if ell % 8 == 3]
    fives = [ell for ell in primes if ell % 8 == 5]
    if len(threes) != 1 or len(fives) != n - 1:
        raise NotDengLi(f"{m}: need one prime 3 mod 8 and the rest 5 mod 8")
    l1 = threes[0]
    l2s = [ell for ell in fives if legendre(l1, ell) == -1]
    if len(l2s) != 1:
        raise NotDengLi(f"{m}: (l1/lj) = -1 must hold for exactly one j")
    for i, x in enumerate(fives):
        for y in fives[i + 1 :]:
            if legendre(x, y) != -1:
                raise NotDengLi(f"{m}: ({x}/{y}) != -1")
    l2 = l2s[0]
    return [l1, l2] + [ell for ell in fives if ell != l2]


def is_dengli(m):
    try:
        parse_dengli(m)
    except NotDengLi:
        return False
    return True


def dengli_search(n, bound):
    """All Deng-Li moduli with n prime factors up to bound, ascending."""
    if n < 2 or n % 2:
        raise ValueError("n must be even and >= 2")
    limit = bound // 3
    fives = [ell for ell in range(5, limit + 1, 8) if is_prime(ell)]
    threes = [ell for ell in range(3, limit + 1, 8) if is_prime(ell)]
    out = []

    def extend(chosen, start, prod):
        if len(chosen) == n - 1:
            for l1 in threes:
                if l1 * prod > bound:
                    break
                signs = [legendre(l1, ell) for ell in chosen]
                if signs.count(-1) == 1:
                    out.append(l1 * prod)
            return
        for idx in range(start, len(fives)):
            ell = fives[idx]
            # the remaining factors are at least this large, and l1 >= 3
            if 3 * prod * ell ** (n - 1 - len(chosen)) > bound:
                break
            if all(legendre(ell, x) == -1 for x in chosen):
                extend(chosen + [ell], idx + 1, prod * ell)

    extend([], 0, 1)
    return sorted(out)


# Hilbert symbols and the symbol matrix


def hilbert_symbol(a, b, v):
    """(a, b)_v for nonzero integers and a prime v."""
    al, u = _split(a, v)
    be, w = _split(b, v)
    if v == 2:
        eps = lambda x: ((x - 1) // 2) % 2
        omg = lambda x: ((x * x - 1) // 8) % 2
        e = eps(u) * eps(w) + al * omg(w) + be * omg(u)
        return -1 if e % 2 else 1
    sign = -1 if (al * be * ((v - 1) // 2)) % 2 else 1
    return sign * legendre(u, v) ** be * legendre(w, v) ** al


def _split(x, v):
    k = 0
    while x % v == 0:
        x //= v
        k += 1
    return k, x


@dataclass(frozen=True)
class SymbolMatrix:
    m: int
    places: tuple
    row_labels: tuple
    rows: tuple

    def row(self, label):
        return self.rows[self.row_labels.index(label)]


def hasse_matrix(m):
    """Rows x in (2, l1..ln, -1), columns v in (2, l1..ln): the symbol (x, m)_v.

    At v = 2 this is (x, -1)_2 since m = -1 mod 8.  Each row multiplies to +1.
    """
    primes = parse_dengli(m)
    places = (2, *primes)
    labels = (2, *primes, -1)
    rows = tuple(tuple(hilbert_symbol(x, m, v) for v in places) for x in labels)
    for lab, r in zip(labels, rows):
        if np.prod(r) != 1:
            raise LemmaViolated(f"row {lab} of the symbol matrix breaks the product formula")
    return SymbolMatrix(m, places, labels, rows)


def f2_rank(matrix):
    """Rank over F2 of a +-1 matrix (-1 -> 1)."""
    rows = matrix.rows if isinstance(matrix, SymbolMatrix) else matrix
    vecs = [sum(1 << j for j, x in enumerate(r) if x == -1) for r in rows]
    rank = 0
    basis = []
    for v in vecs:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            rank += 1
    return rank


# class numbers


def maximal_order_unit_log(m):
    """log of the fundamental unit of the maximal order of Q(sqrt m)."""
    u = fundamental_unit(m)
    with mpmath.workdps(40):
        log_eps = mpmath.log(mpmath.mpf(u.a) + mpmath.mpf(u.b) * mpmath.sqrt(m))
        if m % 4 == 1:
            # Z[sqrt m] unit may be the cube of a half-integral unit eta:
            # tr(eta^3) = t^3 - 3 N(eta) t with t = tr(eta)
            n = u.norm
            t0 = int(mpmath.nint(mpmath.cbrt(2 * u.a)))
            for t in range(t0 - 2, t0 + 3):
                if t % 2 and t ** 3 - 3 * n * t == 2 * u.a:
                    y2, r = divmod(t * t - 4 * n, m)
                    if r == 0 and isqrt(y2) ** 2 == y2:
                        return log_eps / 3
        return log_eps


@dataclass(frozen=True)
class ClassNumber:
    h: int
    residual: float


def class_number_analytic(m):
    """h = -(1 / log eps) sum_{a < D/2} chi(a) log sin(pi a / D) for even chi."""
    require_squarefree(m)
    chi = quadratic_character(m)
    D = chi.conductor
    a = np.arange(1, (D + 1) // 2, dtype=np.int64)
    k = chi.table[a]
    sign = np.where(k == 0, 1, np.where(k == 1, -1, 0)).astype(np.longdouble)
    x = np.sin(np.pi * a.astype(np.longdouble) / np.longdouble(D))
    total = -np.sum(sign * np.log(x))
    h_real = float(total) / float(maximal_order_unit_log(m))
    h = round(h_real)
    residual = abs(h_real - h)
    if residual >= 1e-6 or h < 1:
        raise PrecisionTooLow(f"m={m}: h estimate {h_real} has residual {residual}")
    return ClassNumber(h, residual)


# principal relation p l2 = (beta)


@dataclass(frozen=True)
class RelationWitness:
    u: int
    v: int
    norm: int
    factors: tuple
    c: int
    method: str


def _relation(u, v, m, l2, method):
    N = u * u - m * v * v
    c2, r = divmod(abs(N), 2 * l2)
    c = isqrt(c2)
    if r or c * c != c2 or c % 2 == 0:
        raise LemmaViolated(f"m={m}: ({u}, {v}) has norm {N}, not +-2*{l2}*c^2")
    factors = tuple(sorted(factorize(abs(N)))) if N else ()
    return RelationWitness(u, v, N, factors, c, method)


def _search_small(m, l2, bound):
    """Smallest y <= bound with m y^2 +- 2 l2 a perfect square."""
    step = 1 << 16
    for y0 in range(1, bound + 1, step):
        y = np.arange(y0, min(y0 + step, bound + 1), dtype=np.int64)
        base = m * y * y
        for sgn in (1, -1):
            t = base + sgn * 2 * l2
            r = np.floor(np.sqrt(t.astype(np.float64))).astype(np.int64)
            for dr in (-1, 0, 1):
                hit = np.flatnonzero((r + dr) * (r + dr) == t)
                if len(hit):
                    i = int(hit[0])
                    yy = int(y[i])
                    xx = isqrt(m * yy * yy + sgn * 2 * l2)
                    if xx * xx == m * yy * yy + sgn * 2 * l2:
                        return xx, yy
    return None


def unit_relation(m):
    """Generator of p l2 from eps + s0, reduced to the smallest |v| in its unit orbit."""
    primes = parse_dengli(m)
    l2 = primes[1]
    eps = fundamental_unit(m)
    for s0 in (1, -1):
        x, y = eps.a + s0, eps.b
        g = gcd(x, y)
        x, y = x // g, y // g
        N = x * x - m * y * y
        if abs(N) == 2 * l2:
            break
    else:
        raise LemmaViolated(f"m={m}: neither eps+1 nor eps-1 gives p l2")
    best = (abs(y), abs(x), x, y)
    for conj in (1, -1):
        bx, by = x, conj * y
        for step in (1, -1):
            cx, cy = bx, by
            # multiply by eps^step while |v| decreases
            for _ in range(64):
                nx = cx * eps.a + step * cy * eps.b * m
                ny = cx * step * eps.b + cy * eps.a
                if abs(ny) >= abs(cy) and (abs(ny), abs(nx)) >= (abs(cy), abs(cx)):
                    break
                cx, cy = nx, ny
                best = min(best, (abs(cy), abs(cx), cx, cy))
    return _relation(best[2], best[3], m, l2, "unit")


def find_principal_relation(m, bound=10 ** 6, use_unit=True):
    """Witness (u, v) with u^2 - m v^2 = +-2 l2 c^2, c odd.

    The first witness by smallest v <= bound is returned; failing that, the
    relation read off from eps + s0 is used when ``use_unit`` is set.
    """
    l2 = parse_dengli(m)[1]
    hit = _search_small(m, l2, bound)
    if hit is not None:
        return _relation(hit[0], hit[1], m, l2, "search")
    if use_unit:
        return unit_relation(m)
    raise SearchExhausted(bound)


def same_ideal(w1, w2, m):
    """True when the two generators differ by a unit of Z[sqrt m]."""
    if abs(w1.norm) != abs(w2.norm):
        return False
    N = abs(w2.norm)
    # w1 * conj(w2) / N(w2) must be integral
    x = w1.u * w2.u - m * w1.v * w2.v
    y = -w1.u * w2.v + w1.v * w2.u
    return x % N == 0 and y % N == 0


# regulator


def _log2adic_norm_valuation(m, z0, z1, prec=64):
    """v_2(N(log(1 + z))) for z = z0 + z1 sqrt m with z = 0 mod 8."""
    Q = 1 << prec
    s0 = s1 = 0
    p0, p1 = 1, 0
    k = 0
    while True:
        k += 1
        p0, p1 = (p0 * z0 + p1 * z1 * m), (p0 * z1 + p1 * z0)
        if 3 * k - k.bit_length() > prec + 8:
            break
        t = padic_valuation(k, 2)
        kk = k >> t
        inv = pow(kk, -1, Q)
        sgn = 1 if k % 2 else -1
        s0 += sgn * ((p0 >> t) * inv)
        s1 += sgn * ((p1 >> t) * inv)
    N = (s0 * s0 - m * s1 * s1) % Q
    if N == 0:
        raise PrecisionTooLow("2-adic logarithm vanishes to working precision")
    return padic_valuation(N, 2)


@dataclass(frozen=True)
class RegulatorReport:
    a: int
    b: int
    norm: int
    b_odd: bool
    a_shape: bool
    square_congruence: bool
    v_log: int
    v_R: int
    h2_valuation: int
    vT_formula: int

    @property
    def ok(self):
        return self.norm == 1 and self.b_odd and self.a_shape and self.square_congruence and self.v_R == 0


def regulator_check(m, h=None):
    """Unit lemmas, eps^2 = -1 + 8 sqrt m mod 16, and v_2(#T) = v_2(h) + v_2(R) + 1."""
    parse_dengli(m)
    eps = fundamental_unit(m)
    a, b = eps.a, eps.b
    b_odd = b % 2 == 1
    a_shape = a % 4 == 0 and (a // 4) % 2 == 1
    e0, e1 = a * a + m * b * b, 2 * a * b
    square_congruence = (e0 + 1) % 16 == 0 and (e1 - 8) % 16 == 0
    # log(eps^2) = log(-eps^2) and -eps^2 = 1 mod 8
    v_log_sq = _log2adic_norm_valuation(m, -e0 - 1, -e1)
    if v_log_sq % 2:
        raise LemmaViolated(f"m={m}: odd norm valuation of log eps^2")
    v_log = v_log_sq // 2 - 1
    v_R = v_log - 2
    if h is None:
        h = class_number_analytic(m).h
    h2 = padic_valuation(h, 2)
    rep = RegulatorReport(a, b, eps.norm, b_odd, a_shape, square_congruence, v_log, v_R, h2, h2 + v_R + 1)
    if not rep.ok:
        raise LemmaViolated(f"m={m}: unit lemmas fail {rep}")
    return rep


# full report


@dataclass
class DengLiReport:
    m: int
    primes: list
    conditions_ok: dict
    matrix: SymbolMatrix
    matrix_rank: int
    h: int
    h2_valuation: int
    vT: int
    vT_formula: int
    unit_shape: dict
    relation_witness: RelationWitness
    verdict: str
    C: int
    vK2: int
    predicted: dict
    gates: dict = field(default_factory=dict)

    @property
    def n(self):
        return len(self.primes)

    @property
    def ok(self):
        return all(self.gates.values())

    def to_json(self):
        w = self.relation_witness
        return {
            "m": self.m,
            "primes": self.primes,
            "conditions_ok": self.conditions_ok,
            "matrix_rank": self.matrix_rank,
            "h": self.h,
            "h2_valuation": self.h2_valuation,
            "vT": self.vT,
            "vT_formula": self.vT_formula,
            "unit_shape": self.unit_shape,
            "relation_witness": {"u": w.u, "v": w.v, "norm": w.norm, "factors": list(w.factors), "c": w.c},
            "verdict": self.verdict,
            "C": self.C,
            "vK2": self.vK2,
            "predicted": self.predicted,
            "gates": self.gates,
        }

    def relation_line(self):
        w = self.relation_witness
        D = [2] + self.primes
        return f"M={self.m} D={D}\n{list(w.factors)}\nu={w.u} v={w.v}  S={1 if w.norm > 0 else -1}"


def dengli_report(m, schedule=None, bound=10 ** 6):
    primes = parse_dengli(m)
    n = len(primes)
    l1, l2 = primes[0], primes[1]
    conditions = {
        "i": l1 % 8 == 3 and all(ell % 8 == 5 for ell in primes[1:]),
        "ii": legendre(l1, l2) == -1 and all(legendre(l1, ell) == 1 for ell in primes[2:]),
        "iii": all(legendre(x, y) == -1 for i, x in enumerate(primes[1:]) for y in primes[i + 2 :]),
    }
    mat = hasse_matrix(m)
    rank = f2_rank(mat)
    cn = class_number_analytic(m)
    reg = regulator_check(m, cn.h)
    fd = FieldDescriptor.quadratic(m)
    vT = measure_at(fd, 2, 1, schedule).valuation
    vR2 = measure_at(fd, 2, -1, schedule).valuation
    cl = classify(fd, 2, vT, vR2 + 2)
    witness = find_principal_relation(m, bound)
    shape = {"a_mod_8": reg.a % 8, "a_quarter_odd": reg.a_shape, "b_odd": reg.b_odd, "norm": reg.norm}
    predicted = {"H": n - 1, "T": n, "K2": n + 2}
    gates = {
        "conditions": all(conditions.values()),
        "rank": rank == n,
        "row_2_equals_row_l2": mat.row(2) == mat.row(l2),
        "h2": reg.h2_valuation == n - 1,
        "vT_measure": vT == n,
        "vT_formula": reg.vT_formula == n,
        "unit": reg.ok,
        "relation": abs(witness.norm) == 2 * l2 * witness.c ** 2,
        "equality": cl.verdict == EQUALITY and cl.C == n and cl.vK2 == n + 2,
    }
    report = DengLiReport(
        m, primes, conditions, mat, rank, cn.h, reg.h2_valuation, vT, reg.vT_formula,
        shape, witness, cl.verdict, cl.C, cl.vK2, predicted, gates,
    )
    if not report.ok:
        failed = [k for k, v in gates.items() if not v]
        raise LemmaViolated(f"m={m}: gates failed {failed}")
    return report
