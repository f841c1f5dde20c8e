"""Generalized Bernoulli numbers B_{m,chi} with values in Q(zeta_d).

Two independent routes:

* ``direct``: B_{m,chi} = f^(m-1) sum_a chi(a) B_m(a/f), expanded with the
  Bernoulli numbers into power sums of each exponent class.
* ``series``: the coefficient of t^m/m! in sum_a chi(a) t e^(at) / (e^(ft) - 1),
  where t / (e^(ft) - 1) is obtained by power-series division.  No Bernoulli
  number is used on this route.

The result is the coordinate vector of B_{m,chi} on 1, Y, ..., Y^(d-2).
"""
from fractions import Fraction
from math import comb, factorial

import numpy as np

from .arith import bernoulli_numbers
from .cyclo import reduce_exponent_sums
from .errors import NotPrimitive


def class_power_sums(chi, top):
    """P[k][i] = sum of a^i over 1 <= a < f with chi(a) = zeta^k, i = 0..top."""
    out = []
    for k in range(chi.order):
        members = np.flatnonzero(chi.table == k)
        pw = np.array([int(a) for a in members], dtype=object)
        base = pw.copy()
        sums = [len(members)]
        for _ in range(top):
            sums.append(int(pw.sum()) if len(pw) else 0)
            pw = pw * base
        out.append(sums)
    return out


def _direct(chi, m):
    f, d = chi.conductor, chi.order
    B = bernoulli_numbers(m)
    P = class_power_sums(chi, m)
    sums = []
    for k in range(d):
        s = Fraction(0)
        for j in range(m + 1):
            if B[j]:
                s += comb(m, j) * B[j] * Fraction(f) ** (j - 1) * P[k][m - j]
        sums.append(s)
    return reduce_exponent_sums(sums)


def _series_inverse(den, order):
    """1/den truncated at t^order (den[0] != 0)."""
    inv = [Fraction(0)] * (order + 1)
    inv[0] = 1 / den[0]
    for i in range(1, order + 1):
        acc = sum(den[j] * inv[i - j] for j in range(1, min(i, len(den) - 1) + 1))
        inv[i] = -acc / den[0]
    return inv


def _series(chi, m):
    f, d = chi.conductor, chi.order
    # (e^(ft) - 1)/t = sum_i f^(i+1) t^i / (i+1)!
    den = [Fraction(f ** (i + 1), factorial(i + 1)) for i in range(m + 1)]
    inv = _series_inverse(den, m)
    P = class_power_sums(chi, m)
    sums = []
    for k in range(d):
        # sum_{a in class k} e^(at) = sum_i P_k(i) t^i / i!
        coeff = sum(Fraction(P[k][i], factorial(i)) * inv[m - i] for i in range(m + 1))
        sums.append(coeff * factorial(m))
    return reduce_exponent_sums(sums)


def generalized_bernoulli(chi, m, method="direct"):
    if m < 1:
        raise ValueError("m must be positive")
    if not chi.is_primitive():
        raise NotPrimitive(f"{chi!r} is not a primitive nontrivial character")
    if method == "direct":
        return _direct(chi, m)
    if method == "series":
        return _series(chi, m)
    raise ValueError(f"unknown method {method!r}")
