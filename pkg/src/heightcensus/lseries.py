"""Certified Dirichlet series values at integer s >= 2.

Hurwitz zeta via Euler-Maclaurin with exact rational terms; the remainder
of the Euler-Maclaurin expansion of a completely monotone function is
bounded by the first omitted correction term, which keeps the enclosures
rigorous without any floating point.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .certified import CertifiedReal
from .errors import InvalidInput
from .intpoly import kronecker_symbol


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n (B_1 = -1/2 convention)."""
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(-1, 2)
    if n % 2:
        return Fraction(0)
    acc = Fraction(0)
    for j in range(n):
        acc += math.comb(n + 1, j) * bernoulli(j)
    return -acc / (n + 1)


def hurwitz_zeta(s: int, x: Fraction, eps: Fraction) -> CertifiedReal:
    """Enclosure of zeta(s, x) = sum (k+x)^-s for integer s >= 2, x in (0, 1]."""
    if s < 2:
        raise InvalidInput("hurwitz_zeta needs s >= 2")
    x = Fraction(x)
    if not 0 < x <= 1:
        raise InvalidInput("x must be in (0, 1]")
    eps = Fraction(eps)
    n_terms = 16
    while True:
        head = Fraction(0)
        for k in range(n_terms):
            head += Fraction(1) / (k + x) ** s
        nx = n_terms + x
        tail = Fraction(1) / ((s - 1) * nx ** (s - 1)) + Fraction(1, 2) / nx**s
        # Euler-Maclaurin correction terms
        rising = Fraction(s)
        corr = Fraction(0)
        m = 1
        while True:
            term = bernoulli(2 * m) / math.factorial(2 * m) * rising / nx ** (s + 2 * m - 1)
            nxt_rising = rising * (s + 2 * m - 1) * (s + 2 * m)
            nxt = bernoulli(2 * m + 2) / math.factorial(2 * m + 2) * nxt_rising / nx ** (s + 2 * m + 1)
            if abs(nxt) <= eps / 4 or m >= 60:
                corr += term
                err = abs(nxt)
                break
            corr += term
            rising = nxt_rising
            m += 1
        val = head + tail + corr
        if err <= eps / 2:
            return CertifiedReal(val - err, val + err)
        n_terms *= 2


def zeta(s: int, eps: Fraction = Fraction(1, 10**30)) -> CertifiedReal:
    """Enclosure of the Riemann zeta function at an integer s >= 2."""
    return hurwitz_zeta(s, Fraction(1), Fraction(eps))


def dirichlet_l(s: int, disc: int, eps: Fraction = Fraction(1, 10**30)) -> CertifiedReal:
    """Enclosure of L(s, chi_disc) for the Kronecker character of disc, s >= 2."""
    q = abs(disc)
    if q == 1:
        return zeta(s, eps)
    eps = Fraction(eps)
    total = CertifiedReal.exact(0)
    per = eps / (2 * q)
    qs = Fraction(q) ** s
    for a in range(1, q + 1):
        chi = kronecker_symbol(disc, a)
        if chi:
            h = hurwitz_zeta(s, Fraction(a, q), per)
            total = total + CertifiedReal.exact(chi) * h
    return total * CertifiedReal.exact(Fraction(1) / qs)


def dirichlet_l_partial_sum(s: int, disc: int, terms: int) -> CertifiedReal:
    """Plain partial sum with an integral tail bound; independent oracle."""
    acc = Fraction(0)
    for n in range(1, terms + 1):
        chi = kronecker_symbol(disc, n)
        if chi:
            acc += Fraction(chi) / Fraction(n) ** s
    tail = Fraction(1) / ((s - 1) * Fraction(terms) ** (s - 1))
    return CertifiedReal(acc - tail, acc + tail)


def zeta_partial_sum(s: int, terms: int) -> CertifiedReal:
    """Plain partial sum of zeta(s) with integral tail bound; oracle use."""
    acc = Fraction(0)
    for n in range(1, terms + 1):
        acc += Fraction(1) / Fraction(n) ** s
    lo_tail = Fraction(1) / ((s - 1) * Fraction(terms + 1) ** (s - 1))
    hi_tail = Fraction(1) / ((s - 1) * Fraction(terms) ** (s - 1))
    return CertifiedReal(acc + lo_tail, acc + hi_tail)
