"""Exact integer polynomial algebra.

Univariate polynomials over the integers are stored as tuples of ints,
constant term first, with a nonzero last entry unless the polynomial is
zero (the empty tuple).  Everything here is exact; no floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DegreeCapExceeded, InvalidInput

Coeffs = tuple[int, ...]

FACTOR_DEGREE_CAP = 16


def trim(coeffs) -> Coeffs:
    """Drop trailing zero coefficients."""
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, constant term first.

    A *canonical* polynomial has positive leading coefficient and
    content 1; minimal polynomials are always stored canonical.
    """

    coeffs: Coeffs

    def __init__(self, coeffs):
        object.__setattr__(self, "coeffs", trim(int(c) for c in coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def max_norm(self) -> int:
        return max((abs(c) for c in self.coeffs), default=0)

    def __call__(self, x):
        v = 0
        for c in reversed(self.coeffs):
            v = v * x + c
        return v

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        return IntPolynomial(mul(self.coeffs, other.coeffs))

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        return IntPolynomial(add(self.coeffs, other.coeffs))

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __str__(self) -> str:
        return serialize(self)

    def canonical(self) -> "IntPolynomial":
        """Primitive part with positive leading coefficient."""
        if self.is_zero():
            return self
        c = content(self.coeffs)
        if self.lead < 0:
            c = -c
        return IntPolynomial(tuple(x // c for x in self.coeffs))

    def is_canonical(self) -> bool:
        return (not self.is_zero()) and self.lead > 0 and content(self.coeffs) == 1


def poly(*coeffs) -> IntPolynomial:
    """Convenience constructor, constant term first."""
    return IntPolynomial(coeffs)


def serialize(f: IntPolynomial) -> str:
    """Comma-separated coefficient list, constant term first."""
    return ",".join(str(c) for c in f.coeffs)


def parse(text: str) -> IntPolynomial:
    try:
        return IntPolynomial(int(part) for part in text.split(","))
    except ValueError as exc:
        raise InvalidInput(f"bad polynomial string {text!r}") from exc


# ---------------------------------------------------------------------------
# tuple-level arithmetic (hot paths use these directly)

def add(a: Coeffs, b: Coeffs) -> Coeffs:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return trim(out)


def sub(a: Coeffs, b: Coeffs) -> Coeffs:
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, x in enumerate(b):
        out[i] -= x
    return trim(out)


def mul(a: Coeffs, b: Coeffs) -> Coeffs:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def scale(a: Coeffs, k: int) -> Coeffs:
    if k == 0:
        return ()
    return tuple(c * k for c in a)


def content(a) -> int:
    g = 0
    for c in a:
        g = math.gcd(g, c)
        if g == 1:
            return 1
    return g


def derivative(a: Coeffs) -> Coeffs:
    return tuple(i * c for i, c in enumerate(a) if i > 0)


def reverse(a: Coeffs) -> Coeffs:
    """x^deg * f(1/x)."""
    return trim(reversed(a))


def divmod_exact(a: Coeffs, b: Coeffs):
    """Quotient and remainder when they exist over the integers.

    Returns None when some division step is not exact (so b does not
    divide a over Z with the tried quotient); valid whenever b is monic
    or divides a exactly.
    """
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db, lb = len(b) - 1, b[-1]
    q = [0] * max(0, len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = r[i]
        if c == 0:
            continue
        if c % lb:
            return None
        c //= lb
        q[i - db] = c
        for j, y in enumerate(b):
            r[i - db + j] -= c * y
    return tuple(q), trim(r)


def divides(b: Coeffs, a: Coeffs) -> bool:
    res = divmod_exact(a, b)
    return res is not None and not res[1]


def pseudo_rem(a: Coeffs, b: Coeffs) -> Coeffs:
    """Pseudo-remainder of a by b (b nonzero)."""
    da, db = len(a) - 1, len(b) - 1
    if da < db:
        return tuple(a)
    lb = b[-1]
    r = list(a)
    for i in range(da, db - 1, -1):
        c = r[i]
        if c == 0:
            for j in range(len(r)):
                r[j] *= lb
            r[i] = 0
            continue
        for j in range(len(r)):
            r[j] *= lb
        for j, y in enumerate(b):
            r[i - db + j] -= c * y
        r[i] = 0
    return trim(r[:db] if db else [])


def gcd_z(a: Coeffs, b: Coeffs) -> Coeffs:
    """Gcd over Z, returned primitive with positive lead."""
    a, b = trim(a), trim(b)
    if not a:
        g = b
    elif not b:
        g = a
    else:
        ca, cb = content(a), content(b)
        cg = math.gcd(ca, cb)
        a = tuple(x // ca for x in a)
        b = tuple(x // cb for x in b)
        if len(a) < len(b):
            a, b = b, a
        while b:
            r = pseudo_rem(a, b)
            if r:
                cr = content(r)
                r = tuple(x // cr for x in r)
            a, b = b, r
        g = scale(a, cg)
    if g and g[-1] < 0:
        g = tuple(-c for c in g)
    return g


def squarefree_decomposition(a: Coeffs) -> list[tuple[Coeffs, int]]:
    """Yun's algorithm: [(g_i, i)] with a = content * prod g_i^i, g_i squarefree."""
    a = trim(a)
    if len(a) <= 1:
        return []
    c = content(a)
    if a[-1] < 0:
        c = -c
    a = tuple(x // c for x in a)
    out = []
    d = derivative(a)
    g = gcd_z(a, d)
    w = divmod_exact(a, g)[0]
    y = divmod_exact(d, g)[0]
    i = 1
    z = sub(y, derivative(w))
    while z:
        g_i = gcd_z(w, z)
        if len(g_i) > 1:
            out.append((g_i, i))
        w = divmod_exact(w, g_i)[0]
        y = divmod_exact(z, g_i)[0]
        z = sub(y, derivative(w))
        i += 1
    if len(w) > 1:
        out.append((w, i))
    return out


def _poly_mod_q(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    """Remainder of a by b over Q."""
    r = list(a)
    db = len(b) - 1
    inv = 1 / b[-1]
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i] * inv
        if c:
            for j in range(db + 1):
                r[i - db + j] -= c * b[j]
        r[i] = Fraction(0)
    while r and not r[-1]:
        r.pop()
    return r


def resultant(a: Coeffs, b: Coeffs) -> int:
    """Resultant over Z (Euclidean reduction over Q, exact)."""
    A = [Fraction(c) for c in trim(a)]
    B = [Fraction(c) for c in trim(b)]
    if not A or not B:
        return 0
    res = Fraction(1)
    while True:
        da, db = len(A) - 1, len(B) - 1
        if da == 0:
            res *= A[0] ** db
            break
        if db == 0:
            res *= B[0] ** da
            break
        if da < db:
            if (da * db) % 2:
                res = -res
            A, B = B, A
            continue
        R = _poly_mod_q(A, B)
        if (da * db) % 2:
            res = -res
        if not R:
            return 0
        res *= B[-1] ** (da - (len(R) - 1))
        A, B = B, R
    assert res.denominator == 1
    return int(res)


def poly_discriminant(f: IntPolynomial) -> int:
    """disc(f) = (-1)^{d(d-1)/2} res(f, f') / lead(f)."""
    d = f.degree
    if d < 1:
        raise InvalidInput("discriminant needs degree >= 1")
    r = resultant(f.coeffs, derivative(f.coeffs))
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    q, rem = divmod(sign * r, f.lead)
    assert rem == 0
    return q


# ---------------------------------------------------------------------------
# cyclotomic polynomials

@lru_cache(maxsize=None)
def euler_phi(k: int) -> int:
    n, result, p = k, k, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


@lru_cache(maxsize=None)
def cyclotomic(k: int) -> Coeffs:
    """Coefficients of the k-th cyclotomic polynomial."""
    if k == 1:
        return (-1, 1)
    num = tuple([-1] + [0] * (k - 1) + [1])  # x^k - 1
    for d in range(1, k):
        if k % d == 0:
            num = divmod_exact(num, cyclotomic(d))[0]
    return num


def cyclotomic_indices_up_to_degree(d: int) -> list[int]:
    """All k with phi(k) <= d (phi(k) >= sqrt(k/2) bounds the search)."""
    return [k for k in range(1, 2 * d * d + 2) if euler_phi(k) <= d]


def strip_cyclotomic(f: IntPolynomial):
    """Split off cyclotomic factors: f = lead-part * prod Phi_k * remainder.

    Returns (indices multiset as a sorted list, remainder IntPolynomial).
    The remainder has no root of unity as a root; the sign and content of
    f are carried on the remainder so that the product identity is exact.
    """
    if f.is_zero():
        raise InvalidInput("zero polynomial")
    rem = list(f.coeffs)
    indices: list[int] = []
    if len(rem) > 1:
        for k in cyclotomic_indices_up_to_degree(f.degree):
            phi_k = cyclotomic(k)
            while len(rem) - 1 >= len(phi_k) - 1:
                d = divmod_exact(tuple(rem), phi_k)
                if d is None or d[1]:
                    break
                rem = list(d[0])
                indices.append(k)
    return sorted(indices), IntPolynomial(rem)


# ---------------------------------------------------------------------------
# Kronecker symbol

def kronecker_symbol(D: int, m: int) -> int:
    """Kronecker symbol (D/m), defined for all integer pairs."""
    if m == 0:
        return 1 if D in (1, -1) else 0
    sign = 1
    if m < 0:
        m = -m
        if D < 0:
            sign = -sign
    # factor out twos of m
    t = 0
    while m % 2 == 0:
        m //= 2
        t += 1
    if t:
        if D % 2 == 0:
            return 0
        if t % 2 and D % 8 in (3, 5):
            sign = -sign
    # now m odd positive; Jacobi with reciprocity
    a = D % m
    while a:
        t = 0
        while a % 2 == 0:
            a //= 2
            t += 1
        if t % 2 and m % 8 in (3, 5):
            sign = -sign
        if a % 4 == 3 and m % 4 == 3:
            sign = -sign
        a, m = m % a, a
    return sign if m == 1 else 0


# ---------------------------------------------------------------------------
# factorization over the rationals (Zassenhaus)

_SMALL_PRIMES = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59,
                 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127]


def _mod_trim(a: list[int], p: int) -> list[int]:
    while a and a[-1] % p == 0:
        a.pop()
    return [c % p for c in a]


def _mod_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _mod_trim(out, p)


def _mod_divmod(a, b, p):
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    q = [0] * max(0, len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * inv % p
        if c:
            q[i - db] = c
            for j, y in enumerate(b):
                a[i - db + j] = (a[i - db + j] - c * y) % p
    return _mod_trim(q, p), _mod_trim(a[:db], p)


def _mod_gcd(a, b, p):
    a, b = _mod_trim(list(a), p), _mod_trim(list(b), p)
    while b:
        a, b = b, _mod_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _mod_pow(base, e, mod_poly, p):
    result = [1]
    base = _mod_divmod(base, mod_poly, p)[1]
    while e:
        if e & 1:
            result = _mod_divmod(_mod_mul(result, base, p), mod_poly, p)[1]
        base = _mod_divmod(_mod_mul(base, base, p), mod_poly, p)[1]
        e >>= 1
    return result


def _factor_mod_p(f: list[int], p: int) -> list[list[int]]:
    """Factor a squarefree monic polynomial mod p (Cantor-Zassenhaus).

    Deterministically seeded so identical inputs give identical output order.
    """
    # distinct-degree
    stages = []
    v = list(f)
    x = [0, 1]
    w = x
    d = 0
    while len(v) - 1 > 2 * (d + 1) - 1:
        d += 1
        w = _mod_pow(w, p, v, p)
        g = _mod_gcd(sub_mod(w, x, p), v, p)
        if len(g) > 1:
            stages.append((g, d))
            v = _mod_divmod(v, g, p)[0]
            w = _mod_divmod(w, v, p)[1]
    if len(v) > 1:
        stages.append((v, len(v) - 1))
    # equal-degree splitting
    factors = []
    seed = 0x9E3779B97F4A7C15
    for g, d in stages:
        work = [g]
        while work:
            h = work.pop()
            if len(h) - 1 == d:
                factors.append(h)
                continue
            while True:
                seed = (seed * 6364136223846793005 + 1442695040888963407) % (1 << 64)
                r = [(seed >> (8 * (i % 8))) % p for i in range(len(h) - 1)]
                r = _mod_trim(r, p)
                if len(r) < 1:
                    continue
                if p == 2:
                    t = r
                    for _ in range(d - 1):
                        t = add_mod(_mod_mul(t, t, p), r, p)
                        t = _mod_divmod(t, h, p)[1]
                    u = t
                else:
                    u = _mod_pow(r, (p**d - 1) // 2, h, p)
                    u = sub_mod(u, [1], p)
                s = _mod_gcd(u, h, p)
                if 1 < len(s) < len(h):
                    work.append(s)
                    work.append(_mod_divmod(h, s, p)[0])
                    break
    factors.sort()
    return factors


def add_mod(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] = (out[i] + y) % p
    return _mod_trim(out, p)


def sub_mod(a, b, p):
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, y in enumerate(b):
        out[i] = (out[i] - y) % p
    return _mod_trim(out, p)


def _hensel_lift_all(f: Coeffs, factors: list[list[int]], p: int, target: int):
    """Lift a monic modular factorization of monic f to mod p^k >= target.

    Linear lifting of the whole system at once; at the degrees used here
    quadratic lifting buys nothing.
    """
    q = p
    lifted = [list(g) for g in factors]
    # precompute the mod-p inverses of prod_{j != i} g_j modulo (g_i, p);
    # the factors mod p never change during a linear lift.
    invs = []
    for i in range(len(lifted)):
        others = [1]
        for j, h in enumerate(lifted):
            if j != i:
                others = _mod_mul(others, [c % p for c in h], p)
        gi = [c % p for c in lifted[i]]
        invs.append(_mod_inverse_poly(others, gi, p))
    while q < target:
        prod: Coeffs = (1,)
        for g in lifted:
            prod = mul(prod, tuple(g))
        diff = sub(f, prod)
        err = [(c // q) % p for c in diff]
        if any(err):
            for i, g in enumerate(lifted):
                gi = [c % p for c in g]
                d = _mod_divmod(_mod_mul(err, invs[i], p), gi, p)[1]
                for k, c in enumerate(d):
                    g[k] = g[k] + c * q
        q *= p
    return [trim(g) for g in lifted], q


def _mod_inverse_poly(a, m, p):
    """Inverse of a modulo (m, p) via extended Euclid."""
    r0, r1 = [c % p for c in m], _mod_divmod([c % p for c in a], [c % p for c in m], p)[1]
    s0, s1 = [], [1]
    while r1:
        q, r = _mod_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, sub_mod(s0, _mod_mul(q, s1, p), p)
    inv = pow(r0[0], -1, p)
    return _mod_trim([c * inv % p for c in s0], p)


def _centered(c: int, q: int) -> int:
    c %= q
    return c - q if 2 * c > q else c


def _factor_squarefree_z(f: Coeffs) -> list[Coeffs]:
    """Irreducible canonical factors of a primitive squarefree polynomial."""
    d = len(f) - 1
    if f[-1] < 0:
        f = tuple(-c for c in f)
    if d == 1:
        return [f]
    lc = f[-1]
    if lc == 1:
        return _factor_squarefree_monic(f)
    # monicize: F(x) = lc^{d-1} f(x/lc) is monic with the roots scaled by lc
    F = tuple(c * lc ** (d - 1 - i) for i, c in enumerate(f[:-1])) + (1,)
    out = []
    for G in _factor_squarefree_monic(F):
        g = trim(c * lc**i for i, c in enumerate(G))
        cg = content(g)
        if g[-1] < 0:
            cg = -cg
        out.append(tuple(c // cg for c in g))
    return out


def _factor_squarefree_monic(f: Coeffs) -> list[Coeffs]:
    """Zassenhaus for monic squarefree f: modular factor, lift, recombine."""
    d = len(f) - 1
    best = None
    tried = 0
    for p in _SMALL_PRIMES:
        fp = _mod_trim(list(f), p)
        if len(fp) != d + 1:
            continue
        if len(_mod_gcd(fp, _mod_trim(list(derivative(f)), p), p)) != 1:
            continue
        facs = _factor_mod_p(fp, p)
        tried += 1
        if best is None or len(facs) < len(best[1]):
            best = (p, facs)
        if len(facs) <= 2 or tried >= 4:
            break
    if best is None:
        raise InvalidInput("no usable prime found for factorization")
    p, facs = best
    if len(facs) == 1:
        return [f]
    bound = 2**d * max(abs(c) for c in f) * math.comb(d, d // 2)
    lifted, q = _hensel_lift_all(f, facs, p, 2 * bound + 1)
    remaining = list(range(len(lifted)))
    current = f
    out: list[Coeffs] = []
    r = 1
    while 2 * r <= len(remaining):
        found = True
        while found and 2 * r <= len(remaining):
            found = False
            for subset in _subsets(remaining, r):
                cand = (1,)
                for i in subset:
                    cand = tuple(c % q for c in mul(cand, tuple(lifted[i])))
                cand = trim(_centered(c, q) for c in cand)
                dm = divmod_exact(current, cand)
                if dm is not None and not dm[1]:
                    out.append(cand)
                    current = dm[0]
                    remaining = [i for i in remaining if i not in subset]
                    found = True
                    break
        r += 1
    if len(current) > 1:
        out.append(current)
    return out


def _subsets(items: list[int], r: int):
    from itertools import combinations

    return combinations(items, r)


def factor_z(f: IntPolynomial, degree_cap: int | None = FACTOR_DEGREE_CAP):
    """Exact factorization over Q.

    Returns (content, [(irreducible canonical IntPolynomial, multiplicity)]).
    content is a Fraction... for integer input it is the signed integer
    content; the product of content and the factor powers equals f.
    """
    if f.is_zero():
        raise InvalidInput("zero polynomial")
    if degree_cap is not None and f.degree > degree_cap:
        raise DegreeCapExceeded(f"degree {f.degree} above factorization cap {degree_cap}")
    c = content(f.coeffs) if not f.is_zero() else 0
    if f.lead < 0:
        c = -c
    if f.degree == 0:
        return Fraction(f.coeffs[0]), []
    out: list[tuple[IntPolynomial, int]] = []
    for g, m in squarefree_decomposition(f.coeffs):
        for h in _factor_squarefree_z(g):
            out.append((IntPolynomial(h), m))
    out.sort(key=lambda t: (t[0].degree, t[0].coeffs))
    return Fraction(c), out


def factor_over_rationals(f: IntPolynomial):
    """Spec surface for factorization: degree cap 16."""
    return factor_z(f, degree_cap=FACTOR_DEGREE_CAP)


def is_irreducible(f: IntPolynomial) -> bool:
    """Irreducibility over Q for a canonical polynomial of degree >= 1.

    Fast modular proof first, full factorization as fallback.
    """
    d = f.degree
    if d < 1:
        return False
    if d == 1:
        return True
    if f.coeffs[0] == 0:
        return False
    # quick rational root screen for low degree
    if _has_rational_root(f):
        return False
    if d == 2 or d == 3:
        return True  # no rational root suffices
    # try to prove irreducibility modulo a few primes
    for p in (3, 5, 7, 11, 13):
        if f.lead % p == 0:
            continue
        fp = _mod_trim(list(f.coeffs), p)
        if len(fp) != d + 1:
            continue
        if len(_mod_gcd(fp, _mod_trim(list(derivative(f.coeffs)), p), p)) != 1:
            continue
        if _is_irreducible_mod_p(fp, p):
            return True
    _, factors = factor_z(f)
    return len(factors) == 1 and factors[0][1] == 1 and factors[0][0].degree == d


def _has_rational_root(f: IntPolynomial) -> bool:
    a0, an = f.coeffs[0], f.lead
    for p in _divisors(abs(a0)):
        for q in _divisors(abs(an)):
            if math.gcd(p, q) != 1:
                continue
            # f(p/q) = 0 <=> sum c_i p^i q^{d-i} = 0
            for s in (p, -p):
                acc = 0
                pw_p = 1
                d = f.degree
                for i, c in enumerate(f.coeffs):
                    acc += c * pw_p * q ** (d - i)
                    pw_p *= s
                if acc == 0:
                    return True
    return False


def _divisors(n: int) -> list[int]:
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return sorted(out)


def _is_irreducible_mod_p(fp: list[int], p: int) -> bool:
    """True iff the squarefree monic-izable fp is irreducible mod p."""
    d = len(fp) - 1
    inv = pow(fp[-1], -1, p)
    fp = [c * inv % p for c in fp]
    x = [0, 1]
    w = x
    for k in range(1, d // 2 + 1):
        w = _mod_pow(w, p, fp, p)
        if len(_mod_gcd(sub_mod(w, x, p), fp, p)) > 1:
            return False
    return True


# ---------------------------------------------------------------------------
# Graeffe root-squaring (shared by the certified Mahler bounds)

def graeffe_step(a: Coeffs) -> Coeffs:
    """Coefficients of (+-) f(x) f(-x) viewed in x^2: roots get squared."""
    even = a[0::2]
    odd = a[1::2]
    e2 = mul(even, even)
    o2 = mul(odd, odd)
    # f(x)f(-x) = E(x^2)^2 - x^2 O(x^2)^2 up to sign of the leading term
    out = sub(e2, (0,) + o2)
    if out and out[-1] < 0:
        out = tuple(-c for c in out)
    return out
