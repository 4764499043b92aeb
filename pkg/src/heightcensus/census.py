"""Exhaustive censuses of algebraic numbers of bounded height, subfield
detection, and exact verification of the counting identities.

Enumeration is exact end to end: cheap integer Graeffe bounds decide
almost every candidate, and the rare boundary case falls back to the
exact Mahler comparison.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .certified import compare_mahler, quadratic_mahler_exact
from .errors import BoxTooLarge, DegreeCapExceeded, InvalidInput
from .intpoly import (
    Coeffs,
    IntPolynomial,
    content,
    factor_z,
    graeffe_step,
    is_irreducible,
    kronecker_symbol,
    mul,
    poly_discriminant,
    resultant,
    trim,
)
from .numberfield import (
    KPoly,
    NumberField,
    _ktrim,
    factor_over_field,
    factorize,
    field_equals,
    field_from_disc,
    is_fundamental_discriminant,
    kpoly,
    kpoly_key,
    kpoly_mul,
    make_field,
    relative_degree,
    squarefree_kernel,
)

DEFAULT_CANDIDATE_CAP = int(os.environ.get("CENSUS_CANDIDATE_CAP", str(10**9)))
GRAEFFE_MAX_STEPS = 11

CLASS_TAGS = ("not_primitive", "lower_degree", "reducible", "ncp", "cp")


# ---------------------------------------------------------------------------
# report structure

@dataclass
class FieldRow:
    disc: int
    z_k: int = 0
    zbar_k: int = 0
    tallies: dict | None = None  # cp/red/ncp/lower/not_primitive counts


@dataclass
class CensusReport:
    e: int
    n: int
    x: Fraction
    z: int = 0
    zbar: int = 0
    fields: dict = field(default_factory=dict)  # disc -> FieldRow
    candidates: int = 0
    polynomials: int = 0
    wall_time: float = 0.0
    collected: list = field(default_factory=list)  # (coeffs, subfield discs)

    @property
    def sum_z_k(self) -> int:
        return sum(r.z_k for r in self.fields.values())

    @property
    def sum_zbar_k(self) -> int:
        return sum(r.zbar_k for r in self.fields.values())

    def identity_residual(self) -> int:
        """Z - sum_K (Z_K - Zbar_K) - Zbar, exactly 0 when consistent."""
        return self.z - (self.sum_z_k - self.sum_zbar_k) - self.zbar

    def subfield_inequality_holds(self) -> bool:
        """Zbar <= sum Zbar_K <= 2^(en) Zbar."""
        s = self.sum_zbar_k
        return self.zbar <= s <= (1 << (self.e * self.n)) * self.zbar

    def merge(self, other: "CensusReport") -> None:
        self.z += other.z
        self.zbar += other.zbar
        self.candidates += other.candidates
        self.polynomials += other.polynomials
        for disc, row in other.fields.items():
            mine = self.fields.setdefault(disc, FieldRow(disc))
            mine.z_k += row.z_k
            mine.zbar_k += row.zbar_k
        self.collected.extend(other.collected)


# ---------------------------------------------------------------------------
# exact Mahler filter for enumeration

def _accept_mahler_d1(q: int, p: int, xn: Fraction) -> bool:
    return max(q, abs(p)) <= xn


def _accept_mahler_d2(a: int, b: int, c: int, tn: int, td: int) -> bool:
    """Exact M(ax^2+bx+c) <= tn/td for an integer quadratic with no
    rational root of modulus 1 (callers reject square discriminants and
    cyclotomics separately; the case analysis is valid regardless)."""
    disc = b * b - 4 * a * c
    if disc < 0:
        return max(a, c) * td <= tn
    f1 = a + b + c
    fm1 = a - b + c
    if f1 < 0 and fm1 < 0:
        return abs(c) * td <= tn
    if f1 < 0 or fm1 < 0:
        # M = (|b| + sqrt(disc))/2 <= T
        rest = 2 * tn - abs(b) * td
        if rest < 0:
            return False
        return disc * td * td <= rest * rest
    if abs(b) <= 2 * a:
        return a * td <= tn
    return abs(c) * td <= tn


class _GraeffeFilter:
    """Certified accept/reject of M(f) <= T with escalating root squaring."""

    def __init__(self, t: Fraction, degree: int):
        self.tn = t.numerator
        self.td = t.denominator
        self.degree = degree
        # powers of T^(2^k) as integer pairs, k = 0..GRAEFFE_MAX_STEPS
        self.pow_n = [self.tn]
        self.pow_d = [self.td]
        for _ in range(GRAEFFE_MAX_STEPS + 1):
            self.pow_n.append(self.pow_n[-1] ** 2)
            self.pow_d.append(self.pow_d[-1] ** 2)
        self.binom = math.comb(degree, degree // 2)
        self.t = t

    def decide(self, coeffs: Coeffs):
        """True / False when certified, None when escalation ran out."""
        g = coeffs
        for k in range(GRAEFFE_MAX_STEPS + 1):
            pn, pd = self.pow_n[k], self.pow_d[k]
            l2 = 0
            inf = 0
            for c in g:
                l2 += c * c
                if c > inf:
                    inf = c
                elif -c > inf:
                    inf = -c
            # accept: l2norm^2 <= T^(2^(k+1))
            if l2 * self.pow_d[k + 1] <= self.pow_n[k + 1]:
                return True
            # reject: infnorm > binom * T^(2^k)
            if inf * pd > self.binom * pn:
                return False
            if k < GRAEFFE_MAX_STEPS:
                g = graeffe_step(g)
        return None

    def accept(self, coeffs: Coeffs) -> bool:
        d = self.decide(coeffs)
        if d is not None:
            return d
        return compare_mahler(IntPolynomial(coeffs), self.t) in ("LT", "EQ")


# ---------------------------------------------------------------------------
# irreducibility specialized to low degree

def _has_small_rational_root(coeffs: Coeffs) -> bool:
    a0, lead = coeffs[0], coeffs[-1]
    if a0 == 0:
        return True
    d = len(coeffs) - 1
    for p in _divisors_abs(a0):
        for q in _divisors_abs(lead):
            if math.gcd(p, q) != 1:
                continue
            for s in (p, -p):
                acc = 0
                pw = 1
                for i, c in enumerate(coeffs):
                    acc += c * pw * q ** (d - i)
                    pw *= s
                if acc == 0:
                    return True
    return False


def _divisors_abs(n: int) -> list[int]:
    n = abs(n)
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return out


def _mod_degree_profile(coeffs: Coeffs, p: int):
    """Distinct-degree profile of f mod p, or None when unusable
    (lead vanishes or f mod p not squarefree)."""
    f = [c % p for c in coeffs]
    if f[-1] == 0:
        return None
    fp = list(f)
    # make monic
    inv = pow(fp[-1], -1, p)
    fp = [c * inv % p for c in fp]
    from .intpoly import _mod_divmod, _mod_gcd, _mod_pow, _mod_trim, sub_mod

    der = _mod_trim([i * fp[i] % p for i in range(1, len(fp))], p)
    if len(_mod_gcd(fp, der, p)) != 1:
        return None
    profile = []
    v = fp
    x = [0, 1]
    w = x
    dd = 0
    while len(v) - 1 >= 2 * (dd + 1):
        dd += 1
        w = _mod_pow(w, p, v, p)
        g = _mod_gcd(sub_mod(w, x, p), v, p)
        if len(g) > 1:
            profile.extend([dd] * ((len(g) - 1) // dd))
            v = _mod_divmod(v, g, p)[0]
            w = _mod_divmod(w, v, p)[1]
    if len(v) > 1:
        profile.append(len(v) - 1)
    return sorted(profile)


def _quartic_quad_factor_exists(a0, a1, a2, a3, a4) -> bool:
    """Exhaustive test for a factorization into two integer quadratics
    (leads positive WLOG); rational-root factorizations are handled
    separately by the caller."""
    l2 = a0 * a0 + a1 * a1 + a2 * a2 + a3 * a3 + a4 * a4
    scan_bound = 4 * (1 + math.isqrt(l2))
    for e in _divisors_abs(a4):
        w = a4 // e
        for v0 in _divisors_abs(a0):
            for v in (v0, -v0):
                t, rem = divmod(a0, v)
                if rem:
                    continue
                den = t * e - v * w
                if den != 0:
                    num = a1 * e - v * a3
                    if num % den:
                        continue
                    u = num // den
                    se = a3 - w * u
                    if se % e:
                        continue
                    s = se // e
                    if e * t + w * v + u * s == a2:
                        return True
                else:
                    for u in range(-scan_bound, scan_bound + 1):
                        se = a3 - w * u
                        if se % e:
                            continue
                        s = se // e
                        if e * t + w * v + u * s == a2 and u * t + s * v == a1:
                            return True
    return False


def quartic_is_irreducible(coeffs: Coeffs) -> bool:
    """Complete irreducibility decision for a primitive quartic."""
    a0, a1, a2, a3, a4 = coeffs
    if a0 == 0:
        return False
    for p in (3, 5, 7, 11, 13):
        prof = _mod_degree_profile(coeffs, p)
        if prof == [4]:
            return True
    if _has_small_rational_root(coeffs):
        return False
    return not _quartic_quad_factor_exists(a0, a1, a2, a3, a4)


def is_irreducible_fast(coeffs: Coeffs) -> bool:
    """Irreducibility over Q for canonical low-degree polynomials."""
    d = len(coeffs) - 1
    if d == 1:
        return True
    if coeffs[0] == 0:
        return False
    if d == 2:
        disc = coeffs[1] ** 2 - 4 * coeffs[2] * coeffs[0]
        if disc >= 0:
            s = math.isqrt(disc)
            if s * s == disc:
                return False
        return True
    if d == 3:
        return not _has_small_rational_root(coeffs)
    if d == 4:
        return quartic_is_irreducible(coeffs)
    for p in (3, 5, 7, 11, 13, 17):
        prof = _mod_degree_profile(coeffs, p)
        if prof == [d]:
            return True
    return is_irreducible(IntPolynomial(coeffs))


# ---------------------------------------------------------------------------
# enumeration

def box_estimate(d: int, x: Fraction) -> int:
    t = Fraction(x) ** d
    total = max(1, int(t))
    for i in range(1, d + 1):
        total *= 2 * int(math.comb(d, i) * t) + 1
    return total


def _coeff_bound(d: int, i: int, t: Fraction) -> int:
    """Largest allowed |a_{d-i}| = floor(binom(d,i) * T)."""
    return int(math.comb(d, i) * t)


def enumerate_numbers(
    d: int,
    x,
    candidate_cap: int = DEFAULT_CANDIDATE_CAP,
    collect: bool = True,
    lead_range: tuple[int, int] | None = None,
):
    """Canonical irreducible degree-d polynomials D with M(D) <= x^d.

    Returns (list of coefficient tuples if collect else None, count of
    polynomials, candidates scanned).  Each polynomial stands for d
    algebraic numbers (root indices 0..d-1).
    """
    x = Fraction(x)
    if d < 1 or d > 6:
        raise InvalidInput("enumerate_numbers supports degrees 1..6")
    if x < 1:
        raise InvalidInput("X must be >= 1")
    est = box_estimate(d, x)
    if est > candidate_cap:
        raise BoxTooLarge(est, candidate_cap)
    t = x**d
    polys: list[Coeffs] | None = [] if collect else None
    count = 0
    scanned = 0

    lead_lo, lead_hi = lead_range if lead_range else (1, int(t))
    if d == 1:
        xn = x
        for q in range(lead_lo, lead_hi + 1):
            for p in range(-int(xn), int(xn) + 1):
                scanned += 1
                if max(q, abs(p)) <= xn and math.gcd(q, abs(p)) == 1:
                    count += 1
                    if collect:
                        polys.append((p, q))
        return polys, count, scanned

    if d == 2:
        tn, td = t.numerator, t.denominator
        bmax = _coeff_bound(2, 1, t)
        cmax = _coeff_bound(2, 2, t)
        for a in range(lead_lo, lead_hi + 1):
            for b in range(-bmax, bmax + 1):
                for c in range(-cmax, cmax + 1):
                    scanned += 1
                    disc = b * b - 4 * a * c
                    if disc == 0:
                        continue
                    if not _accept_mahler_d2(a, b, c, tn, td):
                        continue
                    if math.gcd(math.gcd(a, abs(b)), abs(c)) != 1:
                        continue
                    if disc > 0:
                        s = math.isqrt(disc)
                        if s * s == disc:
                            continue
                    count += 1
                    if collect:
                        polys.append((c, b, a))
        return polys, count, scanned

    survivors: list[Coeffs] = []
    if d == 4:
        scanned = _enumerate_quartic(t, lead_lo, lead_hi, survivors)
    else:
        filt = _GraeffeFilter(t, d)
        bounds = [_coeff_bound(d, d - i, t) for i in range(d)]
        scanned = _enumerate_generic(d, bounds, lead_lo, lead_hi, filt, survivors)
    count = len(survivors)
    return (survivors if collect else None), count, scanned


def _enumerate_quartic(t: Fraction, lead_lo: int, lead_hi: int, out: list) -> int:
    """Tight loop for the quartic box with an inline Graeffe filter."""
    tn, td = t.numerator, t.denominator
    pow_n = [tn]
    pow_d = [td]
    for _ in range(GRAEFFE_MAX_STEPS + 2):
        pow_n.append(pow_n[-1] ** 2)
        pow_d.append(pow_d[-1] ** 2)
    b3 = int(4 * t)
    b2 = int(6 * t)
    b1 = int(4 * t)
    b0 = int(t)
    gcd = math.gcd
    scanned = 0
    slow = []
    for a4 in range(lead_lo, lead_hi + 1):
        for a3 in range(-b3, b3 + 1):
            for a2 in range(-b2, b2 + 1):
                for a1 in range(-b1, b1 + 1):
                    scanned += 2 * b0 + 1
                    for a0 in range(-b0, b0 + 1):
                        if a0 == 0:
                            continue
                        c0, c1, c2, c3, c4 = a0, a1, a2, a3, a4
                        k = 0
                        ok = None
                        while True:
                            l2 = c0 * c0 + c1 * c1 + c2 * c2 + c3 * c3 + c4 * c4
                            if l2 * pow_d[k + 1] <= pow_n[k + 1]:
                                ok = True
                                break
                            m = -c0 if c0 < 0 else c0
                            v = -c1 if c1 < 0 else c1
                            if v > m:
                                m = v
                            v = -c2 if c2 < 0 else c2
                            if v > m:
                                m = v
                            v = -c3 if c3 < 0 else c3
                            if v > m:
                                m = v
                            if c4 > m:
                                m = c4
                            if m * pow_d[k] > 6 * pow_n[k]:
                                ok = False
                                break
                            if k >= GRAEFFE_MAX_STEPS:
                                break
                            c0, c1, c2, c3, c4 = (
                                c0 * c0,
                                2 * c0 * c2 - c1 * c1,
                                c2 * c2 + 2 * c0 * c4 - 2 * c1 * c3,
                                2 * c2 * c4 - c3 * c3,
                                c4 * c4,
                            )
                            k += 1
                        if ok is False:
                            continue
                        if gcd(gcd(gcd(gcd(a4, a3), a2), a1), a0) != 1:
                            continue
                        if ok is None:
                            slow.append((a0, a1, a2, a3, a4))
                            continue
                        if quartic_is_irreducible((a0, a1, a2, a3, a4)):
                            out.append((a0, a1, a2, a3, a4))
    for c in slow:
        if compare_mahler(IntPolynomial(c), t) in ("LT", "EQ"):
            if quartic_is_irreducible(c):
                out.append(c)
    out.sort()
    return scanned


def _enumerate_generic(d, bounds, lead_lo, lead_hi, filt, out) -> int:
    from itertools import product

    ranges = [range(-b, b + 1) for b in bounds]
    scanned = 0
    for lead in range(lead_lo, lead_hi + 1):
        for rest in product(*reversed(ranges)):
            scanned += 1
            c = rest[::-1] + (lead,)
            if c[0] == 0:
                continue
            if not filt.accept(c):
                continue
            if content(c) != 1:
                continue
            if not is_irreducible_fast(c):
                continue
            out.append(c)
    out.sort()
    return scanned


# ---------------------------------------------------------------------------
# subfield detection

def _fundamental_candidates_from_disc(disc: int) -> list[int]:
    """Fundamental discriminants Delta with Delta^2 | disc.

    Any subfield discriminant satisfies this by the discriminant tower
    formula, so the list is a complete candidate set."""
    if disc == 0:
        return []
    facs = dict(factorize(abs(disc)))
    odd = [p for p, e in facs.items() if p != 2 and e >= 2]
    e2 = facs.get(2, 0)
    cands = set()
    for mask in range(1 << len(odd)):
        m0 = 1
        for i, p in enumerate(odd):
            if mask >> i & 1:
                m0 *= p
        for sign in (1, -1):
            for tw in (1, 2):
                m = sign * tw * m0
                if m == 1:
                    continue
                cands.add(m if m % 4 == 1 else 4 * m)
    out = []
    for delta in sorted(cands, key=lambda v: (abs(v), v)):
        if is_fundamental_discriminant(delta) and disc % (delta * delta) == 0:
            out.append(delta)
    return out


def _reducible_over_quadratic_screen(coeffs: Coeffs, delta: int) -> bool:
    """False means certified irreducible over the field of disc delta.

    For p split in K and f mod p squarefree, a factorization of f over K
    into two half-degree pieces forces every irreducible factor mod p to
    have degree <= deg/2 and the degree profile to split into two equal
    halves."""
    d = len(coeffs) - 1
    half = d // 2
    tried = 0
    for p in (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if kronecker_symbol(delta, p) != 1:
            continue
        prof = _mod_degree_profile(coeffs, p)
        if prof is None:
            continue
        tried += 1
        if max(prof) > half or not _profile_splits(prof, half):
            return False
        if tried >= 8:
            break
    return True


def _profile_splits(profile: list[int], half: int) -> bool:
    """Can the degree profile be partitioned into two halves of size half?"""
    total = sum(profile)
    if total != 2 * half:
        return False
    achievable = 1  # bitmask of subset sums
    for v in profile:
        achievable |= achievable << v
    return bool(achievable >> half & 1)


def quadratic_subfields(D_coeffs: Coeffs, disc: int | None = None) -> list[int]:
    """Fundamental discriminants of the quadratic subfields of Q[x]/(D)."""
    D = IntPolynomial(D_coeffs)
    if disc is None:
        disc = poly_discriminant(D)
    out = []
    for delta in _fundamental_candidates_from_disc(disc):
        if not _reducible_over_quadratic_screen(D_coeffs, delta):
            continue
        K = field_from_disc(delta)
        _, factors = factor_over_field(D, K)
        if len(factors) > 1:
            out.append(delta)
    return out


def quartic_subfield_resolvent(D: IntPolynomial) -> bool:
    """Independent oracle: an irreducible quartic field has a quadratic
    subfield iff the resolvent cubic of the depressed quartic is
    reducible over Q (Galois closure D4 or abelian of order 4)."""
    if D.degree != 4:
        raise InvalidInput("need a quartic")
    a0, a1, a2, a3, a4 = D.coeffs
    # monicize and depress: y = x + a3/(4 a4); work with integers by scaling.
    # For the monic quartic x^4 + A x^3 + B x^2 + C x + E (A = a3/a4 etc.)
    # the resolvent cubic is z^3 - B z^2 + (AC - 4E) z - (A^2 E - 4BE + C^2).
    A = Fraction(a3, a4)
    B = Fraction(a2, a4)
    C = Fraction(a1, a4)
    E = Fraction(a0, a4)
    c2 = -B
    c1 = A * C - 4 * E
    c0 = -(A * A * E - 4 * B * E + C * C)
    cubic = _scaled_cubic(c0, c1, c2)
    return _has_small_rational_root(cubic.coeffs)


def _scaled_cubic(c0: Fraction, c1: Fraction, c2: Fraction) -> IntPolynomial:
    """Integer cubic with the same rational-root structure as
    z^3 + c2 z^2 + c1 z + c0 (substitute z -> z/den and clear)."""
    den = 1
    for c in (c0, c1, c2):
        den = den * c.denominator // math.gcd(den, c.denominator)
    return IntPolynomial((int(c0 * den**3), int(c1 * den**2), int(c2 * den), 1))


def _pair_polynomials(D: IntPolynomial):
    """Integer polynomials whose roots are the pairwise sums and products
    of the roots of the monicized D (used for index-2 subfield candidates;
    scaling the roots by the leading coefficient preserves the subfields
    they generate)."""
    d = D.degree
    lead = D.lead
    if lead != 1:
        coeffs = tuple(c * lead ** (d - 1 - i) for i, c in enumerate(D.coeffs[:-1])) + (1,)
        D = IntPolynomial(coeffs)
    coeffs = D.coeffs
    # sums: Res_y(D(y), D(z - y)) = prod_{i,j} (z - r_i - r_j); divide the
    # diagonal (roots 2 r_i) off and take the polynomial square root.
    sum_all = _resultant_compose(D, mode="sum")
    diag_sum = trim(tuple(c * 2 ** (d - i) for i, c in enumerate(coeffs)))
    qs = _poly_sqrt_of_quotient(sum_all, diag_sum)
    prod_all = _resultant_compose(D, mode="prod")
    diag_prod = graeffe_step(coeffs)  # roots r_i^2
    qp = _poly_sqrt_of_quotient(prod_all, diag_prod)
    return qs, qp


def _resultant_compose(D: IntPolynomial, mode: str) -> Coeffs:
    """Res_y(D(y), D(z-y)) or Res_y(D(y), y^d D(z/y)) via interpolation."""
    d = D.degree
    out_deg = d * d
    pts = range(-(out_deg // 2), out_deg - out_deg // 2 + 1)
    vals = []
    for z0 in pts:
        if mode == "sum":
            # D(z0 - y) as poly in y
            other = _compose_linear_int(D.coeffs, z0, -1)
        else:
            # y^d D(z0/y): coefficients reversed with powers of z0
            other = trim(tuple(D.coeffs[d - j] * z0 ** (d - j) for j in range(d + 1)))
            if not other:
                vals.append(0)
                continue
        vals.append(resultant(D.coeffs, other))
    return _interpolate_int(list(pts), vals, out_deg)


def _compose_linear_int(coeffs: Coeffs, a: int, b: int) -> Coeffs:
    """f(a + b y) as integer coefficients in y."""
    out = (coeffs[-1],)
    lin = (a, b)
    for c in reversed(coeffs[:-1]):
        out = mul(out, lin)
        out = tuple((out[0] + c,) + out[1:]) if out else (c,)
    return trim(out)


def _interpolate_int(pts: list[int], vals: list[int], deg: int) -> Coeffs:
    n = deg + 1
    coeffs = [Fraction(0)] * n
    for i in range(n):
        xi, yi = pts[i], vals[i]
        if yi == 0:
            continue
        num = [Fraction(1)]
        den = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            xj = pts[j]
            new = [Fraction(0)] * (len(num) + 1)
            for k, c in enumerate(num):
                new[k] -= c * xj
                new[k + 1] += c
            num = new
            den *= xi - xj
        w = Fraction(yi) / den
        for k, c in enumerate(num):
            coeffs[k] += w * c
    out = []
    for c in coeffs:
        assert c.denominator == 1
        out.append(int(c))
    return trim(out)


def _poly_sqrt_of_quotient(numer: Coeffs, denom: Coeffs) -> Coeffs | None:
    """Integer square root of numer/denom when it exists, else None."""
    from .intpoly import divmod_exact

    dm = divmod_exact(numer, denom)
    if dm is None or dm[1]:
        return None
    q = dm[0]
    return _poly_int_sqrt(q)


def _poly_int_sqrt(q: Coeffs) -> Coeffs | None:
    """g with g^2 = q over Z, or None."""
    if not q:
        return ()
    d = len(q) - 1
    if d % 2:
        return None
    lead = q[-1]
    s = math.isqrt(abs(lead))
    if s * s != lead:
        return None
    half = d // 2
    g = [0] * (half + 1)
    g[half] = s
    # solve coefficient by coefficient from the top
    for i in range(half - 1, -1, -1):
        # coefficient of z^(i + half) in g^2 must match q[i + half]
        acc = 0
        for j in range(i + 1, half + 1):
            k = i + half - j
            if i < k <= half:
                acc += g[j] * g[k]
        num = q[i + half] - acc
        if num % (2 * s):
            return None
        g[i] = num // (2 * s)
    gg = mul(tuple(g), tuple(g))
    if trim(gg) != trim(q):
        return None
    return tuple(g)


def subfields_of_degree(D: IntPolynomial, e: int) -> list[NumberField]:
    """All degree-e subfields of Q[x]/(D), deduplicated by field_equals.

    Supported: e = 1, e = 2 (any degree within factoring caps),
    e = deg D / 2, and e = deg D.
    """
    d = D.degree
    if d % e:
        raise InvalidInput("e must divide deg D")
    if not is_irreducible(D):
        raise InvalidInput("D must be irreducible")
    if e == 1:
        from .numberfield import rational_field

        return [rational_field()]
    if e == d:
        return [make_field(D)]
    if e == 2:
        return [field_from_disc(delta) for delta in quadratic_subfields(D.coeffs)]
    if e == d // 2:
        return [K for K, _count in _index2_subfields(D)]
    raise DegreeCapExceeded(f"subfields_of_degree supports e in (1, 2, {d//2}, {d})")


def _index2_subfields(D: IntPolynomial) -> list[tuple[NumberField, int]]:
    """Subfields of index 2 with their multiplicity as distinct subfields.

    Candidates are generated from the pairwise sum/product resolvents; a
    candidate K counts t/r subfields, t the number of roots of K's
    generator inside Q[x]/(D) and r the number inside K itself.
    """
    d = D.degree
    e = d // 2
    if d * d > 36:
        # the pair polynomials have degree d(d-1)/2 <= 15 for d <= 6
        pass
    qs, qp = _pair_polynomials(D)
    candidates: list[NumberField] = []
    for pairpoly in (qp, qs):
        if pairpoly is None:
            continue
        _, factors = factor_z(IntPolynomial(pairpoly), degree_cap=None)
        for f, _m in factors:
            if f.degree != e:
                continue
            K = make_field(f)
            if not any(field_equals(K, K2) for K2 in candidates):
                candidates.append(K)
    out = []
    field_D = make_field(D)
    for K in candidates:
        # verify via the factor containing the canonical root
        rd = relative_degree(D, K)
        if rd.degree_for_root(0) != 2:
            continue
        t = _count_linear_factors(K.gen, field_D)
        r = _count_linear_factors(K.gen, K)
        if t == 0 or t % r:
            continue
        out.append((K, t // r))
    return out


def _count_linear_factors(g: IntPolynomial, K: NumberField) -> int:
    _, factors = factor_over_field(g, K)
    return sum(m for p, m in factors if len(p) - 1 == 1)


# ---------------------------------------------------------------------------
# the census proper

def _worker_count_z(args):
    (e, n, x_str, lead_lo, lead_hi, per_field, collect) = args
    x = Fraction(x_str)
    return _count_z_range(e, n, x, lead_lo, lead_hi, per_field, collect)


def _count_z_range(e: int, n: int, x: Fraction, lead_lo: int, lead_hi: int,
                   per_field: bool, collect: bool) -> CensusReport:
    d = e * n
    report = CensusReport(e, n, x)
    if e == 1:
        polys, cnt, scanned = enumerate_numbers(
            d, x, collect=collect, lead_range=(lead_lo, lead_hi))
        report.z = d * cnt
        report.candidates = scanned
        report.polynomials = cnt
        if per_field:
            report.fields.setdefault(1, FieldRow(1)).z_k = report.z
        if collect and polys is not None:
            report.collected = [(p, ()) for p in polys]
        return report

    polys, cnt, scanned = enumerate_numbers(d, x, lead_range=(lead_lo, lead_hi))
    report.candidates = scanned
    report.polynomials = cnt
    for coeffs in polys:
        D = IntPolynomial(coeffs)
        if e == 2:
            discs = quadratic_subfields(coeffs)
        elif e == d // 2:
            subs = _index2_subfields(D)
            discs = []
            for K, count in subs:
                discs.extend([_subfield_key(K)] * count)
        else:
            raise InvalidInput("census needs e = 2 or e = deg/2")
        s = len(discs)
        if s == 0:
            continue
        report.z += d
        if s >= 2:
            report.zbar += d
        if per_field and e == 2:
            for delta in discs:
                row = report.fields.setdefault(delta, FieldRow(delta))
                row.z_k += d
                if s >= 2:
                    row.zbar_k += d
        if collect:
            report.collected.append((coeffs, tuple(discs)))
    return report


def _subfield_key(K: NumberField):
    return K.gen.coeffs


def count_z(
    e: int,
    n: int,
    x,
    per_field: bool = True,
    collect: bool = False,
    workers: int = 1,
    candidate_cap: int = DEFAULT_CANDIDATE_CAP,
) -> CensusReport:
    """Exact census Z(e, n, X) with the multiply-counted bookkeeping."""
    x = Fraction(x)
    d = e * n
    if d > 6:
        raise DegreeCapExceeded("census capped at total degree 6")
    if e >= 2 and n < 2:
        raise InvalidInput("subfield censuses need n >= 2")
    est = box_estimate(d, x)
    if est > candidate_cap:
        raise BoxTooLarge(est, candidate_cap)
    start = time.time()
    lead_max = int(x**d)
    report = CensusReport(e, n, x)
    if workers <= 1 or lead_max <= 1:
        part = _count_z_range(e, n, x, 1, lead_max, per_field, collect)
        report.merge(part)
    else:
        tasks = []
        step = max(1, lead_max // (workers * 4))
        lo = 1
        while lo <= lead_max:
            hi = min(lead_max, lo + step - 1)
            tasks.append((e, n, str(x), lo, hi, per_field, collect))
            lo = hi + 1
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_worker_count_z, tasks):
                report.merge(part)
    report.wall_time = time.time() - start
    return report


def verify_global_count_bound(report: CensusReport) -> tuple[bool, Fraction]:
    """The explicit bound Z <= c X^(en(n+e)) with
    c = n * 2^(e(n^2+ne+2e+n+13)+n^2+10n); returns (holds, margin)."""
    e, n, x = report.e, report.n, report.x
    c = n * 2 ** (e * (n * n + n * e + 2 * e + n + 13) + n * n + 10 * n)
    bound = c * x ** (e * n * (n + e))
    return report.z <= bound, bound - report.z


# ---------------------------------------------------------------------------
# classification of monic polynomials over K

def classify_over_k(f: KPoly, K: NumberField, n: int) -> str:
    """One of the class tags for a monic f with M0(f) <= T over K."""
    f = _ktrim(f)
    deg = len(f) - 1
    if _field_of_coefficients_smaller(f, K):
        return "not_primitive"
    if deg < n:
        return "lower_degree"
    _, factors = factor_over_field(f, K)
    if len(factors) > 1 or any(m > 1 for _p, m in factors):
        return "reducible"
    from .numberfield import conjugate_polys

    _L, _conj, coprime = conjugate_polys(f, K)
    return "cp" if coprime else "ncp"


def _field_of_coefficients_smaller(f: KPoly, K: NumberField) -> bool:
    """True iff the coefficients of f generate a proper subfield of K."""
    if K.degree == 1:
        return False
    if K.degree == 2:
        return all(c.is_rational() for c in f)
    # deg 3: proper subfield is Q only (prime degree)
    return all(c.is_rational() for c in f)


def verify_ncp_structure(f: KPoly, K: NumberField) -> bool:
    """Check the structural factorization of a non-coprime-conjugates f:
    f equals the product of the K-fixing conjugates of one prime factor
    of f over the splitting closure, and its roots have degree < e*deg f."""
    from .numberfield import SplittingData, kpoly_divmod

    f = _ktrim(f)
    deg_f = len(f) - 1
    if classify_over_k(f, K, deg_f) != "ncp":
        raise InvalidInput("verify_ncp_structure needs an ncp input")
    sd = SplittingData(K)
    L = sd.L
    fL = sd.map_kpoly(f, 0)
    _, factorsL = factor_over_field(fL, L)
    g1 = factorsL[0][0]
    # Hom_K(L): automorphisms of L fixing the image of theta
    auts = _k_fixing_automorphisms(sd)
    orbit = []
    seen = set()
    for tau in auts:
        img = _ktrim([_apply_aut(c, tau, L) for c in g1])
        key = kpoly_key(img)
        if key not in seen:
            seen.add(key)
            orbit.append(img)
    prod = kpoly(L, [L.from_rational(1)])
    for g in orbit:
        prod = kpoly_mul(prod, g)
    if kpoly_key(prod) != kpoly_key(fL):
        return False
    # degree accounting: the root of g1 has absolute degree < e * deg f
    root = g1[0]  # g1 = x - root for the closures used here
    if len(g1) - 1 == 1:
        droot = _absolute_degree_of_element(-root, L)
        if droot >= K.degree * deg_f:
            return False
    # conjugate product lies in Q[x]: prod over Hom_Q(K) of sigma f
    full = kpoly(L, [L.from_rational(1)])
    for i in range(K.degree):
        full = kpoly_mul(full, sd.map_kpoly(f, i))
    if not all(c.is_rational() for c in full):
        return False
    return True


def _k_fixing_automorphisms(sd) -> list:
    """Automorphisms of the closure L fixing K's image (as root images)."""
    L = sd.L
    K = sd.K
    if L is K:
        return [L.theta()]
    # L was built with a primitive gamma = theta + k delta; the K-fixing
    # automorphisms send gamma to theta + k * (root of the same quadratic),
    # i.e. fix theta's image and permute the two delta-roots.
    theta_L = sd.theta_images[0]
    d1, d2 = sd.theta_images[1], sd.theta_images[2]
    # gamma = theta + k delta; recover k from L.theta() = gamma
    for k in range(1, 12):
        if (theta_L + L.from_rational(k) * d1 - L.theta()).is_zero():
            return [L.theta(), theta_L + L.from_rational(k) * d2]
        if (theta_L + L.from_rational(k) * d2 - L.theta()).is_zero():
            return [L.theta(), theta_L + L.from_rational(k) * d1]
    raise InvalidInput("could not reconstruct the closure automorphisms")


def _apply_aut(x, gamma_image, L):
    """Value of x under the automorphism gamma -> gamma_image."""
    acc = L.from_rational(0)
    for c in reversed(x.coords):
        acc = acc * gamma_image + L.from_rational(c)
    return acc


def _absolute_degree_of_element(x, L) -> int:
    """Degree over Q of an element of L via linear algebra on powers."""
    from .numberfield import _solve_linear_fractions

    dim = L.degree
    powers = [L.from_rational(1)]
    for _ in range(dim):
        powers.append(powers[-1] * x)
    vecs = [list(p.coords) for p in powers]
    for deg in range(1, dim + 1):
        # is x^deg a combination of lower powers?
        mat = [[vecs[j][i] for j in range(deg)] for i in range(dim)]
        # overdetermined: solve least... use exact: try solving the square
        # subsystem and verify
        sol = _solve_overdetermined(mat, [vecs[deg][i] for i in range(dim)])
        if sol is not None:
            return deg
    return dim


def _solve_overdetermined(mat, rhs):
    """Exact solution of a (possibly overdetermined) rational system."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    aug = [[Fraction(mat[i][j]) for j in range(cols)] + [Fraction(rhs[i])]
           for i in range(rows)]
    pivots = []
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if aug[i][c]:
                piv = i
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c]:
                fct = aug[i][c]
                aug[i] = [vi - fct * vr for vi, vr in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    # consistency
    for i in range(r, rows):
        if aug[i][cols]:
            return None
    sol = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        sol[c] = aug[i][cols]
    return sol


# ---------------------------------------------------------------------------
# relative counts and the n-to-one correspondence

def count_relative(K: NumberField, n: int, x, workers: int = 1,
                   candidate_cap: int = DEFAULT_CANDIDATE_CAP) -> int:
    """Exact count of beta with [K(beta):K] = n, the minimal polynomial
    over K primitive (coefficients generating K), and H(beta) <= X."""
    x = Fraction(x)
    e = K.degree
    if e == 1:
        _polys, cnt, _ = enumerate_numbers(n, x, collect=False if n <= 2 else True,
                                           candidate_cap=candidate_cap)
        return n * cnt
    if e != 2:
        raise DegreeCapExceeded("count_relative needs deg K <= 2")
    from .numberfield import fundamental_discriminant

    delta = fundamental_discriminant(K)
    if n == 1:
        # generators of K itself with H <= X
        kernel = squarefree_kernel(poly_discriminant(K.gen))
        polys, _cnt, _ = enumerate_numbers(2, x, candidate_cap=candidate_cap)
        total = 0
        for coeffs in polys:
            if squarefree_kernel(coeffs[1] ** 2 - 4 * coeffs[2] * coeffs[0]) == kernel:
                total += 2
        return total
    d = e * n
    if d > 6:
        raise DegreeCapExceeded("census capped at total degree 6")
    report = _relative_count_report(delta, n, x, workers, candidate_cap)
    return report


def _relative_count_report(delta: int, n: int, x: Fraction, workers: int,
                           candidate_cap: int) -> int:
    d = 2 * n
    if workers <= 1:
        return _worker_relative((delta, n, str(x), 1, int(x**d), candidate_cap))
    lead_max = int(x**d)
    tasks = []
    step = max(1, lead_max // (workers * 4))
    lo = 1
    while lo <= lead_max:
        hi = min(lead_max, lo + step - 1)
        tasks.append((delta, n, str(x), lo, hi, candidate_cap))
        lo = hi + 1
    total = 0
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_worker_relative, tasks):
            total += part
    return total


def _worker_relative(args) -> int:
    delta, n, x_str, lead_lo, lead_hi, cap = args
    x = Fraction(x_str)
    d = 2 * n
    polys, _cnt, _ = enumerate_numbers(d, x, candidate_cap=cap,
                                       lead_range=(lead_lo, lead_hi))
    K = field_from_disc(delta)
    total = 0
    for coeffs in polys:
        disc = poly_discriminant(IntPolynomial(coeffs))
        if disc % (delta * delta):
            continue
        if not _reducible_over_quadratic_screen(coeffs, delta):
            continue
        _, factors = factor_over_field(IntPolynomial(coeffs), K)
        if len(factors) > 1:
            total += d
    return total


def minpolys_over_k(K: NumberField, n: int, x, candidate_cap: int = DEFAULT_CANDIDATE_CAP):
    """The counted numbers' minimal polynomials over K, deduplicated,
    together with Z_K; n-to-one correspondence check data."""
    x = Fraction(x)
    from .numberfield import fundamental_discriminant

    delta = fundamental_discriminant(K)
    d = K.degree * n
    polys, _cnt, _ = enumerate_numbers(d, x, candidate_cap=candidate_cap)
    z_k = 0
    minpolys = {}
    for coeffs in polys:
        disc = poly_discriminant(IntPolynomial(coeffs))
        if disc % (delta * delta):
            continue
        if not _reducible_over_quadratic_screen(coeffs, delta):
            continue
        _, factors = factor_over_field(IntPolynomial(coeffs), K)
        if len(factors) <= 1:
            continue
        z_k += d
        for p, _m in factors:
            minpolys[kpoly_key(p)] = p
    return z_k, minpolys


def verify_n_to_one(K: NumberField, n: int, x) -> tuple[int, int, bool]:
    """Check Z_K = n * |M^cp| by building the minimal polynomials over K
    of every counted number and deduplicating."""
    z_k, minpolys = minpolys_over_k(K, n, x)
    return z_k, len(minpolys), z_k == n * len(minpolys)
