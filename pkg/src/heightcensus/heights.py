"""Weil heights of algebraic numbers and projective points, the Mahler
height M0 on monic polynomials over a number field (two independent
routes), and the minimal-generator invariants delta(K) and pi(K)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .certified import (
    CertifiedReal,
    DEFAULT_EPS,
    compare_mahler,
    compare_surd_rat,
    frac_sqrt_lower,
    frac_sqrt_upper,
    mahler_is_one,
    mahler_measure,
    quadratic_mahler_exact,
    root_enclosures,
)
from .errors import DegreeCapExceeded, InvalidInput
from .intpoly import IntPolynomial, factor_z, is_irreducible, poly_discriminant
from .numberfield import (
    FieldElement,
    KPoly,
    NumberField,
    _ktrim,
    _norm_poly,
    factor_over_field,
    field_equals,
    factorize,
    fundamental_discriminant,
    kpoly,
    kpoly_monic,
    make_field,
    quadratic_conjugate,
    squarefree_kernel,
)

__all__ = [
    "AlgebraicNumber",
    "HeightValue",
    "height",
    "naive_height",
    "check_height_sandwich",
    "m0",
    "m0_adelic",
    "height_projective",
    "delta_exact",
    "pi_exact",
    "check_silverman",
]


@dataclass(frozen=True)
class AlgebraicNumber:
    """(canonical minimal polynomial, root index in the canonical order)."""

    minpoly: IntPolynomial
    root_index: int = 0

    def __post_init__(self):
        if not 0 <= self.root_index < max(1, self.minpoly.degree):
            raise InvalidInput("root index out of range")

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    @staticmethod
    def from_rational(x) -> "AlgebraicNumber":
        x = Fraction(x)
        return AlgebraicNumber(IntPolynomial((-x.numerator, x.denominator)).canonical(), 0)

    def enclosure(self, radius: Fraction = Fraction(1, 10**8)):
        return root_enclosures(self.minpoly, radius)[self.root_index]

    def __str__(self):
        return f"root #{self.root_index} of {self.minpoly}"


@dataclass(frozen=True)
class HeightValue:
    """Certified H(alpha); exact power data kept when M(D) is rational."""

    value: CertifiedReal
    exact_mahler: Fraction | None = None  # M(D) when rational
    inv_degree: Fraction | None = None    # 1/deg D, so H = M^(inv_degree)

    @property
    def is_exact(self) -> bool:
        return self.exact_mahler is not None


def height(alpha: AlgebraicNumber, eps: Fraction = DEFAULT_EPS) -> HeightValue:
    """H(alpha) = M(D_alpha)^(1/d), certified."""
    d = alpha.degree
    D = alpha.minpoly
    if mahler_is_one(D):
        return HeightValue(CertifiedReal.exact(1), Fraction(1), Fraction(1, d))
    m = mahler_measure(D, Fraction(eps))
    if m.lo == m.hi:
        return HeightValue(m.nth_root(d), m.lo, Fraction(1, d))
    return HeightValue(m.nth_root(d), None, Fraction(1, d))


def naive_height(alpha: AlgebraicNumber) -> int:
    """Max absolute coefficient of the canonical minimal polynomial."""
    return alpha.minpoly.max_norm()


def mahler_interval(alpha: AlgebraicNumber, eps: Fraction = DEFAULT_EPS) -> CertifiedReal:
    return mahler_measure(alpha.minpoly, Fraction(eps))


def check_height_sandwich(alpha: AlgebraicNumber) -> bool:
    """Certify (H/2)^d <= |D| <= (2H)^d, i.e. M/2^d <= |D| <= 2^d M."""
    d = alpha.degree
    nrm = naive_height(alpha)
    m = mahler_measure(alpha.minpoly, Fraction(1, 10**12))
    return m.hi <= (1 << d) * nrm and nrm <= (1 << d) * m.lo


# ---------------------------------------------------------------------------
# M0 on monic polynomials over a number field

def _rational_minpoly_of_factor_roots(G: KPoly, K: NumberField) -> tuple[IntPolynomial, int]:
    """Minimal polynomial over Q of the roots of an irreducible K-factor.

    The norm of G is a power of a single irreducible rational polynomial;
    returns (that polynomial, its multiplicity in the norm).
    """
    norm = _norm_poly(G, K, 0)
    den = 1
    for c in norm:
        den = den * c.denominator // math.gcd(den, c.denominator)
    npoly = IntPolynomial(int(c * den) for c in norm)
    _, factors = factor_z(npoly, degree_cap=None)
    bases = {f.coeffs for f, _m in factors}
    if len(bases) != 1:
        raise InvalidInput("norm of an irreducible factor split into distinct factors")
    base, _ = factors[0]
    mult = sum(m for _f, m in factors)
    return base, mult


def m0(f, K: NumberField, eps: Fraction = DEFAULT_EPS) -> CertifiedReal:
    """M0 by the root route: factor f over K and multiply root heights.

    For an irreducible factor G with root beta, M0(G) = H(beta)^(deg G),
    and M0 is multiplicative, so M0(f) is an exact product of rational
    powers of Mahler measures of minimal polynomials over Q.
    """
    if isinstance(f, IntPolynomial):
        f = kpoly(K, [[c] for c in f.coeffs])
    f = _ktrim(f)
    if not f or len(f) == 1:
        raise InvalidInput("need degree >= 1 and monic input")
    if not (f[-1] - K.from_rational(1)).is_zero():
        raise InvalidInput("m0 expects a monic polynomial")
    eps = Fraction(eps)
    _, factors = factor_over_field(f, K)
    total = CertifiedReal.exact(1)
    for G, mult in factors:
        degG = len(G) - 1
        D, _ = _rational_minpoly_of_factor_roots(G, K)
        if mahler_is_one(D):
            continue
        exponent = Fraction(degG * mult, D.degree)
        m = mahler_measure(D, eps / (4 * len(factors)))
        total = total * (m ** exponent.numerator).nth_root(exponent.denominator)
    return total


def _theta_as_sqrt_basis(K: NumberField) -> tuple[int, Fraction, Fraction]:
    """For quadratic K return (m, u, v) with sqrt(m) = u + v*theta (m the
    squarefree kernel of disc)."""
    g = K.gen.coeffs
    a, b = g[2], g[1]
    disc = b * b - 4 * a * g[0]
    m = squarefree_kernel(disc)
    t2 = disc // m
    t = math.isqrt(t2)
    assert t * t == t2
    # sqrt(disc) = 2a theta + b, sqrt(m) = sqrt(disc)/t
    return m, Fraction(b, t), Fraction(2 * a, t)


def _coords_sqrt_basis(x: FieldElement) -> tuple[int, Fraction, Fraction]:
    """x = A + B sqrt(m) with rational A, B."""
    K = x.owner
    m, u, v = _theta_as_sqrt_basis(K)
    c0, c1 = x.coords
    # theta = (sqrt(m) - u)/v
    B = c1 / v
    A = c0 - c1 * u / v
    return m, A, B


def _vp(n: int, p: int) -> int:
    if n == 0:
        return 10**9  # effectively +infinity for our bounded uses
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _vp_frac(x: Fraction, p: int) -> int:
    if x == 0:
        return 10**9
    return _vp(x.numerator, p) - _vp(x.denominator, p)


def _padic_valuations(x: FieldElement, p: int) -> list[tuple[int, int]]:
    """[(Npp, v_pp(x))] over the primes pp of a quadratic field above p."""
    K = x.owner
    if K.degree != 2:
        raise InvalidInput("quadratic fields only")
    if x.is_zero():
        raise InvalidInput("valuation of zero")
    m, A, B = _coords_sqrt_basis(x)
    disc = fundamental_discriminant(K)
    norm = A * A - m * B * B
    if disc % p == 0:
        # ramified: v_pp(x) = v_p(N(x))
        return [(p, _vp_frac(norm, p))]
    if p == 2 and m % 4 == 1:
        # integral basis omega = (1 + sqrt m)/2: x = (A - B) + 2B omega
        a1, b1 = A - B, 2 * B
        if m % 8 == 5:
            return [(p * p, min(_vp_frac(a1, 2), _vp_frac(b1, 2)))]
        return _split_valuations(a1, b1, 2, _vp_frac(norm, 2), omega_poly=(Fraction(1 - m, 4), Fraction(-1), Fraction(1)))
    chi = _kronecker(m, p)
    if chi == -1:
        return [(p * p, min(_vp_frac(A, p), _vp_frac(B, p)))]
    # split at p via sqrt(m) mod p^k
    return _split_valuations(A, B, p, _vp_frac(norm, p), sqrt_of=m)


def _kronecker(m: int, p: int) -> int:
    from .intpoly import kronecker_symbol

    return kronecker_symbol(m, p)


def _split_valuations(A: Fraction, B: Fraction, p: int, vnorm: int,
                      sqrt_of: int | None = None, omega_poly=None) -> list[tuple[int, int]]:
    """Valuations at the two primes above a split p, via Hensel lifting."""
    # scale to integers: common denominator contributes -v_p(den) at both primes
    den = (A.denominator * B.denominator) // math.gcd(A.denominator, B.denominator)
    sA = int(A * den)
    sB = int(B * den)
    shift = _vp(den, p)
    n = vnorm + 2 * shift  # v_p of the integer norm of sA + sB*w
    k = n + 1
    mod = p**k
    if sqrt_of is not None:
        t = _lift_sqrt(sqrt_of, p, k)
    else:
        t = _lift_root(omega_poly, p, k)
    w1 = _vp_capped(sA + sB * t, p, n)
    v1 = w1 - shift
    v2 = (n - w1) - shift if n < 10**8 else 10**9
    return [(p, v1), (p, v2)]


def _vp_capped(nval: int, p: int, cap: int) -> int:
    if nval == 0:
        return cap
    v = 0
    while nval % p == 0 and v < cap:
        nval //= p
        v += 1
    return v


def _lift_sqrt(m: int, p: int, k: int) -> int:
    """t with t^2 = m mod p^k (p odd, split)."""
    t = None
    for c in range(1, p):
        if (c * c - m) % p == 0:
            t = c
            break
    if t is None:
        raise InvalidInput("not a split prime")
    mod = p
    while mod < p**k:
        mod *= p
        # Newton: t <- t - (t^2 - m)/(2t)
        inv = pow(2 * t, -1, mod)
        t = (t - (t * t - m) * inv) % mod
    return t % p**k


def _lift_root(poly_coeffs, p: int, k: int) -> int:
    """Root of a monic quadratic mod p^k by Hensel (derivative a unit)."""
    c0, c1, _ = poly_coeffs
    t = None
    for c in range(p):
        if (Fraction(c * c) + c1 * c + c0) % p == 0:
            t = c
            break
    if t is None:
        raise InvalidInput("no root mod p")
    mod = p
    while mod < p**k:
        mod *= p
        num = int((Fraction(t * t) + c1 * t + c0))
        der = int(2 * t + c1)
        inv = pow(der, -1, mod)
        t = (t - num * inv) % mod
    return t % p**k


def _denominator_ideal_norm(coeffs: list[FieldElement], K: NumberField) -> int:
    """Norm of the denominator ideal of (1, f_1, ..., f_n) over quadratic K."""
    primes = set()
    for x in coeffs:
        if x.is_zero():
            continue
        m, A, B = _coords_sqrt_basis(x)
        den = ((A.denominator * B.denominator) // math.gcd(A.denominator, B.denominator))
        norm_den = (A * A - m * B * B).denominator
        for q, _ in factorize(den * norm_den) if den * norm_den > 1 else []:
            primes.add(q)
    out = 1
    for p in sorted(primes):
        per_coeff = [_padic_valuations(x, p) for x in coeffs if not x.is_zero()]
        if not per_coeff:
            continue
        for idx in range(len(per_coeff[0])):
            npp = per_coeff[0][idx][0]
            vmin = min(min(vals[idx][1] for vals in per_coeff), 0)
            out *= npp ** (-vmin)
    return out


def m0_adelic(f, K: NumberField, eps: Fraction = DEFAULT_EPS) -> CertifiedReal:
    """Independent M0 route for quadratic K: the infinite part is
    sqrt(M(norm poly)) and the finite part is the square root of the
    denominator-ideal norm (prime-by-prime valuations)."""
    if K.degree != 2:
        raise InvalidInput("m0_adelic needs a quadratic field")
    if isinstance(f, IntPolynomial):
        f = kpoly(K, [[c] for c in f.coeffs])
    f = _ktrim(f)
    if not (f[-1] - K.from_rational(1)).is_zero():
        raise InvalidInput("m0_adelic expects a monic polynomial")
    eps = Fraction(eps)
    # norm polynomial: f * (conjugate f), rational coefficients
    conj = _ktrim([quadratic_conjugate(c) for c in f])
    from .numberfield import kpoly_mul

    prod = kpoly_mul(f, conj)
    rat = []
    for c in prod:
        if any(c.coords[1:]):
            raise InvalidInput("norm polynomial has irrational coefficients")
        rat.append(c.coords[0])
    den = 1
    for c in rat:
        den = den * c.denominator // math.gcd(den, c.denominator)
    npoly = IntPolynomial(int(c * den) for c in rat)
    m_scaled = mahler_measure(npoly, eps / 4)
    m_norm = m_scaled * CertifiedReal.exact(Fraction(1, den))
    infinite = m_norm.sqrt()
    fin_sq = _denominator_ideal_norm(list(f[:-1]), K)
    finite = CertifiedReal.exact(Fraction(fin_sq)).sqrt()
    return infinite * finite


# ---------------------------------------------------------------------------
# projective heights

def height_projective(coords: list[FieldElement], eps: Fraction = DEFAULT_EPS) -> CertifiedReal:
    """Standard Weil height of a projective point over Q or a quadratic field.

    H^e = (product over embeddings of max_i |x_i|) / N(coordinate ideal);
    invariant under scaling by construction of the ideal norm.
    """
    coords = [c for c in coords if not c.is_zero()]
    if not coords:
        raise InvalidInput("need a nonzero coordinate vector")
    K = coords[0].owner
    e = K.degree
    if e > 2:
        raise DegreeCapExceeded("height_projective implemented for deg K <= 2")
    # infinite part: product over all e embeddings of max_i |x_i|
    inf = CertifiedReal.exact(1)
    for j in range(e):
        best = None
        for x in coords:
            box = x.numeric(j)
            mod2 = box.re * box.re + box.im * box.im
            b = CertifiedReal(frac_sqrt_lower(mod2.lo), frac_sqrt_upper(mod2.hi))
            best = b if best is None else CertifiedReal(max(best.lo, b.lo), max(best.hi, b.hi))
        inf = inf * best
    # finite part: 1 / N((x_0, ..., x_n))
    content_norm = Fraction(1)
    if e == 1:
        g = Fraction(0)
        for x in coords:
            q = x.coords[0]
            g = Fraction(math.gcd(g.numerator * q.denominator, q.numerator * g.denominator),
                         g.denominator * q.denominator)
        content_norm = abs(g)
    else:
        cand_num = 0
        cand_den = 1
        for x in coords:
            m, A, B = _coords_sqrt_basis(x)
            nrm = A * A - m * B * B
            cand_num = math.gcd(cand_num, abs(nrm.numerator))
            cand_den = cand_den * nrm.denominator // math.gcd(cand_den, nrm.denominator)
        candidate = cand_num * cand_den
        for p, _ in (factorize(candidate) if candidate > 1 else []):
            per = [_padic_valuations(x, p) for x in coords]
            for idx in range(len(per[0])):
                npp = per[0][idx][0]
                v = min(vals[idx][1] for vals in per)
                content_norm *= Fraction(npp) ** v
    h_pow_e = inf * CertifiedReal.exact(1 / content_norm)
    return h_pow_e.nth_root(e)


# ---------------------------------------------------------------------------
# exact minimal-generator invariants

_quadratic_mahler_exact = quadratic_mahler_exact


def _mahler_key_less(k1, k2) -> int:
    """Compare two exact quadratic Mahler values: -1, 0, or 1."""
    t1, v1 = k1
    t2, v2 = k2
    if t1 == "rat" and t2 == "rat":
        return -1 if v1 < v2 else 0 if v1 == v2 else 1
    if t1 == "rat":
        return -_compare_surd_rat(v2, v1)
    if t2 == "rat":
        return _compare_surd_rat(v1, v2)
    # (b1 + sqrt(d1))/2 vs (b2 + sqrt(d2))/2
    b1, d1 = v1
    b2, d2 = v2
    lhs = Fraction(b1 - b2)  # compare sqrt(d2) - sqrt(d1) with b1 - b2
    # (b1 + sqrt d1) vs (b2 + sqrt d2)  <=>  sqrt d1 - sqrt d2 vs b2 - b1
    diff = Fraction(b2 - b1)
    # compare sqrt(d1) - sqrt(d2) with diff exactly
    s = _compare_sqrt_diff(d1, d2, diff)
    return s


_compare_surd_rat = compare_surd_rat


def _compare_sqrt_diff(d1: int, d2: int, diff: Fraction) -> int:
    """sign(sqrt(d1) - sqrt(d2) - diff) for positive non-square d1, d2.

    With d2 non-square and diff rational, equality forces diff = 0 and
    d1 = d2, so every other case separates under refinement.
    """
    if d1 == d2 and diff == 0:
        return 0
    scale = 10**20
    while True:
        s1 = math.isqrt(d1 * scale * scale)
        s2 = math.isqrt(d2 * scale * scale)
        rhs = diff * scale
        if Fraction(s1 + 1 - s2) < rhs:
            return -1
        if Fraction(s1 - (s2 + 1)) > rhs:
            return 1
        scale *= 10**10


def _generators_scan(K: NumberField, mahler_bound_hint: Fraction):
    """All canonical irreducible quadratics generating K with exact Mahler
    value at most the hint (a rational upper bound)."""
    kernel = squarefree_kernel(poly_discriminant(K.gen))
    T = mahler_bound_hint
    out = []
    amax = int(T)
    for a in range(1, amax + 1):
        bmax = int(2 * T)
        cmax = int(T)
        for b in range(-bmax, bmax + 1):
            for c in range(-cmax, cmax + 1):
                disc = b * b - 4 * a * c
                if disc >= 0 and math.isqrt(disc) ** 2 == disc:
                    continue
                if math.gcd(math.gcd(a, abs(b)), abs(c)) != 1:
                    continue
                if squarefree_kernel(disc) != kernel:
                    continue
                key = _quadratic_mahler_exact(a, b, c)
                if key[0] == "rat" and key[1] > T:
                    continue
                if key[0] == "surd":
                    bb, dd = key[1]
                    if _compare_surd_rat((bb, dd), T) > 0:
                        continue
                out.append(((a, b, c), key))
    return out


def delta_exact(K: NumberField, search_cap: Fraction = Fraction(10**6)):
    """Exact minimum of H over generators of K, with witness.

    Implemented for quadratic K: the initial generator bounds the search
    box, every candidate's Mahler value is an exact rational or quadratic
    surd, and the minimum is taken with exact comparisons.
    """
    if K.degree != 2:
        raise DegreeCapExceeded("delta_exact implemented for quadratic fields")
    g = K.gen.coeffs
    key0 = _quadratic_mahler_exact(g[2], g[1], g[0])
    if key0[0] == "rat":
        hint = key0[1]
    else:
        b, d = key0[1]
        hint = Fraction(b + math.isqrt(d) + 1, 2)
    if hint > Fraction(search_cap) ** 2:
        raise InvalidInput("search cap exceeded by the initial generator bound")
    candidates = _generators_scan(K, hint)
    if not candidates:
        raise InvalidInput("no generator found (generator scan bug)")
    best = None
    for (a, b, c), key in candidates:
        if best is None or _mahler_key_less(key, best[1]) < 0 or (
            _mahler_key_less(key, best[1]) == 0 and (a, b, c) < best[0]
        ):
            best = ((a, b, c), key)
    (a, b, c), key = best
    D = IntPolynomial((c, b, a))
    witness = AlgebraicNumber(D, 0)
    if key[0] == "rat":
        hv = HeightValue(CertifiedReal.exact(key[1]).sqrt(), key[1], Fraction(1, 2))
    else:
        m = mahler_measure(D, Fraction(1, 10**30))
        hv = HeightValue(m.nth_root(2), None, Fraction(1, 2))
    return hv, witness


def pi_exact(K: NumberField, search_cap: Fraction = Fraction(10**6)):
    """Exact minimum of the naive height over generators of K, with witness."""
    if K.degree != 2:
        raise DegreeCapExceeded("pi_exact implemented for quadratic fields")
    kernel = squarefree_kernel(poly_discriminant(K.gen))
    bound = K.gen.max_norm()
    if bound > search_cap:
        raise InvalidInput("search cap exceeded")
    best = None
    for n in range(1, bound + 1):
        for a in range(1, n + 1):
            for b in range(-n, n + 1):
                for c in range(-n, n + 1):
                    if max(a, abs(b), abs(c)) != n:
                        continue
                    disc = b * b - 4 * a * c
                    if disc >= 0 and math.isqrt(disc) ** 2 == disc:
                        continue
                    if math.gcd(math.gcd(a, abs(b)), abs(c)) != 1:
                        continue
                    if squarefree_kernel(disc) != kernel:
                        continue
                    cand = (n, (a, b, c))
                    if best is None or cand < best:
                        best = cand
        if best is not None:
            break
    if best is None:
        raise InvalidInput("no generator found below the initial bound")
    n, (a, b, c) = best
    return n, AlgebraicNumber(IntPolynomial((c, b, a)), 0)


def check_silverman(K: NumberField, delta: HeightValue | None = None) -> bool:
    """Certify delta(K) >= e^(-1/(2(e-1))) |disc|^(1/(2e(e-1))).

    For quadratic K this is delta^4 >= |disc| / 4, checked exactly when
    the witness Mahler measure is rational and by certified intervals
    otherwise.  Equality counts as holding.
    """
    if K.degree != 2:
        raise DegreeCapExceeded("check_silverman implemented for quadratic fields")
    disc = abs(fundamental_discriminant(K))
    if delta is None:
        delta, _ = delta_exact(K)
    rhs = Fraction(disc, 4)
    if delta.is_exact:
        return delta.exact_mahler**2 >= rhs
    v = delta.value ** 4
    if v.lo >= rhs:
        return True
    if v.hi < rhs:
        return False
    raise InvalidInput("silverman check needs a tighter delta enclosure")


def silverman_ratio_report(K: NumberField) -> dict:
    """R_K h_K / delta^(e(e-1)+1/20) reported without asserting a bound."""
    from .numberfield import quadratic_invariants

    inv = quadratic_invariants(K)
    delta, _w = delta_exact(K)
    e = K.degree
    exponent = Fraction(e * (e - 1)) + Fraction(1, 20)
    num = inv.h * (inv.regulator if inv.regulator.lo > 0 else CertifiedReal.exact(1))
    # delta^exponent via rational power of the fourth power data
    d4 = delta.value ** exponent.numerator
    den = d4.nth_root(exponent.denominator)
    ratio = num / den
    return {"disc": inv.disc, "ratio_lo": str(ratio.lo), "ratio_hi": str(ratio.hi)}
