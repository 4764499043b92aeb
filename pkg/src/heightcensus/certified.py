"""Certified numerics: rational intervals, root enclosures, Mahler measure.

Approximations come from floating point (mpmath) but every returned
enclosure is certified with exact rational arithmetic, so results are
correct whatever the floating-point behaviour.  Precision escalates
64 -> 128 -> ... up to a configurable cap; running out raises
PrecisionExhausted rather than guessing.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpc, workprec

from .errors import DegreeCapExceeded, InvalidInput, PrecisionExhausted
from .intpoly import (
    Coeffs,
    IntPolynomial,
    derivative,
    graeffe_step,
    squarefree_decomposition,
    strip_cyclotomic,
    trim,
)

DEFAULT_PRECISION_CAP = int(os.environ.get("CENSUS_PRECISION_BITS", "4096"))
DEFAULT_EPS = Fraction(1, 10**30)

EXACT_COMPARE_DEGREE_CAP = 10


def precision_ladder(cap: int):
    p = 64
    while p <= cap:
        yield p
        p *= 2


# ---------------------------------------------------------------------------
# integer and rational root bounds

def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of n >= 0."""
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return 0
    if k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << (n.bit_length() + k - 1) // k
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    return x


def frac_nth_root_lower(q: Fraction, n: int, bits: int = 64) -> Fraction:
    """Rational r <= q^(1/n) with granularity 2^-bits (q >= 0)."""
    if q < 0:
        raise ValueError("negative radicand")
    a, b = q.numerator, q.denominator
    s = 1 << bits
    return Fraction(iroot(a * b ** (n - 1) * s**n, n), b * s)


def frac_nth_root_upper(q: Fraction, n: int, bits: int = 64) -> Fraction:
    """Rational r >= q^(1/n) with granularity 2^-bits (q >= 0)."""
    if q < 0:
        raise ValueError("negative radicand")
    a, b = q.numerator, q.denominator
    s = 1 << bits
    scaled = a * b ** (n - 1) * s**n
    r = iroot(scaled, n)
    if r**n < scaled:
        r += 1
    return Fraction(r, b * s)


def frac_sqrt_lower(q: Fraction, bits: int = 128) -> Fraction:
    a, b = q.numerator, q.denominator
    s = 1 << bits
    return Fraction(math.isqrt(a * b * s * s), b * s)


def frac_sqrt_upper(q: Fraction, bits: int = 128) -> Fraction:
    a, b = q.numerator, q.denominator
    s = 1 << bits
    scaled = a * b * s * s
    r = math.isqrt(scaled)
    if r * r < scaled:
        r += 1
    return Fraction(r, b * s)


def dyadic_floor(x: Fraction, bits: int) -> Fraction:
    s = 1 << bits
    return Fraction(math.floor(x * s), s)


def dyadic_ceil(x: Fraction, bits: int) -> Fraction:
    s = 1 << bits
    return Fraction(math.ceil(x * s), s)


def mpf_to_fraction(x) -> Fraction:
    """Exact value of an mpmath mpf (always a dyadic rational)."""
    sign, man, exp, _ = x._mpf_
    if man == 0:
        return Fraction(0)
    v = Fraction(int(man))
    if exp >= 0:
        v *= 1 << exp
    else:
        v /= 1 << -exp
    return -v if sign else v


# ---------------------------------------------------------------------------
# rational interval type

@dataclass(frozen=True)
class CertifiedReal:
    """Rational enclosure [lo, hi] of a real quantity."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise InvalidInput("interval with lo > hi")

    @staticmethod
    def exact(x) -> "CertifiedReal":
        x = Fraction(x)
        return CertifiedReal(x, x)

    @staticmethod
    def from_mpi(x) -> "CertifiedReal":
        a, b = x._mpi_
        return CertifiedReal(_raw_mpf_to_fraction(a), _raw_mpf_to_fraction(b))

    def __add__(self, o):
        o = _coerce(o)
        return CertifiedReal(self.lo + o.lo, self.hi + o.hi)

    def __sub__(self, o):
        o = _coerce(o)
        return CertifiedReal(self.lo - o.hi, self.hi - o.lo)

    def __neg__(self):
        return CertifiedReal(-self.hi, -self.lo)

    def __mul__(self, o):
        o = _coerce(o)
        vals = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return CertifiedReal(min(vals), max(vals))

    __radd__ = __add__
    __rmul__ = __mul__

    def __truediv__(self, o):
        o = _coerce(o)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("interval division through zero")
        vals = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return CertifiedReal(min(vals), max(vals))

    def __pow__(self, n: int):
        if n == 0:
            return CertifiedReal.exact(1)
        if n < 0:
            return CertifiedReal.exact(1) / self**-n
        vals = (self.lo**n, self.hi**n)
        if n % 2 == 0 and self.lo < 0 < self.hi:
            return CertifiedReal(Fraction(0), max(vals))
        return CertifiedReal(min(vals), max(vals))

    def nth_root(self, n: int) -> "CertifiedReal":
        if self.lo < 0:
            raise InvalidInput("nth_root of an interval crossing negatives")
        return CertifiedReal(frac_nth_root_lower(self.lo, n), frac_nth_root_upper(self.hi, n))

    def sqrt(self) -> "CertifiedReal":
        return self.nth_root(2)

    def max1(self) -> "CertifiedReal":
        return CertifiedReal(max(self.lo, Fraction(1)), max(self.hi, Fraction(1)))

    def width(self) -> Fraction:
        return self.hi - self.lo

    def rel_width(self) -> Fraction:
        if self.lo <= 0:
            return Fraction(10**9)
        return (self.hi - self.lo) / self.lo

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        x = Fraction(x)
        return self.lo <= x <= self.hi

    def intersects(self, o: "CertifiedReal") -> bool:
        return self.lo <= o.hi and o.lo <= self.hi

    def rounded(self, bits: int) -> "CertifiedReal":
        return CertifiedReal(dyadic_floor(self.lo, bits), dyadic_ceil(self.hi, bits))

    def __float__(self):
        return float(self.midpoint())

    def __str__(self):
        return f"[{float(self.lo)!r}, {float(self.hi)!r}]"


def _coerce(x) -> CertifiedReal:
    if isinstance(x, CertifiedReal):
        return x
    return CertifiedReal.exact(x)


def _raw_mpf_to_fraction(t) -> Fraction:
    sign, man, exp, _ = t
    if man == 0:
        return Fraction(0)
    v = Fraction(int(man))
    if exp >= 0:
        v *= 1 << exp
    else:
        v /= 1 << -exp
    return -v if sign else v


class CInterval:
    """Rectangular complex interval with rational endpoints."""

    __slots__ = ("re", "im")

    def __init__(self, re: CertifiedReal, im: CertifiedReal):
        self.re = re
        self.im = im

    @staticmethod
    def exact(re, im=0) -> "CInterval":
        return CInterval(CertifiedReal.exact(re), CertifiedReal.exact(im))

    def __add__(self, o):
        return CInterval(self.re + o.re, self.im + o.im)

    def __sub__(self, o):
        return CInterval(self.re - o.re, self.im - o.im)

    def __mul__(self, o):
        return CInterval(self.re * o.re - self.im * o.im,
                         self.re * o.im + self.im * o.re)

    def rounded(self, bits: int) -> "CInterval":
        return CInterval(self.re.rounded(bits), self.im.rounded(bits))


# ---------------------------------------------------------------------------
# root enclosures

@dataclass(frozen=True)
class RootEnclosure:
    """Disk certified to contain exactly one root (of stated multiplicity)."""

    re: Fraction
    im: Fraction
    radius: Fraction
    multiplicity: int = 1

    def is_real(self) -> bool:
        # symmetrized enclosures have im == 0 exactly iff the root is real
        return self.im == 0

    def abs_bounds(self, bits: int = 192) -> CertifiedReal:
        """Certified bounds for |root| (granularity 2^-bits plus radius)."""
        m2 = Fraction(self.re) ** 2 + Fraction(self.im) ** 2
        lo = frac_sqrt_lower(m2, bits) - self.radius
        hi = frac_sqrt_upper(m2, bits) + self.radius
        return CertifiedReal(max(lo, Fraction(0)), hi)

    def to_cinterval(self) -> CInterval:
        return CInterval(
            CertifiedReal(self.re - self.radius, self.re + self.radius),
            CertifiedReal(self.im - self.radius, self.im + self.radius),
        )

    def sort_key(self):
        return (self.re, self.im)


def _horner_complex_exact(coeffs: Coeffs, x: Fraction, y: Fraction):
    """Exact (re, im) of f(x + iy) for integer coefficients."""
    re, im = Fraction(0), Fraction(0)
    for c in reversed(coeffs):
        re, im = re * x - im * y + c, re * y + im * x
    return re, im


def _aberth_approximations(coeffs: Coeffs, prec: int, maxit: int = 200):
    """Floating approximations of the roots of a squarefree polynomial."""
    d = len(coeffs) - 1
    with workprec(prec + 30):
        f = [mpc(c) for c in coeffs]
        fp = [mpc(i * coeffs[i]) for i in range(1, d + 1)]
        lead = abs(mpc(coeffs[-1]))
        radius = 1 + max(abs(mpc(c)) for c in coeffs[:-1]) / lead

        def ev(p, z):
            acc = p[-1]
            for c in reversed(p[:-1]):
                acc = acc * z + c
            return acc

        zs = []
        for k in range(d):
            ang = 2 * mp.pi * (k + mp.mpf("0.35")) / d + mp.mpf("0.7")
            zs.append(radius * mpc(mp.cos(ang), mp.sin(ang)))
        tol = mp.mpf(2) ** (-prec - 8)
        for _ in range(maxit):
            moved = mp.mpf(0)
            for k in range(d):
                z = zs[k]
                fv = ev(f, z)
                fpv = ev(fp, z)
                if fpv == 0:
                    zs[k] = z + tol * (1 + abs(z))
                    moved = 1 + moved
                    continue
                w = fv / fpv
                s = mpc(0)
                for j in range(d):
                    if j != k:
                        dz = z - zs[j]
                        if dz == 0:
                            dz = tol * (1 + abs(z))
                        s += 1 / dz
                denom = 1 - w * s
                corr = w if denom == 0 else w / denom
                zs[k] = z - corr
                moved = max(moved, abs(corr) / (1 + abs(zs[k])))
            if moved < tol:
                break
        snap_bits = prec + 10
        out = []
        for z in zs:
            xr = mpf_to_fraction(z.real)
            xi = mpf_to_fraction(z.imag)
            out.append((dyadic_floor(xr, snap_bits), dyadic_floor(xi, snap_bits)))
        return out


def _certify_disks(coeffs: Coeffs, approx):
    """Weierstrass-style inclusion disks with exact rational radii.

    For pairwise distinct points z_i and monic g = f/lead, every root of f
    lies in the union of disks D(z_i, d*|g(z_i)| / prod_{j!=i}|z_i - z_j|),
    and a connected component made of k disks holds exactly k roots.
    Radii returned are certified upper bounds; None when the points collide.
    """
    d = len(coeffs) - 1
    lead2 = Fraction(coeffs[-1]) ** 2
    radii = []
    for i, (x, y) in enumerate(approx):
        re, im = _horner_complex_exact(coeffs, x, y)
        num2 = (re * re + im * im) / lead2
        den2 = Fraction(1)
        for j, (u, v) in enumerate(approx):
            if j != i:
                dz2 = (x - u) ** 2 + (y - v) ** 2
                if dz2 == 0:
                    return None
                den2 *= dz2
        radii.append(Fraction(d) * frac_sqrt_upper(num2 / den2))
    return radii


def _disks_disjoint(centers, radii) -> bool:
    n = len(centers)
    for i in range(n):
        xi, yi = centers[i]
        for j in range(i + 1, n):
            xj, yj = centers[j]
            if (xi - xj) ** 2 + (yi - yj) ** 2 <= (radii[i] + radii[j]) ** 2:
                return False
    return True


def _symmetrize(centers, radii):
    """Make enclosures exactly conjugate-symmetric; snap real roots.

    Returns None when realness/pairing cannot be certified yet.
    """
    n = len(centers)
    out = [None] * n
    used = [False] * n
    for i in range(n):
        if used[i]:
            continue
        x, y = centers[i]
        r = radii[i]
        if abs(y) > r:
            # certified non-real: conj(D_i) misses D_i, so conj(root) != root
            partner = None
            for j in range(n):
                if j != i and not used[j]:
                    xj, yj = centers[j]
                    if (xj - x) ** 2 + (yj + y) ** 2 <= (radii[j] + r) ** 2:
                        if partner is not None:
                            return None
                        partner = j
            if partner is None:
                return None
            xj, yj = centers[partner]
            shift2 = (xj - x) ** 2 + (yj + y) ** 2
            rad = max(r, radii[partner] + frac_sqrt_upper(shift2))
            out[i] = (x, y, rad)
            out[partner] = (x, -y, rad)
            used[i] = used[partner] = True
        else:
            # candidate real root: conj(D_i) must miss every other disk
            for j in range(n):
                if j != i:
                    xj, yj = centers[j]
                    if (xj - x) ** 2 + (yj + y) ** 2 <= (radii[j] + r) ** 2:
                        return None
            out[i] = (x, Fraction(0), r + abs(y))
            used[i] = True
    return out


def root_enclosures(
    f: IntPolynomial,
    radius_bound: Fraction = Fraction(1, 10**6),
    precision_cap: int | None = None,
) -> list[RootEnclosure]:
    """Certified, canonically ordered enclosures of all roots of f.

    Returns deg f enclosures (entries repeat for multiple roots), ordered
    by (real part, imaginary part) of the centers.  Conjugate pairs have
    exactly mirrored centers and real roots have imaginary part 0 exactly.
    """
    if f.degree < 1:
        raise InvalidInput("need degree >= 1")
    radius_bound = Fraction(radius_bound)
    cap = precision_cap or DEFAULT_PRECISION_CAP

    coeffs = f.coeffs
    nzeros = 0
    while coeffs[0] == 0:
        coeffs = coeffs[1:]
        nzeros += 1
    factors = squarefree_decomposition(coeffs) if len(coeffs) > 1 else []

    for prec in precision_ladder(cap):
        groups = []
        ok = True
        for g, mult in factors:
            if len(g) == 2:
                root = Fraction(-g[0], g[1])
                groups.append([(root, Fraction(0), Fraction(0), mult)])
                continue
            approx = _aberth_approximations(g, prec)
            radii = _certify_disks(g, approx)
            if radii is None:
                ok = False
                break
            if not _disks_disjoint(approx, radii):
                ok = False
                break
            sym = _symmetrize(approx, radii)
            if sym is None:
                ok = False
                break
            centers2 = [(x, y) for x, y, _ in sym]
            radii2 = [r for _, _, r in sym]
            if any(r > radius_bound for r in radii2):
                ok = False
                break
            if not _disks_disjoint(centers2, radii2):
                ok = False
                break
            groups.append([(x, y, r, mult) for (x, y, r) in sym])
        if not ok:
            continue
        # cross-factor disjointness (roots of distinct squarefree factors differ)
        flat = [t for grp in groups for t in grp]
        if nzeros:
            flat.append((Fraction(0), Fraction(0), Fraction(0), nzeros))
        if not _disks_disjoint([(x, y) for x, y, _, _ in flat],
                               [r for _, _, r, _ in flat]):
            continue
        out = []
        for x, y, r, mult in flat:
            enc = RootEnclosure(x, y, r, mult)
            out.extend([enc] * mult)
        out.sort(key=lambda e: e.sort_key())
        return out
    raise PrecisionExhausted(
        f"could not certify roots of {f} within {cap} bits at radius {radius_bound}")


# ---------------------------------------------------------------------------
# Mahler measure

def quadratic_mahler_exact(a: int, b: int, c: int):
    """Exact Mahler data of a x^2 + b x + c (a > 0, no root of unity).

    Returns ('rat', Fraction) or ('surd', (|b|, disc)) encoding that
    M = (|b| + sqrt(disc))/2 (the one-root-outside case).
    """
    disc = b * b - 4 * a * c
    if disc < 0:
        return ("rat", Fraction(max(a, c)))
    s = math.isqrt(disc)
    exact_sqrt = s * s == disc
    f1, fm1 = a + b + c, a - b + c
    if f1 < 0 and fm1 < 0:
        return ("rat", Fraction(abs(c)))
    if f1 < 0 or fm1 < 0:
        if exact_sqrt:
            return ("rat", Fraction(abs(b) + s, 2))
        return ("surd", (abs(b), disc))
    if abs(b) <= 2 * a:
        return ("rat", Fraction(a))
    return ("rat", Fraction(abs(c)))


def compare_surd_rat(surd, q: Fraction) -> int:
    """sign((b + sqrt(d))/2 - q) computed exactly."""
    b, d = surd
    t = 2 * Fraction(q) - b
    if t < 0:
        return 1
    t2 = t * t
    return -1 if d < t2 else 0 if d == t2 else 1


def _surd_interval(b: int, disc: int, eps: Fraction) -> CertifiedReal:
    """Enclosure of (b + sqrt(disc))/2 with relative width <= eps."""
    scale = 1 << 40
    while True:
        s = math.isqrt(disc * scale * scale)
        lo = Fraction(b * scale + s, 2 * scale)
        hi = Fraction(b * scale + s + 1, 2 * scale)
        if lo > 0 and (hi - lo) / lo <= eps:
            return CertifiedReal(lo, hi)
        scale <<= 32


def mahler_bounds_graeffe(coeffs: Coeffs, steps: int):
    """Certified rational bounds lo <= M(f) <= hi from Graeffe iterations.

    After k root-squarings g has Mahler measure M(f)^(2^k); Landau's
    inequality M(g) <= l2norm(g) gives the upper bound and the coefficient
    inequality maxnorm(g) <= binom(d, d//2) M(g) gives the lower one.
    """
    g = coeffs
    for _ in range(steps):
        g = graeffe_step(g)
    n = 1 << steps
    d = len(g) - 1
    l2sq = 0
    inf = 0
    for c in g:
        l2sq += c * c
        if c > inf:
            inf = c
        elif -c > inf:
            inf = -c
    hi = frac_nth_root_upper(Fraction(l2sq), 2 * n, bits=4)
    lo = frac_nth_root_lower(Fraction(inf, math.comb(d, d // 2)), n, bits=4)
    lo = max(lo, frac_nth_root_lower(Fraction(abs(g[-1])), n, bits=4),
             frac_nth_root_lower(Fraction(abs(g[0])), n, bits=4))
    return lo, hi


def _mahler_interval_from_roots(coeffs: Coeffs, prec: int, radius: Fraction):
    """Enclosure of M via root enclosures at one precision setting."""
    encs = root_enclosures(IntPolynomial(coeffs), radius, precision_cap=prec)
    m = CertifiedReal.exact(abs(coeffs[-1]))
    for e in encs:
        m = m * e.abs_bounds(bits=prec + 64).max1()
    return m


def mahler_measure(
    f: IntPolynomial,
    eps: Fraction = DEFAULT_EPS,
    precision_cap: int | None = None,
) -> CertifiedReal:
    """Certified enclosure of the Mahler measure, relative width <= eps.

    Roots of unity are removed exactly first, so unit-circle factors
    contribute exactly 1 and the common exact cases stay exact.
    """
    if f.is_zero():
        raise InvalidInput("zero polynomial")
    eps = Fraction(eps)
    if eps <= 0:
        raise InvalidInput("eps must be positive")
    cap = precision_cap or DEFAULT_PRECISION_CAP
    _, rem = strip_cyclotomic(f)
    coeffs = trim(rem.coeffs)
    while coeffs and coeffs[0] == 0:
        coeffs = coeffs[1:]
    if len(coeffs) <= 1:
        return CertifiedReal.exact(abs(coeffs[0]) if coeffs else 0)
    if len(coeffs) == 2:
        a, b = coeffs
        m = max(Fraction(abs(b)), Fraction(abs(a)))
        return CertifiedReal.exact(m)
    if len(coeffs) == 3:
        kind, val = quadratic_mahler_exact(coeffs[2], coeffs[1], coeffs[0])
        if kind == "rat":
            return CertifiedReal.exact(val)
        return _surd_interval(val[0], val[1], eps)
    # try cheap Graeffe bounds before any root finding
    for k in (4, 6, 8, 10):
        lo, hi = mahler_bounds_graeffe(coeffs, k)
        if lo > 0 and (hi - lo) / lo <= eps:
            return CertifiedReal(lo, hi)
    radius = Fraction(1, 1 << 40)
    for prec in precision_ladder(cap):
        try:
            m = _mahler_interval_from_roots(coeffs, prec, radius)
        except PrecisionExhausted:
            radius *= 4
            continue
        if m.lo > 0 and m.rel_width() <= eps:
            return m
        radius = radius * radius
    raise PrecisionExhausted(f"mahler_measure({f}) at eps {eps}")


def mahler_is_one(f: IntPolynomial) -> bool:
    """Exact test M(f) = 1 (Kronecker: lead 1 and only cyclotomic/zero roots)."""
    _, rem = strip_cyclotomic(f)
    coeffs = trim(rem.coeffs)
    while coeffs and coeffs[0] == 0:
        coeffs = coeffs[1:]
    return len(coeffs) == 1 and abs(coeffs[0]) == 1


# ---------------------------------------------------------------------------
# exact comparison of M(f) against a rational threshold

def _subset_product_poly(coeffs: Coeffs, cap: int) -> list[int]:
    """Integer polynomial with roots lead * prod_{i in S} r_i over all subsets S.

    Each subset product of roots times the leading coefficient is an
    algebraic integer, and the product over subsets is symmetric in the
    roots, so the polynomial has integer coefficients.  They are computed
    as certified intervals and snapped once each interval pins one integer.
    """
    d = len(coeffs) - 1
    if d > EXACT_COMPARE_DEGREE_CAP:
        raise DegreeCapExceeded(
            f"exact Mahler comparison capped at degree {EXACT_COMPARE_DEGREE_CAP}")
    lead = coeffs[-1]
    radius = Fraction(1, 1 << 50)
    for prec in precision_ladder(cap):
        try:
            encs = root_enclosures(IntPolynomial(coeffs), radius, precision_cap=prec)
        except PrecisionExhausted:
            radius *= 16
            continue
        work_bits = max(256, prec)
        products = [CInterval.exact(lead)]
        for e in encs:
            z = e.to_cinterval()
            products += [(p * z).rounded(work_bits) for p in products]
        # multiply out prod (z - p)
        polyc = [CInterval.exact(1)]
        for p in products:
            new = [CInterval.exact(0)] * (len(polyc) + 1)
            for i, c in enumerate(polyc):
                new[i + 1] = (new[i + 1] + c).rounded(work_bits)
                new[i] = (new[i] - (c * p)).rounded(work_bits)
            polyc = new
        ints = []
        good = True
        for c in polyc:
            if not (c.im.lo <= 0 <= c.im.hi):
                good = False
                break
            n = math.ceil(c.re.lo)
            if n != math.floor(c.re.hi):
                good = False
                break
            ints.append(n)
        if good:
            return ints
        radius = radius**2
    raise PrecisionExhausted("subset-product polynomial did not stabilize")


def _divide_out_root(R: list[Fraction], c: Fraction):
    """Divide R by (z - c) as often as it divides exactly; returns (R', k)."""
    k = 0
    cur = R
    while True:
        q = [Fraction(0)] * (len(cur) - 1)
        carry = Fraction(0)
        for i in range(len(cur) - 1, 0, -1):
            carry = cur[i] + carry * c
            q[i - 1] = carry
        rem = cur[0] + carry * c
        if rem != 0 or len(cur) == 1:
            return cur, k
        cur = q
        k += 1
        if len(cur) == 1:
            return cur, k


def compare_mahler(
    f: IntPolynomial,
    q,
    precision_cap: int | None = None,
) -> str:
    """Exact trichotomy of M(f) against a positive rational: 'LT'/'EQ'/'GT'.

    Refinement decides every non-tie; a potential tie (only possible when
    q^2 is an integer, since a rational Mahler measure of an integer
    polynomial has integer square) is settled with the exact
    subset-product polynomial.
    """
    if f.is_zero():
        raise InvalidInput("zero polynomial")
    q = Fraction(q)
    if q <= 0:
        raise InvalidInput("threshold must be positive")
    cap = precision_cap or DEFAULT_PRECISION_CAP
    _, rem = strip_cyclotomic(f)
    coeffs = trim(rem.coeffs)
    while coeffs and coeffs[0] == 0:
        coeffs = coeffs[1:]
    if len(coeffs) <= 1:
        m = abs(coeffs[0]) if coeffs else 0
        return "LT" if m < q else "EQ" if m == q else "GT"
    if len(coeffs) == 2:
        m = max(Fraction(abs(coeffs[1])), Fraction(abs(coeffs[0])))
        return "LT" if m < q else "EQ" if m == q else "GT"
    if len(coeffs) == 3:
        kind, val = quadratic_mahler_exact(coeffs[2], coeffs[1], coeffs[0])
        if kind == "rat":
            return "LT" if val < q else "EQ" if val == q else "GT"
        s = compare_surd_rat(val, q)
        return "LT" if s < 0 else "EQ" if s == 0 else "GT"

    for k in range(0, 12):
        lo, hi = mahler_bounds_graeffe(coeffs, k)
        if hi < q:
            return "LT"
        if lo > q:
            return "GT"

    tie_possible = (q * q).denominator == 1
    radius = Fraction(1, 1 << 40)
    if not tie_possible:
        for prec in precision_ladder(cap):
            try:
                m = _mahler_interval_from_roots(coeffs, prec, radius)
            except PrecisionExhausted:
                radius *= 16
                continue
            if m.hi < q:
                return "LT"
            if m.lo > q:
                return "GT"
            radius = radius * radius
        raise PrecisionExhausted(f"compare_mahler({f}, {q})")

    # possible exact tie: build the subset-product polynomial
    P = _subset_product_poly(coeffs, cap)
    Pq = [Fraction(c) for c in P]
    R_pos, k_pos = _divide_out_root(Pq, q)
    R_neg, k_neg = _divide_out_root(R_pos, -q)
    if k_pos == 0 and k_neg == 0:
        # q is not a subset-product value at all, M != q
        for prec in precision_ladder(cap):
            try:
                m = _mahler_interval_from_roots(coeffs, prec, radius)
            except PrecisionExhausted:
                radius *= 16
                continue
            if m.hi < q:
                return "LT"
            if m.lo > q:
                return "GT"
            radius = radius * radius
        raise PrecisionExhausted(f"compare_mahler({f}, {q})")
    R_int = R_neg
    rho = min(_root_free_radius_q(R_int, q), _root_free_radius_q(R_int, -q), q)
    for prec in precision_ladder(cap):
        try:
            m = _mahler_interval_from_roots(coeffs, prec, radius)
        except PrecisionExhausted:
            radius *= 16
            continue
        if m.hi < q:
            return "LT"
        if m.lo > q:
            return "GT"
        if q - rho < m.lo and m.hi < q + rho:
            # M is a root of P, lies within rho of q, and every non-(+-q)
            # root of P is at least rho away; M > 0 forces M = q.
            return "EQ"
        radius = radius * radius
    raise PrecisionExhausted(f"compare_mahler({f}, {q})")


def _root_free_radius_q(R: list[Fraction], c: Fraction) -> Fraction:
    val = _eval_frac_poly(R, c)
    if val == 0:
        raise InvalidInput("R vanishes at c")
    bound = Fraction(0)
    base = abs(c) + 1
    for j in range(1, len(R)):
        bound += abs(R[j]) * j * base ** (j - 1)
    if bound == 0:
        return Fraction(1)
    return min(Fraction(1), abs(val) / bound)


def _eval_frac_poly(R: list[Fraction], c: Fraction) -> Fraction:
    acc = Fraction(0)
    for coef in reversed(R):
        acc = acc * c + coef
    return acc
