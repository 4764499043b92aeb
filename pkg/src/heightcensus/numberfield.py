"""Absolute number fields Q[x]/(g), exact element arithmetic, Trager
factorization, quadratic-field invariants and Dedekind zeta values."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import iv

from .certified import (
    CertifiedReal,
    DEFAULT_PRECISION_CAP,
    RootEnclosure,
    precision_ladder,
    root_enclosures,
)
from .errors import DegreeCapExceeded, InvalidInput, PrecisionExhausted
from .intpoly import (
    Coeffs,
    IntPolynomial,
    factor_z,
    is_irreducible,
    kronecker_symbol,
    resultant,
    trim,
)
from .lseries import dirichlet_l, zeta

FACTOR_OVER_FIELD_CAP = 24  # deg f * deg K

QCoeffs = tuple[Fraction, ...]


def _qtrim(c) -> QCoeffs:
    out = [Fraction(x) for x in c]
    while out and not out[-1]:
        out.pop()
    return tuple(out)


# ---------------------------------------------------------------------------
# polynomial helpers over Q

def q_add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] += y
    return _qtrim(out)


def q_mul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _qtrim(out)


def q_divmod(a, b):
    r = list(a)
    db = len(b) - 1
    inv = 1 / b[-1]
    q = [Fraction(0)] * max(0, len(r) - db)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i] * inv
        if c:
            q[i - db] = c
            for j in range(db + 1):
                r[i - db + j] -= c * b[j]
    return _qtrim(q), _qtrim(r[:db])


def q_gcd_monic(a, b):
    a, b = _qtrim(a), _qtrim(b)
    while b:
        a, b = b, q_divmod(a, b)[1]
    if a:
        lead = a[-1]
        a = tuple(c / lead for c in a)
    return a


def q_resultant(a, b) -> Fraction:
    A, B = list(_qtrim(a)), list(_qtrim(b))
    if not A or not B:
        return Fraction(0)
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
        R = list(q_divmod(A, B)[1])
        if (da * db) % 2:
            res = -res
        if not R:
            return Fraction(0)
        res *= B[-1] ** (da - (len(R) - 1))
        A, B = B, R
    return res


# ---------------------------------------------------------------------------
# number fields and their elements

@dataclass(frozen=True)
class NumberField:
    """Q[x]/(g) for a canonical irreducible integer polynomial g."""

    gen: IntPolynomial
    embeddings: tuple[RootEnclosure, ...]
    signature: tuple[int, int]

    @property
    def degree(self) -> int:
        return self.gen.degree

    def one(self) -> "FieldElement":
        return self.element([1])

    def theta(self) -> "FieldElement":
        return self.element([0, 1])

    def element(self, coords) -> "FieldElement":
        c = [Fraction(x) for x in coords]
        if len(c) > self.degree:
            raise InvalidInput("too many coordinates")
        c += [Fraction(0)] * (self.degree - len(c))
        return FieldElement(self, tuple(c))

    def from_rational(self, x) -> "FieldElement":
        return self.element([Fraction(x)])

    # reduction data: x^e = -(G_0 + ... + G_{e-1} x^{e-1}) for monic G = g/lead
    def _reduction_row(self) -> QCoeffs:
        g = self.gen.coeffs
        lead = Fraction(g[-1])
        return tuple(-Fraction(c) / lead for c in g[:-1])

    def __repr__(self):
        return f"NumberField({self.gen})"


def make_field(g: IntPolynomial, precision_cap: int | None = None) -> NumberField:
    """Build the field Q[x]/(g) with certified signature."""
    if g.degree < 1:
        raise InvalidInput("generator must have degree >= 1")
    if not g.is_canonical():
        g = g.canonical()
    if not is_irreducible(g):
        raise InvalidInput(f"generator {g} is reducible over Q")
    encs = tuple(root_enclosures(g, Fraction(1, 1 << 48), precision_cap=precision_cap))
    r = sum(1 for e in encs if e.is_real())
    s = (g.degree - r) // 2
    return NumberField(g, encs, (r, s))


_RATIONAL_FIELD = None


def rational_field() -> NumberField:
    """Q itself, represented as Q[x]/(x)."""
    global _RATIONAL_FIELD
    if _RATIONAL_FIELD is None:
        _RATIONAL_FIELD = make_field(IntPolynomial((0, 1)))
    return _RATIONAL_FIELD


@dataclass(frozen=True)
class FieldElement:
    """Element of a NumberField in the power basis 1, theta, ..., theta^{e-1}."""

    owner: NumberField
    coords: QCoeffs

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise InvalidInput("element is not rational")
        return self.coords[0]

    def __add__(self, o):
        o = self._coerce(o)
        return FieldElement(self.owner, tuple(a + b for a, b in zip(self.coords, o.coords)))

    def __sub__(self, o):
        o = self._coerce(o)
        return FieldElement(self.owner, tuple(a - b for a, b in zip(self.coords, o.coords)))

    def __neg__(self):
        return FieldElement(self.owner, tuple(-a for a in self.coords))

    def __mul__(self, o):
        o = self._coerce(o)
        e = self.owner.degree
        prod = [Fraction(0)] * (2 * e - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(o.coords):
                    prod[i + j] += a * b
        red = self.owner._reduction_row()
        for k in range(2 * e - 2, e - 1, -1):
            c = prod[k]
            if c:
                prod[k] = Fraction(0)
                for j, rj in enumerate(red):
                    prod[k - e + j] += c * rj
        return FieldElement(self.owner, tuple(prod[:e]))

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, o):
        return self._coerce(o) - self

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("field element inverse of zero")
        # extended Euclid of the coordinate polynomial with g over Q
        g = tuple(Fraction(c) for c in self.owner.gen.coeffs)
        a = _qtrim(self.coords)
        r0, r1 = g, a
        s0, s1 = (), (Fraction(1),)
        while r1:
            q, r = q_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _qtrim([x - y for x, y in
                                 zip(list(s0) + [Fraction(0)] * max(0, len(q_mul(q, s1)) - len(s0)),
                                     list(q_mul(q, s1)) + [Fraction(0)] * max(0, len(s0) - len(q_mul(q, s1))))])
        inv_lead = 1 / r0[0]
        coords = [c * inv_lead for c in s0]
        return self.owner.element(coords)

    def __truediv__(self, o):
        return self * self._coerce(o).inverse()

    def __eq__(self, o):
        if not isinstance(o, FieldElement):
            try:
                o = self._coerce(o)
            except (TypeError, ValueError):
                return NotImplemented
        return self.owner.gen == o.owner.gen and self.coords == o.coords

    def __hash__(self):
        return hash((self.owner.gen.coeffs, self.coords))

    def _coerce(self, o) -> "FieldElement":
        if isinstance(o, FieldElement):
            if o.owner is not self.owner and o.owner.gen != self.owner.gen:
                raise InvalidInput("elements of different fields")
            return o
        return self.owner.from_rational(o)

    def numeric(self, embedding_index: int = 0):
        """Complex interval value under the chosen canonical embedding."""
        enc = self.owner.embeddings[embedding_index]
        box = enc.to_cinterval()
        from .certified import CInterval

        acc = CInterval.exact(0)
        for c in reversed(self.coords):
            acc = acc * box + CInterval.exact(c)
        return acc


# polynomials over K are tuples of FieldElements, constant term first
KPoly = tuple[FieldElement, ...]


def kpoly(K: NumberField, rows) -> KPoly:
    out = []
    for r in rows:
        out.append(r if isinstance(r, FieldElement) else K.element(r if isinstance(r, (list, tuple)) else [r]))
    while out and out[-1].is_zero():
        out.pop()
    return tuple(out)


def kpoly_from_int(K: NumberField, f: IntPolynomial) -> KPoly:
    return kpoly(K, [[c] for c in f.coeffs])


def kpoly_mul(a: KPoly, b: KPoly) -> KPoly:
    if not a or not b:
        return ()
    K = a[0].owner
    zero = K.from_rational(0)
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _ktrim(out)


def kpoly_sub(a: KPoly, b: KPoly) -> KPoly:
    K = (a or b)[0].owner
    zero = K.from_rational(0)
    out = list(a) + [zero] * max(0, len(b) - len(a))
    for i, y in enumerate(b):
        out[i] = out[i] - y
    return _ktrim(out)


def _ktrim(c) -> KPoly:
    out = list(c)
    while out and out[-1].is_zero():
        out.pop()
    return tuple(out)


def kpoly_divmod(a: KPoly, b: KPoly):
    if not b:
        raise ZeroDivisionError("division by zero polynomial over K")
    K = b[0].owner
    inv = b[-1].inverse()
    r = list(a)
    db = len(b) - 1
    q = [K.from_rational(0)] * max(0, len(r) - db)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i] * inv
        if not c.is_zero():
            q[i - db] = c
            for j in range(db + 1):
                r[i - db + j] = r[i - db + j] - c * b[j]
    return _ktrim(q), _ktrim(r[:db])


def kpoly_gcd_monic(a: KPoly, b: KPoly) -> KPoly:
    a, b = _ktrim(a), _ktrim(b)
    while b:
        a, b = b, kpoly_divmod(a, b)[1]
    if a:
        inv = a[-1].inverse()
        a = tuple(c * inv for c in a)
    return a


def kpoly_monic(a: KPoly) -> KPoly:
    if not a:
        return a
    inv = a[-1].inverse()
    return tuple(c * inv for c in a)


def kpoly_derivative(a: KPoly) -> KPoly:
    return _ktrim([a[i] * i for i in range(1, len(a))])


def kpoly_eval(a: KPoly, x: FieldElement) -> FieldElement:
    acc = x.owner.from_rational(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def kpoly_key(a: KPoly):
    """Hashable canonical key for deduplicating K-polynomials."""
    return tuple(c.coords for c in a)


# ---------------------------------------------------------------------------
# Trager factorization over K

def _shifted_bivariate(f: KPoly, t: int):
    """Coefficients c_j(y) in Q[y] of f(x - t*theta) with theta -> y, as a
    dict j -> tuple of Fractions (poly in y)."""
    n = len(f) - 1
    cols: dict[int, list[Fraction]] = {}
    for i, coeff in enumerate(f):
        # coeff * (x - t y)^i contributes to x^j with binom(i, j) (-t y)^{i-j}
        base = _qtrim(coeff.coords)
        for j in range(i + 1):
            factor = math.comb(i, j) * (-t) ** (i - j)
            if factor == 0 and i != j:
                continue
            # multiply base by factor * y^{i-j}
            shift = i - j
            tgt = cols.setdefault(j, [])
            need = len(base) + shift
            if len(tgt) < need:
                tgt.extend([Fraction(0)] * (need - len(tgt)))
            for k, c in enumerate(base):
                tgt[k + shift] += factor * c
    return {j: _qtrim(v) for j, v in cols.items() if _qtrim(v)}


def _bounded_resultant(g: QCoeffs, h: list[Fraction], dy: int) -> Fraction:
    """det of the Sylvester-style matrix of g (exact degree) and h padded
    to degree dy; specializes correctly even when h's top entries vanish."""
    e = len(g) - 1
    hh = list(h) + [Fraction(0)] * (dy + 1 - len(h))
    size = e + dy
    if size == 0:
        return Fraction(1)
    rows = []
    for i in range(dy):
        row = [Fraction(0)] * size
        for k, c in enumerate(reversed(g)):
            row[i + k] = Fraction(c)
        rows.append(row)
    for i in range(e):
        row = [Fraction(0)] * size
        for k in range(dy, -1, -1):
            row[i + (dy - k)] = hh[k]
        rows.append(row)
    # fraction Gaussian elimination determinant
    det = Fraction(1)
    n = size
    for col in range(n):
        piv = None
        for r in range(col, n):
            if rows[r][col]:
                piv = r
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        det *= rows[col][col]
        inv = 1 / rows[col][col]
        for r in range(col + 1, n):
            if rows[r][col]:
                fac = rows[r][col] * inv
                for c2 in range(col, n):
                    rows[r][c2] -= fac * rows[col][c2]
    return det


def _norm_poly(f: KPoly, K: NumberField, t: int) -> QCoeffs:
    """Norm-style resultant N(x) = Res_y(g(y), f(x - t theta)|_{theta->y})."""
    g = tuple(Fraction(c) for c in K.gen.coeffs)
    cols = _shifted_bivariate(f, t)
    dy = max((len(v) - 1 for v in cols.values()), default=0)
    n = len(f) - 1
    deg_n = K.degree * n
    xs = range(-(deg_n // 2), deg_n - deg_n // 2 + 1)
    values = []
    for x0 in xs:
        h = [Fraction(0)] * (dy + 1)
        for j, cy in cols.items():
            p = Fraction(x0) ** j
            for k, c in enumerate(cy):
                h[k] += c * p
        values.append(_bounded_resultant(g, h, dy))
    # Lagrange interpolation at the chosen integer points
    pts = list(xs)
    coeffs = [Fraction(0)] * len(pts)
    for i, (xi, yi) in enumerate(zip(pts, values)):
        if yi == 0:
            continue
        num = [Fraction(1)]
        den = Fraction(1)
        for j, xj in enumerate(pts):
            if j != i:
                num = list(q_mul(tuple(num), (Fraction(-xj), Fraction(1))))
                den *= xi - xj
        w = yi / den
        for k, c in enumerate(num):
            coeffs[k] += w * c
    return _qtrim(coeffs)


def factor_over_field(f, K: NumberField, cap: int = FACTOR_OVER_FIELD_CAP):
    """Exact irreducible factorization over K (Trager's method).

    f may be an IntPolynomial or a KPoly; returns (unit: FieldElement,
    [(monic irreducible KPoly, multiplicity)]), product reproducing f.
    """
    if isinstance(f, IntPolynomial):
        f = kpoly_from_int(K, f)
    f = _ktrim(f)
    if not f:
        raise InvalidInput("zero polynomial")
    n = len(f) - 1
    if n * K.degree > cap:
        raise DegreeCapExceeded(f"factor_over_field cap {cap} exceeded: {n} * {K.degree}")
    unit = f[-1]
    f = kpoly_monic(f)
    if n == 0:
        return unit, []
    out: list[tuple[KPoly, int]] = []
    for sf, mult in _k_squarefree_decomposition(f):
        for p in _factor_squarefree_over_field(sf, K):
            out.append((p, mult))
    out.sort(key=lambda t: (len(t[0]), kpoly_key(t[0])))
    return unit, out


def _k_squarefree_decomposition(f: KPoly) -> list[tuple[KPoly, int]]:
    """Yun's algorithm over K for monic f: [(g_i, i)], f = prod g_i^i."""
    if len(f) <= 1:
        return []
    g = kpoly_gcd_monic(f, kpoly_derivative(f))
    if len(g) == 1:
        return [(f, 1)]
    out = []
    w = kpoly_divmod(f, g)[0]
    y = kpoly_divmod(kpoly_derivative(f), g)[0]
    z = kpoly_sub(y, kpoly_derivative(w))
    i = 1
    while z:
        gi = kpoly_gcd_monic(w, z)
        if len(gi) > 1:
            out.append((gi, i))
        w = kpoly_divmod(w, gi)[0]
        y = kpoly_divmod(z, gi)[0]
        z = kpoly_sub(y, kpoly_derivative(w))
        i += 1
    if len(w) > 1:
        out.append((w, i))
    return out


def _factor_squarefree_over_field(f: KPoly, K: NumberField) -> list[KPoly]:
    n = len(f) - 1
    if n <= 1:
        return [f]
    theta = K.theta()
    for t in [0, 1, -1, 2, -2, 3, -3, 4, -4, 5, -5]:
        norm = _norm_poly(f, K, t)
        if not norm or len(norm) - 1 != n * K.degree:
            continue
        if len(q_gcd_monic(norm, _qtrim([c * i for i, c in enumerate(norm)][1:]))) > 1:
            continue
        # clear denominators and factor over Z
        den = 1
        for c in norm:
            den = den * c.denominator // math.gcd(den, c.denominator)
        zpoly = IntPolynomial(int(c * den) for c in norm)
        _, zfactors = factor_z(zpoly, degree_cap=None)
        if len(zfactors) == 1:
            return [f]
        out = []
        shift = K.from_rational(t) * theta
        for p, _m in zfactors:
            # p(x + t*theta) over K
            pk = kpoly(K, [[Fraction(c)] for c in p.coeffs])
            shifted = _kpoly_compose_linear(pk, shift)
            gk = kpoly_gcd_monic(f, shifted)
            if len(gk) > 1:
                out.append(gk)
        if sum(len(g) - 1 for g in out) == n:
            return out
    raise PrecisionExhausted(f"no squarefree Trager shift found for {f}")


def _kpoly_compose_linear(p: KPoly, shift: FieldElement) -> KPoly:
    """p(x + shift) over K."""
    K = shift.owner
    out: KPoly = (p[-1],)
    xplus = kpoly(K, [shift, K.from_rational(1)])
    for c in reversed(p[:-1]):
        out = kpoly_mul(out, xplus)
        out = kpoly_sub(out, kpoly(K, [-c]))
    return out


# ---------------------------------------------------------------------------
# field identity and relative degrees

def has_linear_factor_over(f: IntPolynomial, K: NumberField) -> bool:
    if f.degree * K.degree > FACTOR_OVER_FIELD_CAP:
        raise DegreeCapExceeded("has_linear_factor_over cap")
    _, factors = factor_over_field(f, K)
    return any(len(p) - 1 == 1 for p, _ in factors)


def field_equals(K1: NumberField, K2: NumberField) -> bool:
    """True iff K1 and K2 are isomorphic fields."""
    if K1.degree != K2.degree:
        return False
    if K1.gen == K2.gen:
        return True
    if K1.degree == 2:
        return _quadratic_kernel(K1.gen) == _quadratic_kernel(K2.gen)
    return has_linear_factor_over(K1.gen, K2)


def _quadratic_kernel(g: IntPolynomial) -> int:
    """Squarefree kernel of disc(g) for a quadratic generator."""
    from .intpoly import poly_discriminant

    d = poly_discriminant(g)
    return squarefree_kernel(d)


def squarefree_kernel(d: int) -> int:
    """Squarefree part of d, sign preserved."""
    if d == 0:
        return 0
    sign = -1 if d < 0 else 1
    d = abs(d)
    out = 1
    for p, m in factorize(d):
        if m % 2:
            out *= p
    return sign * out


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization via trial division + Pollard rho (deterministic)."""
    if n == 0:
        raise InvalidInput("factorize(0)")
    n = abs(n)
    out: dict[int, int] = {}
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return sorted(out.items())


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        x, y, d = 2, 2, 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise InvalidInput(f"pollard rho failed on {n}")


@dataclass(frozen=True)
class RelativeDegrees:
    """Factor-degree data of a rational polynomial over a field K."""

    degrees: tuple[int, ...]           # sorted multiset of factor degrees
    factors: tuple[KPoly, ...]
    root_factor_degrees: tuple[int, ...]  # per canonical root index of D

    def degree_for_root(self, index: int) -> int:
        return self.root_factor_degrees[index]


def relative_degree(D: IntPolynomial, K: NumberField) -> RelativeDegrees:
    """Degrees of the irreducible factors of D over K, with the factor
    assignment for every canonical root of D under K's first embedding."""
    if not is_irreducible(D):
        raise InvalidInput("D must be irreducible")
    _, factors = factor_over_field(D, K)
    flist = [p for p, _m in factors]
    degrees = tuple(sorted(len(p) - 1 for p in flist))
    assignment = _match_roots_to_factors(D, K, flist)
    return RelativeDegrees(degrees, tuple(flist), assignment)


def _match_roots_to_factors(D: IntPolynomial, K: NumberField, factors) -> tuple[int, ...]:
    """For each canonical root of D, the degree of its factor over K.

    Certified: a root belongs to the unique factor whose interval value at
    the root's enclosure contains zero while all other factors exclude it.
    """
    if len(factors) == 1:
        return tuple([len(factors[0]) - 1] * D.degree)
    from .certified import CInterval

    radius = Fraction(1, 1 << 52)
    for prec in precision_ladder(DEFAULT_PRECISION_CAP):
        try:
            roots = root_enclosures(D, radius, precision_cap=prec)
            K_emb = root_enclosures(K.gen, radius, precision_cap=prec)[0]
        except PrecisionExhausted:
            continue
        theta_box = K_emb.to_cinterval()
        out = []
        ambiguous = False
        for enc in roots:
            zbox = enc.to_cinterval()
            hits = []
            for fi, fac in enumerate(factors):
                acc = CInterval.exact(0)
                for c in reversed(fac):
                    cval = CInterval.exact(0)
                    for cc in reversed(c.coords):
                        cval = cval * theta_box + CInterval.exact(cc)
                    acc = acc * zbox + cval
                if acc.re.lo <= 0 <= acc.re.hi and acc.im.lo <= 0 <= acc.im.hi:
                    hits.append(fi)
            if len(hits) != 1:
                ambiguous = True
                break
            out.append(len(factors[hits[0]]) - 1)
        if not ambiguous:
            return tuple(out)
        radius = radius * radius
    raise PrecisionExhausted("root-to-factor matching did not separate")


# ---------------------------------------------------------------------------
# quadratic fields

@dataclass(frozen=True)
class QuadraticInvariants:
    disc: int
    h: int
    regulator: CertifiedReal
    w: int
    signature: tuple[int, int]

    def as_cache_record(self) -> dict:
        return {
            "disc": self.disc,
            "h": self.h,
            "w": self.w,
            "r": self.signature[0],
            "s": self.signature[1],
            "reg_lo": str(self.regulator.lo),
            "reg_hi": str(self.regulator.hi),
        }


def fundamental_discriminant(K: NumberField) -> int:
    if K.degree != 2:
        raise InvalidInput("need a quadratic field")
    from .intpoly import poly_discriminant

    m = squarefree_kernel(poly_discriminant(K.gen))
    return m if m % 4 == 1 else 4 * m


def is_fundamental_discriminant(d: int) -> bool:
    if d == 1 or d == 0:
        return False
    if d % 4 == 1:
        return squarefree_kernel(d) == d
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and squarefree_kernel(m) == m
    return False


def reduced_imaginary_forms(disc: int) -> list[tuple[int, int, int]]:
    """Reduced primitive binary quadratic forms of negative discriminant."""
    if disc >= 0 or disc % 4 not in (0, 1):
        raise InvalidInput("need a negative discriminant = 0,1 mod 4")
    forms = []
    a = 1
    while 3 * a * a <= -disc:
        for b in range(-a + 1, a + 1):
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            if math.gcd(math.gcd(a, abs(b)), c) != 1:
                continue
            forms.append((a, b, c))
        a += 1
    return forms


def class_number_imaginary(disc: int) -> int:
    return len(reduced_imaginary_forms(disc))


def _pell_fundamental(m: int) -> tuple[int, int]:
    """Least positive (x, y) with x^2 - m y^2 = +-1, via the continued
    fraction of sqrt(m); every solution is a convergent."""
    a0 = math.isqrt(m)
    if a0 * a0 == m:
        raise InvalidInput("m is a square")
    P, Q, a = 0, 1, a0
    p_prev, q_prev = 1, 0
    p, q = a0, 1
    for _ in range(10**7):
        if p * p - m * q * q in (1, -1):
            return p, q
        P = a * Q - P
        Q = (m - P * P) // Q
        a = (a0 + P) // Q
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
    raise PrecisionExhausted("Pell search did not terminate")


def fundamental_unit(disc: int) -> tuple[int, int]:
    """Fundamental unit of the real quadratic field of fundamental
    discriminant disc, as (x, y) with eps = (x + y*sqrt(m))/2 > 1 and
    m the squarefree kernel of disc."""
    if disc <= 0 or not is_fundamental_discriminant(disc):
        raise InvalidInput("need a positive fundamental discriminant")
    m = disc if disc % 4 == 1 else disc // 4
    x1, y1 = _pell_fundamental(m)
    if disc % 4 != 1:
        return 2 * x1, 2 * y1
    # the unit index [O_K^* : Z[sqrt m]^*] is 1 or 3; try an exact cube root.
    # 2 eps = a + b sqrt(m) and a = trace(eps) ~ u^(1/3) up to +-1.
    scale = 10**6
    approx = x1 * scale + y1 * math.isqrt(m * scale * scale)
    from .certified import iroot

    a_est = iroot(approx, 3) // iroot(scale, 3)
    for a in range(max(1, a_est - 3), a_est + 5):
        for sign in (4, -4):
            num = a * a - sign
            if num <= 0 or num % m:
                continue
            b2 = num // m
            b = math.isqrt(b2)
            if b * b != b2 or b == 0:
                continue
            if (a - b) % 2:
                continue
            # verify ((a + b sqrt m)/2)^3 = x1 + y1 sqrt m exactly
            if a**3 + 3 * a * b * b * m == 8 * x1 and 3 * a * a * b + b**3 * m == 8 * y1:
                return a, b
    return 2 * x1, 2 * y1


def unit_norm(disc: int) -> int:
    """Norm of the fundamental unit: +1 or -1."""
    x, y = fundamental_unit(disc)
    m = disc if disc % 4 == 1 else disc // 4
    n4 = x * x - m * y * y
    assert n4 in (4, -4)
    return n4 // 4


def _iv_eval(fn, prec: int) -> CertifiedReal:
    old = iv.prec
    try:
        iv.prec = prec
        return CertifiedReal.from_mpi(fn())
    finally:
        iv.prec = old


def regulator_interval(disc: int, prec: int = 128) -> CertifiedReal:
    """Certified ln(fundamental unit) for a positive fundamental disc."""
    x, y = fundamental_unit(disc)
    m = disc if disc % 4 == 1 else disc // 4

    def compute():
        return iv.log((x + y * iv.sqrt(m)) / 2)

    return _iv_eval(compute, prec)


def class_number_real(disc: int) -> int:
    """h via the certified finite form of Dirichlet's formula:
    h * ln(eps) = -(1/2) sum_a chi(a) ln sin(pi a / disc)."""
    chis = [kronecker_symbol(disc, a) for a in range(disc)]
    x, y = fundamental_unit(disc)
    m = disc if disc % 4 == 1 else disc // 4
    for prec in (96, 192, 384, 768, 1536):
        def compute():
            total = iv.mpf(0)
            pi = iv.pi
            for a in range(1, disc):
                if chis[a % disc]:
                    term = iv.log(iv.sin(pi * a / disc))
                    total += chis[a % disc] * term
            reg = iv.log((x + y * iv.sqrt(m)) / 2)
            return -total / (2 * reg)

        val = _iv_eval(compute, prec)
        lo, hi = math.ceil(val.lo), math.floor(val.hi)
        if lo == hi:
            return lo
    raise PrecisionExhausted(f"class_number_real({disc})")


def reduced_indefinite_forms(disc: int) -> list[tuple[int, int, int]]:
    """Reduced primitive indefinite forms (a, b, c) of discriminant disc:
    0 < b < sqrt(D), ac < 0, and b + 2|a|, b + 2|c| both exceed sqrt(D)."""
    if disc <= 0:
        raise InvalidInput("need positive discriminant")
    s = math.isqrt(disc)
    out = []
    for b in range(1, s + 1):
        if (disc - b * b) % 4:
            continue
        rest = (disc - b * b) // 4  # = |a| |c|
        if rest <= 0:
            continue
        a_abs = 1
        while a_abs * a_abs <= rest:
            if rest % a_abs == 0:
                for t in (a_abs, rest // a_abs):
                    c_abs = rest // t
                    if (b + 2 * t) ** 2 <= disc or (b + 2 * c_abs) ** 2 <= disc:
                        continue
                    if math.gcd(math.gcd(t, b), c_abs) != 1:
                        continue
                    out.append((t, b, -c_abs))
                    out.append((-t, b, c_abs))
            a_abs += 1
    return sorted(set(out))


def _rho_step(form, disc):
    """Reduction/cycle operator on reduced indefinite forms."""
    a, b, c = form
    s = math.isqrt(disc)
    # b' = -b mod 2c chosen in (sqrt(D) - 2|c|, sqrt(D))
    t = 2 * abs(c)
    b0 = (-b) % t
    # want largest b' < sqrt(D), b' = b0 + k t
    b_new = b0 + ((s - b0) // t) * t
    while b_new * b_new >= disc:
        b_new -= t
    while (b_new + t) ** 2 < disc:
        b_new += t
    a_new = c
    c_new = (b_new * b_new - disc) // (4 * c)
    return (a_new, b_new, c_new)


def narrow_class_number_real(disc: int) -> int:
    """Number of cycles of reduced indefinite forms (the narrow class number)."""
    forms = set(reduced_indefinite_forms(disc))
    seen = set()
    cycles = 0
    for f in sorted(forms):
        if f in seen:
            continue
        cycles += 1
        g = f
        while True:
            seen.add(g)
            g = _rho_step(g, disc)
            if g == f:
                break
            if g in seen and g != f:
                # should not happen: rho permutes reduced forms in cycles
                break
    return cycles


def class_number_real_forms(disc: int) -> int:
    """Form-cycle route to h: h = h_narrow if N(eps) = -1 else h_narrow / 2."""
    hn = narrow_class_number_real(disc)
    if unit_norm(disc) == -1:
        return hn
    assert hn % 2 == 0
    return hn // 2


def quadratic_invariants(K: NumberField, prec: int = 192) -> QuadraticInvariants:
    """Exact discriminant, class number, roots of unity and certified
    regulator of a quadratic field."""
    if K.degree != 2:
        raise InvalidInput("need a quadratic field")
    disc = fundamental_discriminant(K)
    if disc < 0:
        h = class_number_imaginary(disc)
        w = 4 if disc == -4 else 6 if disc == -3 else 2
        return QuadraticInvariants(disc, h, CertifiedReal.exact(0), w, (0, 1))
    h = class_number_real(disc)
    reg = regulator_interval(disc, prec)
    return QuadraticInvariants(disc, h, reg, 2, (2, 0))


def invariants_from_disc(disc: int, prec: int = 192) -> QuadraticInvariants:
    if not is_fundamental_discriminant(disc):
        raise InvalidInput(f"{disc} is not a fundamental discriminant")
    if disc < 0:
        h = class_number_imaginary(disc)
        w = 4 if disc == -4 else 6 if disc == -3 else 2
        return QuadraticInvariants(disc, h, CertifiedReal.exact(0), w, (0, 1))
    return QuadraticInvariants(disc, class_number_real(disc),
                               regulator_interval(disc, prec), 2, (2, 0))


def field_from_disc(disc: int) -> NumberField:
    """Quadratic field of a fundamental discriminant, canonical generator."""
    if disc % 4 == 1:
        g = IntPolynomial((-(disc - 1) // 4, -1, 1))  # x^2 - x - (d-1)/4
    else:
        g = IntPolynomial((-disc // 4, 0, 1))  # x^2 - m
    return make_field(g)


def dedekind_zeta_quadratic(K: NumberField, s: int,
                            eps: Fraction = Fraction(1, 10**30)) -> CertifiedReal:
    """zeta_K(s) = zeta(s) * L(s, chi_disc) for quadratic K, s >= 2."""
    if K.degree == 1:
        return zeta(s, eps)
    if K.degree != 2:
        raise InvalidInput("need degree <= 2")
    if s < 2:
        raise InvalidInput("need s >= 2")
    eps = Fraction(eps)
    disc = fundamental_discriminant(K)
    z = zeta(s, eps / 8)
    l = dirichlet_l(s, disc, eps / 8)
    return z * l


def enumerate_quadratic_fields(disc_bound: int) -> list[NumberField]:
    """All quadratic fields with |disc| <= disc_bound, ordered by
    (|disc|, disc); each exactly once."""
    if disc_bound < 3:
        return []
    discs = []
    for n in range(3, disc_bound + 1):
        for d in (n, -n):
            if is_fundamental_discriminant(d):
                discs.append(d)
    discs.sort(key=lambda d: (abs(d), d))
    return [field_from_disc(d) for d in discs]


# ---------------------------------------------------------------------------
# conjugates and splitting closures (deg K <= 3)

def quadratic_conjugate(x: FieldElement) -> FieldElement:
    """Image of x under the nontrivial automorphism of a quadratic field."""
    K = x.owner
    if K.degree != 2:
        raise InvalidInput("need quadratic field")
    g = K.gen.coeffs
    # theta' = -g1/g2 - theta
    a, b = x.coords
    tr = Fraction(-g[1], g[2])
    return K.element([a + b * tr, -b])


class SplittingData:
    """Absolute representation of a splitting field of K's generator,
    with the embeddings of K realized inside it (deg K <= 3)."""

    def __init__(self, K: NumberField):
        if K.degree > 3:
            raise DegreeCapExceeded("splitting closure only for deg K <= 3")
        self.K = K
        if K.degree == 1:
            self.L = K
            self.theta_images = [K.theta()]
            return
        if K.degree == 2:
            self.L = K
            g = K.gen.coeffs
            tr = Fraction(-g[1], g[2])
            self.theta_images = [K.theta(), K.element([tr, -1])]
            return
        self._build_cubic(K)

    def _build_cubic(self, K: NumberField):
        theta = K.theta()
        # gen = (x - theta) * h over K
        genk = kpoly_from_int(K, K.gen)
        genk = kpoly_monic(genk)
        h, rem = kpoly_divmod(genk, kpoly(K, [-theta, K.from_rational(1)]))
        assert not rem
        h = kpoly_monic(h)  # x^2 + H1 x + H0 over K
        H1, H0 = h[1], h[0]
        disc_h = H1 * H1 - K.from_rational(4) * H0
        # is disc_h a square in K?
        sq = _sqrt_in_field(disc_h)
        if sq is not None:
            half = K.from_rational(Fraction(1, 2))
            r2 = (-H1 + sq) * half
            r3 = (-H1 - sq) * half
            self.L = K
            self.theta_images = [theta, r2, r3]
            return
        # tower K[delta]/(h); find a primitive element gamma = theta + k delta
        for k in range(1, 12):
            data = _absolutize_quadratic_tower(K, h, k)
            if data is not None:
                break
        else:
            raise PrecisionExhausted("no primitive element found for the closure")
        L, theta_L, delta_L = data
        self.L = L
        h1L = _map_K_element_to(H1, theta_L)
        delta2 = -h1L - delta_L
        self.theta_images = [theta_L, delta_L, delta2]

    def embeddings_of_K(self):
        """sigma_i as functions FieldElement(K) -> FieldElement(L)."""
        return [lambda x, im=im: _map_K_element_to(x, im) for im in self.theta_images]

    def map_kpoly(self, f: KPoly, sigma_index: int) -> KPoly:
        im = self.theta_images[sigma_index]
        return _ktrim([_map_K_element_to(c, im) for c in f])


def _map_K_element_to(x: FieldElement, theta_image: FieldElement) -> FieldElement:
    """Evaluate x's coordinate polynomial at an image of theta."""
    L = theta_image.owner
    acc = L.from_rational(0)
    for c in reversed(x.coords):
        acc = acc * theta_image + L.from_rational(c)
    return acc


def _sqrt_in_field(x: FieldElement):
    """A square root of x inside its own field, or None."""
    K = x.owner
    if x.is_zero():
        return K.from_rational(0)
    _, factors = factor_over_field(kpoly(K, [-x, K.from_rational(0), K.from_rational(1)]), K)
    for p, _m in factors:
        if len(p) - 1 == 1:
            return -p[0]
    return None


def _absolutize_quadratic_tower(K: NumberField, h: KPoly, k: int):
    """Turn K[delta]/(h) (h monic quadratic over K) into an absolute field.

    Returns (L, theta_in_L, delta_in_L) where gamma = theta + k*delta is a
    primitive element, or None when it is not primitive.
    """
    e = K.degree
    dim = 2 * e
    H1, H0 = h[1], h[0]

    def tmul(u, v):
        # (u0 + u1 d)(v0 + v1 d) with d^2 = -H1 d - H0
        a0, a1 = u
        b0, b1 = v
        c0 = a0 * b0
        c1 = a0 * b1 + a1 * b0
        c2 = a1 * b1
        return (c0 - c2 * H0, c1 - c2 * H1)

    zero = K.from_rational(0)
    one_t = (K.from_rational(1), zero)
    gamma = (K.theta(), K.from_rational(k))
    powers = [one_t]
    for _ in range(dim):
        powers.append(tmul(powers[-1], gamma))

    def vec(u):
        return list(u[0].coords) + list(u[1].coords)

    # solve for monic minimal polynomial of gamma of degree dim
    rows = [vec(powers[j]) for j in range(dim)]
    target = [-c for c in vec(powers[dim])]
    mat = [list(col) for col in zip(*rows)]
    sol = _solve_linear_fractions([row[:] for row in mat], target)
    if sol is None:
        return None
    min_coeffs = list(sol) + [Fraction(1)]
    den = 1
    for c in min_coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    gpoly = IntPolynomial(int(c * den) for c in min_coeffs).canonical()
    if gpoly.degree != dim or not is_irreducible(gpoly):
        return None
    # L = Q[z]/(gpoly) with z identified with gamma (gpoly is a rational
    # multiple of gamma's minimal polynomial, so the identification holds
    # whether or not gpoly is monic)
    L = make_field(gpoly)
    theta_vec = vec((K.theta(), zero))
    delta_vec = vec((zero, K.from_rational(1)))
    su = _solve_linear_fractions([row[:] for row in mat], theta_vec)
    sv = _solve_linear_fractions([row[:] for row in mat], delta_vec)
    if su is None or sv is None:
        return None
    return L, L.element(su), L.element(sv)


def _solve_linear_fractions(mat: list[list[Fraction]], rhs: list[Fraction]):
    """Solve mat * x = rhs over Q; None when singular."""
    n = len(rhs)
    a = [[Fraction(mat[i][j]) for j in range(n)] + [Fraction(rhs[i])] for i in range(n)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if a[r][col]:
                piv = r
                break
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [vr - f * vc for vr, vc in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def conjugate_polys(f: KPoly, K: NumberField):
    """The [K:Q] conjugates of f inside a splitting closure of K's
    generator, plus the exact pairwise-coprimality verdict.

    Returns (closure field L, [sigma f as KPoly over L], coprime: bool).
    """
    if K.degree > 3:
        raise DegreeCapExceeded("conjugate_polys limited to deg K <= 3")
    sd = SplittingData(K)
    conj = [sd.map_kpoly(f, i) for i in range(K.degree)]
    coprime = True
    for i in range(len(conj)):
        for j in range(i + 1, len(conj)):
            if len(kpoly_gcd_monic(conj[i], conj[j])) > 1:
                coprime = False
    return sd.L, conj, coprime
