"""Elliptic curves y^2 = x^3 + B with j = 0: group law over Q, K = Q(w) and
F_p, CM action of Z[w], point counts, Tate's algorithm, torsion, periods
and canonical heights over Q."""

import csv
import math
import os
from fractions import Fraction

import mpmath

from .algebra import (
    DomainError, EisensteinInt, PrecisionError, cube_root_of_unity_mod,
    factor_int, is_prime, power_residue, primary_associate, primes_up_to,
    sqrt_mod_prime, valuation, _split_prime,
)


# ----------------------------------------------------------------- fields

class QOmega:
    """Element a + b*w of K = Q(w), a, b rational."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))

    def __setattr__(self, name, value):
        raise AttributeError("QOmega is immutable")

    @classmethod
    def coerce(cls, x):
        if isinstance(x, QOmega):
            return x
        if isinstance(x, EisensteinInt):
            return cls(x.a, x.b)
        return cls(x, 0)

    def __add__(self, o):
        o = QOmega.coerce(o)
        return QOmega(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QOmega(-self.a, -self.b)

    def __sub__(self, o):
        return self + (-QOmega.coerce(o))

    def __rsub__(self, o):
        return QOmega.coerce(o) - self

    def __mul__(self, o):
        o = QOmega.coerce(o)
        a, b, c, d = self.a, self.b, o.a, o.b
        return QOmega(a * c - b * d, a * d + b * c - b * d)

    __rmul__ = __mul__

    def conj(self):
        return QOmega(self.a - self.b, -self.b)

    def norm(self):
        return self.a * self.a - self.a * self.b + self.b * self.b

    def __truediv__(self, o):
        o = QOmega.coerce(o)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(w)")
        q = self * o.conj()
        return QOmega(q.a / n, q.b / n)

    def __rtruediv__(self, o):
        return QOmega.coerce(o) / self

    def __pow__(self, k):
        out, base = QOmega(1), self
        if k < 0:
            base, k = QOmega(1) / self, -k
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, o):
        if isinstance(o, (int, Fraction, EisensteinInt)):
            o = QOmega.coerce(o)
        if not isinstance(o, QOmega):
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a or self.b)

    def is_rational(self):
        return self.b == 0

    def to_mpc(self):
        a = mpmath.mpf(self.a.numerator) / self.a.denominator
        b = mpmath.mpf(self.b.numerator) / self.b.denominator
        return a + b * mpmath.exp(2j * mpmath.pi / 3)

    def __repr__(self):
        return "QOmega(%s, %s)" % (self.a, self.b)

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return "%s%+s*w" % (self.a, self.b) if self.a else "%s*w" % self.b


SQRT_M3_K = QOmega(1, 2)


class Fp:
    """Element of the prime field F_p."""

    __slots__ = ("v", "p")

    def __init__(self, v, p):
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "v", int(v) % p)

    def __setattr__(self, name, value):
        raise AttributeError("Fp is immutable")

    def _c(self, o):
        if isinstance(o, Fp):
            if o.p != self.p:
                raise DomainError("field mismatch")
            return o.v
        if isinstance(o, Fraction):
            return o.numerator * pow(o.denominator, -1, self.p)
        return int(o)

    def __add__(self, o):
        return Fp(self.v + self._c(o), self.p)

    __radd__ = __add__

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __sub__(self, o):
        return Fp(self.v - self._c(o), self.p)

    def __rsub__(self, o):
        return Fp(self._c(o) - self.v, self.p)

    def __mul__(self, o):
        return Fp(self.v * self._c(o), self.p)

    __rmul__ = __mul__

    def __truediv__(self, o):
        d = self._c(o) % self.p
        if d == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return Fp(self.v * pow(d, -1, self.p), self.p)

    def __rtruediv__(self, o):
        return Fp(self._c(o), self.p) / self

    def __pow__(self, k):
        if k < 0:
            return Fp(pow(self.v, -1, self.p), self.p) ** (-k)
        return Fp(pow(self.v, k, self.p), self.p)

    def __eq__(self, o):
        if isinstance(o, (int, Fraction, Fp)):
            return self.v == self._c(o) % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return "Fp(%d, %d)" % (self.v, self.p)

    __str__ = lambda self: str(self.v)


class Field:
    """Descriptor of a coordinate field: 'Q', 'K' or 'F_p' (with a chosen w)."""

    def __init__(self, tag, p=None, omega=None):
        self.tag, self.p, self._omega = tag, p, omega

    def __eq__(self, other):
        return isinstance(other, Field) and (self.tag, self.p, self._omega) == (
            other.tag, other.p, other._omega)

    def __hash__(self):
        return hash((self.tag, self.p, self._omega))

    def __repr__(self):
        return self.name

    @property
    def name(self):
        return "F_%d" % self.p if self.tag == "F_p" else self.tag

    def __call__(self, x):
        if self.tag == "Q":
            if isinstance(x, QOmega):
                if x.b:
                    raise DomainError("%s is not rational" % x)
                return x.a
            return Fraction(x)
        if self.tag == "K":
            return QOmega.coerce(x)
        if isinstance(x, QOmega):
            return Fp(self(x.a).v + self(x.b).v * self.omega().v, self.p)
        if isinstance(x, EisensteinInt):
            return Fp(x.a + x.b * self.omega().v, self.p)
        if isinstance(x, Fraction):
            return Fp(x.numerator * pow(x.denominator, -1, self.p), self.p)
        return Fp(x, self.p)

    def omega(self):
        if self.tag == "K":
            return QOmega(0, 1)
        if self.tag == "F_p" and self._omega is not None:
            return Fp(self._omega, self.p)
        raise DomainError("w is not available in %s" % self.name)


QQ = Field("Q")
KK = Field("K")


def GF(p, omega=None):
    if not is_prime(p):
        raise DomainError("%d is not prime" % p)
    if omega is None and p % 3 == 1:
        omega = cube_root_of_unity_mod(p)
    return Field("F_p", p, omega)


# ------------------------------------------------------------------ curves

class CurveE:
    """y^2 = x^3 + B."""

    def __init__(self, B, label=None):
        self.B = Fraction(B)
        if self.B == 0:
            raise DomainError("singular curve")
        self.label = label

    def __eq__(self, other):
        return isinstance(other, CurveE) and self.B == other.B

    def __hash__(self):
        return hash(self.B)

    def __repr__(self):
        return "CurveE(B=%s%s)" % (self.B, ", E_%s" % self.label if self.label else "")

    @property
    def discriminant(self):
        return -432 * self.B ** 2

    def point(self, x, y, field=QQ):
        return CurvePoint(self, field, field(x), field(y))

    def zero(self, field=QQ):
        return CurvePoint(self, field, None, None)

    def contains(self, x, y, field=QQ):
        x, y = field(x), field(y)
        return y * y == x * x * x + field(self.B)

    def lift_to(self, P, field):
        if P.is_zero():
            return self.zero(field)
        return CurvePoint(self, field, field(P.x), field(P.y))


def curve_family(n):
    """E_n : y^2 = x^3 - 432 n^2 (the curve x^3 + y^3 = n)."""
    return CurveE(-432 * n * n, label=n)


def curve_E9_model():
    """y^2 = x^3 - 48, the model of E_9 used for the modular parametrization."""
    return CurveE(-48, label="9m")


def cube_sum_to_point(n, X, Y):
    """Image of a rational point X^3 + Y^3 = n on E_n."""
    X, Y = Fraction(X), Fraction(Y)
    s = X + Y
    return curve_family(n).point(12 * n / s, 36 * n * (X - Y) / s)


class CurvePoint:
    __slots__ = ("curve", "field", "x", "y")

    def __init__(self, curve, field, x, y):
        self.curve, self.field, self.x, self.y = curve, field, x, y
        if x is not None and not (y * y == x * x * x + field(curve.B)):
            raise DomainError("point not on %r" % curve)

    def is_zero(self):
        return self.x is None

    def __eq__(self, other):
        if not isinstance(other, CurvePoint):
            return NotImplemented
        return (self.curve == other.curve and self.field == other.field
                and self.x == other.x and self.y == other.y)

    def __hash__(self):
        return hash((self.x, self.y))

    def __repr__(self):
        if self.is_zero():
            return "O"
        return "(%s, %s)" % (self.x, self.y)

    def __neg__(self):
        if self.is_zero():
            return self
        return CurvePoint(self.curve, self.field, self.x, -self.y)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, -other)

    def __rmul__(self, k):
        return scalar_mul(k, self)


def add(P, Q):
    if P.curve != Q.curve or P.field != Q.field:
        raise DomainError("points on different curves or fields")
    if P.is_zero():
        return Q
    if Q.is_zero():
        return P
    F = P.field
    if P.x == Q.x:
        if P.y == -Q.y:
            return P.curve.zero(F)
        lam = (3 * P.x * P.x) / (2 * P.y)
    else:
        lam = (Q.y - P.y) / (Q.x - P.x)
    x3 = lam * lam - P.x - Q.x
    y3 = lam * (P.x - x3) - P.y
    return CurvePoint(P.curve, F, x3, y3)


def neg(P):
    return -P


def scalar_mul(k, P):
    if k < 0:
        return scalar_mul(-k, -P)
    out = P.curve.zero(P.field)
    base = P
    while k:
        if k & 1:
            out = add(out, base)
        base = add(base, base)
        k >>= 1
    return out


def omega_map(P):
    """[w](x, y) = (w x, y)."""
    if P.is_zero():
        return P
    return CurvePoint(P.curve, P.field, P.field.omega() * P.x, P.y)


def cm_action(u, P):
    """[a + b w] P = a P + b (w x, y)."""
    u = EisensteinInt.coerce(u)
    P.field.omega()
    return add(scalar_mul(u.a, P), scalar_mul(u.b, omega_map(P)))


def order_of(P, bound=100):
    Q = P
    for k in range(1, bound + 1):
        if Q.is_zero():
            return k
        Q = add(Q, P)
    return None


# ----------------------------------------------------------- point counts

def _legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def ap_naive(B, l):
    """a_l = l + 1 - #E(F_l) by counting."""
    B = int(B)
    if l in (2, 3) or B % l == 0:
        raise DomainError("bad reduction at %d for the short model" % l)
    squares = [0] * l
    for y in range(l):
        squares[y * y % l] += 1
    count = 1 + sum(squares[(x * x * x + B) % l] for x in range(l))
    return l + 1 - count


def ap_cm(B, l):
    """a_l from the CM description: 0 for l = 2 mod 3, else
    a_l = -(s^-1 pi + s conj(pi)) with pi = 2 mod 3 of norm l and
    s = (4B / pi)_6."""
    B = int(B)
    if l % 3 == 2:
        return 0
    if l == 3 or B % l == 0:
        raise DomainError("bad reduction at %d" % l)
    pi = _split_prime(l)
    k = power_residue(4 * B, pi, 6)
    z6 = -(EisensteinInt(0, 1) ** 2)
    s = z6 ** k
    s_inv = z6 ** ((6 - k) % 6)
    total = s_inv * pi + s * pi.conj()
    if total.b != 0:
        raise AssertionError("trace not rational")
    return -total.a


def count_points_ap(B, l, check=True):
    """a_l by the CM formula, cross-checked against naive counting."""
    B = Fraction(B)
    if B.denominator != 1:
        raise DomainError("integral model required")
    B = int(B)
    if l in (2, 3) or B % l == 0:
        if l == 2 and B % 2 == 0:
            # the family models are non-minimal at 2; j = 0 and 2 = 2 mod 3
            return 0
        raise DomainError("bad reduction at %d" % l)
    a = ap_cm(B, l)
    if check and l < 5000:
        b = ap_naive(B, l)
        if a != b:
            raise AssertionError("a_%d mismatch: CM %d, naive %d" % (l, a, b))
    return a


def bad_primes(n):
    return sorted(set(factor_int(3 * n)))


# default a_n cache directory (None disables the on-disk cache)
CACHE_DIR = None


def set_cache_dir(path):
    global CACHE_DIR
    CACHE_DIR = path


def an_list(n, N, cache_dir=None):
    """[a_0 = 0, a_1, ..., a_N] for E_n (additive at every bad prime, so
    a_l = 0 there; 2 is supersingular)."""
    label = "E%d" % n
    cache_dir = cache_dir or CACHE_DIR
    if cache_dir:
        cached = _read_cache(cache_dir, label, N)
        if cached is not None:
            return cached
    B = -432 * n * n
    bad = set(factor_int(3 * n))
    a = [0] * (N + 1)
    a[1] = 1
    primes = primes_up_to(N)
    ap = {}
    for l in primes:
        if l in bad or l % 3 == 2:
            ap[l] = 0
        else:
            ap[l] = ap_cm(B, l)
    # multiplicative fill with smallest prime factor sieve
    spf = list(range(N + 1))
    for l in primes:
        if l * l > N:
            break
        for m in range(l * l, N + 1, l):
            if spf[m] == m:
                spf[m] = l
    for m in range(2, N + 1):
        l = spf[m]
        k, r = 0, m
        while r % l == 0:
            r //= l
            k += 1
        if r > 1:
            a[m] = a[r] * a[m // r]
            continue
        if k == 1:
            a[m] = ap[l]
        elif l in bad:
            a[m] = 0
        else:
            a[m] = ap[l] * a[m // l] - l * a[m // (l * l)]
    if cache_dir:
        _write_cache(cache_dir, label, a)
    return a


def _cache_path(cache_dir, label):
    return os.path.join(cache_dir, "%s.csv" % label)


def _read_cache(cache_dir, label, N):
    path = _cache_path(cache_dir, label)
    if not os.path.exists(path):
        return None
    try:
        a = [0]
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                n, v = int(row[0]), int(row[1])
                if n != len(a):
                    return None
                a.append(v)
                if n == N:
                    return a
    except (ValueError, IndexError, OSError):
        return None
    return None


def _write_cache(cache_dir, label, a):
    os.makedirs(cache_dir, exist_ok=True)
    path = _cache_path(cache_dir, label)
    tmp = path + ".tmp"
    with open(tmp, "w", newline="") as fh:
        w = csv.writer(fh)
        for n in range(1, len(a)):
            w.writerow([n, a[n]])
    os.replace(tmp, path)


# ------------------------------------------------------------- Tate

class LocalData:
    def __init__(self, prime, conductor_exponent, kodaira, tamagawa, scalings=0):
        self.prime = prime
        self.conductor_exponent = conductor_exponent
        self.kodaira = kodaira
        self.tamagawa = tamagawa
        self.scalings = scalings  # powers of the prime removed to reach minimality

    def as_dict(self):
        return {"prime": self.prime, "f": self.conductor_exponent,
                "kodaira": self.kodaira, "c": self.tamagawa}

    def __repr__(self):
        return "LocalData(%d, f=%d, %s, c=%d)" % (
            self.prime, self.conductor_exponent, self.kodaira, self.tamagawa)


def _binv(a):
    a1, a2, a3, a4, a6 = a
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    disc = -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return b2, b4, b6, b8, c4, disc


def _transform(a, r=0, s=0, t=0):
    a1, a2, a3, a4, a6 = a
    return (a1 + 2 * s,
            a2 - s * a1 + 3 * r - s * s,
            a3 + r * a1 + 2 * t,
            a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
            a6 + r * a4 + r * r * a2 + r ** 3 - t * a3 - t * t - r * t * a1)


def _v(x, p):
    return 10 ** 6 if x == 0 else valuation(x, p)


def _nroots(coeffs, p):
    """Number of roots mod p of sum coeffs[i] T^i."""
    return sum(1 for T in range(p) if sum(c * T ** i for i, c in enumerate(coeffs)) % p == 0)


def tate(ainvs, p):
    """Tate's algorithm at p for an integral model with j = 0 (c4 = 0).

    Returns LocalData.  Roots mod p are found by exhaustive search, which is
    adequate for the small primes where this family has bad reduction.
    """
    a = tuple(int(x) for x in ainvs)
    scalings = 0
    while True:
        b2, b4, b6, b8, c4, disc = _binv(a)
        vd = _v(disc, p)
        if vd == 0:
            return LocalData(p, 0, "I0", 1, scalings)
        if c4 != 0 and _v(c4, p) == 0:
            raise DomainError("multiplicative reduction is outside the j = 0 family")
        # move the singular point to (0, 0)
        sing = None
        for x0 in range(p):
            for y0 in range(p):
                aa = _transform(a, x0, 0, y0)
                if aa[2] % p == 0 and aa[3] % p == 0 and aa[4] % p == 0:
                    sing = aa
                    break
            if sing:
                break
        a = sing
        b2, b4, b6, b8, c4, disc = _binv(a)
        if _v(a[4], p) < 2:
            return LocalData(p, vd, "II", 1, scalings)
        if _v(b8, p) < 3:
            return LocalData(p, vd - 1, "III", 2, scalings)
        if _v(b6, p) < 3:
            c = 3 if _nroots([-(a[4] // p ** 2), a[2] // p, 1], p) else 1
            return LocalData(p, vd - 2, "IV", c, scalings)
        found = None
        for s in range(p):
            for k in range(p * p):
                aa = _transform(a, 0, s, p * k)
                if (aa[0] % p == 0 and aa[1] % p == 0 and aa[2] % p ** 2 == 0
                        and aa[3] % p ** 2 == 0 and aa[4] % p ** 3 == 0):
                    found = aa
                    break
            if found:
                break
        if found is None:
            raise AssertionError("Tate step 6 normalization failed")
        a = found
        P = [a[4] // p ** 3, a[3] // p ** 2, a[1] // p, 1]
        roots = [T for T in range(p) if sum(c * T ** i for i, c in enumerate(P)) % p == 0]
        dP = [P[1], 2 * P[2], 3 * P[3]]
        ddP = [2 * P[2], 6 * P[3]]

        def ev(cs, T):
            return sum(c * T ** i for i, c in enumerate(cs)) % p

        mult = {T: 1 + (ev(dP, T) == 0) + (ev(dP, T) == 0 and ev(ddP, T) == 0) for T in roots}
        if all(m == 1 for m in mult.values()):
            return LocalData(p, vd - 4, "I0*", 1 + len(roots), scalings)
        if any(m == 2 for m in mult.values()):
            raise DomainError("I_n* reduction is outside the j = 0 family")
        T0 = next(T for T, m in mult.items() if m == 3)
        a = _transform(a, p * T0, 0, 0)
        x3, x6 = a[2] // p ** 2, a[4] // p ** 4
        if (x3 * x3 + 4 * x6) % p:
            c = 3 if _nroots([-x6, x3, 1], p) else 1
            return LocalData(p, vd - 6, "IV*", c, scalings)
        found = None
        for k in range(p):
            aa = _transform(a, 0, 0, p * p * k)
            if aa[2] % p ** 3 == 0 and aa[4] % p ** 5 == 0:
                found = aa
                break
        if found is None:
            raise AssertionError("Tate step 9 normalization failed")
        a = found
        if _v(a[3], p) < 4:
            return LocalData(p, vd - 7, "III*", 2, scalings)
        if _v(a[4], p) < 6:
            return LocalData(p, vd - 8, "II*", 1, scalings)
        a = tuple(x // p ** i for x, i in zip(a, (1, 2, 3, 4, 6)))
        scalings += 1


def local_data(n, l, B=None):
    """Local data of E_n (or of y^2 = x^3 + B) at the prime l."""
    if B is None:
        if any(e >= 3 for e in factor_int(n).values()):
            raise DomainError("n must be cube-free")
        B = -432 * n * n
    return tate((0, 0, 0, 0, int(B)), l)


def global_data(n=None, B=None):
    """Conductor, Tamagawa product, local data and the minimal scaling u."""
    if B is None:
        B = -432 * n * n
    primes = sorted(set(factor_int(6 * int(B))))
    locs = [tate((0, 0, 0, 0, int(B)), l) for l in primes]
    N, c, u = 1, 1, 1
    for ld in locs:
        N *= ld.prime ** ld.conductor_exponent
        c *= ld.tamagawa
        u *= ld.prime ** ld.scalings
    return {"conductor": N, "tamagawa_product": c, "local": locs, "u": u,
            "minimal_discriminant": Fraction(-432 * int(B) ** 2, u ** 12)}


# ------------------------------------------------------------ torsion

def _divisors_from(fac):
    divs = [1]
    for p, e in fac.items():
        divs = [d * p ** k for d in divs for k in range(e + 1)]
    return divs


def _icbrt(n):
    if n < 0:
        r = -_icbrt(-n)
    else:
        r = round(n ** (1 / 3)) if n < 2 ** 52 else int(mpmath.cbrt(n))
        while r ** 3 > n:
            r -= 1
        while (r + 1) ** 3 <= n:
            r += 1
    return r if r ** 3 == n else None


def torsion_subgroup(E):
    """Rational torsion via Lutz-Nagell, cross-checked by reduction."""
    B = int(E.B)
    fac = factor_int(27 * B * B)
    half = {p: e // 2 for p, e in fac.items()}
    pts = []
    for y in [0] + _divisors_from(half):
        for sy in ((1, -1) if y else (1,)):
            x = _icbrt(y * y - B)
            if x is not None:
                P = E.point(x, sy * y)
                if order_of(P, 12) is not None:
                    pts.append(P)
    group = [E.zero()] + pts
    order = len(group)
    # reduction check: order divides #E(F_l) for two good primes
    good = [l for l in primes_up_to(200) if l > 3 and B % l][:2]
    for l in good:
        if (l + 1 - count_points_ap(B, l)) % order:
            raise AssertionError("torsion order does not divide #E(F_%d)" % l)
    structure = "trivial" if order == 1 else "Z/%d" % order
    return {"order": order, "structure": structure, "points": pts}


# ----------------------------------------------------------- reduction

def prime_of_K(p):
    """w mod p for the prime singled out by 3^((p-1)/3) = w mod p."""
    if p % 3 != 1:
        raise DomainError("p = %d is not split in K" % p)
    w = pow(3, (p - 1) // 3, p)
    if w == 1:
        raise DomainError("3 is a cube mod %d; the normalization is undefined" % p)
    return w


def reduce_at_prime_of_K(P, p, which="p", w=None):
    """Reduction of a K-point modulo the prime above p fixed by 3^((p-1)/3) = w
    (which='p') or its conjugate (which='pbar').  An explicit cube root of
    unity w mod p may be passed when 3 is a cube mod p."""
    w = prime_of_K(p) if w is None else _check_w(w, p)
    if which == "pbar":
        w = w * w % p
    F = GF(p, w)
    E = P.curve
    if P.is_zero():
        return E.zero(F)
    coords = []
    for c in (P.x, P.y):
        c = QOmega.coerce(c)
        for part in (c.a, c.b):
            if part.denominator % p == 0:
                raise DomainError("coordinate not p-integral")
        coords.append(F(c))
    if int(E.B.denominator) % p == 0:
        raise DomainError("model not integral at p")
    return CurvePoint(E, F, coords[0], coords[1])


def torsion_K_E1():
    """E_1(K)_tors: O, (0, +-12 sqrt(-3)), (12 w^i, +-36)."""
    E = curve_family(1)
    pts = [E.zero(KK)]
    pts += [E.point(0, s * 12 * SQRT_M3_K, KK) for s in (1, -1)]
    for i in range(3):
        for s in (1, -1):
            pts.append(E.point(QOmega(0, 1) ** i * 12, 36 * s, KK))
    return pts


def _check_w(w, p):
    if p % 3 != 1 or w % p == 1 or pow(w, 3, p) != 1:
        raise DomainError("%d is not a primitive cube root of unity mod %d" % (w, p))
    return w % p


def torsion_reduction_set(p, w=None):
    """Pairs (x mod p, x mod pbar) for the nonzero torsion of E_1(K)."""
    out = set()
    for T in torsion_K_E1()[1:]:
        a = reduce_at_prime_of_K(T, p, "p", w)
        b = reduce_at_prime_of_K(T, p, "pbar", w)
        out.add((int(a.x), int(b.x)))
    return out


def set_D(p, w=None):
    """{(0,0)} and (12 w^i, 12 w^i), each w read in its own residue field."""
    w = prime_of_K(p) if w is None else _check_w(w, p)
    wb = w * w % p
    out = {(0, 0)}
    for i in range(3):
        out.add((12 * pow(w, i, p) % p, 12 * pow(wb, i, p) % p))
    return out


# ------------------------------------------------------------ periods

def periods_short(B, prec=256):
    """(omega1, omega2) for y^2 = x^3 + B (B rational) and dx/2y, by AGM.

    omega1 is real; tau = omega2/omega1 lies in the upper half plane.
    """
    with mpmath.workprec(prec + 20):
        B = mpmath.mpf(Fraction(B).numerator) / Fraction(B).denominator
        e1 = mpmath.cbrt(-B)
        if B < 0:
            a, b = 3 * e1, mpmath.sqrt(3) * e1
            w1 = 2 * mpmath.pi / mpmath.agm(2 * mpmath.sqrt(b), mpmath.sqrt(2 * b + a))
            w2 = -w1 / 2 + 1j * mpmath.pi / mpmath.agm(2 * mpmath.sqrt(b),
                                                       mpmath.sqrt(2 * b - a))
        else:
            raise DomainError("only B < 0 is supported")
        return mpmath.mpf(w1), mpmath.mpc(w2)


def real_period_beta(B, prec=256):
    """Closed form of the real period of y^2 = x^3 + B, B < 0: e1^{-1/2} B(1/6,1/2)/3."""
    with mpmath.workprec(prec + 20):
        B = mpmath.mpf(Fraction(B).numerator) / Fraction(B).denominator
        e1 = mpmath.cbrt(-B)
        return mpmath.beta(mpmath.mpf(1) / 6, mpmath.mpf(1) / 2) / (3 * mpmath.sqrt(e1))


def minimal_real_period(n=None, B=None, prec=256):
    """Omega = integral over E(R) of |omega| on the minimal model."""
    gd = global_data(n=n, B=B)
    if B is None:
        B = -432 * n * n
    w1, _ = periods_short(B, prec)
    return w1 * gd["u"]


def minimal_lattice(n=None, B=None, prec=256):
    gd = global_data(n=n, B=B)
    if B is None:
        B = -432 * n * n
    w1, w2 = periods_short(B, prec)
    return w1 * gd["u"], w2 * gd["u"]


# --------------------------------------------------- Weierstrass functions

def wp_and_derivative(z, w1, w2, terms=None):
    """(p(z), p'(z)) for the lattice <w1, w2>, by q-series in u = e^{2 pi i z/w1}."""
    tau = w2 / w1
    if mpmath.im(tau) < 0:
        tau, w2 = -tau, -w2
    # reduce z into the fundamental parallelogram for fast convergence
    t = z / w1
    k = mpmath.nint(mpmath.im(t) / mpmath.im(tau))
    t = t - k * tau
    t = t - mpmath.nint(mpmath.re(t))
    q = mpmath.expjpi(2 * tau)
    u = mpmath.expjpi(2 * t)
    c = 2j * mpmath.pi / w1
    s1 = u / (1 - u) ** 2
    s2 = u * (1 + u) / (1 - u) ** 3
    s0 = mpmath.mpf(1) / 12
    qn = mpmath.mpf(1)
    eps = mpmath.eps
    n = 0
    while True:
        n += 1
        qn = qn * q
        a = qn * u
        b = qn / u
        t1 = a / (1 - a) ** 2 + b / (1 - b) ** 2 - 2 * qn / (1 - qn) ** 2
        t2 = a * (1 + a) / (1 - a) ** 3 - b * (1 + b) / (1 - b) ** 3
        s1 += t1
        s2 += t2
        if abs(qn) < eps * 1e-5 and n > 2:
            break
        if terms and n >= terms:
            break
    return c * c * (s0 + s1), c ** 3 * s2


def point_from_z(z, w1, w2):
    """(x, y) = (p(z), p'(z)/2) on the short model attached to the lattice."""
    x, dx = wp_and_derivative(z, w1, w2)
    return x, dx / 2


def elliptic_log_real(x, y, B, prec=256):
    """z in R / w1 Z with (p(z), p'(z)/2) = (x, y) for a real point of y^2 = x^3 + B."""
    w1, w2 = periods_short(B, prec)
    with mpmath.workprec(prec + 30):
        x = mpmath.mpf(Fraction(x).numerator) / Fraction(x).denominator
        y = mpmath.mpf(Fraction(y).numerator) / Fraction(y).denominator
        Bm = mpmath.mpf(Fraction(B).numerator) / Fraction(B).denominator
        with mpmath.workprec(60):
            z0 = mpmath.quad(lambda t: 1 / mpmath.sqrt(t ** 3 + Bm), [x, mpmath.inf]) / 2
        # p'(z) < 0 for small z > 0
        z = -mpmath.mpf(z0) if y > 0 else mpmath.mpf(z0)
        # Newton on p(z) = x
        for _ in range(40):
            px, dpx = wp_and_derivative(z, w1, w2)
            step = (px - x) / dpx
            z = z - mpmath.re(step)
            if abs(step) < mpmath.mpf(2) ** (-(prec + 10)):
                break
        px, dpx = wp_and_derivative(z, w1, w2)
        if abs(dpx / 2 - y) > abs(y) * mpmath.mpf(2) ** (-prec // 2):
            raise PrecisionError("elliptic logarithm failed to converge")
        z = z - w1 * mpmath.floor(z / w1)
        return z


# --------------------------------------------------------- heights

def _naive_height_x(x):
    x = Fraction(x)
    return math.log(max(abs(x.numerator), x.denominator))


def _singular_reduction(P, l):
    """True if P reduces to the singular point of y^2 = x^3 + B mod l."""
    if P.is_zero():
        return False
    x, y = Fraction(P.x), Fraction(P.y)
    if x.denominator % l == 0:
        return False
    B = int(P.curve.B)
    if l == 2:
        return x.numerator % 2 == 0
    if l == 3:
        return y.numerator % 3 == 0
    return x.numerator % l == 0 and y.numerator % l == 0


def _good_multiple(P):
    B = int(P.curve.B)
    bad = sorted(set(factor_int(6 * B)))
    Q = P
    for m in range(1, 13):
        if not Q.is_zero() and not any(_singular_reduction(Q, l) for l in bad):
            return m, Q
        Q = add(Q, P)
    raise AssertionError("no multiple with nonsingular reduction found")


def _tate_lambda_inf(x, B, prec):
    """Archimedean local height (no discriminant term) by Tate's series."""
    with mpmath.workprec(prec + 40):
        Bm = mpmath.mpf(Fraction(B).numerator) / Fraction(B).denominator
        x = mpmath.mpf(Fraction(x).numerator) / Fraction(x).denominator
        if x <= 0:
            raise DomainError("Tate's series needs x > 0")
        total = mpmath.log(x) / 2
        fac = mpmath.mpf(1) / 8
        n = 0
        while True:
            t = 1 / x
            z = 1 - 8 * Bm * t ** 3
            term = fac * mpmath.log(z)
            total += term
            if abs(term) < mpmath.mpf(2) ** (-(prec + 20)) or n > 4 * prec:
                break
            # x(2P) = x (x^3 - 8B) / (4 (x^3 + B))
            x = x * (x ** 3 - 8 * Bm) / (4 * (x ** 3 + Bm))
            fac /= 4
            n += 1
        return total


def _sigma_lambda_inf(P, prec):
    """Archimedean local height with the Delta^(1/12) normalization, from the
    q-product for the elliptic logarithm."""
    B = P.curve.B
    w1, w2 = periods_short(B, prec)
    z = elliptic_log_real(P.x, P.y, B, prec)
    with mpmath.workprec(prec + 40):
        tau = w2 / w1
        q = mpmath.expjpi(2 * tau)
        u = mpmath.expjpi(2 * z / w1)
        t = mpmath.im(z / w1) / mpmath.im(tau)
        b2 = t * t - t + mpmath.mpf(1) / 6
        lam = -b2 * mpmath.log(abs(q)) / 2 - mpmath.log(abs(1 - u))
        qn = mpmath.mpf(1)
        while True:
            qn = qn * q
            term = mpmath.log(abs((1 - qn * u) * (1 - qn / u)))
            lam -= term
            if abs(qn) < mpmath.mpf(2) ** (-(prec + 20)):
                break
        return lam


def canonical_height_Q(P, prec=256, method="tate"):
    """Neron-Tate height of a rational point, normalized so that
    h(P) = lim log H(x(nP)) / n^2 (the normalization of the BSD regulator)."""
    if P.is_zero() or order_of(P, 12) is not None:
        return mpmath.mpf(0)
    m, Q = _good_multiple(P)
    x = Fraction(Q.x)
    den = math.isqrt(x.denominator)
    with mpmath.workprec(prec + 40):
        fin = mpmath.log(den)
        if method == "tate":
            lam = _tate_lambda_inf(x, P.curve.B, prec)
            hS = lam + fin
        else:
            lam = _sigma_lambda_inf(Q, prec)
            disc = abs(P.curve.discriminant)
            hS = lam + fin + mpmath.log(mpmath.mpf(disc.numerator) / disc.denominator) / 12
        return 2 * hS / (m * m)


def naive_height_limit(P, k=6):
    """log H(x(2^k P)) / 4^k, a crude doubling-limit estimate."""
    Q = P
    for _ in range(k):
        Q = add(Q, Q)
    return _naive_height_x(Q.x) / 4 ** k


def search_points(E, height_bound=200, den_bound=12):
    """Rational points with x = a/d^2, |a| <= height_bound * d^2, d <= den_bound."""
    B = E.B
    out = []
    for d in range(1, den_bound + 1):
        d2 = d * d
        for a in range(-height_bound * d2, height_bound * d2 + 1):
            if math.gcd(a, d) != 1:
                continue
            x = Fraction(a, d2)
            rhs = x ** 3 + B
            if rhs < 0:
                continue
            num, den = rhs.numerator, rhs.denominator
            rn, rd = math.isqrt(num), math.isqrt(den)
            if rn * rn == num and rd * rd == den:
                out.append(E.point(x, Fraction(rn, rd)))
        if out:
            break
    return out
