"""Exact arithmetic: Eisenstein integers, cyclotomic values, binary quadratic
forms, truncated 3-adic elements and 2x2 rational matrices."""

import math
import re
from fractions import Fraction

BigRational = Fraction


class DomainError(ValueError):
    pass


class CapacityError(ValueError):
    pass


class PrecisionError(ArithmeticError):
    pass


# ---------------------------------------------------------------- integers

def is_prime(n):
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n):
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, int(n ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i in range(n + 1) if sieve[i]]


def factor_int(n):
    """Trial-division factorization of a positive integer, as {p: e}."""
    n = abs(n)
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def xgcd(a, b):
    """Return (g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def valuation(x, p):
    """p-adic valuation of a nonzero int or Fraction."""
    x = Fraction(x)
    if x == 0:
        raise DomainError("valuation of zero")
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def sqrt_mod_prime(a, p):
    """Some square root of a mod an odd prime p, or None (Tonelli-Shanks)."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def cube_root_of_unity_mod(p):
    """A primitive cube root of unity mod a prime p = 1 mod 3."""
    if p % 3 != 1:
        raise DomainError("no cube roots of unity mod %d" % p)
    for g in range(2, p):
        w = pow(g, (p - 1) // 3, p)
        if w != 1:
            return w


# -------------------------------------------------------- Eisenstein integers

class EisensteinInt:
    """a + b*w with w = (-1 + sqrt(-3))/2."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        object.__setattr__(self, "a", int(a))
        object.__setattr__(self, "b", int(b))

    def __setattr__(self, name, value):
        raise AttributeError("EisensteinInt is immutable")

    @classmethod
    def coerce(cls, x):
        if isinstance(x, EisensteinInt):
            return x
        if isinstance(x, int):
            return cls(x, 0)
        if isinstance(x, str):
            return cls.parse(x)
        raise TypeError("cannot coerce %r" % (x,))

    @classmethod
    def parse(cls, s):
        """Parse strings like '1+3w', '-w^2', '2-5*w', '7'."""
        s = s.replace(" ", "").replace("ω", "w")
        if not s:
            raise DomainError("empty Eisenstein literal")
        terms = re.findall(r"[+-]?[^+-]+", s)
        if "".join(terms) != s:
            raise DomainError("bad Eisenstein literal %r" % s)
        total = cls(0, 0)
        for t in terms:
            m = re.fullmatch(r"([+-]?)(\d*)\*?(w(?:\^(\d+))?)?", t)
            if not m or (not m.group(2) and not m.group(3)):
                raise DomainError("bad Eisenstein term %r" % t)
            sign = -1 if m.group(1) == "-" else 1
            coef = int(m.group(2)) if m.group(2) else 1
            k = 0
            if m.group(3):
                k = int(m.group(4)) if m.group(4) else 1
            total = total + cls(sign * coef) * W ** k
        return total

    def __repr__(self):
        return "EisensteinInt(%d, %d)" % (self.a, self.b)

    def __str__(self):
        a, b = self.a, self.b
        if b == 0:
            return str(a)
        bw = "w" if b == 1 else "-w" if b == -1 else "%d*w" % b
        if a == 0:
            return bw
        return "%d%s%s" % (a, "+" if b > 0 else "", bw)

    def __eq__(self, other):
        if isinstance(other, int):
            other = EisensteinInt(other)
        if not isinstance(other, EisensteinInt):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a or self.b)

    def __add__(self, other):
        other = EisensteinInt.coerce(other)
        return EisensteinInt(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return EisensteinInt(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-EisensteinInt.coerce(other))

    def __rsub__(self, other):
        return EisensteinInt.coerce(other) - self

    def __mul__(self, other):
        other = EisensteinInt.coerce(other)
        a, b, c, d = self.a, self.b, other.a, other.b
        # w^2 = -1 - w
        return EisensteinInt(a * c - b * d, a * d + b * c - b * d)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            if not self.is_unit():
                raise DomainError("negative power of a non-unit")
            return self.conj() ** (-k)
        out, base = EisensteinInt(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self):
        # conj(w) = w^2 = -1 - w
        return EisensteinInt(self.a - self.b, -self.b)

    def norm(self):
        return self.a * self.a - self.a * self.b + self.b * self.b

    def trace(self):
        return 2 * self.a - self.b

    def is_unit(self):
        return self.norm() == 1

    def divides(self, other):
        other = EisensteinInt.coerce(other)
        n = self.norm()
        if n == 0:
            return not other
        q = other * self.conj()
        return q.a % n == 0 and q.b % n == 0

    def exact_div(self, other):
        other = EisensteinInt.coerce(other)
        n = other.norm()
        q = self * other.conj()
        if n == 0 or q.a % n or q.b % n:
            raise DomainError("%s is not divisible by %s" % (self, other))
        return EisensteinInt(q.a // n, q.b // n)

    def round_div(self, other):
        """Nearest-lattice-point quotient (Euclidean division)."""
        other = EisensteinInt.coerce(other)
        n = other.norm()
        q = self * other.conj()
        return EisensteinInt(_round_div(q.a, n), _round_div(q.b, n))

    def __mod__(self, other):
        other = EisensteinInt.coerce(other)
        return self - other * self.round_div(other)

    def to_complex(self):
        return complex(self.a - self.b / 2, self.b * math.sqrt(3) / 2)

    def mod_int(self, m):
        return EisensteinInt(self.a % m, self.b % m)

    def reduce_mod_prime(self, p, w_p):
        """Image in F_p under w -> w_p."""
        return (self.a + self.b * w_p) % p


def _round_div(x, n):
    return (2 * x + n) // (2 * n)


W = EisensteinInt(0, 1)
ONE = EisensteinInt(1, 0)
SQRT_M3 = EisensteinInt(1, 2)  # 1 + 2w = sqrt(-3)
UNITS = (ONE, -ONE, W, -W, W * W, -(W * W))


def eis_gcd(x, y):
    x, y = EisensteinInt.coerce(x), EisensteinInt.coerce(y)
    while y:
        x, y = y, x % y
    return x


def primary_associate(pi):
    """The associate of a prime not above 3 that is = 2 mod 3."""
    for u in UNITS:
        z = pi * u
        if z.a % 3 == 2 and z.b % 3 == 0:
            return z
    raise DomainError("%s has no primary associate" % pi)


def _split_prime(p):
    """A primary prime of norm p for p = 1 mod 3."""
    r = cube_root_of_unity_mod(p)
    return primary_associate(eis_gcd(EisensteinInt(p), EisensteinInt(-r, 1)))


def eisenstein_factor(z):
    """Factor z = unit * prod(pi^e).  Returns (unit, [(pi, e), ...]).

    Primes are normalized: sqrt(-3) as 1+2w, rational primes 2 mod 3 as
    themselves, split primes as their primary associate.
    """
    z = EisensteinInt.coerce(z)
    if not z:
        raise DomainError("cannot factor zero")
    n = z.norm()
    if n >= 2 ** 64:
        raise CapacityError("norm too large for trial division")
    out = []
    rest = z
    for p, e in sorted(factor_int(n).items()):
        if p == 3:
            cands = [SQRT_M3]
        elif p % 3 == 2:
            cands = [EisensteinInt(p)]
        else:
            pi = _split_prime(p)
            cands = [pi, primary_associate(pi.conj())]
        for pi in cands:
            k = 0
            while pi.divides(rest):
                rest = rest.exact_div(pi)
                k += 1
            if k:
                out.append((pi, k))
    if not rest.is_unit():
        raise AssertionError("factorization did not terminate in a unit")
    return rest, out


def is_eisenstein_prime(pi):
    n = pi.norm()
    if is_prime(n):
        return True
    r = math.isqrt(n)
    return r * r == n and is_prime(r) and r % 3 == 2


def residue_field(pi):
    """(p, w_p, size) describing O/pi for a prime pi not above 3."""
    pi = EisensteinInt.coerce(pi)
    n = pi.norm()
    if is_prime(n) and n % 3 == 1:
        for w_p in _cube_roots_of_unity(n):
            if pi.reduce_mod_prime(n, w_p) == 0:
                return n, w_p, n
    r = math.isqrt(n)
    if r * r == n and is_prime(r) and r % 3 == 2:
        return r, None, n
    raise DomainError("%s is not a prime away from 3" % pi)


def _cube_roots_of_unity(p):
    w = cube_root_of_unity_mod(p)
    return [w, w * w % p]


def _pow_mod_inert(z, k, q):
    """z^k in F_{q^2} = Z[w]/(q) for q = 2 mod 3."""
    out, base = EisensteinInt(1), z.mod_int(q)
    while k:
        if k & 1:
            out = (out * base).mod_int(q)
        base = (base * base).mod_int(q)
        k >>= 1
    return out


def power_residue(alpha, pi, m):
    """The m-th root of unity congruent to alpha^((N pi - 1)/m) mod pi.

    m divides 6.  Returned as the exponent k of w6 = -w^2 (a primitive
    sixth root of unity), i.e. the value is exp(2 pi i k / 6) under w -> e^{2pi i/3}.
    """
    alpha, pi = EisensteinInt.coerce(alpha), EisensteinInt.coerce(pi)
    p, w_p, size = residue_field(pi)
    if (size - 1) % m:
        raise DomainError("N(pi) - 1 not divisible by %d" % m)
    if pi.divides(alpha):
        raise DomainError("pi divides alpha")
    e = (size - 1) // m
    z6 = -(W * W)  # exp(i pi / 3)
    if w_p is not None:
        val = pow(alpha.reduce_mod_prime(p, w_p), e, p)
        for k in range(6):
            if (z6 ** k).reduce_mod_prime(p, w_p) == val:
                if (k * m) % 6 == 0:
                    return k
        raise AssertionError("no root of unity matched")
    val = _pow_mod_inert(alpha, e, p)
    for k in range(6):
        if (z6 ** k).mod_int(p) == val and (k * m) % 6 == 0:
            return k
    raise AssertionError("no root of unity matched")


def sextic_residue_symbol(alpha, pi):
    """(alpha/pi)_6 as a CyclotomicValue of order 6."""
    alpha, pi = EisensteinInt.coerce(alpha), EisensteinInt.coerce(pi)
    if not is_eisenstein_prime(pi) or pi.norm() % 3 == 0:
        raise DomainError("pi must be a prime away from 3")
    if pi.divides(alpha * 6):
        raise DomainError("pi divides 6*alpha")
    return CyclotomicValue.root_of_unity(6, power_residue(alpha, pi, 6))


def cubic_residue_symbol(alpha, pi):
    """(alpha/pi)_3 as an exponent k with value w^k."""
    k6 = power_residue(alpha, pi, 3)
    # w6^k6 with k6 even; w6^2 = w
    return (k6 // 2) % 3


# ------------------------------------------------------ cyclotomic values

_CYC_CACHE = {}


def _poly_divmod(num, den):
    num = list(num)
    out = [0] * max(len(num) - len(den) + 1, 1)
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        out[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    return out, num


def cyclotomic_poly(m):
    """Coefficients (low to high) of Phi_m."""
    if m in _CYC_CACHE:
        return _CYC_CACHE[m]
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly, rem = _poly_divmod(poly, cyclotomic_poly(d))
            assert not any(rem)
    poly = tuple(poly)
    _CYC_CACHE[m] = poly
    return poly


def euler_phi(m):
    out = m
    for p in factor_int(m):
        out = out // p * (p - 1)
    return out


_POW_TABLE = {}


def _power_table(m):
    """x^k mod Phi_m for k < m, as coefficient tuples."""
    if m in _POW_TABLE:
        return _POW_TABLE[m]
    phi = cyclotomic_poly(m)
    deg = len(phi) - 1
    rows = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(m):
        rows.append(tuple(cur))
        nxt = [0] + cur[:-1]
        top = cur[-1]
        if top:
            for j in range(deg):
                nxt[j] -= top * phi[j]
        cur = nxt
    _POW_TABLE[m] = rows
    return rows


class CyclotomicValue:
    """Element of Q(zeta_m) = Q[x]/Phi_m with x = exp(2 pi i / m)."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m, coeffs):
        deg = euler_phi(m)
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) > deg:
            coeffs = _reduce_poly(m, coeffs)
        coeffs = coeffs + [Fraction(0)] * (deg - len(coeffs))
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("CyclotomicValue is immutable")

    @classmethod
    def root_of_unity(cls, m, k):
        return cls(m, _power_table(m)[k % m])

    @classmethod
    def from_int(cls, m, n):
        return cls(m, [n])

    @classmethod
    def from_exponents(cls, m, counts):
        """Sum of c * zeta_m^k over a mapping {k: c}."""
        table = _power_table(m)
        deg = euler_phi(m)
        acc = [Fraction(0)] * deg
        for k, c in counts.items():
            if not c:
                continue
            row = table[k % m]
            for j in range(deg):
                if row[j]:
                    acc[j] += c * row[j]
        return cls(m, acc)

    def lift(self, m2):
        """Same element viewed in Q(zeta_m2), m | m2."""
        if m2 == self.m:
            return self
        if m2 % self.m:
            raise DomainError("order %d does not divide %d" % (self.m, m2))
        step = m2 // self.m
        return CyclotomicValue.from_exponents(
            m2, {j * step: c for j, c in enumerate(self.coeffs) if c})

    def _common(self, other):
        if isinstance(other, (int, Fraction)):
            return self, CyclotomicValue.from_int(self.m, other)
        m = self.m * other.m // math.gcd(self.m, other.m)
        return self.lift(m), other.lift(m)

    def __add__(self, other):
        a, b = self._common(other)
        return CyclotomicValue(a.m, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicValue(self.m, [-x for x in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicValue(self.m, [x * other for x in self.coeffs])
        a, b = self._common(other)
        prod = [Fraction(0)] * (2 * len(a.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return CyclotomicValue(a.m, _reduce_poly(a.m, prod))

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = CyclotomicValue.from_int(self.m, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CyclotomicValue.from_int(self.m, other)
        if not isinstance(other, CyclotomicValue):
            return NotImplemented
        a, b = self._common(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        c = self.canonical()
        return hash((c.m, c.coeffs))

    def canonical(self):
        """Express in the smallest order that contains the value."""
        for d in sorted(x for x in range(1, self.m + 1) if self.m % x == 0):
            cand = _try_descend(self, d)
            if cand is not None:
                return cand
        return self

    def conj(self):
        return CyclotomicValue.from_exponents(
            self.m, {(-j) % self.m: c for j, c in enumerate(self.coeffs) if c})

    def root_index(self):
        """k with self = zeta_m^k, or None."""
        table = _power_table(self.m)
        for k in range(self.m):
            if table[k] == self.coeffs:
                return k
        return None

    def is_root_of_unity(self):
        return self.root_index() is not None

    def inverse(self):
        k = self.root_index()
        if k is not None:
            return CyclotomicValue.root_of_unity(self.m, -k)
        if not any(self.coeffs[1:]):
            c = self.coeffs[0]
            if c == 0:
                raise ZeroDivisionError("inverse of zero")
            return CyclotomicValue.from_int(self.m, 1 / c)
        # norm trick: product over Galois conjugates other than the identity
        others = CyclotomicValue.from_int(self.m, 1)
        for a in range(2, self.m):
            if math.gcd(a, self.m) == 1:
                others = others * self.galois(a)
        nrm = self * others
        c = nrm.coeffs[0]
        assert not any(nrm.coeffs[1:])
        return others * (1 / c)

    def galois(self, a):
        return CyclotomicValue.from_exponents(
            self.m, {(a * j) % self.m: c for j, c in enumerate(self.coeffs) if c})

    def is_zero(self):
        return not any(self.coeffs)

    def to_complex(self):
        z = 0j
        for j, c in enumerate(self.coeffs):
            if c:
                z += float(c) * complex(math.cos(2 * math.pi * j / self.m),
                                        math.sin(2 * math.pi * j / self.m))
        return z

    def to_mpc(self):
        import mpmath
        z = mpmath.mpc(0)
        for j, c in enumerate(self.coeffs):
            if c:
                z += mpmath.mpf(c.numerator) / c.denominator * mpmath.expjpi(
                    mpmath.mpf(2 * j) / self.m)
        return z

    def abs2(self):
        """|self|^2, exact, as a CyclotomicValue."""
        return self * self.conj()

    def rational(self):
        """The value as a Fraction if it is rational, else None."""
        c = self.canonical()
        if c.m in (1, 2):
            return c.coeffs[0]
        return None

    def __repr__(self):
        return "CyclotomicValue(%d, %r)" % (self.m, [str(c) for c in self.coeffs])

    def __str__(self):
        return format_cyclotomic(self)


def _reduce_poly(m, coeffs):
    table = _power_table(m)
    deg = euler_phi(m)
    out = [Fraction(0)] * deg
    for k, c in enumerate(coeffs):
        if not c:
            continue
        if k < deg:
            out[k] += c
        else:
            row = table[k % m]
            for j in range(deg):
                if row[j]:
                    out[j] += c * row[j]
    return out


def _try_descend(v, d):
    """Return v as an element of Q(zeta_d) if it lies there, else None."""
    if v.m % d:
        return None
    cand = CyclotomicValue(d, _descend_guess(v, d))
    if cand.lift(v.m) == v:
        return cand
    return None


def _descend_guess(v, d):
    # solve for coefficients in Q(zeta_d) by matching the lifted basis
    step = v.m // d
    deg_d = euler_phi(d)
    basis = [CyclotomicValue.root_of_unity(v.m, j * step).coeffs for j in range(deg_d)]
    # Gaussian elimination over Q: find x with sum x_j basis_j = v
    rows = len(v.coeffs)
    mat = [[basis[j][i] for j in range(deg_d)] + [v.coeffs[i]] for i in range(rows)]
    piv_cols = []
    r = 0
    for col in range(deg_d):
        piv = next((i for i in range(r, rows) if mat[i][col]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][col]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(rows):
            if i != r and mat[i][col]:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        piv_cols.append(col)
        r += 1
    x = [Fraction(0)] * deg_d
    for i, col in enumerate(piv_cols):
        x[col] = mat[i][-1]
    return x


_MU12_NAMES = {0: "1", 1: "-i*w", 2: "-w^2", 3: "i", 4: "w", 5: "-i*w^2",
               6: "-1", 7: "i*w", 8: "w^2", 9: "-i", 10: "-w", 11: "i*w^2"}


def format_cyclotomic(v):
    """Readable string: named 12th roots of unity, else a polynomial in z<m>."""
    c = v.canonical()
    if 12 % c.m == 0:
        k = c.lift(12).root_index()
        if k is not None:
            return _MU12_NAMES[k]
    k = c.root_index()
    if k is not None:
        return "zeta%d^%d" % (c.m, k)
    if c.m in (1, 2):
        return str(c.coeffs[0])
    terms = []
    for j, x in enumerate(c.coeffs):
        if x:
            terms.append("%s*z%d^%d" % (x, c.m, j) if j else str(x))
    return " + ".join(terms) if terms else "0"


def parse_cyclotomic(s, m=12):
    """Inverse of format_cyclotomic for the 12th roots of unity names."""
    for k, name in _MU12_NAMES.items():
        if name == s:
            return CyclotomicValue.root_of_unity(12, k).lift(m) if m % 12 == 0 \
                else CyclotomicValue.root_of_unity(12, k)
    mt = re.fullmatch(r"zeta(\d+)\^(-?\d+)", s)
    if mt:
        return CyclotomicValue.root_of_unity(int(mt.group(1)), int(mt.group(2)))
    return CyclotomicValue.from_int(1, Fraction(s))


def omega_power(k):
    """w^k in Q(zeta_12)."""
    return CyclotomicValue.root_of_unity(12, 4 * k)


I12 = CyclotomicValue.root_of_unity(12, 3)


# -------------------------------------------------------- quadratic forms

class QuadraticForm:
    """Positive definite binary quadratic form a x^2 + b xy + c y^2."""

    __slots__ = ("a", "b", "c")

    def __init__(self, a, b, c):
        object.__setattr__(self, "a", int(a))
        object.__setattr__(self, "b", int(b))
        object.__setattr__(self, "c", int(c))
        if self.disc >= 0 or self.a <= 0:
            raise DomainError("form must be positive definite")

    def __setattr__(self, name, value):
        raise AttributeError("QuadraticForm is immutable")

    @property
    def disc(self):
        return self.b * self.b - 4 * self.a * self.c

    def __iter__(self):
        return iter((self.a, self.b, self.c))

    def __eq__(self, other):
        return isinstance(other, QuadraticForm) and tuple(self) == tuple(other)

    def __hash__(self):
        return hash(tuple(self))

    def __repr__(self):
        return "QuadraticForm(%d, %d, %d)" % (self.a, self.b, self.c)

    def __call__(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y

    def is_primitive(self):
        return math.gcd(math.gcd(self.a, self.b), self.c) == 1

    def is_reduced(self):
        a, b, c = self
        return abs(b) <= a <= c and not (b < 0 and (abs(b) == a or a == c))

    def reduced(self):
        a, b, c = self
        while True:
            if not -a < b <= a:
                r = (a - b) // (2 * a)
                b, c = b + 2 * r * a, a * r * r + b * r + c
            if a > c or (a == c and b < 0):
                a, b, c = c, -b, a
                continue
            return QuadraticForm(a, b, c)

    def inverse(self):
        return QuadraticForm(self.a, -self.b, self.c).reduced()

    def root(self):
        """tau in the upper half plane with a tau^2 + b tau + c = 0, as (re, im^2)."""
        return Fraction(-self.b, 2 * self.a), Fraction(-self.disc, 4 * self.a * self.a)

    def act(self, m):
        """Form transformed by the integer matrix m = ((p, q), (r, s)):
        f'(x, y) = f(p x + q y, r x + s y)."""
        (p, q), (r, s) = m
        a, b, c = self
        return QuadraticForm(a * p * p + b * p * r + c * r * r,
                             2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
                             a * q * q + b * q * s + c * s * s)


def principal_form(disc):
    if disc >= 0 or disc % 4 not in (0, 1):
        raise DomainError("bad discriminant %d" % disc)
    k = disc % 2
    return QuadraticForm(1, k, (k - disc) // 4)


def compose_unreduced(f, g):
    """Dirichlet/Buell composition without reduction."""
    if f.disc != g.disc:
        raise DomainError("discriminants differ")
    disc = f.disc
    a1, b1, _ = f
    a2, b2, _ = g
    s = (b1 + b2) // 2
    d0, x, y = xgcd(a1, a2)
    e, p, q = xgcd(d0, s)
    u, v, w = p * x, p * y, q
    a3 = a1 * a2 // (e * e)
    b3 = (u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + disc) // 2) // e
    b3 %= 2 * a3
    c3 = (b3 * b3 - disc) // (4 * a3)
    return QuadraticForm(a3, b3, c3)


def form_compose(f, g):
    """Reduced representative of the product class."""
    if f.disc != g.disc:
        raise DomainError("discriminants differ")
    if not (f.is_primitive() and g.is_primitive()):
        raise DomainError("forms must be primitive")
    return compose_unreduced(f, g).reduced()


def form_power(f, k):
    if k < 0:
        return form_power(f.inverse(), -k)
    out = principal_form(f.disc)
    base = f.reduced()
    while k:
        if k & 1:
            out = form_compose(out, base)
        base = form_compose(base, base)
        k >>= 1
    return out


def reduced_forms(disc, primitive=True):
    """All reduced forms of a negative discriminant."""
    out = []
    a = 1
    while 3 * a * a <= -disc:
        for b in range(-a + 1, a + 1):
            if (b * b - disc) % (4 * a):
                continue
            c = (b * b - disc) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            f = QuadraticForm(a, b, c)
            if primitive and not f.is_primitive():
                continue
            out.append(f)
        a += 1
    return out


def class_number(disc):
    return len(reduced_forms(disc))


# ------------------------------------------------------ truncated 3-adics

def eis_mod_pi_power(z, r):
    """Canonical representative of z modulo sqrt(-3)^r."""
    z = EisensteinInt.coerce(z)
    s, odd = divmod(r, 2)
    if not odd:
        m = 3 ** s
        return EisensteinInt(z.a % m, z.b % m)
    # lattice 3^s * sqrt(-3) * O has basis 3^s*(3,0), 3^s*(-1,1)
    m = 3 ** s
    k = z.b // m
    a, b = z.a + k * m, z.b - k * m
    return EisensteinInt(a % (3 * m), b)


def eis_valuation3(z):
    """Valuation of a nonzero Eisenstein integer at sqrt(-3)."""
    z = EisensteinInt.coerce(z)
    if not z:
        raise DomainError("valuation of zero")
    v = 0
    while SQRT_M3.divides(z):
        z = z.exact_div(SQRT_M3)
        v += 1
    return v


class LocalElement:
    """pi^valuation * unit, unit known modulo pi^prec.

    field 'Q3': pi = 3, unit an int mod 3^prec.
    field 'K3': pi = sqrt(-3) = 1+2w, unit an EisensteinInt mod pi^prec.
    prec is the relative precision in powers of pi.  Zero is represented
    with unit None and valuation equal to the absolute precision.
    """

    __slots__ = ("field", "valuation", "unit", "prec")

    def __init__(self, field, valuation, unit, prec=12):
        if field not in ("Q3", "K3"):
            raise DomainError("unknown local field %r" % field)
        if prec < 1 and unit is not None:
            raise PrecisionError("no surviving digits")
        if unit is not None:
            if field == "Q3":
                unit = int(unit) % 3 ** prec
                if unit % 3 == 0:
                    raise DomainError("unit part divisible by 3")
            else:
                unit = eis_mod_pi_power(EisensteinInt.coerce(unit), prec)
                if (unit.a + unit.b) % 3 == 0:
                    raise DomainError("unit part divisible by sqrt(-3)")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "valuation", valuation)
        object.__setattr__(self, "unit", unit)
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, name, value):
        raise AttributeError("LocalElement is immutable")

    @classmethod
    def from_rational(cls, x, prec=12):
        x = Fraction(x)
        if x == 0:
            return cls("Q3", prec, None, 0)
        v = valuation(x, 3)
        y = x / Fraction(3) ** v
        u = y.numerator * pow(y.denominator, -1, 3 ** prec)
        return cls("Q3", v, u, prec)

    @classmethod
    def from_eisenstein(cls, z, prec=12, den=1):
        """z / den in K3, den a nonzero integer."""
        z = EisensteinInt.coerce(z)
        if not z:
            return cls("K3", 2 * prec, None, 0)
        v = eis_valuation3(z)
        u = z
        for _ in range(v):
            u = u.exact_div(SQRT_M3)
        vd = valuation(den, 3)
        d = den // 3 ** vd
        # 3 = -(sqrt(-3))^2 so 3^vd = (-1)^vd pi^(2 vd)
        m = 3 ** ((prec + 1) // 2 + 1)
        u = u * (pow(d, -1, m) * (-1) ** vd)
        return cls("K3", v - 2 * vd, u, prec)

    def is_zero(self):
        return self.unit is None

    def to_eisenstein_fraction(self):
        """(numerator EisensteinInt, denominator int) representing the element."""
        if self.field == "Q3":
            if self.valuation >= 0:
                return EisensteinInt(self.unit * 3 ** self.valuation), 1
            return EisensteinInt(self.unit), 3 ** (-self.valuation)
        v = self.valuation
        if v >= 0:
            return self.unit * SQRT_M3 ** v, 1
        # pi^-k = pi^k' / 3^j with pi^2 = -3
        j = (-v + 1) // 2
        num = self.unit * SQRT_M3 ** (2 * j + v) * (-1) ** j
        return num, 3 ** j

    def _pi_int(self):
        return 1 if self.field == "Q3" else 2

    def __mul__(self, other):
        if other.field != self.field:
            raise DomainError("field mismatch")
        if self.is_zero() or other.is_zero():
            return LocalElement(self.field, self.valuation + other.valuation, None, 0)
        prec = min(self.prec, other.prec)
        return LocalElement(self.field, self.valuation + other.valuation,
                            self.unit * other.unit, prec)

    def __add__(self, other):
        if other.field != self.field:
            raise DomainError("field mismatch")
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo, hi = (self, other) if self.valuation <= other.valuation else (other, self)
        absprec = min(lo.valuation + lo.prec, hi.valuation + hi.prec)
        shift = hi.valuation - lo.valuation
        if self.field == "Q3":
            s = lo.unit + hi.unit * 3 ** shift
            if s % 3 ** (absprec - lo.valuation) == 0:
                return LocalElement("Q3", absprec, None, 0)
            k = valuation(s, 3)
            rel = absprec - lo.valuation - k
            if rel < 1:
                raise PrecisionError("cancellation exhausted precision")
            return LocalElement("Q3", lo.valuation + k, s // 3 ** k, rel)
        s = lo.unit + hi.unit * SQRT_M3 ** shift
        if eis_mod_pi_power(s, absprec - lo.valuation) == EisensteinInt(0):
            return LocalElement("K3", absprec, None, 0)
        k = eis_valuation3(s)
        rel = absprec - lo.valuation - k
        if rel < 1:
            raise PrecisionError("cancellation exhausted precision")
        for _ in range(k):
            s = s.exact_div(SQRT_M3)
        return LocalElement("K3", lo.valuation + k, s, rel)

    def __neg__(self):
        if self.is_zero():
            return self
        return LocalElement(self.field, self.valuation, -self.unit, self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __repr__(self):
        return "LocalElement(%s, v=%d, unit=%s, prec=%d)" % (
            self.field, self.valuation, self.unit, self.prec)

    def __str__(self):
        if self.is_zero():
            return "O(pi^%d)" % self.valuation
        pi = "3" if self.field == "Q3" else "sqrt(-3)"
        return "%s^%d * (%s) + O(pi^%d)" % (pi, self.valuation, self.unit,
                                           self.valuation + self.prec)

    def same_class(self, other, prec):
        """Equality modulo pi^prec (absolute)."""
        d = self - other
        return d.is_zero() or d.valuation >= prec


# ------------------------------------------------------------- matrices

class Mat2:
    """2x2 matrix over Q."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        for k, x in zip("abcd", (a, b, c, d)):
            object.__setattr__(self, k, Fraction(x))

    def __setattr__(self, name, value):
        raise AttributeError("Mat2 is immutable")

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __iter__(self):
        return iter(self.entries())

    def __eq__(self, other):
        return isinstance(other, Mat2) and self.entries() == other.entries()

    def __hash__(self):
        return hash(self.entries())

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Mat2(*(x * other for x in self))
        a, b, c, d = self
        e, f, g, h = other
        return Mat2(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    __rmul__ = lambda self, k: self * k

    def __add__(self, other):
        return Mat2(*(x + y for x, y in zip(self, other)))

    def __sub__(self, other):
        return Mat2(*(x - y for x, y in zip(self, other)))

    def __neg__(self):
        return Mat2(*(-x for x in self))

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = Mat2.identity(), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace(self):
        return self.a + self.d

    def inverse(self):
        dt = self.det()
        if dt == 0:
            raise DomainError("singular matrix")
        return Mat2(self.d / dt, -self.b / dt, -self.c / dt, self.a / dt)

    def __repr__(self):
        return "Mat2(%s, %s, %s, %s)" % tuple(str(x) for x in self)

    def rows(self):
        return [[str(self.a), str(self.b)], [str(self.c), str(self.d)]]
