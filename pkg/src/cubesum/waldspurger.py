"""Local period integrals of minimal vectors over a ramified torus.

Setting: F = Q_q (q an odd prime), E = F(sqrt D) with v(D) = 1, uniformizers
varpi_F = D and varpi_E = sqrt D.  Characters of E^x trivial on F^x are
described by their values on the group of units 1 + y sqrt D (y in O_F, taken
modulo q^K) and a sign on sqrt D.  The additive character is
psi(x) = exp(-2 pi i {x}).

A supercuspidal pi with c(pi) = 2n + 1 comes from theta over L = F(sqrt D'),
D' = D/s^2, embedded by x + y sqrt D' -> [[x, y], [y D', x]].  The matrix
coefficient of the minimal vector is supported on J = L^x K(n) and equals
theta(l) on l (1 + x), x in B^n.  Everything is exact: sums of roots of unity
are returned as CyclotomicValue.
"""

import itertools
import random
from fractions import Fraction

from .algebra import CyclotomicValue, DomainError, is_prime, sqrt_mod_prime

MEASURE = "Vol(O_F^x \\ O_E^x) = 1, Vol(F^x \\ E^x) = 2"


def _val(x, q, cap):
    """q-adic valuation of an integer known modulo q^cap (capped at cap)."""
    x %= q ** cap
    if x == 0:
        return cap
    v = 0
    while x % q == 0:
        x //= q
        v += 1
    return v


def _zq(x, q, prec):
    """Image of a rational x in Z_q modulo q^prec."""
    x = Fraction(x)
    mod = q ** prec
    if x.denominator % q == 0:
        raise DomainError("%s is not q-integral" % x)
    return x.numerator * pow(x.denominator, -1, mod) % mod


# ----------------------------------------------------------------- unit group

_GROUPS = {}


class TorusGroup:
    """The group {1 + y sqrt D} / (y in q^K O_F), written additively in y.

    Law: y (+) z = (y + z) / (1 + D y z).
    """

    def __init__(self, q, D, K):
        self.q, self.D, self.K = q, D, K
        self.mod = q ** K
        self.elements = list(range(self.mod))
        self.basis, self.orders = self._find_basis()
        self.coords = self._coordinates()

    @classmethod
    def get(cls, q, D, K):
        key = (q, D, K)
        if key not in _GROUPS:
            _GROUPS[key] = cls(q, D, K)
        return _GROUPS[key]

    def op(self, y, z):
        m = self.mod
        return (y + z) * pow((1 + self.D * y * z) % m, -1, m) % m

    def neg(self, y):
        return (-y) % self.mod

    def mul(self, k, y):
        out = 0
        for _ in range(k):
            out = self.op(out, y)
        return out

    def _span(self, S, x):
        out = set(S)
        cur = x
        while True:
            new = {self.op(s, cur) for s in S}
            if new <= out:
                break
            out |= new
            cur = self.op(cur, x)
        return out

    def _order_mod(self, x, S):
        k, cur = 1, x
        while cur not in S:
            cur = self.op(cur, x)
            k += 1
        return k

    def _find_basis(self):
        S = {0}
        basis, orders = [], []
        while len(S) < self.mod:
            best = max(self.elements, key=lambda y: self._order_mod(y, S))
            m = self._order_mod(best, S)
            rep = None
            for s in S:
                cand = self.op(best, s)
                if self._order_mod(cand, {0}) == m:
                    rep = cand
                    break
            if rep is None:
                raise AssertionError("no lift of maximal order")
            basis.append(rep)
            orders.append(m)
            S = self._span(S, rep)
        return basis, orders

    def _coordinates(self):
        multiples = []
        for b, m in zip(self.basis, self.orders):
            row = [0]
            for _ in range(m - 1):
                row.append(self.op(row[-1], b))
            multiples.append(row)
        coords = {}
        for c in itertools.product(*[range(m) for m in self.orders]):
            y = 0
            for i, k in enumerate(c):
                y = self.op(y, multiples[i][k])
            coords[y] = c
        if len(coords) != self.mod:
            raise AssertionError("basis does not generate")
        return coords


# ----------------------------------------------------------------- characters

class ToricCharacter:
    """Character of E^x trivial on F^x.

    table[y] = e means value exp(2 pi i e / q^K) on 1 + y sqrt D; sign is 0 or 1
    for the value (+1 or -1) on sqrt D.
    """

    def __init__(self, group, table, sign, name="chi"):
        self.group = group
        self.table = tuple(e % group.mod for e in table)
        self.sign = sign % 2
        self.name = name

    @property
    def q(self):
        return self.group.q

    def __mul__(self, other):
        return ToricCharacter(self.group, [a + b for a, b in zip(self.table, other.table)],
                              self.sign + other.sign, "%s*%s" % (self.name, other.name))

    def inverse(self):
        return ToricCharacter(self.group, [-a for a in self.table], self.sign,
                              "%s^-1" % self.name)

    def conj(self):
        g = self.group
        return ToricCharacter(g, [self.table[g.neg(y)] for y in range(g.mod)], self.sign,
                              "conj(%s)" % self.name)

    def __eq__(self, other):
        return (self.group is other.group and self.table == other.table
                and self.sign == other.sign)

    def __hash__(self):
        return hash((self.table, self.sign))

    def level(self):
        """Least l with the character trivial on y in q^l O_F; c = 2l."""
        q, K = self.q, self.group.K
        for l in range(K + 1):
            step = q ** l
            if all(self.table[y] == 0 for y in range(0, q ** K, step)):
                return l
        raise AssertionError("unreachable")

    def conductor(self):
        return 2 * self.level()

    def is_trivial(self):
        return self.level() == 0 and self.sign == 0

    def exponent(self, a, b, prec):
        """Exponent mod 2 q^K of the value at a + b sqrt D (a, b integers mod q^prec)."""
        g = self.group
        q, K = g.q, g.K
        d0 = g.D // q
        va, vb = _val(a, q, prec), _val(b, q, prec)
        if min(va, vb) + K + 1 > prec:
            raise DomainError("element too close to zero for the working precision")
        if va <= vb:
            y = (b // q ** va) * pow((a // q ** va) % g.mod, -1, g.mod) % g.mod
            flip = 0
        else:
            y = (a // q ** (vb + 1)) * pow(d0 * (b // q ** vb) % g.mod, -1, g.mod) % g.mod
            flip = self.sign
        return (2 * self.table[y] + g.mod * flip) % (2 * g.mod)

    def value(self, a, b, prec=None):
        g = self.group
        prec = prec or g.K + 8
        a, b = _zq(a, g.q, prec), _zq(b, g.q, prec)
        return CyclotomicValue.root_of_unity(2 * g.mod, self.exponent(a, b, prec))

    def w_data(self):
        """W with self(1 + y sqrt D) = psi(W y / q^l) for v(y) >= floor(l/2).

        W is a unit taken modulo q^ceil(l/2), smallest positive residue.
        """
        l = self.level()
        if l == 0:
            raise DomainError("w is defined only for positive level")
        q, K = self.q, self.group.K
        mod = q ** K
        lo = q ** (l // 2)
        ys = list(range(0, mod, lo))
        for W in range(1, q ** ((l + 1) // 2) + 1):
            if W % q == 0:
                continue
            if all(self.table[y] == (-W * y * q ** (K - l)) % mod for y in ys):
                return W
        raise AssertionError("no W for %s" % self.name)


def random_character(group, rng, level=None, sign=None, name="chi"):
    """Uniform random character; with level given, retry until it matches."""
    for _ in range(10000):
        exps = [rng.randrange(m) for m in group.orders]
        table = []
        for y in range(group.mod):
            c = group.coords[y]
            table.append(sum(ci * ei * (group.mod // m)
                             for ci, ei, m in zip(c, exps, group.orders)))
        s = rng.randrange(2) if sign is None else sign
        ch = ToricCharacter(group, table, s, name)
        if level is None or ch.level() == level:
            return ch
    raise AssertionError("could not sample a character of level %s" % level)


def from_k3_character(ch, K):
    """Convert a character of Q3(sqrt -3)^x (classfield3.LocalCharacterK3)."""
    from .algebra import EisensteinInt
    g = TorusGroup.get(3, -3, K)
    table = []
    for y in range(g.mod):
        val = ch.value(EisensteinInt(1 + y, 2 * y)).canonical()
        k = val.root_index()
        e = Fraction(k, val.m) * g.mod
        if e.denominator != 1:
            raise DomainError("value of %s is not of 3-power order" % ch.name)
        table.append(int(e))
    pv = ch.value(EisensteinInt(1, 2))
    if pv == 1:
        sign = 0
    elif pv == -1:
        sign = 1
    else:
        raise DomainError("%s is not trivial on Q3^x" % ch.name)
    return ToricCharacter(g, table, sign, ch.name)


# ------------------------------------------------------------------- settings

class LocalSetting:
    """q, n (c(theta) = 2n, c(pi) = 2n + 1), e_L = 2, D, and D' = D/s^2."""

    e_L = 2

    def __init__(self, theta):
        g = theta.group
        self.q, self.D, self.K = g.q, g.D, g.K
        self.theta = theta
        self.n = theta.level()
        if self.n < 1:
            raise DomainError("theta must have c(theta) >= 2")
        if self.K < self.n:
            raise DomainError("character tables too coarse")
        self.W = theta.w_data()
        d0 = Fraction(self.D, self.q)
        # sqrt D = s sqrt D', from alpha_theta = 1/(varpi^n sqrt D')
        self.s = Fraction(self.W) * d0 ** self.n / 2
        self.Dp = Fraction(self.D) / self.s ** 2

    @property
    def c_theta(self):
        return 2 * self.n

    @property
    def c_pi(self):
        return 2 * self.n + 1

    def as_dict(self):
        return {"q": self.q, "e_L": self.e_L, "n": self.n, "c_pi": self.c_pi,
                "D": self.D, "D_prime": str(self.Dp), "s": str(self.s)}


class ToricCharacterPair:
    """(theta, chi) with c(theta chibar) <= c(theta chi); if the given chi violates
    that, chi is replaced by its conjugate and `swapped` is set."""

    def __init__(self, theta, chi):
        if theta.group is not chi.group:
            raise DomainError("characters live on different groups")
        if (theta * chi.conj()).level() > (theta * chi).level():
            chi = chi.conj()
            self.swapped = True
        else:
            self.swapped = False
        self.theta, self.chi = theta, chi
        self.nu = theta * chi.conj()
        self.l = self.nu.level()

    def alpha_W(self):
        """W' of theta chibar (its alpha is W'/(2 D q^l) sqrt D)."""
        return self.nu.w_data() if self.l > 0 else None


def setting_and_pair(theta, chi):
    setting = LocalSetting(theta)
    pair = ToricCharacterPair(theta, chi)
    if pair.l > setting.n:
        raise DomainError("c(theta chibar) exceeds c(theta)")
    return setting, pair


# --------------------------------------------------------------- epsilon test

def _is_square_mod(x, q):
    x %= q
    return x != 0 and pow(x, (q - 1) // 2, q) == 1


def epsilon_test(setting, pair):
    """Local root-number sign epsilon(pi_E x chi) chi(-1) for the ramified,
    same-extension case, via the four explicit conditions; returns +1 or -1."""
    q, n = setting.q, setting.n
    d0 = setting.D // q
    theta, chi = pair.theta, pair.chi
    legendre_m1 = 1 if q % 4 == 1 else -1
    nu_minus = theta.inverse() * chi
    nu_plus = theta * chi
    wt = theta.w_data()

    def delta(nu):
        # nu(1 + D^{c-1} x sqrt D) = theta(1 + D^{n-1} delta x sqrt D), mod varpi
        c = nu.level()
        wn = nu.w_data()
        return wn * d0 ** (c - 1) * pow(wt * d0 ** (n - 1), -1, q) % q

    cp, cm = nu_plus.level(), nu_minus.level()
    # (1)
    if cp == n and cm == n:
        dl = delta(chi) if chi.level() == n else 0
        if (dl * dl - 1) % q and not _is_square_mod(dl * dl - 1, q):
            return -1
    # (2)
    if 0 < cp < n:
        dl = delta(nu_plus)
        if not _is_square_mod(-2 * dl * (-1) ** ((cp + n) % 2), q):
            return -1
    # (3)
    if 0 < cm < n:
        dl = delta(nu_minus)
        if not _is_square_mod(2 * dl * (-1) ** ((cm + n) % 2), q):
            return -1
    # (4): nu_plus carries the unramified twist Delta^-2, worth (-1/q) on sqrt D
    if cp == 0:
        val = (-1) ** nu_plus.sign * legendre_m1
        if val == -1:
            return -1
    if cm == 0 and nu_minus.sign == 1:
        return -1
    return 1


# ------------------------------------------------------------- closed forms

def minimal_vector_support(c_pi):
    """Kirillov support of phi_0 as (k, m): indicator of varpi^-k U_F(m)."""
    if c_pi < 2:
        raise DomainError("c(pi) must be at least 2")
    if c_pi % 4 == 0:
        n = c_pi // 4
        return (2 * n, n)
    if c_pi % 2 == 1:
        n = (c_pi - 1) // 2
        return (n, (n + 1) // 2)
    n = (c_pi - 2) // 4
    return (2 * n + 1, n + 1)


class TestVector:
    """phi = pi([[1, u], [0, 1]] [[v, 0], [0, 1]]) phi_0."""

    __test__ = False

    def __init__(self, u, v):
        self.u = Fraction(u)
        self.v = Fraction(v)

    def matrix(self):
        return ((self.v, self.u), (Fraction(0), Fraction(1)))

    def as_dict(self):
        return {"u": str(self.u), "v": str(self.v)}

    def __repr__(self):
        return "TestVector(u=%s, v=%s)" % (self.u, self.v)


class PeriodValue:
    """Exact period with its measure normalization."""

    def __init__(self, value, measure=MEASURE):
        if isinstance(value, (int, Fraction)):
            value = CyclotomicValue.from_int(1, value)
        self.value = value
        self.measure = measure

    def rational(self):
        return self.value.rational()

    def abs2(self):
        return self.value.abs2().rational()

    def __eq__(self, other):
        if isinstance(other, PeriodValue):
            other = other.value
        return self.value == other

    def __repr__(self):
        r = self.rational()
        return "PeriodValue(%s)" % (r if r is not None else self.value)

    def as_dict(self):
        r = self.rational()
        return {"value": str(r) if r is not None else str(self.value),
                "measure": self.measure}


def _equation_coeffs(setting, pair, u, prec):
    """(A2, A1, A0) of s^2 v^2 - (varpi^n alpha' sqrt D ... ) v + 1 - D u^2 mod q^prec."""
    q, n, l = setting.q, setting.n, pair.l
    mod = q ** prec
    s = _zq(setting.s, q, prec)
    d0 = setting.D // q
    Wp = pair.alpha_W()
    # varpi^n alpha sqrt D * 2 = D^n w' = d0^n W' q^{n-l}
    lin = d0 ** n * Wp * q ** (n - l) % mod
    A2 = s * s % mod
    A1 = (-(lin - 2 * s)) % mod
    A0 = (1 - setting.D * _zq(u, q, prec) ** 2) % mod
    return A2, A1, A0


def candidate_us(setting, pair):
    """u = 0 for n - l even (and l = 0); otherwise residues with v(u) = (n-l-1)/2
    modulo the precision the congruence sees."""
    q, n, l = setting.q, setting.n, pair.l
    if l == 0 or (n - l) % 2 == 0:
        return [0]
    k = (n - l - 1) // 2
    umod = q ** (n - l // 2 - 1 - k)
    return sorted({q ** k * j % umod for j in range(1, umod // q ** k) if j % q})


def solve_test_vector(setting, pair):
    """All test vectors (u, v) found by the congruence, v modulo varpi^ceil(n/2).

    l = 0: u = 0, v = -1/s when theta chibar is trivial (period 2), else nothing.
    l > 0: u = 0 if n - l is even, else u ranges over v(u) = (n-l-1)/2.
    """
    q, n, l = setting.q, setting.n, pair.l
    vmod = q ** ((n + 1) // 2)
    if l == 0:
        if pair.nu.sign:
            return []
        v = (-pow(_zq(setting.s, q, 1 + (n + 1) // 2), -1, q ** ((n + 1) // 2))) % vmod
        return [TestVector(0, v)]
    M = n - l // 2
    mod = q ** M
    us = candidate_us(setting, pair)
    out = []
    for u in us:
        A2, A1, A0 = _equation_coeffs(setting, pair, u, M)
        seen = set()
        for v in range(1, mod):
            if v % q == 0:
                continue
            if (A2 * v * v + A1 * v + A0) % mod == 0 and v % vmod not in seen:
                seen.add(v % vmod)
                out.append(TestVector(u, v % vmod))
    return out


def discriminant(setting, pair, u):
    """Delta(u) of the test-vector congruence, modulo q^(n - floor(l/2))."""
    M = setting.n - pair.l // 2
    A2, A1, A0 = _equation_coeffs(setting, pair, u, M)
    return (A1 * A1 - 4 * A2 * A0) % setting.q ** M


def _same_class(setting, a, b):
    q, n = setting.q, setting.n
    return (_zq(a.v - b.v, q, n + 2) % q ** ((n + 1) // 2) == 0
            and _zq(a.u - b.u, q, n + 2) % q ** max(n // 2, 1) == 0)


def period_minimal(setting, pair, tv):
    """Closed-form I(phi, chi) for phi = pi(k) phi_0."""
    sols = solve_test_vector(setting, pair)
    for s in sols:
        if _same_class(setting, s, tv):
            if pair.l == 0:
                return PeriodValue(2)
            return PeriodValue(Fraction(1, setting.q ** (pair.l // 2)))
    return PeriodValue(0)


# -------------------------------------------------------------- brute force

def _matmul(A, B, mod):
    return ((A[0][0] * B[0][0] + A[0][1] * B[1][0]) % mod,
            (A[0][0] * B[0][1] + A[0][1] * B[1][1]) % mod), \
           ((A[1][0] * B[0][0] + A[1][1] * B[1][0]) % mod,
            (A[1][0] * B[0][1] + A[1][1] * B[1][1]) % mod)


def _inverse_zq(h, q):
    """Inverse of a rational 2x2 matrix, checked to lie in GL2(Z_q)."""
    (a, b), (c, d) = h
    det = Fraction(a) * d - Fraction(b) * c
    inv = ((d / det, -b / det), (-c / det, a / det))
    return inv


def _to_zq_matrix(h, q, prec):
    return tuple(tuple(_zq(x, q, prec) for x in row) for row in h)


class MinimalCoefficient:
    """Phi_{phi_0} on integral matrices, exact as an exponent of zeta_{2 q^K}."""

    def __init__(self, setting, prec=None):
        self.setting = setting
        self.q = setting.q
        self.n = setting.n
        self.prec = prec or setting.n + 10
        self.mod = self.q ** self.prec
        self.Dp = _zq(setting.Dp, self.q, self.prec)
        self.s = _zq(setting.s, self.q, self.prec)

    def __call__(self, g, detval):
        """Exponent of Phi(g), or None off the support; detval = v(det g)."""
        q, P, mod = self.q, self.prec, self.mod
        (a, b), (c, d) = g
        Dp = self.Dp
        X = Dp * (a + d) % mod
        Y = (Dp * b + c) % mod
        vl1 = min(2 * _val(X, q, P), 2 * _val(Y, q, P) + 1)
        if vl1 != 2 + detval:
            return None
        A = Dp * (a - d) % mod
        B = (Dp * b - c) % mod
        vl2 = min(2 * _val(A, q, P), 2 * _val(B, q, P) + 1)
        if vl2 - vl1 < self.n:
            return None
        return self.setting.theta.exponent(self.s * X % mod, Y, P)


def brute_force_pairing(setting, chi, h1, h2=None, N=None, coeff=None):
    """beta^I(pi(h1) phi_0, pi(h2) phi_0) = int Phi(h2^-1 t h1) chi(t) dt, exactly.

    The torus quotient F^x \\ E^x is {1, sqrt D} x {1 + y sqrt D}; y runs over
    O_F / q^N with weight q^-N.
    """
    q, n, D = setting.q, setting.n, setting.D
    N = N or n + 1
    h2 = h1 if h2 is None else h2
    coeff = coeff or MinimalCoefficient(setting)
    P, mod = coeff.prec, coeff.mod
    H1 = _to_zq_matrix(h1, q, P)
    H2i = _to_zq_matrix(_inverse_zq(h2, q), q, P)
    m2 = 2 * setting.theta.group.mod
    counts = {}
    for sgn in (0, 1):
        for y in range(q ** N):
            if sgn == 0:
                t = ((1, y), (y * D % mod, 1))
                ta, tb = 1, y
            else:
                t = ((y * D % mod, 1), (D, y * D % mod))
                ta, tb = y * D, 1
            detval = _val((ta * ta - D * tb * tb) % mod, q, P)
            g = _matmul(_matmul(H2i, t, mod), H1, mod)
            e = coeff(g, detval)
            if e is None:
                continue
            e = (e + chi.exponent(ta % mod, tb % mod, P)) % m2
            counts[e] = counts.get(e, 0) + 1
    val = CyclotomicValue.from_exponents(m2, counts) * Fraction(1, q ** N)
    return PeriodValue(val)


def _k_matrix(u, v):
    return ((Fraction(v), Fraction(u)), (Fraction(0), Fraction(1)))


def brute_force_period(setting, pair, tv, N=None, check=True):
    """Oracle for I(phi, chi) at the test vector tv; with check=True the sum is
    recomputed at truncation N + 1 and must agree."""
    N = N or setting.n + 1
    k = _k_matrix(tv.u, tv.v)
    val = brute_force_pairing(setting, pair.chi, k, N=N)
    if check:
        val2 = brute_force_pairing(setting, pair.chi, k, N=N + 1)
        if val2 != val:
            raise ArithmeticError("brute-force period depends on the truncation")
    return val


# ------------------------------------------------------------------- newforms

def _unit_residues(q, k):
    return [x for x in range(1, q ** k) if x % q]


def newform_beta(setting, pair, method="closed", full=False):
    """I(translated newform, chi).

    closed: the n - l even formula (1/((q-1) q^{ceil(n/2)-1})) q^{-floor(l/2)}
    (1 + theta chi(sqrt D))^2, or the l = 0 value; brute: the bilinear
    expansion over phi_x = pi(diag(x, 1)) phi_0, diagonal terms first, cross
    terms only between nonzero diagonals unless full=True.
    """
    q, n, l = setting.q, setting.n, pair.l
    k = (n + 1) // 2
    norm = Fraction(1, (q - 1) * q ** (k - 1))
    if method == "closed":
        if l == 0:
            count = len([tv for tv in solve_test_vector(setting, pair) if tv.u == 0])
            return PeriodValue(norm * 2 * count)
        if (n - l) % 2:
            raise DomainError("closed form needs n - l even")
        if not solve_test_vector(setting, pair):
            return PeriodValue(0)
        gamma = -1 if (pair.theta * pair.chi).sign else 1
        return PeriodValue(norm * Fraction(1, q ** (l // 2)) * (1 + gamma) ** 2)
    xs = _unit_residues(q, k)
    coeff = MinimalCoefficient(setting)
    mats = {x: _k_matrix(0, x) for x in xs}
    diag = {x: brute_force_pairing(setting, pair.chi, mats[x], coeff=coeff) for x in xs}
    live = xs if full else [x for x in xs if not diag[x].value.is_zero()]
    total = CyclotomicValue.from_int(1, 0)
    for x in live:
        for x2 in live:
            term = diag[x] if x == x2 else brute_force_pairing(
                setting, pair.chi, mats[x], mats[x2], coeff=coeff)
            total = total + term.value
    return PeriodValue(total * norm)


def off_diagonal_data(setting, pair, v, v2, prec=None):
    """gamma = theta chi(sqrt D) and the support of beta^I(phi_v, phi_v') for the
    two exact roots v, v' of s^2 v^2 - (D^n w' - 2 s) v + 1 = 0 (u = 0)."""
    q, n, l = setting.q, setting.n, pair.l
    if l == 0 or (n - l) % 2:
        raise DomainError("off-diagonal data needs l > 0 and n - l even")
    prec = prec or n + 4
    mod = q ** prec
    A2, A1, A0 = _equation_coeffs(setting, pair, 0, prec)
    for r in (v, v2):
        if (A2 * r * r + A1 * r + A0) % mod:
            raise DomainError("%s is not a root to precision %d" % (r, prec))
    if (v - v2) % mod == 0:
        raise DomainError("roots must be distinct")
    prod_ok = (v * v2 * A2) % mod == 1  # v v' = D'/D = 1/s^2
    ratio = v * pow(v2, -1, mod) - 1
    vr = _val(ratio, q, prec)
    gamma = -1 if (pair.theta * pair.chi).sign else 1
    return {"gamma": gamma, "vv_prime_is_Dp_over_D": prod_ok,
            "v_ratio_valuation": vr, "expected_valuation": (n - l) // 2,
            "support": {"v(b)": 0, "v(a) >=": (l + 2) // 2}}


def _sqrt_unit(a, q, prec):
    """Square root of a unit square modulo q^prec, or None."""
    r = sqrt_mod_prime(a % q, q)
    if r is None or (r * r - a) % q:
        return None
    mod = q ** prec
    for _ in range(prec.bit_length() + 1):
        r = (r + a * pow(r, -1, mod)) * pow(2, -1, mod) % mod
    return r if (r * r - a) % mod == 0 else None


def exact_roots(setting, pair, prec=None):
    """The two roots in Z_q (mod q^(prec - k), k = v(disc)/2) of the u = 0 equation
    s^2 v^2 - (D^n w' - 2s) v + 1 = 0, or [] if they are not in Q_q."""
    q = setting.q
    prec = prec or setting.n + 8
    A2, A1, A0 = _equation_coeffs(setting, pair, 0, prec)
    mod = q ** prec
    disc = (A1 * A1 - 4 * A2 * A0) % mod
    vd = _val(disc, q, prec)
    if vd % 2 or vd >= prec:
        return []
    k = vd // 2
    r = _sqrt_unit(disc // q ** vd, q, prec - vd)
    if r is None:
        return []
    root = r * q ** k
    inv = pow(2 * A2, -1, mod)
    return [(-A1 + root) * inv % mod, (-A1 - root) * inv % mod]


# ------------------------------------------------------ cube-sum case

def embedding_data(p):
    """(a, b, c) of sqrt(-3) -> [[a, 3^-2 b], [3^3 c, -a]]."""
    p = Fraction(p)
    a = 4 * p + 17 + 72 / p
    b = 9 * (-8 * p / 9 - 4 - 18 / p)
    c = (18 * p + 72 + 288 / p) / 27
    return a, b, c


def _cube_sum_setting(p):
    from .classfield3 import chi3_table, theta3_small
    if p % 9 not in (4, 7):
        raise DomainError("p must be 4 or 7 mod 9")
    theta = from_k3_character(theta3_small(), 2)
    chi = from_k3_character(chi3_table(p), 2)
    theta.name, chi.name = "theta3", "chi3"
    setting = LocalSetting(theta)
    pair = ToricCharacterPair(theta, chi)
    return setting, pair


def cube_sum_configuration(p):
    """Setting, pair and the translates phi_{u,x} = pi([[1,u],[0,1]] diag(-c x, 1)) phi_0
    arising from the conjugating matrix [[-9c, a/3], [0, 1]]."""
    setting, pair = _cube_sum_setting(p)
    a, b, c = embedding_data(p)
    u = a / 3
    mats = {x: _k_matrix(u, -c * x) for x in (1, 2)}
    return setting, pair, u, mats


def beta3(p, method="closed"):
    """beta_3(f_3, f_3) for the L^2-normalized newform: 1 (p = 7 mod 9), 1/2 (p = 4 mod 9)."""
    setting, pair, u, mats = cube_sum_configuration(p)
    q = setting.q
    norm = Fraction(1, (q - 1) * q ** ((setting.n + 1) // 2 - 1))
    if method == "closed":
        total = Fraction(0)
        for x, h in mats.items():
            tv = TestVector(u, h[0][0])
            total += period_minimal(setting, pair, tv).rational()
        return total * norm
    total = CyclotomicValue.from_int(1, 0)
    coeff = MinimalCoefficient(setting)
    for x in mats:
        for x2 in mats:
            total = total + brute_force_pairing(setting, pair.chi, mats[x], mats[x2],
                                                coeff=coeff).value
    r = (total * norm).rational()
    if r is None:
        raise ArithmeticError("beta3 is not rational")
    return r


def beta0_ratio(p, method="closed"):
    """beta^0(f', f') / beta^0(f, f) = Vol(Q3^x \\ K3^x) / beta3 = 2 / beta3."""
    return Fraction(2) / beta3(p, method)


def local_beta_report(p):
    setting, pair, u, mats = cube_sum_configuration(p)
    sols = solve_test_vector(setting, pair)
    closed = beta3(p, "closed")
    brute = beta3(p, "brute")
    return {
        "p": p,
        "beta3": str(closed),
        "beta0_ratio": str(Fraction(2) / closed),
        "epsilon": epsilon_test(setting, pair),
        "l": pair.l,
        "solutions": [tv.as_dict() for tv in sols],
        "oracle_beta3": str(brute),
        "oracle_agrees": brute == closed,
        "setting": setting.as_dict(),
    }


# ------------------------------------------------------------------- scanning

def random_pair(q, n, rng, D=None, l=None, sign=None):
    """Random (theta, chi): theta of level n, theta chibar of level l (random if None)."""
    D = D if D is not None else -q
    g = TorusGroup.get(q, D, n)
    theta = random_character(g, rng, level=n, name="theta")
    l = rng.randrange(n + 1) if l is None else l
    nu = random_character(g, rng, level=l, sign=sign, name="nu")
    chi = theta * nu.inverse()
    chi.name = "chi"
    return theta, chi


def check_configuration(theta, chi, brute=True, exhaustive=False):
    """Compare epsilon, the solver and the oracle on one pair; returns a record.

    exhaustive: also run the oracle on every v class for each candidate u and
    require it to vanish off the solution set."""
    setting, pair = setting_and_pair(theta, chi)
    eps = epsilon_test(setting, pair)
    sols = solve_test_vector(setting, pair)
    rec = {"q": setting.q, "n": setting.n, "l": pair.l, "epsilon": eps,
           "solutions": len(sols), "consistent": (len(sols) > 0) == (eps == 1),
           "values": []}
    if brute:
        coeff = MinimalCoefficient(setting)
        expected = Fraction(2) if pair.l == 0 else Fraction(1, setting.q ** (pair.l // 2))
        ok = True
        for tv in sols:
            val = brute_force_pairing(setting, pair.chi, _k_matrix(tv.u, tv.v), coeff=coeff)
            r = val.rational()
            rec["values"].append(str(r) if r is not None else str(val.value))
            if r != expected:
                ok = False
        if exhaustive:
            vmod = setting.q ** ((setting.n + 1) // 2)
            for u in candidate_us(setting, pair):
                for v in _unit_residues(setting.q, (setting.n + 1) // 2):
                    tv = TestVector(u, v)
                    if any(_same_class(setting, tv, s) for s in sols):
                        continue
                    val = brute_force_pairing(setting, pair.chi, _k_matrix(u, v), coeff=coeff)
                    if not val.value.is_zero():
                        ok = False
                        rec["values"].append("nonzero off solutions at u=%s v=%s" % (u, v % vmod))
        rec["oracle_matches"] = ok
    return rec


def scan(q, n, trials, seed=0, brute=True, exhaustive=False):
    """Random same-ramified pairs at fixed (q, n)."""
    if not is_prime(q) or q == 2:
        raise DomainError("q must be an odd prime")
    rng = random.Random(seed)
    recs = [check_configuration(*random_pair(q, n, rng), brute=brute,
                                exhaustive=exhaustive) for _ in range(trials)]
    return {"q": q, "n": n, "trials": trials,
            "consistent": sum(r["consistent"] for r in recs),
            "oracle_matches": sum(r.get("oracle_matches", True) for r in recs),
            "epsilon_minus": sum(r["epsilon"] == -1 for r in recs),
            "records": recs}
