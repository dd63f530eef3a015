"""Cubic Hilbert symbols over K3 = Q3(sqrt(-3)) and the local characters
Theta_3, chi_3, theta_3 = Theta_3 * Delta_theta at the place above 3.

Conventions.  w = (-1 + sqrt(-3))/2 is embedded with positive imaginary part;
the uniformizer of K3 is pi = sqrt(-3) = 1 + 2w.  Characters of K3^x that
appear here have conductor at most pi^4 = 9, so they are stored by their
values on pi and on generators of (O/9)^x:

    -1 (order 2),  1 + sqrt(-3),  1 - sqrt(-3),  1 + 3 sqrt(-3) (order 3 each).

The additive character is psi_3(x) = exp(2 pi i * (-x mod Z_3)).
"""

import itertools
from fractions import Fraction

from .algebra import (
    CyclotomicValue, DomainError, EisensteinInt, LocalElement, SQRT_M3, W,
    cubic_residue_symbol, eis_mod_pi_power, eis_valuation3, eisenstein_factor,
    sextic_residue_symbol, valuation,
)

PI = SQRT_M3

# sign of the additive character: psi_3(x) = exp(2 pi i * PSI_SIGN * x)
PSI_SIGN = -1

GEN_NAMES = ("-1", "1+sqrt(-3)", "1-sqrt(-3)", "1+3sqrt(-3)")
GENERATORS = (EisensteinInt(-1), 1 + PI, 1 - PI, 1 + 3 * PI)
GEN_ORDERS = (2, 3, 3, 3)


def mu3(k):
    return CyclotomicValue.root_of_unity(3, k)


def mu12(k):
    return CyclotomicValue.root_of_unity(12, k)


# ------------------------------------------------------- Hilbert symbols

def _strip(z, pi):
    v = 0
    while pi.divides(z):
        z = z.exact_div(pi)
        v += 1
    return v, z


def tame_symbol(a, b, w):
    """Cubic tame symbol at a prime w not above 3, as a cube root of unity.

    ((-1)^{v(a)v(b)} a^{v(b)} / b^{v(a)} mod w)^{(Nw-1)/3}.
    """
    a, b, w = (EisensteinInt.coerce(x) for x in (a, b, w))
    if not a or not b:
        raise DomainError("tame symbol of zero")
    if w.norm() % 3 == 0:
        raise DomainError("wild place: w divides 3")
    va, ua = _strip(a, w)
    vb, ub = _strip(b, w)
    if va == 0 and vb == 0:
        return mu3(0)
    # -1 is a cube, so the sign drops out
    k = vb * cubic_residue_symbol(ua, w) - va * cubic_residue_symbol(ub, w)
    return mu3(k)


def tame_exponent(a, b, w):
    return tame_symbol(a, b, w).lift(3).root_index()


def hilbert_cubic_at_3(a, b):
    """(a, b)_{K3,3} from the product formula over the places away from 3.

    With tame symbols normalized as in tame_symbol, the product of all local
    symbols is 1 and the complex place contributes nothing, so the symbol
    at 3 is the product of the tame symbols (see the decisions ledger for
    the sign of this normalization).
    """
    a, b = EisensteinInt.coerce(a), EisensteinInt.coerce(b)
    if not a or not b:
        raise DomainError("Hilbert symbol of zero")
    places = set()
    for z in (a, b):
        _, fac = eisenstein_factor(z)
        places.update(pi for pi, _ in fac if pi.norm() % 3)
    k = 0
    for w in places:
        k += tame_exponent(a, b, w)
    return mu3(k)


def hilbert_exponent(a, b):
    return hilbert_cubic_at_3(a, b).lift(3).root_index()


def crt_lift(u, p):
    """lambda in Z[w] with lambda = u mod 9 and lambda = 1 mod p, of least norm."""
    u = EisensteinInt.coerce(u)
    m = 9 * p

    def crt(r9, rp):
        return (r9 * p * pow(p, -1, 9) + rp * 9 * pow(9, -1, p)) % m

    lam = EisensteinInt(crt(u.a, 1), crt(u.b, 0))
    lam = lam - EisensteinInt(m) * lam.round_div(m)
    best = None
    for x in range(-2, 3):
        for y in range(-2, 3):
            cand = lam + EisensteinInt(m * x, m * y)
            key = (cand.norm(), cand.a, cand.b)
            if best is None or key < best[0]:
                best = (key, cand)
    return best[1]


# ---------------------------------------------------------- unit group mod 9

def _build_dlog():
    table = {}
    for e in itertools.product(*(range(n) for n in GEN_ORDERS)):
        z = EisensteinInt(1)
        for g, k in zip(GENERATORS, e):
            z = z * g ** k
        table[(z.a % 9, z.b % 9)] = e
    if len(table) != 54:
        raise AssertionError("generators do not span (O/9)^x")
    return table


_DLOG = _build_dlog()


def unit_dlog(u):
    """Exponent vector of a unit of O_{K,3} (given by an Eisenstein integer)."""
    u = EisensteinInt.coerce(u)
    key = (u.a % 9, u.b % 9)
    if key not in _DLOG:
        raise DomainError("%s is not a unit at 3" % u)
    return _DLOG[key]


def split_pi(x):
    """x = pi^v * u for x in K^x given as EisensteinInt or (EisensteinInt, int).

    Returns (v, u mod 9) with u an Eisenstein integer unit at 3.
    """
    if isinstance(x, tuple):
        num, den = EisensteinInt.coerce(x[0]), int(x[1])
    else:
        num, den = EisensteinInt.coerce(x), 1
    v = eis_valuation3(num)
    for _ in range(v):
        num = num.exact_div(PI)
    vd = valuation(den, 3)
    d = den // 3 ** vd
    # 3 = -pi^2
    u = num * (pow(d, -1, 9) * (-1) ** vd)
    return v - 2 * vd, u.mod_int(9)


class LocalCharacterK3:
    """Character of K3^x with conductor dividing pi^4."""

    def __init__(self, name, pi_value, gen_values, check_trivial_on_Q3=False):
        self.name = name
        self.pi_value = pi_value
        self.gen_values = tuple(gen_values)
        for val, n in zip(self.gen_values, GEN_ORDERS):
            if val ** n != 1:
                raise DomainError("%s: generator value of wrong order" % name)
        if check_trivial_on_Q3:
            for t in (EisensteinInt(-1), EisensteinInt(4), EisensteinInt(3)):
                if self.value(t) != 1:
                    raise DomainError("%s is not trivial on Q3^x" % name)
        self.conductor = self._conductor()

    def value(self, x):
        v, u = split_pi(x)
        out = self.pi_value ** v
        for val, k in zip(self.gen_values, unit_dlog(u)):
            if k:
                out = out * val ** k
        return out

    def __call__(self, x):
        return self.value(x)

    def __mul__(self, other):
        return LocalCharacterK3(
            "%s*%s" % (self.name, other.name), self.pi_value * other.pi_value,
            [a * b for a, b in zip(self.gen_values, other.gen_values)])

    def conj(self):
        return LocalCharacterK3(
            "conj(%s)" % self.name, self.pi_value.conj(),
            [a.conj() for a in self.gen_values])

    def _conductor(self):
        for c in range(0, 5):
            ok = True
            for a in range(9):
                for b in range(9):
                    z = EisensteinInt(a, b)
                    if (a + b) % 3 == 0:
                        continue
                    if c and eis_mod_pi_power(z - 1, c) != EisensteinInt(0):
                        continue
                    if self.value(z) != 1:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                return c
        raise AssertionError("conductor exceeds pi^4")

    def table(self):
        rows = [{"generator": "sqrt(-3)", "value": str(self.pi_value)}]
        for n, val in zip(GEN_NAMES, self.gen_values):
            rows.append({"generator": n, "value": str(val)})
        return rows

    def values(self):
        """Values on (-1, 1+sqrt(-3), 1-sqrt(-3), 1+3sqrt(-3), sqrt(-3))."""
        return tuple(self.gen_values) + (self.pi_value,)


# --------------------------------------------------------------- Theta_3

def theta_place_value(a):
    """Theta at the prime (a), a = 2 mod 3, with the archimedean normalization
    a/|a| removed: returns -conj((-3/a)_6), or -1 for a = 2."""
    a = EisensteinInt.coerce(a)
    if a == EisensteinInt(2):
        return CyclotomicValue.root_of_unity(2, 1)
    return -sextic_residue_symbol(-3, a).conj()


def theta3_global(t):
    """Theta_3(t) for t in Z[w] nonzero, by the product formula chase.

    With Theta_inf(x) = |x|/x and Theta(p) = -Np^{-1/2} conj((-3/a)_6) a the
    factors sqrt(Na) and a/|a| cancel, leaving
        Theta_3(t) = i^k * u * prod (-conj((-3/a)_6))^{-e}
    for t = u * sqrt(-3)^k * prod a^e.
    """
    unit, fac = eisenstein_factor(t)
    out = CyclotomicValue.from_int(12, 1)
    # unit as a root of unity in Q(zeta_12)
    k6 = {EisensteinInt(1): 0, -W * W: 1, W: 2, EisensteinInt(-1): 3,
          W * W: 4, -W: 5}[unit]
    out = out * mu12(2 * k6)
    for pi, e in fac:
        if pi == PI:
            out = out * mu12(3 * e)
        else:
            out = out * theta_place_value(pi) ** (-e)
    return out


def theta3_table():
    """Theta_3 on the generators, each value solved from the global chase."""
    vals = [theta3_global(g) for g in GENERATORS]
    chi = LocalCharacterK3("Theta3", theta3_global(PI), vals)
    return chi


# ------------------------------------------------------------------ chi_3

def chi3_representative(p):
    if p % 9 == 4:
        return 12
    if p % 9 == 7:
        return 21
    raise DomainError("p must be 4 or 7 mod 9")


def chi3_table(p):
    """chi_3(t) = (t, 3p)_{K3,3}, evaluated with the cube-class representative
    12 (p = 4 mod 9) or 21 (p = 7 mod 9) of 3p."""
    b = chi3_representative(p)
    vals = [hilbert_cubic_at_3(g, b) for g in GENERATORS]
    return LocalCharacterK3("chi3(p=%d)" % p, hilbert_cubic_at_3(PI, b), vals,
                            check_trivial_on_Q3=True)


# ------------------------------------------------------- Delta and lambda

def eta3(x):
    """Quadratic character of Q3^x attached to K3/Q3: eta(-1) = -1, eta(3) = 1."""
    x = Fraction(x)
    v = valuation(x, 3)
    u = x / Fraction(3) ** v
    r = (u.numerator * pow(u.denominator, -1, 3)) % 3
    return 1 if r == 1 else -1


def gauss_sum_eta():
    """tau(eta_3, psi_3') = sum_{x in F3^x} eta(x) psi_3'(x), psi_3'(x) = e^{-2 pi i x/3}."""
    total = CyclotomicValue.from_int(12, 0)
    for x in (1, 2):
        total = total + eta3(x) * mu12(4 * PSI_SIGN * x)
    return total


def delta_theta_and_lambda():
    """(lambda, Delta_theta(sqrt(-3)), Delta_theta on units).

    lambda = tau / sqrt(3), found as the fourth root of unity z with
    z * sqrt(3) = tau, where sqrt(3) = -i * (1 + 2w).
    """
    tau = gauss_sum_eta()
    sqrt_m3 = mu12(0) + 2 * mu12(4)
    sqrt3 = -mu12(3) * sqrt_m3
    lam = None
    for k in range(4):
        z = mu12(3 * k)
        if z * sqrt3 == tau:
            lam = z
    if lam is None:
        raise AssertionError("Gauss sum is not sqrt(3) times a fourth root of unity")
    # pi^3 * alpha_Theta = pi^3 * pi^-5 = pi^-2 = -1/3
    alpha = alpha_of_character(theta3_table())
    num, den = alpha.to_eisenstein_fraction()
    pi3_alpha = _as_rational(PI ** 3 * num, den)
    d_pi = eta3(pi3_alpha) * lam ** 3
    return lam, d_pi, eta3


def _as_rational(num, den):
    if num.b != 0:
        raise DomainError("not rational")
    return Fraction(num.a, den)


def delta_theta():
    lam, d_pi, _ = delta_theta_and_lambda()
    vals = [CyclotomicValue.from_int(12, eta3((g.a + g.b) % 3)) for g in GENERATORS]
    return LocalCharacterK3("Delta_theta", d_pi, vals)


def theta3_small():
    """theta_3 = Theta_3 * Delta_theta."""
    ch = theta3_table() * delta_theta()
    ch.name = "theta3"
    return ch


# ------------------------------------------------- additive character, alpha

def psi3(y):
    """psi_3(y) = exp(2 pi i * iota(y)), iota(y) = -y mod Z_3, y rational."""
    y = Fraction(y)
    den = y.denominator
    v = valuation(den, 3) if den % 3 == 0 else 0
    if v == 0:
        return CyclotomicValue.from_int(1, 1)
    m = den // 3 ** v
    n = (y.numerator * pow(m, -1, 3 ** v)) % 3 ** v
    return CyclotomicValue.root_of_unity(3 ** v, PSI_SIGN * n)


def psi_K3(num, den=1):
    """psi_3(Tr(num/den)) for num in Z[w]."""
    return psi3(Fraction(EisensteinInt.coerce(num).trace(), den))


def alpha_of_character(nu, psi_level=-1):
    """alpha with v(alpha) = -c(nu) + c(psi_E) and nu(1+u) = psi_E(alpha u)
    for v(u) >= ceil(c/2).  psi_E = psi_3 o Tr has conductor exponent -1.

    alpha = pi^{v} * w with w a unit determined modulo pi^{floor(c/2)}; the
    residues are scanned starting from 1, so the representative 1 is
    preferred when it works.
    """
    c = nu.conductor
    if c < 2:
        raise DomainError("alpha needs conductor >= 2")
    v = -c + psi_level
    det = c // 2
    lo = (c + 1) // 2
    tests = []
    for a in range(9):
        for b in range(9):
            u = EisensteinInt(a, b)
            if u and eis_valuation3(u) >= lo:
                tests.append(u)
            elif not u:
                continue
    tests = sorted(set(eis_mod_pi_power(u, c) for u in tests), key=lambda z: (z.a, z.b))
    for x in range(1, 9):
        for y in range(0, 9):
            w_unit = EisensteinInt(x, y)
            if (x + y) % 3 == 0 or eis_mod_pi_power(w_unit, max(det, 1)) != w_unit:
                continue
            cand = LocalElement("K3", v, w_unit, max(det, 1))
            num, den = cand.to_eisenstein_fraction()
            if all(nu.value(1 + u) == psi_K3(num * u, den) for u in tests):
                return cand
    raise AssertionError("no alpha found for %s" % nu.name)


def theta_chibar(p):
    """theta_3 * conj(chi_3)."""
    ch = theta3_small() * chi3_table(p).conj()
    ch.name = "theta3*conj(chi3)(p=%d)" % p
    return ch


def theta_chibar_data(p):
    """(conductor, alpha or None) of theta_3 * conj(chi_3)."""
    ch = theta_chibar(p)
    if ch.conductor < 2:
        return ch.conductor, None
    return ch.conductor, alpha_of_character(ch)


def lambda_omega(p):
    """CRT lift of the unit idele w_3 (= w mod 9, = 1 mod p)."""
    return crt_lift(W, p)
