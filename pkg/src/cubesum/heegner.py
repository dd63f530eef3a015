"""Complex-analytic side: the level 243 newform of E_9, period lattices, CM
points of discriminant -3 (9p)^2 with their class group action, Heegner
traces, L-values and the numerical Gross-Zagier check."""

import functools
import math
from fractions import Fraction

import mpmath

from .algebra import (
    DomainError, EisensteinInt, PrecisionError, QuadraticForm, _split_prime,
    form_compose, is_prime, primes_up_to, principal_form, reduced_forms,
)
from .classfield3 import crt_lift
from .curves import (
    KK, QOmega, SQRT_M3_K, an_list, canonical_height_Q, curve_E9_model,
    curve_family, elliptic_log_real, global_data, minimal_lattice,
    minimal_real_period, order_of, periods_short, point_from_z,
)
from .modaction import rho, tau as tau_exact

LEVEL = 243
E9_B = -48
MIN_IM = mpmath.mpf("0.0005")
# the unique 3-torsion cusp image: z = (2 + w)/3 * Omega_9 maps to (0, 4 sqrt(-3))
CUSP_Z = ((2, 1), 3)


def _check_p(p):
    if not is_prime(p) or p % 9 not in (4, 7):
        raise DomainError("p must be a prime congruent to 4 or 7 mod 9")


def _omega():
    return mpmath.exp(2j * mpmath.pi / 3)


# ------------------------------------------------------------ q-expansion

class QExpansion:
    """a_1..a_N of the newform attached to E_n; coeffs[0] is a dummy 0."""

    def __init__(self, label, coeffs, level):
        self.label = label
        self.coeffs = coeffs
        self.level = level

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs) - 1


_QEXP = {}


def qexp(curve=9, N=1000, cache_dir=None):
    """q-expansion of the newform of E_curve (E_9 has level 243), cached in
    memory and optionally as <cache_dir>/E<n>.csv."""
    if N > 10 ** 6:
        raise DomainError("N too large")
    hit = _QEXP.get(curve)
    if hit is not None and len(hit) >= N:
        return hit
    level = global_data(curve)["conductor"]
    q = QExpansion("E%d" % curve, an_list(curve, N, cache_dir=cache_dir), level)
    _QEXP[curve] = q
    return q


# ---------------------------------------------------------------- periods

class PeriodLattice:
    """Lattice of the Neron differential; omega is the real period."""

    def __init__(self, omega, w1, w2, prec):
        self.omega = omega
        self.w1 = w1
        self.w2 = w2
        self.prec = prec

    @property
    def tau(self):
        return self.w2 / self.w1

    def as_dict(self):
        return {"omega": mpmath.nstr(self.omega, 40),
                "w1": mpmath.nstr(self.w1, 40), "w2": mpmath.nstr(self.w2, 40),
                "prec": self.prec}


def compute_periods(curve, prec=256):
    if prec < 128:
        raise DomainError("prec must be at least 128 bits")
    w1, w2 = minimal_lattice(curve, prec=prec)
    if mpmath.im(w2 / w1) <= 0:
        raise PrecisionError("lattice basis is not oriented")
    return PeriodLattice(minimal_real_period(curve, prec=prec), w1, w2, prec)


def lattice_coords(z, w1):
    """(x, y) real with z = (x + y w) w1, for the hexagonal lattice <w1, w1 w>."""
    d = z / w1
    y = mpmath.im(d) * 2 / mpmath.sqrt(3)
    return mpmath.re(d) + y / 2, y


def lattice_distance(z, w1):
    """Distance from z to the lattice <w1, w1 w>."""
    x, y = lattice_coords(z, w1)
    dx, dy = x - mpmath.nint(x), y - mpmath.nint(y)
    return abs((dx + dy * _omega()) * w1)


def omega_period(prec=256):
    return minimal_lattice(9, prec=prec)[0]


def period_relation(p, prec=256, tol=None):
    """Omega_p Omega_3p^2 3p / Omega_9^2 = 1 and the shape of the E_9 lattice."""
    _check_p(p)
    tol = tol if tol is not None else mpmath.mpf(10) ** -20
    with mpmath.workprec(prec + 30):
        O9 = omega_period(prec)
        r = minimal_real_period(p, prec=prec) * minimal_real_period(3 * p * p, prec=prec)
        r = r * 3 * p / O9 ** 2
        O1, O2 = minimal_lattice(9, prec=prec)
        shape = abs((O1 + O2) / O1 - mpmath.mpc(0.5, mpmath.sqrt(3) / 2))
        checks = [_check("Omega_p Omega_3p2 3p / Omega_9^2 = 1", abs(r - 1), tol, "1"),
                  _check("E_9 lattice = Omega <1, (1 + sqrt(-3))/2>", shape,
                         mpmath.mpf(10) ** -30, "0")]
        return {"p": p, "prec": prec, "ratio": mpmath.nstr(r, 30),
                "Omega_9": mpmath.nstr(O9, 30), "checks": checks,
                "passed": all(c["status"] == "pass" for c in checks)}


def cusp_z(prec=256):
    """Elliptic log of (0, 4 sqrt(-3)) on the minimal lattice of E_9."""
    (a, b), d = CUSP_Z
    return (a + b * _omega()) / d * omega_period(prec)


# -------------------------------------------------------------- CM points

class CMPoint:
    """[tau, t] on X_0(243): tau is a reduced representative in K, form is
    its primitive minimal form (a, b, c) with 243 | a, and cls is the reduced
    form of the class of t in Pic(O_{9p})."""

    def __init__(self, p, tau, cls, alpha=None):
        self.p = p
        self.tau = tau
        self.cls = cls
        self.alpha = alpha
        self.form = form_of_tau(tau)

    @property
    def disc(self):
        return self.form.disc

    def tau_complex(self):
        return self.tau.to_mpc()

    def im(self):
        a, _, _ = self.form
        return mpmath.sqrt(-self.disc) / (2 * a)

    def __repr__(self):
        return "CMPoint(p=%d, form=%r, class=%r)" % (self.p, self.form, self.cls)


def form_of_tau(t):
    """Primitive (a, b, c), a > 0, with a t^2 + b t + c = 0."""
    # t = x + y sqrt(-3), x = a - b/2, y = b/2 for t = a + b w
    x = t.a - t.b / 2
    y2 = 3 * t.b * t.b / 4
    if t.b == 0:
        raise DomainError("tau must be imaginary")
    # X^2 - 2x X + (x^2 + y2)
    coeffs = [Fraction(1), -2 * x, x * x + y2]
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    g = math.gcd(math.gcd(ints[0], ints[1]), ints[2])
    return QuadraticForm(*(c // g for c in ints))


def _mobius(m, t):
    a, b, c, d = m
    return (QOmega(a) * t + QOmega(b)) / (QOmega(c) * t + QOmega(d))


def reduce_gamma0(t, N=LEVEL, span=12):
    """gamma t for gamma in Gamma_0(N) maximizing Im, then translated to
    -1/2 <= Re < 1/2.  t is an element of K in the upper half plane."""
    x = t.a - t.b / 2
    y2 = 3 * t.b * t.b / 4

    # |c t + d|^2 = (c x + d)^2 + c^2 y2 with c = N c1: a binary form in (c1, d)
    def q(v):
        c1, d = v
        c = N * c1
        return (c * x + d) ** 2 + c * c * y2

    def inner(u, v):
        return (q((u[0] + v[0], u[1] + v[1])) - q(u) - q(v)) / 2

    e1, e2 = (1, 0), (0, 1)
    while True:
        if q(e1) > q(e2):
            e1, e2 = e2, e1
        m = round(inner(e1, e2) / q(e1))
        if m == 0:
            break
        e2 = (e2[0] - m * e1[0], e2[1] - m * e1[1])
        if q(e2) >= q(e1):
            break
    best = None
    for i in range(-span, span + 1):
        for j in range(-span, span + 1):
            c1 = i * e1[0] + j * e2[0]
            d = i * e1[1] + j * e2[1]
            if c1 < 0 or (c1 == 0 and d <= 0):
                continue
            if math.gcd(N * c1, d) != 1:
                continue
            key = (q((c1, d)), c1, d)
            if best is None or key < best:
                best = key
    _, c1, d = best
    c = N * c1
    if c == 0:
        gamma = (1, 0, 0, 1)
    else:
        a = pow(d, -1, c) if c > 1 else 1
        b = (a * d - 1) // c
        gamma = (a, b, c, d)
    out = _mobius(gamma, t)
    shift = math.floor(out.a - out.b / 2 + Fraction(1, 2))
    return out - QOmega(shift), gamma


def class_disc(p):
    return -3 * (9 * p) ** 2


def class_of_prime(alpha, p):
    """Reduced form of the class of the prime (alpha) of O_K, restricted to
    O_{9p}: the ideal l Z + (f w - f r) Z with w = r mod (alpha)."""
    alpha = EisensteinInt.coerce(alpha)
    l = alpha.norm()
    if not is_prime(l) or l % 3 != 1 or l == p:
        raise DomainError("alpha must be a split prime away from 3p")
    f = 9 * p
    r = (-alpha.a * pow(alpha.b, -1, l)) % l
    b = f * (1 + 2 * r) % (2 * l)
    if b % 2 == 0:
        b += l
    D = class_disc(p)
    return QuadraticForm(l, b, (b * b - D) // (4 * l)).reduced()


def _gamma_for_prime(alpha, p):
    """Integer gamma, det l, upper triangular, with gamma Z_l^2 = rho(alpha) Z_l^2."""
    l = alpha.norm()
    R = rho(alpha, p)
    m = [int(x.numerator * pow(x.denominator, -1, l)) % l for x in R]
    u = (m[0], m[2]) if (m[0], m[2]) != (0, 0) else (m[1], m[3])
    if u[1] % l:
        return (l, u[0] * pow(u[1], -1, l) % l, 0, 1)
    return (1, 0, 0, l)


def point_for_prime(alpha, p, convention=0):
    """The CM point [tau, pi_lambda] for the prime lambda = (alpha).

    With gamma Z_l^2 = rho(pi_lambda) Z_l^2 and gamma in U_0 elsewhere,
    [tau, pi_lambda] = [gamma^-1 tau, 1].  convention=1 uses pi_lambda^-1
    (equivalently the conjugate prime) and exists only to exhibit the pin."""
    alpha = EisensteinInt.coerce(alpha)
    if convention:
        alpha = alpha.conj()
    a, b, c, d = _gamma_for_prime(alpha, p)
    t = _mobius((d, -b, -c, a), tau_exact(p))
    t, _ = reduce_gamma0(t)
    return CMPoint(p, t, class_of_prime(alpha, p), alpha)


def _split_primes(p):
    """Eisenstein primes of split norm l, l != p, in order of norm."""
    bound = 200
    seen = 0
    while True:
        for l in primes_up_to(bound):
            if l <= seen or l % 3 != 1 or l == p:
                continue
            pi = _split_prime(l)
            yield pi
            yield pi.conj()
        seen = bound
        bound *= 2


_ORBITS = {}


def heegner_orbit(p):
    """One CM point per class of Pic(O_{9p}), starting with [tau, 1]."""
    _check_p(p)
    if p in _ORBITS:
        return _ORBITS[p]
    D = class_disc(p)
    forms = reduced_forms(D)
    h = len(forms)
    if h != 3 * (p - 1):
        raise AssertionError("class number %d differs from 3(p - 1)" % h)
    t0, _ = reduce_gamma0(tau_exact(p))
    principal = principal_form(D)
    orbit = {principal: CMPoint(p, t0, principal)}
    for alpha in _split_primes(p):
        cls = class_of_prime(alpha, p)
        if cls not in orbit:
            orbit[cls] = point_for_prime(alpha, p)
            if len(orbit) == h:
                break
    out = [orbit[principal]] + [orbit[f] for f in forms if f != principal]
    _ORBITS[p] = out
    return out


def galois_act(cls, pt):
    """sigma_t applied to pt = [tau, s]: the orbit point of the class s t."""
    target = form_compose(pt.cls, cls)
    for q in heegner_orbit(pt.p):
        if q.cls == target:
            return q
    raise AssertionError("class not in orbit")


def _inverse_mod9(u):
    for x in range(9):
        for y in range(9):
            z = u * EisensteinInt(x, y)
            if z.a % 9 == 1 and z.b % 9 == 0:
                return EisensteinInt(x, y)
    raise DomainError("%s is not a unit at 3" % u)


def idele_class(t3, p):
    """Class in Pic(O_{9p}) of the idele equal to t3 at 3 and 1 elsewhere.

    pi_lambda is congruent to alpha^-1 at 3 and p modulo O_{9p}^x, so a
    prime alpha = t3^-1 mod 9, alpha = 1 mod p (a CRT lift) represents it."""
    _check_p(p)
    t3 = EisensteinInt.coerce(t3)
    base = crt_lift(_inverse_mod9(t3), p)
    m = 9 * p
    for r in range(0, 40):
        for x in range(-r, r + 1):
            for y in range(-r, r + 1):
                if max(abs(x), abs(y)) != r:
                    continue
                alpha = base + EisensteinInt(m * x, m * y)
                n = alpha.norm()
                if n % 3 == 1 and n != p and is_prime(n):
                    return class_of_prime(alpha, p), alpha
    raise AssertionError("no prime found in the class")


# ---------------------------------------------------------- modular param

class ComplexPoint:
    """z on C / Lambda_min(E_9) and (x, y) on y^2 = x^3 - 48."""

    def __init__(self, z, x, y, prec, terms=0):
        self.z = z
        self.x = x
        self.y = y
        self.prec = prec
        self.terms = terms

    def is_zero(self):
        return self.x is None

    def residual(self):
        if self.is_zero():
            return mpmath.mpf(0)
        return abs(self.y ** 2 - self.x ** 3 - E9_B)


def _q_terms(q_abs, prec):
    """Number of terms with tail sum_{n > N} 2 |q|^n < 2^-prec."""
    target = -(prec + 20) * mpmath.log(2) + mpmath.log(1 - q_abs) - mpmath.log(2)
    return int(target / mpmath.log(q_abs)) + 1


def _z_series(t, prec, terms=None):
    q = mpmath.expjpi(2 * t)
    N = terms or _q_terms(abs(q), prec)
    a = qexp(9, N)
    s = mpmath.mpc(0)
    qn = mpmath.mpc(1)
    for n in range(1, N + 1):
        qn *= q
        if a[n]:
            s += qn * a[n] / n
    return s, N


def z_to_point(z, prec=256):
    w1, w2 = periods_short(E9_B, prec)
    O1 = omega_period(prec)
    if lattice_distance(z, O1) < mpmath.mpf(2) ** (-prec // 2):
        return None, None
    x, y = point_from_z(z * w1 / O1, w1, w2)
    return x, y


# Extra symmetries of f: f(g z) = w^k f(z) + c with c = (c1 + c2 w) Omega_9.
# B and C come from the action of 1 + 3 w_3 and w_3; f o W_243 = f since the
# sign of the functional equation of E_9 is -1.
_MOVES = [
    ((1, 0, 81, 1), 2, (0, 0)),                                   # B
    ((1, 0, -81, 1), 1, (0, 0)),                                  # B^-1
    ((1, Fraction(1, 9), -27, -2), 2, (Fraction(2, 3), Fraction(1, 3))),   # C
    ((-2, Fraction(-1, 9), 27, 1), 1, (Fraction(1, 3), Fraction(-1, 3))),  # C^-1
    ((0, -1, 243, 0), 0, (0, 0)),                                 # W_243
]


def _rot(c, k):
    """w^k (c1 + c2 w) in the basis (1, w)."""
    a, b = c
    for _ in range(k % 3):
        a, b = -b, a - b
    return (a, b)


def _im2(t):
    return 3 * t.b * t.b / 4


def lift_tau(t):
    """(t', k, c) with f(t') = w^k f(t) + c and Im t' as large as the moves
    B, C, W_243 and Gamma_0(243) allow (greedy)."""
    t, _ = reduce_gamma0(t)
    k, c = 0, (Fraction(0), Fraction(0))
    while True:
        best = None
        for g, kg, cg in _MOVES:
            t2, _ = reduce_gamma0(_mobius_frac(g, t))
            if _im2(t2) > _im2(t) and (best is None or _im2(t2) > _im2(best[0])):
                best = (t2, kg, cg)
        if best is None:
            return t, k, c
        t, kg, cg = best
        ck = _rot(c, kg)
        k, c = (k + kg) % 3, (ck[0] + cg[0], ck[1] + cg[1])


def modular_param(tau, prec=256, terms=None):
    """f(tau) for f: X_0(243) -> E_9 with f(i infinity) = O.

    tau is an element of K (moved to large Im with the known symmetries of f)
    or a complex number with Im tau > MIN_IM.  The Manin constant is 1: the
    periods of 2 pi i phi(tau) d tau generate the Neron lattice of E_9."""
    with mpmath.workprec(prec + 30):
        k, c = 0, (0, 0)
        if isinstance(tau, QOmega):
            tau, k, c = lift_tau(tau)
            t = tau.to_mpc()
        else:
            t = mpmath.mpc(tau)
        if mpmath.im(t) < MIN_IM:
            raise DomainError("Im tau too small for the q-series")
        z, N = _z_series(t, prec, terms)
        if k or c[0] or c[1]:
            O1 = omega_period(prec)
            w = _omega()
            shift = (mpmath.mpf(c[0].numerator) / c[0].denominator
                     + w * mpmath.mpf(c[1].numerator) / c[1].denominator) * O1
            z = (z - shift) * w ** (-k)
        x, y = z_to_point(z, prec)
    return ComplexPoint(z, x, y, prec, N)


_ZCACHE = {}


def cm_value(pt, prec=256):
    key = (pt.tau, prec)
    if key not in _ZCACHE:
        _ZCACHE[key] = modular_param(pt.tau, prec).z
    return _ZCACHE[key]


# ------------------------------------------------------ Galois relations

def _check(name, residual, tol, expected=None):
    ok = residual < tol
    return {"check": name, "status": "pass" if ok else "fail",
            "computed": mpmath.nstr(residual, 5), "expected": expected,
            "tolerance": mpmath.nstr(tol, 3)}


def _best_rotation(z1, z0, shift, O1):
    """k and residual minimizing dist(z1 - w^k z0 - shift, Lambda)."""
    best = None
    for k in range(3):
        r = lattice_distance(z1 - _omega() ** k * z0 - shift, O1)
        if best is None or r < best[1]:
            best = (k, r)
    return best


def verify_galois_relations(p, prec=256, tol=None):
    """Numerical check of P0^sigma relations through elliptic logarithms."""
    _check_p(p)
    tol = tol if tol is not None else mpmath.mpf(10) ** -20
    with mpmath.workprec(prec + 30):
        O1 = omega_period(prec)
        zT = cusp_z(prec)
        w = _omega()
        z0 = cm_value(heegner_orbit(p)[0], prec)
        checks = []
        report = {"p": p, "prec": prec, "checks": checks}

        cls13, alpha13 = idele_class(EisensteinInt(1, 3), p)
        z13 = cm_value(galois_act(cls13, heegner_orbit(p)[0]), prec)
        checks.append(_check("sigma(1+3w_3): f = [w^2] f(tau)",
                             lattice_distance(z13 - w * w * z0, O1), tol, "0"))
        alt = point_for_prime(alpha13, p, convention=1)
        k_alt, _ = _best_rotation(cm_value(alt, prec), z0, 0, O1)
        report["idele_convention"] = {
            "rule": "[tau, pi_lambda] = [gamma^-1 tau, 1], gamma Z_l^2 = rho(pi_lambda) Z_l^2",
            "pinned_by": "sigma(1+3w_3) acts as [w^2]",
            "other_convention_gives": "[w^%d]" % k_alt,
        }

        clsw, _ = idele_class(EisensteinInt(0, 1), p)
        zw = cm_value(galois_act(clsw, heegner_orbit(p)[0]), prec)
        k = 2 if p % 9 == 4 else 1
        checks.append(_check("sigma(w_3): f = [w^%d] f(tau) + (0, 4 sqrt(-3))" % k,
                             lattice_distance(zw - w ** k * z0 - zT, O1), tol, "0"))
        if p % 9 == 7:
            e = (p - 7) // 9 % 3
            checks.append(_check("conj f(tau) = [w^%d] f(tau) - (0, 4 sqrt(-3))" % e,
                                 lattice_distance(mpmath.conj(z0) - w ** e * z0 + zT, O1),
                                 tol, "0"))
        # the cusp point itself
        x, y = z_to_point(zT, prec)
        checks.append(_check("z_T maps to (0, 4 sqrt(-3))",
                             abs(x) + abs(y - 4 * mpmath.sqrt(3) * 1j), tol, "0"))
        E9 = curve_E9_model()
        T = E9.point(0, 4 * SQRT_M3_K, KK)
        exact = order_of(T) == 3
        checks.append({"check": "(0, 4 sqrt(-3)) has order 3 over K",
                       "status": "pass" if exact else "fail",
                       "computed": order_of(T), "expected": 3, "tolerance": None})
        report["cusp_image"] = "(0, 4*sqrt(-3))"
        report["passed"] = all(c["status"] == "pass" for c in checks)
    return report


def cusp_sign_check(prec=256):
    """Phi(C) P - [w^2] P for a generic P: the image of the cusp [1/9]."""
    with mpmath.workprec(prec + 30):
        O1 = omega_period(prec)
        z = QOmega(Fraction(1, 7), Fraction(1, 50))
        zC = modular_param(_mobius_frac((1, Fraction(1, 9), -27, -2), z), prec).z
        z0 = modular_param(z, prec).z
        d = zC - _omega() ** 2 * z0
        x, y = lattice_coords(d, O1)
        return (int(mpmath.nint(3 * x)) % 3, int(mpmath.nint(3 * y)) % 3)


def _mobius_frac(m, t):
    a, b, c, d = (Fraction(x) for x in m)
    return (QOmega(a) * t + QOmega(b)) / (QOmega(c) * t + QOmega(d))


# ---------------------------------------------------------------- L-values

@functools.lru_cache(maxsize=None)
def _lsum(n, order, sign, t, prec):
    N = global_data(n)["conductor"]
    with mpmath.workprec(prec + 30):
        t = Fraction(t)
        t = mpmath.mpf(t.numerator) / t.denominator
        c = 2 * mpmath.pi / mpmath.sqrt(N)
        tmin = min(t, 1 / t)
        M = int(((prec + 30) * mpmath.log(2)) / (c * tmin)) + 2
        a = an_list(n, M)
        s = mpmath.mpf(0)
        lt = mpmath.log(t)
        for k in range(1, M + 1):
            if not a[k]:
                continue
            x1, x2 = c * k * t, c * k / t
            if order == 0:
                s += mpmath.mpf(a[k]) / k * (mpmath.exp(-x1) + sign * mpmath.exp(-x2))
            else:
                s += mpmath.mpf(a[k]) / k * (mpmath.e1(x1) + mpmath.e1(x2)
                                             + lt * (mpmath.exp(-x1) - mpmath.exp(-x2)))
        return s


def root_number(n, prec=128):
    """The sign of the functional equation of E_n, read off from which sign
    makes the order 0 sum independent of the splitting parameter t."""
    vals = {}
    for s in (1, -1):
        a = _lsum(n, 0, s, Fraction(11, 10), prec)
        b = _lsum(n, 0, s, Fraction(13, 10), prec)
        vals[s] = abs(a - b)
    tol = mpmath.mpf(10) ** -20
    good = [s for s in (1, -1) if vals[s] < tol]
    if len(good) != 1:
        if vals[1] < tol and vals[-1] < tol:
            return -1  # both flat only when the sum vanishes: odd sign
        raise PrecisionError("root number undetermined")
    return good[0]


def lvalue(n, order, prec=256, sign=None, t=1):
    """L(1, E_n) (order 0) or L'(1, E_n) (order 1).

    t = 1 gives the symmetric sums 2 sum a_k/k exp(-2 pi k/sqrt N) and
    2 sum a_k/k E_1(2 pi k/sqrt N); other t are a self-test."""
    if order not in (0, 1):
        raise DomainError("order must be 0 or 1")
    sign = root_number(n) if sign is None else sign
    if (order == 0) != (sign == 1):
        raise DomainError("sign %+d does not match order %d" % (sign, order))
    return _lsum(n, order, sign, t, prec)


# ------------------------------------------------------------ traces, GZ

def _cube_class(pt, m):
    """Is m a cube modulo the prime representing pt's class."""
    if pt.alpha is None:
        return True
    l = pt.alpha.norm()
    return pow(m, (l - 1) // 3, l) == 1


def trace_points(p, m_list):
    """Orbit points whose class fixes the cube roots of every m in m_list."""
    return [pt for pt in heegner_orbit(p) if all(_cube_class(pt, m) for m in m_list)]


def _sum_z(points, prec):
    return mpmath.fsum(cm_value(pt, prec) for pt in points)


def _ep_generator(p):
    from .bsd import generator
    return generator(p)


class Recognition:
    """z_p(R) = beta z_p(P) + (r1 + r2 w) w1 with beta = b1 + b2 w in O_K."""

    def __init__(self, beta, torsion, residual):
        self.beta = beta
        self.torsion = torsion
        self.residual = residual

    def as_dict(self):
        return {"beta": str(self.beta), "norm_beta": self.beta.norm(),
                "torsion": [str(x) for x in self.torsion],
                "residual": mpmath.nstr(self.residual, 5)}


def recognize(z9, p, prec=256, maxcoeff=10 ** 4):
    """Write the image of z9 (minimal lattice of E_9) in E_p(K) (x) Q in
    terms of the generator P of E_p(Q); None if no relation is found."""
    with mpmath.workprec(prec + 30):
        w1s, _ = periods_short(E9_B, prec)
        zs = z9 * w1s / omega_period(prec)
        zp = zs / mpmath.cbrt(3 * p)
        E = curve_family(p)
        P = _ep_generator(p)
        wp1, _ = periods_short(E.B, prec)
        tP = elliptic_log_real(P.x, P.y, E.B, prec) / wp1
        X, Y = lattice_coords(zp, wp1)
        coeffs, tors = [], []
        with mpmath.workprec(prec // 2):
            for v in (X, Y):
                v = v - mpmath.floor(v)
                if v < mpmath.eps * 2 ** 20 or 1 - v < mpmath.eps * 2 ** 20:
                    coeffs.append(0)
                    tors.append(Fraction(0))
                    continue
                rel = mpmath.pslq([v, tP, 1], maxcoeff=maxcoeff, maxsteps=10 ** 5)
                if rel is None or rel[0] == 0 or rel[1] % rel[0]:
                    return None
                coeffs.append(-rel[1] // rel[0])
                tors.append(Fraction(-rel[2], rel[0]) % 1)
        b1, b2 = coeffs
        res = abs(X - b1 * tP - tors[0] - mpmath.nint(X - b1 * tP - tors[0]))
        res += abs(Y - b2 * tP - tors[1] - mpmath.nint(Y - b2 * tP - tors[1]))
        # (b1 + b2 w) acting on a real z gives coordinates (b1 t, b2 t)
        return Recognition(EisensteinInt(b1, b2), tors, res)


_HEEGNER = {}


def heegner_points(p, prec=256):
    """Elliptic logs of R1 = Tr_{H_9p/L_(3,p)} P0 and R2 = Tr_{H_9p/L_(3p)} P0
    and their recognition in E_p(K) (x) Q."""
    _check_p(p)
    key = (p, prec)
    if key not in _HEEGNER:
        with mpmath.workprec(prec + 30):
            R1_pts = trace_points(p, [3, p])
            R2_pts = trace_points(p, [3 * p])
            zR1 = _sum_z(R1_pts, prec)
            zR2 = _sum_z(R2_pts, prec)
            _HEEGNER[key] = {
                "R1_points": R1_pts, "R2_points": R2_pts, "zR1": zR1, "zR2": zR2,
                "R1": recognize(zR1, p, prec), "R2": recognize(zR2, p, prec),
            }
    return _HEEGNER[key]


def _status(ok):
    return "pass" if ok else "fail"


def gz_check(p, prec=256, tol_ratio=1e-8, tol_height=1e-10):
    """L'(1,E_p) L(1,E_3p^2) / (Omega_p Omega_3p^2) against 2^a 9 h(R)."""
    _check_p(p)
    if p not in (7, 13):
        raise DomainError("gz_check is run at p = 7 and 13")
    alpha = 0 if p % 9 == 4 else -1
    checks = []
    rep = {"p": p, "prec": prec, "alpha": alpha, "checks": checks}
    with mpmath.workprec(prec + 30):
        L1 = lvalue(p, 1, prec)
        L0 = lvalue(3 * p * p, 0, prec)
        Op = minimal_real_period(p, prec=prec)
        O3 = minimal_real_period(3 * p * p, prec=prec)
        lhs = L1 * L0 / (Op * O3)
        orbit = heegner_orbit(p)
        data = heegner_points(p, prec)
        R1_pts, R2_pts = data["R1_points"], data["R2_points"]
        rep.update({
            "L1_Ep": mpmath.nstr(L1, 30), "L_E3p2": mpmath.nstr(L0, 30),
            "Omega_p": mpmath.nstr(Op, 30), "Omega_3p2": mpmath.nstr(O3, 30),
            "lhs": mpmath.nstr(lhs, 30), "orbit_size": len(orbit),
            "R1_terms": len(R1_pts), "R2_terms": len(R2_pts),
            "z_R1": mpmath.nstr(data["zR1"], 30), "z_R2": mpmath.nstr(data["zR2"], 30),
        })
        checks.append({"check": "orbit size = h(O_9p)", "status": _status(len(orbit) == 3 * (p - 1)),
                       "computed": len(orbit), "expected": 3 * (p - 1), "tolerance": None})
        checks.append({"check": "[H_9p : L_(3,p)] = (p-1)/3",
                       "status": _status(len(R1_pts) == (p - 1) // 3),
                       "computed": len(R1_pts), "expected": (p - 1) // 3, "tolerance": None})
        rec1, rec2 = data["R1"], data["R2"]
        P = _ep_generator(p)
        hP = canonical_height_Q(P, prec)
        rep["h_P"] = mpmath.nstr(hP, 30)
        checks.extend(period_relation(p, prec)["checks"])
        if rec1 is None or rec2 is None:
            rep["recognized"] = False
            checks.append({"check": "recognition of R1, R2", "status": "fail",
                           "computed": None, "expected": "beta in O_K", "tolerance": None})
            rep["passed"] = False
            return rep
        rep["recognized"] = True
        rep["R1"] = rec1.as_dict()
        rep["R2"] = rec2.as_dict()
        h1 = rec1.beta.norm() * hP
        h2 = rec2.beta.norm() * hP
        rep["h_R1"] = mpmath.nstr(h1, 30)
        rep["h_R2"] = mpmath.nstr(h2, 30)
        ratio = lhs / (mpmath.mpf(2) ** alpha * 9 * h1)
        rep["ratio"] = mpmath.nstr(ratio, 30)
        checks.append(_check("GZ ratio = 1", abs(ratio - 1), mpmath.mpf(tol_ratio), "1"))
        hr = h2 / h1
        rep["h_R2_over_h_R1"] = mpmath.nstr(hr, 30)
        checks.append(_check("h(R2) = 9 h(R1)", abs(hr - 9), mpmath.mpf(tol_height), "9"))
        checks.append(_check("recognition residual", rec1.residual + rec2.residual,
                             mpmath.mpf(10) ** -30, "0"))
        # R2^s' for s' moving the cube roots of 3p
        sig = next(pt for pt in orbit if not _cube_class(pt, 3 * p))
        zs = mpmath.fsum(cm_value(galois_act(sig.cls, q), prec) for q in R2_pts)
        O1 = omega_period(prec)
        best = None
        for k in (1, 2):
            x, y = lattice_coords(9 * (zs - _omega() ** k * data["zR2"]), O1)
            r = abs(x - mpmath.nint(x)) + abs(y - mpmath.nint(y))
            if best is None or r < best[1]:
                best = (k, r)
        k, r = best
        pairing = mpmath.re(_omega() ** k)
        rep["R2_sigma_prime"] = "[w^%d] R2 + torsion" % k
        rep["pairing_over_hK"] = mpmath.nstr(pairing, 10)
        checks.append(_check("<R2, R2^s'> = -1/2 h_K(R2)", abs(pairing + mpmath.mpf(1) / 2) + r,
                             mpmath.mpf(10) ** -20, "-1/2"))
        rep["passed"] = all(c["status"] == "pass" for c in checks)
    return rep
