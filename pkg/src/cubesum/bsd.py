"""The 3-part of BSD for E_p and E_{3p^2}: Selmer bounds from 3-isogeny
descent data, Tamagawa and torsion inputs, and the rational S whose
3-adic valuation must vanish."""

from fractions import Fraction

import mpmath

from .algebra import DomainError, is_prime, valuation
from .curves import (
    add, canonical_height_Q, cube_sum_to_point, curve_family, elliptic_log_real,
    global_data, periods_short, point_from_z, scalar_mul, search_points,
    torsion_subgroup,
)

# phi-Selmer group orders for the 3-isogenies E_n -> E'_n: y^2 = x^3 + (4n)^2
# (Satge, Theorem 2.9), valid for p = 4, 7 mod 9 with 3 not a cube mod p.
SATGE = {
    "Sel_phi(E_p)": 3,
    "Sel_phi'(E'_p)": 3,
    "Sel_phi(E_3p2)": 3,
    "Sel_phi'(E'_3p2)": 1,
}
SATGE_SOURCE = "Satge, Theorem 2.9"
MAX_DEN = 10 ** 4
MAX_RESIDUAL = 1e-6


def cube_test(p):
    """True if 3 is not a cube mod p (the standing hypothesis)."""
    return pow(3, (p - 1) // 3, p) != 1


def _check_p(p):
    if not is_prime(p) or p % 9 not in (4, 7):
        raise DomainError("p must be a prime congruent to 4 or 7 mod 9")
    if not cube_test(p):
        raise DomainError("3 is a cube mod %d: outside the hypothesis" % p)


def selmer_order(sel_phi, sel_phi_dual, kernel, sha_quotient=1):
    """|Sel_3| = |Sel_phi| |Sel_phi'| / (|A'[phi'](F)/phi A[3](F)| |Sha quotient|)."""
    num = sel_phi * sel_phi_dual
    den = kernel * sha_quotient
    if num % den:
        raise DomainError("Selmer ledger is not integral")
    return num // den


def _log3(n):
    k = 0
    while n % 3 == 0:
        n //= 3
        k += 1
    if n != 1:
        raise DomainError("not a power of 3")
    return k


class SelmerLedger:
    def __init__(self, p, entries, kernels, dims):
        self.p = p
        self.entries = entries
        self.kernels = kernels
        self.dims = dims

    def as_dict(self):
        return {"p": self.p, "source": SATGE_SOURCE, "entries": dict(self.entries),
                "kernels": dict(self.kernels), "dims": dict(self.dims)}


def selmer_bound(p):
    """dim Sel_3(E_p) <= 1 and dim Sel_3(E_3p^2) = 0, and the Sha conclusions."""
    _check_p(p)
    # E_p[3](Q) and E_3p^2[3](Q) are trivial; |E'[phi'](Q)| = 3 for both
    kernels = {"E'_p[phi']/phi E_p[3]": 3, "E'_3p2[phi']/phi E_3p2[3]": 3}
    for n in (p, 3 * p * p):
        if torsion_subgroup(curve_family(n))["order"] % 3 == 0:
            raise AssertionError("unexpected rational 3-torsion on E_%d" % n)
    # the Sha quotient is at least 1, so these are upper bounds
    sel_p = selmer_order(SATGE["Sel_phi(E_p)"], SATGE["Sel_phi'(E'_p)"],
                         kernels["E'_p[phi']/phi E_p[3]"])
    sel_3p2 = selmer_order(SATGE["Sel_phi(E_3p2)"], SATGE["Sel_phi'(E'_3p2)"],
                           kernels["E'_3p2[phi']/phi E_3p2[3]"])
    dims = {"Sel_3(E_p) <=": _log3(sel_p), "Sel_3(E_3p2) =": _log3(sel_3p2)}
    if dims["Sel_3(E_p) <="] > 1 or dims["Sel_3(E_3p2) ="] != 0:
        raise AssertionError("Selmer bound violated")
    # rank E_p(Q) = 1, rank E_3p2(Q) = 0: E(Q)/3E(Q) already fills Sel_3
    dims["Sha(E_p)[3]"] = max(0, dims["Sel_3(E_p) <="] - 1)
    dims["Sha(E_3p2)[3]"] = dims["Sel_3(E_3p2) ="]
    return SelmerLedger(p, SATGE, kernels, dims)


# -------------------------------------------------------------- generator

def generator(p):
    """Generator of E_p(Q) modulo torsion: the cube-sum point at p = 7, else
    the smallest point found by a bounded search."""
    E = curve_family(p)
    if p == 7:
        return cube_sum_to_point(7, 2, -1)
    pts = search_points(E, 400, 12)
    if not pts:
        raise DomainError("no generator found for E_%d" % p)
    pts.sort(key=lambda P: (Fraction(P.x).denominator, abs(Fraction(P.x).numerator), P.y < 0))
    return pts[0]


def third_points(P, prec=128):
    """Real points Q with 3Q = P whose coordinates look rational with small
    height; each candidate is verified exactly."""
    E = P.curve
    w1, w2 = periods_short(E.B, prec)
    z = elliptic_log_real(P.x, P.y, E.B, prec)
    found = []
    for k in range(3):
        x, y = point_from_z((z + k * w1) / 3, w1, w2)
        xr = Fraction(str(mpmath.nstr(mpmath.re(x), 40))).limit_denominator(10 ** 6)
        yr = Fraction(str(mpmath.nstr(mpmath.re(y), 40))).limit_denominator(10 ** 9)
        if E.contains(xr, yr) and scalar_mul(3, E.point(xr, yr)) == P:
            found.append(E.point(xr, yr))
    return found


def not_three_divisible(P, torsion=None):
    """P is not in 3 E(Q) + torsion (torsion is trivial on E_p)."""
    torsion = torsion or [P.curve.zero()]
    return all(not third_points(add(P, T)) for T in torsion)


# ---------------------------------------------------------------- report

def recognize_rational(x, max_den=MAX_DEN, max_residual=MAX_RESIDUAL):
    """Nearest rational with denominator <= max_den, or None."""
    x = mpmath.mpf(x)
    cand = Fraction(str(mpmath.nstr(x, 40))).limit_denominator(max_den)
    res = abs(x - mpmath.mpf(cand.numerator) / cand.denominator)
    if res >= max_residual:
        return None, res
    return cand, res


def bsd3_report(p, prec=256, heegner=True):
    """S = L'(1,E_p) L(1,E_3p^2) |tors|^2 / (Omega Omega h(P) prod c), its
    rational recognition and ord_3."""
    from . import heegner as hg
    _check_p(p)
    ledger = selmer_bound(p)
    checks = []
    rep = {"p": p, "prec": prec, "selmer": ledger.as_dict(), "checks": checks}
    with mpmath.workprec(prec + 30):
        P = generator(p)
        hP = canonical_height_Q(P, prec)
        L1 = hg.lvalue(p, 1, prec)
        L0 = hg.lvalue(3 * p * p, 0, prec)
        Op = hg.minimal_real_period(p, prec=prec)
        O3 = hg.minimal_real_period(3 * p * p, prec=prec)
        gp, g3 = global_data(p), global_data(3 * p * p)
        tp = torsion_subgroup(curve_family(p))["order"]
        t3 = torsion_subgroup(curve_family(3 * p * p))["order"]
        c = gp["tamagawa_product"] * g3["tamagawa_product"]
        S = L1 * L0 * tp ** 2 * t3 ** 2 / (Op * O3 * hP * c)
        rat, res = recognize_rational(S)
        rep.update({
            "P": [str(P.x), str(P.y)], "h_P": mpmath.nstr(hP, 30),
            "L1_Ep": mpmath.nstr(L1, 30), "L_E3p2": mpmath.nstr(L0, 30),
            "Omega_p": mpmath.nstr(Op, 30), "Omega_3p2": mpmath.nstr(O3, 30),
            "tamagawa": {"E_p": {str(ld.prime): ld.tamagawa for ld in gp["local"]},
                         "E_3p2": {str(ld.prime): ld.tamagawa for ld in g3["local"]}},
            "torsion": {"E_p": tp, "E_3p2": t3},
            "S": mpmath.nstr(S, 30), "S_rational": None if rat is None else str(rat),
            "S_residual": mpmath.nstr(res, 5),
        })
        checks.append({"check": "S is rational", "status": "pass" if rat is not None else "fail",
                       "computed": rep["S_rational"], "expected": "denominator <= %d" % MAX_DEN,
                       "tolerance": MAX_RESIDUAL})
        m = 0 if p % 9 == 4 else 1
        checks.append({"check": "prod c = 2^m 9", "status": "pass" if c == 2 ** m * 9 else "fail",
                       "computed": c, "expected": 2 ** m * 9, "tolerance": None})
        nd = not_three_divisible(P)
        checks.append({"check": "P not in 3E(Q)", "status": "pass" if nd else "fail",
                       "computed": nd, "expected": True, "tolerance": None})
        if rat is not None:
            ord3 = valuation(rat, 3)
            rep["ord3_S"] = ord3
            checks.append({"check": "ord_3(S) = 0", "status": "pass" if ord3 == 0 else "fail",
                           "computed": ord3, "expected": 0, "tolerance": None})
        if heegner and p in (7, 13):
            data = hg.heegner_points(p, prec)
            if data["R1"] is not None:
                ratio = data["R1"].beta.norm()
                i = 0 if p % 9 == 4 else -2
                rep["hR_over_hP"] = str(ratio)
                rep["ord3_hR_over_hP"] = valuation(Fraction(ratio), 3)
                pred = Fraction(2) ** i * ratio
                ok = rat is not None and pred == rat
                checks.append({"check": "S = 2^i h(R)/h(P)", "status": "pass" if ok else "fail",
                               "computed": str(pred), "expected": rep["S_rational"],
                               "tolerance": None})
        rep["passed"] = all(ch["status"] == "pass" for ch in checks)
    return rep
