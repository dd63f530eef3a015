import itertools
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from cubesum.algebra import DomainError, EisensteinInt, primes_up_to, sqrt_mod_prime
from cubesum.curves import (
    GF, KK, QOmega, SQRT_M3_K, an_list, ap_cm, ap_naive, canonical_height_Q,
    cm_action, count_points_ap, cube_sum_to_point, curve_E9_model, curve_family,
    elliptic_log_real, global_data, local_data, minimal_lattice,
    naive_height_limit, order_of, periods_short, point_from_z, prime_of_K,
    real_period_beta, reduce_at_prime_of_K, scalar_mul, search_points, set_D,
    torsion_reduction_set, torsion_subgroup, CurveE,
)

E1 = curve_family(1)
W = QOmega(0, 1)


def points_over(p, B):
    F = GF(p)
    E = CurveE(B)
    pts = [E.zero(F)]
    for x in range(p):
        for y in range(p):
            if (y * y - x ** 3 - B) % p == 0:
                pts.append(E.point(x, y, F))
    return pts


def test_identity_and_inverse():
    P = E1.point(12, 36)
    assert P + E1.zero() == P
    assert (P + E1.point(12, -36)).is_zero()
    assert scalar_mul(3, P).is_zero()


@pytest.mark.parametrize("p", [7, 13, 31])
def test_group_axioms_exhaustive(p):
    pts = points_over(p, -432)
    assert len(pts) == p + 1 - count_points_ap(-432, p)
    for P, Q in itertools.product(pts, repeat=2):
        assert P + Q == Q + P
        assert (P + Q) - Q == P
    rng = random.Random(p)
    for _ in range(200):
        P, Q, R = (rng.choice(pts) for _ in range(3))
        assert (P + Q) + R == P + (Q + R)


def test_field_mismatch():
    P = E1.point(12, 36)
    Q = E1.lift_to(P, KK)
    with pytest.raises(DomainError):
        P + Q


def test_cm_examples():
    P = E1.point(12, -36, KK)
    assert cm_action(EisensteinInt(0, 1), P) == E1.point(12 * W, -36, KK)
    assert cm_action(-EisensteinInt(0, 1), P) == E1.point(12 * W, 36, KK)
    assert cm_action(EisensteinInt(1, 2), P) == E1.point(0, -12 * SQRT_M3_K, KK)


def test_cm_needs_omega():
    with pytest.raises(DomainError):
        cm_action(EisensteinInt(0, 1), E1.point(12, 36))


def test_cm_ring_action_f13():
    pts = points_over(13, -432)
    rng = random.Random(5)
    for _ in range(60):
        u = EisensteinInt(rng.randint(-7, 7), rng.randint(-7, 7))
        v = EisensteinInt(rng.randint(-7, 7), rng.randint(-7, 7))
        if u.norm() > 50 or v.norm() > 50:
            continue
        P = rng.choice(pts)
        assert cm_action(u * v, P) == cm_action(u, cm_action(v, P))
        assert cm_action(u + v, P) == cm_action(u, P) + cm_action(v, P)


@pytest.mark.parametrize("n", [1, 7, 9, 147])
def test_ap_two_methods(n):
    B = -432 * n * n
    for l in primes_up_to(1000):
        if l in (2, 3) or B % l == 0:
            continue
        a = ap_naive(B, l)
        assert a == ap_cm(B, l)
        assert a * a <= 4 * l
        assert (a == 0) == (l % 3 == 2)


def test_ap_e9_model_and_errors():
    assert ap_naive(-48, 7) == ap_cm(-48, 7)
    assert ap_naive(-48, 13) == ap_cm(-48, 13)
    assert ap_cm(-48, 11) == 0
    with pytest.raises(DomainError):
        count_points_ap(-432 * 49, 7)


def test_an_list_structure(tmp_path):
    a = an_list(7, 2000, cache_dir=str(tmp_path))
    assert a[1] == 1
    B = -432 * 49
    for l in primes_up_to(200):
        if l % 3 == 1 and l != 7:
            assert a[l] == ap_naive(B, l)
    for m, n in [(4, 13), (13, 19), (25, 31), (12, 37)]:
        assert a[m * n] == a[m] * a[n]
    assert a[13 * 13] == a[13] ** 2 - 13
    assert an_list(7, 2000, cache_dir=str(tmp_path)) == a
    (tmp_path / "E7.csv").write_text("garbage\n")
    assert an_list(7, 2000, cache_dir=str(tmp_path)) == a


@pytest.mark.parametrize("p", [7, 13, 43, 31, 61, 67, 79, 97])
def test_tamagawa_family(p):
    assert local_data(p, p).tamagawa == 3
    c3 = local_data(p, 3).tamagawa
    assert c3 == (1 if p % 9 == 4 else 2)
    assert local_data(3 * p * p, p).tamagawa == 3
    for ld in global_data(3 * p * p)["local"]:
        if ld.prime != p:
            assert ld.tamagawa == 1


def test_conductors():
    assert global_data(9)["conductor"] == 243
    assert global_data(B=-48)["conductor"] == 243
    assert global_data(1)["conductor"] == 27
    assert local_data(9, 3).conductor_exponent == 5


def test_torsion():
    t1 = torsion_subgroup(E1)
    assert t1["order"] == 3
    assert E1.point(12, 36) in t1["points"]
    assert torsion_subgroup(curve_family(7))["order"] == 1
    assert torsion_subgroup(curve_family(13))["order"] == 1
    assert torsion_subgroup(curve_family(147))["order"] == 1
    assert torsion_subgroup(curve_E9_model())["order"] == 1
    # the cusp image (0, 4 sqrt(-3)) is 3-torsion over K but not rational
    E9 = curve_E9_model()
    assert order_of(E9.point(0, 4 * SQRT_M3_K, KK)) == 3


def test_prime_of_K():
    assert prime_of_K(7) == 2
    with pytest.raises(DomainError):
        prime_of_K(11)
    with pytest.raises(DomainError):
        prime_of_K(61)  # 3 is a cube mod 61


def test_reduction_example():
    P = E1.point(12 * W, -36, KK)
    R = reduce_at_prime_of_K(P, 7)
    assert (int(R.x), int(R.y)) == (24 % 7, -36 % 7)
    with pytest.raises(DomainError):
        reduce_at_prime_of_K(E1.point(Fraction(12, 49) * 49, -36, KK), 11)


SPLIT = [p for p in primes_up_to(200) if p % 3 == 1 and pow(3, (p - 1) // 3, p) != 1]


@pytest.mark.parametrize("p", SPLIT)
def test_torsion_reduction_is_D(p):
    assert torsion_reduction_set(p) == set_D(p)


@pytest.mark.parametrize("p", [p for p in primes_up_to(200) if p % 3 == 1])
def test_cusp_3_torsion_mod_p(p):
    F = GF(p)
    s = sqrt_mod_prime(p - 3, p)
    P = E1.point(0, 12 * s, F)
    assert not P.is_zero() and scalar_mul(3, P).is_zero()


def test_periods():
    w1, w2 = periods_short(-432 * 49)
    assert abs(w2 / w1 - mpmath.exp(2j * mpmath.pi / 3)) < mpmath.mpf(10) ** -60
    assert abs(w1 - real_period_beta(-432 * 49)) < mpmath.mpf(10) ** -60
    x, y = point_from_z(w1 / 3, w1, w2)
    assert abs(y * y - x ** 3 + 432 * 49) < mpmath.mpf(10) ** -50
    assert abs(mpmath.im(x)) < mpmath.mpf(10) ** -50


def test_e9_lattice_shape():
    O1, O2 = minimal_lattice(9)
    assert abs(O2 / O1 - mpmath.exp(2j * mpmath.pi / 3)) < mpmath.mpf(10) ** -30
    # (1 + sqrt(-3))/2 = 1 + w is another basis vector of the same lattice
    assert abs((O1 + O2) / O1 - mpmath.mpc(0.5, mpmath.sqrt(3) / 2)) < mpmath.mpf(10) ** -30


def test_elliptic_log_roundtrip():
    E7 = curve_family(7)
    w1, w2 = periods_short(E7.B)
    z = elliptic_log_real(84, 756, E7.B)
    x, y = point_from_z(z, w1, w2)
    assert abs(x - 84) < mpmath.mpf(10) ** -60
    assert abs(y - 756) < mpmath.mpf(10) ** -60


def test_heights():
    E7 = curve_family(7)
    P = cube_sum_to_point(7, 2, -1)
    assert P == E7.point(84, 756)
    h = canonical_height_Q(P)
    h2 = canonical_height_Q(P, method="sigma")
    assert abs(h - h2) < mpmath.mpf(10) ** -20
    assert abs(canonical_height_Q(P + P) - 4 * h) < mpmath.mpf(10) ** -15
    assert abs(canonical_height_Q(scalar_mul(3, P)) - 9 * h) < mpmath.mpf(10) ** -15
    assert abs(naive_height_limit(P, 6) - h) < 0.01
    assert canonical_height_Q(E1.point(12, 36)) == 0


def test_search_points_e13():
    pts = search_points(curve_family(13), 100, 1)
    assert curve_family(13).point(52, 260) in pts


@settings(max_examples=40, deadline=None)
@given(st.integers(-30, 30), st.integers(-30, 30))
def test_qomega_field(a, b):
    x = QOmega(a, b)
    if x:
        assert x * (1 / x) == QOmega(1)
    assert x * x.conj() == QOmega(x.norm())
