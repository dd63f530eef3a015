import random
from fractions import Fraction

import pytest

from cubesum.algebra import DomainError, EisensteinInt, Mat2, primes_up_to
from cubesum.modaction import (
    A, AdelicMat, B, C, W, det_component, displayed_entries, eigen_check,
    eps_finite, identities, local_element, member, normalizer_check, rho,
    rho_omega, tau_complex, verify_modular_action, w_matrix,
)

ADMISSIBLE = [p for p in primes_up_to(1000) if p % 9 in (4, 7)]


def test_member_examples():
    assert member(Mat2.identity())[0] and member(Mat2.identity(), "V")[0]
    ok, why = member(B)
    assert not ok and "valuation 4" in why
    assert member(Mat2(1, 1, 243, 1))[0]
    assert member(Mat2(1, 1, 243, 1), "V")[0]
    assert member(Mat2(1, 1, 243, 2))[0]
    ok, why = member(Mat2(1, 1, 243, 2), "V")
    assert not ok and "differ mod 3" in why
    assert not member(Mat2(1, Fraction(1, 3), 243, 1))[0]
    assert not member(Mat2(3, 0, 0, 1))[0]
    with pytest.raises(DomainError):
        member(Mat2.identity(), "X")


def test_V_inside_U0_random():
    rng = random.Random(1)
    for _ in range(500):
        a, b, c, d = (rng.randint(-50, 50) for _ in range(4))
        M = Mat2(a, b, 243 * c if rng.random() < 0.7 else c, d)
        if M.det() == 0:
            continue
        if member(M, "V")[0]:
            assert member(M)[0]


def test_rho_p7_display():
    r = rho_omega(7)
    p = Fraction(7)
    assert r == Mat2(22 + Fraction(36, 7), -4 * p / 9 - 2 - Fraction(9, 7),
                     63 + 36 + Fraction(144, 7), -14 - 9 - Fraction(36, 7))
    assert r ** 3 == Mat2.identity()
    assert r.trace() == -1 and r.det() == 1


@pytest.mark.parametrize("p", ADMISSIBLE)
def test_verify_modular_action(p):
    report = verify_modular_action(p)
    assert all(c["holds"] for c in report), [c for c in report if not c["holds"]]
    assert eigen_check(p, EisensteinInt(2, -5))
    assert tau_complex(p).imag > 0


def test_displayed_entry_p13():
    disp = displayed_entries(13)
    assert disp["B(1+3w)A"].a == 60 * 13 + Fraction(837, 13) + 214
    prods = dict(identities(13))
    assert prods["B(1+3w)A"].at(3) == disp["B(1+3w)A"]
    assert prods["C w A^2"].at(3) == disp["C w A^2"]
    assert member(prods["C w A^2"], "V", all_places=True)[0]


def test_p7_w_eps_case():
    names = [n for n, _ in identities(7)]
    assert "BC w A^2" in names and "BC^2 w eps A^2" in names
    assert "C^2 w eps A^2" in [n for n, _ in identities(97)]  # (97-7)/9 = 10 = 1 mod 3


def test_literal_A_squared_is_not_integral():
    prod = AdelicMat(B) * local_element(EisensteinInt(1, 3), 7) * AdelicMat(A * A)
    ok, why = member(prod, "V", all_places=True)
    assert not ok and "valuation -1" in why


def test_wrong_class():
    with pytest.raises(DomainError):
        rho_omega(11)
    with pytest.raises(DomainError):
        verify_modular_action(19)


@pytest.mark.parametrize("p", [7, 13, 43])
def test_det_component(p):
    assert det_component(local_element(EisensteinInt(1, 3), p)) == 1
    assert det_component(local_element(EisensteinInt(0, 1), p)) == 1
    assert det_component(AdelicMat(w_matrix(p)) * eps_finite()) == 1
    assert det_component(AdelicMat(w_matrix(p))) == -1


def test_normalizer_examples():
    assert normalizer_check(Mat2.identity())["holds"]
    assert normalizer_check(local_element(EisensteinInt(0, 1), 7))["holds"]
    assert normalizer_check(local_element(EisensteinInt(1, 3), 7))["holds"]
    assert normalizer_check(AdelicMat(w_matrix(7)) * eps_finite())["holds"]
    rep = normalizer_check(AdelicMat(w_matrix(7)))
    assert rep["normalizes"] and not rep["holds"] and "obstruction" in rep
    for g in (B, C, W, A):
        assert normalizer_check(g)["normalizes"]
    for g in (Mat2(1, 0, 1, 1), Mat2(3, 0, 0, 1), Mat2(1, 0, 9, 1)):
        assert not normalizer_check(g)["normalizes"]
