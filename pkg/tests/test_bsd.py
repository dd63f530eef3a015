from fractions import Fraction

import mpmath
import pytest

from cubesum import bsd
from cubesum.algebra import DomainError
from cubesum.curves import curve_family, scalar_mul


@pytest.mark.parametrize("p,expected", [(7, True), (13, True), (31, True), (61, False), (67, False)])
def test_cube_test(p, expected):
    assert bsd.cube_test(p) == expected


@pytest.mark.parametrize("p", [7, 13, 43])
def test_selmer_bound(p):
    led = bsd.selmer_bound(p)
    assert led.dims["Sel_3(E_p) <="] == 1
    assert led.dims["Sel_3(E_3p2) ="] == 0
    assert led.dims["Sha(E_p)[3]"] == 0


def test_selmer_domain():
    with pytest.raises(DomainError):
        bsd.selmer_bound(19)
    with pytest.raises(DomainError):
        bsd.selmer_bound(61)
    with pytest.raises(DomainError):
        bsd.selmer_order(3, 1, 9)


@pytest.mark.parametrize("p", [7, 13])
def test_generator(p):
    P = bsd.generator(p)
    assert P.curve.B == curve_family(p).B
    assert bsd.not_three_divisible(P)


def test_third_points_finds_division():
    P = bsd.generator(7)
    Q = scalar_mul(3, P)
    assert P in bsd.third_points(Q)


def test_recognize_rational():
    r, res = bsd.recognize_rational(mpmath.mpf(7) / 3)
    assert r == Fraction(7, 3)
    r, res = bsd.recognize_rational(mpmath.pi, max_residual=mpmath.mpf(10) ** -20)
    assert r is None


@pytest.mark.parametrize("p,S,c", [(7, 1, 18), (13, 4, 9)])
def test_bsd3_report(p, S, c):
    rep = bsd.bsd3_report(p)
    assert rep["passed"], rep["checks"]
    assert Fraction(rep["S_rational"]) == S
    assert rep["ord3_S"] == 0
    checks = {ch["check"]: ch for ch in rep["checks"]}
    assert checks["prod c = 2^m 9"]["computed"] == c
    assert checks["S = 2^i h(R)/h(P)"]["status"] == "pass"
