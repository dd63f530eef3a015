import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cubesum.algebra import (
    CapacityError, CyclotomicValue, DomainError, EisensteinInt, LocalElement,
    Mat2, PrecisionError, QuadraticForm, SQRT_M3, UNITS, W, class_number,
    eisenstein_factor, form_compose, form_power, is_eisenstein_prime,
    principal_form, reduced_forms, sextic_residue_symbol,
)

eis = st.builds(EisensteinInt, st.integers(-50, 50), st.integers(-50, 50))


def test_parse_and_str_roundtrip():
    assert EisensteinInt.parse("1+3w") == EisensteinInt(1, 3)
    assert EisensteinInt.parse("-w^2") == EisensteinInt(1, 1)
    assert EisensteinInt.parse("2-5*w") == EisensteinInt(2, -5)
    for z in (EisensteinInt(1, 3), EisensteinInt(-4, 0), EisensteinInt(0, -1)):
        assert EisensteinInt.parse(str(z)) == z
    with pytest.raises(DomainError):
        EisensteinInt.parse("1+x")


def test_units():
    assert len(set(UNITS)) == 6
    assert all(u.norm() == 1 for u in UNITS)
    assert W ** 3 == 1 and W * W + W + 1 == 0
    assert SQRT_M3 * SQRT_M3 == -3


@given(eis, eis, eis)
def test_ring_axioms(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert (x * y).norm() == x.norm() * y.norm()
    assert (x * y).conj() == x.conj() * y.conj()


def test_factor_examples():
    unit, fac = eisenstein_factor(7)
    assert [pi.norm() for pi, _ in fac] == [7, 7]
    assert eisenstein_factor(W) == (W, [])
    unit, fac = eisenstein_factor(12)
    assert dict((pi, e) for pi, e in fac) == {EisensteinInt(2): 2, SQRT_M3: 2}
    with pytest.raises(DomainError):
        eisenstein_factor(0)
    with pytest.raises(CapacityError):
        eisenstein_factor(EisensteinInt(2 ** 40, 1))


def test_factor_roundtrip_exhaustive_small():
    for a in range(-40, 41):
        for b in range(-40, 41):
            z = EisensteinInt(a, b)
            if not z:
                continue
            unit, fac = eisenstein_factor(z)
            prod = unit
            for pi, e in fac:
                assert is_eisenstein_prime(pi)
                prod = prod * pi ** e
            assert prod == z


@given(st.integers(1, 10 ** 6).filter(lambda n: n > 1))
@settings(max_examples=60)
def test_factor_roundtrip_random(n):
    z = EisensteinInt(n, n // 7 + 1)
    unit, fac = eisenstein_factor(z)
    prod = unit
    for pi, e in fac:
        prod = prod * pi ** e
    assert prod == z and unit.is_unit()


def test_sextic_symbol():
    assert sextic_residue_symbol(1, EisensteinInt(2, 3)) == 1
    v = sextic_residue_symbol(-3, 5)
    assert v ** 6 == 1
    # (-3)^{(25-1)/6} mod 5 = 81^... computed in F_25: -3 = 2 mod 5 is in F_5
    assert v == CyclotomicValue.root_of_unity(6, 0)
    s = sextic_residue_symbol(-3, EisensteinInt(1, 3))
    assert s == CyclotomicValue.root_of_unity(3, 2)
    with pytest.raises(DomainError):
        sextic_residue_symbol(2, 2)


def test_cyclotomic_basics():
    z12 = CyclotomicValue.root_of_unity(12, 1)
    assert z12 ** 12 == 1 and z12 ** 6 == -1
    i = z12 ** 3
    w = z12 ** 4
    assert i * i == -1 and w * w + w + 1 == 0
    assert str(w) == "w" and str(w * w) == "w^2" and str(-i) == "-i"
    assert CyclotomicValue.root_of_unity(3, 1) == w
    x = CyclotomicValue.root_of_unity(9, 2) + 3
    assert x * x.inverse() == 1


@given(st.lists(st.integers(-5, 5), min_size=4, max_size=4),
       st.lists(st.integers(-5, 5), min_size=4, max_size=4),
       st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_cyclotomic_ring_axioms(a, b, c):
    x, y, z = (CyclotomicValue(12, v) for v in (a, b, c))
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x


def test_form_composition_group_laws():
    disc = -3 * 63 ** 2
    forms = reduced_forms(disc)
    one = principal_form(disc)
    assert len(forms) == class_number(disc)
    for f in forms:
        assert form_compose(f, one) == f
        assert form_compose(f, f.inverse()) == one
    for f, g in itertools.product(forms, repeat=2):
        assert form_compose(f, g) == form_compose(g, f)
    for f, g, h in itertools.product(forms, repeat=3):
        assert form_compose(form_compose(f, g), h) == form_compose(f, form_compose(g, h))


def test_class_number_matches_formula():
    # h(O_f) = f * prod(1 - (d_K/l)/l) / [O_K^x : O_f^x] for d_K = -3
    for p in (7, 13, 31):
        assert class_number(-3 * (9 * p) ** 2) == 3 * (p - 1)
    assert class_number(-3 * 63 ** 2) == 18


def test_form_power_order_divides_class_number():
    disc = -3 * 63 ** 2
    h = class_number(disc)
    for f in reduced_forms(disc):
        assert form_power(f, h) == principal_form(disc)


def test_form_errors():
    with pytest.raises(DomainError):
        form_compose(QuadraticForm(1, 1, 1), QuadraticForm(1, 1, 2))
    with pytest.raises(DomainError):
        QuadraticForm(1, 2, 1)


def test_local_element_arithmetic():
    x = LocalElement.from_rational(Fraction(5, 9))
    y = LocalElement.from_rational(Fraction(2, 3))
    assert (x * y).valuation == x.valuation + y.valuation
    s = x + y
    assert s.prec == min(x.valuation + x.prec, y.valuation + y.prec) - s.valuation
    k = LocalElement.from_eisenstein(1, den=9)
    assert k.valuation == -4
    e = LocalElement.from_eisenstein(SQRT_M3 * EisensteinInt(2, 3))
    assert e.valuation == 1
    a = LocalElement("Q3", 0, 1, 1)
    assert (a + LocalElement("Q3", 0, 2, 1)).is_zero()
    with pytest.raises(PrecisionError):
        LocalElement("Q3", 0, 1, 0)


def test_local_element_valuation_additive():
    for a, b in itertools.product(range(1, 30), repeat=2):
        x = LocalElement.from_eisenstein(EisensteinInt(a, b))
        y = LocalElement.from_eisenstein(EisensteinInt(b, -a))
        assert (x * y).valuation == x.valuation + y.valuation


def test_mat2():
    m = Mat2(1, 2, 3, 4)
    assert m * m.inverse() == Mat2.identity()
    assert m.det() == -2
    assert (m ** 3) == m * m * m
    with pytest.raises(DomainError):
        Mat2(1, 2, 2, 4).inverse()
