import numpy as np
import pytest
from hypothesis import given, strategies as st

from biosketch.errors import (
    FieldMismatchError,
    NonPrimitivePolynomialError,
    UnsupportedSymbolSizeError,
)
from biosketch.gf import DEFAULT_PRIMITIVE_POLY, MAX_M, MIN_M, Field

from reference import element_order, slow_gf_mul

ALL_M = range(MIN_M, MAX_M + 1)


def test_alpha_cubed_is_x_plus_one_in_gf8():
    field = Field(3, 0b1011)
    assert field.exp_table[3] == 0b011


def test_reducible_polynomial_rejected():
    # x^3 + x^2 + x + 1 = (x + 1)(x^2 + 1); alpha cannot generate 7 elements
    assert element_order(2, 0b1011, 3) == 7
    try:
        generated = element_order(2, 0b1111, 3)
    except AssertionError:
        generated = 0
    assert generated != 7
    with pytest.raises(NonPrimitivePolynomialError):
        Field(3, 0b1111)


def test_irreducible_but_nonprimitive_rejected():
    # x^4 + x^3 + x^2 + x + 1 is irreducible yet alpha has order 5, not 15
    with pytest.raises(NonPrimitivePolynomialError):
        Field(4, 0b11111)


def test_wrong_degree_polynomial_rejected():
    with pytest.raises(NonPrimitivePolynomialError):
        Field(3, 0b10011)


@pytest.mark.parametrize("m", [1, 0, 11, 16])
def test_unsupported_symbol_size(m):
    with pytest.raises(UnsupportedSymbolSizeError):
        Field(m)


def test_m6_field_has_63_nonzero_elements():
    field = Field(6)
    assert field.order == 63
    assert sorted(field.exp_table[:63]) == list(range(1, 64))


@pytest.mark.parametrize("m", ALL_M)
def test_default_polynomials_are_primitive(m):
    poly = DEFAULT_PRIMITIVE_POLY[m]
    assert poly.bit_length() == m + 1
    assert element_order(2, poly, m) == (1 << m) - 1


@pytest.mark.parametrize("m", ALL_M)
def test_exp_table_period_and_log_inverse(m):
    field = Field(m)
    order = field.order
    assert sorted(field.exp_table[:order]) == list(range(1, field.size))
    for i in range(order):
        assert field.log_table[field.exp_table[i]] == i
        assert field.exp_table[i + order] == field.exp_table[i]


@pytest.mark.parametrize("m", [3, 4])
def test_table_mul_matches_shift_and_reduce_exhaustively(m):
    field = Field(m)
    for a in range(field.size):
        for b in range(field.size):
            assert field.mul(a, b) == slow_gf_mul(a, b, field.primitive_poly, m)


def test_add_is_xor_and_involutive(gf8):
    assert gf8.add(0b101, 0b011) == 0b110
    for a in range(8):
        assert gf8.add(a, a) == 0
        assert gf8.add(a, 0) == a


def test_mul_identity_and_alpha_powers(gf8):
    for a in range(8):
        assert gf8.mul(a, 1) == a
    # alpha * alpha^2 = alpha^3 = x + 1
    assert gf8.mul(2, gf8.mul(2, 2)) == 0b011
    assert gf8.pow(2, 7) == 1


def test_inverse_everywhere():
    for m in ALL_M:
        field = Field(m)
        for a in range(1, field.size):
            assert field.mul(a, field.inv(a)) == 1
        with pytest.raises(ZeroDivisionError):
            field.inv(0)
        with pytest.raises(ZeroDivisionError):
            field.div(1, 0)


def test_pow_edge_cases(gf8):
    assert gf8.pow(0, 0) == 1
    assert gf8.pow(0, 5) == 0
    assert gf8.pow(3, 0) == 1
    assert gf8.pow(3, -1) == gf8.inv(3)
    with pytest.raises(ZeroDivisionError):
        gf8.pow(0, -1)


@pytest.mark.parametrize("m", ALL_M)
def test_field_laws_random_triples(m):
    field = Field(m)
    rng = np.random.default_rng(1000 + m)
    triples = rng.integers(0, field.size, size=(10_000, 3))
    mul, add = field.mul, field.add
    for a, b, c in triples.tolist():
        assert mul(a, mul(b, c)) == mul(mul(a, b), c)
        assert mul(a, b) == mul(b, a)
        assert add(a, b) == add(b, a)
        assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))


@given(st.integers(0, 7), st.integers(0, 7), st.integers(0, 7))
def test_field_laws_hypothesis(a, b, c):
    field = Field(3)
    assert field.mul(a, field.add(b, c)) == field.add(field.mul(a, b), field.mul(a, c))
    assert field.mul(field.mul(a, b), c) == field.mul(a, field.mul(b, c))


class TestFieldElement:
    def test_operators(self, gf8):
        a = gf8.element(0b101)
        b = gf8.element(0b011)
        assert int(a + b) == 0b110
        assert int(a * b) == gf8.mul(0b101, 0b011)
        assert int(a / b) == gf8.div(0b101, 0b011)
        assert int(a ** 7) == gf8.pow(0b101, 7)
        assert int(a * a.inverse()) == 1

    def test_field_mismatch(self, gf8):
        other = Field(4)
        with pytest.raises(FieldMismatchError):
            gf8.element(1) + other.element(1)
        with pytest.raises(FieldMismatchError):
            gf8.element(1) * other.element(1)

    def test_same_parameters_compatible(self, gf8):
        clone = Field(3)
        assert int(gf8.element(5) + clone.element(3)) == 6

    def test_out_of_range_value(self, gf8):
        with pytest.raises(ValueError):
            gf8.element(8)
