"""Arithmetic in the binary extension fields GF(2^m), 2 <= m <= 10.

The Reed-Solomon layer works with symbols from these fields. Multiplication,
inversion and exponentiation are table driven: a discrete-log table and an
anti-log table over the generator alpha (the class of x) are built once at
construction, so the hot codec paths reduce to integer adds and lookups.
The anti-log table is stored twice over so products of two logs never need
a modular reduction.

A ``Field`` is immutable after construction and every operation is pure, so
instances can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    FieldMismatchError,
    NonPrimitivePolynomialError,
    UnsupportedSymbolSizeError,
)

# Fixed default polynomial per m (minimum-weight primitive choices). Any
# primitive polynomial yields an equivalent code; pinning one per m keeps
# outputs reproducible across runs.
DEFAULT_PRIMITIVE_POLY = {
    2: 0b111,           # x^2 + x + 1
    3: 0b1011,          # x^3 + x + 1
    4: 0b10011,         # x^4 + x + 1
    5: 0b100101,        # x^5 + x^2 + 1
    6: 0b1000011,       # x^6 + x + 1
    7: 0b10001001,      # x^7 + x^3 + 1
    8: 0b100011101,     # x^8 + x^4 + x^3 + x^2 + 1
    9: 0b1000010001,    # x^9 + x^4 + 1
    10: 0b10000001001,  # x^10 + x^3 + 1
}

MIN_M = 2
MAX_M = 10


class Field:
    """GF(2^m) with exp/log tables over the generator alpha.

    Construction verifies primitivity directly: alpha must enumerate all
    2^m - 1 nonzero elements before cycling back to 1, otherwise
    ``NonPrimitivePolynomialError`` is raised.
    """

    __slots__ = ("m", "size", "order", "primitive_poly", "exp_table", "log_table")

    def __init__(self, m: int, primitive_poly: int | None = None):
        if not MIN_M <= m <= MAX_M:
            raise UnsupportedSymbolSizeError(
                f"symbol size m={m} outside supported range {MIN_M}..{MAX_M}"
            )
        if primitive_poly is None:
            primitive_poly = DEFAULT_PRIMITIVE_POLY[m]
        if primitive_poly.bit_length() != m + 1:
            raise NonPrimitivePolynomialError(
                f"polynomial 0b{primitive_poly:b} does not have degree {m}"
            )

        self.m = m
        self.size = 1 << m          # number of field elements
        self.order = self.size - 1  # order of the multiplicative group
        self.primitive_poly = primitive_poly

        exp = [0] * (2 * self.order)
        log = [0] * self.size
        seen = bytearray(self.size)
        x = 1
        for i in range(self.order):
            if seen[x]:
                raise NonPrimitivePolynomialError(
                    f"0b{primitive_poly:b} is not primitive: alpha has order {i}"
                )
            seen[x] = 1
            exp[i] = x
            log[x] = i
            x <<= 1
            if x & self.size:
                x ^= primitive_poly
        if x != 1:
            raise NonPrimitivePolynomialError(
                f"0b{primitive_poly:b} is not primitive: alpha^{self.order} != 1"
            )
        for i in range(self.order, 2 * self.order):
            exp[i] = exp[i - self.order]
        self.exp_table = exp
        self.log_table = log

    # -- scalar operations on raw symbol values ------------------------------

    def add(self, a: int, b: int) -> int:
        return a ^ b

    sub = add  # characteristic 2

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp_table[self.log_table[a] + self.log_table[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in GF(2^m)")
        return self.exp_table[self.order - self.log_table[a]]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by 0 in GF(2^m)")
        if a == 0:
            return 0
        return self.exp_table[(self.log_table[a] - self.log_table[b]) % self.order]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("0 has no negative powers in GF(2^m)")
            return 1 if e == 0 else 0
        return self.exp_table[(self.log_table[a] * e) % self.order]

    def alpha_pow(self, i: int) -> int:
        """The element alpha^i, for any integer i."""
        return self.exp_table[i % self.order]

    def element(self, value: int) -> "FieldElement":
        return FieldElement(self, value)

    def __contains__(self, value: int) -> bool:
        return 0 <= value < self.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, Field):
            return NotImplemented
        return self.m == other.m and self.primitive_poly == other.primitive_poly

    def __hash__(self) -> int:
        return hash((self.m, self.primitive_poly))

    def __repr__(self) -> str:
        return f"Field(m={self.m}, primitive_poly=0x{self.primitive_poly:x})"


@dataclass(frozen=True, slots=True)
class FieldElement:
    """A single symbol of a ``Field``, with operator syntax.

    The codec works on raw ints for speed; this wrapper is the convenience
    surface for algebra at the call sites that want operator checks.
    """

    field: Field
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.field.size:
            raise ValueError(
                f"value {self.value} out of range for GF(2^{self.field.m})"
            )

    def _coerced(self, other: "FieldElement") -> int:
        if not isinstance(other, FieldElement):
            raise TypeError(f"cannot combine FieldElement with {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatchError(
                f"operands from different fields: {self.field!r} vs {other.field!r}"
            )
        return other.value

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.field, self.value ^ self._coerced(other))

    __sub__ = __add__

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.field, self.field.mul(self.value, self._coerced(other)))

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.field, self.field.div(self.value, self._coerced(other)))

    def __pow__(self, e: int) -> "FieldElement":
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"FieldElement({self.value}, GF(2^{self.field.m}))"
