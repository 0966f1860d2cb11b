"""
Exact coefficient arithmetic

Rationals are `fractions.Fraction`; `RatMod1` is a rational reduced into
[0, 1); `LaurentInt` is an integer Laurent polynomial in v stored densely
as (lowest exponent, coefficient tuple) and normalized on construction.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple

Rational = Fraction


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or "p" into a reduced Fraction"""
    return Fraction(text.strip())


def format_rational(value: Fraction) -> str:
    """Serialize a rational as "p/q" (denominator always written)"""
    return f"{value.numerator}/{value.denominator}"


@functools.total_ordering
@dataclass(frozen=True)
class RatMod1:
    """An element of Q/Z, represented by its unique lift in [0, 1)"""
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, 'value', Fraction(self.value) % 1)

    def __add__(self, other: 'RatMod1') -> 'RatMod1':
        return RatMod1(self.value + other.value)

    def __sub__(self, other: 'RatMod1') -> 'RatMod1':
        return RatMod1(self.value - other.value)

    def __neg__(self) -> 'RatMod1':
        return RatMod1(-self.value)

    def __mul__(self, n: int) -> 'RatMod1':
        return RatMod1(self.value * n)

    __rmul__ = __mul__

    def __lt__(self, other: 'RatMod1') -> bool:
        return self.value < other.value

    def is_zero(self) -> bool:
        return self.value == 0

    def __str__(self):
        return format_rational(self.value)


@dataclass(frozen=True)
class LaurentInt:
    """
    Integer Laurent polynomial sum(coeffs[k] * v**(lo + k))

    The zero polynomial is stored as lo=0, coeffs=().
    """
    lo: int = 0
    coeffs: Tuple[int, ...] = ()

    def __post_init__(self):
        coeffs = list(self.coeffs)
        lo = self.lo
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        start = 0
        while start < len(coeffs) and coeffs[start] == 0:
            start += 1
        coeffs = coeffs[start:]
        lo = lo + start if coeffs else 0
        object.__setattr__(self, 'lo', lo)
        object.__setattr__(self, 'coeffs', tuple(int(c) for c in coeffs))

    # -- constructors ---------------------------------------------------

    @classmethod
    def const(cls, c: int) -> 'LaurentInt':
        return cls(0, (c,))

    @classmethod
    def monomial(cls, exponent: int, c: int = 1) -> 'LaurentInt':
        return cls(exponent, (c,))

    @classmethod
    def from_terms(cls, terms: Mapping[int, int]) -> 'LaurentInt':
        """Build from an exponent -> coefficient mapping"""
        live = {e: c for e, c in terms.items() if c}
        if not live:
            return ZERO
        lo, hi = min(live), max(live)
        return cls(lo, tuple(live.get(e, 0) for e in range(lo, hi + 1)))

    # -- inspection -----------------------------------------------------

    @property
    def hi(self) -> int:
        """Highest exponent (lo - 1 for the zero polynomial)"""
        return self.lo + len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def terms(self) -> Dict[int, int]:
        return {self.lo + k: c for k, c in enumerate(self.coeffs) if c}

    def coefficient(self, exponent: int) -> int:
        k = exponent - self.lo
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    # -- ring operations ------------------------------------------------

    def __add__(self, other: 'LaurentInt') -> 'LaurentInt':
        if isinstance(other, int):
            other = LaurentInt.const(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        return LaurentInt(lo, tuple(self.coefficient(e) + other.coefficient(e) for e in range(lo, hi + 1)))

    __radd__ = __add__

    def __neg__(self) -> 'LaurentInt':
        return LaurentInt(self.lo, tuple(-c for c in self.coeffs))

    def __sub__(self, other: 'LaurentInt') -> 'LaurentInt':
        if isinstance(other, int):
            other = LaurentInt.const(other)
        return self + (-other)

    def __rsub__(self, other: int) -> 'LaurentInt':
        return LaurentInt.const(other) - self

    def __mul__(self, other: 'LaurentInt') -> 'LaurentInt':
        if isinstance(other, int):
            return LaurentInt(self.lo, tuple(c * other for c in self.coeffs))
        if self.is_zero() or other.is_zero():
            return ZERO
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return LaurentInt(self.lo + other.lo, tuple(out))

    __rmul__ = __mul__

    # -- involution, specialization, degree split -------------------------

    def bar(self) -> 'LaurentInt':
        """v -> v^-1"""
        return LaurentInt(-self.hi, tuple(reversed(self.coeffs))) if self.coeffs else ZERO

    def eval_one(self) -> int:
        """Specialize v = 1"""
        return sum(self.coeffs)

    def split(self) -> Tuple['LaurentInt', 'LaurentInt', 'LaurentInt']:
        """(positive-degree part, constant part, negative-degree part)"""
        terms = self.terms()
        pos = LaurentInt.from_terms({e: c for e, c in terms.items() if e > 0})
        neg = LaurentInt.from_terms({e: c for e, c in terms.items() if e < 0})
        return pos, LaurentInt.const(terms.get(0, 0)), neg

    def in_negative_span(self) -> bool:
        """True when every exponent is < 0, i.e. the polynomial lies in v^-1 Z[v^-1]"""
        return self.is_zero() or self.hi < 0

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {"lo": self.lo, "coeffs": list(self.coeffs)}

    @classmethod
    def from_json(cls, data: Mapping) -> 'LaurentInt':
        return cls(int(data["lo"]), tuple(int(c) for c in data["coeffs"]))

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for e in range(self.hi, self.lo - 1, -1):
            c = self.coefficient(e)
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                power = "v" if e == 1 else f"v^{e}"
                body = power if mag == 1 else f"{mag}{power}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


ZERO = LaurentInt()
ONE = LaurentInt.const(1)
V = LaurentInt.monomial(1)
V_INV = LaurentInt.monomial(-1)
V_PLUS_VINV = V + V_INV
V_MINUS_VINV = V - V_INV
V2_MINUS_VM2 = LaurentInt.monomial(2) - LaurentInt.monomial(-2)
V2_MINUS_VM2_MINUS_1 = V2_MINUS_VM2 - ONE


def laurent_mul(a: LaurentInt, b: LaurentInt) -> LaurentInt:
    """Exact product"""
    return a * b


def laurent_bar(a: LaurentInt) -> LaurentInt:
    """The bar involution v -> v^-1"""
    return a.bar()


def laurent_eval_one(a: LaurentInt) -> int:
    """Sum of coefficients"""
    return a.eval_one()


def laurent_sum(items: Iterable[LaurentInt]) -> LaurentInt:
    total = ZERO
    for item in items:
        total = total + item
    return total
