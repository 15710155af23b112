"""Exact arithmetic over F_p: scalars, binomials with integer upper index,
Lucas digit products, Laurent polynomials and Hasse derivatives."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Iterator, Mapping

from sympy import isprime
from sympy.ntheory import digits

MAX_PRIME = 2**31


class FieldError(ValueError):
    pass


def check_prime(p: int) -> int:
    """Validate the modulus: an odd prime below 2**31."""
    if not isinstance(p, int) or isinstance(p, bool):
        raise FieldError(f"modulus must be an integer, got {p!r}")
    if p == 2:
        raise FieldError("p = 2 is not supported; the modulus must be an odd prime")
    if p < 3 or p >= MAX_PRIME or not isprime(p):
        raise FieldError(f"modulus must be an odd prime below 2**31, got {p}")
    return p


@dataclass(frozen=True)
class FpScalar:
    """A residue in [0, p)."""
    value: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, FpScalar):
            if other.p != self.p:
                raise FieldError(f"mixed moduli {self.p} and {other.p}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else FpScalar(self.value + v, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else FpScalar(self.value - v, self.p)

    def __rsub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else FpScalar(v - self.value, self.p)

    def __mul__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else FpScalar(self.value * v, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpScalar(-self.value, self.p)

    def inverse(self) -> FpScalar:
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {self.p}")
        return FpScalar(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return self * FpScalar(v, self.p).inverse()

    def __eq__(self, other):
        if isinstance(other, FpScalar):
            return self.p == other.p and self.value == other.value
        # ints match only the residue in [0, p)
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __int__(self):
        return self.value

    def symmetric(self) -> int:
        return symmetric_residue(self.value, self.p)

    def __repr__(self):
        return f"{self.value} (mod {self.p})"


def symmetric_residue(value: int, p: int) -> int:
    """Representative of value mod p in (-p/2, p/2]."""
    r = value % p
    return r - p if r > p // 2 else r


@lru_cache(maxsize=None)
def binom_int(m: int, k: int) -> int:
    """binom(m, k) over the integers for any integer m and k >= 0."""
    if k < 0:
        return 0
    if m >= 0:
        return comb(m, k)
    # binom(-n, k) = (-1)^k binom(n+k-1, k)
    n = -m
    sign = -1 if k % 2 else 1
    return sign * comb(n + k - 1, k)


@lru_cache(maxsize=None)
def binom_mod(m: int, k: int, p: int) -> int:
    """binom(m, k) reduced mod p, as a residue in [0, p)."""
    return binom_int(m, k) % p


def binom_scalar(m: int, k: int, p: int) -> FpScalar:
    return FpScalar(binom_mod(m, k, p), p)


def lucas_binomial(m: int, k: int, p: int) -> int:
    """Product of base-p digit binomials; equals binom(m, k) mod p for m >= 0."""
    if m < 0 or k < 0:
        raise FieldError("Lucas evaluation needs nonnegative arguments")
    if k > m:
        return 0
    m_digits = digits(m, p)[1:][::-1]
    k_digits = digits(k, p)[1:][::-1]
    result = 1
    for i, md in enumerate(m_digits):
        kd = k_digits[i] if i < len(k_digits) else 0
        if kd > md:
            return 0
        result = result * comb(md, kd) % p
    return result


@dataclass(frozen=True)
class PrimeField:
    """F_p with a validated modulus."""
    p: int

    def __post_init__(self):
        check_prime(self.p)

    def __call__(self, value: int) -> FpScalar:
        return FpScalar(value, self.p)

    def reduce(self, value: int) -> int:
        return value % self.p

    def inv(self, value: int) -> int:
        if value % self.p == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {self.p}")
        return pow(value, -1, self.p)

    @property
    def half(self) -> int:
        return (self.p + 1) // 2

    def binom(self, m: int, k: int) -> int:
        return binom_mod(m, k, self.p)


# ── Laurent polynomials ────────────────────────────────────────

@dataclass(frozen=True)
class LaurentPoly:
    """Finite sum of c_m x^m over F_p; zero coefficients are never stored."""
    p: int
    coeffs: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {e: c % self.p for e, c in self.coeffs.items() if c % self.p}
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def monomial(cls, exponent: int, p: int, coeff: int = 1) -> LaurentPoly:
        return cls(p, {exponent: coeff})

    @classmethod
    def one(cls, p: int) -> LaurentPoly:
        return cls.monomial(0, p)

    def terms(self) -> Iterator[tuple[int, int]]:
        """(exponent, coefficient) pairs in increasing exponent order."""
        return iter(sorted(self.coeffs.items()))

    def coeff(self, exponent: int) -> int:
        return self.coeffs.get(exponent, 0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def scale(self, c: int) -> LaurentPoly:
        return LaurentPoly(self.p, {e: c * v for e, v in self.coeffs.items()})

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(self.p, out)

    def __sub__(self, other: LaurentPoly) -> LaurentPoly:
        return self + other.scale(-1)

    def __mul__(self, other: LaurentPoly) -> LaurentPoly:
        out: dict[int, int] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(self.p, out)

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*x^{e}" for e, c in self.terms())


def hasse_deriv(n: int, f: LaurentPoly) -> LaurentPoly:
    """n-th Hasse derivative: x^m -> binom(m, n) x^(m-n)."""
    if n < 0:
        raise FieldError(f"Hasse derivative order must be nonnegative, got {n}")
    out: dict[int, int] = {}
    for m, c in f.coeffs.items():
        b = binom_mod(m, n, f.p)
        if b:
            out[m - n] = c * b
    return LaurentPoly(f.p, out)
