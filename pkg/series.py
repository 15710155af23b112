"""Truncated multivariate power series over F_p.

Coefficients live in a sympy sparse polynomial ring over GF(p); every
product is cut back to total degree <= cutoff.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Mapping, Sequence

from sympy.polys.domains import GF
from sympy.polys.rings import ring

from modp import binom_mod


class SeriesError(ValueError):
    pass


@lru_cache(maxsize=None)
def _poly_ring(variables: tuple[str, ...], p: int):
    R, *_ = ring(",".join(variables), GF(p))
    return R


class TruncSeries:
    """Power series in `variables` truncated at total degree `cutoff`."""

    def __init__(self, variables: Sequence[str], p: int, cutoff: int,
                 coeffs: Mapping[tuple[int, ...], int] | None = None):
        if cutoff < 0:
            raise SeriesError(f"cutoff must be nonnegative, got {cutoff}")
        self.variables = tuple(variables)
        self.p = p
        self.cutoff = cutoff
        self._ring = _poly_ring(self.variables, p)
        terms = {}
        for monom, c in (coeffs or {}).items():
            if len(monom) != len(self.variables) or min(monom, default=0) < 0:
                raise SeriesError(f"bad exponent vector {monom} for {self.variables}")
            if sum(monom) <= cutoff and c % p:
                terms[tuple(monom)] = c % p
        self._poly = self._ring.from_dict(terms) if terms else self._ring.zero

    @classmethod
    def _wrap(cls, like: TruncSeries, poly) -> TruncSeries:
        out = cls.__new__(cls)
        out.variables, out.p, out.cutoff, out._ring = like.variables, like.p, like.cutoff, like._ring
        keep = {m: c for m, c in poly.items() if sum(m) <= like.cutoff}
        out._poly = like._ring.from_dict(keep) if keep else like._ring.zero
        return out

    @classmethod
    def constant(cls, variables: Sequence[str], p: int, cutoff: int, value: int = 1) -> TruncSeries:
        return cls(variables, p, cutoff, {(0,) * len(variables): value})

    @classmethod
    def monomial(cls, variables: Sequence[str], p: int, cutoff: int,
                 exponents: Mapping[str, int], coeff: int = 1) -> TruncSeries:
        variables = tuple(variables)
        unknown = set(exponents) - set(variables)
        if unknown:
            raise SeriesError(f"unknown variables {sorted(unknown)}")
        monom = tuple(exponents.get(v, 0) for v in variables)
        return cls(variables, p, cutoff, {monom: coeff})

    def variable(self, name: str) -> TruncSeries:
        return TruncSeries.monomial(self.variables, self.p, self.cutoff, {name: 1})

    def one(self) -> TruncSeries:
        return TruncSeries.constant(self.variables, self.p, self.cutoff)

    # ── access ─────────────────────────────────────────────────

    def items(self) -> Iterator[tuple[tuple[int, ...], int]]:
        """(exponents, coefficient) in lexicographic exponent order."""
        pairs = [(m, int(c) % self.p) for m, c in self._poly.items()]
        return iter(sorted((m, c) for m, c in pairs if c))

    def as_dict(self) -> dict[tuple[int, ...], int]:
        return dict(self.items())

    def coeff(self, exponents: Sequence[int]) -> int:
        return self.as_dict().get(tuple(exponents), 0)

    def constant_term(self) -> int:
        return self.coeff((0,) * len(self.variables))

    def is_zero(self) -> bool:
        return not self.as_dict()

    # ── ring operations ────────────────────────────────────────

    def _check(self, other: TruncSeries):
        if (self.variables, self.p, self.cutoff) != (other.variables, other.p, other.cutoff):
            raise SeriesError("series live in different rings")

    def __add__(self, other: TruncSeries) -> TruncSeries:
        self._check(other)
        return TruncSeries._wrap(self, self._poly + other._poly)

    def __sub__(self, other: TruncSeries) -> TruncSeries:
        self._check(other)
        return TruncSeries._wrap(self, self._poly - other._poly)

    def __neg__(self) -> TruncSeries:
        return TruncSeries._wrap(self, -self._poly)

    def __mul__(self, other) -> TruncSeries:
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        return TruncSeries._wrap(self, self._poly * other._poly)

    __rmul__ = __mul__

    def scale(self, c: int) -> TruncSeries:
        return TruncSeries._wrap(self, self._poly * (c % self.p))

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (self.variables, self.p, self.cutoff) == (other.variables, other.p, other.cutoff) \
            and self.as_dict() == other.as_dict()

    def __pow__(self, e: int) -> TruncSeries:
        return self.power(e)

    def power(self, e: int) -> TruncSeries:
        """Integer power; negative powers need an invertible constant term."""
        if e >= 0:
            result, base = self.one(), self
            while e:
                if e & 1:
                    result = result * base
                base = base * base
                e >>= 1
            return result
        c = self.constant_term()
        if c == 0:
            raise SeriesError("negative power of a series without constant term")
        c_inv = pow(c, -1, self.p)
        g = self.scale(c_inv) - self.one()
        # (c(1+g))^e = c^e sum_i binom(e, i) g^i
        total, g_pow = self.one(), self.one()
        for i in range(1, self.cutoff + 1):
            g_pow = g_pow * g
            b = binom_mod(e, i, self.p)
            if b:
                total = total + g_pow.scale(b)
        return total.scale(pow(c_inv, -e, self.p))

    def substitute(self, name: str, value: TruncSeries) -> TruncSeries:
        """Replace variable `name` by `value`, which must have zero constant term."""
        self._check(value)
        if name not in self.variables:
            raise SeriesError(f"unknown variable {name!r}")
        if value.constant_term():
            raise SeriesError("substituted series must have zero constant term")
        idx = self.variables.index(name)
        powers = [self.one()]
        result = TruncSeries(self.variables, self.p, self.cutoff)
        for monom, c in self.items():
            k = monom[idx]
            while len(powers) <= k:
                powers.append(powers[-1] * value)
            rest = monom[:idx] + (0,) + monom[idx + 1:]
            result = result + TruncSeries(self.variables, self.p, self.cutoff, {rest: c}) * powers[k]
        return result

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for monom, c in self.items():
            factors = [f"{v}^{e}" if e > 1 else v for v, e in zip(self.variables, monom) if e]
            parts.append("*".join([str(c)] + factors) if factors else str(c))
        return " + ".join(parts)


def one_minus_product(variables: Sequence[str], p: int, cutoff: int,
                      first: str, second: str, sign: int = -1) -> TruncSeries:
    """1 + sign * first * second, i.e. (1 - z z0) for sign = -1."""
    one = TruncSeries.constant(variables, p, cutoff)
    prod = TruncSeries.monomial(variables, p, cutoff, {first: 1, second: 1} if first != second
                                else {first: 2})
    return one + prod.scale(sign)


def mobius_substitute(series: TruncSeries, z: str, z0: str, sign: int = -1) -> TruncSeries:
    """Substitute z0 -> z0 / (1 + sign * z z0)."""
    denom = one_minus_product(series.variables, series.p, series.cutoff, z, z0, sign)
    return series.substitute(z0, series.variable(z0) * denom.power(-1))


class DividedPowerSeries:
    """Sum_n A_n X^(n) with scalar series A_n and X^(a) X^(b) = binom(a+b, a) X^(a+b)."""

    def __init__(self, coeffs: Mapping[int, TruncSeries]):
        self.coeffs = {n: s for n, s in coeffs.items() if not s.is_zero()}

    @classmethod
    def exp(cls, arg: TruncSeries) -> DividedPowerSeries:
        """e^{arg X} = sum_n arg^n X^(n)."""
        if arg.constant_term():
            raise SeriesError("exponent argument must have zero constant term")
        coeffs, term = {}, arg.one()
        for n in range(arg.cutoff + 1):
            coeffs[n] = term
            term = term * arg
        return cls(coeffs)

    def __mul__(self, other: DividedPowerSeries) -> DividedPowerSeries:
        out: dict[int, TruncSeries] = {}
        for a, sa in self.coeffs.items():
            for b, sb in other.coeffs.items():
                c = binom_mod(a + b, a, sa.p)
                if not c:
                    continue
                term = (sa * sb).scale(c)
                out[a + b] = out[a + b] + term if a + b in out else term
        return DividedPowerSeries(out)

    def __eq__(self, other):
        if not isinstance(other, DividedPowerSeries):
            return NotImplemented
        return self.coeffs.keys() == other.coeffs.keys() and all(
            self.coeffs[n] == other.coeffs[n] for n in self.coeffs)
