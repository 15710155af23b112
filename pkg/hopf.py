"""The divided-power Hopf algebra H of sl2 over F_p.

Elements are F_p-combinations of normal-ordered monomials
D^(i) H^(j) E^(k), where D = L_{-1}, H = L_0, E = L_1 and X^(n) is the
n-th divided power. deg D^(n) = n, deg E^(n) = -n, deg H^(n) = 0.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple, Union

from modp import LaurentPoly, binom_mod, symmetric_residue


class HParseError(ValueError):
    pass


class HMonomial(NamedTuple):
    """Exponents of D^(i) H^(j) E^(k)."""
    i: int
    j: int
    k: int

    @property
    def degree(self) -> int:
        return self.i - self.k

    def __str__(self):
        parts = [f"{name}^({e})" for name, e in zip("DHE", self) if e]
        return " ".join(parts) if parts else "1"


ONE = HMonomial(0, 0, 0)
GENERATORS = {"D": 0, "H": 1, "E": 2}


def _clean(terms: dict, p: int) -> dict:
    return {m: c % p for m, c in terms.items() if c % p}


class HElement:
    """A finite F_p-linear combination of HMonomials."""

    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms: dict | None = None):
        self.p = p
        self.terms: dict[HMonomial, int] = _clean(
            {HMonomial(*m): c for m, c in (terms or {}).items()}, p)

    @classmethod
    def one(cls, p: int) -> HElement:
        return cls(p, {ONE: 1})

    @classmethod
    def monomial(cls, p: int, i: int = 0, j: int = 0, k: int = 0, coeff: int = 1) -> HElement:
        return cls(p, {HMonomial(i, j, k): coeff})

    @classmethod
    def generator(cls, kind: str, r: int, p: int) -> HElement:
        """D^(r), H^(r) or E^(r)."""
        exps = [0, 0, 0]
        exps[GENERATORS[kind]] = r
        return cls(p, {HMonomial(*exps): 1})

    def items(self) -> Iterator[tuple[HMonomial, int]]:
        return iter(sorted(self.terms.items(), key=lambda t: _print_key(t[0])))

    def coeff(self, mono: Iterable[int]) -> int:
        return self.terms.get(HMonomial(*mono), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def scale(self, c: int) -> HElement:
        return HElement(self.p, {m: c * v for m, v in self.terms.items()})

    def __add__(self, other: HElement) -> HElement:
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return HElement(self.p, out)

    def __sub__(self, other: HElement) -> HElement:
        return self + other.scale(-1)

    def __neg__(self) -> HElement:
        return self.scale(-1)

    def __mul__(self, other: HElement) -> HElement:
        return normal_order_product(self, other)

    def __eq__(self, other):
        if not isinstance(other, HElement):
            return NotImplemented
        return self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, frozenset(self.terms.items())))

    def __str__(self):
        return format_element(self)

    __repr__ = __str__


class HTensor:
    """Element of H (x) H as a map (HMonomial, HMonomial) -> F_p."""

    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms: dict | None = None):
        self.p = p
        self.terms: dict[tuple[HMonomial, HMonomial], int] = _clean(dict(terms or {}), p)

    @classmethod
    def pure(cls, a: HElement, b: HElement) -> HTensor:
        out: dict = {}
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                out[(m1, m2)] = out.get((m1, m2), 0) + c1 * c2
        return cls(a.p, out)

    def __add__(self, other: HTensor) -> HTensor:
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, 0) + c
        return HTensor(self.p, out)

    def __mul__(self, other: HTensor) -> HTensor:
        p = self.p
        out: dict = {}
        for (a1, a2), c in self.terms.items():
            for (b1, b2), d in other.terms.items():
                left = monomial_product(a1, b1, p)
                right = monomial_product(a2, b2, p)
                for m1, e1 in left:
                    for m2, e2 in right:
                        out[(m1, m2)] = out.get((m1, m2), 0) + c * d * e1 * e2
        return HTensor(p, out)

    def __eq__(self, other):
        if not isinstance(other, HTensor):
            return NotImplemented
        return self.p == other.p and self.terms == other.terms

    def __str__(self):
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda t: (_print_key(t[0][0]), _print_key(t[0][1])))
        return " + ".join(f"{symmetric_residue(c, self.p)}*({m1})⊗({m2})" for (m1, m2), c in items)

    __repr__ = __str__


# ── multiplication ─────────────────────────────────────────────

@lru_cache(maxsize=None)
def _h_product(m: int, n: int, p: int) -> tuple[tuple[int, int], ...]:
    """H^(m) H^(n) = sum_j binom(m, j) binom(n+j, m) H^(n+j)."""
    out = []
    for j in range(m + 1):
        c = binom_mod(m, j, p) * binom_mod(n + j, m, p) % p
        if c:
            out.append((n + j, c))
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_product(a: HMonomial, b: HMonomial, p: int) -> tuple[tuple[HMonomial, int], ...]:
    """Normal-ordered product of two monomials."""
    i, j, k = a
    i2, j2, k2 = b
    out: dict[HMonomial, int] = {}
    # E^(k) D^(i2) = sum_{t,s} (-1)^t binom(-k-i2+2t, s) D^(i2-t) H^(t-s) E^(k-t)
    for t in range(min(k, i2) + 1):
        sign = -1 if t % 2 else 1
        for s in range(t + 1):
            c1 = sign * binom_mod(-k - i2 + 2 * t, s, p)
            if not c1 % p:
                continue
            n, h_mid, e_left = i2 - t, t - s, k - t
            d_coef = binom_mod(i + n, i, p)
            e_coef = binom_mod(e_left + k2, e_left, p)
            if not d_coef or not e_coef:
                continue
            # H^(j) D^(n) = sum_u binom(-2n, u) D^(n) H^(j-u)
            for u in range(j + 1):
                c2 = binom_mod(-2 * n, u, p)
                if not c2:
                    continue
                for q, c3 in _h_product(j - u, h_mid, p):
                    # E^(e_left) H^(j2) = sum_v binom(-2 e_left, v) H^(j2-v) E^(e_left)
                    for v in range(j2 + 1):
                        c4 = binom_mod(-2 * e_left, v, p)
                        if not c4:
                            continue
                        for q2, c5 in _h_product(q, j2 - v, p):
                            mono = HMonomial(i + n, q2, e_left + k2)
                            out[mono] = (out.get(mono, 0)
                                         + c1 * c2 * c3 * c4 * c5 * d_coef * e_coef) % p
    return tuple((m, c) for m, c in sorted(out.items()) if c)


def normal_order_product(a: HElement, b: HElement) -> HElement:
    if a.p != b.p:
        raise ValueError(f"mixed moduli {a.p} and {b.p}")
    p = a.p
    out: dict[HMonomial, int] = {}
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            for m, c in monomial_product(m1, m2, p):
                out[m] = out.get(m, 0) + c1 * c2 * c
    return HElement(p, out)


def product(*factors: HElement) -> HElement:
    result = factors[0]
    for f in factors[1:]:
        result = normal_order_product(result, f)
    return result


# ── coalgebra and (anti)automorphisms ──────────────────────────

def _mono_coproduct(m: HMonomial) -> Iterator[tuple[HMonomial, HMonomial]]:
    i, j, k = m
    for r in range(i + 1):
        for s in range(j + 1):
            for u in range(k + 1):
                yield HMonomial(i - r, j - s, k - u), HMonomial(r, s, u)


def coproduct(a: HElement) -> HTensor:
    out: dict = {}
    for m, c in a.terms.items():
        for pair in _mono_coproduct(m):
            out[pair] = out.get(pair, 0) + c
    return HTensor(a.p, out)


def coproduct_left(a: HElement) -> dict:
    """(Delta (x) id) Delta on monomial triples."""
    out: dict = {}
    for (m1, m2), c in coproduct(a).terms.items():
        for x, y in _mono_coproduct(m1):
            out[(x, y, m2)] = (out.get((x, y, m2), 0) + c) % a.p
    return {key: c for key, c in out.items() if c}


def coproduct_right(a: HElement) -> dict:
    """(id (x) Delta) Delta on monomial triples."""
    out: dict = {}
    for (m1, m2), c in coproduct(a).terms.items():
        for x, y in _mono_coproduct(m2):
            out[(m1, x, y)] = (out.get((m1, x, y), 0) + c) % a.p
    return {key: c for key, c in out.items() if c}


def counit(a: HElement) -> int:
    return a.terms.get(ONE, 0)


def counit_left(t: HTensor) -> HElement:
    """(epsilon (x) id) applied to a tensor."""
    out: dict = {}
    for (m1, m2), c in t.terms.items():
        if m1 == ONE:
            out[m2] = out.get(m2, 0) + c
    return HElement(t.p, out)


def counit_right(t: HTensor) -> HElement:
    out: dict = {}
    for (m1, m2), c in t.terms.items():
        if m2 == ONE:
            out[m1] = out.get(m1, 0) + c
    return HElement(t.p, out)


def theta(a: HElement) -> HElement:
    """Anti-automorphism swapping D^(n) and E^(n), fixing H^(n).

    theta(D^(i) H^(j) E^(k)) = D^(k) H^(j) E^(i) is already normal ordered.
    """
    return HElement(a.p, {HMonomial(m.k, m.j, m.i): c for m, c in a.terms.items()})


@lru_cache(maxsize=None)
def _sigma_h(n: int, p: int) -> HElement:
    sign = -1 if n % 2 else 1
    terms = {HMonomial(0, n - i, 0): sign * binom_mod(n - 1, i, p) for i in range(n + 1)}
    return HElement(p, terms)


def sigma(a: HElement) -> HElement:
    """Automorphism swapping D^(n) and E^(n), sending H to -H."""
    p = a.p
    out = HElement(p)
    for m, c in a.terms.items():
        image = product(HElement.monomial(p, k=m.i), _sigma_h(m.j, p), HElement.monomial(p, i=m.k))
        out = out + image.scale(c)
    return out


def grade(a: HElement) -> Union[int, str]:
    """Common degree of all terms, or "mixed"."""
    degrees = {m.degree for m in a.terms}
    if len(degrees) > 1:
        return "mixed"
    return degrees.pop() if degrees else 0


# ── Laurent module algebra F_p[x, x^-1], deg x^m = -m ─────────

def _laurent_generator(kind: int, r: int, m: int, p: int) -> tuple[int, int]:
    if kind == 0:
        sign = -1 if r % 2 else 1
        return m - r, sign * binom_mod(m, r, p)
    if kind == 1:
        return m, binom_mod(2 * m, r, p)
    return m + r, binom_mod(-m, r, p)


def act_on_laurent(a: HElement, f: LaurentPoly) -> LaurentPoly:
    """Action of H on Laurent polynomials; E^(k) acts first, D^(i) last."""
    p = a.p
    out: dict[int, int] = {}
    for mono, c in a.terms.items():
        for m, fc in f.coeffs.items():
            exp, coeff = m, c * fc
            for kind in (2, 1, 0):
                if not coeff % p:
                    break
                exp, b = _laurent_generator(kind, mono[kind], exp, p)
                coeff *= b
            if coeff % p:
                out[exp] = out.get(exp, 0) + coeff
    return LaurentPoly(p, out)


# ── text syntax ────────────────────────────────────────────────

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<gen>[DHE])(?:\^\((?P<exp>\d+)\)|\^(?P<bare>\d+))?"
                    r"|(?P<op>[+\-])|(?P<star>\*))")


def _tokens(text: str) -> list[tuple[str, str]]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match or match.end() == pos:
            raise HParseError(f"unexpected input at position {pos}: {text[pos:pos + 10]!r}")
        pos = match.end()
        if match.group("num") is not None:
            out.append(("num", match.group("num")))
        elif match.group("gen") is not None:
            exp = match.group("exp") or match.group("bare") or "1"
            out.append(("gen", f"{match.group('gen')}{exp}"))
        elif match.group("op") is not None:
            out.append(("op", match.group("op")))
    return out


def parse_element(text: str, p: int) -> HElement:
    """Parse e.g. "E^(1) D^(1) - 2 H^(3) + 1" into a normal-ordered element."""
    tokens = _tokens(text)
    if not tokens:
        raise HParseError("empty expression")
    total = HElement(p)
    idx = 0
    while idx < len(tokens):
        sign = 1
        while idx < len(tokens) and tokens[idx][0] == "op":
            if tokens[idx][1] == "-":
                sign = -sign
            idx += 1
        term = HElement.one(p).scale(sign)
        consumed = 0
        while idx < len(tokens) and tokens[idx][0] != "op":
            kind, value = tokens[idx]
            if kind == "num":
                term = term.scale(int(value))
            else:
                term = term * HElement.generator(value[0], int(value[1:]), p)
            idx += 1
            consumed += 1
        if not consumed:
            raise HParseError(f"dangling operator in {text!r}")
        total = total + term
    return total


def _print_key(m: HMonomial) -> tuple:
    return (-(m.i + m.j + m.k), -m.i, -m.j, -m.k)


def format_element(a: HElement) -> str:
    """Deterministic text form with residues in (-p/2, p/2]."""
    if a.is_zero():
        return "0"
    out = []
    for n, (mono, c) in enumerate(a.items()):
        c = symmetric_residue(c, a.p)
        mag = abs(c)
        if mono == ONE:
            body = str(mag)
        else:
            body = f"{mag} {mono}" if mag != 1 else str(mono)
        if n == 0:
            out.append(f"-{body}" if c < 0 else body)
        else:
            out.append(f" - {body}" if c < 0 else f" + {body}")
    return "".join(out)
