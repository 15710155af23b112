"""Truncated vacuum vertex algebras over F_p.

A carrier is V_g(l, 0) (affine, level l) or V_Vir(c, 0) with a truncation
N. Vectors are sparse combinations of canonical PBW words: tuples of
creation modes applied to the vacuum, ordered by (mode index, generator).
"""

from __future__ import annotations

import logging
import threading
from typing import Iterable, Iterator, Optional, Sequence

from hopf import HElement
from lie import AffineAlgebra, LieSpec, Mode, VirasoroAlgebra, load_lie_algebra
from modp import binom_int, binom_mod, check_prime

logger = logging.getLogger(__name__)

Word = tuple[Mode, ...]
VACUUM: Word = ()


class TruncationError(ValueError):
    """A result would leave the carrier's degree window."""

    def __init__(self, requested: int, allowed: int):
        self.requested = requested
        self.allowed = allowed
        super().__init__(f"degree {requested} exceeds truncation {allowed}")


def word_degree(word: Word) -> int:
    return -sum(m.index for m in word)


def _word_key(word: Word) -> tuple:
    return tuple((m.index, m.gen) for m in word)


def _add_into(acc: dict, word: Word, c: int):
    acc[word] = acc.get(word, 0) + c


class GradedVector:
    """Sparse vector of a carrier: canonical word -> residue."""

    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms: dict | None = None):
        self.p = p
        self.terms: dict[Word, int] = {w: c % p for w, c in (terms or {}).items() if c % p}

    @classmethod
    def basis_vector(cls, p: int, word: Word) -> GradedVector:
        return cls(p, {word: 1})

    def items(self) -> Iterator[tuple[Word, int]]:
        return iter(sorted(self.terms.items(), key=lambda t: (word_degree(t[0]), _word_key(t[0]))))

    def coeff(self, word: Word) -> int:
        return self.terms.get(word, 0)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> list[int]:
        return sorted({word_degree(w) for w in self.terms})

    def degree(self) -> Optional[int]:
        """The degree if homogeneous (0 for the zero vector), else None."""
        degrees = self.degrees()
        if len(degrees) > 1:
            return None
        return degrees[0] if degrees else 0

    def component(self, n: int) -> GradedVector:
        return GradedVector(self.p, {w: c for w, c in self.terms.items() if word_degree(w) == n})

    def scale(self, c: int) -> GradedVector:
        return GradedVector(self.p, {w: c * v for w, v in self.terms.items()})

    def __add__(self, other: GradedVector) -> GradedVector:
        out = dict(self.terms)
        for w, c in other.terms.items():
            _add_into(out, w, c)
        return GradedVector(self.p, out)

    def __sub__(self, other: GradedVector) -> GradedVector:
        return self + other.scale(-1)

    def __neg__(self) -> GradedVector:
        return self.scale(-1)

    def __eq__(self, other):
        if not isinstance(other, GradedVector):
            return NotImplemented
        return self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, frozenset(self.terms.items())))

    def coordinates(self, basis: Sequence[Word]) -> list[int]:
        return [self.terms.get(w, 0) for w in basis]

    @classmethod
    def from_coordinates(cls, p: int, basis: Sequence[Word], coords: Sequence[int]) -> GradedVector:
        return cls(p, dict(zip(basis, coords)))


class Carrier:
    """Vacuum module with normal ordering, vertex-operator modes and the H-action."""

    kind = "carrier"

    def __init__(self, algebra, central_value: int, max_degree: int, label: str):
        if max_degree < 0:
            raise ValueError(f"truncation must be nonnegative, got {max_degree}")
        self.algebra = algebra
        self.p = algebra.p
        self.central_value = central_value % self.p
        self.max_degree = max_degree
        self.label = label
        self.weight = algebra.weight
        self._lock = threading.Lock()
        self._apply_cache: dict = {}
        self._composite_cache: dict = {}
        self._h_cache: dict = {}
        self._basis_cache: dict[int, list[Word]] = {}

    # ── modes ──────────────────────────────────────────────────

    @property
    def generators(self) -> tuple[str, ...]:
        return self.algebra.generators

    def is_creation(self, mode: Mode) -> bool:
        return mode.index <= -self.weight

    def creation_modes(self, s_max: int) -> list[Mode]:
        return [Mode(g, -s) for s in range(self.weight, s_max + 1) for g in range(len(self.generators))]

    def vertex_mode(self, gen: int, m: int) -> Mode:
        """Lie mode of the m-th vertex-operator mode of a generator."""
        return Mode(gen, m - (self.weight - 1))

    def mode_adjoint(self, mode: Mode) -> tuple[int, Mode]:
        """Coefficient and mode of the form adjoint of a Lie mode."""
        sign = -1 if self.weight % 2 else 1
        return sign % self.p, Mode(mode.gen, -mode.index)

    def generator_vector(self, gen: int) -> GradedVector:
        return GradedVector.basis_vector(self.p, (Mode(gen, -self.weight),))

    def vacuum(self) -> GradedVector:
        return GradedVector.basis_vector(self.p, VACUUM)

    def _store(self, cache: dict, key, value):
        with self._lock:
            return cache.setdefault(key, value)

    def _check(self, degree: int):
        if degree > self.max_degree:
            raise TruncationError(degree, self.max_degree)

    # ── basis ──────────────────────────────────────────────────

    def basis(self, n: int) -> list[Word]:
        """Canonical words of degree n (no truncation check)."""
        if n < 0:
            return []
        cached = self._basis_cache.get(n)
        if cached is not None:
            return cached
        words: list[Word] = []

        def extend(prefix: list[Mode], remaining: int, last: tuple):
            if remaining == 0:
                words.append(tuple(prefix))
                return
            for mode in self.creation_modes(remaining):
                key = (mode.index, mode.gen)
                if key >= last:
                    prefix.append(mode)
                    extend(prefix, remaining - mode.degree, key)
                    prefix.pop()

        extend([], n, (-n - 1, -1))
        words.sort(key=_word_key)
        return self._store(self._basis_cache, n, words)

    def enumerate_basis(self, n: int) -> list[Word]:
        if n < 0 or n > self.max_degree:
            raise TruncationError(n, self.max_degree)
        return self.basis(n)

    def dimension(self, n: int) -> int:
        return len(self.basis(n))

    def expected_dimension(self, n: int) -> int:
        """Coefficient of q^n in prod_{s >= weight} (1 - q^s)^(-number of generators)."""
        if n < 0:
            return 0
        d = len(self.generators)
        series = [1] + [0] * n
        for s in range(self.weight, n + 1):
            factor = [0] * (n + 1)
            for t in range(n // s + 1):
                factor[s * t] = binom_int(d + t - 1, t)
            series = [sum(series[i] * factor[k - i] for i in range(k + 1)) for k in range(n + 1)]
        return series[n]

    # ── normal ordering ────────────────────────────────────────

    def _apply_word(self, mode: Mode, word: Word) -> dict[Word, int]:
        key = (mode, word)
        cached = self._apply_cache.get(key)
        if cached is not None:
            return cached
        p = self.p
        if not word:
            result = {(mode,): 1} if self.is_creation(mode) else {}
        elif self.is_creation(mode) and (mode.index, mode.gen) <= (word[0].index, word[0].gen):
            result = {(mode,) + word: 1}
        else:
            # X h rest = h (X rest) + [X, h] rest
            head, rest = word[0], word[1:]
            acc: dict[Word, int] = {}
            for w, c in self._apply_word(mode, rest).items():
                for w2, c2 in self._apply_word(head, w).items():
                    _add_into(acc, w2, c * c2)
            modes, central = self.algebra.mode_bracket(mode, head)
            for m2, c2 in modes.items():
                for w2, c3 in self._apply_word(m2, rest).items():
                    _add_into(acc, w2, c2 * c3)
            if central:
                _add_into(acc, rest, central * self.central_value)
            result = {w: c % p for w, c in acc.items() if c % p}
        return self._store(self._apply_cache, key, result)

    def _apply_dict(self, mode: Mode, terms: dict[Word, int]) -> dict[Word, int]:
        acc: dict[Word, int] = {}
        for w, c in terms.items():
            for w2, c2 in self._apply_word(mode, w).items():
                _add_into(acc, w2, c * c2)
        return acc

    def apply_mode(self, mode: Mode, w: GradedVector) -> GradedVector:
        """Left-multiply a Lie mode and re-normal-order."""
        if w.terms:
            self._check(max(w.degrees()) + mode.degree)
        return GradedVector(self.p, self._apply_dict(mode, w.terms))

    def normal_order_word(self, modes: Sequence[Mode]) -> GradedVector:
        """Normal form of modes[0] modes[1] ... modes[-1] applied to the vacuum."""
        self._check(sum(m.degree for m in modes))
        terms: dict[Word, int] = {VACUUM: 1}
        for mode in reversed(modes):
            terms = self._apply_dict(mode, terms)
        return GradedVector(self.p, terms)

    def lie_mode(self, gen: int, n: int, w: GradedVector) -> GradedVector:
        """a(n) w, or L_n w on the Virasoro carrier."""
        return self.apply_mode(Mode(gen, n), w)

    def generator_mode(self, gen: int, m: int, w: GradedVector) -> GradedVector:
        """m-th vertex-operator mode of a generator: a_m = a(m), omega_m = L_{m-1}."""
        return self.apply_mode(self.vertex_mode(gen, m), w)

    # ── composite modes ────────────────────────────────────────

    def _composite_word(self, vword: Word, m: int, wword: Word) -> dict[Word, int]:
        if not vword:
            return {wword: 1} if m == -1 else {}
        if word_degree(vword) - m - 1 + word_degree(wword) < 0:
            return {}
        key = (vword, m, wword)
        cached = self._composite_cache.get(key)
        if cached is not None:
            return cached
        p = self.p
        head, rest = vword[0], vword[1:]
        gen = head.gen
        n = head.index + self.weight - 1
        sign_n = -1 if n % 2 else 1
        du, dw = word_degree(rest), word_degree(wword)
        bound = max(du + dw - m - 1, dw + self.weight - 1)
        acc: dict[Word, int] = {}
        # (g_n u)_m w = sum_i (-1)^i binom(n, i) (g_{n-i} u_{m+i} w - (-1)^n u_{n+m-i} g_i w)
        for i in range(bound + 1):
            b = binom_mod(n, i, p)
            if not b:
                continue
            if i % 2:
                b = -b
            inner = self._composite_word(rest, m + i, wword)
            if inner:
                for w2, c2 in self._apply_dict(self.vertex_mode(gen, n - i), inner).items():
                    _add_into(acc, w2, b * c2)
            for w2, c2 in self._apply_word(self.vertex_mode(gen, i), wword).items():
                for w3, c3 in self._composite_word(rest, n + m - i, w2).items():
                    _add_into(acc, w3, -sign_n * b * c2 * c3)
        result = {w: c % p for w, c in acc.items() if c % p}
        return self._store(self._composite_cache, key, result)

    def composite_raw(self, v: GradedVector, m: int, w: GradedVector) -> dict[Word, int]:
        acc: dict[Word, int] = {}
        for vw, vc in v.terms.items():
            for ww, wc in w.terms.items():
                for w2, c in self._composite_word(vw, m, ww).items():
                    _add_into(acc, w2, vc * wc * c)
        return acc

    def composite_mode(self, v: GradedVector, m: int, w: GradedVector) -> GradedVector:
        """v_m w for an arbitrary vector v of the carrier."""
        if v.terms and w.terms:
            self._check(max(v.degrees()) - m - 1 + max(w.degrees()))
        return GradedVector(self.p, self.composite_raw(v, m, w))

    # ── H-action ───────────────────────────────────────────────

    def _h_word(self, kind: str, r: int, word: Word) -> dict[Word, int]:
        """Leibniz action of D^(r), H^(r) or E^(r) on a canonical word."""
        if r == 0:
            return {word: 1}
        if not word:
            return {}
        key = (kind, r, word)
        cached = self._h_cache.get(key)
        if cached is not None:
            return cached
        head, rest = word[0], word[1:]
        acc: dict[Word, int] = {}
        for r1 in range(r + 1):
            target, c = self.algebra.h_action_mode(kind, r1, head)
            if not c % self.p:
                continue
            for w2, c2 in self._h_word(kind, r - r1, rest).items():
                for w3, c3 in self._apply_word(target, w2).items():
                    _add_into(acc, w3, c * c2 * c3)
        result = {w: c % self.p for w, c in acc.items() if c % self.p}
        return self._store(self._h_cache, key, result)

    def h_raw(self, h: HElement, terms: dict[Word, int]) -> dict[Word, int]:
        acc: dict[Word, int] = {}
        for mono, hc in h.terms.items():
            current = dict(terms)
            for kind, r in (("E", mono.k), ("H", mono.j), ("D", mono.i)):
                if not r:
                    continue
                nxt: dict[Word, int] = {}
                for w, c in current.items():
                    for w2, c2 in self._h_word(kind, r, w).items():
                        _add_into(nxt, w2, c * c2)
                current = nxt
            for w, c in current.items():
                _add_into(acc, w, hc * c)
        return acc

    def h_action_vector(self, h: HElement, w: GradedVector) -> GradedVector:
        if w.terms and h.terms:
            self._check(max(w.degrees()) + max(m.degree for m in h.terms))
        return GradedVector(self.p, self.h_raw(h, w.terms))

    def h_generator(self, kind: str, r: int, w: GradedVector) -> GradedVector:
        return self.h_action_vector(HElement.generator(kind, r, self.p), w)

    # ── formatting ─────────────────────────────────────────────

    def format_word(self, word: Word) -> str:
        return " ".join([self.algebra.mode_name(m) for m in word] + ["1"])

    def format_vector(self, w: GradedVector) -> str:
        if w.is_zero():
            return "0"
        return " + ".join(f"{c}*{self.format_word(word)}" for word, c in w.items())


class AffineCarrier(Carrier):
    kind = "affine"

    def __init__(self, spec: LieSpec, level: int, max_degree: int = 6):
        super().__init__(AffineAlgebra(spec), level, max_degree, f"affine:{spec.name}")
        self.spec = spec
        self.level = level % self.p


class VirasoroCarrier(Carrier):
    kind = "virasoro"

    def __init__(self, p: int, c: int, max_degree: int = 6):
        super().__init__(VirasoroAlgebra(p), c, max_degree, "virasoro")
        self.c = c % self.p

    def omega(self) -> GradedVector:
        return self.generator_vector(0)


def build_carrier(name: str, p: int, level: int = 1, c: int = 0, max_degree: int = 6) -> Carrier:
    """Carrier from a CLI-style name: virasoro, affine:sl2, affine:abelian1 or affine:<spec.json>."""
    check_prime(p)
    if name == "virasoro":
        carrier: Carrier = VirasoroCarrier(p, c, max_degree)
    elif name.startswith("affine:"):
        spec = load_lie_algebra(name.split(":", 1)[1], p)
        carrier = AffineCarrier(spec, level, max_degree)
    else:
        raise ValueError(f"unknown carrier {name!r}; use virasoro or affine:<name|path>")
    logger.debug(f"Built carrier {carrier.label} (p={p}, N={max_degree})")
    return carrier


def same_carrier(carrier: Carrier, max_degree: int) -> Carrier:
    """A fresh carrier of the same kind with a different truncation."""
    if isinstance(carrier, AffineCarrier):
        return AffineCarrier(carrier.spec, carrier.level, max_degree)
    if isinstance(carrier, VirasoroCarrier):
        return VirasoroCarrier(carrier.p, carrier.c, max_degree)
    raise TypeError(f"unsupported carrier {type(carrier).__name__}")


def basis_vectors(carrier: Carrier, degrees: Iterable[int]) -> Iterator[tuple[Word, GradedVector]]:
    for n in degrees:
        for word in carrier.basis(n):
            yield word, GradedVector.basis_vector(carrier.p, word)
