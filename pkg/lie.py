"""Finite-dimensional Lie algebras with invariant form, their affinizations,
the Virasoro algebra, and the action of H on modes of both."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from itertools import product as cartesian
from pathlib import Path
from typing import Any, NamedTuple, Optional, Union

from hopf import HElement, HMonomial
from modp import binom_mod, check_prime, symmetric_residue

logger = logging.getLogger(__name__)


class LieSpecError(ValueError):
    """A Lie spec document that is malformed or violates an axiom."""

    def __init__(self, axiom: str, message: str, witness: Optional[tuple] = None):
        self.axiom = axiom
        self.witness = witness
        text = f"{axiom}: {message}"
        if witness:
            text += f" at ({', '.join(witness)})"
        super().__init__(text)


# ── finite-dimensional input ───────────────────────────────────

@dataclass
class LieSpec:
    """Basis names, structure constants c_ab^d and a symmetric invariant form."""
    p: int
    basis: tuple[str, ...]
    brackets: dict[tuple[int, int], dict[int, int]] = field(default_factory=dict)
    form: list[list[int]] = field(default_factory=list)
    name: str = "custom"

    @property
    def dim(self) -> int:
        return len(self.basis)

    def bracket_basis(self, a: int, b: int) -> dict[int, int]:
        return self.brackets.get((a, b), {})

    def bracket(self, x: dict[int, int], y: dict[int, int]) -> dict[int, int]:
        out: dict[int, int] = {}
        for a, ca in x.items():
            for b, cb in y.items():
                for d, cd in self.bracket_basis(a, b).items():
                    out[d] = (out.get(d, 0) + ca * cb * cd) % self.p
        return {d: c for d, c in out.items() if c}

    def pairing(self, x: dict[int, int], y: dict[int, int]) -> int:
        return sum(ca * cb * self.form[a][b] for a, ca in x.items() for b, cb in y.items()) % self.p

    def to_document(self) -> dict[str, Any]:
        triplets = []
        for (a, b), value in sorted(self.brackets.items()):
            if a < b:
                for d, c in sorted(value.items()):
                    triplets.append([self.basis[a], self.basis[b], self.basis[d], c])
        return {"p": self.p, "basis": list(self.basis), "brackets": triplets, "form": self.form}


def _unit(i: int) -> dict[int, int]:
    return {i: 1}


def validate_lie_spec(spec: LieSpec) -> LieSpec:
    """Check antisymmetry, form symmetry, Jacobi and invariance over all basis triples."""
    p, n, names = spec.p, spec.dim, spec.basis
    for a in range(n):
        if spec.bracket_basis(a, a):
            raise LieSpecError("antisymmetry", "[a, a] != 0", (names[a], names[a]))
    for a, b in cartesian(range(n), repeat=2):
        if (spec.form[a][b] - spec.form[b][a]) % p:
            raise LieSpecError("symmetry", "form is not symmetric", (names[a], names[b]))
    for a, b, c in cartesian(range(n), repeat=3):
        total: dict[int, int] = {}
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            for d, v in spec.bracket(_unit(x), spec.bracket(_unit(y), _unit(z))).items():
                total[d] = (total.get(d, 0) + v) % p
        if any(total.values()):
            raise LieSpecError("jacobi", "Jacobi identity fails", (names[a], names[b], names[c]))
    for a, b, c in cartesian(range(n), repeat=3):
        lhs = spec.pairing(spec.bracket(_unit(a), _unit(b)), _unit(c))
        rhs = spec.pairing(_unit(a), spec.bracket(_unit(b), _unit(c)))
        if (lhs - rhs) % p:
            raise LieSpecError("invariance", f"<[a,b],c> = {lhs} but <a,[b,c]> = {rhs}",
                               (names[a], names[b], names[c]))
    return spec


def spec_from_document(doc: dict[str, Any], p: Optional[int] = None, name: str = "custom") -> LieSpec:
    """Build and validate a LieSpec from {p, basis, brackets, form}."""
    if not isinstance(doc, dict):
        raise LieSpecError("format", "document must be a JSON object")
    doc_p = doc.get("p")
    if p is None and doc_p is None:
        raise LieSpecError("format", "no modulus given")
    if p is not None and doc_p is not None and int(doc_p) != p:
        raise LieSpecError("format", f"document modulus {doc_p} differs from requested {p}")
    p = check_prime(int(p if p is not None else doc_p))

    basis = doc.get("basis")
    if not isinstance(basis, list) or not basis or len(set(basis)) != len(basis):
        raise LieSpecError("format", "basis must be a nonempty list of distinct names")
    index = {str(b): i for i, b in enumerate(basis)}
    n = len(basis)

    explicit: dict[tuple[int, int], dict[int, int]] = {}
    for entry in doc.get("brackets", []):
        if not isinstance(entry, (list, tuple)) or len(entry) != 4:
            raise LieSpecError("format", f"bracket entry must be [a, b, d, coeff], got {entry!r}")
        a, b, d, coeff = entry
        try:
            key, target = (index[str(a)], index[str(b)]), index[str(d)]
        except KeyError as e:
            raise LieSpecError("format", f"unknown basis name {e.args[0]!r}") from None
        slot = explicit.setdefault(key, {})
        slot[target] = (slot.get(target, 0) + int(coeff)) % p

    brackets: dict[tuple[int, int], dict[int, int]] = {}
    for (a, b), value in explicit.items():
        value = {d: c for d, c in value.items() if c}
        if (b, a) in explicit and a != b:
            mirror = {d: c for d, c in explicit[(b, a)].items() if c}
            if {d: (-c) % p for d, c in value.items()} != mirror:
                raise LieSpecError("antisymmetry", "[a,b] != -[b,a]", (basis[a], basis[b]))
        if value:
            brackets[(a, b)] = value
            if a != b:
                brackets[(b, a)] = {d: (-c) % p for d, c in value.items()}

    form = doc.get("form")
    if not isinstance(form, list) or len(form) != n or any(
            not isinstance(row, list) or len(row) != n for row in form):
        raise LieSpecError("format", f"form must be a {n}x{n} matrix")
    form = [[int(v) % p for v in row] for row in form]

    spec = LieSpec(p=p, basis=tuple(str(b) for b in basis), brackets=brackets, form=form, name=name)
    return validate_lie_spec(spec)


_BUILTINS = {
    "sl2": {
        "basis": ["e", "h", "f"],
        "brackets": [["e", "f", "h", 1], ["h", "e", "e", 2], ["h", "f", "f", -2]],
        "form": [[0, 0, 1], [0, 2, 0], [1, 0, 0]],
    },
    "abelian1": {
        "basis": ["a"],
        "brackets": [],
        "form": [[1]],
    },
}


def builtin_names() -> list[str]:
    return sorted(_BUILTINS)


def load_lie_algebra(source: Union[str, Path, dict], p: Optional[int] = None) -> LieSpec:
    """Builtin by name, a JSON file path, or an already-parsed document."""
    if isinstance(source, dict):
        return spec_from_document(source, p)
    if isinstance(source, str) and source in _BUILTINS:
        if p is None:
            raise LieSpecError("format", f"builtin {source} needs a modulus")
        return spec_from_document(_BUILTINS[source], p, name=source)
    path = Path(source)
    if not path.is_file():
        raise LieSpecError("format", f"no builtin or file named {source!r}")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise LieSpecError("format", f"invalid JSON in {path}: {e}") from None
    logger.debug(f"Loaded Lie spec from {path}")
    return spec_from_document(doc, p, name=path.stem)


# ── loop modes ─────────────────────────────────────────────────

class Mode(NamedTuple):
    """Generator index and mode index: a(n) or L_n (gen = 0)."""
    gen: int
    index: int

    @property
    def degree(self) -> int:
        return -self.index


class ModeElement:
    """Finite combination of modes plus a multiple of the central element."""

    __slots__ = ("p", "terms", "central")

    def __init__(self, p: int, terms: dict | None = None, central: int = 0):
        self.p = p
        self.terms: dict[Mode, int] = {Mode(*m): c % p for m, c in (terms or {}).items() if c % p}
        self.central = central % p

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return type(self)(self.p, out, self.central + other.central)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c: int):
        return type(self)(self.p, {m: c * v for m, v in self.terms.items()}, c * self.central)

    def is_zero(self) -> bool:
        return not self.terms and not self.central

    def __eq__(self, other):
        if not isinstance(other, ModeElement):
            return NotImplemented
        return (self.p, self.terms, self.central) == (other.p, other.terms, other.central)

    def degrees(self) -> set[int]:
        return {m.degree for m in self.terms} | ({0} if self.central else set())


class AffineElement(ModeElement):
    __slots__ = ()
    central_name = "k"


class VirElement(ModeElement):
    __slots__ = ()
    central_name = "c"


def _h_monomial_steps(mono: HMonomial):
    """Generator factors of D^(i) H^(j) E^(k) in the order they act."""
    return (("E", mono.k), ("H", mono.j), ("D", mono.i))


class _LoopAlgebra:
    """Shared bracket and H-action plumbing for the affine and Virasoro algebras."""

    element_type: type = ModeElement
    weight = 1

    def __init__(self, p: int):
        self.p = check_prime(p)

    def mode_bracket(self, x: Mode, y: Mode) -> tuple[dict[Mode, int], int]:
        raise NotImplementedError

    def h_action_mode(self, kind: str, r: int, mode: Mode) -> tuple[Mode, int]:
        raise NotImplementedError

    def bracket(self, x: ModeElement, y: ModeElement) -> ModeElement:
        out: dict[Mode, int] = {}
        central = 0
        for m1, c1 in x.terms.items():
            for m2, c2 in y.terms.items():
                modes, k = self.mode_bracket(m1, m2)
                for m, c in modes.items():
                    out[m] = out.get(m, 0) + c1 * c2 * c
                central += c1 * c2 * k
        return self.element_type(self.p, out, central)

    def h_action_generator(self, kind: str, r: int, x: ModeElement) -> ModeElement:
        out: dict[Mode, int] = {}
        for m, c in x.terms.items():
            target, coeff = self.h_action_mode(kind, r, m)
            if coeff:
                out[target] = out.get(target, 0) + c * coeff
        return self.element_type(self.p, out, x.central if r == 0 else 0)

    def h_action(self, h: HElement, x: ModeElement) -> ModeElement:
        total = self.element_type(self.p)
        for mono, c in h.terms.items():
            y = x
            for kind, r in _h_monomial_steps(mono):
                if r:
                    y = self.h_action_generator(kind, r, y)
            total = total + y.scale(c)
        return total

    def element(self, terms: dict, central: int = 0) -> ModeElement:
        return self.element_type(self.p, terms, central)

    def format(self, x: ModeElement) -> str:
        parts = [f"{symmetric_residue(c, self.p)}*{self.mode_name(m)}" for m, c in sorted(x.terms.items())]
        if x.central:
            parts.append(f"{symmetric_residue(x.central, self.p)}*{x.central_name}")
        return " + ".join(parts) if parts else "0"

    def mode_name(self, mode: Mode) -> str:
        raise NotImplementedError


class AffineAlgebra(_LoopAlgebra):
    """g (x) F[t, 1/t] + F k with [a(m), b(n)] = [a,b](m+n) + m <a,b> delta_{m+n,0} k."""

    element_type = AffineElement
    weight = 1

    def __init__(self, spec: LieSpec):
        super().__init__(spec.p)
        self.spec = spec

    @property
    def generators(self) -> tuple[str, ...]:
        return self.spec.basis

    def mode_bracket(self, x: Mode, y: Mode) -> tuple[dict[Mode, int], int]:
        n = x.index + y.index
        modes = {Mode(d, n): c for d, c in self.spec.bracket_basis(x.gen, y.gen).items()}
        central = x.index * self.spec.form[x.gen][y.gen] if n == 0 else 0
        return modes, central % self.p

    def h_action_mode(self, kind: str, r: int, mode: Mode) -> tuple[Mode, int]:
        g, n = mode
        if kind == "D":
            sign = -1 if r % 2 else 1
            return Mode(g, n - r), sign * binom_mod(n, r, self.p)
        if kind == "E":
            return Mode(g, n + r), binom_mod(-n, r, self.p)
        return mode, binom_mod(2 * n, r, self.p)

    def mode_name(self, mode: Mode) -> str:
        return f"{self.spec.basis[mode.gen]}({mode.index})"


class VirasoroAlgebra(_LoopAlgebra):
    """[L_m, L_n] = (m-n) L_{m+n} + 1/2 binom(m+1, 3) delta_{m+n,0} c."""

    element_type = VirElement
    weight = 2
    generators = ("L",)

    def mode_bracket(self, x: Mode, y: Mode) -> tuple[dict[Mode, int], int]:
        m, n = x.index, y.index
        coeff = (m - n) % self.p
        modes = {Mode(0, m + n): coeff} if coeff else {}
        central = 0
        if m + n == 0:
            half = (self.p + 1) // 2
            central = half * binom_mod(m + 1, 3, self.p) % self.p
        return modes, central

    def h_action_mode(self, kind: str, r: int, mode: Mode) -> tuple[Mode, int]:
        n = mode.index
        if kind == "D":
            sign = -1 if r % 2 else 1
            return Mode(0, n - r), sign * binom_mod(n + 1, r, self.p)
        if kind == "E":
            return Mode(0, n + r), binom_mod(-n + 1, r, self.p)
        return mode, binom_mod(2 * n, r, self.p)

    def mode_name(self, mode: Mode) -> str:
        return f"L({mode.index})"
