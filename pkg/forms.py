"""Invariant bilinear forms on vacuum carriers and their contragredient duals.

The form is pinned by (1, 1) = 1: a pairing (x u, v) with x the leading
creation mode of u is moved across as (u, x' v), where x' is the adjoint
mode, until both sides reach the vacuum.
"""

from __future__ import annotations

import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from hopf import HElement, theta
from linalg import as_matrix, in_row_space, matmul_mod, nullspace_mod, rank_mod, row_space_mod
from lie import Mode
from models import FormSpaceResult, GramRow, GramTable, SubsetCheck
from vacuum import VACUUM, Carrier, GradedVector, TruncationError, Word, word_degree

logger = logging.getLogger(__name__)


# ── adjoint modes ──────────────────────────────────────────────

@dataclass(frozen=True)
class AdjointTerm:
    """One summand coeff * (vector)_mode of an adjoint mode."""
    coeff: int
    vector: GradedVector
    mode: int


def adjoint_modes(carrier: Carrier, v: GradedVector, m: int) -> list[AdjointTerm]:
    """v'_m = (-1)^d sum_i (E^(i) v)_{2d - m - 2 - i} for v homogeneous of degree d."""
    d = v.degree()
    if d is None:
        raise ValueError("adjoint modes need a homogeneous vector")
    if v.is_zero():
        return []
    sign = (-1) ** d % carrier.p
    terms = []
    for i in range(d + 1):
        u = GradedVector(carrier.p, carrier.h_raw(HElement.generator("E", i, carrier.p), v.terms))
        if not u.is_zero():
            terms.append(AdjointTerm(sign, u, 2 * d - m - 2 - i))
    return terms


def apply_adjoint(carrier: Carrier, expansion: list[AdjointTerm], w: GradedVector) -> GradedVector:
    acc = GradedVector(carrier.p)
    for term in expansion:
        acc = acc + GradedVector(carrier.p, carrier.composite_raw(term.vector, term.mode, w)).scale(term.coeff)
    return acc


# ── the form ───────────────────────────────────────────────────

class InvariantForm:
    """The invariant form on a carrier normalized by (1, 1) = 1."""

    def __init__(self, carrier: Carrier):
        self.carrier = carrier
        self.p = carrier.p
        self._cache: dict[tuple[Word, Word], int] = {}
        self._lock = threading.Lock()

    def pair_words(self, u: Word, v: Word) -> int:
        if word_degree(u) != word_degree(v):
            return 0
        if not u:
            return 1 if not v else 0
        key = (u, v)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        coeff, adj = self.carrier.mode_adjoint(u[0])
        total = 0
        for w, c in self.carrier._apply_word(adj, v).items():
            total += c * self.pair_words(u[1:], w)
        value = coeff * total % self.p
        with self._lock:
            self._cache[key] = value
        return value

    def pair_words_right(self, u: Word, v: Word) -> int:
        """Same pairing, peeling the leading mode of v instead of u."""
        if word_degree(u) != word_degree(v):
            return 0
        if not v:
            return 1 if not u else 0
        coeff, adj = self.carrier.mode_adjoint(v[0])
        total = 0
        for w, c in self.carrier._apply_word(adj, u).items():
            total += c * self.pair_words_right(w, v[1:])
        return coeff * total % self.p

    def pair(self, u: GradedVector, v: GradedVector) -> int:
        return sum(cu * cv * self.pair_words(wu, wv)
                   for wu, cu in u.terms.items() for wv, cv in v.terms.items()) % self.p

    def gram_matrix(self, n: int) -> list[list[int]]:
        basis = self.carrier.enumerate_basis(n)
        return [[self.pair_words(u, v) for v in basis] for u in basis]

    def in_radical(self, u: GradedVector) -> bool:
        """u pairs to zero with its own degree (block-diagonality covers the rest)."""
        for n in u.degrees():
            part = u.component(n)
            for v in self.carrier.basis(n):
                if self.pair(part, GradedVector.basis_vector(self.p, v)):
                    return False
        return True


def rank_radical(matrix: list[list[int]], p: int) -> tuple[int, list[list[int]]]:
    """Rank and kernel basis of a square Gram matrix over F_p."""
    n = len(matrix)
    A = as_matrix(matrix, n, p)
    return rank_mod(A, p), nullspace_mod(A, p)


def gram_row(form: InvariantForm, n: int) -> GramRow:
    carrier = form.carrier
    basis = carrier.enumerate_basis(n)
    matrix = form.gram_matrix(n)
    rank, radical = rank_radical(matrix, carrier.p)
    logger.debug(f"{carrier.label} degree {n}: dim {len(basis)}, rank {rank}")
    return GramRow(degree=n, basis=[carrier.format_word(w) for w in basis],
                   matrix=matrix, rank=rank, radical=radical)


def gram_table(carrier: Carrier, workers: int = 1, form: Optional[InvariantForm] = None) -> GramTable:
    """Gram rows for every degree 0..N; degrees run concurrently with `workers` > 1."""
    form = form or InvariantForm(carrier)
    degrees = range(carrier.max_degree + 1)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda n: gram_row(form, n), degrees))
    else:
        rows = [gram_row(form, n) for n in degrees]
    return GramTable(carrier=carrier.label, p=carrier.p, rows=rows)


def simple_quotient_dims(carrier: Carrier, workers: int = 1) -> list[tuple[int, int]]:
    """Graded dimension of the simple quotient: the Gram rank per degree."""
    table = gram_table(carrier, workers)
    return [(row.degree, row.rank) for row in table.rows]


# ── form space and related subspaces of V_0 ───────────────────

def _degree_zero_span(carrier: Carrier, kind: str) -> tuple[list[list[int]], int]:
    """Vectors X^(n) V_{+-n} in V_0 for n = 1..N and the last degree that grew the span."""
    p = carrier.p
    zero_basis = carrier.basis(0)
    vectors: list[list[int]] = []
    last_growth = 0
    for n in range(1, carrier.max_degree + 1):
        source = carrier.basis(n if kind == "E" else -n)
        h = HElement.generator(kind, n, p)
        for word in source:
            image = GradedVector(p, carrier.h_raw(h, {word: 1}))
            coords = image.coordinates(zero_basis)
            if any(coords) and not in_row_space(coords, vectors, p):
                vectors.append(coords)
                last_growth = n
    return vectors, last_growth


def form_space_dim(carrier: Carrier) -> FormSpaceResult:
    """dim (V_0 / sum_n E^(n) V_n)^*, with a flag for whether the span settled before N."""
    vectors, last_growth = _degree_zero_span(carrier, "E")
    dim_zero = len(carrier.basis(0))
    span_dim = len(vectors)
    stabilized = last_growth < carrier.max_degree or span_dim == dim_zero
    if not stabilized:
        logger.warning(f"{carrier.label}: form space is truncation-limited at N={carrier.max_degree}")
    return FormSpaceResult(dim=dim_zero - span_dim, stabilized=stabilized,
                           span_dim=span_dim, last_growth_degree=last_growth)


def lminus_subset_check(carrier: Carrier) -> SubsetCheck:
    """Is (D^+ V)_0 contained in (E^+ V)_0 within the window?"""
    lplus, _ = _degree_zero_span(carrier, "E")
    lminus, _ = _degree_zero_span(carrier, "D")
    for vec in lminus:
        if not in_row_space(vec, lplus, carrier.p):
            return SubsetCheck(holds=False, lminus=lminus, lplus=lplus, witness=vec)
    return SubsetCheck(holds=True, lminus=lminus, lplus=lplus)


def _operator_kernel(carrier: Carrier, n: int, images) -> list[list[int]]:
    """Kernel on V_n of the stacked maps given as {source word: {target word: c}} dicts."""
    basis = carrier.basis(n)
    rows_index: dict = {}
    for per_basis in images:
        for word in basis:
            for key in per_basis[word]:
                rows_index.setdefault(key, len(rows_index))
    A = np.zeros((len(rows_index), len(basis)), dtype=np.int64)
    for per_basis in images:
        for col, word in enumerate(basis):
            for key, c in per_basis[word].items():
                A[rows_index[key], col] = (A[rows_index[key], col] + c) % carrier.p
    return nullspace_mod(A, carrier.p)


def fixed_space(carrier: Carrier, n: int) -> list[list[int]]:
    """Coordinates of vectors in V_n killed by E^(r) (1 <= r <= n) and by D^(p^t).

    D^(r) for r >= 1 is generated by the D^(p^t); powers up to max(p, N) are tested.
    """
    p = carrier.p
    images = []
    for r in range(1, n + 1):
        h = HElement.generator("E", r, p)
        images.append({w: {("E", r, k): c for k, c in carrier.h_raw(h, {w: 1}).items()}
                       for w in carrier.basis(n)})
    q = 1
    while q <= max(p, carrier.max_degree):
        h = HElement.generator("D", q, p)
        images.append({w: {("D", q, k): c for k, c in carrier.h_raw(h, {w: 1}).items()}
                       for w in carrier.basis(n)})
        q *= p
    return _operator_kernel(carrier, n, images)


def lowering_modes(carrier: Carrier, k: int) -> list[Mode]:
    return [Mode(g, k) for g in range(len(carrier.generators))]


def radical_oracle(carrier: Carrier) -> dict[int, list[list[int]]]:
    """Maximal graded submodule slice per degree: vectors that every word of
    lowering modes sends to zero in V_0. Independent of the form."""
    p = carrier.p
    quotients: dict[int, np.ndarray] = {0: np.ones((1, 1), dtype=np.int64)}
    result: dict[int, list[list[int]]] = {0: []}
    for n in range(1, carrier.max_degree + 1):
        basis = carrier.basis(n)
        blocks = []
        for k in range(1, n + 1):
            target = carrier.basis(n - k)
            Q = quotients[n - k]
            if Q.shape[0] == 0:
                continue
            index = {w: i for i, w in enumerate(target)}
            for mode in lowering_modes(carrier, k):
                M = np.zeros((len(target), len(basis)), dtype=np.int64)
                for col, word in enumerate(basis):
                    for w, c in carrier._apply_word(mode, word).items():
                        M[index[w], col] = (M[index[w], col] + c) % p
                blocks.append(matmul_mod(Q, M, p))
        A = np.vstack(blocks) if blocks else np.zeros((0, len(basis)), dtype=np.int64)
        result[n] = nullspace_mod(A, p)
        rows = row_space_mod(A, p)
        quotients[n] = as_matrix(rows, len(basis), p)
    return result


# ── contragredient dual ────────────────────────────────────────

class DualCarrier:
    """Restricted dual of a carrier on degrees 0..window.

    A dual vector f of degree n is stored as a GradedVector whose word
    coefficients are the values of f on the basis words of V_n.
    """

    def __init__(self, carrier: Carrier, window: int):
        if window > carrier.max_degree:
            raise TruncationError(window, carrier.max_degree)
        self.carrier = carrier
        self.window = window
        self.p = carrier.p

    def dual_basis(self, n: int) -> list[GradedVector]:
        if not 0 <= n <= self.window:
            return []
        return [GradedVector.basis_vector(self.p, w) for w in self.carrier.basis(n)]

    def vacuum(self) -> GradedVector:
        return GradedVector.basis_vector(self.p, VACUUM)

    def pair(self, f: GradedVector, w: GradedVector) -> int:
        return sum(c * w.coeff(word) for word, c in f.terms.items()) % self.p

    def _functional(self, n: int, value_on) -> GradedVector:
        out = {}
        for word in self.carrier.basis(n):
            c = value_on(GradedVector.basis_vector(self.p, word))
            if c:
                out[word] = c
        return GradedVector(self.p, out)

    def h_action(self, a: HElement, f: GradedVector) -> GradedVector:
        """<a f, w> = <f, theta(a) w>."""
        result = GradedVector(self.p)
        by_degree: dict[int, HElement] = {}
        for mono, c in a.terms.items():
            by_degree[mono.degree] = by_degree.get(mono.degree, HElement(self.p)) + HElement(self.p, {mono: c})
        for n in f.degrees():
            part = f.component(n)
            for d, a_d in by_degree.items():
                target = n + d
                if not 0 <= target <= self.window:
                    continue
                ta = theta(a_d)
                result = result + self._functional(
                    target, lambda b: self.pair(part, GradedVector(self.p, self.carrier.h_raw(ta, b.terms))))
        return result

    def mode(self, v: GradedVector, m: int, f: GradedVector) -> GradedVector:
        """v'_m f, defined by <v'_m f, w> = <f, (adjoint of v_m) w>."""
        d = v.degree()
        if d is None:
            raise ValueError("dual modes need a homogeneous vector")
        expansion = adjoint_modes(self.carrier, v, m)
        result = GradedVector(self.p)
        for n in f.degrees():
            part = f.component(n)
            target = n + d - m - 1
            if not 0 <= target <= self.window:
                continue
            result = result + self._functional(
                target, lambda b: self.pair(part, apply_adjoint(self.carrier, expansion, b)))
        return result

    def form_map(self, form: InvariantForm, u: GradedVector) -> GradedVector:
        """The functional (u, .) on the window."""
        result = GradedVector(self.p)
        for n in u.degrees():
            if n <= self.window:
                part = u.component(n)
                result = result + self._functional(n, lambda b: form.pair(part, b))
        return result


def build_contragredient(carrier: Carrier, window: int) -> DualCarrier:
    return DualCarrier(carrier, window)
