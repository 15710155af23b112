"""Named verification suites.

Each suite builds its own carrier from a RunConfig, runs a family of exact
checks and returns a SuiteReport. Failures are kept minimal-first.
"""

from __future__ import annotations

import logging
import random
from concurrent.futures import ThreadPoolExecutor
from itertools import product as cartesian
from typing import Callable, Iterable, Optional

import config
from forms import (DualCarrier, InvariantForm, adjoint_modes, apply_adjoint, fixed_space,
                   form_space_dim, gram_row, lminus_subset_check, radical_oracle)
from hopf import (HElement, HMonomial, act_on_laurent, coproduct, coproduct_left,
                  coproduct_right, counit, counit_left, counit_right, grade, monomial_product,
                  normal_order_product, sigma, theta)
from lie import AffineAlgebra, Mode, VirasoroAlgebra, load_lie_algebra
from linalg import as_matrix, rank_mod
from modp import LaurentPoly, binom_mod, hasse_deriv, lucas_binomial
from models import RunConfig, SuiteFailure, SuiteReport
from series import TruncSeries, one_minus_product
from vacuum import (VACUUM, Carrier, GradedVector, Word, basis_vectors,
                    build_carrier, same_carrier, word_degree)

logger = logging.getLogger(__name__)


class SuiteError(ValueError):
    pass


class _Checker:
    """Counts checks and keeps failures with a minimality key."""

    def __init__(self, report: SuiteReport, max_failures: int):
        self.report = report
        self.max_failures = max_failures

    def check(self, inputs: str, lhs, rhs, key: tuple = (), fmt: Callable = str) -> bool:
        self.report.attempted += 1
        if lhs == rhs:
            self.report.passed += 1
            return True
        self.report.failures.append(SuiteFailure(inputs=inputs, lhs=fmt(lhs), rhs=fmt(rhs), key=key))
        return False

    def tally(self):
        """Count a check that passed without building its witness."""
        self.report.attempted += 1
        self.report.passed += 1

    def finish(self) -> SuiteReport:
        self.report.failures.sort(key=lambda f: (f.key, f.inputs))
        del self.report.failures[self.max_failures:]
        return self.report


def _settings(overrides: Optional[dict]) -> dict:
    merged = dict(config.DEFAULT_SUITE_SETTINGS)
    merged.update(overrides or {})
    return merged


def _params(cfg: RunConfig, settings: dict, keys: Iterable[str], carrier: bool = True) -> dict:
    params = {"p": cfg.p, "seed": cfg.seed}
    if carrier:
        params["carrier"] = cfg.carrier
        params["max_degree"] = cfg.max_degree
        if cfg.carrier == "virasoro":
            params["c"] = cfg.c
        else:
            params["level"] = cfg.level
    for key in keys:
        params[key] = settings[key]
    return params


def _carrier(cfg: RunConfig, max_degree: Optional[int] = None) -> Carrier:
    return build_carrier(cfg.carrier, cfg.p, cfg.level, cfg.c,
                         cfg.max_degree if max_degree is None else max_degree)


def _fmt_vector(carrier: Carrier):
    def fmt(terms) -> str:
        vec = terms if isinstance(terms, GradedVector) else GradedVector(carrier.p, terms)
        return carrier.format_vector(vec)
    return fmt


def _vec(carrier: Carrier, terms: dict) -> GradedVector:
    return GradedVector(carrier.p, terms)


def _add(acc: dict, terms: dict, c: int = 1):
    for w, v in terms.items():
        acc[w] = acc.get(w, 0) + c * v


# ── shared engine for series identities ────────────────────────

VectorSeries = dict[tuple[int, ...], dict[Word, int]]


def _clean_series(series: VectorSeries, p: int) -> VectorSeries:
    out = {}
    for exps, terms in series.items():
        clean = {w: c % p for w, c in terms.items() if c % p}
        if clean:
            out[exps] = clean
    return out


def verify_truncated_identity(lhs: Callable[[dict], VectorSeries], rhs: Callable[[dict], VectorSeries],
                              vectors: Iterable[tuple[Word, GradedVector]], orders: list[tuple[int, ...]],
                              p: int) -> tuple[bool, Optional[tuple], int]:
    """Compare both sides coefficientwise for every vector and exponent in `orders`.

    Returns (equal, first witness (word, exponents, lhs, rhs), number of coefficients compared).
    """
    compared = 0
    for word, vec in vectors:
        left = _clean_series(lhs(vec.terms), p)
        right = _clean_series(rhs(vec.terms), p)
        for exps in orders:
            compared += 1
            a, b = left.get(exps, {}), right.get(exps, {})
            if a != b:
                return False, (word, exps, a, b), compared
    return True, None, compared


class _SeriesOps:
    """Operator series in z, z0 with each exponent capped at `order`."""

    def __init__(self, carrier: Carrier, order: int):
        self.carrier = carrier
        self.p = carrier.p
        self.order = order
        self.variables = ("z", "z0")
        self.cutoff = 2 * order
        self.one = TruncSeries.constant(self.variables, self.p, self.cutoff)
        self.z = self.one.variable("z")
        self.z0 = self.one.variable("z0")
        self.one_minus = one_minus_product(self.variables, self.p, self.cutoff, "z", "z0")
        self._powers: dict[int, TruncSeries] = {}

    def one_minus_power(self, e: int) -> TruncSeries:
        if e not in self._powers:
            self._powers[e] = self.one_minus.power(e)
        return self._powers[e]

    def _in_box(self, exps: tuple[int, ...]) -> bool:
        return all(e <= self.order for e in exps)

    def start(self, terms: dict) -> VectorSeries:
        return {(0, 0): dict(terms)}

    def exponential(self, kind: str, arg: TruncSeries, series: VectorSeries) -> VectorSeries:
        """e^{arg X} with X = D, H or E acting through divided powers."""
        if arg.constant_term():
            raise ValueError("exponential argument must vanish at the origin")
        out: VectorSeries = {}
        arg_pow = self.one
        for c in range(self.cutoff + 1):
            coeffs = [(e, s) for e, s in arg_pow.items() if self._in_box(e)]
            if not coeffs:
                break
            h = HElement.generator(kind, c, self.p)
            for exps, terms in series.items():
                image = self.carrier.h_raw(h, terms)
                if not image:
                    continue
                for e2, s in coeffs:
                    target = (exps[0] + e2[0], exps[1] + e2[1])
                    if self._in_box(target):
                        _add(out.setdefault(target, {}), image, s)
            arg_pow = arg_pow * arg
        return _clean_series(out, self.p)

    def degree_power(self, factor: int, series: VectorSeries) -> VectorSeries:
        """Multiply the degree-n part by (1 - z z0)^(factor * n)."""
        out: VectorSeries = {}
        for exps, terms in series.items():
            by_degree: dict[int, dict] = {}
            for w, c in terms.items():
                by_degree.setdefault(word_degree(w), {})[w] = c
            for n, part in by_degree.items():
                for e2, s in self.one_minus_power(factor * n).items():
                    target = (exps[0] + e2[0], exps[1] + e2[1])
                    if self._in_box(target):
                        _add(out.setdefault(target, {}), part, s)
        return _clean_series(out, self.p)

    def box(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.order + 1) for b in range(self.order + 1)]


# ── hopf-axioms ────────────────────────────────────────────────

def _monomials(bound: int) -> list[HMonomial]:
    return [HMonomial(i, j, k) for i in range(bound + 1) for j in range(bound + 1) for k in range(bound + 1)]


def _associator(a: HMonomial, c: HMonomial, ab: tuple, bc: tuple, p: int) -> dict:
    """(ab)c - a(bc) from the cached pair products ab and bc."""
    out: dict[HMonomial, int] = {}
    for m, x in ab:
        for q, y in monomial_product(m, c, p):
            out[q] = out.get(q, 0) + x * y
    for m, x in bc:
        for q, y in monomial_product(a, m, p):
            out[q] = out.get(q, 0) - x * y
    return {q: v for q, v in out.items() if v % p}


def _laurent_specialized(m: int, n: int, q: int, p: int) -> LaurentPoly:
    """sum_i (-1)^i D^(n-i) binom(-2 deg - m - n + 2i, i) E^(m-i) acting on x^q."""
    total = LaurentPoly(p)
    for i in range(min(m, n) + 1):
        y = act_on_laurent(HElement.generator("E", m - i, p), LaurentPoly.monomial(q, p))
        for exp, c in list(y.terms()):
            deg = -exp
            b = binom_mod(-2 * deg - m - n + 2 * i, i, p)
            sign = -1 if i % 2 else 1
            part = act_on_laurent(HElement.generator("D", n - i, p), LaurentPoly.monomial(exp, p, c))
            total = total + part.scale(sign * b)
    return total


def suite_hopf_axioms(cfg: RunConfig, settings: dict) -> SuiteReport:
    p = cfg.p
    bound = settings["hopf_bound"]
    report = SuiteReport("hopf-axioms", _params(cfg, settings, ["hopf_bound", "hopf_sample_bound", "hopf_samples"],
                                                carrier=False))
    chk = _Checker(report, settings["max_failures"])
    monos = _monomials(bound)
    elems = {m: HElement(p, {m: 1}) for m in monos}
    rng = random.Random(cfg.seed)

    for a in monos:
        ea = elems[a]
        chk.check(f"coassociativity {a}", coproduct_left(ea), coproduct_right(ea), key=(sum(a),))
        delta = coproduct(ea)
        chk.check(f"counit left {a}", counit_left(delta), ea, key=(sum(a),))
        chk.check(f"counit right {a}", counit_right(delta), ea, key=(sum(a),))
        chk.check(f"theta involution {a}", theta(theta(ea)), ea, key=(sum(a),))
        chk.check(f"sigma involution {a}", sigma(sigma(ea)), ea, key=(sum(a),))

    for a, b in cartesian(monos, repeat=2):
        ea, eb = elems[a], elems[b]
        ab = normal_order_product(ea, eb)
        key = (sum(a) + sum(b),)
        chk.check(f"grade {a}*{b}", grade(ab), 0 if ab.is_zero() else a.degree + b.degree, key=key)
        chk.check(f"theta antihom {a}*{b}", theta(ab), normal_order_product(theta(eb), theta(ea)), key=key)
        chk.check(f"sigma hom {a}*{b}", sigma(ab), normal_order_product(sigma(ea), sigma(eb)), key=key)
        chk.check(f"counit mult {a}*{b}", counit(ab), counit(ea) * counit(eb) % p, key=key)
        chk.check(f"coproduct mult {a}*{b}", coproduct(ab), coproduct(ea) * coproduct(eb), key=key)

    pairs = {(a, b): monomial_product(a, b, p) for a, b in cartesian(monos, repeat=2)}
    for a, b, c in cartesian(monos, repeat=3):
        if not _associator(a, c, pairs[a, b], pairs[b, c], p):
            chk.tally()
            continue
        ea, eb, ec = elems[a], elems[b], elems[c]
        chk.check(f"associativity {a}*{b}*{c}", (ea * eb) * ec, ea * (eb * ec),
                  key=(sum(a) + sum(b) + sum(c),))

    top = settings["hopf_sample_bound"]
    gens = [HElement.generator(kind, r, p) for kind in "DHE" for r in range(top + 1)]
    for x, y in cartesian(gens, repeat=2):
        chk.check(f"coproduct mult generators {x} * {y}", coproduct(x * y), coproduct(x) * coproduct(y))

    for _ in range(settings["hopf_samples"]):
        trio = [HElement.monomial(p, *(rng.randint(0, top) for _ in range(3))) for _ in range(3)]
        a, b, c = trio
        chk.check(f"associativity sample {a} * {b} * {c}", (a * b) * c, a * (b * c), key=(99,))
        chk.check(f"theta antihom sample {a} * {b}", theta(a * b), theta(b) * theta(a), key=(99,))
        chk.check(f"sigma hom sample {a} * {b}", sigma(a * b), sigma(a) * sigma(b), key=(99,))

    # Reordering E^(m) H^(n) and D^(m) H^(n) past each other
    printed_mismatch = 0
    for m in range(1, bound + 2):
        for n in range(bound + 2):
            lhs_e = HElement.generator("E", m, p) * HElement.generator("H", n, p)
            rhs_e = HElement(p)
            for i in range(n + 1):
                rhs_e = rhs_e + (HElement.generator("H", n - i, p) * HElement.generator("E", m, p)).scale(
                    binom_mod(-2 * m, i, p))
            chk.check(f"reorder E^({m}) H^({n})", lhs_e, rhs_e, key=(m + n,))

            lhs_d = HElement.generator("D", m, p) * HElement.generator("H", n, p)
            corrected, printed = HElement(p), HElement(p)
            for i in range(n + 1):
                hd = HElement.generator("H", n - i, p) * HElement.generator("D", m, p)
                corrected = corrected + hd.scale(binom_mod(2 * m, i, p))
                printed = printed + hd.scale(binom_mod(-2 * m, i, p))
            chk.check(f"reorder D^({m}) H^({n})", lhs_d, corrected, key=(m + n,))
            if printed != lhs_d:
                printed_mismatch += 1
    if printed_mismatch:
        report.notes.append(
            f"D^(m) H^(n) = sum_i binom(-2m, i) H^(n-i) D^(m) fails in {printed_mismatch} cases; "
            f"the coefficient binom(2m, i) is the one consistent with H^(n) D^(m) reordering")

    for m in range(bound + 2):
        for n in range(bound + 2):
            for q in range(-3, 4):
                x_q = LaurentPoly.monomial(q, p)
                lhs = act_on_laurent(HElement.generator("E", m, p) * HElement.generator("D", n, p), x_q)
                chk.check(f"weight specialization m={m} n={n} x^{q}", lhs, _laurent_specialized(m, n, q, p),
                          key=(m + n, abs(q)))
    return chk.finish()


# ── module-lie ─────────────────────────────────────────────────

def _lie_algebras(cfg: RunConfig) -> list[tuple[str, object]]:
    algebras: list[tuple[str, object]] = [
        ("affine:sl2", AffineAlgebra(load_lie_algebra("sl2", cfg.p))),
        ("affine:abelian1", AffineAlgebra(load_lie_algebra("abelian1", cfg.p))),
        ("virasoro", VirasoroAlgebra(cfg.p)),
    ]
    if cfg.carrier.startswith("affine:") and cfg.carrier not in dict(algebras):
        algebras.append((cfg.carrier, AffineAlgebra(load_lie_algebra(cfg.carrier.split(":", 1)[1], cfg.p))))
    return algebras


def suite_module_lie(cfg: RunConfig, settings: dict) -> SuiteReport:
    rb, mb = settings["divided_power_bound"], settings["mode_bound"]
    report = SuiteReport("module-lie", _params(cfg, settings, ["divided_power_bound", "mode_bound"], carrier=False))
    chk = _Checker(report, settings["max_failures"])
    for name, algebra in _lie_algebras(cfg):
        modes = [Mode(g, n) for g in range(len(algebra.generators)) for n in range(-mb, mb + 1)]
        fmt = algebra.format
        for kind in "DHE":
            for r in range(rb + 1):
                for u, v in cartesian(modes, repeat=2):
                    x, y = algebra.element({u: 1}), algebra.element({v: 1})
                    lhs = algebra.h_action_generator(kind, r, algebra.bracket(x, y))
                    rhs = algebra.element({})
                    for i in range(r + 1):
                        rhs = rhs + algebra.bracket(algebra.h_action_generator(kind, r - i, x),
                                                    algebra.h_action_generator(kind, i, y))
                    chk.check(f"{name}: {kind}^({r}) [{algebra.mode_name(u)}, {algebra.mode_name(v)}]",
                              lhs, rhs, key=(r, abs(u.index) + abs(v.index)), fmt=fmt)
                for u in modes:
                    image = algebra.h_action_generator(kind, r, algebra.element({u: 1}))
                    if image.is_zero():
                        continue
                    shift = {"D": r, "H": 0, "E": -r}[kind]
                    chk.check(f"{name}: degree of {kind}^({r}) {algebra.mode_name(u)}",
                              image.degrees(), {u.degree + shift}, key=(r,))
    return chk.finish()


# ── laurent-example ────────────────────────────────────────────

def suite_laurent_example(cfg: RunConfig, settings: dict) -> SuiteReport:
    p = cfg.p
    rb, eb = settings["divided_power_bound"], settings["laurent_exponent_bound"]
    report = SuiteReport("laurent-example",
                         _params(cfg, settings, ["divided_power_bound", "laurent_exponent_bound"], carrier=False))
    chk = _Checker(report, settings["max_failures"])
    exps = range(-eb, eb + 1)
    one = LaurentPoly.one(p)
    for kind in "DHE":
        for r in range(rb + 1):
            b = HElement.generator(kind, r, p)
            chk.check(f"{kind}^({r}) 1", act_on_laurent(b, one), one.scale(counit(b)), key=(r,))
            for m, n in cartesian(exps, repeat=2):
                f, g = LaurentPoly.monomial(m, p), LaurentPoly.monomial(n, p)
                rhs = LaurentPoly(p)
                for i in range(r + 1):
                    left = act_on_laurent(HElement.generator(kind, r - i, p), f)
                    right = act_on_laurent(HElement.generator(kind, i, p), g)
                    rhs = rhs + left * right
                chk.check(f"{kind}^({r}) (x^{m} x^{n})", act_on_laurent(b, f * g), rhs,
                          key=(r, abs(m) + abs(n)))
    for r in range(rb + 1):
        for m in exps:
            f = LaurentPoly.monomial(m, p)
            sign = -1 if r % 2 else 1
            chk.check(f"D^({r}) x^{m} as Hasse derivative", act_on_laurent(HElement.generator("D", r, p), f),
                      hasse_deriv(r, f).scale(sign), key=(r, abs(m)))
            chk.check(f"H^({r}) x^{m} weight", act_on_laurent(HElement.generator("H", r, p), f),
                      f.scale(binom_mod(2 * m, r, p)), key=(r, abs(m)))
    for a_, b_ in cartesian(range(rb + 1), repeat=2):
        for m in range(-20, 21):
            f = LaurentPoly.monomial(m, p)
            chk.check(f"Hasse composition {a_},{b_} on x^{m}", hasse_deriv(a_, hasse_deriv(b_, f)),
                      hasse_deriv(a_ + b_, f).scale(binom_mod(a_ + b_, b_, p)), key=(a_ + b_, abs(m)))
    small = _monomials(1)
    for a, b in cartesian(small, repeat=2):
        ea, eb_ = HElement(p, {a: 1}), HElement(p, {b: 1})
        for m in range(-3, 4):
            f = LaurentPoly.monomial(m, p)
            chk.check(f"module law {a} * {b} on x^{m}", act_on_laurent(ea * eb_, f),
                      act_on_laurent(ea, act_on_laurent(eb_, f)), key=(sum(a) + sum(b), abs(m)))
    return chk.finish()


# ── carrier suites ─────────────────────────────────────────────

def suite_weight_law(cfg: RunConfig, settings: dict) -> SuiteReport:
    carrier = _carrier(cfg)
    p, N = carrier.p, cfg.max_degree
    report = SuiteReport("weight-law", _params(cfg, settings, []))
    chk = _Checker(report, settings["max_failures"])
    fmt = _fmt_vector(carrier)
    order = 2 * N

    def weight_series(terms: dict) -> list[dict]:
        out = []
        for i in range(order + 1):
            image = carrier.h_raw(HElement.generator("H", i, p), terms)
            sign = -1 if i % 2 else 1
            out.append({w: sign * c % p for w, c in image.items() if c % p})
        return out

    def expected(terms: dict, n: int) -> list[dict]:
        out = []
        for i in range(order + 1):
            c = binom_mod(-2 * n, i, p) * (-1 if i % 2 else 1)
            out.append({w: c * v % p for w, v in terms.items() if c * v % p})
        return out

    firsts = []
    for word, vec in basis_vectors(carrier, range(N + 1)):
        n = word_degree(word)
        chk.check(f"(1-x)^(-2 deg) {carrier.format_word(word)}", weight_series(vec.terms), expected(vec.terms, n),
                  key=(n,), fmt=lambda s: "; ".join(fmt(t) for t in s))
        for kind in "DE":
            for r in range(1, 3):
                image = carrier.h_raw(HElement.generator(kind, r, p), vec.terms)
                if image:
                    target = n + (r if kind == "D" else -r)
                    chk.check(f"degree of {kind}^({r}) {carrier.format_word(word)}",
                              _vec(carrier, image).degrees(), [target], key=(n, r))
        if carrier.basis(n) and carrier.basis(n)[0] == word:
            firsts.append((n, vec))
    for (n1, v1), (n2, v2) in cartesian(firsts, repeat=2):
        if n1 >= n2:
            continue
        mixed = v1 + v2
        series = weight_series(mixed.terms)
        matches = [n for n in range(N + 1) if series == expected(mixed.terms, n)]
        chk.check(f"mixed degrees {n1}+{n2} not homogeneous", matches, [], key=(n1 + n2,))
    return chk.finish()


def suite_conj_e(cfg: RunConfig, settings: dict) -> SuiteReport:
    K = settings["series_order"]
    D = min(settings["series_degree"], cfg.max_degree)
    base = _carrier(cfg)
    carrier = same_carrier(base, D + K + base.weight + 1)
    p = carrier.p
    report = SuiteReport("conj-E", _params(cfg, settings, ["series_order", "series_degree"]))
    chk = _Checker(report, settings["max_failures"])
    ops = _SeriesOps(carrier, K)
    fmt = _fmt_vector(carrier)

    for gen, name in enumerate(carrier.generators):
        a = carrier.generator_vector(gen)
        d = carrier.weight
        lowered = [(i, carrier.h_raw(HElement.generator("E", i, p), a.terms)) for i in range(d + 1)]
        lowered = [(i, u) for i, u in lowered if u]

        def mode(terms: dict, k: int, w: dict) -> dict:
            return carrier.composite_raw(_vec(carrier, terms), k, _vec(carrier, w))

        def lhs(w: dict, dw: int) -> VectorSeries:
            out: VectorSeries = {}
            for A in range(K + 1):
                for E in range(-d - dw, K + 1):
                    acc: dict = {}
                    for beta in range(A + 1):
                        inner = carrier.h_raw(HElement.generator("E", beta, p), w)
                        moved = mode(a.terms, -E - 1, inner)
                        outer = carrier.h_raw(HElement.generator("E", A - beta, p), moved)
                        _add(acc, outer, -1 if beta % 2 else 1)
                    out[(A, E)] = acc
            return out

        def rhs(w: dict, dw: int) -> VectorSeries:
            out: VectorSeries = {}
            for A in range(K + 1):
                for E in range(-d - dw, K + 1):
                    acc: dict = {}
                    for i, u in lowered:
                        if i > A:
                            continue
                        t = A - i
                        k = t - E - 1
                        c = ops.one_minus_power(i - 2 * d + k + 1).coeff((t, t))
                        if c:
                            _add(acc, mode(u, k, w), c)
                    out[(A, E)] = acc
            return out

        def closed(w: dict, dw: int) -> VectorSeries:
            out: VectorSeries = {}
            for A in range(K + 1):
                for E in range(-d - dw, K + 1):
                    k = A - E - 1
                    c = ops.one_minus_power(-2 * d + A - E).coeff((A, A))
                    out[(A, E)] = {w2: c * v for w2, v in mode(a.terms, k, w).items()} if c else {}
            return out

        for word, vec in basis_vectors(carrier, range(D + 1)):
            dw = word_degree(word)
            orders = [(A, E) for A in range(K + 1) for E in range(-d - dw, K + 1)]
            for label, other in (("conjugated field", rhs), ("closed form", closed)):
                ok, witness, count = verify_truncated_identity(
                    lambda t: lhs(t, dw), lambda t: other(t, dw), [(word, vec)], orders, p)
                inputs = f"{name}: {label} on {carrier.format_word(word)}"
                if ok:
                    chk.check(inputs, True, True, key=(dw,))
                else:
                    _, exps, left, right = witness
                    chk.check(f"{inputs} at z^{exps[0]} z0^{exps[1]}", left, right, key=(dw, *exps), fmt=fmt)
    return chk.finish()


def suite_ed_deg(cfg: RunConfig, settings: dict) -> SuiteReport:
    K = settings["series_order"]
    D = min(settings["series_degree"], cfg.max_degree)
    carrier = same_carrier(_carrier(cfg), D + K)
    p = carrier.p
    report = SuiteReport("ed-deg", _params(cfg, settings, ["series_order", "series_degree"]))
    chk = _Checker(report, settings["max_failures"])
    ops = _SeriesOps(carrier, K)
    fmt = _fmt_vector(carrier)
    inv = ops.one_minus.power(-1)
    z, z0 = ops.z, ops.z0

    def lhs2(terms: dict) -> VectorSeries:
        return ops.exponential("E", z, ops.exponential("D", z0, ops.start(terms)))

    def rhs2a(terms: dict) -> VectorSeries:
        s = ops.exponential("E", inv * z, ops.start(terms))
        s = ops.degree_power(-2, s)
        return ops.exponential("D", inv * z0, s)

    def rhs2b(terms: dict) -> VectorSeries:
        s = ops.degree_power(-2, ops.start(terms))
        s = ops.exponential("E", z * ops.one_minus, s)
        return ops.exponential("D", inv * z0, s)

    def lhs3(terms: dict) -> VectorSeries:
        return ops.degree_power(-2, ops.start(terms))

    def rhs3(terms: dict) -> VectorSeries:
        s = lhs2(terms)
        s = ops.exponential("D", -(inv * z0), s)
        return ops.exponential("E", -(z * ops.one_minus), s)

    identities = (("ed-deg-2 first form", lhs2, rhs2a), ("ed-deg-2 second form", lhs2, rhs2b),
                  ("ed-deg-3", lhs3, rhs3))
    for word, vec in basis_vectors(carrier, range(D + 1)):
        for label, left, right in identities:
            ok, witness, _ = verify_truncated_identity(left, right, [(word, vec)], ops.box(), p)
            inputs = f"{label} on {carrier.format_word(word)}"
            if ok:
                chk.check(inputs, True, True, key=(word_degree(word),))
            else:
                _, exps, a, b = witness
                chk.check(f"{inputs} at z^{exps[0]} z0^{exps[1]}", a, b, key=(word_degree(word), *exps), fmt=fmt)
    return chk.finish()


def suite_skew_symmetry(cfg: RunConfig, settings: dict) -> SuiteReport:
    K = settings["series_order"]
    Dc = min(settings["composite_degree"], cfg.max_degree)
    carrier = same_carrier(_carrier(cfg), 2 * Dc + K + 1)
    p = carrier.p
    report = SuiteReport("skew-symmetry", _params(cfg, settings, ["series_order", "composite_degree"]))
    chk = _Checker(report, settings["max_failures"])
    fmt = _fmt_vector(carrier)
    vectors = list(basis_vectors(carrier, range(Dc + 1)))

    for (uw, u), (vw, v) in cartesian(vectors, repeat=2):
        du, dv = word_degree(uw), word_degree(vw)
        for m in range(-1 - K, du + dv):
            lhs = carrier.composite_raw(u, m, v)
            rhs: dict = {}
            for j in range(du + dv - m):
                inner = carrier.composite_raw(v, j + m, u)
                if inner:
                    sign = -1 if (j + m + 1) % 2 else 1
                    _add(rhs, carrier.h_raw(HElement.generator("D", j, p), inner), sign)
            chk.check(f"Y({carrier.format_word(uw)}, x) {carrier.format_word(vw)} mode {m}",
                      _vec(carrier, lhs), _vec(carrier, rhs), key=(du + dv, abs(m)), fmt=fmt)

    vac = carrier.vacuum()
    for vw, v in vectors:
        dv = word_degree(vw)
        for n in range(K + 1):
            chk.check(f"creation {carrier.format_word(vw)} n={n}",
                      carrier.composite_mode(v, -1 - n, vac), carrier.h_generator("D", n, v),
                      key=(dv, n), fmt=fmt)
        for m in range(-2, 3):
            expected = v if m == -1 else GradedVector(p)
            chk.check(f"vacuum mode {m} on {carrier.format_word(vw)}", carrier.composite_mode(vac, m, v),
                      expected, key=(dv, abs(m)), fmt=fmt)
    return chk.finish()


def suite_commutators(cfg: RunConfig, settings: dict) -> SuiteReport:
    carrier = _carrier(cfg)
    p, N, mb = carrier.p, cfg.max_degree, settings["mode_bound"]
    report = SuiteReport("commutators", _params(cfg, settings, ["mode_bound"]))
    chk = _Checker(report, settings["max_failures"])
    fmt = _fmt_vector(carrier)
    gens = range(len(carrier.generators))
    name = carrier.algebra.mode_name

    for g1, g2 in cartesian(gens, repeat=2):
        for m, n in cartesian(range(-mb, mb + 1), repeat=2):
            top = N - abs(m) - abs(n)
            if top < 0:
                continue
            x, y = Mode(g1, m), Mode(g2, n)
            modes, central = carrier.algebra.mode_bracket(x, y)
            for word, vec in basis_vectors(carrier, range(top + 1)):
                lhs = carrier.apply_mode(x, carrier.apply_mode(y, vec)) - carrier.apply_mode(y, carrier.apply_mode(x, vec))
                rhs = vec.scale(central * carrier.central_value)
                for z_mode, c in modes.items():
                    rhs = rhs + carrier.apply_mode(z_mode, vec).scale(c)
                chk.check(f"[{name(x)}, {name(y)}] on {carrier.format_word(word)}", lhs, rhs,
                          key=(abs(m) + abs(n), word_degree(word)), fmt=fmt)

    for g in gens:
        gv = carrier.generator_vector(g)
        for m in range(-mb, mb + 1):
            for word, vec in basis_vectors(carrier, range(max(0, N - abs(m) - 1) + 1)):
                out = word_degree(word) + carrier.weight - m - 1
                if out < 0 or out > N:
                    continue
                chk.check(f"field of {carrier.generators[g]} mode {m} on {carrier.format_word(word)}",
                          carrier.composite_mode(gv, m, vec), carrier.generator_mode(g, m, vec),
                          key=(abs(m), word_degree(word)), fmt=fmt)
        # x(-s) 1 = D^(s - wt) of the generator: (D^(k) a)_m = (-1)^k binom(m, k) a_{m-k}
        for s in range(carrier.weight, min(carrier.weight + 3, N + 1)):
            k = s - carrier.weight
            shifted = GradedVector.basis_vector(p, (Mode(g, -s),))
            chk.check(f"D^({k}) {carrier.generators[g]} is x(-{s})", carrier.h_generator("D", k, gv), shifted,
                      key=(k,), fmt=fmt)
            for m in range(-2, 3):
                for word, vec in basis_vectors(carrier, range(2)):
                    out = word_degree(word) + s - m - 1
                    if out < 0 or out > N:
                        continue
                    sign = -1 if k % 2 else 1
                    expected = carrier.generator_mode(g, m - k, vec).scale(sign * binom_mod(m, k, p))
                    chk.check(f"Hasse shift {name(Mode(g, -s))} mode {m} on {carrier.format_word(word)}",
                              carrier.composite_mode(shifted, m, vec), expected, key=(k, abs(m)), fmt=fmt)
    return chk.finish()


def suite_invariance(cfg: RunConfig, settings: dict) -> SuiteReport:
    carrier = _carrier(cfg)
    p = carrier.p
    N = min(cfg.max_degree, settings["invariance_degree"])
    M = settings["invariance_mode_bound"]
    report = SuiteReport("invariance", _params(cfg, settings, ["invariance_degree", "invariance_mode_bound",
                                                                "composite_degree"]))
    chk = _Checker(report, settings["max_failures"])
    form = InvariantForm(carrier)
    gens = range(len(carrier.generators))
    name = carrier.algebra.mode_name

    for g in gens:
        for m in range(-M, M + 1):
            x = Mode(g, m)
            coeff, adj = carrier.mode_adjoint(x)
            for uw, u in basis_vectors(carrier, range(N + 1)):
                target = word_degree(uw) - m
                if not 0 <= target <= N:
                    continue
                xu = _vec(carrier, carrier._apply_word(x, uw))
                for vw, v in basis_vectors(carrier, [target]):
                    lhs = form.pair(xu, v)
                    rhs = coeff * form.pair(u, _vec(carrier, carrier._apply_word(adj, vw))) % p
                    chk.check(f"({name(x)} {carrier.format_word(uw)}, {carrier.format_word(vw)})", lhs, rhs,
                              key=(abs(m), target))

    Dc = min(settings["composite_degree"], N)
    for vw, v in basis_vectors(carrier, range(1, Dc + 1)):
        dv = word_degree(vw)
        for m in range(-2, 2 * dv):
            expansion = adjoint_modes(carrier, v, m)
            for uw, u in basis_vectors(carrier, range(N + 1)):
                target = dv - m - 1 + word_degree(uw)
                if not 0 <= target <= N:
                    continue
                vmu = _vec(carrier, carrier.composite_raw(v, m, u))
                for ww, w in basis_vectors(carrier, [target]):
                    chk.check(f"({carrier.format_word(vw)}_{m} {carrier.format_word(uw)}, {carrier.format_word(ww)})",
                              form.pair(vmu, w), form.pair(u, apply_adjoint(carrier, expansion, w)),
                              key=(dv, abs(m), target))

    for r in range(N + 1):
        e_r, d_r = HElement.generator("E", r, p), HElement.generator("D", r, p)
        for uw, u in basis_vectors(carrier, range(r, N + 1)):
            eu = _vec(carrier, carrier.h_raw(e_r, u.terms))
            for vw, v in basis_vectors(carrier, [word_degree(uw) - r]):
                chk.check(f"(E^({r}) {carrier.format_word(uw)}, {carrier.format_word(vw)})",
                          form.pair(eu, v), form.pair(u, _vec(carrier, carrier.h_raw(d_r, v.terms))),
                          key=(r, word_degree(uw)))
    return chk.finish()


def suite_symmetry(cfg: RunConfig, settings: dict) -> SuiteReport:
    carrier = _carrier(cfg)
    report = SuiteReport("symmetry", _params(cfg, settings, []))
    chk = _Checker(report, settings["max_failures"])
    form = InvariantForm(carrier)
    for n in range(cfg.max_degree + 1):
        matrix = form.gram_matrix(n)
        transpose = [list(col) for col in zip(*matrix)]
        chk.check(f"Gram degree {n} symmetric", matrix, transpose, key=(n,))
        basis = carrier.basis(n)
        right = [[form.pair_words_right(u, v) for v in basis] for u in basis]
        chk.check(f"Gram degree {n} peeling order", matrix, right, key=(n,))
    chk.check("Gram degree 0", form.gram_matrix(0), [[1]], key=(0,))
    firsts = [carrier.basis(n)[0] for n in range(cfg.max_degree + 1) if carrier.basis(n)]
    for u, v in cartesian(firsts, repeat=2):
        if word_degree(u) != word_degree(v):
            chk.check(f"({carrier.format_word(u)}, {carrier.format_word(v)}) across degrees",
                      form.pair_words_right(u, v), 0, key=(word_degree(u) + word_degree(v),))
    return chk.finish()


def suite_l1_vanishing(cfg: RunConfig, settings: dict) -> SuiteReport:
    carrier = _carrier(cfg)
    report = SuiteReport("l1-vanishing", _params(cfg, settings, []))
    chk = _Checker(report, settings["max_failures"])
    fmt = _fmt_vector(carrier)
    for n in range(1, cfg.max_degree + 1):
        h = HElement.generator("E", n, carrier.p)
        for word, vec in basis_vectors(carrier, [n]):
            chk.check(f"E^({n}) {carrier.format_word(word)}", _vec(carrier, carrier.h_raw(h, vec.terms)),
                      GradedVector(carrier.p), key=(n,), fmt=fmt)
    return chk.finish()


def _span_rank(vectors: list[list[int]], n: int, p: int) -> int:
    return rank_mod(as_matrix(vectors, n, p), p) if vectors else 0


def suite_radical_ideal(cfg: RunConfig, settings: dict) -> SuiteReport:
    carrier = _carrier(cfg)
    p, N = carrier.p, cfg.max_degree
    report = SuiteReport("radical-ideal", _params(cfg, settings, []))
    chk = _Checker(report, settings["max_failures"])
    form = InvariantForm(carrier)
    rows = {n: gram_row(form, n) for n in range(N + 1)}
    oracle = radical_oracle(carrier)

    for n in range(N + 1):
        dim = len(carrier.basis(n))
        ours, theirs = rows[n].radical, oracle[n]
        joint = _span_rank(ours + theirs, dim, p)
        chk.check(f"radical degree {n} matches annihilator oracle", (len(ours), joint), (len(theirs), len(theirs)),
                  key=(n,))

    for n in range(N + 1):
        basis = carrier.basis(n)
        for coords in rows[n].radical:
            u = GradedVector.from_coordinates(p, basis, coords)
            for g in range(len(carrier.generators)):
                for m in range(n + carrier.weight - 1 - N, n + carrier.weight):
                    image = carrier.generator_mode(g, m, u)
                    target = n - m - 1 + carrier.weight
                    chk.check(f"{carrier.generators[g]}_{m} on radical vector of degree {n}",
                              form.in_radical(image), True, key=(n, target))
    if carrier.kind == "virasoro" and carrier.c == 0 and N >= 2:
        omega = carrier.omega().coordinates(carrier.basis(2))
        chk.check("degree-2 radical is span(omega) at c = 0", rows[2].radical, [omega], key=(2,))
    return chk.finish()


def suite_dual_module(cfg: RunConfig, settings: dict) -> SuiteReport:
    carrier = _carrier(cfg)
    p = carrier.p
    window = min(settings["dual_window"], cfg.max_degree)
    report = SuiteReport("dual-module", _params(cfg, settings, ["dual_window"]))
    report.notes.append("double-dual check covers the window pairing only")
    chk = _Checker(report, settings["max_failures"])
    dual = DualCarrier(carrier, window)
    form = InvariantForm(carrier)
    fmt = _fmt_vector(carrier)
    wt = carrier.weight
    gens = range(len(carrier.generators))
    duals = [(n, f) for n in range(window + 1) for f in dual.dual_basis(n)]

    vac = dual.vacuum()
    for word, vec in basis_vectors(carrier, range(window + 1)):
        chk.check(f"<1', {carrier.format_word(word)}>", dual.pair(vac, vec), 1 if word == VACUUM else 0,
                  key=(word_degree(word),))

    for g in gens:
        a = carrier.generator_vector(g)
        lowered = [(i, carrier.h_raw(HElement.generator("E", i, p), a.terms)) for i in range(wt + 1)]
        for n, f in duals:
            for m in range(n + wt - 1 - window, n + wt):
                target = n + wt - m - 1
                if not 0 <= target <= window:
                    continue
                image = dual.mode(a, m, f)
                for ww, w in basis_vectors(carrier, [target]):
                    # <f, Y(e^{zE} (-z^-2)^wt a, 1/z) w>: (E^(i) a)_k contributes to z^(i - 2 wt + k + 1)
                    series: dict[int, int] = {}
                    sign = -1 if wt % 2 else 1
                    for i, u in lowered:
                        if not u:
                            continue
                        k = (wt - i) + target - n - 1
                        val = dual.pair(f, _vec(carrier, carrier.composite_raw(_vec(carrier, u), k, w)))
                        exponent = i - 2 * wt + k + 1
                        series[exponent] = (series.get(exponent, 0) + sign * val) % p
                    chk.check(f"<{carrier.generators[g]}'_{m} f, {carrier.format_word(ww)}> (f in degree {n})",
                              dual.pair(image, w), series.get(-m - 1, 0), key=(n, abs(m)))

    for g1, g2 in cartesian(gens, repeat=2):
        for m, n_ in cartesian(range(-2, 3), repeat=2):
            x, y = Mode(g1, m), Mode(g2, n_)
            modes, central = carrier.algebra.mode_bracket(x, y)

            def lie_dual(mode: Mode, f: GradedVector) -> GradedVector:
                return dual.mode(carrier.generator_vector(mode.gen), mode.index + wt - 1, f)

            for deg, f in duals:
                # both sides are only complete where every intermediate stays in the window
                if deg + abs(m) + abs(n_) > window:
                    continue
                lhs = lie_dual(x, lie_dual(y, f)) - lie_dual(y, lie_dual(x, f))
                rhs = f.scale(central * carrier.central_value)
                for z_mode, c in modes.items():
                    rhs = rhs + lie_dual(z_mode, f).scale(c)
                name = carrier.algebra.mode_name
                chk.check(f"dual [{name(x)}, {name(y)}] on degree {deg}", lhs, rhs, key=(abs(m) + abs(n_), deg),
                          fmt=fmt)

    small = [HElement(p, {mono: 1}) for mono in _monomials(1)]
    for a, b in cartesian(small, repeat=2):
        for deg, f in duals:
            if deg + 1 > window:
                continue
            chk.check(f"dual action ({a})({b}) on degree {deg}", dual.h_action(a * b, f),
                      dual.h_action(a, dual.h_action(b, f)), key=(deg,), fmt=fmt)
    for deg, f in duals:
        for r in range(4):
            chk.check(f"H^({r}) on dual degree {deg}", dual.h_action(HElement.generator("H", r, p), f),
                      f.scale(binom_mod(-2 * deg, r, p)), key=(deg, r), fmt=fmt)

    for g in gens:
        a = carrier.generator_vector(g)
        for m in range(-2, 3):
            for uw, u in basis_vectors(carrier, range(window + 1)):
                target = word_degree(uw) + wt - m - 1
                if not 0 <= target <= window:
                    continue
                chk.check(f"form map of {carrier.generators[g]}_{m} {carrier.format_word(uw)}",
                          dual.form_map(form, carrier.composite_mode(a, m, u)),
                          dual.mode(a, m, dual.form_map(form, u)), key=(abs(m), target), fmt=fmt)
            expansion = adjoint_modes(carrier, a, m)
            for deg, f in duals:
                source = deg - wt + m + 1
                if not 0 <= source <= window:
                    continue
                for ww, w in basis_vectors(carrier, [source]):
                    lhs = 0
                    for term in expansion:
                        lhs += term.coeff * dual.pair(dual.mode(term.vector, term.mode, f), w)
                    chk.check(f"window pairing {carrier.generators[g]}_{m}: degree {deg} with "
                              f"{carrier.format_word(ww)}", lhs % p,
                              dual.pair(f, _vec(carrier, carrier.composite_raw(a, m, w))), key=(abs(m), deg))
    return chk.finish()


def suite_lminus_subset(cfg: RunConfig, settings: dict) -> SuiteReport:
    carrier = _carrier(cfg)
    p = carrier.p
    report = SuiteReport("lminus-subset", _params(cfg, settings, []))
    chk = _Checker(report, settings["max_failures"])
    result = lminus_subset_check(carrier)
    chk.check("(D^+ V)_0 in (E^+ V)_0", result.holds, True, key=(0,))
    if not any(carrier.basis(-n) for n in range(1, cfg.max_degree + 1)):
        report.notes.append("carrier has no negative degrees; (D^+ V)_0 is zero")
    for k in range(1, 11):
        for t in range(4):
            chk.check(f"binom({k}*{p}^{t}, {p}^{t}) nonzero iff p does not divide {k}",
                      lucas_binomial(k * p**t, p**t, p) != 0, k % p != 0, key=(t, k))
    # On the Laurent weight module x^n has degree -n: E D^(n+1) = D^(n+1) E - n D^(n) there.
    for n in range(1, 2 * p + 1):
        v = LaurentPoly.monomial(n, p)
        e1 = HElement.generator("E", 1, p)
        lhs = act_on_laurent(e1 * HElement.generator("D", n + 1, p), v)
        rhs = act_on_laurent(HElement.generator("D", n + 1, p) * e1, v) - \
            act_on_laurent(HElement.generator("D", n, p), v).scale(n)
        chk.check(f"E D^({n + 1}) on x^{n}", lhs, rhs, key=(n,))
    return chk.finish()


def suite_fixed_space(cfg: RunConfig, settings: dict) -> SuiteReport:
    carrier = _carrier(cfg)
    report = SuiteReport("fixed-space", _params(cfg, settings, []))
    chk = _Checker(report, settings["max_failures"])
    total = 0
    for n in range(cfg.max_degree + 1):
        kernel = fixed_space(carrier, n)
        total += len(kernel)
        chk.check(f"fixed vectors in degree {n}", len(kernel), 1 if n == 0 else 0, key=(n,))
    chk.check("fixed space matches form space", total, form_space_dim(carrier).dim, key=(cfg.max_degree + 1,))
    return chk.finish()


CATALOG: dict[str, Callable[[RunConfig, dict], SuiteReport]] = {
    "hopf-axioms": suite_hopf_axioms,
    "module-lie": suite_module_lie,
    "laurent-example": suite_laurent_example,
    "weight-law": suite_weight_law,
    "conj-E": suite_conj_e,
    "ed-deg": suite_ed_deg,
    "skew-symmetry": suite_skew_symmetry,
    "commutators": suite_commutators,
    "invariance": suite_invariance,
    "symmetry": suite_symmetry,
    "l1-vanishing": suite_l1_vanishing,
    "radical-ideal": suite_radical_ideal,
    "dual-module": suite_dual_module,
    "lminus-subset": suite_lminus_subset,
    "fixed-space": suite_fixed_space,
}


def run_suite(name: str, cfg: RunConfig, settings: Optional[dict] = None) -> SuiteReport:
    if name not in CATALOG:
        raise SuiteError(f"unknown suite {name!r}; choose from {', '.join(CATALOG)}")
    if cfg.max_degree < 0:
        raise SuiteError(f"max degree must be nonnegative, got {cfg.max_degree}")
    merged = _settings(settings)
    for key, value in merged.items():
        if not isinstance(value, int) or value < 0:
            raise SuiteError(f"suite setting {key} must be a nonnegative integer, got {value!r}")
    logger.info(f"Running suite {name} on {cfg.carrier} (p={cfg.p}, N={cfg.max_degree})")
    report = CATALOG[name](cfg, merged)
    level = logging.INFO if report.ok else logging.WARNING
    logger.log(level, f"Suite {name}: {report.passed}/{report.attempted} checks passed")
    return report


def run_suites(names: list[str], cfg: RunConfig, settings: Optional[dict] = None,
               workers: int = 1) -> list[SuiteReport]:
    """Run several suites; reports come back in the order of `names`."""
    for name in names:
        if name not in CATALOG:
            raise SuiteError(f"unknown suite {name!r}; choose from {', '.join(CATALOG)}")
    if workers > 1 and len(names) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda n: run_suite(n, cfg, settings), names))
    return [run_suite(n, cfg, settings) for n in names]
