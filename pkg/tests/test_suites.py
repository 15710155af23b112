from __future__ import annotations

import pytest

from models import RunConfig, SuiteReport
from suites import CATALOG, SuiteError, run_suite, run_suites, verify_truncated_identity
from vacuum import GradedVector

SMALL = {
    "hopf_bound": 1,
    "hopf_sample_bound": 3,
    "hopf_samples": 5,
    "divided_power_bound": 2,
    "mode_bound": 2,
    "laurent_exponent_bound": 3,
    "series_order": 2,
    "series_degree": 2,
    "composite_degree": 1,
    "invariance_mode_bound": 2,
    "invariance_degree": 2,
    "dual_window": 2,
}


def sl2(max_degree=3, p=5, level=1):
    return RunConfig(p=p, carrier="affine:sl2", level=level, max_degree=max_degree)


def heisenberg(max_degree=2, p=5):
    return RunConfig(p=p, carrier="affine:abelian1", level=1, max_degree=max_degree)


def virasoro(max_degree=4, p=7, c=3):
    return RunConfig(p=p, carrier="virasoro", c=c, max_degree=max_degree)


def assert_ok(report: SuiteReport):
    assert report.failures == []
    assert report.attempted > 0
    assert report.ok


def settings(**overrides):
    merged = dict(SMALL)
    merged.update(overrides)
    return merged


VANISHING_GRID = ([sl2(max_degree=6, p=p, level=level) for p in (3, 5, 7) for level in (0, 1, 2)]
                  + [virasoro(max_degree=6, p=p, c=c) for p in (3, 5, 7) for c in (0, 1, p - 1)])


def grid_id(cfg: RunConfig) -> str:
    return f"{cfg.carrier}-p{cfg.p}-l{cfg.level}-c{cfg.c}"


def test_catalog_names():
    assert list(CATALOG) == ["hopf-axioms", "module-lie", "laurent-example", "weight-law", "conj-E", "ed-deg",
                             "skew-symmetry", "commutators", "invariance", "symmetry", "l1-vanishing",
                             "radical-ideal", "dual-module", "lminus-subset", "fixed-space"]


@pytest.mark.parametrize("p", [3, 5])
def test_hopf_axioms(p):
    report = run_suite("hopf-axioms", RunConfig(p=p), SMALL)
    assert_ok(report)
    assert report.params["hopf_bound"] == 1
    assert any("binom(2m, i)" in note for note in report.notes)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_hopf_axioms_exhaustive_to_exponent_four(p):
    report = run_suite("hopf-axioms", RunConfig(p=p))
    assert_ok(report)
    assert report.params["hopf_bound"] == 4
    assert report.params["hopf_sample_bound"] == 8
    # every triple of monomials D^(i) H^(j) E^(k) with exponents <= 4 is multiplied both ways
    assert report.attempted > 125**3


def test_module_lie():
    assert_ok(run_suite("module-lie", sl2(), SMALL))


def test_laurent_example():
    assert_ok(run_suite("laurent-example", RunConfig(p=7), SMALL))


@pytest.mark.parametrize("cfg", [sl2(), virasoro(c=1)])
def test_weight_law(cfg):
    assert_ok(run_suite("weight-law", cfg, SMALL))


@pytest.mark.parametrize("cfg", [heisenberg(), virasoro(max_degree=2, c=1)])
def test_conjugation_by_e(cfg):
    assert_ok(run_suite("conj-E", cfg, SMALL))


@pytest.mark.parametrize("cfg", [heisenberg(), virasoro(max_degree=3, p=5, c=1)])
def test_exponential_reordering(cfg):
    assert_ok(run_suite("ed-deg", cfg, SMALL))


@pytest.mark.parametrize("cfg", [sl2(max_degree=6), virasoro(max_degree=4, p=7, c=3)])
def test_conjugation_identities_to_order_three(cfg):
    orders = {"series_order": 3, "series_degree": 4}
    for name in ("conj-E", "ed-deg"):
        report = run_suite(name, cfg, orders)
        assert_ok(report)
        assert report.params["series_order"] == 3
        assert report.params["series_degree"] == 4


@pytest.mark.parametrize("cfg", [heisenberg(), virasoro(max_degree=2, c=2)])
def test_skew_symmetry(cfg):
    assert_ok(run_suite("skew-symmetry", cfg, settings(series_order=1, composite_degree=2)))


@pytest.mark.parametrize("cfg", [sl2(), virasoro()])
def test_commutators(cfg):
    assert_ok(run_suite("commutators", cfg, SMALL))


@pytest.mark.parametrize("cfg", [sl2(), virasoro()])
def test_invariance(cfg):
    assert_ok(run_suite("invariance", cfg, settings(invariance_degree=3)))


@pytest.mark.parametrize("cfg", [sl2(max_degree=5), virasoro(max_degree=5)])
def test_invariance_to_degree_and_mode_five(cfg):
    report = run_suite("invariance", cfg, {"invariance_degree": 5, "invariance_mode_bound": 5})
    assert_ok(report)
    assert report.params["invariance_degree"] == 5
    assert report.params["invariance_mode_bound"] == 5


def test_symmetry():
    assert_ok(run_suite("symmetry", sl2(), SMALL))


@pytest.mark.parametrize("cfg", [sl2(max_degree=4), virasoro(c=1)])
def test_l1_vanishing(cfg):
    assert_ok(run_suite("l1-vanishing", cfg))


@pytest.mark.parametrize("cfg", VANISHING_GRID, ids=grid_id)
def test_l1_vanishing_grid(cfg):
    assert_ok(run_suite("l1-vanishing", cfg))


@pytest.mark.parametrize("cfg", [virasoro(c=0), sl2(level=1)])
def test_radical_ideal(cfg):
    assert_ok(run_suite("radical-ideal", cfg))


@pytest.mark.parametrize("cfg", [sl2(max_degree=2), virasoro(c=3)])
def test_dual_module(cfg):
    report = run_suite("dual-module", cfg, SMALL)
    assert_ok(report)
    assert report.params["dual_window"] == 2


def test_lminus_subset_notes_empty_negative_degrees():
    report = run_suite("lminus-subset", sl2())
    assert_ok(report)
    assert any("no negative degrees" in note for note in report.notes)


@pytest.mark.parametrize("cfg", [sl2(), virasoro(c=1)])
def test_fixed_space(cfg):
    assert_ok(run_suite("fixed-space", cfg))


def test_reports_are_deterministic():
    first = run_suite("hopf-axioms", RunConfig(p=5, seed=11), SMALL)
    second = run_suite("hopf-axioms", RunConfig(p=5, seed=11), SMALL)
    assert first == second
    assert first.params["seed"] == 11


def test_run_suites_keeps_requested_order():
    names = ["l1-vanishing", "symmetry", "lminus-subset"]
    reports = run_suites(names, sl2(max_degree=2), workers=3)
    assert [r.suite for r in reports] == names
    assert all(r.ok for r in reports)


def test_unknown_suite_and_bad_settings():
    with pytest.raises(SuiteError):
        run_suite("no-such-suite", sl2())
    with pytest.raises(SuiteError):
        run_suites(["symmetry", "nope"], sl2())
    with pytest.raises(SuiteError):
        run_suite("symmetry", sl2(), {"mode_bound": -1})
    with pytest.raises(SuiteError):
        run_suite("symmetry", sl2(max_degree=-1))


def test_verify_truncated_identity_reports_first_witness():
    vectors = [((), GradedVector.basis_vector(5, ()))]
    same = lambda terms: {(0, 0): dict(terms), (1, 0): {(): 8}}
    ok, witness, count = verify_truncated_identity(same, same, vectors, [(0, 0), (1, 0)], 5)
    assert (ok, witness, count) == (True, None, 2)

    other = lambda terms: {(0, 0): dict(terms), (1, 0): {(): 4}}
    ok, witness, count = verify_truncated_identity(same, other, vectors, [(0, 0), (1, 0)], 5)
    assert not ok
    assert witness == ((), (1, 0), {(): 3}, {(): 4})
    assert count == 2
