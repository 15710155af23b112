"""Run helpers shared by the CLI and the HTTP API, and report rendering.

Every render_* function is deterministic: JSON keys follow the dataclass
field order, CSV rows are sorted, text uses symmetric residues.
"""

import csv
import io
import json
import logging
from dataclasses import asdict
from typing import Iterable

import config
from forms import DualCarrier, form_space_dim, gram_table, simple_quotient_dims
from hopf import format_element, parse_element
from models import FormSpaceResult, GramTable, RunConfig, SuiteReport
from modp import check_prime, symmetric_residue
from vacuum import Carrier, GradedVector, build_carrier

logger = logging.getLogger(__name__)


class ReportError(ValueError):
    pass


# ── running ────────────────────────────────────────────────────

def validate_run_config(cfg: RunConfig) -> RunConfig:
    check_prime(cfg.p)
    if cfg.max_degree < 0:
        raise ReportError(f"max degree must be nonnegative, got {cfg.max_degree}")
    if cfg.workers < 1:
        raise ReportError(f"workers must be at least 1, got {cfg.workers}")
    if cfg.output_format not in config.OUTPUT_FORMATS:
        raise ReportError(f"format must be one of {', '.join(config.OUTPUT_FORMATS)}, got {cfg.output_format!r}")
    if cfg.carrier != "virasoro" and not cfg.carrier.startswith("affine:"):
        raise ReportError(f"unknown carrier {cfg.carrier!r}; use virasoro or affine:<name|path>")
    return cfg


def carrier_for(cfg: RunConfig) -> Carrier:
    carrier = build_carrier(cfg.carrier, cfg.p, cfg.level, cfg.c, cfg.max_degree)
    logger.info(f"Built carrier {carrier.label} (p={cfg.p}, N={cfg.max_degree})")
    return carrier


def run_gram(cfg: RunConfig) -> GramTable:
    table = gram_table(carrier_for(cfg), workers=cfg.workers)
    logger.info(f"Gram matrices computed for degrees 0..{cfg.max_degree}")
    return table


def run_dims(cfg: RunConfig) -> list[tuple[int, int]]:
    return simple_quotient_dims(carrier_for(cfg), workers=cfg.workers)


def run_formspace(cfg: RunConfig) -> FormSpaceResult:
    return form_space_dim(carrier_for(cfg))


def run_normal_form(expr: str, p: int) -> str:
    check_prime(p)
    return format_element(parse_element(expr, p))


def run_dual_pairing(cfg: RunConfig, window: int) -> list[dict]:
    """Per-degree summary of the restricted dual: dimension and the pairing with V on basis words."""
    carrier = carrier_for(cfg)
    dual = DualCarrier(carrier, window)
    rows = []
    for n in range(window + 1):
        basis = dual.dual_basis(n)
        words = carrier.basis(n)
        identity = all(dual.pair(f, GradedVector.basis_vector(carrier.p, w)) == (1 if f.coeff(w) else 0)
                       for f in basis for w in words)
        rows.append({"degree": n, "dim": len(basis), "dual_basis_pairs_to_identity": identity})
    return rows


# ── rendering ──────────────────────────────────────────────────

def _csv(header: list[str], rows: Iterable[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue().rstrip("\n")


def gram_document(table: GramTable) -> dict:
    doc = asdict(table)
    for row_doc, row in zip(doc["rows"], table.rows):
        row_doc["quotient_dim"] = row.quotient_dim
    return doc


def render_gram(table: GramTable, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(gram_document(table), indent=2)
    if fmt == "csv":
        rows = []
        for row in table.rows:
            for i, left in enumerate(row.basis):
                for j, right in enumerate(row.basis):
                    rows.append([row.degree, i, j, left, right, row.matrix[i][j]])
        return _csv(["degree", "row", "col", "row_basis", "col_basis", "value"], rows)
    lines = [f"carrier {table.carrier}  p={table.p}"]
    for row in table.rows:
        lines.append(f"degree {row.degree}  dim {len(row.basis)}  rank {row.rank}  radical {len(row.radical)}")
        lines.append("  basis: " + " | ".join(row.basis))
        width = max((len(str(symmetric_residue(v, table.p))) for r in row.matrix for v in r), default=1)
        for r in row.matrix:
            lines.append("  [" + " ".join(f"{symmetric_residue(v, table.p):>{width}}" for v in r) + "]")
    return "\n".join(lines)


def render_dims(dims: list[tuple[int, int]], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([{"degree": n, "dim": d} for n, d in dims], indent=2)
    if fmt == "csv":
        return _csv(["degree", "dim"], [[n, d] for n, d in dims])
    return "\n".join(f"degree {n}: {d}" for n, d in dims)


def render_formspace(result: FormSpaceResult, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(asdict(result), indent=2)
    if fmt == "csv":
        return _csv(["dim", "stabilized", "span_dim", "last_growth_degree"],
                    [[result.dim, result.stabilized, result.span_dim, result.last_growth_degree]])
    text = str(result.dim)
    if not result.stabilized and result.last_growth_degree == 0:
        text += "  (truncation-limited: N=0 leaves no positive degree to check)"
    elif not result.stabilized:
        text += f"  (truncation-limited: span still grew at degree {result.last_growth_degree})"
    return text


def render_normal_form(p: int, result: str, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"p": p, "result": result}, indent=2)
    if fmt == "csv":
        return _csv(["p", "result"], [[p, result]])
    return result


def suite_document(report: SuiteReport) -> dict:
    return {
        "suite": report.suite,
        "params": report.params,
        "attempted": report.attempted,
        "passed": report.passed,
        "failures": [{"inputs": f.inputs, "lhs": f.lhs, "rhs": f.rhs} for f in report.failures],
        "notes": report.notes,
    }


def render_suites(reports: list[SuiteReport], fmt: str) -> str:
    if fmt == "json":
        docs = [suite_document(r) for r in reports]
        return json.dumps(docs[0] if len(docs) == 1 else docs, indent=2)
    if fmt == "csv":
        return _csv(["suite", "attempted", "passed", "failures"],
                    [[r.suite, r.attempted, r.passed, len(r.failures)] for r in reports])
    lines = []
    for r in reports:
        mark = "✓" if r.ok else "✗"
        lines.append(f"{mark} {r.suite}: {r.passed}/{r.attempted} passed")
        for f in r.failures:
            lines.append(f"    {f.inputs}")
            lines.append(f"      lhs: {f.lhs}")
            lines.append(f"      rhs: {f.rhs}")
        for note in r.notes:
            lines.append(f"    note: {note}")
    return "\n".join(lines)


def render_dual_check(rows: list[dict], report: SuiteReport, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"window": rows, "report": suite_document(report)}, indent=2)
    if fmt == "csv":
        table = _csv(["degree", "dim", "dual_basis_pairs_to_identity"],
                     [[r["degree"], r["dim"], r["dual_basis_pairs_to_identity"]] for r in rows])
        return table + "\n" + render_suites([report], "csv")
    lines = [f"degree {r['degree']}: dim {r['dim']}"
             f"{'' if r['dual_basis_pairs_to_identity'] else '  (pairing not dual)'}" for r in rows]
    return "\n".join(lines + [render_suites([report], "text")])
