#!/usr/bin/env python3
"""CLI for modva: invariant forms on modular vertex algebras."""

import logging
import sys

import click

import config
from models import RunConfig
from reports import (render_dims, render_dual_check, render_formspace, render_gram, render_normal_form,
                     render_suites, run_dims, run_dual_pairing, run_formspace, run_gram, run_normal_form,
                     validate_run_config)
from suites import CATALOG, run_suites

logger = logging.getLogger(__name__)


def run_server(host: str, port: int, reload: bool, workers: int):
    import uvicorn

    if reload and workers > 1:
        workers = 1

    click.echo(f"Starting API on http://{host}:{port}", err=True)
    click.echo(f"API docs at http://{host}:{port}/docs", err=True)
    uvicorn.run("app:app", host=host, port=port, reload=reload, workers=workers)


def carrier_options(func):
    """Options shared by every command that builds a carrier."""
    options = [
        click.option("--carrier", default="affine:sl2", show_default=True,
                     help=f"{', '.join(config.BUILTIN_CARRIERS)} or affine:<spec.json>"),
        click.option("--p", "p", default=config.DEFAULT_PRIME, type=int, show_default=True, help="Odd prime"),
        click.option("--level", default=1, type=int, show_default=True, help="Affine level"),
        click.option("--c", "c", default=0, type=int, show_default=True, help="Virasoro central charge"),
        click.option("--max-degree", "-N", default=config.DEFAULT_MAX_DEGREE, type=int, show_default=True,
                     help="Truncation degree N"),
        click.option("--format", "output_format", default=config.DEFAULT_FORMAT, show_default=True,
                     type=click.Choice(config.OUTPUT_FORMATS), help="Output format"),
        click.option("--workers", default=config.DEFAULT_WORKERS, type=int, show_default=True,
                     help="Worker threads"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _config(command: str, **kwargs) -> RunConfig:
    try:
        return validate_run_config(RunConfig(command=command, **kwargs))
    except ValueError as e:
        _fail(e)


def _fail(error: Exception):
    click.echo(f"✗ {error}", err=True)
    sys.exit(2)


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose logging")
def cli(verbose):
    """Invariant bilinear forms on vertex algebras over F_p."""
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s [%(levelname)s] %(message)s",
        datefmt="%H:%M:%S",
    )


@cli.command()
@carrier_options
def gram(**kwargs):
    """Gram matrices of the invariant form, degree by degree."""
    cfg = _config("gram", **kwargs)
    try:
        table = run_gram(cfg)
    except ValueError as e:
        _fail(e)
    click.echo(render_gram(table, cfg.output_format))


@cli.command()
@carrier_options
def dims(**kwargs):
    """Graded dimensions of the simple quotient (Gram ranks)."""
    cfg = _config("dims", **kwargs)
    try:
        result = run_dims(cfg)
    except ValueError as e:
        _fail(e)
    click.echo(render_dims(result, cfg.output_format))


@cli.command()
@carrier_options
def formspace(**kwargs):
    """Dimension of the space of invariant forms.

    The result is flagged truncation-limited when the span in degree 0 still
    grew at degree N. At N=0 no positive degree is checked, so the flag is
    always set there.
    """
    cfg = _config("formspace", **kwargs)
    try:
        result = run_formspace(cfg)
    except ValueError as e:
        _fail(e)
    click.echo(render_formspace(result, cfg.output_format))


@cli.command("normal-form")
@click.argument("expr")
@click.option("--p", "p", default=config.DEFAULT_PRIME, type=int, show_default=True, help="Odd prime")
@click.option("--format", "output_format", default=config.DEFAULT_FORMAT, show_default=True,
              type=click.Choice(config.OUTPUT_FORMATS), help="Output format")
def normal_form(expr, p, output_format):
    """Normal-order a product in H, e.g. "E^(1) D^(1)"."""
    try:
        result = run_normal_form(expr, p)
    except ValueError as e:
        _fail(e)
    click.echo(render_normal_form(p, result, output_format))


@cli.command()
@carrier_options
@click.option("--suite", "suite_names", multiple=True, required=True,
              help=f"Suite name or 'all' (repeatable); one of: {', '.join(CATALOG)}")
@click.option("--seed", default=config.DEFAULT_SEED, type=int, show_default=True, help="Sampling seed")
def verify(suite_names, seed, **kwargs):
    """Run verification suites; exits 1 if any check fails."""
    cfg = _config("verify", seed=seed, **kwargs)
    names = list(CATALOG) if "all" in suite_names else list(suite_names)
    try:
        reports = run_suites(names, cfg, workers=cfg.workers)
    except ValueError as e:
        _fail(e)
    click.echo(render_suites(reports, cfg.output_format))
    failed = [r.suite for r in reports if not r.ok]
    if failed:
        logger.warning(f"Failed suites: {', '.join(failed)}")
        sys.exit(1)


@cli.command("dual-check")
@carrier_options
@click.option("--window", default=3, type=int, show_default=True, help="Dual window degree")
@click.option("--seed", default=config.DEFAULT_SEED, type=int, show_default=True, help="Sampling seed")
def dual_check(window, seed, **kwargs):
    """Contragredient dual on a window: dimensions and the dual-module suite."""
    cfg = _config("dual-check", seed=seed, **kwargs)
    if not 0 <= window <= cfg.max_degree:
        _fail(ValueError(f"window must be between 0 and the max degree {cfg.max_degree}, got {window}"))
    try:
        rows = run_dual_pairing(cfg, window)
        reports = run_suites(["dual-module"], cfg, settings={"dual_window": window})
    except ValueError as e:
        _fail(e)
    click.echo(render_dual_check(rows, reports[0], cfg.output_format))
    if not reports[0].ok:
        sys.exit(1)


@cli.command()
@click.option("--port", default=config.DEFAULT_PORT, help="Port to serve on")
@click.option("--host", default=config.DEFAULT_HOST, help="Host to bind to")
@click.option("--reload/--no-reload", default=config.DEFAULT_RELOAD, help="Enable auto-reload")
@click.option("--workers", default=config.DEFAULT_WORKERS, type=int, help="Number of worker processes")
def serve(port, host, reload, workers):
    """Start the JSON API."""
    run_server(host=host, port=port, reload=reload, workers=workers)


if __name__ == "__main__":
    cli()
