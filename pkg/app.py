"""FastAPI surface over the same runs as the CLI."""

import logging
from dataclasses import asdict
from typing import Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

import config
from models import RunConfig
from reports import (gram_document, run_dims, run_formspace, run_gram, run_normal_form, suite_document,
                     validate_run_config)
from suites import CATALOG, run_suite

logger = logging.getLogger(__name__)

app = FastAPI(title="modva")


class CarrierRequest(BaseModel):
    carrier: str = "affine:sl2"
    p: int = config.DEFAULT_PRIME
    level: int = 1
    c: int = 0
    max_degree: int = config.DEFAULT_MAX_DEGREE


class NormalFormRequest(BaseModel):
    p: int = config.DEFAULT_PRIME
    expr: str


class VerifyRequest(CarrierRequest):
    suite: str
    seed: int = config.DEFAULT_SEED
    settings: Optional[dict[str, int]] = None


def _run_config(body: CarrierRequest, command: str, seed: int = 0) -> RunConfig:
    cfg = RunConfig(p=body.p, carrier=body.carrier, level=body.level, c=body.c, max_degree=body.max_degree,
                    command=command, output_format="json", seed=seed, workers=config.DEFAULT_WORKERS)
    return validate_run_config(cfg)


@app.get("/api/suites")
async def api_suites():
    return {"suites": list(CATALOG)}


@app.post("/api/gram")
def api_gram(body: CarrierRequest):
    try:
        return gram_document(run_gram(_run_config(body, "gram")))
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))


@app.post("/api/dims")
def api_dims(body: CarrierRequest):
    try:
        return [{"degree": n, "dim": d} for n, d in run_dims(_run_config(body, "dims"))]
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))


@app.post("/api/formspace")
def api_formspace(body: CarrierRequest):
    try:
        return asdict(run_formspace(_run_config(body, "formspace")))
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))


@app.post("/api/normal-form")
def api_normal_form(body: NormalFormRequest):
    try:
        return {"p": body.p, "result": run_normal_form(body.expr, body.p)}
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))


@app.post("/api/verify")
def api_verify(body: VerifyRequest):
    try:
        report = run_suite(body.suite, _run_config(body, "verify", seed=body.seed), body.settings)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    doc = suite_document(report)
    doc["ok"] = report.ok
    return doc
