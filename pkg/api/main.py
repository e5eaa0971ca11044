"""
Randomness desk API

Read-only FastAPI server exposing the same reports as the CLI:
- Granularity tables
- Construction 1 runs over the bundled operator
- Construction 2 runs and S-tree membership
- Invariant suites

Run with: uvicorn api.main:app --reload
"""
import json
import logging
from typing import Any, Dict, List, Optional

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from checks import SUITES, run_suite
from config import DEFAULT_OPERATOR, LOG_LEVEL, SEED, SETTLING_CAP
from core.errors import DeskError, ParseError
from measures.loader import load_measure
from rea.operators import load_operator
from selfmod.modulus import load_modulus
from services import NscrService, ReaService, SelfModService, TableService, streamspec_parse

logging.basicConfig(level=LOG_LEVEL)
logger = logging.getLogger(__name__)

# Tables and suites are computed per request; keep them desk-sized
MAX_DEPTH = 64
MAX_BLOCKS = 12


# Pydantic Models for API responses
class HealthResponse(BaseModel):
    status: str
    service: str
    version: str


class TableResponse(BaseModel):
    measure: Dict[str, Any]
    D: int
    n_max: int
    h: List[Optional[int]]
    g: List[Optional[int]]
    h_hat: List[Optional[int]]
    g_hat: List[Optional[int]]
    provenance: Dict[str, str]


class ClassifyResponse(BaseModel):
    status: str
    completed_blocks: int
    mass: Optional[str] = None
    mismatch_at: Optional[int] = None
    modulus: Dict[str, Any]


class CheckResult(BaseModel):
    suite: str
    name: str
    checked: int
    violations: int
    ok: bool
    details: Optional[List[Dict[str, Any]]] = None
    skipped: Optional[str] = None
    error: Optional[Dict[str, Any]] = None


class VerifyResponse(BaseModel):
    suite: str
    depth: int
    seed: int
    checks: List[CheckResult]
    checked: int
    violations: int
    ok: bool


def http_error(error: DeskError) -> HTTPException:
    """400 for input that does not parse, 422 for input that breaks an invariant"""
    status = 400 if isinstance(error, ParseError) else 422
    logger.warning(f"{error.code}: {error.message}")
    return HTTPException(status_code=status, detail={"code": error.code, "message": error.message})


def parse_json_param(text: str, loader):
    try:
        return loader(json.loads(text))
    except json.JSONDecodeError as e:
        raise ParseError(f"parameter is not valid JSON: {e.msg}", position=e.pos)


# Create FastAPI app
app = FastAPI(
    title="Randomness Desk API",
    description="Granularity tables, level-n tests and the constructions behind them",
    version="1.0.0",
)

# CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


# =============================================================================
# API Endpoints
# =============================================================================

@app.get("/health", response_model=HealthResponse)
async def health():
    """Health check"""
    return HealthResponse(status="healthy", service="Randomness Desk API", version="1.0.0")


@app.get("/api/table", response_model=TableResponse)
def get_table(
    measure: str = Query("lebesgue", description="Measure spec as JSON or a shorthand"),
    depth: int = Query(14, ge=0, le=MAX_DEPTH),
    n_max: Optional[int] = Query(None, ge=0, le=MAX_DEPTH),
):
    """
    h, ĥ, g and ĝ of a measure.
    """
    try:
        return TableService(load_measure(measure), depth, n_max).report()
    except DeskError as e:
        raise http_error(e)


# -----------------------------------------------------------------------------
# Construction Endpoints
# -----------------------------------------------------------------------------

@app.get("/api/rea/demo")
def get_rea_demo(
    imax: int = Query(4, ge=0, le=MAX_BLOCKS),
    cap: int = Query(SETTLING_CAP, ge=1, le=SETTLING_CAP),
    oracle: str = Query("ones", description="Stream spec of A"),
):
    """
    Construction 1 over the bundled operator, with the worked-table layout.
    """
    if oracle.startswith("file:"):
        raise HTTPException(status_code=400, detail={"code": "parse_error", "message": "file streams are CLI-only"})
    try:
        service = ReaService(load_operator(DEFAULT_OPERATOR), cap)
        return service.demo_report(streamspec_parse(oracle), imax)
    except DeskError as e:
        raise http_error(e)


@app.get("/api/selfmod/build")
def get_selfmod_build(
    modulus: str = Query('{"kind":"poly","degree":1}', description="Modulus spec as JSON"),
    oracle: str = Query("alt", description="Stream spec of A"),
    blocks: int = Query(4, ge=0, le=MAX_BLOCKS),
):
    """
    Construction 2; B is previewed once it is too long to print.
    """
    if oracle.startswith("file:"):
        raise HTTPException(status_code=400, detail={"code": "parse_error", "message": "file streams are CLI-only"})
    try:
        f_A = parse_json_param(modulus, load_modulus)
        return SelfModService(f_A).build(streamspec_parse(oracle), blocks).to_dict()
    except DeskError as e:
        raise http_error(e)


@app.get("/api/nscr/classify", response_model=ClassifyResponse)
def get_nscr_classify(
    bits: str = Query("", description="The word σ"),
    modulus: str = Query('{"kind":"poly","degree":1}', description="Modulus spec as JSON"),
):
    """
    Place σ on the S-tree of a modulus.
    """
    try:
        return NscrService(parse_json_param(modulus, load_modulus)).classify(bits)
    except DeskError as e:
        raise http_error(e)


# -----------------------------------------------------------------------------
# Verification
# -----------------------------------------------------------------------------

@app.get("/api/verify", response_model=VerifyResponse)
def get_verify(
    suite: str = Query("core", pattern="^(all|" + "|".join(SUITES) + ")$"),
    depth: int = Query(8, ge=1, le=14),
    seed: int = Query(SEED),
):
    """
    Run an invariant suite; violations are reported, not raised.
    """
    try:
        return run_suite(suite, depth, seed).to_dict()
    except DeskError as e:
        raise http_error(e)
