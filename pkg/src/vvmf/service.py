"""HTTP service exposing the library operations, plus the in-process
handlers the command-line client shares.

Every handler takes a pydantic request model and returns a pydantic
response model; the FastAPI app is a thin routing layer over them, so the
CLI can call the handlers directly without a server.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional, Union

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .errors import VvmfError
from .existence import (
    S3_IRREPS,
    character_of,
    construct_vvmf,
    irrep_projection,
    mat_mul_exact,
    mat_rank_exact,
    regular_rep,
    s3_character_table,
    s3_quotient,
    s3_rep,
)
from .forms import (
    VVMF,
    builtin_form,
    lift,
    sample_points,
    verify_functional_equation,
)
from .induce import induce, induced_exponent, stabilizer_generators
from .psl2 import INFINITY, GroupElement, parse_cusp, parse_element, scaling_matrix, T
from .qseries import DEFAULT_ORDER, QSeries
from .reps import (
    ExponentMatrix,
    RepMatrix,
    Representation,
    UnitPhase,
    exponent_of,
    nu_restricted,
    trivial_rep,
)
from .subgroups import (
    FULL,
    KNOWN_CUSP_DATA,
    CongruenceSubgroup,
    coset_table,
    cusp_equivalent,
    cusp_system,
    parse_group,
)

JSON_SCHEMA_VERSION = 1


# --- matrix and series serialization ----------------------------------------


class PhaseEntry(BaseModel):
    """Exact unit phase exp(2*pi*i*p/q), stored as the rational exponent."""

    phase: str


class ComplexEntry(BaseModel):
    re: float
    im: float


MatrixEntry = Union[PhaseEntry, ComplexEntry]


def matrix_to_json(m: RepMatrix) -> list[list[MatrixEntry]]:
    out: list[list[MatrixEntry]] = []
    for row in m.entries:
        json_row: list[MatrixEntry] = []
        for e in row:
            if e is None:
                json_row.append(ComplexEntry(re=0.0, im=0.0))
            elif isinstance(e, UnitPhase):
                json_row.append(PhaseEntry(phase=str(e.exponent)))
            else:
                json_row.append(ComplexEntry(re=complex(e).real, im=complex(e).imag))
        out.append(json_row)
    return out


def matrix_from_json(rows: list[list[MatrixEntry]]) -> RepMatrix:
    entries = []
    for row in rows:
        parsed = []
        for e in row:
            if isinstance(e, dict):
                e = PhaseEntry(**e) if "phase" in e else ComplexEntry(**e)
            if isinstance(e, PhaseEntry):
                parsed.append(UnitPhase(Fraction(e.phase)))
            else:
                value = complex(e.re, e.im)
                parsed.append(value if value != 0 else None)
        entries.append(parsed)
    return RepMatrix(entries)


class SeriesJSON(BaseModel):
    """q-expansion: coefficient k sits at exponent offset + index/width."""

    width: int
    offset: str
    coeffs: list[tuple[int, str]]


def series_to_json(s: QSeries) -> SeriesJSON:
    offset = s.valuation
    coeffs = [
        (int((e - offset) * s.h), str(c)) for e, c in sorted(s.coeffs.items())
    ]
    return SeriesJSON(width=s.h, offset=str(offset), coeffs=coeffs)


def series_from_json(data: SeriesJSON, prec: Optional[Fraction] = None) -> QSeries:
    offset = Fraction(data.offset)
    coeffs = {offset + Fraction(n, data.width): Fraction(c) for n, c in data.coeffs}
    if prec is None:
        prec = max(coeffs, default=offset) + 1
    return QSeries(coeffs, prec, data.width)


def exponents_to_json(omega: ExponentMatrix) -> list[str]:
    return [str(e) for e in omega.entries]


# --- cusps -------------------------------------------------------------------


class CuspsRequest(BaseModel):
    group: str


class CuspsResponse(BaseModel):
    schema_version: int = JSON_SCHEMA_VERSION
    group: str
    index: int
    cusps: list[str]
    widths: list[int]


def handle_cusps(req: CuspsRequest) -> CuspsResponse:
    subgroup = parse_group(req.group)
    system = cusp_system(subgroup, INFINITY, FULL)
    key = repr(subgroup)
    if key in KNOWN_CUSP_DATA:
        index, cusps, widths = KNOWN_CUSP_DATA[key]
        # the conventional representatives must describe the same classes
        if index != system.m or sorted(widths) != sorted(system.widths()):
            raise VvmfError(f"reference cusp data out of sync for {key}")
        for printed, width in zip(cusps, widths):
            c = parse_cusp(printed)
            matches = [
                cl for cl in system.classes if cusp_equivalent(subgroup, c, cl.cusp)
            ]
            if len(matches) != 1 or matches[0].width != width:
                raise VvmfError(f"reference cusp data out of sync for {key}")
        return CuspsResponse(
            group=key, index=index, cusps=list(cusps), widths=list(widths)
        )
    return CuspsResponse(
        group=key,
        index=system.m,
        cusps=[repr(cl.cusp) for cl in system.classes],
        widths=list(system.widths()),
    )


# --- induce ------------------------------------------------------------------


def _base_rep(spec: str, subgroup: CongruenceSubgroup) -> Representation:
    key = spec.strip().lower()
    if key == "trivial":
        return trivial_rep(subgroup)
    if key == "nu":
        return nu_restricted(subgroup)
    if spec.endswith(".json"):
        with open(spec) as fh:
            data = json.load(fh)
        base = _base_rep(data.get("rep", "trivial"), subgroup)
        power = int(data.get("tensor_nu_power", 0))
        if power:
            from .reps import tensor_with_character

            nu = nu_restricted(subgroup)
            return tensor_with_character(base, nu, power)
        return base
    raise ValueError(f"unknown representation spec {spec!r}")


def _element_at(spec: str, ambient: CongruenceSubgroup) -> GroupElement:
    try:
        return parse_element(spec)
    except ValueError:
        pass
    c = parse_cusp(spec)
    sigma = scaling_matrix(c)
    width = 1 if ambient == FULL else _ambient_width(ambient, c)
    return sigma * T**width * sigma.inverse()


def _ambient_width(ambient: CongruenceSubgroup, c) -> int:
    from .subgroups import cusp_width

    return cusp_width(ambient, c)


class InduceRequest(BaseModel):
    subgroup: str
    ambient: str = "Gamma(1)"
    rep: str = "trivial"
    at: str = "t"
    exponents: bool = False


class InduceResponse(BaseModel):
    schema_version: int = JSON_SCHEMA_VERSION
    subgroup: str
    ambient: str
    rank: int
    element: str
    matrix: list[list[MatrixEntry]]
    exponents: Optional[list[str]] = None


def handle_induce(req: InduceRequest) -> InduceResponse:
    subgroup = parse_group(req.subgroup)
    ambient = parse_group(req.ambient)
    rho = _base_rep(req.rep, subgroup)
    table = coset_table(subgroup, ambient)
    rho_ind = induce(rho, table)
    element = _element_at(req.at, ambient)
    matrix = rho_ind.evaluate(element)
    exponents = None
    if req.exponents:
        system = cusp_system(subgroup, INFINITY, ambient)
        lams = [exponent_of(rho, t_i) for t_i in stabilizer_generators(system)]
        omega = induced_exponent(lams, system.widths())
        exponents = exponents_to_json(omega)
    return InduceResponse(
        subgroup=repr(subgroup),
        ambient=repr(ambient),
        rank=rho_ind.rank,
        element=repr(element),
        matrix=matrix_to_json(matrix),
        exponents=exponents,
    )


# --- qseries -----------------------------------------------------------------


class QSeriesRequest(BaseModel):
    name: str
    order: int = Field(default=DEFAULT_ORDER, ge=1)


class QSeriesResponse(BaseModel):
    schema_version: int = JSON_SCHEMA_VERSION
    name: str
    weight: int
    group: str
    series: SeriesJSON


def handle_qseries(req: QSeriesRequest) -> QSeriesResponse:
    x = builtin_form(req.name, req.order)
    assert x.series is not None
    return QSeriesResponse(
        name=req.name,
        weight=x.weight,
        group=repr(x.multiplier.domain),
        series=series_to_json(x.series[0]),
    )


# --- lift / verify -----------------------------------------------------------


class LiftRequest(BaseModel):
    form: str = "zK"
    subgroup: Optional[str] = None
    ambient: str = "Gamma(1)"
    verify: bool = False
    tol: float = Field(default=1e-8, gt=0, le=1e-2)
    samples: int = 12
    seed: int = 2024
    order: int = Field(default=DEFAULT_ORDER, ge=8)


class LiftResponse(BaseModel):
    schema_version: int = JSON_SCHEMA_VERSION
    form: str
    subgroup: str
    ambient: str
    weight: int
    rank: int
    components: list[str]
    generators: dict[str, list[list[MatrixEntry]]]
    exponents: list[str]
    residual: Optional[float] = None
    passed: Optional[bool] = None


def _lifted_form(req: LiftRequest) -> tuple[VVMF, VVMF, CongruenceSubgroup]:
    x = builtin_form(req.form, req.order)
    subgroup = x.multiplier.domain
    if req.subgroup is not None and parse_group(req.subgroup) != subgroup:
        raise ValueError(
            f"form {req.form} lives on {subgroup}, not {req.subgroup}"
        )
    ambient = parse_group(req.ambient)
    table = coset_table(subgroup, ambient)
    return x, lift(x, table), ambient


def handle_lift(req: LiftRequest) -> LiftResponse:
    base, lifted, ambient = _lifted_form(req)
    subgroup = base.multiplier.domain
    table = lifted.multiplier.table
    components = [
        f"{req.form}({gamma.inverse()!r} tau)"
        + (f" * j^{-base.weight}" if base.weight else "")
        for gamma in table.reps
    ]
    generators = {
        repr(g): matrix_to_json(lifted.multiplier.evaluate(g))
        for g in ambient.generators()
    }
    system = cusp_system(subgroup, INFINITY, ambient)
    lams = [
        exponent_of(base.multiplier, t_i) for t_i in stabilizer_generators(system)
    ]
    omega = induced_exponent(lams, system.widths())
    residual = passed = None
    if req.verify:
        residual = verify_functional_equation(
            lifted,
            ambient.generators(),
            sample_points(req.samples, req.seed),
            req.tol,
        )
        passed = residual <= req.tol
    return LiftResponse(
        form=req.form,
        subgroup=repr(subgroup),
        ambient=repr(ambient),
        weight=lifted.weight,
        rank=lifted.rank,
        components=components,
        generators=generators,
        exponents=exponents_to_json(omega),
        residual=residual,
        passed=passed,
    )


class VerifyRequest(BaseModel):
    form: str = "zK"
    ambient: Optional[str] = None
    tol: float = Field(default=1e-8, gt=0, le=1e-2)
    samples: int = 12
    seed: int = 2024
    order: int = Field(default=DEFAULT_ORDER, ge=8)


class VerifyResponse(BaseModel):
    schema_version: int = JSON_SCHEMA_VERSION
    form: str
    group: str
    residual: float
    tol: float
    passed: bool


def handle_verify(req: VerifyRequest) -> VerifyResponse:
    x = builtin_form(req.form, req.order)
    group = x.multiplier.domain
    if req.ambient is not None:
        lift_req = LiftRequest(
            form=req.form,
            ambient=req.ambient,
            tol=req.tol,
            samples=req.samples,
            seed=req.seed,
            order=req.order,
        )
        _, x, group = _lifted_form(lift_req)
    residual = verify_functional_equation(
        x, group.generators(), sample_points(req.samples, req.seed), req.tol
    )
    return VerifyResponse(
        form=req.form,
        group=repr(group),
        residual=residual,
        tol=req.tol,
        passed=residual <= req.tol,
    )


# --- exist -------------------------------------------------------------------


class ExistRequest(BaseModel):
    rep: str = "standard"
    tol: float = Field(default=1e-8, gt=0, le=1e-2)


class ExistResponse(BaseModel):
    schema_version: int = JSON_SCHEMA_VERSION
    rep: str
    rank: int
    residual: float
    singular_value: float
    separating_function: str
    shift: str
    attempt: int
    projector_ranks: list[int]
    passed: bool


def handle_exist(req: ExistRequest) -> ExistResponse:
    key = req.rep.strip().lower()
    quotient = s3_quotient()
    if key in S3_IRREPS:
        rho = s3_rep(key)
    elif key == "regular":
        rho = regular_rep(quotient)
    else:
        raise ValueError(
            f"unknown representation {req.rep!r} (expected one of "
            f"{S3_IRREPS + ('regular',)})"
        )
    x = construct_vvmf(rho, req.tol)
    info = x.provenance or {}
    reg = regular_rep(quotient)
    ctable = s3_character_table(quotient)
    ranks = [
        mat_rank_exact(irrep_projection(reg, character_of(label, quotient), dim))
        for label, dim in zip(ctable.labels, ctable.dims)
    ]
    residual = float(info["residual"])
    return ExistResponse(
        rep=key,
        rank=x.rank,
        residual=residual,
        singular_value=float(info["smallest_relative_singular_value"]),
        separating_function=str(info["separating_function"]),
        shift=str(info["shift"]),
        attempt=int(info["attempt"]),
        projector_ranks=ranks,
        passed=residual <= req.tol,
    )


# --- FastAPI app -------------------------------------------------------------

app = FastAPI(title="vvmf", version=__version__)


def _wrap(handler, req):
    try:
        return handler(req)
    except (VvmfError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.post("/cusps", response_model=CuspsResponse)
def cusps_endpoint(req: CuspsRequest) -> CuspsResponse:
    return _wrap(handle_cusps, req)


@app.post("/induce", response_model=InduceResponse)
def induce_endpoint(req: InduceRequest) -> InduceResponse:
    return _wrap(handle_induce, req)


@app.post("/qseries", response_model=QSeriesResponse)
def qseries_endpoint(req: QSeriesRequest) -> QSeriesResponse:
    return _wrap(handle_qseries, req)


@app.post("/lift", response_model=LiftResponse)
def lift_endpoint(req: LiftRequest) -> LiftResponse:
    return _wrap(handle_lift, req)


@app.post("/verify", response_model=VerifyResponse)
def verify_endpoint(req: VerifyRequest) -> VerifyResponse:
    return _wrap(handle_verify, req)


@app.post("/exist", response_model=ExistResponse)
def exist_endpoint(req: ExistRequest) -> ExistResponse:
    return _wrap(handle_exist, req)
