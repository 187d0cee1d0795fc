"""HTTP front end: the checker as a small JSON service.

Run with ``uvicorn confkit.service:app``.  Models are posted inline as
``.aut`` text plus labelling options; responses mirror the CLI's JSON
reports.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .automata import canonical_alphabet, complement, fsa_to_dot, induced_fsa
from .cli import report_payload
from .conformance import (
    ConformanceError,
    fault_model_ioco,
    fault_model_language,
    verify_ioco,
    verify_language,
)
from .models import (
    DEFAULT_INTERNAL,
    LabelingConfig,
    ModelError,
    add_quiescence,
    model_to_dot,
    parse_aldebaran,
    quiescent_states,
)
from .regex import RegexError, full_language, parse_regex

app = FastAPI(title="confkit", version=__version__)


class ModelPayload(BaseModel):
    text: str
    modelType: str = "iolts"
    labels: str = "markers"
    inputs: list[str] = Field(default_factory=list)
    outputs: list[str] = Field(default_factory=list)
    internal: list[str] | None = None
    strict: bool = False


class CheckIocoRequest(BaseModel):
    spec: ModelPayload
    iut: ModelPayload
    bound: int | None = None


class CheckLanguageRequest(CheckIocoRequest):
    desirable: str | None = None
    undesirable: str | None = None
    blankUndesirableFull: bool = False


class RenderRequest(BaseModel):
    model: ModelPayload
    what: str = "model"
    desirable: str | None = None
    undesirable: str | None = None
    blankUndesirableFull: bool = False


class TestCasePayload(BaseModel):
    faultWord: list[str]
    stimulusPrefix: list[str]
    expectedOutputs: list[str]
    observedOutput: str | None
    specPath: list[str]
    iutPath: list[str]


class VerdictResponse(BaseModel):
    relation: str
    conforms: bool
    testCases: list[TestCasePayload]
    coveredSpecTransitions: list[list[str]]
    stats: dict
    warnings: list[str]


def _parse_model(payload: ModelPayload):
    if payload.labels not in ("markers", "explicit"):
        raise HTTPException(422, detail=f"unknown labelling mode {payload.labels!r}")
    internal = DEFAULT_INTERNAL if payload.internal is None else frozenset(payload.internal)
    try:
        config = LabelingConfig(
            model_kind=payload.modelType,
            use_markers=payload.labels == "markers",
            inputs=frozenset(payload.inputs),
            outputs=frozenset(payload.outputs),
            internal=internal,
            strict=payload.strict,
        )
        return parse_aldebaran(payload.text, config)
    except ModelError as exc:
        raise HTTPException(422, detail=str(exc))


def _languages(spec, desirable, undesirable, blank_full):
    alphabet = canonical_alphabet(spec.inputs, spec.outputs)
    try:
        d = parse_regex(desirable, alphabet) if desirable else None
        f = parse_regex(undesirable, alphabet) if undesirable else None
    except RegexError as exc:
        raise HTTPException(422, detail=str(exc))
    if f is None and blank_full:
        f = full_language(alphabet)
    return d, f


def _respond(verdict) -> VerdictResponse:
    payload = report_payload(verdict)
    payload["warnings"] = list(verdict.warnings)
    return VerdictResponse(**payload)


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/check/ioco", response_model=VerdictResponse)
def check_ioco(request: CheckIocoRequest):
    spec = _parse_model(request.spec)
    iut = _parse_model(request.iut)
    try:
        return _respond(verify_ioco(spec, iut, bound=request.bound))
    except (ModelError, ConformanceError) as exc:
        raise HTTPException(422, detail=str(exc))


@app.post("/check/language", response_model=VerdictResponse)
def check_language(request: CheckLanguageRequest):
    spec = _parse_model(request.spec)
    iut = _parse_model(request.iut)
    desirable, undesirable = _languages(
        spec, request.desirable, request.undesirable, request.blankUndesirableFull
    )
    try:
        return _respond(
            verify_language(
                spec, iut, desirable=desirable, undesirable=undesirable, bound=request.bound
            )
        )
    except (ModelError, ConformanceError) as exc:
        raise HTTPException(422, detail=str(exc))


@app.post("/render")
def render(request: RenderRequest):
    model = _parse_model(request.model)
    try:
        if request.what == "model":
            dot = model_to_dot(model)
        elif request.what == "augmented":
            dot = model_to_dot(add_quiescence(model))
        elif request.what == "induced":
            dot = fsa_to_dot(induced_fsa(model), name="induced")
        elif request.what == "complement":
            dot = fsa_to_dot(complement(induced_fsa(model)), name="complement")
        elif request.what == "fault-ioco":
            dot = fsa_to_dot(fault_model_ioco(model).automaton, name="fault_ioco")
        elif request.what == "fault-lang":
            desirable, undesirable = _languages(
                model, request.desirable, request.undesirable, request.blankUndesirableFull
            )
            fm = fault_model_language(model, desirable, undesirable)
            dot = fsa_to_dot(fm.automaton, name="fault_language")
        else:
            raise HTTPException(422, detail=f"unknown render target {request.what!r}")
    except (ModelError, ConformanceError) as exc:
        raise HTTPException(422, detail=str(exc))
    return {"what": request.what, "dot": dot}


@app.post("/info")
def info(payload: ModelPayload):
    model = _parse_model(payload)
    result = {
        "kind": model.kind,
        "initial": model.initial,
        "states": len(model.states),
        "transitions": len(model.transitions),
        "inputs": sorted(model.inputs),
        "outputs": sorted(model.outputs),
    }
    if model.kind == "iolts":
        result["quiescentStates"] = sorted(quiescent_states(model))
    return result
