"""Command line front end.

Subcommands: ``check-ioco``, ``check-lang``, ``render``, ``info``.  Exit
status is 0 for success/conformance, 1 for a non-conforming verdict and 2
for usage, parse or configuration errors.  Warnings go to stderr prefixed
``warning:``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from .automata import canonical_alphabet, complement, fsa_to_dot, induced_fsa
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

INTERNAL_LABELS_ENV = "CONFKIT_INTERNAL_LABELS"


class _UsageError(Exception):
    pass


def _split_labels(text):
    return frozenset(part.strip() for part in text.split(",") if part.strip())


def _internal_labels():
    raw = os.environ.get(INTERNAL_LABELS_ENV)
    if raw is None:
        return DEFAULT_INTERNAL
    labels = _split_labels(raw)
    if not labels:
        raise _UsageError(f"{INTERNAL_LABELS_ENV} is set but names no labels")
    return labels


def _labeling(args):
    return LabelingConfig(
        model_kind=args.model_type,
        use_markers=args.labels == "markers",
        inputs=_split_labels(args.inputs or ""),
        outputs=_split_labels(args.outputs or ""),
        internal=_internal_labels(),
        strict=args.strict,
    )


def _load_model(path, config):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc}")
    diags = []
    model = parse_aldebaran(text, config, diags)
    for diag in diags:
        if diag.severity == "warning":
            print(f"warning: {path}: {diag.message}", file=sys.stderr)
    return model


def _languages(args, alphabet):
    desirable = undesirable = None
    if getattr(args, "desirable", None):
        desirable = parse_regex(args.desirable, alphabet)
    if getattr(args, "undesirable", None):
        undesirable = parse_regex(args.undesirable, alphabet)
    elif getattr(args, "blank_undesirable_full", False):
        undesirable = full_language(alphabet)
    return desirable, undesirable


def _case_payload(case):
    return {
        "faultWord": list(case.fault_word),
        "stimulusPrefix": list(case.stimulus_prefix),
        "expectedOutputs": list(case.expected_outputs),
        "observedOutput": case.observed_output,
        "specPath": list(case.spec_path),
        "iutPath": list(case.iut_path),
    }


def report_payload(verdict):
    """JSON-ready report for a verdict (stable key order when dumped)."""
    return {
        "relation": verdict.relation,
        "conforms": verdict.conforms,
        "testCases": [_case_payload(c) for c in verdict.test_cases],
        "coveredSpecTransitions": [list(t) for t in verdict.covered_spec_transitions],
        "stats": verdict.stats,
    }


def _format_verdict(verdict, fmt, elapsed_ms):
    if fmt == "json":
        payload = report_payload(verdict)
        payload["timing"] = {"elapsedMs": round(elapsed_ms, 3)}
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    lines = []
    outcome = "conforms" if verdict.conforms else "does not conform"
    lines.append(f"{verdict.relation}: implementation {outcome}")
    if verdict.test_cases:
        lines.append(f"test cases: {len(verdict.test_cases)}")
    for i, case in enumerate(verdict.test_cases, start=1):
        word = " ".join(case.fault_word)
        if verdict.relation == "ioco":
            expected = ", ".join(case.expected_outputs) or "-"
            lines.append(
                f"  {i}. stimulus: {' '.join(case.stimulus_prefix) or '(none)'}"
                f" | expected: {expected} | observed: {case.observed_output}"
            )
        else:
            lines.append(f"  {i}. word: {word}")
        lines.append(
            f"     spec path: {' '.join(case.spec_path)}"
            f" | iut path: {' '.join(case.iut_path)}"
        )
    return "\n".join(lines) + "\n"


def _emit(text, args):
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _print_warnings(verdict):
    for message in verdict.warnings:
        print(f"warning: {message}", file=sys.stderr)


def _cmd_check_ioco(args):
    config = _labeling(args)
    spec = _load_model(args.spec, config)
    iut = _load_model(args.iut, config)
    started = time.perf_counter()
    verdict = verify_ioco(spec, iut, bound=args.bound)
    elapsed = (time.perf_counter() - started) * 1000.0
    _print_warnings(verdict)
    _emit(_format_verdict(verdict, args.format, elapsed), args)
    return 0 if verdict.conforms else 1


def _cmd_check_lang(args):
    config = _labeling(args)
    spec = _load_model(args.spec, config)
    iut = _load_model(args.iut, config)
    alphabet = canonical_alphabet(spec.inputs, spec.outputs)
    desirable, undesirable = _languages(args, alphabet)
    started = time.perf_counter()
    verdict = verify_language(
        spec, iut, desirable=desirable, undesirable=undesirable, bound=args.bound
    )
    elapsed = (time.perf_counter() - started) * 1000.0
    _print_warnings(verdict)
    _emit(_format_verdict(verdict, args.format, elapsed), args)
    return 0 if verdict.conforms else 1


def _cmd_render(args):
    config = _labeling(args)
    model = _load_model(args.spec, config)
    what = args.what
    if what == "model":
        text = model_to_dot(model)
    elif what == "augmented":
        text = model_to_dot(add_quiescence(model))
    elif what == "induced":
        text = fsa_to_dot(induced_fsa(model), name="induced")
    elif what == "complement":
        text = fsa_to_dot(complement(induced_fsa(model)), name="complement")
    elif what == "fault-ioco":
        text = fsa_to_dot(fault_model_ioco(model).automaton, name="fault_ioco")
    else:  # fault-lang
        alphabet = canonical_alphabet(model.inputs, model.outputs)
        desirable, undesirable = _languages(args, alphabet)
        fm = fault_model_language(model, desirable, undesirable)
        text = fsa_to_dot(fm.automaton, name="fault_language")
    _emit(text, args)
    return 0


def _cmd_info(args):
    config = _labeling(args)
    model = _load_model(args.spec, config)
    info = {
        "kind": model.kind,
        "initial": model.initial,
        "states": len(model.states),
        "transitions": len(model.transitions),
        "inputs": sorted(model.inputs),
        "outputs": sorted(model.outputs),
        "internal": sorted(model.internal & {l for _, l, _ in model.transitions}),
    }
    if model.kind == "iolts":
        info["quiescentStates"] = sorted(quiescent_states(model))
    if args.format == "json":
        _emit(json.dumps(info, indent=2, sort_keys=True) + "\n", args)
    else:
        lines = [f"{key}: {value}" for key, value in info.items()]
        _emit("\n".join(lines) + "\n", args)
    return 0


def _add_model_options(parser, with_iut):
    parser.add_argument("--spec", required=True, help="specification .aut file")
    if with_iut:
        parser.add_argument("--iut", required=True, help="implementation .aut file")
    parser.add_argument(
        "--model-type", choices=("lts", "iolts"), default="iolts", dest="model_type"
    )
    parser.add_argument(
        "--labels",
        choices=("markers", "explicit"),
        default="markers",
        help="classify labels by ?/! markers or by explicit --inputs/--outputs lists",
    )
    parser.add_argument("--inputs", default="", help="comma separated input labels")
    parser.add_argument("--outputs", default="", help="comma separated output labels")
    parser.add_argument("--strict", action="store_true", help="treat parse warnings as errors")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--out", default=None, help="write the report to a file")


def _add_language_options(parser):
    parser.add_argument("--desirable", default=None, help="regex for desirable behaviour")
    parser.add_argument("--undesirable", default=None, help="regex for undesirable behaviour")
    parser.add_argument(
        "--blank-undesirable-full",
        action="store_true",
        help="treat a blank undesirable language as every word instead of none",
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="confkit",
        description="Conformance checking of labelled transition systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-ioco", help="check input-output conformance")
    _add_model_options(p, with_iut=True)
    p.add_argument("--bound", type=int, default=None, help="max fault word length")
    p.set_defaults(func=_cmd_check_ioco)

    p = sub.add_parser("check-lang", help="check language conformance")
    _add_model_options(p, with_iut=True)
    _add_language_options(p)
    p.add_argument("--bound", type=int, default=None, help="max fault word length")
    p.set_defaults(func=_cmd_check_lang)

    p = sub.add_parser("render", help="export a model or derived automaton as DOT")
    _add_model_options(p, with_iut=False)
    _add_language_options(p)
    p.add_argument(
        "--what",
        choices=("model", "augmented", "induced", "complement", "fault-ioco", "fault-lang"),
        default="model",
    )
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("info", help="summarise a model")
    _add_model_options(p, with_iut=False)
    p.set_defaults(func=_cmd_info)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ModelError, ConformanceError, RegexError, _UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
