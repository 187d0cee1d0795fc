"""Labelled transition systems with optional input/output partitioning.

The model layer knows about two kinds of system:

* ``lts`` -- a plain labelled transition system.  Every visible label is
  treated uniformly (stored in the input set; the partition carries no
  meaning) and quiescence is undefined.
* ``iolts`` -- an input/output labelled transition system.  Visible labels
  are partitioned into inputs and outputs, and states without locally
  controlled actions (outputs or internal steps) are *quiescent*.

Models are read and written in the Aldebaran ``.aut`` format::

    des (s0, 9, 4)
    (s0, ?a, s1)
    (s0, ?b, s3)
    ...

``?``/``!`` markers classify labels as inputs/outputs; alternatively the
partition can be given explicitly and the file left unmarked.  Lines whose
first non-blank character is ``#``, and trailing ``# ...`` remarks, are
ignored (a local extension; stock ``.aut`` files contain no comments).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

#: Reserved name for the quiescence observation.  It is attached to models
#: only by :func:`add_quiescence` and may not occur in input files.
DELTA = "delta"

#: Label names treated as internal (unobservable) actions by default.
DEFAULT_INTERNAL = frozenset({"tau", "i"})

_LABEL_KINDS = ("input", "output", "internal", "quiescence")

_HEADER_RE = re.compile(r"^des\s*\(\s*([^(),\s]+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)$")
_EDGE_RE = re.compile(r"^\(\s*([^(),\s]+)\s*,\s*([^(),\s]+)\s*,\s*([^(),\s]+)\s*\)$")


class ModelError(ValueError):
    """A transition system or labelling configuration is ill-formed."""


class ParseError(ModelError):
    """An ``.aut`` document could not be parsed.

    Carries the list of :class:`Diagnostic` records collected up to the
    point of failure in ``diagnostics``.
    """

    def __init__(self, message, diagnostics=()):
        super().__init__(message)
        self.diagnostics = list(diagnostics)


@dataclass(frozen=True)
class Diagnostic:
    """A parser finding: ``severity`` is ``"error"`` or ``"warning"``.

    ``line`` is 1-based; 0 means the finding is not tied to a single line.
    """

    severity: str
    line: int
    message: str

    def __str__(self):
        where = f"line {self.line}: " if self.line else ""
        return f"{self.severity}: {where}{self.message}"


@dataclass(frozen=True)
class Label:
    """A transition label together with its classification."""

    name: str
    kind: str

    def __post_init__(self):
        if not self.name or re.search(r"[(),\s]", self.name):
            raise ModelError(f"bad label name {self.name!r}")
        if self.kind not in _LABEL_KINDS:
            raise ModelError(f"bad label kind {self.kind!r}")


@dataclass(frozen=True)
class LabelingConfig:
    """How to classify the labels found in an ``.aut`` document.

    :param model_kind: ``"lts"`` or ``"iolts"``.
    :param use_markers: classify by ``?``/``!`` markers in the file.  When
        false, ``inputs``/``outputs`` must list every visible label.
    :param inputs: declared input label names (explicit mode).
    :param outputs: declared output label names (explicit mode).
    :param internal: names treated as internal actions.
    :param strict: escalate header-count warnings to errors.
    """

    model_kind: str = "iolts"
    use_markers: bool = True
    inputs: frozenset = frozenset()
    outputs: frozenset = frozenset()
    internal: frozenset = DEFAULT_INTERNAL
    strict: bool = False

    def __post_init__(self):
        object.__setattr__(self, "inputs", frozenset(self.inputs))
        object.__setattr__(self, "outputs", frozenset(self.outputs))
        object.__setattr__(self, "internal", frozenset(self.internal))
        if self.model_kind not in ("lts", "iolts"):
            raise ModelError(f"unknown model kind {self.model_kind!r}")
        overlap = self.inputs & self.outputs
        if overlap:
            raise ModelError(
                "labels declared both input and output: " + ", ".join(sorted(overlap))
            )
        for name in sorted((self.inputs | self.outputs) & (self.internal | {DELTA})):
            raise ModelError(f"reserved label {name!r} may not be declared visible")
        if self.model_kind == "iolts" and not self.use_markers and not (
            self.inputs or self.outputs
        ):
            raise ModelError("explicit labelling needs declared inputs or outputs")


@dataclass(frozen=True)
class TransitionSystem:
    """An immutable (IO)LTS.

    ``states`` preserves discovery order with the initial state first;
    ``transitions`` are ``(source, label, target)`` triples, de-duplicated
    and sorted lexicographically.  Label sets hold names only; use
    :meth:`label_kind` / :meth:`label` for classification.
    """

    kind: str
    states: tuple
    initial: str
    inputs: frozenset
    outputs: frozenset
    internal: frozenset
    transitions: tuple

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "inputs", frozenset(self.inputs))
        object.__setattr__(self, "outputs", frozenset(self.outputs))
        object.__setattr__(self, "internal", frozenset(self.internal))
        object.__setattr__(
            self, "transitions", tuple(sorted(set(map(tuple, self.transitions))))
        )
        self._validate()

    def _validate(self):
        if self.kind not in ("lts", "iolts"):
            raise ModelError(f"unknown model kind {self.kind!r}")
        if len(set(self.states)) != len(self.states):
            raise ModelError("duplicate state names")
        known = set(self.states)
        if self.initial not in known:
            raise ModelError(f"initial state {self.initial!r} not among states")
        if self.inputs & self.outputs:
            raise ModelError("inputs and outputs overlap")
        if (self.inputs | self.outputs) & self.internal:
            raise ModelError("internal labels overlap visible labels")
        if DELTA in self.inputs or DELTA in self.internal:
            raise ModelError(f"{DELTA!r} can only be an output")
        declared = self.inputs | self.outputs | self.internal
        for src, lab, dst in self.transitions:
            if src not in known or dst not in known:
                raise ModelError(f"transition ({src}, {lab}, {dst}) uses unknown state")
            if lab not in declared:
                raise ModelError(f"transition label {lab!r} not declared")
        if self.kind == "lts" and self.outputs:
            raise ModelError("an lts has no output partition")

    # -- queries ---------------------------------------------------------

    def label_kind(self, name):
        """Classify ``name``; raises :class:`ModelError` for unknown names."""
        if name == DELTA and name in self.outputs:
            return "quiescence"
        if name in self.inputs:
            return "input"
        if name in self.outputs:
            return "output"
        if name in self.internal:
            return "internal"
        raise ModelError(f"unknown label {name!r}")

    def label(self, name):
        return Label(name, self.label_kind(name))

    @property
    def visible_labels(self):
        """Input and output label names (quiescence included once added)."""
        return self.inputs | self.outputs

    def outgoing(self, state, label=None):
        """Transitions leaving ``state``, optionally filtered by label."""
        return tuple(
            t
            for t in self.transitions
            if t[0] == state and (label is None or t[1] == label)
        )

    def successors(self, state, label):
        return frozenset(t[2] for t in self.outgoing(state, label))


def quiescent_states(ts):
    """States of an IOLTS with no output and no internal transition.

    Such states produce the quiescence observation.  Undefined (an error)
    for plain LTS models.
    """
    if ts.kind != "iolts":
        raise ModelError("quiescence is only defined for iolts models")
    noisy = ts.outputs | ts.internal
    quiet = []
    for s in ts.states:
        if not any(t[1] in noisy for t in ts.outgoing(s)):
            quiet.append(s)
    return frozenset(quiet)


def add_quiescence(ts):
    """Suspension form of ``ts``: a ``delta`` self-loop on each quiescent state.

    ``delta`` joins the output alphabet.  Augmenting twice is an error, as
    is augmenting a plain LTS.
    """
    if ts.kind != "iolts":
        raise ModelError("quiescence is only defined for iolts models")
    if DELTA in ts.outputs:
        raise ModelError("model is already delta-augmented")
    loops = [(s, DELTA, s) for s in quiescent_states(ts)]
    return TransitionSystem(
        kind=ts.kind,
        states=ts.states,
        initial=ts.initial,
        inputs=ts.inputs,
        outputs=ts.outputs | {DELTA},
        internal=ts.internal,
        transitions=ts.transitions + tuple(loops),
    )


# -- Aldebaran (.aut) reading and writing --------------------------------


def _classify(raw, config, line_no, kinds, diagnostics):
    """Resolve one raw (possibly marked) label occurrence to a kind.

    ``kinds`` accumulates name -> kind over the whole document so that
    conflicting occurrences are caught.
    """
    marker = raw[0] if raw[:1] in ("?", "!") else ""
    name = raw[1:] if marker else raw
    if not name or re.search(r"[(),\s]", name):
        raise _fail(diagnostics, line_no, f"bad label {raw!r}")

    if name == DELTA:
        if marker:
            raise _fail(diagnostics, line_no, f"marker on reserved label {DELTA!r}")
        if config.model_kind != "iolts":
            raise _fail(
                diagnostics, line_no, f"reserved label {DELTA!r} needs an iolts model"
            )
        kind = "quiescence"
    elif name in config.internal:
        if marker:
            raise _fail(diagnostics, line_no, f"marker on internal action {name!r}")
        kind = "internal"
    elif config.model_kind == "lts":
        if marker:
            raise _fail(diagnostics, line_no, "an lts file may not carry ?/! markers")
        kind = "input"  # uniform; the partition is meaningless for an lts
    elif config.use_markers:
        if not marker:
            raise _fail(
                diagnostics,
                line_no,
                f"label {name!r} lacks a ?/! marker (marker labelling in force)",
            )
        kind = "input" if marker == "?" else "output"
    else:
        if name in config.inputs:
            kind = "input"
        elif name in config.outputs:
            kind = "output"
        else:
            raise _fail(diagnostics, line_no, f"label {name!r} not declared")
        if marker and kind != ("input" if marker == "?" else "output"):
            raise _fail(
                diagnostics,
                line_no,
                f"marker on {raw!r} contradicts the declared label sets",
            )

    seen = kinds.get(name)
    if seen is not None and seen != kind:
        raise _fail(
            diagnostics,
            line_no,
            f"label {name!r} used both as {seen} and as {kind}",
        )
    kinds[name] = kind
    return name


def _fail(diagnostics, line_no, message):
    diagnostics.append(Diagnostic("error", line_no, message))
    return ParseError(message, diagnostics)


def parse_aldebaran(text, config=None, diagnostics=None):
    """Parse an ``.aut`` document into a :class:`TransitionSystem`.

    ``diagnostics``, when given, is a list that receives every
    :class:`Diagnostic` produced (warnings and the final error, if any).
    Header/body count mismatches are warnings, or errors when
    ``config.strict``.  Raises :class:`ParseError` on malformed input.
    """
    config = config or LabelingConfig()
    diags = diagnostics if diagnostics is not None else []

    lines = []
    for i, rawline in enumerate(text.splitlines(), start=1):
        body = rawline.split("#", 1)[0].strip()
        if body:
            lines.append((i, body))
    if not lines:
        raise _fail(diags, 0, "empty document: missing des header")

    line_no, header = lines[0]
    m = _HEADER_RE.match(header)
    if not m:
        raise _fail(diags, line_no, f"malformed header {header!r}")
    initial, declared_edges, declared_states = m.group(1), int(m.group(2)), int(m.group(3))

    kinds = {}
    states = [initial]
    seen_states = {initial}
    triples = []
    for line_no, body in lines[1:]:
        m = _EDGE_RE.match(body)
        if not m:
            raise _fail(diags, line_no, f"malformed transition {body!r}")
        src, raw_label, dst = m.groups()
        name = _classify(raw_label, config, line_no, kinds, diags)
        for state in (src, dst):
            if re.search(r"[(),\s]", state):
                raise _fail(diags, line_no, f"bad state name {state!r}")
            if state not in seen_states:
                seen_states.add(state)
                states.append(state)
        triples.append((src, name, dst))

    unique = sorted(set(triples))
    if len(unique) != len(triples):
        diags.append(
            Diagnostic("warning", 0, f"{len(triples) - len(unique)} duplicate transition(s) dropped")
        )
    for count, declared, what in (
        (len(unique), declared_edges, "transitions"),
        (len(states), declared_states, "states"),
    ):
        if count != declared:
            msg = f"header declares {declared} {what}, found {count}"
            if config.strict:
                raise _fail(diags, 0, msg)
            diags.append(Diagnostic("warning", 0, msg))

    inputs = frozenset(n for n, k in kinds.items() if k == "input")
    outputs = frozenset(n for n, k in kinds.items() if k in ("output", "quiescence"))
    # Declared-but-unused labels still belong to the alphabet.
    if config.model_kind == "iolts" and not config.use_markers:
        inputs |= config.inputs
        outputs |= config.outputs
    elif config.model_kind == "lts":
        inputs |= config.inputs | config.outputs
    internal = frozenset(n for n, k in kinds.items() if k == "internal")
    try:
        return TransitionSystem(
            kind=config.model_kind,
            states=states,
            initial=initial,
            inputs=inputs,
            outputs=outputs,
            internal=internal,
            transitions=unique,
        )
    except ModelError as exc:
        raise _fail(diags, 0, str(exc))


def serialize_aldebaran(ts, markers=True):
    """Render ``ts`` back to ``.aut`` text.

    With ``markers`` (the default, meaningful for iolts models) inputs are
    prefixed ``?`` and outputs ``!``; internal actions and ``delta`` are
    never marked.  The output ends with a newline.
    """
    use_markers = markers and ts.kind == "iolts"

    def fmt(label):
        if use_markers:
            kind = ts.label_kind(label)
            if kind == "input":
                return "?" + label
            if kind == "output":
                return "!" + label
        return label

    out = [f"des ({ts.initial}, {len(ts.transitions)}, {len(ts.states)})"]
    for src, lab, dst in ts.transitions:
        out.append(f"({src}, {fmt(lab)}, {dst})")
    return "\n".join(out) + "\n"


def _dot_quote(name):
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def model_to_dot(ts, name="model"):
    """Graphviz rendering of ``ts``.

    The initial state is pointed at by an arrow from an invisible node;
    ``delta`` self-loops are dashed.
    """
    lines = [f"digraph {_dot_quote(name)} {{", "  rankdir=LR;", '  __init [shape=point, label=""];']
    for s in ts.states:
        lines.append(f"  {_dot_quote(s)} [shape=circle];")
    lines.append(f"  __init -> {_dot_quote(ts.initial)};")
    for src, lab, dst in ts.transitions:
        style = ", style=dashed" if lab == DELTA and lab in ts.outputs else ""
        lines.append(f"  {_dot_quote(src)} -> {_dot_quote(dst)} [label={_dot_quote(lab)}{style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
