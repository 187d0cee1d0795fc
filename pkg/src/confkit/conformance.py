"""Conformance checking of implementations against specifications.

Two relations are offered, both decided through automaton constructions:

* **ioco** -- an implementation conforms when, after every observable
  suspension trace of the specification, it shows only outputs (or
  quiescence) the specification allows.
* **language** -- conformance relative to a *desirable* language D and an
  *undesirable* language F: every implementation trace in D must be a
  specification trace, and none of its traces in F may be.

Both reduce to the emptiness of a product automaton: a *fault model*
accepting exactly the forbidden observations is intersected with the
implementation's trace automaton.  Words of that product are faults; the
suite extractor turns them into concrete test cases.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import regex as rx
from .automata import (
    Fsa,
    StateTag,
    canonical_alphabet,
    complement,
    determinize,
    induced_fsa,
    intersection,
    is_deterministic,
    is_empty_language,
    minimize,
    renumber_states,
    trim,
    union,
)
from .models import DELTA, add_quiescence

#: Hard ceilings for suite extraction on adversarial inputs; hitting one
#: produces a truncation warning, never silent loss.
MAX_CASES = 512
_MAX_WALK_STEPS = 200_000


class ConformanceError(ValueError):
    """The requested check is ill-posed (kind or alphabet mismatch, ...)."""


@dataclass(frozen=True)
class TestCase:
    """One executable counterexample.

    ``fault_word`` is the full forbidden observation.  For ioco checks,
    ``stimulus_prefix`` is everything but the last symbol,
    ``observed_output`` that last symbol, and ``expected_outputs`` what the
    specification allows instead; paths list the specification/
    implementation states visited while replaying (sets of states render
    joined with ``+``).  Language checks report the whole word as the
    stimulus and leave the output fields empty.
    """

    fault_word: tuple
    stimulus_prefix: tuple
    expected_outputs: tuple
    observed_output: str | None
    spec_path: tuple
    iut_path: tuple


@dataclass(frozen=True)
class FaultModel:
    """An automaton accepting exactly the forbidden observations."""

    relation: str
    automaton: Fsa
    desirable: object = None
    undesirable: object = None
    stats: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Verdict:
    relation: str
    conforms: bool
    test_cases: tuple
    covered_spec_transitions: tuple
    stats: dict
    warnings: tuple = ()


# -- fault models ---------------------------------------------------------


def model_d(ts):
    """Automaton for ``otr(ts) · outputs``: any trace, then one more output.

    Every model state grows an edge per output symbol into one fresh
    accepting sink (named ``f``); only the sink accepts.  Used as the
    desirable language that makes the language relation coincide with
    ioco on delta-augmented models.
    """
    if ts.kind != "iolts":
        raise ConformanceError("model_d needs an iolts (outputs are required)")
    base = induced_fsa(ts)
    sink = _fresh(base.states, "f")
    outputs = [sym for sym in base.alphabet if sym in ts.outputs]
    transitions = list(base.transitions)
    transitions += [(s, u, sink) for s in base.states for u in outputs]
    tags = dict(base.tags)
    tags[sink] = StateTag((sink,))
    return Fsa(
        states=base.states + (sink,),
        initial=base.initial,
        alphabet=base.alphabet,
        transitions=transitions,
        finals=frozenset({sink}),
        tags=tags,
    )


def _fresh(taken, base):
    taken = set(taken)
    if base not in taken:
        return base
    i = 0
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def _missing_output_fault(trace_dfa, outputs):
    """Deterministic refinement of :func:`model_d` used inside pipelines.

    On the spec's trace DFA, add a fault edge only for outputs *not*
    enabled at a state.  The language is ``otr · outputs`` restricted to
    non-traces -- exactly what survives intersection with the trace
    complement anyway -- and the construction stays deterministic, so
    product states keep one-to-one names.
    """
    sink = _fresh(trace_dfa.states, "f")
    enabled = {(src, sym) for src, sym, _ in trace_dfa.transitions}
    fault_edges = [
        (s, u, sink)
        for s in trace_dfa.states
        for u in trace_dfa.alphabet
        if u in outputs and (s, u) not in enabled
    ]
    tags = dict(trace_dfa.tags)
    tags[sink] = StateTag((sink,))
    return Fsa(
        states=trace_dfa.states + (sink,),
        initial=trace_dfa.initial,
        alphabet=trace_dfa.alphabet,
        transitions=list(trace_dfa.transitions) + fault_edges,
        finals=frozenset({sink}),
        tags=tags,
    )


def fault_model_ioco(spec):
    """Fault model for ioco: observations no correct implementation makes.

    The spec is delta-augmented, its trace DFA complemented, and the
    product taken with the missing-output automaton; the result accepts
    ``σ·u`` where ``σ`` is a suspension trace of the spec and output ``u``
    is not allowed after it.
    """
    sd = add_quiescence(spec)
    trace_dfa = determinize(induced_fsa(sd))
    comp = complement(trace_dfa)
    fault = _missing_output_fault(trace_dfa, sd.outputs)
    model = intersection(comp, fault)
    stats = {
        "automata": {
            "specTraceDfa": len(trace_dfa.states),
            "specComplement": len(comp.states),
            "outputFault": len(fault.states),
            "faultModel": len(model.states),
        },
        "products": [
            {
                "name": "faultModel",
                "left": len(comp.states),
                "right": len(fault.states),
                "result": len(model.states),
            }
        ],
    }
    return FaultModel("ioco", model, desirable=None, undesirable=None, stats=stats)


def _compile_language(side, alphabet, prefix):
    """Turn a regex tree / automaton / None into a named trace DFA.

    Regex sides are minimized so that equal-behaviour subset states
    collapse (duplicates would multiply product states and pad extracted
    suites with equivalent words); caller-supplied automata keep their own
    state names untouched.
    """
    if side is None:
        return None
    if isinstance(side, Fsa):
        return side if is_deterministic(side) else determinize(side)
    dfa = minimize(determinize(rx.regex_to_fsa(side, alphabet)))
    return renumber_states(dfa, prefix)


def fault_model_language(spec, desirable=None, undesirable=None):
    """Fault model for the language relation.

    ``desirable``/``undesirable`` are regex trees or automata; a blank
    desirable side defaults to every word over the model alphabet, a blank
    undesirable side to the empty language.  Faults are desirable words
    that are not spec traces, together with undesirable words that are.
    """
    trace_dfa = determinize(induced_fsa(spec))
    alphabet = trace_dfa.alphabet
    if desirable is None:
        desirable = rx.full_language(alphabet)
    d_dfa = _compile_language(desirable, alphabet, "d")
    f_dfa = _compile_language(undesirable, alphabet, "e")
    comp = complement(trace_dfa)

    products = []

    def record(name, left, right, result):
        products.append(
            {
                "name": name,
                "left": len(left.states),
                "right": len(right.states),
                "result": len(result.states),
            }
        )

    fail_d = None
    if d_dfa is not None and not is_empty_language(d_dfa):
        fail_d = intersection(comp, d_dfa)
        record("desirableMisses", comp, d_dfa, fail_d)
    fail_f = None
    if f_dfa is not None and not is_empty_language(f_dfa):
        fail_f = intersection(trace_dfa, f_dfa)
        record("undesirableHits", trace_dfa, f_dfa, fail_f)

    if fail_d is not None and fail_f is not None:
        model = union(fail_d, fail_f)
        record("faultModelUnion", fail_d, fail_f, model)
    elif fail_d is not None:
        model = fail_d
    elif fail_f is not None:
        model = fail_f
    else:
        model = Fsa(("e0",), "e0", alphabet, (), frozenset())
    stats = {
        "automata": {
            "specTraceDfa": len(trace_dfa.states),
            "specComplement": len(comp.states),
            "desirableDfa": len(d_dfa.states) if d_dfa is not None else 0,
            "undesirableDfa": len(f_dfa.states) if f_dfa is not None else 0,
            "faultModel": len(model.states),
        },
        "products": products,
    }
    return FaultModel(
        "language", model, desirable=desirable, undesirable=undesirable, stats=stats
    )


# -- verdicts -------------------------------------------------------------


def _require_same_alphabet(spec, iut, relation):
    if relation == "ioco":
        for name, ts in (("spec", spec), ("iut", iut)):
            if ts.kind != "iolts":
                raise ConformanceError(f"ioco needs iolts models; {name} is an lts")
    elif spec.kind != iut.kind:
        raise ConformanceError(
            f"model kinds differ: spec is {spec.kind}, iut is {iut.kind}"
        )
    for part in ("inputs", "outputs"):
        a, b = getattr(spec, part), getattr(iut, part)
        if a != b:
            diff = ", ".join(sorted(a ^ b))
            raise ConformanceError(f"models disagree on {part}: {diff}")


def verify_ioco(spec, iut, bound=None, max_cases=MAX_CASES):
    """Check ``iut ioco spec`` and derive test cases from any faults."""
    _require_same_alphabet(spec, iut, "ioco")
    fm = fault_model_ioco(spec)
    sd = add_quiescence(spec)
    idelta = add_quiescence(iut)
    iut_dfa = determinize(induced_fsa(idelta))
    product = intersection(fm.automaton, iut_dfa)
    conforms = is_empty_language(product)
    stats = {
        "specStates": len(spec.states),
        "iutStates": len(iut.states),
        "automata": dict(fm.stats["automata"], iutTraceDfa=len(iut_dfa.states), product=len(product.states)),
        "products": fm.stats["products"]
        + [
            {
                "name": "verdict",
                "left": len(fm.automaton.states),
                "right": len(iut_dfa.states),
                "result": len(product.states),
            }
        ],
    }
    cases, covered, warnings = (), (), ()
    if not conforms:
        cases, covered, warnings = extract_test_suite(
            product, sd, idelta, "ioco", bound=bound, max_cases=max_cases
        )
    stats["testCases"] = len(cases)
    return Verdict("ioco", conforms, cases, covered, stats, warnings)


def verify_language(spec, iut, desirable=None, undesirable=None, bound=None, max_cases=MAX_CASES):
    """Check language conformance of ``iut`` against ``spec``.

    ``desirable``/``undesirable`` accept regex trees or automata (see
    :func:`fault_model_language`); models are used as-is, without
    quiescence closure.
    """
    _require_same_alphabet(spec, iut, "language")
    fm = fault_model_language(spec, desirable, undesirable)
    iut_dfa = determinize(induced_fsa(iut))
    product = intersection(fm.automaton, iut_dfa)
    conforms = is_empty_language(product)
    stats = {
        "specStates": len(spec.states),
        "iutStates": len(iut.states),
        "automata": dict(fm.stats["automata"], iutTraceDfa=len(iut_dfa.states), product=len(product.states)),
        "products": fm.stats["products"]
        + [
            {
                "name": "verdict",
                "left": len(fm.automaton.states),
                "right": len(iut_dfa.states),
                "result": len(product.states),
            }
        ],
    }
    cases, covered, warnings = (), (), ()
    if not conforms:
        cases, covered, warnings = extract_test_suite(
            product, spec, iut, "language", bound=bound, max_cases=max_cases
        )
    stats["testCases"] = len(cases)
    return Verdict("language", conforms, cases, covered, stats, warnings)


# -- replaying words on models --------------------------------------------


def _closure_set(ts, states):
    seen = set(states)
    work = list(states)
    while work:
        s = work.pop()
        for _, lab, dst in ts.outgoing(s):
            if lab in ts.internal and dst not in seen:
                seen.add(dst)
                work.append(dst)
    return frozenset(seen)


def _step_set(ts, states, label):
    moved = {dst for s in states for _, _, dst in ts.outgoing(s, label)}
    return _closure_set(ts, moved)


def observable_walk(ts, word):
    """State sets visited while observing ``word``; None once it diverges.

    Returns a list of ``len(word) + 1`` frozensets when the whole word is
    a trace of ``ts``.
    """
    sets = [_closure_set(ts, {ts.initial})]
    for sym in word:
        nxt = _step_set(ts, sets[-1], sym)
        if not nxt:
            return None
        sets.append(nxt)
    return sets


def outputs_after(ts, states):
    """Output names (quiescence included) enabled somewhere in ``states``."""
    return frozenset(
        u for u in ts.outputs if any(ts.outgoing(s, u) for s in states)
    )


def _display(ts, states):
    order = {s: i for i, s in enumerate(ts.states)}
    return "+".join(sorted(states, key=order.__getitem__))


# -- test suite extraction ------------------------------------------------


def _simple_accepted_paths(fsa, max_paths, step_limit):
    """Node-distinct accepting paths from the initial state.

    Depth-first in alphabet order, emitting every time an accepting state
    is visited (and continuing through it).  Returns (paths, truncated)
    where each path is (state_names, word).
    """
    rank = {sym: i for i, sym in enumerate(fsa.alphabet)}
    index = {s: i for i, s in enumerate(fsa.states)}
    edges = {}
    for src, sym, dst in fsa.transitions:
        if src != dst:  # self-loops never extend a node-distinct path
            edges.setdefault(src, []).append((sym, dst))
    for src in edges:
        edges[src].sort(key=lambda e: (rank[e[0]], index[e[1]]))

    paths = []
    truncated = False
    steps = 0
    on_path = {fsa.initial}
    nodes = [fsa.initial]
    word = []

    def walk(state):
        nonlocal steps, truncated
        if state in fsa.finals:
            if len(paths) >= max_paths:
                truncated = True
                return False
            paths.append((tuple(nodes), tuple(word)))
        for sym, dst in edges.get(state, ()):
            if dst in on_path:
                continue
            steps += 1
            if steps > step_limit:
                truncated = True
                return False
            on_path.add(dst)
            nodes.append(dst)
            word.append(sym)
            alive = walk(dst)
            on_path.discard(dst)
            nodes.pop()
            word.pop()
            if not alive:
                return False
        return True

    walk(fsa.initial)
    return paths, truncated


def _self_loop_labels(fsa):
    rank = {sym: i for i, sym in enumerate(fsa.alphabet)}
    loops = {}
    for src, sym, dst in fsa.transitions:
        if src == dst and sym != DELTA:
            loops.setdefault(src, []).append(sym)
    for src in loops:
        loops[src].sort(key=rank.__getitem__)
    return loops


def extract_test_suite(product, spec, iut, relation, bound=None, max_cases=MAX_CASES):
    """Turn a non-empty fault product into an ordered test suite.

    Every node-distinct accepting path of the trimmed product contributes
    its word, plus one pumped variant per self-loop at the last
    loop-carrying node along it (quiescence loops are not pumped: repeating
    an observed quiescence adds nothing).  Words longer than ``bound``
    (default: the product's state count) are dropped with a truncation
    warning.  Cases are grouped by the fault they witness -- for ioco the
    specification states reached plus the offending output, for the
    language relation the accepting product state -- and ordered
    shortest-first.

    Returns ``(cases, covered_spec_transitions, warnings)``.
    """
    if bound is None:
        bound = len(product.states)
    if bound < 0:
        raise ConformanceError("bound must be non-negative")
    rank = {sym: i for i, sym in enumerate(product.alphabet)}
    core = trim(product)
    paths, truncated = _simple_accepted_paths(core, max_cases, _MAX_WALK_STEPS)
    loops = _self_loop_labels(core)

    words = {}  # word -> final product state (insertion ordered)
    dropped = False
    for nodes, word in paths:
        variants = [word]
        loop_positions = [i for i, node in enumerate(nodes) if node in loops]
        if loop_positions:
            j = loop_positions[-1]
            for sym in loops[nodes[j]]:
                variants.append(word[:j] + (sym,) + word[j:])
        for variant in variants:
            if len(variant) > bound:
                dropped = True
            elif variant not in words:
                words[variant] = nodes[-1]

    warnings = []
    if truncated:
        warnings.append(
            f"test suite truncated: more than {max_cases} fault paths explored"
        )
    if dropped:
        warnings.append(f"fault words longer than the bound {bound} were dropped")
    if not words and not is_empty_language(product) and not warnings:
        warnings.append("no fault word within the bound")

    def word_key(w):
        return (len(w), tuple(rank[s] for s in w))

    cases = {}
    groups = {}
    covered = set()
    for word, end_state in words.items():
        case, group_key, edges = _replay_case(spec, iut, relation, word, end_state)
        cases[word] = case
        groups.setdefault(group_key, []).append(word)
        covered.update(edges)

    ordered_groups = sorted(groups.values(), key=lambda ws: min(map(word_key, ws)))
    ordered = [
        cases[w] for group in ordered_groups for w in sorted(group, key=word_key)
    ]
    return tuple(ordered), tuple(sorted(covered)), tuple(warnings)


def _replay_case(spec, iut, relation, word, end_state):
    if relation == "ioco":
        prefix, observed = word[:-1], word[-1]
    else:
        prefix, observed = word, None

    iut_sets = observable_walk(iut, word)
    if iut_sets is None:
        raise ConformanceError(f"fault word {word!r} does not replay on the iut")
    spec_sets = observable_walk(spec, prefix)

    if relation == "ioco":
        if spec_sets is None:
            raise ConformanceError(f"stimulus {prefix!r} does not replay on the spec")
        out_rank = {sym: i for i, sym in enumerate(canonical_alphabet((), spec.outputs))}
        expected = tuple(sorted(outputs_after(spec, spec_sets[-1]), key=out_rank.__getitem__))
        group_key = ("ioco", spec_sets[-1], observed)
        walked = spec_sets
    else:
        # The spec may diverge mid-word; report the walk as far as it goes.
        walked = [_closure_set(spec, {spec.initial})]
        for sym in word:
            nxt = _step_set(spec, walked[-1], sym)
            if not nxt:
                break
            walked.append(nxt)
        expected = ()
        group_key = ("language", end_state)

    covered = set()
    for i in range(len(walked) - 1):
        sym = (prefix if relation == "ioco" else word)[i]
        for src, lab, dst in spec.transitions:
            if lab == sym and src in walked[i] and dst in walked[i + 1]:
                covered.add((src, lab, dst))

    case = TestCase(
        fault_word=word,
        stimulus_prefix=prefix,
        expected_outputs=expected,
        observed_output=observed,
        spec_path=tuple(_display(spec, s) for s in (spec_sets if relation == "ioco" else walked)),
        iut_path=tuple(_display(iut, s) for s in iut_sets),
    )
    return case, group_key, covered


# -- brute-force oracles ---------------------------------------------------


def oracle_ioco(spec, iut, depth):
    """Definitional ioco check on all joint observations up to ``depth``.

    Walks pairs of state sets breadth-first (two observations with the same
    pair behave identically, so this equals enumerating every suspension
    trace of length <= depth) and tests output inclusion at each step.
    """
    _require_same_alphabet(spec, iut, "ioco")
    sd = add_quiescence(spec)
    idelta = add_quiescence(iut)
    symbols = canonical_alphabet(sd.inputs, sd.outputs)
    start = (_closure_set(sd, {sd.initial}), _closure_set(idelta, {idelta.initial}))
    seen = {start}
    level = [start]
    for _ in range(depth + 1):
        for spec_set, iut_set in level:
            if not outputs_after(idelta, iut_set) <= outputs_after(sd, spec_set):
                return False
        nxt = []
        for spec_set, iut_set in level:
            for sym in symbols:
                spec_next = _step_set(sd, spec_set, sym)
                if not spec_next:
                    continue  # not a spec suspension trace: out of scope
                iut_next = _step_set(idelta, iut_set, sym)
                if not iut_next:
                    continue  # implementation can't follow: vacuous from here
                pair = (spec_next, iut_next)
                if pair not in seen:
                    seen.add(pair)
                    nxt.append(pair)
        level = nxt
        if not level:
            break
    return True


def oracle_language(spec, iut, desirable=None, undesirable=None, depth=8):
    """Definitional language-conformance check up to ``depth``.

    Implementation traces are walked breadth-first while the desirable and
    undesirable languages are tracked by regex derivatives -- no automata
    are built.  A violation is an implementation trace that is nullable in
    D but not a spec trace, or nullable in F and a spec trace.
    """
    _require_same_alphabet(spec, iut, "language")
    symbols = canonical_alphabet(spec.inputs, spec.outputs)
    d = rx.full_language(symbols) if desirable is None else desirable
    f = rx.EmptyLanguage() if undesirable is None else undesirable
    start = (
        _closure_set(iut, {iut.initial}),
        _closure_set(spec, {spec.initial}),
        d,
        f,
    )
    seen = {start}
    level = [start]
    for _ in range(depth + 1):
        for iut_set, spec_set, dn, fn in level:
            if rx.nullable(dn) and not spec_set:
                return False
            if rx.nullable(fn) and spec_set:
                return False
        nxt = []
        for iut_set, spec_set, dn, fn in level:
            for sym in symbols:
                iut_next = _step_set(iut, iut_set, sym)
                if not iut_next:
                    continue
                dd = rx.derivative(dn, sym)
                ff = rx.derivative(fn, sym)
                if isinstance(dd, rx.EmptyLanguage) and isinstance(ff, rx.EmptyLanguage):
                    continue  # neither language can fire on any extension
                state = (iut_next, _step_set(spec, spec_set, sym), dd, ff)
                if state not in seen:
                    seen.add(state)
                    nxt.append(state)
        level = nxt
        if not level:
            break
    return True
