"""Shared fixtures and independent helpers for the test suite.

The helpers here deliberately re-derive things from first principles
(walking transition systems directly, generating seeded random models)
so tests can cross-check the library against a second route.
"""

import itertools
import random
from pathlib import Path

import pytest

from confkit import LabelingConfig, TransitionSystem, parse_aldebaran

DATA = Path(__file__).parent / "data"

CORPUS_SEED = 20260814


def load(name, config=None):
    return parse_aldebaran((DATA / name).read_text(), config or LabelingConfig())


@pytest.fixture
def spec_s():
    return load("spec_s.aut")


@pytest.fixture
def impl_r():
    return load("impl_r.aut")


@pytest.fixture
def impl_q():
    return load("impl_q.aut")


# -- independent trace walking (no confkit.automata involved) -------------


def tau_closure(ts, states):
    seen = set(states)
    work = list(states)
    while work:
        for src, lab, dst in ts.outgoing(work.pop()):
            if lab in ts.internal and dst not in seen:
                seen.add(dst)
                work.append(dst)
    return frozenset(seen)


def walk_word(ts, word):
    """State sets reached while observing ``word``; None if it is no trace."""
    current = tau_closure(ts, {ts.initial})
    sets = [current]
    for sym in word:
        moved = {dst for s in current for _, lab, dst in ts.outgoing(s, sym)}
        current = tau_closure(ts, moved)
        if not current:
            return None
        sets.append(current)
    return sets


def is_trace(ts, word):
    return walk_word(ts, word) is not None


def outputs_enabled(ts, states):
    return frozenset(
        u for u in ts.outputs if any(ts.outgoing(s, u) for s in states)
    )


def all_words(alphabet, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


def fsa_language(fsa, max_len):
    """Brute-force language up to ``max_len`` via an independent NFA walk."""
    from confkit import EPSILON

    def closure(states):
        seen = set(states)
        work = list(states)
        while work:
            s = work.pop()
            for _, sym, dst in fsa.edges_from(s, EPSILON):
                if dst not in seen:
                    seen.add(dst)
                    work.append(dst)
        return frozenset(seen)

    accepted = set()
    for word in all_words(fsa.alphabet, max_len):
        current = closure({fsa.initial})
        for sym in word:
            current = closure(
                {t[2] for s in current for t in fsa.edges_from(s, sym)}
            )
            if not current:
                break
        if current & fsa.finals:
            accepted.add(word)
    return accepted


def same_system(a, b):
    return (
        a.kind == b.kind
        and a.initial == b.initial
        and set(a.states) == set(b.states)
        and a.inputs == b.inputs
        and a.outputs == b.outputs
        and a.transitions == b.transitions
    )


# -- seeded random models and regexes --------------------------------------


def random_iolts(rng, max_states=6, inputs=("a", "b"), outputs=("x",), edge_prob=0.55):
    """A deterministic IOLTS with 2..max_states states over a tiny alphabet."""
    n = rng.randint(2, max_states)
    states = tuple(f"p{i}" for i in range(n))
    transitions = []
    for s in states:
        for lab in tuple(inputs) + tuple(outputs):
            if rng.random() < edge_prob:
                transitions.append((s, lab, rng.choice(states)))
    return TransitionSystem(
        kind="iolts",
        states=states,
        initial=states[0],
        inputs=frozenset(inputs),
        outputs=frozenset(outputs),
        internal=frozenset(),
        transitions=transitions,
    )


def corpus_pairs(count=200, seed=CORPUS_SEED):
    rng = random.Random(seed)
    return [(random_iolts(rng), random_iolts(rng)) for _ in range(count)]


def random_regex_ast(rng, alphabet, depth=3):
    from confkit import Alt, Concat, EmptyLanguage, Epsilon, Star, Symbol

    roll = rng.random()
    if depth <= 0 or roll < 0.35:
        if roll < 0.05:
            return Epsilon()
        if roll < 0.08:
            return EmptyLanguage()
        return Symbol(rng.choice(list(alphabet)))
    if roll < 0.6:
        return Concat(
            random_regex_ast(rng, alphabet, depth - 1),
            random_regex_ast(rng, alphabet, depth - 1),
        )
    if roll < 0.85:
        return Alt(
            random_regex_ast(rng, alphabet, depth - 1),
            random_regex_ast(rng, alphabet, depth - 1),
        )
    return Star(random_regex_ast(rng, alphabet, depth - 1))
