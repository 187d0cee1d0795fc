"""Finite state automata over transition-system alphabets.

Automata here exist to answer language questions about transition systems:
the *induced* automaton of a model accepts exactly its observable traces
(internal actions become epsilon edges and every state is accepting), and
the usual closure constructions (determinize, complete, complement,
product) are built on top in a deterministic, name-stable way so that
composite states remain traceable to the model states they came from.

Symbol order matters throughout: an automaton's ``alphabet`` tuple is its
canonical order (inputs sorted, then outputs sorted, with ``delta`` last;
see :func:`canonical_alphabet`), and constructions visit symbols in that
order so results and enumerations are reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .models import DELTA, ModelError

#: Epsilon (the empty word) on automaton edges.  Not a symbol; label names
#: are non-empty, so the empty string cannot collide.
EPSILON = ""


class AutomatonError(ValueError):
    """An automaton is ill-formed or an operation's precondition failed."""


@dataclass(frozen=True)
class StateTag:
    """Provenance of an automaton state: the original state names it stands
    for (one name for atomic states, several after subset or product
    constructions)."""

    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))


@dataclass(frozen=True)
class Fsa:
    """A finite automaton with optional epsilon edges.

    ``transitions`` holds ``(source, symbol, target)`` with ``symbol``
    either an alphabet entry or :data:`EPSILON`.  ``tags`` maps composite
    state names to their provenance; untagged states are atomic.
    """

    states: tuple
    initial: str
    alphabet: tuple
    transitions: tuple
    finals: frozenset
    tags: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(
            self, "transitions", tuple(sorted(set(map(tuple, self.transitions))))
        )
        object.__setattr__(self, "finals", frozenset(self.finals))
        object.__setattr__(self, "tags", dict(self.tags))
        if len(set(self.states)) != len(self.states):
            raise AutomatonError("duplicate state names")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise AutomatonError("duplicate alphabet symbols")
        if EPSILON in self.alphabet:
            raise AutomatonError("epsilon is not an alphabet symbol")
        known = set(self.states)
        if self.initial not in known:
            raise AutomatonError(f"initial state {self.initial!r} not among states")
        if not self.finals <= known:
            raise AutomatonError("final states not among states")
        symbols = set(self.alphabet)
        for src, sym, dst in self.transitions:
            if src not in known or dst not in known:
                raise AutomatonError(f"transition ({src}, {sym}, {dst}) uses unknown state")
            if sym != EPSILON and sym not in symbols:
                raise AutomatonError(f"transition symbol {sym!r} not in alphabet")

    def tag(self, state):
        """Provenance for ``state`` (atomic states tag themselves)."""
        got = self.tags.get(state)
        return got if got is not None else StateTag((state,))

    def edges_from(self, state, symbol=None):
        return tuple(
            t
            for t in self.transitions
            if t[0] == state and (symbol is None or t[1] == symbol)
        )


def canonical_alphabet(inputs, outputs):
    """Symbol order used everywhere: inputs sorted, outputs sorted, delta last."""
    ins = sorted(inputs)
    outs = sorted(o for o in outputs if o != DELTA)
    tail = [DELTA] if DELTA in outputs else []
    return tuple(ins + outs + tail)


def induced_fsa(ts):
    """The automaton of observable traces of ``ts``.

    Internal actions become epsilon edges, every state is accepting, and
    the alphabet is the canonical order of the model's visible labels.  The
    accepted language is exactly the model's observable-trace set.
    """
    alphabet = canonical_alphabet(ts.inputs, ts.outputs)
    transitions = [
        (src, EPSILON if lab in ts.internal else lab, dst)
        for src, lab, dst in ts.transitions
    ]
    return Fsa(
        states=ts.states,
        initial=ts.initial,
        alphabet=alphabet,
        transitions=transitions,
        finals=frozenset(ts.states),
        tags={s: StateTag((s,)) for s in ts.states},
    )


def epsilon_closure(fsa, states):
    """All states reachable from ``states`` by epsilon edges alone."""
    seen = set(states)
    work = list(states)
    while work:
        s = work.pop()
        for _, sym, dst in fsa.edges_from(s, EPSILON):
            if dst not in seen:
                seen.add(dst)
                work.append(dst)
    return frozenset(seen)


def step(fsa, states, symbol):
    """Closure-move-closure: observable successor set for one symbol."""
    here = epsilon_closure(fsa, states)
    moved = {t[2] for s in here for t in fsa.edges_from(s, symbol)}
    return epsilon_closure(fsa, moved)


def accepts(fsa, word):
    """Membership of ``word`` (an iterable of symbols) in the language."""
    current = epsilon_closure(fsa, {fsa.initial})
    for sym in word:
        if sym == EPSILON:
            raise AutomatonError("words cannot contain epsilon")
        current = step(fsa, current, sym)
        if not current:
            return False
    return bool(current & fsa.finals)


def is_deterministic(fsa):
    """No epsilon edges and at most one successor per state and symbol."""
    seen = set()
    for src, sym, dst in fsa.transitions:
        if sym == EPSILON:
            return False
        if (src, sym) in seen:
            return False
        seen.add((src, sym))
    return True


def _subset_name(fsa, subset, used):
    order = {s: i for i, s in enumerate(fsa.states)}
    parts = tuple(sorted(subset, key=order.__getitem__))
    name = parts[0] if len(parts) == 1 else "".join(parts)
    while name in used:
        name += "'"
    return name, parts


def determinize(fsa):
    """Subset construction.

    Singleton subsets keep their original state name; larger subsets are
    named by concatenating their members in source-state order (with a
    ``'`` appended on the rare name clash) and tagged with their parts.
    States appear in breadth-first discovery order, symbols visited in
    alphabet order, so the result is reproducible.
    """
    start = epsilon_closure(fsa, {fsa.initial})
    if not start:  # unreachable: closure always contains the initial state
        raise AutomatonError("empty start closure")
    names = {}
    tags = {}
    used = set()
    order = []

    def intern(subset):
        if subset not in names:
            name, parts = _subset_name(fsa, subset, used)
            names[subset] = name
            used.add(name)
            tags[name] = StateTag(parts)
            order.append(subset)
        return names[subset]

    intern(start)
    transitions = []
    queue = deque([start])
    visited = {start}
    while queue:
        subset = queue.popleft()
        src = names[subset]
        for sym in fsa.alphabet:
            nxt = step(fsa, subset, sym)
            if not nxt:
                continue
            dst = intern(nxt)
            transitions.append((src, sym, dst))
            if nxt not in visited:
                visited.add(nxt)
                queue.append(nxt)
    finals = frozenset(
        names[subset] for subset in order if subset & fsa.finals
    )
    return Fsa(
        states=tuple(names[s] for s in order),
        initial=names[start],
        alphabet=fsa.alphabet,
        transitions=transitions,
        finals=finals,
        tags=tags,
    )


def _fresh_name(base, used):
    if base not in used:
        return base
    i = 0
    while f"{base}{i}" in used:
        i += 1
    return f"{base}{i}"


def complete(fsa, alphabet=None, dead_name="c"):
    """Total version of a deterministic automaton.

    Missing moves are directed to a single non-accepting dead state (named
    ``c``, or ``c0``, ``c1``, ... on a clash), added only when needed.
    ``alphabet`` may extend the automaton's own.  Non-deterministic input
    is an error.
    """
    if not is_deterministic(fsa):
        raise AutomatonError("complete() needs a deterministic automaton")
    target = tuple(alphabet) if alphabet is not None else fsa.alphabet
    if not set(target) >= set(fsa.alphabet):
        raise AutomatonError("completion alphabet must contain the automaton's")
    have = {(src, sym) for src, sym, _ in fsa.transitions}
    missing = [
        (s, sym) for s in fsa.states for sym in target if (s, sym) not in have
    ]
    if not missing:
        if target == fsa.alphabet:
            return fsa
        return Fsa(fsa.states, fsa.initial, target, fsa.transitions, fsa.finals, fsa.tags)
    dead = _fresh_name(dead_name, set(fsa.states))
    transitions = list(fsa.transitions)
    transitions += [(s, sym, dead) for s, sym in missing]
    transitions += [(dead, sym, dead) for sym in target]
    tags = dict(fsa.tags)
    tags[dead] = StateTag((dead,))
    return Fsa(
        states=fsa.states + (dead,),
        initial=fsa.initial,
        alphabet=target,
        transitions=transitions,
        finals=fsa.finals,
        tags=tags,
    )


def complement(fsa, alphabet=None):
    """Automaton for the complement language (over ``alphabet`` if given)."""
    det = fsa if is_deterministic(fsa) else determinize(fsa)
    total = complete(det, alphabet)
    return Fsa(
        states=total.states,
        initial=total.initial,
        alphabet=total.alphabet,
        transitions=total.transitions,
        finals=frozenset(total.states) - total.finals,
        tags=total.tags,
    )


def _merged_alphabet(a, b):
    extra = tuple(sym for sym in b.alphabet if sym not in a.alphabet)
    return a.alphabet + extra


def _product(a, b, keep_final):
    alphabet = _merged_alphabet(a, b)
    left = complete(a if is_deterministic(a) else determinize(a), alphabet)
    right = complete(b if is_deterministic(b) else determinize(b), alphabet)
    lmove = {(src, sym): dst for src, sym, dst in left.transitions}
    rmove = {(src, sym): dst for src, sym, dst in right.transitions}

    names = {}
    tags = {}
    used = set()
    order = []

    def intern(pair):
        if pair not in names:
            name = _fresh_name(pair[0] + pair[1], used)
            names[pair] = name
            used.add(name)
            tags[name] = StateTag(left.tag(pair[0]).parts + right.tag(pair[1]).parts)
            order.append(pair)
        return names[pair]

    start = (left.initial, right.initial)
    intern(start)
    queue = deque([start])
    transitions = []
    while queue:
        pair = queue.popleft()
        src = names[pair]
        for sym in alphabet:
            nxt = (lmove[pair[0], sym], rmove[pair[1], sym])
            known = nxt in names
            transitions.append((src, sym, intern(nxt)))
            if not known:
                queue.append(nxt)
    finals = frozenset(
        names[p] for p in order if keep_final(p[0] in left.finals, p[1] in right.finals)
    )
    return Fsa(
        states=tuple(names[p] for p in order),
        initial=names[start],
        alphabet=alphabet,
        transitions=transitions,
        finals=finals,
        tags=tags,
    )


def intersection(a, b):
    """Product automaton for ``L(a) ∩ L(b)``.

    Operands are determinized and completed first; the reachable product
    therefore has at most ``(|a|+1)·(|b|+1)`` states.  A product state is
    named by concatenating its components' names.
    """
    return _product(a, b, lambda fa, fb: fa and fb)


def union(a, b):
    """Product automaton for ``L(a) ∪ L(b)`` (same construction, or-finals)."""
    return _product(a, b, lambda fa, fb: fa or fb)


def minimize(fsa):
    """Smallest deterministic automaton for the language.

    Classic partition refinement on the completed automaton; the dead
    partition is trimmed away again afterwards, so the result may be
    partial.  Merged states are named like :func:`determinize` subsets and
    tagged with their members.  Deterministic input required.
    """
    if not is_deterministic(fsa):
        raise AutomatonError("minimize() needs a deterministic automaton")
    total = complete(fsa)
    move = {(src, sym): dst for src, sym, dst in total.transitions}

    block = {s: (s in total.finals) for s in total.states}
    while True:
        signature = {
            s: (block[s],) + tuple(block[move[s, sym]] for sym in total.alphabet)
            for s in total.states
        }
        renumber = {}
        for s in total.states:
            renumber.setdefault(signature[s], len(renumber))
        refined = {s: renumber[signature[s]] for s in total.states}
        if len(set(refined.values())) == len(set(block.values())):
            block = refined
            break
        block = refined

    members = {}
    for s in total.states:
        members.setdefault(block[s], []).append(s)
    # Keep only original (pre-completion) members for naming, if any remain.
    original = set(fsa.states)
    names = {}
    tags = {}
    used = set()
    for b, group in members.items():
        core = [s for s in group if s in original] or group
        name, parts = _subset_name(fsa if core[0] in original else total, frozenset(core), used)
        names[b] = name
        used.add(name)
        tags[name] = StateTag(parts)

    start = block[total.initial]
    order = []
    seen = {start}
    queue = deque([start])
    transitions = []
    while queue:
        b = queue.popleft()
        order.append(b)
        src = members[b][0]
        for sym in total.alphabet:
            nb = block[move[src, sym]]
            transitions.append((names[b], sym, names[nb]))
            if nb not in seen:
                seen.add(nb)
                queue.append(nb)
    finals = frozenset(
        names[b] for b in order if members[b][0] in total.finals
    )
    quotient = Fsa(
        states=tuple(names[b] for b in order),
        initial=names[start],
        alphabet=total.alphabet,
        transitions=transitions,
        finals=finals,
        tags={names[b]: tags[names[b]] for b in order},
    )
    return trim(quotient)


def reachable_states(fsa):
    seen = {fsa.initial}
    work = [fsa.initial]
    while work:
        s = work.pop()
        for _, _, dst in fsa.edges_from(s):
            if dst not in seen:
                seen.add(dst)
                work.append(dst)
    return frozenset(seen)


def is_empty_language(fsa):
    """True iff no accepting state is reachable."""
    return not (reachable_states(fsa) & fsa.finals)


def coreachable_states(fsa):
    """States from which some accepting state is reachable."""
    back = {}
    for src, _, dst in fsa.transitions:
        back.setdefault(dst, set()).add(src)
    seen = set(fsa.finals)
    work = list(fsa.finals)
    while work:
        s = work.pop()
        for p in back.get(s, ()):
            if p not in seen:
                seen.add(p)
                work.append(p)
    return frozenset(seen)


def trim(fsa):
    """Restrict to states that lie on some accepting path.

    The initial state is always kept (the result may then accept nothing).
    """
    useful = (reachable_states(fsa) & coreachable_states(fsa)) | {fsa.initial}
    return Fsa(
        states=tuple(s for s in fsa.states if s in useful),
        initial=fsa.initial,
        alphabet=fsa.alphabet,
        transitions=[t for t in fsa.transitions if t[0] in useful and t[2] in useful],
        finals=fsa.finals & useful,
        tags={s: t for s, t in fsa.tags.items() if s in useful},
    )


def renumber_states(fsa, prefix):
    """Rename states ``prefix0, prefix1, ...`` in state order; tags follow."""
    mapping = {s: f"{prefix}{i}" for i, s in enumerate(fsa.states)}
    return Fsa(
        states=tuple(mapping[s] for s in fsa.states),
        initial=mapping[fsa.initial],
        alphabet=fsa.alphabet,
        transitions=[(mapping[a], sym, mapping[b]) for a, sym, b in fsa.transitions],
        finals=frozenset(mapping[s] for s in fsa.finals),
        tags={mapping[s]: fsa.tag(s) for s in fsa.states},
    )


def enumerate_accepted(fsa, max_len):
    """Accepted words of length at most ``max_len``.

    Words are tuples of symbols, listed shortest first and within one
    length in alphabet order.  Enumeration runs on the determinized
    automaton with distance-to-acceptance pruning, so it stays linear in
    the amount of output rather than in ``|alphabet| ** max_len``.
    """
    if max_len < 0:
        raise AutomatonError("max_len must be non-negative")
    dfa = fsa if is_deterministic(fsa) else determinize(fsa)

    # Shortest distance from each state to an accepting state.
    back = {}
    for src, sym, dst in dfa.transitions:
        back.setdefault(dst, []).append(src)
    dist = {s: 0 for s in dfa.finals}
    frontier = deque(dfa.finals)
    while frontier:
        s = frontier.popleft()
        for p in back.get(s, ()):
            if p not in dist:
                dist[p] = dist[s] + 1
                frontier.append(p)

    move = {(src, sym): dst for src, sym, dst in dfa.transitions}
    rank = {sym: i for i, sym in enumerate(dfa.alphabet)}
    found = []

    def walk(state, word):
        if state in dfa.finals:
            found.append(word)
        if len(word) >= max_len:
            return
        budget = max_len - len(word)
        for sym in dfa.alphabet:
            nxt = move.get((state, sym))
            if nxt is None or dist.get(nxt, max_len + 1) > budget - 1:
                continue
            walk(nxt, word + (sym,))

    if dist.get(dfa.initial) is not None:
        walk(dfa.initial, ())
    found.sort(key=lambda w: (len(w), tuple(rank[s] for s in w)))
    return found


def fsa_to_dot(fsa, name="fsa"):
    """Graphviz rendering; accepting states are double circles."""

    def q(s):
        return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'

    lines = [f"digraph {q(name)} {{", "  rankdir=LR;", '  __init [shape=point, label=""];']
    for s in fsa.states:
        shape = "doublecircle" if s in fsa.finals else "circle"
        lines.append(f"  {q(s)} [shape={shape}];")
    lines.append(f"  __init -> {q(fsa.initial)};")
    for src, sym, dst in fsa.transitions:
        label = sym if sym != EPSILON else "ε"
        style = ", style=dashed" if sym == DELTA else ""
        lines.append(f"  {q(src)} -> {q(dst)} [label={q(label)}{style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
