"""Regular expressions over transition-system alphabets.

Patterns use ``|`` for alternation, juxtaposition for concatenation,
postfix ``*`` for iteration and parentheses for grouping.  Atoms are label
names, matched longest-first against the alphabet the pattern is parsed
for, so multi-character labels need no escaping; a label may also be
quoted (``'label'``), which is the only way to write one that overlaps an
operator character.  Whitespace between tokens is ignored.

Two independent evaluation routes are provided on purpose: compilation to
an automaton (:func:`regex_to_fsa`, Thompson construction) and direct
matching on the syntax tree (:func:`match_regex`, plus Brzozowski
derivatives).  They share no code, so one can be used to check the other.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .automata import EPSILON, Fsa, StateTag


class RegexError(ValueError):
    """A pattern is invalid for the given alphabet."""


class RegexSyntaxError(RegexError):
    """Malformed pattern text; ``position`` is the 1-based column."""

    def __init__(self, message, position):
        super().__init__(f"column {position}: {message}")
        self.position = position


# -- syntax trees ---------------------------------------------------------


@dataclass(frozen=True)
class EmptyLanguage:
    """Matches nothing at all."""


@dataclass(frozen=True)
class Epsilon:
    """Matches exactly the empty word."""


@dataclass(frozen=True)
class Symbol:
    name: str


@dataclass(frozen=True)
class Concat:
    left: object
    right: object


@dataclass(frozen=True)
class Alt:
    left: object
    right: object


@dataclass(frozen=True)
class Star:
    inner: object


def symbols_of(ast):
    """All label names mentioned by a pattern."""
    if isinstance(ast, Symbol):
        return frozenset({ast.name})
    if isinstance(ast, (Concat, Alt)):
        return symbols_of(ast.left) | symbols_of(ast.right)
    if isinstance(ast, Star):
        return symbols_of(ast.inner)
    return frozenset()


def full_language(alphabet):
    """``(l1|l2|...)*`` -- every word over ``alphabet``."""
    alphabet = list(alphabet)
    if not alphabet:
        return Epsilon()
    ast = Symbol(alphabet[0])
    for name in alphabet[1:]:
        ast = Alt(ast, Symbol(name))
    return Star(ast)


# -- parsing --------------------------------------------------------------


class _Tokens:
    def __init__(self, text, alphabet):
        self.items = []  # (position, kind, value)
        labels = sorted(alphabet, key=len, reverse=True)
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if ch == "'":
                end = text.find("'", i + 1)
                if end < 0:
                    raise RegexSyntaxError("unterminated quoted label", i + 1)
                name = text[i + 1 : end]
                if name not in alphabet:
                    raise RegexSyntaxError(f"unknown label {name!r}", i + 1)
                self.items.append((i + 1, "label", name))
                i = end + 1
                continue
            for name in labels:
                if text.startswith(name, i):
                    self.items.append((i + 1, "label", name))
                    i += len(name)
                    break
            else:
                if ch in "()|*":
                    self.items.append((i + 1, ch, ch))
                    i += 1
                else:
                    raise RegexSyntaxError(
                        f"{ch!r} starts no alphabet label and is not an operator", i + 1
                    )
        self.pos = 0
        self.end_col = len(text) + 1

    def peek(self):
        return self.items[self.pos] if self.pos < len(self.items) else None

    def take(self):
        item = self.peek()
        self.pos += 1
        return item


def parse_regex(text, alphabet):
    """Parse ``text`` into a syntax tree over ``alphabet``.

    An empty (or all-whitespace) pattern is rejected; callers that want a
    default for a blank field choose it themselves.
    """
    alphabet = frozenset(alphabet)
    toks = _Tokens(text, alphabet)
    if toks.peek() is None:
        raise RegexSyntaxError("empty pattern", 1)
    ast = _parse_alt(toks)
    trailing = toks.peek()
    if trailing is not None:
        raise RegexSyntaxError(f"unexpected {trailing[2]!r}", trailing[0])
    return ast


def _parse_alt(toks):
    ast = _parse_concat(toks)
    while True:
        item = toks.peek()
        if item is None or item[1] != "|":
            return ast
        toks.take()
        ast = Alt(ast, _parse_concat(toks))


def _parse_concat(toks):
    parts = [_parse_factor(toks)]
    while True:
        item = toks.peek()
        if item is None or item[1] in ("|", ")"):
            break
        parts.append(_parse_factor(toks))
    ast = parts[0]
    for part in parts[1:]:
        ast = Concat(ast, part)
    return ast


def _parse_factor(toks):
    item = toks.take()
    if item is None:
        raise RegexSyntaxError("expected a term", toks.end_col)
    pos, kind, value = item
    if kind == "label":
        ast = Symbol(value)
    elif kind == "(":
        ast = _parse_alt(toks)
        closing = toks.take()
        if closing is None or closing[1] != ")":
            raise RegexSyntaxError("missing ')'", closing[0] if closing else toks.end_col)
    else:
        raise RegexSyntaxError(f"unexpected {value!r}", pos)
    while True:
        item = toks.peek()
        if item is None or item[1] != "*":
            return ast
        toks.take()
        ast = Star(ast)


# -- compilation to an automaton -----------------------------------------


def regex_to_fsa(ast, alphabet):
    """Thompson construction; the result's alphabet is all of ``alphabet``.

    Symbols mentioned by the pattern must belong to the alphabet.
    """
    alphabet = tuple(alphabet)
    stray = symbols_of(ast) - set(alphabet)
    if stray:
        raise RegexError(
            "pattern uses labels outside the alphabet: " + ", ".join(sorted(stray))
        )
    counter = [0]

    def fresh():
        name = f"t{counter[0]}"
        counter[0] += 1
        return name

    transitions = []

    def build(node):
        start, stop = fresh(), fresh()
        if isinstance(node, EmptyLanguage):
            pass  # no path from start to stop
        elif isinstance(node, Epsilon):
            transitions.append((start, EPSILON, stop))
        elif isinstance(node, Symbol):
            transitions.append((start, node.name, stop))
        elif isinstance(node, Concat):
            a0, a1 = build(node.left)
            b0, b1 = build(node.right)
            transitions.append((start, EPSILON, a0))
            transitions.append((a1, EPSILON, b0))
            transitions.append((b1, EPSILON, stop))
        elif isinstance(node, Alt):
            a0, a1 = build(node.left)
            b0, b1 = build(node.right)
            transitions.extend([(start, EPSILON, a0), (start, EPSILON, b0)])
            transitions.extend([(a1, EPSILON, stop), (b1, EPSILON, stop)])
        elif isinstance(node, Star):
            a0, a1 = build(node.inner)
            transitions.extend([(start, EPSILON, a0), (start, EPSILON, stop)])
            transitions.extend([(a1, EPSILON, a0), (a1, EPSILON, stop)])
        else:
            raise RegexError(f"not a regex node: {node!r}")
        return start, stop

    start, stop = build(ast)
    states = tuple(f"t{i}" for i in range(counter[0]))
    return Fsa(
        states=states,
        initial=start,
        alphabet=alphabet,
        transitions=transitions,
        finals=frozenset({stop}),
        tags={s: StateTag((s,)) for s in states},
    )


# -- direct evaluation on the tree ---------------------------------------


def match_regex(ast, word):
    """Recursive membership test; ``word`` is a tuple of label names.

    Concatenations and stars try every split point, memoised, which is
    plenty for oracle-sized inputs and keeps this route entirely free of
    automaton machinery.
    """
    word = tuple(word)

    @lru_cache(maxsize=None)
    def match(node, lo, hi):
        if isinstance(node, EmptyLanguage):
            return False
        if isinstance(node, Epsilon):
            return lo == hi
        if isinstance(node, Symbol):
            return hi - lo == 1 and word[lo] == node.name
        if isinstance(node, Alt):
            return match(node.left, lo, hi) or match(node.right, lo, hi)
        if isinstance(node, Concat):
            return any(
                match(node.left, lo, mid) and match(node.right, mid, hi)
                for mid in range(lo, hi + 1)
            )
        if isinstance(node, Star):
            if lo == hi:
                return True
            return any(
                match(node.inner, lo, mid) and match(node, mid, hi)
                for mid in range(lo + 1, hi + 1)
            )
        raise RegexError(f"not a regex node: {node!r}")

    return match(ast, 0, len(word))


# -- Brzozowski derivatives ----------------------------------------------


def nullable(ast):
    """Does the language contain the empty word?"""
    if isinstance(ast, (Epsilon, Star)):
        return True
    if isinstance(ast, Symbol) or isinstance(ast, EmptyLanguage):
        return False
    if isinstance(ast, Concat):
        return nullable(ast.left) and nullable(ast.right)
    if isinstance(ast, Alt):
        return nullable(ast.left) or nullable(ast.right)
    raise RegexError(f"not a regex node: {ast!r}")


def _alt(*parts):
    flat = []

    def collect(node):
        if isinstance(node, Alt):
            collect(node.left)
            collect(node.right)
        elif not isinstance(node, EmptyLanguage):
            flat.append(node)

    for part in parts:
        collect(part)
    # Canonical order + de-duplication keep derivative chains finite.
    unique = sorted(set(flat), key=repr)
    if not unique:
        return EmptyLanguage()
    ast = unique[0]
    for node in unique[1:]:
        ast = Alt(ast, node)
    return ast


def _concat(left, right):
    if isinstance(left, EmptyLanguage) or isinstance(right, EmptyLanguage):
        return EmptyLanguage()
    if isinstance(left, Epsilon):
        return right
    if isinstance(right, Epsilon):
        return left
    return Concat(left, right)


def derivative(ast, symbol):
    """The language of suffixes: ``{w : symbol·w in L(ast)}``."""
    if isinstance(ast, (EmptyLanguage, Epsilon)):
        return EmptyLanguage()
    if isinstance(ast, Symbol):
        return Epsilon() if ast.name == symbol else EmptyLanguage()
    if isinstance(ast, Alt):
        return _alt(derivative(ast.left, symbol), derivative(ast.right, symbol))
    if isinstance(ast, Concat):
        first = _concat(derivative(ast.left, symbol), ast.right)
        if nullable(ast.left):
            return _alt(first, derivative(ast.right, symbol))
        return first
    if isinstance(ast, Star):
        return _concat(derivative(ast.inner, symbol), ast)
    raise RegexError(f"not a regex node: {ast!r}")
