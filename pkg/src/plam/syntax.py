"""Term syntax for the probabilistic λ-calculus: parsing, printing,
substitution, and head-form analysis.

Bound variables are nameless binder indices; free variables carry global
names. Structural equality on this representation is exactly
alpha-equivalence, and substitution is capture-free by construction.
"""

from __future__ import annotations

import string
from typing import Iterator, List, Optional, Tuple, Union


class Term:
    """Base class; subclasses are Var, Free, Lam, App, Choice."""

    __slots__ = ("_hash",)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"<{pretty(self)}>"


class Var(Term):
    """A bound variable, counting enclosing binders inside-out from 0."""

    __slots__ = ("index",)

    def __init__(self, index: int):
        if index < 0:
            raise ValueError("binder index must be non-negative")
        self.index = index
        self._hash = hash((1, index))

    def __eq__(self, other):
        return type(other) is Var and other.index == self.index

    __hash__ = Term.__hash__


class Free(Term):
    """A free variable identified by a global name."""

    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self._hash = hash((2, name))

    def __eq__(self, other):
        return type(other) is Free and other.name == self.name

    __hash__ = Term.__hash__


class Lam(Term):
    __slots__ = ("body",)

    def __init__(self, body: Term):
        self.body = body
        self._hash = hash((3, body._hash))

    def __eq__(self, other):
        return type(other) is Lam and self._hash == other._hash and other.body == self.body

    __hash__ = Term.__hash__


class App(Term):
    __slots__ = ("fun", "arg")

    def __init__(self, fun: Term, arg: Term):
        self.fun = fun
        self.arg = arg
        self._hash = hash((4, fun._hash, arg._hash))

    def __eq__(self, other):
        return (
            type(other) is App
            and self._hash == other._hash
            and other.fun == self.fun
            and other.arg == self.arg
        )

    __hash__ = Term.__hash__


class Choice(Term):
    __slots__ = ("left", "right")

    def __init__(self, left: Term, right: Term):
        self.left = left
        self.right = right
        self._hash = hash((5, left._hash, right._hash))

    def __eq__(self, other):
        return (
            type(other) is Choice
            and self._hash == other._hash
            and other.left == self.left
            and other.right == self.right
        )

    __hash__ = Term.__hash__


def alpha_eq(a: Term, b: Term) -> bool:
    """Equality modulo bound-variable renaming (structural on nameless terms)."""
    return a == b


def size(t: Term) -> int:
    if isinstance(t, (Var, Free)):
        return 1
    if isinstance(t, Lam):
        return 1 + size(t.body)
    if isinstance(t, App):
        return 1 + size(t.fun) + size(t.arg)
    return 1 + size(t.left) + size(t.right)


def shift(t: Term, by: int, cutoff: int = 0) -> Term:
    """Add `by` to every binder index at or above `cutoff`."""
    if isinstance(t, Var):
        return Var(t.index + by) if t.index >= cutoff else t
    if isinstance(t, Free):
        return t
    if isinstance(t, Lam):
        return Lam(shift(t.body, by, cutoff + 1))
    if isinstance(t, App):
        return App(shift(t.fun, by, cutoff), shift(t.arg, by, cutoff))
    return Choice(shift(t.left, by, cutoff), shift(t.right, by, cutoff))


def _subst_index(t: Term, j: int, repl: Term) -> Term:
    if isinstance(t, Var):
        if t.index == j:
            return shift(repl, j)
        return Var(t.index - 1) if t.index > j else t
    if isinstance(t, Free):
        return t
    if isinstance(t, Lam):
        return Lam(_subst_index(t.body, j + 1, repl))
    if isinstance(t, App):
        return App(_subst_index(t.fun, j, repl), _subst_index(t.arg, j, repl))
    return Choice(_subst_index(t.left, j, repl), _subst_index(t.right, j, repl))


def substitute(body: Term, arg: Term) -> Term:
    """Capture-free substitution of a binder's body: (λ.body) arg ↦ body[arg]."""
    return _subst_index(body, 0, arg)


def subst_free(t: Term, name: str, repl: Term, depth: int = 0) -> Term:
    """Replace the free variable `name` by `repl`, shifting under binders."""
    if isinstance(t, Var):
        return t
    if isinstance(t, Free):
        return shift(repl, depth) if t.name == name else t
    if isinstance(t, Lam):
        return Lam(subst_free(t.body, name, repl, depth + 1))
    if isinstance(t, App):
        return App(subst_free(t.fun, name, repl, depth), subst_free(t.arg, name, repl, depth))
    return Choice(subst_free(t.left, name, repl, depth), subst_free(t.right, name, repl, depth))


def bind_name(t: Term, name: str, depth: int = 0) -> Term:
    """Turn the free variable `name` into a reference to a new outermost binder."""
    if isinstance(t, Var):
        return t
    if isinstance(t, Free):
        return Var(depth) if t.name == name else t
    if isinstance(t, Lam):
        return Lam(bind_name(t.body, name, depth + 1))
    if isinstance(t, App):
        return App(bind_name(t.fun, name, depth), bind_name(t.arg, name, depth))
    return Choice(bind_name(t.left, name, depth), bind_name(t.right, name, depth))


def free_vars(t: Term) -> frozenset:
    out = set()

    def walk(t: Term):
        if isinstance(t, Free):
            out.add(t.name)
        elif isinstance(t, Lam):
            walk(t.body)
        elif isinstance(t, App):
            walk(t.fun)
            walk(t.arg)
        elif isinstance(t, Choice):
            walk(t.left)
            walk(t.right)

    walk(t)
    return frozenset(out)


def is_closed(t: Term) -> bool:
    return not free_vars(t)


def lam_close(t: Term) -> Term:
    """λ-close an open term, binding free names in lexicographic order
    (first name becomes the outermost binder)."""
    for name in sorted(free_vars(t), reverse=True):
        t = Lam(bind_name(t, name))
    return t


# ---------------------------------------------------------------------------
# Head-form analysis


class HnfView:
    """Decomposition λx₁…xₙ.y M₁…Mₘ of a head normal form.

    `head` is the raw Var/Free node as seen under the n stripped binders.
    """

    __slots__ = ("binders", "head", "args")

    def __init__(self, binders: int, head: Term, args: Tuple[Term, ...]):
        self.binders = binders
        self.head = head
        self.args = args

    @property
    def neutral(self) -> bool:
        return self.binders == 0

    def assemble(self) -> Term:
        t = self.head
        for a in self.args:
            t = App(t, a)
        for _ in range(self.binders):
            t = Lam(t)
        return t


class HeadContext:
    """The one-hole context λx₁…xₙ.[·] L₁…Lₘ."""

    __slots__ = ("binders", "spine_args")

    def __init__(self, binders: int, spine_args: Tuple[Term, ...]):
        self.binders = binders
        self.spine_args = spine_args

    def plug(self, t: Term) -> Term:
        for a in self.spine_args:
            t = App(t, a)
        for _ in range(self.binders):
            t = Lam(t)
        return t


class BetaRedex:
    __slots__ = ("fun", "arg")

    def __init__(self, fun: Lam, arg: Term):
        self.fun = fun
        self.arg = arg

    def contract(self) -> Term:
        return substitute(self.fun.body, self.arg)


class ChoiceRedex:
    __slots__ = ("left", "right")

    def __init__(self, left: Term, right: Term):
        self.left = left
        self.right = right


Redex = Union[BetaRedex, ChoiceRedex]


def classify(t: Term) -> Union[HnfView, Tuple[HeadContext, Redex]]:
    """Total, exclusive decomposition of a term.

    Returns an HnfView when the term is a head normal form, otherwise the
    unique (HeadContext, redex) pair with the redex in head position.
    """
    binders = 0
    body = t
    while isinstance(body, Lam):
        binders += 1
        body = body.body
    rev_args: List[Term] = []
    head = body
    while isinstance(head, App):
        rev_args.append(head.arg)
        head = head.fun
    args = tuple(reversed(rev_args))
    if isinstance(head, (Var, Free)):
        return HnfView(binders, head, args)
    if isinstance(head, Choice):
        return HeadContext(binders, args), ChoiceRedex(head.left, head.right)
    # head is a Lam, so args is non-empty (binder stripping was maximal)
    return HeadContext(binders, args[1:]), BetaRedex(head, args[0])


def is_hnf(t: Term) -> bool:
    return isinstance(classify(t), HnfView)


# ---------------------------------------------------------------------------
# Parsing

_LAMBDA_CHARS = ("\\", "λ")
_NAME_START = set(string.ascii_letters + "_")
_NAME_CHARS = set(string.ascii_letters + string.digits + "_'")


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if text.startswith("(+)", i):
            tokens.append(("oplus", "(+)", i))
            i += 3
        elif c == "⊕":
            tokens.append(("oplus", c, i))
            i += 1
        elif c in _LAMBDA_CHARS:
            tokens.append(("lambda", c, i))
            i += 1
        elif c == ".":
            tokens.append(("dot", c, i))
            i += 1
        elif c == "(":
            tokens.append(("lparen", c, i))
            i += 1
        elif c == ")":
            tokens.append(("rparen", c, i))
            i += 1
        elif c in _NAME_START:
            j = i + 1
            while j < n and text[j] in _NAME_CHARS:
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
        else:
            raise ParseError(f"unexpected character {c!r}", i)
    tokens.append(("eof", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, constants):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.constants = constants

    def peek(self) -> Tuple[str, str, int]:
        return self.tokens[self.pos]

    def next(self) -> Tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> Tuple[str, str, int]:
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1]!r}", tok[2])
        return tok

    def parse_term(self, env: List[str]) -> Term:
        left = self.parse_lam_or_app(env)
        if self.peek()[0] == "oplus":
            self.next()
            right = self.parse_term(env)
            return Choice(left, right)
        return left

    def parse_lam_or_app(self, env: List[str]) -> Term:
        if self.peek()[0] == "lambda":
            self.next()
            names = []
            while self.peek()[0] == "name":
                names.append(self.next()[1])
            if not names:
                tok = self.peek()
                raise ParseError("expected binder name after lambda", tok[2])
            self.expect("dot")
            body = self.parse_term(list(reversed(names)) + env)
            for _ in names:
                body = Lam(body)
            return body
        return self.parse_app(env)

    def parse_app(self, env: List[str]) -> Term:
        t = self.parse_atom(env)
        while self.peek()[0] in ("name", "lparen"):
            t = App(t, self.parse_atom(env))
        return t

    def parse_atom(self, env: List[str]) -> Term:
        kind, value, pos = self.next()
        if kind == "name":
            if value in env:
                return Var(env.index(value))
            if value in self.constants:
                return shift(self.constants[value], len(env))
            return Free(value)
        if kind == "lparen":
            t = self.parse_term(env)
            self.expect("rparen")
            return t
        raise ParseError(f"unexpected token {value!r}", pos)


def parse(text: str, constants=None) -> Term:
    """Parse surface syntax into a nameless Term.

    Choice binds loosest and associates right; application is left
    associative; λ-bodies extend maximally to the right. Unbound names are
    free variables unless they match a named constant.
    """
    if constants is None:
        constants = CONSTANTS
    parser = _Parser(text, constants)
    t = parser.parse_term([])
    parser.expect("eof")
    return t


# ---------------------------------------------------------------------------
# Printing

_NAME_POOL = ["x", "y", "z", "u", "v", "w", "s", "t", "p", "q", "r"]

_TOP, _CHOICE_L, _APP_F, _APP_A = range(4)


def _fresh_name(used) -> str:
    for name in _NAME_POOL:
        if name not in used:
            return name
    k = 1
    while True:
        for base in _NAME_POOL:
            cand = f"{base}{k}"
            if cand not in used:
                return cand
        k += 1


def pretty(t: Term) -> str:
    """Print with minimal parentheses; re-parsing yields an α-equal term."""
    taken = set(free_vars(t))

    def go(t: Term, env: List[str], pos: int) -> str:
        if isinstance(t, Var):
            if t.index < len(env):
                return env[t.index]
            return f"?{t.index - len(env)}"
        if isinstance(t, Free):
            return t.name
        if isinstance(t, Lam):
            names = []
            body = t
            while isinstance(body, Lam):
                name = _fresh_name(taken.union(env, names))
                names.append(name)
                body = body.body
            inner = go(body, list(reversed(names)) + env, _TOP)
            text = "\\" + " ".join(names) + "." + inner
            return f"({text})" if pos in (_CHOICE_L, _APP_F, _APP_A) else text
        if isinstance(t, App):
            text = go(t.fun, env, _APP_F) + " " + go(t.arg, env, _APP_A)
            return f"({text})" if pos == _APP_A else text
        text = go(t.left, env, _CHOICE_L) + " (+) " + go(t.right, env, _TOP)
        return f"({text})" if pos != _TOP else text

    return go(t, [], _TOP)


# ---------------------------------------------------------------------------
# Named constants

_BASE_CONSTANTS = {
    "I": r"\x.x",
    "T": r"\x y.x",
    "F": r"\x y.y",
    "Delta": r"\x.x x",
    "Theta": r"(\x y.y (x x y)) (\x y.y (x x y))",
}

CONSTANTS = {}
for _name, _src in _BASE_CONSTANTS.items():
    CONSTANTS[_name] = parse(_src, constants={})
CONSTANTS["Omega"] = App(CONSTANTS["Delta"], CONSTANTS["Delta"])
CONSTANTS["hid"] = Choice(CONSTANTS["Omega"], CONSTANTS["I"])

I = CONSTANTS["I"]
T = CONSTANTS["T"]
F = CONSTANTS["F"]
DELTA = CONSTANTS["Delta"]
OMEGA = CONSTANTS["Omega"]
THETA = CONSTANTS["Theta"]
HID = CONSTANTS["hid"]
