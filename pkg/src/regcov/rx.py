"""Regular-expression ASTs, parser and printer.

Grammar::

    expr   := term ('|' term)*
    term   := factor+
    factor := atom ('*' | '+')?
    atom   := symbol | '(' expr ')' | '%eps' | '%empty'

Whitespace is ignored.  Symbols are single characters belonging to the
declared alphabet; ``%eps`` denotes the singleton of the empty word and
``%empty`` denotes the empty language.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError


@dataclass(frozen=True)
class Regex:
    pass


@dataclass(frozen=True)
class Empty(Regex):
    pass


@dataclass(frozen=True)
class Epsilon(Regex):
    pass


@dataclass(frozen=True)
class Letter(Regex):
    symbol: str


@dataclass(frozen=True)
class Union(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Concat(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Star(Regex):
    inner: Regex


@dataclass(frozen=True)
class Plus(Regex):
    inner: Regex


EMPTY = Empty()
EPSILON = Epsilon()


# -- smart constructors (used heavily by automaton-to-regex conversion) ------

def union(left: Regex, right: Regex) -> Regex:
    if isinstance(left, Empty):
        return right
    if isinstance(right, Empty):
        return left
    if left == right:
        return left
    return Union(left, right)


def concat(left: Regex, right: Regex) -> Regex:
    if isinstance(left, Empty) or isinstance(right, Empty):
        return EMPTY
    if isinstance(left, Epsilon):
        return right
    if isinstance(right, Epsilon):
        return left
    return Concat(left, right)


def star(inner: Regex) -> Regex:
    if isinstance(inner, (Empty, Epsilon)):
        return EPSILON
    if isinstance(inner, (Star, Plus)):
        return Star(inner.inner)
    return Star(inner)


def plus(inner: Regex) -> Regex:
    if isinstance(inner, Empty):
        return EMPTY
    if isinstance(inner, Epsilon):
        return EPSILON
    return Plus(inner)


def union_all(parts) -> Regex:
    out: Regex = EMPTY
    for p in parts:
        out = union(out, p)
    return out


def concat_all(parts) -> Regex:
    out: Regex = EPSILON
    for p in parts:
        out = concat(out, p)
    return out


def word_regex(word: str) -> Regex:
    """Regex denoting the singleton {word}."""
    return concat_all(Letter(a) for a in word)


# -- parsing ------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str, symbols: str):
        self.text = text
        self.symbols = set(symbols)
        self.pos = 0

    def error(self, msg: str):
        raise InputError(f"regex syntax error at position {self.pos}: {msg} (in {self.text!r})")

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        if self.pos >= len(self.text):
            return None
        return self.text[self.pos]

    def parse(self) -> Regex:
        node = self.expr()
        if self.peek() is not None:
            self.error(f"unexpected character {self.peek()!r}")
        return node

    def expr(self) -> Regex:
        node = self.term()
        while self.peek() == "|":
            self.pos += 1
            node = Union(node, self.term())
        return node

    def term(self) -> Regex:
        node = self.factor()
        while True:
            c = self.peek()
            if c is None or c in "|)":
                return node
            node = Concat(node, self.factor())

    def factor(self) -> Regex:
        node = self.atom()
        c = self.peek()
        if c == "*":
            self.pos += 1
            return Star(node)
        if c == "+":
            self.pos += 1
            return Plus(node)
        return node

    def atom(self) -> Regex:
        c = self.peek()
        if c is None:
            self.error("unexpected end of input")
        if c == "(":
            self.pos += 1
            node = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return node
        if c == "%":
            for kw, node in (("%eps", EPSILON), ("%empty", EMPTY)):
                if self.text.startswith(kw, self.pos):
                    self.pos += len(kw)
                    return node
            self.error("expected '%eps' or '%empty'")
        if c in "|)*+":
            self.error(f"unexpected operator {c!r}")
        if c not in self.symbols:
            self.error(f"symbol {c!r} is not in the alphabet")
        self.pos += 1
        return Letter(c)


def regex_parse(text: str, symbols: str) -> Regex:
    """Parse `text` over the given alphabet symbols."""
    return _Parser(text, symbols).parse()


# -- printing -----------------------------------------------------------------

def _prec(node: Regex) -> int:
    # atoms 3, postfix 2, concatenation 1, union 0
    if isinstance(node, Union):
        return 0
    if isinstance(node, Concat):
        return 1
    if isinstance(node, (Star, Plus)):
        return 2
    return 3


def regex_to_text(node: Regex) -> str:
    """Render a regex in the surface grammar (reparsing yields the same
    language; association of chained operators is not preserved)."""

    def render(n: Regex, ctx: int) -> str:
        if isinstance(n, Empty):
            s = "%empty"
        elif isinstance(n, Epsilon):
            s = "%eps"
        elif isinstance(n, Letter):
            s = n.symbol
        elif isinstance(n, Union):
            s = render(n.left, 0) + "|" + render(n.right, 0)
        elif isinstance(n, Concat):
            s = render(n.left, 1) + render(n.right, 1)
        elif isinstance(n, Star):
            s = render(n.inner, 3) + "*"
        elif isinstance(n, Plus):
            s = render(n.inner, 3) + "+"
        else:  # pragma: no cover
            raise TypeError(n)
        if _prec(n) < ctx:
            s = "(" + s + ")"
        return s

    return render(node, 0)
