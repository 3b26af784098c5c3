"""Shared test utilities: seeded generators and brute-force oracles."""

from __future__ import annotations

import random

from regcov import Alphabet, Nfa, regex_parse, regex_to_nfa
from regcov import rx


def random_regex(rng: random.Random, symbols: str, depth: int):
    """Random regex AST of bounded height."""
    if depth <= 0:
        roll = rng.random()
        if roll < 0.8:
            return rx.Letter(rng.choice(symbols))
        if roll < 0.9:
            return rx.EPSILON
        return rx.Letter(rng.choice(symbols))
    op = rng.choice(["union", "concat", "star", "plus", "leaf"])
    if op == "leaf":
        return random_regex(rng, symbols, 0)
    if op == "star":
        return rx.Star(random_regex(rng, symbols, depth - 1))
    if op == "plus":
        return rx.Plus(random_regex(rng, symbols, depth - 1))
    left = random_regex(rng, symbols, depth - 1)
    right = random_regex(rng, symbols, depth - 1)
    return rx.Union(left, right) if op == "union" else rx.Concat(left, right)


def random_nfa(rng: random.Random, alphabet: Alphabet, max_states: int,
               trans_prob: float = 0.3) -> Nfa:
    """Random sparse NFA with at least one initial state."""
    n = rng.randint(1, max_states)
    trans = set()
    for q in range(n):
        for a in alphabet:
            for r in range(n):
                if rng.random() < trans_prob:
                    trans.add((q, a, r))
    initials = {rng.randrange(n)}
    finals = {q for q in range(n) if rng.random() < 0.5}
    if not finals:
        finals = {rng.randrange(n)}
    return Nfa(alphabet, n, frozenset(initials), frozenset(finals), frozenset(trans))


def denote_upto(node, symbols: str, maxlen: int) -> frozenset:
    """Language of a regex restricted to words of length <= maxlen, computed
    recursively (independent of the automaton pipeline)."""
    def go(n) -> frozenset:
        if isinstance(n, rx.Empty):
            return frozenset()
        if isinstance(n, rx.Epsilon):
            return frozenset([""])
        if isinstance(n, rx.Letter):
            return frozenset([n.symbol])
        if isinstance(n, rx.Union):
            return go(n.left) | go(n.right)
        if isinstance(n, rx.Concat):
            lhs, rhs = go(n.left), go(n.right)
            return frozenset(u + v for u in lhs for v in rhs if len(u + v) <= maxlen)
        if isinstance(n, (rx.Star, rx.Plus)):
            base = frozenset(w for w in go(n.inner) if len(w) <= maxlen)
            reach = set(base)  # concatenations of >= 1 inner words
            frontier = set(base)
            while frontier:
                new = set()
                for u in frontier:
                    for v in base:
                        w = u + v
                        if len(w) <= maxlen and w not in reach:
                            new.add(w)
                reach |= new
                frontier = new
            if isinstance(n, rx.Star):
                reach.add("")
            return frozenset(reach)
        raise TypeError(n)

    return frozenset(w for w in go(node) if len(w) <= maxlen)


def words_upto(symbols: str, maxlen: int):
    import itertools
    for k in range(maxlen + 1):
        for tup in itertools.product(symbols, repeat=k):
            yield "".join(tup)


def nfa_of(text: str, symbols: str) -> Nfa:
    return regex_to_nfa(regex_parse(text, symbols), Alphabet(symbols))
