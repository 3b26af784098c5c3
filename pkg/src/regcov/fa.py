"""Finite automata over small ordered alphabets.

All automata are epsilon-free; regex compilation uses the position
(Glushkov) construction, so no epsilon elimination pass is ever needed.
Values are immutable after construction and safe to share.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import Caps, DEFAULT_CAPS, DeterminizationCapError, InputError, MonoidCapError
from . import rx
from .rx import Regex


@dataclass(frozen=True)
class Alphabet:
    """Ordered alphabet of distinct single-character symbols (size 1..16)."""

    symbols: str

    def __post_init__(self):
        if not (1 <= len(self.symbols) <= 16):
            raise InputError(f"alphabet size must be 1..16, got {len(self.symbols)}")
        if len(set(self.symbols)) != len(self.symbols):
            raise InputError(f"alphabet symbols must be distinct: {self.symbols!r}")
        if any(len(s) != 1 for s in self.symbols):
            raise InputError("alphabet symbols must be single characters")
        object.__setattr__(self, "symbols", "".join(sorted(self.symbols)))

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __contains__(self, sym: str) -> bool:
        return sym in self.symbols

    def index(self, sym: str) -> int:
        i = self.symbols.find(sym)
        if i < 0:
            raise InputError(f"symbol {sym!r} not in alphabet {self.symbols!r}")
        return i

    def mask_of(self, syms: Iterable[str]) -> int:
        m = 0
        for s in syms:
            m |= 1 << self.index(s)
        return m

    def from_mask(self, mask: int) -> str:
        return "".join(s for i, s in enumerate(self.symbols) if mask >> i & 1)

    def words_upto(self, maxlen: int) -> Iterator[str]:
        for n in range(maxlen + 1):
            for tup in itertools.product(self.symbols, repeat=n):
                yield "".join(tup)


@dataclass(frozen=True)
class Nfa:
    """Epsilon-free NFA.  States are 0..state_count-1."""

    alphabet: Alphabet
    state_count: int
    initials: frozenset
    finals: frozenset
    transitions: frozenset  # of (state, symbol, state)

    def __post_init__(self):
        object.__setattr__(self, "initials", frozenset(self.initials))
        object.__setattr__(self, "finals", frozenset(self.finals))
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        for q in itertools.chain(self.initials, self.finals):
            if not (0 <= q < self.state_count):
                raise InputError(f"state {q} out of range (count {self.state_count})")
        for (q, a, r) in self.transitions:
            if not (0 <= q < self.state_count and 0 <= r < self.state_count):
                raise InputError(f"transition ({q},{a!r},{r}) out of range")
            if a not in self.alphabet:
                raise InputError(f"transition symbol {a!r} not in alphabet")

    def step_map(self) -> dict:
        """dict (state, symbol) -> set of successor states."""
        out: dict = {}
        for (q, a, r) in self.transitions:
            out.setdefault((q, a), set()).add(r)
        return out

    def accepts(self, word: str) -> bool:
        step = self.step_map()
        current = set(self.initials)
        for a in word:
            if a not in self.alphabet:
                raise InputError(f"word symbol {a!r} not in alphabet")
            current = set().union(*(step.get((q, a), ()) for q in current)) if current else set()
            if not current:
                break
        return bool(current & self.finals)

    def words_upto(self, maxlen: int):
        """Accepted words of length <= maxlen (test/oracle helper)."""
        return {w for w in self.alphabet.words_upto(maxlen) if self.accepts(w)}


# -- constructions from regexes ------------------------------------------------

def regex_to_nfa(node: Regex, alphabet: Alphabet) -> Nfa:
    """Position-automaton compilation; the result has no epsilon moves."""

    positions: list = []  # position index -> symbol

    def walk(n: Regex):
        """returns (nullable, first, last, follow-pairs)"""
        if isinstance(n, rx.Empty):
            return False, frozenset(), frozenset(), []
        if isinstance(n, rx.Epsilon):
            return True, frozenset(), frozenset(), []
        if isinstance(n, rx.Letter):
            if n.symbol not in alphabet:
                raise InputError(f"symbol {n.symbol!r} not in alphabet {alphabet.symbols!r}")
            p = len(positions)
            positions.append(n.symbol)
            return False, frozenset([p]), frozenset([p]), []
        if isinstance(n, rx.Union):
            n1, f1, l1, fo1 = walk(n.left)
            n2, f2, l2, fo2 = walk(n.right)
            return n1 or n2, f1 | f2, l1 | l2, fo1 + fo2
        if isinstance(n, rx.Concat):
            n1, f1, l1, fo1 = walk(n.left)
            n2, f2, l2, fo2 = walk(n.right)
            follow = fo1 + fo2 + [(p, q) for p in l1 for q in f2]
            first = f1 | f2 if n1 else f1
            last = l1 | l2 if n2 else l2
            return n1 and n2, first, last, follow
        if isinstance(n, (rx.Star, rx.Plus)):
            n1, f1, l1, fo1 = walk(n.inner)
            follow = fo1 + [(p, q) for p in l1 for q in f1]
            nullable = True if isinstance(n, rx.Star) else n1
            return nullable, f1, l1, follow
        raise TypeError(f"not a regex node: {n!r}")

    nullable, first, last, follow = walk(node)
    # state 0 is the start; positions shift by one
    transitions = {(0, positions[p], p + 1) for p in first}
    transitions |= {(p + 1, positions[q], q + 1) for (p, q) in follow}
    finals = {p + 1 for p in last} | ({0} if nullable else set())
    return Nfa(alphabet, len(positions) + 1, frozenset([0]), frozenset(finals), frozenset(transitions))


def empty_language(alphabet: Alphabet) -> Nfa:
    return Nfa(alphabet, 1, frozenset([0]), frozenset(), frozenset())


def epsilon_language(alphabet: Alphabet) -> Nfa:
    return Nfa(alphabet, 1, frozenset([0]), frozenset([0]), frozenset())


def universal_language(alphabet: Alphabet) -> Nfa:
    trans = {(0, a, 0) for a in alphabet}
    return Nfa(alphabet, 1, frozenset([0]), frozenset([0]), frozenset(trans))


# -- boolean combinations -------------------------------------------------------

def _check_same_alphabet(lhs: Nfa, rhs: Nfa):
    if lhs.alphabet != rhs.alphabet:
        raise InputError("alphabet mismatch between automata")


def nfa_union(lhs: Nfa, rhs: Nfa) -> Nfa:
    _check_same_alphabet(lhs, rhs)
    off = lhs.state_count
    trans = set(lhs.transitions) | {(q + off, a, r + off) for (q, a, r) in rhs.transitions}
    return Nfa(
        lhs.alphabet,
        lhs.state_count + rhs.state_count,
        frozenset(lhs.initials) | frozenset(q + off for q in rhs.initials),
        frozenset(lhs.finals) | frozenset(q + off for q in rhs.finals),
        frozenset(trans),
    )


def nfa_intersection(lhs: Nfa, rhs: Nfa) -> Nfa:
    _check_same_alphabet(lhs, rhs)
    pairs: dict = {}
    order: list = []

    def pid(p):
        if p not in pairs:
            pairs[p] = len(order)
            order.append(p)
        return pairs[p]

    lstep, rstep = lhs.step_map(), rhs.step_map()
    work = [(q, r) for q in lhs.initials for r in rhs.initials]
    initials = {pid(p) for p in work}
    trans = set()
    seen = set(work)
    while work:
        (q, r) = work.pop()
        for a in lhs.alphabet:
            for q2 in lstep.get((q, a), ()):
                for r2 in rstep.get((r, a), ()):
                    trans.add((pid((q, r)), a, pid((q2, r2))))
                    if (q2, r2) not in seen:
                        seen.add((q2, r2))
                        work.append((q2, r2))
    finals = {i for p, i in pairs.items() if p[0] in lhs.finals and p[1] in rhs.finals}
    if not order:
        return empty_language(lhs.alphabet)
    return Nfa(lhs.alphabet, len(order), frozenset(initials), frozenset(finals), frozenset(trans))


def nfa_concat(lhs: Nfa, rhs: Nfa) -> Nfa:
    _check_same_alphabet(lhs, rhs)
    off = lhs.state_count
    trans = set(lhs.transitions) | {(q + off, a, r + off) for (q, a, r) in rhs.transitions}
    # bridge: from lhs finals, mimic the moves available from rhs initials
    for (q, a, r) in rhs.transitions:
        if q in rhs.initials:
            trans |= {(f, a, r + off) for f in lhs.finals}
    rhs_accepts_eps = bool(rhs.initials & rhs.finals)
    lhs_accepts_eps = bool(lhs.initials & lhs.finals)
    finals = {q + off for q in rhs.finals} | (set(lhs.finals) if rhs_accepts_eps else set())
    initials = set(lhs.initials) | ({q + off for q in rhs.initials} if lhs_accepts_eps else set())
    return Nfa(lhs.alphabet, lhs.state_count + rhs.state_count,
               frozenset(initials), frozenset(finals), frozenset(trans))


def nfa_combine(op: str, lhs: Nfa, rhs: Nfa) -> Nfa:
    if op == "union":
        return nfa_union(lhs, rhs)
    if op == "intersection":
        return nfa_intersection(lhs, rhs)
    if op == "concatenation":
        return nfa_concat(lhs, rhs)
    raise InputError(f"unknown combine op {op!r}")


# -- determinization and friends ------------------------------------------------

@dataclass(frozen=True)
class Dfa:
    """Complete DFA; delta[q][i] indexes by alphabet position."""

    alphabet: Alphabet
    state_count: int
    initial: int
    finals: frozenset
    delta: tuple  # tuple of tuples, one row per state

    def accepts(self, word: str) -> bool:
        q = self.initial
        for a in word:
            q = self.delta[q][self.alphabet.index(a)]
        return q in self.finals

    def as_nfa(self) -> Nfa:
        trans = {(q, self.alphabet.symbols[i], row[i])
                 for q, row in enumerate(self.delta) for i in range(len(self.alphabet))}
        return Nfa(self.alphabet, self.state_count, frozenset([self.initial]),
                   frozenset(self.finals), frozenset(trans))


def determinize(n: Nfa, caps: Caps = DEFAULT_CAPS) -> Dfa:
    """Subset construction, completed (the empty subset is the sink)."""
    step = n.step_map()
    syms = n.alphabet.symbols
    init = frozenset(n.initials)
    ids = {init: 0}
    order = [init]
    rows = []
    i = 0
    while i < len(order):
        subset = order[i]
        row = []
        for a in syms:
            nxt = frozenset().union(*(step.get((q, a), ()) for q in subset)) if subset else frozenset()
            if nxt not in ids:
                if len(order) >= caps.max_det_states:
                    raise DeterminizationCapError("max_det_states", caps.max_det_states,
                                                  f"subset construction on {n.state_count}-state NFA")
                ids[nxt] = len(order)
                order.append(nxt)
            row.append(ids[nxt])
        rows.append(tuple(row))
        i += 1
    finals = frozenset(i for i, subset in enumerate(order) if subset & n.finals)
    return Dfa(n.alphabet, len(order), 0, finals, tuple(rows))


def minimize(n: Nfa, caps: Caps = DEFAULT_CAPS) -> Dfa:
    """Minimal complete DFA with canonical (BFS) state numbering."""
    dfa = determinize(n, caps)
    nsyms = len(dfa.alphabet)
    # Moore partition refinement
    block = [0 if q in dfa.finals else 1 for q in range(dfa.state_count)]
    nblocks = 2 if 0 < len(dfa.finals) < dfa.state_count else 1
    if nblocks == 1:
        block = [0] * dfa.state_count
    while True:
        sig = {}
        newblock = [0] * dfa.state_count
        for q in range(dfa.state_count):
            key = (block[q],) + tuple(block[dfa.delta[q][i]] for i in range(nsyms))
            if key not in sig:
                sig[key] = len(sig)
            newblock[q] = sig[key]
        if len(sig) == nblocks:
            break
        block = newblock
        nblocks = len(sig)
    # collapse and renumber canonically by BFS from the initial block
    rep_delta = {}
    for q in range(dfa.state_count):
        rep_delta[block[q]] = tuple(block[dfa.delta[q][i]] for i in range(nsyms))
    start = block[dfa.initial]
    number = {start: 0}
    order = [start]
    i = 0
    while i < len(order):
        b = order[i]
        for t in rep_delta[b]:
            if t not in number:
                number[t] = len(order)
                order.append(t)
        i += 1
    delta = tuple(tuple(number[t] for t in rep_delta[b]) for b in order)
    finals = frozenset(number[block[q]] for q in dfa.finals if block[q] in number)
    return Dfa(dfa.alphabet, len(order), 0, finals, delta)


def nfa_complement(n: Nfa, caps: Caps = DEFAULT_CAPS) -> Nfa:
    dfa = determinize(n, caps)
    flipped = Dfa(dfa.alphabet, dfa.state_count, dfa.initial,
                  frozenset(range(dfa.state_count)) - dfa.finals, dfa.delta)
    return flipped.as_nfa()


# -- decision procedures ---------------------------------------------------------

def is_empty(n: Nfa) -> bool:
    step = n.step_map()
    seen = set(n.initials)
    work = list(n.initials)
    while work:
        q = work.pop()
        if q in n.finals:
            return False
        for a in n.alphabet:
            for r in step.get((q, a), ()):
                if r not in seen:
                    seen.add(r)
                    work.append(r)
    return True


def includes(lhs: Nfa, rhs: Nfa, caps: Caps = DEFAULT_CAPS) -> bool:
    """L(lhs) ⊆ L(rhs)."""
    return is_empty(nfa_intersection(lhs, nfa_complement(rhs, caps)))


def equivalent(lhs: Nfa, rhs: Nfa, caps: Caps = DEFAULT_CAPS) -> bool:
    return includes(lhs, rhs, caps) and includes(rhs, lhs, caps)


def disjoint(lhs: Nfa, rhs: Nfa) -> bool:
    return is_empty(nfa_intersection(lhs, rhs))


def nfa_decide(query: str, n: Nfa, arg=None, caps: Caps = DEFAULT_CAPS) -> bool:
    """Dispatcher form of the decision procedures."""
    if query == "emptiness":
        return is_empty(n)
    if query == "membership":
        return n.accepts(arg)
    if query == "inclusion":
        return includes(n, arg, caps)
    if query == "equivalence":
        return equivalent(n, arg, caps)
    raise InputError(f"unknown query {query!r}")


# -- transition monoid -----------------------------------------------------------

@dataclass(frozen=True)
class MonoidMorphism:
    """Finite monoid with a word morphism given by letter images.

    `mul[i][j]` is the product of elements i and j; `image(w)` multiplies the
    letter images left to right.
    """

    size: int
    identity: int
    mul: tuple  # tuple of tuples
    letter_image: dict

    def __post_init__(self):
        object.__setattr__(self, "mul", tuple(tuple(row) for row in self.mul))
        object.__setattr__(self, "letter_image", dict(self.letter_image))

    def image(self, word: str) -> int:
        m = self.identity
        for a in word:
            m = self.mul[m][self.letter_image[a]]
        return m

    def product(self, x: int, y: int) -> int:
        return self.mul[x][y]

    def idempotents(self):
        return [e for e in range(self.size) if self.mul[e][e] == e]


def monoid_validate(m: MonoidMorphism) -> list:
    """Exhaustive associativity/identity check; violations returned as data."""
    out = []
    for x in range(m.size):
        if m.mul[m.identity][x] != x or m.mul[x][m.identity] != x:
            out.append(f"identity law fails at element {x}")
    for x in range(m.size):
        for y in range(m.size):
            for z in range(m.size):
                if m.mul[m.mul[x][y]][z] != m.mul[x][m.mul[y][z]]:
                    out.append(f"associativity fails at ({x},{y},{z})")
    for a, img in m.letter_image.items():
        if not (0 <= img < m.size):
            out.append(f"letter image {a!r} -> {img} out of range")
    return out


def transition_monoid(n: Nfa, caps: Caps = DEFAULT_CAPS):
    """Transition monoid of the minimal complete DFA of L(n).

    Returns (morphism, accepting) with L(n) = image⁻¹(accepting).
    """
    dfa = minimize(n, caps)
    m = dfa.state_count
    ident = tuple(range(m))
    letter_tf = {a: tuple(dfa.delta[q][i] for q in range(m))
                 for i, a in enumerate(dfa.alphabet.symbols)}

    ids = {ident: 0}
    order = [ident]
    i = 0
    while i < len(order):
        t = order[i]
        for a in dfa.alphabet.symbols:
            ta = letter_tf[a]
            nt = tuple(ta[q] for q in t)  # apply t, then a
            if nt not in ids:
                if len(order) >= caps.max_monoid:
                    raise MonoidCapError("max_monoid", caps.max_monoid,
                                         f"transition monoid of {m}-state minimal DFA")
                ids[nt] = len(order)
                order.append(nt)
        i += 1
    size = len(order)
    mul = [[0] * size for _ in range(size)]
    for i, t in enumerate(order):
        for j, u in enumerate(order):
            tu = tuple(u[q] for q in t)  # apply t, then u
            mul[i][j] = ids[tu]
    letter_image = {a: ids[letter_tf[a]] for a in dfa.alphabet.symbols}
    morphism = MonoidMorphism(size, 0, tuple(tuple(r) for r in mul), letter_image)
    accepting = frozenset(i for i, t in enumerate(order) if t[dfa.initial] in dfa.finals)
    return morphism, accepting


# -- special languages ------------------------------------------------------------

def upward_closure(n: Nfa) -> Nfa:
    """Closure under scattered superwords: self-loop on every symbol
    everywhere."""
    trans = set(n.transitions)
    for q in range(n.state_count):
        for a in n.alphabet:
            trans.add((q, a, q))
    return Nfa(n.alphabet, n.state_count, n.initials, n.finals, frozenset(trans))


def alphabet_star(alphabet: Alphabet, subset: Iterable[str]) -> Nfa:
    """B* for B a sub-alphabet."""
    syms = sorted(set(subset))
    for s in syms:
        if s not in alphabet:
            raise InputError(f"symbol {s!r} not in alphabet")
    trans = {(0, a, 0) for a in syms}
    return Nfa(alphabet, 1, frozenset([0]), frozenset([0]), frozenset(trans))


def alphabet_exact(alphabet: Alphabet, subset: Iterable[str]) -> Nfa:
    """Words whose set of letters is exactly B (the atoms of the
    alphabet-testable Boolean algebra)."""
    syms = sorted(set(subset))
    for s in syms:
        if s not in alphabet:
            raise InputError(f"symbol {s!r} not in alphabet")
    k = len(syms)
    pos = {a: i for i, a in enumerate(syms)}
    # states are subsets of B already seen
    trans = set()
    for seen in range(1 << k):
        for a in syms:
            trans.add((seen, a, seen | (1 << pos[a])))
    full = (1 << k) - 1
    return Nfa(alphabet, 1 << k, frozenset([0]), frozenset([full]), frozenset(trans))


def alphabet_languages(alphabet: Alphabet, subset: Iterable[str]):
    """(B*, words-with-alphabet-exactly-B) for a sub-alphabet B."""
    subset = sorted(set(subset))
    return alphabet_star(alphabet, subset), alphabet_exact(alphabet, subset)


def piece_closure_regex(alphabet: Alphabet, word: str) -> Regex:
    """Regex for A*a1A*...A*anA*, the superwords of `word`."""
    allstar = rx.star(rx.union_all(rx.Letter(a) for a in alphabet))
    out = allstar
    for a in word:
        out = rx.concat(out, rx.concat(rx.Letter(a), allstar))
    return out


def exact_alphabet_regex(alphabet: Alphabet, subset: Iterable[str]) -> Regex:
    """Regex for the words whose alphabet is exactly B.

    Built by splitting on the letter whose first occurrence comes last;
    exponential in |B|, fine at desk scale.
    """
    syms = tuple(sorted(set(subset)))

    def build(b: tuple) -> Regex:
        if not b:
            return rx.EPSILON
        bstar = rx.star(rx.union_all(rx.Letter(a) for a in b))
        parts = []
        for a in b:
            rest = tuple(x for x in b if x != a)
            parts.append(rx.concat(rx.concat(build(rest), rx.Letter(a)), bstar))
        return rx.union_all(parts)

    return build(syms)


# -- NFA <-> JSON and NFA -> regex -------------------------------------------------

def nfa_to_json(n: Nfa) -> dict:
    return {
        "alphabet": n.alphabet.symbols,
        "states": n.state_count,
        "initials": sorted(n.initials),
        "finals": sorted(n.finals),
        "transitions": sorted([q, a, r] for (q, a, r) in n.transitions),
    }


def nfa_from_json(doc: dict) -> Nfa:
    try:
        alphabet = Alphabet(doc["alphabet"])
        return Nfa(alphabet, int(doc["states"]),
                   frozenset(int(q) for q in doc["initials"]),
                   frozenset(int(q) for q in doc["finals"]),
                   frozenset((int(q), a, int(r)) for (q, a, r) in doc["transitions"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad NFA JSON: {exc}") from exc


def nfa_to_regex(n: Nfa) -> Regex:
    """State elimination.  The result can be large; it is meant for
    serializing synthesized covers, not for human consumption."""
    # generalized automaton with fresh initial/final, edges labeled by regexes
    start, end = n.state_count, n.state_count + 1
    edges: dict = {}

    def add(q, r, e: Regex):
        if isinstance(e, rx.Empty):
            return
        cur = edges.get((q, r), rx.EMPTY)
        edges[(q, r)] = rx.union(cur, e)

    for (q, a, r) in n.transitions:
        add(q, r, rx.Letter(a))
    for q in n.initials:
        add(start, q, rx.EPSILON)
    for q in n.finals:
        add(q, end, rx.EPSILON)

    states = list(range(n.state_count))
    # eliminate low-degree states first to keep expressions smaller
    while states:
        degree = {}
        for s in states:
            ins = sum(1 for (q, r) in edges if r == s and q != s)
            outs = sum(1 for (q, r) in edges if q == s and r != s)
            degree[s] = ins * outs
        s = min(states, key=lambda x: (degree[x], x))
        states.remove(s)
        loop = edges.pop((s, s), rx.EMPTY)
        loopstar = rx.star(loop) if not isinstance(loop, rx.Empty) else rx.EPSILON
        incoming = [(q, e) for (q, r), e in edges.items() if r == s]
        outgoing = [(r, e) for (q, r), e in edges.items() if q == s]
        for (q, _) in incoming:
            edges.pop((q, s))
        for (r, _) in outgoing:
            edges.pop((s, r))
        for (q, ein) in incoming:
            for (r, eout) in outgoing:
                add(q, r, rx.concat(rx.concat(ein, loopstar), eout))
    return edges.get((start, end), rx.EMPTY)
