"""Cover synthesis and verification.

Synthesizers emit covers whose imprint matches the saturated optimum:
alphabet atoms for AT, superword closures of short words for level-1
existential sentences, piece-equivalence partitions for their Boolean
closure, and the recursive left-factor construction for two-variable logic.
`verify_cover` re-checks everything with automata only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import Caps, DEFAULT_CAPS, PieceCapError, WordBudgetError
from . import rx
from .fa import (Alphabet, MonoidMorphism, Nfa, alphabet_exact, alphabet_star,
                 equivalent, exact_alphabet_regex, includes, is_empty,
                 nfa_concat, nfa_intersection, nfa_to_regex, nfa_union,
                 piece_closure_regex, regex_to_nfa, universal_language,
                 upward_closure)
from .imprints import ImprintSet
from .pieces import PieceAutomaton, is_piece, pt_partition
from .rating import RatingMap
from .rx import Regex
from .saturation import ClassId


@dataclass
class CoverPiece:
    """One cover member; the regex is materialized lazily from the automaton
    when it was not supplied by the synthesizer."""

    nfa: Nfa
    _regex: Optional[Regex] = None

    @property
    def regex(self) -> Regex:
        if self._regex is None:
            self._regex = nfa_to_regex(self.nfa)
        return self._regex


@dataclass
class Cover:
    class_id: ClassId
    target: Nfa
    pieces: list
    k: Optional[int] = None          # piece bound, for piecewise covers
    optimal: bool = True
    provenance: str = ""

    def union_nfa(self) -> Nfa:
        out = None
        for p in self.pieces:
            out = p.nfa if out is None else nfa_union(out, p.nfa)
        if out is None:
            from .fa import empty_language
            return empty_language(self.target.alphabet)
        return out

    def imprint(self, rho: RatingMap, caps: Caps = DEFAULT_CAPS) -> ImprintSet:
        out = ImprintSet(rho.semiring, cap=caps.max_elements, label="cover-imprint")
        out.insert(rho.semiring.zero)
        for p in self.pieces:
            out.insert(rho.eval_nfa(p.nfa, caps))
        return out

    def to_json(self) -> dict:
        doc = {
            "class": self.class_id.value,
            "pieces": [{"regex": rx.regex_to_text(p.regex)} for p in self.pieces],
            "optimal": self.optimal,
        }
        if self.k is not None:
            doc["k"] = self.k
        if self.provenance:
            doc["provenance"] = self.provenance
        return doc


def _prune_empty(pieces: list) -> list:
    return [p for p in pieces if not is_empty(p.nfa)]


def _dedup_pieces(pieces: list, caps: Caps = DEFAULT_CAPS) -> list:
    """Drop pieces denoting a language already present (canonical minimal
    DFAs as keys); neither coverage nor the imprint changes."""
    from .fa import minimize

    seen = set()
    out = []
    for p in pieces:
        key = minimize(p.nfa, caps)
        if key not in seen:
            seen.add(key)
            out.append(p)
    return out


# -- alphabet-testable covers ---------------------------------------------------------

def at_cover(alphabet: Alphabet, scope: Optional[Nfa] = None,
             caps: Caps = DEFAULT_CAPS) -> Cover:
    """Atoms of the alphabet-testable algebra; language scope keeps the atoms
    meeting the language."""
    pieces = []
    for mask in range(1 << len(alphabet)):
        syms = alphabet.from_mask(mask)
        atom = alphabet_exact(alphabet, syms)
        if scope is not None and is_empty(nfa_intersection(atom, scope)):
            continue
        pieces.append(CoverPiece(atom, exact_alphabet_regex(alphabet, syms)))
    target = scope if scope is not None else universal_language(alphabet)
    return Cover(ClassId.AT, target, _prune_empty(pieces),
                 provenance="alphabet atoms")


# -- superword-closure covers ---------------------------------------------------------

def sigma1_cover(alpha: MonoidMorphism, targets, alphabet: Alphabet,
                 caps: Caps = DEFAULT_CAPS) -> Cover:
    """Cover of image⁻¹(targets) by superword closures of short words.

    Every word is pumpable down to length at most |M| with the same image,
    so the closures of those short words cover the fiber.  Pieces subsumed
    by a larger closure are pruned (the closure of w contains the closure of
    v exactly when v is a piece of w).
    """
    if isinstance(targets, int):
        targets = [targets]
    targets = frozenset(targets)
    budget = caps.max_word_budget
    count = 0
    words_by_elem: dict = {t: [] for t in targets}
    frontier = [("", alpha.identity)]
    if alpha.identity in targets:
        words_by_elem[alpha.identity].append("")
    for _ in range(alpha.size):
        nxt = []
        for (w, m) in frontier:
            for a in alphabet:
                count += 1
                if count > budget:
                    raise WordBudgetError("max_word_budget", budget,
                                          f"enumerating words up to length {alpha.size}; "
                                          "use a smaller recognizer")
                w2, m2 = w + a, alpha.mul[m][alpha.letter_image[a]]
                nxt.append((w2, m2))
                if m2 in targets:
                    words_by_elem[m2].append(w2)
        frontier = nxt

    kept: list = []
    for t in sorted(targets):
        group = sorted(words_by_elem[t], key=len)
        minimal: list = []
        for w in group:
            if not any(is_piece(v, w) for v in minimal):
                minimal.append(w)
        kept.extend(minimal)
    # a shorter word's closure may subsume a longer word of another fiber
    kept.sort(key=len)
    final: list = []
    for w in kept:
        if not any(is_piece(v, w) for v in final):
            final.append(w)

    pieces = [CoverPiece(upward_closure(regex_to_nfa(rx.word_regex(w), alphabet)),
                         piece_closure_regex(alphabet, w))
              for w in final]
    target_nfa = _fiber_nfa(alpha, targets, alphabet)
    return Cover(ClassId.SIGMA1, target_nfa, _prune_empty(pieces),
                 provenance=f"superword closures of words of length <= {alpha.size}")


def _fiber_nfa(alpha: MonoidMorphism, targets: frozenset, alphabet: Alphabet) -> Nfa:
    """Automaton of image⁻¹(targets): the right Cayley graph of the monoid."""
    trans = {(m, a, alpha.mul[m][alpha.letter_image[a]])
             for m in range(alpha.size) for a in alphabet}
    return Nfa(alphabet, alpha.size, frozenset([alpha.identity]),
               frozenset(targets), frozenset(trans))


# -- piecewise-testable covers ---------------------------------------------------------

def bsigma1_cover(rho: RatingMap, goal: ImprintSet,
                  caps: Caps = DEFAULT_CAPS) -> Cover:
    """Universal cover by piece-equivalence classes, deepening k until the
    cover's imprint matches the saturated goal.

    Every k-class cover is piecewise testable and its imprint shrinks as k
    grows; equality with the goal certifies optimality.  If the depth cap is
    reached first the best cover is returned flagged non-optimal.
    """
    alphabet = rho.alphabet
    best: Optional[tuple] = None
    for k in range(caps.pt_depth_cap(len(alphabet)) + 1):
        pa = pt_partition(k, alphabet, caps)
        images = _partition_images(pa, rho, caps)
        best = (k, pa, images)
        if all(img in goal.members for img in images.values()):
            return _partition_cover(pa, optimal=True)
    k, pa, images = best
    return _partition_cover(pa, optimal=False)


def _partition_images(pa: PieceAutomaton, rho: RatingMap, caps: Caps) -> dict:
    """Rating image of every partition class, in one reachability pass."""
    sr = rho.semiring
    start = (pa.start, sr.one)
    seen = {start}
    work = [start]
    sums: dict = {}
    while work:
        (q, elem) = work.pop()
        sums[q] = sr.add(sums.get(q, sr.zero), elem)
        for a in pa.alphabet:
            pair = (pa.delta[q][a], sr.mul(elem, rho.letter_image[a]))
            if pair not in seen:
                if len(seen) >= caps.max_elements:
                    from .errors import SaturationCapError
                    raise SaturationCapError(caps.max_elements, "partition-imprint")
                seen.add(pair)
                work.append(pair)
    return sums


def _partition_cover(pa: PieceAutomaton, optimal: bool) -> Cover:
    pieces = [CoverPiece(pa.class_nfa(q)) for q in range(len(pa.states))]
    return Cover(ClassId.BSIGMA1, universal_language(pa.alphabet), pieces,
                 k=pa.k, optimal=optimal,
                 provenance=f"piece-equivalence partition at k={pa.k}")


# -- two-variable covers -----------------------------------------------------------------

def fo2_cover(rho: RatingMap, saturated: ImprintSet,
              subset: Optional[Iterable[str]] = None,
              left=None, right=None, caps: Caps = DEFAULT_CAPS) -> Cover:
    """Cover of B* whose pieces K all keep left·ρ(K)·right inside the
    saturated set.

    Top level (defaults) covers the full word set with ρ(K) in the saturated
    set for every piece.  Requires an alphabet-compatible rating map.
    """
    if rho.cont is None:
        raise ValueError("fo2 cover synthesis needs an alphabet-compatible rating map")
    sr = rho.semiring
    subset = tuple(sorted(subset)) if subset is not None else tuple(rho.alphabet.symbols)
    left = left if left is not None else sr.one
    right = right if right is not None else sr.one
    if left not in saturated.members or right not in saturated.members:
        raise ValueError("context elements must lie in the saturated set")

    state = _Fo2State(rho, saturated, caps)
    pieces = state.build(subset, left, right)
    if len(pieces) > caps.max_pieces:
        raise PieceCapError("max_pieces", caps.max_pieces, "fo2 cover assembly")
    pieces = _dedup_pieces(_prune_empty(pieces), caps)
    for p in pieces:
        image = sr.mul(sr.mul(left, rho.eval_nfa(p.nfa, caps)), right)
        if image not in saturated.members:
            raise AssertionError("fo2 synthesis produced a piece outside the saturated set")
    target = alphabet_star(rho.alphabet, subset)
    return Cover(ClassId.FO2, target, pieces,
                 provenance="left-factor recursion")


class _Fo2State:
    """Recursion state: caches per-sub-alphabet generated sums and
    reachability sets; counts pieces against the cap."""

    def __init__(self, rho: RatingMap, saturated: ImprintSet, caps: Caps):
        self.rho = rho
        self.sr = rho.semiring
        self.sat = saturated.members
        self.caps = caps
        self.count = 0
        self._sb_cache: dict = {}
        self._reach_cache: dict = {}
        self._build_memo: dict = {}

    def language_sums(self, subset: tuple) -> frozenset:
        """Images of nonempty languages over B*: nonempty sums of word
        images (niceness makes this exhaustive)."""
        if subset not in self._sb_cache:
            sr = self.sr
            gens = [self.rho.letter_image[a] for a in subset]
            words = {sr.one}
            work = [sr.one]
            while work:
                e = work.pop()
                for g in gens:
                    x = sr.mul(e, g)
                    if x not in words:
                        words.add(x)
                        work.append(x)
            sums = set(words)
            work = list(words)
            while work:
                e = work.pop()
                for w in words:
                    x = sr.add(e, w)
                    if x not in sums:
                        if len(sums) > self.caps.max_elements:
                            from .errors import SaturationCapError
                            raise SaturationCapError(self.caps.max_elements, "fo2-language-sums")
                        sums.add(x)
                        work.append(x)
            self._sb_cache[subset] = frozenset(sums)
        return self._sb_cache[subset]

    def s_b(self, subset: tuple) -> frozenset:
        return frozenset(self.language_sums(subset) & self.sat)

    def right_reach(self, t, subset: tuple) -> frozenset:
        key = ("r", t, subset)
        if key not in self._reach_cache:
            sb = self.s_b(subset)
            self._reach_cache[key] = frozenset(self.sr.mul(t, x) for x in sb)
        return self._reach_cache[key]

    def left_reach(self, t, subset: tuple) -> frozenset:
        key = ("l", t, subset)
        if key not in self._reach_cache:
            sb = self.s_b(subset)
            self._reach_cache[key] = frozenset(self.sr.mul(x, t) for x in sb)
        return self._reach_cache[key]

    def right_saturated(self, t, subset: tuple) -> Optional[str]:
        """None when saturated, else the smallest violating letter."""
        sr, rho = self.sr, self.rho
        sb = self.s_b(subset)
        for b in subset:
            img = rho.letter_image[b]
            if not any(t in self.right_reach(sr.mul(sr.mul(t, x), img), subset) for x in sb):
                return b
        return None

    def left_saturated(self, t, subset: tuple) -> Optional[str]:
        sr, rho = self.sr, self.rho
        sb = self.s_b(subset)
        for b in subset:
            img = rho.letter_image[b]
            if not any(t in self.left_reach(sr.mul(img, sr.mul(x, t)), subset) for x in sb):
                return b
        return None

    def _bump(self, n: int):
        self.count += n
        if self.count > self.caps.max_pieces:
            raise PieceCapError("max_pieces", self.caps.max_pieces, "fo2 cover synthesis")

    def build(self, subset: tuple, left, right) -> list:
        """Pieces of a cover of B* with left·ρ(piece)·right in the saturated
        set; recursion on (|B|, right-index of left, left-index of right).

        Identical subproblems are shared, so the recursion is a DAG; the cap
        counts distinct constructed pieces.
        """
        key = (subset, left, right)
        if key in self._build_memo:
            return self._build_memo[key]
        sr, rho = self.sr, self.rho
        b_right = self.right_saturated(left, subset)
        if b_right is None:
            b_left = self.left_saturated(right, subset)
            if b_left is None:
                bstar_nfa = alphabet_star(rho.alphabet, subset)
                bstar_rx = rx.star(rx.union_all(rx.Letter(a) for a in subset))
                self._bump(1)
                out = [CoverPiece(bstar_nfa, bstar_rx)]
            else:
                # peel the rightmost occurrence of the violating letter
                b = b_left
                rest = tuple(x for x in subset if x != b)
                suffixes = self.build(rest, sr.one, sr.one)
                out = list(suffixes)
                bimg = rho.letter_image[b]
                for h in suffixes:
                    t_h = sr.mul(bimg, sr.mul(rho.eval_nfa(h.nfa, self.caps), right))
                    for k in self.build(subset, left, t_h):
                        out.append(_concat_piece(k, b, h))
                        self._bump(1)
        else:
            # peel the leftmost occurrence of the violating letter
            b = b_right
            rest = tuple(x for x in subset if x != b)
            prefixes = self.build(rest, sr.one, sr.one)
            out = list(prefixes)
            bimg = rho.letter_image[b]
            for h in prefixes:
                t_h = sr.mul(sr.mul(left, rho.eval_nfa(h.nfa, self.caps)), bimg)
                for k in self.build(subset, t_h, right):
                    out.append(_concat_piece(h, b, k))
                    self._bump(1)
        self._build_memo[key] = out
        return out


def _concat_piece(left: CoverPiece, letter: str, right: CoverPiece) -> CoverPiece:
    alphabet = left.nfa.alphabet
    mid = regex_to_nfa(rx.Letter(letter), alphabet)
    nfa = nfa_concat(nfa_concat(left.nfa, mid), right.nfa)
    reg = rx.concat(rx.concat(left.regex, rx.Letter(letter)), right.regex)
    return CoverPiece(nfa, reg)


# -- assembly and verification --------------------------------------------------------------

def restrict_cover(cover: Cover, target: Nfa) -> Cover:
    """Keep the pieces meeting the target: turns a separating universal
    cover for {target} ∪ others into a cover of the target separating for
    the others."""
    pieces = [p for p in cover.pieces if not is_empty(nfa_intersection(p.nfa, target))]
    return Cover(cover.class_id, target, pieces, k=cover.k, optimal=cover.optimal,
                 provenance=cover.provenance + " | restricted to target")


def union_covers(covers: Iterable[Cover]) -> Cover:
    covers = list(covers)
    if not covers:
        raise ValueError("no covers to combine")
    pieces = list(itertools.chain.from_iterable(c.pieces for c in covers))
    target = covers[0].target
    for c in covers[1:]:
        target = nfa_union(target, c.target)
    return Cover(covers[0].class_id, target, pieces,
                 k=covers[0].k, optimal=all(c.optimal for c in covers),
                 provenance="union of per-element covers")


def cover_assemble(mode: str, *args) -> Cover:
    if mode == "restrict":
        return restrict_cover(*args)
    if mode == "union":
        return union_covers(*args)
    raise ValueError(f"unknown assembly mode {mode!r}")


@dataclass
class VerifyReport:
    covers_target: bool
    separating: bool
    piece_witnesses: list          # per piece: index of a missed language, or None
    class_ok: Optional[bool]       # None when only certified by construction
    class_note: str
    imprint_masks: Optional[frozenset] = None

    @property
    def ok(self) -> bool:
        return self.covers_target and self.separating and self.class_ok is not False


def _covers_incrementally(target: Nfa, pieces: list, caps: Caps) -> bool:
    """target ⊆ union of pieces, with the running union kept minimal and an
    early exit once inclusion holds (unions of many pieces usually collapse
    long before all of them are accumulated)."""
    from .fa import minimize

    if not pieces:
        return is_empty(target)
    union = None
    for i, p in enumerate(pieces):
        union = p.nfa if union is None else nfa_union(union, p.nfa)
        if union.state_count > 64 or i == len(pieces) - 1:
            union = minimize(union, caps).as_nfa()
            if includes(target, union, caps):
                return True
    return False


def verify_cover(cover: Cover, target: Nfa, against: list,
                 class_check: bool = True, ext=None,
                 caps: Caps = DEFAULT_CAPS) -> VerifyReport:
    """Machine-check a cover: coverage, separation witnesses, the class
    discipline of each piece, and (given a multiset extension) the cover's
    imprint over the language indices."""
    covers_target = _covers_incrementally(target, cover.pieces, caps)
    witnesses = []
    separating = True
    for p in cover.pieces:
        w = None
        for i, lang in enumerate(against):
            if is_empty(nfa_intersection(p.nfa, lang)):
                w = i
                break
        witnesses.append(w)
        if w is None:
            separating = False

    class_ok: Optional[bool] = None
    note = "class membership certified by construction, not machine-checked"
    if class_check:
        if cover.class_id is ClassId.SIGMA1:
            class_ok = all(equivalent(upward_closure(p.nfa), p.nfa, caps) for p in cover.pieces)
            note = "each piece closed under superwords"
        elif cover.class_id is ClassId.AT:
            class_ok = _pieces_are_atom_unions(cover, caps)
            note = "each piece a union of alphabet atoms"
        elif cover.class_id is ClassId.BSIGMA1 and cover.k is not None:
            class_ok = _pieces_are_class_unions(cover, caps)
            note = f"each piece a union of {cover.k}-piece-equivalence classes"

    masks = None
    if ext is not None:
        closed = set()
        for p in cover.pieces:
            m = ext.index_set(ext.tau.eval_nfa(p.nfa, caps))
            sub = m
            while True:
                closed.add(sub)
                if sub == 0:
                    break
                sub = (sub - 1) & m
        masks = frozenset(closed)

    return VerifyReport(covers_target, separating, witnesses, class_ok, note, masks)


def _pieces_are_atom_unions(cover: Cover, caps: Caps) -> bool:
    alphabet = cover.target.alphabet
    for p in cover.pieces:
        for mask in range(1 << len(alphabet)):
            atom = alphabet_exact(alphabet, alphabet.from_mask(mask))
            if not is_empty(nfa_intersection(atom, p.nfa)) and not includes(atom, p.nfa, caps):
                return False
    return True


def _pieces_are_class_unions(cover: Cover, caps: Caps) -> bool:
    pa = pt_partition(cover.k, cover.target.alphabet, caps)
    classes = [pa.class_nfa(q) for q in range(len(pa.states))]
    for p in cover.pieces:
        for cls in classes:
            if not is_empty(nfa_intersection(cls, p.nfa)) and not includes(cls, p.nfa, caps):
                return False
    return True
