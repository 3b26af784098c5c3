"""Nice multiplicative rating maps and their canonical constructions.

A rating map is represented by its rating semiring and the letter images of
the word morphism; language values are reconstructed by summing word images
over reachable automaton configurations.  Extensions carry the morphism that
pulls imprints back to the extended map's rating set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import Caps, DEFAULT_CAPS, DeterminizationCapError, InputError, SaturationCapError
from .fa import Alphabet, MonoidMorphism, Nfa, minimize, transition_monoid
from .imprints import ImprintSet, PointedImprintSet
from .semiring import (Semiring, SemiringMorphism, SubsetLattice,
                       alphabet_semiring, powerset_semiring, product_semiring,
                       relation_semiring)


@dataclass
class RatingMap:
    """Nice multiplicative rating map given by letter images.

    `cont`, when present, maps every element to the set of word alphabets it
    accounts for (the map is then alphabet compatible).
    """

    alphabet: Alphabet
    semiring: Semiring
    letter_image: dict
    cont: Optional[SemiringMorphism] = None
    _star_cache: dict = field(default_factory=dict, repr=False)
    _monoid_cache: Optional[frozenset] = field(default=None, repr=False)

    def __post_init__(self):
        for a in self.alphabet:
            if a not in self.letter_image:
                raise InputError(f"letter image missing for {a!r}")

    def eval_word(self, word: str):
        sr = self.semiring
        out = sr.one
        for a in word:
            out = sr.mul(out, self.letter_image[a])
        return out

    def eval_nfa(self, nfa: Nfa, caps: Caps = DEFAULT_CAPS):
        """Image of a regular language: sum of the word images of its members.

        Tracks reachable (state subset, element) pairs of the determinized
        input; every accepted word contributes its image through an accepting
        pair.
        """
        if nfa.alphabet != self.alphabet:
            raise InputError("rating map / automaton alphabet mismatch")
        sr = self.semiring
        step = nfa.step_map()
        start = (frozenset(nfa.initials), sr.one)
        seen = {start}
        work = [start]
        total = sr.zero
        while work:
            subset, elem = work.pop()
            if subset & nfa.finals:
                total = sr.add(total, elem)
            for a in self.alphabet:
                nxt = frozenset().union(*(step.get((q, a), ()) for q in subset)) if subset else frozenset()
                if not nxt:
                    continue
                pair = (nxt, sr.mul(elem, self.letter_image[a]))
                if pair not in seen:
                    if len(seen) >= caps.max_det_states:
                        raise DeterminizationCapError(
                            "max_det_states", caps.max_det_states, "rating-map evaluation")
                    seen.add(pair)
                    work.append(pair)
        return total

    def eval(self, language, caps: Caps = DEFAULT_CAPS):
        """Image of a word (str) or regular language (Nfa)."""
        if isinstance(language, str):
            return self.eval_word(language)
        if isinstance(language, Nfa):
            return self.eval_nfa(language, caps)
        raise InputError(f"cannot rate {type(language).__name__}")

    def _letter_pairs(self, subset: Iterable[str]):
        return [(self.letter_image[a], 1 << self.alphabet.index(a)) for a in subset]

    def _star_exact(self, subset_mask: int, caps: Caps = DEFAULT_CAPS):
        """(image of B*, image of words-with-alphabet-exactly-B).

        Closes the set of (word image, alphabet mask) pairs reachable over B;
        both values are sums over that finite set.
        """
        if subset_mask in self._star_cache:
            return self._star_cache[subset_mask]
        sr = self.semiring
        syms = self.alphabet.from_mask(subset_mask)
        gens = self._letter_pairs(syms)
        seen = {(sr.one, 0)}
        work = [(sr.one, 0)]
        while work:
            elem, mask = work.pop()
            for (gelem, gmask) in gens:
                pair = (sr.mul(elem, gelem), mask | gmask)
                if pair not in seen:
                    if len(seen) >= caps.max_elements:
                        raise SaturationCapError(caps.max_elements, "word-image closure")
                    seen.add(pair)
                    work.append(pair)
        star = sr.sum(e for (e, _) in seen)
        exact = sr.sum(e for (e, m) in seen if m == subset_mask)
        self._star_cache[subset_mask] = (star, exact)
        return star, exact

    def image_of_star(self, subset: Iterable[str], caps: Caps = DEFAULT_CAPS):
        """Image of B* for a sub-alphabet B."""
        return self._star_exact(self.alphabet.mask_of(subset), caps)[0]

    def image_of_exact(self, subset: Iterable[str], caps: Caps = DEFAULT_CAPS):
        """Image of the words whose alphabet is exactly B."""
        return self._star_exact(self.alphabet.mask_of(subset), caps)[1]

    def word_image_monoid(self, caps: Caps = DEFAULT_CAPS) -> frozenset:
        """All images of words (the multiplicative submonoid generated by the
        letter images, unit included)."""
        if self._monoid_cache is None:
            sr = self.semiring
            gens = [self.letter_image[a] for a in self.alphabet]
            seen = {sr.one}
            work = [sr.one]
            while work:
                e = work.pop()
                for g in gens:
                    n = sr.mul(e, g)
                    if n not in seen:
                        if len(seen) >= caps.max_elements:
                            raise SaturationCapError(caps.max_elements, "word-image closure")
                        seen.add(n)
                        work.append(n)
            self._monoid_cache = frozenset(seen)
        return self._monoid_cache


def rm_eval(rho: RatingMap, language, caps: Caps = DEFAULT_CAPS):
    return rho.eval(language, caps)


@dataclass
class Extension:
    """Rating map `tau` together with the morphism pulling its values back to
    the rating set it extends.

    For multiset-built extensions the target is the subset lattice over the
    language indices and `language_count` is set; `hits_all(r)` is the marker
    predicate for tuples meeting every language.
    """

    tau: RatingMap
    delta: SemiringMorphism
    language_count: Optional[int] = None

    def index_set(self, r) -> int:
        """Language-index bitmask of an element (multiset extensions only)."""
        if self.language_count is None:
            raise InputError("extension was not built from a language multiset")
        return self.delta.apply(r)

    def hits_all(self, r) -> bool:
        return self.index_set(r) == (1 << self.language_count) - 1


def rm_from_morphism(alpha: MonoidMorphism, accepting: Iterable[int],
                     caps: Caps = DEFAULT_CAPS) -> Extension:
    """Canonical rating map over the powerset of the monoid, extending the
    single-language map of image⁻¹(accepting)."""
    sr = powerset_semiring(alpha, caps)
    letter_image = {a: sr.singleton(m) for a, m in alpha.letter_image.items()}
    tau = RatingMap(_alphabet_of_letters(alpha), sr, letter_image)
    acc_mask = 0
    for m in accepting:
        acc_mask |= 1 << m
    lattice = SubsetLattice(1)
    delta = SemiringMorphism(sr, lattice, lambda s: 1 if s & acc_mask else 0)
    return Extension(tau, delta, language_count=1)


def _alphabet_of_letters(alpha: MonoidMorphism) -> Alphabet:
    return Alphabet("".join(sorted(alpha.letter_image)))


def rm_from_nfa(nfa: Nfa, caps: Caps = DEFAULT_CAPS) -> Extension:
    """Canonical rating map over state relations of the automaton."""
    sr = relation_semiring(nfa.state_count, caps)
    letter_image = {a: 0 for a in nfa.alphabet}
    for (q, a, r) in nfa.transitions:
        letter_image[a] |= sr.pair(q, r)
    tau = RatingMap(nfa.alphabet, sr, letter_image)
    acc_mask = 0
    for q in nfa.initials:
        for r in nfa.finals:
            acc_mask |= sr.pair(q, r)
    lattice = SubsetLattice(1)
    delta = SemiringMorphism(sr, lattice, lambda s: 1 if s & acc_mask else 0)
    return Extension(tau, delta, language_count=1)


def rm_from_multiset(items, caps: Caps = DEFAULT_CAPS) -> Extension:
    """Nice multiplicative rating map extending the canonical map of a
    finite multiset of regular languages.

    Items are NFAs or (morphism, accepting) pairs; per item the relation
    construction is used when the automaton is small enough (minimizing
    first when that helps) and the monoid construction otherwise.
    """
    items = list(items)
    if not items:
        raise InputError("empty language multiset")
    exts = []
    alphabet = None
    for item in items:
        if isinstance(item, Nfa):
            ab = item.alphabet
        else:
            ab = _alphabet_of_letters(item[0])
        if alphabet is None:
            alphabet = ab
        elif alphabet != ab:
            raise InputError("multiset languages must share one alphabet")
    for item in items:
        if isinstance(item, Nfa):
            exts.append(_extension_for_nfa(item, caps))
        else:
            alpha, accepting = item
            exts.append(rm_from_morphism(alpha, accepting, caps))
    parts = [e.tau.semiring for e in exts]
    sr = product_semiring(parts)
    letter_image = {a: tuple(e.tau.letter_image[a] for e in exts) for a in alphabet}
    tau = RatingMap(alphabet, sr, letter_image)
    n = len(items)
    lattice = SubsetLattice(n)
    deltas = [e.delta for e in exts]

    def apply(tup):
        mask = 0
        for i, (d, r) in enumerate(zip(deltas, tup)):
            if d.apply(r):
                mask |= 1 << i
        return mask

    return Extension(tau, SemiringMorphism(sr, lattice, apply), language_count=n)


def _extension_for_nfa(nfa: Nfa, caps: Caps) -> Extension:
    """Pick the per-language construction with the smallest element width.

    Element downsets are enumerated explicitly during saturation, so the bit
    width of the rating-set encoding is the quantity to minimize: minimal-DFA
    relations (states²), raw-NFA relations (states²) and monoid powersets
    (monoid size) compete.
    """
    from .errors import MonoidCapError, RelationCapError

    candidates = []
    dfa = minimize(nfa, caps)
    if dfa.state_count <= caps.max_relation_states:
        candidates.append((dfa.state_count ** 2, 0, "dfa"))
    if nfa.state_count <= caps.max_relation_states:
        candidates.append((nfa.state_count ** 2, 2, "nfa"))
    alpha = accepting = None
    try:
        alpha, accepting = transition_monoid(nfa, caps)
        if alpha.size <= caps.max_powerset_monoid:
            candidates.append((alpha.size, 1, "monoid"))
    except MonoidCapError:
        if not candidates:
            raise
    if not candidates:
        raise RelationCapError(
            "max_relation_states", caps.max_relation_states,
            f"no compact rating construction for a {nfa.state_count}-state automaton "
            f"(minimal DFA has {dfa.state_count} states)")
    _, _, kind = min(candidates)
    if kind == "dfa":
        return rm_from_nfa(dfa.as_nfa(), caps)
    if kind == "nfa":
        return rm_from_nfa(nfa, caps)
    return rm_from_morphism(alpha, accepting, caps)


def rm_alphabet_augment(rho: RatingMap, caps: Caps = DEFAULT_CAPS) -> Extension:
    """Alphabet-compatible extension: pair every value with the set of word
    alphabets it accounts for."""
    alph_sr = alphabet_semiring(rho.alphabet, caps)
    sr = product_semiring([rho.semiring, alph_sr])
    letter_image = {a: (rho.letter_image[a], alph_sr.singleton(1 << rho.alphabet.index(a)))
                    for a in rho.alphabet}
    cont = SemiringMorphism(sr, alph_sr, lambda t: t[1])
    tau = RatingMap(rho.alphabet, sr, letter_image, cont=cont)
    delta = SemiringMorphism(sr, rho.semiring, lambda t: t[0])
    return Extension(tau, delta)


def imprint_pullback(ext: Extension, imprint):
    """Image of an imprint under the extending morphism, downset-closed.

    Accepts ImprintSet or PointedImprintSet over the extension's rating set;
    returns the same kind over the extended map's rating set.
    """
    delta = ext.delta
    target = delta.target
    if isinstance(imprint, ImprintSet):
        out = ImprintSet(target, cap=imprint.cap, label=imprint.label + "-pullback")
        for r in imprint.maximal_elements():
            out.insert(delta.apply(r))
        return out
    if isinstance(imprint, PointedImprintSet):
        out = PointedImprintSet(imprint.monoid, target, cap=imprint.cap,
                                label=imprint.label + "-pullback")
        for (m, r) in imprint.maximal_elements():
            out.insert((m, delta.apply(r)))
        return out
    raise InputError(f"cannot pull back {type(imprint).__name__}")
