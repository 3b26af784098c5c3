"""Least-fixpoint engines for optimal imprints.

The universal engine closes a subset of the rating semiring under downset,
multiplication and one class-specific rule; the pointed engine does the same
over monoid/semiring pairs.  Both start from the trivial imprint (the word
images, downset-closed) and are monotone, so the least fixpoint is
independent of scheduling.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import Caps, DEFAULT_CAPS, InputError
from .fa import MonoidMorphism, Nfa, alphabet_exact, nfa_intersection, is_empty
from .imprints import ImprintSet, PointedImprintSet
from .rating import Extension, RatingMap, rm_alphabet_augment
from .semiring import AlphabetSemiring


class ClassId(enum.Enum):
    AT = "at"
    SIGMA1 = "sigma1"
    BSIGMA1 = "bsigma1"
    SIGMA2 = "sigma2"
    FO2 = "fo2"
    FO = "fo"

    @property
    def pointed(self) -> bool:
        return self in (ClassId.SIGMA1, ClassId.SIGMA2)

    @property
    def needs_alphabet_compat(self) -> bool:
        return self in (ClassId.FO2, ClassId.SIGMA2)

    @property
    def synthesizable(self) -> bool:
        return self in (ClassId.AT, ClassId.SIGMA1, ClassId.BSIGMA1, ClassId.FO2)

    @classmethod
    def parse(cls, name: str) -> "ClassId":
        try:
            return cls(name.lower())
        except ValueError:
            raise InputError(f"unknown class {name!r}; expected one of "
                             f"{', '.join(c.value for c in cls)}") from None


# -- trivial imprints -----------------------------------------------------------

def rm_trivial_imprint(rho: RatingMap, alpha: Optional[MonoidMorphism] = None,
                       caps: Caps = DEFAULT_CAPS):
    """Trivial imprint: word images, downset-closed.

    Universal mode returns an ImprintSet; passing a morphism returns the
    pointed variant over monoid/value pairs.
    """
    if alpha is None:
        out = ImprintSet(rho.semiring, cap=caps.max_elements, label="trivial")
        for w in rho.word_image_monoid(caps):
            out.insert(w)
        return out
    out = PointedImprintSet(alpha, rho.semiring, cap=caps.max_elements, label="trivial")
    for pair in _pair_monoid(alpha, rho, caps):
        out.insert(pair)
    return out


def _pair_monoid(alpha: MonoidMorphism, rho: RatingMap, caps: Caps) -> set:
    """All pairs (monoid image, rating image) of words."""
    from .errors import SaturationCapError

    if set(alpha.letter_image) != set(rho.alphabet.symbols):
        raise InputError("morphism and rating map alphabets differ")
    sr = rho.semiring
    gens = [(alpha.letter_image[a], rho.letter_image[a]) for a in rho.alphabet]
    start = (alpha.identity, sr.one)
    seen = {start}
    work = [start]
    while work:
        (m, r) = work.pop()
        for (gm, gr) in gens:
            nxt = (alpha.mul[m][gm], sr.mul(r, gr))
            if nxt not in seen:
                if len(seen) >= caps.max_elements:
                    raise SaturationCapError(caps.max_elements, "word-pair closure")
                seen.add(nxt)
                work.append(nxt)
    return seen


# -- universal engine --------------------------------------------------------------

def saturate_universal(rho: RatingMap, class_id: ClassId,
                       caps: Caps = DEFAULT_CAPS, lifo: bool = False) -> ImprintSet:
    """Least class-saturated subset of the rating semiring.

    `lifo` flips the worklist order; the least fixpoint is order-independent
    (exercised by the determinism tests).
    """
    if class_id not in (ClassId.BSIGMA1, ClassId.FO2, ClassId.FO):
        raise InputError(f"{class_id.value} is not handled by the universal engine")
    if class_id is ClassId.FO2 and rho.cont is None:
        raise InputError("fo2 saturation needs an alphabet-compatible rating map; "
                         "augment it first")
    sr = rho.semiring
    out = ImprintSet(sr, cap=caps.max_elements, label=class_id.value, lifo=lifo)
    for w in rho.word_image_monoid(caps):
        out.insert(w)

    if class_id is ClassId.BSIGMA1:
        # unconditional rule: fires once per sub-alphabet
        for mask in range(1 << len(rho.alphabet)):
            exact = rho.image_of_exact(rho.alphabet.from_mask(mask), caps)
            out.insert(sr.idempotent_power(exact))

    def fo_rule(snapshot):
        added = False
        for s in snapshot:
            e = sr.idempotent_power(s)
            added |= out.insert(sr.add(e, sr.mul(e, s)))
        return added

    def fo2_rule(snapshot):
        cont = rho.cont
        alph_sr = cont.target
        assert isinstance(alph_sr, AlphabetSemiring)
        groups: dict = {}
        for s in snapshot:
            if sr.mul(s, s) != s:
                continue
            c = cont.apply(s)
            members = alph_sr.members(c)
            if len(members) == 1:
                groups.setdefault(members[0], []).append(s)
        added = False
        for bmask, idems in groups.items():
            star = rho.image_of_star(rho.alphabet.from_mask(bmask), caps)
            for e in idems:
                for f in idems:
                    added |= out.insert(sr.mul(sr.mul(e, star), f))
        return added

    rule = {ClassId.BSIGMA1: None, ClassId.FO: fo_rule, ClassId.FO2: fo2_rule}[class_id]
    _run_universal(out, sr, rule)
    return out


def _run_universal(out: ImprintSet, sr, rule):
    while True:
        out.sweeps += 1
        while out.queue:
            x = out.pop_pending()
            for y in list(out.tops):
                out.insert(sr.mul(x, y))
                out.insert(sr.mul(y, x))
        if rule is None or not rule(list(out.members)):
            if not out.queue:
                break


# -- pointed engine -----------------------------------------------------------------

def saturate_pointed(alpha: MonoidMorphism, rho: RatingMap, class_id: ClassId,
                     caps: Caps = DEFAULT_CAPS, lifo: bool = False) -> PointedImprintSet:
    """Least class-saturated subset of monoid x rating-semiring pairs."""
    if class_id not in (ClassId.SIGMA1, ClassId.SIGMA2):
        raise InputError(f"{class_id.value} is not handled by the pointed engine")
    if class_id is ClassId.SIGMA2 and rho.cont is None:
        raise InputError("sigma2 saturation needs an alphabet-compatible rating map; "
                         "augment it first")
    sr = rho.semiring
    out = PointedImprintSet(alpha, sr, cap=caps.max_elements, label=class_id.value, lifo=lifo)
    for pair in _pair_monoid(alpha, rho, caps):
        out.insert(pair)

    if class_id is ClassId.SIGMA1:
        star_all = rho.image_of_star(rho.alphabet.symbols, caps)
        out.insert((alpha.identity, star_all))
        rule = None
    else:
        def rule(snapshot):
            cont = rho.cont
            alph_sr = cont.target
            added = False
            for (m, r) in snapshot:
                if alpha.mul[m][m] != m or sr.mul(r, r) != r:
                    continue
                for bmask in alph_sr.members(cont.apply(r)):
                    star = rho.image_of_star(rho.alphabet.from_mask(bmask), caps)
                    added |= out.insert((m, sr.mul(sr.mul(r, star), r)))
            return added

    while True:
        out.sweeps += 1
        while out.queue:
            (m1, r1) = out.pop_pending()
            for (m2, r2) in list(out.tops):
                out.insert((alpha.mul[m1][m2], sr.mul(r1, r2)))
                out.insert((alpha.mul[m2][m1], sr.mul(r2, r1)))
        if rule is None or not rule(list(out.members)):
            if not out.queue:
                break
    return out


# -- exact finite-class imprint -----------------------------------------------------

def at_imprint(rho: RatingMap, scope: Optional[Nfa] = None,
               caps: Caps = DEFAULT_CAPS) -> ImprintSet:
    """Optimal alphabet-testable imprint, computed directly from the atoms.

    Universal scope uses every sub-alphabet; language scope keeps the atoms
    that meet the language.  Serves as the exact oracle for the framework.
    """
    out = ImprintSet(rho.semiring, cap=caps.max_elements, label="at")
    out.insert(rho.semiring.zero)
    for mask in range(1 << len(rho.alphabet)):
        syms = rho.alphabet.from_mask(mask)
        if scope is not None:
            atom = alphabet_exact(rho.alphabet, syms)
            if is_empty(nfa_intersection(atom, scope)):
                continue
        out.insert(rho.image_of_exact(syms, caps))
    return out


# -- covering decisions ----------------------------------------------------------------

@dataclass
class CoverDecision:
    """Decision core shared by the CLI verdicts.

    Index masks are over the `against` languages only; for full-covering
    queries the target is tracked separately.
    """

    class_id: ClassId
    coverable: bool
    imprint_masks: frozenset      # index masks: the imprint over the against set
    noncoverable_masks: frozenset  # masks H with (target, H) not coverable
    raw_imprint: object
    rating_map: object = None     # map the raw imprint was computed over
    stats: dict = field(default_factory=dict)


def _mask_subsets(mask: int):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def _drop_index(mask: int, index: int) -> int:
    """Remove one bit position, compacting the higher bits down."""
    low = mask & ((1 << index) - 1)
    high = (mask >> (index + 1)) << index
    return low | high


def _against_table(image_masks: Iterable[int], n_total: int, target_index: Optional[int]):
    """Downward closure of the δ-images, re-indexed over the against set.

    The result is the optimal imprint over the against multiset for the
    queried target: a subset is in it exactly when the target is not
    coverable against that subset.
    """
    if target_index is None:
        closed = set()
        for m in image_masks:
            closed.update(_mask_subsets(m))
        full = (1 << n_total) - 1
        return frozenset(closed), full in closed
    full_rest = ((1 << n_total) - 1) & ~(1 << target_index)
    noncov = set()
    hit_full = False
    for m in image_masks:
        if not m >> target_index & 1:
            continue
        rest = m & full_rest
        if rest == full_rest:
            hit_full = True
        noncov.update(_mask_subsets(_drop_index(rest, target_index)))
    return frozenset(noncov), hit_full


def decide_universal_covering(ext: Extension, class_id: ClassId,
                              caps: Caps = DEFAULT_CAPS,
                              target_index: Optional[int] = None) -> CoverDecision:
    """Boolean-algebra covering decision over a multiset extension.

    With `target_index` set, the extension was built over {target} ∪ against
    and the verdict answers the full covering question for the target.
    """
    if ext.language_count is None:
        raise InputError("decision needs a multiset-built extension")
    rating_map = ext.tau
    if class_id is ClassId.AT:
        imprint = at_imprint(ext.tau, caps=caps)
        index_of = ext.index_set
    elif class_id in (ClassId.BSIGMA1, ClassId.FO):
        imprint = saturate_universal(ext.tau, class_id, caps)
        index_of = ext.index_set
    elif class_id is ClassId.FO2:
        aug = rm_alphabet_augment(ext.tau, caps)
        imprint = saturate_universal(aug.tau, class_id, caps)
        index_of = lambda r: ext.index_set(aug.delta.apply(r))
        rating_map = aug.tau
    else:
        raise InputError(f"{class_id.value} does not route through universal covering")
    images = {index_of(r) for r in imprint.maximal_elements()}
    noncov, hit_full = _against_table(images, ext.language_count, target_index)
    return CoverDecision(
        class_id=class_id,
        coverable=not hit_full,
        imprint_masks=noncov,
        noncoverable_masks=noncov,
        raw_imprint=imprint,
        rating_map=rating_map,
        stats={"elements": len(imprint), "sweeps": imprint.sweeps,
               "rating_set_log2": ext.tau.semiring.log2_size()},
    )


def decide_pointed_covering(alpha: MonoidMorphism, accepting: Iterable[int],
                            ext: Extension, class_id: ClassId,
                            caps: Caps = DEFAULT_CAPS) -> CoverDecision:
    """Lattice-class covering decision: target via its recognizing morphism,
    quality measure via the multiset extension."""
    if ext.language_count is None:
        raise InputError("decision needs a multiset-built extension")
    accepting = frozenset(accepting)
    rating_map = ext.tau
    if class_id is ClassId.SIGMA2:
        aug = rm_alphabet_augment(ext.tau, caps)
        pointed = saturate_pointed(alpha, aug.tau, class_id, caps)
        index_of = lambda r: ext.index_set(aug.delta.apply(r))
        rating_map = aug.tau
    elif class_id is ClassId.SIGMA1:
        pointed = saturate_pointed(alpha, ext.tau, class_id, caps)
        index_of = ext.index_set
    else:
        raise InputError(f"{class_id.value} does not route through pointed covering")
    images = {index_of(r) for (m, r) in pointed.maximal_elements() if m in accepting}
    full = (1 << ext.language_count) - 1
    closed = set()
    for msk in images:
        closed.update(_mask_subsets(msk))
    return CoverDecision(
        class_id=class_id,
        coverable=full not in closed,
        imprint_masks=frozenset(closed),
        noncoverable_masks=frozenset(closed),
        raw_imprint=pointed,
        rating_map=rating_map,
        stats={"elements": len(pointed), "sweeps": pointed.sweeps,
               "rating_set_log2": ext.tau.semiring.log2_size(),
               "monoid_size": alpha.size},
    )
