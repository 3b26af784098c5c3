"""Fixpoint engines: class rules, invariants, determinism, decisions."""

import random

import pytest

from regcov import (Alphabet, ClassId, InputError, at_imprint,
                    decide_pointed_covering, decide_universal_covering,
                    imprint_pullback, is_empty, nfa_concat, nfa_intersection,
                    regex_to_nfa, rm_alphabet_augment, rm_from_multiset,
                    rm_trivial_imprint, saturate_pointed, saturate_universal,
                    transition_monoid, upward_closure)
from helpers import nfa_of, random_nfa, random_regex

AB = Alphabet("ab")
ABC = Alphabet("abc")
A1 = Alphabet("a")


def small_instances(count, seed, states=2, langs=2, symbols="ab"):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        nfas = [random_nfa(rng, Alphabet(symbols), states) for _ in range(rng.randint(1, langs))]
        out.append(nfas)
    return out


def test_single_letter_all_classes_full_lattice():
    ext = rm_from_multiset([nfa_of("a*", "a")])
    tau = ext.tau
    triv = rm_trivial_imprint(tau)
    star = tau.image_of_star("a")
    want = set(triv.members)
    want.update(tau.semiring.downset(star))
    for cid in (ClassId.BSIGMA1, ClassId.FO):
        got = saturate_universal(tau, cid)
        assert got.members == want, cid
    aug = rm_alphabet_augment(tau)
    got2 = saturate_universal(aug.tau, ClassId.FO2)
    pulled = imprint_pullback(aug, got2)
    assert pulled.members == want


def test_bsigma1_rule_fires_for_every_subalphabet():
    ext = rm_from_multiset([nfa_of("(ab)+", "ab"), nfa_of("a+", "ab")])
    tau = ext.tau
    got = saturate_universal(tau, ClassId.BSIGMA1)
    sr = tau.semiring
    for mask in range(4):
        exact = tau.image_of_exact(AB.from_mask(mask))
        assert sr.idempotent_power(exact) in got.members


def test_fo2_requires_alphabet_compatibility():
    ext = rm_from_multiset([nfa_of("a+", "ab")])
    with pytest.raises(InputError, match="alphabet-compatible"):
        saturate_universal(ext.tau, ClassId.FO2)
    alpha, _ = transition_monoid(nfa_of("a+", "ab"))
    with pytest.raises(InputError, match="alphabet-compatible"):
        saturate_pointed(alpha, ext.tau, ClassId.SIGMA2)


def test_engine_class_routing():
    ext = rm_from_multiset([nfa_of("a+", "ab")])
    alpha, _ = transition_monoid(nfa_of("a+", "ab"))
    with pytest.raises(InputError):
        saturate_universal(ext.tau, ClassId.SIGMA1)
    with pytest.raises(InputError):
        saturate_pointed(alpha, ext.tau, ClassId.FO)


def test_structural_invariants_universal():
    for nfas in small_instances(8, seed=101):
        ext = rm_from_multiset(nfas)
        triv = rm_trivial_imprint(ext.tau)
        for cid in (ClassId.BSIGMA1, ClassId.FO):
            got = saturate_universal(ext.tau, cid)
            assert got.check_downward_closed()
            assert got.check_submonoid()
            assert got.check_contains(triv.members)
        aug = rm_alphabet_augment(ext.tau)
        got = saturate_universal(aug.tau, ClassId.FO2)
        assert got.check_downward_closed()
        assert got.check_submonoid()
        assert got.check_contains(rm_trivial_imprint(aug.tau).members)


def test_structural_invariants_pointed():
    rng = random.Random(55)
    for nfas in small_instances(6, seed=77):
        target = random_nfa(rng, AB, 2)
        alpha, _ = transition_monoid(target)
        ext = rm_from_multiset(nfas)
        p1 = saturate_pointed(alpha, ext.tau, ClassId.SIGMA1)
        assert p1.check_downward_closed()
        assert p1.check_submonoid()
        assert p1.check_contains(rm_trivial_imprint(ext.tau, alpha).members)
        aug = rm_alphabet_augment(ext.tau)
        p2 = saturate_pointed(alpha, aug.tau, ClassId.SIGMA2)
        assert p2.check_downward_closed()
        assert p2.check_submonoid()


def test_sigma1_rule_element_present():
    ext = rm_from_multiset([nfa_of("b+", "ab")])
    alpha, _ = transition_monoid(nfa_of("a+", "ab"))
    got = saturate_pointed(alpha, ext.tau, ClassId.SIGMA1)
    assert (alpha.identity, ext.tau.image_of_star("ab")) in got


def test_determinism_under_reversed_worklist():
    for nfas in small_instances(5, seed=5):
        ext = rm_from_multiset(nfas)
        a = saturate_universal(ext.tau, ClassId.BSIGMA1, lifo=False)
        b = saturate_universal(ext.tau, ClassId.BSIGMA1, lifo=True)
        assert a.members == b.members
        aug = rm_alphabet_augment(ext.tau)
        a2 = saturate_universal(aug.tau, ClassId.FO2, lifo=False)
        b2 = saturate_universal(aug.tau, ClassId.FO2, lifo=True)
        assert a2.members == b2.members


def test_class_chain_monotone():
    for nfas in small_instances(10, seed=23):
        ext = rm_from_multiset(nfas)
        tau = ext.tau
        i_at = at_imprint(tau)
        i_fo = saturate_universal(tau, ClassId.FO)
        i_bs1 = saturate_universal(tau, ClassId.BSIGMA1)
        aug = rm_alphabet_augment(tau)
        i_fo2 = imprint_pullback(aug, saturate_universal(aug.tau, ClassId.FO2))
        assert i_fo.members <= i_fo2.members
        assert i_fo.members <= i_bs1.members
        assert i_fo2.members <= i_at.members
        assert i_bs1.members <= i_at.members


def test_pointed_chain_sigma2_below_sigma1():
    rng = random.Random(31)
    for nfas in small_instances(6, seed=41):
        target = random_nfa(rng, AB, 2)
        alpha, _ = transition_monoid(target)
        ext = rm_from_multiset(nfas)
        p1 = saturate_pointed(alpha, ext.tau, ClassId.SIGMA1)
        aug = rm_alphabet_augment(ext.tau)
        p2raw = saturate_pointed(alpha, aug.tau, ClassId.SIGMA2)
        p2 = imprint_pullback(aug, p2raw)
        assert p2.members <= p1.members


def test_fixpoint_minimality_small_instance():
    ext = rm_from_multiset([nfa_of("a+", "ab")])
    tau = ext.tau
    sr = tau.semiring
    got = saturate_universal(tau, ClassId.BSIGMA1)
    assert len(got) <= 30
    seeds = set(rm_trivial_imprint(tau).members)
    for mask in range(4):
        seeds.add(sr.idempotent_power(tau.image_of_exact(AB.from_mask(mask))))
    members = got.members
    for x in members - seeds:
        derivable = False
        rest = members - {x}
        for y in rest:
            if sr.leq(x, y):
                derivable = True
                break
        if not derivable:
            for a in rest:
                for b in rest:
                    if sr.mul(a, b) == x:
                        derivable = True
                        break
                if derivable:
                    break
        assert derivable, f"{x} is not derivable: fixpoint not minimal"


def test_at_imprint_scopes():
    langs = [nfa_of("(ab)+", "abc"), nfa_of("b(ab)+", "abc"), nfa_of("c(ac)+", "abc")]
    ext = rm_from_multiset(langs)
    universal = at_imprint(ext.tau)
    masks = {ext.index_set(r) for r in universal.maximal_elements()}
    closed = set()
    for m in masks:
        sub = m
        while True:
            closed.add(sub)
            if sub == 0:
                break
            sub = (sub - 1) & m
    assert closed == {0b000, 0b001, 0b010, 0b011, 0b100}
    scoped = at_imprint(ext.tau, scope=nfa_of("%empty", "abc"))
    assert scoped.members == {ext.tau.semiring.zero}
    # language scope is contained in the universal imprint
    scoped2 = at_imprint(ext.tau, scope=nfa_of("(ab)+", "abc"))
    assert scoped2.members <= universal.members


def test_concatenation_compatibility_via_at():
    rng = random.Random(63)
    ext = rm_from_multiset([nfa_of("a+", "ab"), nfa_of("(ab)+", "ab")])
    tau = ext.tau
    sr = tau.semiring
    for _ in range(10):
        l1 = regex_to_nfa(random_regex(rng, "ab", 2), AB)
        l2 = regex_to_nfa(random_regex(rng, "ab", 2), AB)
        i1 = at_imprint(tau, scope=l1)
        i2 = at_imprint(tau, scope=l2)
        i12 = at_imprint(tau, scope=nfa_concat(l1, l2))
        for r1 in i1.maximal_elements():
            for r2 in i2.maximal_elements():
                assert sr.mul(r1, r2) in i12.members


def test_decide_universal_examples():
    # a multiset containing the empty language is always coverable
    ext = rm_from_multiset([nfa_of("%empty", "ab")])
    dec = decide_universal_covering(ext, ClassId.AT)
    assert dec.coverable
    # target meeting the whole multiset is never coverable
    items = [nfa_of("a+", "ab"), nfa_of("a+|b+", "ab")]
    ext = rm_from_multiset(items)
    dec = decide_universal_covering(ext, ClassId.AT, target_index=0)
    assert not dec.coverable
    for cid in (ClassId.BSIGMA1, ClassId.FO, ClassId.FO2):
        assert not decide_universal_covering(ext, cid, target_index=0).coverable


def test_decide_remark_instances():
    l, l1, l2 = nfa_of("a+|b+", "abc"), nfa_of("b+|c+", "abc"), nfa_of("c+|a+", "abc")
    ok = decide_universal_covering(rm_from_multiset([l, l1, l2]), ClassId.AT, target_index=0)
    assert ok.coverable
    bad1 = decide_universal_covering(rm_from_multiset([l, l1]), ClassId.AT, target_index=0)
    bad2 = decide_universal_covering(rm_from_multiset([l, l2]), ClassId.AT, target_index=0)
    assert not bad1.coverable and not bad2.coverable
    assert 0b1 in bad1.noncoverable_masks


def test_decide_pointed_examples():
    # empty target is vacuously coverable
    empty = nfa_of("%empty", "ab")
    alpha, acc = transition_monoid(empty)
    assert acc == frozenset()
    ext = rm_from_multiset([nfa_of("a+", "ab")])
    dec = decide_pointed_covering(alpha, acc, ext, ClassId.SIGMA1)
    assert dec.coverable
    # a+ vs b+ separable; a+ vs its superword closure not
    alpha, acc = transition_monoid(nfa_of("a+", "ab"))
    ext = rm_from_multiset([nfa_of("b+", "ab")])
    assert decide_pointed_covering(alpha, acc, ext, ClassId.SIGMA1).coverable
    ext = rm_from_multiset([nfa_of("(a|b)*a(a|b)*", "ab")])
    assert not decide_pointed_covering(alpha, acc, ext, ClassId.SIGMA1).coverable


def test_sigma1_matches_upward_oracle_on_random_pairs():
    rng = random.Random(2024)
    for _ in range(25):
        l1 = regex_to_nfa(random_regex(rng, "ab", 3), AB)
        l2 = regex_to_nfa(random_regex(rng, "ab", 3), AB)
        alpha, acc = transition_monoid(l1)
        ext = rm_from_multiset([l2])
        got = decide_pointed_covering(alpha, acc, ext, ClassId.SIGMA1).coverable
        want = is_empty(nfa_intersection(upward_closure(l1), l2))
        assert got == want


def test_separation_as_covering_consistency():
    # singleton multiset decisions are exactly two-language separability (AT)
    rng = random.Random(99)
    for _ in range(10):
        l1 = regex_to_nfa(random_regex(rng, "ab", 2), AB)
        l2 = regex_to_nfa(random_regex(rng, "ab", 2), AB)
        ext = rm_from_multiset([l1, l2])
        dec = decide_universal_covering(ext, ClassId.AT, target_index=0)
        # oracle: separable in AT iff no atom meets both languages
        sep = True
        for mask in range(4):
            from regcov import alphabet_exact
            atom = alphabet_exact(AB, AB.from_mask(mask))
            if not is_empty(nfa_intersection(atom, l1)) and \
               not is_empty(nfa_intersection(atom, l2)):
                sep = False
        assert dec.coverable == sep


def test_at_imprint_single_letter_atoms():
    ext = rm_from_multiset([nfa_of("(aa)*", "a")])
    tau = ext.tau
    imp = at_imprint(tau)
    sr = tau.semiring
    want = {sr.zero}
    for image in (tau.eval_word(""), tau.image_of_exact("a")):
        want.update(sr.downset(image))
    assert imp.members == want
