"""Piece equivalence, the partition automaton and template witnesses."""

import random

import pytest

from regcov import (Alphabet, equivalent, is_empty, is_piece,
                    nfa_intersection, nfa_union, pieces_upto, pt_partition,
                    regex_to_nfa, template_regex, template_unambiguous,
                    universal_language)
from regcov.pieces import bsigma1_template_witness, is_k_piecewise_testable

from helpers import words_upto

AB = Alphabet("ab")


def test_pieces_upto_brute_force():
    rng = random.Random(8)
    for _ in range(40):
        w = "".join(rng.choice("ab") for _ in range(rng.randint(0, 6)))
        k = rng.randint(0, 3)
        want = {u for u in words_upto("ab", k) if is_piece(u, w)}
        assert pieces_upto(w, k) == frozenset(want)


def test_pt_partition_k0():
    pa = pt_partition(0, AB)
    assert len(pa.states) == 1
    assert equivalent(pa.class_nfa(0), universal_language(AB))


def test_pt_partition_k1_classifies_by_alphabet():
    pa = pt_partition(1, AB)
    assert len(pa.states) == 4
    for w in words_upto("ab", 4):
        for v in words_upto("ab", 4):
            same = pa.state_of(w) == pa.state_of(v)
            assert same == (set(w) == set(v))


def test_pt_partition_is_piece_equivalence():
    pa = pt_partition(2, AB)
    for w in words_upto("ab", 4):
        for v in words_upto("ab", 4):
            same = pa.state_of(w) == pa.state_of(v)
            assert same == (pieces_upto(w, 2) == pieces_upto(v, 2))


def test_pt_partition_classes_partition_all_words():
    pa = pt_partition(2, AB)
    classes = pa.classes()
    union = classes[0]
    for cls in classes[1:]:
        union = nfa_union(union, cls)
    assert equivalent(union, universal_language(AB))
    for i, c1 in enumerate(classes):
        for c2 in classes[i + 1:]:
            assert is_empty(nfa_intersection(c1, c2))


def test_is_k_piecewise_testable():
    contains_a = regex_to_nfa(__import__("regcov").regex_parse("(a|b)*a(a|b)*", "ab"), AB)
    assert is_k_piecewise_testable(contains_a, 1)
    even_as = regex_to_nfa(__import__("regcov").regex_parse("(aa)*", "a"), Alphabet("a"))
    assert not is_k_piecewise_testable(even_as, 3)


def test_template_witness_epsilon():
    template, reg = bsigma1_template_witness("", 2, AB)
    assert template == ()
    nfa = regex_to_nfa(reg, AB)
    assert nfa.accepts("") and not nfa.accepts("a")


def test_template_witness_short_distinct_letters():
    ab3 = Alphabet("abc")
    template, reg = bsigma1_template_witness("abc", 2, ab3)
    assert template == ("a", "b", "c")
    assert regex_to_nfa(reg, ab3).accepts("abc")


def test_template_witness_power_word_collapses():
    n = 2
    w = "a" * (3 * (n + 2))
    template, reg = bsigma1_template_witness(w, n, AB)
    assert len(template) == 1
    (b, bset, c) = template[0]
    assert bset == frozenset("a") and b == "a" and c == "a"
    assert regex_to_nfa(reg, AB).accepts(w)


def test_template_witness_property():
    rng = random.Random(77)
    for _ in range(60):
        w = "".join(rng.choice("ab") for _ in range(rng.randint(0, 20)))
        n = rng.randint(1, 3)
        template, reg = bsigma1_template_witness(w, n, AB)
        assert template_unambiguous(template)
        bound = (n + 2) ** len(set(w)) - 1
        assert len(template) <= bound
        assert regex_to_nfa(reg, AB).accepts(w)


def test_template_regex_units():
    reg = template_regex(("a",), 1, AB)
    nfa = regex_to_nfa(reg, AB)
    assert nfa.accepts("a") and not nfa.accepts("aa")
    tri = template_regex((("a", frozenset("ab"), "b"),), 1, AB)
    nfa = regex_to_nfa(tri, AB)
    # needs marker a, one mixed block, marker b: "aabb" has a, then "ab", then b
    assert nfa.accepts("aabb")
    assert not nfa.accepts("ab")  # too short for a full block between markers
    assert not nfa.accepts("aaaa")  # no b at all


def test_template_witness_rejects_bad_input():
    with pytest.raises(ValueError):
        bsigma1_template_witness("ab", 0, AB)
    with pytest.raises(ValueError):
        bsigma1_template_witness("x", 1, AB)


def test_template_witness_adjacent_incomparable_triples():
    # both halves collapse into triples whose alphabets are incomparable;
    # the marker letters must then come from the alphabet differences
    abc = Alphabet("abc")
    w = "ac" * 6 + "ab" * 12
    template, reg = bsigma1_template_witness(w, 1, abc)
    assert template == (("a", frozenset("ac"), "c"), ("b", frozenset("ab"), "a"))
    assert template_unambiguous(template)
    assert regex_to_nfa(reg, abc).accepts(w)


def test_pt_partition_class_counts():
    assert [len(pt_partition(k, AB).states) for k in range(5)] == [1, 4, 16, 68, 312]
