"""Semiring kinds, the canonical order and idempotent powers."""

import random

import pytest

from regcov import (Alphabet, MonoidMorphism, PowersetCapError,
                    RelationCapError, SemiringMorphism, alphabet_semiring,
                    powerset_semiring, product_semiring, relation_semiring,
                    sr_idempotent_power, sr_leq, validate_semiring)
from regcov.semiring import SubsetLattice, TableSemiring

Z2 = MonoidMorphism(2, 0, ((0, 1), (1, 0)), {"a": 1})


def test_powerset_z2_products():
    sr = powerset_semiring(Z2)
    g = 1 << 1  # {g}
    one = sr.one
    assert sr.mul(g, g) == 1 << 0          # {g}.{g} = {1}
    assert sr.mul(one | g, g) == (1 << 0) | (1 << 1)
    assert sr.mul(sr.zero, g) == sr.zero
    assert sr.mul(one, g) == g


def test_powerset_axioms_exhaustive():
    sr = powerset_semiring(Z2)
    assert validate_semiring(sr, range(1 << sr.nbits)) == []


def test_powerset_cap():
    big = MonoidMorphism(21, 0, tuple(tuple((i + j) % 21 for j in range(21)) for i in range(21)),
                         {"a": 1})
    with pytest.raises(PowersetCapError):
        powerset_semiring(big)


def test_relation_compose():
    sr = relation_semiring(2)
    r01 = sr.pair(0, 1)
    r10 = sr.pair(1, 0)
    assert sr.mul(r01, r10) == sr.pair(0, 0)
    assert sr.mul(sr.one, r01 | r10) == r01 | r10
    # brute-force: composition agrees with pair chasing on random relations
    rng = random.Random(2)
    for _ in range(50):
        x = rng.randrange(1 << 4)
        y = rng.randrange(1 << 4)
        want = 0
        for (i, j) in sr.pairs_of(x):
            for (j2, k) in sr.pairs_of(y):
                if j == j2:
                    want |= sr.pair(i, k)
        assert sr.mul(x, y) == want


def test_relation_axioms_and_cap():
    sr = relation_semiring(2)
    assert validate_semiring(sr, range(1 << 4), exhaustive_limit=16) == []
    with pytest.raises(RelationCapError):
        relation_semiring(7)


def test_alphabet_semiring():
    sr = alphabet_semiring(Alphabet("ab"))
    sa = sr.singleton(0b01)  # {{a}}
    sb = sr.singleton(0b10)  # {{b}}
    assert sr.mul(sa, sb) == sr.singleton(0b11)
    assert sr.mul(sr.one, sa | sb) == sa | sb
    assert validate_semiring(sr, range(1 << sr.nbits), exhaustive_limit=16) == []


def test_product_semiring():
    p = product_semiring([powerset_semiring(Z2), relation_semiring(2)])
    x = (1, p.parts[1].pair(0, 1))
    y = (2, p.parts[1].pair(1, 0))
    assert p.mul(x, y) == (p.parts[0].mul(1, 2), p.parts[1].pair(0, 0))
    assert p.leq(p.zero, x) and p.leq(x, p.add(x, y))
    assert not p.leq(x, y)
    # axioms on a sample
    elems = [p.zero, p.one, x, y, p.add(x, y)]
    assert validate_semiring(p, elems) == []
    single = product_semiring([powerset_semiring(Z2)])
    assert single.mul((1,), (2,)) == (powerset_semiring(Z2).mul(1, 2),)


def test_canonical_order():
    sr = powerset_semiring(Z2)
    for s in range(4):
        assert sr_leq(sr, sr.zero, s)
    # order is inclusion on powersets
    assert sr_leq(sr, 0b01, 0b11) and not sr_leq(sr, 0b11, 0b01)
    # antisymmetry on all pairs
    for x in range(4):
        for y in range(4):
            if sr_leq(sr, x, y) and sr_leq(sr, y, x):
                assert x == y


def test_order_compatibility():
    sr = relation_semiring(2)
    rng = random.Random(9)
    for _ in range(200):
        r1, r2 = sorted([rng.randrange(16), rng.randrange(16)])
        r2 |= r1
        s1, s2 = sorted([rng.randrange(16), rng.randrange(16)])
        s2 |= s1
        assert sr.leq(sr.add(r1, s1), sr.add(r2, s2))
        assert sr.leq(sr.mul(r1, s1), sr.mul(r2, s2))


def test_idempotent_power():
    sr = powerset_semiring(Z2)
    g = 1 << 1
    assert sr_idempotent_power(sr, g) == 1 << 0     # powers alternate {g},{1}
    e = sr.one
    assert sr_idempotent_power(sr, e) == e
    rng = random.Random(4)
    rel = relation_semiring(3)
    for _ in range(100):
        s = rng.randrange(1 << 9)
        w = sr_idempotent_power(rel, s)
        assert rel.mul(w, w) == w
        # w really is a power of s
        powers = set()
        cur = s
        while cur not in powers:
            powers.add(cur)
            cur = rel.mul(cur, s)
        assert w in powers


def test_downsets():
    sr = relation_semiring(2)
    x = sr.pair(0, 0) | sr.pair(1, 1)
    down = set(sr.downset(x))
    assert down == {0, sr.pair(0, 0), sr.pair(1, 1), x}
    assert sr.downset_size(x) == 4
    p = product_semiring([sr, sr])
    assert p.downset_size((x, sr.pair(0, 0))) == 8
    assert set(p.downset((x, 0))) == {(d, 0) for d in down}


def test_table_semiring_from_json():
    # two-element boolean semiring: OR / AND
    doc = {"size": 2, "add": [[0, 1], [1, 1]], "mul": [[0, 0], [0, 1]],
           "zero": 0, "one": 1}
    sr = TableSemiring.from_json(doc)
    assert validate_semiring(sr, sr.elements()) == []
    assert set(sr.downset(1)) == {0, 1}
    assert sr.idempotent_power(1) == 1


def test_morphism_monotone_and_compose():
    sr = powerset_semiring(Z2)
    lat = SubsetLattice(1)
    acc = 1 << 1
    d1 = SemiringMorphism(sr, lat, lambda s: 1 if s & acc else 0)
    rng = random.Random(21)
    for _ in range(100):
        x = rng.randrange(4)
        y = x | rng.randrange(4)
        assert lat.leq(d1.apply(x), d1.apply(y))
    d2 = SemiringMorphism(lat, lat, lambda s: s)
    assert d2.compose(d1).apply(0b10) == d1.apply(0b10)


def test_product_of_powersets_axioms_exhaustive():
    p = product_semiring([powerset_semiring(Z2), powerset_semiring(Z2)])
    elems = [(x, y) for x in range(4) for y in range(4)]
    assert validate_semiring(p, elems, exhaustive_limit=16) == []
