from __future__ import annotations

from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from shrinkwedge.freeprod import (
    EMPTY,
    FiniteWord,
    Letter,
    alphabet,
    bonding,
    decompose_nt,
    embed,
    enumerate_nt,
    enumerate_reduced,
    format_word,
    invert,
    is_reduced,
    multiply,
    parse_word,
    project,
    reduce,
    truncate,
    word,
)
from shrinkwedge.summands import GroupError, ParseError, SummandSpec, WedgeConfig

from conftest import CYCLIC2, INTEGERS, mixed_config, raw_words, s3_config, words
from oracles import normal_forms

MIXED = mixed_config()
S3 = s3_config()


def w(text, cfg=INTEGERS):
    return parse_word(text, cfg)


def test_reduce_examples():
    assert reduce([Letter(2, 5), Letter(2, -5)], INTEGERS) == EMPTY
    assert reduce([Letter(1, 1), Letter(1, 1)], CYCLIC2) == EMPTY
    assert reduce([Letter(1, 1), Letter(2, 1), Letter(2, -1), Letter(1, 2)], INTEGERS) == w("1:3")


def test_reduce_example_matches_rewriting_oracle():
    raw = ((1, 1), (2, 1), (2, -1), (1, 2))
    assert normal_forms(raw, INTEGERS, {}) == {((1, 3),)}


def test_multiply_invert_examples():
    assert multiply(w("1:1"), w("1:-1"), INTEGERS) == EMPTY
    assert multiply(w("1:1 2:1"), w("2:-1 3:1"), INTEGERS) == w("1:1 3:1")
    assert invert(w("1:1 2:1"), INTEGERS) == w("2:-1 1:-1")


def test_project_and_bonding_examples():
    assert project(w("1:1 2:1 1:1"), {1}, INTEGERS) == w("1:2")
    assert project(w("2:1"), {1}, INTEGERS) == EMPTY
    x = w("1:1 3:2 2:-1")
    assert project(x, {1, 2, 3, 4}, INTEGERS) == x
    assert bonding(w("1:1 3:1"), 3, INTEGERS) == w("1:1")
    assert bonding(EMPTY, 3, INTEGERS) == EMPTY
    assert bonding(w("3:1 1:1 3:-1"), 3, INTEGERS) == w("1:1")
    with pytest.raises(GroupError):
        bonding(w("4:1"), 3, INTEGERS)


def test_decompose_examples():
    d = decompose_nt(w("1:1 2:1"), 2, INTEGERS)
    assert (d.prefix, d.tail) == (w("1:1"), 1)
    d = decompose_nt(w("1:1 2:1"), 1, INTEGERS)
    assert (d.prefix, d.tail) == (w("1:1 2:1"), 0)
    d = decompose_nt(w("2:2"), 2, INTEGERS)
    assert (d.prefix, d.tail) == (EMPTY, 2)


def test_enumerate_nt_examples():
    assert enumerate_nt(1, 1, 4, CYCLIC2) == [EMPTY]
    assert enumerate_nt(2, 2, 1, CYCLIC2) == [EMPTY, w("1:1", CYCLIC2)]
    assert enumerate_nt(2, 1, 2, CYCLIC2) == [EMPTY, w("2:1", CYCLIC2), w("1:1 2:1", CYCLIC2)]


def test_enumerate_needs_alphabet_for_infinite_summands():
    with pytest.raises(GroupError):
        enumerate_nt(2, 1, 2, INTEGERS)
    got = enumerate_nt(2, 1, 1, INTEGERS, {1: [1, -1], 2: [1]})
    assert got == [EMPTY, w("2:1")]


@given(raw_words(MIXED, nonidentity=False, max_size=10))
def test_reduce_is_idempotent_and_reduced(raw):
    r = reduce(raw, MIXED)
    assert is_reduced(r, MIXED)
    assert reduce(r.letters, MIXED) == r


@given(raw_words(MIXED, top=3, max_size=7))
def test_reduce_matches_rewriting(raw):
    forms = normal_forms(tuple((l.summand, l.elem) for l in raw), MIXED, {})
    assert len(forms) == 1
    assert forms == {tuple(reduce(raw, MIXED).letters)}


@pytest.mark.parametrize("cfg", [INTEGERS, MIXED, S3], ids=["integer", "mixed", "s3"])
@given(data=st.data())
def test_group_laws(cfg, data):
    u, v, x = (data.draw(words(cfg)) for _ in range(3))
    assert multiply(multiply(u, v, cfg), x, cfg) == multiply(u, multiply(v, x, cfg), cfg)
    assert multiply(u, invert(u, cfg), cfg) == EMPTY
    assert multiply(u, EMPTY, cfg) == u


@given(u=words(MIXED, top=6), v=words(MIXED, top=6), F=st.sets(st.integers(1, 6)))
def test_project_is_homomorphism(u, v, F):
    lhs = project(multiply(u, v, MIXED), F, MIXED)
    assert lhs == multiply(project(u, F, MIXED), project(v, F, MIXED), MIXED)


@given(u=words(MIXED, top=6), k=st.integers(1, 6))
def test_bonding_composes(u, k):
    top = truncate(u, k + 1, MIXED)
    assert bonding(top, k + 1, MIXED) == truncate(u, k, MIXED)
    if k >= 2:
        assert bonding(bonding(top, k + 1, MIXED), k, MIXED) == truncate(u, k - 1, MIXED)


@given(u=words(S3, top=4), j=st.integers(1, 4))
def test_decompose_round_trip(u, j):
    d = decompose_nt(u, j, S3)
    assert d.prefix.last() is None or d.prefix.last().summand != j
    assert multiply(d.prefix, embed(j, d.tail, S3), S3) == u


@pytest.mark.parametrize("k, j", [(2, 1), (2, 2), (3, 2), (3, 3)])
def test_decompose_is_a_bijection_onto_nt_times_group(k, j):
    cfg = WedgeConfig({2: SummandSpec.cyclic(3)}, SummandSpec.cyclic(2))
    nt = set(enumerate_nt(k, j, 4, cfg))
    seen = {}
    for x in enumerate_reduced(k, 4, cfg):
        d = decompose_nt(x, j, cfg)
        assert d.prefix in nt
        key = (d.prefix, d.tail)
        assert key not in seen
        seen[key] = x
    # every representative of length <= 3 pairs with every element of G_j
    for alpha in (a for a in nt if len(a) <= 3):
        for g in cfg.summand(j).elements():
            assert (alpha, g) in seen


def test_enumerate_reduced_exhaustive_count():
    # over k cyclic-2 summands: 1 + k + k(k-1) + k(k-1)^2 + ...
    for k, n in product([1, 2, 3], [0, 1, 2, 3]):
        expected = 1 + sum(k * (k - 1) ** (m - 1) for m in range(1, n + 1))
        assert len(enumerate_reduced(k, n, CYCLIC2)) == expected


def test_alphabet_skips_identity_and_duplicates():
    assert alphabet(1, INTEGERS, {1: [0, 2, 2, -1]}) == (2, -1)


def test_format_and_parse():
    assert format_word(EMPTY) == "e"
    x = w("2:a 3:1 2:c", S3)
    assert format_word(x, S3) == "2:a 3:1 2:c"
    assert parse_word(format_word(x, S3), S3) == x
    assert parse_word("e", INTEGERS) == EMPTY
    assert parse_word("1:1 e 1:-1", INTEGERS) == EMPTY


@pytest.mark.parametrize("text, col", [("1:1 x:2", 5), ("1:1 2:q", 7), ("0:1", 1), ("1:1  2:z", 8)])
def test_parse_errors_cite_column(text, col):
    with pytest.raises(ParseError) as info:
        parse_word(text, INTEGERS)
    assert (info.value.line, info.value.col) == (1, col)


def test_word_builder():
    assert word([(1, 1), (1, -1)], INTEGERS) == EMPTY
    assert word([(1, 1), (1, -1)]) == FiniteWord((Letter(1, 1), Letter(1, -1)))
