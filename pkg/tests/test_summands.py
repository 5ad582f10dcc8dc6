from __future__ import annotations

from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from shrinkwedge.summands import (
    GroupError,
    ParseError,
    SummandSpec,
    TableGroup,
    WedgeConfig,
    format_config,
    group_inv,
    group_mul,
    is_identity,
    parse_config,
)

from conftest import DATA, INTEGERS, elements, s3_config


def test_group_law_examples():
    assert group_mul(INTEGERS, 1, 2, 3) == 5
    assert group_mul(WedgeConfig({}, SummandSpec.cyclic(2)), 1, 1, 1) == 0
    assert group_mul(WedgeConfig({}, SummandSpec.cyclic(5)), 4, 3, 4) == 2
    assert group_inv(INTEGERS, 1, 4) == -4
    assert group_inv(WedgeConfig({}, SummandSpec.cyclic(2)), 1, 1) == 1
    assert is_identity(INTEGERS, 1, 0)


FINITE = [SummandSpec.cyclic(2), SummandSpec.cyclic(5), s3_config().summand(2)]


@pytest.mark.parametrize("spec", FINITE, ids=lambda s: s.describe())
def test_finite_group_axioms_exhaustive(spec):
    els = spec.elements()
    e = spec.identity
    for a, b, c in product(els, repeat=3):
        assert spec.mul(spec.mul(a, b), c) == spec.mul(a, spec.mul(b, c))
    for a in els:
        assert spec.mul(a, e) == a == spec.mul(e, a)
        assert spec.is_identity(spec.mul(a, spec.inv(a)))


@pytest.mark.parametrize("spec", [SummandSpec.integer(), SummandSpec.product(2)], ids=lambda s: s.describe())
@given(data=st.data())
def test_infinite_group_axioms_sampled(spec, data):
    a, b, c = (data.draw(elements(spec)) for _ in range(3))
    assert spec.mul(spec.mul(a, b), c) == spec.mul(a, spec.mul(b, c))
    assert spec.mul(a, spec.identity) == a
    assert spec.is_identity(spec.mul(a, spec.inv(a)))


def test_s3_is_non_abelian():
    spec = s3_config().summand(2)
    assert not spec.is_abelian
    assert spec.is_finite and len(spec.elements()) == 6


def test_trivial_groups_rejected():
    with pytest.raises(GroupError):
        SummandSpec.cyclic(1)
    with pytest.raises(GroupError):
        SummandSpec.from_table(TableGroup.parse("e\ne e\n"))


def test_bad_tables_rejected():
    with pytest.raises(GroupError, match="associative|inverse|identity"):
        TableGroup.parse("a b\na a a\nb a b\n")
    with pytest.raises(ParseError):
        TableGroup.parse("e a\ne e a\n")


def test_elements_are_checked():
    with pytest.raises(GroupError):
        SummandSpec.cyclic(3).check(3)
    with pytest.raises(GroupError):
        SummandSpec.integer().normalize("x")


def test_config_parse_and_round_trip():
    cfg = parse_config("default cyclic 2\nsummand 3 integer\nsummand 5 table s3.table\n", DATA)
    assert cfg.summand(1).describe() == "cyclic 2"
    assert cfg.summand(3).kind == "integer"
    assert not cfg.summand(5).is_abelian
    again = parse_config(format_config(cfg), DATA)
    assert again == cfg


def test_config_missing_default_means_integer():
    assert parse_config("summand 2 cyclic 4\n").summand(7).kind == "integer"


@pytest.mark.parametrize(
    "text, line",
    [
        ("default cyclic 2\ndefault integer\n", 2),
        ("summand 0 integer\n", 1),
        ("summand 2 integer\nsummand 2 cyclic 3\n", 2),
        ("\n\nbogus 1\n", 3),
        ("default cyclic 1\n", 1),
        ("default table missing.table\n", 1),
    ],
)
def test_config_errors_cite_line(text, line):
    with pytest.raises(ParseError) as info:
        parse_config(text, DATA)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}, col")


def test_unresolvable_index():
    with pytest.raises(GroupError):
        INTEGERS.summand(0)
