from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from shrinkwedge.freeprod import Letter, word
from shrinkwedge.summands import SummandSpec, WedgeConfig, load_config
from shrinkwedge.transfinite import BlockRule, Concat, Empty, Lit, OmegaProd, OmegaStarProd, Recipe

DATA = Path(__file__).parent / "data"

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")

INTEGERS = WedgeConfig()
CYCLIC2 = WedgeConfig({}, SummandSpec.cyclic(2))


def mixed_config() -> WedgeConfig:
    """Integer default with cyclic 3 at index 2 and cyclic 2 at index 3."""
    return load_config(DATA / "mixed.cfg")


def s3_config() -> WedgeConfig:
    """Integer default with the symmetric group S3 at index 2."""
    return load_config(DATA / "s3.cfg")


@pytest.fixture(scope="session")
def mixed():
    return mixed_config()


def elements(spec: SummandSpec, nonidentity: bool = False):
    if spec.is_finite:
        els = spec.elements()
        return st.sampled_from(els[1:] if nonidentity else els)
    if spec.kind == "integer":
        ints = st.integers(-4, 4)
        return ints.filter(bool) if nonidentity else ints
    pairs = st.tuples(*[st.integers(-3, 3)] * spec.n)
    return pairs.filter(any) if nonidentity else pairs


@st.composite
def letters(draw, cfg: WedgeConfig, top: int = 4, nonidentity: bool = True):
    j = draw(st.integers(1, top))
    return Letter(j, draw(elements(cfg.summand(j), nonidentity)))


def raw_words(cfg: WedgeConfig, top: int = 4, max_size: int = 12, nonidentity: bool = False):
    return st.lists(letters(cfg, top, nonidentity), max_size=max_size)


def words(cfg: WedgeConfig, top: int = 4, max_size: int = 12):
    return raw_words(cfg, top, max_size).map(lambda ls: word(ls, cfg))


def _literal(spec: SummandSpec, g):
    return spec.format(g) if spec.kind == "table" else g


@st.composite
def block_rules(draw, cfg: WedgeConfig, start_max: int = 4):
    start = draw(st.integers(1, start_max))
    step = draw(st.integers(1, 2))
    # +-1 is non-identity in every integer or cyclic summand the rule may hit
    elems = st.sampled_from([1, -1]) if cfg.default.kind == "integer" else elements(cfg.default, True)
    if draw(st.booleans()):
        return BlockRule(start, step, Recipe("const", (draw(elems),)))
    return BlockRule(start, step, Recipe("cycle", tuple(draw(st.lists(elems, min_size=1, max_size=3)))))


def exprs(cfg: WedgeConfig, top: int = 5, omegas: bool = True):
    """Word expressions over ``cfg``; omega rules use integer or default-summand literals."""

    def lit_of(letter):
        return Lit(letter.summand, _literal(cfg.summand(letter.summand), letter.elem))

    leaves = [st.just(Empty()), letters(cfg, top).map(lit_of)]
    if omegas:
        leaves += [block_rules(cfg).map(OmegaProd), block_rules(cfg).map(OmegaStarProd)]
    leaves = st.one_of(*leaves)
    return st.recursive(leaves, lambda kids: st.lists(kids, min_size=1, max_size=4).map(lambda ps: Concat(tuple(ps))), max_leaves=8)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.RESULTS[n])
