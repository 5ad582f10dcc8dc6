"""Closed expression language for transfinite words.

A word expression denotes a word over a countable linear order with finitely
many letters from each summand.  Expressions are built from

* ``e``                       the empty word
* ``j:g``                     a single letter
* ``( a b ... )``             concatenation (ordered sum of index orders)
* ``omega[diag s t R]``       blocks n = 0, 1, 2, ... ; block n is the letter
                              ``(s + n*t) : R(n)``
* ``omega*[diag s t R]``      the same blocks in the order ..., 2, 1, 0

where the recipe ``R`` is ``const g`` or ``cycle g1 ... gm``.  Since ``t >= 1``
every summand is hit at most once per block, so each projection to a finite
level only sees finitely many letters and is computable.

Letters inside expressions hold group-independent literals, so expressions
can be built, inverted and serialized without a wedge configuration.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .freeprod import FiniteWord, Letter, bonding, reduce
from .summands import (
    GroupError,
    Literal,
    ParseError,
    WedgeConfig,
    format_literal,
    negate_literal,
    parse_literal,
    power_literal,
)


class ExprError(ValueError):
    """Malformed word expression (zero step, identity letter, ...)."""


# -- recipes and block rules ------------------------------------------------


@dataclass(frozen=True)
class Recipe:
    kind: str  # const | cycle | pow
    elems: tuple

    def __post_init__(self):
        if self.kind not in ("const", "cycle", "pow"):
            raise ExprError(f"unknown recipe {self.kind!r}")
        if not self.elems or (self.kind != "cycle" and len(self.elems) != 1):
            raise ExprError(f"recipe {self.kind} has wrong number of elements")

    def at(self, n: int) -> Literal:
        if self.kind == "const":
            return self.elems[0]
        if self.kind == "cycle":
            return self.elems[n % len(self.elems)]
        return power_literal(self.elems[0], n + 1)

    def inverted(self) -> "Recipe":
        return Recipe(self.kind, tuple(negate_literal(g) for g in self.elems))

    def format(self) -> str:
        return " ".join([self.kind] + [format_literal(g) for g in self.elems])


@dataclass(frozen=True)
class BlockRule:
    start: int
    step: int
    recipe: Recipe

    def index(self, n: int) -> int:
        return self.start + n * self.step

    def letter(self, n: int) -> tuple:
        return self.index(n), self.recipe.at(n)

    def blocks_upto(self, k: int) -> range:
        """Block numbers whose summand index is <= k (needs step >= 1)."""
        if k < self.start:
            return range(0)
        return range((k - self.start) // self.step + 1)

    def hits(self, j: int) -> Optional[int]:
        """Block number landing in summand ``j``, if any."""
        if j < self.start or (j - self.start) % self.step:
            return None
        return (j - self.start) // self.step

    def inverted(self) -> "BlockRule":
        return BlockRule(self.start, self.step, self.recipe.inverted())

    def format(self) -> str:
        return f"diag {self.start} {self.step} {self.recipe.format()}"


# -- expression nodes -------------------------------------------------------


class WordExpr:
    __slots__ = ()


@dataclass(frozen=True)
class Empty(WordExpr):
    pass


@dataclass(frozen=True)
class Lit(WordExpr):
    summand: int
    elem: Literal

    def __post_init__(self):
        if not isinstance(self.summand, int) or self.summand < 1:
            raise ExprError(f"summand index {self.summand!r} must be positive")


@dataclass(frozen=True)
class Concat(WordExpr):
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))


def _check_rule(rule: BlockRule) -> None:
    if rule.start < 1:
        raise ExprError(f"block rule start {rule.start} must be a positive index")
    if rule.step < 1:
        raise ExprError("block rule step must be >= 1 (per-summand finiteness)")
    if rule.recipe.kind == "pow":
        raise ExprError("pow recipes would put unboundedly many letters in play; use const or cycle")


@dataclass(frozen=True)
class OmegaProd(WordExpr):
    rule: BlockRule

    def __post_init__(self):
        _check_rule(self.rule)


@dataclass(frozen=True)
class OmegaStarProd(WordExpr):
    rule: BlockRule

    def __post_init__(self):
        _check_rule(self.rule)


EMPTY = Empty()


def lit(j: int, g) -> Lit:
    return Lit(j, g)


def concat(*parts: WordExpr) -> Concat:
    return Concat(parts)


def omega(start: int, step: int, kind: str, *elems) -> OmegaProd:
    return OmegaProd(BlockRule(start, step, Recipe(kind, elems)))


def omega_star(start: int, step: int, kind: str, *elems) -> OmegaStarProd:
    return OmegaStarProd(BlockRule(start, step, Recipe(kind, elems)))


def from_word(w: FiniteWord) -> WordExpr:
    """Expression spelling a finite word (canonical elements double as literals)."""
    if not w.letters:
        return EMPTY
    parts = tuple(Lit(j, g) for j, g in w.letters)
    return parts[0] if len(parts) == 1 else Concat(parts)


# -- evaluation -------------------------------------------------------------


def iter_letters(w: WordExpr, k: int) -> Iterator[tuple]:
    """Letters ``(j, literal)`` of ``w`` with ``j <= k``, in word order."""
    if isinstance(w, Empty):
        return
    if isinstance(w, Lit):
        if w.summand <= k:
            yield w.summand, w.elem
    elif isinstance(w, Concat):
        for p in w.parts:
            yield from iter_letters(p, k)
    elif isinstance(w, OmegaProd):
        for n in w.rule.blocks_upto(k):
            yield w.rule.letter(n)
    elif isinstance(w, OmegaStarProd):
        for n in reversed(w.rule.blocks_upto(k)):
            yield w.rule.letter(n)
    else:
        raise ExprError(f"not a word expression: {w!r}")


def _normalize_letter(j: int, g: Literal, cfg: WedgeConfig) -> Letter:
    spec = cfg.summand(j)
    try:
        elem = spec.normalize(g)
    except GroupError as exc:
        raise ExprError(f"letter {j}:{format_literal(g)}: {exc}") from None
    if spec.is_identity(elem):
        raise ExprError(f"letter {j}:{format_literal(g)} is the identity of summand {j}")
    return Letter(j, elem)


def project_expr(w: WordExpr, k: int, cfg: WedgeConfig) -> FiniteWord:
    """Reduced projection of ``w`` onto summands ``1..k``."""
    if k < 0:
        raise ExprError(f"level {k} is negative")
    return reduce([_normalize_letter(j, g, cfg) for j, g in iter_letters(w, k)], cfg)


def validate_expr(w: WordExpr, cfg: WedgeConfig) -> WordExpr:
    """Check every letter the expression can produce is a non-identity element."""
    for node in _walk(w):
        if isinstance(node, Lit):
            _normalize_letter(node.summand, node.elem, cfg)
        elif isinstance(node, (OmegaProd, OmegaStarProd)):
            rule = node.rule
            for j in cfg.explicit:
                n = rule.hits(j)
                if n is not None:
                    _normalize_letter(j, rule.recipe.at(n), cfg)
            # every summand outside the explicit map uses the default template
            probe = WedgeConfig({}, cfg.default)
            for n in range(len(rule.recipe.elems)):
                _normalize_letter(1, rule.recipe.at(n), probe)
    return w


def _walk(w: WordExpr) -> Iterator[WordExpr]:
    yield w
    if isinstance(w, Concat):
        for p in w.parts:
            yield from _walk(p)


def horizon(w: WordExpr) -> int:
    """Largest summand index that is explicit in the expression.

    Lit indices and the starting index of every block rule count; above the
    horizon only block rules contribute letters.
    """
    out = 0
    for node in _walk(w):
        if isinstance(node, Lit):
            out = max(out, node.summand)
        elif isinstance(node, (OmegaProd, OmegaStarProd)):
            out = max(out, node.rule.start)
    return out


def is_finite(w: WordExpr) -> bool:
    return not any(isinstance(n, (OmegaProd, OmegaStarProd)) for n in _walk(w))


def count_in_summand(w: WordExpr, j: int) -> int:
    """Number of G_j letters, computed from the structure alone."""
    total = 0
    for node in _walk(w):
        if isinstance(node, Lit):
            total += node.summand == j
        elif isinstance(node, (OmegaProd, OmegaStarProd)):
            total += node.rule.hits(j) is not None
    return total


def letters_in_summand(w: WordExpr, j: int, cfg: WedgeConfig) -> list:
    return [_normalize_letter(i, g, cfg).elem for i, g in iter_letters(w, j) if i == j]


def to_word(w: WordExpr, cfg: WedgeConfig) -> FiniteWord:
    """The finite word denoted by a block-free expression."""
    if not is_finite(w):
        raise ExprError("expression contains infinite blocks")
    return project_expr(w, horizon(w), cfg)


@dataclass(frozen=True)
class LevelAgreement:
    agree: bool
    level: int

    def __str__(self):
        if self.agree:
            return f"agree-through-{self.level}"
        return f"first-difference-at {self.level}"


def equal_up_to(w: WordExpr, v: WordExpr, K: int, cfg: WedgeConfig) -> LevelAgreement:
    """Compare projections at levels 1..K.

    A difference is a proof of inequality; agreement through K proves nothing
    beyond level K.
    """
    for k in range(1, K + 1):
        if project_expr(w, k, cfg) != project_expr(v, k, cfg):
            return LevelAgreement(False, k)
    return LevelAgreement(True, K)


def multiply_expr(u: WordExpr, v: WordExpr) -> WordExpr:
    return Concat((u, v))


def invert_expr(u: WordExpr) -> WordExpr:
    if isinstance(u, Empty):
        return u
    if isinstance(u, Lit):
        return Lit(u.summand, negate_literal(u.elem))
    if isinstance(u, Concat):
        return Concat(tuple(invert_expr(p) for p in reversed(u.parts)))
    if isinstance(u, OmegaProd):
        return OmegaStarProd(u.rule.inverted())
    if isinstance(u, OmegaStarProd):
        return OmegaProd(u.rule.inverted())
    raise ExprError(f"not a word expression: {u!r}")


# -- terminal analysis ------------------------------------------------------


class Terminal(enum.Enum):
    NO_MAXIMUM = "none"
    EMPTY = "empty-word"


def _flatten(w: WordExpr) -> list:
    if isinstance(w, Empty):
        return []
    if isinstance(w, Concat):
        return [x for p in w.parts for x in _flatten(p)]
    return [w]


def terminal_summand(w: WordExpr, cfg: WedgeConfig) -> Union[int, Terminal]:
    """Summand of the order-maximal letter, after reducing the finite right end.

    The trailing run of literal letters is reduced; if it sits against an
    ``omega*`` block, enough of that block's final letters are pulled in to
    absorb every possible cancellation.  A trailing ``omega`` block has no
    maximal letter.  Cancellation that crosses an infinite block (as in
    ``w * w^-1`` with ``w`` infinite) is not detected.
    """
    items = _flatten(w)
    tail = []
    while items and isinstance(items[-1], Lit):
        node = items.pop()
        tail.append(_normalize_letter(node.summand, node.elem, cfg))
    tail.reverse()
    tail_word = reduce(tail, cfg)
    if not items:
        return tail_word.last().summand if tail_word else Terminal.EMPTY
    block = items[-1]
    if isinstance(block, OmegaProd):
        return tail_word.last().summand if tail_word else Terminal.NO_MAXIMUM
    rule = block.rule
    need = len(tail_word) + 1
    ends = [_normalize_letter(*rule.letter(n), cfg) for n in reversed(range(need))]
    merged = reduce(ends + list(tail_word.letters), cfg)
    return merged.last().summand


def in_nt_infinity(w: WordExpr, j: int, cfg: WedgeConfig) -> bool:
    return terminal_summand(w, cfg) != j


def check_coherence(w: WordExpr, k: int, cfg: WedgeConfig) -> bool:
    """Bonding the level k+1 projection gives the level k projection."""
    return bonding(project_expr(w, k + 1, cfg), k + 1, cfg) == project_expr(w, k, cfg)


# -- text syntax ------------------------------------------------------------

_TOKEN_RE = re.compile(r"omega\*\[|omega\[|[()\]]|[^\s()\[\]]+")


def tokenize(text: str, line_offset: int = 0) -> list:
    """Tokens as ``(text, line, col)`` triples."""
    out = []
    for lineno, line in enumerate(text.splitlines(), 1 + line_offset):
        code = line.split("#", 1)[0]
        for m in _TOKEN_RE.finditer(code):
            out.append((m.group(0), lineno, m.start() + 1))
    return out


class _Parser:
    def __init__(self, tokens: list):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self, what: str = "token"):
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else ("", 1, 1)
            raise ParseError(f"unexpected end of input, expected {what}", last[1], last[2] + len(last[0]))
        self.pos += 1
        return tok

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def starts_expr(self) -> bool:
        tok = self.peek()
        return tok is not None and (tok[0] in ("(", "e", "omega[", "omega*[") or ":" in tok[0])

    def expr(self) -> WordExpr:
        text, line, col = self.next("expression")
        if text == "e":
            return EMPTY
        if text == "(":
            parts = []
            while True:
                tok = self.peek()
                if tok is None:
                    raise ParseError("unclosed '('", line, col)
                if tok[0] == ")":
                    self.pos += 1
                    return Concat(tuple(parts))
                parts.append(self.expr())
        if text in ("omega[", "omega*["):
            rule = self.rule(line, col)
            close = self.next("']'")
            if close[0] != "]":
                raise ParseError(f"expected ']', got {close[0]!r}", close[1], close[2])
            try:
                return OmegaProd(rule) if text == "omega[" else OmegaStarProd(rule)
            except ExprError as exc:
                raise ParseError(str(exc), line, col) from None
        if ":" in text:
            return self.letter(text, line, col)
        raise ParseError(f"unexpected token {text!r}", line, col)

    def letter(self, text: str, line: int, col: int) -> Lit:
        head, _, tail = text.partition(":")
        if not head.isdigit() or int(head) < 1:
            raise ParseError(f"bad letter {text!r}, expected j:g", line, col)
        try:
            return Lit(int(head), parse_literal(tail))
        except ValueError as exc:
            raise ParseError(str(exc), line, col + len(head) + 1) from None

    def integer(self, what: str) -> int:
        text, line, col = self.next(what)
        if not re.fullmatch(r"[+-]?\d+", text):
            raise ParseError(f"expected {what}, got {text!r}", line, col)
        return int(text)

    def recipe(self) -> Recipe:
        text, line, col = self.next("recipe")
        if text not in ("const", "cycle", "pow"):
            raise ParseError(f"unknown recipe {text!r}", line, col)
        elems = []
        while self.peek() is not None and self.peek()[0] not in ("]",) and not self._keyword():
            tok, tline, tcol = self.next()
            try:
                elems.append(parse_literal(tok))
            except ValueError as exc:
                raise ParseError(str(exc), tline, tcol) from None
            if text != "cycle":
                break
        try:
            return Recipe(text, tuple(elems))
        except ExprError as exc:
            raise ParseError(str(exc), line, col) from None

    def _keyword(self) -> bool:
        return self.peek()[0] in _KEYWORDS

    def rule(self, line: int, col: int) -> BlockRule:
        text, tline, tcol = self.next("'diag'")
        if text != "diag":
            raise ParseError(f"expected 'diag', got {text!r}", tline, tcol)
        start, step = self.positive("start index"), self.positive("step")
        return BlockRule(start, step, self.recipe())

    def positive(self, what: str) -> int:
        tok = self.peek()
        n = self.integer(what)
        if n < 1:
            raise ParseError(f"{what} must be >= 1, got {n}", tok[1], tok[2])
        return n


_KEYWORDS = {
    "tail", "limit", "summand", "escape", "members", "coeffs", "iso",
    "diag", "affine", "empty", "const", "cycle", "pow",
}


def parse_expr(text: str) -> WordExpr:
    """Parse an expression; several top-level terms form a concatenation."""
    tokens = tokenize(text)
    p = _Parser(tokens)
    parts = []
    while not p.at_end():
        parts.append(p.expr())
    if not parts:
        return EMPTY
    if len(parts) == 1:
        return parts[0]
    return Concat(tuple(parts))


def format_expr(w: WordExpr) -> str:
    if isinstance(w, Empty):
        return "e"
    if isinstance(w, Lit):
        return f"{w.summand}:{format_literal(w.elem)}"
    if isinstance(w, Concat):
        return "( " + " ".join([format_expr(p) for p in w.parts] + [")"])
    if isinstance(w, OmegaProd):
        return f"omega[{w.rule.format()}]"
    if isinstance(w, OmegaStarProd):
        return f"omega*[{w.rule.format()}]"
    raise ExprError(f"not a word expression: {w!r}")
