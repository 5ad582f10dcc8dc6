"""Reduced-word arithmetic in finite free products G_1 * ... * G_k."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

from .summands import Element, GroupError, ParseError, WedgeConfig, format_literal, parse_literal


class Letter(NamedTuple):
    summand: int
    elem: Element


@dataclass(frozen=True)
class FiniteWord:
    letters: tuple = ()

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __bool__(self):
        return bool(self.letters)

    @property
    def summands(self) -> set:
        return {l.summand for l in self.letters}

    def max_summand(self) -> int:
        return max((l.summand for l in self.letters), default=0)

    def last(self) -> Optional[Letter]:
        return self.letters[-1] if self.letters else None


EMPTY = FiniteWord()


@dataclass(frozen=True)
class NtDecomposition:
    prefix: FiniteWord
    tail: Element


def word(letters: Iterable, cfg: Optional[WedgeConfig] = None) -> FiniteWord:
    """Build a word from ``(j, g)`` pairs, reducing it when ``cfg`` is given."""
    w = FiniteWord(tuple(Letter(j, g) for j, g in letters))
    return reduce(w, cfg) if cfg is not None else w


def is_reduced(w: FiniteWord, cfg: WedgeConfig) -> bool:
    prev = None
    for l in w.letters:
        if cfg.summand(l.summand).is_identity(l.elem) or l.summand == prev:
            return False
        prev = l.summand
    return True


def reduce(w, cfg: WedgeConfig) -> FiniteWord:
    """Normal form: drop identity letters and merge neighbours from one summand."""
    stack: list[Letter] = []
    for j, g in w:
        spec = cfg.summand(j)
        spec.check(g)
        if stack and stack[-1].summand == j:
            merged = spec.mul(stack[-1].elem, g)
            if spec.is_identity(merged):
                stack.pop()
            else:
                stack[-1] = Letter(j, merged)
        elif not spec.is_identity(g):
            stack.append(Letter(j, g))
    return FiniteWord(tuple(stack))


def multiply(u: FiniteWord, v: FiniteWord, cfg: WedgeConfig) -> FiniteWord:
    return reduce(u.letters + v.letters, cfg)


def invert(u: FiniteWord, cfg: WedgeConfig) -> FiniteWord:
    return FiniteWord(tuple(Letter(j, cfg.summand(j).inv(g)) for j, g in reversed(u.letters)))


def embed(j: int, g: Element, cfg: WedgeConfig) -> FiniteWord:
    return reduce([Letter(j, g)], cfg)


def project(w: FiniteWord, F, cfg: WedgeConfig) -> FiniteWord:
    """Image under the homomorphism deleting every letter outside ``F``."""
    keep = set(F)
    return reduce([l for l in w.letters if l.summand in keep], cfg)


def truncate(w: FiniteWord, k: int, cfg: WedgeConfig) -> FiniteWord:
    """Projection onto summands ``1..k``."""
    return reduce([l for l in w.letters if l.summand <= k], cfg)


def bonding(w: FiniteWord, level: int, cfg: WedgeConfig) -> FiniteWord:
    """Bonding homomorphism from level ``level`` to level ``level - 1``."""
    if level < 1:
        raise GroupError(f"bonding needs level >= 1, got {level}")
    for l in w.letters:
        if l.summand > level:
            raise GroupError(f"letter {l.summand}:{l.elem!r} does not live at level {level}")
    return truncate(w, level - 1, cfg)


def decompose_nt(w: FiniteWord, j: int, cfg: WedgeConfig) -> NtDecomposition:
    """Split ``w`` as prefix * tail with prefix not ending in G_j and tail in G_j."""
    w = reduce(w.letters, cfg)
    spec = cfg.summand(j)
    last = w.last()
    if last is not None and last.summand == j:
        return NtDecomposition(FiniteWord(w.letters[:-1]), last.elem)
    return NtDecomposition(w, spec.identity)


def in_nt(w: FiniteWord, j: int) -> bool:
    last = w.last()
    return last is None or last.summand != j


def alphabet(j: int, cfg: WedgeConfig, alphabets: Optional[Mapping[int, Sequence]] = None) -> tuple:
    """Non-identity elements of G_j used for enumeration."""
    if alphabets and j in alphabets:
        spec = cfg.summand(j)
        out = []
        for g in alphabets[j]:
            if not spec.is_identity(g) and g not in out:
                out.append(spec.check(g))
        return tuple(out)
    elems = cfg.summand(j).elements()
    if elems is None:
        raise GroupError(f"summand {j} ({cfg.summand(j).describe()}) is infinite; declare a finite alphabet")
    return elems[1:]


def enumerate_reduced(k: int, maxlen: int, cfg: WedgeConfig, alphabets=None) -> list:
    """All reduced words over summands 1..k of length <= maxlen, shortest first."""
    letters = [Letter(j, g) for j in range(1, k + 1) for g in alphabet(j, cfg, alphabets)]
    out = [EMPTY]
    layer = [EMPTY]
    for _ in range(maxlen):
        nxt = []
        for w in layer:
            last = w.last()
            for l in letters:
                if last is None or last.summand != l.summand:
                    nxt.append(FiniteWord(w.letters + (l,)))
        out.extend(nxt)
        layer = nxt
    return out


def enumerate_nt(k: int, j: int, maxlen: int, cfg: WedgeConfig, alphabets=None) -> list:
    if not 1 <= j <= k:
        raise GroupError(f"summand {j} is not at level {k}")
    return [w for w in enumerate_reduced(k, maxlen, cfg, alphabets) if in_nt(w, j)]


# -- literal syntax ---------------------------------------------------------


def format_word(w: FiniteWord, cfg: Optional[WedgeConfig] = None) -> str:
    if not w.letters:
        return "e"
    if cfg is None:
        return " ".join(f"{j}:{format_literal(g)}" for j, g in w.letters)
    return " ".join(f"{j}:{cfg.summand(j).format(g)}" for j, g in w.letters)


def parse_letter(token: str, cfg: WedgeConfig, line: int = 1, col: int = 1) -> Letter:
    head, sep, tail = token.partition(":")
    if not sep or not head.isdigit() or int(head) < 1:
        raise ParseError(f"bad letter {token!r}, expected j:g", line, col)
    j = int(head)
    try:
        return Letter(j, cfg.summand(j).normalize(parse_literal(tail)))
    except (ValueError, GroupError) as exc:
        raise ParseError(str(exc), line, col + len(head) + 1) from None


def parse_word(text: str, cfg: WedgeConfig) -> FiniteWord:
    """Parse ``j:g`` tokens (``e`` for the empty word); the result is reduced."""
    letters = []
    for lineno, line in enumerate(text.splitlines() or [""], 1):
        pos = 0
        for tok in line.split():
            col = line.index(tok, pos) + 1
            pos = col - 1 + len(tok)
            if tok == "e":
                continue
            letters.append(parse_letter(tok, cfg, lineno, col))
    return reduce(letters, cfg)

