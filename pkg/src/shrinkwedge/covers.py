"""Copies of summand covers inside the cover of a finite wedge.

The universal cover of the level-k wedge is a union of copies of the summand
covers.  The copy of summand ``j`` labelled by ``alpha`` (a reduced word that
does not end in a G_j letter) has fiber points ``alpha * g`` for ``g`` in G_j.

The bonding map from level k+1 to level k either collapses a copy (when its
summand is k+1) or carries it onto a level-k copy, translating by a deck
element ``gamma`` in G_j.  Each copy carries a maximal tree that is a
translate ``beta * T_j`` of a fixed tree; only the coordinate ``beta`` is
tracked here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .freeprod import (
    EMPTY,
    FiniteWord,
    Letter,
    alphabet,
    bonding,
    decompose_nt,
    enumerate_nt,
    format_word,
    in_nt,
    is_reduced,
    multiply,
    truncate,
)
from .summands import Element, GroupError, WedgeConfig
from .transfinite import (
    WordExpr,
    format_expr,
    horizon,
    project_expr,
    terminal_summand,
)


class CopyError(ValueError):
    pass


class StabilizationError(ValueError):
    """Raised when a stable value cannot be certified; carries the partial report."""

    def __init__(self, message: str, report: Optional["StabilizationReport"] = None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class CopyId:
    level: int
    summand: int
    index: FiniteWord = EMPTY

    def validate(self, cfg: WedgeConfig) -> "CopyId":
        if not 1 <= self.summand <= self.level:
            raise CopyError(f"summand {self.summand} does not exist at level {self.level}")
        if not is_reduced(self.index, cfg):
            raise CopyError(f"index {format_word(self.index)} is not reduced")
        if self.index.max_summand() > self.level:
            raise CopyError(f"index {format_word(self.index)} uses summands above level {self.level}")
        if not in_nt(self.index, self.summand):
            raise CopyError(f"index {format_word(self.index)} ends in a letter of summand {self.summand}")
        return self

    def format(self, cfg: Optional[WedgeConfig] = None) -> str:
        return f"({self.level},{self.summand},{format_word(self.index, cfg)})"


@dataclass(frozen=True)
class Collapsed:
    point: FiniteWord


@dataclass(frozen=True)
class MappedTo:
    target: CopyId
    deck: Element


BondingImage = Union[Collapsed, MappedTo]


def bonding_image(c: CopyId, cfg: WedgeConfig) -> BondingImage:
    """Where the bonding map sends the copy ``c`` (at level >= 2)."""
    c.validate(cfg)
    k = c.level - 1
    if k < 1:
        raise CopyError("level-1 copies have no bonding image")
    if c.summand == c.level:
        return Collapsed(truncate(c.index, k, cfg))
    split = decompose_nt(bonding(c.index, c.level, cfg), c.summand, cfg)
    return MappedTo(CopyId(k, c.summand, split.prefix), split.tail)


def tree_translate(c: CopyId, cfg: WedgeConfig) -> Element:
    """Coordinate ``beta`` of the tree assigned to copy ``c``.

    Copies created at level j (their own summand) get the fixed tree, and a
    copy mapped onto ``target`` with deck element ``gamma`` gets
    ``gamma^-1 * beta(target)``.
    """
    c.validate(cfg)
    spec = cfg.summand(c.summand)
    decks = []
    while c.level > c.summand:
        image = bonding_image(c, cfg)
        decks.append(image.deck)
        c = image.target
    beta = spec.identity
    for gamma in reversed(decks):
        beta = spec.mul(spec.inv(gamma), beta)
    return beta


# -- stabilization ----------------------------------------------------------


@dataclass
class StabilizationReport:
    target: WordExpr
    summand: int
    betas: dict  # level -> beta
    gammas: dict  # level -> nt tail of the level projection
    stable_value: Optional[Element]
    stabilization_level: Optional[int]
    certified_through: int
    certified: bool = False

    def format(self, cfg: WedgeConfig) -> str:
        spec = cfg.summand(self.summand)
        lines = [f"{k} {_fmt_elem(self.summand, b, spec, cfg)}" for k, b in self.betas.items()]
        beta = _fmt_elem(self.summand, self.stable_value, spec, cfg)
        if self.certified:
            lines.append(f"stable {beta} at {self.stabilization_level}")
        else:
            lines.append(f"uncertified {beta} from {self.stabilization_level} through {self.certified_through}")
        return "\n".join(lines) + "\n"


def _fmt_elem(j: int, g, spec, cfg) -> str:
    if g is None or spec.is_identity(g):
        return "e"
    return format_word(FiniteWord((Letter(j, g),)), cfg)


def stabilize(w: WordExpr, j: int, K: int, cfg: WedgeConfig, window: int = 3) -> StabilizationReport:
    """Run the tree-translate sequence along ``w`` for levels j..K.

    The stable value is certified when the last ``window`` values agree and
    ``K`` is past the horizon of ``w`` (every explicit letter has appeared).
    Otherwise :class:`StabilizationError` is raised with the partial report.
    """
    if j < 1:
        raise GroupError(f"summand index {j} must be positive")
    if K < j:
        raise StabilizationError(f"level bound {K} is below the summand index {j}")
    term = terminal_summand(w, cfg)
    if term == j:
        raise StabilizationError(
            f"{format_expr(w)} ends in a letter of summand {j}; it is not a non-terminal representative"
        )
    betas, gammas = {}, {}
    for k in range(j, K + 1):
        split = decompose_nt(project_expr(w, k, cfg), j, cfg)
        gammas[k] = split.tail
        betas[k] = tree_translate(CopyId(k, j, split.prefix), cfg)
    stable = betas[K]
    start = K
    while start - 1 >= j and betas[start - 1] == stable:
        start -= 1
    report = StabilizationReport(w, j, betas, gammas, stable, start, K)
    run = K - start + 1
    needed = max(horizon(w) + 1, j)
    if run < window or K < needed:
        reason = []
        if run < window:
            reason.append(f"only {run} equal trailing value(s), need {window}")
        if K < needed:
            reason.append(f"level bound {K} is below the horizon {needed}")
        raise StabilizationError("cannot certify stabilization: " + "; ".join(reason), report)
    report.certified = True
    return report


# -- atlas ------------------------------------------------------------------


@dataclass
class Atlas:
    level: int
    maxlen: int
    copies: list
    attachments: list = field(default_factory=list)  # (CopyId, CopyId, FiniteWord)

    def points(self, c: CopyId, cfg: WedgeConfig, alphabets=None) -> list:
        """Fiber points ``alpha * g`` of a copy with length <= maxlen."""
        pts = [c.index]
        for g in alphabet(c.summand, cfg, alphabets):
            p = multiply(c.index, FiniteWord((Letter(c.summand, g),)), cfg)
            if len(p) <= self.maxlen:
                pts.append(p)
        return pts


def build_atlas(k: int, maxlen: int, cfg: WedgeConfig, alphabets=None) -> Atlas:
    """Copies at level ``k`` with index length <= maxlen and how they attach.

    Copies meet only at fiber points.  A nonempty point ``w`` is a non-base
    point of exactly one copy (its terminal summand's copy) and the base point
    of the copies ``(j', w)`` for the other summands; those are attached to
    the owning copy.  The empty point is shared by the base copies, attached
    to ``(k, 1, e)``.  One edge per extra copy through a point keeps the
    attachment graph a tree.
    """
    if k < 1:
        raise GroupError(f"level {k} must be positive")
    copies = [CopyId(k, j, alpha) for j in range(1, k + 1) for alpha in enumerate_nt(k, j, maxlen, cfg, alphabets)]
    attachments = []
    root = CopyId(k, 1, EMPTY)
    for c in copies:
        if not c.index:
            if c != root:
                attachments.append((root, c, EMPTY))
            continue
        last = c.index.last()
        owner = CopyId(k, last.summand, FiniteWord(c.index.letters[:-1]))
        attachments.append((owner, c, c.index))
    return Atlas(k, maxlen, copies, attachments)


def emit_atlas_dot(atlas: Atlas, cfg: WedgeConfig) -> str:
    ids = {c: f"c{n}" for n, c in enumerate(atlas.copies)}
    out = [f"graph atlas_level_{atlas.level} {{", "  node [shape=box];"]
    for c in atlas.copies:
        beta = tree_translate(c, cfg)
        label = f"j={c.summand}\\nalpha={format_word(c.index, cfg)}\\nbeta={_fmt_elem(c.summand, beta, cfg.summand(c.summand), cfg)}"
        out.append(f'  {ids[c]} [label="{label}"];')
    for a, b, p in atlas.attachments:
        out.append(f'  {ids[a]} -- {ids[b]} [label="{format_word(p, cfg)}"];')
    out.append("}")
    return "\n".join(out) + "\n"
