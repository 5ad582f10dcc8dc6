"""Whisker topology on the wedgepoint fiber and the image predicate for Theta.

Basic neighbourhoods of a fiber point ``alpha`` are modelled by a depth
``J``: ``N(alpha, J)`` holds the points ``alpha * eps`` where the reduced word
``eps`` only uses summands above ``J``.

An element of the product of direct sums indexed by coset representatives is
given by a :class:`SupportFamily`: finitely many isolated points plus finitely
many convergent tails.  It lies in the image exactly when its support has
compact closure, which for these families comes down to every tail escaping
towards its limit and every summand carrying finitely many support points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from .freeprod import FiniteWord
from .summands import GroupError, Literal, ParseError, SummandSpec, WedgeConfig, format_literal, load_config, parse_literal
from .summands import parse_kind as parse_summand_kind
from .transfinite import (
    EMPTY,
    BlockRule,
    ExprError,
    Lit,
    Recipe,
    WordExpr,
    _Parser,
    equal_up_to,
    format_expr,
    horizon,
    invert_expr,
    multiply_expr,
    project_expr,
    terminal_summand,
    tokenize,
)


COEFF_KINDS = ("integer", "cyclic", "product")


class MalformedSupport(ValueError):
    pass


class InconclusiveComparison(ValueError):
    pass


# -- neighbourhoods ---------------------------------------------------------


@dataclass(frozen=True)
class FiberNbhd:
    base: WordExpr
    depth: int

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("neighbourhood depth must be >= 0")


@dataclass(frozen=True)
class NbhdVerdict:
    status: str  # yes | no | inconclusive
    level: Optional[int] = None

    def __str__(self):
        if self.status == "no":
            return f"no-at-level {self.level}"
        if self.status == "yes":
            return f"yes (through {self.level})"
        return f"inconclusive (through {self.level})"


def _low_letter(w: FiniteWord, depth: int) -> bool:
    return any(l.summand <= depth for l in w.letters)


def in_nbhd(candidate: WordExpr, nbhd: FiberNbhd, K: int, cfg: WedgeConfig) -> NbhdVerdict:
    """Is ``candidate`` in ``N(base, depth)``?

    ``no`` is definitive.  ``yes`` means no projection through
    ``max(K, depth)`` shows a letter at or below the depth, and every explicit
    letter of ``base^-1 * candidate`` lies within that range.
    """
    top = max(K, nbhd.depth)
    if candidate == nbhd.base:
        return NbhdVerdict("yes", top)
    diff = multiply_expr(invert_expr(nbhd.base), candidate)
    for k in range(1, top + 1):
        if _low_letter(project_expr(diff, k, cfg), nbhd.depth):
            return NbhdVerdict("no", k)
    if horizon(diff) <= top:
        return NbhdVerdict("yes", top)
    return NbhdVerdict("inconclusive", top)


# -- support families -------------------------------------------------------


@dataclass(frozen=True)
class AffineRule:
    """``i -> a + b*(i-1)`` for members i = 1, 2, ..."""

    a: int
    b: int = 0

    def at(self, i: int) -> int:
        return self.a + self.b * (i - 1)

    def format(self) -> str:
        return str(self.a) if self.b == 0 else f"affine {self.a} {self.b}"


@dataclass(frozen=True)
class MemberRule:
    """Word appended to the limit for member i; ``None`` rule means empty."""

    rule: Optional[BlockRule] = None

    def word(self, i: int) -> WordExpr:
        if self.rule is None:
            return EMPTY
        j, g = self.rule.letter(i - 1)
        return Lit(j, g)

    def format(self) -> str:
        return "empty" if self.rule is None else self.rule.format()


@dataclass(frozen=True)
class Isolated:
    summand: int
    rep: WordExpr
    coeff: Literal


@dataclass(frozen=True)
class ConvergentTail:
    limit: WordExpr
    summand: AffineRule
    escape: AffineRule
    members: MemberRule
    coeffs: Recipe

    def __post_init__(self):
        if self.summand.a < 1 or self.summand.b < 0:
            raise MalformedSupport("tail summand rule must stay at positive indices")
        if self.coeffs.kind == "pow":
            raise MalformedSupport("tail coefficients use const or cycle recipes")
        if self.members.rule is not None and (self.members.rule.start < 1 or self.members.rule.step < 0):
            raise MalformedSupport("member rule must stay at positive summand indices")

    def rep(self, i: int) -> WordExpr:
        beta = self.members.word(i)
        return self.limit if beta == EMPTY else multiply_expr(self.limit, beta)

    def summand_at(self, i: int) -> int:
        return self.summand.at(i)

    def coeff_at(self, i: int) -> Literal:
        return self.coeffs.at(i - 1)

    def format(self) -> str:
        return (
            f"tail limit {format_expr(self.limit)} summand {self.summand.format()} "
            f"escape {self.escape.format()} members {self.members.format()} coeffs {self.coeffs.format()}"
        )


@dataclass(frozen=True)
class SupportFamily:
    isolated: tuple = ()
    tails: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "isolated", tuple(self.isolated))
        object.__setattr__(self, "tails", tuple(self.tails))


@dataclass(frozen=True)
class ThetaElement:
    config: WedgeConfig
    coeffs: WedgeConfig  # abelian coefficient group per summand
    support: SupportFamily
    level: int = 8
    config_ref: str = field(default="wedge.cfg", compare=False)

    def __post_init__(self):
        for spec in list(self.coeffs.explicit.values()) + [self.coeffs.default]:
            if spec.kind not in COEFF_KINDS:
                raise MalformedSupport(f"coefficient group {spec.describe()} must be integer, cyclic or product")


# -- convergence ------------------------------------------------------------


@dataclass(frozen=True)
class Failure:
    member: int
    reason: str
    level: Optional[int] = None


@dataclass(frozen=True)
class ConvergenceReport:
    checked: int
    failure: Optional[Failure] = None

    @property
    def passed(self) -> bool:
        return self.failure is None


def _exit_level(rep: WordExpr, limit: WordExpr, cfg: WedgeConfig) -> Optional[int]:
    """Least depth whose neighbourhood of ``limit`` misses ``rep``."""
    diff = multiply_expr(invert_expr(limit), rep)
    seen = [l.summand for k in range(1, horizon(diff) + 1) for l in project_expr(diff, k, cfg).letters]
    return min(seen, default=None)


def check_convergence(tail: ConvergentTail, samples: int, cfg: WedgeConfig) -> ConvergenceReport:
    """Check members 1..samples enter ``N(limit, J(i))`` with J strictly increasing."""
    prev = None
    for i in range(1, samples + 1):
        depth = tail.escape.at(i)
        rep = tail.rep(i)
        if depth < 0 or (prev is not None and depth <= prev):
            return ConvergenceReport(i, Failure(i, "escape depth does not increase", _exit_level(rep, tail.limit, cfg)))
        prev = depth
        diff = multiply_expr(invert_expr(tail.limit), rep)
        verdict = in_nbhd(rep, FiberNbhd(tail.limit, depth), max(depth, horizon(diff)), cfg)
        if verdict.status == "no":
            return ConvergenceReport(i, Failure(i, f"member outside the depth-{depth} neighbourhood", verdict.level))
        if verdict.status == "inconclusive":
            return ConvergenceReport(i, Failure(i, "inconclusive", verdict.level))
    return ConvergenceReport(samples)


# -- image predicate --------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    kind: str  # non-escaping | per-summand-infinite
    tail: int
    member: Optional[int] = None
    level: Optional[int] = None
    summand: Optional[int] = None

    def __str__(self):
        if self.kind == "per-summand-infinite":
            return f"summand {self.summand} carries infinitely many support points (tail {self.tail})"
        at = f" at level {self.level}" if self.level is not None else ""
        return f"non-escaping sequence{at} (tail {self.tail}, member {self.member})"


@dataclass(frozen=True)
class ThetaVerdict:
    status: str  # in-image | not-in-image | inconclusive
    witness: Optional[Witness] = None

    def __str__(self):
        return self.status if self.witness is None else f"{self.status}: {self.witness}"


def _coeff_is_zero(spec: SummandSpec, c: Literal) -> bool:
    try:
        return spec.is_identity(spec.normalize(c))
    except GroupError as exc:
        raise MalformedSupport(f"coefficient {format_literal(c)}: {exc}") from None


def validate_support(el: ThetaElement, samples: int) -> None:
    cfg = el.config
    seen = []
    for n, iso in enumerate(el.support.isolated, 1):
        try:
            if terminal_summand(iso.rep, cfg) == iso.summand:
                raise MalformedSupport(f"isolated point {n}: representative ends in summand {iso.summand}")
        except ExprError as exc:
            raise MalformedSupport(f"isolated point {n}: {exc}") from None
        if _coeff_is_zero(el.coeffs.summand(iso.summand), iso.coeff):
            raise MalformedSupport(f"isolated point {n}: zero coefficient")
        key = (iso.summand, iso.rep)
        if key in seen:
            raise MalformedSupport(f"isolated point {n} repeats an earlier point")
        seen.append(key)
    for t, tail in enumerate(el.support.tails, 1):
        for i in range(1, samples + 1):
            j = tail.summand_at(i)
            try:
                if terminal_summand(tail.rep(i), cfg) == j:
                    raise MalformedSupport(f"tail {t} member {i}: representative ends in summand {j}")
            except ExprError as exc:
                raise MalformedSupport(f"tail {t} member {i}: {exc}") from None
            _coeff_is_zero(el.coeffs.summand(j), tail.coeff_at(i))


def _all_zero(tail: ConvergentTail, coeffs: WedgeConfig) -> bool:
    specs = list(coeffs.explicit.values()) + [coeffs.default]
    return all(_coeff_is_zero(s, c) for s in specs for c in tail.coeffs.elems)


def in_theta_image(el: ThetaElement, K: Optional[int] = None) -> ThetaVerdict:
    """Does the support of ``el`` have compact closure in the whisker model?"""
    K = el.level if K is None else K
    cfg = el.config
    validate_support(el, K)
    for t, tail in enumerate(el.support.tails, 1):
        if _all_zero(tail, el.coeffs):
            continue
        report = check_convergence(tail, K, cfg)
        if report.failure is not None:
            f = report.failure
            if f.reason == "inconclusive":
                return ThetaVerdict("inconclusive", Witness("non-escaping", t, f.member, f.level))
            return ThetaVerdict("not-in-image", Witness("non-escaping", t, f.member, f.level))
    for t, tail in enumerate(el.support.tails, 1):
        if tail.summand.b == 0 and not _all_zero(tail, el.coeffs):
            return ThetaVerdict("not-in-image", Witness("per-summand-infinite", t, summand=tail.summand.a))
    return ThetaVerdict("in-image")


# -- group structure --------------------------------------------------------


def _add_literals(a: Literal, b: Literal) -> Literal:
    if isinstance(a, int) and isinstance(b, int):
        return a + b
    if isinstance(a, tuple) and isinstance(b, tuple) and len(a) == len(b):
        return tuple(x + y for x, y in zip(a, b))
    raise MalformedSupport(f"cannot add coefficients {format_literal(a)} and {format_literal(b)}")


def _neg_literal(a: Literal) -> Literal:
    if isinstance(a, int):
        return -a
    if isinstance(a, tuple):
        return tuple(-x for x in a)
    raise MalformedSupport(f"bad coefficient {format_literal(a)}")


def _add_recipes(r: Recipe, s: Recipe) -> Recipe:
    if r.kind == s.kind == "const":
        return Recipe("const", (_add_literals(r.elems[0], s.elems[0]),))
    n = math.lcm(len(r.elems) if r.kind == "cycle" else 1, len(s.elems) if s.kind == "cycle" else 1)
    return Recipe("cycle", tuple(_add_literals(r.at(i), s.at(i)) for i in range(n)))


def negate_theta(el: ThetaElement) -> ThetaElement:
    support = SupportFamily(
        tuple(replace(iso, coeff=_neg_literal(iso.coeff)) for iso in el.support.isolated),
        tuple(replace(t, coeffs=Recipe(t.coeffs.kind, tuple(_neg_literal(c) for c in t.coeffs.elems))) for t in el.support.tails),
    )
    return replace(el, support=support)


def add_theta(a: ThetaElement, b: ThetaElement, level: Optional[int] = None) -> ThetaElement:
    """Coefficientwise sum; representatives are matched through ``level``."""
    if a.config != b.config or a.coeffs != b.coeffs:
        raise MalformedSupport("cannot add elements over different configurations")
    level = min(a.level, b.level) if level is None else level
    cfg = a.config
    isolated = list(a.support.isolated)
    for iso in b.support.isolated:
        for n, cur in enumerate(isolated):
            if cur.summand != iso.summand:
                continue
            if cur.rep == iso.rep:
                isolated[n] = replace(cur, coeff=_add_literals(cur.coeff, iso.coeff))
                break
            if equal_up_to(cur.rep, iso.rep, level, cfg).agree:
                raise InconclusiveComparison(
                    f"representatives {format_expr(cur.rep)} and {format_expr(iso.rep)} agree through level {level}"
                )
        else:
            isolated.append(iso)
    isolated = [iso for iso in isolated if not _coeff_is_zero(a.coeffs.summand(iso.summand), iso.coeff)]
    tails = list(a.support.tails)
    for tail in b.support.tails:
        for n, cur in enumerate(tails):
            if replace(cur, coeffs=tail.coeffs) == tail:
                tails[n] = replace(cur, coeffs=_add_recipes(cur.coeffs, tail.coeffs))
                break
        else:
            tails.append(tail)
    tails = [t for t in tails if not _all_zero(t, a.coeffs)]
    return replace(a, support=SupportFamily(tuple(isolated), tuple(tails)))


# -- file format ------------------------------------------------------------


class _ThetaParser(_Parser):
    def expect(self, word: str):
        text, line, col = self.next(f"'{word}'")
        if text != word:
            raise ParseError(f"expected '{word}', got {text!r}", line, col)

    def literal(self, what: str) -> Literal:
        text, line, col = self.next(what)
        try:
            return parse_literal(text)
        except ValueError as exc:
            raise ParseError(str(exc), line, col) from None

    def affine(self) -> AffineRule:
        tok = self.peek()
        if tok is not None and tok[0] == "affine":
            self.pos += 1
            return AffineRule(self.integer("offset"), self.integer("slope"))
        return AffineRule(self.integer("integer or 'affine'"))

    def member_rule(self) -> MemberRule:
        tok = self.peek()
        if tok is not None and tok[0] == "empty":
            self.pos += 1
            return MemberRule()
        text, line, col = self.next("'empty' or 'diag'")
        if text != "diag":
            raise ParseError(f"expected 'empty' or 'diag', got {text!r}", line, col)
        return MemberRule(BlockRule(self.integer("start index"), self.integer("step"), self.recipe()))


def parse_theta(text: str, base: Optional[Path] = None, cfg: Optional[WedgeConfig] = None) -> ThetaElement:
    """Parse a theta file; the header's config reference is loaded unless ``cfg`` is given."""
    header = None
    coeff_explicit: dict = {}
    coeff_default = None
    isolated, tails = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = tokenize(raw, lineno - 1)
        if not toks:
            continue
        head, _, col = toks[0]
        p = _ThetaParser(toks[1:])
        if header is None:
            if head != "theta" or len(toks) != 4 or toks[2][0] != "level" or not toks[3][0].isdigit():
                raise ParseError("first line must be 'theta <config-ref> level <K>'", lineno, col)
            header = (toks[1][0], int(toks[3][0]))
            continue
        try:
            if head == "coeff":
                words = [t[0] for t in toks[1:]]
                if words and words[0] == "default":
                    coeff_default = spec = parse_summand_kind(words[1:], lineno, col, base)
                elif words and words[0].isdigit() and int(words[0]) >= 1:
                    coeff_explicit[int(words[0])] = spec = parse_summand_kind(words[1:], lineno, col, base)
                else:
                    raise ParseError("expected 'coeff default <kind>' or 'coeff <j> <kind>'", lineno, col)
                if spec.kind not in COEFF_KINDS:
                    raise ParseError(f"coefficient group {spec.describe()} must be integer, cyclic or product", lineno, col)
                continue
            if head == "iso":
                j = p.integer("summand index")
                if j < 1:
                    raise ParseError("summand index must be positive", lineno, toks[1][2])
                rep = p.expr()
                coeff = p.literal("coefficient")
                isolated.append(Isolated(j, rep, coeff))
            elif head == "tail":
                p.expect("limit")
                limit = p.expr()
                p.expect("summand")
                summand = p.affine()
                p.expect("escape")
                escape = p.affine()
                p.expect("members")
                members = p.member_rule()
                p.expect("coeffs")
                coeffs = p.recipe()
                tails.append(ConvergentTail(limit, summand, escape, members, coeffs))
            else:
                raise ParseError(f"unknown directive {head!r}", lineno, col)
        except (MalformedSupport, ExprError) as exc:
            raise ParseError(str(exc), lineno, col) from None
        if not p.at_end():
            extra = p.peek()
            raise ParseError(f"unexpected token {extra[0]!r}", extra[1], extra[2])
    if header is None:
        raise ParseError("missing 'theta' header", 1, 1)
    ref, level = header
    if cfg is None:
        path = Path(ref) if base is None else base / ref
        try:
            cfg = load_config(path)
        except OSError as exc:
            raise ParseError(f"cannot read config {ref!r}: {exc.strerror}", 1, 7) from None
    coeffs = WedgeConfig(coeff_explicit, coeff_default or SummandSpec.integer())
    try:
        return ThetaElement(cfg, coeffs, SupportFamily(tuple(isolated), tuple(tails)), level, ref)
    except MalformedSupport as exc:
        raise ParseError(str(exc), 1, 1) from None


def format_theta(el: ThetaElement) -> str:
    lines = [f"theta {el.config_ref} level {el.level}", f"coeff default {el.coeffs.default.describe()}"]
    lines += [f"coeff {j} {spec.describe()}" for j, spec in el.coeffs.explicit.items()]
    for iso in el.support.isolated:
        lines.append(f"iso {iso.summand} {format_expr(iso.rep)} {format_literal(iso.coeff)}")
    lines += [t.format() for t in el.support.tails]
    return "\n".join(lines) + "\n"


def load_theta(path) -> ThetaElement:
    path = Path(path)
    return parse_theta(path.read_text(), path.parent)
