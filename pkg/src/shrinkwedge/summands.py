"""Summand groups of a shrinking wedge and the wedge configuration.

Each summand is a black-box group with canonical normal forms:

* ``integer``    -- Z, elements are ``int``
* ``cyclic n``   -- Z/n, elements are ``int`` in ``0..n-1``
* ``product r``  -- Z^r, elements are ``tuple`` of ``r`` ints (literal ``a,b``)
* ``table path`` -- a finite group given by a multiplication table, elements
  are symbol strings

Element *literals* are the group-independent spellings used inside word
expressions.  A literal is an ``int``, a ``tuple`` of ints, or a symbol
string ``x`` / ``x^n``.  ``SummandSpec.normalize`` turns a literal into the
canonical element of a particular group.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Mapping, Optional, Sequence, Union

Literal = Union[int, tuple, str]
Element = Union[int, tuple, str]

_INT_RE = re.compile(r"^[+-]?\d+$")
_TUPLE_RE = re.compile(r"^[+-]?\d+(,[+-]?\d+)+$")
_SYM_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^([+-]?\d+))?$")


class GroupError(ValueError):
    """An element or index that the configured groups cannot resolve."""


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"line {line}, col {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


# -- literals ---------------------------------------------------------------


def parse_literal(text: str) -> Literal:
    if _INT_RE.match(text):
        return int(text)
    if _TUPLE_RE.match(text):
        return tuple(int(part) for part in text.split(","))
    m = _SYM_RE.match(text)
    if m:
        name, power = m.group(1), m.group(2)
        if name == "e":
            raise ValueError("'e' is reserved for the empty word")
        return _sym(name, int(power) if power is not None else 1)
    raise ValueError(f"bad element literal {text!r}")


def format_literal(lit: Literal) -> str:
    if isinstance(lit, tuple):
        return ",".join(str(x) for x in lit)
    return str(lit)


def _sym(name: str, power: int) -> str:
    if power == 1:
        return name
    return f"{name}^{power}"


def _split_sym(lit: str) -> tuple[str, int]:
    m = _SYM_RE.match(lit)
    if not m:
        raise GroupError(f"bad symbol literal {lit!r}")
    return m.group(1), int(m.group(2)) if m.group(2) is not None else 1


def power_literal(lit: Literal, n: int) -> Literal:
    """The literal spelling the n-th power of ``lit`` in any group."""
    if isinstance(lit, bool):
        raise TypeError(lit)
    if isinstance(lit, int):
        return lit * n
    if isinstance(lit, tuple):
        return tuple(x * n for x in lit)
    name, p = _split_sym(lit)
    return _sym(name, p * n)


def negate_literal(lit: Literal) -> Literal:
    return power_literal(lit, -1)


# -- finite tables ----------------------------------------------------------


@dataclass(frozen=True)
class TableGroup:
    name: str
    symbols: tuple
    rows: tuple  # rows[a][b] = index of symbols[a] * symbols[b]

    def __post_init__(self):
        n = len(self.symbols)
        if len(set(self.symbols)) != n:
            raise GroupError(f"table {self.name}: duplicate symbols")
        if len(self.rows) != n or any(len(r) != n for r in self.rows):
            raise GroupError(f"table {self.name}: table is not {n}x{n}")
        for r in self.rows:
            for x in r:
                if not 0 <= x < n:
                    raise GroupError(f"table {self.name}: product outside the group")
        ident = [a for a in range(n) if all(self.rows[a][b] == b and self.rows[b][a] == b for b in range(n))]
        if not ident:
            raise GroupError(f"table {self.name}: no identity")
        e = ident[0]
        for a in range(n):
            for b in range(n):
                ab = self.rows[a][b]
                for c in range(n):
                    if self.rows[ab][c] != self.rows[a][self.rows[b][c]]:
                        raise GroupError(f"table {self.name}: not associative")
            if not any(self.rows[a][b] == e for b in range(n)):
                raise GroupError(f"table {self.name}: {self.symbols[a]} has no inverse")

    @property
    def identity(self) -> int:
        n = len(self.symbols)
        for a in range(n):
            if all(self.rows[a][b] == b for b in range(n)):
                return a
        raise AssertionError

    def index(self, sym: str) -> int:
        try:
            return self.symbols.index(sym)
        except ValueError:
            raise GroupError(f"{sym!r} is not an element of table {self.name}") from None

    @classmethod
    def parse(cls, text: str, name: str = "table") -> "TableGroup":
        """Header line of symbols, then one row per symbol giving ``row * col``."""
        lines = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            body = raw.split("#", 1)[0].split()
            if body:
                lines.append((lineno, body))
        if not lines:
            raise ParseError("empty table", 1, 1)
        header = tuple(lines[0][1])
        pos = {s: i for i, s in enumerate(header)}
        rows = []
        for lineno, body in lines[1:]:
            if len(body) != len(header) + 1 or body[0] not in pos:
                raise ParseError("row must be '<symbol> <products...>'", lineno, 1)
            try:
                rows.append((pos[body[0]], tuple(pos[s] for s in body[1:])))
            except KeyError as exc:
                raise ParseError(f"unknown symbol {exc.args[0]!r}", lineno, 1) from None
        rows.sort()
        if [r[0] for r in rows] != list(range(len(header))):
            raise ParseError("need exactly one row per symbol", lines[-1][0], 1)
        return cls(name, header, tuple(r[1] for r in rows))

    def format(self) -> str:
        width = max(len(s) for s in self.symbols)
        out = [" ".join(s.rjust(width) for s in ("",) + self.symbols)]
        for a, row in enumerate(self.rows):
            out.append(" ".join(s.rjust(width) for s in (self.symbols[a],) + tuple(self.symbols[x] for x in row)))
        return "\n".join(out) + "\n"


# -- summand specs ----------------------------------------------------------


@dataclass(frozen=True)
class SummandSpec:
    kind: str
    n: int = 0
    table: Optional[TableGroup] = field(default=None, compare=True)
    source: str = field(default="", compare=False)

    def __post_init__(self):
        if self.kind == "integer":
            return
        if self.kind == "cyclic":
            if self.n < 2:
                raise GroupError(f"cyclic {self.n} is trivial or invalid; summands must be nontrivial")
        elif self.kind == "product":
            if self.n < 1:
                raise GroupError("product rank must be positive")
        elif self.kind == "table":
            if self.table is None:
                raise GroupError("table summand needs a table")
            if len(self.table.symbols) < 2:
                raise GroupError("trivial table group; summands must be nontrivial")
        else:
            raise GroupError(f"unknown summand kind {self.kind!r}")

    @classmethod
    def integer(cls) -> "SummandSpec":
        return cls("integer")

    @classmethod
    def cyclic(cls, n: int) -> "SummandSpec":
        return cls("cyclic", n)

    @classmethod
    def product(cls, rank: int) -> "SummandSpec":
        return cls("product", rank)

    @classmethod
    def from_table(cls, table: TableGroup, source: str = "") -> "SummandSpec":
        return cls("table", len(table.symbols), table, source or table.name)

    @property
    def identity(self) -> Element:
        if self.kind == "product":
            return (0,) * self.n
        if self.kind == "table":
            return self.table.symbols[self.table.identity]
        return 0

    @property
    def is_abelian(self) -> bool:
        if self.kind != "table":
            return True
        rows = self.table.rows
        return all(rows[a][b] == rows[b][a] for a in range(len(rows)) for b in range(len(rows)))

    @property
    def is_finite(self) -> bool:
        return self.kind in ("cyclic", "table")

    def elements(self) -> Optional[tuple]:
        """All elements with the identity first, or None for infinite groups."""
        if self.kind == "cyclic":
            return tuple(range(self.n))
        if self.kind == "table":
            e = self.table.identity
            order = [e] + [i for i in range(len(self.table.symbols)) if i != e]
            return tuple(self.table.symbols[i] for i in order)
        return None

    def check(self, a: Element) -> Element:
        if self.kind == "integer":
            ok = isinstance(a, int) and not isinstance(a, bool)
        elif self.kind == "cyclic":
            ok = isinstance(a, int) and not isinstance(a, bool) and 0 <= a < self.n
        elif self.kind == "product":
            ok = isinstance(a, tuple) and len(a) == self.n and all(isinstance(x, int) for x in a)
        else:
            ok = isinstance(a, str) and a in self.table.symbols
        if not ok:
            raise GroupError(f"{a!r} is not a canonical element of {self.describe()}")
        return a

    def mul(self, a: Element, b: Element) -> Element:
        self.check(a)
        self.check(b)
        if self.kind == "integer":
            return a + b
        if self.kind == "cyclic":
            return (a + b) % self.n
        if self.kind == "product":
            return tuple(x + y for x, y in zip(a, b))
        t = self.table
        return t.symbols[t.rows[t.index(a)][t.index(b)]]

    def inv(self, a: Element) -> Element:
        self.check(a)
        if self.kind == "integer":
            return -a
        if self.kind == "cyclic":
            return (-a) % self.n
        if self.kind == "product":
            return tuple(-x for x in a)
        t = self.table
        i = t.index(a)
        for b in range(len(t.symbols)):
            if t.rows[i][b] == t.identity:
                return t.symbols[b]
        raise AssertionError

    def pow(self, a: Element, n: int) -> Element:
        if n < 0:
            a, n = self.inv(a), -n
        out = self.identity
        for _ in range(n):
            out = self.mul(out, a)
        return out

    def is_identity(self, a: Element) -> bool:
        return self.check(a) == self.identity

    def normalize(self, lit: Literal) -> Element:
        """Canonical element spelled by a literal."""
        return _normalize(self, lit)

    def format(self, a: Element) -> str:
        return format_literal(self.check(a))

    def describe(self) -> str:
        if self.kind == "integer":
            return "integer"
        if self.kind in ("cyclic", "product"):
            return f"{self.kind} {self.n}"
        return f"table {self.source}"


@lru_cache(maxsize=4096)
def _normalize(spec: SummandSpec, lit: Literal) -> Element:
    kind = spec.kind
    if kind in ("integer", "cyclic"):
        if not isinstance(lit, int) or isinstance(lit, bool):
            raise GroupError(f"literal {format_literal(lit)!r} is not an element of {spec.describe()}")
        return lit if kind == "integer" else lit % spec.n
    if kind == "product":
        if not isinstance(lit, tuple) or len(lit) != spec.n:
            raise GroupError(f"literal {format_literal(lit)!r} is not an element of {spec.describe()}")
        return lit
    if not isinstance(lit, str):
        raise GroupError(f"literal {format_literal(lit)!r} is not an element of {spec.describe()}")
    name, power = _split_sym(lit)
    spec.table.index(name)
    return spec.pow(name, power)


# -- wedge configuration ----------------------------------------------------


@dataclass(frozen=True)
class WedgeConfig:
    explicit: Mapping[int, SummandSpec] = field(default_factory=dict)
    default: SummandSpec = field(default_factory=SummandSpec.integer)

    def __post_init__(self):
        for j in self.explicit:
            if not isinstance(j, int) or j < 1:
                raise GroupError(f"summand index {j!r} must be a positive integer")
        # frozen + hashable: store explicit summands as a sorted tuple-backed dict
        object.__setattr__(self, "explicit", dict(sorted(self.explicit.items())))

    def __hash__(self):
        return hash((tuple(self.explicit.items()), self.default))

    def summand(self, j: int) -> SummandSpec:
        if not isinstance(j, int) or isinstance(j, bool) or j < 1:
            raise GroupError(f"summand index {j!r} is not a positive integer")
        return self.explicit.get(j, self.default)

    def is_abelian_through(self, k: int) -> bool:
        return all(self.summand(j).is_abelian for j in range(1, k + 1))


def group_mul(cfg: WedgeConfig, j: int, a: Element, b: Element) -> Element:
    return cfg.summand(j).mul(a, b)


def group_inv(cfg: WedgeConfig, j: int, a: Element) -> Element:
    return cfg.summand(j).inv(a)


def is_identity(cfg: WedgeConfig, j: int, a: Element) -> bool:
    return cfg.summand(j).is_identity(a)


def parse_kind(tokens: Sequence[str], lineno: int, col: int, base: Optional[Path]) -> SummandSpec:
    if not tokens:
        raise ParseError("missing summand kind", lineno, col)
    kind, rest = tokens[0], tokens[1:]
    try:
        if kind == "integer" and not rest:
            return SummandSpec.integer()
        if kind in ("cyclic", "product") and len(rest) == 1 and rest[0].isdigit():
            return SummandSpec(kind, int(rest[0]))
        if kind == "table" and len(rest) == 1:
            path = Path(rest[0])
            full = path if path.is_absolute() or base is None else base / path
            try:
                text = full.read_text()
            except OSError as exc:
                raise ParseError(f"cannot read table {rest[0]!r}: {exc.strerror}", lineno, col) from None
            return SummandSpec.from_table(TableGroup.parse(text, rest[0]), rest[0])
    except GroupError as exc:
        raise ParseError(str(exc), lineno, col) from None
    raise ParseError(f"bad summand kind {' '.join(tokens)!r}", lineno, col)


def parse_config(text: str, base: Optional[Path] = None) -> WedgeConfig:
    """Parse the line-oriented wedge configuration format."""
    explicit: dict[int, SummandSpec] = {}
    default = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        tokens = line.split()
        if not tokens:
            continue
        col = len(line) - len(line.lstrip()) + 1
        head = tokens[0]
        if head == "default":
            if default is not None:
                raise ParseError("duplicate default line", lineno, col)
            default = parse_kind(tokens[1:], lineno, col, base)
        elif head == "summand":
            if len(tokens) < 2 or not tokens[1].isdigit() or int(tokens[1]) < 1:
                raise ParseError("summand index must be a positive integer", lineno, col)
            j = int(tokens[1])
            if j in explicit:
                raise ParseError(f"summand {j} declared twice", lineno, col)
            explicit[j] = parse_kind(tokens[2:], lineno, col, base)
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, col)
    return WedgeConfig(explicit, default if default is not None else SummandSpec.integer())


def format_config(cfg: WedgeConfig) -> str:
    lines = [f"default {cfg.default.describe()}"]
    lines += [f"summand {j} {spec.describe()}" for j, spec in cfg.explicit.items()]
    return "\n".join(lines) + "\n"


def load_config(path) -> WedgeConfig:
    path = Path(path)
    return parse_config(path.read_text(), path.parent)
