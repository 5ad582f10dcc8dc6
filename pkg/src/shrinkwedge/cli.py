"""Command-line interface.

Exit status: 0 for results and definitive verdicts, 2 for inconclusive
verdicts, 1 for input errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import corpus as corpus_mod
from .covers import CopyError, StabilizationError, build_atlas, emit_atlas_dot, stabilize, tree_translate
from .freeprod import EMPTY, decompose_nt, enumerate_nt, format_word, invert, multiply, parse_word
from .summands import GroupError, ParseError, WedgeConfig, load_config, parse_literal
from .transfinite import ExprError, equal_up_to, parse_expr, project_expr
from .whisker import InconclusiveComparison, MalformedSupport, in_theta_image, load_theta

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


class InputError(ValueError):
    pass


def _inputs(args) -> list:
    if args.inputs:
        return list(args.inputs)
    return [line for line in sys.stdin.read().splitlines() if line.split("#", 1)[0].strip()]


def _alphabets(specs, cfg: WedgeConfig):
    if not specs:
        return None
    out = {}
    for spec in specs:
        head, sep, body = spec.partition(":")
        if not sep or not head.isdigit():
            raise InputError(f"bad --alphabet {spec!r}, expected j:g1;g2;...")
        j = int(head)
        try:
            out[j] = [cfg.summand(j).normalize(parse_literal(g)) for g in body.split(";") if g]
        except ValueError as exc:
            raise InputError(f"bad --alphabet {spec!r}: {exc}") from None
    return out


def _need(values: list, n: int, what: str) -> list:
    if len(values) != n:
        raise InputError(f"{what} needs exactly {n} input(s), got {len(values)}")
    return values


def cmd_reduce(args, cfg, out):
    for text in _inputs(args):
        out.write(format_word(parse_word(text, cfg), cfg) + "\n")
    return EXIT_OK


def cmd_mul(args, cfg, out):
    words = [parse_word(t, cfg) for t in _inputs(args)]
    acc = EMPTY
    for w in words:
        acc = multiply(acc, w, cfg)
    out.write(format_word(acc, cfg) + "\n")
    return EXIT_OK


def cmd_inv(args, cfg, out):
    for text in _inputs(args):
        out.write(format_word(invert(parse_word(text, cfg), cfg), cfg) + "\n")
    return EXIT_OK


def cmd_project(args, cfg, out):
    for text in _inputs(args):
        out.write(format_word(project_expr(parse_expr(text), args.level, cfg), cfg) + "\n")
    return EXIT_OK


def cmd_equal(args, cfg, out):
    a, b = (parse_expr(t) for t in _need(_inputs(args), 2, "equal"))
    if a == b:
        out.write("identical\n")
        return EXIT_OK
    verdict = equal_up_to(a, b, args.upto, cfg)
    out.write(f"{verdict}\n")
    return EXIT_INCONCLUSIVE if verdict.agree else EXIT_OK


def cmd_decompose(args, cfg, out):
    spec = cfg.summand(args.summand)
    for text in _inputs(args):
        split = decompose_nt(parse_word(text, cfg), args.summand, cfg)
        tail = "e" if spec.is_identity(split.tail) else f"{args.summand}:{spec.format(split.tail)}"
        out.write(f"prefix {format_word(split.prefix, cfg)}\ntail {tail}\n")
    return EXIT_OK


def cmd_stabilize(args, cfg, out):
    (text,) = _need(_inputs(args), 1, "stabilize")
    w = parse_expr(text)
    try:
        report = stabilize(w, args.summand, args.upto, cfg)
    except StabilizationError as exc:
        if exc.report is None:
            raise InputError(str(exc)) from None
        out.write(exc.report.format(cfg))
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    out.write(report.format(cfg))
    return EXIT_OK


def cmd_atlas(args, cfg, out):
    atlas = build_atlas(args.level, args.maxlen, cfg, _alphabets(args.alphabet, cfg))
    for c in atlas.copies:
        beta = tree_translate(c, cfg)
        spec = cfg.summand(c.summand)
        b = "e" if spec.is_identity(beta) else f"{c.summand}:{spec.format(beta)}"
        out.write(f"copy {c.summand} {format_word(c.index, cfg)} beta {b}\n")
    for a, b, p in atlas.attachments:
        out.write(f"attach {a.format(cfg)} {b.format(cfg)} at {format_word(p, cfg)}\n")
    if args.dot:
        Path(args.dot).write_text(emit_atlas_dot(atlas, cfg))
    return EXIT_OK


def cmd_nt_enum(args, cfg, out):
    for w in enumerate_nt(args.level, args.summand, args.maxlen, cfg, _alphabets(args.alphabet, cfg)):
        out.write(format_word(w, cfg) + "\n")
    return EXIT_OK


def cmd_theta_check(args, cfg, out):
    el = load_theta(args.theta)
    verdict = in_theta_image(el, args.upto)
    out.write(f"{verdict}\n")
    return EXIT_INCONCLUSIVE if verdict.status == "inconclusive" else EXIT_OK


def cmd_corpus(args, cfg, out):
    for path in corpus_mod.write_corpus(args.name, Path(args.out)):
        out.write(f"{path}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shrinkwedge", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="wedge configuration file (default: 'default integer')")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, inputs=True):
        p = sub.add_parser(name)
        p.set_defaults(func=func)
        if inputs:
            p.add_argument("inputs", nargs="*", help="words or expressions (default: one per stdin line)")
        return p

    add("reduce", cmd_reduce)
    add("mul", cmd_mul)
    add("inv", cmd_inv)
    add("project", cmd_project).add_argument("--level", type=int, required=True)
    add("equal", cmd_equal).add_argument("--upto", type=int, required=True)
    add("decompose", cmd_decompose).add_argument("--summand", type=int, required=True)
    p = add("stabilize", cmd_stabilize)
    p.add_argument("--summand", type=int, required=True)
    p.add_argument("--upto", type=int, required=True)
    p = add("atlas", cmd_atlas, inputs=False)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--maxlen", type=int, required=True)
    p.add_argument("--dot", help="write the atlas as a DOT graph to this path")
    p.add_argument("--alphabet", action="append", help="finite alphabet for an infinite summand, j:g1;g2;...")
    p = add("nt-enum", cmd_nt_enum, inputs=False)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--summand", type=int, required=True)
    p.add_argument("--maxlen", type=int, required=True)
    p.add_argument("--alphabet", action="append", help="finite alphabet for an infinite summand, j:g1;g2;...")
    p = add("theta-check", cmd_theta_check, inputs=False)
    p.add_argument("theta", help="theta element file")
    p.add_argument("--upto", type=int, help="certification level (default: the file's level)")
    p = add("corpus", cmd_corpus, inputs=False)
    p.add_argument("name", choices=corpus_mod.NAMES)
    p.add_argument("--out", default=".", help="directory for the fixture files")
    return parser


def _validate(args) -> None:
    for name in ("level", "upto", "summand"):
        value = getattr(args, name, None)
        if value is not None and value < 1:
            raise InputError(f"--{name} must be a positive integer")
    if getattr(args, "maxlen", None) is not None and args.maxlen < 0:
        raise InputError("--maxlen must be >= 0")


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        _validate(args)
        cfg = load_config(args.config) if args.config else WedgeConfig()
        return args.func(args, cfg, out)
    except (
        ParseError, GroupError, ExprError, CopyError, MalformedSupport,
        InconclusiveComparison, StabilizationError, InputError, OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
