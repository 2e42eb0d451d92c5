"""Command-line entry point.

Results go to stdout with the primary result on the first line; diagnostics
go to stderr. Exit status is 0 on success, 1 on domain errors and 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from typing import TextIO

from .config import CONFIG_ENV, EncoderConfig, load_config
from .encode import canonical_graph, code_distance, emit, encode, encoded_graph
from .errors import MexcodeError
from .index import index_build, index_query, load_index, read_corpus, save_index
from .oracle import DEFAULT_LIMIT, evaluate, iso_oracle
from .parser import parse_expression


def _config(args: argparse.Namespace) -> EncoderConfig:
    config = load_config(args.config)
    if getattr(args, "binary", False):
        config = dataclasses.replace(config, mode="binary")
    return config


def _vertex_name(label) -> str:
    return label.detail if label.is_leaf else label.emitted


def cmd_encode(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    config = _config(args)
    if args.stdin:
        status = 0
        for lineno, line in enumerate(sys.stdin, 1):
            try:
                out.write(encode(line.strip(), config).code + "\n")
            except MexcodeError as exc:
                out.write("\n")
                err.write(f"line {lineno}: {exc}\n")
                status = 1
        return status
    if args.expression is None:
        raise _Usage("encode needs an expression or --stdin")
    graph = canonical_graph(parse_expression(args.expression), config)
    code = emit(graph)
    out.write(code.code + "\n")
    if args.verbose:
        out.write("vertices\t" + ",".join(_vertex_name(v) for v in graph.vertices) + "\n")
        for i, row in enumerate(code.rows()):
            out.write(f"row {i}\t{row}\n")
        out.write(f"tie_break_events\t{graph.tie_break_events}\n")
    return 0


def cmd_compare(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    config = _config(args)
    a, b = encode(args.first, config), encode(args.second, config)
    out.write(("EQUAL" if a.code == b.code else "DISTINCT") + "\n")
    out.write(f"code1\t{a.code}\ncode2\t{b.code}\n")
    out.write(f"distance\t{float(code_distance(a, b)):.6f}\n")
    return 0


def cmd_oracle(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    config = _config(args)
    g1 = encoded_graph(parse_expression(args.first), config)
    g2 = encoded_graph(parse_expression(args.second), config)
    verdict = iso_oracle(g1, g2, args.limit)
    out.write(("ISOMORPHIC" if verdict.isomorphic else "NOT_ISOMORPHIC") + "\n")
    if verdict.witness is not None:
        pairs = (
            f"{_vertex_name(g1.vertices[i])}->{_vertex_name(g2.vertices[j])}"
            for i, j in enumerate(verdict.witness)
        )
        out.write("witness\t" + ",".join(pairs) + "\n")
    out.write(f"nodes_explored\t{verdict.nodes_explored}\n")
    return 0


def cmd_eval(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    if args.pairs < 1:
        raise _Usage("--pairs must be at least 1")
    report = evaluate(
        args.pairs, args.seed, _config(args),
        max_depth=args.max_depth, symbol_pool=args.pool, limit=args.limit, jobs=args.jobs,
    )
    lines = report.lines()
    width = max(len(k) for k, _ in lines)
    for key, value in lines:
        out.write(f"{key:<{width}}  {value}\n")
    if args.figure:
        from .report import plot_eval

        plot_eval(report, args.figure)
        err.write(f"figure written to {args.figure}\n")
    return 0


def cmd_index_build(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    index = index_build(read_corpus(args.corpus), _config(args))
    save_index(index, args.output)
    out.write(f"entries\t{len(index)}\ncodes\t{len(index.by_code)}\n")
    return 0


def cmd_index_query(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    if args.k < 1:
        raise _Usage("-k must be at least 1")
    index = load_index(args.index)
    # a query config is only checked against the index when one was actually supplied
    explicit = args.config is not None or bool(os.environ.get(CONFIG_ENV))
    config = _config(args) if explicit else None
    for entry_id, distance in index_query(index, args.expression, args.k, config):
        out.write(f"{entry_id}\t{float(distance):.6f}\n")
    return 0


class _Usage(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mexcode",
        description="Structural codes for mathematical expressions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, binary: bool = True) -> None:
        p.add_argument("--config", help="encoder config file (default: $MEXCODE_CONFIG)")
        if binary:
            p.add_argument("--binary", action="store_true", help="binarize N-ary sums and products")

    p = sub.add_parser("encode", help="print the code string of an expression")
    p.add_argument("expression", nargs="?")
    p.add_argument("--verbose", action="store_true", help="also print vertices and adjacency rows")
    p.add_argument("--stdin", action="store_true", help="encode one expression per stdin line")
    common(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("compare", help="compare the codes of two expressions")
    p.add_argument("first")
    p.add_argument("second")
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("oracle", help="exact isomorphism test of two expression graphs")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT, help="maximum vertex count")
    common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("eval", help="measure code accuracy against the oracle")
    p.add_argument("--pairs", type=int, required=True, help="number of trials")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-depth", type=int, default=4)
    p.add_argument("--pool", type=int, default=4, help="symbol pool size")
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--figure", help="also render a PNG/PDF summary figure to this path")
    common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("index-build", help="build an index from a JSON Lines corpus")
    p.add_argument("corpus")
    p.add_argument("-o", "--output", required=True)
    common(p)
    p.set_defaults(func=cmd_index_build)

    p = sub.add_parser("index-query", help="rank index entries against an expression")
    p.add_argument("index")
    p.add_argument("expression")
    p.add_argument("-k", type=int, default=10)
    common(p, binary=False)
    p.set_defaults(func=cmd_index_query)
    return parser


def run(argv: list[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out, err)
    except _Usage as exc:
        err.write(f"mexcode {args.command}: {exc}\n")
        return 2
    except (MexcodeError, OSError) as exc:
        err.write(f"mexcode {args.command}: error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())
