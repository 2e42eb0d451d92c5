"""Code strings: upper-triangular adjacency bits followed by vertex labels."""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from fractions import Fraction

from .canonical import CanonicalGraph, canonicalize
from .config import EncoderConfig
from .errors import MalformedCode
from .expr import Ast, binarize
from .graph import OP_NAMES, ExpressionGraph, build_graph, graph_to_ast
from .parser import GREEK, parse_expression


@dataclass(frozen=True)
class CanonicalCode:
    bits: str
    labels: tuple[str, ...]

    @property
    def code(self) -> str:
        return self.bits + "".join(self.labels)

    @property
    def size(self) -> int:
        return len(self.labels)

    def rows(self) -> list[str]:
        """Upper-triangular rows; row ``i`` covers columns ``i+1 .. n-1``."""
        out, start = [], 0
        for i in range(self.size - 1):
            width = self.size - 1 - i
            out.append(self.bits[start:start + width])
            start += width
        return out

    def __str__(self) -> str:
        return self.code


def encoded_graph(ast: Ast, config: EncoderConfig | None = None) -> ExpressionGraph:
    """The labeled graph an expression is encoded from, in its original vertex order."""
    return _prepare(ast, config or EncoderConfig())[0]


def _prepare(ast: Ast, config: EncoderConfig) -> tuple[ExpressionGraph, int]:
    graph = build_graph(ast, config)
    if config.mode != "binary":
        return graph, 0
    # settle operand order first so the binary nesting does not depend on input order
    ordered = canonicalize(graph, config.tie_break)
    return build_graph(binarize(graph_to_ast(ordered)), config), ordered.tie_break_events


def canonical_graph(ast: Ast, config: EncoderConfig | None = None) -> CanonicalGraph:
    """Run graph construction and canonical ordering for an AST."""
    config = config or EncoderConfig()
    graph, earlier_events = _prepare(ast, config)
    result = canonicalize(graph, config.tie_break)
    if earlier_events:
        result = replace(result, tie_break_events=result.tie_break_events + earlier_events)
    return result


def emit(graph: CanonicalGraph) -> CanonicalCode:
    n = len(graph.vertices)
    edges = graph.edges
    bits = "".join(
        "1" if (i, j) in edges else "0" for i in range(n - 1) for j in range(i + 1, n)
    )
    return CanonicalCode(bits, graph.emitted_labels())


def encode_ast(ast: Ast, config: EncoderConfig | None = None) -> CanonicalCode:
    return emit(canonical_graph(ast, config))


def encode(expression: str, config: EncoderConfig | None = None) -> CanonicalCode:
    """Encode an infix expression.

    >>> encode("x^2+y").code
    '0010010011SymNumSymPowAdd'
    """
    return encode_ast(parse_expression(expression), config)


_GREEK_ALT = "|".join(sorted(GREEK, key=len, reverse=True))
_LABEL = re.compile(
    rf"Sym:(?:{_GREEK_ALT}|[^\W\d_])|Num:[0-9]+(?:\.[0-9]+)?|Sym|Num|"
    + "|".join(OP_NAMES)
)
_BITS = re.compile(r"[01]*")


def parse_code(code: str) -> CanonicalCode:
    """Split a code string back into its bits and labels."""
    bits = _BITS.match(code).group()
    labels: list[str] = []
    pos = len(bits)
    while pos < len(code):
        m = _LABEL.match(code, pos)
        if m is None:
            raise MalformedCode(f"unrecognised label at offset {pos} in {code!r}")
        labels.append(m.group())
        pos = m.end()
    n = len(labels)
    if n == 0:
        raise MalformedCode(f"no vertex labels in {code!r}")
    if len(bits) != n * (n - 1) // 2:
        raise MalformedCode(
            f"{n} labels need {n * (n - 1) // 2} adjacency bits, found {len(bits)}"
        )
    return CanonicalCode(bits, tuple(labels))


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance with a two-row table."""
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def code_distance(a: CanonicalCode | str, b: CanonicalCode | str) -> Fraction:
    """Edit distance between two code strings, divided by the longer length."""
    sa, sb = str(a), str(b)
    longest = max(len(sa), len(sb))
    if longest == 0:
        return Fraction(0)
    return Fraction(edit_distance(sa, sb), longest)
