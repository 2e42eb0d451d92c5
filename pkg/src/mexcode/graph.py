"""Expression graphs: operator vertices plus one shared vertex per symbol name."""

from __future__ import annotations

from dataclasses import dataclass

from .config import EncoderConfig
from .expr import Add, Ast, Div, Func, Mul, Neg, Num, Pow, Sym, children

OP_NAMES = ("Pow", "Mul", "Div", "Add", "Neg", "Sin", "Cos", "Tan", "Log", "Exp", "Sqrt")
COMMUTATIVE = frozenset({"Add", "Mul"})

_KIND_TO_OP = {Add: "Add", Mul: "Mul", Div: "Div", Pow: "Pow", Neg: "Neg"}


@dataclass(frozen=True)
class VertexLabel:
    kind: str  # "Sym" | "Num" | "Op"
    detail: str
    preserved: bool = False

    @property
    def emitted(self) -> str:
        if self.kind == "Op":
            return self.detail
        if self.preserved:
            return f"{self.kind}:{self.detail}"
        return self.kind

    @property
    def is_leaf(self) -> bool:
        return self.kind != "Op"


@dataclass(frozen=True)
class ExpressionGraph:
    vertices: tuple[VertexLabel, ...]
    edges: frozenset[tuple[int, int]]
    root: int
    child_order: tuple[tuple[int, ...], ...]
    tie_break_events: int = 0

    def __len__(self) -> int:
        return len(self.vertices)

    def neighbors(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in self.vertices]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def emitted_labels(self) -> tuple[str, ...]:
        return tuple(v.emitted for v in self.vertices)


def op_name(node: Ast) -> str:
    if isinstance(node, Func):
        return node.name.capitalize()
    return _KIND_TO_OP[type(node)]


def build_graph(ast: Ast, config: EncoderConfig | None = None) -> ExpressionGraph:
    """Turn an AST into an expression graph.

    Every operator node and every numeric literal occurrence becomes its own
    vertex; all occurrences of one symbol name share a single vertex.
    """
    config = config or EncoderConfig()
    vertices: list[VertexLabel] = []
    order: list[tuple[int, ...]] = []
    sym_index: dict[str, int] = {}

    def add_vertex(label: VertexLabel) -> int:
        vertices.append(label)
        order.append(())
        return len(vertices) - 1

    def visit(node: Ast, exponent: bool) -> int:
        if isinstance(node, Sym):
            if node.name not in sym_index:
                keep = node.name in config.preserve_symbols
                sym_index[node.name] = add_vertex(VertexLabel("Sym", node.name, keep))
            return sym_index[node.name]
        if isinstance(node, Num):
            keep = node.text in config.preserve_numbers or (
                exponent and node.text in config.preserve_exponents
            )
            return add_vertex(VertexLabel("Num", node.text, keep))
        v = add_vertex(VertexLabel("Op", op_name(node)))
        kids = children(node)
        order[v] = tuple(
            visit(c, isinstance(node, Pow) and pos == 1) for pos, c in enumerate(kids)
        )
        return v

    root = visit(ast, False)
    edges = frozenset(
        (min(p, c), max(p, c)) for p, kids in enumerate(order) for c in kids
    )
    return ExpressionGraph(tuple(vertices), edges, root, tuple(order))


def graph_to_ast(graph: ExpressionGraph) -> Ast:
    """Rebuild an AST from a graph, reading operands in ``child_order``."""

    def visit(v: int) -> Ast:
        label = graph.vertices[v]
        if label.kind == "Sym":
            return Sym(label.detail)
        if label.kind == "Num":
            return Num(label.detail)
        kids = [visit(c) for c in graph.child_order[v]]
        name = label.detail
        if name in ("Add", "Mul"):
            return (Add if name == "Add" else Mul)(tuple(kids))
        if name == "Div":
            return Div(*kids)
        if name == "Pow":
            return Pow(*kids)
        if name == "Neg":
            return Neg(kids[0])
        return Func(name.lower(), kids[0])

    return visit(graph.root)
