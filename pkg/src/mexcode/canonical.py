"""Deterministic vertex ordering for expression graphs.

Operands of commutative operators are sorted by a structural key that
ignores symbol names, so expressions that differ only by renaming or by
reordering ``+``/``*`` operands get the same vertex order. When the key
cannot separate two operands, the ancestry of the symbols they touch is
compared next. Only when that also ties are names compared alphabetically,
and every such event is counted because it breaks renaming invariance.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import groupby
from typing import Any

from .config import TIE_BREAKS
from .errors import AmbiguousOrdering
from .graph import COMMUTATIVE, OP_NAMES, ExpressionGraph

OP_RANK = {name: rank for rank, name in enumerate(OP_NAMES)}

# operator subtrees sort before symbols, symbols before numbers
CLASS_RANK = {"Op": 0, "Sym": 1, "Num": 2}
LEAF_RANK = -1

StructuralKey = tuple[Any, ...]


@dataclass(frozen=True)
class CanonicalGraph(ExpressionGraph):
    """An expression graph whose vertex indices are the canonical order."""


def structural_keys(graph: ExpressionGraph) -> list[StructuralKey]:
    """Per-vertex keys ``(class_rank, op_rank, emitted_label, child_keys)``.

    Child keys are sorted for commutative operators and positional otherwise.
    """
    keys: list[StructuralKey | None] = [None] * len(graph.vertices)

    def key(v: int) -> StructuralKey:
        k = keys[v]
        if k is None:
            label = graph.vertices[v]
            if label.is_leaf:
                k = (CLASS_RANK[label.kind], LEAF_RANK, label.emitted, ())
            else:
                kids = tuple(key(c) for c in graph.child_order[v])
                if label.detail in COMMUTATIVE:
                    kids = tuple(sorted(kids))
                k = (0, OP_RANK[label.detail], label.emitted, kids)
            keys[v] = k
        return k

    return [key(v) for v in range(len(graph.vertices))]


class _Context:
    """Lazily computed facts used only when sibling keys tie."""

    def __init__(self, graph: ExpressionGraph):
        self.graph = graph
        n = len(graph.vertices)
        self.parent: list[int | None] = [None] * n
        self.occurrences: dict[int, list[tuple[int, int]]] = {}
        for p, kids in enumerate(graph.child_order):
            for pos, c in enumerate(kids):
                if graph.vertices[c].kind == "Sym":
                    self.occurrences.setdefault(c, []).append((p, pos))
                elif not graph.vertices[c].is_leaf:
                    self.parent[c] = p
        self._paths: dict[int, tuple[int, ...]] = {}
        self._texts: dict[int, str] = {}

    def path(self, op: int) -> tuple[int, ...]:
        """Operator ranks from ``op`` up to the root."""
        cached = self._paths.get(op)
        if cached is None:
            up = self.parent[op]
            here = (OP_RANK[self.graph.vertices[op].detail],)
            cached = here if up is None else here + self.path(up)
            self._paths[op] = cached
        return cached

    def inside(self, op: int, top: int) -> bool:
        while op is not None:
            if op == top:
                return True
            op = self.parent[op]
        return False

    def signature(self, parent: int, pos: int) -> tuple:
        """Where else the symbols under operand ``pos`` of ``parent`` occur."""
        child = self.graph.child_order[parent][pos]
        label = self.graph.vertices[child]
        if label.kind == "Sym":
            return tuple(sorted(
                self.path(q) for q, qpos in self.occurrences[child] if (q, qpos) != (parent, pos)
            ))
        if label.kind == "Num":
            return ()
        profiles = []
        for sym, occs in self.occurrences.items():
            inner = [q for q, _ in occs if self.inside(q, child)]
            if not inner:
                continue
            outer = tuple(sorted(self.path(q) for q, _ in occs if not self.inside(q, child)))
            profiles.extend([outer] * len(inner))
        return tuple(sorted(profiles))

    def text(self, v: int) -> str:
        """Name-bearing text of a subtree, independent of operand order."""
        cached = self._texts.get(v)
        if cached is None:
            label = self.graph.vertices[v]
            if label.is_leaf:
                cached = label.detail
            else:
                kids = [self.text(c) for c in self.graph.child_order[v]]
                if label.detail in COMMUTATIVE:
                    kids.sort()
                cached = f"{label.detail}({','.join(kids)})"
            self._texts[v] = cached
        return cached


def sort_children(graph: ExpressionGraph, tie_break: str = "alphabetical") -> ExpressionGraph:
    """Sort the operands of every Add and Mul vertex into canonical order.

    Raises AmbiguousOrdering under ``tie_break="reject"`` when two different
    operands can only be ordered by their names.
    """
    if tie_break not in TIE_BREAKS:
        raise ValueError(f"unknown tie_break policy {tie_break!r}")
    keys = structural_keys(graph)
    ctx: _Context | None = None
    events = 0
    order = list(graph.child_order)

    for v, kids in enumerate(graph.child_order):
        if len(kids) < 2 or graph.vertices[v].detail not in COMMUTATIVE:
            continue
        positions = sorted(range(len(kids)), key=lambda pos: keys[kids[pos]])
        result: list[int] = []
        for _, group in groupby(positions, key=lambda pos: keys[kids[pos]]):
            group = list(group)
            if len(group) == 1:
                result.extend(group)
                continue
            ctx = ctx or _Context(graph)
            by_sig = sorted(group, key=lambda pos: ctx.signature(v, pos))
            for _, tied in groupby(by_sig, key=lambda pos: ctx.signature(v, pos)):
                tied = list(tied)
                distinct = {ctx.text(kids[pos]) for pos in tied}
                if len(distinct) > 1:
                    if tie_break == "reject":
                        names = ", ".join(sorted(distinct))
                        raise AmbiguousOrdering(f"operands {names} of {graph.vertices[v].detail} "
                                                "can only be ordered by name")
                    events += len(distinct) - 1
                    tied.sort(key=lambda pos: ctx.text(kids[pos]))
                result.extend(tied)
        order[v] = tuple(kids[pos] for pos in result)

    return replace(graph, child_order=tuple(order), tie_break_events=events)


def order_vertices(graph: ExpressionGraph) -> CanonicalGraph:
    """Renumber vertices: leaves in first-visit order, then operators in post-order.

    The traversal is depth first from the root, following ``child_order``;
    a shared symbol takes the position of its first visit.
    """
    leaves: list[int] = []
    ops: list[int] = []
    seen: set[int] = set()

    stack: list[tuple[int, bool]] = [(graph.root, False)]
    while stack:
        v, expanded = stack.pop()
        if expanded:
            ops.append(v)
            continue
        if graph.vertices[v].is_leaf:
            if v not in seen:
                seen.add(v)
                leaves.append(v)
            continue
        stack.append((v, True))
        stack.extend((c, False) for c in reversed(graph.child_order[v]))

    new_order = leaves + ops
    index = {old: new for new, old in enumerate(new_order)}
    edges = frozenset(
        (min(index[i], index[j]), max(index[i], index[j])) for i, j in graph.edges
    )
    child_order = tuple(tuple(index[c] for c in graph.child_order[old]) for old in new_order)
    return CanonicalGraph(
        vertices=tuple(graph.vertices[old] for old in new_order),
        edges=edges,
        root=index[graph.root],
        child_order=child_order,
        tie_break_events=graph.tie_break_events,
    )


def canonicalize(graph: ExpressionGraph, tie_break: str = "alphabetical") -> CanonicalGraph:
    return order_vertices(sort_children(graph, tie_break))
