"""Expression AST node types and small structural helpers."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterator, Union

FUNCTIONS = ("sin", "cos", "tan", "log", "exp", "sqrt")


@dataclass(frozen=True)
class Num:
    text: str


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class Neg:
    child: "Ast"


@dataclass(frozen=True)
class Func:
    name: str
    child: "Ast"


@dataclass(frozen=True)
class Pow:
    base: "Ast"
    exponent: "Ast"


@dataclass(frozen=True)
class Div:
    numerator: "Ast"
    denominator: "Ast"


@dataclass(frozen=True)
class Add:
    children: tuple["Ast", ...]


@dataclass(frozen=True)
class Mul:
    children: tuple["Ast", ...]


Ast = Union[Num, Sym, Neg, Func, Pow, Div, Add, Mul]


def children(node: Ast) -> tuple[Ast, ...]:
    """Operands of ``node`` in written order."""
    if isinstance(node, (Add, Mul)):
        return node.children
    if isinstance(node, (Neg, Func)):
        return (node.child,)
    if isinstance(node, Pow):
        return (node.base, node.exponent)
    if isinstance(node, Div):
        return (node.numerator, node.denominator)
    return ()


def rebuild(node: Ast, new_children: tuple[Ast, ...]) -> Ast:
    """Same node kind as ``node`` with operands replaced."""
    if isinstance(node, Add):
        return Add(tuple(new_children))
    if isinstance(node, Mul):
        return Mul(tuple(new_children))
    if isinstance(node, Neg):
        return Neg(new_children[0])
    if isinstance(node, Func):
        return Func(node.name, new_children[0])
    if isinstance(node, Pow):
        return Pow(new_children[0], new_children[1])
    if isinstance(node, Div):
        return Div(new_children[0], new_children[1])
    return node


def walk(node: Ast) -> Iterator[Ast]:
    """Pre-order iteration over every node."""
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(children(n)))


def transform(node: Ast, fn: Callable[[Ast], Ast]) -> Ast:
    """Bottom-up rewrite: ``fn`` sees each node after its operands were rewritten."""
    kids = children(node)
    if kids:
        node = rebuild(node, tuple(transform(c, fn) for c in kids))
    return fn(node)


def symbols(node: Ast) -> list[str]:
    """Distinct symbol names in first-occurrence order."""
    seen: dict[str, None] = {}
    for n in walk(node):
        if isinstance(n, Sym):
            seen.setdefault(n.name, None)
    return list(seen)


def rename_symbols(node: Ast, mapping: dict[str, str]) -> Ast:
    def fn(n: Ast) -> Ast:
        if isinstance(n, Sym):
            return Sym(mapping.get(n.name, n.name))
        return n

    return transform(node, fn)


def shuffle_commutative(node: Ast, rng: random.Random) -> Ast:
    """Randomly permute the operands of every Add and Mul."""

    def fn(n: Ast) -> Ast:
        if isinstance(n, (Add, Mul)):
            kids = list(n.children)
            rng.shuffle(kids)
            return rebuild(n, tuple(kids))
        return n

    return transform(node, fn)


def flatten(node: Ast) -> Ast:
    """Merge nested Add-in-Add and Mul-in-Mul into single N-ary nodes."""

    def fn(n: Ast) -> Ast:
        if isinstance(n, (Add, Mul)):
            merged: list[Ast] = []
            for c in n.children:
                if type(c) is type(n):
                    merged.extend(children(c))
                else:
                    merged.append(c)
            return rebuild(n, tuple(merged))
        return n

    return transform(node, fn)


def binarize(node: Ast) -> Ast:
    """Rewrite every N-ary Add/Mul as nested binary nodes.

    ``T(c0, c1, ..., cn)`` becomes ``T(T(...T(c_{n-1}, c_n)..., c1), c0)``:
    the innermost node pairs the last two operands and each enclosing
    node pairs the partial result with the next operand towards the front.
    """

    def fn(n: Ast) -> Ast:
        if isinstance(n, (Add, Mul)) and len(n.children) > 2:
            kids = n.children
            acc = rebuild(n, (kids[-2], kids[-1]))
            for c in reversed(kids[:-2]):
                acc = rebuild(n, (acc, c))
            return acc
        return n

    return transform(node, fn)


def operator_count(node: Ast) -> int:
    return sum(1 for n in walk(node) if not isinstance(n, (Num, Sym)))


def max_arity(node: Ast) -> int:
    return max((len(children(n)) for n in walk(node)), default=0)
