"""Brute-force labeled graph isomorphism and the encoder accuracy harness."""

from __future__ import annotations

import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .config import EncoderConfig
from .encode import canonical_graph, emit, encoded_graph
from .errors import TooLarge
from .expr import (
    FUNCTIONS, Add, Ast, Div, Func, Mul, Neg, Num, Pow, Sym,
    rename_symbols, shuffle_commutative, symbols,
)
from .graph import ExpressionGraph, build_graph
from .parser import GREEK, parse_expression, unparse

DEFAULT_LIMIT = 12

SYMBOL_POOL = tuple("xyzwabcdfghkmnpqrstuv") + GREEK
# rename targets include Greek glyphs so twins also exercise non-ASCII names
RENAME_POOL = SYMBOL_POOL + tuple("αβγδεζηθικλμνξπρστυφχψω")

OPERATORS = ("Add", "Mul", "Div", "Pow", "Neg") + tuple(f.capitalize() for f in FUNCTIONS)


@dataclass(frozen=True)
class IsoVerdict:
    isomorphic: bool
    witness: tuple[int, ...] | None = None
    nodes_explored: int = 0


def iso_oracle(g1: ExpressionGraph, g2: ExpressionGraph, limit: int = DEFAULT_LIMIT) -> IsoVerdict:
    """Decide labeled isomorphism of two undirected graphs by exhaustive search.

    Only bijections that map each vertex to one with the same emitted label
    and the same degree are tried. ``witness[i]`` is the image in ``g2`` of
    vertex ``i`` of ``g1``.
    """
    for g in (g1, g2):
        if len(g) > limit:
            raise TooLarge(len(g), limit)
    if len(g1) != len(g2) or len(g1.edges) != len(g2.edges):
        return IsoVerdict(False)
    labels1, labels2 = g1.emitted_labels(), g2.emitted_labels()
    if Counter(labels1) != Counter(labels2):
        return IsoVerdict(False)

    adj1, adj2 = g1.neighbors(), g2.neighbors()
    profile1 = [(labels1[v], len(adj1[v])) for v in range(len(g1))]
    profile2 = [(labels2[v], len(adj2[v])) for v in range(len(g2))]
    if Counter(profile1) != Counter(profile2):
        return IsoVerdict(False)

    candidates = {p: [w for w in range(len(g2)) if profile2[w] == p] for p in set(profile1)}
    # most constrained vertices first
    order = sorted(range(len(g1)), key=lambda v: (len(candidates[profile1[v]]), -len(adj1[v])))
    mapping: dict[int, int] = {}
    used: set[int] = set()
    explored = 0

    def extend(depth: int) -> bool:
        nonlocal explored
        if depth == len(order):
            return True
        v = order[depth]
        for w in candidates[profile1[v]]:
            if w in used:
                continue
            explored += 1
            if all((mapping[u] in adj2[w]) == (u in adj1[v]) for u in mapping):
                mapping[v] = w
                used.add(w)
                if extend(depth + 1):
                    return True
                del mapping[v]
                used.discard(w)
        return False

    if extend(0):
        return IsoVerdict(True, tuple(mapping[v] for v in range(len(g1))), explored)
    return IsoVerdict(False, None, explored)


def adjacency_bits(graph: ExpressionGraph, order: list[int] | None = None) -> str:
    """Upper-triangular bits of the full adjacency matrix under a vertex order."""
    order = list(range(len(graph))) if order is None else order
    n = len(order)
    matrix = [[0] * n for _ in range(n)]
    pos = {v: i for i, v in enumerate(order)}
    for a, b in graph.edges:
        matrix[pos[a]][pos[b]] = matrix[pos[b]][pos[a]] = 1
    return "".join(str(matrix[i][j]) for i in range(n) for j in range(i + 1, n))


def _random_ast(rng: random.Random, depth: int, pool: tuple[str, ...], ops: tuple[str, ...]) -> Ast:
    if depth <= 1 or rng.random() < 0.2:
        if rng.random() < 0.65:
            return Sym(rng.choice(pool))
        return Num(str(rng.randint(1, 9)))
    op = rng.choice(ops)
    sub = lambda: _random_ast(rng, depth - 1, pool, ops)  # noqa: E731
    if op in ("Add", "Mul"):
        kids = tuple(sub() for _ in range(rng.randint(2, 3)))
        return Add(kids) if op == "Add" else Mul(kids)
    if op == "Div":
        return Div(sub(), sub())
    if op == "Pow":
        return Pow(sub(), sub())
    if op == "Neg":
        return Neg(sub())
    return Func(op.lower(), sub())


def gen_random_expr(
    seed: int | str,
    max_depth: int,
    symbol_pool: int,
    ops: tuple[str, ...] = OPERATORS,
    max_vertices: int = DEFAULT_LIMIT,
) -> str:
    """Random grammatical expression text, deterministic in ``seed``.

    Operators are drawn uniformly from ``ops``; Add and Mul get two or three
    operands. For ``max_depth <= 4`` drafts whose graph exceeds
    ``max_vertices`` are discarded and redrawn.
    """
    if max_depth < 1 or symbol_pool < 1:
        raise ValueError("max_depth and symbol_pool must be at least 1")
    if symbol_pool > len(SYMBOL_POOL):
        raise ValueError(f"symbol_pool may not exceed {len(SYMBOL_POOL)}")
    unknown = set(ops) - set(OPERATORS)
    if unknown:
        raise ValueError(f"unknown operators {sorted(unknown)}")
    rng = random.Random(seed)
    pool = SYMBOL_POOL[:symbol_pool]
    while True:
        text = unparse(_random_ast(rng, max_depth, pool, ops))
        if max_depth > 4 or len(build_graph(parse_expression(text))) <= max_vertices:
            return text


def make_twin(ast: Ast, rng: random.Random, config: EncoderConfig | None = None) -> Ast:
    """Bijectively rename free symbols and shuffle commutative operands."""
    config = config or EncoderConfig()
    names = [s for s in symbols(ast) if s not in config.preserve_symbols]
    targets = [t for t in RENAME_POOL if t not in config.preserve_symbols]
    mapping = dict(zip(names, rng.sample(targets, len(names))))
    return shuffle_commutative(rename_symbols(ast, mapping), rng)


# uninterpreted stand-ins keep evaluation exact for operators with no rational value
def _opaque(tag: int, *args: Fraction) -> Fraction:
    return sum((a * (tag + i + 2) for i, a in enumerate(args)), Fraction(1, tag + 3))


_FUNC_TAG = {name: i for i, name in enumerate(FUNCTIONS)}
UNDEFINED = "undefined"


def rational_value(ast: Ast, env: Mapping[str, Fraction]) -> Fraction | str:
    """Exact value of ``ast`` under ``env``; ``UNDEFINED`` on division by zero.

    Functions and non-integer powers are replaced by fixed affine maps, so
    the value is exact but only meaningful for comparing two ASTs that share
    those operators.
    """

    def ev(n: Ast) -> Fraction:
        if isinstance(n, Num):
            return Fraction(n.text)
        if isinstance(n, Sym):
            return Fraction(env[n.name])
        if isinstance(n, Neg):
            return -ev(n.child)
        if isinstance(n, Add):
            return sum((ev(c) for c in n.children), Fraction(0))
        if isinstance(n, Mul):
            out = Fraction(1)
            for c in n.children:
                out *= ev(c)
            return out
        if isinstance(n, Div):
            return ev(n.numerator) / ev(n.denominator)
        if isinstance(n, Pow):
            base, exp = ev(n.base), ev(n.exponent)
            if exp.denominator == 1 and abs(exp) <= 16 and (base != 0 or exp >= 0):
                return base ** int(exp)
            return _opaque(len(FUNCTIONS), base, exp)
        if isinstance(n, Func):
            return _opaque(_FUNC_TAG[n.name], ev(n.child))
        raise TypeError(f"not an expression node: {n!r}")

    try:
        return ev(ast)
    except ZeroDivisionError:
        return UNDEFINED


@dataclass(frozen=True)
class EvalReport:
    pairs_tested: int = 0
    false_equal: int = 0
    missed_equal: int = 0
    tie_break_rate: float = 0.0
    expressions: int = 0
    tied_expressions: int = 0
    twin_pairs: int = 0
    twin_missed_untied: int = 0
    twin_untied_pairs: int = 0
    # vertex count -> (expressions, expressions with a name tie-break)
    by_size: dict[int, tuple[int, int]] = field(default_factory=dict)

    def lines(self) -> list[tuple[str, str]]:
        return [
            ("pairs_tested", str(self.pairs_tested)),
            ("false_equal", str(self.false_equal)),
            ("missed_equal", str(self.missed_equal)),
            ("tie_break_rate", f"{self.tie_break_rate:.4f}"),
            ("expressions", str(self.expressions)),
            ("twin_pairs", str(self.twin_pairs)),
            ("twin_untied_pairs", str(self.twin_untied_pairs)),
            ("twin_missed_untied", str(self.twin_missed_untied)),
        ]


@dataclass
class _Trial:
    pairs: int = 0
    false_equal: int = 0
    missed_equal: int = 0
    twin_missed_untied: int = 0
    twin_untied: int = 0
    sizes: list[tuple[int, bool]] = field(default_factory=list)


def _draw(rng: random.Random, config: EncoderConfig, max_depth: int, pool: int, limit: int) -> Ast:
    # binary mode adds operator vertices, so the size check is on the encoded graph
    while True:
        ast = parse_expression(gen_random_expr(rng.getrandbits(64), max_depth, pool))
        if len(encoded_graph(ast, config)) <= limit:
            return ast


def _trial(args: tuple[int, int, EncoderConfig, int, int, int]) -> _Trial:
    seed, index, config, max_depth, pool, limit = args
    rng = random.Random(f"{seed}:{index}")
    first = _draw(rng, config, max_depth, pool, limit)
    twin = make_twin(first, rng, config)
    other = _draw(rng, config, max_depth, pool, limit)

    out = _Trial()
    encoded = []
    for ast in (first, twin, other):
        graph = encoded_graph(ast, config)
        canon = canonical_graph(ast, config)
        code, tied = emit(canon), canon.tie_break_events > 0
        encoded.append((graph, code, tied))
        out.sizes.append((len(graph), tied))

    for partner, is_twin in ((encoded[1], True), (encoded[2], False)):
        g1, c1, t1 = encoded[0]
        g2, c2, t2 = partner
        same_code = c1.code == c2.code
        iso = iso_oracle(g1, g2, limit).isomorphic
        out.pairs += 1
        out.false_equal += same_code and not iso
        out.missed_equal += iso and not same_code
        if is_twin and not (t1 or t2):
            out.twin_untied += 1
            out.twin_missed_untied += not same_code
    return out


def evaluate(
    n_pairs: int,
    seed: int,
    config: EncoderConfig | None = None,
    max_depth: int = 4,
    symbol_pool: int = 4,
    limit: int = DEFAULT_LIMIT,
    jobs: int = 1,
) -> EvalReport:
    """Compare code equality against the oracle over random trials.

    Each trial draws one expression, pairs it with a renamed and shuffled
    twin and with an independent draw, giving two pairs per trial.
    """
    if n_pairs < 1:
        raise ValueError("n_pairs must be at least 1")
    config = config or EncoderConfig()
    tasks = [(seed, i, config, max_depth, symbol_pool, limit) for i in range(n_pairs)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            trials = list(pool.map(_trial, tasks, chunksize=32))
    else:
        trials = [_trial(t) for t in tasks]

    by_size: dict[int, list[int]] = {}
    for t in trials:
        for size, tied in t.sizes:
            bucket = by_size.setdefault(size, [0, 0])
            bucket[0] += 1
            bucket[1] += tied
    expressions = sum(len(t.sizes) for t in trials)
    tied = sum(tied for t in trials for _, tied in t.sizes)
    return EvalReport(
        pairs_tested=sum(t.pairs for t in trials),
        false_equal=sum(t.false_equal for t in trials),
        missed_equal=sum(t.missed_equal for t in trials),
        tie_break_rate=tied / expressions,
        expressions=expressions,
        tied_expressions=tied,
        twin_pairs=len(trials),
        twin_missed_untied=sum(t.twin_missed_untied for t in trials),
        twin_untied_pairs=sum(t.twin_untied for t in trials),
        by_size={k: (v[0], v[1]) for k, v in sorted(by_size.items())},
    )
