"""Exit criteria; each test records one PASS/FAIL line for the terminal summary."""

import io
import random
import time
from fractions import Fraction
from pathlib import Path

import pytest

from conftest import ACCEPTANCE
from mexcode.cli import run
from mexcode.encode import encode
from mexcode.expr import binarize, children, max_arity, rename_symbols, symbols, walk
from mexcode.canonical import canonicalize
from mexcode.graph import build_graph
from mexcode.index import CorpusEntry, index_build, index_query, load_index, save_index
from mexcode.oracle import RENAME_POOL, evaluate, gen_random_expr, rational_value
from mexcode.parser import parse_expression, unparse

POWER_SUM = "0010010011SymNumSymPowAdd"


@pytest.fixture
def record(request):
    state = {"detail": ""}
    yield state
    ok = request.node.rep_call.passed if hasattr(request.node, "rep_call") else False
    ACCEPTANCE.append((request.node.name, ok, state["detail"]))


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    status = run(list(argv), out, err)
    return status, out.getvalue(), err.getvalue()


def test_c01_golden_power_sum(record):
    status, out, _ = cli("encode", "x^2+y")
    assert (status, out) == (0, POWER_SUM + "\n")
    timings = []
    for _ in range(20):
        start = time.perf_counter()
        cli("encode", "x^2+y")
        timings.append(time.perf_counter() - start)
    best = min(timings)
    record["detail"] = f"{out.strip()} in {best * 1000:.2f} ms"
    assert best < 0.010


def test_c02_golden_table_rows(record):
    assert encode("(x+y)^2").code == "0010010011SymSymNumAddPow"
    assert encode("(2xy+5)/y").code == "000100001010100010101SymSymNumNumMulAddDiv"
    record["detail"] = "2 strings byte-exact"


def test_c03_trig_product(record):
    code = encode("sin(x)cos(x)")
    assert code.bits == "110011"
    assert code.labels == ("Sym", "Sin", "Cos", "Mul")
    assert code.code == "110011SymSinCosMul"
    readme = Path(__file__).resolve().parents[1] / "README.md"
    assert "110011SymSinCosAdd" in readme.read_text(encoding="utf-8")
    record["detail"] = code.code


def test_c04_renamed_pair(record):
    assert encode("a^2+b").code == encode("x+y^2").code == POWER_SUM
    status, out, _ = cli("compare", "a^2+b", "x+y^2")
    assert status == 0 and out.splitlines()[0] == "EQUAL"
    record["detail"] = "EQUAL"


def test_c05_renaming_invariance(record):
    start = time.perf_counter()
    rng = random.Random(42)
    untied = tied = mismatched = 0
    for _ in range(1000):
        ast = parse_expression(gen_random_expr(rng.getrandbits(64), 4, 4))
        names = symbols(ast)
        renamed = rename_symbols(ast, dict(zip(names, rng.sample(RENAME_POOL, len(names)))))
        base = canonicalize(build_graph(ast))
        if base.tie_break_events:
            tied += 1
            continue
        untied += 1
        mismatched += encode(unparse(ast)).code != encode(unparse(renamed)).code
    elapsed = time.perf_counter() - start
    record["detail"] = (
        f"{untied - mismatched}/{untied} tie-free identical, "
        f"tie_break_rate={tied / 1000:.3f}, {elapsed:.2f} s"
    )
    assert mismatched == 0
    assert elapsed < 10


@pytest.fixture(scope="module")
def report():
    start = time.perf_counter()
    rep = evaluate(1000, seed=42)
    return rep, time.perf_counter() - start


def test_c06_soundness(record, report):
    rep, elapsed = report
    record["detail"] = f"false_equal={rep.false_equal} over {rep.pairs_tested} pairs, {elapsed:.2f} s"
    assert rep.pairs_tested >= 1000
    assert rep.false_equal == 0
    assert elapsed < 60


def test_c07_twin_completeness(record, report):
    rep, _ = report
    record["detail"] = (
        f"missed_equal={rep.twin_missed_untied} over {rep.twin_untied_pairs} tie-free twins "
        f"(tie_break_rate={rep.tie_break_rate:.3f})"
    )
    assert rep.twin_untied_pairs > 0
    assert rep.twin_missed_untied == 0


def test_c08_binarize(record):
    rng = random.Random(8)
    checked = 0
    while checked < 200:
        ast = parse_expression(gen_random_expr(rng.getrandbits(64), 4, 4))
        if max_arity(ast) < 3:
            continue
        out = binarize(ast)
        assert all(len(children(n)) <= 2 for n in walk(out))
        for _ in range(20):
            env = {s: Fraction(rng.choice([-1, 1]) * rng.randint(1, 20), rng.randint(1, 20))
                   for s in symbols(ast)}
            assert rational_value(out, env) == rational_value(ast, env)
        checked += 1
    record["detail"] = "200 N-ary expressions x 20 assignments exact"


def test_c09_index_round_trip(record, tmp_path):
    rng = random.Random(9)
    corpus = [CorpusEntry("xy-square", "(x+y)^2"), CorpusEntry("greek-square", "(α+β)^2")]
    while len(corpus) < 100:
        corpus.append(CorpusEntry(f"g{len(corpus):03d}", gen_random_expr(rng.getrandbits(64), 4, 4)))
    path = tmp_path / "index.json"
    save_index(index_build(corpus), path)
    index = load_index(path)

    def hits(expr):
        return {i for i, d in index_query(index, expr, 100) if d == 0}

    assert "xy-square" in hits("(α+β)^2")
    assert "greek-square" in hits("(x+y)^2")
    assert all(entry.id in hits(entry.expression) for entry in corpus)
    record["detail"] = "100 entries self-retrieved at distance 0"


def test_c10_throughput(record):
    expressions = [gen_random_expr(seed, 6, 4) for seed in range(10_000)]
    start = time.perf_counter()
    for e in expressions:
        encode(e)
    elapsed = time.perf_counter() - start
    record["detail"] = f"10000 encodings in {elapsed:.2f} s"
    assert elapsed < 5
