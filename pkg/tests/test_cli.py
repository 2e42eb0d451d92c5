import io
import json
import subprocess
import sys

import pytest

from mexcode.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    status = run(list(argv), out, err)
    return status, out.getvalue(), err.getvalue()


def test_encode_golden():
    assert call("encode", "x^2+y") == (0, "0010010011SymNumSymPowAdd\n", "")


def test_encode_verbose_keeps_code_first():
    status, out, _ = call("encode", "x^2+y", "--verbose")
    assert status == 0
    assert out.splitlines() == [
        "0010010011SymNumSymPowAdd",
        "vertices\tx,2,y,Pow,Add",
        "row 0\t0010",
        "row 1\t010",
        "row 2\t01",
        "row 3\t1",
        "tie_break_events\t0",
    ]


def test_encode_parse_error_goes_to_stderr():
    status, out, err = call("encode", "x+")
    assert status == 1 and out == "" and "unexpected end of input" in err


def test_encode_binary_flag():
    # Add(Add(b, c), a): same adjacency shape as x^2+y
    assert call("encode", "a+b+c", "--binary")[1] == "0010010011SymSymSymAddAdd\n"


def test_encode_stdin(monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("x^2+y\nx+\n(x+y)^2\n"))
    status, out, err = call("encode", "--stdin")
    assert status == 1
    assert out == "0010010011SymNumSymPowAdd\n\n0010010011SymSymNumAddPow\n"
    assert err.startswith("line 2:")


def test_compare_equal():
    status, out, _ = call("compare", "a^2+b", "x+y^2")
    assert status == 0
    assert out.splitlines() == [
        "EQUAL",
        "code1\t0010010011SymNumSymPowAdd",
        "code2\t0010010011SymNumSymPowAdd",
        "distance\t0.000000",
    ]


def test_compare_distinct():
    status, out, _ = call("compare", "x^2+y", "(x+y)^2")
    assert status == 0 and out.splitlines()[0] == "DISTINCT"
    assert float(out.splitlines()[3].split("\t")[1]) > 0


def test_oracle():
    status, out, _ = call("oracle", "a^2+b", "x+y^2")
    assert status == 0 and out.splitlines()[0] == "ISOMORPHIC"
    assert out.splitlines()[1].startswith("witness\t")
    status, out, _ = call("oracle", "x+y", "x*y")
    assert out.splitlines()[0] == "NOT_ISOMORPHIC"


def test_oracle_too_large():
    status, _, err = call("oracle", "a+b+c+d+e+f+g+h+k+m+n+p", "x", "--limit", "12")
    assert status == 1 and "limit" in err


def test_eval_report_and_figure(tmp_path):
    fig = tmp_path / "eval.png"
    status, out, err = call("eval", "--pairs", "30", "--seed", "1", "--figure", str(fig))
    assert status == 0
    rows = dict(line.split() for line in out.splitlines())
    assert rows["pairs_tested"] == "60" and rows["false_equal"] == "0"
    assert len({line.index(line.split()[1]) for line in out.splitlines()}) == 1
    assert fig.stat().st_size > 0
    assert str(fig) in err


def test_usage_errors():
    assert call()[0] == 2
    assert call("encode")[0] == 2
    assert call("eval", "--pairs", "0", "--seed", "1")[0] == 2
    assert call("frobnicate")[0] == 2


def test_config_env_and_flag(tmp_path, monkeypatch):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("tie_break = reject\n")
    assert call("encode", "x+y", "--config", str(cfg))[0] == 1
    monkeypatch.setenv("MEXCODE_CONFIG", str(cfg))
    assert call("encode", "x+y")[0] == 1
    other = tmp_path / "d.cfg"
    other.write_text("tie_break = alphabetical\n")
    assert call("encode", "x+y", "--config", str(other)) == (0, "011SymSymAdd\n", "")


def test_missing_config_file():
    status, _, err = call("encode", "x", "--config", "/nonexistent/c.cfg")
    assert status == 1 and "cannot read config" in err


def test_index_build_and_query(tmp_path):
    corpus = tmp_path / "corpus.jsonl"
    rows = [
        {"id": "sq", "expression": "(x+y)^2", "metadata": {"standard": "A-SSE.2"}},
        {"id": "lin", "expression": "x+y"},
        {"id": "ps", "expression": "x^2+y"},
    ]
    corpus.write_text("\n".join(json.dumps(r) for r in rows) + "\n", encoding="utf-8")
    index = tmp_path / "idx.json"
    assert call("index-build", str(corpus), "-o", str(index)) == (0, "entries\t3\ncodes\t3\n", "")
    status, out, _ = call("index-query", str(index), "(α+β)^2", "-k", "2")
    assert status == 0
    lines = out.splitlines()
    assert lines[0] == "sq\t0.000000" and len(lines) == 2

    binary = tmp_path / "b.cfg"
    binary.write_text("mode = binary\n")
    status, _, err = call("index-query", str(index), "x+y", "--config", str(binary))
    assert status == 1 and "differs" in err


def test_index_build_bad_corpus(tmp_path):
    corpus = tmp_path / "corpus.jsonl"
    corpus.write_text('{"id": "a", "expression": "x+"}\n{"id": "a", "expression": "y"}\n')
    status, out, err = call("index-build", str(corpus), "-o", str(tmp_path / "i.json"))
    assert status == 1 and out == ""
    assert "duplicate corpus id 'a'" in err and "entry 'a'" in err


def test_deterministic_bytes():
    first = call("eval", "--pairs", "20", "--seed", "4")
    assert call("eval", "--pairs", "20", "--seed", "4") == first


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "mexcode", "encode", "(2xy+5)/y"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout == "000100001010100010101SymSymNumNumMulAddDiv\n"
    assert proc.stderr == ""
