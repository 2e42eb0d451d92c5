import json
from fractions import Fraction

import pytest

from mexcode.config import EncoderConfig
from mexcode.errors import (
    ConfigMismatch, DuplicateId, EntryParseError, IndexBuildError, IndexFormatError,
)
from mexcode.index import (
    CorpusEntry, index_build, index_query, load_index, read_corpus, save_index,
)

POWER_SUM = "0010010011SymNumSymPowAdd"


def entries(**exprs):
    return [CorpusEntry(k, v) for k, v in exprs.items()]


def test_equal_structure_shares_a_code():
    index = index_build(entries(e1="(x+y)^2", e2="(a+b)^2"))
    assert list(index.by_code.values()) == [("e1", "e2")]


def test_power_sum_group():
    index = index_build(entries(e1="x^2+y", e2="a^2+b"))
    assert index.by_code == {POWER_SUM: ("e1", "e2")}


def test_empty_corpus():
    index = index_build([])
    assert len(index) == 0 and index.by_code == {}
    assert index_query(index, "x+y", 5) == []


def test_greek_query_finds_latin_entry():
    index = index_build(entries(sq="(x+y)^2", lin="x+y", cube="(x+y)^3*z"))
    results = index_query(index, "(α+β)^2", 3)
    assert results[0] == ("sq", Fraction(0))
    assert all(d > 0 for _, d in results[1:])


def test_k_limits_exact_matches_by_id():
    index = index_build(entries(b="x^2+y", a="u+v^2", c="x*y"))
    assert index_query(index, "p^2+q", 1) == [("a", Fraction(0))]
    ranked = index_query(index, "p^2+q", 3)
    assert [i for i, _ in ranked] == ["a", "b", "c"]


def test_ranking_ties_break_by_id():
    index = index_build(entries(z="x*y", m="a*b", q="x^2+y"))
    ranked = index_query(index, "sin(x)", 3)
    assert ranked == sorted(ranked, key=lambda p: (p[1], p[0]))
    assert [i for i, _ in ranked[:2]] == ["m", "z"]


def test_query_is_idempotent():
    index = index_build(entries(a="x^2+y", b="sin(x)", c="x/y"))
    assert index_query(index, "x+y", 3) == index_query(index, "x+y", 3)


def test_build_reports_every_bad_entry():
    corpus = entries(a="x+", b="x+y") + [CorpusEntry("b", "y"), CorpusEntry("c", "((")]
    with pytest.raises(IndexBuildError) as info:
        index_build(corpus)
    kinds = sorted(type(e).__name__ for e in info.value.errors)
    assert kinds == ["DuplicateId", "EntryParseError", "EntryParseError"]
    dup = next(e for e in info.value.errors if isinstance(e, DuplicateId))
    assert dup.entry_id == "b"
    assert {e.entry_id for e in info.value.errors if isinstance(e, EntryParseError)} == {"a", "c"}


def test_config_mismatch():
    index = index_build(entries(a="x+y"), EncoderConfig(mode="binary"))
    with pytest.raises(ConfigMismatch):
        index_query(index, "x+y", 1, config=EncoderConfig())
    assert index_query(index, "x+y", 1, config=EncoderConfig(mode="binary"))


def test_save_load_round_trip(tmp_path):
    corpus = entries(a="x^2+y", b="(x+y)^2", c="sin(x)cos(x)", d="(2xy+5)/y", e="α+β")
    config = EncoderConfig(preserve_exponents={"2"})
    index = index_build(corpus, config)
    path = tmp_path / "idx.json"
    save_index(index, path)
    loaded = load_index(path)
    assert loaded == index
    for q in ("x+y", "p^2+q", "(a+b)^2", "cos(t)"):
        assert index_query(loaded, q, 5) == index_query(index, q, 5)
    data = json.loads(path.read_text(encoding="utf-8"))
    assert data["format"] == "mexcode-index/1"
    assert data["config"]["preserve_exponents"] == ["2"]
    first = path.read_bytes()
    save_index(loaded, path)
    assert path.read_bytes() == first


def test_load_rejects_other_formats(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"format": "something-else/2"}))
    with pytest.raises(IndexFormatError):
        load_index(path)
    path.write_text("{not json")
    with pytest.raises(IndexFormatError):
        load_index(path)
    path.write_text(json.dumps({
        "format": "mexcode-index/1", "config": {}, "entries": [{"id": "a", "expression": "x"}],
        "by_code": {},
    }))
    with pytest.raises(IndexFormatError):
        load_index(path)


def test_read_corpus(tmp_path):
    path = tmp_path / "corpus.jsonl"
    path.write_text(
        '{"id": "a", "expression": "x+y", "metadata": {"grade": "9"}}\n\n'
        '{"id": "b", "expression": "(α+β)^2"}\n',
        encoding="utf-8",
    )
    corpus = read_corpus(path)
    assert corpus == [CorpusEntry("a", "x+y", {"grade": "9"}), CorpusEntry("b", "(α+β)^2")]


@pytest.mark.parametrize(
    "line", ['{"id": "", "expression": "x"}', '{"expression": "x"}', '[1]', '{"id": "a"}',
             '{"id": "a", "expression": "x", "metadata": {"n": 1}}', "nope"],
)
def test_read_corpus_rejects(tmp_path, line):
    path = tmp_path / "corpus.jsonl"
    path.write_text(line + "\n")
    with pytest.raises(IndexFormatError):
        read_corpus(path)
