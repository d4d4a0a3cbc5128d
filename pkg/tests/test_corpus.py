import json
import math

import pytest

from calcforge import corpus as cp


def test_load_shipped_corpus(corpus_path):
    problems = cp.load(corpus_path)
    assert len(problems) >= 30
    ids = [p.id for p in problems]
    assert len(ids) == len(set(ids))
    by_id = {p.id: p for p in problems}
    p = by_id["sample.7a"]
    assert p.kind == "definite"
    assert p.payload["expected"] == pytest.approx(
        math.log(2) + math.pi / 2 - 2)
    assert by_id["sample.10a"].paper_discrepancy
    assert by_id["sample.11c"].paper_discrepancy


def test_load_empty_file(tmp_path):
    path = tmp_path / "empty.corpus"
    path.write_text("")
    assert cp.load(str(path)) == []


def test_load_unknown_kind_names_id(tmp_path):
    path = tmp_path / "bad.corpus"
    path.write_text("[problem]\nid = oops.1\nkind = frobnicate\n")
    with pytest.raises(cp.CorpusError) as err:
        cp.load(str(path))
    assert "oops.1" in str(err.value)


def test_load_duplicate_id(tmp_path):
    block = ("[problem]\nid = a\nkind = definite\nintegrand = x\nvar = x\n"
             "lower = 0\nupper = 1\nexpected = 1/2\n")
    path = tmp_path / "dup.corpus"
    path.write_text(block + block)
    with pytest.raises(cp.CorpusError) as err:
        cp.load(str(path))
    assert "duplicate" in str(err.value)


def test_load_diagnostics_name_fields(tmp_path):
    path = tmp_path / "field.corpus"
    path.write_text("[problem]\nid = p\nkind = definite\nintegrand = 2*\n"
                    "var = x\nlower = 0\nupper = 1\nexpected = 1\n")
    with pytest.raises(cp.CorpusError) as err:
        cp.load(str(path))
    assert "integrand" in str(err.value)


def _subset(corpus_path, ids):
    return [p for p in cp.load(corpus_path) if p.id in ids]


def test_verify_determinism(corpus_path):
    problems = _subset(corpus_path, {"sample.7a", "sample.8c", "task1.12a",
                                     "sample.4a", "sample.1b"})
    r1 = cp.verify(problems, jobs=2)
    r2 = cp.verify(problems, jobs=1)
    for a, b in zip(r1.rows, r2.rows):
        assert (a.id, a.computed, a.expected, a.abs_err, a.rel_err, a.status) \
            == (b.id, b.computed, b.expected, b.abs_err, b.rel_err, b.status)


def test_verify_independence(corpus_path):
    problems = cp.load(corpus_path)
    full = {r.id: r for r in cp.verify(problems).rows}
    subset = _subset(corpus_path, {"sample.9b", "task2.11c"})
    for row in cp.verify(subset).rows:
        ref = full[row.id]
        assert (row.computed, row.expected, row.status) == \
            (ref.computed, ref.expected, ref.status)


def test_verify_failures_are_rows_not_exceptions(tmp_path):
    path = tmp_path / "f.corpus"
    path.write_text(
        "[problem]\nid = wrong\nkind = definite\nintegrand = x\nvar = x\n"
        "lower = 0\nupper = 1\nexpected = 1\n"
        "[problem]\nid = blowup\nkind = definite\nintegrand = 1/x\nvar = x\n"
        "lower = -1\nupper = 1\nexpected = 0\n")
    report = cp.verify(cp.load(str(path)))
    statuses = {r.id: r.status for r in report.rows}
    assert statuses == {"wrong": "fail", "blowup": "fail"}
    assert report.summary["fail"] == 2


def test_skip_rows(tmp_path):
    path = tmp_path / "s.corpus"
    path.write_text(
        "[problem]\nid = later\nkind = definite\nintegrand = x\nvar = x\n"
        "lower = 0\nupper = 1\nexpected = 1/2\nskip = statement unclear\n")
    report = cp.verify(cp.load(str(path)))
    assert report.rows[0].status == "skipped"
    assert report.summary["skipped"] == 1


def test_report_json_round_trip(corpus_path):
    problems = _subset(corpus_path, {"sample.7a", "sample.12a"})
    report = cp.verify(problems)
    text = cp.report_to_json(report)
    parsed = json.loads(text)
    assert cp.report_to_json(parsed) == text
    assert [r["id"] for r in parsed["rows"]] == [p.id for p in problems]


def test_format_table_mentions_summary(corpus_path):
    problems = _subset(corpus_path, {"sample.7a"})
    table = cp.format_table(cp.verify(problems))
    assert "sample.7a" in table
    assert "pass=1" in table
