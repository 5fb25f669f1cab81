import csv
import io
import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from collabrisk.errors import ParseError, ValidationError
from collabrisk.fixtures import FIXTURE_NAMES, build_fixture, fixture_text, load_fixture
from collabrisk.faulttree import evaluate
from collabrisk.model_io import (
    CSV_HEADER,
    ModelDocument,
    QueryResult,
    ResultDocument,
    ResultRow,
    canonical_json,
    export_results,
    format_number,
    input_digest,
    parse_model,
    parse_results,
    serialize_model,
    serialize_results,
)
from corpus import random_document

seeds = st.integers(0, 2**32 - 1)


def test_format_number():
    assert format_number(1.25e-2) == "1.25E-02"
    assert format_number(1e-7) == "1.00E-07"
    assert format_number(0.0) == "0.00E+00"
    assert format_number(0.1 + 0.2) == "3.0000000000000004E-01"
    for x in (1e-300, 5e-324, 0.979, 8760.0, 1 / 3):
        assert float(format_number(x)) == x


def test_canonical_json_sorted_and_stable():
    a = canonical_json({"b": 1, "a": [0.5, "x"], "c": {"z": True, "y": None}})
    b = canonical_json({"c": {"y": None, "z": True}, "a": [0.5, "x"], "b": 1})
    assert a == b
    assert json.loads(a) == {"a": [0.5, "x"], "b": 1, "c": {"y": None, "z": True}}
    assert a.index('"a"') < a.index('"b"') < a.index('"c"')


def test_fixtures_are_current():
    for name in FIXTURE_NAMES:
        assert fixture_text(name) == serialize_model(build_fixture(name))
        assert load_fixture(name + ".json") == build_fixture(name)


def test_fta_fixture_round_trip_value():
    doc = parse_model(fixture_text("case_separator_fta"))
    assert evaluate(doc.fault_tree, "rare-event") == pytest.approx(8.15e-4, rel=5e-3)


def test_empty_document():
    for text in ("", "   \n", '{"format_version": 1}'):
        with pytest.raises(ParseError, match="no sections"):
            parse_model(text)
    with pytest.raises(ValidationError):
        serialize_model(ModelDocument())


def test_syntax_error_position():
    with pytest.raises(ParseError) as info:
        parse_model('{\n  "format_version": 1,\n  "lopa": [,\n}')
    assert info.value.position == "line 3, column 12"
    assert "line 3" in str(info.value)


def _network_doc(rows):
    return json.dumps({
        "format_version": 1,
        "network": {"kind": "point", "nodes": [
            {"id": "A", "states": ["TRUE", "FALSE"], "parents": [], "cpt": [[0.5, 0.5]]},
            {"id": "B", "states": ["TRUE", "FALSE"], "parents": ["A"], "cpt": rows},
        ]},
    })


def test_bad_row_sum_names_node_and_row():
    with pytest.raises(ParseError) as info:
        parse_model(_network_doc([[0.5, 0.5], [0.5, 0.48]]))
    assert "'B'" in info.value.message and "row 1" in info.value.message
    assert info.value.position == "$.network.nodes[1].cpt[1]"


def test_semantic_errors_named():
    cyc = json.loads(_network_doc([[0.5, 0.5], [0.5, 0.5]]))
    cyc["network"]["nodes"][0]["parents"] = ["B"]
    cyc["network"]["nodes"][0]["cpt"] = [[0.5, 0.5], [0.5, 0.5]]
    with pytest.raises(ParseError, match="cycl"):
        parse_model(json.dumps(cyc))
    inv = {"format_version": 1, "lopa": {"initiating_event": {"lower": 0.5, "upper": 0.4, "unit": "per_demand"}, "layers": []}}
    with pytest.raises(ParseError) as info:
        parse_model(json.dumps(inv))
    assert "inverted" in str(info.value) and info.value.position.startswith("$.lopa")
    with pytest.raises(ParseError, match="format_version"):
        parse_model('{"format_version": 2, "name": "x"}')


def test_unknown_fields_strict_vs_lenient():
    data = json.loads(fixture_text("lopa_table1_defaults"))
    data["lopa"]["colour"] = "red"
    text = json.dumps(data)
    with pytest.raises(ParseError, match="colour"):
        parse_model(text, strict=True)
    with pytest.warns(UserWarning, match="colour"):
        doc = parse_model(text)
    assert doc == build_fixture("lopa_table1_defaults")
    assert any("colour" in w for w in doc.warnings)


def test_non_finite_and_bad_bytes():
    with pytest.raises(ParseError):
        parse_model('{"format_version": 1, "lopa": {"initiating_event": NaN}}')
    with pytest.raises(ParseError) as info:
        parse_model(b'{"a": "\xff"}')
    assert info.value.position == "byte 7"
    with pytest.raises(ParseError):
        parse_model("[" * 100_000)


def test_bom_accepted():
    text = "﻿" + fixture_text("lopa_table1_defaults")
    assert parse_model(text.encode("utf-8")) == build_fixture("lopa_table1_defaults")


def test_digest_is_canonical():
    doc = build_fixture("case_separator_fta")
    reordered = json.dumps(json.loads(serialize_model(doc)), indent=None, sort_keys=False)
    assert input_digest(parse_model(reordered)) == input_digest(doc)
    assert input_digest(doc).startswith("sha256:")


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_round_trip_identity(seed):
    doc = random_document(random.Random(seed))
    text = serialize_model(doc)
    back = parse_model(text, strict=True)
    assert back == doc
    assert serialize_model(back) == text


@pytest.mark.filterwarnings("ignore::UserWarning")
@settings(max_examples=300, deadline=None)
@given(st.binary(max_size=200))
def test_fuzz_bytes_give_diagnostics(data):
    try:
        parse_model(data)
    except ParseError as e:
        assert e.position


@pytest.mark.filterwarnings("ignore::UserWarning")
@settings(max_examples=200, deadline=None)
@given(seeds, st.integers(0, 5))
def test_fuzz_mutated_documents(seed, n_mut):
    rng = random.Random(seed)
    text = bytearray(serialize_model(random_document(rng)).encode("utf-8"))
    for _ in range(n_mut):
        i = rng.randrange(len(text))
        op = rng.random()
        if op < 0.4:
            text[i] = rng.randrange(256)
        elif op < 0.7:
            del text[i]
        else:
            text.insert(i, rng.choice(b'{}[],:"0-eE.1tn'))
    try:
        parse_model(bytes(text), strict=rng.random() < 0.5)
    except ParseError as e:
        assert e.position


def _results():
    rows = tuple(ResultRow(s, v, 2 * v) for s, v in (("safe", 0.4), ("near_miss", 0.1), ("accident", 1e-5)))
    return ResultDocument((QueryResult("Consequence", "two-corner", rows, {"best": {"all": "Lower"}}, ("a note",)),), "sha256:0")


def test_results_round_trip():
    doc = _results()
    assert parse_results(serialize_results(doc)) == doc


def test_csv_export():
    text = export_results(_results(), "csv")
    lines = list(csv.reader(io.StringIO(text, newline="")))
    assert tuple(lines[0]) == CSV_HEADER
    assert lines[1] == ["Consequence", "safe", "4.00E-01", "8.00E-01", "two-corner"]
    assert len(lines) == 4 and text.endswith("\r\n")


def test_svg_export_deterministic():
    a = export_results(_results(), "svg", log_scale=True)
    assert a.startswith("<?xml") and "<svg" in a
    assert a == export_results(_results(), "svg", log_scale=True)


def test_export_errors():
    with pytest.raises(ValidationError):
        export_results(ResultDocument(()), "csv")
    with pytest.raises(ValidationError):
        export_results(_results(), "xlsx")


def test_readme_example_parses():
    import pathlib
    import re

    readme = (pathlib.Path(__file__).parents[1] / "README.md").read_text(encoding="utf-8")
    block = re.search(r"```json\n(.*?)```", readme, re.S).group(1)
    doc = parse_model(block, strict=True)
    assert doc.sections() == ["lopa", "fault_tree", "network"]
