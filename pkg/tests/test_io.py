import json

import pytest

from bhf import cfk, io_formats, ktd, type_da
from conftest import FIXTURES, FIXTURE_NAMES, load_cfk


def test_fixture_files_parse():
    C = load_cfk("five_gen")
    assert len(C.generators) == 5
    assert len(C.arrows) == 5


def test_cfk_round_trip(any_complex):
    text = io_formats.write_cfk(any_complex)
    again = io_formats.parse_cfk(text)
    assert again == any_complex
    assert io_formats.write_cfk(again) == text


def test_line_format():
    text = """
    # a small staircase
    a: A=1 M=0
    b: A=0 M=-1
    c: A=-1 M=-2
    b -> c
    b -> U^1 a
    """
    C = io_formats.parse_cfk("\n".join(l.strip() for l in text.splitlines()))
    assert C == load_cfk("trefoil_right")


def test_line_format_bad_line():
    with pytest.raises(io_formats.ParseError, match="line 2"):
        io_formats.parse_cfk("a: A=1 M=0\nwhat is this\n")


def test_typed_round_trip(any_complex):
    D = ktd.ktd_basefree(any_complex)
    text = io_formats.write_typed(D)
    again = io_formats.parse_typed(text)
    assert again.generators == D.generators
    assert again.arrows == D.arrows
    assert io_formats.write_typed(again) == \
        io_formats.write_typed(io_formats.parse_typed(text))


def test_typeda_round_trip():
    for build in (type_da.builtin_H, type_da.builtin_tau_mu,
                  type_da.builtin_identity):
        B = build()
        text = io_formats.write_typeda(B)
        again = io_formats.parse_typeda(text)
        assert again == B
        assert io_formats.write_typeda(again) == text


def test_script_round_trip():
    pairs = [("a⊗b", "c⊗d"), ("x", "y")]
    assert io_formats.parse_script(io_formats.write_script(pairs)) == pairs


def test_script_fixture_parses():
    pairs = io_formats.parse_script(
        (FIXTURES / "h_cancellations.script").read_text(encoding="utf-8"))
    assert len(pairs) == 13
    assert all(len(a.split("⊗")) == 6 for a, _ in pairs)


def test_canonical_output_is_lf_and_sorted(any_complex):
    text = io_formats.write_cfk(any_complex)
    assert "\r" not in text
    assert text.endswith("\n")
    doc = json.loads(text)
    assert set(doc) == {"format_version", "kind", "payload"}
    assert doc["format_version"] == "1"


def test_detect_kind(any_complex):
    assert io_formats.detect_kind(io_formats.write_cfk(any_complex)) == "cfk"
    D = ktd.ktd_basefree(any_complex)
    assert io_formats.detect_kind(io_formats.write_typed(D)) == "type_d"
    B = type_da.builtin_tau_mu()
    assert io_formats.detect_kind(io_formats.write_typeda(B)) == "type_da"


def test_envelope_errors():
    with pytest.raises(io_formats.ParseError, match="format_version"):
        io_formats.parse_typed(json.dumps(
            {"format_version": "2", "kind": "type_d", "payload": {}}))
    with pytest.raises(io_formats.ParseError, match="kind"):
        io_formats.parse_typed(json.dumps(
            {"format_version": "1", "kind": "cfk", "payload": {}}))
    with pytest.raises(io_formats.ParseError, match="envelope"):
        io_formats.parse_cfk(json.dumps(
            {"format_version": "1", "kind": "cfk", "payload": {}, "x": 1}))
    with pytest.raises(io_formats.ParseError):
        io_formats.parse_cfk("{not json")


def test_bad_entries_rejected():
    with pytest.raises(io_formats.ParseError, match="generator"):
        io_formats.parse_cfk(json.dumps(
            {"format_version": "1", "kind": "cfk",
             "payload": {"generators": [{"name": "x"}], "arrows": []}}))
    with pytest.raises(io_formats.ParseError, match="arrow"):
        io_formats.parse_typed(json.dumps(
            {"format_version": "1", "kind": "type_d",
             "payload": {"generators": [{"name": "x", "idempotent": "iota0"}],
                         "arrows": [{"from": "x", "to": "x",
                                     "label": "sigma"}]}}))
