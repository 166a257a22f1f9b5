from fractions import Fraction

import numpy as np
import pytest

from mobi.core import (
    INF, Carrier, ClosureError, MobiError, MobiStructure, OpImpl, ParseError, evaluate,
    finite_from_labels, format_rational, parse_rational,
)
from mobi.exemplars import imm1, make_example, three_element
from mobi.interchange import load_structure, parse_structure, serialize_structure, structures_equal


def trivial_mobi():
    return MobiStructure(Carrier.finite(["0"]), OpImpl(3, np.zeros((1, 1, 1))), 0, 0, 0, "trivial")


def test_rationals_round_trip_through_text():
    assert parse_rational("-6/4") == Fraction(-3, 2)
    assert format_rational(Fraction(-3, 2)) == "-3/2"
    assert format_rational(Fraction(2)) == "2/1"
    assert parse_rational("1/0") is INF
    assert format_rational(INF) == "1/0"
    with pytest.raises(ParseError):
        parse_rational("abc")


def test_example6_parses_with_three_elements(fixtures_dir):
    m = load_structure(fixtures_dir / "example6.json")
    assert m.kind == "mobi" and m.size == 3
    assert m.carrier.labels == ("0", "½", "1")
    assert evaluate(m, "p", ["1", "½", "0"]) == "½"


def test_unknown_label_in_table_is_rejected():
    doc = serialize_structure(three_element()).decode().replace('"½","0"]', '"½","2"]', 1)
    with pytest.raises(ParseError, match="unknown label"):
        parse_structure(doc)


def test_trivial_one_element_mobi_is_valid():
    doc = {"version": 1, "kind": "mobi", "carrier": {"finite": ["0"]},
           "constants": {"zero": "0", "half": "0", "one": "0"}, "ops": {"p": {"table": [[["0"]]]}}}
    import json

    m = parse_structure(json.dumps(doc))
    assert m.size == 1 and m.zero == m.half == m.one == 0


@pytest.mark.parametrize("doc, message", [
    ("{not json", "malformed"),
    ('{"version": 1, "kind": "mobi"}', "missing key"),
    ('{"version": 2, "kind": "mobi", "carrier": {"finite": ["0"]}, "constants": {}, "ops": {}}', "version"),
    ('{"version": 1, "kind": "mobi", "carrier": {"finite": ["0"]}, '
     '"constants": {"zero": "0", "half": "0", "one": "x"}, "ops": {"p": {"table": [[["0"]]]}}}', "not in the carrier"),
    ('{"version": 1, "kind": "mobi", "carrier": {"finite": ["0", "1"]}, '
     '"constants": {"zero": "0", "half": "0", "one": "0"}, "ops": {"p": {"table": [["0", "1"], ["1", "0"]]}}}', "shape"),
])
def test_malformed_documents_are_rejected(doc, message):
    with pytest.raises(ParseError, match=message):
        parse_structure(doc)


def test_eval_on_formula_structures_is_exact():
    interval = make_example("interval")
    assert evaluate(interval, "p", [Fraction(2, 7), Fraction(0), Fraction(5, 9)]) == Fraction(2, 7)
    third = make_example("interval-third")
    # numerator 2/3, denominator 2
    assert evaluate(third, "p", [Fraction(1), Fraction(1, 3), Fraction(0)]) == Fraction(1, 3)


def test_eval_checks_arity_membership_and_closure():
    interval = make_example("interval")
    with pytest.raises(MobiError, match="takes 3 arguments"):
        interval.apply("p", Fraction(0), Fraction(1))
    with pytest.raises(MobiError, match="not in the carrier"):
        interval.apply("p", Fraction(2), Fraction(0), Fraction(1))
    # on [0, 2] the affine p can leave the carrier: p(0, 2, 2) = 4
    wide = MobiStructure(Carrier.rational("interval", lo=Fraction(0), hi=Fraction(2)),
                         OpImpl(3, formula="affine"), Fraction(0), Fraction(1, 2), Fraction(1))
    with pytest.raises(ClosureError):
        wide.apply("p", Fraction(0), Fraction(2), Fraction(2))


def test_table_eval_is_total():
    m = three_element()
    for a in range(3):
        for b in range(3):
            for c in range(3):
                assert m.carrier.contains(m.apply("p", a, b, c))


@pytest.mark.parametrize("build", [trivial_mobi, three_element, imm1,
                                   lambda: make_example("interval"),
                                   lambda: make_example("reciprocal-interval"),
                                   lambda: make_example("planar-K", K="2/3")])
def test_serialize_then_parse_is_identity(build):
    s = build()
    doc = serialize_structure(s)
    back = parse_structure(doc)
    assert structures_equal(s, back)
    assert serialize_structure(back) == doc


def test_trivial_document_is_minimal():
    doc = serialize_structure(trivial_mobi())
    assert doc == ('{"carrier":{"finite":["0"]},"constants":{"half":"0","one":"0","zero":"0"},'
                   '"kind":"mobi","name":"trivial","ops":{"p":{"table":[[["0"]]]}},"version":1}\n').encode()


def test_constants_are_stored_by_position_not_by_label_text():
    # a carrier whose labels collide with constant names
    s = finite_from_labels("mobi", ["half", "zero", "one"], {"p": np.zeros((3, 3, 3), dtype=int)},
                           {"zero": "half", "half": "zero", "one": "one"})
    assert (s.zero, s.half, s.one) == (0, 1, 2)


def test_ring_zero_must_differ_from_one():
    from mobi.core import RingStructure

    z = np.zeros((2, 2), dtype=int)
    with pytest.raises(ParseError):
        RingStructure(Carrier.finite(["a", "b"]), OpImpl(2, z), OpImpl(2, z), OpImpl(1, [0, 0]), 0, 0)


def test_tables_are_immutable():
    m = three_element()
    with pytest.raises(ValueError):
        m.table("p")[0, 0, 0] = 1
