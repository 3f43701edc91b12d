"""External signals document: validation and defaults."""

import json

import pytest

from sciwrite_lint.signals import (
    ReferenceSignals,
    SignalsError,
    load_signals,
    parse_signals,
)

GOOD = {
    "references": {
        "smith2020": {
            "claim_score": 0.9,
            "purpose": "evidence",
            "consistency_warnings": 2,
            "consistency_errors": 0,
            "bib_hallucination_rate": 0.1,
        },
        "jones2021": {"oversize": True},
    },
    "contribution": {
        "empirical": 0.7,
        "progressiveness": 0.4,
        "unification": 0.1,
        "problem_solving": 0.5,
        "severity": 0.6,
    },
}


def test_parse_good_document():
    signals = parse_signals(GOOD, known_keys={"smith2020", "jones2021"})
    ref = signals.for_reference("smith2020")
    assert ref.claim_score == 0.9
    assert ref.purpose == "evidence"
    assert ref.consistency_warnings == 2
    assert ref.has_consistency_signals
    assert signals.for_reference("jones2021").oversize
    assert signals.contribution_axes["problem_solving"] == 0.5


def test_unlisted_reference_gets_neutral_defaults():
    signals = parse_signals(GOOD, known_keys={"smith2020", "jones2021"})
    ref = signals.for_reference("unlisted1999")
    assert ref == ReferenceSignals()
    assert not ref.has_consistency_signals
    assert ref.claim_score is None


def test_empty_document():
    signals = parse_signals({})
    assert signals.references == {}
    assert signals.contribution_axes is None


def test_unknown_bibliography_key_rejected():
    with pytest.raises(SignalsError, match="unknown bibliography key"):
        parse_signals(GOOD, known_keys={"smith2020"})


def test_unknown_top_level_field_rejected():
    with pytest.raises(SignalsError, match="top-level"):
        parse_signals({"reference": {}})


def test_unknown_reference_field_rejected():
    with pytest.raises(SignalsError, match="unknown signal field"):
        parse_signals({"references": {"k": {"claimscore": 1.0}}})


def test_unknown_purpose_rejected():
    with pytest.raises(SignalsError, match="citation purpose"):
        parse_signals({"references": {"k": {"purpose": "decoration"}}})


def test_out_of_range_values_rejected():
    with pytest.raises(SignalsError):
        parse_signals({"references": {"k": {"claim_score": 1.5}}})
    with pytest.raises(SignalsError):
        parse_signals({"references": {"k": {"consistency_warnings": -1}}})
    with pytest.raises(SignalsError):
        parse_signals({"references": {"k": {"bib_hallucination_rate": 2.0}}})


def test_booleans_are_not_numbers():
    with pytest.raises(SignalsError):
        parse_signals({"references": {"k": {"claim_score": True}}})
    with pytest.raises(SignalsError):
        parse_signals({"references": {"k": {"consistency_errors": True}}})
    with pytest.raises(SignalsError):
        parse_signals({"references": {"k": {"oversize": 1}}})


def test_partial_contribution_axes_rejected():
    with pytest.raises(SignalsError, match="exactly the axes"):
        parse_signals({"contribution": {"empirical": 0.5}})


def test_non_object_document_rejected():
    with pytest.raises(SignalsError):
        parse_signals(["not", "an", "object"])
    with pytest.raises(SignalsError):
        parse_signals({"references": {"k": "not an object"}})


def test_load_signals_file(tmp_path):
    path = tmp_path / "signals.json"
    path.write_text(json.dumps(GOOD))
    signals = load_signals(path, known_keys={"smith2020", "jones2021"})
    assert signals.for_reference("smith2020").claim_score == 0.9


def test_load_signals_bad_json(tmp_path):
    path = tmp_path / "signals.json"
    path.write_text("{nope")
    with pytest.raises(SignalsError):
        load_signals(path)


def test_load_signals_missing_file(tmp_path):
    with pytest.raises(SignalsError):
        load_signals(tmp_path / "absent.json")
