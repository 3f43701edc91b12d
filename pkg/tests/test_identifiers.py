"""Identifier normalization, extraction, and cross-identifier agreement."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sciwrite_lint.bibtex import Author
from sciwrite_lint.identifiers import (
    IdentifierSet,
    cross_id_consistency,
    extract,
    isbn_check_digit_ok,
    normalize_arxiv,
    normalize_doi,
    normalize_isbn,
    normalize_lccn,
    normalize_pmid,
)
from sciwrite_lint.records import CanonicalRecord


@pytest.mark.parametrize(
    "raw,expected",
    [
        ("10.1000/xyz123", "10.1000/xyz123"),
        ("https://doi.org/10.1000/XYZ123", "10.1000/xyz123"),
        ("doi:10.1038/nature12373", "10.1038/nature12373"),
        ("https://dx.doi.org/10.1000/a.b", "10.1000/a.b"),
        ("10.1000/trailing.", "10.1000/trailing"),
        ("not-a-doi", None),
        ("10.12/too-short-registrant", None),
        ("", None),
    ],
)
def test_normalize_doi(raw, expected):
    assert normalize_doi(raw) == expected


@pytest.mark.parametrize(
    "raw,expected",
    [
        ("2101.00001", ("2101.00001", "2101.00001")),
        ("2101.00001v3", ("2101.00001", "2101.00001v3")),
        ("arXiv:1706.03762", ("1706.03762", "1706.03762")),
        ("https://arxiv.org/abs/1706.03762v5", ("1706.03762", "1706.03762v5")),
        ("math.GT/0309136", ("math.GT/0309136", "math.GT/0309136")),
        ("hep-th/9901001v2", ("hep-th/9901001", "hep-th/9901001v2")),
        ("garbage", None),
        ("1234.567", None),
    ],
)
def test_normalize_arxiv(raw, expected):
    assert normalize_arxiv(raw) == expected


@pytest.mark.parametrize(
    "raw,expected",
    [
        ("0-306-40615-2", "0306406152"),
        ("978-0-306-40615-7", "9780306406157"),
        ("ISBN: 0306406152", "0306406152"),
        ("0 306 40615 2", "0306406152"),
        ("097522980X", "097522980X"),
        ("0306406153", None),  # bad check digit
        ("9780306406156", None),  # bad check digit
        ("12345", None),
    ],
)
def test_normalize_isbn(raw, expected):
    assert normalize_isbn(raw) == expected


def test_isbn10_x_only_final_position():
    assert not isbn_check_digit_ok("09752X980X")


@given(st.sampled_from(["0306406152", "9780306406157", "097522980X"]), st.integers(0, 9), st.integers(0, 9))
def test_isbn_single_digit_corruption_detected(isbn, pos, digit):
    """Both ISBN checksums catch any single-digit substitution."""
    pos = pos % len(isbn)
    if isbn[pos] == str(digit):
        return
    if isbn[pos] == "X":
        return
    corrupted = isbn[:pos] + str(digit) + isbn[pos + 1:]
    assert not isbn_check_digit_ok(corrupted)


@pytest.mark.parametrize(
    "raw,expected",
    [
        ("12345678", "12345678"),
        ("PMID: 00012345", "12345"),
        ("pmid:9", "9"),
        ("1234567890", None),  # too long
        ("12a45", None),
    ],
)
def test_normalize_pmid(raw, expected):
    assert normalize_pmid(raw) == expected


@pytest.mark.parametrize(
    "raw,expected",
    [
        ("2001627090", "2001627090"),
        ("n 78-890351", "n78890351"),
        ("sn 85062419", "sn85062419"),
        ("bad", None),
    ],
)
def test_normalize_lccn(raw, expected):
    assert normalize_lccn(raw) == expected


def test_extract_from_dedicated_fields():
    ids, findings = extract(
        {
            "doi": "https://doi.org/10.1000/X",
            "eprint": "2101.00001v2",
            "pmid": "123",
            "isbn": "978-0-306-40615-7",
            "lccn": "2001627090",
        }
    )
    assert ids.doi == "10.1000/x"
    assert ids.arxiv == "2101.00001"
    assert ids.arxiv_display == "2101.00001v2"
    assert ids.pmid == "123"
    assert ids.isbn == "9780306406157"
    assert ids.lccn == "2001627090"
    assert findings == []
    assert ids.kinds() == ["doi", "arxiv", "pmid", "isbn", "lccn"]


def test_extract_scavenges_url_and_note():
    ids, _ = extract({"url": "https://doi.org/10.1000/from-url"})
    assert ids.doi == "10.1000/from-url"
    ids, _ = extract({"note": "preprint at arXiv:2101.00001"})
    assert ids.arxiv == "2101.00001"


def test_dedicated_field_wins_over_scavenged():
    ids, _ = extract({"doi": "10.1000/real", "url": "https://doi.org/10.1000/other"})
    assert ids.doi == "10.1000/real"


def test_malformed_identifier_dropped_with_info():
    ids, findings = extract({"doi": "not a doi"}, key="k")
    assert ids.is_empty()
    (finding,) = findings
    assert finding.check_id == "identifier-format"
    assert finding.level == "info"
    assert finding.reference_key == "k"


def test_empty_set():
    assert IdentifierSet().is_empty()
    assert not IdentifierSet(doi="10.1/x").is_empty()


def _record(title):
    return CanonicalRecord(
        title=title,
        authors=(Author("Doe", "Jane"),),
        year=2020,
        venue="Journal",
        identifiers=IdentifierSet(),
        source="openalex",
    )


def test_cross_id_agreement():
    resolved = {
        "doi": _record("Consistent Title Here"),
        "arxiv": _record("Consistent Title Here"),
    }
    mismatches, findings = cross_id_consistency(resolved, key="k")
    assert mismatches == 0
    assert findings == []


def test_cross_id_conflict():
    resolved = {
        "doi": _record("A Study of Melting Glaciers"),
        "arxiv": _record("Completely Unrelated Quantum Algebra"),
    }
    mismatches, findings = cross_id_consistency(resolved, key="k")
    assert mismatches == 1
    (finding,) = findings
    assert finding.check_id == "cross-id-mismatch"
    assert finding.level == "warning"


def test_cross_id_three_way_counts_pairs():
    resolved = {
        "doi": _record("Alpha Beta Gamma Delta"),
        "arxiv": _record("Alpha Beta Gamma Delta"),
        "pmid": _record("Totally Different Subject Matter"),
    }
    mismatches, _ = cross_id_consistency(resolved)
    assert mismatches == 2
