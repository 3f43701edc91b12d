"""Extraction, normalization, and cross-validation of structured identifiers.

Supported kinds: DOI, arXiv ID, PMID, ISBN, LCCN.
"""

import re
from dataclasses import dataclass, replace
from typing import Optional

from sciwrite_lint.findings import Finding, Location
from sciwrite_lint.similarity import similarity

DOI_RE = re.compile(r"10\.\d{4,9}/\S+", re.IGNORECASE)
# new-style 2101.00001(v3), old-style math.GT/0309136
ARXIV_NEW_RE = re.compile(r"(\d{4}\.\d{4,5})(v\d+)?$")
ARXIV_OLD_RE = re.compile(r"([a-z-]+(?:\.[A-Z]{2})?/\d{7})(v\d+)?$")
PMID_RE = re.compile(r"\d{1,9}$")
LCCN_RE = re.compile(r"[a-z]{0,3}\d{8,10}$")

_DOI_PREFIXES = ("https://doi.org/", "http://doi.org/", "https://dx.doi.org/", "http://dx.doi.org/", "doi:")
_ARXIV_PREFIXES = ("https://arxiv.org/abs/", "http://arxiv.org/abs/", "arxiv:")


@dataclass(frozen=True)
class IdentifierSet:
    doi: Optional[str] = None
    arxiv: Optional[str] = None
    arxiv_display: Optional[str] = None
    pmid: Optional[str] = None
    isbn: Optional[str] = None
    lccn: Optional[str] = None

    def kinds(self) -> list:
        """Identifier kinds present, in canonical order."""
        return [k for k in ("doi", "arxiv", "pmid", "isbn", "lccn") if getattr(self, k)]

    def is_empty(self) -> bool:
        return not self.kinds()


def normalize_doi(raw: str) -> Optional[str]:
    """Lowercased `10.<registrant>/<suffix>` with scheme/host prefixes stripped."""
    value = raw.strip()
    for prefix in _DOI_PREFIXES:
        if value.lower().startswith(prefix):
            value = value[len(prefix):]
            break
    value = value.strip().rstrip(".,;")
    match = DOI_RE.fullmatch(value)
    if not match:
        return None
    return value.lower()


def normalize_arxiv(raw: str) -> Optional[tuple]:
    """(lookup id, display id): version suffix stripped for lookup, kept for display."""
    value = raw.strip()
    for prefix in _ARXIV_PREFIXES:
        if value.lower().startswith(prefix):
            value = value[len(prefix):]
            break
    value = value.strip()
    match = ARXIV_NEW_RE.fullmatch(value) or ARXIV_OLD_RE.fullmatch(value)
    if not match:
        return None
    return match.group(1), value


def isbn_check_digit_ok(digits: str) -> bool:
    """Standard mod-11 (ISBN-10) / mod-10 (ISBN-13) checksum."""
    if len(digits) == 10:
        total = 0
        for i, ch in enumerate(digits):
            if ch == "X":
                if i != 9:
                    return False
                value = 10
            elif ch.isdigit():
                value = int(ch)
            else:
                return False
            total += (10 - i) * value
        return total % 11 == 0
    if len(digits) == 13:
        if not digits.isdigit():
            return False
        total = sum(int(ch) * (1 if i % 2 == 0 else 3) for i, ch in enumerate(digits))
        return total % 10 == 0
    return False


def normalize_isbn(raw: str) -> Optional[str]:
    value = raw.strip().upper()
    if value.startswith("ISBN"):
        value = value[4:].lstrip(":").strip()
    value = value.replace("-", "").replace(" ", "")
    if not isbn_check_digit_ok(value):
        return None
    return value


def normalize_pmid(raw: str) -> Optional[str]:
    value = raw.strip()
    if value.lower().startswith("pmid"):
        value = value[4:].lstrip(":").strip()
    if not PMID_RE.fullmatch(value):
        return None
    return str(int(value))


def normalize_lccn(raw: str) -> Optional[str]:
    value = raw.strip().lower().replace(" ", "").replace("-", "")
    if not LCCN_RE.fullmatch(value):
        return None
    return value


_NORMALIZERS = {
    "doi": normalize_doi,
    "pmid": normalize_pmid,
    "isbn": normalize_isbn,
    "lccn": normalize_lccn,
}

# Fields scavenged for identifiers when the dedicated field is absent.
_SCAVENGE_FIELDS = ("url", "note", "howpublished")


def extract(raw_fields: dict, key: str = "", location: Optional[Location] = None) -> tuple:
    """Gather identifiers from dedicated and free-text fields.

    Returns (IdentifierSet, findings); malformed candidates are dropped with an
    info-level finding, never a hard error.
    """
    findings = []
    ids = IdentifierSet()

    def drop(kind: str, raw: str) -> None:
        findings.append(
            Finding(
                check_id="identifier-format",
                level="info",
                message=f"malformed {kind} dropped: {raw.strip()!r}",
                context="value does not match the identifier's required pattern",
                location=location,
                reference_key=key or None,
            )
        )

    for kind, normalizer in _NORMALIZERS.items():
        raw = raw_fields.get(kind)
        if raw is None:
            continue
        normalized = normalizer(raw)
        if normalized is None:
            drop(kind, raw)
        else:
            ids = replace(ids, **{kind: normalized})

    eprint = raw_fields.get("eprint") or raw_fields.get("arxiv")
    if eprint is not None:
        result = normalize_arxiv(eprint)
        if result is None:
            drop("arxiv", eprint)
        else:
            ids = replace(ids, arxiv=result[0], arxiv_display=result[1])

    # scavenge free-text fields for anything still missing
    for field_name in _SCAVENGE_FIELDS:
        text = raw_fields.get(field_name)
        if not text:
            continue
        if ids.doi is None:
            match = DOI_RE.search(text)
            if match:
                normalized = normalize_doi(match.group(0))
                if normalized:
                    ids = replace(ids, doi=normalized)
        if ids.arxiv is None and "arxiv" in text.lower():
            match = re.search(r"(?:arxiv:|arxiv\.org/abs/)([^\s},]+)", text, re.IGNORECASE)
            if match:
                result = normalize_arxiv(match.group(1))
                if result:
                    ids = replace(ids, arxiv=result[0], arxiv_display=result[1])

    return ids, findings


def extract_identifiers(entry) -> IdentifierSet:
    """IdentifierSet for one bibliography entry (findings discarded)."""
    ids, _ = extract(entry.raw_fields, entry.key, getattr(entry, "location", None))
    return ids


def cross_id_consistency(
    resolved: dict,
    threshold: float = 0.80,
    key: str = "",
    location: Optional[Location] = None,
) -> tuple:
    """Count conflicting identifiers within one entry.

    `resolved` maps identifier kind -> CanonicalRecord. Every pair of records
    whose titles fall below the similarity threshold counts as one mismatch.
    """
    kinds = sorted(resolved)
    mismatches = 0
    findings = []
    for i, kind_a in enumerate(kinds):
        for kind_b in kinds[i + 1:]:
            rec_a, rec_b = resolved[kind_a], resolved[kind_b]
            sim = similarity(rec_a.title, rec_b.title)
            if sim < threshold:
                mismatches += 1
                findings.append(
                    Finding(
                        check_id="cross-id-mismatch",
                        level="warning",
                        message=(
                            f"{kind_a} resolves to {rec_a.title!r} but "
                            f"{kind_b} resolves to {rec_b.title!r}"
                        ),
                        context=f"title similarity {sim:.2f} below {threshold:.2f}; "
                        "the identifiers appear to point at different works",
                        location=location,
                        reference_key=key or None,
                    )
                )
    return mismatches, findings
