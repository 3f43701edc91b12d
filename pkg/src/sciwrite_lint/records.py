"""Canonical metadata records as returned by the scholarly registries."""

from dataclasses import dataclass, field
from typing import Optional

from sciwrite_lint.bibtex import Author
from sciwrite_lint.identifiers import IdentifierSet


@dataclass(frozen=True)
class RetractionStatus:
    kind: str = "none"  # none | retracted | expression_of_concern
    notice_date: Optional[str] = None
    reason: Optional[str] = None

    def __post_init__(self):
        if self.kind == "none" and (self.notice_date or self.reason):
            raise ValueError("kind=none cannot carry a notice date or reason")


@dataclass(frozen=True)
class CanonicalRecord:
    source: str  # registry name
    title: str
    authors: tuple = ()  # Author tuple, source order
    year: Optional[int] = None
    venue: Optional[str] = None
    identifiers: IdentifierSet = field(default_factory=IdentifierSet)
    retraction: RetractionStatus = field(default_factory=RetractionStatus)
    work_type: Optional[str] = None  # article, book, report, news, ...

    def __post_init__(self):
        if not self.title:
            raise ValueError("canonical records must carry a title")


def record_from_dict(data: dict, source: str) -> CanonicalRecord:
    """Rebuild a record from its serialized (fixture/replay) form."""
    retraction = data.get("retraction") or {}
    ids = data.get("identifiers") or {}
    return CanonicalRecord(
        source=data.get("source", source),
        title=data["title"],
        authors=tuple(Author(a["family"], a.get("given")) for a in data.get("authors", [])),
        year=data.get("year"),
        venue=data.get("venue"),
        identifiers=IdentifierSet(
            doi=ids.get("doi"),
            arxiv=ids.get("arxiv"),
            pmid=ids.get("pmid"),
            isbn=ids.get("isbn"),
            lccn=ids.get("lccn"),
        ),
        retraction=RetractionStatus(
            kind=retraction.get("kind", "none"),
            notice_date=retraction.get("notice_date"),
            reason=retraction.get("reason"),
        ),
        work_type=data.get("work_type"),
    )


def record_to_dict(record: CanonicalRecord) -> dict:
    data = {
        "source": record.source,
        "title": record.title,
        "authors": [
            {"family": a.family, **({"given": a.given} if a.given else {})} for a in record.authors
        ],
        "year": record.year,
        "venue": record.venue,
        "identifiers": {k: getattr(record.identifiers, k) for k in record.identifiers.kinds()},
        "work_type": record.work_type,
    }
    if record.retraction.kind != "none":
        data["retraction"] = {
            "kind": record.retraction.kind,
            "notice_date": record.retraction.notice_date,
            "reason": record.retraction.reason,
        }
    return data
