"""All network access to the scholarly registries.

Batched identifier resolution (OpenAlex, Semantic Scholar, Open Library,
Library of Congress), loose candidate search with provider fallback
(OpenAlex, CrossRef, Semantic Scholar), a local retraction snapshot, and a
record/replay transport layer so every network path is testable offline.

Outbound requests carry identifiers, titles, and author names only; manuscript
body text never leaves the machine.
"""

import csv
import hashlib
import json
import random
import re
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional
from urllib.parse import urlsplit

from sciwrite_lint.bibtex import parse_author_name
from sciwrite_lint.identifiers import IdentifierSet, normalize_doi
from sciwrite_lint.records import CanonicalRecord, RetractionStatus

OPENALEX_URL = "https://api.openalex.org/works"
S2_BATCH_URL = "https://api.semanticscholar.org/graph/v1/paper/batch"
S2_SEARCH_URL = "https://api.semanticscholar.org/graph/v1/paper/search"
CROSSREF_URL = "https://api.crossref.org/works"
OPENLIBRARY_URL = "https://openlibrary.org/api/books"
LOC_URL = "https://www.loc.gov/search/"

DOI_BATCH_SIZE = 200
EXTERNAL_ID_BATCH_SIZE = 500
SEARCH_LIMIT = 10

S2_FIELDS = "title,authors,year,venue,externalIds,publicationTypes"

DEFAULT_USER_AGENT = "sciwrite-lint/0.1.0 (+https://github.com/sciwrite-lint/sciwrite-lint)"
MAX_RESPONSE_BYTES = 10 * 1024 * 1024

_REDACTED_HEADERS = {"authorization", "x-api-key", "api-key", "cookie"}

_RETRY_DELAYS = (1.0, 2.0, 4.0)


class TransportError(Exception):
    """Network-level failure: unreachable host, timeout, missing fixture."""


class GatewayError(Exception):
    """An upstream call failed after retries; carries the affected identifiers."""

    def __init__(self, message: str, ids=()):
        super().__init__(message)
        self.ids = tuple(ids)


@dataclass(frozen=True)
class TransportResponse:
    status: int
    headers: dict
    text: str

    def json(self):
        return json.loads(self.text)

    def header(self, name: str) -> Optional[str]:
        for key, value in self.headers.items():
            if key.lower() == name.lower():
                return value
        return None


@dataclass(frozen=True)
class RequestRecord:
    """One attempted upstream request, for auditing batching and privacy."""
    method: str
    url: str
    params: Optional[dict]
    body: Optional[dict]

    def as_text(self) -> str:
        """Everything this request would put on the wire, for substring audits."""
        parts = [self.method, self.url]
        if self.params:
            parts.append(json.dumps(self.params, sort_keys=True))
        if self.body:
            parts.append(json.dumps(self.body, sort_keys=True))
        return " ".join(parts)


def request_hash(method: str, url: str, params: Optional[dict], body: Optional[dict]) -> str:
    canonical = json.dumps(
        {"method": method.upper(), "url": url, "params": params or {}, "body": body},
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def redact_headers(headers: dict) -> dict:
    return {
        k: ("REDACTED" if k.lower() in _REDACTED_HEADERS else v)
        for k, v in headers.items()
    }


class HttpTransport:
    """Real HTTPS transport with a response size cap."""

    def __init__(self, timeout: float = 30.0, max_bytes: int = MAX_RESPONSE_BYTES):
        self.timeout = timeout
        self.max_bytes = max_bytes

    def request(self, method, url, params=None, json_body=None, headers=None) -> TransportResponse:
        import requests

        try:
            response = requests.request(
                method,
                url,
                params=params,
                json=json_body,
                headers=headers,
                timeout=self.timeout,
                stream=True,
            )
            chunks = []
            size = 0
            for chunk in response.iter_content(chunk_size=65536):
                size += len(chunk)
                if size > self.max_bytes:
                    response.close()
                    raise TransportError(f"response exceeded {self.max_bytes} bytes: {url}")
                chunks.append(chunk)
            text = b"".join(chunks).decode(response.encoding or "utf-8", errors="replace")
            return TransportResponse(response.status_code, dict(response.headers), text)
        except TransportError:
            raise
        except Exception as exc:  # requests raises a small zoo of connection errors
            raise TransportError(f"{method} {url} failed: {exc}") from exc


class ReplayTransport:
    """Serves recorded responses; never touches the network."""

    def __init__(self, fixture_dir):
        self.fixture_dir = Path(fixture_dir)

    def request(self, method, url, params=None, json_body=None, headers=None) -> TransportResponse:
        digest = request_hash(method, url, params, json_body)
        path = self.fixture_dir / f"{digest}.json"
        if not path.exists():
            raise TransportError(f"no recorded fixture for {method} {url} (hash {digest[:12]})")
        data = json.loads(path.read_text(encoding="utf-8"))
        resp = data["response"]
        return TransportResponse(resp["status"], resp.get("headers", {}), resp["body"])


class RecordingTransport:
    """Delegates to a live transport and persists each exchange for replay."""

    def __init__(self, inner, fixture_dir):
        self.inner = inner
        self.fixture_dir = Path(fixture_dir)
        self.fixture_dir.mkdir(parents=True, exist_ok=True)

    def request(self, method, url, params=None, json_body=None, headers=None) -> TransportResponse:
        response = self.inner.request(method, url, params, json_body, headers)
        digest = request_hash(method, url, params, json_body)
        payload = {
            "request": {
                "method": method.upper(),
                "url": url,
                "params": params or {},
                "body": json_body,
                "headers": redact_headers(headers or {}),
            },
            "response": {
                "status": response.status,
                "headers": dict(response.headers),
                "body": response.text,
            },
        }
        path = self.fixture_dir / f"{digest}.json"
        path.write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")
        return response


class RateLimiter:
    """Per-host minimum spacing between requests. Clock and sleep are injectable."""

    def __init__(self, rps: float = 5.0, clock=time.monotonic, sleep=time.sleep):
        if rps <= 0:
            raise ValueError("rps must be positive")
        self.interval = 1.0 / rps
        self._clock = clock
        self._sleep = sleep
        self._last = {}
        self._lock = threading.Lock()

    def wait(self, host: str) -> None:
        with self._lock:
            now = self._clock()
            last = self._last.get(host)
            if last is not None:
                remaining = self.interval - (now - last)
                if remaining > 0:
                    self._sleep(remaining)
                    now = self._clock()
            self._last[host] = now


def chunked(items: list, size: int) -> list:
    """Split into consecutive chunks of at most `size`; their union is the input."""
    if size < 1:
        raise ValueError("chunk size must be >= 1")
    return [items[i:i + size] for i in range(0, len(items), size)]


# request shapes, shared with fixture-recording helpers

def doi_batch_params(chunk: list) -> dict:
    return {"filter": "doi:" + "|".join(chunk), "per-page": str(DOI_BATCH_SIZE)}


def s2_batch_body(kind: str, chunk: list) -> dict:
    prefix = "ARXIV" if kind == "arxiv" else "PMID"
    return {"ids": [f"{prefix}:{v}" for v in chunk]}


def openalex_search_params(query: str) -> dict:
    return {"search": query, "per-page": str(SEARCH_LIMIT)}


def crossref_search_params(query: str) -> dict:
    return {"query.bibliographic": query, "rows": str(SEARCH_LIMIT)}


def s2_search_params(query: str) -> dict:
    return {"query": query, "limit": str(SEARCH_LIMIT), "fields": S2_FIELDS}


def openlibrary_params(isbn: str) -> dict:
    return {"bibkeys": f"ISBN:{isbn}", "format": "json", "jscmd": "data"}


def loc_params(lccn: str) -> dict:
    return {"q": f"lccn:{lccn}", "fo": "json"}


def search_query(entry) -> str:
    """First author's family name plus the title, as free text. Never a year."""
    if entry.authors:
        return f"{entry.authors[0].family} {entry.title}"
    return entry.title


@dataclass
class ResolveResult:
    """Per-identifier outcomes: found, definitively absent, or transiently failed."""
    found: dict = field(default_factory=dict)
    not_found: set = field(default_factory=set)
    failed: set = field(default_factory=set)


def _parse_display_authors(names) -> tuple:
    return tuple(parse_author_name(n) for n in names if n and n.strip())


def _year_from_text(text) -> Optional[int]:
    if not text:
        return None
    match = re.search(r"\d{4}", str(text))
    return int(match.group(0)) if match else None


def record_from_openalex(work: dict) -> Optional[CanonicalRecord]:
    title = work.get("title") or work.get("display_name")
    if not title:
        return None
    names = [
        (a.get("author") or {}).get("display_name")
        for a in work.get("authorships", [])
    ]
    venue = None
    location = work.get("primary_location") or {}
    source = location.get("source") or {}
    if source.get("display_name"):
        venue = source["display_name"]
    retraction = RetractionStatus()
    if work.get("is_retracted"):
        retraction = RetractionStatus(kind="retracted")
    return CanonicalRecord(
        source="openalex",
        title=title,
        authors=_parse_display_authors(names),
        year=work.get("publication_year"),
        venue=venue,
        identifiers=IdentifierSet(doi=normalize_doi(work.get("doi") or "")),
        retraction=retraction,
        work_type=work.get("type"),
    )


def record_from_s2(paper: dict) -> Optional[CanonicalRecord]:
    title = paper.get("title")
    if not title:
        return None
    external = paper.get("externalIds") or {}
    doi = normalize_doi(external.get("DOI") or "")
    types = paper.get("publicationTypes") or []
    return CanonicalRecord(
        source="semanticscholar",
        title=title,
        authors=_parse_display_authors([a.get("name") for a in paper.get("authors", [])]),
        year=paper.get("year"),
        venue=paper.get("venue") or None,
        identifiers=IdentifierSet(
            doi=doi,
            arxiv=external.get("ArXiv"),
            pmid=str(external["PubMed"]) if external.get("PubMed") else None,
        ),
        work_type=types[0].lower() if types else None,
    )


def record_from_crossref(item: dict) -> Optional[CanonicalRecord]:
    titles = item.get("title") or []
    if not titles:
        return None
    authors = tuple(
        # CrossRef gives family/given split already
        _crossref_author(a) for a in item.get("author", []) if a.get("family")
    )
    year = None
    issued = (item.get("issued") or {}).get("date-parts") or []
    if issued and issued[0]:
        year = issued[0][0]
    container = item.get("container-title") or []
    return CanonicalRecord(
        source="crossref",
        title=titles[0],
        authors=authors,
        year=year,
        venue=container[0] if container else None,
        identifiers=IdentifierSet(doi=normalize_doi(item.get("DOI") or "")),
        work_type=item.get("type"),
    )


def _crossref_author(a: dict):
    from sciwrite_lint.bibtex import Author

    return Author(family=a["family"], given=a.get("given"))


def record_from_openlibrary(data: dict, isbn: str) -> Optional[CanonicalRecord]:
    title = data.get("title")
    if not title:
        return None
    names = [a.get("name") for a in data.get("authors", [])]
    return CanonicalRecord(
        source="openlibrary",
        title=title,
        authors=_parse_display_authors(names),
        year=_year_from_text(data.get("publish_date")),
        venue=None,
        identifiers=IdentifierSet(isbn=isbn),
        work_type="book",
    )


def record_from_loc(item: dict, lccn: str) -> Optional[CanonicalRecord]:
    title = item.get("title")
    if not title:
        return None
    contributors = item.get("contributor") or []
    return CanonicalRecord(
        source="loc",
        title=title,
        authors=_parse_display_authors(contributors),
        year=_year_from_text(item.get("date")),
        venue=None,
        identifiers=IdentifierSet(lccn=lccn),
        work_type=item.get("original_format") or "book",
    )


class RetractionSnapshot:
    """Local retraction database loaded from a CSV export, indexed by DOI."""

    def __init__(self, by_doi: dict, snapshot_date: Optional[str] = None):
        self._by_doi = by_doi
        self.snapshot_date = snapshot_date

    @property
    def entry_count(self) -> int:
        return len(self._by_doi)

    @classmethod
    def load(cls, path) -> "RetractionSnapshot":
        by_doi = {}
        latest = None
        with open(path, newline="", encoding="utf-8", errors="replace") as handle:
            for row in csv.DictReader(handle):
                doi = normalize_doi(row.get("OriginalPaperDOI") or "")
                if not doi:
                    continue
                nature = (row.get("RetractionNature") or "").strip().lower()
                if "retraction" in nature:
                    kind = "retracted"
                elif "concern" in nature:
                    kind = "expression_of_concern"
                else:
                    continue
                date = (row.get("RetractionDate") or "").strip() or None
                reason = (row.get("Reason") or "").strip().strip(";") or None
                by_doi[doi] = RetractionStatus(kind=kind, notice_date=date, reason=reason)
                if date and (latest is None or date > latest):
                    latest = date
        return cls(by_doi, snapshot_date=latest)

    def lookup(self, doi: Optional[str]) -> RetractionStatus:
        if not doi:
            return RetractionStatus()
        return self._by_doi.get(normalize_doi(doi) or doi.lower(), RetractionStatus())


class RegistryGateway:
    """Batched, rate-limited, retrying client for the five registries.

    Every attempted request is appended to `request_log`, which tests use to
    verify batch arithmetic and to assert that no manuscript text goes out.
    """

    def __init__(
        self,
        transport,
        rate_limit_rps: float = 5.0,
        user_agent: str = DEFAULT_USER_AGENT,
        clock=time.monotonic,
        sleep=time.sleep,
        rng: Optional[random.Random] = None,
    ):
        self.transport = transport
        self.user_agent = user_agent
        self.request_log = []
        self._limiter = RateLimiter(rate_limit_rps, clock=clock, sleep=sleep)
        self._sleep = sleep
        self._rng = rng or random.Random()

    # -- plumbing ----------------------------------------------------------

    def _request(self, method, url, params=None, json_body=None):
        host = urlsplit(url).netloc
        headers = {"User-Agent": self.user_agent, "Accept": "application/json"}
        last_error = None
        for attempt in range(len(_RETRY_DELAYS) + 1):
            self._limiter.wait(host)
            self.request_log.append(RequestRecord(method.upper(), url, params, json_body))
            retry_after = None
            try:
                response = self.transport.request(method, url, params, json_body, headers)
            except TransportError as exc:
                last_error = str(exc)
                response = None
            if response is not None:
                if response.status < 400:
                    return response
                if response.status == 429 or response.status >= 500:
                    last_error = f"HTTP {response.status} from {host}"
                    header = response.header("Retry-After")
                    if header and header.strip().isdigit():
                        retry_after = float(header.strip())
                else:
                    raise GatewayError(f"HTTP {response.status} from {method} {url}")
            if attempt == len(_RETRY_DELAYS):
                break
            delay = _RETRY_DELAYS[attempt] * (1.0 + self._rng.uniform(0.0, 0.1))
            if retry_after is not None:
                delay = max(delay, retry_after)
            self._sleep(delay)
        raise GatewayError(f"{method} {url} failed after retries: {last_error}")

    # -- batched resolution --------------------------------------------------

    def resolve_dois(self, dois: list) -> ResolveResult:
        """Look up normalized DOIs in batches of up to 200."""
        result = ResolveResult()
        for chunk in chunked(list(dois), DOI_BATCH_SIZE):
            params = doi_batch_params(chunk)
            try:
                response = self._request("GET", OPENALEX_URL, params=params)
            except GatewayError:
                result.failed.update(chunk)
                continue
            found = {}
            for work in response.json().get("results", []):
                record = record_from_openalex(work)
                if record and record.identifiers.doi:
                    found[record.identifiers.doi] = record
            for doi in chunk:
                if doi in found:
                    result.found[doi] = found[doi]
                else:
                    result.not_found.add(doi)
        return result

    def resolve_external_ids(self, ids: list) -> ResolveResult:
        """Resolve (kind, value) pairs, partitioned by kind before batching.

        arXiv IDs and PMIDs batch through one endpoint (up to 500 per call);
        ISBNs and LCCNs are single-item lookups against their own registries.
        """
        result = ResolveResult()
        by_kind = {}
        for kind, value in ids:
            by_kind.setdefault(kind, []).append(value)
        for kind in sorted(by_kind):
            values = by_kind[kind]
            if kind in ("arxiv", "pmid"):
                self._resolve_s2_batch(kind, values, result)
            elif kind == "isbn":
                for value in values:
                    self._resolve_isbn(value, result)
            elif kind == "lccn":
                for value in values:
                    self._resolve_lccn(value, result)
            else:
                raise ValueError(f"unsupported identifier kind: {kind}")
        return result

    def _resolve_s2_batch(self, kind: str, values: list, result: ResolveResult) -> None:
        for chunk in chunked(values, EXTERNAL_ID_BATCH_SIZE):
            body = s2_batch_body(kind, chunk)
            try:
                response = self._request(
                    "POST", S2_BATCH_URL, params={"fields": S2_FIELDS}, json_body=body
                )
            except GatewayError:
                result.failed.update((kind, v) for v in chunk)
                continue
            papers = response.json()
            for value, paper in zip(chunk, papers):
                record = record_from_s2(paper) if paper else None
                if record:
                    result.found[(kind, value)] = record
                else:
                    result.not_found.add((kind, value))

    def _resolve_isbn(self, isbn: str, result: ResolveResult) -> None:
        params = openlibrary_params(isbn)
        try:
            response = self._request("GET", OPENLIBRARY_URL, params=params)
        except GatewayError:
            result.failed.add(("isbn", isbn))
            return
        data = response.json().get(f"ISBN:{isbn}")
        record = record_from_openlibrary(data, isbn) if data else None
        if record:
            result.found[("isbn", isbn)] = record
        else:
            result.not_found.add(("isbn", isbn))

    def _resolve_lccn(self, lccn: str, result: ResolveResult) -> None:
        params = loc_params(lccn)
        try:
            response = self._request("GET", LOC_URL, params=params)
        except GatewayError:
            result.failed.add(("lccn", lccn))
            return
        items = response.json().get("results") or []
        record = record_from_loc(items[0], lccn) if items else None
        if record:
            result.found[("lccn", lccn)] = record
        else:
            result.not_found.add(("lccn", lccn))

    # -- loose search ---------------------------------------------------------

    def search_candidates(self, entry) -> list:
        """Up to 10 candidates for an identifier-less entry.

        The query is first-author family name plus title, sent as free text
        with no year filter. Providers are tried in order until one returns
        candidates; a provider erroring out falls through to the next.
        """
        if not entry.title:
            raise ValueError(f"entry {entry.key!r} has no title to search for")
        query = search_query(entry)
        providers = (
            self._search_openalex,
            self._search_crossref,
            self._search_s2,
        )
        errors = 0
        for provider in providers:
            try:
                candidates = provider(query)
            except GatewayError:
                errors += 1
                continue
            if candidates:
                return candidates[:SEARCH_LIMIT]
        if errors == len(providers):
            raise GatewayError(f"all search providers failed for {entry.key!r}", ids=(entry.key,))
        return []

    def _search_openalex(self, query: str) -> list:
        response = self._request("GET", OPENALEX_URL, params=openalex_search_params(query))
        records = []
        for work in response.json().get("results", []):
            record = record_from_openalex(work)
            if record:
                records.append(record)
        return records

    def _search_crossref(self, query: str) -> list:
        response = self._request("GET", CROSSREF_URL, params=crossref_search_params(query))
        items = (response.json().get("message") or {}).get("items", [])
        records = []
        for item in items:
            record = record_from_crossref(item)
            if record:
                records.append(record)
        return records

    def _search_s2(self, query: str) -> list:
        response = self._request("GET", S2_SEARCH_URL, params=s2_search_params(query))
        records = []
        for paper in response.json().get("data", []):
            record = record_from_s2(paper)
            if record:
                records.append(record)
        return records
