"""Hand-rolled BibTeX parser.

Handles @string macro expansion, braces-or-quotes delimiters, nested braces,
@comment/@preamble, and the usual author-name conventions. Deliberately
forgiving: malformed entries produce parse warnings, never a crash.
"""

import re
from dataclasses import dataclass, field
from typing import Optional

from sciwrite_lint import identifiers
from sciwrite_lint.findings import Finding, Location
from sciwrite_lint.identifiers import IdentifierSet

# von particles kept with the family name when splitting "First von Last"
_VON_PARTICLES = {"van", "von", "de", "der", "den", "del", "della", "di", "da", "la", "le", "dos", "du", "ter"}

_ACCENT_RE = re.compile(r"\\[`'\"^~=.uvHrcdbk]\s*\{?([a-zA-Z])\}?")
_COMMAND_RE = re.compile(r"\\[a-zA-Z]+\s*")
_WS_RE = re.compile(r"\s+")


@dataclass(frozen=True)
class Author:
    family: str
    given: Optional[str] = None

    def display(self) -> str:
        return f"{self.given} {self.family}" if self.given else self.family


@dataclass
class BibliographyEntry:
    key: str
    entry_type: str
    title: Optional[str] = None
    authors: tuple = ()
    year: Optional[int] = None
    venue: Optional[str] = None
    raw_fields: dict = field(default_factory=dict)
    identifiers: IdentifierSet = field(default_factory=IdentifierSet)
    location: Optional[Location] = None


def detex(value: str) -> str:
    """Strip TeX markup from a field value: accents to bare letters, braces removed."""
    value = _ACCENT_RE.sub(r"\1", value)
    value = _COMMAND_RE.sub(" ", value)
    value = value.replace("{", "").replace("}", "").replace("~", " ")
    return _WS_RE.sub(" ", value).strip()


def split_authors(raw: str) -> list:
    """Split an author field on unbracketed ' and ' separators."""
    parts = []
    depth = 0
    token = []
    i = 0
    n = len(raw)
    while i < n:
        ch = raw[i]
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth = max(0, depth - 1)
        if depth == 0 and raw[i:i + 5].lower() == " and " :
            parts.append("".join(token))
            token = []
            i += 5
            continue
        token.append(ch)
        i += 1
    parts.append("".join(token))
    return [p.strip() for p in parts if p.strip()]


def parse_author_name(raw: str) -> Author:
    """Normalize 'Last, First' and 'First Last' into (family, given)."""
    name = raw.strip()
    if name.startswith("{") and name.endswith("}") and name.count("{") == 1:
        # fully-braced corporate name: family only
        return Author(family=detex(name))
    name = detex(name)
    if "," in name:
        family, _, given = name.partition(",")
        return Author(family=family.strip(), given=given.strip() or None)
    words = name.split()
    if not words:
        return Author(family=name)
    if len(words) == 1:
        return Author(family=words[0])
    # family starts at the first von particle, else it is the last word
    start = len(words) - 1
    for i, word in enumerate(words[:-1]):
        if i > 0 and word.lower() in _VON_PARTICLES:
            start = i
            break
    family = " ".join(words[start:])
    given = " ".join(words[:start])
    return Author(family=family, given=given or None)


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def eof(self) -> bool:
        return self.pos >= len(self.text)

    def line(self, pos: Optional[int] = None) -> int:
        return self.text.count("\n", 0, self.pos if pos is None else pos) + 1

    def skip_ws(self) -> None:
        while not self.eof() and self.text[self.pos].isspace():
            self.pos += 1

    def until(self, chars: str) -> str:
        start = self.pos
        while not self.eof() and self.text[self.pos] not in chars:
            self.pos += 1
        return self.text[start:self.pos]

    def balanced(self, open_ch: str, close_ch: str) -> Optional[str]:
        """Consume a balanced group starting at the current open delimiter."""
        assert self.text[self.pos] == open_ch
        depth = 0
        start = self.pos
        while not self.eof():
            ch = self.text[self.pos]
            if ch == open_ch:
                depth += 1
            elif ch == close_ch:
                depth -= 1
                if depth == 0:
                    self.pos += 1
                    return self.text[start + 1:self.pos - 1]
            self.pos += 1
        return None  # unterminated

    def quoted(self) -> Optional[str]:
        assert self.text[self.pos] == '"'
        self.pos += 1
        start = self.pos
        depth = 0
        while not self.eof():
            ch = self.text[self.pos]
            if ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
            elif ch == '"' and depth == 0:
                self.pos += 1
                return self.text[start:self.pos - 1]
            self.pos += 1
        return None


def _read_value(scanner: _Scanner, macros: dict) -> Optional[str]:
    """One field value: concatenation of braced/quoted/bare tokens joined by '#'."""
    pieces = []
    while True:
        scanner.skip_ws()
        if scanner.eof():
            return None
        ch = scanner.text[scanner.pos]
        if ch == "{":
            piece = scanner.balanced("{", "}")
            if piece is None:
                return None
        elif ch == '"':
            piece = scanner.quoted()
            if piece is None:
                return None
        else:
            token = scanner.until(",#}\n").strip()
            piece = macros.get(token.lower(), token)
        pieces.append(piece)
        scanner.skip_ws()
        if not scanner.eof() and scanner.text[scanner.pos] == "#":
            scanner.pos += 1
            continue
        return "".join(pieces)


def parse_bibtex(source: str, file: str = "<string>") -> tuple:
    """Parse BibTeX text into (entries, findings).

    Duplicate keys keep the first entry; unterminated entries skip the rest of
    that entry. Both emit parse warnings.
    """
    entries = []
    findings = []
    seen_keys = {}
    macros = {}
    scanner = _Scanner(source)

    def warn(message: str, line: int) -> None:
        findings.append(
            Finding(
                check_id="parse-warning",
                level="warning",
                message=message,
                context="bibliography parse",
                location=Location(file, line),
            )
        )

    while True:
        at = scanner.text.find("@", scanner.pos)
        if at == -1:
            break
        scanner.pos = at + 1
        entry_line = scanner.line(at)
        entry_type = scanner.until("{(").strip().lower()
        if scanner.eof():
            break
        open_ch = scanner.text[scanner.pos]
        close_ch = "}" if open_ch == "{" else ")"
        body = scanner.balanced(open_ch, close_ch)
        if body is None:
            warn(f"unterminated @{entry_type} entry", entry_line)
            break
        if entry_type in ("comment", "preamble"):
            continue
        if entry_type == "string":
            name, _, value = body.partition("=")
            inner = _Scanner(value.strip())
            if not inner.eof() and inner.text[inner.pos] in "{\"":
                parsed = _read_value(inner, macros)
            else:
                parsed = value.strip()
            if name.strip():
                macros[name.strip().lower()] = parsed or ""
            continue

        inner = _Scanner(body)
        key = inner.until(",").strip()
        if inner.eof() and "=" in key:
            warn(f"@{entry_type} entry with no key", entry_line)
            continue
        inner.pos += 1  # past the comma
        if not key:
            warn(f"@{entry_type} entry with empty key", entry_line)
            continue

        raw_fields = {}
        while True:
            inner.skip_ws()
            if inner.eof():
                break
            name = inner.until("=").strip().strip(",").strip()
            if inner.eof():
                break
            inner.pos += 1  # past '='
            value = _read_value(inner, macros)
            if value is None:
                warn(f"unterminated field {name!r} in @{entry_type}{{{key}}}", entry_line)
                break
            if name:
                raw_fields[name.lower()] = value.strip()
            inner.skip_ws()
            if not inner.eof() and inner.text[inner.pos] == ",":
                inner.pos += 1

        if key in seen_keys:
            warn(f"duplicate key {key!r}; keeping the first definition", entry_line)
            continue
        seen_keys[key] = True
        entries.append(_build_entry(key, entry_type, raw_fields, Location(file, entry_line), findings))

    return entries, findings


def _build_entry(key, entry_type, raw_fields, location, findings) -> BibliographyEntry:
    title = detex(raw_fields["title"]) if "title" in raw_fields else None
    authors = ()
    if "author" in raw_fields:
        authors = tuple(parse_author_name(a) for a in split_authors(raw_fields["author"]))
    year = None
    if "year" in raw_fields:
        match = re.search(r"\d{4}", raw_fields["year"])
        if match:
            year = int(match.group(0))
    venue = None
    for venue_field in ("journal", "booktitle"):
        if venue_field in raw_fields:
            venue = detex(raw_fields[venue_field])
            break
    ids, id_findings = identifiers.extract(raw_fields, key, location)
    findings.extend(id_findings)
    return BibliographyEntry(
        key=key,
        entry_type=entry_type,
        title=title or None,
        authors=authors,
        year=year,
        venue=venue or None,
        raw_fields=raw_fields,
        identifiers=ids,
        location=location,
    )
