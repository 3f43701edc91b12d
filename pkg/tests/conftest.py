"""Shared fixtures: a disposable manuscript workspace wired for offline replay."""

import textwrap
from datetime import date

import pytest

from replaysupport import FixtureRecorder, ticking_clock, write_snapshot
from sciwrite_lint.bibtex import Author, parse_bibtex
from sciwrite_lint.config import load_config
from sciwrite_lint.identifiers import IdentifierSet
from sciwrite_lint.pipeline import build_gateway, run_check
from sciwrite_lint.records import CanonicalRecord, RetractionStatus

_UNSET = object()


def make_record(title, authors, year, venue, doi=None, arxiv=None, isbn=None,
                source="openalex", work_type="article", retracted=False):
    return CanonicalRecord(
        source=source,
        title=title,
        authors=tuple(Author(f, g) for f, g in authors),
        year=year,
        venue=venue,
        identifiers=IdentifierSet(doi=doi, arxiv=arxiv, isbn=isbn),
        retraction=RetractionStatus(kind="retracted") if retracted else RetractionStatus(),
        work_type=work_type,
    )


class Workspace:
    """Temp directory holding a manuscript, bibliography, cache, and fixtures."""

    def __init__(self, root):
        self.root = root
        self.cache = root / "cache"
        self.recorder = FixtureRecorder(self.cache / "replay")
        self.main = root / "paper.tex"
        self.bib_path = root / "refs.bib"

    def write_tex(self, body, bib_command=True):
        text = "\\documentclass{article}\n\\begin{document}\n"
        text += textwrap.dedent(body).strip() + "\n"
        if bib_command:
            text += "\\bibliography{refs}\n"
        text += "\\end{document}\n"
        self.main.write_text(text)

    def write_bib(self, text):
        self.bib_path.write_text(textwrap.dedent(text))

    def entries(self):
        parsed, _ = parse_bibtex(self.bib_path.read_text(), str(self.bib_path))
        return {e.key: e for e in parsed}

    def write_snapshot(self, rows=(), newest="auto"):
        """Snapshot CSV; the anchor row keeps the staleness check quiet by default."""
        rows = list(rows)
        if newest == "auto":
            newest = date.today().isoformat()
        if newest is not None:
            rows.append(("10.9999/snapshot.anchor", "Retraction", newest, "anchor row"))
        write_snapshot(self.cache / "retraction-snapshot.csv", rows)

    def config(self, **overrides):
        overrides.setdefault("cache_dir", self.cache)
        return load_config(**overrides)

    def gateway(self, config):
        """Replay-backed gateway that never sleeps for real."""
        return build_gateway(
            config, offline=True, sleep=lambda s: None, clock=ticking_clock()
        )

    def run(self, config=None, bib=_UNSET, **kwargs):
        config = config or self.config()
        kwargs.setdefault("gateway", self.gateway(config))
        if bib is _UNSET:
            bib = self.bib_path
        return run_check(self.main, bib=bib, config=config, offline=True, **kwargs)


@pytest.fixture
def workspace(tmp_path):
    return Workspace(tmp_path)
