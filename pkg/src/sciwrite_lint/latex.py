"""Regex-based LaTeX structure extraction: citations, labels, cross-references, figures.

Not a TeX engine. Recognizes \\cite/\\citep/\\citet and the \\ref/\\eqref/\\autoref/
\\cref family; unknown cite-like macros are ignored. \\input/\\include are followed
one level relative to the main file.
"""

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from sciwrite_lint.findings import Finding, Location

CITE_RE = re.compile(r"\\cite[pt]?\*?\s*(?:\[[^\]]*\]\s*)*\{([^{}]*)\}")
REF_RE = re.compile(r"\\(?:ref|eqref|autoref|[cC]ref)\*?\s*\{([^{}]*)\}")
LABEL_RE = re.compile(r"\\label\s*\{([^{}]*)\}")
BEGIN_RE = re.compile(r"\\begin\s*\{([A-Za-z]+\*?)\}")
END_RE = re.compile(r"\\end\s*\{([A-Za-z]+\*?)\}")
SECTION_RE = re.compile(r"\\(?:chapter|section|subsection|subsubsection|paragraph)\*?\s*\{")
INPUT_RE = re.compile(r"\\(?:input|include)\s*\{([^{}]*)\}")
CAPTION_RE = re.compile(r"\\caption\s*[\[{]")
UNCLOSED_RE = re.compile(r"\\(cite[pt]?|ref|eqref|autoref|[cC]ref|label)\*?\s*\{[^{}]*$")

_FIGURE_ENVS = {"figure", "figure*", "subfigure", "wrapfigure"}
_TABLE_ENVS = {"table", "table*"}
_EQUATION_ENVS = {"equation", "equation*", "align", "align*", "eqnarray", "gather", "gather*", "multline", "multline*"}


@dataclass(frozen=True)
class LabelDef:
    label: str
    kind: str  # figure | table | section | equation | other
    location: Location


@dataclass(frozen=True)
class FigureEnv:
    label: Optional[str]
    caption_present: bool
    location: Location


@dataclass
class ManuscriptModel:
    cite_keys: list = field(default_factory=list)  # (key, Location), document order
    labels: list = field(default_factory=list)  # LabelDef, document order
    refs: list = field(default_factory=list)  # (label, Location)
    figures: list = field(default_factory=list)  # FigureEnv
    notes: list = field(default_factory=list)  # parse-limitation findings

    def label_names(self) -> set:
        return {d.label for d in self.labels}

    def merge(self, other: "ManuscriptModel") -> None:
        self.cite_keys.extend(other.cite_keys)
        self.labels.extend(other.labels)
        self.refs.extend(other.refs)
        self.figures.extend(other.figures)
        self.notes.extend(other.notes)

    def to_dict(self) -> dict:
        return {
            "cite_keys": [(k, str(loc)) for k, loc in self.cite_keys],
            "labels": [(d.label, d.kind, str(d.location)) for d in self.labels],
            "refs": [(r, str(loc)) for r, loc in self.refs],
            "figures": [(f.label, f.caption_present, str(f.location)) for f in self.figures],
        }


def strip_comment(line: str) -> str:
    """Drop everything after the first unescaped % (even run of backslashes before it)."""
    start = 0
    while True:
        at = line.find("%", start)
        if at == -1:
            return line
        backslashes = 0
        i = at - 1
        while i >= 0 and line[i] == "\\":
            backslashes += 1
            i -= 1
        if backslashes % 2 == 0:
            return line[:at]
        start = at + 1


def parse_latex(source: str, file: str) -> ManuscriptModel:
    """Extract the citation/label/reference/figure structure of one LaTeX source."""
    model = ManuscriptModel()
    env_stack = []  # (env name, begin Location)
    open_figure = None  # [label, caption_present, Location] while inside a figure env
    section_line = -10  # line of the most recent sectioning command

    for lineno, raw_line in enumerate(source.splitlines(), start=1):
        line = strip_comment(raw_line)
        if not line.strip():
            continue
        loc_of = lambda m: Location(file, lineno, m.start() + 1)  # noqa: E731

        if UNCLOSED_RE.search(line):
            model.notes.append(
                Finding(
                    check_id="parse-warning",
                    level="tool_limitation",
                    message="unbalanced braces; command skipped",
                    context="regex extraction cannot recover a brace-broken command",
                    location=Location(file, lineno),
                )
            )

        if SECTION_RE.search(line):
            section_line = lineno

        for match in BEGIN_RE.finditer(line):
            env = match.group(1)
            env_stack.append((env, Location(file, lineno, match.start() + 1)))
            if env in ("figure", "figure*") and open_figure is None:
                open_figure = [None, False, Location(file, lineno, match.start() + 1)]

        for match in CITE_RE.finditer(line):
            for key in match.group(1).split(","):
                key = key.strip()
                if key:
                    model.cite_keys.append((key, loc_of(match)))

        for match in REF_RE.finditer(line):
            for label in match.group(1).split(","):
                label = label.strip()
                if label:
                    model.refs.append((label, loc_of(match)))

        for match in LABEL_RE.finditer(line):
            label = match.group(1).strip()
            if not label:
                continue
            kind = _label_kind(env_stack, lineno, section_line)
            model.labels.append(LabelDef(label, kind, loc_of(match)))
            if open_figure is not None and open_figure[0] is None and kind == "figure":
                open_figure[0] = label

        if open_figure is not None and CAPTION_RE.search(line):
            open_figure[1] = True

        for match in END_RE.finditer(line):
            env = match.group(1)
            while env_stack and env_stack[-1][0] != env:
                env_stack.pop()
            if env_stack:
                env_stack.pop()
            if env in ("figure", "figure*") and open_figure is not None:
                if not any(e in ("figure", "figure*") for e, _ in env_stack):
                    model.figures.append(FigureEnv(open_figure[0], open_figure[1], open_figure[2]))
                    open_figure = None

    if open_figure is not None:
        model.figures.append(FigureEnv(open_figure[0], open_figure[1], open_figure[2]))
        model.notes.append(
            Finding(
                check_id="parse-warning",
                level="tool_limitation",
                message="figure environment never closed",
                context="regex extraction reached end of file inside a figure",
                location=open_figure[2],
            )
        )
    return model


def _label_kind(env_stack, lineno, section_line) -> str:
    for env, _ in reversed(env_stack):
        if env in _FIGURE_ENVS:
            return "figure"
        if env in _TABLE_ENVS:
            return "table"
        if env in _EQUATION_ENVS:
            return "equation"
    if lineno - section_line <= 1:
        return "section"
    return "other"


def read_tex(path: Path) -> tuple:
    """Read a source file as UTF-8, falling back to Latin-1 with a warning."""
    data = path.read_bytes()
    try:
        return data.decode("utf-8"), None
    except UnicodeDecodeError:
        warning = Finding(
            check_id="parse-warning",
            level="warning",
            message=f"{path} is not valid UTF-8; decoded as Latin-1",
            context="re-encode the source as UTF-8 to silence this",
            location=Location(str(path), 1),
        )
        return data.decode("latin-1"), warning


def parse_manuscript(main: Path) -> ManuscriptModel:
    """Parse the main file and everything it \\input s, one level deep."""
    main = Path(main)
    source, warning = read_tex(main)  # raises OSError for unreadable input
    model = parse_latex(source, str(main))
    if warning:
        model.notes.append(warning)

    seen = {main.resolve()}
    for lineno, raw_line in enumerate(source.splitlines(), start=1):
        line = strip_comment(raw_line)
        for match in INPUT_RE.finditer(line):
            name = match.group(1).strip()
            if not name:
                continue
            child = (main.parent / name)
            if child.suffix == "":
                child = child.with_suffix(".tex")
            resolved = child.resolve()
            if resolved in seen:
                model.notes.append(
                    Finding(
                        check_id="parse-warning",
                        level="warning",
                        message=f"circular or repeated \\input of {name!r} skipped",
                        context="input files are followed one level, once each",
                        location=Location(str(main), lineno),
                    )
                )
                continue
            seen.add(resolved)
            if not child.is_file():
                model.notes.append(
                    Finding(
                        check_id="parse-warning",
                        level="warning",
                        message=f"\\input file not found: {name!r}",
                        context="referenced from the main file",
                        location=Location(str(main), lineno),
                    )
                )
                continue
            child_source, child_warning = read_tex(child)
            child_model = parse_latex(child_source, str(child))
            if child_warning:
                child_model.notes.append(child_warning)
            model.merge(child_model)
    return model
