"""Finding and Location types plus the registered check catalog."""

from dataclasses import dataclass
from typing import Optional

LEVELS = ("error", "warning", "info", "tool_limitation")

# Severity rank used when ordering terminal output (errors first).
_LEVEL_RANK = {level: i for i, level in enumerate(LEVELS)}

# All check ids a Finding may carry.
CHECK_CATALOG = frozenset(
    {
        "dangling-cite",
        "dangling-ref",
        "unreferenced-figure",
        "reference-exists",
        "reference-accuracy",
        "retracted-cite",
        "expression-of-concern",
        "reference-unreliable",
        "cross-id-mismatch",
        "cite-purpose",
        "parse-warning",
        "identifier-format",
        "retraction-snapshot",
        "referencing-quality",
    }
)

# Checks that require network access; these degrade to tool_limitation findings
# when the gateway is unreachable or fixtures are missing.
NETWORK_CHECKS = (
    "reference-exists",
    "reference-accuracy",
    "retracted-cite",
    "cross-id-mismatch",
    "reference-unreliable",
)


@dataclass(frozen=True)
class Location:
    file: str
    line: int
    column: Optional[int] = None

    def __post_init__(self):
        if self.line < 1:
            raise ValueError(f"line must be >= 1, got {self.line}")

    def __str__(self) -> str:
        return f"{self.file}:{self.line}"


@dataclass(frozen=True)
class Finding:
    check_id: str
    level: str
    message: str
    context: str = ""
    location: Optional[Location] = None
    reference_key: Optional[str] = None

    def __post_init__(self):
        if self.check_id not in CHECK_CATALOG:
            raise ValueError(f"unregistered check id: {self.check_id}")
        if self.level not in LEVELS:
            raise ValueError(f"unknown level: {self.level}")

    def to_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "level": self.level,
            "message": self.message,
            "context": self.context,
            "location": (
                None
                if self.location is None
                else {
                    "file": self.location.file,
                    "line": self.location.line,
                    "column": self.location.column,
                }
            ),
            "reference_key": self.reference_key,
        }


def finding_from_dict(data: dict) -> Finding:
    loc = data.get("location")
    return Finding(
        check_id=data["check_id"],
        level=data["level"],
        message=data["message"],
        context=data.get("context", ""),
        location=None if loc is None else Location(loc["file"], loc["line"], loc.get("column")),
        reference_key=data.get("reference_key"),
    )


def sort_key(finding: Finding) -> tuple:
    """Stable (file, line, check id) ordering for diff-friendly output."""
    loc = finding.location
    return (
        loc.file if loc else "~",
        loc.line if loc else 0,
        finding.check_id,
        finding.reference_key or "",
        finding.message,
    )


def terminal_sort_key(finding: Finding) -> tuple:
    """Terminal ordering: per file, errors before warnings, then by line."""
    loc = finding.location
    return (
        loc.file if loc else "~",
        _LEVEL_RANK[finding.level],
        loc.line if loc else 0,
        finding.check_id,
        finding.message,
    )
