"""External signals: per-reference assessments and contribution axes.

These values come from analysis stages that run outside this tool (claim
verification, consistency checking, contribution scoring). They arrive as a
JSON document and are folded into the reliability and score aggregation.
"""

import json
from dataclasses import dataclass, field
from typing import Optional

from sciwrite_lint.scoring import CONTRIBUTION_AXES, PURPOSE_WEIGHTS

_REFERENCE_FIELDS = {
    "claim_score",
    "purpose",
    "consistency_warnings",
    "consistency_errors",
    "oversize",
    "bib_hallucination_rate",
    "bib_metadata_mismatches",
    "bib_retractions",
}

_TOP_LEVEL_FIELDS = {"schema_version", "references", "contribution"}


class SignalsError(Exception):
    """Malformed or inconsistent signals document."""


@dataclass(frozen=True)
class ReferenceSignals:
    claim_score: Optional[float] = None
    purpose: Optional[str] = None
    consistency_warnings: Optional[int] = None
    consistency_errors: Optional[int] = None
    oversize: bool = False
    bib_hallucination_rate: Optional[float] = None
    bib_metadata_mismatches: int = 0
    bib_retractions: int = 0

    @property
    def has_consistency_signals(self) -> bool:
        return self.consistency_warnings is not None or self.consistency_errors is not None


@dataclass(frozen=True)
class SignalsFile:
    references: dict = field(default_factory=dict)  # key -> ReferenceSignals
    contribution_axes: Optional[dict] = None

    def for_reference(self, key: str) -> ReferenceSignals:
        return self.references.get(key, ReferenceSignals())


def _require_unit(value, name: str) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool) or not 0.0 <= value <= 1.0:
        raise SignalsError(f"{name} must be a number in [0, 1], got {value!r}")
    return float(value)


def _require_count(value, name: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise SignalsError(f"{name} must be a nonnegative integer, got {value!r}")
    return value


def _parse_reference(key: str, raw: dict) -> ReferenceSignals:
    unknown = set(raw) - _REFERENCE_FIELDS
    if unknown:
        raise SignalsError(f"unknown signal field(s) for {key!r}: {sorted(unknown)}")
    purpose = raw.get("purpose")
    if purpose is not None and purpose not in PURPOSE_WEIGHTS:
        raise SignalsError(f"unknown citation purpose for {key!r}: {purpose!r}")
    kwargs = {"purpose": purpose}
    if "claim_score" in raw:
        kwargs["claim_score"] = _require_unit(raw["claim_score"], f"{key}.claim_score")
    if "consistency_warnings" in raw:
        kwargs["consistency_warnings"] = _require_count(raw["consistency_warnings"], f"{key}.consistency_warnings")
    if "consistency_errors" in raw:
        kwargs["consistency_errors"] = _require_count(raw["consistency_errors"], f"{key}.consistency_errors")
    if "oversize" in raw:
        if not isinstance(raw["oversize"], bool):
            raise SignalsError(f"{key}.oversize must be a boolean")
        kwargs["oversize"] = raw["oversize"]
    if "bib_hallucination_rate" in raw:
        kwargs["bib_hallucination_rate"] = _require_unit(raw["bib_hallucination_rate"], f"{key}.bib_hallucination_rate")
    if "bib_metadata_mismatches" in raw:
        kwargs["bib_metadata_mismatches"] = _require_count(raw["bib_metadata_mismatches"], f"{key}.bib_metadata_mismatches")
    if "bib_retractions" in raw:
        kwargs["bib_retractions"] = _require_count(raw["bib_retractions"], f"{key}.bib_retractions")
    return ReferenceSignals(**kwargs)


def parse_signals(data: dict, known_keys=None) -> SignalsFile:
    """Validate a signals document; reference keys must exist in the bibliography."""
    if not isinstance(data, dict):
        raise SignalsError("signals document must be a JSON object")
    unknown = set(data) - _TOP_LEVEL_FIELDS
    if unknown:
        raise SignalsError(f"unknown top-level signal field(s): {sorted(unknown)}")
    references = {}
    for key, raw in (data.get("references") or {}).items():
        if known_keys is not None and key not in known_keys:
            raise SignalsError(f"signals reference unknown bibliography key: {key!r}")
        if not isinstance(raw, dict):
            raise SignalsError(f"signals for {key!r} must be an object")
        references[key] = _parse_reference(key, raw)
    axes = data.get("contribution")
    if axes is not None:
        if set(axes) != set(CONTRIBUTION_AXES):
            raise SignalsError(f"contribution must define exactly the axes {CONTRIBUTION_AXES}")
        axes = {name: _require_unit(value, f"contribution.{name}") for name, value in axes.items()}
    return SignalsFile(references=references, contribution_axes=axes)


def load_signals(path, known_keys=None) -> SignalsFile:
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise SignalsError(f"cannot load signals from {path}: {exc}") from exc
    return parse_signals(data, known_keys=known_keys)
