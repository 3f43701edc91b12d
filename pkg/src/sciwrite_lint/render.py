"""Rendering for the two audiences: terminal text and structured JSON.

The structured document is schema-versioned and byte-stable for identical
inputs so automated writing loops can diff consecutive runs.
"""

import json

from sciwrite_lint.findings import finding_from_dict, terminal_sort_key

SCHEMA_VERSION = 1

_LEVEL_LABELS = {
    "error": "errors",
    "warning": "warnings",
    "info": "info",
    "tool_limitation": "tool limitations",
}


def _counts(findings) -> dict:
    counts = {level: 0 for level in _LEVEL_LABELS}
    for finding in findings:
        counts[finding.level] += 1
    return counts


def render_terminal(findings, report) -> str:
    """One line per finding, then a summary with counts and the score breakdown."""
    lines = []
    for finding in sorted(findings, key=terminal_sort_key):
        where = str(finding.location) if finding.location else "-"
        lines.append(f"{finding.level.upper()} {finding.check_id} {where} {finding.message}")
    if lines:
        lines.append("")
    counts = _counts(findings)
    summary = ", ".join(
        f"{counts[level]} {_plural(label, counts[level])}"
        for level, label in _LEVEL_LABELS.items()
    )
    lines.append(summary)
    lines.append("")
    lines.append("score breakdown")
    lines.append(f"  integrity            {report.integrity:.3f}")
    refq_note = "" if report.referencing_quality_applicable else "  (no references assessed)"
    lines.append(f"  referencing quality  {report.referencing_quality:.3f}{refq_note}")
    damp_note = "  (bold-claims damp applied)" if report.bold_penalty_applied else ""
    lines.append(f"  contribution         {report.contribution:.3f}{damp_note}")
    lines.append(f"  overall              {report.final:.3f}")
    return "\n".join(lines) + "\n"


def _plural(label: str, n: int) -> str:
    if label in ("errors", "warnings", "tool limitations") and n == 1:
        return label[:-1]
    return label


def render_structured(findings, report, references=()) -> str:
    """Machine-readable report; keys sorted, floats untouched, byte-stable."""
    assessment_by_key = {a.key: a for a in report.per_reference}
    reference_docs = []
    for outcome in references:
        assessment = assessment_by_key.get(outcome.key)
        reference_docs.append({
            "key": outcome.key,
            "tier": outcome.tier,
            "reliability": outcome.reliability,
            "purpose": (
                assessment.purpose.role
                if assessment is not None and assessment.purpose is not None
                else None
            ),
            "claim_score": assessment.claim_score if assessment is not None else None,
            "matched_title": outcome.record.title if outcome.record else None,
            "matched_source": outcome.record.source if outcome.record else None,
        })
    document = {
        "schema_version": SCHEMA_VERSION,
        "findings": [f.to_dict() for f in findings],
        "references": reference_docs,
        "summary": {
            "errors": _counts(findings)["error"],
            "warnings": _counts(findings)["warning"],
            "info": _counts(findings)["info"],
            "tool_limitations": _counts(findings)["tool_limitation"],
        },
        "score": {
            "integrity": report.integrity,
            "referencing_quality": report.referencing_quality,
            "referencing_quality_applicable": report.referencing_quality_applicable,
            "contribution": report.contribution,
            "bold_penalty_applied": report.bold_penalty_applied,
            "total_purpose_weight": report.total_purpose_weight,
            "overall": report.final,
        },
    }
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def findings_from_structured(text: str) -> list:
    """Inverse of render_structured for the findings list."""
    document = json.loads(text)
    return [finding_from_dict(f) for f in document["findings"]]
