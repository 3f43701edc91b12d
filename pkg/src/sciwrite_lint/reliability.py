"""Per-reference reliability scoring.

Combines the verification tier, retraction status, metadata agreement, and
externally supplied consistency/bibliography signals into a single score in
[0, 1]. Emits the reference-level findings derived from those signals.
"""

from dataclasses import dataclass
from typing import Optional

from sciwrite_lint.findings import Finding, Location

TIER_T1 = "T1"
TIER_T2 = "T2"
TIER_T3 = "T3"
TIER_UNVERIFIABLE = "unverifiable"

TIERS = (TIER_T1, TIER_T2, TIER_T3, TIER_UNVERIFIABLE)

_TIER_BASE = {TIER_T1: 0.9, TIER_T2: 0.7, TIER_T3: 0.3}

METADATA_MISMATCH_PENALTY = 0.1
CROSS_ID_PENALTY = 0.1
NON_FORMAL_PENALTY = 0.2
CONCERN_MULTIPLIER = 0.3
CONSISTENCY_WARNING_PENALTY = 0.05
CONSISTENCY_ERROR_PENALTY = 0.10
CONSISTENCY_BLEND = 0.6
BIB_MISMATCH_PENALTY = 0.05
BIB_RETRACTION_PENALTY = 0.15
BIB_DEDUCTION_CAP = 0.30

UNRELIABLE_THRESHOLD = 0.5
TITLE_ERROR_THRESHOLD = 0.80


@dataclass(frozen=True)
class VerificationTier:
    tier: str

    def __post_init__(self):
        if self.tier not in TIERS:
            raise ValueError(f"unknown tier: {self.tier!r}")


@dataclass(frozen=True)
class ReliabilityBreakdown:
    """Every signal feeding one reference's score.

    Consistency counts, oversize, and the bib_* aggregates come from an
    external signals file; everything else is computed locally.
    """

    tier: VerificationTier
    retraction: object  # RetractionStatus
    metadata_mismatches: int = 0
    cross_id_mismatches: int = 0
    non_formal: bool = False
    consistency_warnings: int = 0
    consistency_errors: int = 0
    oversize: bool = False
    has_consistency_signals: bool = False
    bib_hallucination_rate: Optional[float] = None
    bib_metadata_mismatches: int = 0
    bib_retractions: int = 0

    def __post_init__(self):
        for name in ("metadata_mismatches", "cross_id_mismatches",
                     "consistency_warnings", "consistency_errors",
                     "bib_metadata_mismatches", "bib_retractions"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        rate = self.bib_hallucination_rate
        if rate is not None and not 0.0 <= rate <= 1.0:
            raise ValueError("bib_hallucination_rate must be in [0, 1]")


def _clamp(x: float) -> float:
    return min(1.0, max(0.0, x))


def metadata_score(b: ReliabilityBreakdown) -> float:
    """Tier base minus per-signal deductions; retraction dominates everything."""
    if b.tier.tier == TIER_UNVERIFIABLE:
        raise ValueError("no metadata score for an unverifiable reference")
    if b.retraction.kind == "retracted":
        return 0.0
    score = _TIER_BASE[b.tier.tier]
    score -= METADATA_MISMATCH_PENALTY * b.metadata_mismatches
    score -= CROSS_ID_PENALTY * b.cross_id_mismatches
    if b.non_formal:
        score -= NON_FORMAL_PENALTY
    if b.retraction.kind == "expression_of_concern":
        score *= CONCERN_MULTIPLIER
    return _clamp(score)


def consistency_score(b: ReliabilityBreakdown) -> Optional[float]:
    """Internal-consistency subscore, or None when no signals were supplied.

    Oversize works are excluded from consistency checking and score neutral.
    """
    if b.oversize:
        return 1.0
    if not b.has_consistency_signals:
        return None
    score = 1.0
    score -= CONSISTENCY_WARNING_PENALTY * b.consistency_warnings
    score -= CONSISTENCY_ERROR_PENALTY * b.consistency_errors
    return _clamp(score)


def reliability(b: ReliabilityBreakdown) -> float:
    """Blend of consistency (60%) and metadata (40%), minus capped bibliography deductions."""
    if b.retraction.kind == "retracted":
        return 0.0
    metadata = metadata_score(b)
    consistency = consistency_score(b)
    if consistency is not None:
        blended = CONSISTENCY_BLEND * consistency + (1.0 - CONSISTENCY_BLEND) * metadata
    else:
        blended = metadata
    if b.bib_hallucination_rate is not None:
        blended -= min(BIB_DEDUCTION_CAP, b.bib_hallucination_rate)
    blended -= min(BIB_DEDUCTION_CAP, BIB_MISMATCH_PENALTY * b.bib_metadata_mismatches)
    blended -= min(BIB_DEDUCTION_CAP, BIB_RETRACTION_PENALTY * b.bib_retractions)
    return _clamp(blended)


def _diff_context(match) -> str:
    score = match.score
    parts = []
    if score.title_sim < TITLE_ERROR_THRESHOLD:
        parts.append(f"title similarity {score.title_sim:.2f}")
    if score.author_overlap < 0.5:
        parts.append(f"author overlap {score.author_overlap:.2f}")
    if score.year_signal < 1.0:
        parts.append("year differs by 2 or more")
    if score.venue_signal < 1.0:
        parts.append("venue differs")
    return "; ".join(parts) if parts else "metadata differs from the registry record"


def emit_reference_findings(
    key: str,
    match,
    b: ReliabilityBreakdown,
    title_sim: float,
    location: Optional[Location] = None,
    unreliable_threshold: float = UNRELIABLE_THRESHOLD,
    title_error_threshold: float = TITLE_ERROR_THRESHOLD,
) -> list:
    """Findings for one reference: existence, accuracy, retraction, low reliability."""
    findings = []
    if b.tier.tier == TIER_T3:
        findings.append(Finding(
            check_id="reference-exists",
            level="error",
            message=f"reference '{key}' was not found in any registry",
            context="no registry candidate matched the entry's identifiers or metadata",
            location=location,
            reference_key=key,
        ))
    if match is not None and b.metadata_mismatches > 0:
        level = "error" if title_sim < title_error_threshold else "warning"
        findings.append(Finding(
            check_id="reference-accuracy",
            level=level,
            message=(
                f"reference '{key}' disagrees with its registry record "
                f"on {b.metadata_mismatches} field(s)"
            ),
            context=_diff_context(match),
            location=location,
            reference_key=key,
        ))
    if b.retraction.kind == "retracted":
        detail = f" ({b.retraction.reason})" if b.retraction.reason else ""
        findings.append(Finding(
            check_id="retracted-cite",
            level="error",
            message=f"reference '{key}' cites a retracted work{detail}",
            context="the work appears in the retraction snapshot",
            location=location,
            reference_key=key,
        ))
    elif b.retraction.kind == "expression_of_concern":
        findings.append(Finding(
            check_id="expression-of-concern",
            level="warning",
            message=f"reference '{key}' has an expression of concern",
            context="the publisher has flagged this work without retracting it",
            location=location,
            reference_key=key,
        ))
    score = reliability(b)
    if score < unreliable_threshold:
        findings.append(Finding(
            check_id="reference-unreliable",
            level="warning",
            message=f"reference '{key}' scores {score:.2f} reliability, below {unreliable_threshold:.2f}",
            context="multiple signals converge: verification tier, metadata agreement, and bibliography health",
            location=location,
            reference_key=key,
        ))
    return findings
