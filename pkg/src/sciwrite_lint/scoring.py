"""Manuscript-level score aggregation.

The final score is multiplicative: integrity x referencing quality x
contribution. Referencing quality is a purpose-weighted mean of per-reference
claim and reliability scores; contribution is a weighted sum of five assessed
axes with a damp applied to bold, unproductive claims.
"""

from dataclasses import dataclass, field
from typing import Optional

PURPOSE_WEIGHTS = {
    "evidence": 1.0,
    "contrast": 0.9,
    "method": 0.8,
    "definition": 0.7,
    "example": 0.6,
    "attribution": 0.5,
    "tool": 0.4,
    "context": 0.2,
}

CONTRIBUTION_AXES = ("empirical", "progressiveness", "unification", "problem_solving", "severity")

DEFAULT_BETA = {axis: 0.2 for axis in CONTRIBUTION_AXES}

# Findings at these levels are not evidence about the manuscript.
_EXCLUDED_LEVELS = ("tool_limitation", "info")


@dataclass(frozen=True)
class CitationPurpose:
    role: str

    def __post_init__(self):
        if self.role not in PURPOSE_WEIGHTS:
            raise ValueError(f"unknown citation purpose: {self.role!r}")

    @property
    def weight(self) -> float:
        return PURPOSE_WEIGHTS[self.role]


@dataclass(frozen=True)
class ReferenceAssessment:
    key: str
    reliability: float
    purpose: Optional[CitationPurpose] = None
    claim_score: Optional[float] = None

    def __post_init__(self):
        if self.claim_score is not None and not 0.0 <= self.claim_score <= 1.0:
            raise ValueError("claim_score must be in [0, 1]")
        if not 0.0 <= self.reliability <= 1.0:
            raise ValueError("reliability must be in [0, 1]")


@dataclass(frozen=True)
class ContributionProfile:
    axes: dict
    beta: dict = field(default_factory=lambda: dict(DEFAULT_BETA))

    def __post_init__(self):
        if set(self.axes) != set(CONTRIBUTION_AXES):
            raise ValueError(f"contribution axes must be exactly {CONTRIBUTION_AXES}")
        if set(self.beta) != set(CONTRIBUTION_AXES):
            raise ValueError("beta keys must match the contribution axes")
        for axis, value in self.axes.items():
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"axis {axis} out of [0, 1]")
        for axis, value in self.beta.items():
            if value < 0.0:
                raise ValueError(f"beta for {axis} must be nonnegative")


@dataclass(frozen=True)
class ScoreReport:
    integrity: float
    referencing_quality: float
    contribution: float
    bold_penalty_applied: bool
    final: float
    per_reference: tuple
    referencing_quality_applicable: bool = True
    total_purpose_weight: Optional[float] = None


def integrity(findings) -> float:
    """Fraction of non-error findings among those that count as manuscript evidence."""
    counted = [f for f in findings if f.level not in _EXCLUDED_LEVELS]
    if not counted:
        return 1.0
    non_error = sum(1 for f in counted if f.level != "error")
    return non_error / len(counted)


def referencing_quality(assessments) -> float:
    """Weighted mean of claim x reliability, weighted by citation purpose.

    Missing purposes weigh 1.0 and missing claim scores default to a neutral
    1.0, so an unassessed reference is judged on reliability alone.
    """
    if not assessments:
        raise ValueError("referencing_quality needs at least one assessment")
    num = 0.0
    den = 0.0
    for a in assessments:
        w = a.purpose.weight if a.purpose is not None else 1.0
        v = a.claim_score if a.claim_score is not None else 1.0
        num += w * v * a.reliability
        den += w
    return num / den


def contribution(profile: Optional[ContributionProfile]) -> tuple:
    """(value, bold_penalty_applied); an unassessed manuscript scores neutral 1.0.

    Bold unproductive claims (problem solving < 0.1 while progressiveness
    > 0.5) are damped by 0.75 - 0.5*(progressiveness - 0.5), clamped to
    [0.50, 0.75].
    """
    if profile is None:
        return 1.0, False
    base = sum(profile.beta[axis] * profile.axes[axis] for axis in CONTRIBUTION_AXES)
    prog = profile.axes["progressiveness"]
    solving = profile.axes["problem_solving"]
    if solving < 0.1 and prog > 0.5:
        damp = 0.75 - 0.5 * (prog - 0.5)
        damp = min(0.75, max(0.50, damp))
        return base * damp, True
    return base, False


def aggregate(
    integrity_score: float,
    refq: float,
    contribution_value: float,
    bold_penalty_applied: bool = False,
    per_reference=(),
    referencing_quality_applicable: bool = True,
    total_purpose_weight: Optional[float] = None,
) -> ScoreReport:
    """Assemble the final multiplicative score with its subscore breakdown."""
    return ScoreReport(
        integrity=integrity_score,
        referencing_quality=refq,
        contribution=contribution_value,
        bold_penalty_applied=bold_penalty_applied,
        final=integrity_score * refq * contribution_value,
        per_reference=tuple(per_reference),
        referencing_quality_applicable=referencing_quality_applicable,
        total_purpose_weight=total_purpose_weight,
    )
