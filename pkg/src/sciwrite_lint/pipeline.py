"""End-to-end check pipeline.

Stages: parse sources -> text checks (concurrent with network work) ->
identifier resolution in batches -> candidate search for identifier-less
entries -> retraction lookup -> reliability scoring -> aggregation.

A failed external call degrades the affected check to a tool-limitation
finding; it never turns into a false positive and never disappears.
"""

import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Optional

from sciwrite_lint import checks as text_checks
from sciwrite_lint import matching, scoring
from sciwrite_lint.bibtex import parse_bibtex
from sciwrite_lint.config import Config
from sciwrite_lint.findings import Finding, NETWORK_CHECKS, sort_key
from sciwrite_lint.gateway import (
    DEFAULT_USER_AGENT,
    GatewayError,
    HttpTransport,
    RecordingTransport,
    RegistryGateway,
    ReplayTransport,
    ResolveResult,
    RetractionSnapshot,
)
from sciwrite_lint.identifiers import cross_id_consistency
from sciwrite_lint.latex import parse_manuscript, read_tex
from sciwrite_lint.records import CanonicalRecord, RetractionStatus
from sciwrite_lint.reliability import (
    ReliabilityBreakdown,
    VerificationTier,
    emit_reference_findings,
    reliability,
)
from sciwrite_lint.signals import SignalsFile, parse_signals

BIBSOURCE_RE = re.compile(r"\\(?:bibliography|addbibresource)\s*\{([^{}]*)\}")

# work types that trigger the non-formal deduction
NON_FORMAL_TYPES = {"news", "guide", "blog", "webpage", "editorial", "magazine", "press-release"}

_ID_PREFERENCE = ("doi", "arxiv", "pmid", "isbn", "lccn")

SNAPSHOT_STALE_DAYS = 180


class InputError(Exception):
    """Unusable input or environment; maps to the usage-failure exit code."""


@dataclass
class ReferenceOutcome:
    key: str
    tier: str
    reliability: Optional[float] = None
    record: Optional[CanonicalRecord] = None
    match_score: Optional[matching.MatchScore] = None
    breakdown: Optional[ReliabilityBreakdown] = None


@dataclass
class CheckResult:
    findings: list
    report: scoring.ScoreReport
    exit_code: int
    references: list = field(default_factory=list)


def build_gateway(config: Config, offline: bool, transport=None, **gateway_kwargs) -> RegistryGateway:
    """Gateway wired per config: replay fixtures offline, record-through online."""
    if transport is None:
        replay_dir = Path(config.cache_dir) / "replay"
        if offline:
            transport = ReplayTransport(replay_dir)
        else:
            transport = RecordingTransport(HttpTransport(), replay_dir)
    return RegistryGateway(
        transport,
        rate_limit_rps=config.rate_limit_rps,
        user_agent=config.user_agent or DEFAULT_USER_AGENT,
        **gateway_kwargs,
    )


def load_snapshot(config: Config) -> Optional[RetractionSnapshot]:
    path = Path(config.cache_dir) / "retraction-snapshot.csv"
    if not path.is_file():
        return None
    return RetractionSnapshot.load(path)


def discover_bib(main: Path, source: str) -> Path:
    """Bibliography path from the first \\bibliography/\\addbibresource command."""
    for line in source.splitlines():
        match = BIBSOURCE_RE.search(line)
        if match:
            name = match.group(1).split(",")[0].strip()
            if not name:
                continue
            bib = main.parent / name
            if bib.suffix != ".bib":
                bib = bib.with_suffix(".bib")
            return bib
    raise InputError(
        f"no --bib given and {main} has no \\bibliography or \\addbibresource command"
    )


def load_pdf_manifest(path) -> dict:
    import json

    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot load PDF manifest {path}: {exc}") from exc
    if not isinstance(data, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in data.items()
    ):
        raise InputError(f"PDF manifest {path} must map bibliography keys to file paths")
    return data


def _tool_limitation(check_id: str, message: str, context: str, key: Optional[str] = None) -> Finding:
    return Finding(
        check_id=check_id,
        level="tool_limitation",
        message=message,
        context=context,
        reference_key=key,
    )


@dataclass
class _Verification:
    """Raw per-entry verification state before scoring."""
    entry: object
    status: str  # verified | not_found | unverifiable
    record: Optional[CanonicalRecord] = None
    match_score: Optional[matching.MatchScore] = None
    cross_id_mismatches: int = 0
    findings: list = field(default_factory=list)


def _resolve_identifiers(entries, gateway):
    dois = sorted({e.identifiers.doi for e in entries if e.identifiers.doi})
    ext_ids = sorted(
        {
            (kind, getattr(e.identifiers, kind))
            for e in entries
            for kind in ("arxiv", "pmid", "isbn", "lccn")
            if getattr(e.identifiers, kind)
        }
    )
    doi_result = gateway.resolve_dois(dois) if dois else ResolveResult()
    ext_result = gateway.resolve_external_ids(ext_ids) if ext_ids else ResolveResult()
    return doi_result, ext_result


def _verify_entry(entry, doi_result, ext_result, search_outcome, config) -> _Verification:
    ids = entry.identifiers
    resolved = {}
    transient_failure = False
    if ids.doi:
        if ids.doi in doi_result.found:
            resolved["doi"] = doi_result.found[ids.doi]
        elif ids.doi in doi_result.failed:
            transient_failure = True
    for kind in ("arxiv", "pmid", "isbn", "lccn"):
        value = getattr(ids, kind)
        if not value:
            continue
        outcome_key = (kind, value)
        if outcome_key in ext_result.found:
            resolved[kind] = ext_result.found[outcome_key]
        elif outcome_key in ext_result.failed:
            transient_failure = True

    if resolved:
        mismatches, xid_findings = (0, [])
        if len(resolved) >= 2:
            mismatches, xid_findings = cross_id_consistency(
                resolved, key=entry.key, location=entry.location
            )
        record = next(resolved[k] for k in _ID_PREFERENCE if k in resolved)
        return _Verification(
            entry=entry,
            status="verified",
            record=record,
            match_score=matching.score_candidate(entry, record),
            cross_id_mismatches=mismatches,
            findings=xid_findings,
        )
    if not ids.is_empty():
        if transient_failure:
            return _Verification(entry=entry, status="unverifiable")
        return _Verification(entry=entry, status="not_found")

    # identifier-less: verified only through the loose search
    kind, payload = search_outcome
    if kind == "error":
        return _Verification(entry=entry, status="unverifiable")
    if kind == "skipped":  # no title to search with
        return _Verification(entry=entry, status="not_found")
    match = matching.select_best(entry, payload, threshold=config.match_threshold)
    if match is None:
        return _Verification(entry=entry, status="not_found")
    return _Verification(
        entry=entry,
        status="verified",
        record=match.record,
        match_score=match.score,
    )


def _count_metadata_mismatches(score: matching.MatchScore, title_threshold: float) -> int:
    """One per disagreeing field among title/author/year/venue, max 4."""
    return sum(
        (
            score.title_sim < title_threshold,
            score.author_overlap < 0.5,
            score.year_signal < 1.0,
            score.venue_signal < 1.0,
        )
    )


def _retraction_for(verification, snapshot) -> RetractionStatus:
    entry = verification.entry
    record = verification.record
    status = RetractionStatus()
    if record is not None and record.retraction.kind != "none":
        status = record.retraction
    doi = entry.identifiers.doi or (record.identifiers.doi if record else None)
    if snapshot is not None and doi:
        snap = snapshot.lookup(doi)
        if snap.kind != "none":
            status = snap
    return status


def _snapshot_staleness_finding(snapshot) -> Optional[Finding]:
    if snapshot is None or not snapshot.snapshot_date:
        return None
    try:
        newest = date.fromisoformat(snapshot.snapshot_date[:10])
    except ValueError:
        return None
    if (date.today() - newest).days <= SNAPSHOT_STALE_DAYS:
        return None
    return Finding(
        check_id="retraction-snapshot",
        level="info",
        message=f"retraction snapshot's newest notice is dated {newest.isoformat()}",
        context=f"more than {SNAPSHOT_STALE_DAYS} days old; consider refreshing the snapshot",
    )


def _apply_config(findings: list, config: Config) -> list:
    kept = []
    for finding in findings:
        if not config.check_enabled(finding.check_id):
            continue
        override = config.severity_overrides.get(finding.check_id)
        if override is not None and override != finding.level:
            finding = Finding(
                check_id=finding.check_id,
                level=override,
                message=finding.message,
                context=finding.context,
                location=finding.location,
                reference_key=finding.reference_key,
            )
        kept.append(finding)
    return sorted(kept, key=sort_key)


def exit_code_for(findings: list, config: Config) -> int:
    levels = {f.level for f in findings}
    if "error" in levels:
        return 1
    if "warning" in levels and config.fail_on_warnings:
        return 2
    return 0


def run_check(
    tex_main,
    bib=None,
    config: Optional[Config] = None,
    signals=None,
    offline: bool = False,
    gateway: Optional[RegistryGateway] = None,
    snapshot: Optional[RetractionSnapshot] = None,
    pdf_manifest: Optional[dict] = None,
) -> CheckResult:
    """Run the whole pipeline for one manuscript.

    `signals` may be a pre-validated SignalsFile or the raw parsed JSON dict;
    raw documents are validated against the bibliography's keys.
    """
    config = config or Config()
    main = Path(tex_main)
    if not main.is_file():
        raise InputError(f"manuscript not found: {main}")
    try:
        source, _ = read_tex(main)
    except OSError as exc:
        raise InputError(f"cannot read {main}: {exc}") from exc
    model = parse_manuscript(main)

    bib_path = Path(bib) if bib is not None else discover_bib(main, source)
    if not bib_path.is_file():
        raise InputError(f"bibliography not found: {bib_path}")
    try:
        bib_source, bib_encoding_warning = read_tex(bib_path)
    except OSError as exc:
        raise InputError(f"cannot read {bib_path}: {exc}") from exc
    entries, bib_findings = parse_bibtex(bib_source, str(bib_path))
    if bib_encoding_warning is not None:
        bib_findings.append(bib_encoding_warning)

    if signals is None:
        signals_file = SignalsFile()
    elif isinstance(signals, SignalsFile):
        signals_file = signals
    else:
        signals_file = parse_signals(signals, known_keys={e.key for e in entries})

    if gateway is None:
        gateway = build_gateway(config, offline)
    if snapshot is None:
        snapshot = load_snapshot(config)
    pdf_manifest = pdf_manifest or {}

    findings = list(model.notes) + list(bib_findings)

    with ThreadPoolExecutor(max_workers=config.parallelism) as pool:
        enabled = {check: config.check_enabled(check) for check in
                   ("dangling-cite", "dangling-ref", "unreferenced-figure")}
        text_future = pool.submit(text_checks.run_text_checks, model, entries, enabled)

        doi_result, ext_result = _resolve_identifiers(entries, gateway)
        search_futures = {}
        for entry in entries:
            if entry.identifiers.is_empty() and entry.title:
                search_futures[entry.key] = pool.submit(gateway.search_candidates, entry)

        verifications = []
        for entry in entries:
            if entry.key in search_futures:
                try:
                    outcome = ("candidates", search_futures[entry.key].result())
                except GatewayError:
                    outcome = ("error", None)
            elif entry.identifiers.is_empty():
                outcome = ("skipped", None)
            else:
                outcome = ("unused", None)
            verifications.append(_verify_entry(entry, doi_result, ext_result, outcome, config))

        findings.extend(text_future.result())

    # network health: if every network-dependent entry failed, the gateway is
    # down and each network check degrades once instead of flooding per entry
    unverifiable = [v for v in verifications if v.status == "unverifiable"]
    total_degradation = bool(verifications) and len(unverifiable) == len(verifications)

    if total_degradation:
        for check_id in NETWORK_CHECKS:
            findings.append(_tool_limitation(
                check_id,
                "network verification skipped: no registry could be reached",
                "offline without recorded fixtures, or all upstream services failed",
            ))
    else:
        for v in unverifiable:
            findings.append(_tool_limitation(
                "reference-exists",
                f"could not verify reference '{v.entry.key}': registry unavailable",
                "transient upstream failure after retries; not evidence of a missing work",
                key=v.entry.key,
            ))
        retraction_needed = any(
            v.entry.identifiers.doi or (v.record and v.record.identifiers.doi)
            for v in verifications
        )
        if snapshot is None and retraction_needed and config.check_enabled("retracted-cite"):
            findings.append(_tool_limitation(
                "retracted-cite",
                "retraction status not checked: no local snapshot",
                "place a retraction snapshot CSV in the cache directory to enable this check",
            ))

    staleness = _snapshot_staleness_finding(snapshot)
    if staleness is not None:
        findings.append(staleness)

    # reliability scoring and reference-level findings
    outcomes = []
    assessments = []
    for v in verifications:
        entry = v.entry
        sig = signals_file.for_reference(entry.key)
        if v.status == "unverifiable":
            outcomes.append(ReferenceOutcome(key=entry.key, tier="unverifiable"))
            continue
        tier = "T3"
        if v.status == "verified":
            tier = "T1" if entry.key in pdf_manifest else "T2"
        mismatches = 0
        title_sim = 1.0
        if v.record is not None and v.match_score is not None:
            mismatches = _count_metadata_mismatches(v.match_score, config.title_error_threshold)
            title_sim = v.match_score.title_sim
        breakdown = ReliabilityBreakdown(
            tier=VerificationTier(tier),
            retraction=_retraction_for(v, snapshot),
            metadata_mismatches=mismatches,
            cross_id_mismatches=v.cross_id_mismatches,
            non_formal=bool(
                v.record is not None
                and v.record.work_type
                and v.record.work_type.lower() in NON_FORMAL_TYPES
            ),
            consistency_warnings=sig.consistency_warnings or 0,
            consistency_errors=sig.consistency_errors or 0,
            oversize=sig.oversize,
            has_consistency_signals=sig.has_consistency_signals,
            bib_hallucination_rate=sig.bib_hallucination_rate,
            bib_metadata_mismatches=sig.bib_metadata_mismatches,
            bib_retractions=sig.bib_retractions,
        )
        score = reliability(breakdown)
        match_obj = None
        if v.record is not None and v.match_score is not None:
            match_obj = matching.Match(v.record, v.match_score)
        findings.extend(v.findings)
        findings.extend(emit_reference_findings(
            entry.key,
            match_obj,
            breakdown,
            title_sim,
            location=entry.location,
            unreliable_threshold=config.unreliable_threshold,
            title_error_threshold=config.title_error_threshold,
        ))
        outcomes.append(ReferenceOutcome(
            key=entry.key,
            tier=tier,
            reliability=score,
            record=v.record,
            match_score=v.match_score,
            breakdown=breakdown,
        ))
        assessments.append(scoring.ReferenceAssessment(
            key=entry.key,
            reliability=score,
            purpose=scoring.CitationPurpose(sig.purpose) if sig.purpose else None,
            claim_score=sig.claim_score,
        ))

    # purpose bookkeeping: a manuscript whose every classified citation is mere
    # context cites without arguing
    classified = [a.purpose for a in assessments if a.purpose is not None]
    if classified and all(p.role == "context" for p in classified):
        findings.append(Finding(
            check_id="cite-purpose",
            level="info",
            message="every classified citation serves as background context",
            context="no evidence/method/contrast citations; the manuscript may cite without arguing",
        ))

    refq_applicable = bool(assessments)
    if refq_applicable:
        refq = scoring.referencing_quality(assessments)
    else:
        refq = 1.0
        findings.append(Finding(
            check_id="referencing-quality",
            level="info",
            message="no verifiable references to assess; referencing quality factor is neutral",
            context="the aggregate score treats this factor as 1.0",
        ))

    findings = _apply_config(findings, config)
    integrity_score = scoring.integrity(findings)

    profile = None
    if signals_file.contribution_axes is not None:
        profile = scoring.ContributionProfile(
            axes=signals_file.contribution_axes, beta=dict(config.beta)
        )
    contribution_value, bold_applied = scoring.contribution(profile)

    total_weight = None
    if classified:
        total_weight = sum(
            (a.purpose.weight if a.purpose is not None else 1.0) for a in assessments
        )
    report = scoring.aggregate(
        integrity_score,
        refq,
        contribution_value,
        bold_penalty_applied=bold_applied,
        per_reference=assessments,
        referencing_quality_applicable=refq_applicable,
        total_purpose_weight=total_weight,
    )
    return CheckResult(
        findings=findings,
        report=report,
        exit_code=exit_code_for(findings, config),
        references=outcomes,
    )
