"""The deterministic, no-network text checks: dangling cites, dangling refs, unreferenced figures."""

from sciwrite_lint.findings import Finding, sort_key
from sciwrite_lint.similarity import levenshtein


def _suggestions(key: str, known_keys, max_distance: int = 2, limit: int = 3) -> list:
    """Nearest known keys by edit distance, closest first."""
    scored = []
    for candidate in known_keys:
        if abs(len(candidate) - len(key)) > max_distance:
            continue
        distance = levenshtein(key, candidate)
        if distance <= max_distance:
            scored.append((distance, candidate))
    scored.sort()
    return [candidate for _, candidate in scored[:limit]]


def check_dangling_cites(model, bib) -> list:
    """One error per \\cite occurrence whose key has no bibliography entry."""
    known = {entry.key for entry in bib}
    findings = []
    for key, location in model.cite_keys:
        if key in known:
            continue
        nearest = _suggestions(key, known)
        context = "no entry with this key in the bibliography"
        if nearest:
            context += "; did you mean " + ", ".join(repr(s) for s in nearest) + "?"
        findings.append(
            Finding(
                check_id="dangling-cite",
                level="error",
                message=f"\\cite{{{key}}} has no matching bibliography entry",
                context=context,
                location=location,
                reference_key=key,
            )
        )
    return sorted(findings, key=sort_key)


def check_dangling_refs(model) -> list:
    """One error per \\ref-family occurrence whose label is never defined."""
    known = model.label_names()
    findings = [
        Finding(
            check_id="dangling-ref",
            level="error",
            message=f"\\ref{{{label}}} has no matching \\label",
            context="the label is never defined in the parsed sources",
            location=location,
        )
        for label, location in model.refs
        if label not in known
    ]
    return sorted(findings, key=sort_key)


def check_unreferenced_figures(model) -> list:
    """One warning per labeled figure that is never cross-referenced."""
    referenced = {label for label, _ in model.refs}
    findings = [
        Finding(
            check_id="unreferenced-figure",
            level="warning",
            message=f"figure {fig.label!r} is defined but never cross-referenced",
            context="no \\ref-family command points at this label",
            location=fig.location,
        )
        for fig in model.figures
        if fig.label is not None and fig.label not in referenced
    ]
    return sorted(findings, key=sort_key)


def run_text_checks(model, bib, enabled=None) -> list:
    """All three checks over a shared model; stable (file, line, check id) order."""
    checks = {
        "dangling-cite": lambda: check_dangling_cites(model, bib),
        "dangling-ref": lambda: check_dangling_refs(model),
        "unreferenced-figure": lambda: check_unreferenced_figures(model),
    }
    findings = []
    for check_id, run in checks.items():
        if enabled is None or enabled.get(check_id, True):
            findings.extend(run())
    return sorted(findings, key=sort_key)
