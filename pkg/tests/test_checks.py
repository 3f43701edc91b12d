"""Dangling-cite, dangling-ref, and unreferenced-figure checks."""

from sciwrite_lint.bibtex import parse_bibtex
from sciwrite_lint.checks import (
    check_dangling_cites,
    check_dangling_refs,
    check_unreferenced_figures,
    run_text_checks,
)
from sciwrite_lint.latex import parse_latex

BIB = """
@misc{smith2020, title={A}}
@misc{jones2021, title={B}}
@misc{smyth2019, title={C}}
"""


def parsed(tex):
    model = parse_latex(tex, "m.tex")
    bib, _ = parse_bibtex(BIB, "refs.bib")
    return model, bib


def test_dangling_cite_detected():
    model, bib = parsed(r"\cite{smith2020} and \cite{ghost1999}")
    findings = check_dangling_cites(model, bib)
    (finding,) = findings
    assert finding.check_id == "dangling-cite"
    assert finding.level == "error"
    assert "ghost1999" in finding.message
    assert finding.reference_key == "ghost1999"


def test_dangling_cite_suggests_near_miss():
    model, bib = parsed(r"\cite{smith2021}")
    (finding,) = check_dangling_cites(model, bib)
    assert "smith2020" in finding.context


def test_every_occurrence_reported():
    model, bib = parsed("\\cite{gone}\n\\cite{gone}")
    findings = check_dangling_cites(model, bib)
    assert len(findings) == 2
    assert findings[0].location.line == 1
    assert findings[1].location.line == 2


def test_dangling_ref():
    model, _ = parsed("\\label{fig:here}\n\\ref{fig:here} \\ref{fig:gone}")
    findings = check_dangling_refs(model)
    (finding,) = findings
    assert finding.check_id == "dangling-ref"
    assert "fig:gone" in finding.message


def test_unreferenced_figure():
    tex = (
        "\\begin{figure}\\caption{x}\\label{fig:used}\\end{figure}\n"
        "\\begin{figure}\\caption{y}\\label{fig:orphan}\\end{figure}\n"
        "\\ref{fig:used}\n"
    )
    model, _ = parsed(tex)
    findings = check_unreferenced_figures(model)
    (finding,) = findings
    assert finding.check_id == "unreferenced-figure"
    assert finding.level == "warning"
    assert "fig:orphan" in finding.message


def test_unlabeled_figure_not_flagged_here():
    model, _ = parsed("\\begin{figure}\\caption{x}\\end{figure}")
    assert check_unreferenced_figures(model) == []


def test_clean_document_no_findings():
    tex = (
        "\\cite{smith2020}\n"
        "\\begin{figure}\\caption{x}\\label{fig:a}\\end{figure}\n"
        "\\ref{fig:a}\n"
    )
    model, bib = parsed(tex)
    assert run_text_checks(model, bib) == []


def test_run_text_checks_orders_by_location():
    tex = "\\ref{gone}\n\\cite{missing}\n"
    model, bib = parsed(tex)
    findings = run_text_checks(model, bib)
    assert [f.check_id for f in findings] == ["dangling-ref", "dangling-cite"]
    assert [f.location.line for f in findings] == [1, 2]


def test_run_text_checks_respects_enabled_map():
    tex = "\\ref{gone}\n\\cite{missing}\n"
    model, bib = parsed(tex)
    findings = run_text_checks(model, bib, enabled={"dangling-ref": False})
    assert [f.check_id for f in findings] == ["dangling-cite"]
