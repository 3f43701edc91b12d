"""LaTeX structure extraction."""

import textwrap

from sciwrite_lint.latex import (
    parse_latex,
    parse_manuscript,
    read_tex,
    strip_comment,
)


def keys(model):
    return [k for k, _ in model.cite_keys]


def test_strip_comment_plain():
    assert strip_comment("text % comment") == "text "
    assert strip_comment("no comment here") == "no comment here"


def test_strip_comment_escaped_percent():
    assert strip_comment(r"50\% of cases % note") == r"50\% of cases "
    # Even number of backslashes means the % is live.
    assert strip_comment("path\\\\% comment") == "path\\\\"


def test_cite_variants_and_multi_keys():
    model = parse_latex(
        r"\cite{a} \citep{b,c} \citet*{d} \citep[see][p.~3]{e}", "m.tex"
    )
    assert keys(model) == ["a", "b", "c", "d", "e"]


def test_cites_in_comments_ignored():
    model = parse_latex(r"real \cite{yes} % unreal \cite{no}", "m.tex")
    assert keys(model) == ["yes"]


def test_ref_variants():
    model = parse_latex(r"\ref{a} \eqref{eq:1} \autoref{b} \cref{c} \Cref{d}", "m.tex")
    assert [r for r, _ in model.refs] == ["a", "eq:1", "b", "c", "d"]


def test_cite_location_points_at_line_and_column():
    model = parse_latex("first line\nsee \\cite{key}", "m.tex")
    (_, loc), = model.cite_keys
    assert loc.file == "m.tex"
    assert loc.line == 2
    assert loc.column == 5


def test_label_kinds():
    source = textwrap.dedent(r"""
        \section{Intro}
        \label{sec:intro}
        \begin{figure}
        \caption{A plot}
        \label{fig:plot}
        \end{figure}
        \begin{table}
        \label{tab:data}
        \end{table}
        \begin{equation}
        \label{eq:main}
        \end{equation}
        \label{misc}
    """)
    model = parse_latex(source, "m.tex")
    kinds = {d.label: d.kind for d in model.labels}
    assert kinds == {
        "sec:intro": "section",
        "fig:plot": "figure",
        "tab:data": "table",
        "eq:main": "equation",
        "misc": "other",
    }


def test_figure_capture():
    source = textwrap.dedent(r"""
        \begin{figure}
        \includegraphics{a.png}
        \caption{Described}
        \label{fig:a}
        \end{figure}
        \begin{figure}
        \includegraphics{b.png}
        \end{figure}
    """)
    model = parse_latex(source, "m.tex")
    assert [(f.label, f.caption_present) for f in model.figures] == [
        ("fig:a", True),
        (None, False),
    ]


def test_nested_subfigure_collapses_to_outer():
    source = textwrap.dedent(r"""
        \begin{figure}
        \begin{subfigure}{0.5\textwidth}
        \caption{left}
        \end{subfigure}
        \label{fig:pair}
        \caption{Both}
        \end{figure}
    """)
    model = parse_latex(source, "m.tex")
    assert len(model.figures) == 1
    assert model.figures[0].label == "fig:pair"
    assert model.figures[0].caption_present


def test_unclosed_figure_noted():
    model = parse_latex("\\begin{figure}\n\\caption{x}", "m.tex")
    assert len(model.figures) == 1
    assert any("never closed" in n.message for n in model.notes)


def test_brace_broken_command_noted():
    model = parse_latex("\\cite{unterminated\n", "m.tex")
    assert keys(model) == []
    notes = [n for n in model.notes if n.check_id == "parse-warning"]
    assert notes and notes[0].level == "tool_limitation"


def test_read_tex_latin1_fallback(tmp_path):
    p = tmp_path / "legacy.tex"
    p.write_bytes("caf\xe9 \\cite{k}".encode("latin-1"))
    source, warning = read_tex(p)
    assert "café" in source
    assert warning is not None and warning.level == "warning"


def test_parse_manuscript_follows_input(tmp_path):
    main = tmp_path / "main.tex"
    child = tmp_path / "sections" / "body.tex"
    child.parent.mkdir()
    main.write_text("\\cite{top}\n\\input{sections/body}\n")
    child.write_text("\\cite{nested}\n\\label{sec:body}\n")
    model = parse_manuscript(main)
    assert keys(model) == ["top", "nested"]
    assert model.label_names() == {"sec:body"}


def test_parse_manuscript_missing_input_noted(tmp_path):
    main = tmp_path / "main.tex"
    main.write_text("\\input{gone}\n\\cite{still}\n")
    model = parse_manuscript(main)
    assert keys(model) == ["still"]
    assert any("gone" in n.message for n in model.notes)
