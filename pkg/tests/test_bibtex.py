"""BibTeX parsing: field extraction, author names, macros, malformed input."""

from sciwrite_lint.bibtex import (
    Author,
    detex,
    parse_author_name,
    parse_bibtex,
    split_authors,
)


def test_detex():
    assert detex(r"Deep {L}earning") == "Deep Learning"
    assert detex(r"M\"{u}ller") == "Muller"
    assert detex(r"Garc\'ia") == "Garcia"
    assert detex(r"The \emph{Best} Result~Ever") == "The Best Result Ever"


def test_split_authors():
    assert split_authors("Knuth, Donald and Lamport, Leslie") == [
        "Knuth, Donald",
        "Lamport, Leslie",
    ]
    assert split_authors("{Research AND Development Corp}") == [
        "{Research AND Development Corp}"
    ]
    assert split_authors("Solo, Han") == ["Solo, Han"]
    assert split_authors("A. One AND B. Two") == ["A. One", "B. Two"]


def test_parse_author_name_forms():
    assert parse_author_name("Knuth, Donald") == Author("Knuth", "Donald")
    assert parse_author_name("Donald Knuth") == Author("Knuth", "Donald")
    assert parse_author_name("Ludwig van Beethoven") == Author("van Beethoven", "Ludwig")
    assert parse_author_name("de la Cruz, Maria") == Author("de la Cruz", "Maria")
    assert parse_author_name("Plato") == Author("Plato")
    assert parse_author_name("{The ATLAS Collaboration}") == Author("The ATLAS Collaboration")


def test_parse_entry_fields():
    entries, findings = parse_bibtex(
        """
        @article{vaswani2017,
          title   = {Attention Is All You Need},
          author  = {Vaswani, Ashish and Shazeer, Noam},
          year    = {2017},
          journal = {Advances in Neural Information Processing Systems},
          doi     = {10.5555/3295222},
        }
        """,
        file="refs.bib",
    )
    assert findings == []
    (entry,) = entries
    assert entry.key == "vaswani2017"
    assert entry.entry_type == "article"
    assert entry.title == "Attention Is All You Need"
    assert entry.authors == (Author("Vaswani", "Ashish"), Author("Shazeer", "Noam"))
    assert entry.year == 2017
    assert entry.venue == "Advances in Neural Information Processing Systems"
    assert entry.identifiers.doi == "10.5555/3295222"
    assert entry.location.file == "refs.bib"


def test_quoted_values_and_concatenation():
    entries, _ = parse_bibtex(
        """
        @string{anc = "Ancient"}
        @book{plato,
          title = anc # " Dialogues",
          author = "Plato",
          year = "380",
        }
        """
    )
    (entry,) = entries
    assert entry.title == "Ancient Dialogues"
    # A 3-digit year is not a plausible 4-digit year.
    assert entry.year is None


def test_booktitle_used_when_no_journal():
    entries, _ = parse_bibtex(
        "@inproceedings{x, title={T}, booktitle={Proc. of Things}, year={2001}}"
    )
    assert entries[0].venue == "Proc. of Things"


def test_duplicate_key_keeps_first():
    entries, findings = parse_bibtex(
        """
        @misc{dup, title={First}}
        @misc{dup, title={Second}}
        """
    )
    assert len(entries) == 1
    assert entries[0].title == "First"
    assert any("duplicate" in f.message for f in findings)


def test_unterminated_entry_warns_without_crash():
    entries, findings = parse_bibtex("@article{broken, title={never closed")
    assert entries == []
    assert any("unterminated" in f.message for f in findings)


def test_comment_and_preamble_skipped():
    entries, findings = parse_bibtex(
        """
        @comment{this is not an entry}
        @preamble{"\\newcommand{\\x}{y}"}
        @misc{real, title={Present}}
        """
    )
    assert [e.key for e in entries] == ["real"]
    assert findings == []


def test_parenthesis_delimited_entry():
    entries, _ = parse_bibtex("@article(paren, title={Round}, year={1999})")
    assert entries[0].key == "paren"
    assert entries[0].title == "Round"
    assert entries[0].year == 1999


def test_nested_braces_in_values():
    entries, _ = parse_bibtex(
        "@misc{n, title={A {Nested {Deep}} Value}, author={{Grumpy {Cat}} Industries}}"
    )
    assert entries[0].title == "A Nested Deep Value"


def test_year_extraction_from_noise():
    entries, _ = parse_bibtex("@misc{y, title={T}, year={July 2003}}")
    assert entries[0].year == 2003


def test_missing_fields_are_none():
    entries, _ = parse_bibtex("@misc{bare}")
    (entry,) = entries
    assert entry.title is None
    assert entry.authors == ()
    assert entry.year is None
    assert entry.venue is None


def test_entry_line_numbers():
    source = "\n\n@misc{third_line, title={X}}\n"
    entries, _ = parse_bibtex(source, file="b.bib")
    assert entries[0].location.line == 3
