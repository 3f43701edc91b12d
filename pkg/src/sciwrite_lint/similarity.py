"""Normalized string similarity built on an edit-distance kernel.

The kernel is the compiled ``_strkernel`` extension when available; a pure-Python
implementation of the same two-row DP is the fallback. Set ``SCIWRITE_LINT_PURE=1``
to force the fallback (used by the benchmark).
"""

import os
import re
import unicodedata

_PUNCT_RE = re.compile(r"[^\w\s]")
_WS_RE = re.compile(r"\s+")


def _levenshtein_py(s: str, t: str) -> int:
    """Edit distance (insert/delete/substitute, unit costs) between two strings."""
    n, m = len(s), len(t)
    if n == 0:
        return m
    if m == 0:
        return n
    if m > n:
        s, t = t, s
        n, m = m, n
    prev = list(range(m + 1))
    curr = [0] * (m + 1)
    for i in range(1, n + 1):
        sc = s[i - 1]
        curr[0] = i
        for j in range(1, m + 1):
            cost = 0 if sc == t[j - 1] else 1
            curr[j] = min(prev[j - 1] + cost, prev[j] + 1, curr[j - 1] + 1)
        prev, curr = curr, prev
    return prev[m]


if os.environ.get("SCIWRITE_LINT_PURE"):
    levenshtein = _levenshtein_py
    KERNEL = "python"
else:
    try:
        from sciwrite_lint._strkernel import levenshtein

        KERNEL = "c"
    except ImportError:
        levenshtein = _levenshtein_py
        KERNEL = "python"


def fold_diacritics(text: str) -> str:
    """Strip combining marks: é → e, ü → u."""
    decomposed = unicodedata.normalize("NFKD", text)
    return "".join(c for c in decomposed if not unicodedata.combining(c))


def normalize(text: str) -> str:
    """Case-fold, fold diacritics, strip punctuation, collapse whitespace."""
    text = fold_diacritics(text).casefold()
    text = _PUNCT_RE.sub(" ", text)
    return _WS_RE.sub(" ", text).strip()


def edit_similarity(a: str, b: str) -> float:
    """1 - distance/max(len); two empty strings compare equal (1.0)."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(a, b) / longest


def token_sort(text: str) -> str:
    return " ".join(sorted(text.split()))


def similarity(a: str, b: str) -> float:
    """Normalized similarity in [0, 1]: max of plain and token-sorted edit similarity."""
    na, nb = normalize(a), normalize(b)
    plain = edit_similarity(na, nb)
    if plain == 1.0:
        return 1.0
    sorted_sim = edit_similarity(token_sort(na), token_sort(nb))
    return max(plain, sorted_sim)
