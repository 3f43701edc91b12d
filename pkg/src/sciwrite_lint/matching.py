"""Client-side scoring of free-text bibliography entries against registry candidates.

The composite score is the product of four graduated signals: title similarity,
author overlap, year penalty, venue agreement. The best candidate above the
acceptance threshold wins; otherwise the entry is treated as not found.
"""

from dataclasses import dataclass
from typing import Optional

from sciwrite_lint.similarity import fold_diacritics, normalize, similarity

MATCH_THRESHOLD = 0.70
VENUE_SIM_THRESHOLD = 0.60

# Word-level abbreviation expansion plus a few common venue aliases.
_VENUE_ABBREVIATIONS = {
    "proc": "proceedings",
    "j": "journal",
    "conf": "conference",
    "trans": "transactions",
    "intl": "international",
    "int": "international",
}
_VENUE_ALIASES = {
    "neurips": "advances in neural information processing systems",
    "nips": "advances in neural information processing systems",
    "icml": "international conference on machine learning",
    "iclr": "international conference on learning representations",
    "cvpr": "conference on computer vision and pattern recognition",
    "acl": "annual meeting of the association for computational linguistics",
    "emnlp": "empirical methods in natural language processing",
    "aaai": "aaai conference on artificial intelligence",
    "pnas": "proceedings of the national academy of sciences",
    "jmlr": "journal of machine learning research",
}


@dataclass(frozen=True)
class MatchScore:
    title_sim: float
    author_overlap: float
    year_signal: float
    venue_signal: float

    @property
    def composite(self) -> float:
        return self.title_sim * self.author_overlap * self.year_signal * self.venue_signal


@dataclass(frozen=True)
class Match:
    record: object  # CanonicalRecord
    score: MatchScore


def title_similarity(a: str, b: str) -> float:
    """Symmetric normalized similarity; max of plain and token-sort edit similarity."""
    return similarity(a, b)


def _initials(given: str) -> str:
    return "".join(word[0] for word in given.replace(".", " ").replace("-", " ").split() if word)


def _fold(name: str) -> str:
    return fold_diacritics(name).casefold().strip()


def _given_match(a: Optional[str], b: Optional[str]) -> bool:
    """Given names agree, or one is an initial form of the other."""
    if not a or not b:
        return True
    fa, fb = _fold(a), _fold(b)
    if fa == fb:
        return True
    ia, ib = _initials(fa), _initials(fb)
    return ia == ib or ia == fb.replace(" ", "") or ib == fa.replace(" ", "")


def _names_match(entry_author, candidate_author) -> bool:
    """Family names agree after diacritic folding; givens agree, are initials, or are swapped."""
    ef, cf = _fold(entry_author.family), _fold(candidate_author.family)
    if ef == cf and _given_match(entry_author.given, candidate_author.given):
        return True
    # reversed given/family
    if entry_author.given and candidate_author.given:
        if ef == _fold(candidate_author.given) and cf == _fold(entry_author.given):
            return True
    return False


def author_overlap(entry_authors, candidate_authors) -> float:
    """Fraction of entry authors matched to a distinct candidate author.

    An entry with no authors is itself suspicious, so the neutral value is 0.8
    rather than 1.0.
    """
    if not entry_authors:
        return 0.8
    available = list(candidate_authors)
    matched = 0
    for author in entry_authors:
        for i, candidate in enumerate(available):
            if _names_match(author, candidate):
                matched += 1
                del available[i]
                break
    return matched / len(entry_authors)


def year_signal(entry_year: Optional[int], candidate_year: Optional[int]) -> float:
    """1.0 on the +/-1 plateau, quadratic falloff hitting zero at a gap of 6."""
    if entry_year is None or candidate_year is None:
        return 1.0
    delta = abs(entry_year - candidate_year)
    if delta <= 1:
        return 1.0
    return max(0.0, 1.0 - ((delta - 1) / 5.0) ** 2)


def _expand_venue(venue: str) -> str:
    folded = normalize(venue)
    if folded in _VENUE_ALIASES:
        return _VENUE_ALIASES[folded]
    words = [_VENUE_ABBREVIATIONS.get(w, w) for w in folded.split()]
    return " ".join(words)


def venue_signal(entry_venue: Optional[str], candidate_venue: Optional[str]) -> float:
    """1.0 when absent or similar after abbreviation expansion; a mild 0.95 otherwise."""
    if not entry_venue or not candidate_venue:
        return 1.0
    a, b = _expand_venue(entry_venue), _expand_venue(candidate_venue)
    if similarity(a, b) >= VENUE_SIM_THRESHOLD:
        return 1.0
    return 0.95


def score_candidate(entry, candidate) -> MatchScore:
    """All four signals for one entry/candidate pair."""
    return MatchScore(
        title_sim=title_similarity(entry.title or "", candidate.title),
        author_overlap=author_overlap(entry.authors, candidate.authors),
        year_signal=year_signal(entry.year, candidate.year),
        venue_signal=venue_signal(entry.venue, candidate.venue),
    )


def select_best(entry, candidates, threshold: float = MATCH_THRESHOLD) -> Optional[Match]:
    """Best candidate by composite score, or None when nothing clears the threshold.

    Ties break by venue signal, then by upstream order.
    """
    best = None
    best_key = None
    for index, candidate in enumerate(candidates):
        score = score_candidate(entry, candidate)
        key = (score.composite, score.venue_signal, -index)
        if best_key is None or key > best_key:
            best, best_key = Match(candidate, score), key
    if best is None or best.score.composite < threshold:
        return None
    return best
