"""Fuzzy record linkage: title and author similarity, thresholded matching.

The similarity functions are deterministic and symmetric, and the field
comparison distinguishes a mismatch (claimed and resolved disagree) from a
missing value (the citation never claimed the field), because only genuine
disagreements count against a citation.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .model import (
    AuthorName,
    FieldMatch,
    FieldMatchProfile,
    ParsedCitation,
    ResolvedRecord,
    fold_diacritics,
)

STOPWORDS = frozenset(
    {
        "a", "an", "and", "as", "at", "by", "for", "from", "in", "into",
        "is", "it", "its", "of", "on", "or", "that", "the", "to", "via",
        "with",
        # Venue boilerplate that would otherwise dominate title vocabularies.
        "proceedings", "conference", "journal", "international",
    }
)

_WORD_RE = re.compile(r"[a-z0-9]+")


def normalize_title(title: str) -> str:
    """Casefold, fold diacritics, squeeze punctuation to single spaces."""
    folded = fold_diacritics(title.casefold())
    return " ".join(_WORD_RE.findall(folded))


def title_tokens(title: str) -> list[str]:
    return _WORD_RE.findall(fold_diacritics(title.casefold()))


def content_tokens(title: str) -> list[str]:
    """Title tokens minus stopwords and single characters."""
    return [t for t in title_tokens(title) if len(t) >= 2 and t not in STOPWORDS]


def levenshtein(a: str, b: str) -> int:
    """Edit distance, unit costs, two-row iteration."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(
                min(
                    previous[j] + 1,
                    current[j - 1] + 1,
                    previous[j - 1] + (ca != cb),
                )
            )
        previous = current
    return previous[len(b)]


def title_similarity(a: str, b: str) -> float:
    """Max of token-set Jaccard and normalized edit similarity.

    The token view forgives reordering and punctuation; the character view
    forgives single-word typos. Two empty titles are identical; one empty
    title matches nothing.
    """
    norm_a = normalize_title(a)
    norm_b = normalize_title(b)
    if not norm_a and not norm_b:
        return 1.0
    if not norm_a or not norm_b:
        return 0.0

    set_a = set(norm_a.split())
    set_b = set(norm_b.split())
    jaccard = len(set_a & set_b) / len(set_a | set_b)

    max_len = max(len(norm_a), len(norm_b))
    edit_sim = 1.0 - levenshtein(norm_a, norm_b) / max_len
    return max(jaccard, edit_sim)


def _initials(author: AuthorName) -> str:
    return "".join(tok[0] for tok in author.given_tokens if tok)


def _initials_compatible(a: AuthorName, b: AuthorName) -> bool:
    """True when neither side's initials contradict the other.

    An absent given name is compatible with anything; "J" is compatible with
    "John" but not with "Mary".
    """
    ia, ib = _initials(a), _initials(b)
    if not ia or not ib:
        return True
    shorter, longer = sorted((ia, ib), key=len)
    return longer.startswith(shorter)


def _pair_score(a: AuthorName, b: AuthorName) -> float:
    if a.is_placeholder or b.is_placeholder:
        return 0.0
    if not a.surname or a.surname != b.surname:
        return 0.0
    return 1.0 if _initials_compatible(a, b) else 0.5


def author_similarity(
    claimed: tuple[AuthorName, ...] | list[AuthorName],
    resolved: tuple[AuthorName, ...] | list[AuthorName],
) -> float:
    """Greedy one-to-one alignment on surnames, scored against the longer list.

    Each pair scores 1.0 for surname plus compatible initials, 0.5 for
    surname alone. Placeholder names never align, so a fully templated
    author list scores 0 against anything.
    """
    if not claimed and not resolved:
        return 1.0
    if not claimed or not resolved:
        return 0.0

    remaining = list(resolved)
    total = 0.0
    for author in claimed:
        best_idx = -1
        best = 0.0
        for idx, candidate in enumerate(remaining):
            score = _pair_score(author, candidate)
            if score > best:
                best = score
                best_idx = idx
        if best_idx >= 0:
            total += best
            remaining.pop(best_idx)
    return total / max(len(claimed), len(resolved))


@dataclass(frozen=True)
class MatchThresholds:
    """Decision cut-offs for field agreement.

    title_strong: similarity at or above which titles are the same work.
    title_moderate: similarity at or above which titles are related.
    author_strong: author-list similarity treated as agreement.
    year_slack: absolute year difference still counted as a match.
    plausibility: vocabulary-overlap score above which a fabricated title
        still reads like a real one.
    """

    title_strong: float = 0.90
    title_moderate: float = 0.60
    author_strong: float = 0.80
    year_slack: int = 1
    plausibility: float = 0.70

    def __post_init__(self) -> None:
        if not 0.0 < self.title_moderate < self.title_strong <= 1.0:
            raise ValueError(
                "need 0 < title_moderate < title_strong <= 1, got "
                f"{self.title_moderate} / {self.title_strong}"
            )
        if not 0.0 < self.author_strong <= 1.0:
            raise ValueError(f"author_strong must lie in (0, 1], got {self.author_strong}")
        if not 0.0 <= self.plausibility <= 1.0:
            raise ValueError(f"plausibility must lie in [0, 1], got {self.plausibility}")
        if self.year_slack < 0:
            raise ValueError("year_slack must be non-negative")


_PAGE_SEP_RE = re.compile(r"[‐-―−]|--")


def _normalize_pages(pages: str) -> str:
    return _PAGE_SEP_RE.sub("-", pages).replace(" ", "").casefold()


def profile_match(
    citation: ParsedCitation,
    record: ResolvedRecord,
    thresholds: MatchThresholds,
) -> FieldMatchProfile:
    """Field-by-field comparison of a claimed citation against one record.

    MISSING means the citation did not claim the field; it never counts as
    disagreement. Venue matches on normalized containment either way, since
    citations abbreviate venue names freely.
    """
    t_sim = title_similarity(citation.title, record.title)
    if not citation.title.strip():
        t_match = FieldMatch.MISSING
    else:
        t_match = (
            FieldMatch.MATCH if t_sim >= thresholds.title_strong else FieldMatch.MISMATCH
        )

    a_sim = author_similarity(citation.authors, record.authors)
    real_authors = [a for a in citation.authors if not a.is_placeholder]
    if not real_authors:
        a_match = FieldMatch.MISSING if not citation.authors else FieldMatch.MISMATCH
    else:
        a_match = (
            FieldMatch.MATCH if a_sim >= thresholds.author_strong else FieldMatch.MISMATCH
        )

    if citation.year is None:
        y_match = FieldMatch.MISSING
    elif record.year is None:
        y_match = FieldMatch.MISSING
    else:
        y_match = (
            FieldMatch.MATCH
            if abs(citation.year - record.year) <= thresholds.year_slack
            else FieldMatch.MISMATCH
        )

    if not citation.venue.strip():
        v_match = FieldMatch.MISSING
    elif not record.venue.strip():
        v_match = FieldMatch.MISSING
    else:
        cv = normalize_title(citation.venue)
        rv = normalize_title(record.venue)
        v_match = (
            FieldMatch.MATCH if (cv in rv or rv in cv) else FieldMatch.MISMATCH
        )

    p_match = FieldMatch.MISSING
    if citation.pages and record.pages:
        p_match = (
            FieldMatch.MATCH
            if _normalize_pages(citation.pages) == _normalize_pages(record.pages)
            else FieldMatch.MISMATCH
        )

    return FieldMatchProfile(
        author_match=a_match,
        title_match=t_match,
        venue_match=v_match,
        year_match=y_match,
        pages_match=p_match,
        title_similarity=t_sim,
        author_similarity=a_sim,
    )


def best_candidate(
    citation: ParsedCitation,
    candidates: list[ResolvedRecord] | tuple[ResolvedRecord, ...],
    thresholds: MatchThresholds,
) -> tuple[ResolvedRecord, FieldMatchProfile] | None:
    """Pick the candidate with the highest title similarity, breaking ties by
    author similarity and then provider order. Returns None when the list is
    empty."""
    if not candidates:
        return None
    scored = [
        (record, profile_match(citation, record, thresholds))
        for record in candidates
    ]
    scored.sort(
        key=lambda pair: (-pair[1].title_similarity, -pair[1].author_similarity)
    )
    return scored[0]


def title_plausibility(title: str, vocab: frozenset[str]) -> float:
    """Fraction of content tokens present in the reference vocabulary.

    A title with no content tokens scores 0: there is nothing to find
    plausible.
    """
    tokens = content_tokens(title)
    if not tokens:
        return 0.0
    hits = sum(1 for t in tokens if t in vocab)
    return hits / len(tokens)


def build_vocab(titles: list[str] | tuple[str, ...]) -> frozenset[str]:
    """Content tokens appearing at least twice across the title corpus."""
    if not titles:
        raise ValueError("cannot build a vocabulary from an empty title corpus")
    counts: dict[str, int] = {}
    for title in titles:
        for token in content_tokens(title):
            counts[token] = counts.get(token, 0) + 1
    return frozenset(tok for tok, n in counts.items() if n >= 2)
