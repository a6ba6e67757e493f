"""Verdict assignment for resolved citations.

A citation that fails verification receives a compound label: a primary
failure mode plus a distinct secondary, because fabricated references
almost never break in just one way. Resolution failures are kept apart
from fabrication: when every lookup was unavailable the verdict is
Unverifiable, never Hallucinated.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .identifiers import scan_placeholders
from .matching import (
    MatchThresholds,
    best_candidate,
    profile_match,
    title_plausibility,
)
from .model import (
    DEFAULT_PLACEHOLDER_TOKENS,
    EvidenceItem,
    FailureMode,
    FieldMatch,
    ParsedCitation,
    Verdict,
    VerdictStatus,
)
from .resolve import LookupStatus, ResolutionBundle, Resolver

# Primary precedence: structural defects outrank relational ones, and total
# fabrication is the default once everything else is ruled out.
PRIMARY_ORDER = (
    FailureMode.PH,
    FailureMode.PAC,
    FailureMode.IH,
    FailureMode.SH,
)

# Secondary precedence when picking among remaining evidence.
SECONDARY_ORDER = (
    FailureMode.SH,
    FailureMode.IH,
    FailureMode.PH,
    FailureMode.PAC,
    FailureMode.TF,
)


@dataclass(frozen=True)
class ClassifierConfig:
    thresholds: MatchThresholds = MatchThresholds()
    placeholder_tokens: frozenset[str] = DEFAULT_PLACEHOLDER_TOKENS
    # Require one claimed author to be a real, findable person before a
    # plausible-but-unresolvable title counts as SH rather than TF.
    sh_requires_real_author: bool = True
    vocab: frozenset[str] = frozenset()


def _map_cause(causes: set[str]) -> str:
    if causes == {"offline"}:
        return "offline"
    if causes == {"rate_limited"}:
        return "rate_limited"
    return "provider_unavailable"


def _author_confirmed(citation: ParsedCitation, bundle: ResolutionBundle) -> bool:
    """True when the author-year search surfaced a claimed surname: the
    cited person exists and was active, even though the work was not found."""
    if bundle.author_search is None:
        return False
    surnames = {
        a.surname for a in citation.authors if not a.is_placeholder and a.surname
    }
    if not surnames:
        return False
    for record in bundle.author_search.records:
        for resolved_author in record.authors:
            if resolved_author.surname in surnames:
                return True
    return False


def _sh_plausibility(citation: ParsedCitation, config: ClassifierConfig) -> float:
    if not citation.title.strip():
        return 0.0
    return title_plausibility(citation.title, config.vocab)


def classify(
    citation: ParsedCitation,
    bundle: ResolutionBundle,
    config: ClassifierConfig,
) -> Verdict:
    """Turn one citation's resolution results into a verdict.

    The bundle must have been produced for this citation; a key mismatch is
    a caller bug, not a data condition.
    """
    if bundle.citation_key and bundle.citation_key != citation.source_key:
        raise ValueError(
            f"bundle for {bundle.citation_key!r} passed with citation"
            f" {citation.source_key!r}"
        )
    key = citation.source_key
    thresholds = config.thresholds

    attempts = bundle.attempts()
    if attempts and all(unavailable for _, unavailable, _ in attempts):
        causes = {cause for _, _, cause in attempts if cause}
        return Verdict(
            status=VerdictStatus.UNVERIFIABLE,
            citation_key=key,
            cause=_map_cause(causes) if causes else "provider_unavailable",
        )

    placeholder_evidence = scan_placeholders(citation, config.placeholder_tokens)
    if not attempts and not placeholder_evidence:
        # Nothing was resolvable and nothing is structurally wrong; there is
        # no basis for either a pass or a fail.
        return Verdict(
            status=VerdictStatus.UNVERIFIABLE,
            citation_key=key,
            cause="no_resolvable_fields",
        )

    # Verification gate: author, title, and year must all agree with some
    # resolved record.
    for _, outcome in bundle.identifier_outcomes:
        if outcome.status is LookupStatus.FOUND and outcome.record is not None:
            profile = profile_match(citation, outcome.record, thresholds)
            if profile.core_all_match():
                return Verdict(
                    status=VerdictStatus.VERIFIED,
                    citation_key=key,
                    matched_record=outcome.record,
                )
    search_best = best_candidate(citation, bundle.search_candidates, thresholds)
    if search_best is not None and search_best[1].core_all_match():
        return Verdict(
            status=VerdictStatus.VERIFIED,
            citation_key=key,
            matched_record=search_best[0],
        )

    evidence: list[EvidenceItem] = list(placeholder_evidence)

    # Identifier hijacking: the claimed identifier exists but belongs to a
    # different work.
    for label, outcome in bundle.identifier_outcomes:
        if outcome.status is not LookupStatus.FOUND or outcome.record is None:
            continue
        profile = profile_match(citation, outcome.record, thresholds)
        if (
            profile.title_match is FieldMatch.MISMATCH
            or profile.author_match is FieldMatch.MISMATCH
        ):
            evidence.append(
                EvidenceItem(
                    mode=FailureMode.IH,
                    detail=(
                        f"{label} resolves to {outcome.record.title!r}"
                        f" by different authors"
                        if profile.author_match is FieldMatch.MISMATCH
                        else f"{label} resolves to {outcome.record.title!r}"
                    ),
                    field="identifiers",
                    score=round(profile.title_similarity, 4),
                )
            )

    # Partial attribute corruption: a close relative exists but at least one
    # claimed field disagrees with it.
    overall_best = best_candidate(citation, bundle.all_candidates, thresholds)
    strong_match_exists = False
    if overall_best is not None:
        record, profile = overall_best
        strong = (
            profile.title_match is FieldMatch.MATCH
            or profile.author_match is FieldMatch.MATCH
        )
        mismatched = [
            name
            for name, value in (
                ("title", profile.title_match),
                ("authors", profile.author_match),
                ("year", profile.year_match),
                ("pages", profile.pages_match),
            )
            if value is FieldMatch.MISMATCH
        ]
        if strong and mismatched:
            evidence.append(
                EvidenceItem(
                    mode=FailureMode.PAC,
                    detail=(
                        f"close match {record.title!r} disagrees on "
                        + ", ".join(mismatched)
                    ),
                    field=mismatched[0],
                    score=round(profile.title_similarity, 4),
                )
            )
    for record in bundle.all_candidates:
        profile = profile_match(citation, record, thresholds)
        if (
            profile.title_match is FieldMatch.MATCH
            or profile.author_match is FieldMatch.MATCH
        ):
            strong_match_exists = True
            break

    # Semantic hallucination: the title reads like a real paper but no
    # source knows it.
    plausibility = _sh_plausibility(citation, config)
    title_found_anywhere = any(
        profile_match(citation, r, thresholds).title_match is FieldMatch.MATCH
        for r in bundle.all_candidates
    )
    if (
        citation.title.strip()
        and not title_found_anywhere
        and plausibility >= thresholds.plausibility
    ):
        evidence.append(
            EvidenceItem(
                mode=FailureMode.SH,
                detail="plausible title with no matching record in any source",
                field="title",
                score=round(plausibility, 4),
            )
        )

    # Total fabrication: nothing anywhere shares this citation's title or
    # author list.
    if not strong_match_exists:
        evidence.append(
            EvidenceItem(
                mode=FailureMode.TF,
                detail="no source returned a record matching title or authors",
            )
        )

    modes_present = {e.mode for e in evidence}

    primary = None
    for mode in PRIMARY_ORDER:
        if mode not in modes_present:
            continue
        if mode is FailureMode.SH and config.sh_requires_real_author:
            if not _author_confirmed(citation, bundle):
                continue
        primary = mode
        break
    if primary is None:
        primary = FailureMode.TF
        if FailureMode.TF not in modes_present:
            evidence.append(
                EvidenceItem(
                    mode=FailureMode.TF,
                    detail="no source returned a record matching title or authors",
                )
            )
            modes_present.add(FailureMode.TF)

    secondary = None
    for mode in SECONDARY_ORDER:
        if mode is not primary and mode in modes_present:
            secondary = mode
            break
    if secondary is None:
        ladder: list[FailureMode] = []
        if plausibility >= thresholds.plausibility:
            ladder.append(FailureMode.SH)
        if citation.identifiers:
            ladder.append(FailureMode.IH)
        ladder.append(FailureMode.PAC)
        for mode in ladder:
            if mode is not primary:
                secondary = mode
                break
    if secondary is None:
        for mode in SECONDARY_ORDER:
            if mode is not primary:
                secondary = mode
                break

    return Verdict(
        status=VerdictStatus.HALLUCINATED,
        citation_key=key,
        primary=primary,
        secondary=secondary,
        evidence=tuple(evidence),
    )


def classify_citation(
    citation: ParsedCitation,
    resolver: Resolver,
    config: ClassifierConfig,
) -> Verdict:
    """Resolve then classify a single citation."""
    bundle = resolver.resolve_citation(citation)
    return classify(citation, bundle, config)


def _safe_classify(
    citation: ParsedCitation, resolver: Resolver, config: ClassifierConfig
) -> Verdict:
    try:
        return classify_citation(citation, resolver, config)
    except Exception as exc:  # noqa: BLE001 - one bad citation must not sink the batch
        return Verdict(
            status=VerdictStatus.UNVERIFIABLE,
            citation_key=citation.source_key,
            cause=f"internal_error:{type(exc).__name__}",
        )


def classify_batch(
    citations,
    resolver: Resolver,
    config: ClassifierConfig,
    jobs: int = 4,
) -> list[Verdict]:
    """Classify citations concurrently, preserving input order."""
    citations = list(citations)
    if jobs < 1:
        raise ValueError("jobs must be at least 1")
    if jobs == 1 or len(citations) <= 1:
        return [_safe_classify(c, resolver, config) for c in citations]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(
            pool.map(lambda c: _safe_classify(c, resolver, config), citations)
        )
