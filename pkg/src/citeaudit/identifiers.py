"""Syntactic validation and normalization of DOIs, arXiv IDs, and URLs.

Pure functions: no network. URL checks cover well-formedness only
(scheme + host); whether anything is hosted there is the resolver's job.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from urllib.parse import urlparse

from .model import (
    DEFAULT_PLACEHOLDER_TOKENS,
    EvidenceItem,
    FailureMode,
    Identifier,
    IdentifierKind,
    ParsedCitation,
)

# DOI: "10." + digit registrant code (optionally dotted) + "/" + non-empty suffix.
_DOI_RE = re.compile(r"^10\.\d{4,9}(?:\.\d+)*/\S+$")

# arXiv new style: YYMM.NNNN or YYMM.NNNNN, optional "vN" version.
_ARXIV_NEW_RE = re.compile(r"^(\d{4})\.(\d{4,5})(v\d+)?$")
# arXiv old style: archive name (letters/dashes, optional ".XX" subject class),
# "/", exactly 7 digits.
_ARXIV_OLD_RE = re.compile(r"^([a-z][a-z-]*(?:\.[a-z]{2})?)/(\d{7})$", re.IGNORECASE)

_DOI_PREFIX_RE = re.compile(r"^(?:doi:\s*|(?:https?://)?(?:dx\.)?doi\.org/)", re.IGNORECASE)
_ARXIV_PREFIX_RE = re.compile(
    r"^(?:arxiv:\s*|(?:https?://)?arxiv\.org/(?:abs|pdf)/)", re.IGNORECASE
)

# Text fragments that mark an identifier (or field) the generator left unfilled.
_PLACEHOLDER_VALUE_RE = re.compile(r"xxx+|nnnn|to be updated|todo", re.IGNORECASE)


class IdentifierSyntax(Enum):
    VALID = "valid"
    INVALID = "invalid"
    PLACEHOLDER = "placeholder"


@dataclass(frozen=True)
class IdentifierCheck:
    """Syntax verdict for one identifier, with its normalized form when valid."""

    identifier: Identifier
    syntax: IdentifierSyntax
    normalized: str | None = None
    arxiv_version: int | None = None


def strip_identifier_prefix(kind: IdentifierKind, value: str) -> str:
    """Drop "doi:", "arXiv:", and resolver-URL prefixes from a claimed value."""
    value = value.strip()
    if kind is IdentifierKind.DOI:
        return _DOI_PREFIX_RE.sub("", value)
    if kind is IdentifierKind.ARXIV:
        return _ARXIV_PREFIX_RE.sub("", value)
    return value


def _classify_syntax(kind: IdentifierKind, value: str) -> IdentifierSyntax:
    if _PLACEHOLDER_VALUE_RE.search(value):
        return IdentifierSyntax.PLACEHOLDER
    bare = strip_identifier_prefix(kind, value)
    if kind is IdentifierKind.DOI:
        ok = bool(_DOI_RE.match(bare))
    elif kind is IdentifierKind.ARXIV:
        ok = bool(_ARXIV_NEW_RE.match(bare) or _ARXIV_OLD_RE.match(bare))
    else:
        parsed = urlparse(bare)
        ok = parsed.scheme in ("http", "https") and bool(parsed.netloc)
    return IdentifierSyntax.VALID if ok else IdentifierSyntax.INVALID


def make_identifier(kind: IdentifierKind, value: str) -> Identifier:
    """Construct an Identifier with grammar-derived syntactic validity.

    Placeholder fragments ("XXXX", "to be updated") force validity to False.
    """
    value = strip_identifier_prefix(kind, value.strip())
    return Identifier(
        kind=kind,
        value=value,
        syntactically_valid=_classify_syntax(kind, value) is IdentifierSyntax.VALID,
    )


def check_identifier(identifier: Identifier) -> IdentifierCheck:
    """Apply the identifier grammar and compute the normalized lookup form.

    DOIs are lowercased with any "doi.org/" prefix stripped; arXiv IDs lose
    their "arXiv:" prefix and any "vN" suffix (the version is returned
    separately).
    """
    syntax = _classify_syntax(identifier.kind, identifier.value)
    if syntax is not IdentifierSyntax.VALID:
        return IdentifierCheck(identifier=identifier, syntax=syntax)

    bare = strip_identifier_prefix(identifier.kind, identifier.value)
    version = None
    if identifier.kind is IdentifierKind.DOI:
        normalized = bare.lower()
    elif identifier.kind is IdentifierKind.ARXIV:
        m = _ARXIV_NEW_RE.match(bare)
        if m:
            normalized = f"{m.group(1)}.{m.group(2)}"
            if m.group(3):
                version = int(m.group(3)[1:])
        else:
            normalized = bare.lower()
    else:
        normalized = bare
    return IdentifierCheck(
        identifier=identifier,
        syntax=syntax,
        normalized=normalized,
        arxiv_version=version,
    )


_TO_BE_UPDATED_RE = re.compile(r"to be updated", re.IGNORECASE)
_TO_APPEAR_RE = re.compile(r"\bto appear\b", re.IGNORECASE)


def scan_placeholders(
    citation: ParsedCitation,
    placeholder_tokens: frozenset[str] = DEFAULT_PLACEHOLDER_TOKENS,
) -> list[EvidenceItem]:
    """Collect placeholder evidence across authors, title, raw text, and ids.

    "To appear" alone is not evidence when the citation carries a
    syntactically valid identifier; legitimate preprints say it too.
    """
    evidence: list[EvidenceItem] = []

    for author in citation.authors:
        if author.is_placeholder and author.raw.strip():
            evidence.append(
                EvidenceItem(
                    mode=FailureMode.PH,
                    detail=f"template author name {author.raw!r} never filled in",
                    field="authors",
                )
            )

    if not citation.title.strip():
        evidence.append(
            EvidenceItem(
                mode=FailureMode.PH,
                detail="citation has no title",
                field="title",
            )
        )

    if _TO_BE_UPDATED_RE.search(citation.raw_text):
        evidence.append(
            EvidenceItem(
                mode=FailureMode.PH,
                detail='citation text says "to be updated"',
                field="raw_text",
            )
        )

    has_valid_identifier = any(i.syntactically_valid for i in citation.identifiers)
    if _TO_APPEAR_RE.search(citation.raw_text) and not has_valid_identifier:
        evidence.append(
            EvidenceItem(
                mode=FailureMode.PH,
                detail='"to appear" with no identifier to locate the work',
                field="raw_text",
            )
        )

    for identifier in citation.identifiers:
        if check_identifier(identifier).syntax is IdentifierSyntax.PLACEHOLDER:
            evidence.append(
                EvidenceItem(
                    mode=FailureMode.PH,
                    detail=f"placeholder identifier {identifier.value!r}",
                    field="identifiers",
                )
            )

    return evidence


# --- free-text identifier extraction (used by the parsers) -----------------

_DOI_IN_TEXT_RE = re.compile(
    r"(?:doi:\s*|(?:https?://)?(?:dx\.)?doi\.org/)(\S+)|(?<![\w./])(10\.\d{4,9}(?:\.\d+)*/\S+)",
    re.IGNORECASE,
)
_ARXIV_IN_TEXT_RE = re.compile(
    r"(?:arxiv:\s*|(?:https?://)?arxiv\.org/(?:abs|pdf)/)([^\s,;]+)", re.IGNORECASE
)
_URL_IN_TEXT_RE = re.compile(r"https?://[^\s<>\"]+", re.IGNORECASE)

_TRAILING_PUNCT_RE = re.compile(r"[.,;:)\]]+$")


def _clean(value: str) -> str:
    return _TRAILING_PUNCT_RE.sub("", value.strip())


def extract_identifiers(text: str) -> list[Identifier]:
    """Scan free text for doi:/arXiv:/http identifiers.

    A DOI-shaped URL yields both the URL and the DOI; duplicates collapse by
    (kind, normalized value) so redundant forms count once.
    """
    found: list[Identifier] = []

    for m in _DOI_IN_TEXT_RE.finditer(text):
        value = _clean(m.group(1) or m.group(2))
        if value:
            found.append(make_identifier(IdentifierKind.DOI, value))

    for m in _ARXIV_IN_TEXT_RE.finditer(text):
        value = _clean(m.group(1))
        if value:
            found.append(make_identifier(IdentifierKind.ARXIV, value))

    for m in _URL_IN_TEXT_RE.finditer(text):
        found.append(make_identifier(IdentifierKind.URL, _clean(m.group(0))))

    deduped: dict[tuple[IdentifierKind, str], Identifier] = {}
    for ident in found:
        check = check_identifier(ident)
        key = (ident.kind, check.normalized or ident.value.lower())
        deduped.setdefault(key, ident)
    return list(deduped.values())


def identifier_mask_spans(text: str) -> list[tuple[int, int]]:
    """Character spans of identifier-looking runs, so field heuristics can
    avoid matching years or titles inside them."""
    spans = []
    for rx in (_DOI_IN_TEXT_RE, _ARXIV_IN_TEXT_RE, _URL_IN_TEXT_RE):
        for m in rx.finditer(text):
            spans.append((m.start(), m.end()))
    return spans
