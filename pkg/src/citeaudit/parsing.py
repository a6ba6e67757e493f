"""Format detection and the single entry point for reading reference lists."""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .bibtex import parse_bibtex, render_bibtex
from .model import ParsedCitation, ParseWarning
from .plaintext import parse_plaintext, render_plaintext

FORMAT_BIBTEX = "bibtex"
FORMAT_PLAINTEXT = "plaintext"

_BIB_ENTRY_RE = re.compile(r"@[A-Za-z]+\s*[{(]")


@dataclass(frozen=True)
class ParseReport:
    """Everything learned from one input: citations in source order plus
    warnings for anything skipped or repaired."""

    citations: tuple[ParsedCitation, ...]
    warnings: tuple[ParseWarning, ...]
    format: str

    def __len__(self) -> int:
        return len(self.citations)


def detect_format(text: str, filename: str | None = None) -> str:
    if filename and filename.lower().endswith((".bib", ".bibtex")):
        return FORMAT_BIBTEX
    if _BIB_ENTRY_RE.search(text):
        return FORMAT_BIBTEX
    return FORMAT_PLAINTEXT


def parse_text(text: str, format: str = "auto", filename: str | None = None) -> ParseReport:
    """Parse a reference list held in a string.

    format: "auto", "bibtex", or "plaintext".
    """
    if format == "auto":
        format = detect_format(text, filename)
    if format == FORMAT_BIBTEX:
        citations, warnings = parse_bibtex(text)
    elif format == FORMAT_PLAINTEXT:
        citations, warnings = parse_plaintext(text)
    else:
        raise ValueError(f"unknown reference format {format!r}")
    return ParseReport(
        citations=tuple(citations), warnings=tuple(warnings), format=format
    )


def parse_file(path: str | Path, format: str = "auto") -> ParseReport:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return parse_text(text, format=format, filename=path.name)


def render(citations, format: str) -> str:
    """Serialize citations back to the named format."""
    if format == FORMAT_BIBTEX:
        return render_bibtex(citations)
    if format == FORMAT_PLAINTEXT:
        return render_plaintext(citations)
    raise ValueError(f"unknown reference format {format!r}")


def semantic_fields(citation: ParsedCitation) -> dict:
    """The comparison view used for round-trip checks: everything that
    matters for verification, nothing positional (raw text, spans)."""
    return {
        "source_key": citation.source_key,
        "authors": tuple(
            (a.surname, a.given_tokens, a.is_placeholder) for a in citation.authors
        ),
        "title": citation.title,
        "venue": citation.venue,
        "year": citation.year,
        "volume": citation.volume,
        "issue": citation.issue,
        "pages": citation.pages,
        "identifiers": tuple(
            (i.kind.value, i.value, i.syntactically_valid) for i in citation.identifiers
        ),
    }
