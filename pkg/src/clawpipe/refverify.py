"""Citation extraction and live/offline verification.

References are parsed out of the paper's references section, one entry per
list line. DOIs resolve through CrossRef, preprint ids through the arXiv
feed, and quoted titles through Semantic Scholar, in that order; every lookup
goes through the rate-limited science proxy. A source being unreachable
degrades the entry to unverified -- verification never aborts scoring.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import SourceUnavailable, TransformError, UpstreamError
from .model import section_bodies
from .sciproxy import ScienceProxy

GHOST_THRESHOLD = 0.5  # strict: flag only above one half unverifiable

DOI_RE = re.compile(r"\b(10\.\d{4,9}/[^\s\"<>\]),;]+)")
ARXIV_RE = re.compile(r"\b(\d{4}\.\d{4,5})(?:v\d+)?\b")
INDEX_LABEL_RE = re.compile(r"^\s*\[(\d+)\]")
INTEXT_LABEL_RE = re.compile(r"\[(\d+)\]")
QUOTED_TITLE_RE = re.compile(r"[\"“]([^\"”]{8,200})[\"”]")


class Source(str, enum.Enum):
    CROSSREF = "CROSSREF"
    ARXIV = "ARXIV"
    SEMANTIC_SCHOLAR = "SEMANTIC_SCHOLAR"
    NONE = "NONE"


@dataclass(frozen=True)
class CitationEntry:
    raw: str
    index_label: Optional[str] = None
    doi: Optional[str] = None
    arxiv_id: Optional[str] = None
    title_guess: Optional[str] = None


@dataclass(frozen=True)
class VerifiedEntry:
    entry: CitationEntry
    verified: bool
    source: Source
    metadata: Optional[dict] = None


@dataclass(frozen=True)
class VerificationReport:
    entries: tuple[VerifiedEntry, ...]
    unverified_fraction: float
    ghost_flag: bool

    @property
    def total(self) -> int:
        return len(self.entries)

    @property
    def verified_count(self) -> int:
        return sum(1 for e in self.entries if e.verified)


def _clean_doi(doi: str) -> str:
    return doi.rstrip(".,;:)")


def _entry_lines(body: str) -> list[str]:
    """Reference-list lines: one extraction per nonempty line."""
    lines = []
    for line in body.splitlines():
        stripped = line.strip()
        if not stripped:
            continue
        # drop markdown bullets / numbering before inspection
        lines.append(stripped)
    return lines


def extract_references(content: str) -> list[CitationEntry]:
    """Parse the references section into one CitationEntry per list line."""
    if not content:
        return []
    body = section_bodies(content).get("references")
    if body is None:
        return []
    entries = []
    for line in _entry_lines(body):
        label_m = INDEX_LABEL_RE.match(line)
        doi_m = DOI_RE.search(line)
        arxiv_m = re.search(r"arxiv[:\s/]*(\d{4}\.\d{4,5})(?:v\d+)?", line, re.I)
        if arxiv_m is None:
            arxiv_m = ARXIV_RE.search(line) if "arxiv" in line.lower() else None
        title_m = QUOTED_TITLE_RE.search(line)
        entries.append(
            CitationEntry(
                raw=line,
                index_label=f"[{label_m.group(1)}]" if label_m else None,
                doi=_clean_doi(doi_m.group(1)) if doi_m else None,
                arxiv_id=arxiv_m.group(1) if arxiv_m else None,
                title_guess=title_m.group(1).strip() if title_m else None,
            )
        )
    return entries


def intext_citation_labels(content: str) -> set[str]:
    """Bracketed citation labels cited in the body (references section excluded)."""
    if not content:
        return set()
    refs_body = section_bodies(content).get("references")
    body = content
    if refs_body:
        body = content.replace(refs_body, "")
    return {f"[{m}]" for m in INTEXT_LABEL_RE.findall(body)}


def listed_citation_labels(entries: Sequence[CitationEntry]) -> set[str]:
    return {e.index_label for e in entries if e.index_label}


def _normalize_title(title: str) -> str:
    return re.sub(r"[^a-z0-9]+", " ", title.lower()).strip()


class BiblioClientSet:
    """Bibliographic lookups routed through the science proxy.

    The same code path serves live and fixture transports; only the proxy's
    transport differs.
    """

    def __init__(self, proxy: ScienceProxy):
        self.proxy = proxy

    def crossref_doi(self, doi: str) -> Optional[dict]:
        return self._lookup("crossref", {"doi": doi})

    def arxiv(self, arxiv_id: str) -> Optional[dict]:
        return self._lookup("arxiv", {"id": arxiv_id})

    def semantic_scholar_title(self, title: str) -> Optional[dict]:
        return self._lookup("semantic_scholar", {"query": title})

    def _lookup(self, api: str, params: dict) -> Optional[dict]:
        try:
            return self.proxy.query(api, params)
        except (UpstreamError, TransformError, SourceUnavailable):
            return None


def verify_reference(
    entry: CitationEntry, clients: BiblioClientSet
) -> VerifiedEntry:
    """DOI via CrossRef, then arXiv id, then title search; first success wins."""
    if entry.doi:
        meta = clients.crossref_doi(entry.doi)
        if meta:
            return VerifiedEntry(entry, True, Source.CROSSREF, meta)
    if entry.arxiv_id:
        meta = clients.arxiv(entry.arxiv_id)
        if meta:
            return VerifiedEntry(entry, True, Source.ARXIV, meta)
    if entry.title_guess:
        meta = clients.semantic_scholar_title(entry.title_guess)
        if meta and _normalize_title(meta.get("title", "")) == _normalize_title(
            entry.title_guess
        ):
            return VerifiedEntry(entry, True, Source.SEMANTIC_SCHOLAR, meta)
    return VerifiedEntry(entry, False, Source.NONE, None)


def verification_report(
    entries: Sequence[CitationEntry], clients: Optional[BiblioClientSet]
) -> VerificationReport:
    """Verify every entry and summarize; ghost_flag iff > 50% unverifiable."""
    verified_entries = tuple(
        verify_reference(e, clients)
        if clients is not None
        else VerifiedEntry(e, False, Source.NONE, None)
        for e in entries
    )
    total = len(verified_entries)
    unverified = sum(1 for e in verified_entries if not e.verified)
    fraction = (unverified / total) if total else 0.0
    return VerificationReport(
        entries=verified_entries,
        unverified_fraction=fraction,
        ghost_flag=fraction > GHOST_THRESHOLD,
    )
