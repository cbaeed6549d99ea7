"""Canonical record types: papers, score vectors, statuses, and the soft
validation gate applied at publication time.

The validation philosophy is deliberately permissive: structural defects
(missing sections, no proof code) produce warnings that the scoring pipeline
translates into low dimension scores. Only three hard gates block a
publication outright: a title under 5 characters, missing content, or fewer
than 30 words.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

SECTION_NAMES = (
    "abstract",
    "introduction",
    "methodology",
    "results",
    "discussion",
    "conclusion",
    "references",
)

# Heading synonyms. A section counts as detected when a heading line contains
# the canonical name or one of these, case-insensitively.
SECTION_SYNONYMS: dict[str, tuple[str, ...]] = {
    "abstract": ("abstract", "summary"),
    "introduction": ("introduction", "background"),
    "methodology": ("methodology", "methods", "method", "approach"),
    "results": ("results", "findings", "evaluation"),
    "discussion": ("discussion", "analysis"),
    "conclusion": ("conclusion", "conclusions", "concluding remarks"),
    "references": ("references", "bibliography", "works cited"),
}

MIN_TITLE_CHARS = 5
MIN_WORDS = 30


class Tier(str, enum.Enum):
    TIER1_VERIFIED = "TIER1_VERIFIED"
    UNVERIFIED = "UNVERIFIED"


class Status(enum.IntEnum):
    """Publication lifecycle rank. The order is total and never regresses."""

    MEMPOOL = 0
    VERIFIED = 1
    PROMOTED = 2
    PODIUM = 3
    CANONICAL = 4


SCORE_DIMENSIONS = (
    "abstract",
    "introduction",
    "methodology",
    "results",
    "discussion",
    "conclusion",
    "references",
    "novelty",
    "reproducibility",
    "citation_quality",
)


@dataclass(frozen=True)
class GranularScores:
    """10-dimension score vector on a [0, 10] scale plus the overall mean."""

    abstract: float = 0.0
    introduction: float = 0.0
    methodology: float = 0.0
    results: float = 0.0
    discussion: float = 0.0
    conclusion: float = 0.0
    references: float = 0.0
    novelty: float = 0.0
    reproducibility: float = 0.0
    citation_quality: float = 0.0
    overall: float = 0.0

    def __post_init__(self):
        for dim in SCORE_DIMENSIONS:
            v = getattr(self, dim)
            if not (0.0 <= v <= 10.0):
                raise ValueError(f"score dimension {dim}={v} outside [0, 10]")

    @classmethod
    def from_dims(cls, dims: dict[str, float]) -> "GranularScores":
        """Build from a per-dimension map; overall is the mean of the 10 dims."""
        vals = {d: float(dims[d]) for d in SCORE_DIMENSIONS}
        overall = sum(vals.values()) / len(SCORE_DIMENSIONS)
        return cls(overall=overall, **vals)

    def dims(self) -> dict[str, float]:
        return {d: getattr(self, d) for d in SCORE_DIMENSIONS}

    def to_dict(self) -> dict[str, float]:
        out = self.dims()
        out["overall"] = self.overall
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "GranularScores":
        return cls(
            overall=float(data.get("overall", 0.0)),
            **{d: float(data.get(d, 0.0)) for d in SCORE_DIMENSIONS},
        )


class RejectReason(str, enum.Enum):
    TITLE_TOO_SHORT = "TITLE_TOO_SHORT"
    NO_CONTENT = "NO_CONTENT"
    TOO_FEW_WORDS = "TOO_FEW_WORDS"


@dataclass(frozen=True)
class ValidationReport:
    hard_reject: bool
    reject_reason: Optional[RejectReason] = None
    warnings: tuple[str, ...] = ()
    detected_sections: frozenset[str] = frozenset()

    def __post_init__(self):
        if self.hard_reject and self.reject_reason is None:
            raise ValueError("hard_reject requires a reject_reason")


@dataclass
class PaperRecord:
    """The knowledge record that flows through every pipeline stage.

    `word_count` always reflects the whitespace-token count of `content`;
    `tier1_proof` is present exactly when `tier` is TIER1_VERIFIED.
    """

    id: str
    title: str
    content: str
    claims: list[str] = field(default_factory=list)
    tier: Tier = Tier.UNVERIFIED
    tier1_proof: Optional[str] = None
    lean_proof: Optional[str] = None
    occam_score: float = 0.0
    status: Status = Status.MEMPOOL
    granular_scores: Optional[GranularScores] = None
    word_count: int = 0
    signature: Optional[str] = None
    ipfs_cid: Optional[str] = None
    agent_id: str = ""
    created_at: int = 0

    def __post_init__(self):
        self.word_count = word_count(self.content)

    def copy(self) -> "PaperRecord":
        return replace(self, claims=list(self.claims))

    def to_dict(self) -> dict:
        """Flat JSON document, stable across every persistence tier.

        All keys are always present; absent optionals serialize as null.
        """
        return {
            "id": self.id,
            "title": self.title,
            "content": self.content,
            "claims": list(self.claims),
            "tier": self.tier.value,
            "tier1_proof": self.tier1_proof,
            "lean_proof": self.lean_proof,
            "occam_score": self.occam_score,
            "status": self.status.name,
            "granular_scores": (
                self.granular_scores.to_dict() if self.granular_scores else None
            ),
            "word_count": self.word_count,
            "signature": self.signature,
            "ipfs_cid": self.ipfs_cid,
            "agent_id": self.agent_id,
            "created_at": self.created_at,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_dict(cls, data: dict) -> "PaperRecord":
        gs = data.get("granular_scores")
        return cls(
            id=data["id"],
            title=data.get("title", ""),
            content=data.get("content", ""),
            claims=list(data.get("claims") or []),
            tier=Tier(data.get("tier", Tier.UNVERIFIED.value)),
            tier1_proof=data.get("tier1_proof"),
            lean_proof=data.get("lean_proof"),
            occam_score=float(data.get("occam_score") or 0.0),
            status=Status[data.get("status", "MEMPOOL")],
            granular_scores=GranularScores.from_dict(gs) if gs else None,
            signature=data.get("signature"),
            ipfs_cid=data.get("ipfs_cid"),
            agent_id=data.get("agent_id", ""),
            created_at=int(data.get("created_at") or 0),
        )

    @classmethod
    def from_json(cls, raw: str) -> "PaperRecord":
        return cls.from_dict(json.loads(raw))


def word_count(content: Optional[str]) -> int:
    """Count of maximal whitespace-delimited tokens; empty input yields 0."""
    if not content:
        return 0
    return len(content.split())


_HEADING_RE = re.compile(
    r"^\s{0,3}(?:#{1,6}\s+(?P<md>.+?)\s*#*\s*$"  # markdown heading
    r"|\*\*(?P<bold>[^*]{1,80})\*\*\s*$"  # bold-only line
    r"|(?P<num>\d{1,2}[.)]\s+\S.{0,78})$)"  # numbered heading
)


def _heading_lines(content: str) -> list[str]:
    out = []
    for line in content.splitlines():
        m = _HEADING_RE.match(line)
        if m:
            out.append((m.group("md") or m.group("bold") or m.group("num")).lower())
    return out


def detect_sections(
    content: Optional[str],
    synonyms: Optional[dict[str, Iterable[str]]] = None,
) -> frozenset[str]:
    """Sections whose canonical name (or a synonym) appears in a heading line."""
    if not content:
        return frozenset()
    table = synonyms or SECTION_SYNONYMS
    headings = _heading_lines(content)
    found = set()
    for section in SECTION_NAMES:
        names = tuple(table.get(section, (section,)))
        for h in headings:
            if any(name in h for name in names):
                found.add(section)
                break
    return frozenset(found)


def section_bodies(content: str) -> dict[str, str]:
    """Split content into the text under each detected canonical heading."""
    lines = content.splitlines()
    marks: list[tuple[int, str]] = []  # (line index, section name)
    for i, line in enumerate(lines):
        m = _HEADING_RE.match(line)
        if not m:
            continue
        text = (m.group("md") or m.group("bold") or m.group("num")).lower()
        for section in SECTION_NAMES:
            if any(name in text for name in SECTION_SYNONYMS[section]):
                marks.append((i, section))
                break
    bodies: dict[str, str] = {}
    for j, (start, name) in enumerate(marks):
        end = marks[j + 1][0] if j + 1 < len(marks) else len(lines)
        body = "\n".join(lines[start + 1 : end])
        # first heading occurrence wins
        bodies.setdefault(name, body)
    return bodies


_LEAN_BLOCK_RE = re.compile(r"```lean", re.IGNORECASE)


def soft_validate(paper: PaperRecord) -> ValidationReport:
    """Apply the three hard gates; everything else is a warning.

    A paper with a >= 5 character title, nonempty content, and >= 30 words is
    never hard-rejected, whatever its other defects.
    """
    title_len = len(paper.title)  # Unicode scalar values, not bytes
    if title_len < MIN_TITLE_CHARS:
        return ValidationReport(True, RejectReason.TITLE_TOO_SHORT)
    if not paper.content or not paper.content.strip():
        return ValidationReport(True, RejectReason.NO_CONTENT)
    wc = word_count(paper.content)
    if wc < MIN_WORDS:
        return ValidationReport(True, RejectReason.TOO_FEW_WORDS)

    detected = detect_sections(paper.content)
    warnings = []
    missing = [s for s in SECTION_NAMES if s not in detected]
    if missing:
        warnings.append("missing sections: " + ", ".join(missing))
    if not paper.lean_proof and not _LEAN_BLOCK_RE.search(paper.content):
        warnings.append("no formal proof code block detected")
    return ValidationReport(
        hard_reject=False,
        warnings=tuple(warnings),
        detected_sections=detected,
    )
