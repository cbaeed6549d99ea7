"""Structural signal extraction from full (untruncated) paper content.

These signals feed three consumers: the composite depth score, the
deterministic heuristic judge, and the deception detectors. Everything here
is pure regex/lexicon work so the whole scoring path stays bit-deterministic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .model import GranularScores, detect_sections, section_bodies, word_count
from .refverify import extract_references

EQUATION_RE = re.compile(
    r"\$[^$\n]+\$"  # inline TeX
    r"|\\begin\{(?:equation|align|gather)"
    r"|\\\["
)
PROOF_RE = re.compile(
    r"\b(?:theorem|lemma|proposition|corollary|proof)\b|```lean|\bqed\b|∎",
    re.IGNORECASE,
)
CODE_FENCE_RE = re.compile(r"```")
STATS_RE = re.compile(
    r"p\s*[<=]\s*0?\.\d+"
    r"|confidence interval"
    r"|standard deviation"
    r"|\bstd\b|\bvariance\b|\bt-test\b|\banova\b|chi-square|χ²"
    r"|r²|r\^2|±|correlation",
    re.IGNORECASE,
)
DOI_PRESENT_RE = re.compile(r"\b10\.\d{4,9}/\S+")

NUMERIC_CLAIM_RE = re.compile(
    r"\b\d+(?:\.\d+)?\s*%"
    r"|\b\d+(?:\.\d+)?\s*(?:ms|ns|µs|s|kb|mb|gb|hz|ghz|mhz)\b"
    r"|p\s*[<=]\s*0?\.\d+"
    r"|\b\d+(?:\.\d+)?[x×]\b"
    r"|\bn\s*=\s*\d+"
    r"|±\s*\d+(?:\.\d+)?",
    re.IGNORECASE,
)

REAL_AUTHOR_RE = re.compile(
    r"\b[A-Z][a-z]+,\s*[A-Z]\."  # Surname, I.
    r"|\b[A-Z]\.\s*[A-Z][a-z]+\b"  # I. Surname
)
PLACEHOLDER_REF_RE = re.compile(
    r"\bauthor,?\s+[a-z]\.\s"
    r"|\bet al\.,?\s*tbd\b"
    r"|\b(?:john|jane)\s+doe\b"
    r"|\blorem ipsum\b"
    r"|\banonymous\b.*\bforthcoming\b"
    r"|\[(?:citation|ref|source) needed\]"
    r"|\bplaceholder\b",
    re.IGNORECASE,
)

EXTRAORDINARY_TERMS = (
    "revolutionary",
    "breakthrough",
    "unprecedented",
    "paradigm shift",
    "paradigm-shifting",
    "first ever",
    "world's first",
    "world first",
    "groundbreaking",
    "solves all",
    "theory of everything",
    "disproves",
    "infinite improvement",
    "limitless",
    "definitively proves",
)

EVIDENCE_TERMS = (
    "experiment",
    "experiments",
    "dataset",
    "datasets",
    "benchmark",
    "benchmarks",
    "measured",
    "measurement",
    "measurements",
    "evaluation",
    "evaluated",
    "table",
    "figure",
    "statistically",
    "sample",
    "samples",
    "trial",
    "trials",
    "ablation",
    "baseline",
    "observed",
)

BUZZWORDS = (
    "synergy",
    "synergistic",
    "paradigm",
    "quantum leap",
    "cutting-edge",
    "state-of-the-art",
    "next-generation",
    "disruptive",
    "holistic",
    "seamless",
    "seamlessly",
    "leverage",
    "leverages",
    "leveraging",
    "transformative",
    "game-changing",
    "hyperdimensional",
    "revolutionize",
    "revolutionizes",
    "unparalleled",
    "groundbreaking",
    "synergize",
    "frictionless",
    "holistically",
)

EXPERIMENTAL_VERBS = (
    "measured",
    "evaluated",
    "trained",
    "implemented",
    "deployed",
    "computed",
    "simulated",
    "benchmarked",
    "conducted",
    "profiled",
    "compared",
    "tested",
)

STOPWORDS = frozenset(
    """a an and are as at be by for from has have in is it its of on or that the
    this to was were will with we our their they not""".split()
)

LOW_VOCAB_TTR = 0.16  # type-token ratio floor, frozen against the fixture corpus
TTR_WINDOW = 2000


@dataclass(frozen=True)
class StructuralSignals:
    """Inputs to the composite depth score plus detector-facing extras."""

    sections: int = 0  # 0..7
    has_equations: bool = False
    has_proofs: bool = False
    has_code: bool = False
    has_stats: bool = False
    has_doi: bool = False
    has_real_authors: bool = False
    n_numeric_claims: int = 0
    n_unique_refs: int = 0
    monotone_penalty: bool = False
    low_vocab_penalty: bool = False
    extraordinary_claims: int = 0
    evidence_markers: int = 0
    placeholder_refs: bool = False


def _count_terms(text_lower: str, terms) -> int:
    count = 0
    for term in terms:
        count += len(re.findall(r"(?<![a-z])" + re.escape(term) + r"(?![a-z])", text_lower))
    return count


def count_extraordinary_claims(content: str) -> int:
    return _count_terms(content.lower(), EXTRAORDINARY_TERMS)


def count_evidence_markers(content: str) -> int:
    return _count_terms(content.lower(), EVIDENCE_TERMS)


def count_buzzwords(content: str) -> int:
    return _count_terms(content.lower(), BUZZWORDS)


def has_experimental_verbs(text: str) -> bool:
    lower = text.lower()
    return any(
        re.search(r"(?<![a-z])" + re.escape(v) + r"(?![a-z])", lower)
        for v in EXPERIMENTAL_VERBS
    )


def type_token_ratio(content: str, window: int = TTR_WINDOW) -> float:
    tokens = re.findall(r"[a-z0-9']+", content.lower())[:window]
    if not tokens:
        return 1.0
    return len(set(tokens)) / len(tokens)


def substantive_word_counts(content: str) -> dict[str, int]:
    """Non-stopword alphabetic word count per detected section body."""
    out = {}
    for name, body in section_bodies(content).items():
        words = re.findall(r"[A-Za-z][A-Za-z'-]*", body)
        out[name] = sum(1 for w in words if w.lower() not in STOPWORDS)
    return out


def scores_monotone(scores: Optional[GranularScores], eps: float = 1e-9) -> bool:
    """True when the raw score vector is flat across all 10 dimensions."""
    if scores is None:
        return False
    vals = list(scores.dims().values())
    return max(vals) - min(vals) < eps


def extract_signals(
    content: str, raw_scores: Optional[GranularScores] = None
) -> StructuralSignals:
    if not content:
        return StructuralSignals(monotone_penalty=scores_monotone(raw_scores))
    refs = extract_references(content)
    unique_refs = {re.sub(r"\s+", " ", r.raw.lower()) for r in refs}
    ref_text = "\n".join(r.raw for r in refs)
    real_authors = bool(REAL_AUTHOR_RE.search(ref_text)) and not PLACEHOLDER_REF_RE.search(
        ref_text
    )
    return StructuralSignals(
        sections=len(detect_sections(content)),
        has_equations=bool(EQUATION_RE.search(content)),
        has_proofs=bool(PROOF_RE.search(content)),
        has_code=bool(CODE_FENCE_RE.search(content)),
        has_stats=bool(STATS_RE.search(content)),
        has_doi=bool(DOI_PRESENT_RE.search(content)),
        has_real_authors=real_authors,
        n_numeric_claims=len(NUMERIC_CLAIM_RE.findall(content)),
        n_unique_refs=len(unique_refs),
        monotone_penalty=scores_monotone(raw_scores),
        low_vocab_penalty=type_token_ratio(content) < LOW_VOCAB_TTR,
        extraordinary_claims=count_extraordinary_claims(content),
        evidence_markers=count_evidence_markers(content),
        placeholder_refs=bool(PLACEHOLDER_REF_RE.search(ref_text)) if refs else False,
    )


__all__ = [
    "StructuralSignals",
    "extract_signals",
    "count_extraordinary_claims",
    "count_evidence_markers",
    "count_buzzwords",
    "has_experimental_verbs",
    "type_token_ratio",
    "substantive_word_counts",
    "scores_monotone",
    "word_count",
]
