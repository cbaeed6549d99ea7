"""Score calibration: 8 deception detectors, 14 ordered rules, the composite
depth score, and the final affine deflation.

The rules run in a fixed order and only ever lower a dimension relative to
its raw value; deflation (s' = 0.82*s + 0.5) is applied per dimension as the
last step, mapping the effective range from [0, 10] to [0.5, 8.7]. Detector
thresholds were tuned once against the shipped synthetic corpus and are
frozen in the default config.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass, field, fields as dc_fields, replace
from pathlib import Path
from typing import Optional, Sequence

from .model import (
    GranularScores,
    PaperRecord,
    SECTION_NAMES,
    detect_sections,
    section_bodies,
)
from .refverify import (
    VerificationReport,
    extract_references,
    intext_citation_labels,
    listed_citation_labels,
)
from .signals import (
    StructuralSignals,
    count_buzzwords,
    count_evidence_markers,
    has_experimental_verbs,
    substantive_word_counts,
)

ALPHA = 0.82
BETA = 0.5


class Pattern(str, enum.Enum):
    SEMANTIC_HOLLOWNESS = "semantic-hollowness"
    GHOST_CITATIONS = "ghost-citations"
    RESULTS_WITHOUT_METHOD = "results-without-method"
    CARGO_CULT_STRUCTURE = "cargo-cult-structure"
    ORPHANED_EQUATIONS = "orphaned-equations"
    CIRCULAR_REASONING = "circular-reasoning"
    CITATION_FORMAT_MIMICRY = "citation-format-mimicry"
    BUZZWORD_INFLATION = "buzzword-inflation"


class Severity(str, enum.Enum):
    CRITICAL = "CRITICAL"
    HIGH = "HIGH"
    MEDIUM = "MEDIUM"


# Severity is fixed per pattern.
PATTERN_SEVERITY: dict[Pattern, Severity] = {
    Pattern.SEMANTIC_HOLLOWNESS: Severity.CRITICAL,
    Pattern.GHOST_CITATIONS: Severity.CRITICAL,
    Pattern.RESULTS_WITHOUT_METHOD: Severity.CRITICAL,
    Pattern.CARGO_CULT_STRUCTURE: Severity.HIGH,
    Pattern.ORPHANED_EQUATIONS: Severity.HIGH,
    Pattern.CIRCULAR_REASONING: Severity.HIGH,
    Pattern.CITATION_FORMAT_MIMICRY: Severity.MEDIUM,
    Pattern.BUZZWORD_INFLATION: Severity.MEDIUM,
}

# Each pattern penalizes its most-related dimension; magnitude follows the
# severity tier (CRITICAL 2.0, HIGH 1.0, MEDIUM 0.5).
DEFAULT_PATTERN_PENALTIES: dict[str, tuple[str, float]] = {
    "semantic-hollowness": ("discussion", 2.0),
    "ghost-citations": ("citation_quality", 2.0),
    "results-without-method": ("results", 2.0),
    "cargo-cult-structure": ("methodology", 1.0),
    "orphaned-equations": ("methodology", 1.0),
    "circular-reasoning": ("conclusion", 1.0),
    "citation-format-mimicry": ("references", 0.5),
    "buzzword-inflation": ("novelty", 0.5),
}


@dataclass(frozen=True)
class DeceptionFlag:
    pattern: Pattern
    severity: Severity
    evidence: str

    def __post_init__(self):
        if PATTERN_SEVERITY[self.pattern] is not self.severity:
            raise ValueError(f"{self.pattern.value} severity must be "
                             f"{PATTERN_SEVERITY[self.pattern].value}")


def flag(pattern: Pattern, evidence: str) -> DeceptionFlag:
    return DeceptionFlag(pattern, PATTERN_SEVERITY[pattern], evidence)


@dataclass
class CalibrationConfig:
    alpha: float = ALPHA
    beta: float = BETA
    benchmark_word_count: int = 2500
    red_flag_unit_penalty: float = 1.0
    red_flag_cap: float = 3.0
    mandatory_sections: tuple[str, ...] = SECTION_NAMES
    # detector thresholds (frozen against the fixture corpus)
    hollow_min_words: int = 1000
    hollow_claims_per_300_words: float = 1.0
    cargo_substantive_words: int = 50
    mimicry_min_refs: int = 3
    buzzword_density_per_1000: float = 8.0
    buzzword_max_numeric_claims: int = 5
    circular_min_sentence_words: int = 8
    # verified-reference bonus (floor applied pre-deflation, never above raw)
    verified_floor_score: float = 6.0
    verified_floor_fraction: float = 0.8
    verified_floor_min_refs: int = 3
    pattern_penalties: dict = field(
        default_factory=lambda: dict(DEFAULT_PATTERN_PENALTIES)
    )

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive to preserve ordering")

    @classmethod
    def from_file(cls, path: str | Path) -> "CalibrationConfig":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        known = {f.name for f in dc_fields(cls)}
        kwargs = {k: v for k, v in data.items() if k in known}
        if "pattern_penalties" in kwargs:
            kwargs["pattern_penalties"] = {
                k: (v[0], float(v[1])) for k, v in kwargs["pattern_penalties"].items()
            }
        if "mandatory_sections" in kwargs:
            kwargs["mandatory_sections"] = tuple(kwargs["mandatory_sections"])
        return cls(**kwargs)


def deflate(s: float, cfg: Optional[CalibrationConfig] = None) -> float:
    """Affine bias correction; maps [0, 10] onto [0.5, 8.7] at the defaults."""
    alpha = cfg.alpha if cfg else ALPHA
    beta = cfg.beta if cfg else BETA
    return alpha * s + beta


def depth_score(signals: StructuralSignals) -> float:
    """Composite structural-quality score in [0, 10]."""
    d = (
        signals.sections / 7.0 * 2.0
        + (1.0 if signals.has_equations else 0.0)
        + (1.5 if signals.has_proofs else 0.0)
        + (1.5 if signals.has_code else 0.0)
        + (1.5 if signals.has_stats else 0.0)
        + min(1.0, signals.n_numeric_claims / 5.0)
        + min(1.0, signals.n_unique_refs / 8.0)
        + (0.5 if signals.has_doi else 0.0)
        + (0.5 if signals.has_real_authors else 0.0)
        - (1.0 if signals.monotone_penalty else 0.0)
        - (1.0 if signals.low_vocab_penalty else 0.0)
    )
    return max(0.0, min(10.0, d))


_SENTENCE_SPLIT_RE = re.compile(r"[.!?]+\s+|\n+")
_EQ_REFERENCE_RE = re.compile(r"\b(?:equation|eq\.|eq\s*\(|formula)", re.IGNORECASE)


def _normalized_sentences(text: str, min_words: int) -> set[str]:
    out = set()
    for s in _SENTENCE_SPLIT_RE.split(text):
        words = re.findall(r"[a-z0-9]+", s.lower())
        if len(words) >= min_words:
            out.add(" ".join(words))
    return out


def detect_patterns(
    paper: PaperRecord,
    signals: StructuralSignals,
    refreport: Optional[VerificationReport],
    cfg: Optional[CalibrationConfig] = None,
) -> list[DeceptionFlag]:
    """Run all eight detectors over the full content."""
    cfg = cfg or CalibrationConfig()
    content = paper.content or ""
    flags: list[DeceptionFlag] = []
    detected = detect_sections(content)
    bodies = section_bodies(content)

    # 1. semantic-hollowness: many words, few concrete anchors
    wc = paper.word_count
    substantive = signals.n_numeric_claims + signals.evidence_markers
    if wc >= cfg.hollow_min_words:
        density = substantive / (wc / 300.0)
        if density < cfg.hollow_claims_per_300_words:
            flags.append(
                flag(
                    Pattern.SEMANTIC_HOLLOWNESS,
                    f"{wc} words with {substantive} substantive claims "
                    f"({density:.2f} per 300 words)",
                )
            )

    # 2. ghost-citations: labels cited but unlisted, listed but never cited,
    #    or over half the reference list unverifiable
    entries = extract_references(content)
    cited = intext_citation_labels(content)
    listed = listed_citation_labels(entries)
    missing = sorted(cited - listed)
    unverified_excess = refreport is not None and refreport.unverified_fraction > 0.5
    if missing or (listed and not cited) or unverified_excess:
        parts = []
        if missing:
            parts.append(f"cited but unlisted: {', '.join(missing[:5])}")
        if listed and not cited:
            parts.append(f"{len(listed)} listed references never cited")
        if unverified_excess:
            parts.append(
                f"{refreport.unverified_fraction:.0%} of references unverifiable"
            )
        flags.append(flag(Pattern.GHOST_CITATIONS, "; ".join(parts)))

    # 3. results-without-method: results present, methodology chain absent
    if "results" in detected:
        method_text = bodies.get("methodology", "") + "\n" + bodies.get("results", "")
        if not (
            signals.has_code
            or signals.has_equations
            or has_experimental_verbs(method_text)
        ):
            flags.append(
                flag(
                    Pattern.RESULTS_WITHOUT_METHOD,
                    "results section with no code, equations, or experimental verbs",
                )
            )

    # 4. cargo-cult-structure: the full 7-section shell with empty bodies
    if len(detected) == 7:
        counts = substantive_word_counts(content)
        section_counts = [counts.get(s, 0) for s in SECTION_NAMES]
        if all(c < cfg.cargo_substantive_words for c in section_counts):
            flags.append(
                flag(
                    Pattern.CARGO_CULT_STRUCTURE,
                    f"all 7 sections present, max {max(section_counts)} "
                    "substantive words per section",
                )
            )

    # 5. orphaned-equations: math present but never referenced in prose
    if signals.has_equations and not _EQ_REFERENCE_RE.search(content):
        flags.append(
            flag(
                Pattern.ORPHANED_EQUATIONS,
                "mathematical notation never referenced in surrounding text",
            )
        )

    # 6. circular-reasoning: conclusion restates the opening verbatim with no
    #    independent evidence
    conclusion = bodies.get("conclusion", "")
    opening = bodies.get("abstract", "") + "\n" + bodies.get("introduction", "")
    if conclusion and opening:
        c_sents = _normalized_sentences(conclusion, cfg.circular_min_sentence_words)
        o_sents = _normalized_sentences(opening, cfg.circular_min_sentence_words)
        restated = c_sents & o_sents
        if restated and count_evidence_markers(conclusion) == 0:
            flags.append(
                flag(
                    Pattern.CIRCULAR_REASONING,
                    f"{len(restated)} opening sentence(s) restated in the "
                    "conclusion without evidence",
                )
            )

    # 7. citation-format-mimicry: plausible-looking references that fail
    #    verification
    if (
        refreport is not None
        and signals.n_unique_refs >= cfg.mimicry_min_refs
        and signals.has_real_authors
        and refreport.unverified_fraction > 0.5
    ):
        flags.append(
            flag(
                Pattern.CITATION_FORMAT_MIMICRY,
                f"{refreport.unverified_fraction:.0%} of well-formatted "
                "references fail verification",
            )
        )

    # 8. buzzword-inflation: dense jargon, thin substance
    if wc > 0:
        buzz = count_buzzwords(content)
        density = buzz / wc * 1000.0
        if (
            density >= cfg.buzzword_density_per_1000
            and signals.n_numeric_claims < cfg.buzzword_max_numeric_claims
            and not signals.has_code
        ):
            flags.append(
                flag(
                    Pattern.BUZZWORD_INFLATION,
                    f"{density:.1f} buzzwords per 1000 words, "
                    f"{signals.n_numeric_claims} numeric claims",
                )
            )

    return flags


def apply_rules(
    raw: GranularScores,
    paper: PaperRecord,
    flags: Sequence[DeceptionFlag],
    signals: StructuralSignals,
    refreport: Optional[VerificationReport],
    cfg: Optional[CalibrationConfig] = None,
) -> GranularScores:
    """The 14 calibration rules, in order, then per-dimension deflation.

    Pre-deflation the result is monotone non-increasing relative to the raw
    input: no rule (including the verified-reference floor) raises a
    dimension above its raw value.
    """
    cfg = cfg or CalibrationConfig()
    dims = raw.dims()

    # 1. red-flag penalty, applied to every dimension
    penalty = min(cfg.red_flag_cap, len(flags) * cfg.red_flag_unit_penalty)
    for d in dims:
        dims[d] -= penalty

    # 2. placeholder references
    if signals.placeholder_refs:
        dims["references"] = min(dims["references"], 1.0)
        dims["citation_quality"] = min(dims["citation_quality"], 1.0)

    # 3. undetected mandatory sections score 0
    detected = detect_sections(paper.content)
    for section in cfg.mandatory_sections:
        if section in dims and section not in detected:
            dims[section] = 0.0

    # 4. extraordinary claims without evidence
    if signals.extraordinary_claims > 2 and signals.evidence_markers < 3:
        dims["novelty"] -= 2.0
        dims["methodology"] -= 2.0

    # 5. reference quality caps
    if signals.n_unique_refs < 3:
        dims["references"] = min(dims["references"], 3.0)
    if not signals.has_real_authors:
        dims["references"] = min(dims["references"], 4.0)

    # 6. depth calibration by length
    if paper.word_count < 0.2 * cfg.benchmark_word_count:
        for d in ("methodology", "results", "discussion"):
            dims[d] = min(dims[d], 5.0)

    # 7. novelty reality check
    evidence_kinds = (
        signals.has_proofs,
        signals.has_code,
        signals.n_numeric_claims > 0,
    )
    if dims["novelty"] > 5.0 and not any(evidence_kinds):
        dims["novelty"] = 5.0
    if dims["novelty"] > 7.0 and not all(evidence_kinds):
        dims["novelty"] = 7.0

    # 8. results without data
    if not signals.has_stats and signals.n_numeric_claims == 0:
        dims["results"] = min(dims["results"], 5.0)

    # 9-14. per-pattern penalties
    for f in flags:
        target, magnitude = cfg.pattern_penalties.get(
            f.pattern.value, ("novelty", 0.5)
        )
        dims[target] -= magnitude

    # verified references contribute positively: a floor on citation_quality,
    # bounded by the raw value so calibration never raises a score
    if (
        refreport is not None
        and refreport.total >= cfg.verified_floor_min_refs
        and refreport.total > 0
        and (refreport.verified_count / refreport.total) >= cfg.verified_floor_fraction
    ):
        dims["citation_quality"] = max(
            dims["citation_quality"],
            min(cfg.verified_floor_score, raw.citation_quality),
        )

    for d in dims:
        dims[d] = max(0.0, min(10.0, dims[d]))
        dims[d] = deflate(dims[d], cfg)
    out = GranularScores.from_dims(dims)
    # keep the overall inside the deflated range despite float rounding
    lo, hi = deflate(0.0, cfg), deflate(10.0, cfg)
    overall = min(max(out.overall, lo), hi)
    return replace(out, overall=overall)
