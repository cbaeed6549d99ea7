import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from clawpipe.calibration import (
    CalibrationConfig,
    Pattern,
    Severity,
    apply_rules,
    deflate,
    depth_score,
    detect_patterns,
    flag,
)
from clawpipe.model import GranularScores, PaperRecord, SECTION_NAMES
from clawpipe.refverify import VerificationReport, VerifiedEntry, CitationEntry, Source
from clawpipe.signals import StructuralSignals, extract_signals
from clawpipe import corpus


def _flat(value: float) -> GranularScores:
    return GranularScores.from_dims({d: value for d in GranularScores().dims()})


def _paper(content, title="A Valid Title"):
    return PaperRecord(id="p", title=title, content=content, agent_id="a")


def _report(verified: int, total: int) -> VerificationReport:
    entries = tuple(
        VerifiedEntry(
            CitationEntry(raw=f"[{i}] x"),
            i < verified,
            Source.CROSSREF if i < verified else Source.NONE,
        )
        for i in range(total)
    )
    fraction = (total - verified) / total if total else 0.0
    return VerificationReport(entries, fraction, fraction > 0.5)


FULL_SIGNALS = StructuralSignals(
    sections=7,
    has_equations=True,
    has_proofs=True,
    has_code=True,
    has_stats=True,
    has_doi=True,
    has_real_authors=True,
    n_numeric_claims=5,
    n_unique_refs=8,
)

ALL_SECTIONS_DOC = "\n\n".join(
    f"## {s.title()}\n\nSolid body text for this part." for s in SECTION_NAMES
)


class TestDeflate:
    def test_endpoints_exact(self):
        assert deflate(0.0) == pytest.approx(0.5, abs=1e-12)
        assert deflate(10.0) == pytest.approx(8.7, abs=1e-12)

    def test_strictly_increasing(self):
        rng = random.Random(0)
        for _ in range(1_000):
            a, b = sorted((rng.uniform(0, 10), rng.uniform(0, 10)))
            if a < b:
                assert deflate(a) < deflate(b)

    def test_alpha_must_be_positive(self):
        with pytest.raises(ValueError):
            CalibrationConfig(alpha=0.0)

    def test_config_loads_from_json_file(self, tmp_path):
        path = tmp_path / "calibration.json"
        path.write_text(
            json.dumps(
                {
                    "benchmark_word_count": 3000,
                    "pattern_penalties": {"ghost-citations": ["citation_quality", 2.5]},
                }
            )
        )
        cfg = CalibrationConfig.from_file(path)
        assert cfg.benchmark_word_count == 3000
        assert cfg.pattern_penalties["ghost-citations"] == ("citation_quality", 2.5)
        assert cfg.alpha == 0.82  # untouched defaults survive


class TestDepthScore:
    def test_all_maximal_clamps_to_ten(self):
        # hand evaluation: 2 + 1 + 1.5*3 + 1 + 1 + 0.5 + 0.5 = 10.5, clamped
        assert depth_score(FULL_SIGNALS) == pytest.approx(10.0)

    def test_all_zero(self):
        assert depth_score(StructuralSignals()) == pytest.approx(0.0)

    def test_sections_only_with_both_penalties(self):
        # 2 - 1 - 1 = 0
        signals = StructuralSignals(
            sections=7, monotone_penalty=True, low_vocab_penalty=True
        )
        assert depth_score(signals) == pytest.approx(0.0)

    def test_partial_hand_value(self):
        # 3/7*2 + 1 + min(1, 4/8) = 0.857.. + 1 + 0.5
        signals = StructuralSignals(sections=3, has_equations=True, n_unique_refs=4)
        assert depth_score(signals) == pytest.approx(3 / 7 * 2 + 1 + 0.5)

    def test_positive_indicator_never_decreases(self):
        base = StructuralSignals(sections=4, n_numeric_claims=2)
        better = StructuralSignals(sections=4, n_numeric_claims=2, has_code=True)
        assert depth_score(better) >= depth_score(base)
        assert 0.0 <= depth_score(better) <= 10.0


class TestApplyRules:
    def test_red_flag_penalty_caps_at_three(self):
        flags = [
            flag(Pattern.SEMANTIC_HOLLOWNESS, "e"),
            flag(Pattern.GHOST_CITATIONS, "e"),
            flag(Pattern.CARGO_CULT_STRUCTURE, "e"),
            flag(Pattern.BUZZWORD_INFLATION, "e"),
        ]
        paper = _paper(ALL_SECTIONS_DOC)
        out = apply_rules(_flat(8.0), paper, flags, FULL_SIGNALS, None)
        # rule 1 takes min(3, 4*1.0) = 3 from every dimension before
        # per-pattern penalties; abstract has no pattern penalty
        assert out.abstract == pytest.approx(deflate(5.0))

    def test_novelty_reality_check_clamps(self):
        paper = _paper(ALL_SECTIONS_DOC)
        no_evidence = StructuralSignals(sections=7, n_unique_refs=8, has_real_authors=True)
        out = apply_rules(_flat(9.0), paper, [], no_evidence, None)
        assert out.novelty == pytest.approx(deflate(5.0))

        two_of_three = StructuralSignals(
            sections=7,
            has_proofs=True,
            has_code=True,
            n_unique_refs=8,
            has_real_authors=True,
            has_stats=True,
        )
        out = apply_rules(_flat(9.0), paper, [], two_of_three, None)
        assert out.novelty == pytest.approx(deflate(7.0))

    def test_perfect_paper_deflates_to_8_7_everywhere(self):
        paper = _paper(ALL_SECTIONS_DOC)
        signals = StructuralSignals(
            sections=7,
            has_equations=True,
            has_proofs=True,
            has_code=True,
            has_stats=True,
            has_doi=True,
            has_real_authors=True,
            n_numeric_claims=5,
            n_unique_refs=8,
        )
        # enough words to dodge the depth-calibration cap
        paper = _paper(ALL_SECTIONS_DOC + "\nword" * 600)
        out = apply_rules(_flat(10.0), paper, [], signals, None)
        for value in out.dims().values():
            assert value == pytest.approx(8.7)
        assert out.overall == pytest.approx(8.7)

    def test_missing_section_forced_to_zero(self):
        content = "## Abstract\n\ntext\n" + "word " * 600
        paper = _paper(content)
        out = apply_rules(_flat(8.0), paper, [], FULL_SIGNALS, None)
        assert out.results == pytest.approx(deflate(0.0))
        assert out.abstract == pytest.approx(deflate(8.0))

    def test_placeholder_refs_cap(self):
        signals = StructuralSignals(
            sections=7, placeholder_refs=True, n_unique_refs=8, has_real_authors=True,
            has_proofs=True, has_code=True, n_numeric_claims=5, has_stats=True,
        )
        paper = _paper(ALL_SECTIONS_DOC + "\nword" * 600)
        out = apply_rules(_flat(9.0), paper, [], signals, None)
        assert out.references == pytest.approx(deflate(1.0))
        assert out.citation_quality == pytest.approx(deflate(1.0))

    def test_evidence_gap_penalty(self):
        signals = StructuralSignals(
            sections=7, extraordinary_claims=3, evidence_markers=0,
            has_proofs=True, has_code=True, n_numeric_claims=5, has_stats=True,
            n_unique_refs=8, has_real_authors=True,
        )
        paper = _paper(ALL_SECTIONS_DOC + "\nword" * 600)
        out = apply_rules(_flat(8.0), paper, [], signals, None)
        assert out.novelty == pytest.approx(deflate(6.0))
        assert out.methodology == pytest.approx(deflate(6.0))

    def test_reference_quality_caps(self):
        signals = StructuralSignals(
            sections=7, n_unique_refs=2, has_real_authors=False,
            has_proofs=True, has_code=True, n_numeric_claims=5, has_stats=True,
        )
        paper = _paper(ALL_SECTIONS_DOC + "\nword" * 600)
        out = apply_rules(_flat(9.0), paper, [], signals, None)
        assert out.references == pytest.approx(deflate(3.0))

    def test_short_paper_depth_cap(self):
        paper = _paper(ALL_SECTIONS_DOC)  # well under 500 words
        out = apply_rules(_flat(9.0), paper, [], FULL_SIGNALS, None)
        for dim in ("methodology", "results", "discussion"):
            assert getattr(out, dim) == pytest.approx(deflate(5.0))

    def test_results_without_stats_capped(self):
        signals = StructuralSignals(
            sections=7, has_stats=False, n_numeric_claims=0,
            has_proofs=True, has_code=True, n_unique_refs=8, has_real_authors=True,
        )
        paper = _paper(ALL_SECTIONS_DOC + "\nword" * 600)
        out = apply_rules(_flat(9.0), paper, [], signals, None)
        assert out.results == pytest.approx(deflate(5.0))

    def test_pattern_penalty_hits_mapped_dimension(self):
        paper = _paper(ALL_SECTIONS_DOC + "\nword" * 600)
        flags = [flag(Pattern.GHOST_CITATIONS, "e")]
        out = apply_rules(_flat(8.0), paper, flags, FULL_SIGNALS, None)
        # rule 1: -1.0 everywhere; rules 9-14: -2.0 more on citation_quality
        assert out.citation_quality == pytest.approx(deflate(5.0))
        assert out.abstract == pytest.approx(deflate(7.0))

    def test_verified_floor_never_exceeds_raw(self):
        paper = _paper(ALL_SECTIONS_DOC + "\nword" * 600)
        report = _report(verified=5, total=5)
        raw = GranularScores.from_dims(
            {d: (4.0 if d == "citation_quality" else 8.0) for d in GranularScores().dims()}
        )
        flags = [flag(Pattern.BUZZWORD_INFLATION, "e")]
        out = apply_rules(raw, paper, flags, FULL_SIGNALS, report)
        # floor is min(6, raw=4) = 4: protects against the penalty but the
        # calibrated value still does not exceed the raw score
        assert out.citation_quality <= deflate(4.0) + 1e-9

    @settings(max_examples=60, deadline=None)
    @given(
        st.lists(
            st.floats(min_value=0, max_value=10, allow_nan=False),
            min_size=10,
            max_size=10,
        ),
        st.integers(min_value=0, max_value=4),
    )
    def test_monotone_non_increasing_pre_deflation(self, values, n_flags):
        dims = dict(zip(GranularScores().dims(), values))
        raw = GranularScores.from_dims(dims)
        all_flags = [
            flag(Pattern.SEMANTIC_HOLLOWNESS, "e"),
            flag(Pattern.GHOST_CITATIONS, "e"),
            flag(Pattern.ORPHANED_EQUATIONS, "e"),
            flag(Pattern.BUZZWORD_INFLATION, "e"),
        ][:n_flags]
        paper = _paper(ALL_SECTIONS_DOC + "\nword" * 600)
        out = apply_rules(raw, paper, all_flags, FULL_SIGNALS, _report(4, 5))
        cfg = CalibrationConfig()
        for dim, calibrated in out.dims().items():
            pre_deflation = (calibrated - cfg.beta) / cfg.alpha
            assert pre_deflation <= getattr(raw, dim) + 1e-9

    def test_calibrated_overall_within_deflated_range(self):
        paper = _paper(ALL_SECTIONS_DOC + "\nword" * 600)
        out = apply_rules(_flat(10.0), paper, [], FULL_SIGNALS, None)
        assert 0.5 <= out.overall <= 8.7


class TestDetectors:
    def test_severities_fixed_per_pattern(self):
        assert flag(Pattern.SEMANTIC_HOLLOWNESS, "e").severity is Severity.CRITICAL
        assert flag(Pattern.CARGO_CULT_STRUCTURE, "e").severity is Severity.HIGH
        assert flag(Pattern.BUZZWORD_INFLATION, "e").severity is Severity.MEDIUM
        with pytest.raises(ValueError):
            from clawpipe.calibration import DeceptionFlag
            DeceptionFlag(Pattern.GHOST_CITATIONS, Severity.MEDIUM, "e")

    def _flags_for(self, content, report=None):
        paper = _paper(content)
        signals = extract_signals(content)
        return [f.pattern for f in detect_patterns(paper, signals, report)]

    def test_ghost_citation_label_mismatch(self):
        content = (
            "## Introduction\n\nAs shown in [7], things hold.\n\n"
            "## References\n\n"
            "[1] A\n[2] B\n[3] C\n[4] D\n[5] E\n"
        )
        assert Pattern.GHOST_CITATIONS in self._flags_for(content)

    def test_ghost_citation_from_unverified_majority(self):
        content = (
            "## Introduction\n\nResults build on [1][2][3][4].\n\n"
            "## References\n\n[1] A\n[2] B\n[3] C\n[4] D\n"
        )
        assert Pattern.GHOST_CITATIONS in self._flags_for(content, _report(1, 4))
        assert Pattern.GHOST_CITATIONS not in self._flags_for(content, _report(2, 4))

    def test_hollow_wordy_paper(self):
        sentence = "The horizon of meaning unfolds within the architecture of pure intent. "
        content = "## Introduction\n\n" + sentence * 160
        assert Pattern.SEMANTIC_HOLLOWNESS in self._flags_for(content)

    def test_cargo_cult_needs_all_seven_thin_sections(self):
        thin = "\n\n".join(f"## {s.title()}\n\nOne tiny line." for s in SECTION_NAMES)
        assert Pattern.CARGO_CULT_STRUCTURE in self._flags_for(thin)
        six = "\n\n".join(
            f"## {s.title()}\n\nOne tiny line." for s in SECTION_NAMES[:-1]
        )
        assert Pattern.CARGO_CULT_STRUCTURE not in self._flags_for(six)

    def test_corpus_adversarials_fire_their_target(self):
        for paper in corpus.adversarial_papers():
            signals = extract_signals(paper.content)
            flags = detect_patterns(
                _paper(paper.content, title=paper.title), signals, None
            )
            names = {f.pattern.value for f in flags}
            if paper.kind in (
                "ghost-citations",
                "citation-format-mimicry",
            ):
                continue  # these need the verification report, covered elsewhere
            assert paper.kind in names, f"{paper.filename}: {names}"

    def test_corpus_genuine_raise_nothing_structurally(self):
        for paper in corpus.genuine_papers():
            signals = extract_signals(paper.content)
            flags = detect_patterns(
                _paper(paper.content, title=paper.title), signals, _report(10, 10)
            )
            assert flags == [], f"{paper.filename}: {flags}"
