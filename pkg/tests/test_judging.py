import json
import time

import pytest

from clawpipe.engine import FIXTURES_DIR
from clawpipe.judging import (
    JUDGE_CONTENT_LIMIT,
    JudgeKind,
    JudgeRegistry,
    JudgeSpec,
    JudgeVerdict,
    ReplayJudgeClient,
    heuristic_judge,
    load_roster,
    run_ensemble,
    truncate_for_judge,
)
from clawpipe.model import GranularScores, PaperRecord


def _paper(content="word " * 100, **kw):
    return PaperRecord(id="p1", title="Some Paper", content=content, agent_id="a", **kw)


def _flat(value: float) -> GranularScores:
    return GranularScores.from_dims({d: value for d in GranularScores().dims()})


def _stub(name, value):
    def judge(paper, truncated):
        return JudgeVerdict(judge=name, scores=_flat(value))

    return judge


class TestTruncation:
    def test_short_unchanged(self):
        assert truncate_for_judge("short text") == "short text"

    def test_long_cut_to_limit(self):
        content = "x" * 20_000
        out = truncate_for_judge(content)
        assert len(out) == JUDGE_CONTENT_LIMIT
        assert out == content[:16_000]

    def test_exact_boundary_unchanged(self):
        content = "y" * 16_000
        assert truncate_for_judge(content) == content


class TestHeuristicJudge:
    def test_stub_golden(self, heuristic_golden):
        stub_content = (
            "This short note records a single observation about queue depth "
            "without any of the usual scaffolding such as sections or "
            "references, just thirty-odd plain words in a row here."
        )
        verdict = heuristic_judge(_paper(content=stub_content))
        assert verdict.scores.to_dict() == heuristic_golden["stub"]["scores"]
        assert all(v <= 3 for v in verdict.scores.dims().values())

    def test_full_fixture_golden(self, heuristic_golden, fixture_paper_text):
        verdict = heuristic_judge(_paper(content=fixture_paper_text))
        assert verdict.scores.to_dict() == heuristic_golden["full_fixture"]["scores"]
        assert all(v >= 5 for v in verdict.scores.dims().values())

    def test_deterministic(self, genuine_paper):
        p = _paper(content=genuine_paper.content)
        assert heuristic_judge(p) == heuristic_judge(p)


class TestRoster:
    def test_load_fixture_roster(self):
        roster = load_roster(FIXTURES_DIR / "judges.json")
        heuristics = [s for s in roster if s.kind is JudgeKind.HEURISTIC and s.enabled]
        assert len(heuristics) == 1

    def test_roster_requires_exactly_one_heuristic(self, tmp_path):
        path = tmp_path / "judges.json"
        path.write_text(json.dumps([
            {"name": "a", "kind": "REMOTE_LLM"},
        ]))
        with pytest.raises(ValueError):
            load_roster(path)


class TestEnsemble:
    def test_mean_of_two_judges(self):
        registry = JudgeRegistry()
        registry.register("j4", _stub("j4", 4.0))
        registry.register("j6", _stub("j6", 6.0))
        judges = [
            JudgeSpec("j4", JudgeKind.REMOTE_LLM),
            JudgeSpec("j6", JudgeKind.HEURISTIC),
        ]
        result = run_ensemble(_paper(), judges, registry=registry)
        assert result.judges_responded == 2
        assert result.mean_scores.novelty == pytest.approx(5.0)

    def test_timeout_excluded_from_mean(self):
        registry = JudgeRegistry()

        def slow(paper, truncated):
            time.sleep(0.5)
            return JudgeVerdict(judge="slow", scores=_flat(9.0))

        registry.register("slow", slow)
        registry.register("a", _stub("a", 4.0))
        registry.register("b", _stub("b", 6.0))
        judges = [
            JudgeSpec("slow", JudgeKind.REMOTE_LLM, timeout_ms=50),
            JudgeSpec("a", JudgeKind.REMOTE_LLM),
            JudgeSpec("b", JudgeKind.HEURISTIC),
        ]
        result = run_ensemble(_paper(), judges, deadline_ms=2_000, registry=registry)
        assert result.judges_responded == 2
        invalid = [v for v in result.verdicts if not v.valid]
        assert [v.judge for v in invalid] == ["slow"]
        assert result.mean_scores.novelty == pytest.approx(5.0)

    def test_all_remotes_fail_heuristic_carries(self, genuine_paper):
        registry = JudgeRegistry()

        def broken(paper, truncated):
            raise RuntimeError("provider down")

        registry.register("r1", broken)
        registry.register("r2", broken)
        judges = [
            JudgeSpec("r1", JudgeKind.REMOTE_LLM),
            JudgeSpec("r2", JudgeKind.REMOTE_LLM),
            JudgeSpec("heuristic", JudgeKind.HEURISTIC),
        ]
        paper = _paper(content=genuine_paper.content)
        result = run_ensemble(paper, judges, registry=registry)
        assert result.judges_responded == 1
        expected = heuristic_judge(paper)
        assert result.mean_scores == expected.scores

    def test_disabled_judges_not_invoked(self):
        registry = JudgeRegistry()
        calls = []

        def tracking(paper, truncated):
            calls.append(1)
            return JudgeVerdict(judge="t", scores=_flat(5.0))

        registry.register("t", tracking)
        judges = [
            JudgeSpec("t", JudgeKind.REMOTE_LLM, enabled=False),
            JudgeSpec("heuristic", JudgeKind.HEURISTIC),
        ]
        result = run_ensemble(_paper(), judges, registry=registry)
        assert not calls
        assert result.judges_responded == 1

    def test_mean_within_contributing_range(self):
        registry = JudgeRegistry()
        registry.register("a", _stub("a", 2.0))
        registry.register("b", _stub("b", 8.0))
        registry.register("c", _stub("c", 5.0))
        judges = [
            JudgeSpec("a", JudgeKind.REMOTE_LLM),
            JudgeSpec("b", JudgeKind.REMOTE_LLM),
            JudgeSpec("c", JudgeKind.HEURISTIC),
        ]
        result = run_ensemble(_paper(), judges, registry=registry)
        for dim, value in result.mean_scores.dims().items():
            assert 2.0 <= value <= 8.0

    def test_judges_must_be_nonempty(self):
        with pytest.raises(ValueError):
            run_ensemble(_paper(), [])

    def test_never_zero_valid_verdicts(self):
        registry = JudgeRegistry()

        def broken(paper, truncated):
            raise RuntimeError("down")

        registry.register("only", broken)
        judges = [JudgeSpec("only", JudgeKind.REMOTE_LLM)]
        result = run_ensemble(_paper(), judges, registry=registry)
        assert result.judges_responded >= 1


class TestReplayClient:
    def test_replay_fixture_round_trip(self, tmp_path):
        fixture_dir = tmp_path / "replay"
        (fixture_dir / "judge-x").mkdir(parents=True)
        scores = _flat(7.0).to_dict()
        (fixture_dir / "judge-x" / "p1.json").write_text(
            json.dumps({"scores": scores, "red_flags": 1})
        )
        client = ReplayJudgeClient(fixture_dir)
        verdict = client.judge_fn("judge-x")(_paper(), "content")
        assert verdict.valid
        assert verdict.scores.novelty == 7.0
        assert verdict.red_flags == 1

    def test_missing_fixture_becomes_invalid_verdict(self, tmp_path):
        registry = JudgeRegistry(ReplayJudgeClient(tmp_path))
        judges = [
            JudgeSpec("ghost-judge", JudgeKind.REMOTE_LLM),
            JudgeSpec("heuristic", JudgeKind.HEURISTIC),
        ]
        result = run_ensemble(_paper(), judges, registry=registry)
        ghost = [v for v in result.verdicts if v.judge == "ghost-judge"]
        assert not ghost[0].valid
