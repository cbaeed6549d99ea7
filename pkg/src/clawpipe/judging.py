"""Judge ensemble: pluggable scorers run in parallel under a deadline.

Remote LLM judges are an interface backed by a record/replay fixture client;
provider adapters are out of scope. The deterministic heuristic judge is
always in the roster and guarantees that scoring never blocks: a verdict
exists even when every remote judge fails or misses the deadline.
"""

from __future__ import annotations

import enum
import json
import time
from concurrent.futures import ThreadPoolExecutor, TimeoutError as FutureTimeout
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Sequence

from .model import GranularScores, PaperRecord, detect_sections
from .signals import extract_signals
from .calibration import depth_score

JUDGE_CONTENT_LIMIT = 16_000  # characters submitted to each judge
DEFAULT_DEADLINE_MS = 30_000


class JudgeKind(str, enum.Enum):
    REMOTE_LLM = "REMOTE_LLM"
    HEURISTIC = "HEURISTIC"


@dataclass(frozen=True)
class JudgeSpec:
    name: str
    kind: JudgeKind
    timeout_ms: int = 20_000
    enabled: bool = True


@dataclass(frozen=True)
class JudgeVerdict:
    judge: str
    scores: Optional[GranularScores]
    red_flags: int = 0
    valid: bool = True
    error: Optional[str] = None

    def __post_init__(self):
        if not self.valid and self.scores is not None:
            raise ValueError("invalid verdicts carry no scores")
        if self.valid and self.scores is None:
            raise ValueError("valid verdicts carry scores")


@dataclass(frozen=True)
class EnsembleResult:
    verdicts: tuple[JudgeVerdict, ...]
    mean_scores: GranularScores
    judges_responded: int


JudgeFn = Callable[[PaperRecord, str], JudgeVerdict]


def truncate_for_judge(content: str) -> str:
    """First 16,000 characters; shorter content passes through unchanged."""
    return content[:JUDGE_CONTENT_LIMIT]


def load_roster(path: str | Path) -> list[JudgeSpec]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    roster = [
        JudgeSpec(
            name=item["name"],
            kind=JudgeKind(item["kind"]),
            timeout_ms=int(item.get("timeout_ms", 20_000)),
            enabled=bool(item.get("enabled", True)),
        )
        for item in data
    ]
    heuristics = [s for s in roster if s.kind is JudgeKind.HEURISTIC and s.enabled]
    if len(heuristics) != 1:
        raise ValueError("roster must enable exactly one heuristic judge")
    return roster


def heuristic_judge(paper: PaperRecord, truncated: Optional[str] = None) -> JudgeVerdict:
    """Deterministic structural scorer: identical input, identical verdict.

    Dimensions are a linear map of the depth-score signals; the exact vectors
    are pinned by golden-file tests.
    """
    content = paper.content if truncated is None else truncated
    sig = extract_signals(content)
    d = depth_score(sig)
    detected = detect_sections(content)

    def clamp(v: float) -> float:
        return max(0.0, min(10.0, v))

    dims: dict[str, float] = {}
    for section in (
        "abstract",
        "introduction",
        "methodology",
        "results",
        "discussion",
        "conclusion",
        "references",
    ):
        dims[section] = clamp((2.0 if section in detected else 0.0) + 0.45 * d)
    dims["novelty"] = clamp(1.0 + 0.5 * d)
    dims["reproducibility"] = clamp(
        (2.0 if sig.has_code else 0.0) + (1.0 if sig.has_stats else 0.0) + 0.3 * d
    )
    dims["citation_quality"] = clamp(
        6.0 * min(1.0, sig.n_unique_refs / 8.0)
        + (2.0 if sig.has_doi else 0.0)
        + (2.0 if sig.has_real_authors else 0.0)
    )
    red_flags = sum(
        (
            sig.extraordinary_claims > 2 and sig.evidence_markers < 3,
            sig.placeholder_refs,
            sig.low_vocab_penalty,
        )
    )
    return JudgeVerdict(
        judge="heuristic",
        scores=GranularScores.from_dims(dims),
        red_flags=red_flags,
    )


class ReplayJudgeClient:
    """Record/replay client for remote judges.

    Fixtures are JSON files keyed by (judge name, paper id); a missing fixture
    behaves like a provider failure and yields an invalid verdict upstream.
    """

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)

    def judge_fn(self, name: str) -> JudgeFn:
        def run(paper: PaperRecord, truncated: str) -> JudgeVerdict:
            path = self.directory / name / f"{paper.id}.json"
            data = json.loads(path.read_text(encoding="utf-8"))
            return JudgeVerdict(
                judge=name,
                scores=GranularScores.from_dims(data["scores"]),
                red_flags=int(data.get("red_flags", 0)),
            )

        return run


class JudgeRegistry:
    """Name -> callable resolution for the roster."""

    def __init__(self, replay: Optional[ReplayJudgeClient] = None):
        self._fns: dict[str, JudgeFn] = {}
        self._replay = replay

    def register(self, name: str, fn: JudgeFn) -> None:
        self._fns[name] = fn

    def resolve(self, spec: JudgeSpec) -> JudgeFn:
        if spec.name in self._fns:
            return self._fns[spec.name]
        if spec.kind is JudgeKind.HEURISTIC:
            return heuristic_judge
        if self._replay is not None:
            return self._replay.judge_fn(spec.name)

        def unavailable(paper: PaperRecord, truncated: str) -> JudgeVerdict:
            raise RuntimeError(f"no client configured for judge {spec.name}")

        return unavailable


def _mean_scores(verdicts: Sequence[JudgeVerdict]) -> GranularScores:
    valid = [v for v in verdicts if v.valid and v.scores is not None]
    dims = {
        d: sum(v.scores.dims()[d] for v in valid) / len(valid)
        for d in valid[0].scores.dims()
    }
    return GranularScores.from_dims(dims)


def run_ensemble(
    paper: PaperRecord,
    judges: Sequence[JudgeSpec],
    deadline_ms: int = DEFAULT_DEADLINE_MS,
    registry: Optional[JudgeRegistry] = None,
) -> EnsembleResult:
    """Fan out to every enabled judge, join under the deadline, average.

    Verdicts that miss the deadline or raise are recorded as invalid and
    excluded from the mean. The heuristic verdict is always present, so the
    result never has zero valid verdicts.
    """
    if not judges:
        raise ValueError("judges must be nonempty")
    registry = registry or JudgeRegistry()
    enabled = [s for s in judges if s.enabled]
    truncated = truncate_for_judge(paper.content)

    verdicts: list[JudgeVerdict] = []
    start = time.monotonic()
    with ThreadPoolExecutor(max_workers=max(1, len(enabled))) as pool:
        futures = [
            (spec, pool.submit(registry.resolve(spec), paper, truncated))
            for spec in enabled
        ]
        for spec, future in futures:
            remaining_s = max(0.0, deadline_ms / 1000.0 - (time.monotonic() - start))
            budget_s = min(spec.timeout_ms / 1000.0, remaining_s)
            try:
                verdicts.append(future.result(timeout=budget_s))
            except FutureTimeout:
                future.cancel()
                verdicts.append(
                    JudgeVerdict(spec.name, None, valid=False, error="deadline")
                )
            except Exception as exc:  # malformed fixture, provider failure, ...
                verdicts.append(
                    JudgeVerdict(spec.name, None, valid=False, error=str(exc))
                )

    if not any(v.valid for v in verdicts):
        # contract: the deterministic fallback never blocks scoring
        verdicts.append(heuristic_judge(paper, truncated))

    valid_count = sum(1 for v in verdicts if v.valid)
    return EnsembleResult(
        verdicts=tuple(verdicts),
        mean_scores=_mean_scores(verdicts),
        judges_responded=valid_count,
    )
