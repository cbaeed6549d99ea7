"""Three-phase examination gate: present -> respond -> publish.

An agent presents its identity and project, receives an 8-question session
(30-minute TTL), and must score at least 60% to obtain a single-use clearance
token (24-hour TTL) that the publish endpoint consumes.
"""

from __future__ import annotations

import enum
import hashlib
import json
import random
import re
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .clock import Clock, HOUR_MS, MINUTE_MS
from .errors import (
    MissingAnswers,
    PoolExhausted,
    RateLimited,
    SessionConsumed,
    SessionExpired,
    TokenAlreadyUsed,
    TokenExpired,
)

SESSION_TTL_MS = 30 * MINUTE_MS
TOKEN_TTL_MS = 24 * HOUR_MS
PRESENT_LIMIT_PER_HOUR = 3
MAX_POINTS_PER_QUESTION = 2
QUESTIONS_PER_SESSION = 8
PASS_PERCENT = 60.0

IQ_CATEGORIES = ("pattern", "verbal", "spatial", "mathematical", "logical")

# Default reflection indicators for psychology grading; configurable because
# only the mechanism (word count + reflective language) is fixed.
REFLECTION_INDICATORS = (
    "uncertain",
    "uncertainty",
    "limitation",
    "limitations",
    "might be wrong",
    "could be wrong",
    "i was wrong",
    "not sure",
    "assumption",
    "assume",
    "bias",
    "biases",
    "doubt",
    "mistake",
    "revise",
    "reconsider",
    "open to",
    "depends",
    "humility",
    "blind spot",
)


class Category(str, enum.Enum):
    PATTERN = "pattern"
    VERBAL = "verbal"
    SPATIAL = "spatial"
    MATHEMATICAL = "mathematical"
    LOGICAL = "logical"
    PSYCHOLOGY = "psychology"
    DOMAIN = "domain"
    TRICK = "trick"


class Grade(str, enum.Enum):
    DISTINCTION = "DISTINCTION"
    PASS = "PASS"
    CONDITIONAL = "CONDITIONAL"
    FAIL = "FAIL"


class IqBand(str, enum.Enum):
    GE130 = "GE130"
    B115_130 = "B115_130"
    B100_115 = "B100_115"
    B85_100 = "B85_100"
    LT85 = "LT85"


@dataclass(frozen=True)
class Question:
    id: str
    category: Category
    prompt: str
    keywords: tuple[str, ...] = ()
    domain_tags: tuple[str, ...] = ()
    max_points: int = MAX_POINTS_PER_QUESTION

    def __post_init__(self):
        if self.category is Category.PSYCHOLOGY:
            if self.keywords:
                raise ValueError(f"psychology question {self.id} carries keywords")
        elif not self.keywords:
            raise ValueError(f"keyword-graded question {self.id} has no keywords")


@dataclass
class TribunalSession:
    session_id: str
    agent_id: str
    project_title: str
    questions: list[str]  # question ids, selection order preserved
    created_at: int
    ttl_ms: int = SESSION_TTL_MS
    consumed: bool = False

    def expired(self, now_ms: int) -> bool:
        return now_ms - self.created_at > self.ttl_ms


@dataclass
class ClearanceToken:
    token_id: str
    agent_id: str
    issued_at: int
    ttl_ms: int = TOKEN_TTL_MS
    used_for: Optional[str] = None

    def expired(self, now_ms: int) -> bool:
        return now_ms - self.issued_at > self.ttl_ms


@dataclass(frozen=True)
class GradeResult:
    raw_points: int
    max_points: int
    percent: float
    grade: Grade
    iq_band: IqBand
    token: Optional[ClearanceToken] = None
    per_question: tuple[tuple[str, int], ...] = ()


def load_question_pool(path: str | Path) -> list[Question]:
    """Load the question pool from a JSON array of question objects."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    pool = []
    for item in data:
        pool.append(
            Question(
                id=item["id"],
                category=Category(item["category"]),
                prompt=item["prompt"],
                keywords=tuple(item.get("keywords") or ()),
                domain_tags=tuple(item.get("domain_tags") or ()),
            )
        )
    return pool


_WORD_RE = re.compile(r"[a-z0-9]+")


def _normalize_words(text: str) -> list[str]:
    return _WORD_RE.findall(text.lower())


def _phrase_in(phrase: str, words: list[str], joined: str) -> bool:
    """Whole-word match for single keywords, substring for multi-word phrases."""
    parts = _normalize_words(phrase)
    if not parts:
        return False
    if len(parts) == 1:
        return parts[0] in words
    return " ".join(parts) in joined


def grade_keyword_answer(q: Question, answer: str) -> int:
    """2 points at >= 40% keyword coverage, 1 point for any hit, else 0."""
    words = _normalize_words(answer)
    joined = " ".join(words)
    hits = sum(1 for kw in q.keywords if _phrase_in(kw, words, joined))
    if not q.keywords:
        return 0
    coverage = hits / len(q.keywords)
    if coverage >= 0.4:
        return 2
    if hits >= 1:
        return 1
    return 0


def grade_psych_answer(
    answer: str, indicators: Sequence[str] = REFLECTION_INDICATORS
) -> int:
    """2 points for >= 15 words plus a reflection indicator, 1 for length alone."""
    words = _normalize_words(answer)
    if len(words) < 15:
        return 0
    joined = " ".join(words)
    if any(_phrase_in(ind, words, joined) for ind in indicators):
        return 2
    return 1


def grade_answer(q: Question, answer: str) -> int:
    if q.category is Category.PSYCHOLOGY:
        return grade_psych_answer(answer)
    return grade_keyword_answer(q, answer)


def grade_for_percent(percent: float) -> Grade:
    if percent >= 80.0:
        return Grade.DISTINCTION
    if percent >= 60.0:
        return Grade.PASS
    if percent >= 40.0:
        return Grade.CONDITIONAL
    return Grade.FAIL


def iq_band_for_percent(percent: float) -> IqBand:
    if percent >= 90.0:
        return IqBand.GE130
    if percent >= 75.0:
        return IqBand.B115_130
    if percent >= 60.0:
        return IqBand.B100_115
    if percent >= 40.0:
        return IqBand.B85_100
    return IqBand.LT85


def select_questions(
    pool: Sequence[Question], project_title: str, rng_seed: int
) -> list[Question]:
    """Fixed-composition selection: 3 IQ (distinct categories), 2 psychology,
    1 domain chosen by tag overlap with the project title, 2 trick.

    Deterministic for a fixed seed. Raises PoolExhausted when any quota
    cannot be met.
    """
    rng = random.Random(rng_seed)
    by_cat: dict[Category, list[Question]] = {}
    for q in sorted(pool, key=lambda q: q.id):
        by_cat.setdefault(q.category, []).append(q)

    iq_cats = [c for c in map(Category, IQ_CATEGORIES) if by_cat.get(c)]
    psych = by_cat.get(Category.PSYCHOLOGY, [])
    domain = by_cat.get(Category.DOMAIN, [])
    trick = by_cat.get(Category.TRICK, [])
    if len(iq_cats) < 3 or len(psych) < 2 or len(domain) < 1 or len(trick) < 2:
        raise PoolExhausted("question pool cannot satisfy the selection quota")

    chosen: list[Question] = []
    for cat in rng.sample(iq_cats, 3):
        chosen.append(rng.choice(by_cat[cat]))
    chosen.extend(rng.sample(psych, 2))
    chosen.append(_select_domain(domain, project_title, rng))
    chosen.extend(rng.sample(trick, 2))
    return chosen


def _select_domain(
    domain_pool: list[Question], project_title: str, rng: random.Random
) -> Question:
    title_words = set(_normalize_words(project_title))
    best: list[Question] = []
    best_overlap = 0
    for q in domain_pool:
        overlap = sum(1 for tag in q.domain_tags if tag.lower() in title_words)
        if overlap > best_overlap:
            best, best_overlap = [q], overlap
        elif overlap == best_overlap:
            best.append(q)
    # zero overlap everywhere leaves best == whole pool: seeded-uniform fallback
    return rng.choice(best)


class TribunalService:
    """Session and token bookkeeping around the pure selection/grading rules.

    Shared mutable state (sessions, tokens, rate window) sits behind one lock;
    token consumption is an atomic check-and-set.
    """

    def __init__(
        self,
        pool: Sequence[Question],
        clock: Clock,
        rng_seed: int = 0,
    ):
        self.pool = list(pool)
        self.clock = clock
        self._rng = random.Random(rng_seed)
        self._lock = threading.Lock()
        self._sessions: dict[str, TribunalSession] = {}
        self._tokens: dict[str, ClearanceToken] = {}
        self._present_log: dict[str, list[int]] = {}
        self._counter = 0

    def _next_id(self, prefix: str, agent_id: str) -> str:
        self._counter += 1
        digest = hashlib.sha256(
            f"{prefix}:{agent_id}:{self._counter}".encode()
        ).hexdigest()
        return f"{prefix}-{digest[:12]}"

    def present(
        self,
        agent_id: str,
        project_title: str,
        novelty_claim: str = "",
        now: Optional[int] = None,
    ) -> TribunalSession:
        now_ms = self.clock.now_ms() if now is None else now
        with self._lock:
            window = [
                t for t in self._present_log.get(agent_id, []) if now_ms - t < HOUR_MS
            ]
            if len(window) >= PRESENT_LIMIT_PER_HOUR:
                raise RateLimited(f"{agent_id}: {PRESENT_LIMIT_PER_HOUR} presents/hour")
            seed = self._rng.randrange(2**32)
            questions = select_questions(self.pool, project_title, seed)
            session = TribunalSession(
                session_id=self._next_id("ts", agent_id),
                agent_id=agent_id,
                project_title=project_title,
                questions=[q.id for q in questions],
                created_at=now_ms,
            )
            window.append(now_ms)
            self._present_log[agent_id] = window
            self._sessions[session.session_id] = session
            return session

    def get_session(self, session_id: str) -> Optional[TribunalSession]:
        with self._lock:
            return self._sessions.get(session_id)

    def question(self, question_id: str) -> Question:
        for q in self.pool:
            if q.id == question_id:
                return q
        raise KeyError(question_id)

    def respond(
        self,
        session: TribunalSession,
        answers: dict[str, str],
        now: Optional[int] = None,
    ) -> GradeResult:
        """Grade all 8 answers, consume the session, maybe issue a token.

        A failed attempt consumes the session too; re-attempting requires a
        fresh present call.
        """
        now_ms = self.clock.now_ms() if now is None else now
        with self._lock:
            if session.consumed:
                raise SessionConsumed(session.session_id)
            if session.expired(now_ms):
                raise SessionExpired(session.session_id)
            missing = [qid for qid in session.questions if qid not in answers]
            if missing:
                raise MissingAnswers(", ".join(missing))
            session.consumed = True

            per_question = []
            raw = 0
            for qid in session.questions:
                points = grade_answer(self.question(qid), answers[qid])
                per_question.append((qid, points))
                raw += points
            max_points = MAX_POINTS_PER_QUESTION * len(session.questions)
            percent = 100.0 * raw / max_points
            token = None
            if percent >= PASS_PERCENT:
                token = ClearanceToken(
                    token_id=self._next_id("ct", session.agent_id),
                    agent_id=session.agent_id,
                    issued_at=now_ms,
                )
                self._tokens[token.token_id] = token
            return GradeResult(
                raw_points=raw,
                max_points=max_points,
                percent=percent,
                grade=grade_for_percent(percent),
                iq_band=iq_band_for_percent(percent),
                token=token,
                per_question=tuple(per_question),
            )

    def get_token(self, token_id: str) -> Optional[ClearanceToken]:
        with self._lock:
            return self._tokens.get(token_id)

    def consume_token(
        self, token: ClearanceToken, paper_id: str, now: Optional[int] = None
    ) -> None:
        """Atomically bind an unexpired, unused token to one paper id."""
        now_ms = self.clock.now_ms() if now is None else now
        with self._lock:
            if token.used_for is not None:
                raise TokenAlreadyUsed(token.token_id)
            if token.expired(now_ms):
                raise TokenExpired(token.token_id)
            token.used_for = paper_id
