"""Publication lifecycle: structural tier-1 verification with proof hashing,
Ed25519 record signing, commit-reveal proof submission, proof-of-work
anti-Sybil checks, peer-validation counting, the monotone status state
machine, the podium, and the leaderboard.

Status is a rank, not a location: a paper that leaves the top-3 keeps its
highest attained status, and no event sequence ever lowers it.
"""

from __future__ import annotations

import enum
import hashlib
import re
import threading
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives.asymmetric.ed25519 import (
    Ed25519PrivateKey,
    Ed25519PublicKey,
)

from .clock import Clock, HOUR_MS
from .errors import (
    DuplicateValidator,
    HashMismatch,
    IllegalTransition,
    InvalidKey,
    ProofCheckFailed,
    RevealTimeout,
    SelfValidation,
)
from .model import PaperRecord, Status, Tier

COMMIT_BUDGET_MS = 10_000
REVEAL_BUDGET_MS = 180_000
VALIDATION_QUORUM = 2
VALIDATION_WINDOW_MS = 48 * HOUR_MS
PROMOTION_SCORE = 7.0
ARCHIVE_SCORE = 8.5


def proof_hash(lean_proof: str, content: str) -> str:
    """SHA-256 over the byte concatenation proof-then-content, hex encoded."""
    data = lean_proof.encode("utf-8") + content.encode("utf-8")
    return hashlib.sha256(data).hexdigest()


class AgentKeys:
    """Ed25519 signing keypair: 32-byte public key, 64-byte signatures."""

    def __init__(self, private_key: Ed25519PrivateKey):
        self._private = private_key
        self.public_bytes = private_key.public_key().public_bytes_raw()

    @classmethod
    def generate(cls) -> "AgentKeys":
        return cls(Ed25519PrivateKey.generate())

    @classmethod
    def from_seed(cls, seed: bytes) -> "AgentKeys":
        if len(seed) != 32:
            raise InvalidKey("Ed25519 seed must be 32 bytes")
        return cls(Ed25519PrivateKey.from_private_bytes(seed))

    def sign(self, message: bytes) -> bytes:
        return self._private.sign(message)

    @staticmethod
    def verify(public_bytes: bytes, signature: bytes, message: bytes) -> bool:
        try:
            Ed25519PublicKey.from_public_bytes(public_bytes).verify(
                signature, message
            )
            return True
        except (InvalidSignature, ValueError):
            return False


def _record_digest(content: str, tier1_proof: Optional[str]) -> bytes:
    """SHA-256(content || proof_hash), the message the signature covers."""
    data = content.encode("utf-8") + (tier1_proof or "").encode("utf-8")
    return hashlib.sha256(data).digest()


def sign_record(paper: PaperRecord, keys: AgentKeys) -> str:
    return keys.sign(_record_digest(paper.content, paper.tier1_proof)).hex()


def verify_record(paper: PaperRecord, public_bytes: bytes) -> bool:
    if not paper.signature:
        return False
    try:
        signature = bytes.fromhex(paper.signature)
    except ValueError:
        return False
    return AgentKeys.verify(
        public_bytes, signature, _record_digest(paper.content, paper.tier1_proof)
    )


# --- tier-1 structural verification -----------------------------------------

_NEGATION_WORDS = frozenset({"not", "never", "no", "cannot", "nothing"})
_AUX_WORDS = frozenset({"does", "do", "did", "is", "are", "was", "were"})
_WORD_RE = re.compile(r"[a-z0-9]+")
_SENTENCE_RE = re.compile(r"[.!?]+")


def _norm_words(text: str) -> list[str]:
    return _WORD_RE.findall(text.lower())


def _claim_grounded(claim: str, content_norm: str) -> bool:
    words = _norm_words(claim)
    return bool(words) and " ".join(words) in content_norm


def _negation_key(claim: str) -> tuple[str, int]:
    words = _norm_words(claim)
    neg = sum(1 for w in words if w in _NEGATION_WORDS)
    kept = [w.rstrip("s") for w in words if w not in _NEGATION_WORDS and w not in _AUX_WORDS]
    return " ".join(kept), neg % 2


def _has_contradiction(claims: Sequence[str]) -> bool:
    seen: dict[str, set[int]] = {}
    for claim in claims:
        key, parity = _negation_key(claim)
        seen.setdefault(key, set()).add(parity)
    return any(len(p) == 2 for p in seen.values())


def occam_score(claims: Sequence[str], content: str) -> float:
    """Explanation economy: distinct claims per sentence, capped at 1.

    The exact formula is a deployment choice; this default rewards papers
    that state much in little prose.
    """
    sentences = [s for s in _SENTENCE_RE.split(content) if s.strip()]
    if not sentences:
        return 0.0
    distinct = len({" ".join(_norm_words(c)) for c in claims if c.strip()})
    return min(1.0, distinct / len(sentences))


@dataclass(frozen=True)
class Tier1Result:
    verified: bool
    proof_hash: str
    occam_score: float


def tier1_verify(paper: PaperRecord) -> Tier1Result:
    """Fast in-process consistency check (< 5 ms for judge-sized papers).

    Verified requires nonempty claims, each claim textually grounded in the
    content, and no exact-negation claim pair. Unverified is a value, not an
    error.
    """
    h = proof_hash(paper.lean_proof or "", paper.content)
    score = occam_score(paper.claims, paper.content)
    if not paper.claims:
        return Tier1Result(False, h, score)
    content_norm = " ".join(_norm_words(paper.content))
    grounded = all(_claim_grounded(c, content_norm) for c in paper.claims)
    consistent = not _has_contradiction(paper.claims)
    return Tier1Result(grounded and consistent, h, score)


def attach_tier1(paper: PaperRecord, result: Tier1Result) -> None:
    paper.occam_score = result.occam_score
    if result.verified:
        paper.tier = Tier.TIER1_VERIFIED
        paper.tier1_proof = result.proof_hash
    else:
        paper.tier = Tier.UNVERIFIED
        paper.tier1_proof = None


# --- commit-reveal proof protocol --------------------------------------------


@dataclass(frozen=True)
class Cab:
    """Certificate of Authenticity and Bounds, issued on successful reveal."""

    cab_id: str
    proof_digest: str
    issued_at: int
    checks: tuple[str, ...]


def default_proof_check(lean_proof: str) -> list[str]:
    """Schema and hygiene checks only; full proof compilation is pluggable."""
    if not lean_proof.strip():
        raise ProofCheckFailed("empty proof")
    if any(ord(c) < 9 for c in lean_proof):
        raise ProofCheckFailed("control characters in proof source")
    if not re.search(r"\b(theorem|lemma|def|example|instance)\b", lean_proof):
        raise ProofCheckFailed("no declaration found in proof source")
    return ["schema", "hygiene"]


class CommitRevealProtocol:
    """Two-phase anti-tampering: hash commitment, then bounded reveal."""

    def __init__(
        self,
        clock: Clock,
        proof_check: Callable[[str], list[str]] = default_proof_check,
        reveal_budget_ms: int = REVEAL_BUDGET_MS,
    ):
        self.clock = clock
        self.proof_check = proof_check
        self.reveal_budget_ms = reveal_budget_ms
        self._commits: dict[str, int] = {}
        self._lock = threading.Lock()

    def commit(self, lean_proof: str) -> str:
        digest = hashlib.sha256(lean_proof.encode("utf-8")).hexdigest()
        with self._lock:
            self._commits.setdefault(digest, self.clock.now_ms())
        return digest

    def reveal(self, lean_proof: str, committed_digest: str) -> Cab:
        digest = hashlib.sha256(lean_proof.encode("utf-8")).hexdigest()
        if digest != committed_digest:
            raise HashMismatch("revealed proof does not match the commitment")
        with self._lock:
            committed_at = self._commits.get(committed_digest)
        if committed_at is None:
            raise HashMismatch("no such commitment")
        now = self.clock.now_ms()
        if now - committed_at > self.reveal_budget_ms:
            raise RevealTimeout(f"reveal after {now - committed_at} ms")
        checks = self.proof_check(lean_proof)
        return Cab(
            cab_id=f"cab-{digest[:12]}",
            proof_digest=digest,
            issued_at=now,
            checks=tuple(checks),
        )


# --- proof-of-work anti-Sybil -------------------------------------------------


def _leading_zero_bits(digest: bytes) -> int:
    bits = 0
    for byte in digest:
        if byte == 0:
            bits += 8
            continue
        for shift in range(7, -1, -1):
            if byte >> shift & 1:
                return bits
            bits += 1
    return bits


def pow_check(agent_id: str, nonce: str, difficulty: int) -> bool:
    """True iff SHA-256(agent_id || nonce) has >= difficulty leading zero bits."""
    digest = hashlib.sha256((agent_id + nonce).encode("utf-8")).digest()
    return _leading_zero_bits(digest) >= difficulty


def pow_solve(agent_id: str, difficulty: int, max_iterations: int = 1_000_000) -> str:
    for i in range(max_iterations):
        nonce = str(i)
        if pow_check(agent_id, nonce, difficulty):
            return nonce
    raise ValueError(f"no nonce found within {max_iterations} iterations")


# --- peer validation ledger ----------------------------------------------------


class EventKind(str, enum.Enum):
    PROMOTE_TO_VERIFIED = "PROMOTE_TO_VERIFIED"
    SCORE_FINALIZED = "SCORE_FINALIZED"
    PODIUM_ENTER = "PODIUM_ENTER"
    PODIUM_EXIT = "PODIUM_EXIT"
    CANONICALIZE = "CANONICALIZE"


@dataclass(frozen=True)
class StatusEvent:
    kind: EventKind
    overall: Optional[float] = None


@dataclass
class _PaperValidations:
    stamps: dict[str, int] = field(default_factory=dict)  # validator -> ts
    has_full_reverification: bool = False


class ValidationLedger:
    """Distinct-validator counting with the 48-hour quorum window."""

    def __init__(self, clock: Clock, quorum: int = VALIDATION_QUORUM):
        self.clock = clock
        self.quorum = quorum
        self._papers: dict[str, _PaperValidations] = {}
        self._lock = threading.Lock()

    def count(self, paper_id: str, now_ms: Optional[int] = None) -> int:
        now = self.clock.now_ms() if now_ms is None else now_ms
        with self._lock:
            entry = self._papers.get(paper_id)
            if entry is None:
                return 0
            return sum(1 for t in entry.stamps.values() if now - t <= VALIDATION_WINDOW_MS)

    def record_validation(
        self,
        paper: PaperRecord,
        validator_id: str,
        full_reverification: bool = False,
    ) -> Optional[StatusEvent]:
        """Record a distinct validator; emit the promotion event at quorum.

        TIER1 papers additionally require at least one full re-verification
        before the event fires.
        """
        if validator_id == paper.agent_id:
            raise SelfValidation(validator_id)
        now = self.clock.now_ms()
        with self._lock:
            entry = self._papers.setdefault(paper.id, _PaperValidations())
            if validator_id in entry.stamps:
                raise DuplicateValidator(validator_id)
            entry.stamps[validator_id] = now
            if full_reverification:
                entry.has_full_reverification = True
            live = sum(
                1 for t in entry.stamps.values() if now - t <= VALIDATION_WINDOW_MS
            )
            tier1_ok = (
                paper.tier is not Tier.TIER1_VERIFIED or entry.has_full_reverification
            )
            if live >= self.quorum and tier1_ok:
                return StatusEvent(EventKind.PROMOTE_TO_VERIFIED)
            return None


# --- monotone status state machine ---------------------------------------------


def advance_status(
    paper: PaperRecord,
    event: StatusEvent,
    *,
    archive_flagged: bool = False,
    has_full_reverification: bool = False,
) -> Status:
    """Apply one event; the returned status is never below the current one.

    Events that do not apply yet (a score below threshold, a promotion the
    paper already holds) are no-ops; impossible forward skips raise
    IllegalTransition.
    """
    current = paper.status
    kind = event.kind
    if kind is EventKind.PROMOTE_TO_VERIFIED:
        return max(current, Status.VERIFIED)
    if kind is EventKind.SCORE_FINALIZED:
        if event.overall is None:
            raise IllegalTransition("SCORE_FINALIZED without a score")
        if current is Status.VERIFIED and event.overall >= PROMOTION_SCORE:
            return Status.PROMOTED
        return current
    if kind is EventKind.PODIUM_ENTER:
        if current < Status.PROMOTED:
            raise IllegalTransition(f"PODIUM_ENTER from {current.name}")
        return max(current, Status.PODIUM)
    if kind is EventKind.PODIUM_EXIT:
        return current  # attained rank is kept
    if kind is EventKind.CANONICALIZE:
        if current < Status.PODIUM:
            raise IllegalTransition(f"CANONICALIZE from {current.name}")
        if not (archive_flagged and has_full_reverification):
            raise IllegalTransition("CANONICALIZE requires archive + reverification")
        return Status.CANONICAL
    raise IllegalTransition(str(kind))


def archive_flag(overall: float) -> bool:
    """Archival (content-addressed pinning) is flagged at overall >= 8.5."""
    return overall >= ARCHIVE_SCORE


# --- podium ---------------------------------------------------------------------


@dataclass(frozen=True)
class PodiumSlot:
    paper_id: str
    overall: float


class Podium:
    """Top-3 by calibrated overall; incumbents yield only to strictly higher
    scores."""

    def __init__(self):
        self._slots: list[PodiumSlot] = []
        self._lock = threading.Lock()

    def update(self, paper_id: str, overall: float) -> bool:
        """Insert or raise one paper; True when the podium changed."""
        with self._lock:
            before = list(self._slots)
            existing = next(
                (s for s in self._slots if s.paper_id == paper_id), None
            )
            if existing is not None and overall <= existing.overall:
                return False  # a held slot is never lowered or reshuffled
            slots = [s for s in self._slots if s.paper_id != paper_id]
            # insert below every incumbent with score >= ours (ties keep rank)
            idx = 0
            while idx < len(slots) and slots[idx].overall >= overall:
                idx += 1
            slots.insert(idx, PodiumSlot(paper_id, overall))
            self._slots = slots[:3]
            return self._slots != before

    def slots(self) -> list[PodiumSlot]:
        with self._lock:
            return list(self._slots)

    def snapshot(self) -> dict[str, Optional[dict]]:
        slots = self.slots()
        names = ("gold", "silver", "bronze")
        out: dict[str, Optional[dict]] = {}
        for i, name in enumerate(names):
            out[name] = (
                {"paper_id": slots[i].paper_id, "overall": slots[i].overall}
                if i < len(slots)
                else None
            )
        return out

    def contains(self, paper_id: str) -> bool:
        return any(s.paper_id == paper_id for s in self.slots())


# --- leaderboard -----------------------------------------------------------------


@dataclass(frozen=True)
class LeaderboardRow:
    agent_id: str
    paper_count: int
    avg_overall: float


def leaderboard(papers: Sequence[PaperRecord]) -> list[LeaderboardRow]:
    """Agents ranked by average calibrated overall, then paper count, then id."""
    by_agent: dict[str, list[float]] = {}
    for p in papers:
        if p.granular_scores is not None:
            by_agent.setdefault(p.agent_id, []).append(p.granular_scores.overall)
    rows = [
        LeaderboardRow(agent, len(scores), sum(scores) / len(scores))
        for agent, scores in by_agent.items()
    ]
    rows.sort(key=lambda r: (-r.avg_overall, -r.paper_count, r.agent_id))
    return rows
