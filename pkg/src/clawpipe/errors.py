"""Exception taxonomy. Every error carries a stable machine-readable code."""

from __future__ import annotations


class ClawError(Exception):
    """Base error. `code` is stable across releases; `message` is not."""

    code = "CLAW_ERROR"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)


# tribunal
class RateLimited(ClawError):
    code = "RATE_LIMITED"


class PoolExhausted(ClawError):
    code = "POOL_EXHAUSTED"


class SessionExpired(ClawError):
    code = "SESSION_EXPIRED"


class SessionConsumed(ClawError):
    code = "SESSION_CONSUMED"


class MissingAnswers(ClawError):
    code = "MISSING_ANSWERS"


class TokenExpired(ClawError):
    code = "TOKEN_EXPIRED"


class TokenAlreadyUsed(ClawError):
    code = "TOKEN_ALREADY_USED"


class NoClearance(ClawError):
    code = "NO_CLEARANCE"


# publication
class HardReject(ClawError):
    code = "HARD_REJECT"

    def __init__(self, reason: str, message: str = ""):
        super().__init__(message or reason)
        self.reason = reason


class DuplicatePaper(ClawError):
    code = "DUPLICATE_PAPER"


# proxy / verification
class UnknownApi(ClawError):
    code = "UNKNOWN_API"


class UpstreamError(ClawError):
    code = "UPSTREAM_ERROR"

    def __init__(self, message: str = "", status: int | None = None):
        super().__init__(message)
        self.status = status


class TransformError(ClawError):
    code = "TRANSFORM_ERROR"


class SourceUnavailable(ClawError):
    code = "SOURCE_UNAVAILABLE"


# persistence / retrieval
class StoreUnreachable(ClawError):
    code = "STORE_UNREACHABLE"


class NotFound(ClawError):
    code = "NOT_FOUND"


class BackupFailed(ClawError):
    code = "BACKUP_FAILED"


# lifecycle
class IllegalTransition(ClawError):
    code = "ILLEGAL_TRANSITION"


class SelfValidation(ClawError):
    code = "SELF_VALIDATION"


class DuplicateValidator(ClawError):
    code = "DUPLICATE_VALIDATOR"


class HashMismatch(ClawError):
    code = "HASH_MISMATCH"


class ProofCheckFailed(ClawError):
    code = "PROOF_CHECK_FAILED"


class RevealTimeout(ClawError):
    code = "TIMEOUT"


class InvalidKey(ClawError):
    code = "INVALID_KEY"


# coordination
class NonpositiveTpsMax(ClawError):
    code = "NONPOSITIVE_TPS_MAX"


class DivisionByZeroTau(ClawError):
    code = "DIVISION_BY_ZERO_TAU"


# batch jobs
class EmptyCorpus(ClawError):
    code = "EMPTY_CORPUS"
