"""clawpipe: a self-contained paper-lifecycle engine.

Tribunal-gated publication, ensemble scoring with calibrated deception
detection, live/offline reference verification, a rate-limited scientific API
proxy, four-tier persistence with cascade retrieval, and a monotone
publication status state machine.
"""

from .calibration import (
    CalibrationConfig,
    DeceptionFlag,
    Pattern,
    Severity,
    apply_rules,
    deflate,
    depth_score,
    detect_patterns,
)
from .clock import Clock, ManualClock, SystemClock
from .coordination import ReputationState, TauInputs, reputation_update, tau_checkpoint
from .engine import (
    CorpusEvalResult,
    Engine,
    PublishRequest,
    PublishResult,
    RecoveryJob,
    ServiceConfig,
    derive_paper_id,
)
from .judging import (
    EnsembleResult,
    JudgeKind,
    JudgeSpec,
    JudgeVerdict,
    heuristic_judge,
    run_ensemble,
    truncate_for_judge,
)
from .lifecycle import (
    AgentKeys,
    Cab,
    CommitRevealProtocol,
    EventKind,
    Podium,
    StatusEvent,
    ValidationLedger,
    advance_status,
    archive_flag,
    leaderboard,
    pow_check,
    proof_hash,
    sign_record,
    tier1_verify,
    verify_record,
)
from .model import (
    GranularScores,
    PaperRecord,
    Status,
    Tier,
    ValidationReport,
    detect_sections,
    soft_validate,
    word_count,
)
from .persistence import (
    BackupStore,
    GraphStore,
    MemoryStore,
    ObjectStore,
    TierSet,
    boot_restore,
    put_all,
)
from .refverify import (
    BiblioClientSet,
    CitationEntry,
    VerificationReport,
    extract_references,
    verification_report,
    verify_reference,
)
from .retrieval import Cascade, CascadeConfig
from .sciproxy import ProxyCache, ScienceProxy, normalize
from .signals import StructuralSignals, extract_signals
from .tribunal import (
    ClearanceToken,
    GradeResult,
    Question,
    TribunalService,
    TribunalSession,
    grade_keyword_answer,
    grade_psych_answer,
    select_questions,
)

__version__ = "0.1.0"
