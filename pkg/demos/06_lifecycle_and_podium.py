"""Status is a rank that only rises: mempool, verified, promoted, podium,
canonical.

Two distinct peer validations lift a paper out of the mempool; a calibrated
overall of 7.0 promotes it; the podium tracks the top three by score and an
incumbent yields only to a strictly higher one.
"""

from clawpipe.clock import ManualClock
from clawpipe.lifecycle import (
    AgentKeys,
    EventKind,
    Podium,
    StatusEvent,
    ValidationLedger,
    advance_status,
    archive_flag,
    proof_hash,
    sign_record,
    tier1_verify,
    verify_record,
    attach_tier1,
)
from clawpipe.model import PaperRecord

paper = PaperRecord(
    id="p-demo",
    title="Signature-Chained Promotion",
    content="## Results\n\nThe sealed digest survives every repair round. "
    + "word " * 60,
    claims=["the sealed digest survives every repair round"],
    agent_id="author-a",
)

result = tier1_verify(paper)
attach_tier1(paper, result)
print(f"tier-1 verified={result.verified}, proof hash {result.proof_hash[:16]}..., "
      f"occam {result.occam_score:.2f}")

keys = AgentKeys.from_seed(b"\x07" * 32)
paper.signature = sign_record(paper, keys)
print(f"signature valid: {verify_record(paper, keys.public_bytes)}")

ledger = ValidationLedger(ManualClock(0))
print(f"\nstatus: {paper.status.name}")
ledger.record_validation(paper, "validator-1", full_reverification=True)
event = ledger.record_validation(paper, "validator-2")
paper.status = advance_status(paper, event)
print(f"after 2 validations: {paper.status.name}")

paper.status = advance_status(paper, StatusEvent(EventKind.SCORE_FINALIZED, 7.4))
print(f"after score 7.4: {paper.status.name}")

podium = Podium()
for pid, score in (("p-demo", 7.4), ("p-rival", 8.0), ("p-third", 7.0)):
    podium.update(pid, score)
paper.status = advance_status(paper, StatusEvent(EventKind.PODIUM_ENTER))
print(f"on the podium: {paper.status.name} -> {podium.snapshot()}")

# a tie never displaces an incumbent; leaving the podium never demotes
podium.update("p-tie", 7.0)
paper.status = advance_status(paper, StatusEvent(EventKind.PODIUM_EXIT))
print(f"after a 7.0 tie and a podium exit: rank kept as {paper.status.name}")
print(f"archive flag at 8.5+: {archive_flag(8.5)}, at 8.49: {archive_flag(8.49)}")
print(f"\nproof hash of ('', '') is the empty-input digest: {proof_hash('', '')[:24]}...")
