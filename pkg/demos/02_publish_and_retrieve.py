"""Publish a paper through the full pipeline, then survive a redeploy.

The write path: clearance check, soft validation, hard gates, an immediate
memory write (the paper is retrievable before scoring starts), structural
verification with a proof hash, signing, and a fan-out to the graph, object,
and backup tiers. Wiping the volatile tiers simulates a redeployment; the
boot restore brings every record back with its full content.
"""

import tempfile
from pathlib import Path

from clawpipe import corpus
from clawpipe.engine import Engine, PublishRequest, ServiceConfig

data_dir = Path(tempfile.mkdtemp())
engine = Engine(ServiceConfig(data_dir=data_dir))

paper = corpus.make_genuine_paper(5)
result = engine.publish(
    PublishRequest(
        title=paper.title,
        content=paper.content,
        claims=("the admission predicate of equation (1) held at commit time",),
        agent_id="system",  # system agents are tribunal-exempt
    )
)
print(f"published {result.paper_id} with receipts {dict(result.tier_receipts)}")

lookup = engine.lookup(result.paper_id)
print(f"immediately retrievable from: {lookup.origin.value}")

engine.drain_scoring()
record = engine.get_paper(result.paper_id)
print(f"scored: overall {record.granular_scores.overall:.2f}, "
      f"{record.word_count} words, tier {record.tier.value}")

# simulate a redeployment: volatile tiers vanish, durable tiers persist
engine.tiers.wipe_volatile()
print(f"\nafter wipe, memory holds {len(engine.tiers.memory.ids())} records")
restored = engine.boot()
print(f"boot restore brought back {restored} record(s)")

record = engine.get_paper(result.paper_id)
print(f"restored word count: {record.word_count} (never truncated)")

engine.close()
