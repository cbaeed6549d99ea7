"""Four-layer lookup cascade: memory -> graph(verified) -> graph(mempool) ->
object store, each probe bounded by a timeout, with automatic backfill of
every faster tier after a hit.
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass, field
from typing import Optional

from .errors import NotFound
from .model import PaperRecord, Status
from .persistence import GraphStore, TierSet


@dataclass(frozen=True)
class CascadeConfig:
    graph_timeout_ms: int = 3_000
    mempool_timeout_ms: int = 2_000
    object_timeout_ms: int = 2_000

    def __post_init__(self):
        if min(self.graph_timeout_ms, self.mempool_timeout_ms, self.object_timeout_ms) <= 0:
            raise ValueError("cascade timeouts must be positive")


class Probe(str, enum.Enum):
    MEMORY = "memory"
    GRAPH_VERIFIED = "graph_verified"
    GRAPH_MEMPOOL = "graph_mempool"
    OBJECT = "object"


@dataclass
class LookupResult:
    paper: Optional[PaperRecord]
    origin: Optional[Probe]
    probes: list[Probe] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.paper is not None


class Cascade:
    """Read path over a TierSet. Safe for unlimited concurrent callers."""

    def __init__(self, tiers: TierSet, cfg: Optional[CascadeConfig] = None):
        self.tiers = tiers
        self.cfg = cfg or CascadeConfig()
        # backfill runs inline by default so a hit is immediately visible to
        # the next lookup; pass an executor.submit-style callable for
        # fire-and-forget behavior in live deployments.
        self.backfill_runner = lambda fn: fn()

    def _timed(self, fn, timeout_ms: int):
        """Run one probe under its budget; a timeout is a silent miss.

        The probe runs on a detached daemon thread so an unresponsive tier
        cannot hold the cascade past its budget.
        """
        result: dict = {}
        done = threading.Event()

        def probe():
            try:
                result["value"] = fn()
            except Exception:
                result["value"] = None
            done.set()

        threading.Thread(target=probe, daemon=True).start()
        done.wait(timeout_ms / 1000.0)
        return result.get("value")

    def lookup(self, paper_id: str) -> LookupResult:
        probes: list[Probe] = []

        probes.append(Probe.MEMORY)
        doc = self.tiers.memory.get(paper_id)
        if doc is not None:
            return LookupResult(PaperRecord.from_dict(doc), Probe.MEMORY, probes)

        plan = [
            (
                Probe.GRAPH_VERIFIED,
                lambda: self.tiers.graph.get(paper_id, GraphStore.VERIFIED),
                self.cfg.graph_timeout_ms,
            ),
            (
                Probe.GRAPH_MEMPOOL,
                lambda: self.tiers.graph.get(paper_id, GraphStore.MEMPOOL),
                self.cfg.mempool_timeout_ms,
            ),
            (
                Probe.OBJECT,
                lambda: self.tiers.object_store.get(paper_id),
                self.cfg.object_timeout_ms,
            ),
        ]
        for probe, fn, timeout_ms in plan:
            probes.append(probe)
            doc = self._timed(fn, timeout_ms)
            if doc is not None:
                paper = PaperRecord.from_dict(doc)
                result = LookupResult(paper, probe, probes)
                self.backfill_runner(lambda: self.backfill(paper, probe))
                return result
        return LookupResult(None, None, probes)

    def get_paper(self, paper_id: str) -> PaperRecord:
        result = self.lookup(paper_id)
        if not result.found:
            raise NotFound(paper_id)
        return result.paper

    def backfill(self, paper: PaperRecord, origin: Probe) -> None:
        """Write the record into every tier faster than its origin.

        Failures are isolated: a tier-2 write error never stops the tier-1
        backfill.
        """
        doc = paper.to_dict()
        if origin is Probe.MEMORY:
            return
        namespace = (
            GraphStore.VERIFIED
            if paper.status >= Status.VERIFIED
            else GraphStore.MEMPOOL
        )
        if origin is Probe.OBJECT:
            try:
                self.tiers.graph.put(paper.id, doc, namespace)
            except Exception:
                pass
        try:
            self.tiers.memory.put(paper.id, doc)
        except Exception:
            pass
