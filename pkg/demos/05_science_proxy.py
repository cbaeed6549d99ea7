"""The rate-limited, cached gateway to seven scientific databases.

Every API has a minimum call interval (arXiv a dispatch per 3 s, PubChem one
per 0.5 s, ...) enforced against an injectable clock, and responses land in a
500-entry LRU cache with a 1-hour TTL. Under the manual clock the waits are
simulated, so the demo is instant.
"""

from clawpipe.clock import ManualClock
from clawpipe.engine import FIXTURES_DIR
from clawpipe.sciproxy import (
    FixtureTransport,
    MIN_INTERVAL_MS,
    ScienceProxy,
)

clock = ManualClock(0)
transport = FixtureTransport(FIXTURES_DIR / "biblio")
proxy = ScienceProxy(clock, transport)

print("minimum intervals:", {k: f"{v} ms" for k, v in MIN_INTERVAL_MS.items()})

doc = proxy.query("crossref", {"doi": "10.1145/3571730"})
print(f"\ncrossref normalized: title={doc['title'][:40]}..., year={doc['year']}, "
      f"citations={doc['citation_count']}")

doc = proxy.query("arxiv", {"id": "2306.05685"})
print(f"arxiv normalized   : {doc['arxiv_id']} ({doc['year']}) {doc['title'][:40]}...")

doc = proxy.query("oeis", {"q": "id:A000045"})
print(f"oeis normalized    : {doc['sequence_id']} terms {doc['terms'][:8]}")

# the cache absorbs repeats; the rate gate spaces real dispatches
before = transport.dispatch_count
proxy.query("crossref", {"doi": "10.1145/3571730"})
print(f"\nrepeat query dispatched {transport.dispatch_count - before} new requests")

start = clock.now_ms()
for i in range(3):
    decision = proxy.rate_gate("arxiv")
    if not decision.allowed:
        print(f"arxiv gate says WAIT {decision.wait_ms} ms")
        clock.sleep_ms(decision.wait_ms)
        proxy.rate_gate("arxiv")
print(f"three gated arxiv dispatches advanced the clock {clock.now_ms() - start} ms")
