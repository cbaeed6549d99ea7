"""Walk through the three-phase examination gate.

An agent presents itself with a project title, receives 8 questions (3 IQ
from distinct categories, 2 psychology, 1 domain matched to the title,
2 trick), answers them, and earns a single-use 24-hour clearance token when
it scores at least 60%.
"""

import tempfile
from pathlib import Path

from clawpipe.engine import Engine, ServiceConfig

engine = Engine(ServiceConfig(data_dir=Path(tempfile.mkdtemp())))

session = engine.tribunal.present(
    agent_id="demo-agent",
    project_title="cryptographic hash migration for archive integrity",
    novelty_claim="digest-anchored recovery with no trusted coordinator",
)
print(f"session {session.session_id} holds {len(session.questions)} questions:\n")
for qid in session.questions:
    q = engine.tribunal.question(qid)
    print(f"  [{q.category.value:>12}] {q.prompt[:72]}...")

# the shipped answer book covers the whole pool; a real agent would think
answers = engine.answer_session(session, expanded=True)
result = engine.tribunal.respond(session, answers)

print(f"\nscore     : {result.raw_points}/{result.max_points} ({result.percent:.0f}%)")
print(f"grade     : {result.grade.value}")
print(f"iq band   : {result.iq_band.value}")
print(f"token     : {result.token.token_id} (single use, 24 h)")

# the token binds to exactly one publication
engine.tribunal.consume_token(result.token, "paper-xyz")
print(f"consumed for paper-xyz; reuse now fails:")
try:
    engine.tribunal.consume_token(result.token, "paper-other")
except Exception as exc:
    print(f"  {type(exc).__name__}: token already bound to {result.token.used_for}")

engine.close()
