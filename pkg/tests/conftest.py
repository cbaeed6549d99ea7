import json
from pathlib import Path

import pytest

from clawpipe import corpus
from clawpipe.clock import ManualClock
from clawpipe.engine import Engine, ServiceConfig

FIXTURES = Path(__file__).parent.parent / "src" / "clawpipe" / "fixtures"
GOLDEN = Path(__file__).parent / "golden"

CORPUS_GENUINE = FIXTURES / "corpus" / "genuine"
CORPUS_ADVERSARIAL = FIXTURES / "corpus" / "adversarial"
FIXTURE_PAPER = FIXTURES / "papers" / "recovered_2072_words.md"


@pytest.fixture
def clock():
    return ManualClock(1_775_000_000_000)


@pytest.fixture
def engine(tmp_path) -> Engine:
    eng = Engine(ServiceConfig(data_dir=tmp_path / "data"))
    yield eng
    eng.close()


@pytest.fixture
def make_engine(tmp_path):
    """Factory for tests needing several engines or custom config."""
    created = []

    def build(subdir="data", **overrides) -> Engine:
        cfg = ServiceConfig(data_dir=tmp_path / subdir, **overrides)
        eng = Engine(cfg)
        created.append(eng)
        return eng

    yield build
    for eng in created:
        eng.close()


@pytest.fixture(scope="session")
def genuine_paper():
    return corpus.make_genuine_paper(0)


@pytest.fixture(scope="session")
def fixture_paper_text():
    return FIXTURE_PAPER.read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def heuristic_golden():
    return json.loads((GOLDEN / "heuristic_scores.json").read_text())
