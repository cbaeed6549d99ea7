import itertools
import json

import pytest

from clawpipe.clock import ManualClock
from clawpipe.errors import BackupFailed
from clawpipe.model import PaperRecord, Tier
from clawpipe.persistence import (
    AlreadyExists,
    BackupFilter,
    BackupStore,
    GraphStore,
    LocalBackupBackend,
    LocalObjectBackend,
    MemoryStore,
    ObjectStore,
    RateLimitedBackup,
    TierSet,
    TransientBackupError,
    backup_filename,
    boot_restore,
    parse_backup_markdown,
    put_all,
    render_backup_markdown,
    sanitize_title,
    sigv4_headers,
)


def _paper(pid="abc", content="alpha beta gamma " * 10, **kw):
    kw.setdefault("created_at", 1_775_000_000_000)  # 2026-03-31 UTC
    return PaperRecord(
        id=pid, title="A Tiered Write Study", content=content, agent_id="agent-1", **kw
    )


def _tiers(tmp_path, clock=None) -> TierSet:
    clock = clock or ManualClock(0)
    return TierSet(
        memory=MemoryStore(),
        graph=GraphStore(),
        object_store=ObjectStore(LocalObjectBackend(tmp_path / "objects")),
        backup=BackupStore(LocalBackupBackend(tmp_path / "backup"), clock),
    )


class TestObjectStore:
    def test_key_scheme(self):
        assert ObjectStore.key_for("p1") == "papers/p1.json"

    def test_round_trip_byte_exact(self, tmp_path):
        store = ObjectStore(LocalObjectBackend(tmp_path))
        doc = _paper().to_dict()
        store.put("abc", doc)
        assert store.get("abc") == doc
        raw = (tmp_path / "papers" / "abc.json").read_bytes()
        assert json.loads(raw) == doc

    def test_get_unknown_returns_none(self, tmp_path):
        store = ObjectStore(LocalObjectBackend(tmp_path))
        assert store.get("nope") is None

    def test_ids_enumeration(self, tmp_path):
        store = ObjectStore(LocalObjectBackend(tmp_path))
        for pid in ("a", "b", "c"):
            store.put(pid, _paper(pid).to_dict())
        assert store.ids() == ["a", "b", "c"]


class TestBackupNaming:
    def test_sanitize(self):
        assert sanitize_title("Hello, World! 2.0") == "hello-world-2-0"
        assert sanitize_title("___") == "untitled"

    def test_filename_template(self):
        paper = _paper()
        name = backup_filename(paper)
        assert name == "2026-03-31_a-tiered-write-study_abc.md"

    def test_markdown_round_trip(self):
        paper = _paper(content="some full content " * 40)
        body = render_backup_markdown(paper)
        parsed = parse_backup_markdown(body)
        assert parsed.to_dict() == paper.to_dict()
        assert parsed.content == paper.content  # never shortened


class _FlakyBackend:
    def __init__(self, failures, exc_factory=TransientBackupError):
        self.failures = failures
        self.exc_factory = exc_factory
        self.committed = {}
        self.attempts = 0

    def commit(self, filename, body):
        self.attempts += 1
        if self.attempts <= self.failures:
            raise self.exc_factory(f"attempt {self.attempts}")
        if filename in self.committed:
            raise AlreadyExists(filename)
        self.committed[filename] = body

    def list_files(self):
        return sorted(self.committed)

    def read(self, filename):
        return self.committed[filename]


class TestBackupSync:
    def test_internal_papers_skipped(self, tmp_path):
        clock = ManualClock(0)
        store = BackupStore(LocalBackupBackend(tmp_path), clock)
        paper = _paper()
        paper.agent_id = "diagnostic-probe-1"
        assert store.sync(paper) is None

    def test_blocked_title_substring(self, tmp_path):
        store = BackupStore(
            LocalBackupBackend(tmp_path),
            ManualClock(0),
            filters=BackupFilter(blocked_title_substrings=("tiered",)),
        )
        assert store.sync(_paper()) is None

    def test_duplicate_commit_is_idempotent_success(self, tmp_path):
        store = BackupStore(LocalBackupBackend(tmp_path), ManualClock(0))
        paper = _paper()
        first = store.sync(paper)
        second = store.sync(paper)
        assert first == second
        assert len(list((tmp_path).glob("*.md"))) == 1

    def test_two_transient_failures_then_success_backoffs(self):
        clock = ManualClock(0)
        backend = _FlakyBackend(failures=2)
        store = BackupStore(backend, clock)
        name = store.sync(_paper())
        assert name in backend.committed
        assert backend.attempts == 3
        assert clock.now_ms() == 2_000 + 4_000  # slept 2s then 4s

    def test_three_failures_exhaust_attempts(self):
        clock = ManualClock(0)
        store = BackupStore(_FlakyBackend(failures=3), clock)
        with pytest.raises(BackupFailed):
            store.sync(_paper())

    def test_rate_limit_honors_reset_hint(self):
        clock = ManualClock(0)
        backend = _FlakyBackend(
            failures=1, exc_factory=lambda msg: RateLimitedBackup(9_000)
        )
        store = BackupStore(backend, clock)
        store.sync(_paper())
        assert clock.now_ms() == 9_000


class TestPutAll:
    def test_all_tiers_success(self, tmp_path):
        tiers = _tiers(tmp_path)
        receipts = put_all(_paper(), tiers)
        assert [(r.tier.name, r.ok) for r in receipts] == [
            ("MEMORY", True),
            ("GRAPH", True),
            ("OBJECT", True),
            ("BACKUP", True),
        ]

    def test_object_failure_isolated(self, tmp_path):
        tiers = _tiers(tmp_path)

        class Broken:
            def put_bytes(self, key, data):
                raise OSError("disk detached")

            def get_bytes(self, key):
                return None

            def list_keys(self, prefix):
                return []

        tiers.object_store.backend = Broken()
        receipts = put_all(_paper(), tiers)
        by_tier = {r.tier.name: r.ok for r in receipts}
        assert by_tier == {
            "MEMORY": True,
            "GRAPH": True,
            "OBJECT": False,
            "BACKUP": True,
        }

    def test_verified_papers_reach_both_graph_namespaces(self, tmp_path):
        tiers = _tiers(tmp_path)
        paper = _paper(tier=Tier.TIER1_VERIFIED, tier1_proof="ab" * 32)
        put_all(paper, tiers)
        assert tiers.graph.get(paper.id, GraphStore.VERIFIED) is not None
        assert tiers.graph.get(paper.id, GraphStore.MEMPOOL) is not None

    def test_unverified_papers_stay_in_mempool_namespace(self, tmp_path):
        tiers = _tiers(tmp_path)
        paper = _paper()
        put_all(paper, tiers)
        assert tiers.graph.get(paper.id, GraphStore.VERIFIED) is None
        assert tiers.graph.get(paper.id, GraphStore.MEMPOOL) is not None


class TestBootRestore:
    def test_full_content_and_word_count_restored(self, tmp_path, fixture_paper_text):
        tiers = _tiers(tmp_path)
        paper = _paper("p2072", content=fixture_paper_text)
        put_all(paper, tiers)
        tiers.wipe_volatile()
        assert tiers.memory.get("p2072") is None

        restored = boot_restore(tiers)
        assert restored == 1
        doc = tiers.memory.get("p2072")
        assert doc["word_count"] == 2072
        assert doc["content"] == fixture_paper_text

    def test_restore_recomputes_corrupted_word_count(self, tmp_path):
        tiers = _tiers(tmp_path)
        paper = _paper()
        doc = paper.to_dict()
        doc["word_count"] = 58  # simulate a historically truncated record
        tiers.object_store.put(paper.id, doc)
        boot_restore(tiers)
        assert tiers.memory.get(paper.id)["word_count"] == paper.word_count

    def test_object_store_wins_over_backup(self, tmp_path):
        tiers = _tiers(tmp_path)
        object_copy = _paper("dup", content="object tier body " * 30)
        backup_copy = _paper("dup", content="backup tier body " * 30)
        tiers.object_store.put("dup", object_copy.to_dict())
        tiers.backup.sync(backup_copy)
        restored = boot_restore(tiers)
        assert restored == 1
        assert tiers.memory.get("dup")["content"] == object_copy.content

    def test_empty_durable_tiers(self, tmp_path):
        assert boot_restore(_tiers(tmp_path)) == 0

    def test_durability_over_every_durable_subset(self, tmp_path):
        # for each nonempty subset of durable tiers written, a volatile wipe
        # plus restore still yields the full original content
        content = "full original body " * 120
        for i, subset in enumerate(
            s
            for n in (1, 2)
            for s in itertools.combinations(("object", "backup"), n)
        ):
            tiers = _tiers(tmp_path / f"case{i}")
            paper = _paper(f"p{i}", content=content)
            if "object" in subset:
                tiers.object_store.put(paper.id, paper.to_dict())
            if "backup" in subset:
                tiers.backup.sync(paper)
            tiers.wipe_volatile()
            assert boot_restore(tiers) == 1
            restored = PaperRecord.from_dict(tiers.memory.get(paper.id))
            assert restored.content == content
            assert restored.word_count == paper.word_count


class TestAntiTruncation:
    def test_no_path_shortens_content(self, tmp_path, fixture_paper_text):
        tiers = _tiers(tmp_path)
        paper = _paper("big", content=fixture_paper_text)
        put_all(paper, tiers)
        for doc in (
            tiers.memory.get("big"),
            tiers.graph.get("big", GraphStore.MEMPOOL),
            tiers.object_store.get("big"),
            tiers.backup.get("big"),
        ):
            assert len(doc["content"]) == len(fixture_paper_text)


class TestSigV4:
    def test_reference_signing_example(self):
        # the published signature-v4 GET example (ListUsers, 2015-08-30)
        headers = sigv4_headers(
            "GET",
            "https://iam.amazonaws.com/?Action=ListUsers&Version=2010-05-08",
            b"",
            access_key="AKIDEXAMPLE",
            secret_key="wJalrXUtnFEMI/K7MDENG+bPxRfiCYEXAMPLEKEY",
            region="us-east-1",
            service="iam",
            amz_date="20150830T123600Z",
            extra_headers={
                "content-type": "application/x-www-form-urlencoded; charset=utf-8"
            },
            include_content_sha256=False,
        )
        assert headers["authorization"] == (
            "AWS4-HMAC-SHA256 "
            "Credential=AKIDEXAMPLE/20150830/us-east-1/iam/aws4_request, "
            "SignedHeaders=content-type;host;x-amz-date, "
            "Signature=5d672d79c15b13162d9279b0855cfba6789a8edb4c82c400e06b5924a6f2b5d7"
        )

    def test_s3_headers_include_payload_hash(self):
        headers = sigv4_headers(
            "PUT",
            "https://bucket.example.com/papers/p1.json",
            b'{"id": "p1"}',
            access_key="k",
            secret_key="s",
            region="auto",
        )
        assert "x-amz-content-sha256" in headers
        assert headers["authorization"].startswith("AWS4-HMAC-SHA256")
