"""Four-tier persistence: memory, volatile graph store, durable object store,
and git-style markdown backup.

Tiers 1-2 are volatile (a wipe simulates redeployment); tiers 3-4 are durable
and drive boot-time restoration. No path through this module ever shortens
content: every get returns exactly the bytes the matching put stored, and the
boot restore recomputes word_count from the full content.
"""

from __future__ import annotations

import datetime as _dt
import enum
import hashlib
import hmac
import json
import re
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from .clock import Clock
from .errors import BackupFailed, NotFound, StoreUnreachable
from .model import PaperRecord

OBJECT_KEY_TEMPLATE = "papers/{id}.json"
BACKUP_BACKOFFS_MS = (2_000, 4_000, 8_000)
BACKUP_MAX_ATTEMPTS = 3

REPO_OWNER_ENV = "BACKUP_REPO_OWNER"
REPO_NAME_ENV = "BACKUP_REPO_NAME"


class TierId(enum.IntEnum):
    MEMORY = 1
    GRAPH = 2
    OBJECT = 3
    BACKUP = 4


class Durability(str, enum.Enum):
    VOLATILE = "VOLATILE"
    DURABLE = "DURABLE"


@dataclass(frozen=True)
class Receipt:
    tier: TierId
    ok: bool
    error: Optional[str] = None


class MemoryStore:
    """Tier 1: in-process map. Fastest, gone on redeploy."""

    tier = TierId.MEMORY
    durability = Durability.VOLATILE

    def __init__(self):
        self._docs: dict[str, dict] = {}
        self._lock = threading.Lock()

    def put(self, paper_id: str, doc: dict) -> None:
        with self._lock:
            self._docs[paper_id] = doc

    def get(self, paper_id: str) -> Optional[dict]:
        with self._lock:
            return self._docs.get(paper_id)

    def wipe(self) -> None:
        with self._lock:
            self._docs.clear()

    def ids(self) -> list[str]:
        with self._lock:
            return list(self._docs)


class GraphStore:
    """Tier 2: volatile graph database stand-in with two namespaces.

    The verified namespace (the "wheel") holds peer-validated papers; the
    mempool namespace holds papers awaiting validation. `lookup_delay_s`
    simulates the real store's network latency for cascade timeout tests.
    """

    tier = TierId.GRAPH
    durability = Durability.VOLATILE

    VERIFIED = "verified"
    MEMPOOL = "mempool"

    def __init__(self, lookup_delay_s: float = 0.0):
        self.lookup_delay_s = lookup_delay_s
        self._spaces: dict[str, dict[str, dict]] = {
            self.VERIFIED: {},
            self.MEMPOOL: {},
        }
        self._lock = threading.Lock()

    def put(self, paper_id: str, doc: dict, namespace: str) -> None:
        with self._lock:
            self._spaces[namespace][paper_id] = doc

    def get(self, paper_id: str, namespace: str) -> Optional[dict]:
        if self.lookup_delay_s:
            time.sleep(self.lookup_delay_s)
        with self._lock:
            return self._spaces[namespace].get(paper_id)

    def wipe(self) -> None:
        with self._lock:
            for space in self._spaces.values():
                space.clear()


class LocalObjectBackend:
    """Directory-backed object storage for tier 3."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def put_bytes(self, key: str, data: bytes) -> None:
        path = self.root / key
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)

    def get_bytes(self, key: str) -> Optional[bytes]:
        path = self.root / key
        if not path.exists():
            return None
        return path.read_bytes()

    def list_keys(self, prefix: str) -> list[str]:
        base = self.root / prefix
        if not base.exists():
            return []
        return sorted(
            str(p.relative_to(self.root)) for p in base.rglob("*") if p.is_file()
        )


class ObjectStore:
    """Tier 3: durable JSON objects keyed by paper id."""

    tier = TierId.OBJECT
    durability = Durability.DURABLE

    def __init__(self, backend):
        self.backend = backend

    @staticmethod
    def key_for(paper_id: str) -> str:
        return OBJECT_KEY_TEMPLATE.format(id=paper_id)

    def put(self, paper_id: str, doc: dict) -> None:
        data = json.dumps(doc, sort_keys=True, ensure_ascii=False).encode("utf-8")
        try:
            self.backend.put_bytes(self.key_for(paper_id), data)
        except OSError as exc:
            raise StoreUnreachable(str(exc)) from exc

    def get(self, paper_id: str) -> Optional[dict]:
        try:
            data = self.backend.get_bytes(self.key_for(paper_id))
        except OSError as exc:
            raise StoreUnreachable(str(exc)) from exc
        if data is None:
            return None
        return json.loads(data.decode("utf-8"))

    def get_or_raise(self, paper_id: str) -> dict:
        doc = self.get(paper_id)
        if doc is None:
            raise NotFound(paper_id)
        return doc

    def ids(self) -> list[str]:
        out = []
        for key in self.backend.list_keys("papers/"):
            m = re.match(r"papers/(.+)\.json$", key)
            if m:
                out.append(m.group(1))
        return out


# --- tier 4: git-style markdown backup --------------------------------------


class AlreadyExists(Exception):
    """The store-side analogue of HTTP 422: the file is already committed."""


class TransientBackupError(Exception):
    pass


class RateLimitedBackup(Exception):
    def __init__(self, retry_after_ms: int):
        super().__init__(f"rate limited, retry after {retry_after_ms} ms")
        self.retry_after_ms = retry_after_ms


@dataclass(frozen=True)
class BackupFilter:
    """Internal papers (diagnostics, bootstrap tests) never reach the backup."""

    blocked_agent_prefixes: tuple[str, ...] = ("diagnostic-", "bootstrap-", "smoke-")
    blocked_title_substrings: tuple[str, ...] = ("[internal]", "bootstrap test")

    def blocks(self, paper: PaperRecord) -> bool:
        if any(paper.agent_id.startswith(p) for p in self.blocked_agent_prefixes):
            return True
        title = paper.title.lower()
        return any(s in title for s in self.blocked_title_substrings)


def sanitize_title(title: str, max_len: int = 60) -> str:
    slug = re.sub(r"[^a-z0-9]+", "-", title.lower()).strip("-")
    return slug[:max_len].rstrip("-") or "untitled"


def backup_filename(paper: PaperRecord) -> str:
    date = _dt.datetime.fromtimestamp(
        paper.created_at / 1000.0, tz=_dt.timezone.utc
    ).strftime("%Y-%m-%d")
    return f"{date}_{sanitize_title(paper.title)}_{paper.id}.md"


_RECORD_COMMENT_RE = re.compile(r"<!--\s*paper-record:\s*(\{.*\})\s*-->", re.DOTALL)


def render_backup_markdown(paper: PaperRecord) -> str:
    """Markdown rendering with the full record embedded for lossless restore."""
    record_json = json.dumps(paper.to_dict(), sort_keys=True, ensure_ascii=False)
    lines = [
        f"# {paper.title}",
        "",
        f"- paper id: `{paper.id}`",
        f"- agent: `{paper.agent_id}`",
        f"- status: {paper.status.name}",
        f"- tier: {paper.tier.value}",
        f"- words: {paper.word_count}",
        "",
        "---",
        "",
        paper.content,
        "",
        f"<!-- paper-record: {record_json} -->",
        "",
    ]
    return "\n".join(lines)


def parse_backup_markdown(body: str) -> PaperRecord:
    m = _RECORD_COMMENT_RE.search(body)
    if not m:
        raise ValueError("backup file carries no embedded record")
    return PaperRecord.from_dict(json.loads(m.group(1)))


class LocalBackupBackend:
    """Directory of committed markdown files; re-commits raise AlreadyExists."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def commit(self, filename: str, body: str) -> None:
        path = self.root / filename
        if path.exists():
            raise AlreadyExists(filename)
        path.write_text(body, encoding="utf-8")

    def list_files(self) -> list[str]:
        return sorted(p.name for p in self.root.glob("*.md"))

    def read(self, filename: str) -> str:
        return (self.root / filename).read_text(encoding="utf-8")


class BackupStore:
    """Tier 4: markdown files committed to a (possibly remote) repository."""

    tier = TierId.BACKUP
    durability = Durability.DURABLE

    def __init__(
        self,
        backend,
        clock: Clock,
        filters: Optional[BackupFilter] = None,
        backoffs_ms: tuple[int, ...] = BACKUP_BACKOFFS_MS,
        max_attempts: int = BACKUP_MAX_ATTEMPTS,
    ):
        self.backend = backend
        self.clock = clock
        self.filters = filters or BackupFilter()
        self.backoffs_ms = backoffs_ms
        self.max_attempts = max_attempts

    def sync(self, paper: PaperRecord) -> Optional[str]:
        """Commit the paper's markdown file, retrying transient failures.

        Returns the committed filename, or None when the internal-paper
        filter skips the paper. An already-committed file counts as success.
        """
        if self.filters.blocks(paper):
            return None
        filename = backup_filename(paper)
        body = render_backup_markdown(paper)
        last_error: Optional[Exception] = None
        for attempt in range(self.max_attempts):
            try:
                self.backend.commit(filename, body)
                return filename
            except AlreadyExists:
                return filename  # idempotent success
            except RateLimitedBackup as exc:
                self.clock.sleep_ms(exc.retry_after_ms)
                last_error = exc
            except (TransientBackupError, OSError) as exc:
                last_error = exc
                if attempt < self.max_attempts - 1:
                    self.clock.sleep_ms(self.backoffs_ms[min(attempt, len(self.backoffs_ms) - 1)])
        raise BackupFailed(f"{filename}: {last_error}")

    # restore-side interface
    def records(self) -> Iterable[PaperRecord]:
        for filename in self.backend.list_files():
            try:
                yield parse_backup_markdown(self.backend.read(filename))
            except (ValueError, json.JSONDecodeError, OSError):
                continue  # malformed backup files are skipped, not fatal

    def put(self, paper_id: str, doc: dict) -> None:
        self.sync(PaperRecord.from_dict(doc))

    def get(self, paper_id: str) -> Optional[dict]:
        for record in self.records():
            if record.id == paper_id:
                return record.to_dict()
        return None


@dataclass
class TierSet:
    """The four stores a deployment writes through."""

    memory: MemoryStore
    graph: GraphStore
    object_store: ObjectStore
    backup: BackupStore

    def wipe_volatile(self) -> None:
        self.memory.wipe()
        self.graph.wipe()


def graph_namespaces_for(paper: PaperRecord) -> list[str]:
    """Verified records live in both the wheel and the mempool; unverified
    records stay in the mempool only."""
    from .model import Tier

    if paper.tier is Tier.TIER1_VERIFIED:
        return [GraphStore.VERIFIED, GraphStore.MEMPOOL]
    return [GraphStore.MEMPOOL]


def put_all(paper: PaperRecord, tiers: TierSet) -> list[Receipt]:
    """Write the record to all four tiers; tier-1 first, failures isolated."""
    doc = paper.to_dict()
    receipts: list[Receipt] = []

    def attempt(tier: TierId, fn) -> None:
        try:
            fn()
            receipts.append(Receipt(tier, True))
        except Exception as exc:
            receipts.append(Receipt(tier, False, str(exc)))

    attempt(TierId.MEMORY, lambda: tiers.memory.put(paper.id, doc))
    attempt(
        TierId.GRAPH,
        lambda: [
            tiers.graph.put(paper.id, doc, ns) for ns in graph_namespaces_for(paper)
        ],
    )
    attempt(TierId.OBJECT, lambda: tiers.object_store.put(paper.id, doc))
    attempt(TierId.BACKUP, lambda: tiers.backup.sync(paper))
    return receipts


def boot_restore(tiers: TierSet) -> int:
    """Load every durable record into tier 1 with full content.

    The object store is enumerated before the slower backup restore, so its
    copy wins when both tiers hold the same id. word_count is recomputed from
    the restored content -- restoration never truncates.
    """
    restored = 0
    seen: set[str] = set()

    def load(paper_id: str, doc: dict) -> None:
        nonlocal restored
        if paper_id in seen:
            return
        record = PaperRecord.from_dict(doc)  # recomputes word_count
        tiers.memory.put(paper_id, record.to_dict())
        seen.add(paper_id)
        restored += 1

    try:
        for paper_id in tiers.object_store.ids():
            try:
                doc = tiers.object_store.get(paper_id)
                if doc is not None:
                    load(paper_id, doc)
            except Exception:
                continue
    except Exception:
        pass
    try:
        for record in tiers.backup.records():
            load(record.id, record.to_dict())
    except Exception:
        pass
    return restored


class GitHubBackupBackend:
    """Live git-hosting backend for tier 4 (contents API shape).

    Repository owner and name come from BACKUP_REPO_OWNER / BACKUP_REPO_NAME
    unless passed explicitly. HTTP 422 maps to AlreadyExists and rate-limit
    responses carry the reset hint, so BackupStore retry semantics apply
    unchanged. Offline suites never construct requests through this class.
    """

    def __init__(
        self,
        token: str,
        owner: Optional[str] = None,
        repo: Optional[str] = None,
        timeout_s: float = 20.0,
    ):
        import os

        self.token = token
        self.owner = owner or os.environ.get(REPO_OWNER_ENV, "")
        self.repo = repo or os.environ.get(REPO_NAME_ENV, "")
        self.timeout_s = timeout_s
        if not (self.owner and self.repo):
            raise ValueError(
                f"set {REPO_OWNER_ENV} and {REPO_NAME_ENV} or pass owner/repo"
            )

    def _url(self, filename: str) -> str:
        return (
            f"https://api.github.com/repos/{self.owner}/{self.repo}"
            f"/contents/{filename}"
        )

    def commit(self, filename: str, body: str) -> None:
        import base64

        import httpx

        resp = httpx.put(
            self._url(filename),
            headers={"Authorization": f"Bearer {self.token}"},
            json={
                "message": f"add {filename}",
                "content": base64.b64encode(body.encode("utf-8")).decode("ascii"),
            },
            timeout=self.timeout_s,
        )
        if resp.status_code == 422:
            raise AlreadyExists(filename)
        if resp.status_code in (403, 429):
            reset = int(resp.headers.get("x-ratelimit-reset", "0"))
            now_s = int(time.time())
            raise RateLimitedBackup(max(0, reset - now_s) * 1000)
        if resp.status_code >= 500:
            raise TransientBackupError(f"{filename}: {resp.status_code}")
        if resp.status_code >= 300:
            raise OSError(f"PUT {filename}: {resp.status_code}")

    def list_files(self) -> list[str]:
        import httpx

        resp = httpx.get(
            self._url(""),
            headers={"Authorization": f"Bearer {self.token}"},
            timeout=self.timeout_s,
        )
        if resp.status_code >= 300:
            return []
        return sorted(
            item["name"]
            for item in resp.json()
            if item.get("name", "").endswith(".md")
        )

    def read(self, filename: str) -> str:
        import base64

        import httpx

        resp = httpx.get(
            self._url(filename),
            headers={"Authorization": f"Bearer {self.token}"},
            timeout=self.timeout_s,
        )
        resp.raise_for_status()
        return base64.b64decode(resp.json()["content"]).decode("utf-8")


# --- optional live S3-compatible adapter ------------------------------------


def _hmac_sha256(key: bytes, msg: str) -> bytes:
    return hmac.new(key, msg.encode("utf-8"), hashlib.sha256).digest()


def sigv4_headers(
    method: str,
    url: str,
    body: bytes,
    access_key: str,
    secret_key: str,
    region: str,
    service: str = "s3",
    amz_date: Optional[str] = None,
    extra_headers: Optional[dict[str, str]] = None,
    include_content_sha256: bool = True,
) -> dict[str, str]:
    """AWS Signature Version 4 request signing (header form).

    Covers what an S3-compatible PUT/GET needs; the tests pin it to the
    published signature-v4 reference example.
    """
    from urllib.parse import urlsplit, quote

    parts = urlsplit(url)
    host = parts.netloc
    canonical_uri = quote(parts.path or "/", safe="/-_.~")
    query_items = sorted(
        pair.split("=", 1) if "=" in pair else (pair, "")
        for pair in parts.query.split("&")
        if pair
    )
    canonical_query = "&".join(f"{k}={v}" for k, v in query_items)

    now = amz_date or _dt.datetime.now(_dt.timezone.utc).strftime("%Y%m%dT%H%M%SZ")
    datestamp = now[:8]
    payload_hash = hashlib.sha256(body).hexdigest()

    headers = {"host": host, "x-amz-date": now}
    if include_content_sha256:
        headers["x-amz-content-sha256"] = payload_hash
    for k, v in (extra_headers or {}).items():
        headers[k.lower()] = v.strip()
    signed_headers = ";".join(sorted(headers))
    canonical_headers = "".join(f"{k}:{headers[k]}\n" for k in sorted(headers))
    canonical_request = "\n".join(
        [method, canonical_uri, canonical_query, canonical_headers, signed_headers, payload_hash]
    )

    scope = f"{datestamp}/{region}/{service}/aws4_request"
    string_to_sign = "\n".join(
        [
            "AWS4-HMAC-SHA256",
            now,
            scope,
            hashlib.sha256(canonical_request.encode("utf-8")).hexdigest(),
        ]
    )
    k_date = _hmac_sha256(("AWS4" + secret_key).encode("utf-8"), datestamp)
    k_region = hmac.new(k_date, region.encode(), hashlib.sha256).digest()
    k_service = hmac.new(k_region, service.encode(), hashlib.sha256).digest()
    k_signing = hmac.new(k_service, b"aws4_request", hashlib.sha256).digest()
    signature = hmac.new(
        k_signing, string_to_sign.encode("utf-8"), hashlib.sha256
    ).hexdigest()

    authorization = (
        f"AWS4-HMAC-SHA256 Credential={access_key}/{scope}, "
        f"SignedHeaders={signed_headers}, Signature={signature}"
    )
    out = dict(headers)
    out["authorization"] = authorization
    return out


class S3ObjectBackend:
    """Live S3-compatible backend (any store speaking signature v4).

    Construction is cheap and offline; network traffic happens only on use,
    so the offline suite never touches it.
    """

    def __init__(
        self,
        endpoint: str,
        bucket: str,
        access_key: str,
        secret_key: str,
        region: str = "auto",
        timeout_s: float = 20.0,
    ):
        self.base = endpoint.rstrip("/") + "/" + bucket
        self.access_key = access_key
        self.secret_key = secret_key
        self.region = region
        self.timeout_s = timeout_s

    def _request(self, method: str, key: str, body: bytes = b""):
        import httpx

        url = f"{self.base}/{key}"
        headers = sigv4_headers(
            method, url, body, self.access_key, self.secret_key, self.region
        )
        return httpx.request(
            method, url, headers=headers, content=body, timeout=self.timeout_s
        )

    def put_bytes(self, key: str, data: bytes) -> None:
        resp = self._request("PUT", key, data)
        if resp.status_code >= 300:
            raise StoreUnreachable(f"PUT {key}: {resp.status_code}")

    def get_bytes(self, key: str) -> Optional[bytes]:
        resp = self._request("GET", key)
        if resp.status_code == 404:
            return None
        if resp.status_code >= 300:
            raise StoreUnreachable(f"GET {key}: {resp.status_code}")
        return resp.content

    def list_keys(self, prefix: str) -> list[str]:
        resp = self._request("GET", f"?list-type=2&prefix={prefix}")
        if resp.status_code >= 300:
            raise StoreUnreachable(f"LIST {prefix}: {resp.status_code}")
        return re.findall(r"<Key>([^<]+)</Key>", resp.text)
