"""Rate-limited, cached gateway to seven public scientific databases.

Each API carries a URL builder, a minimum call interval, and a response
transformer that maps the heterogeneous upstream body onto a small normalized
document. Responses are cached in a 500-entry LRU with a 1-hour TTL. The
transport is injectable: the fixture transport replays recorded bodies from a
directory, the live transport speaks HTTP.
"""

from __future__ import annotations

import json
import os
import re
import threading
import xml.etree.ElementTree as ET
from collections import OrderedDict
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional
from urllib.parse import quote, urlencode

from .clock import Clock, HOUR_MS
from .errors import SourceUnavailable, TransformError, UnknownApi, UpstreamError

CACHE_CAPACITY = 500
CACHE_TTL_MS = HOUR_MS

# Table of minimum intervals between consecutive dispatches, per upstream.
MIN_INTERVAL_MS = {
    "crossref": 1000,
    "semantic_scholar": 1000,
    "arxiv": 3000,
    "pubchem": 500,
    "uniprot": 1000,
    "oeis": 2000,
    "materials_project": 1000,
}

MATERIALS_PROJECT_KEY_ENV = "MATERIALS_PROJECT_API_KEY"


@dataclass(frozen=True)
class ApiConfig:
    name: str
    min_interval_ms: int
    url_builder: Callable[[dict], tuple[str, dict]]  # params -> (url, headers)
    transformer: Callable[[str], dict]  # raw body -> normalized document


@dataclass(frozen=True)
class GateDecision:
    allowed: bool
    wait_ms: int = 0


class RateState:
    """Per-API last-dispatch timestamps. Consecutive dispatches to one API are
    separated by at least its minimum interval."""

    def __init__(self):
        self.last_call: dict[str, int] = {}
        self._lock = threading.Lock()

    def gate(self, api: str, now_ms: int, min_interval_ms: int) -> GateDecision:
        with self._lock:
            last = self.last_call.get(api)
            if last is not None:
                elapsed = now_ms - last
                if elapsed < min_interval_ms:
                    return GateDecision(False, min_interval_ms - elapsed)
            self.last_call[api] = now_ms
            return GateDecision(True)


class ProxyCache:
    """LRU cache with TTL expiry. Expired entries are never served."""

    def __init__(self, capacity: int = CACHE_CAPACITY, ttl_ms: int = CACHE_TTL_MS):
        self.capacity = capacity
        self.ttl_ms = ttl_ms
        self._entries: "OrderedDict[str, tuple[dict, int]]" = OrderedDict()
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, key: str, now_ms: int) -> Optional[dict]:
        with self._lock:
            item = self._entries.get(key)
            if item is None:
                return None
            doc, expiry = item
            if now_ms >= expiry:
                del self._entries[key]
                return None
            self._entries.move_to_end(key)
            return doc

    def put(self, key: str, doc: dict, now_ms: int) -> None:
        with self._lock:
            self._entries[key] = (doc, now_ms + self.ttl_ms)
            self._entries.move_to_end(key)
            while len(self._entries) > self.capacity:
                self._entries.popitem(last=False)


def cache_key(api: str, params: dict) -> str:
    """API name plus the canonical (sorted-parameter) query string."""
    canon = "&".join(f"{k}={params[k]}" for k in sorted(params))
    return f"{api}?{canon}"


def fixture_filename(api: str, params: dict) -> str:
    canon = "_".join(f"{k}-{params[k]}" for k in sorted(params))
    slug = re.sub(r"[^A-Za-z0-9._-]+", "-", canon).strip("-")
    return f"{api}__{slug}"


class FixtureTransport:
    """Replays recorded upstream bodies from a directory; misses are 404s."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.dispatch_count = 0

    def request(self, api: str, params: dict, url: str, headers: dict):
        self.dispatch_count += 1
        stem = fixture_filename(api, params)
        for suffix in (".json", ".xml"):
            path = self.directory / (stem + suffix)
            if path.exists():
                return 200, path.read_text(encoding="utf-8")
        return 404, ""


class LiveTransport:
    """HTTP transport for live mode. Not exercised by the offline test suite."""

    def __init__(self, timeout_s: float = 20.0):
        self.timeout_s = timeout_s
        self.dispatch_count = 0

    def request(self, api: str, params: dict, url: str, headers: dict):
        import httpx

        self.dispatch_count += 1
        resp = httpx.get(url, headers=headers, timeout=self.timeout_s)
        return resp.status_code, resp.text


# --- per-API URL builders -------------------------------------------------


def _crossref_url(params: dict) -> tuple[str, dict]:
    if "doi" in params:
        return f"https://api.crossref.org/works/{quote(params['doi'], safe='')}", {}
    return "https://api.crossref.org/works?" + urlencode({"query": params["query"]}), {}


def _semantic_scholar_url(params: dict) -> tuple[str, dict]:
    q = urlencode(
        {
            "query": params["query"],
            "fields": "title,authors,year,externalIds,citationCount",
            "limit": 1,
        }
    )
    return f"https://api.semanticscholar.org/graph/v1/paper/search?{q}", {}


def _arxiv_url(params: dict) -> tuple[str, dict]:
    if "id" in params:
        q = urlencode({"id_list": params["id"]})
    else:
        q = urlencode({"search_query": params["query"], "max_results": 1})
    return f"https://export.arxiv.org/api/query?{q}", {}


def _pubchem_url(params: dict) -> tuple[str, dict]:
    name = quote(params["name"], safe="")
    return (
        "https://pubchem.ncbi.nlm.nih.gov/rest/pug/compound/name/"
        f"{name}/property/MolecularFormula,MolecularWeight/JSON",
        {},
    )


def _uniprot_url(params: dict) -> tuple[str, dict]:
    return f"https://rest.uniprot.org/uniprotkb/{quote(params['accession'])}.json", {}


def _oeis_url(params: dict) -> tuple[str, dict]:
    return "https://oeis.org/search?" + urlencode({"q": params["q"], "fmt": "json"}), {}


def _materials_project_url(params: dict) -> tuple[str, dict]:
    key = os.environ.get(MATERIALS_PROJECT_KEY_ENV)
    if not key:
        raise SourceUnavailable("materials_project requires an API key")
    q = urlencode({"formula": params["formula"], "_fields": "material_id,formula_pretty,symmetry"})
    return f"https://api.materialsproject.org/materials/summary/?{q}", {"X-API-KEY": key}


# --- per-API response transformers ----------------------------------------


def _require(cond: bool, what: str):
    if not cond:
        raise TransformError(what)


def _load_json(raw: str) -> dict:
    try:
        return json.loads(raw)
    except (json.JSONDecodeError, TypeError) as exc:
        raise TransformError(f"invalid JSON body: {exc}") from exc


def normalize_crossref(raw: str) -> dict:
    body = _load_json(raw)
    msg = body.get("message")
    _require(isinstance(msg, dict), "crossref body missing message")
    titles = msg.get("title") or []
    authors = [
        " ".join(p for p in (a.get("given"), a.get("family")) if p)
        for a in msg.get("author", [])
    ]
    year = None
    issued = (msg.get("issued") or {}).get("date-parts") or []
    if issued and issued[0]:
        year = issued[0][0]
    venues = msg.get("container-title") or []
    return {
        "title": titles[0] if titles else "",
        "authors": authors,
        "year": year,
        "venue": venues[0] if venues else "",
        "doi": msg.get("DOI", ""),
        "citation_count": msg.get("is-referenced-by-count", 0),
    }


_ATOM_NS = {"atom": "http://www.w3.org/2005/Atom"}


def normalize_arxiv(raw: str) -> dict:
    try:
        root = ET.fromstring(raw)
    except ET.ParseError as exc:
        raise TransformError(f"invalid Atom body: {exc}") from exc
    entry = root.find("atom:entry", _ATOM_NS)
    _require(entry is not None, "arxiv feed has no entry")
    title = (entry.findtext("atom:title", "", _ATOM_NS) or "").strip()
    _require(bool(title), "arxiv entry missing title")
    authors = [
        (a.findtext("atom:name", "", _ATOM_NS) or "").strip()
        for a in entry.findall("atom:author", _ATOM_NS)
    ]
    published = entry.findtext("atom:published", "", _ATOM_NS) or ""
    arxiv_id = (entry.findtext("atom:id", "", _ATOM_NS) or "").rsplit("/abs/", 1)[-1]
    abstract = (entry.findtext("atom:summary", "", _ATOM_NS) or "").strip()
    return {
        "title": re.sub(r"\s+", " ", title),
        "authors": authors,
        "year": int(published[:4]) if published[:4].isdigit() else None,
        "arxiv_id": re.sub(r"v\d+$", "", arxiv_id),
        "abstract": abstract,
    }


def normalize_semantic_scholar(raw: str) -> dict:
    body = _load_json(raw)
    data = body.get("data")
    _require(isinstance(data, list) and len(data) > 0, "semantic scholar: no hits")
    hit = data[0]
    return {
        "title": hit.get("title", ""),
        "authors": [a.get("name", "") for a in hit.get("authors", [])],
        "year": hit.get("year"),
        "doi": (hit.get("externalIds") or {}).get("DOI", ""),
        "citation_count": hit.get("citationCount", 0),
    }


def normalize_pubchem(raw: str) -> dict:
    body = _load_json(raw)
    props = ((body.get("PropertyTable") or {}).get("Properties")) or []
    _require(len(props) > 0, "pubchem: no compound properties")
    p = props[0]
    return {
        "compound_id": p.get("CID"),
        "formula": p.get("MolecularFormula", ""),
        "weight": float(p.get("MolecularWeight", 0.0)),
    }


def normalize_uniprot(raw: str) -> dict:
    body = _load_json(raw)
    acc = body.get("primaryAccession")
    _require(bool(acc), "uniprot: missing accession")
    name = (
        ((body.get("proteinDescription") or {}).get("recommendedName") or {})
        .get("fullName", {})
        .get("value", "")
    )
    return {
        "accession": acc,
        "name": name,
        "sequence_length": (body.get("sequence") or {}).get("length", 0),
    }


def normalize_oeis(raw: str) -> dict:
    body = _load_json(raw)
    results = body.get("results") or []
    _require(len(results) > 0, "oeis: no results")
    hit = results[0]
    number = hit.get("number")
    _require(number is not None, "oeis: result missing number")
    terms = [int(t) for t in str(hit.get("data", "")).split(",") if t.strip()]
    return {
        "sequence_id": f"A{int(number):06d}",
        "name": hit.get("name", ""),
        "terms": terms,
    }


def normalize_materials_project(raw: str) -> dict:
    body = _load_json(raw)
    data = body.get("data") or []
    _require(len(data) > 0, "materials project: no hits")
    hit = data[0]
    return {
        "material_id": hit.get("material_id", ""),
        "formula": hit.get("formula_pretty", ""),
        "structure_summary": (hit.get("symmetry") or {}).get("symbol", ""),
    }


API_CONFIGS: dict[str, ApiConfig] = {
    "crossref": ApiConfig("crossref", MIN_INTERVAL_MS["crossref"], _crossref_url, normalize_crossref),
    "semantic_scholar": ApiConfig(
        "semantic_scholar", MIN_INTERVAL_MS["semantic_scholar"], _semantic_scholar_url, normalize_semantic_scholar
    ),
    "arxiv": ApiConfig("arxiv", MIN_INTERVAL_MS["arxiv"], _arxiv_url, normalize_arxiv),
    "pubchem": ApiConfig("pubchem", MIN_INTERVAL_MS["pubchem"], _pubchem_url, normalize_pubchem),
    "uniprot": ApiConfig("uniprot", MIN_INTERVAL_MS["uniprot"], _uniprot_url, normalize_uniprot),
    "oeis": ApiConfig("oeis", MIN_INTERVAL_MS["oeis"], _oeis_url, normalize_oeis),
    "materials_project": ApiConfig(
        "materials_project",
        MIN_INTERVAL_MS["materials_project"],
        _materials_project_url,
        normalize_materials_project,
    ),
}


def normalize(api: str, raw_body: str) -> dict:
    """Per-API field mapping into a flat document; unknown fields dropped."""
    cfg = API_CONFIGS.get(api)
    if cfg is None:
        raise UnknownApi(api)
    if not raw_body:
        raise TransformError(f"{api}: empty body")
    return cfg.transformer(raw_body)


class ScienceProxy:
    """Cache-first, rate-gated query front end over the seven APIs."""

    def __init__(self, clock: Clock, transport, cache: Optional[ProxyCache] = None):
        self.clock = clock
        self.transport = transport
        self.cache = cache or ProxyCache()
        self.rate = RateState()

    def rate_gate(self, api: str, now_ms: Optional[int] = None) -> GateDecision:
        cfg = API_CONFIGS.get(api)
        if cfg is None:
            raise UnknownApi(api)
        now = self.clock.now_ms() if now_ms is None else now_ms
        return self.rate.gate(api, now, cfg.min_interval_ms)

    def query(self, api: str, params: dict) -> dict:
        cfg = API_CONFIGS.get(api)
        if cfg is None:
            raise UnknownApi(api)
        key = cache_key(api, params)
        cached = self.cache.get(key, self.clock.now_ms())
        if cached is not None:
            return cached

        url, headers = cfg.url_builder(params)  # may raise SourceUnavailable
        while True:
            decision = self.rate_gate(api)
            if decision.allowed:
                break
            self.clock.sleep_ms(decision.wait_ms)
        status, body = self.transport.request(api, params, url, headers)
        if not (200 <= status < 300):
            raise UpstreamError(f"{api} returned {status}", status=status)
        doc = normalize(api, body)
        self.cache.put(key, doc, self.clock.now_ms())
        return doc
