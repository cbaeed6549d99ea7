import random
from collections import OrderedDict

import pytest

from clawpipe.clock import HOUR_MS, ManualClock
from clawpipe.engine import FIXTURES_DIR
from clawpipe.errors import TransformError, UnknownApi, UpstreamError
from clawpipe.sciproxy import (
    API_CONFIGS,
    FixtureTransport,
    MIN_INTERVAL_MS,
    ProxyCache,
    ScienceProxy,
    cache_key,
    normalize,
)

BIBLIO = FIXTURES_DIR / "biblio"


def _proxy(clock=None, transport=None):
    return ScienceProxy(clock or ManualClock(0), transport or FixtureTransport(BIBLIO))


class TestRateGate:
    def test_table_intervals(self):
        assert MIN_INTERVAL_MS == {
            "crossref": 1000,
            "semantic_scholar": 1000,
            "arxiv": 3000,
            "pubchem": 500,
            "uniprot": 1000,
            "oeis": 2000,
            "materials_project": 1000,
        }

    def test_first_call_allowed(self):
        proxy = _proxy()
        assert proxy.rate_gate("arxiv").allowed

    def test_arxiv_wait_two_seconds_after_one(self):
        clock = ManualClock(0)
        proxy = _proxy(clock)
        assert proxy.rate_gate("arxiv").allowed
        clock.advance(1_000)
        decision = proxy.rate_gate("arxiv")
        assert not decision.allowed
        assert decision.wait_ms == 2_000

    def test_pubchem_allows_after_600ms(self):
        clock = ManualClock(0)
        proxy = _proxy(clock)
        assert proxy.rate_gate("pubchem").allowed
        clock.advance(600)
        assert proxy.rate_gate("pubchem").allowed

    def test_unknown_api(self):
        with pytest.raises(UnknownApi):
            _proxy().rate_gate("geocities")

    @pytest.mark.parametrize("api", sorted(API_CONFIGS))
    def test_five_forced_dispatches_advance_by_four_intervals(self, api):
        clock = ManualClock(0)
        proxy = _proxy(clock)
        start = clock.now_ms()
        for _ in range(5):
            while True:
                decision = proxy.rate_gate(api)
                if decision.allowed:
                    break
                clock.sleep_ms(decision.wait_ms)
        elapsed = clock.now_ms() - start
        assert elapsed == 4 * MIN_INTERVAL_MS[api]  # exact to the clock tick


class _ScriptedTransport:
    def __init__(self, responses):
        self.responses = list(responses)
        self.dispatch_count = 0

    def request(self, api, params, url, headers):
        self.dispatch_count += 1
        return self.responses.pop(0)


class TestQuery:
    def test_cache_hit_avoids_dispatch(self):
        transport = FixtureTransport(BIBLIO)
        proxy = _proxy(transport=transport)
        doc1 = proxy.query("crossref", {"doi": "10.1145/3571730"})
        assert transport.dispatch_count == 1
        doc2 = proxy.query("crossref", {"doi": "10.1145/3571730"})
        assert transport.dispatch_count == 1  # served from cache
        assert doc1 == doc2

    def test_cache_expiry_refetches(self):
        clock = ManualClock(0)
        transport = FixtureTransport(BIBLIO)
        proxy = ScienceProxy(clock, transport)
        proxy.query("crossref", {"doi": "10.1145/3571730"})
        clock.advance(61 * 60 * 1000)
        proxy.query("crossref", {"doi": "10.1145/3571730"})
        assert transport.dispatch_count == 2

    def test_upstream_error_leaves_cache_unchanged(self):
        proxy = _proxy(transport=_ScriptedTransport([(503, "")]))
        with pytest.raises(UpstreamError):
            proxy.query("crossref", {"doi": "10.1/x"})
        assert len(proxy.cache) == 0

    def test_transform_error_leaves_cache_unchanged(self):
        proxy = _proxy(transport=_ScriptedTransport([(200, "not json at all")]))
        with pytest.raises(TransformError):
            proxy.query("crossref", {"doi": "10.1/x"})
        assert len(proxy.cache) == 0

    def test_cache_key_ignores_parameter_order(self):
        assert cache_key("x", {"b": 2, "a": 1}) == cache_key("x", {"a": 1, "b": 2})

    def test_query_is_deterministic_under_fixtures(self):
        a = _proxy().query("arxiv", {"id": "2306.05685"})
        b = _proxy().query("arxiv", {"id": "2306.05685"})
        assert a == b

    def test_materials_project_unavailable_without_key(self, monkeypatch):
        from clawpipe.errors import SourceUnavailable
        from clawpipe.sciproxy import MATERIALS_PROJECT_KEY_ENV

        monkeypatch.delenv(MATERIALS_PROJECT_KEY_ENV, raising=False)
        with pytest.raises(SourceUnavailable):
            _proxy().query("materials_project", {"formula": "Si"})

    def test_materials_project_with_key_uses_fixture(self, monkeypatch):
        from clawpipe.sciproxy import MATERIALS_PROJECT_KEY_ENV

        monkeypatch.setenv(MATERIALS_PROJECT_KEY_ENV, "test-key")
        doc = _proxy().query("materials_project", {"formula": "Si"})
        assert doc["material_id"] == "mp-149"


class TestNormalize:
    def test_crossref_fields(self):
        body = (BIBLIO / "crossref__doi-10.1145-3571730.json").read_text()
        doc = normalize("crossref", body)
        assert set(doc) == {"title", "authors", "year", "venue", "doi", "citation_count"}
        assert doc["year"] == 2023
        assert doc["venue"] == "ACM Computing Surveys"
        assert "Ziwei Ji" in doc["authors"]

    def test_arxiv_fields(self):
        body = (BIBLIO / "arxiv__id-2306.05685.xml").read_text()
        doc = normalize("arxiv", body)
        assert set(doc) == {"title", "authors", "year", "arxiv_id", "abstract"}
        assert doc["arxiv_id"] == "2306.05685"
        assert doc["year"] == 2023
        assert doc["title"] == "Judging LLM-as-a-Judge with MT-Bench and Chatbot Arena"

    def test_semantic_scholar_fields(self):
        body = (
            BIBLIO
            / "semantic_scholar__query-Bitcoin-A-Peer-to-Peer-Electronic-Cash-System.json"
        ).read_text()
        doc = normalize("semantic_scholar", body)
        assert doc["title"] == "Bitcoin: A Peer-to-Peer Electronic Cash System"
        assert doc["year"] == 2008

    def test_pubchem_uniprot_oeis_materials(self):
        doc = normalize("pubchem", (BIBLIO / "pubchem__name-aspirin.json").read_text())
        assert doc == {"compound_id": 2244, "formula": "C9H8O4", "weight": 180.16}
        doc = normalize("uniprot", (BIBLIO / "uniprot__accession-P69905.json").read_text())
        assert doc == {
            "accession": "P69905",
            "name": "Hemoglobin subunit alpha",
            "sequence_length": 142,
        }
        doc = normalize("oeis", (BIBLIO / "oeis__q-id-A000045.json").read_text())
        assert doc["sequence_id"] == "A000045"
        assert doc["terms"][:8] == [0, 1, 1, 2, 3, 5, 8, 13]
        doc = normalize(
            "materials_project",
            (BIBLIO / "materials_project__formula-Si.json").read_text(),
        )
        assert doc == {
            "material_id": "mp-149",
            "formula": "Si",
            "structure_summary": "Fd-3m",
        }

    def test_empty_body(self):
        with pytest.raises(TransformError):
            normalize("crossref", "")

    def test_unknown_api(self):
        with pytest.raises(UnknownApi):
            normalize("myspace", "{}")


class _LruOracle:
    """Reference model: OrderedDict with manual TTL bookkeeping."""

    def __init__(self, capacity, ttl):
        self.capacity = capacity
        self.ttl = ttl
        self.entries = OrderedDict()

    def get(self, key, now):
        if key not in self.entries:
            return None
        value, expiry = self.entries[key]
        if now >= expiry:
            del self.entries[key]
            return None
        self.entries.move_to_end(key)
        return value

    def put(self, key, value, now):
        self.entries[key] = (value, now + self.ttl)
        self.entries.move_to_end(key)
        while len(self.entries) > self.capacity:
            self.entries.popitem(last=False)


class TestProxyCache:
    def test_lru_eviction_at_capacity(self):
        cache = ProxyCache(capacity=3, ttl_ms=HOUR_MS)
        for i in range(4):
            cache.put(f"k{i}", {"i": i}, now_ms=i)
        assert len(cache) == 3
        assert cache.get("k0", now_ms=10) is None  # least recently used dropped
        assert cache.get("k3", now_ms=10) == {"i": 3}

    def test_get_refreshes_recency(self):
        cache = ProxyCache(capacity=2, ttl_ms=HOUR_MS)
        cache.put("a", {}, 0)
        cache.put("b", {}, 1)
        cache.get("a", 2)
        cache.put("c", {}, 3)
        assert cache.get("b", 4) is None
        assert cache.get("a", 4) is not None

    def test_expired_never_served(self):
        cache = ProxyCache(capacity=10, ttl_ms=1_000)
        cache.put("a", {"v": 1}, 0)
        assert cache.get("a", 999) == {"v": 1}
        assert cache.get("a", 1_000) is None

    def test_matches_reference_model_on_random_traces(self):
        rng = random.Random(1234)
        cache = ProxyCache(capacity=50, ttl_ms=500)
        oracle = _LruOracle(capacity=50, ttl=500)
        now = 0
        for step in range(10_000):
            now += rng.randint(0, 20)
            key = f"k{rng.randint(0, 120)}"
            if rng.random() < 0.5:
                value = {"step": step}
                cache.put(key, value, now)
                oracle.put(key, value, now)
            else:
                assert cache.get(key, now) == oracle.get(key, now)
            assert len(cache) <= 50
        assert list(cache._entries) == list(oracle.entries)
