"""Artifact cache, task scheduler, and table orchestration."""

import os

import pytest

from wss import engine, pages, ring
from wss.engine import (
    ArtifactCache,
    RunReport,
    TableConfig,
    Task,
    activate_cache,
    compute_table,
    op,
    run,
)
from wss.formats import result_document
from wss.pages import e2_table


@pytest.fixture(autouse=True)
def isolate_store():
    yield
    ring.set_store(None)
    pages.set_store(None)
    engine._ACTIVE = None
    engine._RANK_MEMO.clear()
    pages._IMAGE_MEMO.clear()
    pages.reset_image_stats()


class TestCache:
    def test_roundtrip(self, tmp_path):
        cache = ArtifactCache(tmp_path)
        assert cache.get("op:x") is None
        cache.put("op:x", b"payload")
        assert cache.get("op:x") == b"payload"
        assert cache.stats["op"] == {"hits": 1, "misses": 1, "puts": 1}

    def test_file_layout(self, tmp_path):
        cache = ArtifactCache(tmp_path)
        cache.put("op:x", b"data")
        lines = cache.path_for("op:x").read_bytes().split(b"\n", 2)
        assert lines[0] == b"op:x"
        assert len(lines[1]) == 64  # sha256 hex of the payload
        assert lines[2] == b"data"

    def test_corrupt_payload_discarded(self, tmp_path):
        cache = ArtifactCache(tmp_path)
        cache.put("op:x", b"data")
        path = cache.path_for("op:x")
        path.write_bytes(path.read_bytes()[:-1] + b"?")
        assert cache.get("op:x") is None
        assert not path.exists()

    def test_key_mismatch_discarded(self, tmp_path):
        cache = ArtifactCache(tmp_path)
        cache.put("op:x", b"data")
        blob = cache.path_for("op:x").read_bytes()
        cache.path_for("op:y").write_bytes(blob)
        assert cache.get("op:y") is None

    def test_put_idempotent(self, tmp_path):
        cache = ArtifactCache(tmp_path)
        cache.put("op:x", b"first")
        cache.put("op:x", b"second")
        assert cache.get("op:x") == b"first"

    def test_objects(self, tmp_path):
        cache = ArtifactCache(tmp_path)
        cache.put_obj("op:t", (1, "two", {3: 4}))
        assert cache.get_obj("op:t") == (1, "two", {3: 4})


class TestTasks:
    def test_key_shape(self):
        with pytest.raises(ValueError, match="op"):
            Task("nocolon")
        with pytest.raises(ValueError, match="cost"):
            Task("a:b", cost="huge")

    def test_duplicate_keys(self):
        with pytest.raises(ValueError, match="duplicate"):
            run([Task("t:a"), Task("t:a")])

    def test_missing_dep(self):
        with pytest.raises(ValueError, match="missing dependency"):
            run([Task("t:a", deps=("t:ghost",))])

    def test_cycle(self):
        with pytest.raises(ValueError, match="cyclic"):
            run([Task("t:a", deps=("t:b",)), Task("t:b", deps=("t:a",))])

    def test_workers_positive(self):
        with pytest.raises(ValueError, match="workers"):
            run([], workers=0)


TRACE: list = []


@op("trace")
def _op_trace(arg):
    TRACE.append(arg)


@op("boom")
def _op_boom(arg):
    raise RuntimeError(f"boom {arg}")


@op("oom-once")
def _op_oom_once(arg):
    # arg is a marker file path; raise MemoryError while it exists
    if os.path.exists(arg):
        os.unlink(arg)
        raise MemoryError


class TestScheduler:
    def test_diamond_order(self):
        TRACE.clear()
        rep = run(
            [
                Task("trace:d", deps=("trace:b", "trace:c")),
                Task("trace:b", deps=("trace:a",)),
                Task("trace:c", deps=("trace:a",)),
                Task("trace:a"),
            ]
        )
        assert rep.ok
        assert TRACE == ["a", "b", "c", "d"]
        assert all(t.attempts == 1 for t in rep.tasks.values())

    def test_failure_skips_dependents(self):
        TRACE.clear()
        rep = run(
            [
                Task("boom:x"),
                Task("trace:after", deps=("boom:x",)),
                Task("trace:free"),
            ]
        )
        assert not rep.ok
        assert rep.tasks["boom:x"].status.startswith("failed: RuntimeError")
        assert rep.tasks["trace:after"].status == "skipped: failed dependency boom:x"
        assert rep.tasks["trace:free"].status == "done"
        assert TRACE == ["free"]

    def test_memory_retry(self, tmp_path):
        marker = tmp_path / "oom"
        marker.touch()
        rep = run([Task(f"oom-once:{marker}", cost="large")])
        assert rep.ok
        assert rep.retries == 1
        assert rep.tasks[f"oom-once:{marker}"].attempts == 2

    def test_retry_ladder_exhausted(self, tmp_path):
        always = tmp_path / "oom"

        @op("oom-always")
        def _op(arg):
            raise MemoryError

        rep = run([Task(f"oom-always:{always}")])
        assert not rep.ok
        task = rep.tasks[f"oom-always:{always}"]
        assert task.status == "failed: retry ladder exhausted"
        assert task.attempts == engine.MAX_ATTEMPTS

    def test_pool_runs_real_ops(self, tmp_path):
        # worker results come back through the shared cache directory
        cache = activate_cache(tmp_path)
        rep = run(
            [Task("ringcert:g=0,n=4,r=0"), Task("ringcert:g=0,n=4,r=1")],
            workers=2,
            cache_dir=str(tmp_path),
        )
        assert rep.ok
        assert cache.get_obj("ringcert:g=0,n=4,r=0") is not None

    def test_pool_persists_warm_certifications(self, tmp_path):
        # a parent with a warm memo forks warm workers; the artifact must
        # still land in the cache the pool was pointed at
        ring._certification(0, 4, 1)
        cache = activate_cache(tmp_path)
        rep = run(
            [Task("ringcert:g=0,n=4,r=1")], workers=2, cache_dir=str(tmp_path)
        )
        assert rep.ok
        assert cache.get_obj("ringcert:g=0,n=4,r=1") is not None

    def test_pool_memory_retry(self, tmp_path):
        marker = tmp_path / "oom"
        marker.touch()
        rep = run(
            [Task(f"oom-once:{marker}", cost="large"), Task("trace:pool")],
            workers=2,
            cache_dir=str(tmp_path),
        )
        assert rep.ok
        assert rep.retries == 1


class TestTables:
    def test_genus0_table(self, tmp_path):
        doc, rep = compute_table(
            TableConfig(0, 5, direction="push"), cache_dir=str(tmp_path)
        )
        assert rep.ok
        lam = (1,) * 5
        assert doc.sectors == {(0, 0, lam): 1, (2, 1, lam): 5, (4, 2, lam): 6}

    def test_matches_direct_page_table(self, tmp_path):
        doc, _ = compute_table(
            TableConfig(1, 2, direction="pull"), cache_dir=str(tmp_path)
        )
        direct = e2_table(1, 2, variant="open", direction="pull")
        want = {
            (q, r, lam): d for q, r, lam, d in direct.sectors if lam == (1, 1)
        }
        assert doc.sectors == want

    def test_worker_count_invariance(self, tmp_path):
        texts = []
        for workers, sub in ((1, "a"), (2, "b")):
            cache = tmp_path / sub
            pages._IMAGE_MEMO.clear()
            engine._RANK_MEMO.clear()
            engine._ACTIVE = None
            doc, rep = compute_table(
                TableConfig(0, 5, direction="push"),
                workers=workers,
                cache_dir=str(cache),
            )
            assert rep.ok
            texts.append(result_document(doc))
        assert texts[0] == texts[1]

    def test_warm_cache_recomputes_nothing(self, tmp_path):
        cfg = TableConfig(1, 2, direction="push")
        compute_table(cfg, cache_dir=str(tmp_path))
        pages._IMAGE_MEMO.clear()
        engine._RANK_MEMO.clear()
        pages.reset_image_stats()
        engine.active_cache().reset_stats()
        doc, rep = compute_table(cfg, cache_dir=str(tmp_path))
        assert rep.ok
        assert pages.IMAGE_STATS["computed"] == 0
        stats = engine.active_cache().stats
        assert stats["rank"]["misses"] == 0

    def test_variant_run_reuses_open_artifacts(self, tmp_path):
        compute_table(TableConfig(2, 0, variant="open"), cache_dir=str(tmp_path))
        pages._IMAGE_MEMO.clear()
        pages.reset_image_stats()
        doc, _ = compute_table(TableConfig(2, 0, variant="ct"), cache_dir=str(tmp_path))
        assert pages.IMAGE_STATS["requests"] > 0
        assert pages.IMAGE_STATS["computed"] == 0
        assert doc.sectors == {(0, 0, ()): 1, (2, 2, ()): 1}

    def test_nontrivial_sectors_and_multiplicities(self, tmp_path):
        doc, _ = compute_table(
            TableConfig(0, 4, lam_set="all"), cache_dir=str(tmp_path)
        )
        # weight-2 degree-1 cell carries the two-dimensional irreducible;
        # the sign representation is absent everywhere
        assert doc.mults[(0, 0, (4,))] == 1
        assert doc.mults[(2, 1, (2, 2))] == 1
        assert all(mu != (1, 1, 1, 1) for (_, _, mu) in doc.mults)

    def test_config_weights_window(self, tmp_path):
        doc, _ = compute_table(
            TableConfig(0, 5, weights=(2, 2)), cache_dir=str(tmp_path)
        )
        assert doc.sectors == {(2, 1, (1,) * 5): 5}
        assert doc.notes == []
