"""Task scheduling and persistent artifact caching.

Cache layout: one file per key, filename = sha256 of the key, line 1 the
key in clear text, line 2 the sha256 of the payload, payload bytes after
that.  Entries failing either check are dropped and recomputed.  The
environment variables WSS_CACHE_DIR and WSS_MEMORY_BUDGET override the
cache location and the default worker memory budget.

The scheduler executes a DAG of keyed tasks on a process pool.  Task
outputs depend only on their keys and every task writes through the
idempotent cache, so reruns resume from disk and worker count cannot
change results.  A task failing with MemoryError is retried after the
allowed number of concurrently running large tasks is halved, down to
serial execution.

Table runs are organized as: ring certifications, then per-graph
differential images, then ranks, then document assembly.  Images are
keyed by (graph, degree, direction) only, so compact-type and
rational-tails runs reuse the open run's artifacts; reuse is visible
through the image counters in wss.pages.
"""

from __future__ import annotations

import hashlib
import os
import pickle
import resource
import time
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from concurrent.futures.process import BrokenProcessPool
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from pathlib import Path

from wss import pages, ring
from wss.formats import (
    ResultDoc,
    encode_graph,
    encode_partition,
    parse_graph,
    parse_partition,
)
from wss.graphs import space_dim
from wss.linalg import rank
from wss.pages import build_page, differential
from wss.repthy import multiplicities, partitions

COSTS = ("small", "medium", "large")
MAX_ATTEMPTS = 3


# -- content-addressed cache -----------------------------------------------


class ArtifactCache:
    """Idempotent content-addressed file cache with per-prefix counters."""

    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.stats: dict[str, dict[str, int]] = {}

    def _count(self, key: str, what: str) -> None:
        prefix = key.split(":", 1)[0]
        bucket = self.stats.setdefault(prefix, {"hits": 0, "misses": 0, "puts": 0})
        bucket[what] += 1

    def reset_stats(self) -> None:
        self.stats = {}

    def path_for(self, key: str) -> Path:
        return self.root / hashlib.sha256(key.encode()).hexdigest()

    def get(self, key: str):
        path = self.path_for(key)
        try:
            blob = path.read_bytes()
        except OSError:
            self._count(key, "misses")
            return None
        head, sep, rest = blob.partition(b"\n")
        csum, sep2, payload = rest.partition(b"\n")
        if (
            not sep
            or not sep2
            or head.decode(errors="replace") != key
            or hashlib.sha256(payload).hexdigest() != csum.decode(errors="replace")
        ):
            # corrupt entry: drop it and recompute
            path.unlink(missing_ok=True)
            self._count(key, "misses")
            return None
        self._count(key, "hits")
        return payload

    def put(self, key: str, payload: bytes) -> None:
        path = self.path_for(key)
        self._count(key, "puts")
        if path.exists():
            return
        blob = (
            key.encode()
            + b"\n"
            + hashlib.sha256(payload).hexdigest().encode()
            + b"\n"
            + payload
        )
        tmp = path.with_suffix(f".tmp{os.getpid()}")
        tmp.write_bytes(blob)
        tmp.replace(path)

    def get_obj(self, key: str):
        payload = self.get(key)
        if payload is None:
            return None
        try:
            return pickle.loads(payload)
        except Exception:
            self.path_for(key).unlink(missing_ok=True)
            return None

    def put_obj(self, key: str, obj) -> None:
        self.put(key, pickle.dumps(obj, protocol=4))


class _ObjStore:
    """get/put object adapter handed to the math modules."""

    def __init__(self, cache: ArtifactCache):
        self.cache = cache

    def get(self, key):
        return self.cache.get_obj(key)

    def put(self, key, obj):
        self.cache.put_obj(key, obj)


_ACTIVE: ArtifactCache | None = None


def activate_cache(root) -> ArtifactCache:
    """Wire a cache directory into the ring and page computations."""
    global _ACTIVE
    cache = ArtifactCache(root)
    store = _ObjStore(cache)
    ring.set_store(store)
    pages.set_store(store)
    _ACTIVE = cache
    return cache


def active_cache() -> ArtifactCache | None:
    return _ACTIVE


def default_cache_dir() -> str:
    return os.environ.get("WSS_CACHE_DIR", ".wss_cache")


def default_memory_budget():
    raw = os.environ.get("WSS_MEMORY_BUDGET")
    return int(raw) if raw else None


# -- tasks -----------------------------------------------------------------


@dataclass(frozen=True)
class Task:
    key: str
    deps: tuple[str, ...] = ()
    cost: str = "small"

    def __post_init__(self):
        if self.cost not in COSTS:
            raise ValueError(f"unknown cost class {self.cost!r}")
        if ":" not in self.key:
            raise ValueError("task key must look like 'op:arguments'")


@dataclass
class TaskReport:
    key: str
    status: str = "pending"
    attempts: int = 0
    seconds: float = 0.0


@dataclass
class RunReport:
    workers: int
    tasks: dict[str, TaskReport] = field(default_factory=dict)
    retries: int = 0

    @property
    def ok(self) -> bool:
        return all(t.status == "done" for t in self.tasks.values())

    def failed(self) -> list[str]:
        return [k for k, t in self.tasks.items() if t.status != "done"]


OPS: dict = {}


def op(name: str):
    def register(fn):
        OPS[name] = fn
        return fn

    return register


def execute_key(key: str) -> None:
    name, _, arg = key.partition(":")
    if name not in OPS:
        raise ValueError(f"unknown operation {name!r}")
    OPS[name](arg)


def _parse_kv(arg: str, sep: str = ",") -> dict:
    out = {}
    for tok in arg.split(sep):
        k, _, v = tok.partition("=")
        out[k] = v
    return out


# worker side: initialized once per process

_WORKER_CACHE_DIR = None


def _worker_init(cache_dir, budget):
    global _WORKER_CACHE_DIR
    _WORKER_CACHE_DIR = cache_dir
    if cache_dir is not None:
        activate_cache(cache_dir)
    if budget:
        resource.setrlimit(resource.RLIMIT_AS, (budget, budget))


def _worker_run(key: str):
    try:
        execute_key(key)
        return ("ok", key, "")
    except MemoryError:
        return ("memerr", key, "")
    except Exception as exc:  # reported, not raised: the pool must survive
        return ("err", key, f"{type(exc).__name__}: {exc}")


class _Dag:
    """Dependency bookkeeping with failure propagation to dependents."""

    def __init__(self, by_key: dict):
        self.by_key = by_key
        self.deps_left = {k: set(t.deps) for k, t in by_key.items()}
        self.dependents: dict[str, list[str]] = {k: [] for k in by_key}
        for k, t in by_key.items():
            for d in t.deps:
                self.dependents[d].append(k)
        self.ready = sorted(k for k, left in self.deps_left.items() if not left)
        self.pending = set(by_key) - set(self.ready)

    def complete(self, key: str):
        newly = []
        for dep in self.dependents[key]:
            left = self.deps_left[dep]
            left.discard(key)
            if not left and dep in self.pending:
                self.pending.discard(dep)
                newly.append(dep)
        self.ready.extend(sorted(newly))

    def fail(self, key: str, report: RunReport):
        frontier = [key]
        while frontier:
            cur = frontier.pop()
            for dep in self.dependents[cur]:
                if dep in self.pending:
                    self.pending.discard(dep)
                    report.tasks[dep].status = f"skipped: failed dependency {key}"
                    frontier.append(dep)


def run(tasks, workers: int = 1, memory_budget=None, cache_dir=None) -> RunReport:
    """Execute a task DAG; see module docstring for the retry ladder."""
    if workers < 1:
        raise ValueError("workers must be positive")
    if memory_budget is None:
        memory_budget = default_memory_budget()
    by_key = {}
    for t in tasks:
        if t.key in by_key:
            raise ValueError(f"duplicate task key {t.key}")
        by_key[t.key] = t
    for t in by_key.values():
        for d in t.deps:
            if d not in by_key:
                raise ValueError(f"missing dependency {d} of {t.key}")
    sorter = TopologicalSorter({k: t.deps for k, t in by_key.items()})
    try:
        sorter.prepare()
    except CycleError as exc:
        raise ValueError(f"cyclic task graph: {exc}") from None

    report = RunReport(workers=workers, tasks={k: TaskReport(k) for k in by_key})
    dag = _Dag(by_key)

    if workers == 1:
        while dag.ready:
            key = dag.ready.pop(0)
            if _run_serial(by_key[key], report):
                dag.complete(key)
            else:
                dag.fail(key, report)
        return report

    allowed_large = workers
    pool = ProcessPoolExecutor(
        max_workers=workers,
        initializer=_worker_init,
        initargs=(cache_dir, memory_budget),
    )
    running: dict = {}
    started: dict[str, float] = {}
    try:
        while dag.ready or running:
            held = []
            for key in dag.ready:
                large_now = sum(
                    1 for k in running.values() if by_key[k].cost == "large"
                )
                if by_key[key].cost == "large" and large_now >= allowed_large:
                    held.append(key)
                    continue
                fut = pool.submit(_worker_run, key)
                running[fut] = key
                started[key] = time.monotonic()
                report.tasks[key].attempts += 1
            dag.ready = held
            if not running:
                break
            done, _ = wait(running, return_when=FIRST_COMPLETED)
            pool_broken = False
            for fut in done:
                key = running.pop(fut)
                t = report.tasks[key]
                t.seconds += time.monotonic() - started.pop(key)
                try:
                    status, _, detail = fut.result()
                except BrokenProcessPool:
                    # worker died outright (hard OOM kill): memory retry
                    status, detail = "memerr", ""
                    pool_broken = True
                except Exception as exc:
                    status, detail = "err", repr(exc)
                if status == "ok":
                    t.status = "done"
                    dag.complete(key)
                elif status == "memerr":
                    report.retries += 1
                    allowed_large = max(1, allowed_large // 2)
                    if t.attempts >= MAX_ATTEMPTS:
                        t.status = "failed: retry ladder exhausted"
                        dag.fail(key, report)
                    else:
                        dag.ready.append(key)
                else:
                    t.status = f"failed: {detail}"
                    dag.fail(key, report)
            if pool_broken:
                for fut, key in list(running.items()):
                    t = report.tasks[key]
                    t.seconds += time.monotonic() - started.pop(key)
                    report.retries += 1
                    if t.attempts >= MAX_ATTEMPTS:
                        t.status = "failed: retry ladder exhausted"
                        dag.fail(key, report)
                    else:
                        dag.ready.append(key)
                running.clear()
                allowed_large = max(1, allowed_large // 2)
                pool.shutdown(wait=False, cancel_futures=True)
                pool = ProcessPoolExecutor(
                    max_workers=workers,
                    initializer=_worker_init,
                    initargs=(cache_dir, memory_budget),
                )
    finally:
        pool.shutdown(wait=True, cancel_futures=True)
    return report


def _run_serial(task: Task, report: RunReport) -> bool:
    t = report.tasks[task.key]
    while t.attempts < MAX_ATTEMPTS:
        t.attempts += 1
        t0 = time.monotonic()
        try:
            execute_key(task.key)
            t.status = "done"
            return True
        except MemoryError:
            report.retries += 1
        except Exception as exc:
            t.status = f"failed: {type(exc).__name__}: {exc}"
            return False
        finally:
            t.seconds += time.monotonic() - t0
    t.status = "failed: retry ladder exhausted"
    return False


# -- operations ------------------------------------------------------------


@op("ringcert")
def _op_ringcert(arg: str) -> None:
    kv = _parse_kv(arg)
    g, n, r = int(kv["g"]), int(kv["n"]), int(kv["r"])
    ring._certification(g, n, r)
    ring.ensure_stored(g, n, r)


@op("pushimg")
def _op_pushimg(arg: str) -> None:
    token, _, rpart = arg.partition("|R=")
    pages._image(parse_graph(token), int(rpart), "push")


@op("pullimg")
def _op_pullimg(arg: str) -> None:
    token, _, rpart = arg.partition("|R=")
    pages._image(parse_graph(token), int(rpart), "pull")


def _rank_key(g, n, q, lam, variant, direction, i) -> str:
    return (
        f"rank:g={g},n={n},q={q},lam={encode_partition(lam)},"
        f"variant={variant},direction={direction},i={i}"
    )


_RANK_MEMO: dict = {}


@op("rank")
def _op_rank(arg: str) -> None:
    kv = _parse_kv(arg)
    g, n, q, i = int(kv["g"]), int(kv["n"]), int(kv["q"]), int(kv["i"])
    lam = parse_partition(kv["lam"])
    variant, direction = kv["variant"], kv["direction"]
    key = "rank:" + arg
    if _ACTIVE is not None and _ACTIVE.get_obj(key) is not None:
        return
    terms = build_page(g, n, q, lam, variant, direction)
    if direction == "push":
        mat = differential(terms[i + 1], terms[i])
        r = rank(mat, terms[i].dim)
    else:
        mat = differential(terms[i], terms[i + 1])
        r = rank(mat, terms[i + 1].dim)
    _RANK_MEMO[key] = r
    if _ACTIVE is not None:
        _ACTIVE.put_obj(key, r)


def _get_rank(g, n, q, lam, variant, direction, i) -> int:
    key = _rank_key(g, n, q, lam, variant, direction, i)
    if _ACTIVE is not None:
        got = _ACTIVE.get_obj(key)
        if got is not None:
            return got
    if key in _RANK_MEMO:
        return _RANK_MEMO[key]
    _op_rank(key.partition(":")[2])
    return _RANK_MEMO[key]


# -- table orchestration ---------------------------------------------------


@dataclass(frozen=True)
class TableConfig:
    g: int
    n: int
    variant: str = "open"
    direction: str = "push"
    weights: tuple[int, int] | None = None  # inclusive; default 0..2d
    lam_set: tuple = ()  # () = trivial sector only; "all" = every partition
    exhaustive: bool = False  # compute sectors even at empty trivial cells

    def weight_bounds(self) -> tuple[int, int]:
        if self.weights is not None:
            return self.weights
        return (0, 2 * space_dim(self.g, self.n))

    def lams(self) -> tuple:
        # the unsymmetrized sector comes first: phase one gates the other
        # sectors on its nonzero weights
        n = self.n
        trivial = (1,) * n if n else ()
        if self.lam_set == "all":
            rest = list(partitions(n)) if n else [()]
        else:
            rest = [tuple(l) for l in self.lam_set]
        seen = [trivial]
        for lam in rest:
            if lam not in seen:
                seen.append(lam)
        return tuple(seen)


def _even_weights(cfg: TableConfig):
    lo, hi = cfg.weight_bounds()
    start = lo + (lo % 2)
    return range(start, hi + 1, 2)


def _sector_tasks(cfg: TableConfig, q: int, lam) -> list[Task]:
    """Image and rank tasks for one (q, lam) page, with dependencies."""
    g, n = cfg.g, cfg.n
    terms = build_page(g, n, q, lam, cfg.variant, cfg.direction)
    tasks: list[Task] = []
    pairs = range(len(terms) - 1)
    for i in pairs:
        src = terms[i + 1] if cfg.direction == "push" else terms[i]
        if src.dim == 0:
            continue
        deps = []
        kind = "pushimg" if cfg.direction == "push" else "pullimg"
        for block in src.blocks:
            for member, _ in block.members:
                key = f"{kind}:{encode_graph(member)}|R={block.rdegree}"
                cost = "large" if member.n_edges <= 1 else "medium"
                tasks.append(Task(key, (), cost))
                deps.append(key)
        tasks.append(
            Task(
                _rank_key(g, n, q, lam, cfg.variant, cfg.direction, i),
                tuple(sorted(set(deps))),
                "large",
            )
        )
    return tasks


def _dedupe(tasks) -> list[Task]:
    out = {}
    for t in tasks:
        prev = out.get(t.key)
        if prev is None or len(t.deps) > len(prev.deps):
            out[t.key] = t
    return list(out.values())


def _sector_dims(cfg: TableConfig, q: int, lam) -> dict:
    """(q, r, lam) -> nonzero E2 dims, ranks read from the store."""
    g, n = cfg.g, cfg.n
    terms = build_page(g, n, q, lam, cfg.variant, cfg.direction)
    ranks = []
    for i in range(len(terms) - 1):
        src = terms[i + 1] if cfg.direction == "push" else terms[i]
        tgt = terms[i] if cfg.direction == "push" else terms[i + 1]
        if src.dim == 0 or tgt.dim == 0:
            ranks.append(0)
            continue
        ranks.append(_get_rank(g, n, q, lam, cfg.variant, cfg.direction, i))
    out = {}
    for p, term in enumerate(terms):
        dim = term.dim
        if p > 0:
            dim -= ranks[p - 1]
        if p < len(ranks):
            dim -= ranks[p]
        if dim:
            r = q - p if cfg.direction == "push" else q + p
            out[(q, r, lam)] = dim
    return out


def compute_table(
    cfg: TableConfig,
    workers: int = 1,
    memory_budget=None,
    cache_dir=None,
) -> tuple[ResultDoc, RunReport]:
    """Weight table run: schedule certifications, images, and ranks, then
    assemble the result document.  Nontrivial sectors are scheduled only at
    weights where the trivial sector is nonzero unless cfg.exhaustive."""
    if cache_dir is None and _ACTIVE is not None:
        cache_dir = str(_ACTIVE.root)
    if cache_dir is None and workers > 1:
        # worker results reach the parent only through the cache
        cache_dir = default_cache_dir()
    if cache_dir is not None and _ACTIVE is None:
        activate_cache(cache_dir)
    lams = cfg.lams()
    trivial = lams[0]

    phase1 = _dedupe(
        [t for q in _even_weights(cfg) for t in _sector_tasks(cfg, q, trivial)]
    )
    rep = run(phase1, workers=workers, memory_budget=memory_budget, cache_dir=cache_dir)
    report = rep
    if not rep.ok:
        raise RuntimeError(f"table run failed: {rep.failed()[:3]}")

    sectors: dict = {}
    for q in _even_weights(cfg):
        sectors.update(_sector_dims(cfg, q, trivial))

    rest = [lam for lam in lams[1:]]
    if rest:
        wanted = []
        for q in _even_weights(cfg):
            if cfg.exhaustive or any(k[0] == q for k in sectors):
                wanted.extend((q, lam) for lam in rest)
        phase2 = _dedupe([t for q, lam in wanted for t in _sector_tasks(cfg, q, lam)])
        rep2 = run(
            phase2, workers=workers, memory_budget=memory_budget, cache_dir=cache_dir
        )
        report.tasks.update(rep2.tasks)
        report.retries += rep2.retries
        if not rep2.ok:
            raise RuntimeError(f"table run failed: {rep2.failed()[:3]}")
        for q, lam in wanted:
            sectors.update(_sector_dims(cfg, q, lam))

    doc = ResultDoc(
        space=(cfg.g, cfg.n),
        variant=cfg.variant,
        direction=cfg.direction,
        weights=cfg.weight_bounds(),
        sectors=sectors,
    )
    if cfg.n and set(lams) >= set(partitions(cfg.n)):
        cells = sorted({(q, r) for q, r, _ in sectors})
        for q, r in cells:
            dims = {lam: sectors.get((q, r, lam), 0) for lam in partitions(cfg.n)}
            for mu, m in multiplicities(dims).items():
                if m:
                    doc.mults[(q, r, mu)] = m
    lo, hi = cfg.weight_bounds()
    if any(q % 2 for q in range(lo, hi + 1)):
        doc.notes.append("odd weights are structurally zero in scope")
    return doc, report
