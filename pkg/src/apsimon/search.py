"""Branch-and-bound search for minimum-cost weighing schemes.

Mint vectors are chosen in strictly increasing order of ``(max, entries...)``
(duplicate columns always collide, so strictness loses nothing). Within the
vectors sharing a maximum the order is plain lexicographic, which lets the
row-permutation symmetry be broken one completed level at a time: the chosen
sequence must be lexicographically >= its image under every row permutation.

Feasibility is maintained incrementally. A partial state keeps every subset
sum of the chosen prefix together with the set of their canonical directions;
adding a vector ``v`` creates the sums ``s + v`` and each must land on a fresh
direction.
"""

from __future__ import annotations

import enum
import itertools
import json
import logging
import math
import multiprocessing
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

from .core import (
    ENTRY_MAX,
    CostKind,
    IntVector,
    Scheme,
    bounds,
    cost,
    factorial_scheme,
    verify_scheme,
)

log = logging.getLogger(__name__)

TIME_CHECK_EVERY = 1 << 14
SHARED_SYNC_EVERY = 1 << 10
CHECKPOINT_VERSION = 1


class ConfigError(ValueError):
    pass


class Status(enum.Enum):
    OPTIMAL = "Optimal"
    BEST_SO_FAR = "BestSoFar"
    INFEASIBLE = "Infeasible"


@dataclass
class SearchConfig:
    n_mints: int
    cost_kind: CostKind = CostKind.TOTAL_MAX
    cap: Optional[int] = None
    node_limit: Optional[int] = None
    time_limit: Optional[float] = None
    initial_upper_bound: Optional[int] = None
    threads: int = 1

    def validate(self) -> None:
        if not isinstance(self.n_mints, int) or self.n_mints < 1:
            raise ConfigError(f"n_mints must be a positive integer, got {self.n_mints!r}")
        if not isinstance(self.cost_kind, CostKind):
            raise ConfigError(f"unknown cost kind {self.cost_kind!r}")
        if self.cap is not None and (not isinstance(self.cap, int) or self.cap < 1):
            raise ConfigError(f"cap must be >= 1, got {self.cap!r}")
        if self.cap is not None and self.cap > ENTRY_MAX:
            raise ConfigError(f"cap exceeds ENTRY_MAX={ENTRY_MAX}")
        if self.node_limit is not None and self.node_limit <= 0:
            raise ConfigError("node_limit must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ConfigError("time_limit must be positive")
        if self.initial_upper_bound is not None and self.initial_upper_bound < 1:
            raise ConfigError("initial_upper_bound must be positive")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")


@dataclass
class SearchStats:
    nodes: int = 0
    elapsed: float = 0.0
    pruned: dict = field(default_factory=lambda: {"bound": 0, "conflict": 0, "symmetry": 0})

    def merge(self, other: "SearchStats") -> None:
        self.nodes += other.nodes
        for key, val in other.pruned.items():
            self.pruned[key] = self.pruned.get(key, 0) + val

    def to_json(self) -> dict:
        return {"nodes": self.nodes, "elapsed_ms": round(self.elapsed * 1000), "pruned": dict(self.pruned)}


@dataclass
class SearchResult:
    status: Status
    best_cost: Optional[int] = None
    best_scheme: Optional[Scheme] = None
    stats: SearchStats = field(default_factory=SearchStats)

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "best_cost": self.best_cost,
            "scheme": self.best_scheme.to_json() if self.best_scheme is not None else None,
            "stats": self.stats.to_json(),
        }


@dataclass(frozen=True)
class PartialState:
    """Chosen mint vectors plus all subset sums of the prefix.

    ``sums`` starts with the zero vector (the empty subset); ``directions``
    holds the canonical directions of the non-empty sums.
    """

    vectors: tuple[IntVector, ...] = ()
    sums: tuple[IntVector, ...] = ((0, 0),)
    directions: frozenset = frozenset()
    cost: int = 0

    @classmethod
    def empty(cls, k: int = 2) -> "PartialState":
        return cls(sums=((0,) * k,))


def extend_directions(sums: Sequence[IntVector], dirs, v: IntVector):
    """New sums and directions after adding ``v``, or None on a collinear collision."""
    if len(v) == 2:
        p, q = v
        gcd = math.gcd
        new_sums = []
        new_dirs = set()
        for a, b in sums:
            a += p
            b += q
            g = gcd(a, b)
            d = (a // g, b // g)
            if d in dirs or d in new_dirs:
                return None
            new_dirs.add(d)
            new_sums.append((a, b))
        return new_sums, new_dirs
    new_sums = []
    new_dirs = set()
    for s in sums:
        t = tuple(x + y for x, y in zip(s, v))
        g = math.gcd(*t)
        d = tuple(x // g for x in t)
        if d in dirs or d in new_dirs:
            return None
        new_dirs.add(d)
        new_sums.append(t)
    return new_sums, new_dirs


def extend(state: PartialState, v: Sequence[int], kind: CostKind = CostKind.TOTAL_MAX) -> Optional[PartialState]:
    """Add one mint vector to a feasible prefix; None means the prefix becomes infeasible."""
    v = tuple(v)
    if any(x < 0 for x in v) or not any(v):
        raise ValueError(f"mint vector must be non-negative and nonzero, got {v}")
    if len(v) != len(state.sums[0]):
        raise ValueError("vector length does not match the state's weighing count")
    if max(v) > ENTRY_MAX:
        raise OverflowError(f"coin count exceeds ENTRY_MAX={ENTRY_MAX}")
    out = extend_directions(state.sums, state.directions, v)
    if out is None:
        return None
    new_sums, new_dirs = out
    step = sum(v) if kind is CostKind.GRAND_SUM else max(v)
    if kind is CostKind.MAX_ENTRY:
        total = max(state.cost, step)
    else:
        total = state.cost + step
    return PartialState(
        vectors=state.vectors + (v,),
        sums=state.sums + tuple(new_sums),
        directions=state.directions | new_dirs,
        cost=total,
    )


# ---------------------------------------------------------------- vector order


@lru_cache(maxsize=None)
def level_vectors(m: int, k: int = 2) -> tuple[IntVector, ...]:
    """All non-negative k-vectors with maximum entry exactly m, in lexicographic order."""
    if k == 2:
        return tuple([(p, m) for p in range(m)] + [(m, q) for q in range(m + 1)])
    return tuple(v for v in itertools.product(range(m + 1), repeat=k) if max(v) == m)


@lru_cache(maxsize=None)
def _level_index(m: int, k: int) -> dict:
    return {v: i for i, v in enumerate(level_vectors(m, k))}


def _row_perms(k: int) -> tuple[tuple[int, ...], ...]:
    return tuple(p for p in itertools.permutations(range(k)) if p != tuple(range(k)))


def _close_level(group: Sequence[IntVector], tied: tuple) -> Optional[tuple]:
    """Compare a completed level against its row-permuted images.

    Returns the permutations still tied, or None if some permutation yields a
    larger sequence (the prefix is not the lex-leader of its orbit).
    """
    still = []
    for perm in tied:
        image = sorted(tuple(v[j] for j in perm) for v in group)
        if list(group) < image:
            return None
        if list(group) == image:
            still.append(perm)
    return tuple(still)


class _BudgetExhausted(Exception):
    pass


class _Found(Exception):
    pass


class _Engine:
    """Depth-first search over increasing vector sequences.

    ``mode`` is "collinear" (unknown epsilon) or "injective" (known epsilon).
    ``limit`` is exclusive: only schemes with cost < limit are accepted. With
    ``first_only`` the search stops at the first complete scheme.
    """

    def __init__(self, n, k=2, kind=CostKind.TOTAL_MAX, cap=None, limit=None,
                 mode="collinear", first_only=False, node_limit=None, deadline=None,
                 shared=None):
        self.n = n
        self.k = k
        self.kind = kind
        self.cap = cap
        self.limit = limit if limit is not None else math.inf
        self.mode = mode
        self.first_only = first_only
        self.node_limit = node_limit
        self.deadline = deadline
        self.shared = shared
        self.shared_limit = math.inf
        self.best_cost: Optional[int] = None
        self.best_columns: Optional[tuple] = None
        self.stats = SearchStats()
        self.perms = _row_perms(k)
        self.max_level = cap if cap is not None else ENTRY_MAX
        self._since_sync = 0

    # bound used for pruning: own incumbent (>=) and other workers' incumbent (>)
    def _cut(self):
        return min(self.limit, self.shared_limit)

    def _tick(self):
        stats = self.stats
        stats.nodes += 1
        if self.node_limit is not None and stats.nodes > self.node_limit:
            raise _BudgetExhausted
        if self.deadline is not None and stats.nodes % TIME_CHECK_EVERY == 0:
            if time.monotonic() > self.deadline:
                raise _BudgetExhausted
        if self.shared is not None:
            self._since_sync += 1
            if self._since_sync >= SHARED_SYNC_EVERY:
                self._sync()

    def _sync(self):
        self._since_sync = 0
        value = self.shared.value
        if value > 0:
            self.shared_limit = value + 1

    def _publish(self, c):
        if self.shared is None:
            return
        with self.shared.get_lock():
            if self.shared.value <= 0 or c < self.shared.value:
                self.shared.value = c

    def _empty_state(self):
        zero = (0,) * self.k
        if self.mode == "collinear":
            return [zero], set()
        return [zero], {zero}

    def _extend(self, sums, seen, v):
        if self.mode == "collinear":
            return extend_directions(sums, seen, v)
        new = []
        for s in sums:
            t = tuple(x + y for x, y in zip(s, v))
            if t in seen:
                return None
            new.append(t)
        return new, set(new)

    def first_level(self) -> list[IntVector]:
        """Candidate first vectors that can still lead to a scheme under the current bound."""
        out = []
        m = 1
        while m <= self.max_level and self.n * m < self._cut():
            out.extend(level_vectors(m, self.k))
            m += 1
        return out

    def run_branch(self, v0: IntVector) -> None:
        m0 = max(v0)
        if self.n * m0 >= self._cut():
            self.stats.pruned["bound"] += 1
            return
        if self.kind is CostKind.GRAND_SUM and sum(v0) + (self.n - 1) * m0 >= self._cut():
            self.stats.pruned["bound"] += 1
            return
        sums, seen = self._empty_state()
        new_sums, new_seen = self._extend(sums, seen, v0)
        self._tick()
        self._expand([v0], sums + new_sums, seen | new_seen, self._vcost(v0), self.perms)

    def _vcost(self, v):
        return sum(v) if self.kind is CostKind.GRAND_SUM else max(v)

    def _expand(self, chosen, sums, seen, acc, tied):
        n_left = self.n - len(chosen)
        last = chosen[-1]
        level = max(last)
        if n_left == 0:
            group = [v for v in chosen if max(v) == level]
            if tied and _close_level(group, tied) is None:
                self.stats.pruned["symmetry"] += 1
                return
            self._accept(chosen, acc)
            return
        k = self.k
        grand = self.kind is CostKind.GRAND_SUM
        m = level
        start = _level_index(level, k)[last] + 1
        next_tied = tied
        closed = False
        pruned = self.stats.pruned
        while m <= self.max_level:
            if acc + n_left * m >= self._cut():
                pruned["bound"] += 1
                break
            if m > level and not closed:
                closed = True
                if tied:
                    group = [v for v in chosen if max(v) == level]
                    next_tied = _close_level(group, tied)
                    if next_tied is None:
                        pruned["symmetry"] += 1
                        return
            vecs = level_vectors(m, k)
            for i in range(start, len(vecs)):
                v = vecs[i]
                if grand:
                    step = v[0] + v[1] if k == 2 else sum(v)
                    if acc + step + (n_left - 1) * m >= self._cut():
                        pruned["bound"] += 1
                        continue
                else:
                    step = m
                    if acc + n_left * m >= self._cut():
                        break
                out = self._extend(sums, seen, v)
                if out is None:
                    pruned["conflict"] += 1
                    continue
                self._tick()
                new_sums, new_seen = out
                chosen.append(v)
                self._expand(chosen, sums + new_sums, seen | new_seen, acc + step,
                             next_tied if m > level else tied)
                chosen.pop()
            m += 1
            start = 0

    def _accept(self, chosen, acc):
        c = acc
        if self.kind is CostKind.MAX_ENTRY:
            c = max(max(v) for v in chosen)
        self.best_cost = c
        self.best_columns = tuple(chosen)
        if not self.first_only:
            self.limit = c
            self._publish(c)
        else:
            raise _Found


# ---------------------------------------------------------------- checkpoints


def _config_key(config: SearchConfig) -> dict:
    return {"n_mints": config.n_mints, "cost_kind": config.cost_kind.value, "cap": config.cap}


def write_checkpoint(path, config: SearchConfig, frontier, best_cost, best_scheme, stats: SearchStats) -> None:
    data = {
        "version": CHECKPOINT_VERSION,
        "config": _config_key(config),
        "frontier": [list(v) for v in frontier],
        "incumbent": {
            "cost": best_cost,
            "scheme": best_scheme.to_json() if best_scheme is not None else None,
        },
        "stats": {"nodes": stats.nodes},
    }
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        json.dump(data, fh)
    os.replace(tmp, path)


def read_checkpoint(path) -> dict:
    with open(path) as fh:
        data = json.load(fh)
    if data.get("version") != CHECKPOINT_VERSION:
        raise ConfigError(f"unsupported checkpoint version {data.get('version')!r}")
    return data


# ---------------------------------------------------------------- drivers

_WORKER_SHARED = None


def _init_worker(shared):
    global _WORKER_SHARED
    _WORKER_SHARED = shared


def _run_branch_task(args):
    n, kind, cap, limit, v0, node_limit, deadline = args
    eng = _Engine(n, kind=kind, cap=cap, limit=limit, node_limit=node_limit,
                  deadline=deadline, shared=_WORKER_SHARED)
    eng._sync()
    exhausted = False
    try:
        eng.run_branch(tuple(v0))
    except _BudgetExhausted:
        exhausted = True
    return tuple(v0), eng.best_cost, eng.best_columns, eng.stats, exhausted


def _order_key(c, columns):
    return (c, [(max(v), *v) for v in columns])


def _default_bound(config: SearchConfig):
    """Fallback scheme and its cost (cost bound used when no fallback fits the cap)."""
    n = config.n_mints
    try:
        fallback = factorial_scheme(n)
    except OverflowError:
        fallback = None
    if fallback is not None and config.cap is not None and cost(fallback, CostKind.MAX_ENTRY) > config.cap:
        fallback = None
    if fallback is not None:
        return fallback, cost(fallback, config.cost_kind)
    _, upper = bounds(n)
    if config.cost_kind is CostKind.GRAND_SUM:
        upper += n
    return None, upper


def search_optimal(config: SearchConfig, checkpoint=None, resume=None,
                   checkpoint_interval: float = 60.0) -> SearchResult:
    """Minimum-cost feasible scheme for ``config``.

    TotalMax and GrandSum run a single branch-and-bound seeded with the
    factorial construction; MaxEntry searches over the coin cap instead.
    """
    config.validate()
    if config.cost_kind is CostKind.MAX_ENTRY:
        return _search_max_entry(config)
    t0 = time.monotonic()
    deadline = t0 + config.time_limit if config.time_limit else None
    fallback, fallback_cost = _default_bound(config)
    limit = fallback_cost + 1
    if config.initial_upper_bound is not None:
        limit = min(limit, config.initial_upper_bound + 1)

    stats = SearchStats()
    best_cost = None
    best_cols = None
    frontier = None
    if resume is not None:
        data = read_checkpoint(resume) if not isinstance(resume, dict) else resume
        if data["config"] != _config_key(config):
            raise ConfigError(f"checkpoint is for {data['config']}, not {_config_key(config)}")
        inc = data["incumbent"]
        if inc["scheme"] is not None:
            sch = Scheme.from_json(inc["scheme"])
            best_cost, best_cols = inc["cost"], sch.columns
            limit = min(limit, best_cost)
        frontier = [tuple(v) for v in data["frontier"]]
        stats.nodes = data["stats"].get("nodes", 0)

    probe = _Engine(config.n_mints, kind=config.cost_kind, cap=config.cap, limit=limit)
    if frontier is None:
        frontier = probe.first_level()

    exhausted = False
    if config.threads == 1:
        eng = _Engine(config.n_mints, kind=config.cost_kind, cap=config.cap, limit=limit,
                      node_limit=config.node_limit, deadline=deadline)
        eng.stats.nodes = stats.nodes
        eng.best_cost, eng.best_columns = best_cost, best_cols
        last_ckpt = time.monotonic()
        remaining = list(frontier)
        while remaining:
            v0 = remaining[0]
            try:
                eng.run_branch(v0)
            except _BudgetExhausted:
                exhausted = True
                break
            remaining.pop(0)
            if checkpoint is not None and time.monotonic() - last_ckpt >= checkpoint_interval:
                _ckpt(checkpoint, config, remaining, eng)
                last_ckpt = time.monotonic()
        stats = eng.stats
        best_cost, best_cols = eng.best_cost, eng.best_columns
        if checkpoint is not None:
            _ckpt(checkpoint, config, remaining, eng)
    else:
        best_cost, best_cols, stats, exhausted = _parallel(
            config, frontier, limit, best_cost, best_cols, stats, deadline, checkpoint)

    stats.elapsed = time.monotonic() - t0
    if best_cost is None and config.initial_upper_bound is not None and not exhausted \
            and limit <= fallback_cost:
        # nothing at or below the user's bound; fall back to the full search
        log.info("no scheme within initial upper bound %s; rerunning", config.initial_upper_bound)
        retry = SearchConfig(**{**config.__dict__, "initial_upper_bound": None})
        result = search_optimal(retry)
        result.stats.merge(stats)
        return result

    if best_cost is not None:
        scheme = Scheme.from_columns(best_cols)
        return SearchResult(Status.BEST_SO_FAR if exhausted else Status.OPTIMAL, best_cost, scheme, stats)
    if exhausted:
        if fallback is not None:
            return SearchResult(Status.BEST_SO_FAR, fallback_cost, fallback, stats)
        return SearchResult(Status.BEST_SO_FAR, None, None, stats)
    return SearchResult(Status.INFEASIBLE, None, None, stats)


def _ckpt(path, config, remaining, eng):
    cut = eng.limit
    n = config.n_mints
    live = [v for v in remaining if n * max(v) < cut]
    scheme = Scheme.from_columns(eng.best_columns) if eng.best_columns is not None else None
    write_checkpoint(path, config, live, eng.best_cost, scheme, eng.stats)


def _parallel(config, frontier, limit, best_cost, best_cols, stats, deadline, checkpoint):
    shared = multiprocessing.Value("q", best_cost if best_cost is not None else 0)
    tasks = [(config.n_mints, config.cost_kind, config.cap, limit, v, config.node_limit, deadline)
             for v in frontier]
    remaining = {tuple(v) for v in frontier}
    exhausted = False
    candidates = []
    if best_cost is not None:
        candidates.append(_order_key(best_cost, best_cols) + (best_cols,))
    with ProcessPoolExecutor(max_workers=config.threads, initializer=_init_worker,
                             initargs=(shared,)) as pool:
        for v0, c, cols, st, hit in pool.map(_run_branch_task, tasks, chunksize=1):
            stats.merge(st)
            if hit:
                exhausted = True
            else:
                remaining.discard(v0)
            if c is not None:
                candidates.append(_order_key(c, cols) + (cols,))
            if checkpoint is not None:
                top = min(candidates) if candidates else None
                sch = Scheme.from_columns(top[2]) if top else None
                order = [tuple(v) for v in frontier if tuple(v) in remaining]
                write_checkpoint(checkpoint, config, order, top[0] if top else None, sch, stats)
    if not candidates:
        return None, None, stats, exhausted
    c, _, cols = min(candidates)
    return c, cols, stats, exhausted


def exists_scheme(n: int, cap: int, k: int = 2, mode: str = "collinear",
                  node_limit=None, deadline=None, stats: Optional[SearchStats] = None):
    """First feasible scheme (in canonical order) with every entry <= cap, or None.

    Raises ``_BudgetExhausted`` when the limits run out before an answer.
    """
    eng = _Engine(n, k=k, kind=CostKind.MAX_ENTRY, cap=cap, mode=mode, first_only=True,
                  node_limit=node_limit, deadline=deadline)
    try:
        for v0 in level_iter(cap, k):
            eng.run_branch(v0)
    except _Found:
        return Scheme.from_columns(eng.best_columns)
    finally:
        if stats is not None:
            stats.merge(eng.stats)
    return None


def level_iter(cap: int, k: int = 2):
    for m in range(1, cap + 1):
        yield from level_vectors(m, k)


def _search_max_entry(config: SearchConfig) -> SearchResult:
    t0 = time.monotonic()
    deadline = t0 + config.time_limit if config.time_limit else None
    stats = SearchStats()
    n = config.n_mints
    hi_cap = config.cap if config.cap is not None else ENTRY_MAX

    def test(c):
        left = None
        if config.node_limit is not None:
            left = config.node_limit - stats.nodes
            if left <= 0:
                raise _BudgetExhausted
        return exists_scheme(n, c, node_limit=left, deadline=deadline, stats=stats)

    # every column needs its own direction, so at least n distinct primitive
    # vectors must fit under the cap; start from the factorial bound above
    lo = 1
    best_c, best_s = None, None
    try:
        fb, _ = _default_bound(config)
        hi = cost(fb, CostKind.MAX_ENTRY) if fb is not None else None
        if hi is None:
            # exponential probe up to the cap
            c = 1
            while c <= hi_cap:
                s = test(c)
                if s is not None:
                    hi = c
                    best_c, best_s = c, s
                    break
                lo = c + 1
                c = min(2 * c, hi_cap) if c < hi_cap else hi_cap + 1
            if hi is None:
                stats.elapsed = time.monotonic() - t0
                return SearchResult(Status.INFEASIBLE, None, None, stats)
        else:
            best_c, best_s = hi, fb
        while lo < hi:
            mid = (lo + hi) // 2
            s = test(mid)
            if s is None:
                lo = mid + 1
            else:
                hi = mid
                best_c, best_s = mid, s
        if best_s is not None and best_s is fb:
            # the fallback is not in canonical order; replace it by the search's representative
            best_s = test(best_c)
    except _BudgetExhausted:
        stats.elapsed = time.monotonic() - t0
        return SearchResult(Status.BEST_SO_FAR, best_c, best_s, stats)
    stats.elapsed = time.monotonic() - t0
    return SearchResult(Status.OPTIMAL, best_c, best_s, stats)


@dataclass
class CapacityResult:
    cap: int
    max_mints: Optional[int]
    witness: Optional[Scheme]
    proven: bool
    stats: SearchStats = field(default_factory=SearchStats)

    def to_json(self) -> dict:
        return {
            "cap": self.cap,
            "max_mints": self.max_mints,
            "status": "Optimal" if self.proven else "BestSoFar",
            "scheme": self.witness.to_json() if self.witness is not None else None,
            "stats": self.stats.to_json(),
        }


def capacity_max_mints(cap: int, node_limit: Optional[int] = None,
                       time_limit: Optional[float] = None) -> CapacityResult:
    """Largest number of mints testable with every coin count <= cap."""
    if not isinstance(cap, int) or cap < 1:
        raise ConfigError(f"cap must be >= 1, got {cap!r}")
    t0 = time.monotonic()
    deadline = t0 + time_limit if time_limit else None
    stats = SearchStats()
    best_n, witness = None, None
    n = 1
    try:
        while True:
            left = None if node_limit is None else node_limit - stats.nodes
            if left is not None and left <= 0:
                raise _BudgetExhausted
            s = exists_scheme(n, cap, node_limit=left, deadline=deadline, stats=stats)
            if s is None:
                break
            best_n, witness = n, s
            n += 1
    except _BudgetExhausted:
        stats.elapsed = time.monotonic() - t0
        return CapacityResult(cap, best_n, witness, False, stats)
    stats.elapsed = time.monotonic() - t0
    return CapacityResult(cap, best_n, witness, True, stats)


def check_result(result: SearchResult, kind: CostKind) -> None:
    """Assert the SearchResult invariants (witness feasible, cost consistent)."""
    if (result.best_cost is None) != (result.best_scheme is None):
        raise AssertionError("best_cost and best_scheme must be present together")
    if result.best_scheme is not None:
        if not verify_scheme(result.best_scheme).feasible:
            raise AssertionError("reported scheme is infeasible")
        if cost(result.best_scheme, kind) != result.best_cost:
            raise AssertionError("reported cost does not match the scheme")
