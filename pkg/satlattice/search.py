"""Exhaustive search for induced-2C2-saturated families.

Families are grown depth first from a fixed base (the prefix chain, or just the empty
and full sets) by adding candidates in increasing bitmask order. A set can only create
copies that use it, so freeness is kept incrementally; saturation is not monotone and
is tested only on nodes whose size lies in the requested range.

The walk runs over an index of the whole lattice where position k holds the set k, so
an active mask over positions is also the family itself. Work is sharded on the first
added candidate; shards are independent and their results are merged and sorted.
"""
from __future__ import annotations

import logging
import multiprocessing
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterator, Optional

from .checkpoint import ShardJournal, search_key
from .errors import CatalogIntegrityError, SearchRefused
from .freeness import ComparabilityIndex, is_saturated
from .lattice import chain_sets, full_set, iter_bits
from .models import Catalog, Family, SearchConfig


log = logging.getLogger(__name__)

DEFAULT_MAX_N = 6

ShardTask = tuple[int, bool, int, int, int, int]


@lru_cache(maxsize=None)
def universe_index(n: int) -> ComparabilityIndex:
    return ComparabilityIndex(range(1 << n))


def base_members(n: int, fix_chain: bool = True) -> tuple[int, ...]:
    return chain_sets(n) if fix_chain else (0, full_set(n))


def candidate_pool(n: int, fix_chain: bool = True) -> tuple[int, ...]:
    base = set(base_members(n, fix_chain))
    return tuple(s for s in range(1 << n) if s not in base)


def feasibility_estimate(n: int, max_size: int, fix_chain: bool = True) -> int:
    """Number of candidate families an unpruned walk up to max_size would visit."""
    pool = len(candidate_pool(n, fix_chain))
    extra = max_size - len(base_members(n, fix_chain))
    return sum(comb(pool, k) for k in range(0, max(extra, 0) + 1))


def check_feasible(n: int, max_size: int, fix_chain: bool = True, *, allow_large: bool = False,
                   max_n: int = DEFAULT_MAX_N) -> None:
    if n > max_n and not allow_large:
        raise SearchRefused(
            f"search at n={n} exceeds the cap n<={max_n}; pass allow_large to run it anyway",
            estimate=feasibility_estimate(n, max_size, fix_chain),
        )


class _Walker:
    def __init__(self, n: int, fix_chain: bool, min_size: int, max_size: int, progress_interval: int) -> None:
        self.index = universe_index(n)
        self.pool = candidate_pool(n, fix_chain)
        self.base = 0
        for s in base_members(n, fix_chain):
            self.base |= 1 << s
        self.base_size = self.base.bit_count()
        self.min_size = min_size
        self.max_size = max_size
        self.progress_interval = progress_interval
        self.nodes = 0

    def saturated(self, active: int) -> bool:
        index = self.index
        for o in iter_bits(index.everything & ~active):
            if index.copy_through(o, active | 1 << o) is None:
                return False
        return True

    def free_nodes(self, active: int, size: int, start: int, label: str = "") -> Iterator[tuple[int, int]]:
        """Every free family reachable from active by adding pool[start:], with its size."""
        index = self.index
        pool = self.pool
        stack = [(active, size, start)]
        while stack:
            active, size, start = stack.pop()
            self.nodes += 1
            if self.nodes % self.progress_interval == 0:
                log.info("shard %s: %d nodes visited", label, self.nodes)
            yield active, size
            if size >= self.max_size or size + len(pool) - start < self.min_size:
                continue
            for c in range(len(pool) - 1, start - 1, -1):
                grown = active | 1 << pool[c]
                if index.copy_through(pool[c], grown) is None:
                    stack.append((grown, size + 1, c + 1))

    def collect(self, nodes: Iterator[tuple[int, int]]) -> list[int]:
        return [active for active, size in nodes if size >= self.min_size and self.saturated(active)]

    def root(self) -> list[int]:
        self.nodes += 1
        if self.min_size <= self.base_size <= self.max_size and self.saturated(self.base):
            return [self.base]
        return []

    def shard(self, first: int) -> list[int]:
        k = self.pool[first]
        grown = self.base | 1 << k
        if self.index.copy_through(k, grown) is not None:
            return []
        return self.collect(self.free_nodes(grown, self.base_size + 1, first + 1, label=str(first)))


def _run_shard(task: ShardTask) -> tuple[int, list[int], int]:
    n, fix_chain, min_size, max_size, first, interval = task
    walker = _Walker(n, fix_chain, min_size, max_size, interval)
    found = walker.shard(first)
    return first, found, walker.nodes


def _as_family(n: int, active: int) -> Family:
    return Family(n=n, members=tuple(iter_bits(active)))


def _reverify(families: list[Family]) -> None:
    for family in families:
        if not is_saturated(family):
            raise CatalogIntegrityError(f"search emitted a non-saturated family {family.members}")


def run_search(config: SearchConfig) -> dict[int, list[Family]]:
    """All saturated families in the configured size range, by size, canonically sorted."""
    n = config.n
    walker = _Walker(n, config.fix_chain, config.min_size, config.max_size, config.progress_interval)
    key = search_key(n, config.min_size, config.max_size, config.fix_chain)
    journal = ShardJournal(config.checkpoint) if config.checkpoint else None
    done = journal.completed(key) if journal else {}
    if done:
        log.info("resuming: %d shards already in %s", len(done), config.checkpoint)

    found: list[int] = walker.root()
    nodes = walker.nodes
    for record in done.values():
        found.extend(record["families"])
        nodes += int(record["nodes"])

    tasks: list[ShardTask] = [
        (n, config.fix_chain, config.min_size, config.max_size, first, config.progress_interval)
        for first in range(len(walker.pool))
        if first not in done
    ]

    def _absorb(result: tuple[int, list[int], int]) -> None:
        nonlocal nodes
        first, masks, visited = result
        found.extend(masks)
        nodes += visited
        if journal:
            journal.add(key, first, masks, visited)
        log.info("shard %d done: %d families, %d nodes", first, len(masks), visited)

    if config.threads > 1 and len(tasks) > 1:
        with multiprocessing.Pool(processes=config.threads) as pool:
            for result in pool.imap_unordered(_run_shard, tasks):
                _absorb(result)
    else:
        for task in tasks:
            _absorb(_run_shard(task))

    log.info("search n=%d sizes %d..%d: %d nodes, %d families",
             n, config.min_size, config.max_size, nodes, len(found))
    by_size: dict[int, list[Family]] = {}
    for active in sorted(set(found)):
        family = _as_family(n, active)
        by_size.setdefault(family.size, []).append(family)
    for size in by_size:
        by_size[size].sort(key=lambda f: f.members)
        _reverify(by_size[size])
    return by_size


def enumerate_at(n: int, size: int, *, fix_chain: bool = True, threads: int = 1,
                 progress_interval: int = 250_000, checkpoint: Optional[str] = None,
                 allow_large: bool = False, max_n: int = DEFAULT_MAX_N) -> Catalog:
    check_feasible(n, size, fix_chain, allow_large=allow_large, max_n=max_n)
    config = SearchConfig(n=n, min_size=size, max_size=size, fix_chain=fix_chain, threads=threads,
                          progress_interval=progress_interval, checkpoint=checkpoint)
    families = run_search(config).get(size, [])
    return Catalog(n=n, size=size, fix_chain=fix_chain, families=families)


def search_min(n: int, *, fix_chain: bool = True, threads: int = 1, progress_interval: int = 250_000,
               checkpoint: Optional[str] = None, allow_large: bool = False,
               max_n: int = DEFAULT_MAX_N) -> tuple[int, Catalog]:
    """Smallest size >= n+2 carrying a saturated family, with every family of that size."""
    low, high = n + 2, min(2 * n, 1 << n)
    check_feasible(n, high, fix_chain, allow_large=allow_large, max_n=max_n)
    config = SearchConfig(n=n, min_size=low, max_size=high, fix_chain=fix_chain, threads=threads,
                          progress_interval=progress_interval, checkpoint=checkpoint)
    by_size = run_search(config)
    if by_size:
        best = min(by_size)
        return best, Catalog(n=n, size=best, fix_chain=fix_chain, families=by_size[best])
    # not expected below n=7; keep climbing one size at a time
    for size in range(high + 1, (1 << n) + 1):
        log.warning("no saturated family up to size %d, trying %d", size - 1, size)
        catalog = enumerate_at(n, size, fix_chain=fix_chain, threads=threads,
                               progress_interval=progress_interval, allow_large=True)
        if catalog.families:
            return size, catalog
    raise CatalogIntegrityError(f"no saturated family found at n={n}")


def iter_free_families(n: int, max_extra: int, *, fix_chain: bool = True) -> Iterator[Family]:
    """Every free family of base plus at most max_extra candidates, in walk order."""
    base = len(base_members(n, fix_chain))
    walker = _Walker(n, fix_chain, base, base + max_extra, 1 << 62)
    for active, _ in walker.free_nodes(walker.base, base, 0):
        yield _as_family(n, active)


def naive_enumerate(n: int, size: int, *, fix_chain: bool = True) -> list[Family]:
    """Filter every candidate superset of the base with the unpruned checker."""
    base = base_members(n, fix_chain)
    out = []
    for extra in combinations(candidate_pool(n, fix_chain), size - len(base)):
        family = Family(n=n, members=base + extra)
        if is_saturated(family):
            out.append(family)
    return sorted(out, key=lambda f: f.members)
