"""Exact minimum conversion sets by guarded exhaustive search.

Vertices of degree < k can never be converted, so they are forced into every
candidate seed; the search then enumerates supersets by size and returns the
lexicographically least witness of minimum size, which keeps the output
deterministic and independent of the worker count.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from itertools import combinations
from math import comb

from .graph import Graph, GraphError
from .percolation import forced_vertices, neighbor_masks, run_bits

__all__ = [
    "SearchBudgetExceeded",
    "min_conversion_set",
    "has_conversion_set_of_size",
    "closed_form_maxdeg2",
    "maxdeg2_witness",
]

DEFAULT_BUDGET = 30
_CHUNK = 20_000


class SearchBudgetExceeded(ValueError):
    pass


def _guard(g: Graph, budget_vertices: int) -> None:
    if g.n > budget_vertices:
        raise SearchBudgetExceeded(
            f"n={g.n} exceeds search budget {budget_vertices}; "
            "pass a larger budget_vertices to override"
        )


def _unrank_combo(pool_size: int, r: int, rank: int) -> list[int]:
    """Combination of given lexicographic rank over range(pool_size)."""
    combo = []
    x = 0
    for slot in range(r, 0, -1):
        while True:
            c = comb(pool_size - x - 1, slot - 1)
            if rank < c:
                combo.append(x)
                x += 1
                break
            rank -= c
            x += 1
    return combo


def _next_combo(combo: list[int], pool_size: int) -> bool:
    """Advance to the lexicographic successor in place; False when exhausted."""
    r = len(combo)
    for i in range(r - 1, -1, -1):
        if combo[i] < pool_size - (r - i):
            combo[i] += 1
            for j in range(i + 1, r):
                combo[j] = combo[j - 1] + 1
            return True
    return False


def _scan_chunk(args) -> tuple[int, tuple[int, ...]] | None:
    masks, k, full, base_black, pool, r, start, count = args
    if r == 0:
        if run_bits(masks, base_black, k) == full:
            return (0, ())
        return None
    combo = _unrank_combo(len(pool), r, start)
    for i in range(count):
        black = base_black
        for idx in combo:
            black |= 1 << pool[idx]
        if run_bits(masks, black, k) == full:
            return (start + i, tuple(pool[idx] for idx in combo))
        if not _next_combo(combo, len(pool)):
            break
    return None


def _search_size(
    g: Graph, k: int, size: int, forced: frozenset[int], workers: int
) -> tuple[int, ...] | None:
    """Least witness of exactly this size containing forced, or None."""
    extra = size - len(forced)
    if extra < 0:
        return None
    pool = tuple(v for v in range(g.n) if v not in forced)
    if extra > len(pool):
        return None
    masks = neighbor_masks(g)
    full = (1 << g.n) - 1
    base_black = 0
    for v in forced:
        base_black |= 1 << v
    total = comb(len(pool), extra)
    if workers <= 1 or total <= _CHUNK:
        combo_iter = combinations(range(len(pool)), extra)
        for combo in combo_iter:
            black = base_black
            for idx in combo:
                black |= 1 << pool[idx]
            if run_bits(masks, black, k) == full:
                return tuple(sorted(forced | {pool[idx] for idx in combo}))
        return None
    chunks = [
        (masks, k, full, base_black, pool, extra, s, min(_CHUNK, total - s))
        for s in range(0, total, _CHUNK)
    ]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        for hit in ex.map(_scan_chunk, chunks):
            if hit is not None:
                return tuple(sorted(forced | set(hit[1])))
    return None


def min_conversion_set(
    g: Graph,
    k: int,
    budget_vertices: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> tuple[int, tuple[int, ...]]:
    """Minimum size and lexicographically least witness."""
    if k < 1:
        raise ValueError("threshold k must be >= 1")
    _guard(g, budget_vertices)
    if g.n == 0:
        return 0, ()
    forced = forced_vertices(g, k)
    for size in range(len(forced), g.n + 1):
        witness = _search_size(g, k, size, forced, workers)
        if witness is not None:
            return size, witness
    raise AssertionError("the whole vertex set always converts")


def has_conversion_set_of_size(
    g: Graph,
    k: int,
    size: int,
    budget_vertices: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> bool:
    """Does some seed of exactly this size convert everything?"""
    if k < 1:
        raise ValueError("threshold k must be >= 1")
    if size < 0:
        return False
    _guard(g, budget_vertices)
    if size >= g.n:
        return True
    forced = forced_vertices(g, k)
    if size < len(forced):
        return False
    return _search_size(g, k, size, forced, workers) is not None


def _component_shape(g: Graph, comp: list[int]) -> tuple[str, list[int]]:
    """Classify a max-degree-2 component as path or cycle, in walk order."""
    degs = [g.degree(v) for v in comp]
    if any(d > 2 for d in degs):
        raise GraphError("component with degree > 2")
    if len(comp) == 1:
        return "path", comp
    ends = [v for v in comp if g.degree(v) == 1]
    if ends:
        start = min(ends)
        kind = "path"
    else:
        start = min(comp)
        kind = "cycle"
    order = [start]
    prev = None
    cur = start
    while len(order) < len(comp):
        nxt = next(w for w in g.adj[cur] if w != prev)
        order.append(nxt)
        prev, cur = cur, nxt
    return kind, order


def closed_form_maxdeg2(g: Graph) -> int:
    """Minimum I2CS size of a graph with maximum degree <= 2.

    Per component: a path on p vertices needs floor(p/2) + 1 (isolated vertex
    included as p = 1), a cycle on p vertices needs ceil(p/2).
    """
    return maxdeg2_witness(g)[0]


def maxdeg2_witness(g: Graph) -> tuple[int, frozenset[int]]:
    """Closed-form size together with a canonical optimal witness (k = 2)."""
    witness: set[int] = set()
    total = 0
    for comp in g.components():
        kind, order = _component_shape(g, comp)
        p = len(order)
        if kind == "path":
            total += p // 2 + 1
            picks = set(order[0:p:2])
            picks.add(order[-1])
            witness |= picks
        else:
            total += (p + 1) // 2
            witness |= {order[i] for i in range(0, p, 2)}
    return total, frozenset(witness)
