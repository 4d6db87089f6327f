"""Irreversible k-threshold conversion process.

Black vertices stay black; a white vertex turns black in the round after it
has at least k black neighbors.  All updates in a round are simultaneous.
The process is monotone in the seed and stabilizes within n rounds.
"""
from __future__ import annotations

from dataclasses import dataclass

from .graph import Graph, GraphError

__all__ = [
    "PercolationTrace",
    "step",
    "run",
    "is_conversion_set",
    "stuck_certificate",
    "forced_vertices",
    "neighbor_masks",
    "run_bits",
]


def _check_seed(g: Graph, seed) -> frozenset[int]:
    s = frozenset(seed)
    for v in s:
        if not 0 <= v < g.n:
            raise GraphError(f"seed vertex {v} out of range")
    return s


def _check_k(k: int) -> None:
    if k < 1:
        raise ValueError("threshold k must be >= 1")


@dataclass(frozen=True)
class PercolationTrace:
    seed: frozenset[int]
    rounds: tuple[frozenset[int], ...]  # newly black per round, round 1 onward
    final_black: frozenset[int]
    converted_all: bool

    def round_of(self) -> dict[int, int]:
        """Vertex -> round it became black (0 for seeds)."""
        out = {v: 0 for v in self.seed}
        for i, newly in enumerate(self.rounds, start=1):
            for v in newly:
                out[v] = i
        return out

    def to_json_dict(self) -> dict:
        return {
            "seed": sorted(self.seed),
            "rounds": [sorted(r) for r in self.rounds],
            "final_black": sorted(self.final_black),
            "converted_all": self.converted_all,
        }


def step(g: Graph, black, k: int) -> frozenset[int]:
    """One synchronous round: the set of vertices newly turning black."""
    _check_k(k)
    b = _check_seed(g, black)
    out = set()
    for v in range(g.n):
        if v in b:
            continue
        cnt = 0
        for w in g.adj[v]:
            if w in b:
                cnt += 1
                if cnt == k:
                    out.add(v)
                    break
    return frozenset(out)


def run(g: Graph, seed, k: int) -> PercolationTrace:
    """Run to the fixed point, recording each round's newly black set."""
    _check_k(k)
    s = _check_seed(g, seed)
    masks = neighbor_masks(g)
    black = 0
    for v in s:
        black |= 1 << v
    rounds: list[frozenset[int]] = []
    full = (1 << g.n) - 1
    while black != full:
        new = 0
        rest = full & ~black
        v = 0
        r = rest
        while r:
            low = r & -r
            v = low.bit_length() - 1
            if (masks[v] & black).bit_count() >= k:
                new |= low
            r ^= low
        if not new:
            break
        rounds.append(frozenset(_bits(new)))
        black |= new
    fb = frozenset(_bits(black))
    return PercolationTrace(
        seed=s,
        rounds=tuple(rounds),
        final_black=fb,
        converted_all=len(fb) == g.n,
    )


def is_conversion_set(g: Graph, seed, k: int) -> bool:
    """Does the seed eventually convert every vertex?"""
    _check_k(k)
    s = _check_seed(g, seed)
    masks = neighbor_masks(g)
    black = 0
    for v in s:
        black |= 1 << v
    return run_bits(masks, black, k) == (1 << g.n) - 1


def stuck_certificate(g: Graph, seed, k: int) -> frozenset[int]:
    """Final white set W of a non-converting run.

    Every w in W keeps at least deg(w) - k + 1 white neighbors, which is the
    reason the process is stuck; this is asserted before returning.  Raises
    if the seed actually converts everything.
    """
    trace = run(g, seed, k)
    if trace.converted_all:
        raise ValueError("seed percolates; no stuck certificate exists")
    white = frozenset(range(g.n)) - trace.final_black
    for w in white:
        wn = sum(1 for x in g.adj[w] if x in white)
        need = g.degree(w) - k + 1
        assert wn >= need, f"stuck set not self-certifying at {w}"
    return white


def forced_vertices(g: Graph, k: int) -> frozenset[int]:
    """Vertices of degree < k; they can never be converted, only seeded."""
    _check_k(k)
    return frozenset(v for v in range(g.n) if g.degree(v) < k)


def neighbor_masks(g: Graph) -> list[int]:
    """Adjacency as bitmasks, for the packed process loops."""
    masks = [0] * g.n
    for u, v in g.edges:
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    return masks


def run_bits(masks: list[int], black: int, k: int) -> int:
    """Fixed point of the process on bitmask state; returns final black mask."""
    n = len(masks)
    full = (1 << n) - 1
    while black != full:
        new = 0
        rest = full & ~black
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            if (masks[v] & black).bit_count() >= k:
                new |= low
            rest ^= low
        if not new:
            break
        black |= new
    return black


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low
