"""Simple undirected graphs with dense integer ids.

Vertices are 0..n-1, edges are unordered pairs without loops or multiplicity.
Graphs are immutable; transformations return new graphs (plus remap tables
where ids change).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

__all__ = [
    "Graph",
    "GraphError",
    "ParseError",
    "parse_edge_list",
    "graph_from_json",
]

MAX_VERTEX_ID = 10_000_000


class GraphError(ValueError):
    pass


class ParseError(GraphError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]
    adj: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise GraphError("negative vertex count")
        seen = set()
        nbr: list[list[int]] = [[] for _ in range(self.n)]
        norm = []
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u},{v}) out of range for n={self.n}")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            a, b = (u, v) if u < v else (v, u)
            if (a, b) in seen:
                raise GraphError(f"duplicate edge ({a},{b})")
            seen.add((a, b))
            norm.append((a, b))
            nbr[a].append(b)
            nbr[b].append(a)
        object.__setattr__(self, "edges", tuple(sorted(norm)))
        object.__setattr__(self, "adj", tuple(tuple(sorted(x)) for x in nbr))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degree_profile(self) -> dict[int, int]:
        """Histogram degree -> count."""
        out: dict[int, int] = {}
        for v in range(self.n):
            d = len(self.adj[v])
            out[d] = out.get(d, 0) + 1
        return out

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        a, b = (u, v) if u < v else (v, u)
        return b in self.adj[a]

    def components(self) -> list[list[int]]:
        """Connected components as sorted vertex lists, sorted by minimum."""
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            stack = [s]
            seen[s] = True
            comp = []
            while stack:
                u = stack.pop()
                comp.append(u)
                for w in self.adj[u]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def cyclomatic(self) -> int:
        """mu = m - n + number of components."""
        return self.m - self.n + len(self.components())

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def delete_vertices(self, drop) -> tuple["Graph", dict[int, int]]:
        """Remove a vertex set; return (new graph, old id -> new id remap)."""
        drop = set(drop)
        for v in drop:
            if not 0 <= v < self.n:
                raise GraphError(f"vertex {v} out of range")
        keep = [v for v in range(self.n) if v not in drop]
        remap = {v: i for i, v in enumerate(keep)}
        es = [
            (remap[u], remap[v])
            for u, v in self.edges
            if u not in drop and v not in drop
        ]
        return Graph(len(keep), tuple(es)), remap

    def spanning_forest(self) -> tuple[set[int], list[int | None], list[int | None]]:
        """BFS forest: (tree edge indices, parent vertex, parent edge index)."""
        eidx = {e: i for i, e in enumerate(self.edges)}
        parent: list[int | None] = [None] * self.n
        pedge: list[int | None] = [None] * self.n
        tree: set[int] = set()
        seen = [False] * self.n
        for root in range(self.n):
            if seen[root]:
                continue
            seen[root] = True
            queue = [root]
            while queue:
                nxt = []
                for u in queue:
                    for w in self.adj[u]:
                        if not seen[w]:
                            seen[w] = True
                            parent[w] = u
                            i = eidx[(u, w) if u < w else (w, u)]
                            pedge[w] = i
                            tree.add(i)
                            nxt.append(w)
                queue = nxt
        return tree, parent, pedge

    def fundamental_cycles(self) -> tuple[list[int], list[set[int]]]:
        """Non-tree edge indices and, per such edge, its cycle's edge set.

        The cycle of a non-tree edge uv is uv plus the forest path u..v; the
        number of cycles equals the cyclomatic number.
        """
        tree, parent, pedge = self.spanning_forest()
        nontree = [i for i in range(self.m) if i not in tree]
        cycles: list[set[int]] = []
        for i in nontree:
            u, v = self.edges[i]
            mark: dict[int, int] = {}
            x = u
            while x is not None:
                mark[x] = pedge[x] if pedge[x] is not None else -1
                x = parent[x]
            path: set[int] = set()
            y = v
            while y not in mark:
                path.add(pedge[y])  # type: ignore[arg-type]
                y = parent[y]  # type: ignore[assignment]
            x = u
            while x != y:
                path.add(pedge[x])  # type: ignore[arg-type]
                x = parent[x]  # type: ignore[assignment]
            path.add(i)
            cycles.append(path)
        return nontree, cycles

    def relabel(self, perm: dict[int, int]) -> "Graph":
        """Apply a bijection old id -> new id."""
        if sorted(perm) != list(range(self.n)) or sorted(perm.values()) != list(range(self.n)):
            raise GraphError("relabel requires a permutation of 0..n-1")
        return Graph(self.n, tuple((perm[u], perm[v]) for u, v in self.edges))

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "edges": [list(e) for e in self.edges]})


def graph_from_json(text: str) -> Graph:
    obj = json.loads(text)
    return Graph(int(obj["n"]), tuple((int(u), int(v)) for u, v in obj["edges"]))


def parse_edge_list(text: str) -> Graph:
    """Parse whitespace-separated `u v` lines, optional `p <n> <m>` header.

    Blank lines and lines starting with '#' or 'c' are ignored.  Errors carry
    1-based line numbers.
    """
    declared_n = None
    declared_m = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    max_id = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("c ") or line == "c":
            continue
        parts = line.split()
        if parts[0] == "p":
            if declared_n is not None:
                raise ParseError("repeated header", lineno)
            if edges:
                raise ParseError("header after edges", lineno)
            if len(parts) != 3:
                raise ParseError("malformed header, expected `p <n> <m>`", lineno)
            try:
                declared_n, declared_m = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError("malformed header, expected `p <n> <m>`", lineno) from None
            if declared_n < 0 or declared_m < 0:
                raise ParseError("negative header counts", lineno)
            continue
        if len(parts) != 2:
            raise ParseError(f"malformed edge line {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"malformed edge line {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise ParseError("negative vertex id", lineno)
        if max(u, v) > MAX_VERTEX_ID:
            raise ParseError(f"vertex id {max(u, v)} exceeds limit", lineno)
        if declared_n is not None and max(u, v) >= declared_n:
            raise ParseError(
                f"vertex id {max(u, v)} overflows declared n={declared_n}", lineno
            )
        if u == v:
            raise ParseError(f"self-loop at {u}", lineno)
        a, b = (u, v) if u < v else (v, u)
        if (a, b) in seen:
            raise ParseError(f"duplicate edge ({a},{b})", lineno)
        seen.add((a, b))
        edges.append((a, b))
        max_id = max(max_id, u, v)
    n = declared_n if declared_n is not None else max_id + 1
    if declared_m is not None and declared_m != len(edges):
        raise ParseError(
            f"header declared {declared_m} edges, found {len(edges)}",
            len(text.splitlines()) or 1,
        )
    return Graph(n, tuple(edges))
