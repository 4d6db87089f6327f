"""Minimum irreversible 2-conversion sets for graphs of maximum degree 3.

The route: attach a 5-vertex gadget to every degree-1 vertex (min degree
becomes 2), normalize away degree-2 vertices case by case until the graph is
cubic, represent each vertex as a line in the binary cycle space (the
cographic dual), find a minimum spanning set of the restricted 2-polymatroid
via matroid parity, and map the witness back through the pipeline.  Every
stage of the back-mapping is re-verified with the conversion process, so a
returned witness is always a genuine conversion set of the input.

On a cubic graph a vertex set is a conversion set exactly when it meets
every cycle, which is what makes the cycle-space rank function the right
object: f(X) = mu(G) - mu(G - X) counts independent cycles broken by X.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field as dfield

from .exact import maxdeg2_witness
from .gf2 import field as shared_field
from .graph import Graph, GraphError
from .percolation import is_conversion_set
from .polymatroid import ConsistencyError, Line, PolymatroidInstance, min_spanning_set

__all__ = [
    "h5_graph",
    "ReductionStep",
    "attach_h5_to_leaves",
    "normalize_degree2",
    "cographic_lines",
    "Deg3Result",
    "solve_deg3",
    "min_i2cs_maxdeg3",
]

# Widths for the parity solver's field: small graphs fit the table-backed
# width, and the randomized bound needs order >= 2 * lines^2.
_TABLE_FIELD_LIMIT = 180
_SOLVE_RETRIES = 5


def h5_graph() -> Graph:
    """The gadget: a 5-cycle v1..v5 (ids 0..4) plus chords v2v4 and v3v5."""
    return Graph(5, ((0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 3), (2, 4)))


@dataclass
class ReductionStep:
    kind: str
    graph_before: Graph
    graph_after: Graph
    data: dict = dfield(default_factory=dict)


def _with_h5(g: Graph, at: int) -> tuple[Graph, dict]:
    """Append a gadget copy, identifying its degree-2 vertex v1 with `at`."""
    n = g.n
    v2, v3, v4, v5 = n, n + 1, n + 2, n + 3
    extra = (
        (at, v2), (v2, v3), (v3, v4), (v4, v5), (at, v5),
        (v2, v4), (v3, v5),
    )
    return (
        Graph(n + 4, g.edges + extra),
        {"v": at, "v2": v2, "v3": v3, "v4": v4, "v5": v5},
    )


def attach_h5_to_leaves(g: Graph) -> ReductionStep:
    """Replace every degree-1 vertex by a gadget attachment.

    The minimum conversion-set size grows by exactly the number of leaves:
    each gadget needs two seeds but absorbs the forced seeding of its leaf.
    """
    if g.max_degree() > 3:
        raise GraphError("maximum degree exceeds 3")
    copies = []
    cur = g
    for v in range(g.n):
        if g.degree(v) == 1:
            cur, roles = _with_h5(cur, v)
            copies.append(roles)
    return ReductionStep("attach_h5", g, cur, {"copies": copies})


def _caterpillar_extend(g2: Graph, d2s: list[int]) -> tuple[Graph, dict]:
    """Join k >= 3 degree-2 vertices to a fresh spine path of k - 2 vertices."""
    k = len(d2s)
    n = g2.n
    spine = list(range(n, n + k - 2))
    extra: list[tuple[int, int]] = []
    for i in range(len(spine) - 1):
        extra.append((spine[i], spine[i + 1]))
    if k == 3:
        extra += [(spine[0], d2s[0]), (spine[0], d2s[1]), (spine[0], d2s[2])]
    else:
        extra += [(spine[0], d2s[0]), (spine[0], d2s[1])]
        for i in range(1, k - 3):
            extra.append((spine[i], d2s[i + 1]))
        extra += [(spine[-1], d2s[k - 2]), (spine[-1], d2s[k - 1])]
    return Graph(n + k - 2, g2.edges + tuple(extra)), {"spine": spine, "leaves": d2s}


def normalize_degree2(g2: Graph) -> tuple[list[ReductionStep], Graph, frozenset[int]]:
    """Drive a min-degree-2 graph to a cubic one.

    Returns the step sequence, the cubic graph G3, and the subset V2 of its
    vertices on which the polymatroid is restricted (everything except a
    possible spine path).  Case analysis on the number d2 of degree-2
    vertices: 0 = done; 1 = duplicate and join; 2 adjacent = subdivide, hang
    a pendant, gadget it, then fall through to the nonadjacent case; 2
    nonadjacent = add the missing edge; >= 3 = attach a spine.
    """
    if g2.n == 0 or not g2.is_connected():
        raise GraphError("normalization expects a connected graph")
    degs = [g2.degree(v) for v in range(g2.n)]
    if min(degs) < 2 or max(degs) > 3:
        raise GraphError("normalization expects degrees 2 and 3 only")

    d2s = [v for v in range(g2.n) if g2.degree(v) == 2]
    steps: list[ReductionStep] = []

    if len(d2s) == 0:
        return steps, g2, frozenset(range(g2.n))

    if len(d2s) >= 3:
        g3, data = _caterpillar_extend(g2, d2s)
        steps.append(ReductionStep("attach_caterpillar", g2, g3, data))
        return steps, g3, frozenset(range(g2.n))

    if len(d2s) == 1:
        v = d2s[0]
        off = g2.n
        shifted = tuple((u + off, w + off) for u, w in g2.edges)
        g3 = Graph(2 * off, g2.edges + shifted + ((v, v + off),))
        steps.append(
            ReductionStep(
                "duplicate_graph", g2, g3,
                {"v": v, "v_copy": v + off, "offset": off},
            )
        )
        return steps, g3, frozenset(range(g3.n))

    u, v = d2s
    cur = g2
    if cur.has_edge(u, v):
        x, y = cur.n, cur.n + 1
        es = tuple(e for e in cur.edges if e != (min(u, v), max(u, v)))
        g1 = Graph(cur.n + 2, es + ((u, x), (v, x), (x, y)))
        steps.append(
            ReductionStep(
                "split_adjacent_pair", cur, g1,
                {"u": u, "v": v, "x": x, "y": y},
            )
        )
        g2b, roles = _with_h5(g1, y)
        steps.append(ReductionStep("attach_h5", g1, g2b, {"copies": [roles]}))
        cur = g2b
    g3 = Graph(cur.n, cur.edges + ((u, v),))
    steps.append(ReductionStep("add_edge_nonadjacent", cur, g3, {"u": u, "v": v}))
    return steps, g3, frozenset(range(g3.n))


def cographic_lines(
    g3: Graph, check: bool = True
) -> tuple[PolymatroidInstance, int]:
    """One line per vertex, spanned by two of its edge columns.

    Edge columns live in GF(2)^mu indexed by a fundamental-cycle basis; the
    three columns at a vertex sum to zero, so any two of them span the same
    space, and for X a vertex set the rank of the union of its lines equals
    mu(G3) - mu(G3 - X).  Bridge edges have zero columns, which legitimately
    yields lines of dimension below 2; such lines simply never enter
    matchings.  Returns the instance and mu.
    """
    if g3.n == 0 or not g3.is_connected():
        raise GraphError("cographic representation expects a connected graph")
    if any(g3.degree(v) != 3 for v in range(g3.n)):
        raise GraphError("cographic representation expects a cubic graph")
    nontree, cycles = g3.fundamental_cycles()
    mu = len(nontree)
    cols = [[0] * mu for _ in range(g3.m)]
    for ci, cyc in enumerate(cycles):
        for ei in cyc:
            cols[ei][ci] = 1
    eidx = {e: i for i, e in enumerate(g3.edges)}
    lines = []
    for v in range(g3.n):
        inc = sorted(
            eidx[(v, w) if v < w else (w, v)] for w in g3.adj[v]
        )
        parity = [0] * mu
        for ei in inc:
            parity = [p ^ c for p, c in zip(parity, cols[ei])]
        if any(parity):
            raise ConsistencyError("edge columns at a vertex do not cancel")
        lines.append(Line(tuple(cols[inc[0]]), tuple(cols[inc[1]])))
    w = 16 if len(lines) <= _TABLE_FIELD_LIMIT else 32
    inst = PolymatroidInstance(lines, mu, shared_field(w))
    if check:
        _check_representation(g3, inst, mu)
    return inst, mu


def _check_representation(g3: Graph, inst: PolymatroidInstance, mu: int) -> None:
    """Compare line ranks against mu differences on singletons and samples."""
    local = random.Random(g3.n * 1_000_003 + g3.m)
    singles = range(g3.n) if g3.n <= 64 else local.sample(range(g3.n), 32)
    subsets: list[tuple[int, ...]] = [(v,) for v in singles]
    subsets.append(tuple(range(g3.n)))
    for _ in range(10):
        size = local.randrange(1, g3.n + 1)
        subsets.append(tuple(local.sample(range(g3.n), size)))
    for sub in subsets:
        shrunk, _ = g3.delete_vertices(sub)
        expect = mu - shrunk.cyclomatic()
        if inst.rank(sub) != expect:
            raise ConsistencyError(
                f"line rank {inst.rank(sub)} != broken-cycle count {expect}"
            )


def _undo_candidates(step: ReductionStep, wit: frozenset[int]) -> list[frozenset[int]]:
    """Witness candidates for graph_before, given a witness for graph_after."""
    kind = step.kind
    if kind == "attach_h5":
        internal: set[int] = set()
        anchors: set[int] = set()
        for roles in step.data["copies"]:
            internal |= {roles["v2"], roles["v3"], roles["v4"], roles["v5"]}
            anchors.add(roles["v"])
        return [frozenset((wit - internal) | anchors)]
    if kind == "attach_caterpillar":
        spine = set(step.data["spine"])
        if wit & spine:
            raise ConsistencyError("witness touched the spine path")
        return [wit]
    if kind == "add_edge_nonadjacent":
        # every conversion set of the augmented graph works in the original
        return [wit]
    if kind == "duplicate_graph":
        off = step.data["offset"]
        left = frozenset(v for v in wit if v < off)
        right = frozenset(v - off for v in wit if v >= off)
        return [left, right] if len(left) <= len(right) else [right, left]
    if kind == "split_adjacent_pair":
        u, v, x, y = (step.data[k] for k in ("u", "v", "x", "y"))
        if y not in wit:
            raise ConsistencyError("pendant vertex missing from witness")
        base = wit - {y}
        if x not in base:
            return [base]
        base = base - {x}
        if u in base and v in base:
            return [base]
        cands = []
        for repl in (u, v):
            if repl not in base:
                cands.append(frozenset(base | {repl}))
        return cands
    raise AssertionError(f"unknown step kind {kind!r}")


def _backmap(steps: list[ReductionStep], wit: frozenset[int]) -> frozenset[int]:
    """Walk the pipeline backwards, verifying each stage's witness."""
    cur = wit
    for step in reversed(steps):
        for cand in _undo_candidates(step, cur):
            if is_conversion_set(step.graph_before, cand, 2):
                cur = cand
                break
        else:
            raise ConsistencyError(f"no valid witness past step {step.kind}")
    return cur


@dataclass
class Deg3Result:
    size: int
    witness: frozenset[int]
    components: list[dict]


def _solve_component(g: Graph, rng: random.Random) -> tuple[frozenset[int], dict]:
    if g.max_degree() <= 2:
        size, wit = maxdeg2_witness(g)
        assert is_conversion_set(g, wit, 2)
        return wit, {"mode": "closed_form", "n": g.n, "size": size}

    h5_step = attach_h5_to_leaves(g)
    steps = [h5_step]
    nsteps, g3, v2 = normalize_degree2(h5_step.graph_after)
    steps += nsteps
    inst, mu = cographic_lines(g3)
    sub = tuple(sorted(v2))

    last: Exception | None = None
    for _ in range(_SOLVE_RETRIES):
        try:
            span = min_spanning_set(inst, rng, subset=sub)
        except ConsistencyError as exc:
            last = exc
            continue
        if not is_conversion_set(g3, span, 2):
            last = ConsistencyError("spanning set does not convert the cubic graph")
            continue
        wit = _backmap(steps, frozenset(span))
        summary = {
            "mode": "pipeline",
            "n": g.n,
            "leaves": len(h5_step.data["copies"]),
            "steps": [s.kind for s in steps],
            "cubic_n": g3.n,
            "mu": mu,
            "v2": len(sub),
            "spanning_size": len(span),
            "size": len(wit),
        }
        return wit, summary
    raise ConsistencyError(f"component solve did not stabilize: {last}")


def solve_deg3(g: Graph, rng: random.Random | None = None) -> Deg3Result:
    """Solve per component and stitch the witnesses together."""
    if g.max_degree() > 3:
        raise GraphError("maximum degree exceeds 3")
    rng = rng if rng is not None else random.Random()
    witness: set[int] = set()
    summaries = []
    for comp in g.components():
        keep = set(comp)
        sub, remap = g.delete_vertices([v for v in range(g.n) if v not in keep])
        back = {new: old for old, new in remap.items() if old in keep}
        comp_rng = random.Random(rng.getrandbits(64))
        wit, summary = _solve_component(sub, comp_rng)
        witness |= {back[v] for v in wit}
        summaries.append(summary)
    if g.n and not is_conversion_set(g, witness, 2):
        raise ConsistencyError("assembled witness fails to convert the input")
    return Deg3Result(len(witness), frozenset(witness), summaries)


def min_i2cs_maxdeg3(
    g: Graph, rng: random.Random | None = None
) -> tuple[int, frozenset[int]]:
    """Minimum irreversible 2-conversion set (size, witness), max degree <= 3."""
    res = solve_deg3(g, rng)
    return res.size, res.witness
