"""3-SAT to minimum-seed reduction on graphs of maximum degree 4.

Builds, from a 3-CNF formula with n variables and m clauses, a graph G_F and
a target s such that G_F has an irreversible 2-conversion set of size s
exactly when the formula is satisfiable.  Degree-1 vertices are forced into
every seed, which pins the budget: s = |L| + n leaves exactly one free seed
per variable gadget, and that seed has to be the true/false vertex.

Signal flows from variable gadgets to clause gadgets through one-way
gadgets, then through a collecting path and back along a distributing path
that finishes converting the variable gadgets.  The one-way gadget used here
is a diamond: its end vertex feeds the start side in three rounds, while
nothing propagates from the start side back to the end's neighbor.  Antenna
outputs carry pendant leaves so a black x_i can walk its antenna; together
with the three leaves per one-way this gives |L| = 15m + n + 1.
"""
from __future__ import annotations

from dataclasses import dataclass

from .exact import has_conversion_set_of_size
from .graph import Graph, GraphError
from .percolation import is_conversion_set, run

__all__ = [
    "CnfFormula",
    "DimacsError",
    "parse_dimacs",
    "build_one_way",
    "build_reduction",
    "ReductionOutput",
    "satisfying_seed",
    "sat_bruteforce",
    "check_equivalence",
]


class DimacsError(ValueError):
    pass


@dataclass(frozen=True)
class CnfFormula:
    """3-CNF: clauses of exactly three signed 1-based variable indices."""

    n: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if self.n < 0:
            raise DimacsError("negative variable count")
        for cl in self.clauses:
            if len(cl) != 3:
                raise DimacsError(f"clause {cl} does not have exactly 3 literals")
            for lit in cl:
                if lit == 0 or abs(lit) > self.n:
                    raise DimacsError(f"literal {lit} out of range for n={self.n}")

    @property
    def m(self) -> int:
        return len(self.clauses)

    def occurrences(self, var: int, positive: bool) -> int:
        want = var if positive else -var
        return sum(1 for cl in self.clauses for lit in cl if lit == want)


def parse_dimacs(text: str) -> CnfFormula:
    """DIMACS CNF with a `p cnf n m` header; clauses are 0-terminated."""
    header = None
    tokens: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise DimacsError(f"line {lineno}: repeated header")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"line {lineno}: malformed header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsError(f"line {lineno}: malformed header {line!r}") from None
            continue
        if header is None:
            raise DimacsError(f"line {lineno}: clause before header")
        for tok in line.split():
            try:
                tokens.append(int(tok))
            except ValueError:
                raise DimacsError(f"line {lineno}: bad token {tok!r}") from None
    if header is None:
        raise DimacsError("missing `p cnf` header")
    n, m = header
    clauses: list[tuple[int, ...]] = []
    cur: list[int] = []
    for tok in tokens:
        if tok == 0:
            clauses.append(tuple(cur))
            cur = []
        else:
            cur.append(tok)
    if cur:
        raise DimacsError("unterminated clause at end of input")
    if len(clauses) != m:
        raise DimacsError(f"header declared {m} clauses, found {len(clauses)}")
    for cl in clauses:
        if len(cl) != 3:
            raise DimacsError(f"clause {cl} does not have exactly 3 literals")
    return CnfFormula(n, tuple(clauses))  # type: ignore[arg-type]


def build_one_way() -> tuple[Graph, dict]:
    """The diamond gadget in isolation, ids fixed for inspection.

    Vertex 0 is the start u (the clause side), 1 the end v (the output
    side); 2..5 are w1..w4 and 6..8 pendant leaves on w2, w3, w4.  Seeding v
    plus the leaves blackens w1 (a neighbor of u) in three rounds; seeding u
    plus the leaves leaves every internal vertex white.
    """
    edges = (
        (0, 2),          # u - w1
        (2, 3), (2, 4),  # w1 - w2, w1 - w3
        (3, 5), (4, 5),  # w2 - w4, w3 - w4
        (5, 1),          # w4 - v
        (3, 6), (4, 7), (5, 8),
    )
    roles = {
        0: "start", 1: "end", 2: "w1", 3: "w2", 4: "w3", 5: "w4",
        6: "leaf", 7: "leaf", 8: "leaf",
    }
    return Graph(9, edges), roles


_one_way_checked = False


def _one_way_self_test() -> None:
    """Simulate the gadget once per process before any assembly."""
    global _one_way_checked
    if _one_way_checked:
        return
    g, roles = build_one_way()
    leaves = {v for v, r in roles.items() if r == "leaf"}
    fwd = run(g, leaves | {1}, 2)
    order = fwd.round_of()
    if 2 not in order or order[2] > 3:
        raise AssertionError("one-way does not feed the start side in 3 rounds")
    rev = run(g, leaves | {0}, 2)
    if 5 in rev.final_black or 1 in rev.final_black:
        raise AssertionError("one-way leaks from start to end")
    _one_way_checked = True


@dataclass
class ReductionOutput:
    graph: Graph
    s: int
    roles: dict[int, str]
    leaves: frozenset[int]
    variables: list[dict]   # per variable: x, y, z, pos_outputs, neg_outputs
    clauses: list[dict]     # spine ids, a vertex, one-way wiring
    collecting: list[int]
    distributing: list[int]

    def to_json_dict(self) -> dict:
        return {
            "n": self.graph.n,
            "edges": [list(e) for e in self.graph.edges],
            "s": self.s,
            "roles": {str(v): r for v, r in sorted(self.roles.items())},
            "leaves": sorted(self.leaves),
        }


def build_reduction(formula: CnfFormula) -> ReductionOutput:
    """Assemble G_F with its role map and the target s = |L| + n."""
    _one_way_self_test()
    n, m = formula.n, formula.m
    if n < 1 or m < 1:
        raise GraphError("reduction needs at least one variable and one clause")
    for i in range(1, n + 1):
        if formula.occurrences(i, True) + formula.occurrences(i, False) == 0:
            raise GraphError(f"variable {i} occurs in no clause")

    edges: list[tuple[int, int]] = []
    roles: dict[int, str] = {}
    counter = 0

    def fresh(role: str) -> int:
        nonlocal counter
        v = counter
        counter += 1
        roles[v] = role
        return v

    def leaf_on(v: int) -> int:
        w = fresh("leaf")
        edges.append((v, w))
        return w

    variables: list[dict] = []
    for i in range(1, n + 1):
        x = fresh(f"x_{i}")
        y = fresh(f"y_{i}")
        z = fresh(f"z_{i}")
        edges += [(x, y), (y, z), (x, z)]
        pos_outputs: list[int] = []
        prev = x
        for k in range(formula.occurrences(i, True)):
            o = fresh(f"output_pos_{i}_{k + 1}")
            edges.append((prev, o))
            leaf_on(o)
            pos_outputs.append(o)
            prev = o
        neg_outputs: list[int] = []
        prev = y
        for k in range(formula.occurrences(i, False)):
            o = fresh(f"output_neg_{i}_{k + 1}")
            edges.append((prev, o))
            leaf_on(o)
            neg_outputs.append(o)
            prev = o
        variables.append(
            {"x": x, "y": y, "z": z,
             "pos_outputs": pos_outputs, "neg_outputs": neg_outputs}
        )

    # outputs are consumed in clause order, one per literal occurrence
    taken = {(i, pol): 0 for i in range(1, n + 1) for pol in (True, False)}

    clauses: list[dict] = []
    for j, clause in enumerate(formula.clauses, start=1):
        spine = []
        for t in range(3):
            svert = fresh(f"a_{j}" if t == 0 else f"spine_{j}_{t + 1}")
            spine.append(svert)
            leaf_on(svert)
        edges += [(spine[0], spine[1]), (spine[1], spine[2])]
        oneways = []
        for t, lit in enumerate(clause):
            var, pol = abs(lit), lit > 0
            bank = variables[var - 1]["pos_outputs" if pol else "neg_outputs"]
            out = bank[taken[(var, pol)]]
            taken[(var, pol)] += 1
            w1 = fresh("oneway_internal")
            w2 = fresh("oneway_internal")
            w3 = fresh("oneway_internal")
            w4 = fresh("oneway_internal")
            edges += [
                (spine[t], w1), (w1, w2), (w1, w3),
                (w2, w4), (w3, w4), (w4, out),
            ]
            for w in (w2, w3, w4):
                leaf_on(w)
            oneways.append(
                {"output": out, "clause_vertex": spine[t],
                 "internals": [w1, w2, w3, w4]}
            )
        clauses.append({"spine": spine, "a": spine[0], "oneways": oneways})

    collecting = [fresh(f"v_{j}") for j in range(1, m + 1)]
    for a, b in zip(collecting, collecting[1:]):
        edges.append((a, b))
    leaf_on(collecting[0])
    for j, vj in enumerate(collecting):
        edges.append((clauses[j]["a"], vj))

    distributing = [fresh(f"u_{i}") for i in range(1, n + 1)]
    for a, b in zip(distributing, distributing[1:]):
        edges.append((a, b))
    edges.append((collecting[-1], distributing[0]))
    for i, ui in enumerate(distributing):
        leaf_on(ui)
        edges.append((ui, variables[i]["z"]))

    g = Graph(counter, tuple(edges))
    assert g.max_degree() <= 4, "degree cap violated"
    leaves = frozenset(v for v in range(g.n) if g.degree(v) == 1)
    assert len(leaves) == 15 * m + n + 1, "leaf accounting is off"
    s = len(leaves) + n
    return ReductionOutput(
        graph=g, s=s, roles=roles, leaves=leaves,
        variables=variables, clauses=clauses,
        collecting=collecting, distributing=distributing,
    )


def satisfying_seed(out: ReductionOutput, assignment) -> frozenset[int]:
    """Seed derived from a truth assignment: all leaves plus x_i or y_i."""
    seed = set(out.leaves)
    for i, var in enumerate(out.variables, start=1):
        seed.add(var["x"] if assignment[i - 1] else var["y"])
    return frozenset(seed)


def sat_bruteforce(formula: CnfFormula):
    """First satisfying assignment as a tuple of bools, or None."""
    for bits in range(1 << formula.n):
        assign = [(bits >> i) & 1 == 1 for i in range(formula.n)]
        ok = all(
            any(assign[abs(lit) - 1] == (lit > 0) for lit in cl)
            for cl in formula.clauses
        )
        if ok:
            return tuple(assign)
    return None


def check_equivalence(
    formula: CnfFormula,
    budget_vertices: int = 200,
    workers: int = 1,
) -> dict:
    """Compare SAT truth against exact seed search on the assembled graph.

    Only sensible for tiny formulas: the exact side enumerates all vertex
    subsets of size s - |L| outside the forced leaves.
    """
    out = build_reduction(formula)
    assign = sat_bruteforce(formula)
    found = has_conversion_set_of_size(
        out.graph, 2, out.s, budget_vertices=budget_vertices, workers=workers
    )
    report = {
        "n": formula.n,
        "m": formula.m,
        "graph_n": out.graph.n,
        "s": out.s,
        "satisfiable": assign is not None,
        "conversion_set_found": found,
        "match": (assign is not None) == found,
        "forward_seed_ok": None,
    }
    if assign is not None:
        seed = satisfying_seed(out, assign)
        report["forward_seed_ok"] = (
            len(seed) == out.s and is_conversion_set(out.graph, seed, 2)
        )
    return report
