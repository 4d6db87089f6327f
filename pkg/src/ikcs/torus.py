"""Irreversible 3-conversion sets on toroidal grids by pattern tiling.

T(m, n) is the Cartesian product of cycles C_m x C_n; cells are (x, y) with
the origin at the bottom left and wraparound in both directions.  Seeds are
assembled from small black/white patterns: a base tile whose periodic tiling
leaves gcd(k, l) disjoint white cycles, a modified tile that merges them
into one, strip and corner tiles for the non-multiple-of-3 boundary, and a
separate 2x4 family for grids with a side of length 4.  Overlapping
placements are resolved black-wins; every constructed seed is verified with
the conversion process before it is returned.

Pattern bitmaps are data files ('#' black, '.' white, top row first) found
by `search_tile_patterns` and committed under the package's patterns
directory; IKCS_PATTERN_DIR overrides the location.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import combinations
from math import gcd
from pathlib import Path

from .graph import Graph
from .percolation import is_conversion_set

__all__ = [
    "TorusError",
    "TorusGrid",
    "TorusPattern",
    "CaseParams",
    "TorusConstruction",
    "parse_pattern",
    "load_pattern",
    "pattern_dir",
    "place",
    "tile",
    "white_cycle_structure",
    "construct_3cs",
    "render_cells",
    "search_tile_patterns",
]

PATTERN_ENV = "IKCS_PATTERN_DIR"


class TorusError(ValueError):
    pass


@dataclass(frozen=True)
class TorusGrid:
    m: int  # width
    n: int  # height

    def __post_init__(self):
        if self.m < 3 or self.n < 3:
            raise TorusError("torus dimensions must be at least 3")

    def vertex(self, x: int, y: int) -> int:
        return (y % self.n) * self.m + (x % self.m)

    def cell(self, v: int) -> tuple[int, int]:
        return v % self.m, v // self.m

    def cells(self):
        return ((x, y) for y in range(self.n) for x in range(self.m))

    def neighbors(self, x: int, y: int):
        m, n = self.m, self.n
        return (
            ((x + 1) % m, y), ((x - 1) % m, y),
            (x, (y + 1) % n), (x, (y - 1) % n),
        )

    def graph(self) -> Graph:
        es = []
        for y in range(self.n):
            for x in range(self.m):
                es.append((self.vertex(x, y), self.vertex(x + 1, y)))
                es.append((self.vertex(x, y), self.vertex(x, y + 1)))
        return Graph(self.m * self.n, tuple(es))


@dataclass(frozen=True)
class TorusPattern:
    name: str
    width: int
    height: int
    cells: frozenset  # black cells (x, y), origin bottom left

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise TorusError(f"pattern {self.name}: empty dimensions")
        for x, y in self.cells:
            if not (0 <= x < self.width and 0 <= y < self.height):
                raise TorusError(f"pattern {self.name}: cell ({x},{y}) outside bitmap")

    def transposed(self) -> "TorusPattern":
        return TorusPattern(
            self.name + "_t", self.height, self.width,
            frozenset((y, x) for x, y in self.cells),
        )


def parse_pattern(text: str, name: str = "anon") -> TorusPattern:
    rows = [line for line in text.splitlines() if line.strip()]
    if not rows:
        raise TorusError(f"pattern {name}: empty file")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise TorusError(f"pattern {name}: ragged rows")
    height = len(rows)
    cells = set()
    for r, row in enumerate(rows):
        y = height - 1 - r  # first file line is the top row
        for x, ch in enumerate(row):
            if ch == "#":
                cells.add((x, y))
            elif ch != ".":
                raise TorusError(f"pattern {name}: bad character {ch!r}")
    return TorusPattern(name, width, height, frozenset(cells))


def pattern_dir() -> Path:
    override = os.environ.get(PATTERN_ENV)
    if override:
        return Path(override)
    return Path(__file__).parent / "patterns"


def load_pattern(name: str) -> TorusPattern:
    path = pattern_dir() / f"{name}.txt"
    if not path.is_file():
        raise TorusError(f"missing pattern data file {path}")
    return parse_pattern(path.read_text(), name)


def place(grid: TorusGrid, black, pattern: TorusPattern, i: int, j: int) -> frozenset:
    """Overlay the pattern with its bottom-left square at [i, j]; black wins."""
    out = set(black)
    for x, y in pattern.cells:
        out.add(((i + x) % grid.m, (j + y) % grid.n))
    return frozenset(out)


def tile(grid: TorusGrid, black, pattern: TorusPattern, rect) -> frozenset:
    """Tile the rectangle (x0, y0, x1, y1), corners inclusive, with copies."""
    x0, y0, x1, y1 = rect
    w, h = x1 - x0 + 1, y1 - y0 + 1
    if w <= 0 or h <= 0:
        raise TorusError("empty tiling rectangle")
    if w % pattern.width or h % pattern.height:
        raise TorusError(
            f"rectangle {w}x{h} not divisible by pattern "
            f"{pattern.width}x{pattern.height}"
        )
    out = frozenset(black)
    for dy in range(0, h, pattern.height):
        for dx in range(0, w, pattern.width):
            out = place(grid, out, pattern, x0 + dx, y0 + dy)
    return out


def white_cycle_structure(grid: TorusGrid, black) -> tuple[list[frozenset], bool]:
    """Connected components of the white subgraph, plus a 2-regularity flag.

    When every white cell has exactly two white neighbors the components are
    disjoint cycles (the situation the base tiling is designed to create);
    otherwise the flag is False and the components are still returned for
    diagnostics.
    """
    black = set(black)
    white = {c for c in grid.cells() if c not in black}
    regular = all(
        sum(1 for nb in grid.neighbors(*c) if nb in white) == 2 for c in white
    )
    comps: list[frozenset] = []
    left = set(white)
    while left:
        start = min(left)
        stack = [start]
        left.discard(start)
        comp = {start}
        while stack:
            cur = stack.pop()
            for nb in grid.neighbors(*cur):
                if nb in left:
                    left.discard(nb)
                    comp.add(nb)
                    stack.append(nb)
        comps.append(frozenset(comp))
    comps.sort(key=min)
    return comps, regular


@dataclass(frozen=True)
class CaseParams:
    tag: str
    m: int
    n: int
    k: int
    l: int | None
    a: int
    b: int | None
    g: int | None
    transposed: bool
    size: int
    bound: int


@dataclass(frozen=True)
class TorusConstruction:
    grid: TorusGrid
    cells: frozenset
    vertices: frozenset
    params: CaseParams


def _split_general(dim: int) -> tuple[int, int]:
    """dim = 3k + a with a in {0, 2, 4} and k >= 1 (dim >= 3, dim != 4)."""
    a = {0: 0, 2: 2, 1: 4}[dim % 3]
    return (dim - a) // 3, a


def _general_cells(grid: TorusGrid, k: int, l: int, a: int, b: int):
    """The a <= b recipe on an m = 3k+a by n = 3l+b grid."""
    base = load_pattern("base3x3")
    merge = load_pattern("merge3x3")
    g = gcd(k, l)
    black: frozenset = frozenset()
    for ty in range(l):
        for tx in range(k):
            pat = merge if tx == 0 and ty <= g - 2 else base
            black = place(grid, black, pat, 3 * tx, 3 * ty)
    if b == 2:
        black = tile(grid, black, load_pattern("strip_b2"), (0, 3 * l, 3 * k - 1, 3 * l + 1))
    elif b == 4:
        black = tile(grid, black, load_pattern("strip_b4"), (0, 3 * l, 3 * k - 1, 3 * l + 3))
    if a == 2:
        black = tile(grid, black, load_pattern("strip_a2"), (3 * k, 0, 3 * k + 1, 3 * l - 1))
    elif a == 4:
        black = tile(grid, black, load_pattern("strip_a4"), (3 * k, 0, 3 * k + 3, 3 * l - 1))
    if a == 2 and b == 2:
        black = place(grid, black, load_pattern("corner_a2b2"), 3 * k, 3 * l)
    elif a == 2 and b == 4:
        black = place(grid, black, load_pattern("corner_a2b4"), 3 * k, 3 * l)
    elif a == 4 and b == 4:
        black = place(grid, black, load_pattern("corner_a4b4"), 3 * k, 3 * l)
    return black, g


def _n4_cells(grid: TorusGrid) -> tuple[frozenset, int, int]:
    """Height-4 recipe: m = 2k + a, a in {1, 2}."""
    m = grid.m
    a = 1 if m % 2 else 2
    k = (m - a) // 2
    black = tile(grid, frozenset(), load_pattern("n4_base"), (0, 0, 2 * k - 1, 3))
    if a == 1:
        black = place(grid, black, load_pattern("n4_cap1"), 2 * k - 1, 0)
    else:
        black = place(grid, black, load_pattern("n4_cap2"), 2 * k, 0)
    return black, k, a


def construct_3cs(m: int, n: int) -> TorusConstruction:
    """A small irreversible 3-conversion set of T(m, n), verified to work.

    General grids meet (mn + 3)/3, (mn + 2)/3 or (mn + 4)/3 depending on the
    boundary case; grids with a side of length 4 meet (3mn + 4)/8.
    """
    if m < 3 or n < 3:
        raise TorusError("torus dimensions must be at least 3")
    grid = TorusGrid(m, n)

    if m == 4 or n == 4:
        transposed = n != 4
        build = TorusGrid(m if not transposed else n, 4)
        black, k, a = _n4_cells(build)
        if transposed:
            black = frozenset((y, x) for x, y in black)
        size = 3 * k + 2 if a == 1 else 3 * k + 3
        bound = (3 * m * n + 4) // 8
        params = CaseParams(
            tag=f"n4_a{a}", m=m, n=n, k=k, l=None, a=a, b=None, g=None,
            transposed=transposed, size=size, bound=bound,
        )
        if len(black) != size or size > bound:
            raise TorusError("side-4 construction size is off")
        verts = frozenset(grid.vertex(x, y) for x, y in black)
        if not is_conversion_set(grid.graph(), verts, 3):
            raise TorusError("side-4 construction failed to percolate")
        return TorusConstruction(grid, black, verts, params)

    ka, aa = _split_general(m)
    kb, bb = _split_general(n)
    transposed = aa > bb
    if transposed:
        build = TorusGrid(n, m)
        k, a, l, b = kb, bb, ka, aa
    else:
        build = TorusGrid(m, n)
        k, a, l, b = ka, aa, kb, bb
    black, g = _general_cells(build, k, l, a, b)
    tag = {(0, 0): "A", (0, 2): "B", (0, 4): "C",
           (2, 2): "D", (2, 4): "E", (4, 4): "F"}[(a, b)]
    if tag in ("A", "B", "C"):
        size = (m * n + 3) // 3
    elif tag == "E":
        size = (m * n + 4) // 3
    else:
        size = (m * n + 2) // 3
    bound = (m * n + 4) // 3

    graph = grid.graph()
    if tag in ("A", "B", "C"):
        # one extra black square breaks the merged white cycle
        done = None
        for cand in ((0, 0), (1, 1)):
            if cand in black:
                continue
            attempt = black | {cand}
            cells = (
                frozenset((y, x) for x, y in attempt) if transposed else attempt
            )
            verts = frozenset(grid.vertex(x, y) for x, y in cells)
            if len(cells) == size and is_conversion_set(graph, verts, 3):
                done = (cells, verts)
                break
        if done is None:
            raise TorusError("no extra-square position percolates")
        cells, verts = done
    else:
        cells = frozenset((y, x) for x, y in black) if transposed else black
        verts = frozenset(grid.vertex(x, y) for x, y in cells)
        if len(cells) != size:
            raise TorusError(
                f"case {tag} produced {len(cells)} blacks, expected {size}"
            )
        if not is_conversion_set(graph, verts, 3):
            raise TorusError(f"case {tag} construction failed to percolate")

    params = CaseParams(
        tag=tag, m=m, n=n, k=k, l=l, a=a, b=b, g=g,
        transposed=transposed, size=size, bound=bound,
    )
    return TorusConstruction(grid, cells, verts, params)


def render_cells(m: int, n: int, cells) -> str:
    """ASCII art, top row first, '#' black '.' white."""
    black = set(cells)
    rows = []
    for y in range(n - 1, -1, -1):
        rows.append("".join("#" if (x, y) in black else "." for x in range(m)))
    return "\n".join(rows)


def _bitmaps(width: int, height: int, blacks: int):
    squares = [(x, y) for y in range(height) for x in range(width)]
    for combo in combinations(squares, blacks):
        yield frozenset(combo)


def search_tile_patterns(
    width: int,
    height: int,
    blacks: int,
    family: str = "general",
    battery=None,
    limit: int | None = None,
):
    """Exhaustive bitmap search for workable tile families.

    family="general": returns (base, merge) pairs such that the base tiling
    of every battery torus leaves a clean cycle decomposition with gcd(k, l)
    cycles, and the merge-plus-extra-square recipe percolates.

    family="n4": returns (base, cap1, cap2) triples for the height-4 recipe,
    cap budgets blacks - 1 and blacks, verified on odd and even widths.

    Exhausts the full space (or the first `limit` winners) and returns the
    list; an empty list means no family fits the budget.
    """
    if family == "general":
        battery = battery or ((6, 6), (9, 6), (6, 9), (9, 9), (12, 6))
        wins = []
        for base_cells in _bitmaps(width, height, blacks):
            base = TorusPattern("base", width, height, base_cells)
            if not _base_ok(base, battery):
                continue
            for merge_cells in _bitmaps(width, height, blacks):
                merge = TorusPattern("merge", width, height, merge_cells)
                if _family_ok(base, merge, battery):
                    wins.append((base, merge))
                    if limit and len(wins) >= limit:
                        return wins
        return wins
    if family == "n4":
        battery = battery or (3, 5, 7, 6, 8)
        wins = []
        for base_cells in _bitmaps(width, height, blacks):
            base = TorusPattern("n4_base", width, height, base_cells)
            caps1 = [
                TorusPattern("n4_cap1", width, height, c)
                for c in _bitmaps(width, height, blacks - 1)
                if _n4_ok(base, TorusPattern("n4_cap1", width, height, c), 1, battery)
            ]
            if not caps1:
                continue
            caps2 = [
                TorusPattern("n4_cap2", width, height, c)
                for c in _bitmaps(width, height, blacks)
                if _n4_ok(base, TorusPattern("n4_cap2", width, height, c), 2, battery)
            ]
            if caps2:
                wins.append((base, caps1[0], caps2[0]))
                if limit and len(wins) >= limit:
                    return wins
        return wins
    raise ValueError(f"unknown family {family!r}")


def _base_ok(base: TorusPattern, battery) -> bool:
    for m, n in battery:
        if m % base.width or n % base.height:
            return False
        grid = TorusGrid(m, n)
        black = tile(grid, frozenset(), base, (0, 0, m - 1, n - 1))
        comps, regular = white_cycle_structure(grid, black)
        if not regular:
            return False
        if len(comps) != gcd(m // base.width, n // base.height):
            return False
    return True


def _family_ok(base: TorusPattern, merge: TorusPattern, battery) -> bool:
    for m, n in battery:
        grid = TorusGrid(m, n)
        k, l = m // base.width, n // base.height
        g = gcd(k, l)
        black: frozenset = frozenset()
        for ty in range(l):
            for tx in range(k):
                pat = merge if tx == 0 and ty <= g - 2 else base
                black = place(grid, black, pat, base.width * tx, base.height * ty)
        if len(black) != m * n // 3:
            return False
        graph = grid.graph()
        good = False
        for cand in ((0, 0), (1, 1)):
            if cand in black:
                continue
            verts = frozenset(grid.vertex(x, y) for x, y in black | {cand})
            if is_conversion_set(graph, verts, 3):
                good = True
                break
        if not good:
            return False
    return True


def _n4_ok(base: TorusPattern, cap: TorusPattern, a: int, widths) -> bool:
    for m in widths:
        if m % 2 != a % 2 or m < 3:
            continue
        k = (m - a) // 2
        if k < 1:
            continue
        grid = TorusGrid(m, 4)
        black = tile(grid, frozenset(), base, (0, 0, 2 * k - 1, 3))
        at = 2 * k - 1 if a == 1 else 2 * k
        black = place(grid, black, cap, at, 0)
        budget = (3 * m * 4 + 4) // 8
        if len(black) > budget:
            return False
        verts = frozenset(grid.vertex(x, y) for x, y in black)
        if not is_conversion_set(grid.graph(), verts, 3):
            return False
    return True
