"""Linear 2-polymatroids over GF(2^w) and matroid parity.

An instance is a list of lines, each spanned by two vectors in F^dim; the
rank function f(S) is the dimension of the span of all vectors of S.  A
matching is a set M with f(M) = 2|M|; nu is the maximum matching size, rho
the minimum size of a spanning set (f(S) = f(ground)), and nu + rho = f(V)
(Gallai-type identity).

nu is computed two ways: exhaustive search over matchings (matchings form an
independence system, so depth-first growth with a basis is exact), and the
randomized algebraic route: the alternating matrix Y(t) = sum_i t_i
(a_i b_i^T + b_i a_i^T) has rank 2 nu for generic t, and never more, so
random t over a large field gives a one-sided estimate with failure
probability O(lines / field size) per trial.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .gf2 import GF2Ext, Gf2Basis, gf2_rank, field as shared_field

__all__ = [
    "Line",
    "PolymatroidInstance",
    "ConsistencyError",
    "nu_bruteforce",
    "nu_algebraic",
    "max_matching",
    "min_spanning_set",
    "pack_vector",
    "unpack_vector",
]

NU_BRUTE_MAX_LINES = 18


class ConsistencyError(RuntimeError):
    """A randomized certificate failed its deterministic recheck."""


@dataclass(frozen=True)
class Line:
    """A subspace spanned by two (possibly dependent) vectors."""

    a: tuple[int, ...]
    b: tuple[int, ...]

    def vectors(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return self.a, self.b


class PolymatroidInstance:
    def __init__(self, lines, dim: int, fld: GF2Ext | None = None):
        self.field = fld if fld is not None else shared_field(32)
        self.dim = int(dim)
        self.lines: tuple[Line, ...] = tuple(
            ln if isinstance(ln, Line) else Line(tuple(ln[0]), tuple(ln[1]))
            for ln in lines
        )
        top = 1 << self.field.w
        for ln in self.lines:
            if len(ln.a) != self.dim or len(ln.b) != self.dim:
                raise ValueError("vector length does not match dim")
            if any(not 0 <= c < top for c in ln.a + ln.b):
                raise ValueError("coefficient outside the field")
        self.binary = all(c in (0, 1) for ln in self.lines for c in ln.a + ln.b)
        self._masks: list[tuple[int, int]] | None = None
        if self.binary:
            self._masks = [
                (_to_mask(ln.a), _to_mask(ln.b)) for ln in self.lines
            ]
        self._alt: list | None = None

    def __len__(self) -> int:
        return len(self.lines)

    def ground(self) -> tuple[int, ...]:
        return tuple(range(len(self.lines)))

    def rank(self, subset=None) -> int:
        """f(subset): dimension of the span of the subset's vectors."""
        idx = self.ground() if subset is None else tuple(subset)
        if self._masks is not None:
            rows = []
            for i in idx:
                a, b = self._masks[i]
                rows.append(a)
                rows.append(b)
            return gf2_rank(rows)
        rows = []
        for i in idx:
            rows.append(list(self.lines[i].a))
            rows.append(list(self.lines[i].b))
        return self.field.rank(rows)

    def line_rank(self, i: int) -> int:
        return self.rank((i,))

    def alt_supports(self) -> list:
        """Per line, the nonzero entries (p, q, coeff), p < q, of a b^T + b a^T."""
        if self._alt is None:
            self._alt = [_alt_support(self, i) for i in range(len(self.lines))]
        return self._alt

    def to_json_dict(self) -> dict:
        return {
            "w": self.field.w,
            "dim": self.dim,
            "lines": [
                [pack_vector(ln.a, self.field.w), pack_vector(ln.b, self.field.w)]
                for ln in self.lines
            ],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "PolymatroidInstance":
        w = int(obj["w"])
        dim = int(obj["dim"])
        lines = [
            Line(unpack_vector(a, w, dim), unpack_vector(b, w, dim))
            for a, b in obj["lines"]
        ]
        return cls(lines, dim, shared_field(w))


def pack_vector(vec, w: int) -> str:
    """Hex encoding; coordinate j sits at bits [j*w, (j+1)*w)."""
    out = 0
    for j, c in enumerate(vec):
        out |= int(c) << (j * w)
    return hex(out)


def unpack_vector(text: str, w: int, dim: int) -> tuple[int, ...]:
    x = int(text, 16)
    mask = (1 << w) - 1
    return tuple((x >> (j * w)) & mask for j in range(dim))


def _to_mask(vec) -> int:
    out = 0
    for j, c in enumerate(vec):
        if c:
            out |= 1 << j
    return out


class _FieldBasis:
    """Incremental row basis over a GF2Ext field (unique pivot per row)."""

    def __init__(self, fld: GF2Ext):
        self.field = fld
        self.rows: list[list[int]] = []
        self.pivots: list[int] = []

    def copy(self) -> "_FieldBasis":
        out = _FieldBasis(self.field)
        out.rows = [list(r) for r in self.rows]
        out.pivots = list(self.pivots)
        return out

    def add(self, vec) -> bool:
        f = self.field
        v = list(vec)
        for row, p in zip(self.rows, self.pivots):
            if v[p]:
                c = f.mul(v[p], f.inv(row[p]))
                v = [x ^ f.mul(c, y) for x, y in zip(v, row)]
        piv = next((j for j, x in enumerate(v) if x), None)
        if piv is None:
            return False
        self.rows.append(v)
        self.pivots.append(piv)
        return True


def _line_basis_adder(inst: PolymatroidInstance):
    """Callable basis factory: (basis, line index) -> extended basis or None."""
    if inst._masks is not None:
        masks = inst._masks

        def try_add(basis: Gf2Basis, i: int):
            nb = basis.copy()
            a, b = masks[i]
            if nb.add(a) and nb.add(b):
                return nb
            return None

        return Gf2Basis(), try_add

    def try_add_f(basis: _FieldBasis, i: int):
        nb = basis.copy()
        ln = inst.lines[i]
        if nb.add(ln.a) and nb.add(ln.b):
            return nb
        return None

    return _FieldBasis(inst.field), try_add_f


def nu_bruteforce(
    inst: PolymatroidInstance,
    subset=None,
    max_lines: int = NU_BRUTE_MAX_LINES,
) -> int:
    """Exact nu by exhaustive growth of matchings."""
    idx = list(inst.ground() if subset is None else subset)
    if len(idx) > max_lines:
        raise ValueError(f"{len(idx)} lines exceed brute-force cap {max_lines}")
    empty, try_add = _line_basis_adder(inst)
    best = 0

    def dfs(pos: int, basis, size: int) -> None:
        nonlocal best
        if size > best:
            best = size
        if size + (len(idx) - pos) <= best:
            return
        for j in range(pos, len(idx)):
            nb = try_add(basis, idx[j])
            if nb is not None:
                dfs(j + 1, nb, size + 1)

    dfs(0, empty, 0)
    return best


def _alt_support(inst: PolymatroidInstance, i: int):
    """Arrays (P, Q, C): entries of the alternating form a b^T + b a^T, p < q."""
    f = inst.field
    a, b = inst.lines[i].a, inst.lines[i].b
    if inst.binary:
        av = np.array(a, dtype=np.int64)
        bv = np.array(b, dtype=np.int64)
        m = np.bitwise_xor(np.outer(av, bv), np.outer(bv, av))
        p_idx, q_idx = np.nonzero(np.triu(m, 1))
        return p_idx, q_idx, m[p_idx, q_idx]
    ps, qs, cs = [], [], []
    for p in range(inst.dim):
        for q in range(p + 1, inst.dim):
            c = f.mul(a[p], b[q]) ^ f.mul(b[p], a[q])
            if c:
                ps.append(p)
                qs.append(q)
                cs.append(c)
    return (
        np.array(ps, dtype=np.int64),
        np.array(qs, dtype=np.int64),
        np.array(cs, dtype=np.int64),
    )


def nu_algebraic(
    inst: PolymatroidInstance,
    rng: random.Random | None = None,
    trials: int = 3,
    subset=None,
) -> int:
    """Randomized nu: max over trials of rank(Y(t)) / 2; never overestimates."""
    idx = tuple(inst.ground() if subset is None else subset)
    fld = inst.field
    if fld.order < 2 * max(1, len(idx)) ** 2:
        raise ValueError("field too small for the randomized parity bound")
    rng = rng if rng is not None else random.Random()
    supports = inst.alt_supports()
    r = inst.dim
    best = 0
    for _ in range(trials):
        y = np.zeros((r, r), dtype=np.int64)
        for i in idx:
            p_idx, q_idx, coef = supports[i]
            if p_idx.size == 0:
                continue
            t = fld.rand_nonzero(rng)
            if inst.binary:
                vals = t
            else:
                vals = np.array(
                    [fld.mul(t, int(c)) for c in coef], dtype=np.int64
                )
            y[p_idx, q_idx] ^= vals
            y[q_idx, p_idx] ^= vals
        rk = fld.rank(y)
        assert rk % 2 == 0, "alternating matrix with odd rank"
        best = max(best, rk // 2)
    return best


def max_matching(
    inst: PolymatroidInstance,
    rng: random.Random | None = None,
    subset=None,
    max_retries: int = 5,
) -> tuple[int, ...]:
    """A maximum matching, by deletion-greedy over the algebraic nu.

    Keeps an element only if deleting it would drop nu.  The survivor set is
    rechecked deterministically (f(M) = 2|M|) against a confirmed nu; on
    mismatch the pass is rerun with fresh randomness.
    """
    idx = tuple(inst.ground() if subset is None else subset)
    rng = rng if rng is not None else random.Random()
    target = nu_algebraic(inst, rng, trials=3, subset=idx)
    for _ in range(max_retries):
        alive = list(idx)
        for x in tuple(alive):
            rest = [i for i in alive if i != x]
            if nu_algebraic(inst, rng, trials=1, subset=rest) == target:
                alive = rest
        if len(alive) == target and inst.rank(alive) == 2 * len(alive):
            better = nu_algebraic(inst, rng, trials=3, subset=idx)
            if better <= target:
                return tuple(alive)
            target = better
        else:
            target = max(target, nu_algebraic(inst, rng, trials=3, subset=idx))
    raise ConsistencyError("matching extraction failed to stabilize")


def min_spanning_set(
    inst: PolymatroidInstance,
    rng: random.Random | None = None,
    subset=None,
) -> tuple[int, ...]:
    """Minimum S within the subset with f(S) = f(subset); |S| = f - nu."""
    idx = tuple(inst.ground() if subset is None else subset)
    rng = rng if rng is not None else random.Random()
    full = inst.rank(idx)
    matching = max_matching(inst, rng, subset=idx)
    chosen = list(matching)
    have = inst.rank(chosen)
    if have != 2 * len(matching):
        raise ConsistencyError("matching does not span twice its size")
    for x in idx:
        if have == full:
            break
        if x in chosen:
            continue
        gain = inst.rank(chosen + [x]) - have
        if gain == 2:
            raise ConsistencyError(
                "rank jumped by 2 past a maximum matching; nu was undercounted"
            )
        if gain == 1:
            chosen.append(x)
            have += 1
    if have != full:
        raise ConsistencyError("greedy completion fell short of full rank")
    expected = full - len(matching)
    if len(chosen) != expected:
        raise ConsistencyError(
            f"spanning set size {len(chosen)} != f - nu = {expected}"
        )
    return tuple(sorted(chosen))
