import random
from itertools import combinations

import pytest

from ikcs.gf2 import field
from ikcs.polymatroid import (
    ConsistencyError,
    PolymatroidInstance,
    max_matching,
    min_spanning_set,
    nu_algebraic,
    nu_bruteforce,
)
from genutil import random_instance


def std_basis_instance():
    # three disjoint coordinate lines in GF(2)^6: perfect matching exists
    lines = []
    for i in range(3):
        a = [0] * 6
        b = [0] * 6
        a[2 * i] = 1
        b[2 * i + 1] = 1
        lines.append((tuple(a), tuple(b)))
    return PolymatroidInstance(lines, 6, field(16))


def test_rank_function_axioms():
    rng = random.Random(8)
    for _ in range(40):
        inst = random_instance(rng, rng.randrange(1, 6), rng.randrange(2, 5), w=16)
        full = list(range(len(inst.lines)))
        assert inst.rank([]) == 0
        for x in full:
            assert inst.line_rank(x) <= 2
        # monotone and submodular on random pairs of nested subsets
        for _ in range(10):
            sub = [i for i in full if rng.random() < 0.5]
            sup = sorted(set(sub) | {i for i in full if rng.random() < 0.5})
            assert inst.rank(sub) <= inst.rank(sup)
            x = rng.randrange(len(inst.lines))
            if x not in sup:
                gain_small = inst.rank(sorted(set(sub) | {x})) - inst.rank(sub)
                gain_big = inst.rank(sorted(set(sup) | {x})) - inst.rank(sup)
                assert gain_big <= gain_small


def test_perfect_matching_detected():
    inst = std_basis_instance()
    assert nu_bruteforce(inst) == 3
    assert nu_algebraic(inst, rng=random.Random(0)) == 3
    m = max_matching(inst, rng=random.Random(1))
    assert len(m) == 3 and inst.rank(m) == 6


def test_degenerate_lines():
    fld = field(16)
    zero = ((0, 0), (0, 0))
    single = ((1, 0), (1, 0))  # rank-1 line
    inst = PolymatroidInstance([zero, single, ((1, 0), (0, 1))], 2, fld)
    assert inst.line_rank(0) == 0
    assert inst.line_rank(1) == 1
    assert nu_bruteforce(inst) == 1
    assert nu_algebraic(inst, rng=random.Random(5)) == 1


def test_algebraic_matches_bruteforce_battery():
    rng = random.Random(404)
    for _ in range(150):
        inst = random_instance(rng, rng.randrange(1, 8), rng.randrange(2, 6), w=16)
        assert nu_algebraic(inst, rng=rng) == nu_bruteforce(inst)


def test_field_too_small_rejected():
    fld = field(8)
    lines = [((1, 0), (0, 1))] * 12  # needs order >= 2 * 12^2 = 288 > 256
    inst = PolymatroidInstance(lines, 2, fld)
    with pytest.raises(ValueError):
        nu_algebraic(inst, rng=random.Random(0))


def brute_rho(inst):
    full = inst.rank()
    idx = range(len(inst.lines))
    for size in range(len(inst.lines) + 1):
        for sub in combinations(idx, size):
            if inst.rank(sub) == full:
                return size
    raise AssertionError


def test_gallai_identity_battery():
    rng = random.Random(1234)
    for _ in range(60):
        inst = random_instance(rng, rng.randrange(1, 7), rng.randrange(2, 5), w=16)
        nu = nu_bruteforce(inst)
        rho = brute_rho(inst)
        assert nu + rho == inst.rank()
        span = min_spanning_set(inst, rng=rng)
        assert len(span) == rho
        assert inst.rank(span) == inst.rank()


def test_matching_is_downward_closed_certificate():
    rng = random.Random(9)
    for _ in range(40):
        inst = random_instance(rng, rng.randrange(1, 7), rng.randrange(2, 5), w=16)
        m = max_matching(inst, rng=rng)
        assert inst.rank(m) == 2 * len(m)
        assert len(m) == nu_bruteforce(inst)


def test_subset_queries():
    inst = std_basis_instance()
    assert nu_bruteforce(inst, subset=[0, 1]) == 2
    assert nu_algebraic(inst, rng=random.Random(3), subset=[0]) == 1
    span = min_spanning_set(inst, rng=random.Random(4), subset=[0, 2])
    assert set(span) == {0, 2}


def test_json_roundtrip():
    rng = random.Random(55)
    for w in (16, 32):
        inst = random_instance(rng, 5, 3, w=w)
        back = PolymatroidInstance.from_json_dict(inst.to_json_dict())
        assert back.lines == inst.lines
        assert back.dim == inst.dim
        assert back.field.w == inst.field.w


def test_instance_validation():
    fld = field(16)
    with pytest.raises(ValueError):
        PolymatroidInstance([((1,), (0, 1))], 2, fld)  # ragged vectors
    with pytest.raises(ValueError):
        PolymatroidInstance([((1 << 20, 0), (0, 1))], 2, fld)  # out of field range
