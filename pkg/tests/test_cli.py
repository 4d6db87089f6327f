import json

from ikcs.cli import main
from ikcs.graph import Graph, parse_edge_list


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    payload = json.loads(out.out) if out.out.strip() else None
    return code, payload, out.err


def write_petersen(path):
    edges = [(i, (i + 1) % 5) for i in range(5)]
    edges += [(i + 5, ((i + 2) % 5) + 5) for i in range(5)]
    edges += [(i, i + 5) for i in range(5)]
    path.write_text("p 10 15\n" + "\n".join(f"{u} {v}" for u, v in edges) + "\n")


def test_simulate_success(tmp_path, capsys):
    f = tmp_path / "p3.edges"
    f.write_text("p 3 2\n0 1\n1 2\n")
    code, payload, err = run_cli(capsys, "simulate", "--k", "2", "--seed", "0,2", str(f))
    assert code == 0
    assert payload["trace"]["converted_all"]
    assert payload["trace"]["final_black"] == [0, 1, 2]
    assert "rng_seed" in payload
    assert "converts all" in err


def test_simulate_stuck_exit_one(tmp_path, capsys):
    f = tmp_path / "p4.edges"
    f.write_text("p 4 3\n0 1\n1 2\n2 3\n")
    code, payload, err = run_cli(capsys, "simulate", "--k", "2", "--seed", "0", str(f))
    assert code == 1
    assert not payload["trace"]["converted_all"]
    assert payload["stuck_certificate"]


def test_min_set_engines_agree(tmp_path, capsys):
    f = tmp_path / "petersen.edges"
    write_petersen(f)
    code, brute, _ = run_cli(capsys, "min-set", "--k", "2", "--engine", "brute", str(f))
    assert code == 0 and brute["size"] == 3
    code, deg3, _ = run_cli(
        capsys, "min-set", "--k", "2", "--engine", "deg3", "--rng-seed", "5", str(f)
    )
    assert code == 0 and deg3["size"] == 3
    code, auto, _ = run_cli(
        capsys, "min-set", "--k", "2", "--engine", "auto", "--rng-seed", "5", str(f)
    )
    assert code == 0 and auto["engine"] == "deg3" and auto["crosschecked"]


def test_min_set_engine_guard(tmp_path, capsys):
    f = tmp_path / "petersen.edges"
    write_petersen(f)
    code, payload, err = run_cli(capsys, "min-set", "--k", "3", "--engine", "deg3", str(f))
    assert code == 2 and payload is None
    assert "engine deg3" in err


def test_rng_seed_reproducible(tmp_path, capsys):
    f = tmp_path / "petersen.edges"
    write_petersen(f)
    args = ("min-set", "--k", "2", "--engine", "deg3", "--rng-seed", "31", str(f))
    _, a, _ = run_cli(capsys, *args)
    _, b, _ = run_cli(capsys, *args)
    assert a == b
    assert a["rng_seed"] == 31


def test_reduce_sat_roundtrip(tmp_path, capsys):
    cnf = tmp_path / "f.cnf"
    cnf.write_text("p cnf 2 2\n1 2 -1 0\n-2 -2 1 0\n")
    out_edges = tmp_path / "g.edges"
    code, payload, err = run_cli(
        capsys, "reduce-sat", "--out", str(out_edges), str(cnf)
    )
    assert code == 0
    g = parse_edge_list(out_edges.read_text())
    assert g.n == payload["n"]
    assert g == Graph(payload["n"], tuple(tuple(e) for e in payload["edges"]))
    assert payload["s"] == len(payload["leaves"]) + 2


def test_check_sat_equiv(tmp_path, capsys):
    sat = tmp_path / "sat.cnf"
    sat.write_text("p cnf 2 2\n1 2 -1 0\n-2 -2 1 0\n")
    code, payload, err = run_cli(capsys, "check-sat-equiv", str(sat))
    assert code == 0 and payload["match"] and payload["satisfiable"]
    unsat = tmp_path / "unsat.cnf"
    unsat.write_text("p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n")
    code, payload, err = run_cli(capsys, "check-sat-equiv", str(unsat))
    assert code == 0 and payload["match"] and not payload["satisfiable"]
    assert "unsatisfiable" in err


def test_torus_construct(tmp_path, capsys):
    code, payload, err = run_cli(
        capsys, "torus-construct", "6", "6", "--verify", "--emit-grid"
    )
    assert code == 0
    assert payload["case"] == "A" and payload["size"] == 13
    assert payload["verified"]
    assert len(payload["vertices"]) == 13
    assert payload["grid"].count("#") == 13
    assert "case A" in err


def test_torus_construct_bad_dims(capsys):
    code, payload, err = run_cli(capsys, "torus-construct", "2", "9")
    assert code == 2 and payload is None


def test_polymatroid_debug(tmp_path, capsys):
    from ikcs.gf2 import field
    from ikcs.polymatroid import PolymatroidInstance

    inst = PolymatroidInstance(
        [((1, 0, 0), (0, 1, 0)), ((0, 1, 0), (0, 0, 1)), ((1, 1, 0), (1, 0, 1))],
        3,
        field(16),
    )
    f = tmp_path / "inst.json"
    f.write_text(json.dumps(inst.to_json_dict()))
    code, payload, err = run_cli(capsys, "polymatroid-debug", "--rng-seed", "2", str(f))
    assert code == 0
    assert payload["gallai_ok"]
    assert payload["nu"] == payload["nu_bruteforce"]
    assert payload["rank_full"] == payload["nu"] + len(payload["min_spanning_set"])


def test_bad_inputs_exit_two(tmp_path, capsys):
    missing = tmp_path / "nope.edges"
    code, _, err = run_cli(capsys, "simulate", "--k", "2", "--seed", "0", str(missing))
    assert code == 2 and "cannot read" in err
    bad = tmp_path / "bad.cnf"
    bad.write_text("p cnf 1 1\n1 1 0\n")
    code, _, err = run_cli(capsys, "check-sat-equiv", str(bad))
    assert code == 2 and "3 literals" in err
    f = tmp_path / "p.edges"
    f.write_text("p 2 1\n0 1\n")
    code, _, _ = run_cli(capsys, "simulate", "--k", "2", "--seed", "0,banana", str(f))
    assert code == 2


def test_usage_error_exit_two(capsys):
    assert main(["no-such-command"]) == 2
    capsys.readouterr()
