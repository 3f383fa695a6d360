import json

import pytest

from atomgames.cli import (
    EXIT_MISMATCH,
    EXIT_OK,
    EXIT_RESOURCE,
    EXIT_USAGE,
    main,
)
from atomgames.interchange import dump_structure
from atomgames.kernel import full_powerset_structure


@pytest.fixture()
def powerset_file(tmp_path):
    p = tmp_path / "ps23.json"
    dump_structure(full_powerset_structure(2, 3), str(p))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out


def test_gen_rainbow(capsys):
    code, out = run(capsys, "gen", "rainbow", "--preset", "finiteRainbow",
                    "--n", "3", "--greens", "2", "--reds", "2")
    assert code == EXIT_OK
    assert "17301" in out


def test_gen_rainbow_machine_format(capsys):
    code, out = run(capsys, "gen", "rainbow", "--greens", "2", "--reds", "2",
                    "--format", "machine")
    assert code == EXIT_OK
    assert json.loads(out)["atoms"] == 17301


def test_gen_monk_with_dot(capsys):
    code, out = run(capsys, "gen", "monk", "--family", "cliqueUnion",
                    "--N", "3", "--count", "2", "--n", "3", "--dot")
    assert code == EXIT_OK
    assert "chromatic number: 3" in out
    assert "--" in out  # DOT edges


def test_gen_bin(capsys):
    code, out = run(capsys, "gen", "bin", "--n", "3", "--r", "1")
    assert code == EXIT_OK
    assert "psi(3,1) = 4" in out


def test_gen_blowup(capsys):
    code, out = run(capsys, "gen", "blowup", "--n", "3", "--greens", "2",
                    "--reds", "2", "--T", "2")
    assert code == EXIT_OK
    assert "pass" in out and "FAIL" not in out


def test_gen_out_file(tmp_path, capsys):
    p = tmp_path / "ps.json"
    code, out = run(capsys, "gen", "bin", "--n", "3", "--r", "1",
                    "--out", str(p))
    assert code == EXIT_OK
    assert json.loads(p.read_text())["kind"] == "RA"


def test_solve_ef(capsys):
    code, out = run(capsys, "solve", "EF", "--pebbles", "4", "--rounds", "5",
                    "--ef-a", "K:4", "--ef-b", "K:3")
    assert code == EXIT_OK
    assert "winner=Forall" in out


def test_solve_gmk_powerset(capsys):
    code, out = run(capsys, "solve", "Gmk", "--powerset", "2", "3",
                    "--m", "5", "--k", "3")
    assert code == EXIT_OK
    assert "winner=Exists" in out


def test_solve_from_file(capsys, powerset_file):
    code, out = run(capsys, "solve", "Fm", "--in", powerset_file, "--m", "4")
    assert code == EXIT_OK
    assert "winner=Exists" in out


def test_solve_unknown_is_resource_exit(capsys, powerset_file):
    code, out = run(capsys, "solve", "Fm", "--in", powerset_file, "--m", "4",
                    "--budget-states", "1")
    assert code == EXIT_RESOURCE


def test_check_axioms(capsys, powerset_file):
    code, out = run(capsys, "check", "axioms", "--in", powerset_file)
    assert code == EXIT_OK
    assert "pass" in out


def test_check_basis(capsys, tmp_path):
    from atomgames.monk import make_monk_graph, monk_atom_structure

    ra = monk_atom_structure(make_monk_graph("cliqueUnion", N=3, count=1), 3)
    p = tmp_path / "ra.json"
    dump_structure(ra, str(p))
    code, out = run(capsys, "check", "basis", "--in", str(p), "--m", "3")
    assert code == EXIT_OK
    assert "matrices: 748" in out


def test_check_network(capsys, tmp_path, powerset_file):
    ca = full_powerset_structure(2, 3)
    label = ca.labels or str
    names = {a: str(label(a)) for a in range(ca.n_atoms)}
    # label every triple over one node with a non-diagonal-free atom:
    # the all-diagonal tuple (0,0,0) needs an atom below every d_ij
    diag_atoms = [
        a for a in range(ca.n_atoms)
        if all(ca.diag[k][a] for k in ca.diag)
    ]
    nd = {"nodes": [0], "labels": {"0,0,0": names[diag_atoms[0]]}}
    p = tmp_path / "net.json"
    p.write_text(json.dumps(nd))
    code, out = run(capsys, "check", "network", "--in", powerset_file,
                    "--network", str(p))
    assert code == EXIT_OK
    # a non-diagonal atom on the constant tuple must be rejected
    off = [a for a in range(ca.n_atoms) if a not in diag_atoms]
    nd["labels"]["0,0,0"] = names[off[0]]
    p.write_text(json.dumps(nd))
    code, out = run(capsys, "check", "network", "--in", powerset_file,
                    "--network", str(p))
    assert code == EXIT_MISMATCH


def test_rep_search(capsys, powerset_file):
    code, out = run(capsys, "rep-search", "--in", powerset_file,
                    "--max-base", "2")
    assert code == EXIT_OK
    assert "found representation" in out


def test_rep_search_budget(capsys, powerset_file):
    code, out = run(capsys, "rep-search", "--in", powerset_file,
                    "--max-base", "2", "--budget-states", "2")
    assert code == EXIT_RESOURCE


def test_run_bundled_scenario(capsys):
    code, out = run(capsys, "run", "ca43-forall-wins")
    assert code == EXIT_OK
    assert "ForallWinsWithin(4)" in out


def test_run_scenario_mismatch(tmp_path, capsys):
    sc = {
        "name": "wrong-expect",
        "construction": {"preset": "finiteRainbow", "n": 3, "greens": 4,
                         "reds": 3},
        "checks": [{"kind": "script", "variant": "Fm", "m": 6,
                    "depthBudget": 6, "expect": "RefutedAt"}],
    }
    p = tmp_path / "sc.json"
    p.write_text(json.dumps(sc))
    code, out = run(capsys, "run", str(p))
    assert code == EXIT_MISMATCH
    assert "EXPECTED" in out


def test_run_unknown_scenario_or_preset(tmp_path, capsys):
    code, _ = run(capsys, "run", "no-such-scenario")
    assert code == EXIT_USAGE
    sc = {"name": "bad", "construction": {"preset": "mystery", "n": 3},
          "checks": [{"kind": "script"}]}
    p = tmp_path / "sc.json"
    p.write_text(json.dumps(sc))
    code, _ = run(capsys, "run", str(p))
    assert code == EXIT_USAGE


def test_usage_exit_codes(capsys):
    assert main(["solve", "Gmk"]) == EXIT_USAGE  # no carrier
    assert main(["bogus"]) == EXIT_USAGE


def test_reports_byte_identical(capsys, powerset_file):
    outs = set()
    for _ in range(3):
        _, out = run(capsys, "solve", "Gmk", "--in", powerset_file,
                     "--m", "5", "--k", "3", "--format", "machine")
        outs.add(out)
    assert len(outs) == 1
