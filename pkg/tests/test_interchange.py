import itertools

import numpy as np
import pytest

from atomgames.interchange import (
    dump_structure,
    load_structure,
    structure_from_dict,
    structure_to_dict,
)
from atomgames.kernel import UsageError
from atomgames.monk import make_monk_graph, monk_atom_structure


def test_ca_roundtrip(powerset23):
    d = structure_to_dict(powerset23)
    assert d["kind"] == "CA" and d["dimension"] == 3
    ca2 = structure_from_dict(d)
    assert ca2.n_atoms == powerset23.n_atoms
    for i in range(3):
        a = powerset23.cyl[i].class_ids
        b = ca2.cyl[i].class_ids
        # same partition up to class renumbering
        assert np.array_equal(
            np.unique(a, return_inverse=True)[1],
            np.unique(b, return_inverse=True)[1],
        )
    for k in powerset23.diag:
        assert np.array_equal(powerset23.diag[k], ca2.diag[k])


def test_ra_roundtrip():
    ra = monk_atom_structure(make_monk_graph("cliqueUnion", N=3, count=1), 3)
    d = structure_to_dict(ra)
    ra2 = structure_from_dict(d)
    assert ra2.identity == ra.identity
    assert ra2.converse == ra.converse
    for t in itertools.product(range(ra.n_atoms), repeat=3):
        assert ra.consistent(*t) == ra2.consistent(*t)


def test_triples_mode_is_the_smaller_side():
    ra = monk_atom_structure(make_monk_graph("cliqueUnion", N=3, count=1), 3)
    d = structure_to_dict(ra)
    n = ra.n_atoms
    listed = len(d["triples"]["list"])
    assert listed <= n ** 3 - listed


def test_file_roundtrip(tmp_path, powerset23):
    p = tmp_path / "ca.json"
    dump_structure(powerset23, str(p))
    ca2 = load_structure(str(p))
    assert ca2.n_atoms == powerset23.n_atoms


@pytest.mark.parametrize(
    "mutate,frag",
    [
        (lambda d: d.update(kind="XX"), "kind"),
        (lambda d: d.update(atoms=d["atoms"] + [d["atoms"][0]]), "atoms"),
        (lambda d: d["diag"].update({"0,1": ["missing-atom"]}), "diag"),
        (lambda d: d["diag"].pop("1,2"), "diag"),
        (lambda d: d.update(cyl=d["cyl"][:2]), "cyl"),
    ],
)
def test_loader_diagnostics(powerset23, mutate, frag):
    d = structure_to_dict(powerset23)
    mutate(d)
    with pytest.raises(UsageError) as exc:
        structure_from_dict(d)
    assert frag in str(exc.value)


def test_bad_converse_rejected():
    ra = monk_atom_structure(make_monk_graph("cliqueUnion", N=3, count=1), 3)
    d = structure_to_dict(ra)
    names = d["atoms"]
    # monk atoms are self-converse; redirecting one breaks the involution
    d["converse"][names[1]] = names[0]
    with pytest.raises(UsageError):
        structure_from_dict(d)


def test_invalid_json_file(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{ not json")
    with pytest.raises(UsageError) as exc:
        load_structure(str(p))
    assert "line" in str(exc.value)
