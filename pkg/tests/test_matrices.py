import itertools

import pytest

from atomgames.kernel import ResourceBudgetError, UsageError, check_axioms
from atomgames.matrices import (
    BasicMatrix,
    brute_force_basic_matrices,
    ca_from_matrices,
    check_cylindric_basis,
    enumerate_basic_matrices,
    is_basic_matrix,
)
from atomgames.monk import make_monk_graph, monk_atom_structure


@pytest.fixture(scope="module")
def monk_k3():
    return monk_atom_structure(make_monk_graph("cliqueUnion", N=3, count=1), 3)


@pytest.fixture(scope="module")
def k3_matrices(monk_k3):
    return enumerate_basic_matrices(monk_k3, 3)


def test_enumeration_matches_brute_force(monk_k3, k3_matrices):
    # frozen count for the one-triangle Monk structure with 3 colours
    assert len(k3_matrices) == 748
    assert brute_force_basic_matrices(monk_k3, 3) == k3_matrices


def test_every_enumerated_matrix_is_basic(monk_k3, k3_matrices):
    for f in k3_matrices[::37]:
        assert is_basic_matrix(monk_k3, f)


def test_is_basic_matrix_rejections(monk_k3):
    ident = next(iter(monk_k3.identity))
    other = (ident + 1) % monk_k3.n_atoms
    # non-identity diagonal
    f = BasicMatrix(3, (other,) * 9)
    assert not is_basic_matrix(monk_k3, f)
    # identity diagonal but an inconsistent repeated triple: cells (x,y)
    # all carry one colour on non-adjacent vertices
    ra = monk_atom_structure(make_monk_graph("cliqueUnion", N=3, count=2), 3)
    idm = next(iter(ra.identity))
    label = {ra.labels(a): a for a in range(ra.n_atoms)}
    a03 = label["(0,0)"]  # vertex 0
    b03 = label["(3,0)"]  # vertex 3, other clique, same colour
    cells = [idm] * 9
    for x, y in itertools.permutations(range(3), 2):
        cells[x * 3 + y] = a03 if (x, y) in ((0, 1), (1, 0)) else b03
    # triangle (a03, b03, b03) has one colour, vertices {0, 3}, no edge
    assert not is_basic_matrix(ra, BasicMatrix(3, tuple(cells)))


def test_cylindric_basis(monk_k3, k3_matrices):
    rep = check_cylindric_basis(k3_matrices, monk_k3, 3)
    assert rep.is_basis, rep.summary()


def test_removing_a_unique_witness_breaks_the_basis(monk_k3, k3_matrices):
    seen = {}
    for f in k3_matrices:
        seen.setdefault((f.cell(0, 1), f.cell(0, 2), f.cell(2, 1)), []).append(f)
    unique = [fs[0] for fs in seen.values() if len(fs) == 1]
    assert unique, "fixture has no uniquely witnessed triple"
    pruned = [f for f in k3_matrices if f is not unique[0]]
    rep = check_cylindric_basis(pruned, monk_k3, 3)
    assert not rep.is_basis
    assert rep.witnesses and rep.witnesses[0][0] == "witnessing"


def test_ca_from_matrices_passes_atom_battery(monk_k3, k3_matrices):
    ca = ca_from_matrices(k3_matrices, 3, identity_set=monk_k3.identity)
    assert ca.dimension == 3 and ca.n_atoms == len(k3_matrices)
    rep = check_axioms(ca, sample_budget=25)
    assert rep.atom_level_ok, rep.summary()


def test_matrix_helpers(monk_k3, k3_matrices):
    f, g = k3_matrices[0], k3_matrices[1]
    assert f.agrees_off(f, set())
    assert f.agrees_off(g, {0, 1, 2})
    assert isinstance(f.describe(monk_k3), str)


def test_search_cap(monk_k3):
    with pytest.raises(ResourceBudgetError):
        enumerate_basic_matrices(monk_k3, 3, search_cap=50)


def test_bad_sizes(monk_k3, k3_matrices):
    with pytest.raises(UsageError):
        enumerate_basic_matrices(monk_k3, 0)
    with pytest.raises(UsageError):
        check_cylindric_basis(k3_matrices, monk_k3, 2)
    with pytest.raises(UsageError):
        ca_from_matrices([], 3)
