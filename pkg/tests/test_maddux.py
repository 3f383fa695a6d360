import pytest

from atomgames.kernel import ResourceBudgetError, UsageError, check_axioms
from atomgames.maddux import bin_atom_structure, bin_universe, kappa, psi


def _kappa_reference(x, y):
    # independent unroll, written recursively against the closed loop form
    if y == 0:
        return 0
    return 1 + x * _kappa_reference(x, y - 1)


def test_kappa_matches_reference():
    for x in range(7):
        for y in range(7):
            assert kappa(x, y) == _kappa_reference(x, y)


def test_kappa_spot_values():
    assert kappa(2, 2) == 3
    assert kappa(1, 5) == 5
    assert kappa(0, 4) == 1


def test_psi_matches_reference():
    for n in range(2, 7):
        for r in range(1, 7):
            q = (n - 1) * r
            assert psi(n, r) == _kappa_reference(q, q) + 1


def test_psi_spot_values():
    assert psi(3, 1) == 4
    assert psi(4, 2) == 9332


def test_universe_count_formula():
    # |universe| = 1 + (n-1) * r * psi(n, r), by exhaustive count
    for n in range(2, 5):
        for r in range(1, 3):
            atoms = bin_universe(n, r)
            assert len(atoms) == 1 + (n - 1) * r * psi(n, r)
            assert len(set(atoms)) == len(atoms)


def test_structure_counts_and_axioms():
    ra = bin_atom_structure(3, 1)
    assert ra.n_atoms == 9
    assert ra.is_self_converse()
    rep = check_axioms(ra, sample_budget=30)
    assert rep.ok, rep.summary()


def test_identity_law_only_default_predicate():
    ra = bin_atom_structure(3, 1)
    ident = next(iter(ra.identity))
    others = [a for a in range(ra.n_atoms) if a != ident]
    # every non-identity triple is consistent under the default predicate
    a, b, c = others[0], others[1], others[2]
    assert ra.consistent(a, b, c)
    assert ra.consistent(a, a, a)
    assert not ra.consistent(ident, a, b)
    assert ra.consistent(ident, a, a)


def test_custom_triples_predicate():
    forb = {(1, 1, 1)}
    ra = bin_atom_structure(
        3, 1, triples=lambda a, b, c: (a, b, c) not in forb
    )
    assert not ra.consistent(1, 1, 1)
    assert ra.consistent(1, 1, 2)


def test_atom_cap_and_validation():
    with pytest.raises(ResourceBudgetError):
        bin_atom_structure(4, 2, max_atoms=100)
    with pytest.raises(UsageError):
        bin_atom_structure(1, 1)
    with pytest.raises(UsageError):
        kappa(-1, 2)
