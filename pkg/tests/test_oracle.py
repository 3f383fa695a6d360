import numpy as np
import pytest

from atomgames.kernel import (
    CaAtomStructure,
    EquivRel,
    full_powerset_structure,
)
from atomgames.games import solve_gmk
from atomgames.oracle import (
    NoneWithinBudget,
    Representation,
    representation_from_dict,
    search_representation,
    verify_representation,
)


def _one_atom_structure(n=3):
    return CaAtomStructure(
        dimension=n,
        n_atoms=1,
        cyl=[EquivRel(np.zeros(1, dtype=np.int64)) for _ in range(n)],
        diag={
            (i, j): np.ones(1, dtype=bool)
            for i in range(n) for j in range(i + 1, n)
        },
    )


def _broken_powerset():
    ca = full_powerset_structure(2, 3)
    diag = {k: v.copy() for k, v in ca.diag.items()}
    diag[(0, 1)] = ~diag[(0, 1)]  # negated diagonal: nothing can realize it
    return CaAtomStructure(
        dimension=3, n_atoms=ca.n_atoms, cyl=ca.cyl, diag=diag,
    )


MICRO = [
    ("powerset-2-3", lambda: full_powerset_structure(2, 3), True),
    ("powerset-2-2", lambda: full_powerset_structure(2, 2), True),
    ("powerset-1-3", lambda: full_powerset_structure(1, 3), True),
    ("one-atom", _one_atom_structure, True),
    ("negated-diag", _broken_powerset, False),
]


@pytest.mark.parametrize("name,build,expect_found", MICRO)
def test_micro_structures(name, build, expect_found):
    ca = build()
    out = search_representation(ca, max_base=2, time_budget=500_000)
    if expect_found:
        assert isinstance(out, Representation), name
        ok, why = verify_representation(ca, out)
        assert ok, (name, why)
    else:
        assert isinstance(out, NoneWithinBudget), name


@pytest.mark.parametrize("name,build,expect_found", MICRO)
def test_found_implies_exists_wins(name, build, expect_found):
    # soundness coupling: a representation hands the builder a strategy
    if not expect_found:
        return
    ca = build()
    out = search_representation(ca, max_base=2, time_budget=500_000)
    assert isinstance(out, Representation)
    for m in range(ca.dimension + 1, 6):
        for k in range(5):
            res = solve_gmk(ca, m, k)
            assert res.winner == "Exists", (name, m, k)


def test_trivial_examples():
    assert search_representation(_one_atom_structure(), max_base=1).base_size == 1
    r = search_representation(full_powerset_structure(2, 3), max_base=2)
    assert r.base_size == 2


def test_budget_exhaustion_is_a_value(powerset23):
    out = search_representation(powerset23, max_base=2, time_budget=3)
    assert isinstance(out, NoneWithinBudget)
    assert out.explored >= 3
    assert "assignments explored" in out.summary()


def test_determinism(powerset23):
    a = search_representation(powerset23, max_base=2, time_budget=500_000)
    b = search_representation(powerset23, max_base=2, time_budget=500_000)
    assert a.as_dict() == b.as_dict()


def test_verify_rejects_overlap(powerset23):
    r = search_representation(powerset23, max_base=2, time_budget=500_000)
    images = dict(r.atom_images)
    a, b = sorted(images)[:2]
    images[b] = images[b] | images[a]  # now overlapping
    ok, why = verify_representation(
        powerset23, Representation(r.base_size, r.unit, images)
    )
    assert not ok and "overlap" in why


def test_verify_rejects_bad_unit(powerset23):
    r = search_representation(powerset23, max_base=2, time_budget=500_000)
    unit = r.unit[:-1]  # drop one tuple: no longer a union of squares
    images = {
        a: frozenset(x for x in img if x in unit)
        for a, img in r.atom_images.items()
    }
    ok, why = verify_representation(
        powerset23, Representation(r.base_size, unit, images)
    )
    assert not ok


def test_serialization_roundtrip(powerset23):
    r = search_representation(powerset23, max_base=2, time_budget=500_000)
    r2 = representation_from_dict(r.as_dict())
    ok, why = verify_representation(powerset23, r2)
    assert ok, why
