"""Brute-force representability search for micro cylindric atom
structures, used as ground truth against game outcomes.

A representation here is a total atom labelling of a unit V that is a
disjoint union of cartesian squares G^n over groups G partitioning the
base.  Totality makes the atom images partition V, so injectivity
reduces to "every atom is realized"; the operator conditions are

    x_i = x_j            iff  label(x) is a diagonal D_ij atom,
    x == y off i         =>   label(x) T_i label(y)         (coherence)
    a T_i label(x)       =>   some y == x off i has label a (saturation)

and together they give an injective complex-algebra homomorphism into
the set algebra over V.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .kernel import CaAtomStructure, UsageError


@dataclass(frozen=True)
class Representation:
    base_size: int
    unit: tuple  # sorted n-tuples over the base
    atom_images: dict  # atom id -> frozenset of tuples

    def label_of(self):
        out = {}
        for a, img in self.atom_images.items():
            for x in img:
                out[x] = a
        return out

    def as_dict(self) -> dict:
        return {
            "baseSize": self.base_size,
            "unit": [list(x) for x in self.unit],
            "atomImages": {
                str(a): sorted(list(x) for x in img)
                for a, img in sorted(self.atom_images.items())
            },
        }


def representation_from_dict(d: dict) -> Representation:
    unit = tuple(sorted(tuple(x) for x in d["unit"]))
    images = {
        int(a): frozenset(tuple(x) for x in img)
        for a, img in d["atomImages"].items()
    }
    return Representation(int(d["baseSize"]), unit, images)


@dataclass
class NoneWithinBudget:
    explored: int
    max_base: int
    note: str = ""

    def summary(self) -> str:
        return (
            f"no representation within budget "
            f"({self.explored} assignments explored, bases <= {self.max_base})"
            + (f"; {self.note}" if self.note else "")
        )


def _base_partitions(base_size: int):
    """Group partitions of the base, single group (one square) first."""
    from .rainbow_enum import set_partitions

    parts = sorted(set_partitions(range(base_size)), key=len)
    return parts


def _diag_pattern_of_atom(ca: CaAtomStructure, a: int):
    return tuple(
        bool(ca.diag[(i, j)][a])
        for i, j in itertools.combinations(range(ca.dimension), 2)
    )


def _diag_pattern_of_tuple(x):
    n = len(x)
    return tuple(
        x[i] == x[j] for i, j in itertools.combinations(range(n), 2)
    )


def search_representation(
    ca: CaAtomStructure,
    max_base: int = 3,
    time_budget: int = 200_000,
    seed: int = 0,
):
    """Backtracking search; the budget counts explored atom-to-tuple
    assignments (not wall clock), so results are reproducible.  Returns a
    verified Representation or NoneWithinBudget.  ``seed`` is accepted
    for interface symmetry; the search order is deterministic anyway."""
    if max_base < 1:
        raise UsageError("max_base must be >= 1")
    n = ca.dimension
    by_pattern = {}
    for a in range(ca.n_atoms):
        by_pattern.setdefault(_diag_pattern_of_atom(ca, a), []).append(a)

    explored = 0
    for base_size in range(1, max_base + 1):
        for groups in _base_partitions(base_size):
            unit = sorted(
                x for g in groups for x in itertools.product(g, repeat=n)
            )
            if len(unit) < ca.n_atoms:
                continue  # cannot realize every atom
            idx = {x: e for e, x in enumerate(unit)}
            # tuples differing from x only at coordinate i
            moves = []
            for x in unit:
                row = []
                for i in range(n):
                    row.append(
                        [
                            idx[x[:i] + (u,) + x[i + 1:]]
                            for u in range(base_size)
                            if x[:i] + (u,) + x[i + 1:] in idx
                        ]
                    )
                moves.append(row)
            patterns = [_diag_pattern_of_tuple(x) for x in unit]
            labels = [-1] * len(unit)

            def rec(e):
                nonlocal explored
                if e == len(unit):
                    return _saturated(ca, unit, labels, moves)
                for a in by_pattern.get(patterns[e], ()):
                    explored += 1
                    if explored > time_budget:
                        return "budget"
                    ok = True
                    for i in range(n):
                        for y in moves[e][i]:
                            if labels[y] >= 0 and not ca.cyl[i].related(
                                a, labels[y]
                            ):
                                ok = False
                                break
                        if not ok:
                            break
                    if ok:
                        labels[e] = a
                        r = rec(e + 1)
                        if r:
                            return r
                        labels[e] = -1
                return None

            r = rec(0)
            if r == "budget":
                return NoneWithinBudget(
                    explored, max_base,
                    note=f"stopped at base {base_size}, groups {groups}",
                )
            if r:
                images = {}
                for x, a in zip(unit, labels):
                    images.setdefault(a, set()).add(x)
                rep = Representation(
                    base_size,
                    tuple(unit),
                    {a: frozenset(s) for a, s in images.items()},
                )
                ok, why = verify_representation(ca, rep)
                assert ok, why
                return rep
    return NoneWithinBudget(explored, max_base)


def _saturated(ca, unit, labels, moves) -> bool:
    """Leaf check: every atom realized; every atom T_i-related to a
    tuple's label is witnessed along coordinate i."""
    if len(set(labels)) != ca.n_atoms:
        return False
    for e in range(len(unit)):
        for i, rel in enumerate(ca.cyl):
            have = {labels[y] for y in moves[e][i]}
            cls = np.flatnonzero(
                rel.class_ids == rel.class_ids[labels[e]]
            )
            if not set(cls.tolist()) <= have:
                return False
    return True


def verify_representation(ca: CaAtomStructure, rep: Representation):
    """(ok, first violated condition).  Exhaustive over the unit."""
    n = ca.dimension
    for x in rep.unit:
        if len(x) != n:
            return False, f"tuple {x} has wrong arity"
    # rebuild the square decomposition: union-find over the base
    parent = {u: u for x in rep.unit for u in x}

    def find(u):
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    for x in rep.unit:
        for u in x[1:]:
            parent[find(x[0])] = find(u)
    blocks = {}
    for u in parent:
        blocks.setdefault(find(u), set()).add(u)
    expect = sorted(
        x for g in blocks.values() for x in itertools.product(sorted(g), repeat=n)
    )
    if expect != sorted(rep.unit):
        return False, "unit is not a disjoint union of cartesian squares"

    label = {}
    for a, img in rep.atom_images.items():
        for x in img:
            if x in label:
                return False, f"images overlap at {x} ({label[x]} vs {a})"
            label[x] = a
    if set(label) != set(rep.unit):
        return False, "images do not cover the unit"
    if set(rep.atom_images) != set(range(ca.n_atoms)):
        return False, "not every atom is realized (map not injective)"

    for x in rep.unit:
        pat = _diag_pattern_of_tuple(x)
        if pat != _diag_pattern_of_atom(ca, label[x]):
            return False, f"diagonal mismatch at {x}"
    unit_set = set(rep.unit)
    for x in rep.unit:
        for i in range(n):
            col = [
                x[:i] + (u,) + x[i + 1:]
                for u in sorted({v for y in unit_set for v in y})
                if x[:i] + (u,) + x[i + 1:] in unit_set
            ]
            have = {label[y] for y in col}
            rel = ca.cyl[i]
            cls = set(
                np.flatnonzero(
                    rel.class_ids == rel.class_ids[label[x]]
                ).tolist()
            )
            if not have <= cls:
                return False, f"cylindrifier {i} coherence fails at {x}"
            if not cls <= have:
                return False, f"cylindrifier {i} saturation fails at {x}"
    return True, None
