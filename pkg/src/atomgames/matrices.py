"""Basic matrices over a relation-algebra atom structure, cylindric
basis verification, and the derived cylindric atom structure.

A basic matrix of size m maps ordered pairs (x, y) with x, y < m to
atoms such that f(x, x) is an identity atom and every triple
(f(x, y), f(x, z), f(z, y)) is consistent, repeats included.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .kernel import (
    CaAtomStructure,
    EquivRel,
    RaAtomStructure,
    ResourceBudgetError,
    UsageError,
)


@dataclass(frozen=True, order=True)
class BasicMatrix:
    size: int
    cells: tuple  # row-major, length size*size, atom ids

    def cell(self, x: int, y: int) -> int:
        return self.cells[x * self.size + y]

    def agrees_off(self, other: "BasicMatrix", drop: set) -> bool:
        m = self.size
        for x in range(m):
            for y in range(m):
                if x in drop or y in drop:
                    continue
                if self.cell(x, y) != other.cell(x, y):
                    return False
        return True

    def describe(self, ra: RaAtomStructure) -> str:
        name = ra.labels or str
        rows = []
        for x in range(self.size):
            rows.append(
                " ".join(name(self.cell(x, y)) for y in range(self.size))
            )
        return " | ".join(rows)


def is_basic_matrix(ra: RaAtomStructure, f: BasicMatrix) -> bool:
    m = f.size
    for x in range(m):
        if f.cell(x, x) not in ra.identity:
            return False
    for x in range(m):
        for y in range(m):
            for z in range(m):
                if not ra.consistent(f.cell(x, y), f.cell(x, z), f.cell(z, y)):
                    return False
    return True


def enumerate_basic_matrices(
    ra: RaAtomStructure, m: int, search_cap: int = 5_000_000
):
    """All basic matrices of size m, canonically (lexicographically)
    ordered.  Backtracks over cells with every closed triangle checked
    as soon as its three cells exist."""
    if m < 1:
        raise UsageError("matrix size must be >= 1")
    ident = sorted(ra.identity)
    atoms = range(ra.n_atoms)
    order = [(x, y) for x in range(m) for y in range(m)]
    pos = {p: i for i, p in enumerate(order)}
    # triangles to check once cell e is placed: all (x,y,z) whose latest
    # cell in the fill order is e
    checks = [[] for _ in order]
    for x, y, z in itertools.product(range(m), repeat=3):
        tri = ((x, y), (x, z), (z, y))
        last = max(pos[c] for c in tri)
        checks[last].append(tri)

    cells = [0] * (m * m)
    out = []
    explored = 0

    def rec(e):
        nonlocal explored
        if e == len(order):
            out.append(BasicMatrix(m, tuple(cells)))
            return
        x, y = order[e]
        domain = ident if x == y else atoms
        for a in domain:
            explored += 1
            if explored > search_cap:
                raise ResourceBudgetError(
                    f"matrix search cap hit after {len(out)} matrices",
                    cap=search_cap,
                )
            cells[e] = a
            if all(
                ra.consistent(
                    cells[pos[t[0]]], cells[pos[t[1]]], cells[pos[t[2]]]
                )
                for t in checks[e]
            ):
                rec(e + 1)

    rec(0)
    out.sort()
    return out


def brute_force_basic_matrices(ra: RaAtomStructure, m: int):
    """Unpruned generate-and-filter enumeration (cross-check only): the
    diagonal ranges over identity atoms by definition, every off-diagonal
    cell over all atoms, with no propagation during generation."""
    ident = sorted(ra.identity)
    out = []
    domains = [
        ident if x == y else range(ra.n_atoms)
        for x in range(m)
        for y in range(m)
    ]
    for cells in itertools.product(*domains):
        f = BasicMatrix(m, cells)
        if is_basic_matrix(ra, f):
            out.append(f)
    out.sort()
    return out


@dataclass
class BasisReport:
    is_basis: bool
    witnesses: list = field(default_factory=list)

    def summary(self) -> str:
        if self.is_basis:
            return "cylindric basis: yes"
        return "cylindric basis: no; " + "; ".join(
            str(w) for w in self.witnesses[:3]
        )


def check_cylindric_basis(ms, ra: RaAtomStructure, m: int) -> BasisReport:
    """Condition (1): every consistent triple (a, b, c) with a <= b;c is
    realized by some f with f(0,1)=a, f(0,2)=b, f(2,1)=c.  Condition (2):
    whenever f and g agree off {x, y} there is h agreeing with f off x
    and with g off y.  x = y is read as agreement off the single point."""
    if m < 3:
        raise UsageError("basis checking needs m >= 3")
    report = BasisReport(True)
    realized = {
        (f.cell(0, 1), f.cell(0, 2), f.cell(2, 1)) for f in ms
    }
    for a, b, c in itertools.product(range(ra.n_atoms), repeat=3):
        if ra.consistent(a, b, c) and (a, b, c) not in realized:
            report.is_basis = False
            report.witnesses.append(("witnessing", a, b, c))
            return report

    ms = list(ms)

    def key_off(f, drop):
        return tuple(
            f.cell(x, y)
            for x in range(m)
            for y in range(m)
            if x not in drop and y not in drop
        )

    for x in range(m):
        for y in range(x, m):
            kx = [key_off(f, {x}) for f in ms]
            ky = [key_off(f, {y}) for f in ms]
            have = set(zip(kx, ky))
            groups = {}
            for i, f in enumerate(ms):
                groups.setdefault(key_off(f, {x, y}), []).append(i)
            for members in groups.values():
                for i in members:
                    for j in members:
                        if (kx[i], ky[j]) not in have:
                            report.is_basis = False
                            report.witnesses.append(
                                (
                                    "amalgamation",
                                    ms[i].cells,
                                    ms[j].cells,
                                    x,
                                    y,
                                )
                            )
                            return report
    return report


def ca_from_matrices(ms, m: int, identity_set=None) -> CaAtomStructure:
    """Matrices as cylindric atoms: T_i is agreement off row/column i,
    D_ij collects the matrices whose (i, j) cell is an identity atom.
    Without an explicit identity_set the identity atoms are read off the
    matrices' diagonals."""
    ms = sorted(set(ms))
    if not ms:
        raise UsageError("need a non-empty matrix set")
    if any(f.size != m for f in ms):
        raise UsageError("matrix size mismatch")
    n_atoms = len(ms)

    cyl = []
    for i in range(m):
        keep = [
            x * m + y
            for x in range(m)
            for y in range(m)
            if x != i and y != i
        ]
        keys = {}
        ids = np.empty(n_atoms, dtype=np.int64)
        for a, f in enumerate(ms):
            k = tuple(f.cells[p] for p in keep)
            ids[a] = keys.setdefault(k, len(keys))
        cyl.append(EquivRel.from_keys(ids))

    ident = (
        set(identity_set)
        if identity_set is not None
        else {f.cell(x, x) for f in ms for x in range(m)}
    )
    diag = {}
    for i, j in itertools.combinations(range(m), 2):
        diag[(i, j)] = np.array(
            [f.cell(i, j) in ident for f in ms], dtype=bool
        )

    def label(a):
        f = ms[a]
        return "[" + ",".join(map(str, f.cells)) + "]"

    return CaAtomStructure(
        dimension=m,
        n_atoms=n_atoms,
        cyl=cyl,
        diag=diag,
        labels=label,
        provenance={"kind": "matrices", "count": n_atoms, "m": m},
    )
