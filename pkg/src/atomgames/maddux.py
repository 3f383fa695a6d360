"""The kappa/psi tower arithmetic and the Bin(n, r) atom universe.

kappa(x, 0) = 0 and kappa(x, y+1) = 1 + x * kappa(x, y); psi(n, r) =
kappa((n-1)r, (n-1)r) + 1.  Bin(n, r) consists of Id together with the
atoms a^k(i, j) for i < n-1, j < r, k < psi(n, r); its consistent-triple
predicate is caller-supplied because the source construction's forbidden
set is external.  The built-in default imposes only the identity law and
is tagged "placeholder-Forb".
"""

from __future__ import annotations

from .kernel import RaAtomStructure, ResourceBudgetError, UsageError


def kappa(x: int, y: int) -> int:
    if x < 0 or y < 0:
        raise UsageError("kappa needs naturals")
    acc = 0
    for _ in range(y):
        acc = 1 + x * acc
    return acc


def psi(n: int, r: int) -> int:
    if n < 1 or r < 0:
        raise UsageError("psi needs n >= 1, r >= 0")
    base = (n - 1) * r
    return kappa(base, base) + 1


def bin_universe(n: int, r: int):
    """[('Id',)] + [('a', k, i, j)] in canonical order."""
    p = psi(n, r)
    return [("Id",)] + [
        ("a", k, i, j)
        for i in range(n - 1)
        for j in range(r)
        for k in range(p)
    ]


def bin_atom_structure(
    n: int, r: int, triples=None, max_atoms: int = 2_000_000
) -> RaAtomStructure:
    """All atoms self-converse, Id the unique identity.

    `triples`, when given, is a predicate on three atom ids; the default
    allows every non-identity triple (and the identity law's (Id, x, x)
    patterns), which is a placeholder rather than any particular algebra.
    """
    if n < 2 or r < 0:
        raise UsageError("need n >= 2, r >= 0")
    count = 1 + (n - 1) * r * psi(n, r)
    if count > max_atoms:
        raise ResourceBudgetError(
            f"Bin({n},{r}) has {count} atoms (cap {max_atoms})",
            cap=max_atoms,
        )
    atoms = bin_universe(n, r)
    assert len(atoms) == count
    ID = 0

    if triples is None:
        predicate_name = "placeholder-Forb"

        def consistent(a, b, c):
            tri = (a, b, c)
            if ID in tri:
                non_id = [t for t in tri if t != ID]
                return len(non_id) != 1 and (
                    len(non_id) == 0 or non_id[0] == non_id[1]
                )
            return True

    else:
        predicate_name = "caller"
        user = triples

        def consistent(a, b, c):
            return bool(user(a, b, c))

    def label(i):
        t = atoms[i]
        return "Id" if t == ("Id",) else f"a^{t[1]}({t[2]},{t[3]})"

    return RaAtomStructure(
        n_atoms=count,
        identity=frozenset({ID}),
        converse=tuple(range(count)),
        consistent=consistent,
        labels=label,
        provenance={
            "kind": "bin",
            "n": n,
            "r": r,
            "psi": psi(n, r),
            "predicate": predicate_name,
        },
    )
