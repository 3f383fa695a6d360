"""Text interchange format (JSON) for atom structures.

    { "kind": "CA" | "RA",
      "dimension": n,                      (CA)
      "atoms": [names],
      "cyl": [[[a, b], ...], ...],         (CA, one pair list per i)
      "diag": {"i,j": [names]},            (CA)
      "identity": [names],                 (RA)
      "converse": {name: name},            (RA)
      "triples": {"mode": "consistent" | "forbidden",
                  "list": [[a, b, c], ...]},  (RA)
      "provenance": {...}                  (optional)
    }

The loader validates every structural invariant and raises UsageError
with a field diagnostic on bad input.  Cylindrifier relations are stored
as the pairs of one transversal per class (a spanning set), which keeps
files linear in the atom count.
"""

from __future__ import annotations

import itertools
import json

import numpy as np

from .kernel import (
    CaAtomStructure,
    EquivRel,
    RaAtomStructure,
    ResourceBudgetError,
    UsageError,
)

DUMP_ATOM_CAP = 100_000


def _names(struct):
    label = struct.labels or str
    names = [str(label(a)) for a in range(struct.n_atoms)]
    if len(set(names)) != struct.n_atoms:
        names = [f"{i}:{s}" for i, s in enumerate(names)]
    return names


def structure_to_dict(struct) -> dict:
    if struct.n_atoms > DUMP_ATOM_CAP:
        raise ResourceBudgetError(
            f"structure too large to serialize ({struct.n_atoms} atoms)",
            cap=DUMP_ATOM_CAP,
        )
    names = _names(struct)
    if isinstance(struct, CaAtomStructure):
        cyl = []
        for rel in struct.cyl:
            ids = np.asarray(rel.class_ids)
            order = np.argsort(ids, kind="stable")
            pairs = []
            rep = {}
            for a in order.tolist():
                c = int(ids[a])
                if c in rep:
                    pairs.append([names[rep[c]], names[a]])
                else:
                    rep[c] = a
            cyl.append(pairs)
        diag = {
            f"{i},{j}": [names[a] for a in np.flatnonzero(mask)]
            for (i, j), mask in sorted(struct.diag.items())
        }
        out = {
            "kind": "CA",
            "dimension": struct.dimension,
            "atoms": names,
            "cyl": cyl,
            "diag": diag,
        }
    elif isinstance(struct, RaAtomStructure):
        n = struct.n_atoms
        consistent = [
            [names[a], names[b], names[c]]
            for a, b, c in itertools.product(range(n), repeat=3)
            if struct.consistent(a, b, c)
        ]
        forbidden_count = n ** 3 - len(consistent)
        if forbidden_count < len(consistent):
            triples = {
                "mode": "forbidden",
                "list": [
                    [names[a], names[b], names[c]]
                    for a, b, c in itertools.product(range(n), repeat=3)
                    if not struct.consistent(a, b, c)
                ],
            }
        else:
            triples = {"mode": "consistent", "list": consistent}
        out = {
            "kind": "RA",
            "atoms": names,
            "identity": [names[a] for a in sorted(struct.identity)],
            "converse": {
                names[a]: names[struct.converse[a]] for a in range(n)
            },
            "triples": triples,
        }
    else:
        raise UsageError(f"cannot serialize {type(struct).__name__}")
    if struct.provenance:
        prov = {
            k: v for k, v in struct.provenance.items()
            if isinstance(v, (str, int, float, bool, list, dict, type(None)))
        }
        if prov:
            out["provenance"] = prov
    return out


def dump_structure(struct, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(structure_to_dict(struct), fh, indent=1)
        fh.write("\n")


def _require(cond, field, msg):
    if not cond:
        raise UsageError(f"interchange field {field!r}: {msg}")


def structure_from_dict(d: dict):
    _require(isinstance(d, dict), "<root>", "expected an object")
    kind = d.get("kind")
    _require(kind in ("CA", "RA"), "kind", f"expected CA or RA, got {kind!r}")
    atoms = d.get("atoms")
    _require(
        isinstance(atoms, list) and all(isinstance(a, str) for a in atoms),
        "atoms", "expected a list of names",
    )
    _require(len(set(atoms)) == len(atoms), "atoms", "names must be unique")
    idx = {a: i for i, a in enumerate(atoms)}
    n_atoms = len(atoms)
    prov = d.get("provenance")

    if kind == "CA":
        dim = d.get("dimension")
        _require(isinstance(dim, int) and dim >= 2, "dimension", "need int >= 2")
        raw_cyl = d.get("cyl")
        _require(
            isinstance(raw_cyl, list) and len(raw_cyl) == dim,
            "cyl", f"expected {dim} pair lists",
        )
        cyl = []
        for i, pairs in enumerate(raw_cyl):
            parent = list(range(n_atoms))

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            for p in pairs:
                _require(
                    isinstance(p, list) and len(p) == 2
                    and p[0] in idx and p[1] in idx,
                    f"cyl[{i}]", f"bad pair {p!r}",
                )
                a, b = find(idx[p[0]]), find(idx[p[1]])
                if a != b:
                    parent[max(a, b)] = min(a, b)
            cyl.append(
                EquivRel.from_keys(
                    np.array([find(a) for a in range(n_atoms)], dtype=np.int64)
                )
            )
        raw_diag = d.get("diag")
        _require(isinstance(raw_diag, dict), "diag", "expected an object")
        diag = {}
        for key, members in raw_diag.items():
            try:
                i, j = (int(t) for t in key.split(","))
            except ValueError:
                raise UsageError(f"interchange field 'diag': bad key {key!r}")
            _require(0 <= i < j < dim, "diag", f"bad coordinate pair {key!r}")
            mask = np.zeros(n_atoms, dtype=bool)
            for name in members:
                _require(name in idx, f"diag[{key}]", f"unknown atom {name!r}")
                mask[idx[name]] = True
            diag[(i, j)] = mask
        for i, j in itertools.combinations(range(dim), 2):
            _require((i, j) in diag, "diag", f"missing entry {i},{j}")
        struct = CaAtomStructure(
            dimension=dim, n_atoms=n_atoms, cyl=cyl, diag=diag,
            labels=lambda a, _names=atoms: _names[a], provenance=prov,
        )
        return struct

    ident_raw = d.get("identity")
    _require(isinstance(ident_raw, list), "identity", "expected a list")
    for name in ident_raw:
        _require(name in idx, "identity", f"unknown atom {name!r}")
    identity = frozenset(idx[name] for name in ident_raw)
    conv_raw = d.get("converse")
    _require(
        isinstance(conv_raw, dict) and set(conv_raw) == set(atoms),
        "converse", "must map every atom",
    )
    converse = [None] * n_atoms
    for a, b in conv_raw.items():
        _require(b in idx, "converse", f"unknown atom {b!r}")
        converse[idx[a]] = idx[b]
    for a in range(n_atoms):
        _require(
            converse[converse[a]] == a, "converse",
            f"not an involution at {atoms[a]!r}",
        )
    triples = d.get("triples")
    _require(
        isinstance(triples, dict)
        and triples.get("mode") in ("consistent", "forbidden")
        and isinstance(triples.get("list"), list),
        "triples", "expected {mode, list}",
    )
    listed = set()
    for t in triples["list"]:
        _require(
            isinstance(t, list) and len(t) == 3 and all(x in idx for x in t),
            "triples.list", f"bad triple {t!r}",
        )
        listed.add(tuple(idx[x] for x in t))
    positive = triples["mode"] == "consistent"

    def consistent(a, b, c, _listed=listed, _pos=positive):
        return ((a, b, c) in _listed) == _pos

    return RaAtomStructure(
        n_atoms=n_atoms, identity=identity, converse=tuple(converse),
        consistent=consistent,
        labels=lambda a, _names=atoms: _names[a], provenance=prov,
    )


def load_structure(path: str):
    with open(path) as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path}: invalid JSON at line {exc.lineno}")
    return structure_from_dict(d)
