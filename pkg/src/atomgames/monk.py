"""Monk-style relation-algebra atom structures over graphs.

Atoms are Id plus (vertex, colour) pairs; a triple of non-identity atoms
is forbidden exactly when all three share a colour and their vertices
span no graph edge.  Everything is self-converse.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .kernel import RaAtomStructure, UsageError


@dataclass(frozen=True)
class Graph:
    vertices: frozenset
    edges: frozenset  # of frozenset({u, v}) with u != v

    def __post_init__(self):
        for e in self.edges:
            if len(e) != 2 or not e <= self.vertices:
                raise UsageError(f"bad edge {set(e)}")

    @staticmethod
    def build(vertices, edge_pairs) -> "Graph":
        return Graph(
            frozenset(vertices),
            frozenset(frozenset(p) for p in edge_pairs),
        )

    def adjacent(self, u, v) -> bool:
        return frozenset((u, v)) in self.edges

    def neighbours(self, v):
        return {u for e in self.edges if v in e for u in e if u != v}

    def degree(self, v) -> int:
        return len(self.neighbours(v))


def make_monk_graph(kind: str, **params) -> Graph:
    """interval(N, size): vertices 0..size-1, edge iff 0 < |i-j| < N.
    cliqueUnion(N, count): `count` disjoint N-cliques."""
    if kind == "interval":
        N, size = params["N"], params["size"]
        _check_pos(N=N, size=size)
        vs = range(size)
        es = [
            (i, j)
            for i, j in itertools.combinations(vs, 2)
            if 0 < abs(i - j) < N
        ]
        return Graph.build(vs, es)
    if kind == "cliqueUnion":
        N, count = params["N"], params["count"]
        _check_pos(N=N, count=count)
        vs, es = [], []
        for c in range(count):
            block = [c * N + i for i in range(N)]
            vs.extend(block)
            es.extend(itertools.combinations(block, 2))
        return Graph.build(vs, es)
    raise UsageError(f"unknown graph kind {kind!r}")


def _check_pos(**kwargs):
    for name, v in kwargs.items():
        if v < 1:
            raise UsageError(f"{name} must be >= 1, got {v}")


def load_edge_list(text: str) -> Graph:
    """Parse "u v" pairs, one per line; '#' starts a comment."""
    vs, es = set(), []
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.split("#")[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise UsageError(f"line {ln}: expected 'u v', got {line!r}")
        u, v = parts
        u = int(u) if u.lstrip("-").isdigit() else u
        v = int(v) if v.lstrip("-").isdigit() else v
        if u == v:
            raise UsageError(f"line {ln}: self-loop {u!r}")
        vs.update((u, v))
        es.append((u, v))
    return Graph.build(vs, es)


def graph_to_dot(g: Graph, name="g") -> str:
    lines = [f"graph {name} {{"]
    for v in sorted(g.vertices, key=str):
        lines.append(f'  "{v}";')
    for e in sorted(g.edges, key=lambda e: sorted(map(str, e))):
        u, v = sorted(e, key=str)
        lines.append(f'  "{u}" -- "{v}";')
    lines.append("}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# chromatic number, exact branch and bound
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChromaticBounds:
    lower: int
    upper: int


def _greedy_clique(g: Graph, order):
    best = []
    for v in order:
        cl = [v]
        for u in order:
            if u != v and all(g.adjacent(u, w) for w in cl):
                cl.append(u)
        if len(cl) > len(best):
            best = cl
    return best


def _greedy_colouring(g: Graph, order):
    col = {}
    for v in order:
        used = {col[u] for u in g.neighbours(v) if u in col}
        c = 0
        while c in used:
            c += 1
        col[v] = c
    return col


def _colourable(g: Graph, k: int, order) -> bool:
    """Backtracking k-colourability; branches on the most saturated
    uncoloured vertex, symmetry broken by capping fresh colours."""
    col = {}

    def rec():
        if len(col) == len(order):
            return True
        # most-constrained vertex first
        best_v, best_sat = None, -1
        for v in order:
            if v in col:
                continue
            sat = len({col[u] for u in g.neighbours(v) if u in col})
            if sat > best_sat:
                best_v, best_sat = v, sat
        v = best_v
        used = {col[u] for u in g.neighbours(v) if u in col}
        fresh_cap = min(k, (max(col.values()) + 2) if col else 1)
        for c in range(fresh_cap):
            if c in used:
                continue
            col[v] = c
            if rec():
                return True
            del col[v]
        return False

    return rec()


def chromatic_number(g: Graph, cap: int = 24):
    """Exact chromatic number; graphs above `cap` vertices get a
    ChromaticBounds record instead."""
    if not g.vertices:
        return 1  # conventionally
    order = sorted(g.vertices, key=lambda v: -g.degree(v))
    lower = max(1, len(_greedy_clique(g, order)))
    upper = max(_greedy_colouring(g, order).values()) + 1
    if len(g.vertices) > cap:
        return ChromaticBounds(lower, upper)
    k = lower
    while k < upper:
        if _colourable(g, k, order):
            return k
        k += 1
    return upper


# ---------------------------------------------------------------------------
# atom structure
# ---------------------------------------------------------------------------


def monk_atom_structure(g: Graph, n: int) -> RaAtomStructure:
    """Atoms {Id} cup (vertices x n colours); all self-converse."""
    if n < 1:
        raise UsageError("colour count must be >= 1")
    verts = sorted(g.vertices, key=str)
    atoms = [("Id",)] + [
        ("a", v, i) for v in verts for i in range(n)
    ]
    index = {a: i for i, a in enumerate(atoms)}
    ID = index[("Id",)]

    def consistent(a: int, b: int, c: int) -> bool:
        tri = (atoms[a], atoms[b], atoms[c])
        if any(t == ("Id",) for t in tri):
            # must be a permutation of (Id, x, x)
            non_id = [t for t in tri if t != ("Id",)]
            if len(non_id) == 0:
                return True
            if len(non_id) == 2:
                return non_id[0] == non_id[1]
            return False
        cols = {t[2] for t in tri}
        if len(cols) > 1:
            return True
        vs = {t[1] for t in tri}
        return any(
            g.adjacent(u, v) for u, v in itertools.combinations(vs, 2)
        )

    def label(i: int) -> str:
        t = atoms[i]
        return "Id" if t == ("Id",) else f"({t[1]},{t[2]})"

    return RaAtomStructure(
        n_atoms=len(atoms),
        identity=frozenset({ID}),
        converse=tuple(range(len(atoms))),
        consistent=consistent,
        labels=label,
        provenance={
            "kind": "monk",
            "vertices": len(verts),
            "edges": len(g.edges),
            "colours": n,
        },
    )
