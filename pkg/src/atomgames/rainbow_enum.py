"""Enumeration of rainbow atom structures.

An atom over n coordinates is a partition of {0..n-1} into blocks, a
consistent edge colouring of the block graph, and -- whenever there are
at least n-1 blocks -- a total yellow labelling of the (n-1)-subsets of
blocks, subject to the cone rule (a cone's tint must belong to the shade
of its base).

Representation is columnar: for N atoms we keep

    edges[N, n*(n-1)//2]   uint8 colour ids per node pair (constant on
                           block pairs; SENT_SAME when the two nodes
                           share a block)
    yellows[N, C(n, n-1)]  uint16 shade bitmasks per (n-1)-node-subset
                           (SENT_NONE when the subset straddles fewer
                           than n-1 blocks)

With that layout the cylindrifier relation T_i is just "equal on every
column avoiding coordinate i", computed by one np.unique pass, and the
diagonal D_ij is a sentinel test on one edge column.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .kernel import (
    CaAtomStructure,
    EquivRel,
    ResourceBudgetError,
    UsageError,
)
from .rainbow import (
    RainbowSignature,
    ColouredGraph,
    canonical_graph,
    colour_name,
    consistent_triangle,
    flip_red,
    is_green,
    legal_coloured_graph,
)

SENT_SAME = 255  # edge column: nodes in the same block
SENT_NONE = 0xFFFF  # yellow column: no shade stored for this subset


def set_partitions(items):
    """All partitions of `items`, each block sorted, blocks ordered by
    their least element."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def _pair_index(n):
    pairs = list(itertools.combinations(range(n), 2))
    return pairs, {p: i for i, p in enumerate(pairs)}


def _subset_index(n):
    subs = list(itertools.combinations(range(n), n - 1))
    return subs, {s: i for i, s in enumerate(subs)}


@dataclass
class RainbowAtomTable:
    """Columnar store of the enumerated atoms plus the colour dictionary."""

    sig: RainbowSignature
    colours: list  # colour id -> colour tuple
    edges: np.ndarray  # (N, n_pairs) uint8
    yellows: np.ndarray  # (N, n_subsets) uint16
    pairs: list
    subsets: list

    @property
    def n_atoms(self) -> int:
        return len(self.edges)

    def packed_keys(self) -> np.ndarray:
        """Each atom as a single uint64 (lex-compatible with column order)."""
        n_cols = self.edges.shape[1] + self.yellows.shape[1]
        width = max(len(self.colours) + 2, 2 ** len(self.sig.green_supers) + 2)
        bits = max(width - 1, 1).bit_length()
        if bits * n_cols > 63:
            raise ResourceBudgetError(
                "atom keys do not fit in 64 bits", cap=63
            )
        key = np.zeros(self.n_atoms, dtype=np.uint64)
        for col in range(self.edges.shape[1]):
            key = (key << np.uint64(bits)) | self.edges[:, col].astype(
                np.uint64
            ) % np.uint64(1 << bits)
        for col in range(self.yellows.shape[1]):
            key = (key << np.uint64(bits)) | self.yellows[:, col].astype(
                np.uint64
            ) % np.uint64(1 << bits)
        return key

    def describe(self, a: int) -> str:
        n = self.sig.n
        eq = [
            f"{u}={v}"
            for (u, v), col in zip(
                self.pairs, self.edges[a]
            )
            if col == SENT_SAME
        ]
        cols = [
            f"({u},{v}):{colour_name(self.colours[col])}"
            for (u, v), col in zip(self.pairs, self.edges[a])
            if col != SENT_SAME
        ]
        ys = []
        for sub, mask in zip(self.subsets, self.yellows[a]):
            if mask != SENT_NONE:
                tints = sorted(
                    t
                    for bit, t in enumerate(self.sig.green_supers)
                    if mask >> bit & 1
                )
                ys.append(
                    "y" + "".join(str(s) for s in sub) + ":{"
                    + ",".join(map(str, tints)) + "}"
                )
        return "; ".join(eq + cols + ys) or "diag"

    def as_graph(self, a: int) -> ColouredGraph:
        """Rebuild the atom as a coloured graph on block representatives."""
        n = self.sig.n
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for (u, v), col in zip(self.pairs, self.edges[a]):
            if col == SENT_SAME:
                ru, rv = find(u), find(v)
                if ru != rv:
                    parent[max(ru, rv)] = min(ru, rv)
        block = [find(i) for i in range(n)]
        nodes = tuple(sorted(set(block)))
        edges = {}
        for (u, v), col in zip(self.pairs, self.edges[a]):
            if col != SENT_SAME:
                c = self.colours[col]
                if block[u] > block[v]:
                    c = flip_red(c)
                edges[frozenset((block[u], block[v]))] = c
        yellows = {}
        for sub, mask in zip(self.subsets, self.yellows[a]):
            if mask == SENT_NONE:
                continue
            bsub = frozenset(block[u] for u in sub)
            if len(bsub) == self.sig.n - 1:
                yellows[bsub] = frozenset(
                    t
                    for bit, t in enumerate(self.sig.green_supers)
                    if mask >> bit & 1
                )
        return ColouredGraph(self.sig, nodes, edges, yellows)


def _consistent_colourings(sig, k, colours, table):
    """Edge colourings of the complete graph on k blocks such that every
    triangle is positionally consistent (edges oriented low -> high).
    Returns an int array (rows, k*(k-1)//2)."""
    bpairs = list(itertools.combinations(range(k), 2))
    idx = {p: i for i, p in enumerate(bpairs)}
    rows = []
    assign = [0] * len(bpairs)

    def rec(e):
        if e == len(bpairs):
            rows.append(tuple(assign))
            return
        u, v = bpairs[e]
        for c in range(len(colours)):
            assign[e] = c
            ok = True
            for w in range(k):
                if w in (u, v):
                    continue
                x, y, z = sorted((u, v, w))
                ids = (idx[(x, y)], idx[(x, z)], idx[(y, z)])
                if all(i <= e for i in ids):
                    if not table[assign[ids[0]], assign[ids[1]],
                                 assign[ids[2]]]:
                        ok = False
                        break
            if ok:
                rec(e + 1)

    rec(0)
    return np.array(rows, dtype=np.int64).reshape(len(rows), len(bpairs))


def _cone_requirements(sig, k, colours, row, bpairs_idx):
    """Required tint set per (n-1)-subset of the k blocks, from cones."""
    n = sig.n
    req = {sub: set() for sub in itertools.combinations(range(k), n - 1)}
    if k < n:
        return req
    for apex in range(k):
        others = [b for b in range(k) if b != apex]
        for base in itertools.permutations(others, n - 1):
            c0 = colours[row[bpairs_idx[tuple(sorted((base[0], apex)))]]]
            if c0[0] != "g0":
                continue
            if any(
                colours[row[bpairs_idx[tuple(sorted((base[j], apex)))]]]
                != ("g", j)
                for j in range(1, n - 1)
            ):
                continue
            if any(
                is_green(colours[row[bpairs_idx[tuple(sorted((x, y)))]]])
                for x, y in itertools.combinations(base, 2)
            ):
                continue
            req[tuple(sorted(base))].add(c0[1])
    return req


def _supersets(req_mask: int, n_bits: int):
    """All bitmasks containing req_mask, ascending."""
    free = ((1 << n_bits) - 1) & ~req_mask
    out = []
    sub = 0
    while True:
        out.append(req_mask | sub)
        if sub == free:
            break
        sub = (sub - free) & free
    return np.array(sorted(out), dtype=np.uint16)


def build_atom_table(sig: RainbowSignature, max_atoms: int = 20_000_000):
    n = sig.n
    colours = sig.directed_colours()
    n_c = len(colours)
    if n_c >= SENT_SAME:
        raise ResourceBudgetError("too many edge colours", cap=SENT_SAME - 1)
    if 2 ** len(sig.green_supers) >= SENT_NONE:
        raise ResourceBudgetError(
            "too many green superscripts", cap=15
        )
    colour_id = {tuple(c): i for i, c in enumerate(colours)}
    flip_id = np.array(
        [colour_id[tuple(flip_red(c))] for c in colours], dtype=np.uint8
    )
    table = np.zeros((n_c, n_c, n_c), dtype=bool)
    for a, b, c in itertools.product(range(n_c), repeat=3):
        table[a, b, c] = consistent_triangle(
            sig, colours[a], colours[b], colours[c]
        )

    pairs, pair_idx = _pair_index(n)
    subsets, subset_idx = _subset_index(n)
    n_bits = len(sig.green_supers)

    edge_chunks, yellow_chunks = [], []
    total = 0

    for part in set_partitions(range(n)):
        k = len(part)
        block_of = {}
        for b, blk in enumerate(part):
            for node in blk:
                block_of[node] = b
        bpairs = list(itertools.combinations(range(k), 2))
        bpairs_idx = {p: i for i, p in enumerate(bpairs)}
        bsubs = list(itertools.combinations(range(k), n - 1)) if k >= n - 1 else []

        if k == 1:
            rows = np.zeros((1, 0), dtype=np.int64)
        else:
            rows = _consistent_colourings(sig, k, colours, table)
        if len(rows) == 0:
            continue

        if not bsubs:
            shade_counts = np.ones(len(rows), dtype=np.int64)
            profiles = {(): np.arange(len(rows))}
        else:
            # group colourings by their cone-requirement profile
            profiles = {}
            for r in range(len(rows)):
                req = _cone_requirements(sig, k, colours, rows[r], bpairs_idx)
                prof = tuple(
                    sum(1 << sig.green_supers.index(t) for t in req[sub])
                    for sub in bsubs
                )
                profiles.setdefault(prof, []).append(r)
            profiles = {p: np.array(ix) for p, ix in profiles.items()}

        for prof, row_ix in profiles.items():
            shade_lists = [_supersets(m, n_bits) for m in prof]
            mult = 1
            for sl in shade_lists:
                mult *= len(sl)
            count = len(row_ix) * mult
            total += count
            if total > max_atoms:
                raise ResourceBudgetError(
                    f"atom enumeration exceeds cap ({total} > {max_atoms})",
                    cap=max_atoms,
                )

            base_rows = rows[row_ix]
            edges = np.full((count, len(pairs)), SENT_SAME, dtype=np.uint8)
            for pi, (u, v) in enumerate(pairs):
                bu, bv = block_of[u], block_of[v]
                if bu != bv:
                    col = base_rows[
                        :, bpairs_idx[tuple(sorted((bu, bv)))]
                    ].astype(np.uint8)
                    if bu > bv:
                        # node orientation opposes the stored block
                        # orientation: directed reds flip
                        col = flip_id[col]
                    edges[:, pi] = np.repeat(col, mult)

            yellows = np.full((count, len(subsets)), SENT_NONE, dtype=np.uint16)
            if shade_lists:
                grids = np.meshgrid(*shade_lists, indexing="ij")
                combo = np.stack(
                    [g.ravel() for g in grids], axis=1
                )  # (mult, len(bsubs))
                combo_full = np.tile(combo, (len(row_ix), 1))
                for si, sub in enumerate(subsets):
                    bsub = tuple(sorted({block_of[u] for u in sub}))
                    if len(bsub) == n - 1:
                        yellows[:, si] = combo_full[:, bsubs.index(bsub)]
            edge_chunks.append(edges)
            yellow_chunks.append(yellows)

    edges = np.concatenate(edge_chunks, axis=0)
    yellows = np.concatenate(yellow_chunks, axis=0)
    # canonical atom order: lexicographic on the packed columns
    tab = RainbowAtomTable(sig, colours, edges, yellows, pairs, subsets)
    order = np.argsort(tab.packed_keys(), kind="stable")
    tab.edges = edges[order]
    tab.yellows = yellows[order]
    return tab


def restriction_keys(tab: RainbowAtomTable, i: int) -> np.ndarray:
    """One int64 per atom encoding its restriction off coordinate i; two
    atoms are T_i-related exactly when their keys agree."""
    cols = [
        tab.edges[:, pi].astype(np.int64)
        for pi, (u, v) in enumerate(tab.pairs)
        if i not in (u, v)
    ] + [
        tab.yellows[:, si].astype(np.int64)
        for si, sub in enumerate(tab.subsets)
        if i not in sub
    ]
    keys = np.zeros(tab.n_atoms, dtype=np.int64)
    width = int(SENT_NONE) + 1
    for c in cols:
        keys = keys * width + c
    return keys


def atom_structure_from_table(tab: RainbowAtomTable) -> CaAtomStructure:
    n = tab.sig.n
    cyl = []
    for i in range(n):
        cyl.append(EquivRel.from_keys(restriction_keys(tab, i)))
    diag = {}
    for pi, (u, v) in enumerate(tab.pairs):
        diag[(u, v)] = tab.edges[:, pi] == SENT_SAME
    labels = tab.describe
    return CaAtomStructure(
        dimension=n,
        n_atoms=tab.n_atoms,
        cyl=cyl,
        diag=diag,
        labels=labels,
        provenance={"signature": tab.sig.describe(), "table": tab},
    )


def enumerate_rainbow_atoms(
    sig: RainbowSignature, max_atoms: int = 20_000_000
) -> CaAtomStructure:
    """Full atom structure of the complex algebra over `sig`."""
    tab = build_atom_table(sig, max_atoms=max_atoms)
    return atom_structure_from_table(tab)


# ---------------------------------------------------------------------------
# independent brute-force enumeration (slow; used to cross-check the
# columnar enumerator on small signatures)
# ---------------------------------------------------------------------------


def brute_force_atoms(sig: RainbowSignature, max_atoms: int = 200_000):
    """Enumerate atoms as legal coloured graphs by unguided generate-and-
    test over partitions, edge colourings and total yellow labellings.
    Returns a set of canonical encodings."""
    n = sig.n
    colours = sig.directed_colours()
    shades = [
        frozenset(s)
        for r in range(len(sig.green_supers) + 1)
        for s in itertools.combinations(sig.green_supers, r)
    ]
    seen = set()
    for part in set_partitions(range(n)):
        nodes = tuple(min(b) for b in part)
        bpairs = list(itertools.combinations(nodes, 2))
        bsubs = (
            list(itertools.combinations(nodes, n - 1))
            if len(nodes) >= n - 1
            else []
        )
        for colouring in itertools.product(colours, repeat=len(bpairs)):
            edge_map = {
                frozenset(p): c for p, c in zip(bpairs, colouring)
            }
            for shading in itertools.product(shades, repeat=len(bsubs)):
                g = ColouredGraph(
                    sig,
                    nodes,
                    edge_map,
                    {frozenset(s): y for s, y in zip(bsubs, shading)},
                )
                ok, _ = legal_coloured_graph(sig, g)
                if ok:
                    enc = (tuple(sorted(part_key(part))), canonical_key(g))
                    seen.add(enc)
                    if len(seen) > max_atoms:
                        raise ResourceBudgetError(
                            "brute force enumeration too large", cap=max_atoms
                        )
    return seen


def part_key(part):
    return tuple(tuple(sorted(b)) for b in sorted(part, key=min))


def canonical_key(g: ColouredGraph):
    """Identity-respecting key (coordinates are distinguishable, so no
    permutation quotient): edges and yellows keyed by node names."""
    edges = tuple(sorted(
        (tuple(sorted(e)), c) for e, c in g.edges.items()
    ))
    yellows = tuple(sorted(
        (tuple(sorted(s)), tuple(sorted(y))) for s, y in g.yellows.items()
    ))
    return edges, yellows


def table_atom_keys(tab: RainbowAtomTable):
    """The brute-force-style keys of every atom in a columnar table."""
    out = set()
    for a in range(tab.n_atoms):
        g = tab.as_graph(a)
        # reconstruct the partition from edges
        blocks = {}
        node_block = {}
        n = tab.sig.n
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for (u, v), col in zip(tab.pairs, tab.edges[a]):
            if col == SENT_SAME:
                ru, rv = find(u), find(v)
                if ru != rv:
                    parent[max(ru, rv)] = min(ru, rv)
        for i in range(n):
            blocks.setdefault(find(i), []).append(i)
        part = list(blocks.values())
        out.add((tuple(sorted(part_key(part))), canonical_key(g)))
    return out
