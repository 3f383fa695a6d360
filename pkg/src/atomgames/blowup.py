"""Blow-up of a rainbow atom structure: every pair-indexed red is split
into T superscripted copies, and the original complex algebra embeds into
the blown-up one by sending each atom to the union of its copies.

The copy relation is computed by *collapsing* superscripts: a target atom
is a copy of the unique source atom obtained by stripping the red
superscripts from its edge colours (orientation preserved).  Collapsing
keeps the node partition, the non-red edges and the yellow hyperlabels
intact, so a copy agrees with its source everywhere except on which
superscript variant each red edge carries.

Verification of the embedding is exact and atom-level.  Writing src(t)
for the source of target atom t, the map Theta(x) = {t : src(t) in x}
preserves a cylindrifier c_i for *every* element x iff for every target
T_i-class C the set {src(t) : t in C} equals the full source T_i-class
of its members (take x a singleton to see necessity; sufficiency is
monotonicity).  That per-class set equality is what we check, so the
cylindrifier report covers all elements without iterating them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .kernel import StructuralError, UsageError
from .rainbow import (
    RainbowSignature,
    blown_rainbow,
    is_red,
    red_base,
)
from .rainbow_enum import (
    SENT_SAME,
    RainbowAtomTable,
    atom_structure_from_table,
    build_atom_table,
    restriction_keys,
)


@dataclass
class BlowupMap:
    """Copy structure of a blow-up.

    ``src_of[t]`` is the source atom that target atom t is a copy of;
    the fibres of that map are exactly the copy sets.
    """

    source: RainbowAtomTable
    target: RainbowAtomTable
    src_of: np.ndarray  # (n_target,) int
    T: int

    def copies(self, a: int) -> np.ndarray:
        return np.flatnonzero(self.src_of == a)

    def copy_counts(self) -> np.ndarray:
        return np.bincount(self.src_of, minlength=self.source.n_atoms)

    def red_edge_counts(self) -> np.ndarray:
        """Number of red *block* edges per source atom.  When an atom
        identifies nodes, several node-pair columns carry the same block
        edge; only one representative column per block pair is counted."""
        src = self.source
        red_ids = np.array(
            [i for i, c in enumerate(src.colours) if is_red(c)],
            dtype=np.uint8,
        )
        is_red_col = np.isin(src.edges, red_ids)
        same = src.edges == SENT_SAME  # (N, n_pairs)
        weights = (np.uint64(1) << np.arange(same.shape[1], dtype=np.uint64))
        pat = same.astype(np.uint64) @ weights
        out = np.zeros(src.n_atoms, dtype=np.int64)
        n = src.sig.n
        for p in np.unique(pat):
            sel = pat == p
            parent = list(range(n))

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            for pi, (u, v) in enumerate(src.pairs):
                if p >> np.uint64(pi) & np.uint64(1):
                    ru, rv = find(u), find(v)
                    if ru != rv:
                        parent[max(ru, rv)] = min(ru, rv)
            block = [find(i) for i in range(n)]
            reps = [
                pi
                for pi, (u, v) in enumerate(src.pairs)
                if block[u] != block[v] and u == block[u] and v == block[v]
            ]
            out[sel] = is_red_col[np.ix_(sel, reps)].sum(axis=1)
        return out


def _collapse_map(src: RainbowAtomTable, tgt: RainbowAtomTable) -> np.ndarray:
    """uint8 lookup taking a target colour id to the source colour id of
    its superscript-stripped base; the same-block sentinel is fixed."""
    src_id = {tuple(c): i for i, c in enumerate(src.colours)}
    out = np.full(256, SENT_SAME, dtype=np.uint8)
    for ci, c in enumerate(tgt.colours):
        base = tuple(red_base(c))
        if base not in src_id:
            raise StructuralError(f"colour {c!r} does not collapse")
        out[ci] = src_id[base]
    return out


def blow_up(
    sig: RainbowSignature,
    T: int,
    max_atoms: int = 50_000_000,
    build_structure: bool = True,
):
    """Split every red of ``sig`` into T superscripted variants.

    Returns (target, bm) where target is the blown-up atom structure
    (or the bare atom table when build_structure is False, which the
    verification path can work from directly) and bm maps every target
    atom to its source.
    """
    if T < 1:
        raise UsageError("blow-up needs T >= 1")
    if sig.red_mode != "pair" or sig.red_supers is not None:
        raise UsageError("blow-up starts from plain pair-indexed reds")
    p = sig.preset or {}
    if p.get("kind") != "finiteRainbow":
        raise UsageError("blow-up is defined over finiteRainbow signatures")
    bsig = blown_rainbow(p["n"], p["greens"], p["reds"], T)

    src = build_atom_table(sig, max_atoms=max_atoms)
    tgt = build_atom_table(bsig, max_atoms=max_atoms)

    collapse = _collapse_map(src, tgt)
    collapsed = RainbowAtomTable(
        src.sig, src.colours, collapse[tgt.edges], tgt.yellows,
        src.pairs, src.subsets,
    )
    keys = collapsed.packed_keys()
    del collapsed
    skeys = src.packed_keys()  # ascending by construction
    pos = np.searchsorted(skeys, keys)
    pos = np.minimum(pos, len(skeys) - 1)
    if len(skeys) == 0 or not np.array_equal(skeys[pos], keys):
        raise StructuralError("a target atom collapses outside the source")
    del keys, skeys
    bm = BlowupMap(src, tgt, pos.astype(np.int64), T)

    # copy counts must be T^(red edges): the superscripts of distinct red
    # edges vary independently and nothing else moves
    counts = bm.copy_counts()
    expected = T ** bm.red_edge_counts().astype(np.int64)
    if not np.array_equal(counts, expected):
        bad = int(np.flatnonzero(counts != expected)[0])
        raise StructuralError(
            f"copy count mismatch at source atom {bad}: "
            f"{int(counts[bad])} copies, expected {int(expected[bad])}"
        )

    target = atom_structure_from_table(tgt) if build_structure else tgt
    return target, bm


@dataclass
class VerificationReport:
    mode: str
    entries: list = field(default_factory=list)
    notices: list = field(default_factory=list)

    def add(self, name, passed, witness=None):
        self.entries.append((name, bool(passed), witness))

    @property
    def ok(self) -> bool:
        return all(p for _, p, _ in self.entries)

    def summary(self) -> str:
        lines = [f"embedding check ({self.mode}):"]
        for name, passed, witness in self.entries:
            line = f"  {name}: " + ("pass" if passed else "FAIL")
            if witness and not passed:
                line += f"  witness: {witness}"
            lines.append(line)
        for n in self.notices:
            lines.append(f"  note: {n}")
        return "\n".join(lines)


def _cyl_preserved(bm: BlowupMap, i: int):
    """Exact per-class check that Theta commutes with c_i (see module
    docstring).  Returns (ok, witness)."""
    n_src = bm.source.n_atoms
    _, s_class = np.unique(restriction_keys(bm.source, i), return_inverse=True)
    s_class = s_class.astype(np.int64)
    s_sizes = np.bincount(s_class)

    _, t_class = np.unique(restriction_keys(bm.target, i), return_inverse=True)
    pair_key = t_class.astype(np.int64) * n_src + bm.src_of
    del t_class
    upairs = np.unique(pair_key)
    del pair_key
    tc = upairs // n_src
    sa = (upairs % n_src).astype(np.int64)
    del upairs
    starts = np.flatnonzero(np.r_[True, np.diff(tc) > 0])

    scls = s_class[sa]
    smin = np.minimum.reduceat(scls, starts)
    smax = np.maximum.reduceat(scls, starts)
    if not np.array_equal(smin, smax):
        seg = int(np.flatnonzero(smin != smax)[0])
        return False, (
            f"target T_{i}-class {int(tc[starts[seg]])} mixes source classes"
        )
    # each target class must realize its whole source class
    seg_sizes = np.diff(np.r_[starts, len(tc)])
    if not np.array_equal(seg_sizes, s_sizes[smin]):
        seg = int(np.flatnonzero(seg_sizes != s_sizes[smin])[0])
        return False, (
            f"target T_{i}-class {int(tc[starts[seg]])} realizes "
            f"{int(seg_sizes[seg])} of {int(s_sizes[smin[seg]])} source atoms"
        )
    return True, None


def theta_embed(
    bm: BlowupMap,
    seed: int = 20259,
    samples: int = 64,
    element_cap: int = 16,
):
    """The embedding Theta(x) = union of the copies of the atoms in x,
    with a verification report.

    Theta acts on elements given as boolean atom masks.  Injectivity and
    preservation of the diagonals and of every cylindrifier are verified
    exactly at atom level (the checks quantify over all elements by
    complete additivity).  The Boolean laws are additionally exercised
    over all elements when the source has at most ``element_cap`` atoms,
    otherwise on seeded random elements.
    """
    src, tgt = bm.source, bm.target
    n_src, n_tgt = src.n_atoms, tgt.n_atoms
    src_of = bm.src_of

    def theta(mask: np.ndarray) -> np.ndarray:
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (n_src,):
            raise UsageError(f"expected a mask over {n_src} atoms")
        return mask[src_of]

    exhaustive = n_src <= element_cap
    report = VerificationReport(
        mode="exhaustive-elements" if exhaustive else "sampled-elements"
    )
    p = (tgt.sig.preset or {})
    if "truncation" in p:
        report.notices.append(p["truncation"])
    report.notices.append(
        f"T={bm.T}; {n_src} source atoms, {n_tgt} target atoms"
    )

    counts = bm.copy_counts()
    report.add("copies-nonempty", counts.min() >= 1 if n_src else True)
    report.add("copies-partition-target", int(counts.sum()) == n_tgt)
    # fibres of a total map are disjoint, so nonempty copy sets make
    # Theta injective on unions
    report.add("injective", counts.min() >= 1 if n_src else True)

    zeros = np.zeros(n_src, dtype=bool)
    report.add("preserves-zero", not theta(zeros).any())
    report.add("preserves-one", theta(~zeros).all())

    for pi, (u, v) in enumerate(src.pairs):
        ok = np.array_equal(
            tgt.edges[:, pi] == SENT_SAME,
            (src.edges[:, pi] == SENT_SAME)[src_of],
        )
        report.add(f"preserves-d{u}{v}", ok)

    for i in range(src.sig.n):
        ok, witness = _cyl_preserved(bm, i)
        report.add(f"preserves-c{i}-all-elements", ok, witness)

    rng = np.random.default_rng(seed)
    if exhaustive:
        pool = [
            np.array([b >> k & 1 for k in range(n_src)], dtype=bool)
            for b in range(1 << n_src)
        ]
    else:
        pool = [rng.random(n_src) < rng.random() for _ in range(samples)]
    ok_bool = True
    witness = None
    for a in pool:
        b = pool[int(rng.integers(len(pool)))]
        if not (
            np.array_equal(theta(a | b), theta(a) | theta(b))
            and np.array_equal(theta(a & b), theta(a) & theta(b))
            and np.array_equal(theta(~a), ~theta(a))
        ):
            ok_bool = False
            witness = "Boolean operation not preserved on a checked element"
            break
    report.add("preserves-boolean-ops", ok_bool, witness)
    if exhaustive:
        # on a small source also replay the cylindrifier commutation
        # element by element
        s_struct = atom_structure_from_table(src)
        t_struct = atom_structure_from_table(tgt)
        ok_cyl = True
        witness = None
        for a in pool:
            for i in range(src.sig.n):
                lhs = t_struct.cyl[i].image_mask(theta(a))
                rhs = theta(s_struct.cyl[i].image_mask(a))
                if not np.array_equal(lhs, rhs):
                    ok_cyl = False
                    witness = f"c{i} on element {a.astype(int).tolist()}"
                    break
            if not ok_cyl:
                break
        report.add("cylindrifiers-elementwise", ok_cyl, witness)
    return theta, report


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def save_blowup_map(bm: BlowupMap, path: str) -> None:
    """Source/target atom tables plus the copies table, one .npz file."""
    meta = {
        "T": bm.T,
        "source_preset": bm.source.sig.preset,
        "target_preset": bm.target.sig.preset,
    }
    np.savez_compressed(
        path,
        meta=np.frombuffer(json.dumps(meta).encode(), dtype=np.uint8),
        src_edges=bm.source.edges,
        src_yellows=bm.source.yellows,
        tgt_edges=bm.target.edges,
        tgt_yellows=bm.target.yellows,
        src_of=bm.src_of,
    )


def load_blowup_map(path: str) -> BlowupMap:
    from .rainbow import build_signature

    with np.load(path) as data:
        meta = json.loads(bytes(data["meta"]).decode())
        sp = dict(meta["source_preset"])
        tp = dict(meta["target_preset"])
        sp.pop("truncation", None)
        tp.pop("truncation", None)
        ssig = build_signature(sp.pop("kind"), **sp)
        tsig = build_signature(tp.pop("kind"), **tp)
        from .rainbow_enum import _pair_index, _subset_index

        pairs, _ = _pair_index(ssig.n)
        subsets, _ = _subset_index(ssig.n)
        src = RainbowAtomTable(
            ssig, ssig.directed_colours(), data["src_edges"],
            data["src_yellows"], pairs, subsets,
        )
        tgt = RainbowAtomTable(
            tsig, tsig.directed_colours(), data["tgt_edges"],
            data["tgt_yellows"], pairs, subsets,
        )
        return BlowupMap(src, tgt, data["src_of"], meta["T"])
