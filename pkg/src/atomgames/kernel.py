"""Core representations of finite atom structures and their complex algebras.

Two flavours are supported: n-dimensional cylindric-style structures
(per-coordinate accessibility relations T_i plus diagonal sets D_ij) and
relation-algebra structures (identity atoms, converse, consistent triples).
Elements of the complex algebra are just sets of atoms; every operator is
induced pointwise from the accessibility data.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np


class UsageError(ValueError):
    """Caller passed something malformed (bad index, unknown op, ...)."""


class StructuralError(ValueError):
    """Inputs are individually fine but do not fit together."""


class ResourceBudgetError(RuntimeError):
    """A configurable cap or budget was exceeded; carries the cap."""

    def __init__(self, message, cap=None):
        super().__init__(message)
        self.cap = cap


# ---------------------------------------------------------------------------
# accessibility relations
#
# Small or user-supplied relations are kept as bitset rows (one python int
# per atom).  Structures generated in bulk (rainbow enumerations run to
# millions of atoms) store each T_i as an equivalence-class id array
# instead, which keeps relational images O(atoms) and memory linear.
# ---------------------------------------------------------------------------


class PairRel:
    """Binary relation on {0..n-1} stored as bitset rows."""

    def __init__(self, n_atoms: int, rows: Sequence[int]):
        if len(rows) != n_atoms:
            raise StructuralError("row count does not match atom count")
        self.n_atoms = n_atoms
        self.rows = list(rows)

    @classmethod
    def from_pairs(cls, n_atoms: int, pairs: Iterable[tuple[int, int]]) -> "PairRel":
        rows = [0] * n_atoms
        for a, b in pairs:
            if not (0 <= a < n_atoms and 0 <= b < n_atoms):
                raise UsageError(f"relation pair ({a},{b}) out of range")
            rows[a] |= 1 << b
        return cls(n_atoms, rows)

    def related(self, a: int, b: int) -> bool:
        return bool(self.rows[a] >> b & 1)

    def image_bits(self, bits: int) -> int:
        out = 0
        x = bits
        while x:
            low = x & -x
            out |= self.rows[low.bit_length() - 1]
            x ^= low
        return out

    def image_mask(self, mask: np.ndarray) -> np.ndarray:
        bits = mask_to_bits(mask)
        return bits_to_mask(self.image_bits(bits), self.n_atoms)

    def pairs(self):
        for a, row in enumerate(self.rows):
            x = row
            while x:
                low = x & -x
                yield a, low.bit_length() - 1
                x ^= low

    def is_reflexive(self) -> Optional[int]:
        """None if reflexive, else a witness atom."""
        for a, row in enumerate(self.rows):
            if not row >> a & 1:
                return a
        return None

    def is_symmetric(self):
        for a, row in enumerate(self.rows):
            x = row
            while x:
                low = x & -x
                b = low.bit_length() - 1
                if not self.rows[b] >> a & 1:
                    return (a, b)
                x ^= low
        return None

    def is_transitive(self):
        for a in range(self.n_atoms):
            closed = self.image_bits(self.rows[a])
            extra = closed & ~self.rows[a]
            if extra:
                return (a, (extra & -extra).bit_length() - 1)
        return None


class EquivRel:
    """Equivalence relation stored as a class-id array (numpy int)."""

    def __init__(self, class_ids: np.ndarray):
        self.class_ids = np.asarray(class_ids)
        self.n_atoms = len(self.class_ids)
        self.n_classes = int(self.class_ids.max()) + 1 if self.n_atoms else 0

    @classmethod
    def from_keys(cls, keys: np.ndarray) -> "EquivRel":
        _, inverse = np.unique(keys, return_inverse=True)
        return cls(inverse.astype(np.int64))

    def related(self, a: int, b: int) -> bool:
        return bool(self.class_ids[a] == self.class_ids[b])

    def image_mask(self, mask: np.ndarray) -> np.ndarray:
        hit = np.zeros(self.n_classes, dtype=bool)
        hit[self.class_ids[mask]] = True
        return hit[self.class_ids]

    def image_bits(self, bits: int) -> int:
        mask = bits_to_mask(bits, self.n_atoms)
        return mask_to_bits(self.image_mask(mask))

    def pairs(self):
        order = np.argsort(self.class_ids, kind="stable")
        ids = self.class_ids[order]
        start = 0
        for end in itertools.chain(
            np.nonzero(np.diff(ids))[0] + 1, [self.n_atoms]
        ):
            block = order[start:end]
            for a in block:
                for b in block:
                    yield int(a), int(b)
            start = end

    def is_reflexive(self):
        return None

    def is_symmetric(self):
        return None

    def is_transitive(self):
        return None


Rel = PairRel | EquivRel


def mask_to_bits(mask: np.ndarray) -> int:
    out = 0
    for a in np.nonzero(mask)[0]:
        out |= 1 << int(a)
    return out


def bits_to_mask(bits: int, n: int) -> np.ndarray:
    mask = np.zeros(n, dtype=bool)
    a = 0
    x = bits
    while x:
        low = x & -x
        mask[low.bit_length() - 1] = True
        x ^= low
    return mask


# ---------------------------------------------------------------------------
# atom structures
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class CaAtomStructure:
    """Finite n-dimensional cylindric atom structure.

    ``cyl[i]`` is the accessibility relation T_i; ``diag[(i, j)]`` (i < j)
    is the diagonal atom set D_ij as a boolean mask over atoms.
    """

    dimension: int
    n_atoms: int
    cyl: list  # list[Rel], one per coordinate
    diag: dict  # (i, j) i<j -> np.ndarray[bool]
    labels: Optional[Callable[[int], str]] = None
    provenance: Optional[dict] = None

    def __post_init__(self):
        if self.dimension < 2:
            raise UsageError("dimension must be >= 2")
        if len(self.cyl) != self.dimension:
            raise StructuralError("need one accessibility relation per coordinate")
        for (i, j), mask in self.diag.items():
            if not (0 <= i < j < self.dimension):
                raise StructuralError(f"bad diagonal index pair ({i},{j})")
            if len(mask) != self.n_atoms:
                raise StructuralError("diagonal mask length mismatch")
        for (i, j) in itertools.combinations(range(self.dimension), 2):
            if (i, j) not in self.diag:
                raise StructuralError(f"missing diagonal D_{i}{j}")

    def atom_label(self, a: int) -> str:
        return self.labels(a) if self.labels else str(a)

    def diag_mask(self, i: int, j: int) -> np.ndarray:
        if i == j:
            return np.ones(self.n_atoms, dtype=bool)
        return self.diag[(min(i, j), max(i, j))]

    def top(self) -> "AlgebraElement":
        return AlgebraElement(self, frozenset(range(self.n_atoms)))

    def bottom(self) -> "AlgebraElement":
        return AlgebraElement(self, frozenset())

    def element(self, atoms: Iterable[int]) -> "AlgebraElement":
        return AlgebraElement(self, frozenset(atoms))


@dataclass(eq=False)
class RaAtomStructure:
    """Finite relation-algebra atom structure.

    ``consistent`` is the ternary predicate: consistent(a, b, c) holds
    iff a <= b ; c at atom level.  For small structures an explicit
    triple table can be attached so it can be serialized.
    """

    n_atoms: int
    identity: frozenset
    converse: tuple  # converse[a] -> atom
    consistent: Callable[[int, int, int], bool]
    labels: Optional[Callable[[int], str]] = None
    provenance: Optional[dict] = None

    def __post_init__(self):
        if len(self.converse) != self.n_atoms:
            raise StructuralError("converse table length mismatch")
        for a in self.identity:
            if not 0 <= a < self.n_atoms:
                raise StructuralError("identity atom out of range")

    def atom_label(self, a: int) -> str:
        return self.labels(a) if self.labels else str(a)

    def is_self_converse(self) -> bool:
        return all(self.converse[a] == a for a in range(self.n_atoms))

    def triple_table(self) -> np.ndarray:
        """Dense boolean table of the predicate (small structures only)."""
        if self.n_atoms > 64:
            raise ResourceBudgetError(
                f"triple table needs {self.n_atoms}^3 entries; cap is 64 atoms",
                cap=64,
            )
        t = np.zeros((self.n_atoms,) * 3, dtype=bool)
        for a, b, c in itertools.product(range(self.n_atoms), repeat=3):
            t[a, b, c] = self.consistent(a, b, c)
        return t

    def element(self, atoms: Iterable[int]) -> "AlgebraElement":
        return AlgebraElement(self, frozenset(atoms))


@dataclass(frozen=True)
class AlgebraElement:
    """An element of the complex algebra: a set of atoms of its carrier."""

    carrier: object
    atoms: frozenset

    def __post_init__(self):
        if any(not 0 <= a < self.carrier.n_atoms for a in self.atoms):
            raise StructuralError("atom index outside carrier")

    def __len__(self):
        return len(self.atoms)

    def mask(self) -> np.ndarray:
        m = np.zeros(self.carrier.n_atoms, dtype=bool)
        for a in self.atoms:
            m[a] = True
        return m


# ---------------------------------------------------------------------------
# operator evaluation
# ---------------------------------------------------------------------------

_BOOLEAN_ARITY = {"union": 2, "inter": 2, "diff": 2, "compl": 1, "zero": 0, "one": 0}


def parse_op(op_id) -> tuple:
    """Normalize an operator tag: 'c_1' -> ('c', 1); 'd_0_2' -> ('d', 0, 2)."""
    if isinstance(op_id, tuple):
        return op_id
    if not isinstance(op_id, str):
        raise UsageError(f"unknown operator tag {op_id!r}")
    if op_id in _BOOLEAN_ARITY or op_id in ("comp", "conv", "id"):
        return (op_id,)
    parts = op_id.split("_")
    try:
        if parts[0] == "c" and len(parts) == 2:
            return ("c", int(parts[1]))
        if parts[0] == "d" and len(parts) == 3:
            return ("d", int(parts[1]), int(parts[2]))
    except ValueError:
        pass
    raise UsageError(f"unknown operator tag {op_id!r}")


def apply_operator(struct, op_id, args: Sequence[AlgebraElement]) -> AlgebraElement:
    """Pointwise complex-algebra evaluation of one operator."""
    for x in args:
        if x.carrier is not struct:
            raise StructuralError("argument carrier differs from struct")
    op = parse_op(op_id)
    tag = op[0]

    if tag in _BOOLEAN_ARITY:
        _check_arity(op_id, _BOOLEAN_ARITY[tag], args)
        full = frozenset(range(struct.n_atoms))
        if tag == "union":
            return AlgebraElement(struct, args[0].atoms | args[1].atoms)
        if tag == "inter":
            return AlgebraElement(struct, args[0].atoms & args[1].atoms)
        if tag == "diff":
            return AlgebraElement(struct, args[0].atoms - args[1].atoms)
        if tag == "compl":
            return AlgebraElement(struct, full - args[0].atoms)
        if tag == "zero":
            return AlgebraElement(struct, frozenset())
        return AlgebraElement(struct, full)

    if isinstance(struct, CaAtomStructure):
        if tag == "c":
            _check_arity(op_id, 1, args)
            i = op[1]
            if not 0 <= i < struct.dimension:
                raise UsageError(f"cylindrifier index {i} out of range")
            rel = struct.cyl[i]
            mask = rel.image_mask(args[0].mask())
            return AlgebraElement(struct, frozenset(np.nonzero(mask)[0].tolist()))
        if tag == "d":
            _check_arity(op_id, 0, args)
            i, j = op[1], op[2]
            if not (0 <= i < struct.dimension and 0 <= j < struct.dimension):
                raise UsageError(f"diagonal indices ({i},{j}) out of range")
            mask = struct.diag_mask(i, j)
            return AlgebraElement(struct, frozenset(np.nonzero(mask)[0].tolist()))
        raise UsageError(f"operator {op_id!r} not in the CA signature")

    if isinstance(struct, RaAtomStructure):
        if tag == "comp":
            _check_arity(op_id, 2, args)
            out = set()
            for a in range(struct.n_atoms):
                if any(
                    struct.consistent(a, b, c)
                    for b in args[0].atoms
                    for c in args[1].atoms
                ):
                    out.add(a)
            return AlgebraElement(struct, frozenset(out))
        if tag == "conv":
            _check_arity(op_id, 1, args)
            return AlgebraElement(
                struct, frozenset(struct.converse[a] for a in args[0].atoms)
            )
        if tag == "id":
            _check_arity(op_id, 0, args)
            return AlgebraElement(struct, struct.identity)
        raise UsageError(f"operator {op_id!r} not in the RA signature")

    raise UsageError(f"unsupported structure type {type(struct)!r}")


def _check_arity(op_id, want, args):
    if len(args) != want:
        raise UsageError(f"operator {op_id!r} takes {want} argument(s), got {len(args)}")


# ---------------------------------------------------------------------------
# sc-words
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScWord:
    """A word over substitutions s_j^i and cylinders c_i, of a fixed width."""

    tokens: tuple  # sequence of ("s", i, j) and ("c", i)
    width: int

    def __post_init__(self):
        for tok in self.tokens:
            if tok[0] == "s":
                _, i, j = tok
                idx = (i, j)
            elif tok[0] == "c":
                idx = (tok[1],)
            else:
                raise UsageError(f"bad sc-word token {tok!r}")
            for k in idx:
                if not 0 <= k < self.width:
                    raise UsageError(f"sc-word index {k} out of width {self.width}")


def eval_sc_word(word: ScWord) -> dict:
    """The partial map {0..width-1} -> {0..width-1} induced by the word.

    The empty word denotes the identity.  Appending s_j^i composes with the
    total map [i|j] (send i to j, fix the rest); appending c_i restricts the
    domain by removing i.
    """
    cur = {k: k for k in range(word.width)}
    for tok in word.tokens:
        if tok[0] == "s":
            _, i, j = tok
            repl = {k: (j if k == i else k) for k in range(word.width)}
            cur = {k: repl[v] for k, v in cur.items()}
        else:
            i = tok[1]
            cur = {k: v for k, v in cur.items() if k != i}
    return cur


# ---------------------------------------------------------------------------
# axiom checking
# ---------------------------------------------------------------------------

EXHAUSTIVE_ELEMENT_CUTOFF = 12  # 2^12 elements; above this we sample


@dataclass
class AxiomResult:
    name: str
    level: str  # "atom" | "element" | "info"
    passed: bool
    witness: Optional[str] = None
    note: Optional[str] = None


@dataclass
class AxiomReport:
    mode: str
    entries: list = field(default_factory=list)

    def add(self, name, level, passed, witness=None, note=None):
        self.entries.append(AxiomResult(name, level, passed, witness, note))

    @property
    def ok(self) -> bool:
        return all(e.passed for e in self.entries if e.level != "info")

    @property
    def atom_level_ok(self) -> bool:
        return all(e.passed for e in self.entries if e.level == "atom")

    def failures(self):
        return [e for e in self.entries if not e.passed and e.level != "info"]

    def summary(self) -> str:
        lines = [f"axiom check ({self.mode}):"]
        for e in self.entries:
            status = "pass" if e.passed else "FAIL"
            line = f"  [{e.level}] {e.name}: {status}"
            if e.witness and not e.passed:
                line += f"  witness: {e.witness}"
            if e.note:
                line += f"  ({e.note})"
            lines.append(line)
        return "\n".join(lines)


def check_axioms(struct, sample_budget: int = 200, seed: int = 20259) -> AxiomReport:
    """Equational battery for the complex algebra of ``struct``.

    Atom-level (frame-condition) forms are checked exhaustively.  The
    element-level laws are checked over all 2^N elements when N <= 12,
    otherwise on ``sample_budget`` seeded pseudo-random elements.
    """
    if isinstance(struct, CaAtomStructure):
        return _check_ca_axioms(struct, sample_budget, seed)
    if isinstance(struct, RaAtomStructure):
        return _check_ra_axioms(struct, sample_budget, seed)
    raise UsageError(f"unsupported structure type {type(struct)!r}")


def _check_ca_axioms(ca: CaAtomStructure, sample_budget, seed) -> AxiomReport:
    rep = AxiomReport(mode="CA")
    n = ca.dimension

    # --- atom level -------------------------------------------------------
    for i, rel in enumerate(ca.cyl):
        w = rel.is_reflexive()
        rep.add(f"C1/atom: T_{i} reflexive", "atom", w is None,
                None if w is None else f"atom {ca.atom_label(w)}")
        w = rel.is_symmetric()
        rep.add(f"C3/atom: T_{i} symmetric", "atom", w is None,
                None if w is None else f"atoms {w}")
        w = rel.is_transitive()
        rep.add(f"T_{i} transitive", "info", w is None,
                None if w is None else f"atoms {w}",
                note="reported separately; not required of user structures")

    for i, j in itertools.combinations(range(n), 2):
        ok, wit = _commuting_cylindrifiers(ca, i, j)
        rep.add(f"C4/atom: c_{i} c_{j} = c_{j} c_{i}", "atom", ok, wit)

    for i, j in itertools.combinations(range(n), 2):
        for k in range(n):
            if k in (i, j):
                continue
            lhs = ca.diag_mask(i, j)
            rhs = ca.cyl[k].image_mask(ca.diag_mask(i, k) & ca.diag_mask(k, j))
            if not np.array_equal(lhs, rhs):
                w = int(np.nonzero(lhs ^ rhs)[0][0])
                rep.add(f"C6/atom: d_{i}{j} = c_{k}(d_{i}{k} . d_{k}{j})",
                        "atom", False, f"atom {ca.atom_label(w)}")
            else:
                rep.add(f"C6/atom: d_{i}{j} = c_{k}(d_{i}{k} . d_{k}{j})",
                        "atom", True)

    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            ok, wit = _diag_uniqueness(ca, i, j)
            rep.add(f"C7/atom: T_{i} meets d_{i}{j} once per class", "atom", ok, wit)

    # --- element level ----------------------------------------------------
    if ca.n_atoms <= EXHAUSTIVE_ELEMENT_CUTOFF:
        _ca_element_laws_exhaustive(ca, rep)
    else:
        _ca_element_laws_sampled(ca, rep, sample_budget, seed)
    return rep


def _commuting_cylindrifiers(ca, i, j):
    """Frame form of c_i c_j = c_j c_i.

    For equivalence-backed relations this is equivalent to the bipartite
    incidence between T_i-classes and T_j-classes being a disjoint union
    of complete bipartite blocks, which checks in linear time.  Otherwise
    fall back to composing bitset rows.
    """
    ri, rj = ca.cyl[i], ca.cyl[j]
    if isinstance(ri, EquivRel) and isinstance(rj, EquivRel):
        pair = ri.class_ids.astype(np.int64) * rj.n_classes + rj.class_ids
        edges = np.unique(pair)
        xs, ys = edges // rj.n_classes, edges % rj.n_classes
        # group the x side by its neighbourhood set; blocks must not share ys
        nbr = {}
        for x, y in zip(xs.tolist(), ys.tolist()):
            nbr.setdefault(x, []).append(y)
        sig_of_x = {x: tuple(sorted(v)) for x, v in nbr.items()}
        owner = {}
        for x, s in sig_of_x.items():
            for y in s:
                if y in owner and owner[y] != s:
                    return False, f"T_{i}-class {x} / T_{j}-class {y}"
                owner[y] = s
        return True, None
    if ca.n_atoms > 4096:
        raise ResourceBudgetError(
            "pairwise commutation check needs equivalence-backed relations "
            "above 4096 atoms", cap=4096)
    for a in range(ca.n_atoms):
        ij = rj.image_bits(ri.image_bits(1 << a))
        ji = ri.image_bits(rj.image_bits(1 << a))
        if ij != ji:
            return False, f"atom {ca.atom_label(a)}"
    return True, None


def _diag_uniqueness(ca, i, j):
    """Atom form of C7: within one T_i class at most one atom lies in d_ij."""
    mask = ca.diag_mask(i, j)
    rel = ca.cyl[i]
    if isinstance(rel, EquivRel):
        ids = rel.class_ids[mask]
        uniq, counts = np.unique(ids, return_counts=True)
        bad = uniq[counts > 1]
        if len(bad):
            members = np.nonzero(mask & (rel.class_ids == bad[0]))[0][:2]
            return False, f"atoms {[ca.atom_label(int(a)) for a in members]}"
        return True, None
    members = np.nonzero(mask)[0].tolist()
    for a, b in itertools.combinations(members, 2):
        if rel.related(a, b):
            return False, f"atoms ({ca.atom_label(a)}, {ca.atom_label(b)})"
    return True, None


def _rel_rows_bits(rel, n_atoms):
    if isinstance(rel, PairRel):
        return rel.rows
    return [rel.image_bits(1 << a) for a in range(n_atoms)]


def _ca_element_laws_exhaustive(ca, rep):
    """All 2^N elements as packed uint64 masks, laws vectorized with numpy."""
    n_atoms = ca.n_atoms
    size = 1 << n_atoms
    allm = np.arange(size, dtype=np.uint64)
    full = np.uint64(size - 1)

    ci_tables = []
    for rel in ca.cyl:
        rows = _rel_rows_bits(rel, n_atoms)
        table = np.zeros(size, dtype=np.uint64)
        for a in range(n_atoms):
            has = (allm >> np.uint64(a)) & np.uint64(1) == 1
            table[has] |= np.uint64(rows[a])
        ci_tables.append(table)

    diag_bits = {}
    for i in range(ca.dimension):
        for j in range(ca.dimension):
            diag_bits[(i, j)] = np.uint64(mask_to_bits(ca.diag_mask(i, j)))

    def report(name, ok_mask, extra=""):
        if bool(ok_mask.all()):
            rep.add(name, "element", True, note="exhaustive" + extra)
        else:
            w = int(np.nonzero(~ok_mask)[0][0])
            rep.add(name, "element", False, witness=f"element mask {w:#x}",
                    note="exhaustive" + extra)

    for i, ci in enumerate(ci_tables):
        report(f"C0: c_{i} 0 = 0", np.asarray([ci[0] == 0]))
        report(f"C1: x <= c_{i} x", (allm | ci[allm]) == ci[allm])
        report(f"C2: c_{i} c_{i} x = c_{i} x", ci[ci[allm]] == ci[allm])
        # two-variable C3, vectorized over x for each y
        ok = True
        wit = None
        for y in range(size):
            t = ci[y]
            lhs = ci[allm & t]
            rhs = ci[allm] & t
            bad = np.nonzero(lhs != rhs)[0]
            if len(bad):
                ok, wit = False, f"x={int(bad[0]):#x} y={y:#x}"
                break
        rep.add(f"C3: c_{i}(x . c_{i} y) = c_{i} x . c_{i} y", "element", ok,
                wit, note="exhaustive")

    for i, j in itertools.combinations(range(ca.dimension), 2):
        ci, cj = ci_tables[i], ci_tables[j]
        report(f"C4: c_{i} c_{j} x = c_{j} c_{i} x", ci[cj[allm]] == cj[ci[allm]])

    for i, j in itertools.combinations(range(ca.dimension), 2):
        for k in range(ca.dimension):
            if k in (i, j):
                continue
            lhs = diag_bits[(i, j)]
            rhs = ci_tables[k][int(diag_bits[(i, k)] & diag_bits[(k, j)])]
            report(f"C5/C6: d_{i}{j} = c_{k}(d_{i}{k} . d_{k}{j})",
                   np.asarray([lhs == rhs]))

    for i in range(ca.dimension):
        for j in range(ca.dimension):
            if i == j:
                continue
            d = diag_bits[(i, j)]
            ci = ci_tables[i]
            lhs = ci[allm & d] & ci[(~allm & full) & d]
            report(f"C7: c_{i}(d_{i}{j}.x) . c_{i}(d_{i}{j}.-x) = 0", lhs == 0)


def _ca_element_laws_sampled(ca, rep, sample_budget, seed):
    rng = random.Random(seed)
    n_atoms = ca.n_atoms
    samples = [_random_mask(rng, n_atoms) for _ in range(sample_budget)]
    note = f"sampled ({sample_budget} elements, seed {seed})"

    def img(i, mask):
        return ca.cyl[i].image_mask(mask)

    for i in range(ca.dimension):
        rep.add(f"C0: c_{i} 0 = 0", "element",
                not img(i, np.zeros(n_atoms, dtype=bool)).any(), note=note)
        ok, wit = True, None
        for idx, x in enumerate(samples):
            cx = img(i, x)
            if (x & ~cx).any():
                ok, wit = False, f"sample {idx}"
                break
            if not np.array_equal(img(i, cx), cx):
                ok, wit = False, f"sample {idx}"
                break
        rep.add(f"C1&C2: x <= c_{i} x = c_{i} c_{i} x", "element", ok, wit, note=note)
        ok, wit = True, None
        for idx in range(0, len(samples) - 1, 2):
            x, y = samples[idx], samples[idx + 1]
            cy = img(i, y)
            if not np.array_equal(img(i, x & cy), img(i, x) & cy):
                ok, wit = False, f"samples {idx},{idx+1}"
                break
        rep.add(f"C3: c_{i}(x . c_{i} y) = c_{i} x . c_{i} y", "element", ok, wit,
                note=note)

    for i, j in itertools.combinations(range(ca.dimension), 2):
        ok, wit = True, None
        for idx, x in enumerate(samples):
            if not np.array_equal(img(i, img(j, x)), img(j, img(i, x))):
                ok, wit = False, f"sample {idx}"
                break
        rep.add(f"C4: c_{i} c_{j} x = c_{j} c_{i} x", "element", ok, wit, note=note)

    for i, j in itertools.combinations(range(ca.dimension), 2):
        for k in range(ca.dimension):
            if k in (i, j):
                continue
            lhs = ca.diag_mask(i, j)
            rhs = img(k, ca.diag_mask(i, k) & ca.diag_mask(k, j))
            rep.add(f"C5/C6: d_{i}{j} = c_{k}(d_{i}{k} . d_{k}{j})", "element",
                    bool(np.array_equal(lhs, rhs)), note=note)

    for i in range(ca.dimension):
        for j in range(ca.dimension):
            if i == j:
                continue
            d = ca.diag_mask(i, j)
            ok, wit = True, None
            for idx, x in enumerate(samples):
                if (img(i, x & d) & img(i, ~x & d)).any():
                    ok, wit = False, f"sample {idx}"
                    break
            rep.add(f"C7: c_{i}(d_{i}{j}.x) . c_{i}(d_{i}{j}.-x) = 0", "element",
                    ok, wit, note=note)


def _random_mask(rng, n):
    m = np.zeros(n, dtype=bool)
    # mixed densities so both sparse and dense elements get exercised
    density = rng.choice([0.01, 0.1, 0.5, 0.9])
    for a in range(n):
        if rng.random() < density:
            m[a] = True
    return m


def _check_ra_axioms(ra: RaAtomStructure, sample_budget, seed) -> AxiomReport:
    rep = AxiomReport(mode="RA")
    rng = random.Random(seed)

    bad = [a for a in range(ra.n_atoms) if ra.converse[ra.converse[a]] != a]
    rep.add("converse involution", "atom", not bad,
            None if not bad else f"atom {ra.atom_label(bad[0])}")

    exhaustive = ra.n_atoms ** 3 <= 300_000
    if exhaustive:
        triples = itertools.product(range(ra.n_atoms), repeat=3)
        note = "exhaustive"
    else:
        triples = (
            tuple(rng.randrange(ra.n_atoms) for _ in range(3))
            for _ in range(sample_budget)
        )
        note = f"sampled ({sample_budget} triples, seed {seed})"

    peirce_ok, wit = True, None
    ident_ok, ident_wit = True, None
    self_conv = ra.is_self_converse() and len(ra.identity) == 1
    id_atom = next(iter(ra.identity)) if ra.identity else None
    for a, b, c in triples:
        v = ra.consistent(a, b, c)
        if v != ra.consistent(ra.converse[a], c, b) or v != ra.consistent(
            b, ra.converse[c], ra.converse[a]
        ):
            peirce_ok, wit = False, f"triple ({a},{b},{c})"
            break
        if self_conv and b == id_atom:
            if v != (a == c):
                ident_ok, ident_wit = False, f"triple ({a},{b},{c})"
    rep.add("Peircean closure", "atom", peirce_ok, wit, note=note)
    if self_conv:
        rep.add("identity law (Id ; b = b)", "atom", ident_ok, ident_wit, note=note)
    else:
        rep.add("identity law", "info", True,
                note="structure not self-converse/single-identity; skipped")

    # associativity at atom level via boolean matrix products
    if ra.n_atoms <= 40:
        t = ra.triple_table()
        N = ra.n_atoms
        # L[d,a,b,c] = exists e: t[d,a,e] and t[e,b,c]
        left = (t.reshape(N * N, N) @ t.reshape(N, N * N).astype(np.uint8)) > 0
        left = left.reshape(N, N, N, N)
        # R[d,a,b,c] = exists f: t[d,f,c] and t[f,a,b]
        tdc = np.transpose(t, (0, 2, 1))  # [d,c,f]
        right = (tdc.reshape(N * N, N) @ t.reshape(N, N * N).astype(np.uint8)) > 0
        right = right.reshape(N, N, N, N)          # [d,c,a,b]
        right = np.transpose(right, (0, 2, 3, 1))  # [d,a,b,c]
        if np.array_equal(left, right):
            rep.add("associativity (atom level)", "atom", True, note="exhaustive")
        else:
            w = np.argwhere(left != right)[0]
            rep.add("associativity (atom level)", "atom", False,
                    witness=f"(d,a,b,c)={tuple(int(v) for v in w)}",
                    note="exhaustive")
    else:
        ok, wit = True, None
        for idx in range(sample_budget):
            d, a, b, c = (rng.randrange(ra.n_atoms) for _ in range(4))
            l = any(ra.consistent(d, a, e) and ra.consistent(e, b, c)
                    for e in range(ra.n_atoms))
            r = any(ra.consistent(d, f, c) and ra.consistent(f, a, b)
                    for f in range(ra.n_atoms))
            if l != r:
                ok, wit = False, f"(d,a,b,c)=({d},{a},{b},{c})"
                break
        rep.add("associativity (atom level)", "atom", ok, wit,
                note=f"sampled ({sample_budget} quadruples, seed {seed})")
    return rep


# ---------------------------------------------------------------------------
# stock structures
# ---------------------------------------------------------------------------


def full_powerset_structure(base_size: int, n: int) -> CaAtomStructure:
    """The atom structure of the full set algebra on base^n.

    Atoms are the n-tuples over the base; T_i relates tuples agreeing off
    coordinate i; D_ij collects the tuples with equal i-th and j-th entry.
    Its complex algebra is a genuine set algebra, so every axiom holds.
    """
    if base_size < 1 or n < 2:
        raise UsageError("need base_size >= 1 and n >= 2")
    atoms = list(itertools.product(range(base_size), repeat=n))
    index = {t: k for k, t in enumerate(atoms)}
    cyl = []
    for i in range(n):
        keys = np.array(
            [index[t[:i] + (0,) + t[i + 1:]] for t in atoms], dtype=np.int64
        )
        cyl.append(EquivRel.from_keys(keys))
    diag = {}
    for i, j in itertools.combinations(range(n), 2):
        diag[(i, j)] = np.array([t[i] == t[j] for t in atoms], dtype=bool)
    return CaAtomStructure(
        dimension=n,
        n_atoms=len(atoms),
        cyl=cyl,
        diag=diag,
        labels=lambda a, _atoms=atoms: str(_atoms[a]),
        provenance={"preset": "full-powerset", "base": base_size, "n": n},
    )
