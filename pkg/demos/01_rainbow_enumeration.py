"""Enumerate a small rainbow atom structure and poke at its parts.

Atoms are edge-coloured complete graphs on up to n coordinates with
yellow shade labels on the (n-1)-subsets; the columnar enumerator and a
slow generate-and-test loop agree on every small signature.
"""

from atomgames.kernel import check_axioms
from atomgames.rainbow import finite_rainbow
from atomgames.rainbow_enum import (
    atom_structure_from_table,
    build_atom_table,
    brute_force_atoms,
    table_atom_keys,
)

sig = finite_rainbow(3, 2, 2)
print("signature:", sig.describe())

tab = build_atom_table(sig)
print(f"\n{tab.n_atoms} atoms; a few of them:")
for a in range(0, tab.n_atoms, tab.n_atoms // 5):
    print("  ", tab.describe(a))

print("\ncross-checking against brute force ...")
assert table_atom_keys(tab) == brute_force_atoms(sig)
print("  the two enumerations agree")

struct = atom_structure_from_table(tab)
report = check_axioms(struct, sample_budget=30)
print("\naxiom battery:", "ok" if report.ok else "FAILED")
print("cylindrifier class counts:", [r.n_classes for r in struct.cyl])
