"""Graph-based relation algebras and their basic matrices.

A Monk-style structure forbids monochromatic triangles on independent
vertex sets, so its behaviour tracks the chromatic number of the
underlying graph.  Size-3 basic matrices over the one-triangle structure
form a cylindric basis, and the matrices themselves assemble into a
3-dimensional atom structure.
"""

from atomgames.kernel import check_axioms
from atomgames.matrices import (
    ca_from_matrices,
    check_cylindric_basis,
    enumerate_basic_matrices,
)
from atomgames.monk import chromatic_number, make_monk_graph, monk_atom_structure

for desc, g in [
    ("three disjoint triangles", make_monk_graph("cliqueUnion", N=3, count=3)),
    ("interval graph width 3", make_monk_graph("interval", N=3, size=7)),
]:
    print(f"{desc}: chromatic number {chromatic_number(g)}")

g = make_monk_graph("cliqueUnion", N=3, count=1)
ra = monk_atom_structure(g, 3)
print(f"\none triangle, 3 colours: {ra.n_atoms} atoms; "
      f"axioms {'ok' if check_axioms(ra, sample_budget=30).ok else 'FAILED'}")

ms = enumerate_basic_matrices(ra, 3)
print(f"size-3 basic matrices: {len(ms)}")
print("first:", ms[0].describe(ra))

basis = check_cylindric_basis(ms, ra, 3)
print(basis.summary())

ca = ca_from_matrices(ms, 3, identity_set=ra.identity)
rep = check_axioms(ca, sample_budget=20)
print(f"matrices as a 3-dimensional structure: {ca.n_atoms} atoms, "
      f"atom battery {'ok' if rep.atom_level_ok else 'FAILED'}")
