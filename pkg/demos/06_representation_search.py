"""Brute-force representability on micro structures, coupled to games.

Whenever the backtracking search finds a concrete representation, the
builder must win every bounded network game on the same structure; a
seeded non-example (a negated diagonal) comes back empty-handed.
"""

import numpy as np

from atomgames.games import solve_gmk
from atomgames.kernel import CaAtomStructure, full_powerset_structure
from atomgames.oracle import (
    NoneWithinBudget,
    search_representation,
    verify_representation,
)

ps = full_powerset_structure(2, 3)
rep = search_representation(ps, max_base=2)
print("powerset structure over base 2:")
print(f"  found on base {rep.base_size}; "
      f"verified: {verify_representation(ps, rep)[0]}")
print(f"  unit has {len(rep.unit)} triples; atom 0 covers "
      f"{sorted(rep.atom_images[0])}")

for m in (4, 5):
    for k in (2, 4):
        print(f"  game with m={m}, k={k}:", solve_gmk(ps, m, k).winner)

bad_diag = {key: mask.copy() for key, mask in ps.diag.items()}
bad_diag[(0, 1)] = ~bad_diag[(0, 1)]
bad = CaAtomStructure(dimension=3, n_atoms=ps.n_atoms, cyl=ps.cyl,
                      diag=bad_diag)
out = search_representation(bad, max_base=2)
assert isinstance(out, NoneWithinBudget)
print("\nnegated-diagonal non-example:", out.summary())
