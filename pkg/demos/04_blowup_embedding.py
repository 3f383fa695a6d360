"""Split every red atom into T superscripted copies and verify that the
original complex algebra embeds by sending each atom to the union of its
copies.

The verification is exact: the cylindrifier checks compare whole
equivalence classes on both sides, which covers every element at once by
complete additivity.
"""

import numpy as np

from atomgames.blowup import blow_up, theta_embed
from atomgames.rainbow import finite_rainbow

sig = finite_rainbow(3, 2, 2)
for T in (1, 2, 3):
    _, bm = blow_up(sig, T, build_structure=False)
    counts = bm.copy_counts()
    reds = bm.red_edge_counts()
    print(f"T={T}: {bm.source.n_atoms} -> {bm.target.n_atoms} atoms; "
          f"copy counts are T^(red edges): "
          f"{np.array_equal(counts, T ** reds.astype(np.int64))}")

_, bm = blow_up(sig, 3, build_structure=False)
theta, report = theta_embed(bm)
print()
print(report.summary())

a = int(np.flatnonzero(bm.red_edge_counts() == 2)[0])
print(f"\natom with two red edges: {bm.source.describe(a)}")
print(f"its {len(bm.copies(a))} copies:")
for t in bm.copies(a):
    print("  ", bm.target.describe(int(t)))
