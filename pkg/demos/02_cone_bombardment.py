"""The spoiler's cone-bombardment strategy, verified move by move.

On the 4-tint 3-red signature the spoiler opens with a cone and keeps
demanding cones with fresh tints on the same base.  The builder's red
edges between apexes must carry pairwise-compatible index pairs, and
with more tints than red indices she runs out by round 4.  Against only
2 tints -- or against a lazy script that repeats a tint -- she survives.
"""

from atomgames.rainbow import finite_rainbow, ordered_zn
from atomgames.scripts import cone_script, verify_script

big = finite_rainbow(3, 4, 3)
print("4 tints vs 3 reds, discards allowed (board of 6):")
print("  ", verify_script(big, cone_script(big), variant="Fm", m=6).summary())
print("same but no discards and only 4 rounds:")
print("  ", verify_script(big, cone_script(big), variant="Gmk", m=6,
                          k=4).summary())

small = finite_rainbow(3, 2, 2)
print("\nonly 2 tints (the builder survives):")
print("  ", verify_script(small, cone_script(small), variant="Fm",
                          m=6).summary())

ordered = ordered_zn(3, 2, 2)
print("\nordered tints, descending bombardment:")
print("  ", verify_script(ordered, cone_script(ordered), variant="Fm",
                          m=7).summary())
