"""Pebble and network games with exact minimax solvers.

The p-pebble forth game separates K_{p} from K_{p-1} only when the
spoiler has one pebble pair per vertex of the larger clique; the network
game over the powerset structure is a builder's win at every budget.
"""

from atomgames.games import (
    EFStruct,
    check_lyndon_up_to,
    solve_ef,
    solve_fm,
    solve_gmk,
)
from atomgames.kernel import full_powerset_structure

for n in (3, 4):
    res = solve_ef(n + 1, n + 2, EFStruct.complete_graph(n + 1),
                   EFStruct.complete_graph(n))
    print(f"EF({n + 1} pebbles) on K_{n + 1} vs K_{n}:", res.summary())
    res = solve_ef(n, n + 2, EFStruct.complete_graph(n + 1),
                   EFStruct.complete_graph(n))
    print(f"EF({n} pebbles)  on K_{n + 1} vs K_{n}:", res.summary())

L = EFStruct.linear_order
print("\nlinear orders, 2 pebbles 3 rounds, sizes 4 vs 8:",
      solve_ef(2, 3, L(0, 4), L(0, 8)).winner)
print("linear orders, 3 pebbles 3 rounds, sizes 7 vs 8:",
      solve_ef(3, 3, L(0, 7), L(0, 8)).winner)

ps = full_powerset_structure(2, 3)
print("\npowerset structure, 5 nodes 3 rounds:", solve_gmk(ps, 5, 3).summary())
print("powerset structure, discard variant:  ", solve_fm(ps, 4, 10_000).summary())
print("round table:", check_lyndon_up_to(ps, 4, 5))
