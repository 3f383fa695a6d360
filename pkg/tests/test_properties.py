"""Cross-cutting behavioural properties of the solvers and encoders."""

import random

import numpy as np
import pytest

from atomgames.kernel import CaAtomStructure, EquivRel, full_powerset_structure
from atomgames.games import (
    Network,
    atoms_by_pattern,
    check_lyndon_up_to,
    initial_networks,
    replay_gmk_strategy,
    solve_gmk,
)


@pytest.fixture(scope="module")
def broken23():
    ca = full_powerset_structure(2, 3)
    return CaAtomStructure(
        dimension=3,
        n_atoms=ca.n_atoms,
        cyl=[EquivRel(np.arange(ca.n_atoms)), ca.cyl[1], ca.cyl[2]],
        diag=ca.diag,
    )


def test_network_canonical_relabelling_invariance(powerset23):
    rng = random.Random(20259)
    patterns = atoms_by_pattern(powerset23)
    nets = [
        net
        for a in range(powerset23.n_atoms)
        for net in initial_networks(powerset23, a, patterns)
    ]
    checked = 0
    for net in nets:
        base = net.canonical()
        for _ in range(8):
            fresh = rng.sample(range(50), len(net.nodes))
            rename = dict(zip(net.nodes, fresh))
            relabelled = Network(
                powerset23,
                tuple(rename[u] for u in net.nodes),
                {
                    tuple(rename[u] for u in x): a
                    for x, a in net.labels.items()
                },
            )
            assert relabelled.canonical() == base
            checked += 1
    assert checked >= 50


def test_bounded_determinacy(powerset23, broken23):
    # with full state exploration the bounded game always has a winner
    for ca in (powerset23, broken23):
        for m in (4, 5):
            for k in range(4):
                res = solve_gmk(ca, m, k)
                assert res.winner in ("Exists", "Forall")


def test_round_monotonicity_on_lyndon_tables(powerset23, broken23):
    for ca in (powerset23, broken23):
        for m in (4, 5):
            table = check_lyndon_up_to(ca, 4, m)
            winners = [table[k] for k in sorted(table)]
            # once the spoiler wins at some round budget, more rounds
            # cannot help the builder
            for a, b in zip(winners, winners[1:]):
                if a == "Forall":
                    assert b == "Forall"


def test_strategy_replay_both_winners(powerset23, broken23):
    for ca, m, k in ((powerset23, 5, 3), (broken23, 5, 3), (broken23, 4, 2)):
        res = solve_gmk(ca, m, k)
        assert replay_gmk_strategy(ca, m, k, res)


def test_solver_outputs_repeatable(powerset23, broken23):
    for ca in (powerset23, broken23):
        outs = {solve_gmk(ca, 4, 3).summary() for _ in range(3)}
        assert len(outs) == 1
