import itertools

import pytest

from atomgames.kernel import UsageError
from atomgames.rainbow import finite_rainbow, ordered_zn, single_reds
from atomgames.scripts import (
    ForallWinsWithin,
    RefutedAt,
    ScriptBoard,
    board_cones,
    board_legal,
    cone_script,
    exists_replies,
    verify_script,
)


def test_cone_script_small_signature_refutable():
    # with only 2 tints the bombardment runs out before the reds clash
    sig = finite_rainbow(3, 2, 2)
    out = verify_script(sig, cone_script(sig), variant="Fm", m=6,
                        depth_budget=6)
    assert isinstance(out, RefutedAt)


def test_cone_script_wins_at_four_tints():
    # d = 4 recorded as the fixture depth for the 4-tint 3-red signature
    sig = finite_rainbow(3, 4, 3)
    out = verify_script(sig, cone_script(sig), variant="Fm", m=6,
                        depth_budget=6)
    assert isinstance(out, ForallWinsWithin)
    assert out.depth == 4


def test_cone_script_wins_harder_game_too():
    sig = finite_rainbow(3, 4, 3)
    out = verify_script(sig, cone_script(sig), variant="Gmk", m=6,
                        depth_budget=6, k=4)
    assert isinstance(out, ForallWinsWithin)
    assert out.depth <= 4


def test_repeating_tints_is_refuted():
    # a sanity probe: a "script" that demands the same tint forever lets
    # the builder reuse her existing apex as the witness and never lose
    sig = finite_rainbow(3, 4, 3)
    real = cone_script(sig)

    def weak(board, ctx):
        move = real(board, ctx)
        if move and move["kind"] == "cyl":
            move = dict(move)
            edges = dict(move["edges"])
            edges[0] = ("g0", 1)
            move["edges"] = edges
            move["discard"] = None
        return move

    out = verify_script(sig, weak, variant="Fm", m=6, depth_budget=6)
    assert isinstance(out, RefutedAt)


def test_ordered_signature_descending_tints():
    sig = ordered_zn(3, 2, 2)
    out = verify_script(sig, cone_script(sig), variant="Fm", m=7,
                        depth_budget=8)
    assert isinstance(out, ForallWinsWithin)
    assert out.depth == 3


def test_single_red_signature():
    sig = single_reds(3, 4, 2)
    out = verify_script(sig, cone_script(sig), variant="Fm", m=7,
                        depth_budget=8)
    assert isinstance(out, ForallWinsWithin)
    assert out.depth == 3


def test_script_needs_two_tints():
    with pytest.raises(UsageError):
        cone_script(single_reds(3, 1, 2))


def test_board_mechanics():
    sig = finite_rainbow(3, 2, 2)
    script = cone_script(sig)
    opening = script(ScriptBoard(sig), {"variant": "Fm", "m": 6, "round": 0})
    assert opening["kind"] == "open"
    boards = exists_replies(ScriptBoard(sig), opening,
                            {"variant": "Fm", "m": 6})
    assert len(boards) == 1
    b = boards[0]
    assert board_legal(b)
    cones = board_cones(b)
    assert any(base == frozenset((0, 1)) for base, _, _ in cones)


def test_malformed_move_rejected():
    sig = finite_rainbow(3, 2, 2)
    board = ScriptBoard(sig)
    with pytest.raises(UsageError):
        verify_script(
            sig, lambda b, ctx: {"kind": "cyl", "face": (0, 9), "edges": {}},
            variant="Fm", m=6,
        )


def test_unknown_variant_rejected():
    sig = finite_rainbow(3, 2, 2)
    with pytest.raises(UsageError):
        verify_script(sig, cone_script(sig), variant="Zz")
