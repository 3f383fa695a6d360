"""Scripted-strategy verification for rainbow games.

The boards here are coloured graphs over a rainbow signature rather than
explicit networks over the (possibly huge) enumerated atom structure: a
distinct-node coloured graph determines the network labelling every
tuple, so playing on graphs is playing on networks without materializing
millions of atoms.

Yellow labels chosen by the opponent (the exists player) are kept lazy:
a pair she created carries the set of tints that cones have so far
required, standing for every concrete shade containing them.  A lazy
label concretizes when it must be compared against a scripted concrete
shade.  This keeps her yellow options exact without branching over all
2^|G| shades.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .kernel import UsageError
from .rainbow import (
    RainbowSignature,
    colour_name,
    consistent_triangle,
    is_green,
)

LAZY = "lazy"
SHADE = "shade"


@dataclass
class ScriptBoard:
    sig: RainbowSignature
    nodes: tuple = ()
    edges: dict = field(default_factory=dict)  # frozenset({u,v}) -> colour
    # frozenset of n-1 nodes -> (SHADE, frozenset) | (LAZY, frozenset)
    yellows: dict = field(default_factory=dict)
    round: int = 0

    def colour(self, u, v):
        return self.edges.get(frozenset((u, v)))

    def clone(self) -> "ScriptBoard":
        return ScriptBoard(
            self.sig, self.nodes, dict(self.edges), dict(self.yellows),
            self.round,
        )

    def describe(self) -> str:
        bits = [f"round {self.round}", f"nodes {list(self.nodes)}"]
        for e, c in sorted(self.edges.items(), key=lambda t: sorted(t[0])):
            u, v = sorted(e)
            bits.append(f"({u},{v})={colour_name(c)}")
        for s, (kind, val) in sorted(
            self.yellows.items(), key=lambda t: sorted(t[0])
        ):
            bits.append(
                f"y{sorted(s)}={kind}:{sorted(val)}"
            )
        return "; ".join(bits)


def board_cones(board: ScriptBoard):
    """(base frozenset, apex, tint) triples currently on the board."""
    sig = board.sig
    n = sig.n
    out = []
    for apex in board.nodes:
        others = [u for u in board.nodes if u != apex]
        for base in itertools.permutations(others, n - 1):
            c0 = board.colour(base[0], apex)
            if c0 is None or c0[0] != "g0":
                continue
            if any(
                board.colour(base[j], apex) != ("g", j)
                for j in range(1, n - 1)
            ):
                continue
            if any(
                (c := board.colour(u, v)) is None or is_green(c)
                for u, v in itertools.combinations(base, 2)
            ):
                continue
            out.append((frozenset(base), apex, c0[1]))
    return out


def board_legal(board: ScriptBoard) -> bool:
    """Triangles consistent and every cone's tint admitted by its base
    label; lazy labels absorb requirements (mutates the lazy sets)."""
    sig = board.sig
    for tri in itertools.combinations(board.nodes, 3):
        cols = [
            board.colour(u, v) for u, v in itertools.combinations(tri, 2)
        ]
        if all(c is not None for c in cols):
            if not consistent_triangle(sig, *cols):
                return False
    full = sig.full_shade()
    for base, apex, tint in board_cones(board):
        ent = board.yellows.get(base)
        if ent is None:
            continue
        kind, val = ent
        if kind == SHADE:
            if tint not in val:
                return False
        else:
            need = val | {tint}
            if not need <= full:
                return False
            board.yellows[base] = (LAZY, need)
    return True


# ---------------------------------------------------------------------------
# moves
#
# {"kind": "open", "edges": {(u,v): colour}, "yellows": {(nodes): shade}}
# {"kind": "cyl", "face": (n-1 nodes), "edges": {face node: colour},
#  "yellows": {(nodes incl. the fresh node): shade}, "discard": node|None}
# ---------------------------------------------------------------------------


def _check_scripted_move(board: ScriptBoard, move, ctx):
    sig = board.sig
    n = sig.n
    known = set(map(tuple, sig.colours()))
    if move["kind"] == "open":
        if board.nodes:
            raise UsageError(f"open move on a non-empty board: "
                             f"{board.describe()}")
        return
    if move["kind"] != "cyl":
        raise UsageError(f"unknown move kind {move['kind']!r}")
    face = move["face"]
    if len(face) != n - 1 or len(set(face)) != n - 1:
        raise UsageError(f"bad face {face} at {board.describe()}")
    for u in face:
        if u not in board.nodes:
            raise UsageError(f"face node {u} absent at {board.describe()}")
    if move.get("discard") is not None:
        d = move["discard"]
        if ctx["variant"] != "Fm":
            raise UsageError("discard moves only exist in the Fm variant")
        if d in face or d not in board.nodes:
            raise UsageError(f"bad discard {d} at {board.describe()}")
    for u, c in move["edges"].items():
        if u not in face or tuple(c) not in known:
            raise UsageError(f"bad demanded edge {u}:{c} at "
                             f"{board.describe()}")
    if set(move["edges"]) != set(face):
        raise UsageError("demand must label every face edge")
    # the demanded atom must itself be consistent with the face's edges
    probe = board.clone()
    if move.get("discard") is not None:
        probe = _without_node(probe, move["discard"])
    z = _fresh_node(probe, ctx["m"])
    if z is None:
        return  # no room: the demand stands, exists may still point at a node
    for u in face:
        probe.edges[frozenset((u, z))] = move["edges"][u]
    for sub, shade in move.get("yellows", {}).items():
        probe.yellows[frozenset(sub)] = (SHADE, frozenset(shade))
    for u, v in itertools.combinations(face, 2):
        if probe.colour(u, v) is None:
            continue
        x, y, w = sorted((u, v, z))
        if not consistent_triangle(
            board.sig, probe.colour(x, y), probe.colour(x, w),
            probe.colour(y, w),
        ):
            raise UsageError(
                f"scripted demand is inconsistent on its own face at "
                f"{board.describe()}"
            )


def _fresh_node(board: ScriptBoard, m: int):
    free = set(range(m)) - set(board.nodes)
    return min(free) if free else None


def _without_node(board: ScriptBoard, d) -> ScriptBoard:
    return ScriptBoard(
        board.sig,
        tuple(u for u in board.nodes if u != d),
        {e: c for e, c in board.edges.items() if d not in e},
        {s: y for s, y in board.yellows.items() if d not in s},
        board.round,
    )


def exists_replies(board: ScriptBoard, move, ctx):
    """All boards the exists player may legally produce."""
    sig = board.sig
    n = sig.n
    if move["kind"] == "open":
        b = ScriptBoard(sig, round=board.round + 1)
        ns = sorted({u for e in move["edges"] for u in e})
        b.nodes = tuple(ns)
        for (u, v), c in move["edges"].items():
            b.edges[frozenset((u, v))] = tuple(c)
        for sub, shade in move.get("yellows", {}).items():
            b.yellows[frozenset(sub)] = (SHADE, frozenset(shade))
        return [b] if board_legal(b) else []

    replies = []
    base = board
    if move.get("discard") is not None:
        base = _without_node(board, move["discard"])
    face = move["face"]
    demanded_y = {
        frozenset(sub): frozenset(shade)
        for sub, shade in move.get("yellows", {}).items()
    }

    # option 1: point at an existing node that already realizes the demand
    for u in base.nodes:
        if u in face:
            continue
        if any(base.colour(f, u) != tuple(move["edges"][f]) for f in face):
            continue
        ok = True
        commits = {}
        for sub, shade in demanded_y.items():
            here = frozenset(u if w == "z" else w for w in sub)
            # demanded subsets name the fresh node as "z"
            ent = base.yellows.get(here)
            if ent is None:
                ok = False
                break
            kind, val = ent
            if kind == SHADE:
                if val != shade:
                    ok = False
                    break
            else:
                if not val <= shade:
                    ok = False
                    break
                commits[here] = (SHADE, shade)
        if ok:
            b = base.clone()
            b.yellows.update(commits)
            b.round = board.round + 1
            replies.append(b)

    # option 2: a fresh node with exists-chosen edges to the rest
    z = _fresh_node(base, ctx["m"])
    if z is not None:
        others = [u for u in base.nodes if u not in face]
        palette = [tuple(c) for c in sig.directed_colours()]
        for choice in itertools.product(palette, repeat=len(others)):
            b = base.clone()
            b.nodes = tuple(sorted(base.nodes + (z,)))
            b.round = board.round + 1
            for f in face:
                b.edges[frozenset((f, z))] = tuple(move["edges"][f])
            for u, c in zip(others, choice):
                b.edges[frozenset((u, z))] = c
            for sub, shade in demanded_y.items():
                here = frozenset(z if w == "z" else w for w in sub)
                b.yellows[here] = (SHADE, shade)
            # remaining (n-1)-subsets through z: hers, lazily
            for sub in itertools.combinations(b.nodes, n - 1):
                fs = frozenset(sub)
                if z in fs and fs not in b.yellows:
                    b.yellows[fs] = (LAZY, frozenset())
            if board_legal(b):
                replies.append(b)
    return replies


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


@dataclass
class ForallWinsWithin:
    depth: int
    stats: dict = field(default_factory=dict)

    def summary(self):
        return f"ForallWinsWithin({self.depth})"


@dataclass
class RefutedAt:
    board: ScriptBoard
    depth: int

    def summary(self):
        return f"RefutedAt(depth={self.depth}; {self.board.describe()})"


def verify_script(
    sig: RainbowSignature,
    script,
    variant: str = "Fm",
    m: Optional[int] = None,
    depth_budget: int = 12,
    k: Optional[int] = None,
):
    """Exhaustively explores every exists-player line against the
    scripted forall moves.  Returns ForallWinsWithin(d) when all lines
    die by round d <= the budget, RefutedAt(board) otherwise.

    variant "Fm": discard moves allowed, rounds capped by depth_budget.
    variant "Gmk": no discards, rounds capped by k (and depth_budget).
    """
    if variant not in ("Fm", "Gmk"):
        raise UsageError(f"unknown script variant {variant!r}")
    m = m if m is not None else sig.n + 3
    rounds = depth_budget if k is None else min(depth_budget, k)
    ctx = {"variant": variant, "m": m}
    stats = {"positions": 0, "max_depth": 0}

    def explore(board, depth):
        """Deepest round reached on any line, or a RefutedAt."""
        stats["positions"] += 1
        stats["max_depth"] = max(stats["max_depth"], depth)
        if depth >= rounds:
            return RefutedAt(board, depth)
        ctx["round"] = depth
        move = script(board, ctx)
        if move is None:
            return RefutedAt(board, depth)
        _check_scripted_move(board, move, ctx)
        replies = exists_replies(board, move, ctx)
        if not replies:
            return depth + 1
        worst = 0
        for r in replies:
            sub = explore(r, depth + 1)
            if isinstance(sub, RefutedAt):
                return sub
            worst = max(worst, sub)
        return worst

    out = explore(ScriptBoard(sig), 0)
    if isinstance(out, RefutedAt):
        return out
    return ForallWinsWithin(out, stats)


# ---------------------------------------------------------------------------
# the cone script
# ---------------------------------------------------------------------------


def cone_script(sig: RainbowSignature):
    """Forall's cone-bombardment strategy: open with a cone on the fixed
    base, then keep demanding new cones on that base with tints the board
    does not currently carry; ordered signatures descend through the
    tints, others ascend.  When the board is full in the Fm variant an
    apex is discarded and its tint recycled."""
    if len(sig.green_supers) < 2:
        raise UsageError("cone script needs at least 2 green superscripts")
    n = sig.n
    if sig.order_rule is not None:
        tint_order = sorted(sig.green_supers, reverse=True)
    else:
        tint_order = sorted(sig.green_supers)
    base_nodes = tuple(range(n - 1))
    full = sig.full_shade()

    def base_edge_colours():
        return {
            (i, j): ("w", i) for i, j in itertools.combinations(base_nodes, 2)
        }

    def board_tints(board):
        return {
            tint
            for base, apex, tint in board_cones(board)
            if base == frozenset(base_nodes)
        }

    def apexes(board):
        return [
            apex
            for base, apex, tint in board_cones(board)
            if base == frozenset(base_nodes)
        ]

    def script(board: ScriptBoard, ctx):
        if not board.nodes:
            apex = n - 1
            edges = dict(base_edge_colours())
            edges[(0, apex)] = ("g0", tint_order[0])
            for j in range(1, n - 1):
                edges[(j, apex)] = ("g", j)
            yellows = {
                sub: full
                for sub in itertools.combinations(range(n), n - 1)
            }
            return {"kind": "open", "edges": edges, "yellows": yellows}

        used = board_tints(board)
        avail = [t for t in tint_order if t not in used]
        discard = None
        if not avail:
            if ctx["variant"] != "Fm":
                return None
            victims = apexes(board)
            if not victims:
                return None
            discard = min(victims)
            c0 = board.colour(0, discard)
            avail = [c0[1]]
        elif (
            ctx["variant"] == "Fm"
            and _fresh_node(board, ctx["m"]) is None
        ):
            victims = apexes(board)
            if not victims:
                return None
            discard = min(victims)

        tint = avail[0]
        edges = {0: ("g0", tint)}
        for j in range(1, n - 1):
            edges[j] = ("g", j)
        yellows = {
            tuple(sorted(set(base_nodes) - {f} | {"z"}, key=str)): full
            for f in base_nodes
        }
        return {
            "kind": "cyl",
            "face": base_nodes,
            "edges": edges,
            "yellows": yellows,
            "discard": discard,
        }

    return script
