"""Rainbow signatures, coloured graphs, triangle/cone consistency.

Colours are plain tuples:

    ("g", i)          plain green, 1 <= i < n-1
    ("g0", t)         superscripted green with tint t
    ("w", i)          white, i <= n-2
    ("r", i, j)       pair-indexed red, i < j
    ("r", i, j, t)    pair-indexed red with blow-up superscript t
    ("rs", i)         single-indexed red

Yellow shades are frozensets S of green superscripts; the shade y_S may
label an (n-1)-subset of nodes, and every cone standing on that subset
must have its tint inside S.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .kernel import UsageError


def colour_name(c) -> str:
    tag = c[0]
    if tag == "g":
        return f"g{c[1]}"
    if tag == "g0":
        return f"g0^{c[1]}"
    if tag == "w":
        return f"w{c[1]}"
    if tag == "r" and len(c) == 3:
        return f"r{c[1]}{c[2]}"
    if tag == "r":
        return f"r{c[1]}{c[2]}^{c[3]}"
    if tag == "rs":
        return f"r{c[1]}"
    raise UsageError(f"not a colour: {c!r}")


def is_green(c) -> bool:
    return c[0] in ("g", "g0")


def is_red(c) -> bool:
    return c[0] in ("r", "rs")


def red_base(c):
    """A red colour with its blow-up superscript (if any) stripped."""
    if c[0] == "r" and len(c) == 4:
        return ("r", c[1], c[2])
    return c


def flip_red(c):
    """The same red seen from the other end of its edge."""
    if c[0] == "r" and len(c) == 3:
        return ("r", c[2], c[1])
    if c[0] == "r":
        return ("r", c[2], c[1], c[3])
    return c


@dataclass(frozen=True)
class RainbowSignature:
    dimension: int
    green_supers: tuple  # tints of the superscripted greens, sorted
    red_mode: str  # "pair" | "single"
    red_indices: tuple  # pair mode: the linear order R; single mode: index list
    red_supers: Optional[tuple] = None  # blow-up superscripts, pair mode only
    order_rule: Optional[tuple] = None  # (Z' tuple, N' tuple)
    preset: Optional[dict] = None

    def __post_init__(self):
        if self.dimension < 3:
            raise UsageError("rainbow signatures need dimension >= 3")
        if not self.green_supers:
            raise UsageError("at least one green superscript required")
        if self.red_mode not in ("pair", "single"):
            raise UsageError(f"bad red mode {self.red_mode!r}")

    @property
    def n(self) -> int:
        return self.dimension

    def plain_greens(self):
        return [("g", i) for i in range(1, self.n - 1)]

    def super_greens(self):
        return [("g0", t) for t in self.green_supers]

    def whites(self):
        return [("w", i) for i in range(self.n - 1)]

    def reds(self):
        if self.red_mode == "single":
            return [("rs", i) for i in self.red_indices]
        pairs = [
            (i, j) for i, j in itertools.combinations(self.red_indices, 2)
        ]
        if self.red_supers is None:
            return [("r", i, j) for i, j in pairs]
        return [("r", i, j, t) for i, j in pairs for t in self.red_supers]

    def colours(self):
        return (
            self.plain_greens() + self.super_greens() + self.whites() + self.reds()
        )

    def directed_colours(self):
        """The working edge palette.  Pair-indexed reds are directed (an
        edge u -> v labelled ("r", i, j) seen from v is ("r", j, i)), so
        both orientations appear; every other colour is symmetric."""
        out = list(self.colours())
        for c in self.reds():
            if c[0] == "r":
                out.append(flip_red(c))
        return out

    def yellow_shade_count(self) -> int:
        return 2 ** len(self.green_supers)

    def full_shade(self) -> frozenset:
        return frozenset(self.green_supers)

    def describe(self) -> dict:
        return {
            "dimension": self.dimension,
            "plain_greens": len(self.plain_greens()),
            "super_greens": len(self.green_supers),
            "whites": len(self.whites()),
            "reds": len(self.reds()),
            "yellow_shades": self.yellow_shade_count(),
            "red_mode": self.red_mode,
            "order_rule": self.order_rule is not None,
            "preset": self.preset,
        }


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------


def finite_rainbow(n: int, greens: int, reds: int) -> RainbowSignature:
    """The finite rainbow signature with `greens` tints and linear order
    R = {0..reds-1}; greens = reds+... the tints run 1..greens."""
    _positive(n=n, greens=greens, reds=reds)
    return RainbowSignature(
        dimension=n,
        green_supers=tuple(range(1, greens + 1)),
        red_mode="pair",
        red_indices=tuple(range(reds)),
        preset={"kind": "finiteRainbow", "n": n, "greens": greens, "reds": reds},
    )


def blown_rainbow(n: int, greens: int, reds: int, T: int) -> RainbowSignature:
    """Same as finite_rainbow but every red is split into T superscripted
    copies (finite truncation of an unbounded family of copies)."""
    _positive(n=n, greens=greens, reds=reds, T=T)
    return RainbowSignature(
        dimension=n,
        green_supers=tuple(range(1, greens + 1)),
        red_mode="pair",
        red_indices=tuple(range(reds)),
        red_supers=tuple(range(T)),
        preset={
            "kind": "blownRainbow", "n": n, "greens": greens, "reds": reds,
            "T": T, "truncation": "red superscripts truncated to a finite set",
        },
    )


def ordered_zn(n: int, z_trunc: int, n_trunc: int) -> RainbowSignature:
    """Green tints from the integer interval [-z, z], reds over [0, N),
    with the order-preserving green/red restriction switched on.  Both
    index sets are finite truncations."""
    _positive(n=n, z_trunc=z_trunc, n_trunc=n_trunc)
    supers = tuple(range(-z_trunc, z_trunc + 1))
    return RainbowSignature(
        dimension=n,
        green_supers=supers,
        red_mode="pair",
        red_indices=tuple(range(n_trunc)),
        order_rule=(supers, tuple(range(n_trunc))),
        preset={
            "kind": "orderedZN", "n": n, "zTrunc": z_trunc, "nTrunc": n_trunc,
            "truncation": "integer/natural index sets truncated to intervals",
        },
    )


def single_reds(n: int, greens: int, lam: int) -> RainbowSignature:
    """Single-indexed reds r_0..r_{lam-1}; a red triangle is consistent
    iff its three indices are pairwise distinct."""
    _positive(n=n, greens=greens, lam=lam)
    return RainbowSignature(
        dimension=n,
        green_supers=tuple(range(1, greens + 1)),
        red_mode="single",
        red_indices=tuple(range(lam)),
        preset={"kind": "singleReds", "n": n, "greens": greens, "lambda": lam},
    )


def build_signature(preset: str, **params) -> RainbowSignature:
    builders = {
        "finiteRainbow": finite_rainbow,
        "blownRainbow": blown_rainbow,
        "orderedZN": ordered_zn,
        "singleReds": single_reds,
    }
    if preset not in builders:
        raise UsageError(f"unknown signature preset {preset!r}")
    return builders[preset](**params)


def _positive(**kwargs):
    for name, v in kwargs.items():
        if v < 1:
            raise UsageError(f"parameter {name} must be >= 1, got {v}")
    if "n" in kwargs and kwargs["n"] < 3:
        raise UsageError("n must be >= 3")


# ---------------------------------------------------------------------------
# triangle consistency
# ---------------------------------------------------------------------------


def consistent_triangle(sig: RainbowSignature, c_xy, c_xz, c_yz) -> bool:
    """Whether the three edges may form a triangle on nodes x < y < z,
    with colours given positionally: (x,y), (x,z), (y,z) as seen from the
    lower node (directed reds).

    Forbidden: all-green triples; (g_i, g_i, w_i); (g_0^j, g_0^k, w_0);
    red triples unless the edges carry a single value assignment to the
    nodes -- c_xy = r(a,b), c_xz = r(a,c), c_yz = r(b,c) for pairwise
    distinct a, b, c (blow-up superscripts unconstrained) -- or, in
    single mode, three pairwise distinct indices; and, when the order
    rule is active, a red whose endpoint indices cannot be matched
    order-preservingly against the green superscripts pointing at those
    endpoints.  Symmetric rules ignore the positions.
    """
    cs = (c_xy, c_xz, c_yz)
    known = set(map(tuple, sig.directed_colours()))
    for c in cs:
        if tuple(c) not in known:
            raise UsageError(f"colour {c!r} not in signature")

    greens = [c for c in cs if is_green(c)]
    reds = [c for c in cs if is_red(c)]
    whites = [c for c in cs if c[0] == "w"]

    if len(greens) == 3:
        return False
    plain = [c for c in cs if c[0] == "g"]
    for i in range(1, sig.n - 1):
        if plain.count(("g", i)) == 2 and ("w", i) in whites:
            return False
    supers = [c for c in cs if c[0] == "g0"]
    if len(supers) == 2 and ("w", 0) in whites:
        return False

    if len(reds) == 3:
        if sig.red_mode == "single":
            if len({c[1] for c in reds}) != 3:
                return False
        else:
            rxy, rxz, ryz = map(red_base, cs)
            # one value per node, read off edge endpoints
            vx, vy = rxy[1], rxy[2]
            vz = rxz[2]
            if rxz[1] != vx or ryz[1] != vy or ryz[2] != vz:
                return False
            if len({vx, vy, vz}) != 3:
                return False

    if sig.order_rule is not None and len(supers) == 2 and len(reds) == 1:
        red = red_base(reds[0])
        if red[0] == "r":
            # the red joins the two nodes not shared by the green edges;
            # its first index sits at the lower of those nodes
            pos = next(i for i, c in enumerate(cs) if is_red(c))
            if pos == 2:
                t_lo, t_hi = c_xy[1], c_xz[1]  # tints at y, z
            elif pos == 1:
                t_lo, t_hi = c_xy[1], c_yz[1]  # tints at x, z
            else:
                t_lo, t_hi = c_xz[1], c_yz[1]  # tints at x, y
            if not _order_preserving(
                {(t_lo, red[1]), (t_hi, red[2])}
            ):
                return False
    return True


def _order_preserving(pairs) -> bool:
    """Is the given set of (source, target) pairs an order-preserving
    partial function?"""
    as_map = {}
    for s, t in pairs:
        if s in as_map and as_map[s] != t:
            return False
        as_map[s] = t
    items = sorted(as_map.items())
    for (s1, t1), (s2, t2) in zip(items, items[1:]):
        if s1 < s2 and not t1 < t2:
            return False
    return True


# ---------------------------------------------------------------------------
# coloured graphs
# ---------------------------------------------------------------------------


@dataclass
class ColouredGraph:
    """Edge-coloured complete graph with optional yellow hyperlabels.

    ``edges`` maps frozenset({u, v}) to a colour; ``yellows`` maps
    frozenset (an (n-1)-subset of nodes) to a shade (frozenset of tints).
    """

    sig: RainbowSignature
    nodes: tuple
    edges: dict = field(default_factory=dict)
    yellows: dict = field(default_factory=dict)

    def colour(self, u, v):
        return self.edges.get(frozenset((u, v)))

    def with_node(self, z, new_edges, new_yellows=None):
        edges = dict(self.edges)
        edges.update(new_edges)
        yellows = dict(self.yellows)
        if new_yellows:
            yellows.update(new_yellows)
        return ColouredGraph(self.sig, self.nodes + (z,), edges, yellows)

    def without_node(self, z):
        edges = {e: c for e, c in self.edges.items() if z not in e}
        yellows = {s: y for s, y in self.yellows.items() if z not in s}
        return ColouredGraph(
            self.sig, tuple(u for u in self.nodes if u != z), edges, yellows
        )

    def triangles(self):
        """(x, y, z) with x < y < z and the colours of (x,y), (x,z),
        (y,z).  Edge colours are stored as seen from the lower node."""
        for tri in itertools.combinations(sorted(self.nodes), 3):
            cols = [self.colour(u, v) for u, v in itertools.combinations(tri, 2)]
            if all(c is not None for c in cols):
                yield tri, cols


def detect_cones(g: ColouredGraph):
    """All cones in g: (base tuple, apex, tint).

    A cone is n nodes where the apex sees base_0 through g_0^tint and
    base_j through g_j (1 <= j <= n-2), and no other edge among the cone's
    nodes is green.
    """
    n = g.sig.n
    cones = []
    for apex in g.nodes:
        others = [u for u in g.nodes if u != apex]
        for base in itertools.permutations(others, n - 1):
            c0 = g.colour(base[0], apex)
            if c0 is None or c0[0] != "g0":
                continue
            if any(g.colour(base[j], apex) != ("g", j) for j in range(1, n - 1)):
                continue
            base_edges = [
                g.colour(u, v) for u, v in itertools.combinations(base, 2)
            ]
            if any(c is None or is_green(c) for c in base_edges):
                continue
            cones.append((base, apex, c0[1]))
    return cones


def legal_coloured_graph(sig: RainbowSignature, g: ColouredGraph):
    """(ok, witness): every triangle consistent and every cone's tint lies
    in the yellow shade of its base (when that base subset is labelled)."""
    for tri, cols in g.triangles():
        if not consistent_triangle(sig, *cols):
            return False, ("triangle", tri, tuple(cols))
    for base, apex, tint in detect_cones(g):
        key = frozenset(base)
        if key in g.yellows and tint not in g.yellows[key]:
            return False, ("cone", base, apex, tint)
    return True, None


# ---------------------------------------------------------------------------
# canonical encoding
# ---------------------------------------------------------------------------


def _colour_key(c):
    return (c[0],) + tuple((isinstance(v, int), v) for v in c[1:])


def _shade_key(s):
    return tuple(sorted(s))


def _colour_from(g: ColouredGraph, v, u):
    # edge colour of {v, u} as read from v's end; stored orientation is
    # low node -> high node, so reads from the high end flip reds
    c = g.colour(v, u)
    if c is not None and v > u:
        c = flip_red(c)
    return c


def canonical_graph(g: ColouredGraph):
    """Encoding invariant under renaming of nodes.

    Nodes are first partitioned by an iterated neighbourhood-colour
    refinement; the minimum encoding over all refinement-respecting
    orderings is returned.
    """
    nodes = list(g.nodes)
    k = len(nodes)
    if k == 0:
        return ("graph", 0, (), ())

    colours = {v: (0,) for v in nodes}
    for _ in range(k):
        new = {}
        for v in nodes:
            seen = sorted(
                (_colour_key(_colour_from(g, v, u)) if g.colour(v, u)
                 else ("none",), colours[u])
                for u in nodes if u != v
            )
            ys = sorted(
                _shade_key(s) for sub, s in g.yellows.items() if v in sub
            )
            new[v] = (colours[v], tuple(seen), tuple(ys))
        ranks = {c: i for i, c in enumerate(sorted(set(new.values())))}
        refined = {v: (ranks[new[v]],) for v in nodes}
        if len(set(refined.values())) == len(set(colours.values())):
            colours = refined
            break
        colours = refined

    groups = {}
    for v in nodes:
        groups.setdefault(colours[v], []).append(v)
    ordered_groups = [groups[c] for c in sorted(groups)]

    best = None
    for perm_parts in itertools.product(
        *[itertools.permutations(grp) for grp in ordered_groups]
    ):
        order = [v for part in perm_parts for v in part]
        rename = {v: i for i, v in enumerate(order)}
        enc_edges = []
        for e, c in g.edges.items():
            u, v = sorted(e)  # colour is oriented u -> v
            ru, rv = rename[u], rename[v]
            if ru > rv:
                ru, rv, c = rv, ru, flip_red(c)
            enc_edges.append((ru, rv, _colour_key(c)))
        enc_edges = tuple(sorted(enc_edges))
        enc_yellows = tuple(sorted(
            (tuple(sorted(rename[v] for v in sub)), _shade_key(s))
            for sub, s in g.yellows.items()
        ))
        enc = ("graph", k, enc_edges, enc_yellows)
        if best is None or enc < best:
            best = enc
    return best


def to_dot(g: ColouredGraph, name="coloured_graph") -> str:
    lines = [f"graph {name} {{"]
    for v in g.nodes:
        lines.append(f'  n{v} [label="{v}"];')
    for e, c in sorted(g.edges.items(), key=lambda t: sorted(t[0])):
        u, v = sorted(e)
        lines.append(f'  n{u} -- n{v} [label="{colour_name(c)}"];')
    for sub, s in sorted(g.yellows.items(), key=lambda t: sorted(t[0])):
        label = "y{" + ",".join(str(t) for t in sorted(s)) + "}"
        lines.append(
            f'  // yellow {sorted(sub)} -> {label}'
        )
    lines.append("}")
    return "\n".join(lines)
