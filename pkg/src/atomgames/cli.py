"""Command-line surface: generation, solving, checking, representation
search and scenario runs.

Exit codes: 0 ok, 1 outcome mismatch, 2 resource exhaustion, 64 usage
error.  Reports avoid wall-clock content so identical invocations give
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources

from .kernel import (
    ResourceBudgetError,
    UsageError,
    check_axioms,
    full_powerset_structure,
)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_RESOURCE = 2
EXIT_USAGE = 64


def _emit(report: dict, lines: list, args) -> None:
    if args.format == "machine":
        text = json.dumps(report, indent=1, sort_keys=True) + "\n"
    else:
        text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_carrier(args):
    if getattr(args, "powerset", None):
        base, n = args.powerset
        return full_powerset_structure(base, n)
    if getattr(args, "infile", None):
        from .interchange import load_structure

        return load_structure(args.infile)
    raise UsageError("no input structure: use --in or --powerset")


def _build_signature_from_args(args):
    from .rainbow import build_signature

    preset = args.preset
    params = {"n": args.n}
    if preset in ("finiteRainbow", "blownRainbow"):
        params.update(greens=args.greens, reds=args.reds)
    if preset == "blownRainbow":
        params.update(T=args.T)
    if preset == "orderedZN":
        params.update(z_trunc=args.z_trunc, n_trunc=args.n_trunc)
    if preset == "singleReds":
        params.update(greens=args.greens, lam=args.lam)
    return build_signature(preset, **params)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_gen(args) -> int:
    if args.what == "rainbow":
        from .rainbow_enum import enumerate_rainbow_atoms

        sig = _build_signature_from_args(args)
        struct = enumerate_rainbow_atoms(sig, max_atoms=args.budget_states)
        report = {
            "signature": sig.describe(),
            "atoms": struct.n_atoms,
        }
        lines = [f"rainbow atoms: {struct.n_atoms}",
                 f"signature: {sig.describe()}"]
        if args.dot:
            from .rainbow import to_dot

            tab = struct.provenance["table"]
            lines.append(to_dot(tab.as_graph(0)))
        _maybe_dump(struct, args, report, lines)
        _emit(report, lines, args)
        return EXIT_OK

    if args.what == "monk":
        from .monk import (
            chromatic_number,
            graph_to_dot,
            load_edge_list,
            make_monk_graph,
            monk_atom_structure,
        )

        if args.edges:
            with open(args.edges) as fh:
                g = load_edge_list(fh.read())
        elif args.family == "interval":
            g = make_monk_graph("interval", N=args.N, size=args.size)
        else:
            g = make_monk_graph("cliqueUnion", N=args.N, count=args.count)
        chi = chromatic_number(g)
        struct = monk_atom_structure(g, args.n)
        report = {
            "vertices": len(g.vertices),
            "edges": len(g.edges),
            "chromatic": chi if isinstance(chi, int) else vars(chi),
            "atoms": struct.n_atoms,
        }
        lines = [
            f"graph: {len(g.vertices)} vertices, {len(g.edges)} edges",
            f"chromatic number: {chi}",
            f"atoms: {struct.n_atoms}",
        ]
        if args.dot:
            lines.append(graph_to_dot(g))
        _maybe_dump(struct, args, report, lines)
        _emit(report, lines, args)
        return EXIT_OK

    if args.what == "bin":
        from .maddux import bin_atom_structure, kappa, psi

        struct = bin_atom_structure(args.n, args.r, max_atoms=args.budget_states)
        report = {
            "n": args.n, "r": args.r,
            "psi": psi(args.n, args.r),
            "kappa": kappa((args.n - 1) * args.r, (args.n - 1) * args.r),
            "atoms": struct.n_atoms,
        }
        lines = [f"psi({args.n},{args.r}) = {report['psi']}",
                 f"atoms: {struct.n_atoms}"]
        _maybe_dump(struct, args, report, lines)
        _emit(report, lines, args)
        return EXIT_OK

    if args.what == "blowup":
        from .blowup import blow_up, save_blowup_map, theta_embed
        from .rainbow import finite_rainbow

        sig = finite_rainbow(args.n, args.greens, args.reds)
        _, bm = blow_up(
            sig, args.T, max_atoms=args.budget_states, build_structure=False
        )
        _, rep = theta_embed(bm, seed=args.seed)
        report = {
            "sourceAtoms": bm.source.n_atoms,
            "targetAtoms": bm.target.n_atoms,
            "T": args.T,
            "ok": rep.ok,
            "entries": [[n, p] for n, p, _ in rep.entries],
            "notices": rep.notices,
        }
        lines = [rep.summary()]
        if args.out and args.format == "machine":
            pass  # report goes to --out below
        elif args.out:
            save_blowup_map(bm, args.out)
            lines.append(f"blow-up map written to {args.out}")
            _emit(report, lines, argparse.Namespace(
                format="text", out=None))
            return EXIT_OK if rep.ok else EXIT_MISMATCH
        _emit(report, lines, args)
        return EXIT_OK if rep.ok else EXIT_MISMATCH

    raise UsageError(f"unknown gen target {args.what!r}")


def _maybe_dump(struct, args, report, lines):
    if not args.out or args.format == "machine":
        return
    from .interchange import dump_structure

    dump_structure(struct, args.out)
    lines.append(f"structure written to {args.out}")
    report["outFile"] = args.out
    args.out = None  # the text report goes to stdout


def cmd_solve(args) -> int:
    from .games import EFStruct, solve_game

    spec = {"variant": args.variant}
    if args.variant == "EF":
        def mk(desc):
            kind, size = desc.split(":")
            if kind == "K":
                return EFStruct.complete_graph(int(size))
            if kind == "L":
                return EFStruct.linear_order(0, int(size))
            raise UsageError(f"unknown EF structure {desc!r} (use K:n or L:n)")

        spec.update(p=args.pebbles, r=args.rounds,
                    A=mk(args.ef_a), B=mk(args.ef_b))
    else:
        ca = _load_carrier(args)
        spec["carrier"] = ca
        if args.m is not None:
            spec["m"] = args.m
        if args.variant in ("Gmk", "Hmk", "Gca"):
            spec["k"] = args.k
        if args.variant in ("Fm", "Hmk", "Gca"):
            spec["budgetStates"] = args.budget_states
    result = solve_game(spec)
    report = {"variant": args.variant, "winner": result.winner,
              "stats": result.stats}
    lines = [result.summary()]
    _emit(report, lines, args)
    if result.winner == "Unknown":
        return EXIT_RESOURCE
    return EXIT_OK


def cmd_check(args) -> int:
    if args.what == "axioms":
        struct = _load_carrier(args)
        rep = check_axioms(struct, seed=args.seed)
        report = {
            "ok": rep.ok,
            "mode": rep.mode,
            "entries": [[e.name, e.level, e.passed] for e in rep.entries],
        }
        _emit(report, [rep.summary()], args)
        return EXIT_OK if rep.ok else EXIT_MISMATCH

    if args.what == "basis":
        from .matrices import check_cylindric_basis, enumerate_basic_matrices

        ra = _load_carrier(args)
        ms = enumerate_basic_matrices(ra, args.m, search_cap=args.budget_states)
        rep = check_cylindric_basis(ms, ra, args.m)
        report = {"matrices": len(ms), "isBasis": rep.is_basis}
        _emit(report, [f"matrices: {len(ms)}", rep.summary()], args)
        return EXIT_OK if rep.is_basis else EXIT_MISMATCH

    if args.what == "network":
        from .games import Network, check_network

        with open(args.network) as fh:
            nd = json.load(fh)
        ca = _load_carrier(args)
        names = {}
        label_fn = ca.labels or str
        for a in range(ca.n_atoms):
            names[str(label_fn(a))] = a
        nodes = tuple(nd["nodes"])
        labels = {}
        for key, name in nd["labels"].items():
            x = tuple(int(t) for t in key.split(","))
            if name not in names:
                raise UsageError(f"network label {name!r} is not an atom")
            labels[x] = names[name]
        net = Network(ca, nodes, labels)
        ok, why = check_network(net)
        report = {"ok": ok, "violation": why}
        _emit(report, [f"network ok: {ok}" + (f" ({why})" if why else "")],
              args)
        return EXIT_OK if ok else EXIT_MISMATCH

    raise UsageError(f"unknown check target {args.what!r}")


def cmd_rep_search(args) -> int:
    from .oracle import NoneWithinBudget, search_representation

    ca = _load_carrier(args)
    r = search_representation(
        ca, max_base=args.max_base, time_budget=args.budget_states,
        seed=args.seed,
    )
    if isinstance(r, NoneWithinBudget):
        report = {"found": False, "explored": r.explored,
                  "maxBase": r.max_base}
        _emit(report, [r.summary()], args)
        return EXIT_RESOURCE
    report = {"found": True, "representation": r.as_dict()}
    _emit(report, [f"found representation on base {r.base_size}"], args)
    return EXIT_OK


def _scenario_path(name_or_path: str):
    import os

    if os.path.exists(name_or_path):
        return name_or_path
    ref = resources.files("atomgames").joinpath(
        "scenarios", name_or_path + ".json"
    )
    if ref.is_file():
        return ref
    raise UsageError(f"unknown scenario {name_or_path!r}")


def cmd_run(args) -> int:
    path = _scenario_path(args.scenario)
    with open(path) as fh:
        sc = json.load(fh)
    report = {"name": sc.get("name"), "checks": []}
    lines = [f"scenario: {sc.get('name')}"]
    ok = True
    for chk in sc.get("checks", []):
        kind = chk.get("kind")
        if kind == "script":
            from .rainbow import build_signature
            from .scripts import ForallWinsWithin, cone_script, verify_script

            params = dict(sc["construction"])
            sig = build_signature(params.pop("preset"), **params)
            if chk.get("script", "cone") != "cone":
                raise UsageError(f"unknown script {chk.get('script')!r}")
            out = verify_script(
                sig, cone_script(sig),
                variant=chk.get("variant", "Fm"),
                m=chk.get("m"),
                depth_budget=chk.get("depthBudget", args.budget_depth),
                k=chk.get("k"),
            )
            outcome = (
                "ForallWinsWithin" if isinstance(out, ForallWinsWithin)
                else "RefutedAt"
            )
            entry = {"kind": kind, "outcome": outcome, "summary": out.summary()}
            expected = chk.get("expect")
            if expected is not None and expected != outcome:
                entry["expected"] = expected
                ok = False
            report["checks"].append(entry)
            lines.append(f"  script[{chk.get('variant', 'Fm')}]: "
                         f"{out.summary()}"
                         + ("" if expected in (None, outcome)
                            else f"  EXPECTED {expected}"))
        elif kind == "axioms":
            from .rainbow import build_signature
            from .rainbow_enum import enumerate_rainbow_atoms

            params = dict(sc["construction"])
            sig = build_signature(params.pop("preset"), **params)
            struct = enumerate_rainbow_atoms(sig)
            rep = check_axioms(struct, seed=args.seed)
            passed = rep.atom_level_ok if chk.get("level") == "atom" else rep.ok
            report["checks"].append({"kind": kind, "ok": passed})
            lines.append(f"  axioms: {'pass' if passed else 'FAIL'}")
            ok = ok and passed
        else:
            raise UsageError(f"unknown scenario check kind {kind!r}")
    report["ok"] = ok
    lines.append("result: " + ("ok" if ok else "MISMATCH"))
    _emit(report, lines, args)
    return EXIT_OK if ok else EXIT_MISMATCH


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------


def _common(p):
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.add_argument("--seed", type=int, default=20259)
    p.add_argument("--threads", type=int, default=1,
                   help="worker cap (solvers currently run sequentially)")
    p.add_argument("--budget-states", type=int, default=200_000)
    p.add_argument("--budget-depth", type=int, default=12)
    p.add_argument("--dot", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="atomgames",
        description="finite Boolean algebras with operators: generation, "
                    "games, embeddings, representation search",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a structure")
    g.add_argument("what", choices=("rainbow", "monk", "bin", "blowup"))
    g.add_argument("--preset", default="finiteRainbow",
                   choices=("finiteRainbow", "blownRainbow", "orderedZN",
                            "singleReds"))
    g.add_argument("--n", type=int, default=3)
    g.add_argument("--greens", type=int, default=2)
    g.add_argument("--reds", type=int, default=2)
    g.add_argument("--T", type=int, default=2)
    g.add_argument("--z-trunc", type=int, default=2)
    g.add_argument("--n-trunc", type=int, default=2)
    g.add_argument("--lam", type=int, default=2)
    g.add_argument("--family", choices=("interval", "cliqueUnion"),
                   default="cliqueUnion")
    g.add_argument("--N", type=int, default=3)
    g.add_argument("--size", type=int, default=7)
    g.add_argument("--count", type=int, default=2)
    g.add_argument("--edges", default=None,
                   help="edge list file (monk)")
    g.add_argument("--r", type=int, default=1)
    _common(g)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="solve a game")
    s.add_argument("variant", choices=("Gmk", "Fm", "Hmk", "Gca", "EF"))
    s.add_argument("--in", dest="infile", default=None)
    s.add_argument("--powerset", type=int, nargs=2, default=None,
                   metavar=("BASE", "DIM"))
    s.add_argument("--m", type=int, default=None)
    s.add_argument("--k", type=int, default=3)
    s.add_argument("--pebbles", type=int, default=3)
    s.add_argument("--rounds", type=int, default=4)
    s.add_argument("--ef-a", default="K:3")
    s.add_argument("--ef-b", default="K:2")
    _common(s)
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("check", help="check axioms, a basis, or a network")
    c.add_argument("what", choices=("axioms", "basis", "network"))
    c.add_argument("--in", dest="infile", default=None)
    c.add_argument("--powerset", type=int, nargs=2, default=None,
                   metavar=("BASE", "DIM"))
    c.add_argument("--m", type=int, default=3)
    c.add_argument("--network", default=None,
                   help="network file (nodes + labels)")
    _common(c)
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("rep-search", help="search for a representation")
    r.add_argument("--in", dest="infile", default=None)
    r.add_argument("--powerset", type=int, nargs=2, default=None,
                   metavar=("BASE", "DIM"))
    r.add_argument("--max-base", type=int, default=3)
    _common(r)
    r.set_defaults(func=cmd_rep_search)

    sc = sub.add_parser("run", help="run a scenario file or bundled name")
    sc.add_argument("scenario")
    _common(sc)
    sc.set_defaults(func=cmd_run)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceBudgetError as exc:
        print(f"resource exhausted: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except FileNotFoundError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
