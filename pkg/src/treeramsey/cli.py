"""Command-line front end.  Every verb prints one JSON document on stdout.

Exit codes: 0 computed, 1 negative or not-found result, 2 unknown (budget
ran out), 3 usage error.  ``TREERAMSEY_BUDGET`` and ``TREERAMSEY_SEED``
override the default budget and seed.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from . import trees
from .colouring import TwoColouring, make_construction, params_for, verify_avoids
from .errors import Infeasible, NotFound

EXIT_OK, EXIT_NEGATIVE, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 3
DEFAULT_BUDGET = 2_000_000
DEFAULT_SEED = 0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {raw!r}")


def _tree(name: str | None, path: str | None) -> trees.Tree:
    if path:
        with open(path) as fh:
            text = fh.read()
        try:
            return trees.Tree.from_json(text)
        except (ValueError, KeyError):
            return trees.Tree.from_text(text)
    if name is None:
        raise UsageError("a tree is required (--tree NAME or --tree-file PATH)")
    try:
        return trees.parse_named(name)
    except (ValueError, TypeError) as e:
        raise UsageError(str(e))


def _read_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _write(path: str | None, text: str) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# verbs; each returns (exit code, JSON-able dict)


def cmd_lower_bound(a):
    from .ramsey import lower_bound

    if a.tree or a.tree_file:
        T = _tree(a.tree, a.tree_file)
        S = _tree(a.other, a.other_file)
        pt, ps = trees.profile(T), trees.profile(S)
    else:
        if None in (a.t1, a.t2, a.s1, a.s2):
            raise UsageError("give --t1 --t2 --s1 --s2 or two trees")
        pt = trees.TreeProfile(a.t1 + a.t2, a.t1, a.t2, 0, 0)
        ps = trees.TreeProfile(a.s1 + a.s2, a.s1, a.s2, 0, 0)
    try:
        rbar = lower_bound(pt, ps)
    except ValueError as e:
        raise UsageError(str(e))
    return EXIT_OK, {"rbar": rbar, "t1": pt.t1, "t2": pt.t2, "s1": ps.t1, "s2": ps.t2}


def cmd_gen_tree(a):
    if a.random is not None:
        rng = random.Random(a.seed)
        T = trees.random_tree(a.random, rng)
    else:
        T = _tree(a.tree, a.tree_file)
    _write(a.dot, _tree_dot(T))
    return EXIT_OK, {"tree": T.to_json(), "profile": trees.profile(T).as_dict(),
                     "seed": a.seed if a.random is not None else None}


def _tree_dot(T: trees.Tree) -> str:
    lines = ["graph T {"] + [f"  {v};" for v in range(T.n)]
    lines += [f"  {u} -- {v};" for u, v in T.edges]
    return "\n".join(lines + ["}"]) + "\n"


def cmd_gen_construction(a):
    T = _tree(a.tree, a.tree_file)
    S = _tree(a.other, a.other_file) if (a.other or a.other_file) else None
    if a.kind.startswith("B") and S is None:
        raise UsageError("B constructions need --other")
    try:
        con = make_construction(params_for(a.kind, T, S))
    except ValueError as e:
        return EXIT_NEGATIVE, {"kind": a.kind, "error": str(e)}
    out = {"kind": a.kind, "N": con.N, "inside": con.inside,
           "parts": [list(p) for p in con.parts], "colouring": con.colouring.to_json()}
    if a.verify:
        out["budget"] = a.budget
        out["avoids"] = verify_avoids(con.colouring, T, S or T, a.budget).as_dict()
    _write(a.dot, con.colouring.to_dot())
    if a.figure:
        from .plotting import colouring_heatmap

        out["figure"] = colouring_heatmap(con.colouring, a.figure, f"{a.kind}, N={con.N}")
    return EXIT_OK, out


def cmd_check_arrows(a):
    from .embedding import decide_arrows

    col = TwoColouring.from_json(_read_json(a.colouring))
    T = _tree(a.tree, a.tree_file)
    S = _tree(a.other, a.other_file)
    v = decide_arrows(col, T, S, a.budget)
    out = dict(v.as_dict(), budget=a.budget, N=col.N)
    code = {"RedT": EXIT_OK, "BlueS": EXIT_OK, "Neither": EXIT_NEGATIVE}.get(v.kind, EXIT_UNKNOWN)
    _write(a.dot, col.to_dot())
    return code, out


def cmd_ramsey(a):
    from .ramsey import ramsey_exact

    T = _tree(a.tree, a.tree_file)
    S = _tree(a.other, a.other_file)
    res = ramsey_exact(T, S, a.nmax, a.budget, a.jobs)
    out = dict(res.as_dict(), budget=a.budget, nmax=a.nmax, jobs=a.jobs)
    if res.certificate is not None:
        _write(a.dot, res.certificate.colouring.to_dot())
    if a.figure:
        from .plotting import level_counts

        out["figure"] = level_counts(out["levels"], a.figure, "avoiding colourings")
    return (EXIT_OK if res.status == "exact" else EXIT_UNKNOWN), out


def _thm_out(cert: dict, a) -> tuple[int, dict]:
    if a.dot:
        _write(a.dot, TwoColouring.from_json(cert["colouring"]).to_dot())
    if a.figure:
        from .plotting import colouring_heatmap

        cert["figure"] = colouring_heatmap(TwoColouring.from_json(cert["colouring"]), a.figure)
    if cert["redT"] or cert["blueS"]:
        return EXIT_NEGATIVE, cert
    return EXIT_OK, cert


def cmd_verify_thm13(a):
    from .counterexamples import verify_thm13

    try:
        cert = verify_thm13(a.C, a.r, a.budget)
    except Infeasible as e:
        return EXIT_NEGATIVE, {"error": str(e), "C": a.C, "r": a.r}
    return _thm_out(cert, a)


def cmd_verify_thm14(a):
    from .counterexamples import verify_thm14

    try:
        cert = verify_thm14(a.C, a.rho, a.r, a.budget)
    except Infeasible as e:
        return EXIT_NEGATIVE, {"error": str(e), "C": a.C, "rho": a.rho, "r": a.r}
    return _thm_out(cert, a)


def cmd_weights(a):
    from .weights import Digraph, WeightProblem, abc_partition, check_duality, max_weight, qr_report

    try:
        alpha = Fraction(a.alpha)
    except ValueError:
        raise UsageError(f"bad alpha {a.alpha!r}")
    if a.digraph:
        g = Digraph.from_json(_read_json(a.digraph))
        p = WeightProblem(g, alpha)
        sol = max_weight(p)
        part = abc_partition(p, sol, strict=False)
        return EXIT_OK, {"digraph": g.to_json(), "alpha": str(alpha), "wMax": str(sol.wmax),
                         "f": sol.f_json(), "duality": check_duality(p, sol), "abc": part.as_dict()}
    if a.colouring:
        col = TwoColouring.from_json(_read_json(a.colouring))
        if a.vertex is None or not 0 <= a.vertex < col.N:
            raise UsageError("--vertex must name a vertex of the colouring")
        rep = qr_report(col, a.vertex, a.colour, alpha)
        return (EXIT_OK if rep.ok else EXIT_NEGATIVE), rep.as_dict()
    raise UsageError("give --digraph FILE or --colouring FILE --vertex V")


def cmd_decompose(a):
    T = _tree(a.tree, a.tree_file)
    try:
        if a.mode == "balanced":
            d = trees.decompose_balanced(T)
            out = {"part1": sorted(d.part1), "part2": sorted(d.part2), "shared": d.shared}
        elif a.mode == "skew":
            d = trees.decompose_bipartite_skew(T, Fraction(a.mu))
            out = {"part1": sorted(d.part1), "part2": sorted(d.part2), "shared": d.shared}
        else:
            c = trees.cut_with_small_boundary(T, Fraction(a.eps))
            out = {"setA": sorted(c.set_a), "setB": sorted(c.set_b), "boundary": sorted(c.boundary)}
    except NotFound as e:
        return EXIT_NEGATIVE, {"mode": a.mode, "notFound": str(e)}
    except ValueError as e:
        raise UsageError(str(e))
    out["mode"] = a.mode
    return EXIT_OK, out


def cmd_demo_thm62(a):
    from .counterexamples import demo_thm62

    rep = demo_thm62(a.n, Fraction(a.c), a.seed, a.trials, exhaustive_limit=a.budget)
    rep["budget"] = a.budget
    if a.figure:
        from .plotting import degree_histogram

        rep["figure"] = degree_histogram(rep, a.figure)
    return (EXIT_OK if rep["passed"] == a.trials else EXIT_NEGATIVE), rep


# ---------------------------------------------------------------------------


def _tree_args(p, other: bool = True, required: bool = False):
    p.add_argument("--tree", help="tree shorthand, e.g. path5, star3, caterpillar:4,2, thm13:1,2")
    p.add_argument("--tree-file", help="tree as JSON ({n, edges}) or text (n, then one edge per line)")
    if other:
        p.add_argument("--other", help="second tree shorthand")
        p.add_argument("--other-file", help="second tree from a file")


def build_parser() -> _Parser:
    budget = _env_int("TREERAMSEY_BUDGET", DEFAULT_BUDGET)
    seed = _env_int("TREERAMSEY_SEED", DEFAULT_SEED)
    top = _Parser(prog="treeramsey", description="Ramsey numbers of pairs of trees.")
    sub = top.add_subparsers(dest="verb", parser_class=_Parser)

    def verb(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(fn=fn)
        p.add_argument("--budget", type=int, default=budget, help=f"search budget (default {budget})")
        p.add_argument("--seed", type=int, default=seed)
        p.add_argument("--dot", help="write a DOT file of the main graph")
        p.add_argument("--figure", help="write a PNG figure (where supported)")
        return p

    p = verb("lower-bound", cmd_lower_bound, "four-construction lower bound")
    for k in ("t1", "t2", "s1", "s2"):
        p.add_argument(f"--{k}", type=int)
    _tree_args(p)

    p = verb("gen-tree", cmd_gen_tree, "named or random tree with its profile")
    _tree_args(p, other=False)
    p.add_argument("--random", type=int, metavar="N", help="uniform random labelled tree on N vertices")

    p = verb("gen-construction", cmd_gen_construction, "one of the A1..B4 colourings")
    p.add_argument("--kind", required=True, choices=["A1", "A2", "B1", "B2", "B3", "B4"])
    _tree_args(p)
    p.add_argument("--verify", action="store_true", help="also search for a red T and a blue S")

    p = verb("check-arrows", cmd_check_arrows, "does a colouring contain a red T or a blue S")
    p.add_argument("--colouring", required=True, help="colouring JSON file")
    _tree_args(p)

    p = verb("ramsey", cmd_ramsey, "exact Ramsey number by search")
    _tree_args(p)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)

    p = verb("verify-thm13", cmd_verify_thm13, "certify the clique-host family")
    p.add_argument("--C", type=int, required=True)
    p.add_argument("--r", type=int, required=True)

    p = verb("verify-thm14", cmd_verify_thm14, "certify the bipartite-host family")
    p.add_argument("--C", type=int, required=True)
    p.add_argument("--rho", type=int, required=True)
    p.add_argument("--r", type=int, required=True)

    p = verb("weights", cmd_weights, "maximum weight function and A/B/C classes")
    p.add_argument("--digraph", help="digraph JSON file ({n, arcs})")
    p.add_argument("--colouring", help="colouring JSON file; reports Q/R at --vertex")
    p.add_argument("--vertex", type=int)
    p.add_argument("--colour", default="red", choices=["red", "blue"])
    p.add_argument("--alpha", default="2")

    p = verb("decompose", cmd_decompose, "tree splitting lemmas")
    _tree_args(p, other=False)
    p.add_argument("--mode", default="balanced", choices=["balanced", "skew", "cut"])
    p.add_argument("--mu", default="1/10")
    p.add_argument("--eps", default="1/10")

    p = verb("demo-thm62", cmd_demo_thm62, "random dense colouring check")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", default="1")
    p.add_argument("--trials", type=int, default=5)
    return top


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        parser = build_parser()
        a = parser.parse_args(argv)
        if a.verb is None:
            raise UsageError("a verb is required")
        for k in ("budget", "nmax", "jobs", "trials", "n", "random", "C", "r", "rho"):
            v = getattr(a, k, None)
            if v is not None and v < (1 if k != "budget" else 0):
                raise UsageError(f"--{k} must be positive")
        code, doc = a.fn(a)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_USAGE
    json.dump(doc, out, sort_keys=True)
    out.write("\n")
    return code


def main() -> None:
    sys.exit(run())
