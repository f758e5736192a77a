"""Tree pairs whose Ramsey number beats the four-construction bound, with exact oracles.

Both families glue trees onto the leaves of a perfect ternary tree and use a
host made of two big parts ``U1``, ``U2`` plus a small part ``W``.  The
oracles decide red containment by enumerating which tree vertices land in
``W`` and then distributing the remaining components over ``U1`` and ``U2``.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .colouring import BLUE, RED, TwoColouring, block_colouring
from .embedding import contains_mono
from .errors import Infeasible
from .trees import (Tree, _components_without, glue_trees, make_caterpillar, make_perfect_ternary,
                    profile, ternary_levels)


@dataclass
class Family:
    T: Tree
    S: Tree
    G: TwoColouring
    parts: dict  # name -> range
    params: dict
    notes: dict = field(default_factory=dict)


def _rooted_piece(a: int, b: int) -> tuple[Tree, int]:
    """Tree on ``a + b`` vertices rooted in a class of size ``a``, low degree, root of minimum degree."""
    big, small = max(a, b), min(a, b)
    if small == 0:
        if big != 1:
            raise ValueError("a tree with an empty class must be a single vertex")
        return Tree(1, []), 0
    t = make_caterpillar(big, small)
    want = t.classes[0] if a >= b else t.classes[1]
    if a == b:
        want = t.classes[0]
    root = min(want, key=lambda v: (t.degree(v), v))
    return t, root


def _thm13_targets(C: int, r: int) -> tuple[int, int]:
    return (3 ** C + 1) * r, (3 ** C - 1) * r + (3 ** C - 1) // 2


def gen_thm13(C: int, r: int) -> Family:
    """Ternary tree with ``C+1`` levels and a ``2r``-vertex tree glued at each leaf.

    The glued pieces are chosen (as evenly as possible) so the bipartition
    classes come out as ``((3^C+1) r, (3^C-1) r + (3^C-1)/2)``.
    """
    if C < 1 or r < 1:
        raise ValueError("need C >= 1 and r >= 1")
    g = 2 * r
    base = make_perfect_ternary(C)
    leaves = ternary_levels(C)[-1]
    L = len(leaves)
    t1, t2 = _thm13_targets(C, r)
    tau1, tau2 = (3 ** C + 1) * r, 2 * r - (3 ** C - 1) // 2
    if tau2 < 1:
        raise Infeasible(f"second class of S would be {tau2} < 1 at C={C}, r={r}")
    # class of the ternary leaves gets (a_i - 1) per piece, the other class gets b_i = g - a_i
    side = base.sides
    leaf_side = side[leaves[0]]
    base_leafclass = sum(1 for v in range(base.n) if side[v] == leaf_side)
    base_other = base.n - base_leafclass
    choice = None
    for target_leafclass in (t1, t2):
        need = target_leafclass - base_leafclass  # = sum (a_i - 1)
        total_a = need + L
        if L <= total_a <= L * (g - 1):
            q, rem = divmod(total_a, L)
            a_list = [q + 1] * rem + [q] * (L - rem)
            if all(1 <= a <= g - 1 for a in a_list):
                other = base_other + sum(g - a for a in a_list)
                if {target_leafclass, other} == {t1, t2} or sorted((target_leafclass, other)) == sorted((t1, t2)):
                    pieces = [_rooted_piece(a, g - a) for a in a_list]
                    cand = glue_trees(base, leaves, pieces)
                    if choice is None or cand.max_degree() < choice[0].max_degree():
                        choice = (cand, a_list)
    if choice is None:
        raise Infeasible(f"no glued multiset realises profile ({t1}, {t2}) at C={C}, r={r}")
    T, a_list = choice
    pt = profile(T)
    assert (pt.t1, pt.t2) == (t1, t2), (pt, t1, t2)
    S = make_caterpillar(tau1, tau2)
    u = (3 ** C + 1) * r - 1
    G, parts = block_colouring([u, u, C], [RED, RED, BLUE],
                               {(0, 1): BLUE, (0, 2): RED, (1, 2): RED})
    return Family(T, S, G, {"U1": parts[0], "U2": parts[1], "W": parts[2]},
                  {"C": C, "r": r, "gluedSize": g},
                  {"rootClassCounts": a_list, "maxDegreeT": T.max_degree(), "maxDegreeS": S.max_degree(),
                   "degreeCap": 3 ** (C + 1)})


def gen_thm14(C: int, rho: int, r: int) -> Family:
    """Ternary tree with ``C+1`` levels and the same caterpillar ``(rho r, r)`` glued at each leaf."""
    if C < 2:
        raise ValueError("this family needs C >= 2")
    if rho < 2 or r < 1:
        raise ValueError("need rho >= 2 and r >= 1")
    piece = make_caterpillar(rho * r, r)
    big = piece.classes[0]
    root = min(big, key=lambda v: (piece.degree(v), v))
    base = make_perfect_ternary(C)
    leaves = ternary_levels(C)[-1]
    T = glue_trees(base, leaves, [(piece, root)] * len(leaves))
    n = T.n
    twice_nu = (3 ** C + 3) * rho * r + (3 ** C - 3) * r
    if twice_nu % 2:
        raise Infeasible("nu is not an integer")
    nu = twice_nu // 2
    tau1 = n - nu
    tau2 = n - 2 * tau1
    if tau2 < 1 or tau1 < tau2:
        raise Infeasible(f"derived profile (tau1, tau2) = ({tau1}, {tau2}) is degenerate")
    S = make_caterpillar(tau1, tau2)
    G, parts = block_colouring([nu - 1, nu - 1, C - 1], [BLUE, BLUE, BLUE],
                               {(0, 1): RED, (0, 2): RED, (1, 2): RED})
    vacuous = n > G.N
    return Family(T, S, G, {"U1": parts[0], "U2": parts[1], "W": parts[2]},
                  {"C": C, "rho": rho, "r": r},
                  {"nu": nu, "tau1": tau1, "tau2": tau2, "vacuous": vacuous,
                   "maxDegreeT": T.max_degree(), "maxDegreeS": S.max_degree()})


# ---------------------------------------------------------------------------
# oracles


def _independent_subsets(T: Tree, k: int):
    for size in range(k + 1):
        for Sset in itertools.combinations(range(T.n), size):
            if all(v not in T.adj[u] for u, v in itertools.combinations(Sset, 2)):
                yield set(Sset)


def _best_split(sizes: Sequence[int]) -> int:
    """Minimum over subsets of the larger of (subset sum, rest)."""
    total = sum(sizes)
    reach = 1
    for s in sizes:
        reach |= reach << s
    best = total
    for x in range(total + 1):
        if reach >> x & 1:
            best = min(best, max(x, total - x))
    return best


def min_u1_clique_host(T: Tree, w_size: int) -> int:
    """Smallest ``|U1| = |U2|`` for which ``T`` embeds in two cliques joined to an independent ``W``.

    The vertices sent to ``W`` form an independent set of size at most
    ``w_size``; each component of the rest sits wholly inside ``U1`` or ``U2``.
    """
    best = T.n
    for Sset in _independent_subsets(T, w_size):
        comps = _components_without(T, Sset)
        best = min(best, _best_split([len(c) for c in comps]))
    return best


def _best_orientation(pairs: Sequence[tuple[int, int]]) -> int:
    """Each component contributes ``(x, y)`` or ``(y, x)`` to the two sides; minimise the larger side."""
    total = sum(x + y for x, y in pairs)
    reach = 1
    for x, y in pairs:
        reach = (reach << x) | (reach << y)
    best = total
    for s in range(total + 1):
        if reach >> s & 1:
            best = min(best, max(s, total - s))
    return best


def min_u1_bipartite_host(T: Tree, w_size: int) -> int:
    """Smallest ``|U1| = |U2|`` for which ``T`` embeds in ``K_{U1,U2}`` joined to an independent ``W``."""
    side = T.sides
    best = T.n
    for Sset in _independent_subsets(T, w_size):
        comps = _components_without(T, Sset)
        pairs = []
        for c in comps:
            x = sum(1 for v in c if side[v] == 0)
            pairs.append((x, len(c) - x))
        best = min(best, _best_orientation(pairs))
    return best


def lemma51_bound(C: int, g: int) -> Fraction:
    return Fraction((3 ** C + 1) * g, 2)


def lemma52_bound(C: int, rho: int, r: int) -> Fraction:
    return Fraction((3 ** C + 3) * rho * r + (3 ** C - 3) * r, 2)


def _blue_components_report(G: TwoColouring, S: Tree) -> dict:
    from .embedding import _components, _two_colour

    comps = {}
    for m in set(_components(G.blue)):
        comps[m] = _two_colour(G.blue, m)
    out = []
    v1, v2 = S.classes
    blocked = True
    for m, bip in comps.items():
        size = m.bit_count()
        if size < S.n:
            out.append({"size": size, "reason": "too small"})
            continue
        if bip is not None:
            a, b = sorted((bip[0].bit_count(), bip[1].bit_count()), reverse=True)
            if len(v1) > a or len(v2) > b:
                out.append({"size": size, "classes": [a, b], "reason": "larger class of S does not fit"})
                continue
        blocked = False
        out.append({"size": size, "reason": "not excluded structurally"})
    return {"components": out, "blueSAbsent": blocked}


def _certificate(fam: Family, red_oracle_min: int, u1: int, budget: int | None, kind: str) -> dict:
    from .ramsey import lower_bound_trees

    G, T, S = fam.G, fam.T, fam.S
    red_absent = red_oracle_min > u1
    blue = _blue_components_report(G, S)
    exact_red = contains_mono(G, T, RED, budget=budget)
    exact_blue = contains_mono(G, S, BLUE, budget=budget)
    agree = True
    if exact_red.verdict is not None and exact_red.verdict == red_absent:
        agree = False
    if exact_blue.verdict is not None and exact_blue.verdict == blue["blueSAbsent"]:
        agree = False
    rbar = lower_bound_trees(T, S)
    pt, ps = profile(T), profile(S)
    return {
        "family": kind,
        "params": fam.params,
        "N": G.N,
        "sizes": {k: len(v) for k, v in fam.parts.items()},
        "profileT": pt.as_dict(),
        "profileS": ps.as_dict(),
        "redT": not red_absent,
        "blueS": not blue["blueSAbsent"],
        "redProvenance": "oracle",
        "redOracleMinU1": red_oracle_min,
        "blueProvenance": "structural",
        "blueComponents": blue["components"],
        "exactSearch": {"redT": exact_red.status, "blueS": exact_blue.status,
                        "nodes": exact_red.nodes + exact_blue.nodes, "budget": budget},
        "exactAgrees": agree,
        "lowerBoundFormula": rbar,
        "impliedLowerBound": G.N + 1,
        "excess": G.N + 1 - rbar,
        "notes": fam.notes,
    }


def verify_thm13(C: int, r: int, budget: int | None = 200_000) -> dict:
    fam = gen_thm13(C, r)
    u1 = len(fam.parts["U1"])
    m = min_u1_clique_host(fam.T, C)
    cert = _certificate(fam, m, u1, budget, "thm13")
    cert["lemmaBound"] = str(lemma51_bound(C, 2 * r))
    cert["colouring"] = fam.G.to_json()
    cert["T"] = fam.T.to_json()
    cert["S"] = fam.S.to_json()
    return cert


def verify_thm14(C: int, rho: int, r: int, budget: int | None = 200_000) -> dict:
    fam = gen_thm14(C, rho, r)
    u1 = len(fam.parts["U1"])
    m = min_u1_bipartite_host(fam.T, C - 1)
    cert = _certificate(fam, m, u1, budget, "thm14")
    cert["lemmaBound"] = str(lemma52_bound(C, rho, r))
    cert["vacuous"] = fam.notes["vacuous"]
    cert["colouring"] = fam.G.to_json()
    cert["T"] = fam.T.to_json()
    cert["S"] = fam.S.to_json()
    return cert


# ---------------------------------------------------------------------------
# random construction with a dense red graph


def thm62_mu(c) -> Fraction:
    """``(c/10)^(10/c) / 100``, the fixed choice of the small parameter."""
    c = Fraction(c)
    q = c / 10
    e = Fraction(10) / c
    if e.denominator == 1:
        return q ** int(e) / 100
    return Fraction(float(q) ** float(e) / 100).limit_denominator(10 ** 18)


def demo_thm62(n: int, c, seed: int, trials: int, red_prob=None, **expansion_kw) -> dict:
    """Sample ``G(N, 1 - c/10)`` at ``N = floor((4+mu) n)`` and test the two properties used.

    A statistical illustration at desk scale, not a proof.
    """
    from .colouring import check_neighbourhood_expansion, sample_random_colouring

    c = Fraction(c)
    mu = thm62_mu(c)
    N = math.floor((4 + mu) * n)
    t = math.ceil(10 / c)
    size_T = math.ceil((4 - mu) * n)
    p = Fraction(red_prob) if red_prob is not None else 1 - c / 10
    min_deg_needed = (4 + mu) * n - c * n / 2
    rows = []
    master = random.Random(seed)
    for i in range(trials):
        s = master.randrange(2 ** 31)
        G = sample_random_colouring(N, p, s)
        mind = min(G.degree(v, RED) for v in range(N)) if N else 0
        exp = check_neighbourhood_expansion(G, min(t, N), size_T, seed=s, **expansion_kw)
        deg_ok = mind >= min_deg_needed
        rows.append({"trial": i, "seed": s, "minRedDegree": mind, "degreeOk": deg_ok,
                     "expansion": exp.as_dict(), "noExpandingSet": exp.violator is None,
                     "pass": deg_ok and exp.violator is None})
    return {"n": n, "c": str(c), "mu": str(mu), "muFloat": float(mu), "N": N, "t": t, "sizeT": size_T,
            "redProb": str(p), "minDegreeNeeded": str(min_deg_needed), "seed": seed,
            "trials": rows, "passed": sum(r["pass"] for r in rows)}
