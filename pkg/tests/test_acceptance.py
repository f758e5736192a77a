"""The eleven acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line; the lines are collected in the
"acceptance criteria" section of the pytest summary.
"""

import itertools
import random
import time
from fractions import Fraction

from treeramsey.colouring import BLUE, RED, make_construction, params_for, sample_random_colouring, verify_avoids
from treeramsey.counterexamples import (
    gen_thm13, gen_thm14, lemma51_bound, min_u1_bipartite_host, min_u1_clique_host, verify_thm13, verify_thm14,
)
from treeramsey.embedding import contains_tree, verify_embedding
from treeramsey.errors import StepFailed
from treeramsey.extremal import bare_paths_instance, embed_bare_paths, embed_many_leaves, many_leaves_instance
from treeramsey.matching import BipartiteGraph, cascade_partition, max_matching, star_packing
from treeramsey.ramsey import lower_bound_trees, ramsey_exact, star_formula_as_printed, star_formula_edges
from treeramsey.trees import (
    all_trees, decompose_balanced, is_subtree, make_caterpillar, maxdeg_bound, path, profile, random_tree, star,
    verify_paths_leaf_dichotomy,
)
from treeramsey.weights import Digraph, WeightProblem, abc_partition, check_duality, max_weight, qr_report

ALPHAS = (Fraction(3, 2), Fraction(2), Fraction(3))


def test_criterion_01_path_values(criterion):
    got = {}
    times = {}
    for n, m, want in ((4, 4, 5), (5, 4, 6), (5, 5, 6), (6, 6, 8)):
        t = time.perf_counter()
        got[(n, m)] = ramsey_exact(path(n), path(m), want + 2).R
        times[(n, m)] = time.perf_counter() - t
    ok = got == {(4, 4): 5, (5, 4): 6, (5, 5): 6, (6, 6): 8}
    ok = ok and all(times[k] < 1 for k in ((4, 4), (5, 4), (5, 5))) and times[(6, 6)] < 600
    criterion(1, ok, f"R={list(got.values())}, K_8 case {times[(6, 6)]:.2f}s")


def test_criterion_02_star_values(criterion):
    got = [ramsey_exact(star(a), star(b), 8).R for a, b in ((2, 2), (3, 2), (3, 3))]
    # expected divergence: the parity rule for stars, read with vertex counts,
    # gives 4 for K_{1,3} vs K_{1,3}; read with edge counts it matches brute force
    note = (star_formula_as_printed(3, 3), star_formula_edges(3, 3))
    criterion(2, got == [3, 5, 6], f"R={got}; divergence note: parity rule vertex-read {note[0]}, edge-read {note[1]}")


def test_criterion_03_lower_bound_soundness(criterion):
    t = time.perf_counter()
    # single-vertex trees are outside the formula's domain (R(T, K_1) = 1)
    cat = [T for n in range(2, 6) for T in all_trees(n)]
    violations, pairs = [], 0
    for T, S in itertools.product(cat, cat):
        if T.n < S.n:
            continue
        pairs += 1
        r = ramsey_exact(T, S, 12)
        if r.status != "exact" or r.R < lower_bound_trees(T, S):
            violations.append((T.edges, S.edges, r.R))
    secs = time.perf_counter() - t
    criterion(3, not violations and secs < 300, f"{pairs} ordered pairs, {len(violations)} violations, {secs:.1f}s")


def test_criterion_04_construction_avoidance(criterion):
    t = time.perf_counter()
    grid = [(a, b) for a in range(2, 7) for b in range(2, a + 1)]
    bad, swapped, total, direct_fail = [], 0, 0, 0
    for (t1, t2), (s1, s2) in itertools.product(grid, grid):
        T, S = make_caterpillar(t1, t2), make_caterpillar(s1, s2)
        for kind in ("B1", "B2", "B3", "B4"):
            total += 1
            try:
                if T.n >= S.n:
                    col = make_construction(params_for(kind, T, S)).colouring
                else:
                    # the constructions are stated for n >= nu; build for (S, T) and swap
                    # colours, which turns "no red S, no blue T" into "no red T, no blue S"
                    col = make_construction(params_for(kind, S, T)).colouring.swapped()
                    swapped += 1
                    direct = make_construction(params_for(kind, T, S)).colouring
                    rd = verify_avoids(direct, T, S)
                    direct_fail += (rd.red_T, rd.blue_S) != (False, False)
                r = verify_avoids(col, T, S)
                if (r.red_T, r.blue_S) != (False, False):
                    bad.append((kind, t1, t2, s1, s2, r.red_T, r.blue_S))
            except Exception as e:  # zero exceptions is part of the criterion
                bad.append((kind, t1, t2, s1, s2, repr(e)))
    secs = time.perf_counter() - t
    criterion(4, not bad and secs < 120, f"{total} instances ({swapped} with n < nu built in swapped order; "
                         f"{direct_fail} of those fail if built directly), {len(bad)} failures, {secs:.1f}s")


def test_criterion_05_thm13(criterion):
    t = time.perf_counter()
    ok, parts = True, []
    for C, r in ((1, 2), (1, 3)):
        cert = verify_thm13(C, r)
        N = 2 * (3**C + 1) * r + C - 2
        ok &= cert["N"] == N and cert["impliedLowerBound"] == N + 1 == cert["lowerBoundFormula"] + C
        ok &= cert["redT"] is False and cert["blueS"] is False
        parts.append(f"({C},{r}): R >= {cert['impliedLowerBound']}")
    m = min_u1_clique_host(gen_thm13(1, 2).T, 1)
    ok &= m == 8 and m >= lemma51_bound(1, 4)
    secs = time.perf_counter() - t
    criterion(5, ok and secs < 60, f"{', '.join(parts)}; clique oracle {m}; {secs:.1f}s")


def test_criterion_06_thm14(criterion):
    t = time.perf_counter()
    cert = verify_thm14(2, 2, 2)
    fam = gen_thm14(2, 2, 2)
    nu = fam.notes["nu"]
    m = min_u1_bipartite_host(fam.T, 1)
    ok = nu == 30 and cert["impliedLowerBound"] == 60 == 2 * nu + 2 - 2
    ok = ok and cert["redT"] is False and cert["blueS"] is False and m >= 30
    secs = time.perf_counter() - t
    criterion(6, ok and secs < 600, f"R >= {cert['impliedLowerBound']}, nu={nu}, bipartite oracle {m}; {secs:.1f}s")


def test_criterion_07_weight_invariants(criterion):
    t = time.perf_counter()
    bad, strict_equal = [], 0
    for seed in range(500):
        r = random.Random(seed)
        n = r.randint(1, 10)
        p = r.random()
        g = Digraph(n, tuple((u, v) for u in range(n) for v in range(n) if u != v and r.random() < p))
        for a in ALPHAS:
            prob = WeightProblem(g, a)
            sol = max_weight(prob)
            if check_duality(prob, sol):
                bad.append(("duality", seed, a))
            part = abc_partition(prob, sol, strict=False)
            c = part.checks
            if not (c["ABC:5"] and c["ABC:6"] and c["ABC:8-weak"]):
                bad.append(("abc", seed, a))
            if not c["ABC:8"]:
                # the strict form fails only with equality |A| = n - (1 + 1/alpha) wMax,
                # which ABC:6 allows only when B is empty
                strict_equal += 1
                if len(part.A) != n - (1 + 1 / a) * part.wmax or part.B:
                    bad.append(("abc8", seed, a))
    for a in ALPHAS:
        for seed in range(200):
            r = random.Random(seed)
            N = r.randint(2, 9)
            col = sample_random_colouring(N, Fraction(r.randint(0, 10), 10), seed)
            rep = qr_report(col, r.randrange(N), r.choice([RED, BLUE]), a)
            if not (rep.checks["QR:1"] and rep.checks["QR:2"] and rep.checks["QR:3"]):
                bad.append(("qr", seed, a))
    secs = time.perf_counter() - t
    criterion(7, not bad and secs < 300,
              f"1500 LPs + 600 QR reports, {len(bad)} violations "
              f"(strict ABC:8 at equality with B empty {strict_equal} times, weak form asserted); {secs:.1f}s")


def _brute_matching(g):
    best = 0
    for k in range(min(g.a, g.b), 0, -1):
        for xs in itertools.combinations(range(g.a), k):
            for ys in itertools.permutations(range(g.b), k):
                if all((x, y) in g.edge_set for x, y in zip(xs, ys)):
                    return k
    return best


def test_criterion_08_matching(criterion):
    t = time.perf_counter()
    bad = []
    for seed in range(300):
        r = random.Random(seed)
        a, b = r.randint(0, 7), r.randint(0, 7)
        p = r.random()
        g = BipartiteGraph(a, b, tuple((x, y) for x in range(a) for y in range(b) if r.random() < p))
        m = max_matching(g)
        if m.size != _brute_matching(g):
            bad.append(("matching", seed))
        demands = [r.randint(0, 3) for _ in range(a)]
        hall = all(len(g.neighbourhood(I)) >= sum(demands[x] for x in I)
                   for k in range(1, a + 1) for I in itertools.combinations(range(a), k))
        if star_packing(g, demands).ok != hall:
            bad.append(("star", seed))
        cp = cascade_partition(g, m)
        E = g.edge_set
        for L, R in ((cp.a_prime | cp.a_minus, cp.b_prime | cp.b_minus | cp.b_bar),
                     (cp.a_prime | cp.a_minus | cp.a_bar, cp.b_prime | cp.b_minus)):
            if any((x, y) in E for x in L for y in R):
                bad.append(("cascade", seed))
    secs = time.perf_counter() - t
    criterion(8, not bad and secs < 60, f"300 graphs, {len(bad)} violations; {secs:.1f}s")


def test_criterion_09_tree_lemmas(criterion):
    t = time.perf_counter()
    bad = []
    r = random.Random(9)
    for i in range(500):
        T = random_tree(r.randint(2, 40), r)
        p = profile(T)
        if p.leaf_count < p.t1 - p.t2 + 1:
            bad.append(("leaves", i))
        k, ell = r.randint(1, 5), r.randint(1, T.n)
        try:
            w = verify_paths_leaf_dichotomy(T, k, ell)
            if len(w) < w.required:
                bad.append(("dichotomy", i))
        except AssertionError:
            bad.append(("dichotomy", i))
        d = decompose_balanced(T)
        lo, hi = -(-T.n // 3), -(-2 * T.n // 3)
        sizes = (len(d.part1), len(d.part2))
        if d.part1 & d.part2 != {d.shared} or d.part1 | d.part2 != set(range(T.n)):
            bad.append(("balanced-cover", i))
        elif not (is_subtree(T, d.part1) and is_subtree(T, d.part2)):
            bad.append(("balanced-connected", i))
        elif not all(lo <= s <= hi for s in sizes):
            bad.append(("balanced-window", i, T.n, sizes))
    for t1 in range(1, 31):
        for t2 in range(1, t1 + 1):
            p = profile(make_caterpillar(t1, t2))
            if (p.t1, p.t2) != (t1, t2) or p.max_degree > maxdeg_bound(t1, t2):
                bad.append(("caterpillar", t1, t2))
    secs = time.perf_counter() - t
    criterion(9, not bad and secs < 60, f"500 trees + 465 caterpillars, {len(bad)} violations; {secs:.1f}s")


def test_criterion_10_embedders(criterion):
    t = time.perf_counter()
    stats, untagged, unverified = {}, [], []
    for name, make, embed in (("bare-paths", bare_paths_instance, embed_bare_paths),
                              ("many-leaves", many_leaves_instance, embed_many_leaves)):
        wins = 0
        for seed in range(100):
            n = random.Random(seed).randint(200, 600)
            inst = make(n, seed, margin=2)
            try:
                e = embed(inst.rows, inst.tree, inst.anchor, inst.cfg)
            except StepFailed as err:
                if not err.stage:
                    untagged.append((name, seed))
                continue
            if verify_embedding(inst.rows, inst.tree, e.mapping) and e.mapping[inst.anchor[0]] == inst.anchor[1]:
                wins += 1
            else:
                unverified.append((name, seed))
        stats[name] = wins
    secs = time.perf_counter() - t
    ok = all(w >= 95 for w in stats.values()) and not untagged and not unverified and secs < 600
    criterion(10, ok, f"successes {stats} of 100 each, {len(unverified)} unverified, "
                      f"{len(untagged)} untagged failures; {secs:.1f}s")


def _perm_contains(rows, T):
    N = len(rows)
    return any(all(rows[perm[u]] >> perm[v] & 1 for u, v in T.edges)
               for perm in itertools.permutations(range(N), T.n))


def test_criterion_11_search_oracle(criterion):
    t = time.perf_counter()
    bad = []
    for seed in range(500):
        r = random.Random(seed)
        N = r.randint(1, 7)
        p = r.random()
        rows = [0] * N
        for u, v in itertools.combinations(range(N), 2):
            if r.random() < p:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
        T = random_tree(r.randint(1, 6), r)
        res = contains_tree(rows, T)
        if res.verdict != _perm_contains(rows, T) or (res.found and not verify_embedding(rows, T, res.mapping)):
            bad.append(seed)
    secs = time.perf_counter() - t
    criterion(11, not bad and secs < 60, f"500 pairs, {len(bad)} disagreements; {secs:.1f}s")
